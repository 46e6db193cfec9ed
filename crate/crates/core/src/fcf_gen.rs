//! Batch generation of FCF encodings by the subset-sum set recurrence
//!
//! ```text
//! N_0     = {1}
//! N_{k+1} = { sum(S) : S a nonempty subset of {1} ∪ x^N_k }
//! ```
//!
//! With the basis `[1, x^1, x^2, ..., x^m]` in ascending value order, the
//! subset selected by the binary digits of `i` sums to `i`. Counting `i`
//! upward therefore emits `N_{k+1}` already sorted, and each sum is the
//! highest basis term prepended to the sum for `i` minus that term, which was
//! emitted earlier.

use crate::canonical::power_of_x;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::meter::{IterationStats, Meter, Tally};
use crate::set::ExprSet;

/// Default cap on the number of expressions one step may produce.
pub const DEFAULT_OUTPUT_CAP: u64 = 1 << 24;

/// One level `N_k` of the recurrence: FCF encodings of `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcfLevel {
    index: usize,
    expressions: ExprSet,
}

impl FcfLevel {
    /// `N_0 = {1}`.
    pub fn base() -> Self {
        let mut expressions = ExprSet::new();
        expressions.push(1, Expr::one());
        FcfLevel { index: 0, expressions }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn expressions(&self) -> &ExprSet {
        &self.expressions
    }

    pub fn into_expressions(self) -> ExprSet {
        self.expressions
    }

    pub fn len(&self) -> usize {
        self.expressions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expressions.is_empty()
    }

    /// `|N_{k+1}| = 2^(|N_k| + 1) - 1`, or `None` past `u64`.
    pub fn next_len(&self) -> Option<u64> {
        let bits = self.len() as u32 + 1;
        1u64.checked_shl(bits).filter(|_| bits < 64).map(|p| p - 1)
    }
}

pub fn fcf_step(level: &FcfLevel) -> Result<FcfLevel> {
    fcf_step_capped(level, DEFAULT_OUTPUT_CAP)
}

pub fn fcf_step_capped(level: &FcfLevel, output_cap: u64) -> Result<FcfLevel> {
    let count = level
        .next_len()
        .filter(|&n| n <= output_cap)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "N_{} would hold 2^{} - 1 expressions, over the cap of {output_cap}",
                level.index + 1,
                level.len() + 1
            ))
        })?;
    Ok(FcfLevel {
        index: level.index + 1,
        expressions: subset_sums(level, count),
    })
}

/// The first `count` elements of the next level, in value order.
fn subset_sums(level: &FcfLevel, count: u64) -> ExprSet {
    let mut basis: Vec<Expr> = vec![Expr::one()];
    let mut out = ExprSet::new();
    let mut sums: Vec<Expr> = Vec::with_capacity(count as usize);
    for i in 1..=count {
        let top = 63 - i.leading_zeros() as usize;
        while basis.len() <= top {
            let exponent = level
                .expressions
                .get(basis.len() as u64)
                .expect("basis exponent within the level")
                .clone();
            basis.push(power_of_x(exponent));
        }
        let rest = i - (1 << top);
        let e = if rest == 0 {
            basis[top].clone()
        } else {
            Expr::sum([basis[top].clone(), sums[rest as usize - 1].clone()])
        };
        sums.push(e.clone());
        out.push(i, e);
    }
    out
}

/// Result of [`fcf_generate`].
#[derive(Debug, Clone)]
pub struct FcfGeneration {
    /// FCF encodings of exactly `1..=target`.
    pub expressions: ExprSet,
    pub iterations: usize,
    pub per_iteration: Vec<IterationStats>,
}

impl FcfGeneration {
    pub fn tally(&self) -> Tally {
        self.per_iteration.iter().fold(Tally::default(), |acc, s| acc + s.tally)
    }
}

/// FCF encodings of `1..=target`, iterating until the level covers the target.
/// The final iteration only builds the part of its level up to `target`.
pub fn fcf_generate(target: u64) -> Result<FcfGeneration> {
    fcf_generate_capped(target, DEFAULT_OUTPUT_CAP)
}

pub fn fcf_generate_capped(target: u64, output_cap: u64) -> Result<FcfGeneration> {
    if target == 0 {
        return Err(Error::Domain("target must be at least 1".into()));
    }
    if target > output_cap {
        return Err(Error::ResourceLimit(format!(
            "{target} expressions requested, over the cap of {output_cap}"
        )));
    }
    let mut level = FcfLevel::base();
    let mut per_iteration = Vec::new();
    while (level.len() as u64) < target {
        let meter = Meter::start();
        let count = level.next_len().map_or(target, |n| n.min(target));
        level = FcfLevel {
            index: level.index + 1,
            expressions: subset_sums(&level, count),
        };
        per_iteration.push(IterationStats {
            iteration: level.index,
            coverage: count,
            produced: count,
            tally: meter.read(),
        });
    }
    Ok(FcfGeneration {
        iterations: level.index,
        expressions: level.into_expressions(),
        per_iteration,
    })
}
