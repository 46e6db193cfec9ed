//! Bounded brute-force search for a formula with the fewest `1` leaves.
//!
//! Level `L` of the table holds every value whose cheapest formula uses
//! exactly `L` leaves, with one representative formula each. A value's
//! cheapest formula only ever combines cheapest formulas of its operands, and
//! no operand exceeds its result (all values are positive and the trivial
//! `g*1`, `g^1`, `1^g` shapes are excluded), so values above the target are
//! pruned.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::expr::{Expr, Natural};

pub const DEFAULT_ENTRY_CAP: usize = 1 << 20;

/// Shortest formula for `n` within `max_leaves` leaves, using the default
/// table cap.
pub fn shortest_expr(n: &Natural, max_leaves: usize) -> Result<Option<Expr>> {
    shortest_expr_capped(n, max_leaves, DEFAULT_ENTRY_CAP)
}

pub fn shortest_expr_capped(n: &Natural, max_leaves: usize, entry_cap: usize) -> Result<Option<Expr>> {
    let target = n
        .to_u64()
        .filter(|&t| t >= 1)
        .ok_or_else(|| Error::Domain(format!("shortest_expr needs 1 <= n < 2^64, got {n}")))?;
    if max_leaves == 0 {
        return Ok(None);
    }

    let mut levels: Vec<Vec<(u64, Expr)>> = vec![Vec::new(), vec![(1, Expr::one())]];
    let mut best: HashMap<u64, usize> = HashMap::from([(1, 1)]);
    if target == 1 {
        return Ok(Some(Expr::one()));
    }
    let mut entries = 1usize;

    for leaves in 2..=max_leaves {
        let mut level = Vec::new();
        for op in [Op::Power, Op::Product, Op::Sum] {
            for left in 1..leaves {
                let right = leaves - left;
                if op.commutes() && left > right {
                    continue;
                }
                for (a, ea) in &levels[left] {
                    for (b, eb) in &levels[right] {
                        let Some(v) = op.apply(*a, *b).filter(|&v| v <= target) else {
                            continue;
                        };
                        if best.contains_key(&v) {
                            continue;
                        }
                        best.insert(v, leaves);
                        level.push((v, op.build(*a, ea, *b, eb)));
                        entries += 1;
                        if entries > entry_cap {
                            return Err(Error::ResourceLimit(format!(
                                "shortest_expr table exceeds {entry_cap} entries"
                            )));
                        }
                    }
                }
            }
        }
        if let Some((_, e)) = level.iter().find(|(v, _)| *v == target) {
            return Ok(Some(e.clone()));
        }
        level.sort_unstable_by_key(|(v, _)| *v);
        levels.push(level);
    }
    Ok(None)
}

#[derive(Clone, Copy)]
enum Op {
    Power,
    Product,
    Sum,
}

impl Op {
    fn commutes(self) -> bool {
        !matches!(self, Op::Power)
    }

    fn apply(self, a: u64, b: u64) -> Option<u64> {
        match self {
            Op::Sum => a.checked_add(b),
            Op::Product if a > 1 && b > 1 => a.checked_mul(b),
            Op::Power if a > 1 && b > 1 => a.checked_pow(u32::try_from(b).ok()?),
            _ => None,
        }
    }

    fn build(self, a: u64, ea: &Expr, b: u64, eb: &Expr) -> Expr {
        // larger operand first for the commutative operators
        let (hi, lo) = if a >= b { (ea, eb) } else { (eb, ea) };
        match self {
            Op::Power => Expr::power(ea.clone(), eb.clone()),
            Op::Product => Expr::product([hi.clone(), lo.clone()]),
            Op::Sum => Expr::sum([hi.clone(), lo.clone()]),
        }
    }
}
