//! The Zeta recursion: a set recurrence over products of known prime powers
//! that discovers new primes as gaps of size two, producing SCF encodings as a
//! by-product.
//!
//! State after iteration `k` is a pair `(P_k, Ň_k)` of prime encodings and
//! integer encodings, starting from `P_0 = {x}`, `Ň_0 = {1, x}`.
//!
//! * The basic step forms every product over `p ∈ P_k` of a factor from
//!   `{1} ∪ p^Ň_k`, bounded by a caller-supplied value cap.
//! * The improved step only forms the products falling in the dyadic window
//!   `(2^(k+1), 2^(k+2)]`, grouped by their largest prime `q`, so `Ň_{k+1}`
//!   covers exactly `1..=2^(k+2)`.
//!
//! In both, a missing value `v+1` between present values `v` and `v+2` is
//! adjoined as the prime `(e_v + 1)` where `e_v` encodes `v`, after checking
//! that it really is prime.

use crate::arith::is_prime_u64;
use crate::canonical::{assemble_scf, odd_prime_base};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::meter::{self, IterationStats, Meter};
use crate::set::{Entry, ExprSet};

/// Default cap on the number of products one basic step may retain.
pub const DEFAULT_ENTRY_CAP: usize = 1 << 24;

/// Default largest `bits` accepted by [`sift_primes`].
pub const DEFAULT_MAX_SIFT_BITS: u32 = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaState {
    k: usize,
    primes: ExprSet,
    naturals: ExprSet,
    adjoined: Vec<u64>,
}

impl ZetaState {
    /// `P_0 = {x}`, `Ň_0 = {1, x}`.
    pub fn initial() -> Self {
        let mut primes = ExprSet::new();
        primes.push(2, Expr::x());
        let mut naturals = ExprSet::new();
        naturals.push(1, Expr::one());
        naturals.push(2, Expr::x());
        ZetaState {
            k: 0,
            primes,
            naturals,
            adjoined: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `P_k`, ascending by value.
    pub fn primes(&self) -> &ExprSet {
        &self.primes
    }

    /// `Ň_k`, ascending by value.
    pub fn naturals(&self) -> &ExprSet {
        &self.naturals
    }

    /// Primes adjoined by the step that produced this state.
    pub fn adjoined(&self) -> &[u64] {
        &self.adjoined
    }

    /// `n` such that `Ň_k = {1..=n}`, if the values are contiguous.
    pub fn coverage(&self) -> Option<u64> {
        self.naturals.is_contiguous().then(|| self.naturals.len() as u64)
    }

    /// SCF product for a list of `(prime, exponent)` values, all of which
    /// must be present in `P_k` and `Ň_k` respectively.
    fn assemble(&self, factors: &[(u64, u64)]) -> Expr {
        let mut sorted = factors.to_vec();
        sorted.sort_unstable();
        let mut two = None;
        let mut odd = Vec::with_capacity(sorted.len());
        for (p, e) in sorted {
            let exponent = self.naturals.get(e).expect("exponent in Ň_k").clone();
            if p == 2 {
                two = Some(exponent);
            } else {
                odd.push((self.primes.get(p).expect("prime in P_k").clone(), exponent));
            }
        }
        assemble_scf(&odd, two)
    }

    /// Completes a product set by adjoining gap-of-two midpoints, producing
    /// the next state.
    fn complete(&self, products: Vec<Entry>) -> Result<ZetaState> {
        let mut naturals = ExprSet::new();
        let mut primes = self.primes.entries().to_vec();
        let mut adjoined = Vec::new();
        let mut previous: Option<&Entry> = None;
        for entry in &products {
            if let Some(prev) = previous {
                if entry.value == prev.value + 2 {
                    let candidate = prev.value + 1;
                    if !is_prime_u64(candidate) {
                        return Err(Error::Soundness(format!(
                            "gap between {} and {} adjoins composite {candidate}",
                            prev.value, entry.value
                        )));
                    }
                    let e = odd_prime_base(prev.expr.clone());
                    naturals.push(candidate, e.clone());
                    primes.push(Entry { value: candidate, expr: e });
                    adjoined.push(candidate);
                }
            }
            naturals.push(entry.value, entry.expr.clone());
            previous = Some(entry);
        }
        Ok(ZetaState {
            k: self.k + 1,
            primes: ExprSet::from_unsorted(primes).expect("adjoined values were absent"),
            naturals,
            adjoined,
        })
    }

    /// `(2^(k+1), 2^(k+2)]` bounds for the improved step, checking that
    /// `Ň_k = {1..=2^(k+1)}`.
    fn window(&self) -> Result<(u64, u64)> {
        let lower = 1u64
            .checked_shl(self.k as u32 + 1)
            .filter(|_| self.k < 62)
            .ok_or_else(|| Error::ResourceLimit(format!("iteration {} is out of range", self.k)))?;
        if self.coverage() != Some(lower) {
            return Err(Error::Domain(format!(
                "improved recursion needs Ň_{} = {{1..{lower}}}",
                self.k
            )));
        }
        Ok((lower, lower * 2))
    }
}

pub fn zeta_step_basic(state: &ZetaState, value_cap: u64) -> Result<ZetaState> {
    zeta_step_basic_capped(state, value_cap, DEFAULT_ENTRY_CAP)
}

/// One iteration of the basic recursion, keeping products `<= value_cap`.
pub fn zeta_step_basic_capped(state: &ZetaState, value_cap: u64, entry_cap: usize) -> Result<ZetaState> {
    let primes: Vec<u64> = state.primes.values().collect();
    let exponents: Vec<u64> = state.naturals.values().collect();
    let mut found: Vec<(u64, Vec<(u64, u64)>)> = Vec::new();
    let mut factors = Vec::new();
    let mut candidates = 0u64;

    fn walk(
        i: usize,
        value: u64,
        primes: &[u64],
        exponents: &[u64],
        cap: u64,
        factors: &mut Vec<(u64, u64)>,
        found: &mut Vec<(u64, Vec<(u64, u64)>)>,
        candidates: &mut u64,
        entry_cap: usize,
    ) -> Result<()> {
        if i == primes.len() {
            if found.len() >= entry_cap {
                return Err(Error::ResourceLimit(format!(
                    "basic Zeta step exceeds {entry_cap} products"
                )));
            }
            found.push((value, factors.clone()));
            return Ok(());
        }
        walk(i + 1, value, primes, exponents, cap, factors, found, candidates, entry_cap)?;
        let p = primes[i];
        for &e in exponents {
            *candidates += 1;
            let Some(next) = u32::try_from(e)
                .ok()
                .and_then(|e| p.checked_pow(e))
                .and_then(|pe| value.checked_mul(pe))
                .filter(|&v| v <= cap)
            else {
                break;
            };
            factors.push((p, e));
            walk(i + 1, next, primes, exponents, cap, factors, found, candidates, entry_cap)?;
            factors.pop();
        }
        Ok(())
    }

    walk(0, 1, &primes, &exponents, value_cap, &mut factors, &mut found, &mut candidates, entry_cap)?;
    meter::record_assemblies(candidates);

    let products: Vec<Entry> = found
        .into_iter()
        .map(|(value, fs)| Entry {
            value,
            expr: state.assemble(&fs),
        })
        .collect();
    let products = ExprSet::from_unsorted(products).expect("prime-exponent vectors are unique");
    state.complete(products.entries().to_vec())
}

/// `(value, factors)` pairs of one window, found by depth-first search over
/// primes below `q` in descending order.
fn window_products(qi: usize, primes: &[u64], lower: u64, upper: u64, candidates: &mut u64) -> Vec<(u64, Vec<(u64, u64)>)> {
    fn walk(
        value: u64,
        below: usize,
        primes: &[u64],
        lower: u64,
        upper: u64,
        factors: &mut Vec<(u64, u64)>,
        out: &mut Vec<(u64, Vec<(u64, u64)>)>,
        candidates: &mut u64,
    ) {
        if value > lower {
            out.push((value, factors.clone()));
        }
        for j in (0..below).rev() {
            let p = primes[j];
            let mut next = value;
            // exponents range over Ň_k = 1..=lower
            for e in 1..=lower {
                *candidates += 1;
                next = match next.checked_mul(p) {
                    Some(v) if v <= upper => v,
                    _ => break,
                };
                factors.push((p, e));
                walk(next, j, primes, lower, upper, factors, out, candidates);
                factors.pop();
            }
        }
    }

    let q = primes[qi];
    let mut out = Vec::new();
    let mut factors = Vec::new();
    let mut qn = 1u64;
    for n in 1..=lower {
        *candidates += 1;
        qn = match qn.checked_mul(q) {
            Some(v) if v <= upper => v,
            _ => break,
        };
        factors.push((q, n));
        walk(qn, qi, primes, lower, upper, &mut factors, &mut out, candidates);
        factors.pop();
    }
    out
}

/// Products in `(2^(k+1), 2^(k+2)]` whose largest prime factor is `q`.
pub fn zeta_window(q: &Expr, state: &ZetaState) -> Result<ExprSet> {
    let (lower, upper) = state.window()?;
    let q_value = q.evaluate_u64()?;
    let qi = state
        .primes
        .entries()
        .iter()
        .position(|e| e.value == q_value && &e.expr == q)
        .ok_or_else(|| Error::Domain(format!("{q} is not in P_{}", state.k)))?;
    let primes: Vec<u64> = state.primes.values().collect();
    let mut candidates = 0;
    let found = window_products(qi, &primes, lower, upper, &mut candidates);
    meter::record_assemblies(candidates);
    let entries = found
        .into_iter()
        .map(|(value, fs)| Entry {
            value,
            expr: state.assemble(&fs),
        })
        .collect();
    Ok(ExprSet::from_unsorted(entries).expect("windows hold distinct values"))
}

/// One iteration of the improved recursion.
pub fn zeta_step_improved(state: &ZetaState) -> Result<ZetaState> {
    let (lower, upper) = state.window()?;
    let primes: Vec<u64> = state.primes.values().collect();
    let mut candidates = 0;
    let mut window: Vec<Entry> = Vec::new();
    for qi in 0..primes.len() {
        for (value, fs) in window_products(qi, &primes, lower, upper, &mut candidates) {
            window.push(Entry {
                value,
                expr: state.assemble(&fs),
            });
        }
    }
    meter::record_assemblies(candidates);
    window.sort_unstable_by_key(|e| e.value);

    let mut products = state.naturals.entries().to_vec();
    products.extend(window);
    let next = state.complete(products)?;
    if next.coverage() != Some(upper) {
        let missing = (1..=upper).find(|&v| !next.naturals.contains_value(v));
        return Err(Error::Completeness(format!(
            "Ň_{} does not cover 1..{upper} (first missing value: {missing:?})",
            next.k
        )));
    }
    Ok(next)
}

/// Result of [`sift_primes`].
#[derive(Debug, Clone)]
pub struct Sieve {
    pub primes: Vec<u64>,
    pub per_iteration: Vec<IterationStats>,
    pub state: ZetaState,
}

/// Primes up to `2^bits` by improved iterations until `k + 1 = bits`.
pub fn sift_primes(bits: u32) -> Result<Sieve> {
    sift_primes_capped(bits, DEFAULT_MAX_SIFT_BITS)
}

pub fn sift_primes_capped(bits: u32, max_bits: u32) -> Result<Sieve> {
    if bits == 0 {
        return Err(Error::Domain("bits must be at least 1".into()));
    }
    if bits > max_bits {
        return Err(Error::ResourceLimit(format!("bits {bits} exceeds the cap of {max_bits}")));
    }
    let (state, per_iteration) = improved_iterations(bits as usize - 1)?;
    Ok(Sieve {
        primes: state.primes.values().collect(),
        per_iteration,
        state,
    })
}

/// Runs `iterations` improved steps from the initial state.
pub fn improved_iterations(iterations: usize) -> Result<(ZetaState, Vec<IterationStats>)> {
    let mut state = ZetaState::initial();
    let mut stats = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let meter = Meter::start();
        let next = zeta_step_improved(&state)?;
        stats.push(IterationStats {
            iteration: next.k,
            coverage: next.naturals.len() as u64,
            produced: (next.naturals.len() - state.naturals.len()) as u64,
            tally: meter.read(),
        });
        state = next;
    }
    Ok((state, stats))
}

/// A positive rational as a pair of SCF encodings with coprime values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    pub numerator: Expr,
    pub denominator: Expr,
    pub numerator_value: u64,
    pub denominator_value: u64,
}

pub fn rationals(state: &ZetaState, value_cap: u64) -> Result<Vec<RationalExpr>> {
    rationals_capped(state, value_cap, DEFAULT_ENTRY_CAP)
}

/// Products over `p ∈ P_k` of a factor from `(1/p)^Ň_k ∪ {1} ∪ p^Ň_k` whose
/// numerator and denominator both stay within `value_cap`, sorted by
/// denominator then numerator.
pub fn rationals_capped(state: &ZetaState, value_cap: u64, entry_cap: usize) -> Result<Vec<RationalExpr>> {
    struct Walk<'a> {
        primes: Vec<u64>,
        exponents: Vec<u64>,
        cap: u64,
        entry_cap: usize,
        up: Vec<(u64, u64)>,
        down: Vec<(u64, u64)>,
        out: Vec<RationalExpr>,
        state: &'a ZetaState,
        candidates: u64,
    }

    impl Walk<'_> {
        fn run(&mut self, i: usize, num: u64, den: u64) -> Result<()> {
            if i == self.primes.len() {
                if self.out.len() >= self.entry_cap {
                    return Err(Error::ResourceLimit(format!(
                        "rational enumeration exceeds {} entries",
                        self.entry_cap
                    )));
                }
                self.out.push(RationalExpr {
                    numerator: self.state.assemble(&self.up),
                    denominator: self.state.assemble(&self.down),
                    numerator_value: num,
                    denominator_value: den,
                });
                return Ok(());
            }
            self.run(i + 1, num, den)?;
            let p = self.primes[i];
            for upward in [true, false] {
                for idx in 0..self.exponents.len() {
                    let e = self.exponents[idx];
                    self.candidates += 1;
                    let base = if upward { num } else { den };
                    let Some(v) = u32::try_from(e)
                        .ok()
                        .and_then(|e| p.checked_pow(e))
                        .and_then(|pe| base.checked_mul(pe))
                        .filter(|&v| v <= self.cap)
                    else {
                        break;
                    };
                    if upward {
                        self.up.push((p, e));
                        self.run(i + 1, v, den)?;
                        self.up.pop();
                    } else {
                        self.down.push((p, e));
                        self.run(i + 1, num, v)?;
                        self.down.pop();
                    }
                }
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        primes: state.primes.values().collect(),
        exponents: state.naturals.values().collect(),
        cap: value_cap,
        entry_cap,
        up: Vec::new(),
        down: Vec::new(),
        out: Vec::new(),
        state,
        candidates: 0,
    };
    if value_cap == 0 {
        return Ok(Vec::new());
    }
    walk.run(0, 1, 1)?;
    meter::record_assemblies(walk.candidates);
    let mut out = walk.out;
    out.sort_unstable_by_key(|r| (r.denominator_value, r.numerator_value));
    Ok(out)
}
