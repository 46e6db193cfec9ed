//! The two canonical encodings of positive integers and their checkers.
//!
//! FCF writes `n` as a sum of powers of `x` with exponents themselves in FCF,
//! terms in strictly descending exponent order and a trailing `1` when `n` is
//! odd. The term for exponent value 1 is the bare `x`.
//!
//! SCF writes `n = 2^g * prod p_k^g_k` as the product of the odd prime
//! factors `(SCF(p_k - 1) + 1)^SCF(g_k)` in ascending order of `p_k`, followed
//! by `x^SCF(g)` when `g >= 1`. Exponents equal to 1 are dropped, so `2` is `x`
//! and `6` is `(x+1)*x`.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};
use crate::expr::{Expr, Kind, Natural};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalForm {
    Fcf,
    Scf,
}

impl std::str::FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fcf" => Ok(CanonicalForm::Fcf),
            "scf" => Ok(CanonicalForm::Scf),
            other => Err(Error::Domain(format!("unknown canonical form `{other}`"))),
        }
    }
}

impl CanonicalForm {
    pub fn encode(self, n: &Natural) -> Result<Expr> {
        match self {
            CanonicalForm::Fcf => encode_fcf(n),
            CanonicalForm::Scf => encode_scf(n),
        }
    }

    pub fn check(self, e: &Expr) -> Result<bool> {
        match self {
            CanonicalForm::Fcf => Ok(is_fcf(e)),
            CanonicalForm::Scf => is_scf(e),
        }
    }
}

/// `x^f` with the `x^1 = x` rewrite applied by the smart constructor.
pub fn power_of_x(exponent: Expr) -> Expr {
    Expr::power(Expr::x(), exponent)
}

pub fn encode_fcf(n: &Natural) -> Result<Expr> {
    if n.is_zero() {
        return Err(Error::Domain("0 has no formula encoding".into()));
    }
    Ok(fcf(n))
}

pub fn encode_fcf_u64(n: u64) -> Result<Expr> {
    encode_fcf(&Natural::from(n))
}

fn fcf(n: &Natural) -> Expr {
    if n.is_one() {
        return Expr::one();
    }
    let mut terms = Vec::new();
    for position in (1..n.bits()).rev() {
        if n.bit(position) {
            terms.push(power_of_x(fcf(&Natural::from(position))));
        }
    }
    if n.bit(0) {
        terms.push(Expr::one());
    }
    Expr::sum(terms)
}

/// Exponents of the power-of-`x` terms of a candidate FCF sum term, or `None`
/// if `e` is not a power of `x`. `x` itself has exponent `1`.
fn x_exponent(e: &Expr) -> Option<Expr> {
    if e.is_x() {
        return Some(Expr::one());
    }
    match e.kind() {
        Kind::Power(b, f) if b.is_x() => Some(f.clone()),
        _ => None,
    }
}

/// Splits an FCF expression into its descending exponent list and whether it
/// carries a trailing `1`.
fn fcf_terms(e: &Expr) -> (Vec<Expr>, bool) {
    if e.is_one() {
        return (Vec::new(), true);
    }
    match e.kind() {
        Kind::Sum(cs) if !e.is_x() => {
            let (terms, tail) = match cs.split_last() {
                Some((last, rest)) if last.is_one() => (rest, true),
                _ => (&cs[..], false),
            };
            (terms.iter().filter_map(x_exponent).collect(), tail)
        }
        _ => (x_exponent(e).into_iter().collect(), false),
    }
}

/// Orders two FCF expressions by value without evaluating them.
pub fn fcf_cmp(a: &Expr, b: &Expr) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (ta, oa) = fcf_terms(a);
    let (tb, ob) = fcf_terms(b);
    for i in 0.. {
        match (ta.get(i), tb.get(i)) {
            (Some(x), Some(y)) => match fcf_cmp(x, y) {
                Ordering::Equal => continue,
                other => return other,
            },
            // any further power term is at least 2, more than a trailing 1
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (None, None) => break,
        }
    }
    oa.cmp(&ob)
}

pub fn is_fcf(e: &Expr) -> bool {
    if e.is_one() || e.is_x() {
        return true;
    }
    match e.kind() {
        Kind::Power(b, f) => b.is_x() && is_fcf(f),
        Kind::Sum(cs) => {
            let (last, rest) = cs.split_last().expect("sums have children");
            let terms = if last.is_one() { rest } else { &cs[..] };
            let mut previous: Option<Expr> = None;
            for t in terms {
                let Some(exp) = x_exponent(t) else {
                    return false;
                };
                if !is_fcf(&exp) {
                    return false;
                }
                if let Some(p) = &previous {
                    if fcf_cmp(p, &exp) != Ordering::Greater {
                        return false;
                    }
                }
                previous = Some(exp);
            }
            !terms.is_empty()
        }
        _ => false,
    }
}

pub fn encode_scf(n: &Natural) -> Result<Expr> {
    if n.is_zero() {
        return Err(Error::Domain("0 has no formula encoding".into()));
    }
    let f = arith::factor(n)?;
    Ok(scf_from_factorization(&f))
}

pub fn encode_scf_u64(n: u64) -> Result<Expr> {
    encode_scf(&Natural::from(n))
}

fn scf_u64(n: u64) -> Expr {
    scf_from_factorization(&arith::factor_u64(n))
}

fn scf_from_factorization(f: &Factorization) -> Expr {
    let (two, odd) = f.split_two();
    let odd: Vec<(Expr, Expr)> = odd
        .iter()
        .map(|pp| (odd_prime_base(scf_u64(pp.prime - 1)), scf_u64(pp.exponent as u64)))
        .collect();
    let two = (two > 0).then(|| scf_u64(two as u64));
    assemble_scf(&odd, two)
}

/// The SCF base `(f + 1)` for an odd prime with `f = SCF(p - 1)`.
pub fn odd_prime_base(predecessor: Expr) -> Expr {
    Expr::sum([predecessor, Expr::one()])
}

/// Assembles an SCF product from odd prime factors `(base, exponent)` given in
/// ascending prime order and an optional exponent of 2.
pub fn assemble_scf(odd: &[(Expr, Expr)], two_exponent: Option<Expr>) -> Expr {
    let mut factors: Vec<Expr> = odd
        .iter()
        .map(|(b, e)| Expr::power(b.clone(), e.clone()))
        .collect();
    if let Some(g) = two_exponent {
        factors.push(power_of_x(g));
    }
    if factors.is_empty() {
        return Expr::one();
    }
    Expr::product(factors)
}

/// Checks membership in SCF. Fails with [`Error::ResourceLimit`] when a base
/// value is too large for the primality test.
pub fn is_scf(e: &Expr) -> Result<bool> {
    if e.is_one() || e.is_x() {
        return Ok(true);
    }
    let factors: &[Expr] = match e.kind() {
        Kind::Product(cs) => cs,
        _ => std::slice::from_ref(e),
    };
    let mut previous_prime = 2u64;
    let mut seen_two = false;
    for factor in factors {
        if seen_two {
            // the power of two comes last
            return Ok(false);
        }
        let (base, exponent) = match factor.kind() {
            Kind::Power(b, g) => (b, Some(g)),
            _ => (factor, None),
        };
        if let Some(g) = exponent {
            if !is_scf(g)? {
                return Ok(false);
            }
        }
        if base.is_x() {
            seen_two = true;
            continue;
        }
        let predecessor = match base.kind() {
            Kind::Sum(cs) if cs.len() == 2 && cs[1].is_one() => &cs[0],
            _ => return Ok(false),
        };
        if !is_scf(predecessor)? {
            return Ok(false);
        }
        let p = base.evaluate_u64().map_err(|_| {
            Error::ResourceLimit(format!("prime base {base} exceeds the primality-test budget"))
        })?;
        if p <= previous_prime || !arith::is_prime_u64(p) {
            return Ok(false);
        }
        previous_prime = p;
    }
    Ok(true)
}

pub fn normalize(e: &Expr, form: CanonicalForm) -> Result<Expr> {
    form.encode(&e.evaluate()?)
}

pub fn equivalent(a: &Expr, b: &Expr) -> Result<bool> {
    Ok(a.evaluate()? == b.evaluate()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse, Notation};

    fn infix(s: &str) -> Expr {
        parse(s, Notation::Infix).unwrap()
    }

    fn fcf_of(n: u64) -> Expr {
        encode_fcf_u64(n).unwrap()
    }

    fn scf_of(n: u64) -> Expr {
        encode_scf_u64(n).unwrap()
    }

    #[test]
    fn fcf_examples() {
        assert_eq!(fcf_of(1), Expr::one());
        assert_eq!(fcf_of(2), Expr::x());
        assert_eq!(fcf_of(3).to_string(), "(x+1)");
        assert_eq!(fcf_of(6), infix("x^x+x"));
        assert_eq!(
            fcf_of(255),
            infix("x^(x^x+x+1) + x^(x^x+x) + x^(x^x+1) + x^(x^x) + x^(x+1) + x^x + x + 1")
        );
        assert!(matches!(encode_fcf(&Natural::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn fcf_membership() {
        assert!(is_fcf(&infix("x^x+1")));
        assert!(!is_fcf(&infix("x*(x+1)")));
        assert!(!is_fcf(&infix("x+x")));
        assert!(!is_fcf(&infix("x+x^x")));
        assert!(!is_fcf(&infix("1+x")));
        assert!(!is_fcf(&infix("1+1+1")));
        assert!(!is_fcf(&infix("(x+1)^x")));
        assert!(!is_fcf(&infix("x^(x*x)")));
        assert!(is_fcf(&infix("x^(x^x)+x")));
    }

    #[test]
    fn fcf_cmp_orders_by_value() {
        for a in 1..200u64 {
            for b in [1, 2, 3, 7, 8, 64, 100, 127, 128, 199] {
                assert_eq!(fcf_cmp(&fcf_of(a), &fcf_of(b)), a.cmp(&b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn scf_examples() {
        assert_eq!(scf_of(1), Expr::one());
        assert_eq!(scf_of(2), Expr::x());
        assert_eq!(scf_of(6).to_string(), "(x+1)*x");
        assert_eq!(scf_of(7).to_string(), "((x+1)*x+1)");
        assert_eq!(scf_of(9).to_string(), "(x+1)^x");
        assert_eq!(scf_of(255).to_string(), "(x+1)*(x^x+1)*(x^(x^x)+1)");
        assert_eq!(scf_of(8).to_string(), "x^(x+1)");
        assert!(matches!(encode_scf(&Natural::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn scf_membership() {
        assert!(is_scf(&infix("(x+1)*x")).unwrap());
        assert!(is_scf(&infix("x^x+1")).unwrap());
        assert!(!is_scf(&infix("(x^x+1)*(x^x+1)")).unwrap());
        assert!(!is_scf(&infix("x^x*x+1")).unwrap());
        assert!(!is_scf(&infix("x*(x+1)")).unwrap());
        assert!(!is_scf(&infix("(x^x+1)*(x+1)")).unwrap());
        assert!(!is_scf(&infix("x^x+x")).unwrap());
        assert!(!is_scf(&infix("(x+1)*x*x")).unwrap());
        assert!(!is_scf(&infix("x^(x*x)")).unwrap());
    }

    #[test]
    fn scf_primality_budget() {
        // base 2^(2^7)+1 needs 129 bits
        let e = infix("x^(x^((x+1)*x+1))+1");
        assert!(matches!(is_scf(&e), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&infix("x*x"), CanonicalForm::Fcf).unwrap(), infix("x^x"));
        assert_eq!(normalize(&infix("x^x+1"), CanonicalForm::Scf).unwrap(), infix("x^x+1"));
        assert_eq!(normalize(&Expr::one(), CanonicalForm::Fcf).unwrap(), Expr::one());
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&infix("x^x"), &infix("x*x")).unwrap());
        assert!(!equivalent(&infix("x+1"), &infix("x^x")).unwrap());
    }

    #[test]
    fn canonicity_on_small_range() {
        for n in 1..=2000u64 {
            let f = fcf_of(n);
            let s = scf_of(n);
            assert!(is_fcf(&f), "{n}: {f}");
            assert!(is_scf(&s).unwrap(), "{n}: {s}");
            assert_eq!(f.evaluate_u64().unwrap(), n);
            assert_eq!(s.evaluate_u64().unwrap(), n);
        }
    }
}
