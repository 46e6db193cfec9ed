use std::collections::BTreeSet;

use formula_forge::arith::{eratosthenes, factor_u64, is_prime_u64};
use formula_forge::canonical::{encode_fcf, encode_fcf_u64, encode_scf_u64, equivalent, is_fcf, is_scf};
use formula_forge::fcf_gen::{fcf_generate, fcf_step, FcfLevel};
use formula_forge::notation::parse;
use formula_forge::zeta::{self, improved_iterations, sift_primes, ZetaState};
use formula_forge::{Expr, Kind, Natural, Notation};
use num_bigint::BigUint;

#[test]
fn fcf_generation_matches_encoder() {
    let g = fcf_generate(65535).unwrap();
    assert_eq!(g.iterations, 3);
    assert_eq!(g.expressions.len(), 65535);
    for (i, entry) in g.expressions.iter().enumerate() {
        assert_eq!(entry.value, i as u64 + 1);
        assert_eq!(entry.expr, encode_fcf_u64(entry.value).unwrap(), "{}", entry.value);
    }
}

#[test]
fn fcf_levels_extend_each_other() {
    let mut level = FcfLevel::base();
    for expected in [3, 15] {
        let next = fcf_step(&level).unwrap();
        assert_eq!(next.len(), expected);
        assert!(next.expressions().is_contiguous());
        let prefix: Vec<_> = next.expressions().iter().take(level.len()).cloned().collect();
        assert_eq!(prefix.as_slice(), level.expressions().entries());
        level = next;
    }
}

#[test]
fn encoders_round_trip() {
    for n in 1..=100_000u64 {
        let f = encode_fcf_u64(n).unwrap();
        assert_eq!(f.evaluate_u64().unwrap(), n);
        let s = encode_scf_u64(n).unwrap();
        assert_eq!(s.evaluate_u64().unwrap(), n);
        if n <= 10_000 {
            assert!(is_fcf(&f), "{n}");
            assert!(is_scf(&s).unwrap(), "{n}");
        }
    }
}

#[test]
fn improved_states_match_scf_encoder() {
    let mut state = ZetaState::initial();
    for k in 1..=10usize {
        let next = zeta::zeta_step_improved(&state).unwrap();
        let values: BTreeSet<u64> = next.naturals().values().collect();
        assert_eq!(values, (1..=1u64 << (k + 1)).collect());
        for entry in next.naturals() {
            assert_eq!(entry.expr, encode_scf_u64(entry.value).unwrap(), "k={k} v={}", entry.value);
        }
        // monotone chains, strictly
        assert!(state.naturals().values().all(|v| next.naturals().contains_value(v)));
        assert!(next.naturals().len() > state.naturals().len());
        assert!(state.primes().values().all(|p| next.primes().contains_value(p)));
        assert!(next.primes().len() > state.primes().len());
        // adjoined primes are 1 + (expression of p - 1)
        assert!(!next.adjoined().is_empty());
        for &p in next.adjoined() {
            assert!(is_prime_u64(p));
            let e = next.primes().get(p).unwrap();
            let Kind::Sum(terms) = e.kind() else { panic!("{e} is not a sum") };
            assert_eq!(terms.len(), 2);
            assert!(terms[1].is_one());
            assert_eq!(&terms[0], next.naturals().get(p - 1).unwrap());
        }
        state = next;
    }
}

#[test]
fn sieve_matches_eratosthenes() {
    for bits in 1..=14u32 {
        let sieve = sift_primes(bits).unwrap();
        assert_eq!(sieve.primes, eratosthenes(1 << bits), "bits {bits}");
    }
    assert_eq!(sift_primes(8).unwrap().primes.len(), 54);
}

#[test]
fn canonical_checkers_agree_with_generated_sets() {
    let (state, _) = improved_iterations(9).unwrap();
    for entry in state.naturals() {
        assert!(is_scf(&entry.expr).unwrap());
        let fcf = encode_fcf_u64(entry.value).unwrap();
        assert!(equivalent(&fcf, &entry.expr).unwrap());
    }
}

#[test]
fn scf_bases_match_factorization() {
    for n in 1..=10_000u64 {
        let mut bases = Vec::new();
        let e = encode_scf_u64(n).unwrap();
        let factors: Vec<Expr> = match e.kind() {
            Kind::Product(fs) => fs.to_vec(),
            _ => vec![e.clone()],
        };
        for f in factors.iter().filter(|f| !f.is_one()) {
            let base = match f.kind() {
                Kind::Power(b, _) => b.clone(),
                _ => f.clone(),
            };
            bases.push(base.evaluate_u64().unwrap());
        }
        let expected: Vec<u64> = factor_u64(n).primes().collect();
        bases.sort_unstable();
        assert_eq!(bases, expected, "{n}");
    }
}

#[test]
fn basic_primes_are_true_primes() {
    let mut basic = ZetaState::initial();
    let (improved, _) = improved_iterations(3).unwrap();
    for _ in 0..2 {
        basic = zeta::zeta_step_basic(&basic, 100).unwrap();
    }
    for p in basic.primes().values() {
        assert!(is_prime_u64(p));
        if p <= 16 {
            assert!(improved.primes().contains_value(p));
        }
    }
}

#[test]
fn display_expression() {
    let text = "x^(1+(x*x*x)+x^(x*x)) + 1^(1^1) + 1^(x^1) + 1^(x^(x^1)) + 1";
    let e = parse(text, Notation::Infix).unwrap();
    let expected = (BigUint::from(1u32) << 25u32) + BigUint::from(4u32);
    assert_eq!(e.evaluate().unwrap(), expected);
    assert_eq!(e.evaluate().unwrap(), Natural::from(33_554_436u64));
    let fcf = encode_fcf(&expected).unwrap();
    assert!(equivalent(&e, &fcf).unwrap());
    assert_eq!(fcf.to_string(), "(x^(x^(x^x)+x^(x+1)+1)+x^x)");
}
