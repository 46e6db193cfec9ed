use formula_forge::canonical::{is_fcf, is_scf, normalize};
use formula_forge::notation::parse;
use formula_forge::{CanonicalForm, Expr, Kind, Natural, Notation};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

const VALUE_BITS: u64 = 4096;

/// A formula tree built without the smart constructors' rewrites.
#[derive(Debug, Clone)]
enum Raw {
    One,
    Sum(Vec<Raw>),
    Product(Vec<Raw>),
    Power(Box<Raw>, Box<Raw>),
}

impl Raw {
    /// Direct value, or `None` past `VALUE_BITS`.
    fn value(&self) -> Option<Natural> {
        let v = match self {
            Raw::One => BigUint::one(),
            Raw::Sum(xs) => xs.iter().map(Raw::value).sum::<Option<Natural>>()?,
            Raw::Product(xs) => xs.iter().map(Raw::value).product::<Option<Natural>>()?,
            Raw::Power(b, e) => {
                let b = b.value()?;
                let e = e.value()?.to_u32()?;
                if b.bits().saturating_mul(e as u64) > VALUE_BITS + 64 {
                    return None;
                }
                b.pow(e)
            }
        };
        (v.bits() <= VALUE_BITS).then_some(v)
    }

    fn build(&self) -> Expr {
        match self {
            Raw::One => Expr::one(),
            Raw::Sum(xs) => Expr::sum(xs.iter().map(Raw::build)),
            Raw::Product(xs) => Expr::product(xs.iter().map(Raw::build)),
            Raw::Power(b, e) => Expr::power(b.build(), e.build()),
        }
    }
}

fn raw() -> impl Strategy<Value = Raw> {
    prop_oneof![Just(Raw::One), Just(Raw::Sum(vec![Raw::One, Raw::One]))].prop_recursive(8, 96, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Raw::Sum),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Raw::Product),
            (inner.clone(), inner).prop_map(|(b, e)| Raw::Power(Box::new(b), Box::new(e))),
        ]
    })
}

fn bounded() -> impl Strategy<Value = (Raw, Natural)> {
    raw().prop_filter_map("value too large", |r| r.value().map(|v| (r, v)))
}

fn exprs() -> impl Strategy<Value = Expr> {
    bounded().prop_map(|(r, _)| r.build())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    }
}

/// Every subterm reachable from `e`.
fn subterms(e: &Expr, out: &mut Vec<Expr>) {
    out.push(e.clone());
    for c in e.operands() {
        subterms(c, out);
    }
}

proptest! {
    #![proptest_config(config(2000))]

    #[test]
    fn simplification_preserves_value((r, v) in bounded()) {
        prop_assert_eq!(r.build().evaluate().unwrap(), v);
    }

    #[test]
    fn round_trip_all_notations(e in exprs()) {
        for n in [Notation::Infix, Notation::Prefix, Notation::Postfix] {
            let text = e.render(n, false);
            prop_assert_eq!(parse(&text, n).unwrap(), e.clone(), "{:?}: {}", n, text);
        }
        // expanded infix is unambiguous thanks to the parentheses
        let text = e.render(Notation::Infix, true);
        prop_assert_eq!(parse(&text, Notation::Infix).unwrap(), e.clone());
    }

    #[test]
    fn evaluation_homomorphism(a in exprs(), b in exprs()) {
        let (va, vb) = (a.evaluate().unwrap(), b.evaluate().unwrap());
        prop_assert_eq!(Expr::sum([a.clone(), b.clone()]).evaluate().unwrap(), &va + &vb);
        prop_assert_eq!(Expr::product([a.clone(), b.clone()]).evaluate().unwrap(), &va * &vb);
        if let Some(e) = vb.to_u32().filter(|&e| va.bits() * e as u64 <= 1 << 16) {
            prop_assert_eq!(Expr::power(a, b).evaluate().unwrap(), va.pow(e));
        }
    }

    #[test]
    fn no_trivial_subterms(e in exprs()) {
        let mut all = Vec::new();
        subterms(&e, &mut all);
        for s in all {
            match s.kind() {
                Kind::Power(b, x) => prop_assert!(!b.is_one() && !x.is_one(), "{}", s),
                Kind::Product(fs) => prop_assert!(fs.len() >= 2 && fs.iter().all(|f| !f.is_one()), "{}", s),
                Kind::Sum(ts) => prop_assert!(ts.len() >= 2),
                Kind::One => {}
            }
        }
    }

    #[test]
    fn interning_is_structural(r in raw()) {
        let (a, b) = (r.build(), r.build());
        prop_assert_eq!(a.id(), b.id());
        // rebuilding from the shallow structure finds the same entry
        let rebuilt = match a.kind() {
            Kind::One => Expr::one(),
            Kind::Sum(ts) => Expr::sum(ts.iter().cloned()),
            Kind::Product(fs) => Expr::product(fs.iter().cloned()),
            Kind::Power(b, e) => Expr::power(b.clone(), e.clone()),
        };
        prop_assert_eq!(rebuilt.id(), a.id());
    }

    #[test]
    fn normalize_is_idempotent(e in exprs()) {
        let v = e.evaluate().unwrap();
        let f = normalize(&e, CanonicalForm::Fcf).unwrap();
        prop_assert!(is_fcf(&f));
        prop_assert_eq!(f.evaluate().unwrap(), v.clone());
        prop_assert_eq!(normalize(&f, CanonicalForm::Fcf).unwrap(), f);
        // SCF relies on trial division, so keep it to values it factors quickly
        if v.bits() <= 40 {
            let s = normalize(&e, CanonicalForm::Scf).unwrap();
            prop_assert!(is_scf(&s).unwrap());
            prop_assert_eq!(s.evaluate().unwrap(), v);
            prop_assert_eq!(normalize(&s, CanonicalForm::Scf).unwrap(), s);
        }
    }
}

#[test]
fn distinct_structures_get_distinct_entries() {
    let a = parse("x*(x+1)", Notation::Infix).unwrap();
    let b = parse("(x+1)*x", Notation::Infix).unwrap();
    assert_eq!(a.evaluate().unwrap(), b.evaluate().unwrap());
    assert_ne!(a, b);
    assert_ne!(a.id(), b.id());
}
