//! Interned expression trees over `{1, +, *, ^}`.
//!
//! Nodes live in a process-wide registry keyed by their shallow structure
//! (variant plus child identities), so two structurally equal expressions are
//! always the same node and equality is a pointer comparison. Nodes are only
//! reachable through the smart constructors [`Expr::sum`], [`Expr::product`]
//! and [`Expr::power`], which keep every tree free of the trivial subterms
//! `g^1`, `1^g` and `g*1`.
//!
//! `x` is not a separate node: it is the interned sum `1+1`. Sums are kept
//! flat, except that `x` stays atomic when it appears inside a larger sum.

use std::borrow::Borrow;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::meter;

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Default cap on the bit length of any intermediate value during evaluation.
pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

#[derive(Clone)]
pub struct Expr(Arc<Node>);

struct Node {
    id: u64,
    kind: Kind,
    value: OnceLock<Natural>,
}

/// Shape of an expression node. Sum and product children are in caller order
/// and there are always at least two of them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    One,
    Sum(Box<[Expr]>),
    Product(Box<[Expr]>),
    Power(Expr, Expr),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

/// Registry entry, hashed and compared by the node's shallow structure.
struct Interned(Expr);

impl PartialEq for Interned {
    fn eq(&self, other: &Self) -> bool {
        self.0 .0.kind == other.0 .0.kind
    }
}

impl Eq for Interned {}

impl Hash for Interned {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0 .0.kind.hash(state);
    }
}

impl Borrow<Kind> for Interned {
    fn borrow(&self) -> &Kind {
        &self.0 .0.kind
    }
}

static REGISTRY: LazyLock<Mutex<HashSet<Interned>>> = LazyLock::new(Default::default);
static NEXT_ID: AtomicU64 = AtomicU64::new(0);
static ONE: LazyLock<Expr> = LazyLock::new(|| intern(Kind::One));
static TWO: LazyLock<Expr> = LazyLock::new(|| intern(Kind::Sum(Box::new([Expr::one(), Expr::one()]))));

fn intern(kind: Kind) -> Expr {
    let mut registry = REGISTRY.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(found) = registry.get(&kind) {
        return found.0.clone();
    }
    let node = Node {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        kind,
        value: OnceLock::new(),
    };
    let expr = Expr(Arc::new(node));
    registry.insert(Interned(expr.clone()));
    meter::record_insertion();
    expr
}

/// Number of distinct nodes interned so far in this process.
pub fn registry_len() -> usize {
    REGISTRY.lock().unwrap_or_else(|e| e.into_inner()).len()
}

impl Expr {
    pub fn one() -> Expr {
        ONE.clone()
    }

    /// The abbreviation `x`, i.e. the sum `1+1`.
    pub fn x() -> Expr {
        TWO.clone()
    }

    /// Builds a flattened sum. Nested sums are spliced in place except for
    /// `x`, which stays atomic; a single child is returned as is.
    ///
    /// Panics if `children` is empty.
    pub fn sum<I: IntoIterator<Item = Expr>>(children: I) -> Expr {
        let mut flat = Vec::new();
        for child in children {
            match child.kind() {
                Kind::Sum(grand) if !child.is_x() => flat.extend(grand.iter().cloned()),
                _ => flat.push(child),
            }
        }
        assert!(!flat.is_empty(), "sum of no terms");
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        meter::record_assembly();
        intern(Kind::Sum(flat.into_boxed_slice()))
    }

    /// Builds a flattened product with unit factors dropped. An empty product
    /// (all factors were `1`) is `1`; a single factor is returned as is.
    ///
    /// Panics if `factors` is empty.
    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let mut flat = Vec::new();
        let mut seen = false;
        for factor in factors {
            seen = true;
            match factor.kind() {
                Kind::One => {}
                Kind::Product(grand) => flat.extend(grand.iter().cloned()),
                _ => flat.push(factor),
            }
        }
        assert!(seen, "product of no factors");
        match flat.len() {
            0 => Expr::one(),
            1 => flat.pop().unwrap(),
            _ => {
                meter::record_assembly();
                intern(Kind::Product(flat.into_boxed_slice()))
            }
        }
    }

    /// `base ^ exponent`, rewriting `g^1` to `g` and `1^g` to `1`.
    pub fn power(base: Expr, exponent: Expr) -> Expr {
        if exponent.is_one() {
            return base;
        }
        if base.is_one() {
            return base;
        }
        meter::record_assembly();
        intern(Kind::Power(base, exponent))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Registry identity of this node. Identities are unique for the lifetime
    /// of the process but depend on construction order.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind(), Kind::One)
    }

    pub fn is_x(&self) -> bool {
        *self == *TWO
    }

    /// Children of a sum or product, empty for the other variants.
    pub fn operands(&self) -> &[Expr] {
        match self.kind() {
            Kind::Sum(cs) | Kind::Product(cs) => cs,
            _ => &[],
        }
    }

    /// Evaluates with the default bit cap.
    pub fn evaluate(&self) -> Result<Natural> {
        self.evaluate_capped(DEFAULT_MAX_BITS)
    }

    /// Evaluates, failing with [`Error::ResourceLimit`] if the value or any
    /// intermediate value would need more than `max_bits` bits.
    pub fn evaluate_capped(&self, max_bits: u64) -> Result<Natural> {
        self.value_ref(max_bits).cloned()
    }

    /// Evaluates and narrows to `u64`.
    pub fn evaluate_u64(&self) -> Result<u64> {
        self.value_ref(64)?
            .to_u64()
            .ok_or_else(|| Error::ResourceLimit("value does not fit in 64 bits".into()))
    }

    fn value_ref(&self, max_bits: u64) -> Result<&Natural> {
        if let Some(v) = self.0.value.get() {
            return check_bits(v, max_bits).map(|()| v);
        }
        let value = match self.kind() {
            Kind::One => Natural::one(),
            Kind::Sum(cs) => {
                let mut acc = Natural::default();
                for c in cs.iter() {
                    acc += c.value_ref(max_bits)?;
                    check_bits(&acc, max_bits)?;
                }
                acc
            }
            Kind::Product(cs) => {
                let mut acc = Natural::one();
                for c in cs.iter() {
                    let v = c.value_ref(max_bits)?;
                    if acc.bits() + v.bits() - 1 > max_bits {
                        return Err(too_big(max_bits));
                    }
                    acc *= v;
                }
                acc
            }
            Kind::Power(b, e) => {
                let base = b.value_ref(max_bits)?;
                let exp = e.value_ref(max_bits)?;
                // base >= 2 and exp >= 2 for any smart-constructed power
                let exp = exp.to_u32().ok_or_else(|| too_big(max_bits))?;
                let lower = (base.bits() - 1).saturating_mul(exp as u64) + 1;
                if lower > max_bits {
                    return Err(too_big(max_bits));
                }
                base.pow(exp)
            }
        };
        check_bits(&value, max_bits)?;
        Ok(self.0.value.get_or_init(|| value))
    }
}

fn too_big(max_bits: u64) -> Error {
    Error::ResourceLimit(format!("value exceeds {max_bits} bits"))
}

fn check_bits(v: &Natural, max_bits: u64) -> Result<()> {
    if v.bits() > max_bits {
        Err(too_big(max_bits))
    } else {
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(crate::Notation::Infix, false))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::x()
    }
    fn one() -> Expr {
        Expr::one()
    }

    #[test]
    fn x_is_the_interned_sum_of_two_ones() {
        assert_eq!(Expr::sum([one(), one()]), x());
        assert!(x().is_x());
        assert_eq!(x().evaluate().unwrap(), 2u32.into());
    }

    #[test]
    fn power_rewrites() {
        assert_eq!(Expr::power(x(), one()), x());
        let xx = Expr::power(x(), x());
        assert_eq!(Expr::power(one(), xx), one());
    }

    #[test]
    fn product_drops_units_and_collapses() {
        let three = Expr::sum([x(), one()]);
        let p = Expr::product([three.clone(), one(), x()]);
        assert_eq!(p.operands(), &[three.clone(), x()]);
        assert_eq!(Expr::product([one(), x()]), x());
        assert_eq!(Expr::product([one(), one()]), one());
        assert_eq!(p.to_string(), "(x+1)*x");
    }

    #[test]
    fn sums_flatten_but_keep_x_atomic() {
        let three = Expr::sum([x(), one()]);
        assert_eq!(three.operands(), &[x(), one()]);
        let four = Expr::sum([three, one()]);
        assert_eq!(four.operands(), &[x(), one(), one()]);
        let ones = Expr::sum([one(), Expr::sum([one(), one(), one()])]);
        assert_eq!(ones.operands().len(), 4);
        assert!(ones.operands().iter().all(Expr::is_one));
    }

    #[test]
    fn products_flatten() {
        let xx = Expr::product([x(), x()]);
        let p = Expr::product([xx, Expr::product([x(), Expr::sum([x(), one()])])]);
        assert_eq!(p.operands().len(), 4);
    }

    #[test]
    fn interning_gives_identity() {
        let a = Expr::power(Expr::sum([x(), one()]), x());
        let b = Expr::power(Expr::sum([Expr::sum([one(), one()]), one()]), x());
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
    }

    #[test]
    fn evaluates_basic_shapes() {
        assert_eq!(one().evaluate().unwrap(), 1u32.into());
        let e = Expr::sum([Expr::power(x(), x()), one()]);
        assert_eq!(e.evaluate().unwrap(), 5u32.into());
        let e = Expr::power(x(), Expr::sum([x(), one()]));
        assert_eq!(e.evaluate_u64().unwrap(), 8);
    }

    #[test]
    fn evaluation_respects_bit_cap() {
        // 2^(2^(2^(2^2))) = 2^65536
        let mut t = x();
        for _ in 0..4 {
            t = Expr::power(x(), t);
        }
        assert!(matches!(t.evaluate_capped(1000), Err(Error::ResourceLimit(_))));
        let v = t.evaluate().unwrap();
        assert_eq!(v.bits(), 65537);
        // cached value still honours a smaller cap
        assert!(t.evaluate_capped(65536).is_err());
        assert!(t.evaluate_u64().is_err());

        let mut tower = t;
        tower = Expr::power(x(), tower);
        assert!(matches!(tower.evaluate(), Err(Error::ResourceLimit(_))));
    }

    #[test]
    #[should_panic(expected = "sum of no terms")]
    fn empty_sum_panics() {
        Expr::sum(Vec::new());
    }
}
