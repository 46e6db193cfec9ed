//! Size metrics for comparing encodings.

use std::collections::HashMap;

use crate::expr::{Expr, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Characters of the prefix rendering with `x` expanded and no spaces.
    Chars,
    /// Number of `1` leaves once `x` is expanded.
    Leaves,
    /// Fan-in-two gates once `x` is expanded and sums/products are binarized.
    Gates,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Chars, Metric::Leaves, Metric::Gates];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Chars => "chars",
            Metric::Leaves => "leaves",
            Metric::Gates => "gates",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chars" => Ok(Metric::Chars),
            "leaves" => Ok(Metric::Leaves),
            "gates" => Ok(Metric::Gates),
            other => Err(crate::Error::Domain(format!("unknown metric `{other}`"))),
        }
    }
}

/// Size of `e` as a tree (shared subterms are counted once per occurrence).
pub fn size(e: &Expr, metric: Metric) -> u64 {
    let leaves = leaves(e, &mut HashMap::new());
    let gates = leaves - 1;
    match metric {
        Metric::Leaves => leaves,
        Metric::Gates => gates,
        // one token per leaf and one per binary operator
        Metric::Chars => leaves + gates,
    }
}

fn leaves(e: &Expr, memo: &mut HashMap<u64, u64>) -> u64 {
    if let Some(&n) = memo.get(&e.id()) {
        return n;
    }
    let n = match e.kind() {
        Kind::One => 1,
        Kind::Sum(cs) | Kind::Product(cs) => cs.iter().map(|c| leaves(c, memo)).sum(),
        Kind::Power(b, x) => leaves(b, memo) + leaves(x, memo),
    };
    memo.insert(e.id(), n);
    n
}
