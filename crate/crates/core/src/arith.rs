//! Number-theoretic helpers: deterministic trial-division primality and
//! factorization for values below 2^64, and a classic sieve.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::expr::Natural;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

/// Prime factorization with strictly ascending primes. Empty for 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization(pub Vec<PrimePower>);

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|pp| pp.prime)
    }

    pub fn value(&self) -> Natural {
        self.0
            .iter()
            .map(|pp| Natural::from(pp.prime).pow(pp.exponent))
            .product()
    }

    /// Exponent of 2, and the odd prime powers in ascending order.
    pub fn split_two(&self) -> (u32, &[PrimePower]) {
        match self.0.first() {
            Some(pp) if pp.prime == 2 => (pp.exponent, &self.0[1..]),
            _ => (0, &self.0[..]),
        }
    }
}

fn narrow(n: &Natural) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::ResourceLimit(format!("{n} is beyond trial-division range (2^64)")))
}

pub fn is_prime(n: &Natural) -> Result<bool> {
    Ok(is_prime_u64(narrow(n)?))
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while (d as u128) * (d as u128) <= n as u128 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factor(n: &Natural) -> Result<Factorization> {
    let n = narrow(n)?;
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    Ok(factor_u64(n))
}

/// Panics on 0.
pub fn factor_u64(mut n: u64) -> Factorization {
    assert!(n > 0, "cannot factor 0");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push(PrimePower { prime: p, exponent: e });
        }
    };
    push(2, &mut n);
    let mut d = 3u64;
    while (d as u128) * (d as u128) <= n as u128 {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        out.push(PrimePower { prime: n, exponent: 1 });
    }
    Factorization(out)
}

/// Primes up to and including `limit` by the sieve of Eratosthenes.
pub fn eratosthenes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut i = 2;
    while i * i <= limit {
        if !composite[i] {
            for m in (i * i..=limit).step_by(i) {
                composite[m] = true;
            }
        }
        i += 1;
    }
    (2..=limit).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}
