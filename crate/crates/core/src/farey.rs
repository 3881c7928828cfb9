//! Farey fractions of order `Q` and the exact sieve kernel
//! `K(c) = Σ_{x∈F(Q)} e(xc)`.
//!
//! Grouping the fractions by denominator turns the kernel into a sum of
//! Ramanujan sums, `K(c) = Σ_{q≤Q} c_q(c)`, an integer for every integer `c`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::{gcd_residue, ArithTable};
use crate::error::{domain, Result};
use crate::polynomial::{residue, IntPolynomial};

/// A reduced fraction `p/q` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyFraction {
    p: u64,
    q: u64,
}

impl FareyFraction {
    pub(crate) fn new(p: u64, q: u64) -> Self {
        debug_assert!(q >= 1 && p < q);
        Self { p, q }
    }

    pub fn numerator(&self) -> u64 {
        self.p
    }

    pub fn denominator(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// All reduced `p/q` with `q ≤ Q` and `0 ≤ p/q < 1`, ascending, generated by
/// the next-neighbor recurrence.
pub fn farey_sequence(q_max: u64) -> Result<Vec<FareyFraction>> {
    if q_max == 0 {
        return domain("Farey sequence of order 0");
    }
    let mut out = Vec::with_capacity(farey_size(q_max)? as usize);
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, q_max);
    out.push(FareyFraction::new(a, b));
    while c < d {
        out.push(FareyFraction::new(c, d));
        let k = (q_max + b) / d;
        let (nc, nd) = (k * c - a, k * d - b);
        (a, b, c, d) = (c, d, nc, nd);
    }
    Ok(out)
}

/// `|F(Q)| = Σ_{q≤Q} φ(q)`.
pub fn farey_size(q_max: u64) -> Result<u64> {
    if q_max == 0 {
        return domain("Farey sequence of order 0");
    }
    let table = ArithTable::up_to(q_max);
    Ok((1..=q_max).map(|q| table.phi(q)).sum())
}

/// Evaluates `K(c)` and the `Σ_q (c, q)` majorant for a fixed order `Q`,
/// memoizing kernel values by `|c|` (`K` is even in `c`).
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    q_max: u64,
    table: ArithTable,
    cache: HashMap<BigInt, i64>,
}

impl KernelEvaluator {
    pub fn new(q_max: u64) -> Result<Self> {
        if q_max == 0 {
            return domain("kernel order Q must be >= 1");
        }
        Ok(Self {
            q_max,
            table: ArithTable::up_to(q_max),
            cache: HashMap::new(),
        })
    }

    pub fn order(&self) -> u64 {
        self.q_max
    }

    /// `K(c)` from the residues `c mod q`, uncached.
    pub fn evaluate(&self, c: &BigInt) -> i64 {
        (1..=self.q_max)
            .map(|q| self.table.ramanujan_residue(q, residue(c, q)))
            .sum()
    }

    pub fn kernel(&mut self, c: &BigInt) -> i64 {
        let key = c.abs();
        if let Some(&k) = self.cache.get(&key) {
            return k;
        }
        let k = self.evaluate(&key);
        self.cache.insert(key, k);
        k
    }

    pub fn gcd_sum(&self, c: &BigInt) -> u64 {
        (1..=self.q_max)
            .map(|q| gcd_residue(residue(c, q), q))
            .sum()
    }

    pub fn cached_values(&self) -> usize {
        self.cache.len()
    }
}

/// `Σ_{x∈F(Q)} e(xc)` as an exact integer.
pub fn kernel_exact(c: &BigInt, q_max: u64) -> Result<i64> {
    Ok(KernelEvaluator::new(q_max)?.evaluate(c))
}

/// `K(i, j) = K(P(i) − P(j))`.
pub fn kernel_k(poly: &IntPolynomial, q_max: u64, i: &BigInt, j: &BigInt) -> Result<i64> {
    kernel_exact(&(poly.eval(i) - poly.eval(j)), q_max)
}

/// `Σ_{q≤Q} (c, q)` with `(0, q) = q`.
pub fn gcd_sum_bound(c: &BigInt, q_max: u64) -> Result<u64> {
    Ok(KernelEvaluator::new(q_max)?.gcd_sum(c))
}

/// `#{k ≤ Q : k | c}`, every `k` counting when `c = 0`.
pub fn divisor_count_up_to(c: &BigInt, q_max: u64) -> u64 {
    (1..=q_max).filter(|&k| residue(c, k) == 0).count() as u64
}
