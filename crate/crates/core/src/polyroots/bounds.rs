//! Spacing of roots modulo prime powers and the bounds built on it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{lift_roots, rho_prime_power, RootSetModM};
use crate::arith::{self, is_prime, pair_count};
use crate::error::{domain, Error, Result};
use crate::polynomial::{residue, IntPolynomial};
use crate::scalar::Field;

/// Largest `p^m` accepted by [`spacing_check`].
pub const SPACING_MODULUS_LIMIT: u64 = 1_000_000;

/// `⌈m / C(k+1,2)⌉`.
pub fn a_exponent(m: u32, k: u32) -> Result<u32> {
    if m == 0 || k == 0 {
        return domain("a_exponent requires m >= 1 and k >= 1");
    }
    Ok((m as u64).div_ceil(pair_count(k)) as u32)
}

/// Outcome of comparing `c₀·∏_{i<j}(xᵢ − xⱼ)` with the determinant whose last
/// row carries `P(xᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondeCheck {
    pub lhs: BigInt,
    pub det: BigInt,
    pub ok: bool,
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Checks the Vandermonde-type identity at `k+1` distinct integer points.
///
/// The determinant with rows `1, x, …, x^{k−1}, P(x)` equals
/// `c₀·∏_{i<j}(xⱼ − xᵢ)`, so it agrees with `c₀·∏_{i<j}(xᵢ − xⱼ)` up to
/// the sign `(−1)^{C(k+1,2)}`; `ok` compares absolute values.
pub fn vandermonde_check(poly: &IntPolynomial, xs: &[BigInt]) -> Result<VandermondeCheck> {
    let k = poly.degree() as usize;
    if xs.len() != k + 1 {
        return domain(format!(
            "vandermonde_check needs {} points, got {}",
            k + 1,
            xs.len()
        ));
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] == xs[j] {
                return domain(format!("repeated point {}", xs[i]));
            }
        }
    }
    let mut lhs = poly.leading().clone();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            lhs *= &xs[i] - &xs[j];
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k + 1);
    let mut power: Vec<BigInt> = vec![BigInt::from(1); k + 1];
    for _ in 0..k {
        rows.push(power.clone());
        power = power.iter().zip(xs).map(|(p, x)| p * x).collect();
    }
    rows.push(xs.iter().map(|x| poly.eval(x)).collect());
    let det = bareiss_det(rows);
    let ok = lhs.abs() == det.abs();
    Ok(VandermondeCheck { lhs, det, ok })
}

/// Whether every window `[s, s + p^{a(m,k)})` contains at most `k + 2` roots
/// of `P` modulo `p^m`, with the root set extended periodically over
/// `[0, 2p^m)`.
pub fn spacing_check(poly: &IntPolynomial, p: u64, m: u32) -> Result<bool> {
    if !is_prime(p) {
        return domain(format!("spacing_check: {p} is not prime"));
    }
    if residue(poly.leading(), p) == 0 {
        return Err(Error::Precondition(format!(
            "{p} divides the leading coefficient"
        )));
    }
    p.checked_pow(m)
        .filter(|&q| q <= SPACING_MODULUS_LIMIT)
        .ok_or_else(|| Error::Resource(format!("{p}^{m} exceeds {SPACING_MODULUS_LIMIT}")))?;
    let k = poly.degree();
    if k == 0 {
        return Ok(true);
    }
    let a = a_exponent(m, k)?;
    if a >= m {
        // a window of length p^m holds exactly one period
        return Ok(rho_prime_power(poly, p, m)? <= k as u64 + 2);
    }
    let roots = lift_roots(poly, p, m)?;
    Ok(max_window_count(&roots, p.pow(a)) <= k as usize + 2)
}

/// Largest number of roots in a half-open window of the given width,
/// over all window positions in one period.
pub(crate) fn max_window_count(roots: &RootSetModM, width: u64) -> usize {
    let q = roots.modulus();
    let extended: Vec<u64> = roots
        .roots()
        .iter()
        .copied()
        .chain(roots.roots().iter().map(|r| r + q))
        .collect();
    let n = roots.len();
    let mut best = 0;
    let mut hi = 0;
    // a maximal window can always be slid right until it starts at a root
    for lo in 0..n {
        hi = hi.max(lo);
        while hi < extended.len() && extended[hi] < extended[lo] + width {
            hi += 1;
        }
        best = best.max(hi - lo);
    }
    best
}

/// Table of `ρ(m)` for `1 ≤ m ≤ Q` with the exact partial sum `Σ ρ(m)/m`.
#[derive(Debug, Clone)]
pub struct RhoProfile {
    polynomial: IntPolynomial,
    bound: u64,
    rho: Vec<u64>,
    partial_sum: BigRational,
}

impl RhoProfile {
    pub fn compute(poly: &IntPolynomial, bound: u64) -> Result<Self> {
        if bound == 0 {
            return domain("RhoProfile requires Q >= 1");
        }
        let mut local: HashMap<(u64, u32), u64> = HashMap::new();
        let mut rho = Vec::with_capacity(bound as usize);
        for m in 1..=bound {
            let mut count = 1u64;
            for &(p, e) in arith::factorize(m)?.factors() {
                let c = match local.get(&(p, e)) {
                    Some(&c) => c,
                    None => {
                        let c = rho_prime_power(poly, p, e)?;
                        local.insert((p, e), c);
                        c
                    }
                };
                count *= c;
            }
            rho.push(count);
        }
        let partial_sum = rho
            .iter()
            .zip(1u64..)
            .fold(BigRational::zero(), |acc, (&r, m)| {
                acc + BigRational::ratio(r, m)
            });
        Ok(Self {
            polynomial: poly.clone(),
            bound,
            rho,
            partial_sum,
        })
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.polynomial
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// `ρ(m)` for `1 ≤ m ≤ Q`.
    pub fn rho(&self, m: u64) -> u64 {
        self.rho[(m - 1) as usize]
    }

    pub fn table(&self) -> &[u64] {
        &self.rho
    }

    pub fn partial_sum(&self) -> &BigRational {
        &self.partial_sum
    }

    pub fn partial_sum_as<S: Field>(&self) -> S {
        self.rho
            .iter()
            .zip(1u64..)
            .fold(S::zero(), |acc, (&r, m)| acc + S::ratio(r, m))
    }
}

/// `Σ_{1≤m≤Q} ρ(m)/m`.
pub fn prop1_sum<S: Field>(poly: &IntPolynomial, bound: u64) -> Result<S> {
    Ok(RhoProfile::compute(poly, bound)?.partial_sum_as())
}

/// `Σ_{m≥0, p^m ≤ limit} ρ(p^m)/p^m`.
pub fn prime_partial_sum<S: Field>(poly: &IntPolynomial, p: u64, limit: u64) -> Result<S> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let mut sum = S::one();
    let mut e = 1u32;
    while let Some(q) = p.checked_pow(e).filter(|&q| q <= limit) {
        sum = sum + S::ratio(lift_roots(poly, p, e)?.len() as u64, q);
        e += 1;
    }
    Ok(sum)
}

/// The finite Euler product `∏_{p≤Q} Σ_{p^m≤Q} ρ(p^m)/p^m`, which majorizes
/// [`prop1_sum`] by multiplicativity.
pub fn euler_majorant<S: Field>(poly: &IntPolynomial, bound: u64) -> Result<S> {
    if bound == 0 {
        return domain("euler_majorant requires Q >= 1");
    }
    arith::primes_up_to(bound)
        .into_iter()
        .try_fold(S::one(), |acc, p| {
            Ok(acc * prime_partial_sum::<S>(poly, p, bound)?)
        })
}

/// Per-prime majorant `1 + θ(k)/p + (k+2)·C(k+1,2)·Σ_{m≥2} p^{−m}` for the
/// local series at a prime not dividing `c₀`.
pub fn prime_series_bound<S: Field>(k: u32, p: u64) -> Result<S> {
    if p < 2 {
        return domain("prime_series_bound needs p >= 2");
    }
    let theta = arith::theta(k)?;
    let tail = (k as u64 + 2) * pair_count(k);
    // Σ_{m≥2} p^{-m} = 1/(p(p-1))
    Ok(S::one() + S::ratio(theta, p) + S::ratio(tail, p * (p - 1)))
}
