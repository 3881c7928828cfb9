//! Zeros of an integer polynomial modulo `m`.
//!
//! Roots modulo a prime are found by scanning (small `p`) or by splitting
//! `gcd(P, T^p − T)` over F_p (large `p`). Roots modulo `p^m` are built one
//! level at a time from the roots modulo `p^j`; `ρ(m)` is assembled from the
//! prime-power counts by multiplicativity.

mod bounds;
mod fp;

pub use bounds::{
    a_exponent, euler_majorant, prime_partial_sum, prime_series_bound, prop1_sum, spacing_check,
    vandermonde_check, RhoProfile, VandermondeCheck,
};

use num_bigint::BigInt;

use crate::arith::{self, is_prime, mul_mod, pow_mod};
use crate::error::{domain, Error, Result};
use crate::polynomial::{IntPolynomial, ReducedPoly};

/// Primes up to this size are handled by exhaustive scan.
const SCAN_LIMIT: u64 = 1 << 12;
/// Largest prime-power modulus for which roots are enumerated.
pub const MODULUS_LIMIT: u64 = 1 << 62;
/// Cap on the number of residues listed or tested while lifting.
pub const LIFT_WORK_LIMIT: u64 = 50_000_000;

/// The roots of `P` modulo `m`, as sorted residues in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSetModM {
    modulus: u64,
    roots: Vec<u64>,
}

impl RootSetModM {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn roots(&self) -> &[u64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: u64) -> bool {
        self.roots.binary_search(&r).is_ok()
    }
}

fn scan(reduced: &ReducedPoly) -> Vec<u64> {
    (0..reduced.modulus())
        .filter(|&x| reduced.eval(x) == 0)
        .collect()
}

fn roots_mod_prime_reduced(reduced: &ReducedPoly) -> Result<Vec<u64>> {
    let p = reduced.modulus();
    if p <= SCAN_LIMIT {
        return Ok(scan(reduced));
    }
    match fp::roots_mod_odd_prime(reduced.coeffs(), p) {
        Some(roots) => Ok(roots),
        None if p <= LIFT_WORK_LIMIT => Ok((0..p).collect()),
        None => Err(Error::Resource(format!(
            "polynomial vanishes identically mod {p}; listing {p} roots exceeds the budget"
        ))),
    }
}

/// All `l` in `[0, p)` with `P(l) ≡ 0 mod p`.
pub fn roots_mod_prime(poly: &IntPolynomial, p: u64) -> Result<RootSetModM> {
    if !is_prime(p) {
        return domain(format!("roots_mod_prime: {p} is not prime"));
    }
    Ok(RootSetModM {
        modulus: p,
        roots: roots_mod_prime_reduced(&poly.reduce(p))?,
    })
}

/// `ρ(p)` without listing the roots: the degree of `gcd(P, T^p − T)` over
/// F_p above the scan limit.
pub fn root_count_mod_prime(poly: &IntPolynomial, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return domain(format!("root_count_mod_prime: {p} is not prime"));
    }
    let reduced = poly.reduce(p);
    if p <= SCAN_LIMIT {
        return Ok(scan(&reduced).len() as u64);
    }
    Ok(fp::root_count_mod_odd_prime(reduced.coeffs(), p).unwrap_or(p))
}

/// `ρ(p^m)`.
pub fn rho_prime_power(poly: &IntPolynomial, p: u64, m: u32) -> Result<u64> {
    if m == 1 {
        root_count_mod_prime(poly, p)
    } else {
        Ok(lift_roots(poly, p, m)?.len() as u64)
    }
}

/// `P'` reduced modulo `p`.
fn derivative_mod(reduced: &ReducedPoly, p: u64) -> ReducedPoly {
    let c = reduced.coeffs();
    let k = c.len() - 1;
    let mut coeffs: Vec<u64> = c[..k]
        .iter()
        .enumerate()
        .map(|(i, &ci)| mul_mod(((k - i) as u64) % p, ci % p, p))
        .collect();
    if coeffs.is_empty() {
        coeffs.push(0);
    }
    ReducedPoly::from_residues(coeffs, p)
}

/// Roots of `P` modulo `p^m`, lifted one power of `p` at a time.
///
/// A root `r` mod `p^j` with `P'(r) ≢ 0 mod p` has exactly one lift; every
/// other root has its `p` preimages tested explicitly.
pub fn lift_roots(poly: &IntPolynomial, p: u64, m: u32) -> Result<RootSetModM> {
    if !is_prime(p) {
        return domain(format!("lift_roots: {p} is not prime"));
    }
    if m == 0 {
        return domain("lift_roots requires m >= 1");
    }
    let modulus = p
        .checked_pow(m)
        .filter(|&q| q <= MODULUS_LIMIT)
        .ok_or_else(|| Error::Resource(format!("{p}^{m} exceeds the exact-arithmetic budget")))?;
    let full = poly.reduce(modulus);
    let mut roots = roots_mod_prime_reduced(&full.reduce_to(p))?;
    let deriv = derivative_mod(&full, p);
    let mut work = roots.len() as u64;
    let mut pj = p;
    for _ in 1..m {
        let next = pj * p;
        let level = full.reduce_to(next);
        let mut lifted = Vec::with_capacity(roots.len());
        for &r in &roots {
            let slope = deriv.eval(r % p);
            if slope != 0 {
                let s = level.eval(r) / pj;
                let t = (p - mul_mod(s, pow_mod(slope, p - 2, p), p)) % p;
                lifted.push(r + t * pj);
                work += 1;
            } else {
                work += p;
                if work > LIFT_WORK_LIMIT {
                    return Err(Error::Resource(format!(
                        "lifting roots to {p}^{m} exceeds {LIFT_WORK_LIMIT} candidate residues"
                    )));
                }
                lifted.extend((0..p).map(|t| r + t * pj).filter(|&x| level.eval(x) == 0));
            }
        }
        lifted.sort_unstable();
        roots = lifted;
        pj = next;
    }
    Ok(RootSetModM { modulus, roots })
}

/// `ρ(m)`, the number of residues `l` mod `m` with `P(l) ≡ 0 mod m`.
pub fn rho(poly: &IntPolynomial, m: u64) -> Result<u64> {
    if m == 0 {
        return domain("rho requires m >= 1");
    }
    let f = arith::factorize(m)?;
    let mut count = 1u64;
    for &(p, e) in f.factors() {
        let local = rho_prime_power(poly, p, e)?;
        count *= local;
        if count == 0 {
            break;
        }
    }
    Ok(count)
}

/// `ρ_j(m)`: the count for `P(T) − P(j)`.
pub fn rho_shifted(poly: &IntPolynomial, j: &BigInt, m: u64) -> Result<u64> {
    rho(&poly.shift_constant(&poly.eval(j)), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn roots_mod_prime_examples() {
        assert_eq!(
            roots_mod_prime(&poly(&[1, 0, 1]), 5).unwrap().roots(),
            &[2, 3]
        );
        assert!(roots_mod_prime(&poly(&[1, 0, 1]), 3).unwrap().is_empty());
        assert_eq!(roots_mod_prime(&poly(&[2, 0]), 2).unwrap().roots(), &[0, 1]);
        assert!(roots_mod_prime(&poly(&[1, 0]), 4).is_err());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(
            lift_roots(&poly(&[1, 0, 0]), 2, 2).unwrap().roots(),
            &[0, 2]
        );
        assert_eq!(
            lift_roots(&poly(&[1, 0, -1]), 2, 3).unwrap().roots(),
            &[1, 3, 5, 7]
        );
        let r = lift_roots(&poly(&[1, 0, 1]), 5, 2).unwrap();
        assert_eq!(r.modulus(), 25);
        assert_eq!(r.roots(), &[7, 18]);
        assert!(matches!(
            lift_roots(&poly(&[1, 0]), 2, 63),
            Err(Error::Resource(_))
        ));
        assert!(lift_roots(&poly(&[1, 0]), 2, 0).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&poly(&[3, -1, 4]), 1).unwrap(), 1);
        assert_eq!(rho(&poly(&[1, 0, 1]), 65).unwrap(), 4);
        assert_eq!(oracle::rho_scan(&poly(&[1, 0, 1]), 65), 4);
        assert_eq!(rho(&poly(&[1, 0, 0]), 4).unwrap(), 2);
        assert!(rho(&poly(&[1]), 0).is_err());
    }

    #[test]
    fn rho_shifted_examples() {
        let sq = poly(&[1, 0, 0]);
        assert_eq!(rho_shifted(&sq, &0.into(), 4).unwrap(), 2);
        assert_eq!(rho_shifted(&sq, &1.into(), 5).unwrap(), 2);
        assert_eq!(rho_shifted(&poly(&[5, 1, 2]), &(-7).into(), 1).unwrap(), 1);
    }

    #[test]
    fn lift_agrees_with_scan_on_degenerate_polynomials() {
        let cases: Vec<Vec<i64>> = vec![
            vec![1, 0, 0],
            vec![1, 0, 0, 0],
            vec![1, -2, 1],
            vec![4, 0, 0],
            vec![2, 0],
            vec![9, 6, 1],
            vec![1, 0, 0, 0, 0],
            vec![0],
            vec![7],
        ];
        for c in &cases {
            let p_ = poly(c);
            for (p, max_e) in [(2u64, 12u32), (3, 7), (5, 5), (7, 4)] {
                for e in 1..=max_e {
                    let q = p.pow(e);
                    let fast = lift_roots(&p_, p, e).unwrap();
                    assert_eq!(
                        fast.roots(),
                        oracle::roots_scan(&p_, q).as_slice(),
                        "{c:?} mod {p}^{e}"
                    );
                }
            }
        }
    }

    #[test]
    fn large_prime_square_uses_hensel() {
        let p = 1_000_003u64;
        let f = poly(&[1, 0, 1]);
        let r = lift_roots(&f, p, 2).unwrap();
        for &x in r.roots() {
            assert_eq!(f.eval_mod(&x.into(), p * p).unwrap(), 0);
        }
        // -1 is a square mod p iff p ≡ 1 mod 4
        assert_eq!(r.len(), if p % 4 == 1 { 2 } else { 0 });
        let g = poly(&[1, 0, -2]);
        assert_eq!(
            lift_roots(&g, 1_000_033, 3).unwrap().len(),
            oracle::rho_scan(&g, 1_000_033) as usize
        );
    }
}
