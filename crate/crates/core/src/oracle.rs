//! Brute-force reference computations.
//!
//! Nothing here shares a code path with the fast implementations: roots are
//! found by scanning every residue, Farey sums by summing complex
//! exponentials term by term, determinants by cofactor expansion. The
//! verification suite and the tests compare the two.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::factorize;
use crate::characters::CharacterTable;
use crate::farey::FareyFraction;
use crate::polynomial::{residue, IntPolynomial};
use crate::scalar::{unit_root, Real};

/// Residues `x` in `[0, m)` with `P(x) ≡ 0 mod m`, by direct evaluation.
pub fn roots_scan(poly: &IntPolynomial, m: u64) -> Vec<u64> {
    (0..m)
        .filter(|&x| residue(&poly.eval(&BigInt::from(x)), m) == 0)
        .collect()
}

pub fn rho_scan(poly: &IntPolynomial, m: u64) -> u64 {
    roots_scan(poly, m).len() as u64
}

/// Reduced fractions in `[0, 1)` with denominator at most `q_max`, by
/// enumeration, reduction and sorting.
pub fn farey_enumerated(q_max: u64) -> Vec<FareyFraction> {
    let mut out: Vec<(u64, u64)> = (1..=q_max)
        .flat_map(|q| (0..q).map(move |p| (p, q)))
        .filter(|&(p, q)| p.gcd(&q) == 1 && (p > 0 || q == 1))
        .collect();
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out.into_iter()
        .map(|(p, q)| FareyFraction::new(p, q))
        .collect()
}

/// `Σ_{x ∈ fractions} e(x·c)` summed term by term.
pub fn farey_exponential_sum<T: Real>(fractions: &[FareyFraction], c: &BigInt) -> Complex<T> {
    fractions
        .iter()
        .map(|f| {
            let r = residue(&(c * BigInt::from(f.numerator())), f.denominator());
            unit_root::<T>(r, f.denominator())
        })
        .fold(Complex::zero(), |acc, z| acc + z)
}

/// `Σ_{0≤p<q, (p,q)=1} e(pn/q)` summed term by term.
pub fn ramanujan_direct<T: Real>(q: u64, n: i128) -> Complex<T> {
    (0..q)
        .filter(|p| p.gcd(&q) == 1)
        .map(|p| unit_root::<T>((p as i128 * n).rem_euclid(q as i128) as u64, q))
        .fold(Complex::zero(), |acc, z| acc + z)
}

/// `Σ_{x∈F} |Σ_i a_i e(x P(i))|²` with every exponential formed from the
/// exact integer `p·P(i)` reduced mod `q`.
pub fn sieve_lhs_direct<T: Real>(
    fractions: &[FareyFraction],
    values: &[BigInt],
    weights: &[Complex<T>],
) -> T {
    fractions
        .iter()
        .map(|f| {
            let s = values
                .iter()
                .zip(weights)
                .fold(Complex::<T>::zero(), |acc, (v, a)| {
                    let r = residue(&(v * BigInt::from(f.numerator())), f.denominator());
                    acc + *a * unit_root::<T>(r, f.denominator())
                });
            s.norm_sqr()
        })
        .fold(T::zero(), |acc, x| acc + x)
}

/// Determinant by Laplace expansion along the first row.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for col in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * det_cofactor(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `#{(i, j) ∈ [1,q]² : iⁿ ≡ jⁿ mod q}` by listing every pair.
pub fn power_collision_count(n: u32, q: u64) -> u64 {
    let powers: Vec<u64> = (1..=q)
        .map(|i| crate::arith::pow_mod(i, n as u64, q))
        .collect();
    let mut count = 0;
    for a in &powers {
        for b in &powers {
            if a == b {
                count += 1;
            }
        }
    }
    count
}

/// Primitive characters selected without conductors: `χ mod d` is primitive
/// iff, for every prime `p | d`, it is nontrivial on the units `≡ 1 mod d/p`.
pub fn primitive_indices_by_kernel(table: &CharacterTable) -> Vec<usize> {
    let d = table.modulus();
    let primes: Vec<u64> = factorize(d).expect("d >= 1").primes().collect();
    (0..table.len())
        .filter(|&t| {
            primes.iter().all(|&p| {
                let m = d / p;
                (0..d).any(|x| {
                    x.gcd(&d) == 1 && x % m == 1 % m && table.value_exponent(t, x) != Some(0)
                })
            })
        })
        .collect()
}

/// `Σ_{d≤D} φ(d)/d Σ*_χ |Σ_i a_i χ(P(i))|²` over every character of every
/// modulus, keeping the primitive ones by [`primitive_indices_by_kernel`]
/// and evaluating `χ(P(i))` term by term.
pub fn corollary_lhs_direct<T: Real>(
    poly: &IntPolynomial,
    d_max: u64,
    points: &[i64],
    weights: &[Complex<T>],
) -> T {
    let mut total = T::zero();
    for d in 1..=d_max {
        let table = CharacterTable::new(d).expect("d >= 1");
        let phi = (0..d).filter(|x| x.gcd(&d) == 1).count();
        let mut inner = T::zero();
        for t in primitive_indices_by_kernel(&table) {
            let s = points
                .iter()
                .zip(weights)
                .fold(Complex::<T>::zero(), |acc, (&i, a)| {
                    acc + *a * table.value::<T>(t, residue(&poly.eval_i64(i), d))
                });
            inner = inner + s.norm_sqr();
        }
        total = total + inner * T::from_usize(phi).unwrap() / T::from_u64(d).unwrap();
    }
    total
}
