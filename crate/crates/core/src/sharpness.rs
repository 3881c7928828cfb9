//! Power sums `Σ e((p·iⁿ + k·i)/q)` over a prime modulus and the lower bound
//! they force on the sieve form for `P(T) = Tⁿ`.

use num_complex::Complex;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{is_prime, pow_mod, primes_up_to};
use crate::error::{domain, Error, Result};
use crate::polynomial::IntPolynomial;
use crate::scalar::{unit_root, Real};
use crate::sieve::{lhs_numeric, SieveInstance, DEFAULT_BUDGET};

/// Slack added to the floating-point comparisons against the Weil and
/// incomplete-sum bounds.
pub const BOUND_SLACK: f64 = 1e-6;

/// Exponent `n`, prime `q`, twist `p` coprime to `q`, linear twist `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerSumInstance {
    n: u32,
    q: u64,
    p: u64,
    k: u64,
}

impl PowerSumInstance {
    pub fn new(n: u32, q: u64, p: u64, k: u64) -> Result<Self> {
        if n < 2 {
            return domain("power sums need n >= 2");
        }
        if !is_prime(q) {
            return domain(format!("{q} is not prime"));
        }
        if p == 0 || p >= q {
            return domain(format!("twist p = {p} must lie in [1, {}]", q - 1));
        }
        if k >= q {
            return domain(format!("linear twist k = {k} must lie in [0, {}]", q - 1));
        }
        Ok(Self { n, q, p, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Exact phase numerator `p·iⁿ + k·i mod q`.
    fn phase(&self, i: u64) -> u64 {
        let q = self.q as u128;
        let v = self.p as u128 * pow_mod(i, self.n as u64, self.q) as u128
            + self.k as u128 * (i % self.q) as u128;
        (v % q) as u64
    }
}

/// `Σ_{1≤i≤m} e((p·iⁿ + k·i)/q)` for `1 ≤ m ≤ q`.
pub fn complete_sum<T: Real>(inst: &PowerSumInstance, m: u64) -> Result<Complex<T>> {
    if m == 0 || m > inst.q {
        return domain(format!(
            "partial length m = {m} must lie in [1, {}]",
            inst.q
        ));
    }
    Ok((1..=m).fold(Complex::zero(), |acc, i| {
        acc + unit_root::<T>(inst.phase(i), inst.q)
    }))
}

/// `N_q = #{(i, j) ∈ [1,q]² : iⁿ ≡ jⁿ mod q}`, counted over all residues.
pub fn solution_count(n: u32, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return domain(format!("{q} is not prime"));
    }
    let mut histogram = vec![0u64; q as usize];
    for i in 1..=q {
        histogram[pow_mod(i, n as u64, q) as usize] += 1;
    }
    Ok(histogram.iter().map(|c| c * c).sum())
}

/// `1 + gcd(n, q−1)·(q−1)`.
pub fn solution_count_closed_form(n: u32, q: u64) -> u64 {
    1 + (n as u64).gcd(&(q - 1)) * (q - 1)
}

/// `Σ_{1≤p≤q−1} |Σ_{1≤i≤q} e(p·iⁿ/q)|²` computed exactly from `N_q`, with the
/// value it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecondMoment {
    pub n: u32,
    pub q: u64,
    /// `q·N_q − q²`.
    pub lhs: u64,
    pub gcd: u64,
    /// `(gcd(n, q−1) − 1)·q·(q−1)`.
    pub general_rhs: u64,
    /// `(n − 1)·q·(q−1)`.
    pub rhs: u64,
    /// `n | q − 1`, the case in which `lhs = rhs` is asserted.
    pub applicable: bool,
}

/// Evaluates the second moment of the complete power sums for any `n ≥ 1`
/// and prime `q`, without judging applicability.
pub fn second_moment(n: u32, q: u64) -> Result<SecondMoment> {
    if n == 0 {
        return domain("n must be >= 1");
    }
    let count = solution_count(n, q)?;
    let lhs = q * count - q * q;
    let gcd = (n as u64).gcd(&(q - 1));
    Ok(SecondMoment {
        n,
        q,
        lhs,
        gcd,
        general_rhs: (gcd - 1) * q * (q - 1),
        rhs: (n as u64 - 1) * q * (q - 1),
        applicable: (q - 1).is_multiple_of(n as u64),
    })
}

/// Result of [`ex1_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ex1Check {
    pub lhs: u64,
    pub rhs: u64,
    pub ok: bool,
}

/// Exact identity `Σ_{p=1}^{q−1} |Σ_{i=1}^{q} e(p·iⁿ/q)|² = (n−1)q(q−1)` for
/// primes `q ≡ 1 mod n`. Other primes are a precondition failure whose
/// message carries the general value `(gcd(n, q−1) − 1)q(q−1)`.
pub fn ex1_check(n: u32, q: u64) -> Result<Ex1Check> {
    if n < 2 {
        return domain("n must be >= 2");
    }
    let m = second_moment(n, q)?;
    if !m.applicable {
        return Err(Error::Precondition(format!(
            "q = {q} is not 1 mod n = {n}; general value q·N_q − q² = {} = (gcd(n,q−1) − 1)q(q−1) with gcd {}",
            m.lhs, m.gcd
        )));
    }
    Ok(Ex1Check {
        lhs: m.lhs,
        rhs: m.rhs,
        ok: m.lhs == m.rhs,
    })
}

/// Floating-point second moment `Σ_{p=1}^{q−1} |complete_sum(p, m = q)|²`.
pub fn second_moment_numeric<T: Real>(n: u32, q: u64) -> Result<T> {
    let mut acc = T::zero();
    for p in 1..q {
        let z = complete_sum::<T>(&PowerSumInstance::new(n, q, p, 0)?, q)?;
        acc = acc + z.norm_sqr();
    }
    Ok(acc)
}

/// Largest observed modulus against a bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck<T> {
    pub max_modulus: T,
    pub bound: T,
    pub ok: bool,
}

fn check_prime_above(n: u32, q: u64) -> Result<()> {
    if n < 2 {
        return domain("n must be >= 2");
    }
    if !is_prime(q) {
        return domain(format!("{q} is not prime"));
    }
    if q <= n as u64 {
        return Err(Error::Precondition(format!(
            "need q > n, got q = {q}, n = {n}"
        )));
    }
    Ok(())
}

/// `max_{p,k} |Σ_{i=1}^{q} e((p·iⁿ + k·i)/q)|` against `(n−1)√q`.
pub fn weil_extremes<T: Real>(n: u32, q: u64) -> Result<BoundCheck<T>> {
    check_prime_above(n, q)?;
    let roots: Vec<Complex<T>> = (0..q).map(|r| unit_root(r, q)).collect();
    let powers: Vec<u64> = (1..=q).map(|i| pow_mod(i, n as u64, q)).collect();
    let mut max_modulus = T::zero();
    for p in 1..q {
        for k in 0..q {
            let s = powers
                .iter()
                .zip(1..=q)
                .fold(Complex::<T>::zero(), |acc, (&pw, i)| {
                    let phase =
                        ((p as u128 * pw as u128 + k as u128 * i as u128) % q as u128) as usize;
                    acc + roots[phase]
                });
            max_modulus = max_modulus.max(s.norm());
        }
    }
    let bound = T::from_u32(n - 1).unwrap() * T::from_u64(q).unwrap().sqrt();
    let ok = max_modulus <= bound + T::from_f64(BOUND_SLACK).unwrap();
    Ok(BoundCheck {
        max_modulus,
        bound,
        ok,
    })
}

pub fn weil_check(n: u32, q: u64) -> Result<bool> {
    Ok(weil_extremes::<f64>(n, q)?.ok)
}

/// `max_{p,m} |Σ_{i=1}^{m} e(p·iⁿ/q)|` against `2(n−1)√q·log q`.
pub fn incomplete_extremes<T: Real>(n: u32, q: u64) -> Result<BoundCheck<T>> {
    check_prime_above(n, q)?;
    let roots: Vec<Complex<T>> = (0..q).map(|r| unit_root(r, q)).collect();
    let powers: Vec<u64> = (1..=q).map(|i| pow_mod(i, n as u64, q)).collect();
    let mut max_modulus = T::zero();
    for p in 1..q {
        let mut s = Complex::<T>::zero();
        for &pw in &powers {
            s = s + roots[((p as u128 * pw as u128) % q as u128) as usize];
            max_modulus = max_modulus.max(s.norm());
        }
    }
    let qf = T::from_u64(q).unwrap();
    let bound = T::from_u32(2 * (n - 1)).unwrap() * qf.sqrt() * qf.ln();
    let ok = max_modulus <= bound + T::from_f64(BOUND_SLACK).unwrap();
    Ok(BoundCheck {
        max_modulus,
        bound,
        ok,
    })
}

pub fn incomplete_check(n: u32, q: u64) -> Result<bool> {
    Ok(incomplete_extremes::<f64>(n, q)?.ok)
}

/// The sieve form for `Tⁿ` on `(0, N]` with unit weights against the floor
/// `(n−1)N²Q / (16 log Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundDemo<T> {
    pub lhs: T,
    /// `Σ_{n<q≤Q, q prime} Σ_{p=1}^{q−1} |Σ_{0<i≤N} e(p·iⁿ/q)|²`, the part of
    /// the form carried by prime denominators above `n`.
    pub prime_part: T,
    /// Contribution of each prime denominator `q` to `prime_part`.
    pub per_prime: Vec<(u64, T)>,
    /// `(n−1)N²/8`, the per-prime minorant.
    pub per_prime_floor: T,
    pub floor: T,
    pub ok: bool,
}

/// Requires `Q ≥ n²` and `N ≥ 8(n−1)Q log Q`.
pub fn lower_bound_demo<T: Real>(n: u32, q_max: u64, len: u64) -> Result<LowerBoundDemo<T>> {
    lower_bound_demo_with_budget(n, q_max, len, DEFAULT_BUDGET)
}

pub fn lower_bound_demo_with_budget<T: Real>(
    n: u32,
    q_max: u64,
    len: u64,
    budget: u64,
) -> Result<LowerBoundDemo<T>> {
    if n < 2 {
        return domain("n must be >= 2");
    }
    if q_max < (n as u64).pow(2) {
        return Err(Error::Precondition(format!(
            "need Q >= n² = {}, got Q = {q_max}",
            n * n
        )));
    }
    let log_q = (q_max as f64).ln();
    let needed = 8.0 * (n - 1) as f64 * q_max as f64 * log_q;
    if (len as f64) < needed {
        return Err(Error::Precondition(format!(
            "need N >= 8(n−1)Q log Q = {needed:.3}, got N = {len}"
        )));
    }
    let inst =
        SieveInstance::<T>::unit_weights(IntPolynomial::monomial(n as usize), q_max, 0, len)?
            .with_budget(budget);
    let lhs = lhs_numeric(&inst)?;

    let mut per_prime = Vec::new();
    let mut prime_part = T::zero();
    for q in primes_up_to(q_max).into_iter().filter(|&q| q > n as u64) {
        let roots: Vec<Complex<T>> = (0..q).map(|r| unit_root(r, q)).collect();
        let powers: Vec<u64> = (1..=len).map(|i| pow_mod(i, n as u64, q)).collect();
        let mut total = T::zero();
        for p in 1..q {
            let s = powers.iter().fold(Complex::<T>::zero(), |acc, &pw| {
                acc + roots[((p as u128 * pw as u128) % q as u128) as usize]
            });
            total = total + s.norm_sqr();
        }
        prime_part = prime_part + total;
        per_prime.push((q, total));
    }
    let nf = T::from_u64(len).unwrap();
    let n1 = T::from_u32(n - 1).unwrap();
    let floor = n1 * nf * nf * T::from_u64(q_max).unwrap()
        / (T::from_u32(16).unwrap() * T::from_f64(log_q).unwrap());
    let per_prime_floor = n1 * nf * nf / T::from_u32(8).unwrap();
    Ok(LowerBoundDemo {
        ok: lhs >= floor,
        lhs,
        prime_part,
        per_prime,
        per_prime_floor,
        floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_complex::Complex64;

    #[test]
    fn complete_sum_examples() {
        let z: Complex64 = complete_sum(&PowerSumInstance::new(2, 5, 1, 0).unwrap(), 5).unwrap();
        assert!((z.norm() - 5f64.sqrt()).abs() < 1e-12);
        let z: Complex64 = complete_sum(&PowerSumInstance::new(3, 7, 1, 0).unwrap(), 7).unwrap();
        let expected = 1.0 + 6.0 * (std::f64::consts::TAU / 7.0).cos();
        assert!((z.re - expected).abs() < 1e-12 && z.im.abs() < 1e-12);
        assert!((z.re - 4.7409).abs() < 1e-4);
        assert!(PowerSumInstance::new(1, 7, 1, 0).is_err());
        assert!(PowerSumInstance::new(2, 9, 1, 0).is_err());
        assert!(PowerSumInstance::new(2, 7, 0, 0).is_err());
        assert!(complete_sum::<f64>(&PowerSumInstance::new(2, 7, 1, 0).unwrap(), 8).is_err());
    }

    #[test]
    fn solution_count_examples() {
        assert_eq!(solution_count(2, 5).unwrap(), 9);
        assert_eq!(solution_count(3, 7).unwrap(), 19);
        assert_eq!(solution_count(3, 5).unwrap(), 5);
        for (n, q) in [(2, 5), (3, 7), (3, 5)] {
            assert_eq!(
                solution_count(n, q).unwrap(),
                oracle::power_collision_count(n, q)
            );
            assert_eq!(
                solution_count(n, q).unwrap(),
                solution_count_closed_form(n, q)
            );
        }
    }

    #[test]
    fn ex1_examples() {
        assert_eq!(
            ex1_check(2, 5).unwrap(),
            Ex1Check {
                lhs: 20,
                rhs: 20,
                ok: true
            }
        );
        assert_eq!(
            ex1_check(3, 7).unwrap(),
            Ex1Check {
                lhs: 84,
                rhs: 84,
                ok: true
            }
        );
        match ex1_check(3, 5) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("= 0 ="), "{msg}"),
            other => panic!("expected precondition failure, got {other:?}"),
        }
        let m = second_moment(3, 5).unwrap();
        assert_eq!((m.lhs, m.general_rhs, m.applicable), (0, 0, false));
    }

    #[test]
    fn weil_and_incomplete_examples() {
        assert!(weil_check(3, 7).unwrap());
        assert!(weil_check(2, 5).unwrap());
        assert!(weil_check(4, 5).unwrap());
        assert!(matches!(weil_check(5, 5), Err(Error::Precondition(_))));
        let w = weil_extremes::<f64>(2, 5).unwrap();
        assert!((w.max_modulus - 5f64.sqrt()).abs() < 1e-9);
        assert!(incomplete_check(2, 11).unwrap());
        assert!(incomplete_check(3, 7).unwrap());
        assert!(incomplete_check(2, 3).unwrap());
    }

    #[test]
    fn lower_bound_examples() {
        let d = lower_bound_demo::<f64>(2, 5, 65).unwrap();
        let floor = 65.0 * 65.0 * 5.0 / (16.0 * 5f64.ln());
        assert!((d.floor - floor).abs() < 1e-9);
        assert!((d.floor - 820.4).abs() < 0.05);
        assert!(d.ok);
        assert!(d.lhs >= d.prime_part);
        let d = lower_bound_demo::<f64>(2, 4, 45).unwrap();
        assert!(d.ok);
        assert!(matches!(
            lower_bound_demo::<f64>(2, 3, 10),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            lower_bound_demo::<f64>(2, 5, 60),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn parseval_matches_counting() {
        for q in [5u64, 7, 13, 31] {
            for n in 2..=5 {
                let numeric: f64 = second_moment_numeric(n, q).unwrap();
                let exact = second_moment(n, q).unwrap().lhs as f64;
                assert!((numeric - exact).abs() <= 1e-6 * (q * q) as f64);
            }
        }
    }
}
