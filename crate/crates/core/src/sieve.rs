//! The large-sieve quadratic form `Σ_{x∈F(Q)} |Σ_{i∈I} a_i e(x P(i))|²`.
//!
//! Two independent evaluations are provided: [`lhs_numeric`] sums the
//! exponentials fraction by fraction, [`lhs_exact`] expands the square into
//! `Σ_{i,j} a_i ā_j K(P(i) − P(j))` with exact integer kernels. The row
//! quantities of the Gram matrix and their successive majorants are exposed
//! through [`row_chain`] and collected, together with the logarithmic
//! envelope, in a [`SieveReport`].

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::gcd_residue;
use crate::error::{domain, Error, Result};
use crate::farey::{farey_size, KernelEvaluator};
use crate::polynomial::{residue, IntPolynomial};
use crate::polyroots::RhoProfile;
use crate::scalar::{unit_root, CompensatedSum, Field, Real};

/// Default cap on `|F(Q)|·N` (numeric path) and on `N²` (exact path).
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Polynomial, Farey order, interval `I = (M, M+N]` and weights on `I`.
#[derive(Debug, Clone)]
pub struct SieveInstance<T> {
    poly: IntPolynomial,
    q_max: u64,
    start: i64,
    weights: Vec<Complex<T>>,
    budget: u64,
}

impl<T: Real> SieveInstance<T> {
    /// `weights[t]` is attached to the point `M + 1 + t`.
    pub fn new(
        poly: IntPolynomial,
        q_max: u64,
        start: i64,
        weights: Vec<Complex<T>>,
    ) -> Result<Self> {
        if q_max == 0 {
            return domain("sieve order Q must be >= 1");
        }
        if weights.is_empty() {
            return domain("interval length N must be >= 1");
        }
        if start.checked_add(weights.len() as i64).is_none() {
            return domain("interval end overflows i64");
        }
        Ok(Self {
            poly,
            q_max,
            start,
            weights,
            budget: DEFAULT_BUDGET,
        })
    }

    /// All weights equal to one.
    pub fn unit_weights(poly: IntPolynomial, q_max: u64, start: i64, len: u64) -> Result<Self> {
        Self::new(
            poly,
            q_max,
            start,
            vec![Complex::new(T::one(), T::zero()); len as usize],
        )
    }

    pub fn from_integer_weights(
        poly: IntPolynomial,
        q_max: u64,
        start: i64,
        weights: &[i64],
    ) -> Result<Self> {
        let w = weights
            .iter()
            .map(|&a| Complex::new(T::from_i64(a).unwrap(), T::zero()))
            .collect();
        Self::new(poly, q_max, start, w)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn q_max(&self) -> u64 {
        self.q_max
    }

    /// `M`, with `I = {M+1, …, M+N}`.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// `N = |I|`.
    pub fn len(&self) -> u64 {
        self.weights.len() as u64
    }

    /// Always false: instances have `N ≥ 1`.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Complex<T>] {
        &self.weights
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn points(&self) -> impl Iterator<Item = i64> + '_ {
        (1..=self.len() as i64).map(move |t| self.start + t)
    }

    /// `‖a‖² = Σ|a_i|²`.
    pub fn norm_sqr(&self) -> T {
        self.weights
            .iter()
            .map(|a| a.norm_sqr())
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// The weights as integers, when every weight is a real integer below 2⁵³.
    pub fn integer_weights(&self) -> Option<Vec<i64>> {
        let limit = T::from_f64(9.007_199_254_740_992e15).unwrap();
        self.weights
            .iter()
            .map(|a| {
                (a.im.is_zero() && a.re.fract().is_zero() && a.re.abs() < limit)
                    .then(|| a.re.to_i64())
                    .flatten()
            })
            .collect()
    }

    /// Exact values `P(i)` for `i ∈ I`.
    pub fn values(&self) -> Vec<BigInt> {
        self.points().map(|i| self.poly.eval_i64(i)).collect()
    }

    fn check_numeric_budget(&self) -> Result<u64> {
        let terms = farey_size(self.q_max)?.saturating_mul(self.len());
        if terms > self.budget {
            return Err(Error::Resource(format!(
                "|F(Q)|·N = {terms} fraction-term products exceeds budget {}",
                self.budget
            )));
        }
        Ok(terms)
    }

    fn check_exact_budget(&self) -> Result<()> {
        let pairs = self.len().saturating_mul(self.len());
        if pairs > self.budget {
            return Err(Error::Resource(format!(
                "N² = {pairs} kernel evaluations exceeds budget {}",
                self.budget
            )));
        }
        Ok(())
    }
}

/// `P(i) mod q` for every `i ∈ I` and `q ≤ Q`, indexed `[q - 1][i]`.
fn residue_table(values: &[BigInt], q_max: u64) -> Vec<Vec<u64>> {
    (1..=q_max)
        .map(|q| values.iter().map(|v| residue(v, q)).collect())
        .collect()
}

/// Direct evaluation of `Σ_{x∈F(Q)} |Σ_i a_i e(x P(i))|²`.
///
/// Each phase is the exact residue `p·P(i) mod q`; only the final `e(r/q)`
/// is formed in floating point. Fractions are grouped by denominator and
/// summed in a fixed order, so the result does not depend on the number of
/// worker threads.
pub fn lhs_numeric<T: Real>(inst: &SieveInstance<T>) -> Result<T> {
    inst.check_numeric_budget()?;
    let values = inst.values();
    let table = residue_table(&values, inst.q_max);
    let per_denominator: Vec<Vec<T>> = table
        .par_iter()
        .enumerate()
        .map(|(idx, residues)| {
            let q = idx as u64 + 1;
            let roots: Vec<Complex<T>> = (0..q).map(|r| unit_root(r, q)).collect();
            (0..q)
                .filter(|&p| gcd_residue(p, q) == 1)
                .map(|p| {
                    let s = residues.iter().zip(&inst.weights).fold(
                        Complex::<T>::zero(),
                        |acc, (&r, a)| {
                            acc + *a * roots[((p as u128 * r as u128) % q as u128) as usize]
                        },
                    );
                    s.norm_sqr()
                })
                .collect()
        })
        .collect();
    Ok(per_denominator
        .into_iter()
        .flatten()
        .collect::<CompensatedSum<T>>()
        .value())
}

/// Gram matrix `K(P(i) − P(j))` over `I × I`, with kernels memoized by `|c|`.
pub fn kernel_matrix(poly: &IntPolynomial, q_max: u64, points: &[i64]) -> Result<Vec<Vec<i64>>> {
    let mut eval = KernelEvaluator::new(q_max)?;
    let values: Vec<BigInt> = points.iter().map(|&i| poly.eval_i64(i)).collect();
    let n = values.len();
    let mut k = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = eval.kernel(&(&values[i] - &values[j]));
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    Ok(k)
}

fn instance_kernels<T: Real>(inst: &SieveInstance<T>) -> Result<Vec<Vec<i64>>> {
    inst.check_exact_budget()?;
    let points: Vec<i64> = inst.points().collect();
    kernel_matrix(&inst.poly, inst.q_max, &points)
}

fn quadratic_form(kernels: &[Vec<i64>], a: &[i64]) -> BigInt {
    kernels
        .iter()
        .zip(a)
        .fold(BigInt::zero(), |acc, (row, &ai)| {
            let row_sum: i128 = row
                .iter()
                .zip(a)
                .map(|(&k, &aj)| k as i128 * aj as i128)
                .sum();
            acc + BigInt::from(ai) * BigInt::from(row_sum)
        })
}

/// `Σ_{i,j} a_i a_j K(i, j)` for integer weights, exactly.
pub fn lhs_exact<T: Real>(inst: &SieveInstance<T>) -> Result<BigInt> {
    let a = inst
        .integer_weights()
        .ok_or_else(|| Error::Domain("lhs_exact requires integer weights".into()))?;
    Ok(quadratic_form(&instance_kernels(inst)?, &a))
}

/// The row attaining `sup_j Σ_i |K(i, j)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSup {
    pub j: i64,
    pub value: u64,
}

fn row_sup_from(kernels: &[Vec<i64>], points: &[i64]) -> RowSup {
    let mut best = RowSup {
        j: points[0],
        value: 0,
    };
    for (col, &j) in points.iter().enumerate() {
        let s: u64 = kernels.iter().map(|row| row[col].unsigned_abs()).sum();
        if s > best.value {
            best = RowSup { j, value: s };
        }
    }
    best
}

/// `sup_{j∈I} Σ_{i∈I} |K(i, j)|` with its maximizing `j` (the first on ties).
pub fn row_sup<T: Real>(inst: &SieveInstance<T>) -> Result<RowSup> {
    let kernels = instance_kernels(inst)?;
    let points: Vec<i64> = inst.points().collect();
    Ok(row_sup_from(&kernels, &points))
}

fn shifted_profile(poly: &IntPolynomial, value_at_j: &BigInt, q_max: u64) -> Result<RhoProfile> {
    RhoProfile::compute(&poly.shift_constant(value_at_j), q_max)
}

/// `max_{j∈I} 2Q(N+Q)·Σ_{k≤Q} ρ_j(k)/k`, where `ρ_j` counts roots of `P(T) − P(j)`.
pub fn row_sup_majorant<S: Field, T: Real>(inst: &SieveInstance<T>) -> Result<S> {
    let q = inst.q_max;
    let scale = S::from_u64(2 * q * (inst.len() + q)).unwrap();
    let mut best: Option<S> = None;
    for v in inst.values() {
        let s = scale.clone() * shifted_profile(&inst.poly, &v, q)?.partial_sum_as::<S>();
        if best.as_ref().is_none_or(|b| s > *b) {
            best = Some(s);
        }
    }
    Ok(best.expect("nonempty interval"))
}

/// Row-wise maxima of each stage in the bound chain for `Σ_i |K(i, j)|`.
///
/// For every `j ∈ I` the following hold and are checked exactly:
///
/// ```text
/// Σ_i |K(i,j)|  ≤  Σ_i Σ_{q≤Q} (c(i,j), q)
///               ≤  2Q Σ_i #{k ≤ Q : k | c(i,j)}
///               ≤  2Q Σ_{k≤Q} ρ_j(k) (N/k + 1)
///               ≤  2Q (N+Q) Σ_{k≤Q} ρ_j(k)/k
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RowChain {
    pub row_sup: RowSup,
    pub gcd_sum: u64,
    pub divisor_bound: u64,
    pub rho_bound: BigRational,
    pub majorant: BigRational,
    /// Every per-row inequality of the chain held.
    pub rows_ok: bool,
}

/// `(Σ|K|, Σ gcd, divisor bound, ρ bound, majorant)` for one row.
type RowTerms = (u64, u64, u64, BigRational, BigRational);

fn row_chain_with(
    inst_poly: &IntPolynomial,
    q_max: u64,
    points: &[i64],
    kernels: &[Vec<i64>],
) -> Result<RowChain> {
    let values: Vec<BigInt> = points.iter().map(|&i| inst_poly.eval_i64(i)).collect();
    let table = residue_table(&values, q_max);
    let n = points.len() as u64;
    let two_q = 2 * q_max;
    let rows: Vec<Result<RowTerms>> = (0..points.len())
        .into_par_iter()
        .map(|col| {
            let mut abs_k = 0u64;
            let mut gcds = 0u64;
            let mut divs = 0u64;
            for row in 0..points.len() {
                abs_k += kernels[row][col].unsigned_abs();
                for q in 1..=q_max {
                    let res = &table[(q - 1) as usize];
                    let c = (res[row] + q - res[col]) % q;
                    gcds += gcd_residue(c, q);
                    divs += (c == 0) as u64;
                }
            }
            let profile = shifted_profile(inst_poly, &values[col], q_max)?;
            let rho_bound = (1..=q_max).fold(BigRational::zero(), |acc, k| {
                acc + BigRational::from_integer(profile.rho(k).into())
                    * (BigRational::new(n.into(), k.into()) + BigRational::from_integer(1.into()))
            }) * BigRational::from_integer(two_q.into());
            let majorant = profile.partial_sum().clone()
                * BigRational::from_integer((two_q * (n + q_max)).into());
            Ok((abs_k, gcds, two_q * divs, rho_bound, majorant))
        })
        .collect();
    let mut rows_ok = true;
    let mut best: Option<RowChain> = None;
    for (col, row) in rows.into_iter().enumerate() {
        let (abs_k, gcds, divs, rho_bound, majorant) = row?;
        rows_ok &= abs_k <= gcds
            && gcds <= divs
            && BigRational::from_integer(divs.into()) <= rho_bound
            && rho_bound <= majorant;
        match best.as_mut() {
            None => {
                best = Some(RowChain {
                    row_sup: RowSup {
                        j: points[col],
                        value: abs_k,
                    },
                    gcd_sum: gcds,
                    divisor_bound: divs,
                    rho_bound,
                    majorant,
                    rows_ok: true,
                })
            }
            Some(b) => {
                if abs_k > b.row_sup.value {
                    b.row_sup = RowSup {
                        j: points[col],
                        value: abs_k,
                    };
                }
                b.gcd_sum = b.gcd_sum.max(gcds);
                b.divisor_bound = b.divisor_bound.max(divs);
                if rho_bound > b.rho_bound {
                    b.rho_bound = rho_bound;
                }
                if majorant > b.majorant {
                    b.majorant = majorant;
                }
            }
        }
    }
    let mut chain = best.expect("nonempty interval");
    chain.rows_ok = rows_ok;
    Ok(chain)
}

/// Evaluates every stage of the row bound chain.
pub fn row_chain<T: Real>(inst: &SieveInstance<T>) -> Result<RowChain> {
    let kernels = instance_kernels(inst)?;
    let points: Vec<i64> = inst.points().collect();
    row_chain_with(&inst.poly, inst.q_max, &points, &kernels)
}

/// `max(log x, 1)` below 3 (flagged), `log x` from 3 on.
pub(crate) fn guarded_log<T: Real>(x: u64) -> (T, bool) {
    if x < 3 {
        (T::one(), true)
    } else {
        (T::from_u64(x).unwrap().ln(), false)
    }
}

/// Left side, envelope `Q(N+Q)(log Q)^{ω(c₀)+θ(k)}‖a‖²`, and the row chain.
#[derive(Debug, Clone)]
pub struct SieveReport<T> {
    pub lhs: T,
    pub lhs_exact: Option<BigInt>,
    pub norm_sqr: T,
    pub envelope_exponent: u64,
    pub log_factor: T,
    /// `Q < 3`: the logarithm was replaced by 1.
    pub log_substituted: bool,
    pub rhs_envelope: T,
    pub ratio: T,
    pub row_sup: RowSup,
    pub row_gcd_sum: u64,
    pub row_divisor_bound: u64,
    pub row_rho_bound: T,
    pub row_sup_bound: T,
    pub row_chain_ok: bool,
}

fn rational_to<T: Real>(r: &BigRational) -> T {
    T::from_f64(r.to_f64().unwrap_or(f64::INFINITY)).unwrap()
}

pub fn theorem1_report<T: Real>(inst: &SieveInstance<T>) -> Result<SieveReport<T>> {
    let exponent = inst.poly.envelope_exponent()?;
    let lhs = lhs_numeric(inst)?;
    let kernels = instance_kernels(inst)?;
    let points: Vec<i64> = inst.points().collect();
    let lhs_exact = inst.integer_weights().map(|a| quadratic_form(&kernels, &a));
    let chain = row_chain_with(&inst.poly, inst.q_max, &points, &kernels)?;
    let norm_sqr = inst.norm_sqr();
    let (log_factor, log_substituted) = guarded_log::<T>(inst.q_max);
    let q = T::from_u64(inst.q_max).unwrap();
    let n = T::from_u64(inst.len()).unwrap();
    let rhs_envelope = q * (n + q) * log_factor.powi(exponent as i32) * norm_sqr;
    let ratio = if norm_sqr.is_zero() {
        T::zero()
    } else {
        lhs / rhs_envelope
    };
    Ok(SieveReport {
        lhs,
        lhs_exact,
        norm_sqr,
        envelope_exponent: exponent,
        log_factor,
        log_substituted,
        rhs_envelope,
        ratio,
        row_sup: chain.row_sup,
        row_gcd_sum: chain.gcd_sum,
        row_divisor_bound: chain.divisor_bound,
        row_rho_bound: rational_to(&chain.rho_bound),
        row_sup_bound: rational_to(&chain.majorant),
        row_chain_ok: chain.rows_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_traits::One;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn numeric_examples() {
        let inst = SieveInstance::<f64>::unit_weights(poly(&[1, 0]), 1, 0, 7).unwrap();
        assert!((lhs_numeric(&inst).unwrap() - 49.0).abs() < 1e-9);
        let inst = SieveInstance::<f64>::unit_weights(poly(&[5, -2, 9]), 3, 0, 1).unwrap();
        assert!((lhs_numeric(&inst).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exact_examples() {
        let sq = poly(&[1, 0, 0]);
        let zero = SieveInstance::<f64>::from_integer_weights(sq.clone(), 5, 0, &[0; 6]).unwrap();
        assert!(lhs_exact(&zero).unwrap().is_zero());
        let single =
            SieveInstance::<f64>::from_integer_weights(sq.clone(), 9, 3, &[0, 0, 1, 0]).unwrap();
        assert_eq!(
            lhs_exact(&single).unwrap(),
            BigInt::from(farey_size(9).unwrap())
        );
        let ones = SieveInstance::<f64>::unit_weights(sq, 5, 0, 10).unwrap();
        let exact = lhs_exact(&ones).unwrap().to_f64().unwrap();
        let numeric = lhs_numeric(&ones).unwrap();
        assert!((exact - numeric).abs() <= 1e-6 * exact);
        let direct: f64 =
            oracle::sieve_lhs_direct(&oracle::farey_enumerated(5), &ones.values(), ones.weights());
        assert!((direct - exact).abs() <= 1e-9 * exact);
    }

    #[test]
    fn exact_requires_integer_weights() {
        let inst =
            SieveInstance::new(poly(&[1, 0]), 4, 0, vec![Complex::new(0.5f64, 0.0)]).unwrap();
        assert!(matches!(lhs_exact(&inst), Err(Error::Domain(_))));
    }

    #[test]
    fn budgets_are_enforced() {
        let inst = SieveInstance::<f64>::unit_weights(poly(&[1, 0]), 10, 0, 100)
            .unwrap()
            .with_budget(1000);
        assert!(matches!(lhs_numeric(&inst), Err(Error::Resource(_))));
        assert!(matches!(lhs_exact(&inst), Err(Error::Resource(_))));
    }

    #[test]
    fn row_sup_examples() {
        let one = SieveInstance::<f64>::unit_weights(poly(&[3, 1, 4]), 6, 17, 1).unwrap();
        assert_eq!(
            row_sup(&one).unwrap(),
            RowSup {
                j: 18,
                value: farey_size(6).unwrap()
            }
        );
        let inst = SieveInstance::<f64>::unit_weights(poly(&[1, 0, 0]), 10, 0, 20).unwrap();
        let rs = row_sup(&inst).unwrap();
        let fractions = oracle::farey_enumerated(10);
        let values = inst.values();
        let direct = values
            .iter()
            .map(|vj| {
                values
                    .iter()
                    .map(|vi| {
                        let z: Complex<f64> = oracle::farey_exponential_sum(&fractions, &(vi - vj));
                        z.re.abs()
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        assert!((direct - rs.value as f64).abs() < 1e-6);
    }

    #[test]
    fn majorant_examples() {
        // ρ_j ≡ 1 for P = T
        for (q, n) in [(1u64, 6u64), (4, 9), (7, 3)] {
            let inst = SieveInstance::<f64>::unit_weights(poly(&[1, 0]), q, -4, n).unwrap();
            let h: BigRational = (1..=q)
                .map(|k| BigRational::new(BigInt::one(), k.into()))
                .sum();
            let expected = h * BigRational::from_integer((2 * q * (n + q)).into());
            let got: BigRational = row_sup_majorant(&inst).unwrap();
            assert_eq!(got, expected);
        }
        let inst = SieveInstance::<f64>::unit_weights(poly(&[2, 0, 1]), 1, 0, 5).unwrap();
        let got: f64 = row_sup_majorant(&inst).unwrap();
        assert_eq!(got, 2.0 * 6.0);
    }

    #[test]
    fn report_examples() {
        let inst = SieveInstance::<f64>::unit_weights(poly(&[1, 0]), 3, 0, 1).unwrap();
        let r = theorem1_report(&inst).unwrap();
        assert!((r.lhs - 4.0).abs() < 1e-12);
        assert_eq!(r.lhs_exact, Some(BigInt::from(4)));
        let envelope = 3.0 * 4.0 * 3f64.ln();
        assert!((r.rhs_envelope - envelope).abs() < 1e-12);
        assert!((r.ratio - 4.0 / envelope).abs() < 1e-12);
        assert!(!r.log_substituted);

        let zero =
            SieveInstance::<f64>::from_integer_weights(poly(&[1, 0, 0]), 5, 0, &[0, 0, 0]).unwrap();
        assert_eq!(theorem1_report(&zero).unwrap().ratio, 0.0);

        let small = SieveInstance::<f64>::unit_weights(poly(&[1, 0, 0]), 2, 0, 4).unwrap();
        let r = theorem1_report(&small).unwrap();
        assert!(r.log_substituted);
        assert_eq!(r.log_factor, 1.0);

        let big = SieveInstance::<f64>::unit_weights(poly(&[1, 0, 0]), 20, 0, 50).unwrap();
        let r = theorem1_report(&big).unwrap();
        assert!(r.ratio <= 10.0 && r.ratio > 0.0);
        assert!(r.row_chain_ok);
    }

    #[test]
    fn f32_path_tracks_f64() {
        let a = SieveInstance::<f32>::unit_weights(poly(&[1, 0, 0]), 6, 0, 8).unwrap();
        let b = SieveInstance::<f64>::unit_weights(poly(&[1, 0, 0]), 6, 0, 8).unwrap();
        let (x, y) = (lhs_numeric(&a).unwrap() as f64, lhs_numeric(&b).unwrap());
        assert!((x - y).abs() <= 1e-4 * y);
    }
}
