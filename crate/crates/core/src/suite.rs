//! The verification suite: deterministic corpora and one check per
//! property, each timed and summarized in a [`CriterionResult`].
//!
//! Every corpus is drawn from a `ChaCha8Rng` with a fixed seed, so reruns
//! see identical inputs on every platform.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::primes_up_to;
use crate::characters::{character_table, corollary_report, primitive_count_formula};
use crate::error::{Error, Result};
use crate::farey::{farey_sequence, kernel_exact};
use crate::oracle;
use crate::polynomial::{residue, IntPolynomial};
use crate::polyroots::{
    a_exponent, euler_majorant, prime_partial_sum, prime_series_bound, prop1_sum, rho_prime_power,
    spacing_check, vandermonde_check,
};
use crate::scalar::unit_root;
use crate::sharpness::{
    ex1_check, incomplete_extremes, lower_bound_demo, second_moment, weil_extremes,
};
use crate::sieve::{
    lhs_exact, lhs_numeric, row_sup, row_sup_majorant, theorem1_report, SieveInstance,
};

/// Seed shared by every corpus generator.
pub const SEED: u64 = 0x5EED_2024;

/// Modulus ceiling for the prime-power root checks.
pub const ROOT_CHECK_LIMIT: u64 = 1_000_000;

/// Ceiling on every recorded sieve and character-sum ratio.
pub const RATIO_CEILING: f64 = 10.0;

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    /// The identity or inequality being verified.
    pub paper_ref: &'static str,
    pub ok: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
}

impl CriterionResult {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|limit| self.elapsed < limit)
    }

    /// Property holds and finished in time.
    pub fn passed(&self) -> bool {
        self.ok && self.within_time()
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let limit = self
            .time_limit
            .map_or(String::from("none"), |l| format!("{:.0}s", l.as_secs_f64()));
        write!(
            f,
            "{} criterion {:>2} {}: {} [{:.2}s, limit {}]",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            limit
        )
    }
}

fn timed(
    id: u32,
    name: &'static str,
    paper_ref: &'static str,
    limit_secs: Option<u64>,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CriterionResult {
    let start = Instant::now();
    let (ok, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        paper_ref,
        ok,
        detail,
        elapsed: start.elapsed(),
        time_limit: limit_secs.map(Duration::from_secs),
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// Degree in `lo..=hi`, coefficients in `[−bound, bound]`, leading nonzero.
pub fn random_polynomial(rng: &mut impl Rng, lo: u32, hi: u32, bound: i64) -> IntPolynomial {
    let k = rng.gen_range(lo..=hi) as usize;
    let mut c: Vec<i64> = (0..=k).map(|_| rng.gen_range(-bound..=bound)).collect();
    while c[0] == 0 {
        c[0] = rng.gen_range(-bound..=bound);
    }
    IntPolynomial::from_i64(&c).expect("nonzero leading coefficient")
}

/// Fifty polynomials: ten structured ones (monomials, cyclotomic-like,
/// non-monic, repeated roots) and forty random of degree 1–4 with
/// coefficients in `[−20, 20]`.
pub fn polynomial_corpus() -> Vec<IntPolynomial> {
    let structured: [&[i64]; 10] = [
        &[1, 0],
        &[1, 0, 0],
        &[1, 0, 1],
        &[1, 0, 0, -1],
        &[1, 0, 0, 0, 0],
        &[2, 0, 3],
        &[1, -2, 1],
        &[12, 0, 0, 5],
        &[1, 0, -2, 0, 1],
        &[6, -5, 1],
    ];
    let mut out: Vec<IntPolynomial> = structured
        .iter()
        .map(|c| IntPolynomial::from_i64(c).unwrap())
        .collect();
    let mut r = rng(1);
    out.extend((0..40).map(|_| random_polynomial(&mut r, 1, 4, 20)));
    out
}

/// Two hundred integer-weight sieve instances: degree 1–4, `Q ≤ 40`,
/// `N ≤ 60`, `|M| ≤ 10⁶`, weights in `[−5, 5]`.
pub fn sieve_corpus() -> Vec<SieveInstance<f64>> {
    let mut r = rng(2);
    (0..200)
        .map(|idx| {
            let poly = random_polynomial(&mut r, 1, 4, 20);
            let q = r.gen_range(1..=40);
            let n = r.gen_range(1..=60usize);
            // a quarter of the instances sit near the origin
            let m: i64 = if idx % 4 == 0 {
                r.gen_range(-10..=10)
            } else {
                r.gen_range(-1_000_000..=1_000_000)
            };
            let mut w: Vec<i64> = (0..n).map(|_| r.gen_range(-5..=5)).collect();
            if w.iter().all(|&a| a == 0) {
                w[0] = 1;
            }
            SieveInstance::from_integer_weights(poly, q, m, &w).expect("valid instance")
        })
        .collect()
}

/// Character-sum instances: degree 2–3, `3 ≤ D ≤ 30`, `N ≤ 60`, complex
/// weights with integer parts in `[−3, 3]`.
pub fn corollary_corpus() -> Vec<SieveInstance<f64>> {
    let mut r = rng(3);
    (0..30)
        .map(|idx| {
            let poly = random_polynomial(&mut r, 2, 3, 20);
            let d = r.gen_range(3..=30);
            let n = r.gen_range(1..=60usize);
            let m: i64 = if idx % 3 == 0 {
                0
            } else {
                r.gen_range(-1_000_000..=1_000_000)
            };
            let mut w: Vec<Complex<f64>> = (0..n)
                .map(|_| Complex::new(r.gen_range(-3..=3) as f64, r.gen_range(-3..=3) as f64))
                .collect();
            if w.iter().all(|a| a.is_zero()) {
                w[0] = Complex::new(1.0, 0.0);
            }
            SieveInstance::new(poly, d, m, w).expect("valid instance")
        })
        .collect()
}

fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

pub fn kernel_identity() -> CriterionResult {
    timed(
        1,
        "kernel identity",
        "K(c) = sum of Ramanujan sums c_q(c), q <= Q",
        Some(5),
        || {
            let mut r = rng(4);
            let cases: Vec<(i64, u64)> = (0..500)
                .map(|_| {
                    (
                        r.gen_range(-1_000_000_000..=1_000_000_000),
                        r.gen_range(1..=60),
                    )
                })
                .collect();
            let sequences: Vec<_> = (0..=60)
                .map(|q| {
                    if q == 0 {
                        Vec::new()
                    } else {
                        farey_sequence(q).unwrap()
                    }
                })
                .collect();
            let mut worst = 0f64;
            for (c, q) in cases {
                let c = BigInt::from(c);
                let exact = kernel_exact(&c, q)? as f64;
                let direct: Complex<f64> =
                    oracle::farey_exponential_sum(&sequences[q as usize], &c);
                worst = worst.max((direct - Complex::new(exact, 0.0)).norm());
            }
            Ok((
                worst <= 1e-6,
                format!("500 cases, max |exact − direct| = {worst:.3e}"),
            ))
        },
    )
}

pub fn quadratic_form_equivalence() -> CriterionResult {
    timed(
        2,
        "quadratic form expansion",
        "sum over F(Q) = sum_{i,j} a_i a_j K(i,j)",
        Some(60),
        || {
            let corpus = sieve_corpus();
            let worst = corpus
                .par_iter()
                .map(|inst| -> Result<f64> {
                    let exact = lhs_exact(inst)?.to_f64().unwrap();
                    let numeric = lhs_numeric(inst)?;
                    Ok((numeric - exact).abs() / exact.max(1.0))
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0f64, f64::max);
            Ok((
                worst <= 1e-8,
                format!("{} instances, max relative gap = {worst:.3e}", corpus.len()),
            ))
        },
    )
}

pub fn power_sum_identity() -> CriterionResult {
    timed(
        3,
        "power-sum second moment",
        "sum_p |sum_i e(p i^n/q)|^2 = (n-1)q(q-1)",
        Some(10),
        || {
            let (mut exact, mut general, mut bad) = (0, 0, Vec::new());
            for n in 2..=5u32 {
                for q in primes_up_to(199) {
                    let m = second_moment(n, q)?;
                    if m.applicable {
                        let c = ex1_check(n, q)?;
                        exact += 1;
                        if !c.ok {
                            bad.push((n, q));
                        }
                    } else {
                        general += 1;
                        if m.lhs != m.general_rhs {
                            bad.push((n, q));
                        }
                    }
                }
            }
            Ok((
            bad.is_empty(),
            format!("{exact} cases with q ≡ 1 mod n exact, {general} cases of the gcd form exact, failures {bad:?}"),
        ))
        },
    )
}

/// Checks at one prime `p ∤ c₀` for one polynomial; returns a failure
/// description if any bound breaks.
fn root_bounds_at(poly: &IntPolynomial, p: u64) -> Result<Option<String>> {
    let k = poly.degree();
    let mut previous: Option<(u64, u64)> = None;
    let mut m = 1u32;
    while let Some(pm) = p.checked_pow(m).filter(|&q| q <= ROOT_CHECK_LIMIT) {
        let count = rho_prime_power(poly, p, m)?;
        if m == 1 && count > k as u64 {
            return Ok(Some(format!("{poly}: ρ({p}) = {count} > {k}")));
        }
        if let Some((c0, q0)) = previous {
            // count/pm ≤ c0/q0
            if count as u128 * q0 as u128 > c0 as u128 * pm as u128 {
                return Ok(Some(format!("{poly}: ρ({p}^{m})/{p}^{m} increased")));
            }
        }
        let cap = (k as u128 + 2) * pm as u128 / (p as u128).pow(a_exponent(m, k)?);
        if count as u128 > cap {
            return Ok(Some(format!(
                "{poly}: ρ({p}^{m}) = {count} > (k+2)p^m/p^a = {cap}"
            )));
        }
        if !spacing_check(poly, p, m)? {
            return Ok(Some(format!("{poly}: spacing fails at {p}^{m}")));
        }
        previous = Some((count, pm));
        m += 1;
    }
    Ok(None)
}

pub fn root_bounds() -> CriterionResult {
    timed(
        4,
        "prime-power root bounds",
        "rho(p) <= k, rho(p^m)/p^m decreasing, rho(p^m) <= (k+2)p^(m-a(m,k)), spacing",
        Some(60),
        || {
            let corpus = polynomial_corpus();
            let primes = primes_up_to(ROOT_CHECK_LIMIT);
            let outcomes: Vec<(u64, Option<String>)> = corpus
                .par_iter()
                .map(|poly| -> Result<(u64, Option<String>)> {
                    let mut checked = 0;
                    for &p in &primes {
                        if residue(poly.leading(), p) == 0 {
                            continue;
                        }
                        checked += 1;
                        if let Some(msg) = root_bounds_at(poly, p)? {
                            return Ok((checked, Some(msg)));
                        }
                    }
                    Ok((checked, None))
                })
                .collect::<Result<_>>()?;
            let pairs: u64 = outcomes.iter().map(|o| o.0).sum();
            let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.1).collect();
            Ok((
                failures.is_empty(),
                format!(
                    "{} polynomials, {pairs} (P, p) pairs, failures: {failures:?}",
                    corpus.len()
                ),
            ))
        },
    )
}

pub fn proposition_structure() -> CriterionResult {
    timed(
        5,
        "root-count sum structure",
        "sum rho(m)/m <= Euler product; local series <= 1 + theta/p + (k+2)C/(p(p-1))",
        Some(30),
        || {
            let corpus = polynomial_corpus();
            let results: Vec<(f64, Vec<String>)> = corpus
                .par_iter()
                .map(|poly| -> Result<(f64, Vec<String>)> {
                    let mut failures = Vec::new();
                    let mut worst = 0f64;
                    for q in [50u64, 200, 500] {
                        let sum: BigRational = prop1_sum(poly, q)?;
                        let major: BigRational = euler_majorant(poly, q)?;
                        worst = worst.max(rational_f64(&sum) / rational_f64(&major));
                        if sum > major {
                            failures.push(format!("{poly}: majorization fails at Q = {q}"));
                        }
                    }
                    for p in primes_up_to(100) {
                        if residue(poly.leading(), p) == 0 {
                            continue;
                        }
                        let local: BigRational = prime_partial_sum(poly, p, ROOT_CHECK_LIMIT)?;
                        let bound: BigRational = prime_series_bound(poly.degree(), p)?;
                        if local > bound {
                            failures.push(format!(
                                "{poly}: local series at {p} = {:.6} > {:.6}",
                                rational_f64(&local),
                                rational_f64(&bound)
                            ));
                        }
                    }
                    Ok((worst, failures))
                })
                .collect::<Result<_>>()?;
            let worst = results.iter().map(|r| r.0).fold(0f64, f64::max);
            let failures: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
            Ok((
                failures.is_empty(),
                format!("max sum/majorant = {worst:.4}, failures: {failures:?}"),
            ))
        },
    )
}

pub fn bound_chain() -> CriterionResult {
    timed(
        6,
        "row bound chain",
        "lhs <= sup_j sum_i |K(i,j)| ||a||^2 <= 2Q(N+Q) sum rho_j(k)/k ||a||^2",
        None,
        || {
            let corpus = sieve_corpus();
            let failures: Vec<String> = corpus
                .par_iter()
                .enumerate()
                .map(|(idx, inst)| -> Result<Option<String>> {
                    let norm = BigInt::from(inst.norm_sqr() as i64);
                    let lhs = lhs_exact(inst)?;
                    let sup = BigInt::from(row_sup(inst)?.value) * &norm;
                    let major: BigRational = row_sup_majorant(inst)?;
                    let major = major * BigRational::from_integer(norm);
                    let ok = lhs <= sup && BigRational::from_integer(sup.clone()) <= major;
                    Ok((!ok).then(|| format!("instance {idx}: {lhs} / {sup} / {major}")))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            Ok((
                failures.is_empty(),
                format!("{} instances, failures: {failures:?}", corpus.len()),
            ))
        },
    )
}

pub fn envelope_ratio() -> CriterionResult {
    timed(
        7,
        "sieve envelope",
        "lhs / (Q(N+Q)(log Q)^(omega(c0)+theta(k)) ||a||^2)",
        None,
        || {
            let corpus = sieve_corpus();
            let ratios: Vec<f64> = corpus
                .par_iter()
                .map(|inst| Ok(theorem1_report(inst)?.ratio))
                .collect::<Result<_>>()?;
            let max = ratios.iter().cloned().fold(0f64, f64::max);
            let translated = corpus
                .iter()
                .zip(&ratios)
                .filter(|(inst, _)| inst.start().abs() > 10)
                .map(|(_, &r)| r)
                .fold(0f64, f64::max);
            let ok = ratios.iter().all(|r| r.is_finite() && *r <= RATIO_CEILING);
            Ok((ok, format!("{} instances, max ratio = {max:.4e}, max over translated intervals = {translated:.4e}", corpus.len())))
        },
    )
}

pub fn exponential_sum_bounds() -> CriterionResult {
    timed(
        8,
        "complete and incomplete sums",
        "|sum| <= (n-1)sqrt(q); partial sums <= 2(n-1)sqrt(q) log q",
        Some(20),
        || {
            let cases: Vec<(u32, u64)> = (2..=4u32)
                .flat_map(|n| {
                    primes_up_to(97)
                        .into_iter()
                        .filter(move |&q| q > n as u64)
                        .map(move |q| (n, q))
                })
                .collect();
            let results: Vec<(u32, u64, f64, f64, bool)> = cases
                .par_iter()
                .map(|&(n, q)| -> Result<_> {
                    let w = weil_extremes::<f64>(n, q)?;
                    let i = incomplete_extremes::<f64>(n, q)?;
                    Ok((
                        n,
                        q,
                        w.max_modulus / w.bound,
                        i.max_modulus / i.bound,
                        w.ok && i.ok,
                    ))
                })
                .collect::<Result<_>>()?;
            let weil = results.iter().map(|r| r.2).fold(0f64, f64::max);
            let incomplete = results.iter().map(|r| r.3).fold(0f64, f64::max);
            let bad: Vec<(u32, u64)> = results
                .iter()
                .filter(|r| !r.4)
                .map(|r| (r.0, r.1))
                .collect();
            Ok((
            bad.is_empty(),
            format!("{} (n, q) pairs, max complete/bound = {weil:.4}, max partial/bound = {incomplete:.4}, failures {bad:?}", results.len()),
        ))
        },
    )
}

pub fn lower_bound() -> CriterionResult {
    timed(
        9,
        "sharpness lower bound",
        "lhs >= (n-1)N^2 Q / (16 log Q) for P = T^n",
        Some(5),
        || {
            let d = lower_bound_demo::<f64>(2, 5, 65)?;
            Ok((
                d.ok,
                format!(
                    "n = 2, Q = 5, N = 65: lhs = {:.3}, floor = {:.3}",
                    d.lhs, d.floor
                ),
            ))
        },
    )
}

fn orthogonality_gap(d: u64) -> Result<f64> {
    let table = character_table(d)?;
    let l = table.exponent();
    let roots: Vec<Complex<f64>> = (0..l).map(|v| unit_root(v, l)).collect();
    let units: Vec<u64> = (0..d)
        .filter(|&x| num_integer::Integer::gcd(&x, &d) == 1)
        .collect();
    let phi = table.len() as f64;
    let mut worst = 0f64;
    for a in 0..table.len() {
        for b in a..table.len() {
            let s = units.iter().fold(Complex::<f64>::zero(), |acc, &x| {
                let va = table.value_exponent(a, x).unwrap();
                let vb = table.value_exponent(b, x).unwrap();
                acc + roots[((va + l - vb) % l) as usize]
            });
            let expected = if a == b { phi } else { 0.0 };
            worst = worst.max((s - expected).norm());
        }
    }
    Ok(worst)
}

pub fn character_corollary() -> CriterionResult {
    timed(10, "primitive character sum", "sum_d phi(d)/d sum*_chi |sum a_i chi(P(i))|^2 vs D(N+D)(log D)^(omega(c0)+theta(k)) ||a||^2", Some(60), || {
        let tables: Vec<(u64, f64, bool)> = (1..=200u64)
            .into_par_iter()
            .map(|d| -> Result<_> {
                let gap = orthogonality_gap(d)?;
                let count = character_table(d)?.primitive_count() as u64;
                Ok((d, gap, count == primitive_count_formula(d)?))
            })
            .collect::<Result<_>>()?;
        let gap = tables.iter().map(|t| t.1).fold(0f64, f64::max);
        let count_failures: Vec<u64> = tables.iter().filter(|t| !t.2).map(|t| t.0).collect();
        let corpus = corollary_corpus();
        let ratios: Vec<f64> = corpus
            .par_iter()
            .map(|inst| Ok(corollary_report(inst)?.ratio))
            .collect::<Result<_>>()?;
        let max = ratios.iter().cloned().fold(0f64, f64::max);
        let ok = gap <= 1e-9
            && count_failures.is_empty()
            && ratios.iter().all(|r| r.is_finite() && *r <= RATIO_CEILING);
        Ok((
            ok,
            format!(
                "d ≤ 200: max orthogonality gap = {gap:.3e}, primitive-count failures {count_failures:?}; {} instances, max ratio = {max:.4e}",
                corpus.len()
            ),
        ))
    })
}

pub fn vandermonde_identity() -> CriterionResult {
    timed(
        11,
        "Vandermonde identity",
        "|c0 prod_{i<j}(x_i - x_j)| = |det|",
        None,
        || {
            let mut r = rng(5);
            let mut failures = 0;
            for _ in 0..1000 {
                let poly = random_polynomial(&mut r, 1, 4, 1_000);
                let k = poly.degree() as usize;
                let mut pool: Vec<i64> = (-1_000..=1_000).collect();
                pool.shuffle(&mut r);
                let xs: Vec<BigInt> = pool[..=k].iter().map(|&x| BigInt::from(x)).collect();
                if !vandermonde_check(&poly, &xs)?.ok {
                    failures += 1;
                }
            }
            Ok((
                failures == 0,
                format!("1000 instances, {failures} failures"),
            ))
        },
    )
}

/// Every check, in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        kernel_identity(),
        quadratic_form_equivalence(),
        power_sum_identity(),
        root_bounds(),
        proposition_structure(),
        bound_chain(),
        envelope_ratio(),
        exponential_sum_bounds(),
        lower_bound(),
        character_corollary(),
        vandermonde_identity(),
    ]
}

/// Runs the check with the given number (1–11).
pub fn run_one(id: u32) -> Result<CriterionResult> {
    Ok(match id {
        1 => kernel_identity(),
        2 => quadratic_form_equivalence(),
        3 => power_sum_identity(),
        4 => root_bounds(),
        5 => proposition_structure(),
        6 => bound_chain(),
        7 => envelope_ratio(),
        8 => exponential_sum_bounds(),
        9 => lower_bound(),
        10 => character_corollary(),
        11 => vandermonde_identity(),
        _ => return Err(Error::Domain(format!("no check numbered {id}"))),
    })
}
