//! One function per subcommand, each producing a [`Report`].

use std::fs::File;
use std::path::Path;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use polysieve::characters::corollary_report;
use polysieve::farey::{farey_sequence, farey_size, gcd_sum_bound, kernel_exact};
use polysieve::polynomial::residue;
use polysieve::polyroots::{
    a_exponent, euler_majorant, prime_partial_sum, prime_series_bound, RhoProfile,
};
use polysieve::sharpness::{
    incomplete_extremes, lower_bound_demo_with_budget, second_moment, weil_extremes,
};
use polysieve::sieve::{theorem1_report, SieveInstance};
use polysieve::suite::{self, RATIO_CEILING};
use polysieve::{arith, oracle, IntPolynomial, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{
    parse_integer, parse_polynomial, positive, Cli, Command, CorollaryArgs, IntervalArgs,
    KernelArgs, RhoArgs, SharpnessArgs, SuiteArgs, WeightSpec,
};
use crate::error::CliError;
use crate::report::{integer, real, Report};

type Outcome = Result<Report, CliError>;

/// Largest `|c|` accepted for random integer weights.
const RANDOM_WEIGHT_BOUND: i64 = 9;
/// Tolerance of the floating-point comparisons reported as checks.
const REL_TOL: f64 = 1e-8;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Rho(a) => rho(a, cli),
        Command::Prop1(a) => prop1(a, cli),
        Command::Kernel(a) => kernel(a, cli),
        Command::Sieve(a) => sieve(a, cli),
        Command::Sharpness(a) => sharpness(a, cli),
        Command::Corollary(a) => corollary(a, cli),
        Command::Suite(a) => run_suite(a, cli),
    }
}

fn poly_value(p: &IntPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(integer).collect())
}

fn rational(r: &Rational) -> Value {
    real(r.to_f64().unwrap_or(f64::INFINITY))
}

fn budget_guard(what: &str, work: u64, budget: u64) -> Result<(), CliError> {
    if work > budget {
        Err(CliError::Resource(format!(
            "{what} = {work} exceeds budget {budget}"
        )))
    } else {
        Ok(())
    }
}

/// Primes `p ≤ limit` not dividing the leading coefficient.
fn good_primes(poly: &IntPolynomial, limit: u64) -> Vec<u64> {
    arith::primes_up_to(limit)
        .into_iter()
        .filter(|&p| residue(poly.leading(), p) != 0)
        .collect()
}

fn rho(a: &RhoArgs, cli: &Cli) -> Outcome {
    let poly = parse_polynomial(&a.poly)?;
    let q = positive("Q", a.q)?;
    budget_guard("Q", q, cli.budget)?;
    let profile = RhoProfile::compute(&poly, q)?;
    let k = poly.degree();

    let mut report = Report::new("rho");
    report.input("poly", poly_value(&poly));
    report.input("Q", q);
    report.result("degree", k);
    report.result("rho", profile.table().to_vec());
    report.result("partial_sum", rational(profile.partial_sum()));
    report.result("partial_sum_exact", profile.partial_sum().to_string());

    let primes = good_primes(&poly, q);
    let degree_ok = primes.iter().all(|&p| profile.rho(p) <= k as u64);
    let (mut monotone, mut power_bound) = (true, true);
    for &p in &primes {
        let mut m = 2u32;
        while let Some(pm) = p.checked_pow(m).filter(|&x| x <= q) {
            let (cur, prev) = (profile.rho(pm) as u128, profile.rho(pm / p) as u128);
            monotone &= cur * (pm / p) as u128 <= prev * pm as u128;
            if k >= 1 {
                let cap = (k as u128 + 2) * pm as u128 / (p as u128).pow(a_exponent(m, k)?);
                power_bound &= cur <= cap;
            }
            m += 1;
        }
    }
    report.check(
        "degree-bound",
        "rho(p) <= k for p not dividing c0",
        degree_ok,
    );
    report.check(
        "projection-monotonicity",
        "rho(p^m)/p^m <= rho(p^(m-1))/p^(m-1)",
        monotone,
    );
    report.check(
        "prime-power-bound",
        "rho(p^m) <= (k+2) p^m / p^a(m,k)",
        power_bound,
    );
    Ok(report)
}

/// `max(log x, 1)` below 3 (flagged), `log x` from 3 on.
fn guarded_log(x: u64) -> (f64, bool) {
    if x < 3 {
        (1.0, true)
    } else {
        ((x as f64).ln(), false)
    }
}

fn prop1(a: &RhoArgs, cli: &Cli) -> Outcome {
    let poly = parse_polynomial(&a.poly)?;
    let q = positive("Q", a.q)?;
    budget_guard("Q", q, cli.budget)?;
    let exponent = poly.envelope_exponent()?;
    let profile = RhoProfile::compute(&poly, q)?;
    let sum = profile.partial_sum().clone();
    let majorant: Rational = euler_majorant(&poly, q)?;
    let (log_q, substituted) = guarded_log(q);
    let envelope = log_q.powi(exponent as i32);

    let mut report = Report::new("prop1");
    report.input("poly", poly_value(&poly));
    report.input("Q", q);
    report.result("sum", rational(&sum));
    report.result("sum_exact", sum.to_string());
    report.result("euler_majorant", rational(&majorant));
    report.result("envelope_exponent", exponent);
    report.result("log_envelope", real(envelope));
    report.result("log_substituted", substituted);
    report.result(
        "ratio",
        real(sum.to_f64().unwrap_or(f64::INFINITY) / envelope),
    );

    let mut local_ok = true;
    let mut local = Vec::new();
    for p in good_primes(&poly, q) {
        let s: Rational = prime_partial_sum(&poly, p, q)?;
        let b: Rational = prime_series_bound(poly.degree(), p)?;
        local_ok &= s <= b;
        local.push(json!({"p": p, "partial_sum": rational(&s), "bound": rational(&b)}));
    }
    report.result("local_series", local);
    report.check(
        "euler-product-majorization",
        "sum rho(m)/m <= prod_p sum rho(p^m)/p^m",
        sum <= majorant,
    );
    report.check(
        "local-series-bound",
        "sum rho(p^m)/p^m <= 1 + theta(k)/p + (k+2)C(k+1,2)/(p(p-1))",
        local_ok,
    );
    Ok(report)
}

fn kernel(a: &KernelArgs, cli: &Cli) -> Outcome {
    let q = positive("Q", a.q)?;
    let mut report = Report::new("kernel");
    report.input("Q", q);
    let c = match (&a.c, &a.poly, &a.i, &a.j) {
        (Some(c), _, _, _) => {
            let c = parse_integer("c", c)?;
            report.input("c", integer(&c));
            c
        }
        (None, Some(p), Some(i), Some(j)) => {
            let poly = parse_polynomial(p)?;
            let (i, j) = (parse_integer("i", i)?, parse_integer("j", j)?);
            report.input("poly", poly_value(&poly));
            report.input("i", integer(&i));
            report.input("j", integer(&j));
            poly.eval(&i) - poly.eval(&j)
        }
        _ => {
            return Err(CliError::Usage(
                "give --c, or --poly with --i and --j".into(),
            ))
        }
    };
    let size = farey_size(q)?;
    budget_guard("|F(Q)|", size, cli.budget)?;
    let k = kernel_exact(&c, q)?;
    let bound = gcd_sum_bound(&c, q)?;
    let direct: Complex64 = oracle::farey_exponential_sum(&farey_sequence(q)?, &c);

    report.result("c", integer(&c));
    report.result("kernel", k);
    report.result("farey_size", size);
    report.result("gcd_sum_bound", bound);
    report.result("direct_re", real(direct.re));
    report.result("direct_im", real(direct.im));
    let gap = (direct - Complex64::new(k as f64, 0.0)).norm();
    report.check(
        "ramanujan-expansion",
        "K(c) = sum_{q<=Q} c_q(c) = sum_{x in F(Q)} e(xc)",
        gap <= 1e-6,
    );
    report.check(
        "gcd-sum-bound",
        "|K(c)| <= sum_{q<=Q} (c,q)",
        k.unsigned_abs() <= bound,
    );
    Ok(report)
}

/// Weights on `I = (M, M+N]` from the given source.
fn load_weights(spec: &WeightSpec, m: i64, n: u64, seed: u64) -> Result<Vec<Complex64>, CliError> {
    match spec {
        WeightSpec::Ones => Ok(vec![Complex64::new(1.0, 0.0); n as usize]),
        WeightSpec::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..n)
                .map(|_| {
                    Complex64::new(
                        rng.gen_range(-RANDOM_WEIGHT_BOUND..=RANDOM_WEIGHT_BOUND) as f64,
                        0.0,
                    )
                })
                .collect())
        }
        WeightSpec::File(path) => weights_from_file(path, m, n),
    }
}

/// CSV rows `i,re,im` with `i ∈ I`; an optional `i,re,im` header is
/// skipped and missing points get weight 0.
fn weights_from_file(path: &Path, m: i64, n: u64) -> Result<Vec<Complex64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let mut w = vec![None; n as usize];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let fields: Vec<&str> = record.iter().collect();
        if line == 0 && fields == ["i", "re", "im"] {
            continue;
        }
        let bad = || {
            CliError::Usage(format!(
                "{}: row {} must be i,re,im",
                path.display(),
                line + 1
            ))
        };
        let [i, re, im] = fields[..] else {
            return Err(bad());
        };
        let i: i64 = i.parse().map_err(|_| bad())?;
        let (re, im): (f64, f64) = (
            re.parse().map_err(|_| bad())?,
            im.parse().map_err(|_| bad())?,
        );
        if !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        let t = i
            .checked_sub(m)
            .filter(|&t| t >= 1 && t as u64 <= n)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{}: point {i} lies outside I = ({m}, {m} + {n}]",
                    path.display()
                ))
            })?;
        let slot = &mut w[(t - 1) as usize];
        if slot.is_some() {
            return Err(CliError::Usage(format!(
                "{}: point {i} listed twice",
                path.display()
            )));
        }
        *slot = Some(Complex64::new(re, im));
    }
    Ok(w.into_iter().map(|a| a.unwrap_or_default()).collect())
}

fn interval_inputs(
    report: &mut Report,
    poly: &IntPolynomial,
    m: i64,
    n: u64,
    weights: &WeightSpec,
    seed: u64,
) {
    report.input("poly", poly_value(poly));
    report.input("M", m);
    report.input("N", n);
    report.input("weights", weights.to_string());
    if *weights == WeightSpec::Random {
        report.input("seed", seed);
    }
}

fn sieve(a: &IntervalArgs, cli: &Cli) -> Outcome {
    let poly = parse_polynomial(&a.poly)?;
    let q = positive("Q", a.q)?;
    let n = positive("N", a.n)?;
    let weights = load_weights(&a.weights, a.m, n, a.seed)?;
    let inst = SieveInstance::new(poly.clone(), q, a.m, weights)?.with_budget(cli.budget);
    let r = theorem1_report(&inst)?;

    let mut report = Report::new("sieve");
    interval_inputs(&mut report, &poly, a.m, n, &a.weights, a.seed);
    report.input("Q", q);
    report.input("budget", cli.budget);
    report.result("lhs", real(r.lhs));
    report.result(
        "lhs_exact",
        r.lhs_exact.as_ref().map_or(Value::Null, integer),
    );
    report.result("norm_sqr", real(r.norm_sqr));
    report.result("envelope_exponent", r.envelope_exponent);
    report.result("log_factor", real(r.log_factor));
    report.result("log_substituted", r.log_substituted);
    report.result("rhs_envelope", real(r.rhs_envelope));
    report.result("ratio", real(r.ratio));
    report.result(
        "row_sup",
        json!({"j": r.row_sup.j, "value": r.row_sup.value}),
    );
    report.result("row_gcd_sum", r.row_gcd_sum);
    report.result("row_divisor_bound", r.row_divisor_bound);
    report.result("row_rho_bound", real(r.row_rho_bound));
    report.result("row_sup_bound", real(r.row_sup_bound));

    if let Some(exact) = &r.lhs_exact {
        let e = exact.to_f64().unwrap_or(f64::INFINITY);
        report.check(
            "quadratic-form-expansion",
            "sum_{x in F(Q)} |sum a_i e(xP(i))|^2 = sum_{i,j} a_i conj(a_j) K(i,j)",
            (r.lhs - e).abs() <= REL_TOL * e.max(1.0),
        );
    }
    let sup = r.row_sup.value as f64 * r.norm_sqr;
    let chain_ok = r.row_chain_ok
        && r.lhs <= sup * (1.0 + REL_TOL) + REL_TOL
        && r.row_sup.value as f64 <= r.row_sup_bound * (1.0 + REL_TOL);
    report.check(
        "row-bound-chain",
        "lhs <= sup_j sum_i |K(i,j)| ||a||^2 <= 2Q(N+Q) sum rho_j(k)/k ||a||^2",
        chain_ok,
    );
    report.check(
        "envelope-ratio",
        "lhs <= 10 Q(N+Q)(log Q)^(omega(c0)+theta(k)) ||a||^2",
        r.ratio.is_finite() && r.ratio <= RATIO_CEILING,
    );
    Ok(report)
}

fn sharpness(a: &SharpnessArgs, cli: &Cli) -> Outcome {
    if a.n < 2 {
        return Err(CliError::Usage("--n must be >= 2".into()));
    }
    let m = second_moment(a.n, a.q)?;
    let mut report = Report::new("sharpness");
    report.input("n", a.n);
    report.input("q", a.q);
    let rhs = if m.applicable { m.rhs } else { m.general_rhs };
    report.result("ex1_lhs", m.lhs);
    report.result("ex1_rhs", rhs);
    report.result("ok", m.lhs == rhs);
    report.result(
        "ex1_form",
        if m.applicable {
            "(n-1)q(q-1)"
        } else {
            "(gcd(n,q-1)-1)q(q-1)"
        },
    );
    report.result("solution_count", m.lhs / a.q + a.q);
    report.result("gcd", m.gcd);
    report.check(
        "power-sum-second-moment",
        if m.applicable {
            "sum_p |sum_i e(p i^n/q)|^2 = (n-1)q(q-1)"
        } else {
            "sum_p |sum_i e(p i^n/q)|^2 = (gcd(n,q-1)-1)q(q-1)"
        },
        m.lhs == rhs,
    );

    let cube = a.q.checked_pow(3).unwrap_or(u64::MAX);
    if a.q > a.n as u64 && cube <= cli.budget {
        let w = weil_extremes::<f64>(a.n, a.q)?;
        let i = incomplete_extremes::<f64>(a.n, a.q)?;
        report.result("weil_max", real(w.max_modulus));
        report.result("weil_bound", real(w.bound));
        report.result("incomplete_max", real(i.max_modulus));
        report.result("incomplete_bound", real(i.bound));
        report.check(
            "weil-bound",
            "|sum_{i<=q} e((p i^n + k i)/q)| <= (n-1) sqrt(q)",
            w.ok,
        );
        report.check(
            "incomplete-bound",
            "|sum_{i<=m} e(p i^n/q)| <= 2(n-1) sqrt(q) log q",
            i.ok,
        );
    } else {
        report.result("weil_checked", false);
    }

    if let (Some(q_max), Some(len)) = (a.q_max, a.len) {
        report.input("Q", q_max);
        report.input("N", len);
        let d = lower_bound_demo_with_budget::<f64>(a.n, q_max, len, cli.budget)?;
        report.result("lower_bound_lhs", real(d.lhs));
        report.result("lower_bound_floor", real(d.floor));
        report.result("lower_bound_prime_part", real(d.prime_part));
        report.check(
            "lower-bound",
            "lhs >= (n-1) N^2 Q / (16 log Q) for P = T^n",
            d.ok,
        );
    }
    Ok(report)
}

/// Largest `D` for which the conductor-free second evaluation is also run.
const DUAL_PATH_LIMIT: u64 = 40;

fn corollary(a: &CorollaryArgs, cli: &Cli) -> Outcome {
    let poly = parse_polynomial(&a.poly)?;
    let d = positive("D", a.d)?;
    let n = positive("N", a.n)?;
    let weights = load_weights(&a.weights, a.m, n, a.seed)?;
    let inst = SieveInstance::new(poly.clone(), d, a.m, weights)?.with_budget(cli.budget);
    let r = corollary_report(&inst)?;

    let mut report = Report::new("corollary");
    interval_inputs(&mut report, &poly, a.m, n, &a.weights, a.seed);
    report.input("D", d);
    report.input("budget", cli.budget);
    report.result("lhs", real(r.lhs));
    report.result("norm_sqr", real(r.norm_sqr));
    report.result("envelope_exponent", r.envelope_exponent);
    report.result("log_factor", real(r.log_factor));
    report.result("log_substituted", r.log_substituted);
    report.result("rhs_envelope", real(r.rhs_envelope));
    report.result("ratio", real(r.ratio));
    report.result("primitive_characters", r.primitive_characters);

    if d <= DUAL_PATH_LIMIT {
        let points: Vec<i64> = inst.points().collect();
        let direct: f64 = oracle::corollary_lhs_direct(&poly, d, &points, inst.weights());
        report.result("lhs_direct", real(direct));
        report.check(
            "dual-path",
            "primitive characters by conductor = primitive characters by kernel test",
            (direct - r.lhs).abs() <= REL_TOL * direct.abs().max(1.0),
        );
    }
    report.check(
        "envelope-ratio",
        "sum_d phi(d)/d sum*_chi |sum a_i chi(P(i))|^2 <= 10 D(N+D)(log D)^(omega(c0)+theta(k)) ||a||^2",
        r.ratio.is_finite() && r.ratio <= RATIO_CEILING,
    );
    Ok(report)
}

fn run_suite(a: &SuiteArgs, cli: &Cli) -> Outcome {
    let ids: Vec<u32> = if a.only.is_empty() {
        (1..=11).collect()
    } else {
        a.only.clone()
    };
    let mut report = Report::new("suite");
    report.input("only", ids.clone());
    let mut rows = Vec::new();
    for id in ids {
        let r = suite::run_one(id)?;
        rows.push(json!({
            "id": r.id,
            "name": r.name,
            "ok": r.ok,
            "within_time": r.within_time(),
            "detail": r.detail,
            "elapsed_ms": if cli.no_wall_time { 0 } else { r.elapsed.as_millis() as u64 },
            "time_limit_s": r.time_limit.map(|l| l.as_secs()),
        }));
        report.check(&format!("criterion-{}", r.id), r.paper_ref, r.passed());
    }
    report.result("criteria", rows);
    Ok(report)
}
