//! Dirichlet characters and the sieve sum over primitive characters
//!
//! ```text
//! Σ_{d≤D} φ(d)/d Σ*_{χ mod d} |Σ_{i∈I} a_i χ(P(i))|²
//! ```
//!
//! Character values are stored exactly as exponents `v` of `e(v/L)`, where
//! `L` is the exponent of `(Z/dZ)*`; complex values are formed only when a
//! sum is evaluated.

use num_complex::Complex;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{factorize, pow_mod, ArithTable};
use crate::error::{domain, Error, Result};
use crate::polynomial::residue;
use crate::scalar::{unit_root, CompensatedSum, Real};
use crate::sieve::{guarded_log, SieveInstance};

/// A cyclic factor of `(Z/dZ)*`: a generator, already lifted to a residue
/// mod `d` that is `1` modulo the other prime powers, and its order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct CyclicFactor {
    generator: u64,
    order: u64,
}

/// Smallest primitive root modulo an odd prime `p`.
fn primitive_root(p: u64) -> u64 {
    let primes: Vec<u64> = factorize(p - 1).expect("p - 1 >= 1").primes().collect();
    (2..p)
        .find(|&g| primes.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// The residue mod `d` congruent to `g` mod `pe` and to `1` mod `d / pe`.
fn crt_lift(g: u64, pe: u64, d: u64) -> u64 {
    let rest = d / pe;
    if rest == 1 {
        return g % d;
    }
    let u = inverse_mod(rest % pe, pe) as i128;
    let y = 1 + (g as i128 - 1) * u % pe as i128 * rest as i128;
    y.rem_euclid(d as i128) as u64
}

fn cyclic_factors(d: u64) -> Result<Vec<CyclicFactor>> {
    let mut out = Vec::new();
    for &(p, e) in factorize(d)?.factors() {
        let pe = p.pow(e);
        let local: Vec<(u64, u64)> = match (p, e) {
            (2, 1) => vec![],
            (2, 2) => vec![(3, 2)],
            (2, _) => vec![(pe - 1, 2), (5, pe / 4)],
            _ => {
                let mut g = primitive_root(p);
                // a primitive root mod p generates mod p^e unless g^(p-1) ≡ 1 mod p²
                if e > 1 && pow_mod(g, p - 1, p * p) == 1 {
                    g += p;
                }
                vec![(g, pe / p * (p - 1))]
            }
        };
        out.extend(local.into_iter().map(|(g, order)| CyclicFactor {
            generator: crt_lift(g, pe, d),
            order,
        }));
    }
    Ok(out)
}

/// All Dirichlet characters modulo `d`.
///
/// Character `t` (mixed radix over the cyclic factors) sends `∏ g_i^{e_i}`
/// to `e(Σ t_i e_i / n_i)`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    modulus: u64,
    exponent: u64,
    /// `values[t][x]`: exponent of `χ_t(x)` over `exponent`, `None` when
    /// `(x, d) > 1`.
    values: Vec<Vec<Option<u64>>>,
    conductors: Vec<u64>,
}

impl CharacterTable {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 {
            return domain("character modulus must be >= 1");
        }
        let factors = cyclic_factors(d)?;
        let exponent = factors.iter().fold(1u64, |l, f| l.lcm(&f.order));
        let group_order: u64 = factors.iter().map(|f| f.order).product();

        // discrete logs: walk the exponent vectors in mixed radix
        let mut logs: Vec<Option<Vec<u64>>> = vec![None; d as usize];
        for idx in 0..group_order {
            let (mut rest, mut x) = (idx, 1 % d);
            let mut exps = Vec::with_capacity(factors.len());
            for f in &factors {
                let e = rest % f.order;
                rest /= f.order;
                x = (x as u128 * pow_mod(f.generator, e, d) as u128 % d as u128) as u64;
                exps.push(e);
            }
            debug_assert!(logs[x as usize].is_none());
            logs[x as usize] = Some(exps);
        }

        let values: Vec<Vec<Option<u64>>> = (0..group_order)
            .map(|t| {
                let mut rest = t;
                let ts: Vec<u64> = factors
                    .iter()
                    .map(|f| {
                        let ti = rest % f.order;
                        rest /= f.order;
                        ti
                    })
                    .collect();
                logs.iter()
                    .map(|log| {
                        log.as_ref().map(|es| {
                            es.iter()
                                .zip(&ts)
                                .zip(&factors)
                                .fold(0u64, |acc, ((&e, &ti), f)| {
                                    let term = (e * ti % f.order) * (exponent / f.order);
                                    (acc + term) % exponent
                                })
                        })
                    })
                    .collect()
            })
            .collect();

        let divisors = factorize(d)?.divisors();
        let conductors = values
            .iter()
            .map(|chi| {
                *divisors
                    .iter()
                    .find(|&&f| {
                        chi.iter()
                            .enumerate()
                            .all(|(x, v)| v.is_none_or(|v| x as u64 % f != 1 % f || v == 0))
                    })
                    .expect("d itself induces every character")
            })
            .collect();
        Ok(Self {
            modulus: d,
            exponent,
            values,
            conductors,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Exponent `L` of the group; every value is an `L`-th root of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `φ(d)`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Exact value of `χ_t(x)` as the exponent of `e(·/L)`, or `None` for
    /// `(x, d) > 1`.
    pub fn value_exponent(&self, t: usize, x: u64) -> Option<u64> {
        self.values[t][(x % self.modulus) as usize]
    }

    pub fn value<T: Real>(&self, t: usize, x: u64) -> Complex<T> {
        self.value_exponent(t, x)
            .map_or(Complex::zero(), |v| unit_root(v, self.exponent))
    }

    /// Index of the principal character.
    pub fn principal(&self) -> usize {
        0
    }

    /// Smallest `f | d` such that `χ_t(x) = 1` whenever `x ≡ 1 mod f`.
    pub fn conductor(&self, t: usize) -> u64 {
        self.conductors[t]
    }

    pub fn is_primitive(&self, t: usize) -> bool {
        self.conductors[t] == self.modulus
    }

    pub fn primitive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&t| self.is_primitive(t))
    }

    pub fn primitive_count(&self) -> usize {
        self.primitive_indices().count()
    }
}

pub fn character_table(d: u64) -> Result<CharacterTable> {
    CharacterTable::new(d)
}

/// `Σ_{e|d} μ(d/e)φ(e)`, the number of primitive characters mod `d`.
pub fn primitive_count_formula(d: u64) -> Result<u64> {
    let table = ArithTable::up_to(d);
    let total: i64 = factorize(d)?
        .divisors()
        .into_iter()
        .map(|e| table.mu(d / e) as i64 * table.phi(e) as i64)
        .sum();
    Ok(total as u64)
}

/// `b[r] = Σ_{P(i) ≡ r mod d} a_i`.
fn residue_weights<T: Real>(
    values: &[num_bigint::BigInt],
    weights: &[Complex<T>],
    d: u64,
) -> Vec<Complex<T>> {
    let mut b = vec![Complex::zero(); d as usize];
    for (v, a) in values.iter().zip(weights) {
        b[residue(v, d) as usize] = b[residue(v, d) as usize] + *a;
    }
    b
}

/// `|Σ_r b[r] χ_t(r)|²`.
pub(crate) fn character_sum_sqr<T: Real>(table: &CharacterTable, t: usize, b: &[Complex<T>]) -> T {
    let roots: Vec<Complex<T>> = (0..table.exponent)
        .map(|v| unit_root(v, table.exponent))
        .collect();
    b.iter()
        .zip(&table.values[t])
        .fold(Complex::<T>::zero(), |acc, (bx, v)| match v {
            Some(v) => acc + *bx * roots[*v as usize],
            None => acc,
        })
        .norm_sqr()
}

fn check_budget<T: Real>(inst: &SieveInstance<T>, table: &ArithTable) -> Result<()> {
    let d_max = inst.q_max();
    let terms = (1..=d_max)
        .map(|d| d.saturating_mul(table.phi(d)))
        .fold(0u64, u64::saturating_add)
        .saturating_add(d_max.saturating_mul(inst.len()));
    if terms > inst.budget() {
        return Err(Error::Resource(format!(
            "Σ_d d·φ(d) + D·N = {terms} character-table terms exceeds budget {}",
            inst.budget()
        )));
    }
    Ok(())
}

/// `Σ_{d≤D} φ(d)/d Σ*_{χ mod d} |Σ_{i∈I} a_i χ(P(i))|²`, where `D` is the
/// instance's order.
///
/// Tables are built per `d` in parallel; the per-`d` terms are combined in
/// increasing `d`.
pub fn corollary_lhs<T: Real>(inst: &SieveInstance<T>) -> Result<T> {
    let arith = ArithTable::up_to(inst.q_max());
    check_budget(inst, &arith)?;
    let values = inst.values();
    let terms: Vec<T> = (1..=inst.q_max())
        .into_par_iter()
        .map(|d| -> Result<T> {
            let table = CharacterTable::new(d)?;
            let b = residue_weights(&values, inst.weights(), d);
            let inner: CompensatedSum<T> = table
                .primitive_indices()
                .map(|t| character_sum_sqr(&table, t, &b))
                .collect();
            Ok(inner.value() * T::from_u64(arith.phi(d)).unwrap() / T::from_u64(d).unwrap())
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().collect::<CompensatedSum<T>>().value())
}

/// Left side and envelope `D(N+D)(log D)^{ω(c₀)+θ(k)}‖a‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport<T> {
    pub lhs: T,
    pub norm_sqr: T,
    pub envelope_exponent: u64,
    pub log_factor: T,
    /// `D < 3`: the logarithm was replaced by 1.
    pub log_substituted: bool,
    pub rhs_envelope: T,
    pub ratio: T,
    /// `Σ_{d≤D}` of the number of primitive characters mod `d`.
    pub primitive_characters: u64,
}

pub fn corollary_report<T: Real>(inst: &SieveInstance<T>) -> Result<CorollaryReport<T>> {
    let exponent = inst.poly().envelope_exponent()?;
    let lhs = corollary_lhs(inst)?;
    let primitive_characters = (1..=inst.q_max())
        .map(primitive_count_formula)
        .sum::<Result<u64>>()?;
    let norm_sqr = inst.norm_sqr();
    let (log_factor, log_substituted) = guarded_log::<T>(inst.q_max());
    let d = T::from_u64(inst.q_max()).unwrap();
    let n = T::from_u64(inst.len()).unwrap();
    let rhs_envelope = d * (n + d) * log_factor.powi(exponent as i32) * norm_sqr;
    let ratio = if norm_sqr.is_zero() {
        T::zero()
    } else {
        lhs / rhs_envelope
    };
    Ok(CorollaryReport {
        lhs,
        norm_sqr,
        envelope_exponent: exponent,
        log_factor,
        log_substituted,
        rhs_envelope,
        ratio,
        primitive_characters,
    })
}
