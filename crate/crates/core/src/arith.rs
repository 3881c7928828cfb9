//! Exact integer kernels: primality, factorization and the multiplicative
//! functions needed by the sieve and the root-counting code.

use num_integer::Integer;

use crate::error::{domain, Result};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Prime powers `p^e` making up the value.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn moebius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a % m) * (b % m) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // {2, 7, 61} is a proven witness set below 4.7e9, the first twelve
    // primes below 3.3e24
    let bases: &[u64] = if n < 4_759_123_141 {
        &[2, 7, 61]
    } else {
        &SMALL
    };
    'witness: for &a in bases {
        if a % n == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding variant of Pollard rho; `n` odd composite.
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut g = 1u64;
        let mut r = 1u64;
        let mut q = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("pollard rho exhausted its constant sequence")
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Prime factorization by trial division below 10⁶, then Miller-Rabin plus
/// Pollard rho for the cofactor.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return domain("factorize(0) is undefined");
    }
    let mut rest = n;
    let mut primes = Vec::new();
    let mut push_while = |rest: &mut u64, p: u64| {
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            primes.push(p);
        }
    };
    push_while(&mut rest, 2);
    push_while(&mut rest, 3);
    let mut p = 5u64;
    while p * p <= rest && p < TRIAL_DIVISION_LIMIT {
        push_while(&mut rest, p);
        push_while(&mut rest, p + 2);
        p += 6;
    }
    if rest > 1 {
        if p * p > rest {
            primes.push(rest);
        } else {
            split_large(rest, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Ok(Factorization { value: n, factors })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

pub fn moebius(n: u64) -> Result<i8> {
    Ok(factorize(n)?.moebius())
}

/// Number of distinct primes dividing `|n|`.
pub fn omega(n: i128) -> Result<u32> {
    if n == 0 {
        return domain("omega(0) is undefined");
    }
    let abs = n.unsigned_abs();
    let abs = u64::try_from(abs)
        .map_err(|_| crate::Error::Domain(format!("omega: |{n}| exceeds 64 bits")))?;
    Ok(factorize(abs)?.factors().len() as u32)
}

/// `C(k+1, 2)`, the number of pairs among `k+1` points.
pub fn pair_count(k: u32) -> u64 {
    let k = k as u64;
    k * (k + 1) / 2
}

/// Logarithmic-loss exponent `k·C(k+1,2)`.
pub fn theta(k: u32) -> Result<u64> {
    if k == 0 {
        return domain("theta is defined for k >= 1");
    }
    Ok(k as u64 * pair_count(k))
}

/// `gcd(|a|, q)` with the convention `gcd(0, q) = q`.
pub fn gcd_conv(a: i128, q: u64) -> Result<u64> {
    if q == 0 {
        return domain("gcd_conv requires q >= 1");
    }
    Ok(gcd_residue(a.rem_euclid(q as i128) as u64, q))
}

/// `gcd(r, q)` for a residue `r` of `a` modulo `q`; agrees with [`gcd_conv`].
pub(crate) fn gcd_residue(r: u64, q: u64) -> u64 {
    if r == 0 {
        q
    } else {
        r.gcd(&q)
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: i128, p: u64) -> Result<u32> {
    if n == 0 {
        return domain("valuation of 0 is infinite");
    }
    if !is_prime(p) {
        return domain(format!("valuation: {p} is not prime"));
    }
    let p = p as u128;
    let mut m = n.unsigned_abs();
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Ramanujan sum `Σ_{0≤p<q, (p,q)=1} e(pn/q)` via `μ(q/g)·φ(q)/φ(q/g)`, `g = (n, q)`.
pub fn ramanujan_sum(q: u64, n: i128) -> Result<i64> {
    let g = gcd_conv(n, q)?;
    let r = factorize(q / g)?;
    let phi_q = euler_phi(q)?;
    Ok(r.moebius() as i64 * (phi_q / r.euler_phi()) as i64)
}

/// Sieved values of φ and μ on `1..=limit`, for repeated kernel evaluation.
#[derive(Debug, Clone)]
pub struct ArithTable {
    phi: Vec<u64>,
    mu: Vec<i8>,
}

impl ArithTable {
    pub fn up_to(limit: u64) -> Self {
        let n = limit as usize;
        let mut phi: Vec<u64> = (0..=limit).collect();
        let mut mu = vec![1i8; n + 1];
        let mut composite = vec![false; n + 1];
        for p in 2..=n {
            if composite[p] {
                continue;
            }
            for m in (p..=n).step_by(p) {
                if m > p {
                    composite[m] = true;
                }
                phi[m] -= phi[m] / p as u64;
                mu[m] = -mu[m];
            }
            let sq = p.saturating_mul(p);
            for m in (sq..=n).step_by(sq.max(1)) {
                mu[m] = 0;
            }
        }
        if n == 0 {
            mu[0] = 0;
        }
        Self { phi, mu }
    }

    pub fn limit(&self) -> u64 {
        (self.phi.len() - 1) as u64
    }

    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize]
    }

    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    /// Ramanujan sum `c_q(n)` given `r = n mod q`.
    pub fn ramanujan_residue(&self, q: u64, r: u64) -> i64 {
        let g = gcd_residue(r, q);
        let s = q / g;
        self.mu(s) as i64 * (self.phi(q) / self.phi(s)) as i64
    }
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}
