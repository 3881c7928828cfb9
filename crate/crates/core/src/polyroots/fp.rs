//! Root finding over the prime field F_p for primes too large to scan.
//!
//! Polynomials here are dense coefficient vectors in ascending order of
//! degree with no trailing zeros (the zero polynomial is the empty vector).

use crate::arith::mul_mod;

type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Inverse of a nonzero residue by the extended Euclidean algorithm.
fn inv(a: u64, p: u64) -> u64 {
    if a == 1 {
        return 1;
    }
    if p < 1 << 62 {
        let (mut r0, mut r1) = (p as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        return s0.rem_euclid(p as i64) as u64;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

/// Reduction modulo `p` by a precomputed reciprocal `⌊2⁶⁴/p⌋`.
#[derive(Debug, Clone, Copy)]
struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Self {
        Self {
            p,
            m: ((1u128 << 64) / p as u128) as u64,
        }
    }

    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= p - b {
        a - (p - b)
    } else {
        a + b
    }
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

/// Quotient and remainder of `f / g`; `g` nonzero.
fn div_rem(f: &[u64], g: &[u64], p: u64) -> (Poly, Poly) {
    let dg = g.len() - 1;
    let lead_inv = inv(g[dg], p);
    let mut rem = f.to_vec();
    if rem.len() <= dg {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - dg];
    for i in (dg..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        let factor = mul_mod(c, lead_inv, p);
        quot[i - dg] = factor;
        for (j, &gj) in g.iter().enumerate() {
            let idx = i - dg + j;
            rem[idx] = sub_mod(rem[idx], mul_mod(factor, gj, p), p);
        }
    }
    rem.truncate(dg);
    (trim(quot), trim(rem))
}

/// A monic modulus `f` of degree `d ≥ 1` for arithmetic in `F_p[T]/(f)`.
///
/// Residues are dense vectors of length `d`. Below `2²⁴` products are
/// accumulated unreduced and reduced once per coefficient.
struct MonicModulus {
    f: Poly,
    p: u64,
    lazy: Option<Barrett>,
}

impl MonicModulus {
    /// `g` nonzero and nonconstant; scaled to be monic.
    fn new(g: &[u64], p: u64) -> Self {
        let lead_inv = inv(*g.last().expect("nonzero modulus"), p);
        let f: Poly = g.iter().map(|&c| mul_mod(c, lead_inv, p)).collect();
        let lazy = (p < (1 << 24) && f.len() < 1024).then(|| Barrett::new(p));
        Self { f, p, lazy }
    }

    fn degree(&self) -> usize {
        self.f.len() - 1
    }

    fn reduce(&self, a: &[u64]) -> Poly {
        let mut r = div_rem(a, &self.f, self.p).1;
        r.resize(self.degree(), 0);
        r
    }

    /// `a·b mod f` into `out`, which is overwritten.
    fn mul_into(&self, a: &[u64], b: &[u64], out: &mut Poly) {
        let (d, p) = (self.degree(), self.p);
        out.clear();
        out.resize(2 * d - 1, 0);
        let prod = out;
        if let Some(br) = self.lazy {
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = br.reduce(prod[i]);
                if c != 0 {
                    let neg = p - c;
                    for (j, &fj) in self.f[..d].iter().enumerate() {
                        prod[i - d + j] += neg * fj;
                    }
                }
            }
            prod.truncate(d);
            prod.iter_mut().for_each(|c| *c = br.reduce(*c));
        } else {
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
                }
            }
            for i in (d..2 * d - 1).rev() {
                let c = prod[i];
                if c != 0 {
                    for (j, &fj) in self.f[..d].iter().enumerate() {
                        prod[i - d + j] = sub_mod(prod[i - d + j], mul_mod(c, fj, p), p);
                    }
                }
            }
            prod.truncate(d);
        }
    }

    /// `a ← T·a mod f`.
    fn mul_t_assign(&self, a: &mut [u64]) {
        let (d, p) = (self.degree(), self.p);
        let top = a[d - 1];
        a.copy_within(..d - 1, 1);
        a[0] = 0;
        if top != 0 {
            let neg = p - top;
            for (o, &fj) in a.iter_mut().zip(&self.f[..d]) {
                *o = match self.lazy {
                    Some(br) => br.reduce(*o + neg * fj),
                    None => sub_mod(*o, mul_mod(top, fj, p), p),
                };
            }
        }
    }

    fn pow(&self, base: &[u64], exp: u64) -> Poly {
        let b = self.reduce(base);
        let mut acc = self.reduce(&[1]);
        let mut tmp = Vec::with_capacity(2 * self.degree());
        for bit in (0..u64::BITS - exp.leading_zeros()).rev() {
            self.mul_into(&acc, &acc, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
            if exp >> bit & 1 == 1 {
                self.mul_into(&acc, &b, &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
        }
        trim(acc)
    }

    /// `T^e mod f`.
    fn pow_t(&self, exp: u64) -> Poly {
        let mut acc = self.reduce(&[1]);
        let mut tmp = Vec::with_capacity(2 * self.degree());
        for bit in (0..u64::BITS - exp.leading_zeros()).rev() {
            self.mul_into(&acc, &acc, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
            if exp >> bit & 1 == 1 {
                self.mul_t_assign(&mut acc);
            }
        }
        trim(acc)
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = div_rem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, li, p);
        }
    }
    a
}

fn sub_poly(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

/// Splits a monic squarefree product of distinct linear factors.
fn split_linear(g: Poly, p: u64, roots: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => roots.push(sub_mod(0, mul_mod(g[0], inv(g[1], p), p), p)),
        _ => {
            // deterministic sequence of shifts; each separates the roots with
            // probability close to 1/2
            for a in 1..p {
                let h = MonicModulus::new(&g, p).pow(&[a, 1], (p - 1) / 2);
                let d = gcd(&g, &sub_poly(&h, &[1], p), p);
                if d.len() > 1 && d.len() < g.len() {
                    let (other, _) = div_rem(&g, &d, p);
                    split_linear(d, p, roots);
                    split_linear(other, p, roots);
                    return;
                }
            }
            unreachable!("no splitting shift found for a product of linear factors");
        }
    }
}

/// `gcd(f, T^p − T)`, the product of `T − r` over the distinct roots `r`;
/// `f` ascending, trimmed, nonconstant.
fn root_product(f: &[u64], p: u64) -> Poly {
    let t = [0u64, 1];
    let tp = MonicModulus::new(f, p).pow_t(p);
    gcd(f, &sub_poly(&tp, &t, p), p)
}

/// Distinct roots in `[0, p)` of `f`, given by descending coefficients
/// already reduced mod an odd prime `p`. `None` when `f ≡ 0`.
pub(crate) fn roots_mod_odd_prime(descending: &[u64], p: u64) -> Option<Vec<u64>> {
    debug_assert!(p > 2);
    let f = trim(descending.iter().rev().copied().collect());
    if f.is_empty() {
        return None;
    }
    if f.len() == 1 {
        return Some(Vec::new());
    }
    let g = root_product(&f, p);
    let mut roots = Vec::new();
    if g.len() > 1 {
        if g[0] == 0 {
            roots.push(0);
            let (rest, _) = div_rem(&g, &[0, 1], p);
            split_linear(rest, p, &mut roots);
        } else {
            split_linear(g, p, &mut roots);
        }
    }
    roots.sort_unstable();
    Some(roots)
}

/// Number of distinct roots, without splitting. `None` when `f ≡ 0`.
pub(crate) fn root_count_mod_odd_prime(descending: &[u64], p: u64) -> Option<u64> {
    debug_assert!(p > 2);
    let f = trim(descending.iter().rev().copied().collect());
    match f.len() {
        0 => None,
        1 => Some(0),
        _ => Some(root_product(&f, p).len() as u64 - 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(desc: &[u64], p: u64) -> Vec<u64> {
        (0..p)
            .filter(|&x| {
                desc.iter()
                    .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p)
                    == 0
            })
            .collect()
    }

    #[test]
    fn matches_scan_on_small_primes() {
        let polys: Vec<Vec<i64>> = vec![
            vec![1, 0, 1],
            vec![1, 0, -1],
            vec![1, 0, 0],
            vec![1, -6, 11, -6],
            vec![3, 1, 4, 1, 5],
            vec![1, 0, 0, 0, -1],
            vec![2, -4, 2],
            vec![1, 0, 0, -1],
        ];
        for p in crate::arith::primes_up_to(400).into_iter().skip(1) {
            for c in &polys {
                let desc: Vec<u64> = c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
                let fast = roots_mod_odd_prime(&desc, p).unwrap();
                assert_eq!(root_count_mod_odd_prime(&desc, p), Some(fast.len() as u64));
                assert_eq!(fast, scan(&desc, p), "p={p} poly={c:?}");
            }
        }
    }

    #[test]
    fn zero_and_constant() {
        assert_eq!(roots_mod_odd_prime(&[0, 0], 7), None);
        assert_eq!(roots_mod_odd_prime(&[0, 3], 7), Some(vec![]));
        assert_eq!(root_count_mod_odd_prime(&[0, 0], 7), None);
        assert_eq!(root_count_mod_odd_prime(&[0, 3], 7), Some(0));
    }

    #[test]
    fn large_prime_splits() {
        let p = 1_000_003u64;
        // (T - 5)(T - 77)(T - 999_999)
        let roots = [5u64, 77, 999_999];
        let mut asc = vec![1u64];
        for r in roots {
            let mut next = vec![0u64; asc.len() + 1];
            for (i, &c) in asc.iter().enumerate() {
                next[i + 1] = add_mod(next[i + 1], c, p);
                next[i] = sub_mod(next[i], mul_mod(c, r, p), p);
            }
            asc = next;
        }
        let desc: Vec<u64> = asc.into_iter().rev().collect();
        assert_eq!(roots_mod_odd_prime(&desc, p).unwrap(), roots.to_vec());
        assert_eq!(root_count_mod_odd_prime(&desc, p), Some(3));
        let big = (1u64 << 61) - 1;
        let desc: Vec<u64> = vec![1, 0, big - 1];
        // T² − 1 over a prime above 2²⁴ exercises the reducing path
        assert_eq!(roots_mod_odd_prime(&desc, big).unwrap(), vec![1, big - 1]);
    }
}
