use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{domain, Error, Result};

/// Integer polynomial `c₀Tᵏ + c₁Tᵏ⁻¹ + … + c_k`, stored by descending powers.
///
/// The leading coefficient is nonzero unless the polynomial is the constant
/// zero (which arises as `P(T) − P(j)` for constant `P`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return domain("polynomial needs at least one coefficient");
        }
        if coeffs.len() > 1 && coeffs[0].is_zero() {
            return domain("leading coefficient must be nonzero");
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `Tⁿ`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::one();
        Self { coeffs }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Exact value `P(x)`.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// `P(x) mod m` in `[0, m)`.
    pub fn eval_mod(&self, x: &BigInt, m: u64) -> Result<u64> {
        if m == 0 {
            return domain("eval_mod requires m >= 1");
        }
        Ok(self.reduce(m).eval(residue(x, m)))
    }

    /// Coefficients reduced modulo `m`, for repeated evaluation.
    pub fn reduce(&self, m: u64) -> ReducedPoly {
        ReducedPoly {
            modulus: m,
            coeffs: self.coeffs.iter().map(|c| residue(c, m)).collect(),
        }
    }

    /// `P(T) − c`.
    pub fn shift_constant(&self, c: &BigInt) -> Self {
        let mut coeffs = self.coeffs.clone();
        *coeffs.last_mut().unwrap() -= c;
        Self { coeffs }
    }

    /// `ω(c₀)`, the number of distinct primes dividing the leading coefficient.
    pub fn leading_omega(&self) -> Result<u32> {
        let c0 = self
            .leading()
            .to_i128()
            .ok_or_else(|| Error::Domain("leading coefficient exceeds 128 bits".into()))?;
        arith::omega(c0)
    }

    /// `ω(c₀) + θ(k)`, the exponent of the logarithmic envelope.
    pub fn envelope_exponent(&self) -> Result<u64> {
        let theta = arith::theta(self.degree())?;
        Ok(self.leading_omega()? as u64 + theta)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.coeffs.len() - 1;
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && k != 0 {
                continue;
            }
            let power = k - idx;
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match (power, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{abs}T")?,
                (_, true) => write!(f, "T^{power}")?,
                (_, false) => write!(f, "{abs}T^{power}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A polynomial with coefficients reduced modulo a fixed `m < 2⁶⁴`.
#[derive(Debug, Clone)]
pub struct ReducedPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ReducedPoly {
    /// Wraps residues already in `[0, m)`; leading zeros are allowed.
    pub(crate) fn from_residues(coeffs: Vec<u64>, m: u64) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < m));
        Self { modulus: m, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation at a residue `x < m`.
    pub fn eval(&self, x: u64) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            let m = self.modulus;
            let x = x % m;
            return self.coeffs.iter().fold(0u64, |acc, &c| (acc * x + c) % m);
        }
        let m = self.modulus as u128;
        let x = x as u128 % m;
        self.coeffs
            .iter()
            .fold(0u128, |acc, &c| (acc * x + c as u128) % m) as u64
    }

    /// Same polynomial reduced further to a divisor `d` of the modulus.
    pub fn reduce_to(&self, d: u64) -> ReducedPoly {
        debug_assert!(self.modulus.is_multiple_of(d));
        ReducedPoly {
            modulus: d,
            coeffs: self.coeffs.iter().map(|c| c % d).collect(),
        }
    }
}

/// `x mod m` in `[0, m)` for an arbitrary-precision `x`.
pub fn residue(x: &BigInt, m: u64) -> u64 {
    assert!(m > 0, "residue modulo zero");
    let m128 = m as u128;
    let r = x
        .magnitude()
        .iter_u64_digits()
        .rev()
        .fold(0u128, |r, d| ((r << 64) | d as u128) % m128) as u64;
    if x.is_negative() && r != 0 {
        m - r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn eval_mod_examples() {
        assert_eq!(poly(&[1, 0, 0]).eval_mod(&3.into(), 4).unwrap(), 1);
        assert_eq!(poly(&[1, 0, 1]).eval_mod(&2.into(), 5).unwrap(), 0);
        assert_eq!(poly(&[2, 1]).eval_mod(&0.into(), 2).unwrap(), 1);
        assert!(poly(&[1]).eval_mod(&0.into(), 0).is_err());
    }

    #[test]
    fn eval_mod_handles_negative_and_huge_arguments() {
        let p = poly(&[7, -3, 0, 11, -5]);
        let x = BigInt::from(-1_000_000i64);
        let exact = p.eval(&x);
        for m in [1u64, 2, 97, 1 << 40, u64::MAX] {
            assert_eq!(p.eval_mod(&x, m).unwrap(), residue(&exact, m));
        }
    }

    #[test]
    fn rejects_leading_zero() {
        assert!(IntPolynomial::from_i64(&[0, 1]).is_err());
        assert!(IntPolynomial::from_i64(&[]).is_err());
        assert!(IntPolynomial::from_i64(&[0]).unwrap().is_zero());
    }

    #[test]
    fn shift_and_exponent() {
        let p = poly(&[12, 0, 5]);
        let q = p.shift_constant(&p.eval_i64(3));
        assert!(q.eval_i64(3).is_zero());
        assert_eq!(p.envelope_exponent().unwrap(), 2 + 6);
        assert_eq!(poly(&[1, 4]).envelope_exponent().unwrap(), 1);
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[2, 0, 1]).to_string(), "2T^2 + 1");
        assert_eq!(poly(&[-1, 1, -3]).to_string(), "-T^2 + T - 3");
        assert_eq!(poly(&[0]).to_string(), "0");
    }

    proptest::proptest! {
        #[test]
        fn residue_matches_floor_division(hi in proptest::prelude::any::<i64>(), lo in proptest::prelude::any::<u64>(), m in 1u64..) {
            let x: BigInt = (BigInt::from(hi) << 64u32) + BigInt::from(lo);
            let expected = num_integer::Integer::mod_floor(&x, &BigInt::from(m)).to_u64().unwrap();
            proptest::prop_assert_eq!(residue(&x, m), expected);
        }

        #[test]
        fn small_modulus_eval_matches_exact(c in proptest::collection::vec(-1000i64..1000, 1..6), x in -10_000i64..10_000, m in 1u64..=u32::MAX as u64) {
            let mut c = c;
            if c[0] == 0 { c[0] = 1; }
            let p = poly(&c);
            proptest::prop_assert_eq!(p.eval_mod(&BigInt::from(x), m).unwrap(), residue(&p.eval_i64(x), m));
        }
    }
}
