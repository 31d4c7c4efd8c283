//! Point-count polynomials in q for Grassmannians, isotropic Grassmannians,
//! projective spaces and quadrics. For affinely paved varieties these are also
//! the Poincaré polynomials (in q = t^2).

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient of q^i at index i; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PoincarePolynomial {
    coeffs: Vec<BigUint>,
}

impl PoincarePolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); deg + 1];
        coeffs[deg] = BigUint::one();
        Self { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = u64>>(c: I) -> Self {
        Self::from_big(c.into_iter().map(BigUint::from).collect())
    }

    pub fn from_big(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigUint::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if other.coeffs.len() > self.coeffs.len() {
            return Err(Error::NegativeCoefficient);
        }
        let mut coeffs = self.coeffs.clone();
        for (c, o) in coeffs.iter_mut().zip(&other.coeffs) {
            if *c < *o {
                return Err(Error::NegativeCoefficient);
            }
            *c -= o;
        }
        Ok(Self::from_big(coeffs))
    }

    pub fn eval(&self, q: u64) -> BigUint {
        let q = BigUint::from(q);
        self.coeffs.iter().rev().fold(BigUint::zero(), |acc, c| acc * &q + c)
    }

    /// Value at q = 1, i.e. the Euler characteristic of a paved variety.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }
}

impl Add for &PoincarePolynomial {
    type Output = PoincarePolynomial;
    fn add(self, rhs: &PoincarePolynomial) -> PoincarePolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigUint::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        PoincarePolynomial::from_big(coeffs)
    }
}

impl Add for PoincarePolynomial {
    type Output = PoincarePolynomial;
    fn add(self, rhs: PoincarePolynomial) -> PoincarePolynomial {
        &self + &rhs
    }
}

impl Mul for &PoincarePolynomial {
    type Output = PoincarePolynomial;
    fn mul(self, rhs: &PoincarePolynomial) -> PoincarePolynomial {
        if self.is_zero() || rhs.is_zero() {
            return PoincarePolynomial::zero();
        }
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PoincarePolynomial::from_big(coeffs)
    }
}

impl Mul for PoincarePolynomial {
    type Output = PoincarePolynomial;
    fn mul(self, rhs: PoincarePolynomial) -> PoincarePolynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for PoincarePolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for PoincarePolynomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coef = if c.is_one() && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}q"),
                _ => format!("{coef}q^{i}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}

/// Coefficients as JSON numbers when they fit in u64, decimal strings otherwise.
impl Serialize for PoincarePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum C {
            Small(u64),
            Big(String),
        }
        let v: Vec<C> = self
            .coeffs
            .iter()
            .map(|c| c.to_u64().map(C::Small).unwrap_or_else(|| C::Big(c.to_string())))
            .collect();
        v.serialize(s)
    }
}

/// Isometry class of a nondegenerate quadratic form over F_q, up to scaling.
/// `Split` is the (unique) class in odd dimension; `Plus`/`Minus` are the
/// maximal and non-maximal Witt index classes in even dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witt {
    Split,
    Plus,
    Minus,
}

impl Witt {
    /// The class a complex form specializes to: Split in odd dimension, Plus in even.
    pub fn split_for(dim: u32) -> Witt {
        if dim % 2 == 1 {
            Witt::Split
        } else {
            Witt::Plus
        }
    }

    fn name(self) -> &'static str {
        match self {
            Witt::Split => "split",
            Witt::Plus => "plus",
            Witt::Minus => "minus",
        }
    }

    /// Witt index and the anisotropic-kernel parameter e (0, 1, 2) for a form of dimension `dim`.
    fn index(self, dim: u32) -> Result<(u32, u32)> {
        match (self, dim % 2) {
            (Witt::Split, 1) => Ok(((dim - 1) / 2, 1)),
            (Witt::Plus, 0) => Ok((dim / 2, 0)),
            (Witt::Minus, 0) if dim >= 2 => Ok((dim / 2 - 1, 2)),
            _ => Err(Error::WittMismatch { witt: self.name(), dim }),
        }
    }
}

/// 1 + q + ... + q^(n-1).
fn q_integer(n: u32) -> PoincarePolynomial {
    PoincarePolynomial::from_coeffs(std::iter::repeat_n(1, n as usize))
}

/// 1 + q^i
fn one_plus_q(i: u32) -> PoincarePolynomial {
    if i == 0 {
        return PoincarePolynomial::from_coeffs([2]);
    }
    &PoincarePolynomial::one() + &PoincarePolynomial::monomial(i as usize)
}

/// Exact division of polynomials with nonnegative coefficients; the divisor must divide.
fn exact_div(num: &PoincarePolynomial, den: &PoincarePolynomial) -> PoincarePolynomial {
    use num_bigint::BigInt;
    let mut rem: Vec<BigInt> = num.coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
    let d: Vec<BigInt> = den.coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
    let lead = d.last().expect("nonzero divisor").clone();
    if rem.len() < d.len() {
        return PoincarePolynomial::zero();
    }
    let mut quot = vec![BigInt::zero(); rem.len() - d.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + d.len() - 1] / &lead;
        for (i, di) in d.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    PoincarePolynomial::from_big(quot.into_iter().map(|c| c.to_biguint().expect("nonnegative")).collect())
}

/// [n choose k]_q
pub fn gaussian_binomial(n: u32, k: u32) -> PoincarePolynomial {
    if k > n {
        return PoincarePolynomial::zero();
    }
    let k = k.min(n - k);
    let num: PoincarePolynomial = (0..k).map(|i| q_integer(n - i)).product();
    let den: PoincarePolynomial = (1..=k).map(q_integer).product();
    exact_div(&num, &den)
}

/// Number of totally isotropic k-subspaces of a d-dimensional quadratic space of type `witt`:
/// [w choose k]_q * prod_{i=w-k+1}^{w} (q^{i+e-1} + 1), w the Witt index, e = 0, 1, 2.
pub fn ogr_count(k: u32, d: u32, witt: Witt) -> Result<PoincarePolynomial> {
    let (w, e) = witt.index(d)?;
    if 2 * k > d {
        return Err(Error::NoIsotropic { k, d });
    }
    if k > w {
        return Ok(PoincarePolynomial::zero());
    }
    let prod: PoincarePolynomial = (w - k + 1..=w).map(|i| one_plus_q(i + e - 1)).product();
    Ok(&gaussian_binomial(w, k) * &prod)
}

/// Smooth quadric of dimension D (a hypersurface in P^{D+1}).
/// Odd D ignores the type; even D needs Plus or Minus.
pub fn quadric_count(dim: u32, witt: Witt) -> Result<PoincarePolynomial> {
    let base = q_integer(dim + 1);
    if dim % 2 == 1 {
        return Ok(base);
    }
    let mid = PoincarePolynomial::monomial((dim / 2) as usize);
    match witt {
        Witt::Plus => Ok(&base + &mid),
        Witt::Minus => base.checked_sub(&mid),
        Witt::Split => Err(Error::WittMismatch { witt: "split", dim: dim + 2 }),
    }
}

/// 1 + q + ... + q^D; zero for D < 0.
pub fn projective_count(dim: i64) -> PoincarePolynomial {
    if dim < 0 {
        PoincarePolynomial::zero()
    } else {
        q_integer(dim as u32 + 1)
    }
}

/// Isotropic lines of a possibly degenerate form with a `radical`-dimensional radical
/// and a nondegenerate quotient of dimension `nondeg` and type `witt`: a cone over a
/// smooth quadric, P^{r-1} + q^r * (smooth quadric in P^{nondeg-1}).
pub fn cone_quadric_count(radical: u32, nondeg: u32, witt: Witt) -> Result<PoincarePolynomial> {
    let vertex = projective_count(radical as i64 - 1);
    let base = if nondeg >= 2 { quadric_count(nondeg - 2, witt)? } else { PoincarePolynomial::zero() };
    Ok(&vertex + &base.shift(radical as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[u64]) -> PoincarePolynomial {
        PoincarePolynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn binomials() {
        assert_eq!(gaussian_binomial(2, 1), poly(&[1, 1]));
        assert_eq!(gaussian_binomial(4, 2), poly(&[1, 1, 2, 1, 1]));
        assert_eq!(gaussian_binomial(7, 0), poly(&[1]));
        assert!(gaussian_binomial(2, 3).is_zero());
        assert_eq!(gaussian_binomial(4, 2).eval(2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(4, 2).eval(3), BigUint::from(130u32));
    }

    #[test]
    fn isotropic() {
        assert_eq!(ogr_count(1, 3, Witt::Split).unwrap(), poly(&[1, 1]));
        assert_eq!(ogr_count(1, 5, Witt::Split).unwrap(), poly(&[1, 1, 1, 1]));
        assert_eq!(ogr_count(0, 6, Witt::Minus).unwrap(), poly(&[1]));
        assert_eq!(ogr_count(1, 4, Witt::Plus).unwrap(), poly(&[1, 2, 1]));
        assert_eq!(ogr_count(1, 4, Witt::Minus).unwrap(), poly(&[1, 0, 1]));
        assert_eq!(ogr_count(2, 4, Witt::Plus).unwrap(), poly(&[2, 2]));
        assert!(ogr_count(2, 4, Witt::Minus).unwrap().is_zero());
        assert!(ogr_count(2, 3, Witt::Split).is_err());
        assert!(ogr_count(1, 4, Witt::Split).is_err());
        assert!(ogr_count(1, 3, Witt::Plus).is_err());
    }

    #[test]
    fn quadrics() {
        assert_eq!(quadric_count(1, Witt::Plus).unwrap(), poly(&[1, 1]));
        assert_eq!(quadric_count(2, Witt::Plus).unwrap(), poly(&[1, 2, 1]));
        assert_eq!(quadric_count(2, Witt::Minus).unwrap(), poly(&[1, 0, 1]));
        assert_eq!(quadric_count(0, Witt::Minus).unwrap(), PoincarePolynomial::zero());
        assert_eq!(projective_count(0), poly(&[1]));
        assert_eq!(projective_count(3).eval(3), BigUint::from(40u32));
        assert!(projective_count(-1).is_zero());
    }

    #[test]
    fn cones() {
        // radical 0: smooth conic
        assert_eq!(cone_quadric_count(0, 3, Witt::Split).unwrap(), poly(&[1, 1]));
        // radical only
        assert_eq!(cone_quadric_count(2, 1, Witt::Split).unwrap(), poly(&[1, 1]));
        assert_eq!(cone_quadric_count(1, 3, Witt::Split).unwrap(), poly(&[1, 1, 1]));
    }

    #[test]
    fn display_and_sub() {
        assert_eq!(poly(&[1, 2, 0, 1]).to_string(), "1 + 2q + q^3");
        assert!(poly(&[1]).checked_sub(&poly(&[0, 1])).is_err());
    }
}
