//! Exact scalar and integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers. [`Rational`] is a
//! canonical fraction (positive denominator, coprime parts) and is the scalar
//! used for ages, fractional gradings and mean indices throughout the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("{value} is not invertible modulo {modulus}")]
    NotCoprime { value: BigInt, modulus: BigInt },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(BigInt),
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Exact fraction in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics on a zero denominator, like [`num_rational::Ratio::new`].
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn try_new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ArithError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Self::new(numer, denom))
    }

    pub fn integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Greatest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn frac(&self) -> Rational {
        self - &Rational::integer(self.floor())
    }

    /// Lossy conversion for display and estimators only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

/// Greatest integer `<= q`.
pub fn rat_floor(q: &Rational) -> BigInt {
    q.floor()
}

/// Fractional part `q - floor(q)`.
pub fn frac_part(q: &Rational) -> Rational {
    q.frac()
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::integer(value)
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(value: $t) -> Self {
                Rational::integer(BigInt::from(value))
            }
        }
    )*};
}
from_prim!(i32, i64, u32, u64, usize);

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Always `num/den`, with `0/1` for zero.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `a/b` or a bare integer `a`.
impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::try_new(n, d)
            }
            None => Ok(Rational::integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Extended Euclid: returns `(g, u, v)` with `g = gcd(x, y) > 0` and `u*x + v*y = g`.
pub fn ext_gcd(x: &BigInt, y: &BigInt) -> Result<(BigInt, BigInt, BigInt), ArithError> {
    if x.is_zero() && y.is_zero() {
        return Err(ArithError::BothZero);
    }
    let (mut old_r, mut r) = (x.clone(), y.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        Ok((-old_r, -old_s, -old_t))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

/// Inverse of `x` modulo `p`, as a representative in `[1, p-1]`.
pub fn mod_inverse(x: &BigInt, p: &BigInt) -> Result<BigInt, ArithError> {
    if *p < BigInt::from(2) {
        return Err(ArithError::InvalidModulus(p.clone()));
    }
    let (g, u, _) = ext_gcd(&x.mod_floor(p), p)?;
    if !g.is_one() {
        return Err(ArithError::NotCoprime {
            value: x.clone(),
            modulus: p.clone(),
        });
    }
    Ok(u.mod_floor(p))
}

/// Serializes a big integer as a native JSON integer when it fits in `i64`,
/// otherwise as a decimal string.
pub fn serialize_bigint<S: Serializer>(x: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(v) => serializer.serialize_i64(v),
        None => serializer.collect_str(x),
    }
}

/// Integer vector of fixed length (ambient lattice rank).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntVector(Vec<BigInt>);

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct Entry<'a>(&'a BigInt);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serialize_bigint(self.0, serializer)
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&Entry(x))?;
        }
        seq.end()
    }
}

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn scaled(&self, factor: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.len(), other.len(), "lattice rank mismatch");
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

fn check_square(m: &[Vec<BigInt>]) -> Result<usize, ArithError> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(ArithError::NonSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    Ok(n)
}

/// Exact determinant. Cofactor expansion up to 4x4, Bareiss elimination above.
pub fn det_int(m: &[Vec<BigInt>]) -> Result<BigInt, ArithError> {
    let n = check_square(m)?;
    if n <= 4 {
        Ok(cofactor(m))
    } else {
        Ok(bareiss(m.to_vec()))
    }
}

/// Laplace expansion along the first row.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> Result<BigInt, ArithError> {
    check_square(m)?;
    Ok(cofactor(m))
}

/// Fraction-free Gaussian elimination; every intermediate division is exact.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> Result<BigInt, ArithError> {
    check_square(m)?;
    Ok(bareiss(m.to_vec()))
}

fn cofactor(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => {
            let mut acc = BigInt::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * cofactor(&minor);
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect()
    }

    #[test]
    fn floor_examples() {
        assert_eq!(rat_floor(&q(7, 5)), big(1));
        assert_eq!(rat_floor(&q(-1, 5)), big(-1));
        assert_eq!(rat_floor(&q(3, 1)), big(3));
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac_part(&q(-1, 5)), q(4, 5));
        assert_eq!(frac_part(&Rational::zero()), Rational::zero());
        assert_eq!(frac_part(&q(12, 5)), q(2, 5));
    }

    #[test]
    fn canonical_form_and_display() {
        let x = q(6, -4);
        assert_eq!(x.numer(), &big(-3));
        assert_eq!(x.denom(), &big(2));
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(Rational::zero().to_string(), "0/1");
        assert_eq!("-6/4".parse::<Rational>().unwrap(), x);
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let s = serde_json::to_string(&q(-12, 5)).unwrap();
        assert_eq!(s, "\"-12/5\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q(-12, 5));
    }

    #[test]
    fn ext_gcd_examples() {
        assert_eq!(ext_gcd(&big(2), &big(5)).unwrap(), (big(1), big(-2), big(1)));
        assert_eq!(ext_gcd(&big(0), &big(7)).unwrap(), (big(7), big(0), big(1)));
        assert_eq!(ext_gcd(&big(6), &big(4)).unwrap(), (big(2), big(1), big(-1)));
        assert_eq!(ext_gcd(&big(0), &big(0)), Err(ArithError::BothZero));
        let (g, u, v) = ext_gcd(&big(-12), &big(18)).unwrap();
        assert_eq!(g, big(6));
        assert_eq!(u * big(-12) + v * big(18), big(6));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&big(3), &big(5)).unwrap(), big(2));
        assert_eq!(mod_inverse(&big(1), &big(7)).unwrap(), big(1));
        assert_eq!(mod_inverse(&big(4), &big(9)).unwrap(), big(7));
        assert!(matches!(
            mod_inverse(&big(6), &big(9)),
            Err(ArithError::NotCoprime { .. })
        ));
        assert!(matches!(
            mod_inverse(&big(1), &big(1)),
            Err(ArithError::InvalidModulus(_))
        ));
    }

    #[test]
    fn mod_inverse_matches_residue_scan() {
        for p in 2i64..40 {
            for x in 1..p {
                let scan = (1..p).find(|y| (x * y) % p == 1);
                match scan {
                    Some(y) => assert_eq!(mod_inverse(&big(x), &big(p)).unwrap(), big(y)),
                    None => assert!(mod_inverse(&big(x), &big(p)).is_err()),
                }
            }
        }
    }

    #[test]
    fn determinant_examples() {
        let id = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(det_int(&id).unwrap(), big(1));
        let beta5 = mat(&[&[0, 1, -1], &[2, 0, 3], &[5, 5, 5]]);
        assert_eq!(det_int(&beta5).unwrap(), big(-5));
        let beta3 = mat(&[&[0, 1, -1], &[0, 0, -3], &[1, 1, 1]]);
        assert_eq!(det_int(&beta3).unwrap(), big(-3));
        assert_eq!(det_bareiss(&beta3).unwrap(), big(-3));
        assert!(matches!(
            det_int(&mat(&[&[1, 2], &[3]])),
            Err(ArithError::NonSquare { row: 1, .. })
        ));
    }

    #[test]
    fn bareiss_handles_zero_pivots_and_singular() {
        let m = mat(&[
            &[0, 0, 1, 2, 3],
            &[0, 2, 0, 1, 1],
            &[4, 0, 0, 1, 0],
            &[1, 1, 1, 1, 1],
            &[2, 0, 3, 0, 1],
        ]);
        assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&m).unwrap());
        let singular = mat(&[
            &[1, 2, 3, 4, 5],
            &[2, 4, 6, 8, 10],
            &[0, 1, 0, 1, 0],
            &[3, 1, 4, 1, 5],
            &[9, 2, 6, 5, 3],
        ]);
        assert_eq!(det_int(&singular).unwrap(), big(0));
    }
}
