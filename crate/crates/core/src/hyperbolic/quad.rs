//! Exact arithmetic in `Q` and `Q(sqrt d)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `x + y sqrt(d)` with rational `x`, `y` and squarefree `d`.
///
/// `d = 1` is the rational field; there `y` is always zero. Elements with
/// `y = 0` combine with elements of any field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "QuadRepr", try_from = "QuadRepr")]
pub struct QuadElement {
    x: BigRational,
    y: BigRational,
    d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadError {
    #[error("{0} is not a squarefree integer other than 0")]
    NotSquarefree(i64),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("elements of Q(sqrt {0}) and Q(sqrt {1}) cannot be combined")]
    FieldMismatch(i64, i64),
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    x: String,
    y: String,
    d: i64,
}

impl From<QuadElement> for QuadRepr {
    fn from(q: QuadElement) -> Self {
        QuadRepr {
            x: q.x.to_string(),
            y: q.y.to_string(),
            d: q.d,
        }
    }
}

impl TryFrom<QuadRepr> for QuadElement {
    type Error = QuadError;

    fn try_from(r: QuadRepr) -> Result<Self, QuadError> {
        QuadElement::new(parse_rational(&r.x)?, parse_rational(&r.y)?, r.d)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, QuadError> {
    let s = s.trim();
    let err = || QuadError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Writes a nonzero rational `q` as `s^2 * d` with `d` squarefree.
/// Returns `None` when the numbers are too large to factor by trial division.
pub fn squarefree_decomposition(q: &BigRational) -> Option<(BigRational, i64)> {
    if q.is_zero() {
        return None;
    }
    // q = n / m = (n m) / m^2
    let nm = q.numer() * q.denom();
    let n = nm.abs().to_u64()?;
    if n > 1u64 << 48 {
        return None;
    }
    let mut rest = n;
    let mut square_root = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        square_root *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= rest;
    let d = if nm.is_negative() { -(free as i64) } else { free as i64 };
    let s = BigRational::new(BigInt::from(square_root), q.denom().clone());
    Some((s, d))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadElement {
    pub fn new(x: BigRational, y: BigRational, d: i64) -> Result<Self, QuadError> {
        if !is_squarefree(d) {
            return Err(QuadError::NotSquarefree(d));
        }
        if d == 1 {
            return Ok(QuadElement::rational(x + y));
        }
        Ok(QuadElement { x, y, d })
    }

    pub fn rational(x: BigRational) -> Self {
        QuadElement {
            x,
            y: BigRational::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        QuadElement::rational(rat(n))
    }

    pub fn from_ratio(n: i64, m: i64) -> Self {
        QuadElement::rational(BigRational::new(n.into(), m.into()))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: i64) -> Result<Self, QuadError> {
        QuadElement::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Self {
        QuadElement::from_int(0)
    }

    pub fn one() -> Self {
        QuadElement::from_int(1)
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    /// Field tag, `1` for rational elements.
    pub fn field(&self) -> i64 {
        if self.y.is_zero() {
            1
        } else {
            self.d
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.y.is_zero().then_some(&self.x)
    }

    pub fn is_real(&self) -> bool {
        self.d > 0 || self.y.is_zero()
    }

    fn common_field(&self, other: &QuadElement) -> Result<i64, QuadError> {
        match (self.field(), other.field()) {
            (1, e) | (e, 1) => Ok(e),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(QuadError::FieldMismatch(a, b)),
        }
    }

    fn combine(&self, other: &QuadElement) -> i64 {
        self.common_field(other)
            .unwrap_or_else(|e| panic!("quadratic arithmetic: {e}"))
    }

    fn norm(&self) -> BigRational {
        &self.x * &self.x - rat(self.d) * &self.y * &self.y
    }

    pub fn inverse(&self) -> Option<QuadElement> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadElement {
            x: &self.x / &n,
            y: -&self.y / &n,
            d: self.d,
        })
    }

    pub fn div(&self, other: &QuadElement) -> Option<QuadElement> {
        Some(self * &other.inverse()?)
    }

    /// Sign of a real element.
    pub fn signum(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        let sx = self.x.cmp(&BigRational::zero());
        let sy = self.y.cmp(&BigRational::zero());
        Some(match (sx, sy) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            (a, b) => {
                let x2 = &self.x * &self.x;
                let dy2 = rat(self.d) * &self.y * &self.y;
                if x2 > dy2 {
                    a
                } else {
                    b
                }
            }
        })
    }

    /// Exact comparison of real elements.
    pub fn cmp_real(&self, other: &QuadElement) -> Option<Ordering> {
        (self - other).signum()
    }

    /// A square root inside the element's field (or in a quadratic extension
    /// of `Q` when the element is rational), if one is representable.
    pub fn sqrt_of(&self) -> Option<QuadElement> {
        if self.is_zero() {
            return Some(QuadElement::zero());
        }
        let q = self.as_rational()?;
        let (s, d) = squarefree_decomposition(q)?;
        if d == 1 {
            Some(QuadElement::rational(s))
        } else {
            QuadElement::new(BigRational::zero(), s, d).ok()
        }
    }
}

impl PartialEq for QuadElement {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && (self.y.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadElement {}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if self.x.is_zero() {
            write!(f, "{}*sqrt({})", self.y, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}

impl<'a> Add<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn add(self, o: &QuadElement) -> QuadElement {
        let d = self.combine(o);
        QuadElement {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
            d,
        }
    }
}

impl<'a> Sub<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn sub(self, o: &QuadElement) -> QuadElement {
        let d = self.combine(o);
        QuadElement {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
            d,
        }
    }
}

impl<'a> Mul<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn mul(self, o: &QuadElement) -> QuadElement {
        let d = self.combine(o);
        QuadElement {
            x: &self.x * &o.x + rat(d) * &self.y * &o.y,
            y: &self.x * &o.y + &self.y * &o.x,
            d,
        }
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement {
            x: -&self.x,
            y: -&self.y,
            d: self.d,
        }
    }
}

impl Add for QuadElement {
    type Output = QuadElement;
    fn add(self, o: QuadElement) -> QuadElement {
        &self + &o
    }
}

impl Sub for QuadElement {
    type Output = QuadElement;
    fn sub(self, o: QuadElement) -> QuadElement {
        &self - &o
    }
}

impl Mul for QuadElement {
    type Output = QuadElement;
    fn mul(self, o: QuadElement) -> QuadElement {
        &self * &o
    }
}

impl Neg for QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, m: i64) -> QuadElement {
        QuadElement::from_ratio(n, m)
    }

    #[test]
    fn field_arithmetic() {
        let s2 = QuadElement::sqrt(2).unwrap();
        assert_eq!(&s2 * &s2, QuadElement::from_int(2));
        let z = &q(1, 1) + &s2;
        let inv = z.inverse().unwrap();
        assert_eq!(&z * &inv, QuadElement::one());
        let i = QuadElement::sqrt(-1).unwrap();
        assert_eq!(&i * &i, QuadElement::from_int(-1));
        assert!(!i.is_real());
        assert!(QuadElement::new(rat(1), rat(1), 4).is_err());
    }

    #[test]
    fn signs() {
        let s2 = QuadElement::sqrt(2).unwrap();
        // 3/2 - sqrt 2 > 0, 7/5 - sqrt 2 < 0
        assert_eq!((&q(3, 2) - &s2).signum(), Some(Ordering::Greater));
        assert_eq!((&q(7, 5) - &s2).signum(), Some(Ordering::Less));
        assert_eq!(q(-2, 1).cmp_real(&q(2, 1)), Some(Ordering::Less));
        assert_eq!(QuadElement::sqrt(-3).unwrap().signum(), None);
    }

    #[test]
    fn squarefree_parts() {
        let (s, d) = squarefree_decomposition(&BigRational::new(12.into(), 25.into())).unwrap();
        assert_eq!(d, 3);
        assert_eq!(s, BigRational::new(2.into(), 5.into()));
        let (s, d) = squarefree_decomposition(&BigRational::new((-4).into(), 1.into())).unwrap();
        assert_eq!((s, d), (rat(2), -1));
        let r = q(-3, 4).sqrt_of().unwrap();
        assert_eq!(&r * &r, q(-3, 4));
    }

    #[test]
    fn serde_roundtrip() {
        let z = QuadElement::new(BigRational::new(1.into(), 3.into()), rat(-2), -7).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        let back: QuadElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }
}
