use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::Rational;

#[derive(Clone, Debug)]
enum Numerator {
    Small(i128),
    Big(BigInt),
}

impl Numerator {
    fn to_big(&self) -> BigInt {
        match self {
            Numerator::Small(v) => BigInt::from(*v),
            Numerator::Big(v) => v.clone(),
        }
    }

    fn from_big(v: BigInt) -> Self {
        match v.to_i128() {
            Some(s) => Numerator::Small(s),
            None => Numerator::Big(v),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Numerator::Small(v) => *v == 0,
            Numerator::Big(v) => v.is_zero(),
        }
    }

    fn signum(&self) -> i32 {
        match self {
            Numerator::Small(v) => v.signum() as i32,
            Numerator::Big(v) => match v.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            },
        }
    }

    /// `self * 2^shift`, promoting when the result leaves i128.
    fn shl(&self, shift: u32) -> Self {
        if shift == 0 {
            return self.clone();
        }
        match self {
            Numerator::Small(v) => {
                if *v == 0 {
                    return Numerator::Small(0);
                }
                let headroom = v.unsigned_abs().leading_zeros();
                if shift < headroom {
                    Numerator::Small(v << shift)
                } else {
                    Numerator::Big(BigInt::from(*v) << shift)
                }
            }
            Numerator::Big(v) => Numerator::Big(v << shift),
        }
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Numerator::Small(a), Numerator::Small(b)) => match a.checked_add(*b) {
                Some(s) => Numerator::Small(s),
                None => Numerator::Big(BigInt::from(*a) + BigInt::from(*b)),
            },
            _ => Numerator::from_big(self.to_big() + other.to_big()),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Numerator::Small(a), Numerator::Small(b)) => match a.checked_mul(*b) {
                Some(p) => Numerator::Small(p),
                None => Numerator::Big(BigInt::from(*a) * BigInt::from(*b)),
            },
            _ => Numerator::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Numerator::Small(v) => match v.checked_neg() {
                Some(n) => Numerator::Small(n),
                None => Numerator::Big(-BigInt::from(*v)),
            },
            Numerator::Big(v) => Numerator::from_big(-v),
        }
    }

    fn trailing_zeros(&self) -> u32 {
        match self {
            Numerator::Small(v) => v.trailing_zeros(),
            Numerator::Big(v) => v.trailing_zeros().map(|t| t as u32).unwrap_or(0),
        }
    }

    fn shr_exact(&self, shift: u32) -> Self {
        match self {
            Numerator::Small(v) => Numerator::Small(v >> shift),
            Numerator::Big(v) => Numerator::from_big(v >> shift),
        }
    }
}

/// Exact dyadic rational `numerator / 2^exponent`.
///
/// The numerator lives in an `i128` and is promoted to a big integer on
/// overflow instead of wrapping. Arithmetic does not normalize; call
/// [`DyadicScalar::normalized`] to get an odd numerator (or `0/2^0`).
#[derive(Clone, Debug)]
pub struct DyadicScalar {
    num: Numerator,
    exp: u32,
}

impl DyadicScalar {
    pub fn new(num: i128, exp: u32) -> Self {
        DyadicScalar {
            num: Numerator::Small(num),
            exp,
        }
    }

    pub fn from_bigint(num: BigInt, exp: u32) -> Self {
        DyadicScalar {
            num: Numerator::from_big(num),
            exp,
        }
    }

    pub fn from_integer(n: i128) -> Self {
        Self::new(n, 0)
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn numerator(&self) -> BigInt {
        self.num.to_big()
    }

    /// True once the numerator has left the `i128` fast path.
    pub fn is_promoted(&self) -> bool {
        matches!(self.num, Numerator::Big(_))
    }

    pub fn signum(&self) -> i32 {
        self.num.signum()
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn normalized(&self) -> Self {
        if self.num.is_zero() {
            return DyadicScalar::new(0, 0);
        }
        let shift = self.num.trailing_zeros().min(self.exp);
        DyadicScalar {
            num: self.num.shr_exact(shift),
            exp: self.exp - shift,
        }
    }

    /// Rewrite with the given (not smaller) exponent.
    pub fn with_exponent(&self, exp: u32) -> Self {
        assert!(
            exp >= self.exp,
            "cannot lower the exponent without rounding"
        );
        DyadicScalar {
            num: self.num.shl(exp - self.exp),
            exp,
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::dyadic(self.num.to_big(), self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.normalized();
        match &n.num {
            Numerator::Small(v) if v.unsigned_abs() < (1u128 << 53) => {
                (*v as f64) * (-(n.exp as f64)).exp2()
            }
            _ => n.to_rational().to_f64(),
        }
    }

    /// log2 of |self|, accurate even when the numerator exceeds f64 range.
    pub fn log2_abs(&self) -> f64 {
        let n = self.normalized();
        let big = n.num.to_big().abs();
        let bits = big.bits();
        let (mantissa, shift) = if bits > 60 {
            let s = bits - 60;
            ((&big >> s).to_f64().unwrap(), s as f64)
        } else {
            (big.to_f64().unwrap(), 0.0)
        };
        mantissa.log2() + shift - n.exp as f64
    }

    /// Exact `p/q` string of the normalized value.
    pub fn to_fraction_string(&self) -> String {
        self.to_rational().to_string()
    }

    fn aligned(&self, other: &Self) -> (Numerator, Numerator, u32) {
        let exp = self.exp.max(other.exp);
        (
            self.num.shl(exp - self.exp),
            other.num.shl(exp - other.exp),
            exp,
        )
    }
}

impl Zero for DyadicScalar {
    fn zero() -> Self {
        DyadicScalar::new(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for DyadicScalar {
    fn one() -> Self {
        DyadicScalar::new(1, 0)
    }
}

impl Add for DyadicScalar {
    type Output = DyadicScalar;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Add for &DyadicScalar {
    type Output = DyadicScalar;
    fn add(self, rhs: Self) -> DyadicScalar {
        let (a, b, exp) = self.aligned(rhs);
        DyadicScalar {
            num: a.add(&b),
            exp,
        }
    }
}

impl Sub for DyadicScalar {
    type Output = DyadicScalar;
    fn sub(self, rhs: Self) -> Self {
        &self + &(-rhs)
    }
}

impl Mul for DyadicScalar {
    type Output = DyadicScalar;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &DyadicScalar {
    type Output = DyadicScalar;
    fn mul(self, rhs: Self) -> DyadicScalar {
        DyadicScalar {
            num: self.num.mul(&rhs.num),
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for DyadicScalar {
    type Output = DyadicScalar;
    fn neg(self) -> Self {
        DyadicScalar {
            num: self.num.neg(),
            exp: self.exp,
        }
    }
}

impl PartialEq for DyadicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DyadicScalar {}

impl PartialOrd for DyadicScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        match (a, b) {
            (Numerator::Small(x), Numerator::Small(y)) => x.cmp(&y),
            (x, y) => x.to_big().cmp(&y.to_big()),
        }
    }
}

impl fmt::Display for DyadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_rational(), f)
    }
}

impl Serialize for DyadicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl TryFrom<&Rational> for DyadicScalar {
    type Error = crate::Error;

    fn try_from(r: &Rational) -> Result<Self, Self::Error> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if !(den >> tz).is_one() {
            return Err(crate::Error::Unsupported(format!("{r} is not dyadic")));
        }
        Ok(DyadicScalar::from_bigint(r.numer().clone(), tz as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_strips_twos() {
        let d = DyadicScalar::new(12, 4).normalized();
        assert_eq!(d.numerator(), BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        let z = DyadicScalar::new(0, 9).normalized();
        assert_eq!(z.exponent(), 0);
        // exponent never goes negative
        let i = DyadicScalar::new(8, 1).normalized();
        assert_eq!((i.numerator(), i.exponent()), (BigInt::from(4), 0));
    }

    #[test]
    fn overflow_promotes_instead_of_wrapping() {
        let big = DyadicScalar::new(i128::MAX, 0);
        let sum = &big + &big;
        assert!(sum.is_promoted());
        assert_eq!(sum.numerator(), BigInt::from(i128::MAX) * 2);
        let prod = &big * &big;
        assert_eq!(
            prod.numerator(),
            BigInt::from(i128::MAX) * BigInt::from(i128::MAX)
        );
        let min = DyadicScalar::new(i128::MIN, 0);
        assert_eq!((-min).numerator(), -BigInt::from(i128::MIN));
        // alignment shift past i128
        let shifted = DyadicScalar::new(3, 0).with_exponent(200);
        assert!(shifted.is_promoted());
        assert_eq!(shifted.to_rational(), Rational::from_integer(3));
    }

    #[test]
    fn comparison_across_exponents() {
        assert_eq!(DyadicScalar::new(1, 1), DyadicScalar::new(4, 3));
        assert!(DyadicScalar::new(-1, 0) < DyadicScalar::new(1, 60));
    }

    #[test]
    fn log2_of_large_values() {
        let d = DyadicScalar::from_bigint(BigInt::from(3) << 300u32, 10);
        assert!((d.log2_abs() - (3f64.log2() + 290.0)).abs() < 1e-12);
    }

    #[test]
    fn rational_round_trip() {
        let r = Rational::new(-15, 8);
        let d = DyadicScalar::try_from(&r).unwrap();
        assert_eq!(d.to_rational(), r);
        assert!(DyadicScalar::try_from(&Rational::new(1, 3)).is_err());
    }
}
