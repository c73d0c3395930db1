use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{Matrix, Rational};
use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients, stored lowest degree first.
/// The zero polynomial has no coefficients; otherwise the last coefficient is
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Coefficients given highest degree first, as usually written.
    pub fn from_high_first(coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs.into_iter().rev().collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// Lowest degree first.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(Rational::to_f64).collect()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c.to_f64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from(i as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Unsupported("polynomial division by zero".into()));
        };
        let lc_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let delta = &q * d;
                rem[k + j] -= &delta;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition of a monic polynomial: pairs
    /// `(f_i, i)` with `self = Π f_i^i`, each `f_i` square-free, monic, and
    /// pairwise coprime. Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(Polynomial, usize)> {
        let p = self.monic();
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_rem(&a0).unwrap().0;
        let mut c = dp.div_rem(&a0).unwrap().0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).unwrap().0;
            c = d.div_rem(&a).unwrap().0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = other.coeffs.get(i).cloned().unwrap_or_default();
                    a - b
                })
                .collect(),
        )
    }

    /// Evaluate at a square matrix (Horner with matrix products).
    pub fn eval_matrix(&self, m: &Matrix) -> Result<Matrix> {
        m.require_square("eval_matrix")?;
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mat_mul(m)?.add(&Matrix::identity(n).scale(c))?;
        }
        Ok(acc)
    }

    /// Coefficients highest degree first, as fraction strings.
    pub fn to_fraction_strings(&self) -> Vec<String> {
        self.coeffs.iter().rev().map(ToString::to_string).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.signum() < 0 {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Largest dimension accepted by [`char_poly`].
pub const CHAR_POLY_MAX_DIM: usize = 16;

/// Monic characteristic polynomial `det(xI - m)` via Faddeev–LeVerrier over
/// exact rationals.
pub fn char_poly(m: &Matrix) -> Result<Polynomial> {
    m.require_square("char_poly")?;
    let n = m.rows();
    if n > CHAR_POLY_MAX_DIM {
        return Err(Error::Unsupported(format!(
            "char_poly limited to dimension {CHAR_POLY_MAX_DIM}, got {n}"
        )));
    }
    // coeffs[k] is the coefficient of x^k
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let identity = Matrix::identity(n);
    let mut mk = identity.clone();
    for k in 1..=n {
        let am = m.mat_mul(&mk)?;
        let c = -(am.trace()? / Rational::from(k as i64));
        coeffs[n - k] = c.clone();
        mk = am.add(&identity.scale(&c))?;
    }
    Ok(Polynomial::new(coeffs))
}
