use std::borrow::Cow;

use serde::Serialize;

use super::{lifted_numerators, IntMat};
use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Rational};
use crate::linrep::{digits, LinearRep, Representation};

/// How the sign pattern `D` is read off `B`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum SignRule {
    /// In each column, the entry of larger modulus keeps its sign and the
    /// other becomes 0; ties go to the second row. Every column of `D` has
    /// exactly one nonzero entry.
    #[default]
    Column,
    /// The same comparison along each row; ties go to the second column.
    Row,
}

/// A 2×2 matrix with entries in {−1, 0, 1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignMatrix(pub [[i8; 2]; 2]);

impl SignMatrix {
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.0[i][j]
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(
            self.0
                .iter()
                .map(|r| r.iter().map(|&s| Rational::from(s as i64)).collect())
                .collect(),
        )
        .expect("2x2")
    }

    /// Sign pattern of a 2×2 integer matrix (any positive scale of `B`).
    pub(crate) fn of_numerators(b: &IntMat, rule: SignRule) -> Result<Self> {
        pattern(b, rule, |x| x.unsigned_abs(), |x| x.signum() as i8)
    }
}

fn pattern<T, M: PartialOrd>(
    b: &[[T; 2]; 2],
    rule: SignRule,
    mag: impl Fn(&T) -> M,
    sgn: impl Fn(&T) -> i8,
) -> Result<SignMatrix> {
    let mut d = [[0i8; 2]; 2];
    for k in 0..2 {
        let (first, second) = match rule {
            SignRule::Column => (&b[0][k], &b[1][k]),
            SignRule::Row => (&b[k][0], &b[k][1]),
        };
        let (pick, value) = if mag(first) > mag(second) {
            (0, first)
        } else {
            (1, second)
        };
        let s = sgn(value);
        if s == 0 {
            return Err(match rule {
                SignRule::Column => Error::ZeroColumn(k),
                SignRule::Row => Error::ZeroRow(k),
            });
        }
        match rule {
            SignRule::Column => d[pick][k] = s,
            SignRule::Row => d[k][pick] = s,
        }
    }
    Ok(SignMatrix(d))
}

/// Sign pattern of a 2×2 rational matrix under the default column rule.
pub fn sign_matrix(b: &Matrix) -> Result<SignMatrix> {
    sign_matrix_with(b, SignRule::Column)
}

pub fn sign_matrix_with(b: &Matrix, rule: SignRule) -> Result<SignMatrix> {
    if b.shape() != (2, 2) {
        return Err(Error::MalformedMatrix(format!(
            "sign_matrix needs a 2x2 matrix, got {:?}",
            b.shape()
        )));
    }
    let e = |i, j| b.get(i, j).clone();
    pattern(
        &[[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        rule,
        Rational::abs,
        |x| x.signum() as i8,
    )
}

/// The ±1 sequence `f^(n)` over radix `2^n`: initial vector `(1, −1)`, final
/// vector `e_1`, and digit matrix `D_b`, the sign pattern of the lifted η
/// digit matrix `B_b`. Digit matrices are derived on demand.
#[derive(Clone, Debug)]
pub struct SignRep {
    n: u32,
    rule: SignRule,
    initial: Matrix,
    final_vec: Matrix,
}

impl SignRep {
    pub const MAX_LEVEL: u32 = 25;

    pub fn new(n: u32) -> Result<Self> {
        Self::with_rule(n, SignRule::Column)
    }

    pub fn with_rule(n: u32, rule: SignRule) -> Result<Self> {
        if !(1..=Self::MAX_LEVEL).contains(&n) {
            return Err(Error::LevelOutOfRange {
                what: "sign representation",
                n,
                min: 1,
                max: Self::MAX_LEVEL,
                hint: "",
            });
        }
        Ok(SignRep {
            n,
            rule,
            initial: Matrix::row_vector(vec![Rational::from(1), Rational::from(-1)]).expect("1x2"),
            final_vec: Matrix::basis_column(2, 0),
        })
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn digit_signs(&self, b: u64) -> SignMatrix {
        assert!(
            b < 1 << self.n,
            "digit {b} out of range for radix 2^{}",
            self.n
        );
        SignMatrix::of_numerators(&lifted_numerators(b, self.n), self.rule)
            .expect("B_b is invertible")
    }

    /// `f^(n)(m)` in integer arithmetic.
    pub fn value(&self, m: u64) -> i64 {
        let mut v = [1i64, -1];
        for b in digits(m, 1 << self.n).digits {
            let d = self.digit_signs(b);
            v = [
                v[0] * d.get(0, 0) as i64 + v[1] * d.get(1, 0) as i64,
                v[0] * d.get(0, 1) as i64 + v[1] * d.get(1, 1) as i64,
            ];
        }
        v[0]
    }

    /// Materializes all `2^n` digit matrices.
    pub fn to_linear_rep(&self) -> Result<LinearRep> {
        let mats = (0..1u64 << self.n)
            .map(|b| self.digit_signs(b).to_matrix())
            .collect();
        LinearRep::with_final(
            1 << self.n,
            self.initial.clone(),
            mats,
            self.final_vec.clone(),
        )
    }
}

impl Representation for SignRep {
    fn radix(&self) -> u64 {
        1 << self.n
    }
    fn dim(&self) -> usize {
        2
    }
    fn initial(&self) -> &Matrix {
        &self.initial
    }
    fn final_vector(&self) -> &Matrix {
        &self.final_vec
    }
    fn digit_matrix(&self, digit: u64) -> Cow<'_, Matrix> {
        Cow::Owned(self.digit_signs(digit).to_matrix())
    }
}

/// Largest level [`sign_rep`] materializes.
pub const SIGN_REP_MATERIALIZE_MAX: u32 = 12;

/// Materialized representation of `f^(n)` for `1 ≤ n ≤ 12`; use
/// [`SignRep`] directly for larger levels.
pub fn sign_rep(n: u32) -> Result<LinearRep> {
    if !(1..=SIGN_REP_MATERIALIZE_MAX).contains(&n) {
        return Err(Error::LevelOutOfRange {
            what: "sign_rep",
            n,
            min: 1,
            max: SIGN_REP_MATERIALIZE_MAX,
            hint: " (SignRep::new evaluates larger levels lazily)",
        });
    }
    SignRep::new(n)?.to_linear_rep()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrep::{builtin, power_lift};

    fn sm(rows: [[i8; 2]; 2]) -> SignMatrix {
        SignMatrix(rows)
    }

    #[test]
    fn eta_digit_matrices() {
        assert_eq!(
            sign_matrix(&builtin::eta_a0()).unwrap(),
            sm([[1, 0], [0, -1]])
        );
        let a00 = builtin::eta_a0().mat_mul(&builtin::eta_a0()).unwrap();
        assert_eq!(sign_matrix(&a00).unwrap(), sm([[1, 0], [0, 1]]));
        assert_eq!(
            sign_matrix_with(&a00, SignRule::Row).unwrap(),
            sm([[1, 0], [0, 1]])
        );
    }

    #[test]
    fn ties_go_to_the_second_entry() {
        let b = Matrix::from_strs(&[&["1/2", "-1/2"], &["1/2", "1/4"]]).unwrap();
        // column 0 ties between the rows; row 0 ties between the columns
        assert_eq!(sign_matrix(&b).unwrap(), sm([[0, -1], [1, 0]]));
        assert_eq!(sign_matrix_with(&b, SignRule::Row).unwrap().0[0], [0, -1]);
    }

    #[test]
    fn zero_lines_rejected() {
        let b = Matrix::from_strs(&[&["1", "0"], &["2", "0"]]).unwrap();
        assert!(matches!(sign_matrix(&b), Err(Error::ZeroColumn(1))));
        let b = Matrix::from_strs(&[&["1", "2"], &["0", "0"]]).unwrap();
        assert!(matches!(
            sign_matrix_with(&b, SignRule::Row),
            Err(Error::ZeroRow(1))
        ));
        assert!(sign_matrix(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn integer_and_rational_paths_agree() {
        for n in 1..=8 {
            let lifted = power_lift(&builtin::eta(), n).unwrap();
            let rep = SignRep::new(n).unwrap();
            for (b, m) in lifted.digit_mats().iter().enumerate() {
                assert_eq!(sign_matrix(m).unwrap(), rep.digit_signs(b as u64));
            }
        }
    }

    #[test]
    fn lazy_and_materialized_agree() {
        for n in 1..=6 {
            let lazy = SignRep::new(n).unwrap();
            let full = sign_rep(n).unwrap();
            for m in 0..3000 {
                let v = full.evaluate(m);
                assert_eq!(v, Rational::from(lazy.value(m)));
                assert_eq!(v, lazy.evaluate(m));
            }
        }
        assert!(sign_rep(13).is_err());
        assert!(SignRep::new(26).is_err());
        assert!(SignRep::new(0).is_err());
    }

    #[test]
    fn value_at_zero_and_five() {
        for n in 1..=19 {
            let rep = SignRep::new(n).unwrap();
            assert_eq!(rep.value(0), 1);
            assert_eq!(rep.value(5), if n % 2 == 0 { 1 } else { -1 });
        }
    }
}
