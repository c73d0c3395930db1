//! Exponent bounds for `Σ_{m≤x} |η(m)|`.
//!
//! Both tables enumerate the lifted η digit matrices
//! `B_b = A_{i_{n−1}} ⋯ A_{i_0}` for all `2^n` binary words `b`:
//!
//! * [`lower_bound_row`] accumulates `A = Σ_b D_b ⊗ B_b`, where `D_b` is the
//!   sign pattern of `B_b`, and reports `log_{2^n} ρ(A)`.
//! * [`rn_abs_norm`] sums `|a| + |b|` over the first columns `(a, b)` of the
//!   `B_b`, which are the coefficients in `η(2^n m + r) = a·η(m) + b·η(m+1)`.
//!
//! Entries of `B_b` are dyadic with denominator `2^n` and modulus at most 1,
//! so the kernels work on integer numerators scaled by `2^n`.

mod dims;
mod lower;
mod sign;
mod upper;

pub use dims::{
    correlation_dimension, information_dimension, CorrelationDimension, InformationDimension,
    CORRELATION_CROSS_CHECK_TOLERANCE, CORRELATION_LEVEL, INFORMATION_MIN_TERMS,
};
pub use lower::{
    lower_bound_row, lower_bound_row_with, lower_sum_matrix, LowerChecks, LowerRow,
    LOWER_DEFAULT_MAX, LOWER_OVERRIDE_MAX,
};
pub use sign::{
    sign_matrix, sign_matrix_with, sign_rep, SignMatrix, SignRep, SignRule,
    SIGN_REP_MATERIALIZE_MAX,
};
pub use upper::{
    coefficient_pair, r_matrix, rn_abs_norm, rn_abs_norm_with, CoefficientPair, UpperRow,
    R_MATRIX_MAX, UPPER_DEFAULT_MAX, UPPER_OVERRIDE_MAX,
};

use crate::error::{Error, Result};
use crate::parallel::Parallelism;

/// `2^n · B` for a lifted digit matrix `B`.
pub(crate) type IntMat = [[i64; 2]; 2];

/// `2^{t+1}·B·A_d` from `2^t·B`, using the integer matrices
/// `2A_0 = [[2, −1], [0, −1]]` and `2A_1 = [[−1, 0], [−1, 2]]`.
#[inline(always)]
pub(crate) fn right_mul_digit(b: &IntMat, d: u64) -> IntMat {
    let (c0, c1) = ([b[0][0], b[1][0]], [b[0][1], b[1][1]]);
    let (n0, n1) = if d == 0 {
        ([2 * c0[0], 2 * c0[1]], [-c0[0] - c1[0], -c0[1] - c1[1]])
    } else {
        ([-c0[0] - c1[0], -c0[1] - c1[1]], [2 * c1[0], 2 * c1[1]])
    };
    [[n0[0], n1[0]], [n0[1], n1[1]]]
}

/// `2^n·B_b` where `b` is read as an `n`-digit binary word.
pub(crate) fn lifted_numerators(b: u64, n: u32) -> IntMat {
    (0..n).rev().fold([[1, 0], [0, 1]], |acc, i| {
        right_mul_digit(&acc, (b >> i) & 1)
    })
}

/// Settings shared by the enumeration kernels.
#[derive(Clone, Copy, Debug)]
pub struct EnumConfig {
    pub parallelism: Parallelism,
    /// Allows levels above the default budget.
    pub budget_override: bool,
    /// Words are split into independent tasks by their first
    /// `min(split_depth, n)` digits.
    pub split_depth: u32,
    pub sign_rule: SignRule,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            parallelism: Parallelism::default(),
            budget_override: false,
            split_depth: 8,
            sign_rule: SignRule::Column,
        }
    }
}

impl EnumConfig {
    pub fn with_threads(threads: usize) -> Self {
        EnumConfig {
            parallelism: Parallelism::new(threads),
            ..Self::default()
        }
    }

    pub fn check_level(
        &self,
        what: &'static str,
        n: u32,
        default_max: u32,
        override_max: u32,
    ) -> Result<()> {
        let max = if self.budget_override {
            override_max
        } else {
            default_max
        };
        if (1..=max).contains(&n) {
            Ok(())
        } else {
            Err(Error::LevelOutOfRange {
                what,
                n,
                min: 1,
                max,
                hint: if self.budget_override || n > override_max {
                    ""
                } else {
                    " (pass the budget override to go higher)"
                },
            })
        }
    }

    /// Prefixes of length `min(split_depth, n)` in increasing order, each
    /// with its lifted numerators.
    pub(crate) fn prefixes(&self, n: u32) -> (u32, Vec<(u64, IntMat)>) {
        let depth = self.split_depth.min(n);
        let tasks = (0..1u64 << depth)
            .map(|p| (p, lifted_numerators(p, depth)))
            .collect();
        (depth, tasks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use crate::linrep::{builtin, power_lift};

    #[test]
    fn integer_products_match_exact_lift() {
        for n in 1..=9 {
            let lifted = power_lift(&builtin::eta(), n).unwrap();
            for (b, m) in lifted.digit_mats().iter().enumerate() {
                let num = lifted_numerators(b as u64, n);
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(*m.get(i, j), Rational::dyadic(num[i][j], n));
                    }
                }
            }
        }
    }

    #[test]
    fn level_checks() {
        let cfg = EnumConfig::default();
        assert!(cfg.check_level("t", 25, 25, 30).is_ok());
        let err = cfg.check_level("t", 26, 25, 30).unwrap_err();
        assert!(err.to_string().contains("override"));
        let cfg = EnumConfig {
            budget_override: true,
            ..cfg
        };
        assert!(cfg.check_level("t", 30, 25, 30).is_ok());
        assert!(cfg.check_level("t", 31, 25, 30).is_err());
        assert!(cfg.check_level("t", 0, 25, 30).is_err());
    }
}
