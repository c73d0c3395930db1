use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::Serialize;

use super::sign::{SignMatrix, SignRule};
use super::{right_mul_digit, EnumConfig, IntMat};
use crate::error::Result;
use crate::exactnum::{Matrix, Polynomial, Rational};
use crate::spectral::{certify_real_root, eigenvalues};

pub const LOWER_DEFAULT_MAX: u32 = 25;
/// Numerators of `2^n·B_b` fit in `i64` and the accumulated `4×4` sums in
/// `i128` up to this level.
pub const LOWER_OVERRIDE_MAX: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerChecks {
    /// ρ(A) is a simple eigenvalue and the only one of maximal modulus.
    pub dominant_ok: bool,
    /// ρ(A) > 2, certified exactly.
    pub rho_gt_2: bool,
    /// Every `D_b ⊗ B_b` has induced 1-norm at most 2.
    pub jsr_guard_ok: bool,
    /// The largest of those norms.
    pub jsr_guard_norm: f64,
    /// `ρ(A)` minus the largest modulus of the other eigenvalues.
    pub margin: f64,
}

/// One row of the lower-bound table.
#[derive(Clone, Debug, Serialize)]
pub struct LowerRow {
    pub n: u32,
    pub rho: f64,
    /// Set when ρ(A) is rational.
    pub rho_exact: Option<Rational>,
    /// Exact interval containing ρ(A).
    pub rho_interval: Option<(Rational, Rational)>,
    pub char_poly: Polynomial,
    /// `log_{2^n} ρ(A)`.
    pub log_value: f64,
    pub checks: LowerChecks,
    #[serde(skip)]
    pub sum_matrix: Matrix,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl LowerRow {
    /// Characteristic polynomial of `A`, coefficients highest degree first,
    /// separated by spaces.
    pub fn statistic_exact(&self) -> String {
        self.char_poly.to_fraction_strings().join(" ")
    }

    pub fn wall_ms(&self) -> u128 {
        self.wall_time.as_millis()
    }
}

#[derive(Clone, Copy)]
struct Acc {
    a: [[i128; 4]; 4],
    /// Largest `2^n·‖D_b ⊗ B_b‖_1`.
    guard: i64,
    /// `2^n`, the numerator of 1.
    unit: i64,
}

impl Acc {
    fn new(n: u32) -> Self {
        Acc {
            a: [[0; 4]; 4],
            guard: 0,
            unit: 1 << n,
        }
    }

    fn merge(&mut self, other: &Acc) {
        for i in 0..4 {
            for j in 0..4 {
                self.a[i][j] += other.a[i][j];
            }
        }
        self.guard = self.guard.max(other.guard);
    }

    #[inline(always)]
    fn leaf(&mut self, b: &IntMat, rule: SignRule) -> Result<()> {
        let d = SignMatrix::of_numerators(b, rule)?;
        for r in 0..2 {
            for j in 0..2 {
                let s = d.0[r][j] as i128;
                if s == 0 {
                    continue;
                }
                for k in 0..2 {
                    for l in 0..2 {
                        self.a[2 * r + k][2 * j + l] += s * b[k][l] as i128;
                    }
                }
            }
        }
        let b_col = (b[0][0].abs() + b[1][0].abs()).max(b[0][1].abs() + b[1][1].abs());
        let d_col = (0..2)
            .map(|j| (d.0[0][j].abs() + d.0[1][j].abs()) as i64)
            .max()
            .unwrap_or(0);
        debug_assert!(b_col <= self.unit, "column sum of B exceeds 1");
        self.guard = self.guard.max(b_col * d_col);
        Ok(())
    }

    fn walk(&mut self, b: &IntMat, remaining: u32, rule: SignRule) -> Result<()> {
        if remaining == 0 {
            return self.leaf(b, rule);
        }
        self.walk(&right_mul_digit(b, 0), remaining - 1, rule)?;
        self.walk(&right_mul_digit(b, 1), remaining - 1, rule)
    }
}

/// `A = Σ_b D_b ⊗ B_b` over all `2^n` words, exactly, together with the
/// largest induced 1-norm of a single term.
pub fn lower_sum_matrix(n: u32, cfg: &EnumConfig) -> Result<(Matrix, Rational)> {
    cfg.check_level(
        "lower-bound table",
        n,
        LOWER_DEFAULT_MAX,
        LOWER_OVERRIDE_MAX,
    )?;
    let (depth, tasks) = cfg.prefixes(n);
    let rule = cfg.sign_rule;
    let parts = cfg.parallelism.map(tasks, |(_, b)| {
        let mut acc = Acc::new(n);
        acc.walk(&b, n - depth, rule).map(|_| acc)
    });
    let mut total = Acc::new(n);
    for part in parts {
        total.merge(&part?);
    }
    let entries = total
        .a
        .iter()
        .flatten()
        .map(|&x| Rational::dyadic(BigInt::from(x), n))
        .collect();
    let a = Matrix::new(4, 4, entries)?;
    Ok((a, Rational::dyadic(total.guard, n)))
}

pub fn lower_bound_row(n: u32) -> Result<LowerRow> {
    lower_bound_row_with(n, &EnumConfig::default())
}

pub fn lower_bound_row_with(n: u32, cfg: &EnumConfig) -> Result<LowerRow> {
    let start = Instant::now();
    let (a, guard) = lower_sum_matrix(n, cfg)?;
    let eig = eigenvalues(&a)?;
    let rho = eig.spectral_radius();
    let dominant = eig.dominant();
    let top = &dominant[0];
    let dominant_ok =
        dominant.len() == 1 && top.multiplicity == 1 && top.value.im == 0.0 && top.value.re > 0.0;
    let rho_exact = top.exact.clone().filter(|_| dominant_ok);
    let rho_interval = match &rho_exact {
        Some(r) => Some((r.clone(), r.clone())),
        None if dominant_ok => certify_real_root(&top.factor, rho, 1e-12 * rho),
        None => None,
    };
    let two = Rational::from(2);
    let rho_gt_2 = rho_interval.as_ref().is_some_and(|(lo, _)| *lo > two);
    let checks = LowerChecks {
        dominant_ok,
        rho_gt_2,
        jsr_guard_ok: guard <= two,
        jsr_guard_norm: guard.to_f64(),
        margin: rho - eig.subdominant_modulus(),
    };
    Ok(LowerRow {
        n,
        rho,
        rho_exact,
        rho_interval,
        char_poly: eig.char_poly.clone(),
        log_value: rho.log2() / n as f64,
        checks,
        sum_matrix: a,
        wall_time: start.elapsed(),
    })
}
