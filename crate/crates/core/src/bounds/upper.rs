use std::time::{Duration, Instant};

use serde::Serialize;

use super::{lifted_numerators, EnumConfig};
use crate::error::{Error, Result};
use crate::exactnum::{DyadicScalar, Matrix, Rational};

pub const UPPER_DEFAULT_MAX: u32 = 24;
pub const UPPER_OVERRIDE_MAX: u32 = 30;
/// Largest level [`r_matrix`] materializes.
pub const R_MATRIX_MAX: u32 = 12;

/// `(a, b)` with `η(2^n m + r) = a·η(m) + b·η(m+1)` for all `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientPair {
    pub a: DyadicScalar,
    pub b: DyadicScalar,
}

impl CoefficientPair {
    pub fn abs_sum(&self) -> DyadicScalar {
        (self.a.abs() + self.b.abs()).normalized()
    }
}

/// The first column of the lifted digit matrix `B_r`.
pub fn coefficient_pair(n: u32, r: u64) -> Result<CoefficientPair> {
    if !(1..=62).contains(&n) {
        return Err(Error::LevelOutOfRange {
            what: "coefficient_pair",
            n,
            min: 1,
            max: 62,
            hint: "",
        });
    }
    if r >> n != 0 {
        return Err(Error::Unsupported(format!(
            "residue {r} is not below 2^{n}"
        )));
    }
    let b = lifted_numerators(r, n);
    Ok(CoefficientPair {
        a: DyadicScalar::new(b[0][0] as i128, n).normalized(),
        b: DyadicScalar::new(b[1][0] as i128, n).normalized(),
    })
}

/// The `2^n × 2` matrix whose row `r` is [`coefficient_pair`]`(n, r)`.
pub fn r_matrix(n: u32) -> Result<Matrix> {
    if !(1..=R_MATRIX_MAX).contains(&n) {
        return Err(Error::LevelOutOfRange {
            what: "r_matrix",
            n,
            min: 1,
            max: R_MATRIX_MAX,
            hint: "",
        });
    }
    let mut entries = Vec::with_capacity(2 << n);
    for r in 0..1u64 << n {
        let p = coefficient_pair(n, r)?;
        entries.push(p.a.to_rational());
        entries.push(p.b.to_rational());
    }
    Matrix::new(1 << n, 2, entries)
}

/// One row of the upper-bound table.
#[derive(Clone, Debug, Serialize)]
pub struct UpperRow {
    pub n: u32,
    /// `‖R_n‖_abs`, normalized.
    pub norm: DyadicScalar,
    pub norm_float: f64,
    /// `log_{2^n} ‖R_n‖_abs`.
    pub log_value: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl UpperRow {
    pub fn wall_ms(&self) -> u128 {
        self.wall_time.as_millis()
    }

    pub fn norm_rational(&self) -> Rational {
        self.norm.to_rational()
    }
}

/// Adds `|a| + |b|` over every extension of `(a, b)` by `remaining` more
/// significant digits. Digit `d` acts as `p ↦ 2A_d·p`:
/// `2A_0·(a, b) = (2a − b, −b)` and `2A_1·(a, b) = (−a, 2b − a)`.
fn walk(a: i64, b: i64, remaining: u32) -> i128 {
    if remaining == 1 {
        let s0 = (2 * a - b).abs() + b.abs();
        let s1 = a.abs() + (2 * b - a).abs();
        return s0 as i128 + s1 as i128;
    }
    if remaining == 0 {
        return (a.abs() + b.abs()) as i128;
    }
    walk(2 * a - b, -b, remaining - 1) + walk(-a, 2 * b - a, remaining - 1)
}

/// `‖R_n‖_abs` and its base-`2^n` logarithm, enumerating all `2^n` words.
pub fn rn_abs_norm(n: u32) -> Result<(DyadicScalar, f64)> {
    let row = rn_abs_norm_with(n, &EnumConfig::default())?;
    Ok((row.norm, row.log_value))
}

pub fn rn_abs_norm_with(n: u32, cfg: &EnumConfig) -> Result<UpperRow> {
    cfg.check_level(
        "upper-bound table",
        n,
        UPPER_DEFAULT_MAX,
        UPPER_OVERRIDE_MAX,
    )?;
    let start = Instant::now();
    let (depth, tasks) = cfg.prefixes(n);
    // The tasks fix the least significant digits; each walk prepends the rest.
    let parts = cfg
        .parallelism
        .map(tasks, |(_, b)| walk(b[0][0], b[1][0], n - depth));
    let total: i128 = parts.into_iter().sum();
    let norm = DyadicScalar::new(total, n).normalized();
    let log_value = norm.log2_abs() / n as f64;
    Ok(UpperRow {
        n,
        norm_float: norm.to_f64(),
        norm,
        log_value,
        wall_time: start.elapsed(),
    })
}
