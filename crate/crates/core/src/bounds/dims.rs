use serde::Serialize;

use crate::error::{Error, Result};
use crate::linrep::{block_sums, builtin};
use crate::sequences::{EtaTable, ETA_PARTIAL_SUM_BOUND, TABLE_MAX_INDEX};
use crate::spectral::eigenvalues;

/// Level of the block sums used for the empirical correlation dimension.
pub const CORRELATION_LEVEL: u32 = 40;
pub const CORRELATION_CROSS_CHECK_TOLERANCE: f64 = 1e-6;
pub const INFORMATION_MIN_TERMS: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationDimension {
    /// `1 − log_2 ρ` with ρ the dominant eigenvalue of the η² sum matrix.
    pub closed_form: f64,
    /// `1 − log_2` of the ratio of successive increments of
    /// `S(n) = Σ_{m<2^n} η(m)²` at the top level.
    pub empirical: f64,
    /// `1 − log_2 S(n) / n`, which converges only like `1/n`.
    pub naive_slope: f64,
    pub level: u32,
}

/// The correlation dimension of the spectral measure, from the exact
/// dominant eigenvalue and, independently, from exact block sums of η².
pub fn correlation_dimension() -> Result<CorrelationDimension> {
    let sq = builtin::eta_squared();
    let eig = eigenvalues(&sq.sum_matrix())?;
    let dominant = eig.dominant();
    if dominant.len() != 1 || dominant[0].value.im != 0.0 {
        return Err(Error::CrossCheck(
            "η² sum matrix has no unique real dominant eigenvalue".into(),
        ));
    }
    let closed_form = 1.0 - dominant[0].value.re.log2();

    let n = CORRELATION_LEVEL;
    let s = block_sums(&sq, n)?;
    let (s2, s1, s0) = (&s[n as usize], &s[n as usize - 1], &s[n as usize - 2]);
    let ratio = (s2 - s1) / (s1 - s0);
    let empirical = 1.0 - ratio.to_f64().log2();
    let naive_slope = 1.0 - s2.to_f64().log2() / n as f64;

    if (closed_form - empirical).abs() > CORRELATION_CROSS_CHECK_TOLERANCE {
        return Err(Error::CrossCheck(format!(
            "correlation dimension: closed form {closed_form} vs empirical {empirical}"
        )));
    }
    Ok(CorrelationDimension {
        closed_form,
        empirical,
        naive_slope,
        level: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InformationDimension {
    /// `2 + (2/ln 2)·Σ_{m=1}^{N} η(m)/m`.
    pub estimate: f64,
    /// Bound on the omitted tail `(2/ln 2)·|Σ_{m>N} η(m)/m|`.
    pub tail_bound: f64,
    pub terms: u64,
}

/// Truncated Dirichlet-series value of the information dimension. With
/// `|Σ_{m≤x} η(m)| ≤ C` for all `x`, Abel summation bounds the tail by
/// `2C/(N+1)`.
pub fn information_dimension(terms: u64) -> Result<InformationDimension> {
    if !(INFORMATION_MIN_TERMS..=TABLE_MAX_INDEX).contains(&terms) {
        return Err(Error::Unsupported(format!(
            "information_dimension needs {INFORMATION_MIN_TERMS} <= N <= {TABLE_MAX_INDEX}, got {terms}"
        )));
    }
    let table = EtaTable::new(terms)?;
    // Neumaier-compensated summation
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for m in 1..=terms {
        let x = table.get_f64(m) / m as f64;
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    let scale = 2.0 / std::f64::consts::LN_2;
    Ok(InformationDimension {
        estimate: 2.0 + scale * (sum + comp),
        tail_bound: scale * 2.0 * ETA_PARTIAL_SUM_BOUND / (terms + 1) as f64,
        terms,
    })
}
