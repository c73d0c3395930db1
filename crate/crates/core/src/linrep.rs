//! Linear representations `(ℓ, A_0, …, A_{k−1}, c)` of k-regular sequences.
//!
//! A sequence `f` is evaluated from the base-k digits `i_s … i_0` of `n`
//! (most significant first) as `f(n) = ℓ · A_{i_s} ⋯ A_{i_0} · c`, with the
//! least significant digit applied last. `n = 0` has the empty digit string
//! and evaluates to `ℓ · c`.

use std::borrow::Cow;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{sum_matrices, Matrix, Rational};

/// Base-k digits, most significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitString {
    pub radix: u64,
    pub digits: Vec<u64>,
    /// True when the string was left-padded with zeros to a fixed width.
    pub padded: bool,
}

/// Base-`k` expansion of `n` without leading zeros; empty for `n = 0`.
pub fn digits(n: u64, k: u64) -> DigitString {
    assert!(k >= 2, "radix must be at least 2");
    let mut out = Vec::new();
    let mut n = n;
    while n > 0 {
        out.push(n % k);
        n /= k;
    }
    out.reverse();
    DigitString {
        radix: k,
        digits: out,
        padded: false,
    }
}

/// Base-`k` expansion of `n` left-padded with zeros to exactly `width` digits.
/// Panics if `n` needs more than `width` digits.
pub fn digits_padded(n: u64, k: u64, width: usize) -> DigitString {
    let mut d = digits(n, k);
    assert!(
        d.digits.len() <= width,
        "{n} needs more than {width} base-{k} digits"
    );
    let mut padded = vec![0; width - d.digits.len()];
    padded.append(&mut d.digits);
    DigitString {
        radix: k,
        digits: padded,
        padded: true,
    }
}

/// Anything that can hand out the parts of a linear representation. Digit
/// matrices may be produced on demand, which lets very large radices stay
/// unmaterialized.
pub trait Representation {
    fn radix(&self) -> u64;
    fn dim(&self) -> usize;
    /// The 1×d row vector ℓ.
    fn initial(&self) -> &Matrix;
    /// The d×1 column vector read out at the end (e_1 by default).
    fn final_vector(&self) -> &Matrix;
    fn digit_matrix(&self, digit: u64) -> Cow<'_, Matrix>;

    /// Row vector `ℓ · A_{i_s} ⋯ A_{i_0}` for the given digit string.
    fn state_for_digits(&self, digits: &[u64]) -> Matrix {
        digits.iter().fold(self.initial().clone(), |v, &d| {
            v.mat_mul(&self.digit_matrix(d)).expect("shapes validated")
        })
    }

    fn evaluate(&self, n: u64) -> Rational {
        let d = digits(n, self.radix());
        self.evaluate_digits(&d.digits)
    }

    /// Evaluate an explicit (possibly zero-padded) digit string.
    fn evaluate_digits(&self, digits: &[u64]) -> Rational {
        let v = self.state_for_digits(digits);
        v.mat_mul(self.final_vector())
            .expect("shapes validated")
            .get(0, 0)
            .clone()
    }
}

/// A fully materialized linear representation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearRep {
    radix: u64,
    dim: usize,
    initial: Matrix,
    digit_mats: Vec<Matrix>,
    #[serde(rename = "final")]
    final_vec: Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub shapes_ok: bool,
    /// `ℓ·A_0 = ℓ`: leading zeros do not change values, which is what
    /// block sums and the digit-recursive partial sum rely on.
    pub leading_zero_invariant: bool,
}

/// Which algorithm computes a partial sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumEngine {
    /// Evaluate every term.
    Naive,
    /// Decompose `[0, x]` by most-significant-digit prefixes. Needs the
    /// leading-zero invariant.
    DigitRecursive,
}

impl LinearRep {
    /// Builds a representation with `final = e_1`.
    pub fn new(radix: u64, initial: Matrix, digit_mats: Vec<Matrix>) -> Result<Self> {
        let dim = initial.cols();
        Self::with_final(radix, initial, digit_mats, Matrix::basis_column(dim, 0))
    }

    pub fn with_final(
        radix: u64,
        initial: Matrix,
        digit_mats: Vec<Matrix>,
        final_vec: Matrix,
    ) -> Result<Self> {
        if radix < 2 {
            return Err(Error::MalformedRep(format!("radix {radix} < 2")));
        }
        if digit_mats.len() as u64 != radix {
            return Err(Error::MalformedRep(format!(
                "{} digit matrices for radix {radix}",
                digit_mats.len()
            )));
        }
        let dim = initial.cols();
        if initial.rows() != 1 {
            return Err(Error::MalformedRep(format!(
                "initial vector has shape {:?}",
                initial.shape()
            )));
        }
        if final_vec.shape() != (dim, 1) {
            return Err(Error::MalformedRep(format!(
                "final vector has shape {:?}, expected ({dim}, 1)",
                final_vec.shape()
            )));
        }
        if let Some((b, m)) = digit_mats
            .iter()
            .enumerate()
            .find(|(_, m)| m.shape() != (dim, dim))
        {
            return Err(Error::MalformedRep(format!(
                "digit matrix {b} has shape {:?}, expected ({dim}, {dim})",
                m.shape()
            )));
        }
        Ok(LinearRep {
            radix,
            dim,
            initial,
            digit_mats,
            final_vec,
        })
    }

    pub fn digit_mats(&self) -> &[Matrix] {
        &self.digit_mats
    }

    /// Same representation with a different read-out vector.
    pub fn with_final_vector(&self, final_vec: Matrix) -> Result<Self> {
        Self::with_final(
            self.radix,
            self.initial.clone(),
            self.digit_mats.clone(),
            final_vec,
        )
    }

    /// `A_0 + … + A_{k−1}`.
    pub fn sum_matrix(&self) -> Matrix {
        sum_matrices(&self.digit_mats).expect("radix >= 2")
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

impl Representation for LinearRep {
    fn radix(&self) -> u64 {
        self.radix
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn initial(&self) -> &Matrix {
        &self.initial
    }
    fn final_vector(&self) -> &Matrix {
        &self.final_vec
    }
    fn digit_matrix(&self, digit: u64) -> Cow<'_, Matrix> {
        Cow::Borrowed(&self.digit_mats[digit as usize])
    }
}

pub fn evaluate(rep: &impl Representation, n: u64) -> Rational {
    rep.evaluate(n)
}

pub fn validate(rep: &LinearRep) -> ValidationReport {
    let shapes_ok = rep.digit_mats.len() as u64 == rep.radix
        && rep.initial.shape() == (1, rep.dim)
        && rep.final_vec.shape() == (rep.dim, 1)
        && rep
            .digit_mats
            .iter()
            .all(|m| m.shape() == (rep.dim, rep.dim));
    let leading_zero_invariant = shapes_ok
        && rep
            .initial
            .mat_mul(&rep.digit_mats[0])
            .is_ok_and(|v| v == rep.initial);
    ValidationReport {
        shapes_ok,
        leading_zero_invariant,
    }
}

/// `Σ_{m < k^j} f(m) = ℓ · (A_0 + … + A_{k−1})^j · c`.
pub fn block_sum(rep: &LinearRep, j: u32) -> Result<Rational> {
    Ok(block_sums(rep, j)?.pop().expect("non-empty"))
}

/// Block sums for `j = 0..=j_max`, computed incrementally.
pub fn block_sums(rep: &LinearRep, j_max: u32) -> Result<Vec<Rational>> {
    if !validate(rep).leading_zero_invariant {
        return Err(Error::LeadingZeroViolation);
    }
    let s = rep.sum_matrix();
    let mut v = rep.initial.clone();
    let mut out = Vec::with_capacity(j_max as usize + 1);
    for j in 0..=j_max {
        if j > 0 {
            v = v.mat_mul(&s)?;
        }
        out.push(v.mat_mul(&rep.final_vec)?.get(0, 0).clone());
    }
    Ok(out)
}

/// `Σ_{m=0}^{x} f(m)`, choosing the digit-recursive engine when the
/// leading-zero invariant holds.
pub fn partial_sum(rep: &LinearRep, x: u64) -> Rational {
    let engine = if validate(rep).leading_zero_invariant {
        SumEngine::DigitRecursive
    } else {
        SumEngine::Naive
    };
    partial_sum_with(rep, x, engine).expect("engine preconditions checked")
}

pub fn partial_sum_with(rep: &LinearRep, x: u64, engine: SumEngine) -> Result<Rational> {
    match engine {
        SumEngine::Naive => Ok(partial_sum_naive(rep, x)),
        SumEngine::DigitRecursive => {
            if !validate(rep).leading_zero_invariant {
                return Err(Error::LeadingZeroViolation);
            }
            Ok(sum_below(rep, x) + rep.evaluate(x))
        }
    }
}

fn partial_sum_naive(rep: &LinearRep, x: u64) -> Rational {
    (0..=x).map(|m| rep.evaluate(m)).sum()
}

/// `Σ_{m < n} f(m)` by prefix decomposition. With the digits of `n` padded to
/// width L, every `m < n` agrees with `n` on some prefix of length `i` and has
/// a smaller digit at position `i`; the free suffix of length `L−i−1`
/// contributes `S^{L−i−1}` where `S` is the sum matrix.
fn sum_below(rep: &LinearRep, n: u64) -> Rational {
    let nd = digits(n, rep.radix).digits;
    let len = nd.len();
    if len == 0 {
        return Rational::zero();
    }
    let s = rep.sum_matrix();
    // suffix[r] = S^r · c
    let mut suffix = Vec::with_capacity(len);
    suffix.push(rep.final_vec.clone());
    for r in 1..len {
        let next = s.mat_mul(&suffix[r - 1]).expect("shapes");
        suffix.push(next);
    }
    let mut prefix = rep.initial.clone();
    let mut total = Rational::zero();
    for (i, &digit) in nd.iter().enumerate() {
        if digit > 0 {
            let partial = sum_matrices(&rep.digit_mats[..digit as usize]).expect("digit > 0");
            let v = prefix.mat_mul(&partial).expect("shapes");
            total += v.mat_mul(&suffix[len - 1 - i]).expect("shapes").get(0, 0);
        }
        prefix = prefix
            .mat_mul(&rep.digit_mats[digit as usize])
            .expect("shapes");
    }
    total
}

/// Representation of the point-wise product `f·g`: every part is the
/// Kronecker product of the corresponding parts.
pub fn kronecker(f: &LinearRep, g: &LinearRep) -> Result<LinearRep> {
    if f.radix != g.radix {
        return Err(Error::RadixMismatch(f.radix, g.radix));
    }
    LinearRep::with_final(
        f.radix,
        f.initial.kron(&g.initial),
        f.digit_mats
            .iter()
            .zip(&g.digit_mats)
            .map(|(a, b)| a.kron(b))
            .collect(),
        f.final_vec.kron(&g.final_vec),
    )
}

/// Re-expresses `rep` over radix `k^n`. The digit matrix for `b` is the
/// product of the original digit matrices along the `n`-digit, zero-padded
/// base-k expansion of `b`. Evaluation agrees with `rep` whenever `ℓ·A_0 = ℓ`.
pub fn power_lift(rep: &LinearRep, n: u32) -> Result<LinearRep> {
    if n == 0 {
        return Err(Error::MalformedRep("power_lift needs n >= 1".into()));
    }
    let new_radix = rep
        .radix
        .checked_pow(n)
        .filter(|r| *r <= 1 << 24)
        .ok_or_else(|| {
            Error::Unsupported(format!("radix {}^{n} too large to materialize", rep.radix))
        })?;
    let mut level = rep.digit_mats.clone();
    for _ in 1..n {
        let mut next = Vec::with_capacity(level.len() * rep.digit_mats.len());
        for high in &level {
            for low in &rep.digit_mats {
                next.push(high.mat_mul(low)?);
            }
        }
        level = next;
    }
    debug_assert_eq!(level.len() as u64, new_radix);
    LinearRep::with_final(new_radix, rep.initial.clone(), level, rep.final_vec.clone())
}

/// Representations used throughout the crate.
pub mod builtin {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().expect("literal fraction")
    }

    fn mat(rows: &[&[&str]]) -> Matrix {
        Matrix::from_strs(rows).expect("literal matrix")
    }

    fn row(entries: &[&str]) -> Matrix {
        Matrix::row_vector(entries.iter().map(|s| q(s)).collect()).expect("literal vector")
    }

    /// The η digit matrix for digit 0: `[[1, −1/2], [0, −1/2]]`.
    pub fn eta_a0() -> Matrix {
        mat(&[&["1", "-1/2"], &["0", "-1/2"]])
    }

    /// The η digit matrix for digit 1: `[[−1/2, 0], [−1/2, 1]]`.
    pub fn eta_a1() -> Matrix {
        mat(&[&["-1/2", "0"], &["-1/2", "1"]])
    }

    /// `L_2(η)` on the kernel basis `(η(m), η(m+1))`, with `ℓ = (1, −1/3)`.
    pub fn eta() -> LinearRep {
        LinearRep::new(2, row(&["1", "-1/3"]), vec![eta_a0(), eta_a1()]).expect("well-formed")
    }

    /// `m ↦ η(m+1)`: the second kernel coordinate of [`eta`].
    pub fn eta_shifted() -> LinearRep {
        eta()
            .with_final_vector(Matrix::basis_column(2, 1))
            .expect("well-formed")
    }

    /// `L_2(t) = ((1), (1), (−1))`.
    pub fn thue_morse() -> LinearRep {
        LinearRep::new(2, row(&["1"]), vec![mat(&[&["1"]]), mat(&[&["-1"]])]).expect("well-formed")
    }

    /// `L_2(t·η)` written out directly.
    pub fn t_eta() -> LinearRep {
        LinearRep::new(
            2,
            row(&["1", "-1/3"]),
            vec![
                mat(&[&["1", "-1/2"], &["0", "-1/2"]]),
                mat(&[&["1/2", "0"], &["1/2", "-1"]]),
            ],
        )
        .expect("well-formed")
    }

    /// The constant sequence 1 over radix `k`.
    pub fn one(k: u64) -> LinearRep {
        LinearRep::new(k, row(&["1"]), vec![mat(&[&["1"]]); k as usize]).expect("well-formed")
    }

    /// `η²` as the Kronecker square of [`eta`].
    pub fn eta_squared() -> LinearRep {
        kronecker(&eta(), &eta()).expect("same radix")
    }

    /// `η(m)·η(m+1)`.
    pub fn eta_eta_shifted() -> LinearRep {
        kronecker(&eta(), &eta_shifted()).expect("same radix")
    }
}
