//! Eigenvalues of small exact matrices, the dominance hypotheses behind the
//! growth exponent `log_k ρ(A_0 + … + A_{k−1})`, and joint-spectral-radius
//! bounds from finite products.

mod roots;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

pub use roots::{certify_real_root, roots_squarefree};

use crate::error::{Error, Result};
use crate::exactnum::{char_poly, sum_matrices, Matrix, Polynomial, Rational};
use crate::linrep::{LinearRep, Representation};
use crate::parallel::Parallelism;

/// Relative tolerance for root residuals and for grouping roots of equal
/// modulus.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
/// Pivot threshold for the floating-point rank used when ρ is irrational.
pub const RANK_THRESHOLD: f64 = 1e-9;
/// Cap on the number of matrix products enumerated by [`jsr_bounds`].
pub const JSR_PRODUCT_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct Eigenvalue {
    pub value: Complex64,
    /// Algebraic multiplicity.
    pub multiplicity: usize,
    /// Set when the eigenvalue is a rational number.
    pub exact: Option<Rational>,
    /// The monic square-free factor of the characteristic polynomial that
    /// this eigenvalue is a simple root of.
    pub factor: Polynomial,
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Eigenvalue", 4)?;
        st.serialize_field("re", &self.value.re)?;
        st.serialize_field("im", &self.value.im)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSet {
    /// Distinct eigenvalues, by decreasing modulus, then decreasing real part.
    pub roots: Vec<Eigenvalue>,
    pub tolerance: f64,
    #[serde(serialize_with = "serialize_poly")]
    pub char_poly: Polynomial,
}

fn serialize_poly<S: Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.to_fraction_strings().serialize(s)
}

impl EigenSet {
    pub fn dim(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.roots.first().map_or(0.0, |r| r.value.norm())
    }

    /// Eigenvalues whose modulus equals the spectral radius within tolerance.
    pub fn dominant(&self) -> &[Eigenvalue] {
        let rho = self.spectral_radius();
        let cut = rho - self.tolerance * rho.max(1.0);
        let k = self
            .roots
            .iter()
            .take_while(|r| r.value.norm() >= cut)
            .count();
        &self.roots[..k]
    }

    /// Largest modulus among the non-dominant eigenvalues (0 if none).
    pub fn subdominant_modulus(&self) -> f64 {
        self.roots
            .get(self.dominant().len())
            .map_or(0.0, |r| r.value.norm())
    }
}

/// All eigenvalues of a square matrix with algebraic multiplicities.
pub fn eigenvalues(m: &Matrix) -> Result<EigenSet> {
    eigenvalues_with(m, EIGEN_TOLERANCE)
}

pub fn eigenvalues_with(m: &Matrix, tolerance: f64) -> Result<EigenSet> {
    let cp = char_poly(m)?;
    eigen_from_char_poly(cp, tolerance)
}

pub fn eigen_from_char_poly(cp: Polynomial, tolerance: f64) -> Result<EigenSet> {
    let mut roots = Vec::new();
    let mut factors = Vec::new();
    for (factor, mult) in cp.squarefree_decomposition() {
        // a zero eigenvalue is split off so it is reported exactly
        if factor.degree() > Some(1) && factor.coefficients()[0].is_zero() {
            let x = Polynomial::new(vec![Rational::zero(), Rational::from(1)]);
            factors.push((factor.div_rem(&x)?.0, mult));
            factors.push((x, mult));
        } else {
            factors.push((factor, mult));
        }
    }
    for (factor, mult) in factors {
        if factor.degree() == Some(1) {
            let c = factor.coefficients();
            let r = -(&c[0]) / &c[1];
            roots.push(Eigenvalue {
                value: Complex64::new(r.to_f64(), 0.0),
                multiplicity: mult,
                exact: Some(r),
                factor,
            });
            continue;
        }
        for z in roots_squarefree(&factor, tolerance)? {
            roots.push(Eigenvalue {
                value: z,
                multiplicity: mult,
                exact: None,
                factor: factor.clone(),
            });
        }
    }
    roots.sort_by(|a, b| {
        b.value
            .norm()
            .total_cmp(&a.value.norm())
            .then(b.value.re.total_cmp(&a.value.re))
            .then(b.value.im.total_cmp(&a.value.im))
    });
    Ok(EigenSet {
        roots,
        tolerance,
        char_poly: cp,
    })
}

/// Lower and upper bounds on the joint spectral radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    pub depth: u32,
    /// Number of products examined.
    pub products: u128,
}

/// Bounds from all products of length `ℓ ≤ depth`: the upper bound is the
/// best `(max ‖P‖_1)^{1/ℓ}`, the lower bound the best `(max ρ(P))^{1/ℓ}`.
pub fn jsr_bounds(mats: &[Matrix], depth: u32) -> Result<JsrBounds> {
    jsr_bounds_with(mats, depth, &Parallelism::sequential())
}

pub fn jsr_bounds_with(mats: &[Matrix], depth: u32, par: &Parallelism) -> Result<JsrBounds> {
    if mats.is_empty() || depth == 0 {
        return Err(Error::Unsupported(
            "jsr_bounds needs at least one matrix and depth >= 1".into(),
        ));
    }
    mats[0].require_square("jsr_bounds")?;
    let dim = mats[0].rows();
    if let Some(m) = mats.iter().find(|m| m.shape() != (dim, dim)) {
        return Err(Error::DimensionMismatch {
            op: "jsr_bounds",
            left: (dim, dim),
            right: m.shape(),
        });
    }
    let k = mats.len() as u128;
    let count = (1..=depth).try_fold(0u128, |acc, l| {
        k.checked_pow(l).and_then(|p| acc.checked_add(p))
    });
    let count = count.unwrap_or(u128::MAX);
    if count > JSR_PRODUCT_BUDGET {
        return Err(Error::ProductBudget {
            what: "jsr_bounds",
            count,
            budget: JSR_PRODUCT_BUDGET,
        });
    }

    // One depth-first walk per first factor; each node is a product whose
    // length is its depth.
    let per_root = par.map((0..mats.len()).collect(), |i| {
        let mut stats = vec![(Rational::zero(), 0.0f64); depth as usize];
        walk(mats, &mats[i], 1, depth, &mut stats).map(|_| stats)
    });
    let mut norms = vec![Rational::zero(); depth as usize];
    let mut radii = vec![0.0f64; depth as usize];
    for stats in per_root {
        for (l, (n, r)) in stats?.into_iter().enumerate() {
            if n > norms[l] {
                norms[l] = n;
            }
            radii[l] = radii[l].max(r);
        }
    }
    let root = |x: f64, l: usize| x.powf(1.0 / (l + 1) as f64);
    let upper = norms
        .iter()
        .enumerate()
        .map(|(l, n)| root(n.to_f64(), l))
        .fold(f64::INFINITY, f64::min);
    let lower = radii
        .iter()
        .enumerate()
        .map(|(l, &r)| root(r, l))
        .fold(0.0, f64::max);
    Ok(JsrBounds {
        lower,
        upper,
        depth,
        products: count,
    })
}

fn walk(
    mats: &[Matrix],
    p: &Matrix,
    len: u32,
    depth: u32,
    stats: &mut [(Rational, f64)],
) -> Result<()> {
    let slot = &mut stats[len as usize - 1];
    let n = p.norm1();
    if n > slot.0 {
        slot.0 = n;
    }
    slot.1 = slot.1.max(eigenvalues(p)?.spectral_radius());
    if len < depth {
        for a in mats {
            walk(mats, &p.mat_mul(a)?, len + 1, depth, stats)?;
        }
    }
    Ok(())
}

/// Verdicts on the hypotheses under which the summatory function of a
/// regular sequence grows like `x^{log_k ρ}` times a bounded periodic factor.
#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub rho: f64,
    /// ρ when it is rational.
    pub rho_exact: Option<Rational>,
    /// Exact interval around ρ on which the relevant factor changes sign,
    /// when ρ is an irrational simple root that could be isolated.
    pub rho_interval: Option<(Rational, Rational)>,
    /// The maximal-modulus eigenvalues form a single positive real value.
    pub unique_dominant: bool,
    pub algebraic_mult: usize,
    pub geometric_mult: usize,
    /// `ρ − max |λ|` over the remaining eigenvalues.
    pub margin: f64,
    pub jsr_upper: f64,
    pub jsr_lower: f64,
    pub jsr_depth: u32,
    pub dumas_applicable: bool,
    /// Characteristic polynomial, highest degree first.
    pub char_poly: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct DominanceConfig {
    pub jsr_depth: u32,
    pub tolerance: f64,
    pub rank_threshold: f64,
}

impl Default for DominanceConfig {
    fn default() -> Self {
        DominanceConfig {
            jsr_depth: 1,
            tolerance: EIGEN_TOLERANCE,
            rank_threshold: RANK_THRESHOLD,
        }
    }
}

pub fn dominance(m: &Matrix, digit_mats: &[Matrix]) -> Result<DominanceReport> {
    dominance_with(m, digit_mats, &DominanceConfig::default())
}

pub fn dominance_with(
    m: &Matrix,
    digit_mats: &[Matrix],
    cfg: &DominanceConfig,
) -> Result<DominanceReport> {
    if &sum_matrices(digit_mats)? != m {
        return Err(Error::MalformedMatrix(
            "matrix is not the sum of the digit matrices".into(),
        ));
    }
    let eig = eigenvalues_with(m, cfg.tolerance)?;
    let jsr = jsr_bounds(digit_mats, cfg.jsr_depth)?;
    Ok(dominance_from_parts(m, &eig, jsr, cfg))
}

pub(crate) fn dominance_from_parts(
    m: &Matrix,
    eig: &EigenSet,
    jsr: JsrBounds,
    cfg: &DominanceConfig,
) -> DominanceReport {
    let rho = eig.spectral_radius();
    let dominant = eig.dominant();
    let top = &dominant[0];
    let unique_dominant = dominant.len() == 1 && top.value.im == 0.0 && top.value.re > 0.0;
    let geometric_mult = match &top.exact {
        Some(r) => {
            m.rows()
                - m.sub(&Matrix::identity(m.rows()).scale(r))
                    .expect("square")
                    .rank()
        }
        None => m.rows() - complex_rank(m, top.value, cfg.rank_threshold),
    };
    let rho_interval = match (&top.exact, unique_dominant) {
        (None, true) => certify_real_root(&top.factor, top.value.re, 1e-12 * rho.max(1.0)),
        _ => None,
    };
    let algebraic_mult = top.multiplicity;
    DominanceReport {
        rho,
        rho_exact: top.exact.clone().filter(|_| unique_dominant),
        rho_interval,
        unique_dominant,
        algebraic_mult,
        geometric_mult,
        margin: rho - eig.subdominant_modulus(),
        jsr_upper: jsr.upper,
        jsr_lower: jsr.lower,
        jsr_depth: jsr.depth,
        dumas_applicable: unique_dominant && algebraic_mult == geometric_mult && rho > jsr.upper,
        char_poly: eig.char_poly.to_fraction_strings(),
    }
}

/// Rank of `m − λI` in floating point with partial pivoting; pivots below
/// `threshold` times the largest entry count as zero.
fn complex_rank(m: &Matrix, lambda: Complex64, threshold: f64) -> usize {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = m
        .to_f64()
        .into_iter()
        .map(|r| r.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |s, z| s.max(z.norm()))
        .max(f64::MIN_POSITIVE);
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
        else {
            break;
        };
        if a[p][col].norm() <= threshold * scale {
            continue;
        }
        a.swap(rank, p);
        for r in rank + 1..n {
            let f = a[r][col] / a[rank][col];
            for c in col..n {
                let delta = f * a[rank][c];
                a[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// `log_k ρ` for the sum matrix of `rep`, with the dominance report.
pub fn dumas_exponent(rep: &LinearRep, jsr_depth: u32) -> Result<(f64, DominanceReport)> {
    let cfg = DominanceConfig {
        jsr_depth,
        ..DominanceConfig::default()
    };
    let report = dominance_with(&rep.sum_matrix(), rep.digit_mats(), &cfg)?;
    let exponent = report.rho.log2() / (rep.radix() as f64).log2();
    Ok((exponent, report))
}

/// Exact `ρ(M)` when the spectral radius is a rational eigenvalue.
pub fn rational_spectral_radius(m: &Matrix) -> Result<Option<Rational>> {
    let eig = eigenvalues(m)?;
    Ok(eig
        .dominant()
        .iter()
        .find_map(|r| r.exact.clone().filter(|x| x.signum() >= 0)))
}
