//! Polynomial root finding: Aberth–Ehrlich iteration on square-free factors
//! with a residual check, plus exact sign-change certification of real roots.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactnum::{Polynomial, Rational};

const MAX_ITERATIONS: usize = 500;

/// All complex roots of a square-free polynomial of positive degree.
///
/// Every returned root `z` satisfies `|p(z)| ≤ tol · Σ|c_i||z|^i`; otherwise
/// the call fails with the residuals.
pub fn roots_squarefree(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    let deg = p
        .degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::Unsupported("root of a constant polynomial".into()))?;
    if deg == 1 {
        let c = p.coefficients();
        return Ok(vec![Complex64::new((-(&c[0]) / &c[1]).to_f64(), 0.0)]);
    }
    let monic = p.monic();
    let coeffs = monic.to_f64_coeffs();
    let eval = |z: Complex64| horner(&coeffs, z);

    // Cauchy bound for the initial circle; the angular offset avoids
    // starting on a symmetry axis of real polynomials.
    let radius = 1.0 + coeffs[..deg].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                std::f64::consts::TAU * k as f64 / deg as f64 + 0.4,
            )
        })
        .collect();

    let mut iterations = MAX_ITERATIONS;
    for it in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let (v, dv) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = v / dv;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-16 {
            iterations = it + 1;
            break;
        }
    }

    // Newton polish
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*zk);
            let step = v / dv;
            if step.is_finite() {
                *zk -= step;
            }
        }
        if zk.im.abs() <= 1e-14 * zk.norm().max(1.0) {
            zk.im = 0.0;
        }
    }

    let residuals: Vec<f64> = z
        .iter()
        .map(|&zk| {
            let scale: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.abs() * zk.norm().powi(i as i32))
                .sum();
            let v = eval(zk).0.norm();
            if v == 0.0 {
                0.0
            } else {
                v / scale
            }
        })
        .collect();
    if residuals.iter().any(|r| r.is_nan() || *r > tol) {
        return Err(Error::RootFinding {
            iterations,
            residuals,
        });
    }
    Ok(z)
}

/// `(p(z), p'(z))` for coefficients stored lowest degree first.
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Exact isolating interval `[lo, hi]` around `approx`, or `None` when `p`
/// does not change sign on `[approx − radius, approx + radius]`.
pub fn certify_real_root(p: &Polynomial, approx: f64, radius: f64) -> Option<(Rational, Rational)> {
    let lo = Rational::from_f64(approx - radius)?;
    let hi = Rational::from_f64(approx + radius)?;
    let (a, b) = (p.eval(&lo).signum(), p.eval(&hi).signum());
    (a * b < 0).then_some((lo, hi))
}
