//! WebAssembly bindings for the demo page in `www/`. The exported functions
//! are thin wrappers over the plain functions in [`demo`], which carry the
//! logic and are tested natively.

use wasm_bindgen::prelude::*;

pub mod demo {
    use regseq::bounds::{lower_bound_row_with, rn_abs_norm_with, EnumConfig};
    use regseq::sequences::{eta, twisted_sum_series, SequenceId};
    use regseq::{Error, Parallelism, Result};
    use serde_json::json;

    /// Largest series the page asks for; keeps the tab responsive.
    pub const SERIES_MAX: u64 = 1 << 18;
    /// Largest table level computed in the browser.
    pub const TABLE_MAX: u32 = 20;

    pub fn eta_value(m: u64) -> String {
        eta(m).to_string()
    }

    /// `x^{-1/2} Σ_{m≤x} f(m)η(m)` (or the raw sum) for `x = 0..=x_max`.
    pub fn twist_series(seq: &str, x_max: u64, normalize: bool) -> Result<Vec<f64>> {
        if x_max > SERIES_MAX {
            return Err(Error::Unsupported(format!(
                "x_max is limited to {SERIES_MAX} in the browser"
            )));
        }
        let id: SequenceId = seq.parse()?;
        let series = twisted_sum_series(id, x_max)?;
        Ok((0..=x_max)
            .map(|x| {
                if normalize {
                    series.sqrt_normalized(x)
                } else {
                    series.value_f64(x)
                }
            })
            .collect())
    }

    /// One row of the lower (`"lower"`) or upper (`"upper"`) table as JSON.
    pub fn table_row(kind: &str, n: u32) -> Result<String> {
        if n > TABLE_MAX {
            return Err(Error::LevelOutOfRange {
                what: "browser table",
                n,
                min: 1,
                max: TABLE_MAX,
                hint: "",
            });
        }
        let cfg = EnumConfig {
            parallelism: Parallelism::sequential(),
            ..EnumConfig::default()
        };
        let v = match kind {
            "lower" => {
                let r = lower_bound_row_with(n, &cfg)?;
                json!({
                    "n": n,
                    "statistic_exact": r.statistic_exact(),
                    "rho": r.rho,
                    "log_value": r.log_value,
                    "dominant_ok": r.checks.dominant_ok,
                    "rho_gt_2": r.checks.rho_gt_2,
                    "wall_ms": r.wall_ms() as u64,
                })
            }
            "upper" => {
                let r = rn_abs_norm_with(n, &cfg)?;
                json!({
                    "n": n,
                    "norm": r.norm.to_fraction_string(),
                    "norm_float": r.norm_float,
                    "log_value": r.log_value,
                    "wall_ms": r.wall_ms() as u64,
                })
            }
            other => return Err(Error::Unsupported(format!("unknown table {other:?}"))),
        };
        Ok(v.to_string())
    }
}

fn js_err(e: regseq::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn eta_value(m: u64) -> String {
    demo::eta_value(m)
}

#[wasm_bindgen]
pub fn twist_series(seq: &str, x_max: u32, normalize: bool) -> Result<Vec<f64>, JsError> {
    demo::twist_series(seq, x_max as u64, normalize).map_err(js_err)
}

#[wasm_bindgen]
pub fn table_row(kind: &str, n: u32) -> Result<String, JsError> {
    demo::table_row(kind, n).map_err(js_err)
}
