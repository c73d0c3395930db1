//! Float formatting shared by the CSV and JSON writers.

/// Formats `x` with 17 significant digits, in positional notation when the
/// magnitude allows it. 17 digits round-trip any `f64` exactly.
pub fn sig17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..17).contains(&mag) {
        let decimals = (16 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}
