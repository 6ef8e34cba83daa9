//! Rounding helpers that tolerate floating-point representation error.

const SNAP: f64 = 1e-9;
const LOG_SNAP: f64 = 1e-12;

/// ⌈x⌉ for a non-negative cost, treating values within 1e-9 of an integer as
/// that integer.
pub fn ceil_snap(x: f64) -> u64 {
    let r = x.round();
    let v = if (x - r).abs() < SNAP { r } else { x.ceil() };
    v.max(0.0) as u64
}

/// ⌈log₂ x⌉ with a 1e-12 snap to the nearest integer.
pub fn ceil_log2_snap(x: f64) -> i32 {
    let l = x.log2();
    let r = l.round();
    if (l - r).abs() < LOG_SNAP {
        r as i32
    } else {
        l.ceil() as i32
    }
}
