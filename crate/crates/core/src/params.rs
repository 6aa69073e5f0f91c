//! Error-budget arithmetic shared by codecs and channels.

const EPS: f64 = 1e-9;

/// `floor(delta * n)`, tolerant of binary rounding in `delta`.
pub fn budget_floor(delta: f64, n: usize) -> usize {
    (delta * n as f64 + EPS).floor().max(0.0) as usize
}

/// `ceil(delta * n)`, tolerant of binary rounding in `delta`.
pub fn budget_ceil(delta: f64, n: usize) -> usize {
    (delta * n as f64 - EPS).ceil().max(0.0) as usize
}
