/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central-difference partials of a function of two variables, with a step
/// of `rel_step` times each coordinate's magnitude (or `rel_step` itself
/// for a coordinate at zero).
pub fn partial_derivatives_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    point: (f64, f64),
    rel_step: f64,
) -> (f64, f64) {
    let (x, y) = point;
    let step = |v: f64| rel_step * if v == 0.0 { 1.0 } else { v.abs() };
    let (hx, hy) = (step(x), step(y));
    let dx = central_difference(|s| f(s, y), x, hx);
    let dy = central_difference(|s| f(x, s), y, hy);
    (dx, dy)
}
