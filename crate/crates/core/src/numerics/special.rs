/// Below this magnitude coth is evaluated from its Laurent series.
const COTH_SERIES_CUTOFF: f64 = 1e-4;

/// Hyperbolic cotangent.
///
/// Stays accurate in the high-temperature regime `x ≪ 1`, where
/// `coth(x) - 1/x ≈ x/3`.
pub fn coth(x: f64) -> f64 {
    let ax = x.abs();
    if ax < COTH_SERIES_CUTOFF {
        // 1/x + x/3 - x^3/45; the next term is O(x^5) ~ 1e-22 relative.
        let x2 = x * x;
        1.0 / x + x * (1.0 / 3.0 - x2 / 45.0)
    } else {
        // coth(x) = 1 + 2 / (e^{2x} - 1); expm1 keeps the small-x digits.
        (1.0 + 2.0 / (2.0 * ax).exp_m1()).copysign(x)
    }
}

/// `coth(a) − coth(b)` for `a, b > 0` without the cancellation of the
/// direct difference when both values are close to 1.
pub fn coth_difference(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    -2.0 * (-2.0 * a).exp() * (-2.0 * (b - a)).exp_m1()
        / ((-2.0 * a).exp_m1() * (-2.0 * b).exp_m1())
}

/// Hyperbolic tangent in the same exponential form as [`coth`].
pub fn tanh(x: f64) -> f64 {
    let ax = x.abs();
    if ax < COTH_SERIES_CUTOFF {
        let x2 = x * x;
        x * (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0)
    } else if ax > 20.0 {
        // 1 - tanh(20) < 1e-17
        1.0f64.copysign(x)
    } else {
        let em = (2.0 * ax).exp_m1();
        (em / (em + 2.0)).copysign(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coth_difference_resolves_saturated_values() {
        // coth(20) − coth(21) = 2e^{-40}(1 − e^{-2}) to leading order.
        let d = coth_difference(20.0, 21.0);
        let leading = 2.0 * (-40.0f64).exp() * (1.0 - (-2.0f64).exp());
        assert!((d / leading - 1.0).abs() < 1e-15);
        for &(a, b) in &[(0.3, 0.7), (1e-5, 2e-5), (2.0, 1.5), (1e-3, 4.0)] {
            let direct = coth(a) - coth(b);
            assert!((coth_difference(a, b) - direct).abs() <= 1e-14 * direct.abs().max(1.0));
        }
        assert_eq!(coth_difference(3.0, 3.0), 0.0);
    }

    #[test]
    fn coth_reference_values() {
        // coth(1) = 1.31303528549933130363616...
        assert!((coth(1.0) - 1.313_035_285_499_331_3).abs() < 1e-15);
        assert!((coth(-1.0) + 1.313_035_285_499_331_3).abs() < 1e-15);
        assert_eq!(coth(50.0), 1.0);
    }

    #[test]
    fn coth_series_matches_exponential_form_at_cutoff() {
        for &x in &[0.9e-4, 1.0e-4, 1.1e-4, 1e-6, 1e-9] {
            let series = 1.0 / x + x / 3.0 - x * x * x / 45.0;
            assert!(((coth(x) - series) / series).abs() < 1e-15, "x = {x}");
        }
        // Continuity across the switch.
        let below = coth(COTH_SERIES_CUTOFF * (1.0 - 1e-12));
        let above = coth(COTH_SERIES_CUTOFF * (1.0 + 1e-12));
        assert!(((below - above) / above).abs() < 1e-10);
    }

    #[test]
    fn coth_minus_inverse_keeps_digits() {
        for &x in &[1e-3, 2e-4] {
            let expected = x / 3.0 - x * x * x / 45.0;
            assert!(
                ((coth(x) - 1.0 / x) / expected - 1.0).abs() < 1e-8,
                "x = {x}"
            );
        }
    }

    #[test]
    fn tanh_matches_std() {
        for i in -200..=200 {
            let x = i as f64 * 0.05;
            assert!((tanh(x) - x.tanh()).abs() < 4e-16, "x = {x}");
        }
        assert!((tanh(1e-5) - 1e-5f64.tanh()).abs() < 1e-20);
        assert_eq!(tanh(500.0), 1.0);
        assert_eq!(tanh(-1e6), -1.0);
    }
}
