//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const INITIAL_PANELS: usize = 8;
const MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error_estimate: f64,
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

fn gk15<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> Panel<N> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let fc = f(center);
    for c in 0..N {
        kronrod[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kronrod[c] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let mut error = 0.0f64;
    for c in 0..N {
        kronrod[c] *= half;
        gauss[c] *= half;
        error = error.max((kronrod[c] - gauss[c]).abs());
    }
    Panel {
        a,
        b,
        value: kronrod,
        error,
    }
}

/// Integrates a vector-valued `f` over `[a, b]`, refining the panel with the
/// largest |Kronrod − Gauss| difference until the summed estimate is at most
/// `abs_tol`. All components share the same panels.
pub fn integrate_adaptive_vec<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Quadrature<N>>
where
    F: Fn(f64) -> [f64; N],
{
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::Domain(format!(
            "invalid integration interval [{a}, {b}]"
        )));
    }
    if abs_tol.is_nan() || abs_tol <= 0.0 {
        return Err(Error::Domain(format!(
            "quadrature tolerance must be > 0, got {abs_tol}"
        )));
    }
    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels: Vec<Panel<N>> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == INITIAL_PANELS {
                b
            } else {
                lo + width
            };
            gk15(&f, lo, hi)
        })
        .collect();

    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if !total_error.is_finite() {
            return Err(Error::Convergence("integrand is not finite".into()));
        }
        if total_error <= abs_tol {
            // Sum in interval order so the result does not depend on the
            // refinement history.
            panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
            let mut value = [0.0; N];
            for p in &panels {
                for (acc, v) in value.iter_mut().zip(&p.value) {
                    *acc += v;
                }
            }
            return Ok(Quadrature {
                value,
                error_estimate: total_error,
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Convergence(format!(
                "quadrature error {total_error:e} above {abs_tol:e} after {MAX_PANELS} panels"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.error.partial_cmp(&q.error).unwrap_or(Ordering::Equal))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::Convergence(
                "panel width reached machine precision".into(),
            ));
        }
        panels.push(gk15(&f, p.a, mid));
        panels.push(gk15(&f, mid, p.b));
    }
}

/// Scalar convenience wrapper around [`integrate_adaptive_vec`].
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Quadrature<1>> {
    integrate_adaptive_vec(|x| [f(x)], a, b, abs_tol)
}
