//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! [`integrate`] handles finite intervals by global bisection of the worst
//! segment. [`integrate_from_origin`] covers [0, upper] and [0, ∞) for
//! densities that may carry an integrable power singularity x^{s−1} at the
//! origin: the first segment is mapped through x = scale·t^p, the rest of
//! the half-line is split into geometrically growing pieces.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            max_segments: 4000,
        }
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self::new(1e-12, 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx)? + f(center + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    let value = k * half;
    let error = ((k - g) * half).abs();
    if !value.is_finite() {
        return Err(Error::QuadratureFailure {
            error: f64::INFINITY,
            tolerance: 0.0,
        });
    }
    Ok(Segment { a, b, value, error })
}

/// ∫ₐᵇ f(x) dx with a fallible integrand.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut evaluations = 15;
    heap.push(first);

    while total_err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if heap.len() >= opts.max_segments {
            return Err(Error::QuadratureFailure {
                error: total_err,
                tolerance: opts.abs_tol.max(opts.rel_tol * total.abs()),
            });
        }
        let worst = heap.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Segment can no longer be split in floating point.
            return Err(Error::QuadratureFailure {
                error: total_err,
                tolerance: opts.abs_tol.max(opts.rel_tol * total.abs()),
            });
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the incremental updates.
    let value = heap.iter().map(|s| s.value).sum();
    let abs_error = heap.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
    })
}

/// ∫ₐᵇ f(x) dx.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, opts)
}

/// Layout of an integral that starts at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginLayout {
    /// Width of the first segment; the natural scale of the integrand.
    pub scale: f64,
    /// Exponent p of the map x = scale·t^p on the first segment. Choosing
    /// p ≥ 1/s removes an x^{s−1} singularity at zero.
    pub origin_power: f64,
}

/// ∫₀^upper f(x) dx, with `upper = f64::INFINITY` allowed.
///
/// For the infinite case, pieces [scale·2^k, scale·2^{k+1}] are added until
/// two consecutive pieces contribute less than the absolute tolerance.
pub fn integrate_from_origin<F>(
    mut f: F,
    upper: f64,
    layout: OriginLayout,
    opts: &QuadOptions,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(upper >= 0.0) {
        return Err(Error::domain(format!("upper limit must be >= 0, got {upper}")));
    }
    if !(layout.scale > 0.0 && layout.origin_power >= 1.0) {
        return Err(Error::domain("origin layout needs scale > 0 and origin_power >= 1"));
    }
    if upper == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let piece_opts = QuadOptions {
        abs_tol: opts.abs_tol / 16.0,
        ..*opts
    };
    let first_end = layout.scale.min(upper);
    let p = layout.origin_power;
    let head = try_integrate(
        |t| {
            if t <= 0.0 {
                return Ok(0.0);
            }
            let x = first_end * t.powf(p);
            let jac = first_end * p * t.powf(p - 1.0);
            let v = f(x)?;
            Ok(if v == 0.0 { 0.0 } else { v * jac })
        },
        0.0,
        1.0,
        &piece_opts,
    )?;
    let mut value = head.value;
    let mut abs_error = head.abs_error;
    let mut evaluations = head.evaluations;

    let mut a = first_end;
    let mut quiet = 0;
    while a < upper {
        let b = (2.0 * a).min(upper);
        let piece = try_integrate(&mut f, a, b, &piece_opts)?;
        value += piece.value;
        abs_error += piece.abs_error;
        evaluations += piece.evaluations;
        if upper.is_infinite() {
            if piece.value.abs() <= piece_opts.abs_tol.max(opts.rel_tol * 1e-3 * value.abs()) {
                quiet += 1;
                if quiet >= 2 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if !b.is_finite() || b > 1e300 {
                return Err(Error::QuadratureFailure {
                    error: f64::INFINITY,
                    tolerance: opts.abs_tol,
                });
            }
        }
        a = b;
    }
    let tolerance = opts.abs_tol.max(opts.rel_tol * value.abs());
    if abs_error > tolerance {
        return Err(Error::QuadratureFailure {
            error: abs_error,
            tolerance,
        });
    }
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
    })
}
