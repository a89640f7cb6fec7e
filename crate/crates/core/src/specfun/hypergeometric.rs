//! Generalized hypergeometric series ₚFq(a; b; x) of one real argument.
//!
//! Every evaluation runs the series through [`SeriesControl`]. Partial sums
//! are carried with a separate logarithmic scale so that series whose value
//! exceeds the `f64` range (₁F₁ deep in a PDF tail) remain usable through
//! [`ScaledValue::ln_abs`].

use serde::{Deserialize, Serialize};

use super::gamma::{digamma_unchecked, ln_gamma_unchecked};
use crate::{Error, Result};

/// Tolerance and term budget for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesControl {
    pub const DEFAULT_REL_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_TERMS: usize = 100_000;

    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::domain(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be at least 1"));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: Self::DEFAULT_REL_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
        }
    }
}

/// Parameters of ₚFq(a₁..aₚ; b₁..b_q; x).
#[derive(Debug, Clone, PartialEq)]
pub struct PfqParams {
    numerators: Vec<f64>,
    denominators: Vec<f64>,
    argument: f64,
}

impl PfqParams {
    /// Rejects denominators that are zero or negative integers.
    pub fn new(numerators: &[f64], denominators: &[f64], argument: f64) -> Result<Self> {
        if let Some(b) = denominators.iter().find(|&&b| is_nonpositive_integer(b)) {
            return Err(Error::domain(format!(
                "hypergeometric denominator {b} is zero or a negative integer"
            )));
        }
        if numerators.iter().chain(denominators).any(|v| !v.is_finite()) || !argument.is_finite() {
            return Err(Error::domain("hypergeometric parameters must be finite"));
        }
        Ok(Self {
            numerators: numerators.to_vec(),
            denominators: denominators.to_vec(),
            argument,
        })
    }

    pub fn numerators(&self) -> &[f64] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    /// Index of the first term that vanishes, if a numerator is a
    /// non-positive integer.
    fn terminating_index(&self) -> Option<usize> {
        self.numerators
            .iter()
            .filter(|&&a| is_nonpositive_integer(a))
            .map(|&a| (-a) as usize + 1)
            .min()
    }

    fn ratio(&self, r: usize) -> f64 {
        let rf = r as f64;
        let num: f64 = self.numerators.iter().map(|a| a + rf).product();
        let den: f64 = self.denominators.iter().map(|b| b + rf).product();
        num / den * self.argument / (rf + 1.0)
    }
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}

/// A real number stored as `mantissa · e^{ln_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl ScaledValue {
    pub fn value(&self) -> f64 {
        self.mantissa * self.ln_scale.exp()
    }

    /// ln|value|, finite even when `value()` would overflow.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa < 0.0
    }
}

/// Pochhammer symbol (a)_r = a(a+1)…(a+r−1), with (a)₀ = 1.
///
/// Long products with a positive base go through log-gamma differences.
pub fn pochhammer(a: f64, r: usize) -> f64 {
    if r == 0 {
        return 1.0;
    }
    if a > 0.0 && r > 64 {
        return (ln_gamma_unchecked(a + r as f64) - ln_gamma_unchecked(a)).exp();
    }
    (0..r).map(|k| a + k as f64).product()
}

const RESCALE_ABOVE: f64 = 1e200;

/// ₚFq(a; b; x) as a plain `f64`.
pub fn hyp_pfq(params: &PfqParams, ctrl: &SeriesControl) -> Result<f64> {
    hyp_pfq_scaled(params, ctrl).map(|s| s.value())
}

/// ₚFq(a; b; x) with overflow-safe scaling.
///
/// Terms are accumulated until two consecutive terms are both below
/// `rel_tol·|sum|` and, while the term ratio is below one, the geometric
/// tail bound is below the same threshold. A non-positive integer numerator
/// ends the series exactly.
pub fn hyp_pfq_scaled(params: &PfqParams, ctrl: &SeriesControl) -> Result<ScaledValue> {
    let p = params.numerators.len();
    let q = params.denominators.len();
    let x = params.argument;
    let terminating = params.terminating_index();

    if x == 0.0 {
        return Ok(ScaledValue { mantissa: 1.0, ln_scale: 0.0 });
    }
    if terminating.is_none() && p > q + 1 {
        return Err(Error::domain(format!(
            "{p}F{q} diverges for nonzero argument unless it terminates"
        )));
    }
    if terminating.is_none() && p == q + 1 && x.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "{p}F{q} series requires |x| < 1, got x = {x}"
        )));
    }

    let tol = ctrl.rel_tol;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut ln_scale = 0.0_f64;
    let mut prev_small = false;

    for r in 0..ctrl.max_terms {
        if terminating == Some(r + 1) {
            return Ok(ScaledValue { mantissa: sum, ln_scale });
        }
        let ratio = params.ratio(r);
        term *= ratio;
        sum += term;

        if sum.abs() > RESCALE_ABOVE || term.abs() > RESCALE_ABOVE {
            let s = sum.abs().max(term.abs());
            sum /= s;
            term /= s;
            ln_scale += s.ln();
        }

        if term == 0.0 {
            return Ok(ScaledValue { mantissa: sum, ln_scale });
        }
        let threshold = tol * sum.abs();
        let small = term.abs() < threshold;
        if small && prev_small {
            let next_ratio = params.ratio(r + 1).abs();
            if next_ratio < 1.0 && term.abs() * next_ratio / (1.0 - next_ratio) < threshold {
                return Ok(ScaledValue { mantissa: sum, ln_scale });
            }
        }
        prev_small = small;
    }
    Err(Error::non_convergence(
        format!("{p}F{q} series at x = {x}"),
        ctrl.max_terms,
    ))
}

/// The first `count` partial sums of the series (no scaling, no stopping
/// rule). Intended for inspecting convergence behaviour.
pub fn partial_sums(params: &PfqParams, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut term = 1.0;
    let mut sum = 1.0;
    for r in 0..count {
        out.push(sum);
        term *= params.ratio(r);
        sum += term;
    }
    out
}

/// ln ₁F₁(a; b; z), for the positive-parameter, nonnegative-argument case
/// that appears in fading densities (a > 0, b > 0, z ≥ 0).
///
/// Large arguments use the exponential asymptotic expansion
/// Γ(b)/Γ(a)·e^z·z^{a−b}·Σ (b−a)_s(1−a)_s/(s!·z^s) when it converges to the
/// requested tolerance; otherwise the scaled power series is used.
pub fn ln_hyp1f1_positive(a: f64, b: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && z >= 0.0) {
        return Err(Error::domain(format!(
            "ln_hyp1f1_positive needs a > 0, b > 0, z >= 0; got a={a}, b={b}, z={z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z > 60.0 {
        if let Some(v) = ln_hyp1f1_asymptotic(a, b, z, ctrl.rel_tol) {
            return Ok(v);
        }
    }
    let params = PfqParams::new(&[a], &[b], z)?;
    hyp_pfq_scaled(&params, ctrl).map(|s| s.ln_abs())
}

fn ln_hyp1f1_asymptotic(a: f64, b: f64, z: f64, tol: f64) -> Option<f64> {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut last = f64::INFINITY;
    for s in 0..200 {
        let sf = s as f64;
        term *= (b - a + sf) * (1.0 - a + sf) / ((sf + 1.0) * z);
        if term == 0.0 {
            break;
        }
        if term.abs() > last {
            return None;
        }
        last = term.abs();
        sum += term;
        if term.abs() < tol * sum.abs() * 1e-2 {
            return if sum > 0.0 {
                Some(ln_gamma_unchecked(b) - ln_gamma_unchecked(a) + z + (a - b) * z.ln() + sum.ln())
            } else {
                None
            };
        }
    }
    if term == 0.0 && sum > 0.0 {
        return Some(ln_gamma_unchecked(b) - ln_gamma_unchecked(a) + z + (a - b) * z.ln() + sum.ln());
    }
    None
}

/// ₂F₂(1, 1; 2, b; −z) for b > 1 and z ≥ 0, free of cancellation.
///
/// Uses ₂F₂(1,1;2,b;−z) = (b−1)/z · Σ_{k≥0} Pr[N > k]/(b−1+k) with
/// N ~ Poisson(z), which has only positive terms. This is the form needed by
/// the κ-μ capacity loss where the argument −μκ can be large and negative.
pub fn hyp2f2_unit_negative(b: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    if !(b > 1.0) || !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain(format!(
            "hyp2f2_unit_negative needs b > 1 and z >= 0, got b={b}, z={z}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z <= 2.0 {
        let params = PfqParams::new(&[1.0, 1.0], &[2.0, b], -z)?;
        return hyp_pfq(&params, ctrl);
    }
    // Poisson pmf by recurrence from its mode to avoid underflow at e^{-z}.
    let mode = z.floor() as usize;
    let ln_pmf_mode = mode as f64 * z.ln() - z - ln_gamma_unchecked(mode as f64 + 1.0);
    // Lower tail Pr[N <= k] accumulated upward; pmf(k) for k < mode built downward first.
    let mut pmf_low = Vec::with_capacity(mode + 1);
    let mut p = ln_pmf_mode.exp();
    pmf_low.push(p);
    for k in (1..=mode).rev() {
        p *= k as f64 / z;
        pmf_low.push(p);
        if p < 1e-300 {
            break;
        }
    }
    pmf_low.reverse();
    let first_k = mode + 1 - pmf_low.len();

    let bm1 = b - 1.0;
    let mut cdf = 0.0;
    // Terms with k < first_k have Pr[N > k] = 1 to double precision, and
    // Σ_{k<first_k} 1/(b−1+k) = ψ(b−1+first_k) − ψ(b−1).
    let mut sum = if first_k == 0 {
        0.0
    } else {
        digamma_unchecked(bm1 + first_k as f64) - digamma_unchecked(bm1)
    };
    let mut k = first_k;
    let mut pmf = pmf_low[0];
    let budget = ctrl.max_terms.max(mode + 1000);
    while k < budget {
        if k - first_k < pmf_low.len() {
            pmf = pmf_low[k - first_k];
        } else {
            pmf *= z / k as f64;
        }
        cdf += pmf;
        let tail = (1.0 - cdf).max(0.0);
        let contrib = tail / (bm1 + k as f64);
        sum += contrib;
        if k > mode && contrib < ctrl.rel_tol * 1e-2 * sum {
            return Ok(bm1 / z * sum);
        }
        k += 1;
    }
    Err(Error::non_convergence("2F2(1,1;2,b;-z) Poisson form", budget))
}

/// Kummer–Bessel right-hand side:
/// 2^{2a−1} Γ(a+½) z^{½−a} e^{z/2} I_{a−½}(z/2), which equals ₁F₁(a; 2a; z).
pub fn kummer_bessel_rhs(a: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    let ln_i = super::bessel::ln_bessel_i(a - 0.5, z / 2.0, ctrl)?;
    let ln = (2.0 * a - 1.0) * std::f64::consts::LN_2 + ln_gamma_unchecked(a + 0.5)
        + (0.5 - a) * z.ln()
        + z / 2.0
        + ln_i;
    Ok(ln.exp())
}
