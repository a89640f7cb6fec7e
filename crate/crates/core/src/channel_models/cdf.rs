use super::pdf::pdf_kappa_mu_shadowed;
use super::ShadowedParams;
use crate::quadrature::{integrate_from_origin, try_integrate, OriginLayout, QuadOptions};
use crate::{Error, Result};

fn layout(p: &ShadowedParams) -> OriginLayout {
    OriginLayout {
        scale: p.gamma_bar(),
        origin_power: (2.0 / p.mu()).max(1.0),
    }
}

fn density(p: &ShadowedParams, gamma: f64) -> Result<f64> {
    // Underflow of the mapped abscissa must not hit the γ = 0 singularity.
    if gamma <= 0.0 {
        return Ok(0.0);
    }
    pdf_kappa_mu_shadowed(p, gamma)
}

/// ∫₀^∞ g(γ) f_γ(γ) dγ by adaptive quadrature of the κ-μ shadowed density.
pub fn expectation<G>(p: &ShadowedParams, mut g: G, opts: &QuadOptions) -> Result<f64>
where
    G: FnMut(f64) -> f64,
{
    integrate_from_origin(
        |x| {
            let f = density(p, x)?;
            Ok(if f == 0.0 { 0.0 } else { g(x) * f })
        },
        f64::INFINITY,
        layout(p),
        opts,
    )
    .map(|r| r.value)
}

/// F_γ(γ) = ∫₀^γ f by quadrature, with absolute error at most `tol`.
pub fn cdf_numeric(p: &ShadowedParams, gamma: f64, tol: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!("CDF argument must be >= 0, got {gamma}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("CDF tolerance must be > 0, got {tol}")));
    }
    let r = integrate_from_origin(|x| density(p, x), gamma, layout(p), &QuadOptions::new(tol, 0.0))?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// Tabulated CDF on a dense grid, for fast CDF lookups and quantiles in
/// goodness-of-fit tests. Between nodes the CDF is linear.
#[derive(Debug, Clone)]
pub struct CdfTable {
    nodes: Vec<f64>,
    cum: Vec<f64>,
}

impl CdfTable {
    pub const DEFAULT_CELLS: usize = 4096;

    pub fn new(p: &ShadowedParams) -> Result<Self> {
        Self::with_cells(p, Self::DEFAULT_CELLS)
    }

    pub fn with_cells(p: &ShadowedParams, cells: usize) -> Result<Self> {
        if cells < 16 {
            return Err(Error::domain("CDF table needs at least 16 cells"));
        }
        let opts = QuadOptions::new(1e-15, 1e-12);
        let f = |x: f64| density(p, x);

        // Extend the support until the remaining tail is negligible.
        let mut upper = p.gamma_bar();
        loop {
            let piece = try_integrate(f, upper, 2.0 * upper, &opts)?.value;
            upper *= 2.0;
            if piece < 1e-14 && upper > 2.0 * p.gamma_bar() {
                break;
            }
            if upper > 1e6 * p.gamma_bar() {
                return Err(Error::non_convergence("CDF table support search", 20));
            }
        }

        let nodes: Vec<f64> = (0..=cells).map(|i| upper * (i as f64 / cells as f64).powi(2)).collect();
        let mut cum = Vec::with_capacity(nodes.len());
        cum.push(0.0);
        let head = integrate_from_origin(
            f,
            nodes[1],
            OriginLayout {
                scale: nodes[1],
                ..layout(p)
            },
            &opts,
        )?;
        cum.push(head.value);
        let mut total = head.value;
        for w in nodes[1..].windows(2) {
            total += try_integrate(f, w[0], w[1], &opts)?.value;
            cum.push(total);
        }
        for c in &mut cum {
            *c /= total;
        }
        Ok(Self { nodes, cum })
    }

    pub fn upper(&self) -> f64 {
        *self.nodes.last().expect("table is never empty")
    }

    pub fn cdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            return 0.0;
        }
        if gamma >= self.upper() {
            return 1.0;
        }
        let i = self.nodes.partition_point(|&x| x <= gamma);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let t = (gamma - x0) / (x1 - x0);
        self.cum[i - 1] + t * (self.cum[i] - self.cum[i - 1])
    }

    pub fn quantile(&self, prob: f64) -> f64 {
        if prob <= 0.0 {
            return 0.0;
        }
        if prob >= 1.0 {
            return self.upper();
        }
        let i = self.cum.partition_point(|&c| c < prob).max(1);
        let (c0, c1) = (self.cum[i - 1], self.cum[i]);
        let t = if c1 > c0 { (prob - c0) / (c1 - c0) } else { 0.0 };
        self.nodes[i - 1] + t * (self.nodes[i] - self.nodes[i - 1])
    }

    /// Interior edges and probabilities of `bins` equal-probability bins.
    pub fn equal_probability_bins(&self, bins: usize) -> (Vec<f64>, Vec<f64>) {
        let edges: Vec<f64> = (1..bins).map(|k| self.quantile(k as f64 / bins as f64)).collect();
        let mut probs = Vec::with_capacity(bins);
        let mut prev = 0.0;
        for &e in &edges {
            let c = self.cdf(e);
            probs.push(c - prev);
            prev = c;
        }
        probs.push(1.0 - prev);
        (edges, probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rayleigh_cdf() {
        let p = ShadowedParams::new(0.0, 1.0, 1.0, 2.0).unwrap();
        for &g in &[0.1, 1.0, 2.0, 9.0] {
            let exact = 1.0 - (-g / 2.0_f64).exp();
            assert!((cdf_numeric(&p, g, 1e-12).unwrap() - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn expectation_normalizes_with_singular_origin() {
        let p = ShadowedParams::new(2.0, 0.3, 0.7, 1.0).unwrap();
        let total = expectation(&p, |_| 1.0, &QuadOptions::new(1e-11, 1e-11)).unwrap();
        assert_relative_eq!(total, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn table_tracks_quadrature() {
        let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0).unwrap();
        let t = CdfTable::new(&p).unwrap();
        for &g in &[0.05, 0.5, 1.0, 2.0, 4.0] {
            assert!((t.cdf(g) - cdf_numeric(&p, g, 1e-12).unwrap()).abs() < 1e-6);
        }
        for &q in &[0.01, 0.3, 0.5, 0.97] {
            assert!((t.cdf(t.quantile(q)) - q).abs() < 1e-12);
        }
        let (edges, probs) = t.equal_probability_bins(30);
        assert_eq!(edges.len(), 29);
        assert_relative_eq!(probs.iter().sum::<f64>(), 1.0, max_relative = 1e-14);
        assert!(probs.iter().all(|&q| (q - 1.0 / 30.0).abs() < 1e-9));
    }
}
