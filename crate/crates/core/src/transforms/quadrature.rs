//! Gauss-Legendre quadrature and the radial wavenumber grids built from it.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on the Legendre three-term recurrence
/// starting from the Tricomi cosine estimate; each root converges in a
/// handful of steps to machine precision. Nodes are returned in ascending
/// order and weights are strictly positive.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi estimate for the i-th root of P_n, counted from +1.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..60 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (_, d) = legendre_pair(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Roots come out in descending order; mirror them into place.
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // Odd rules have an exact root at the origin; the mirror loop wrote
        // +/-x with x ~ 1e-17, pin it to zero.
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Radial quadrature grid for integrals `\int f(k) k dk` over a finite band
/// of transverse wavenumbers.
///
/// The grid is a union of Gauss-Legendre panels, so nodes are strictly
/// increasing, start at `k >= 0`, and carry positive weights. The weights
/// are plain `dk` weights; radial measure factors (`k dk`, `r dr`) are
/// applied by the integration helpers, not baked into the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// Composite Gauss-Legendre grid of `panels` equal panels spanning
    /// `[k_min, k_max]` with `per_panel` nodes each.
    pub fn gauss_legendre_panels(
        k_min: f64,
        k_max: f64,
        panels: usize,
        per_panel: usize,
    ) -> Result<Self> {
        if !(k_min >= 0.0 && k_max > k_min) || !k_max.is_finite() {
            return Err(Error::Domain(format!(
                "radial grid needs 0 <= k_min < k_max, got [{k_min}, {k_max}]"
            )));
        }
        if panels == 0 || per_panel == 0 {
            return Err(Error::Domain(
                "radial grid needs at least one panel and one node".into(),
            ));
        }
        let (xs, ws) = gauss_legendre(per_panel);
        let width = (k_max - k_min) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let lo = k_min + p as f64 * width;
            for (&x, &w) in xs.iter().zip(&ws) {
                nodes.push(lo + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        Ok(RadialGrid { nodes, weights })
    }

    /// Composite Gauss-Legendre grid over the panels delimited by `edges`
    /// (strictly ascending, starting at >= 0), with `per_panel` nodes in
    /// each panel. Aligning panel boundaries with an integrand's breakpoints
    /// restores full Gauss-Legendre convergence for piecewise-analytic
    /// integrands.
    pub fn gauss_legendre_segments(edges: &[f64], per_panel: usize) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::Domain(
                "segment grid needs at least two edges".into(),
            ));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges[0] < 0.0 {
            return Err(Error::Domain(
                "segment edges must be finite and >= 0".into(),
            ));
        }
        if edges.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Domain(
                "segment edges must be strictly ascending".into(),
            ));
        }
        if per_panel == 0 {
            return Err(Error::Domain(
                "radial grid needs at least one node per panel".into(),
            ));
        }
        let (xs, ws) = gauss_legendre(per_panel);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * per_panel);
        let mut weights = Vec::with_capacity((edges.len() - 1) * per_panel);
        for pair in edges.windows(2) {
            let (lo, width) = (pair[0], pair[1] - pair[0]);
            for (&x, &w) in xs.iter().zip(&ws) {
                nodes.push(lo + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        Ok(RadialGrid { nodes, weights })
    }

    /// Grid from explicit nodes and weights (e.g. histogram bin centers
    /// with bin widths). Nodes must be strictly increasing and nonnegative,
    /// weights positive.
    pub fn from_bins(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::Domain(
                "grid needs matching non-empty node and weight lists".into(),
            ));
        }
        if nodes[0] < 0.0 || nodes.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Domain(
                "grid nodes must be strictly increasing and >= 0".into(),
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Domain("grid weights must be positive".into()));
        }
        Ok(RadialGrid { nodes, weights })
    }

    /// Single-node grid representing a delta ring at `k`: one node whose
    /// weight makes `\int f k dk = f(k)` for the stored unit mass.
    pub fn delta_ring(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!(
                "delta ring needs a positive radius, got {k}"
            )));
        }
        Ok(RadialGrid {
            nodes: vec![k],
            weights: vec![1.0 / k],
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest wavenumber the grid represents.
    pub fn k_max(&self) -> f64 {
        *self.nodes.last().expect("grid is never empty")
    }

    /// `\int f(k) dk` over the grid span.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&k, &w)| w * f(k))
            .sum()
    }

    /// `\int f(k) k dk`, the radial-measure integral of sampled values.
    pub fn integrate_radial(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len(), "value/grid length mismatch");
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(values)
            .map(|((&k, &w), &v)| w * k * v)
            .sum()
    }
}
