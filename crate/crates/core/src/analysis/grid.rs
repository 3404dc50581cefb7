use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Integration domain of a [`QuadratureGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    FullSphere,
    Hemisphere,
}

impl Domain {
    pub fn area(self) -> f64 {
        match self {
            Domain::FullSphere => 4.0 * PI,
            Domain::Hemisphere => TAU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

/// Gauss–Legendre in `cos(theta)` crossed with the trapezoid rule in `phi`.
///
/// The grid is stored as rings of constant colatitude; [`QuadratureGrid::nodes`]
/// flattens it ring by ring.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    domain: Domain,
    thetas: Vec<f64>,
    ring_weights: Vec<f64>,
    n_phi: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        // descending z from the outer loop; store ascending
        x[n - 1 - i] = z;
        x[i] = -z;
        w[n - 1 - i] = wi;
        w[i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

impl QuadratureGrid {
    /// Builds an `n_theta x n_phi` grid on the requested domain.
    pub fn new(n_theta: usize, n_phi: usize, domain: Domain) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(domain_err(n_theta, n_phi));
        }
        let (x, w) = gauss_legendre(n_theta);
        let (cos_nodes, weights): (Vec<f64>, Vec<f64>) = match domain {
            Domain::FullSphere => (x, w),
            Domain::Hemisphere => (
                x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
                w.iter().map(|wi| 0.5 * wi).collect(),
            ),
        };
        // rings ordered by increasing theta
        let mut thetas = Vec::with_capacity(n_theta);
        let mut ring_weights = Vec::with_capacity(n_theta);
        for (c, wi) in cos_nodes.iter().zip(&weights).rev() {
            thetas.push(c.clamp(-1.0, 1.0).acos());
            ring_weights.push(*wi);
        }
        Ok(Self { domain, thetas, ring_weights, n_phi })
    }

    /// Default sizes for band limit `l_max`: `n_theta = l_max + 2`, `n_phi = 2 l_max + 3`.
    pub fn for_band_limit(l_max: u32, domain: Domain) -> Self {
        let l = l_max as usize;
        Self::new(l + 2, 2 * l + 3, domain).expect("non-zero sizes")
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Gauss weights of each ring, integrating over `cos(theta)` only.
    pub fn ring_weights(&self) -> &[f64] {
        &self.ring_weights
    }

    pub fn phi(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n_phi as f64
    }

    pub fn phi_weight(&self) -> f64 {
        TAU / self.n_phi as f64
    }

    pub fn nodes(&self) -> Vec<QuadratureNode> {
        let dphi = self.phi_weight();
        let mut out = Vec::with_capacity(self.len());
        for (theta, w) in self.thetas.iter().zip(&self.ring_weights) {
            for j in 0..self.n_phi {
                out.push(QuadratureNode { theta: *theta, phi: self.phi(j), weight: w * dphi });
            }
        }
        out
    }

    /// Sum of all node weights; equals the domain area.
    pub fn total_weight(&self) -> f64 {
        self.ring_weights.iter().sum::<f64>() * TAU
    }

    /// Integrates `f` over the grid, summing ring by ring in a fixed order.
    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(f64, f64) -> T,
    {
        let dphi = self.phi_weight();
        let mut total = T::default();
        for (theta, w) in self.thetas.iter().zip(&self.ring_weights) {
            let mut ring = T::default();
            for j in 0..self.n_phi {
                ring = ring + f(*theta, self.phi(j));
            }
            total = total + ring * (w * dphi);
        }
        total
    }
}

/// Public constructor matching the operation name used across the toolkit.
pub fn make_grid(n_theta: usize, n_phi: usize, domain: Domain) -> Result<QuadratureGrid> {
    QuadratureGrid::new(n_theta, n_phi, domain)
}

fn domain_err(n_theta: usize, n_phi: usize) -> crate::Error {
    domain(format!("grid sizes must be positive, got n_theta={n_theta}, n_phi={n_phi}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..=30 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn single_node_rule() {
        let g = make_grid(1, 1, Domain::FullSphere).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes.len(), 1);
        assert!((nodes[0].weight - 4.0 * PI).abs() < 1e-14);
        assert!((nodes[0].theta - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn areas() {
        let h = make_grid(16, 33, Domain::Hemisphere).unwrap();
        let sum: f64 = h.nodes().iter().map(|n| n.weight).sum();
        assert!((sum - TAU).abs() < 1e-12);
        assert!(h.nodes().iter().all(|n| n.theta >= 0.0 && n.theta <= PI / 2.0 && n.weight > 0.0));
        let f = make_grid(9, 4, Domain::FullSphere).unwrap();
        assert!((f.total_weight() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_sizes() {
        assert!(make_grid(0, 3, Domain::FullSphere).is_err());
        assert!(make_grid(3, 0, Domain::Hemisphere).is_err());
    }
}
