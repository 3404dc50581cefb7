use nalgebra::{DMatrix, DVector};

use super::coeffs::{HarmonicCoefficients, ParityFilter};
use super::grid::{Domain, QuadratureGrid};
use crate::error::{Error, Result};
use crate::special::{check_theta, reduce_phi, HarmonicIndex, LegendreTable, C64};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn check_basis(filter: ParityFilter, grid: &QuadratureGrid) -> Result<()> {
    if grid.domain() == Domain::Hemisphere && filter == ParityFilter::All {
        return Err(Error::UnsupportedBasis(
            "harmonics of opposite parity are not orthogonal on the hemisphere; \
             project onto the even or the odd family"
                .into(),
        ));
    }
    Ok(())
}

/// Samples `f` at every grid node, ring-major.
fn sample<F: Fn(f64, f64) -> C64>(f: &F, grid: &QuadratureGrid) -> Vec<C64> {
    let mut out = Vec::with_capacity(grid.len());
    for &theta in grid.thetas() {
        for j in 0..grid.n_phi() {
            out.push(f(theta, grid.phi(j)));
        }
    }
    out
}

/// Harmonic coefficients of `f` up to `l_max`, keeping orbitals admitted by `parity`.
///
/// On the full sphere this is the plain inner product `<Y_lm, f>`. On the
/// hemisphere, harmonics of one parity stay orthogonal with norm 1/2, so the
/// coefficients are `2 <Y_lm, f>_hemisphere`; mixing parities is rejected.
pub fn project<F>(f: F, l_max: u32, parity: ParityFilter, grid: &QuadratureGrid) -> Result<HarmonicCoefficients>
where
    F: Fn(f64, f64) -> C64,
{
    check_basis(parity, grid)?;
    let samples = sample(&f, grid);
    Ok(project_samples(&samples, l_max, parity, grid))
}

pub(crate) fn project_samples(
    samples: &[C64],
    l_max: u32,
    parity: ParityFilter,
    grid: &QuadratureGrid,
) -> HarmonicCoefficients {
    let lm = l_max as i32;
    let n_phi = grid.n_phi();
    let dphi = grid.phi_weight();
    let scale = match grid.domain() {
        Domain::FullSphere => 1.0,
        Domain::Hemisphere => 2.0,
    };
    let mut values = vec![zero(); (l_max as usize + 1).pow(2)];
    let mut fourier = vec![zero(); 2 * l_max as usize + 1];

    for (i, (&theta, &w)) in grid.thetas().iter().zip(grid.ring_weights()).enumerate() {
        let ring = &samples[i * n_phi..(i + 1) * n_phi];
        for m in -lm..=lm {
            let mut acc = zero();
            for (j, v) in ring.iter().enumerate() {
                acc += v * C64::from_polar(1.0, -(m as f64) * grid.phi(j));
            }
            fourier[(m + lm) as usize] = acc * dphi;
        }
        let table = LegendreTable::new(l_max, theta);
        for l in 0..=l_max {
            if !parity.admits(l) {
                continue;
            }
            for m in -(l as i32)..=(l as i32) {
                let idx = HarmonicIndex::new(l, m).expect("valid by construction");
                values[idx.linear()] += fourier[(m + lm) as usize] * (w * table.value(l, m) * scale);
            }
        }
    }
    HarmonicCoefficients::from_dense(l_max, values)
}

/// Least-squares projection through the Gram matrix of the chosen family.
///
/// Slower than [`project`] and only meant for validating it; unlike
/// [`project`] it accepts the mixed family on the hemisphere.
pub fn project_gram<F>(f: F, l_max: u32, parity: ParityFilter, grid: &QuadratureGrid) -> Result<HarmonicCoefficients>
where
    F: Fn(f64, f64) -> C64,
{
    let basis: Vec<HarmonicIndex> = (0..(l_max as usize + 1).pow(2))
        .map(HarmonicIndex::from_linear)
        .filter(|idx| parity.admits(idx.l()))
        .collect();
    let nodes = grid.nodes();
    let mut y = DMatrix::<C64>::zeros(nodes.len(), basis.len());
    let mut rhs = DVector::<C64>::zeros(nodes.len());
    let mut row = 0;
    for &theta in grid.thetas() {
        let table = LegendreTable::new(l_max, theta);
        for j in 0..grid.n_phi() {
            let phi = grid.phi(j);
            let sw = nodes[row].weight.sqrt();
            for (c, idx) in basis.iter().enumerate() {
                y[(row, c)] = C64::from_polar(table.value(idx.l(), idx.m()), idx.m() as f64 * phi) * sw;
            }
            rhs[row] = f(theta, phi) * sw;
            row += 1;
        }
    }
    let gram = y.adjoint() * &y;
    let b = y.adjoint() * rhs;
    let sol = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&b),
        None => gram
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::ConstraintRank("singular Gram matrix".into()))?,
    };
    let mut out = HarmonicCoefficients::zeros(l_max);
    for (idx, v) in basis.iter().zip(sol.iter()) {
        out.set(*idx, *v)?;
    }
    Ok(out)
}

fn phases(l_max: u32, phi: f64) -> Vec<C64> {
    let lm = l_max as i32;
    (-lm..=lm).map(|m| C64::from_polar(1.0, m as f64 * phi)).collect()
}

fn sum_with<G: Fn(&LegendreTable, u32, i32) -> f64>(coeffs: &HarmonicCoefficients, theta: f64, phi: f64, g: G) -> C64 {
    let l_max = coeffs.l_max();
    let table = LegendreTable::new(l_max, theta);
    let ph = phases(l_max, reduce_phi(phi));
    let lm = l_max as i32;
    let mut acc = zero();
    for (idx, a) in coeffs.iter() {
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        acc += a * ph[(idx.m() + lm) as usize] * g(&table, idx.l(), idx.m());
    }
    acc
}

/// `sum a_lm Y_lm(theta, phi)`.
pub fn evaluate(coeffs: &HarmonicCoefficients, theta: f64, phi: f64) -> Result<C64> {
    check_theta(theta)?;
    Ok(sum_with(coeffs, theta, phi, |t, l, m| t.value(l, m)))
}

/// `d/dtheta sum a_lm Y_lm(theta, phi)`, from the analytic Legendre derivative.
pub fn evaluate_dtheta(coeffs: &HarmonicCoefficients, theta: f64, phi: f64) -> Result<C64> {
    check_theta(theta)?;
    Ok(sum_with(coeffs, theta, phi, |t, l, m| t.dtheta(l, m)))
}

/// Evaluates the expansion at every grid node, ring-major.
pub fn synthesize(coeffs: &HarmonicCoefficients, grid: &QuadratureGrid) -> Vec<C64> {
    let l_max = coeffs.l_max();
    let lm = l_max as i32;
    let mut out = Vec::with_capacity(grid.len());
    for &theta in grid.thetas() {
        let table = LegendreTable::new(l_max, theta);
        // fold the Legendre factor in once per ring: b_m = sum_l a_lm Pbar_l^m
        let mut by_m = vec![zero(); 2 * l_max as usize + 1];
        for (idx, a) in coeffs.iter() {
            by_m[(idx.m() + lm) as usize] += a * table.value(idx.l(), idx.m());
        }
        for j in 0..grid.n_phi() {
            let phi = grid.phi(j);
            let mut acc = zero();
            for (k, b) in by_m.iter().enumerate() {
                acc += b * C64::from_polar(1.0, (k as i32 - lm) as f64 * phi);
            }
            out.push(acc);
        }
    }
    out
}

/// Relative hemisphere L2 residual `|f - P f| / |f|` of the parity-filtered projection.
pub fn completeness_residual<F>(f: F, l_max: u32, parity: ParityFilter, grid: &QuadratureGrid) -> Result<f64>
where
    F: Fn(f64, f64) -> C64,
{
    if grid.domain() != Domain::Hemisphere {
        return Err(crate::error::domain("completeness residual is measured on a hemisphere grid"));
    }
    check_basis(parity, grid)?;
    let samples = sample(&f, grid);
    let coeffs = project_samples(&samples, l_max, parity, grid);
    let approx = synthesize(&coeffs, grid);
    let n_phi = grid.n_phi();
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, w) in grid.ring_weights().iter().enumerate() {
        let mut rn = 0.0;
        let mut rd = 0.0;
        for j in 0..n_phi {
            let k = i * n_phi + j;
            rn += (samples[k] - approx[k]).norm_sqr();
            rd += samples[k].norm_sqr();
        }
        num += w * rn;
        den += w * rd;
    }
    if den == 0.0 {
        return Err(Error::DegenerateInput("function vanishes on the grid".into()));
    }
    Ok((num / den).sqrt())
}

/// Smooth Gaussian bump in the great-circle distance from `(theta0, phi0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBump {
    pub theta0: f64,
    pub phi0: f64,
    pub width: f64,
}

impl GaussianBump {
    /// The interior bump used by the completeness checks.
    pub const INTERIOR: GaussianBump = GaussianBump { theta0: 0.7, phi0: 2.0, width: 0.15 };

    pub fn value(&self, theta: f64, phi: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (s0, c0) = self.theta0.sin_cos();
        let u = [st * phi.cos(), st * phi.sin(), ct];
        let v = [s0 * self.phi0.cos(), s0 * self.phi0.sin(), c0];
        let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let cross = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let sin_d = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        let d = sin_d.atan2(dot);
        (-0.5 * (d / self.width).powi(2)).exp()
    }

    pub fn as_fn(self) -> impl Fn(f64, f64) -> C64 {
        move |t, p| C64::new(self.value(t, p), 0.0)
    }
}
