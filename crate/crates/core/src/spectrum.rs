//! The angular Laplacian on the hemisphere with the seam identification.
//!
//! An eigenfunction of `L^2` on the identified hemisphere has to satisfy the
//! seam conditions (equal values, opposite `theta` derivatives) and the
//! eigenvalue equation at once. Since `L^2` acts as `l(l+1)` on each
//! multiplet, the admissible eigenfunctions for eigenvalue `l(l+1)` are the
//! null vectors of the seam constraints restricted to that multiplet.
//!
//! The null space of the full constraint matrix is larger than their span:
//! with seam-only sampling, the functionals see multiplets of equal `m` only
//! through the combinations `sum_l a_lm P_l^m(0)` and `sum_l a_lm P_l^m'(0)`,
//! so blends of different odd `l` can cancel on the seam without any single
//! one doing so. Such blends are not eigenfunctions. [`raw_constraint_rank`]
//! and [`raw_null_space_spectrum`] expose that difference.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::{HarmonicIndex, LegendreTable, C64};

/// Singular values at or below this (times the largest one, if that exceeds 1) count as zero.
pub const SINGULAR_TOL: f64 = 1e-8;
/// Default clustering tolerance, relative to `max(1, |lambda|)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
/// Relative distance to `l(l+1)` within which an eigenvalue is attributed to `l`.
pub const MATCH_TOL: f64 = 1e-6;

/// Smallest admissible sample count.
pub fn min_samples(l_max: u32) -> usize {
    2 * l_max as usize + 1
}

fn check_samples(l_max: u32, n_samples: usize) -> Result<()> {
    if n_samples < min_samples(l_max) {
        return Err(domain(format!(
            "n_samples must be at least 2 l_max + 1 = {}, got {n_samples}",
            min_samples(l_max)
        )));
    }
    Ok(())
}

fn n_basis(l_max: u32) -> usize {
    (l_max as usize + 1).pow(2)
}

/// Seam functionals on the basis `{Y_lm : l <= l_max}`.
///
/// Row `2k` is `Psi(pi/2, phi_k) - Psi(pi/2, phi_k + pi)` and row `2k + 1` is
/// `dPsi/dtheta(pi/2, phi_k) + dPsi/dtheta(pi/2, phi_k + pi)`, with
/// `phi_k = pi k / n_samples`. Column `l^2 + l + m` belongs to `Y_lm`.
pub fn seam_constraint_matrix(l_max: u32, n_samples: usize) -> Result<DMatrix<C64>> {
    check_samples(l_max, n_samples)?;
    let table = LegendreTable::new(l_max, FRAC_PI_2);
    let mut c = DMatrix::zeros(2 * n_samples, n_basis(l_max));
    for k in 0..n_samples {
        let phi = PI * k as f64 / n_samples as f64;
        for col in 0..n_basis(l_max) {
            let idx = HarmonicIndex::from_linear(col);
            let m = idx.m() as f64;
            let here = C64::from_polar(1.0, m * phi);
            let there = C64::from_polar(1.0, m * (phi + PI));
            c[(2 * k, col)] = (here - there) * table.value(idx.l(), idx.m());
            c[(2 * k + 1, col)] = (here + there) * table.dtheta(idx.l(), idx.m());
        }
    }
    Ok(c)
}

fn threshold(singular: &DVector<f64>) -> f64 {
    SINGULAR_TOL * singular.iter().copied().fold(1.0, f64::max)
}

/// Numerical rank of a matrix with the module's singular value threshold.
fn rank(m: &DMatrix<C64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let t = threshold(&sv);
    sv.iter().filter(|&&s| s > t).count()
}

/// Orthonormal basis of the null space of `m`, as columns.
fn null_space(m: &DMatrix<C64>) -> DMatrix<C64> {
    let cols = m.ncols();
    // pad with zero rows so the decomposition returns a full right factor
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let t = threshold(&svd.singular_values);
    let keep: Vec<usize> = (0..cols).filter(|&i| svd.singular_values[i] <= t).collect();
    DMatrix::from_fn(cols, keep.len(), |r, c| v_t[(keep[c], r)].conj())
}

/// Rank of the full constraint matrix.
pub fn raw_constraint_rank(l_max: u32, n_samples: usize) -> Result<usize> {
    Ok(rank(&seam_constraint_matrix(l_max, n_samples)?))
}

fn block_columns(c: &DMatrix<C64>, l: u32) -> DMatrix<C64> {
    let start = (l * l) as usize;
    c.columns(start, 2 * l as usize + 1).into_owned()
}

/// Rank of the constraints restricted to each multiplet, indexed by `l`.
pub fn block_ranks(l_max: u32, n_samples: usize) -> Result<Vec<usize>> {
    let c = seam_constraint_matrix(l_max, n_samples)?;
    Ok((0..=l_max).map(|l| rank(&block_columns(&c, l))).collect())
}

/// Orthonormal basis, in the `(l, m)` coefficient space, of all eigenfunctions
/// of `L^2` that satisfy the seam conditions.
pub fn identified_null_space(l_max: u32, n_samples: usize) -> Result<DMatrix<C64>> {
    let c = seam_constraint_matrix(l_max, n_samples)?;
    let mut cols: Vec<DVector<C64>> = Vec::new();
    for l in 0..=l_max {
        let ns = null_space(&block_columns(&c, l));
        for j in 0..ns.ncols() {
            let mut v = DVector::zeros(n_basis(l_max));
            v.rows_mut((l * l) as usize, ns.nrows()).copy_from(&ns.column(j));
            cols.push(v);
        }
    }
    if cols.is_empty() {
        return Err(Error::ConstraintRank("no function satisfies the seam conditions".into()));
    }
    Ok(DMatrix::from_columns(&cols))
}

fn laplacian_diagonal(l_max: u32) -> DVector<C64> {
    DVector::from_fn(n_basis(l_max), |k, _| {
        let l = HarmonicIndex::from_linear(k).l() as f64;
        C64::new(l * (l + 1.0), 0.0)
    })
}

/// Eigenvalues of `Q^H L^2 Q` for an orthonormal column basis `Q`, ascending.
fn projected_eigenvalues(q: &DMatrix<C64>, l_max: u32) -> Vec<f64> {
    let diag = laplacian_diagonal(l_max);
    let lq = DMatrix::from_fn(q.nrows(), q.ncols(), |r, c| diag[r] * q[(r, c)]);
    let h = q.adjoint() * lq;
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Rayleigh–Ritz values of `L^2` on the null space of the full constraint
/// matrix; differs from the identified spectrum whenever odd multiplets blend.
pub fn raw_null_space_spectrum(l_max: u32, n_samples: usize) -> Result<Vec<f64>> {
    let q = null_space(&seam_constraint_matrix(l_max, n_samples)?);
    Ok(projected_eigenvalues(&q, l_max))
}

/// `l` with `l(l+1)` within [`MATCH_TOL`] (relative) of `lambda`.
pub fn match_orbital(lambda: f64) -> Option<u32> {
    if lambda.is_nan() || lambda <= -0.5 {
        return None;
    }
    let l = ((-1.0 + (1.0 + 4.0 * lambda.max(0.0)).sqrt()) / 2.0).round();
    let exact = l * (l + 1.0);
    ((lambda - exact).abs() <= MATCH_TOL * exact.max(1.0)).then_some(l as u32)
}

/// Clustered spectrum of the identified Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedEigenResult {
    /// Mean of each cluster, ascending.
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub matched_l: Vec<Option<u32>>,
    pub basis_l_max: u32,
    pub n_constraint_samples: usize,
    pub null_dimension: usize,
    /// Rank of the full constraint matrix, for comparison with the summed block ranks.
    pub raw_rank: usize,
    pub block_rank_sum: usize,
}

impl ConstrainedEigenResult {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["eigenvalue", "multiplicity", "matched_l"]).expect("in-memory write");
        for ((e, m), l) in self.eigenvalues.iter().zip(&self.multiplicities).zip(&self.matched_l) {
            let l = l.map(|l| l.to_string()).unwrap_or_default();
            w.write_record([format!("{e:?}"), m.to_string(), l]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Whether the spectrum is exactly the even orbitals `0, 2, ..., l_max` with multiplicities `2l + 1`.
    pub fn is_even_spectrum(&self) -> bool {
        let expected: Vec<(Option<u32>, usize)> =
            (0..=self.basis_l_max).step_by(2).map(|l| (Some(l), 2 * l as usize + 1)).collect();
        let got: Vec<(Option<u32>, usize)> =
            self.matched_l.iter().copied().zip(self.multiplicities.iter().copied()).collect();
        got == expected
    }
}

fn cluster(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((sum, n, last)) if (v - *last).abs() <= tol * v.abs().max(1.0) => {
                *sum += v;
                *n += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(s, n, _)| (s / n as f64, n)).collect()
}

/// Spectrum of `L^2` on the hemisphere with the seam identification.
pub fn identified_laplacian_eigs(l_max: u32, n_samples: usize, cluster_tol: f64) -> Result<ConstrainedEigenResult> {
    if cluster_tol.is_nan() || cluster_tol <= 0.0 {
        return Err(domain(format!("cluster tolerance must be positive, got {cluster_tol}")));
    }
    let q = identified_null_space(l_max, n_samples)?;
    let ev = projected_eigenvalues(&q, l_max);
    let groups = cluster(&ev, cluster_tol);
    Ok(ConstrainedEigenResult {
        eigenvalues: groups.iter().map(|g| g.0).collect(),
        multiplicities: groups.iter().map(|g| g.1).collect(),
        matched_l: groups.iter().map(|g| match_orbital(g.0)).collect(),
        basis_l_max: l_max,
        n_constraint_samples: n_samples,
        null_dimension: q.ncols(),
        raw_rank: raw_constraint_rank(l_max, n_samples)?,
        block_rank_sum: block_ranks(l_max, n_samples)?.iter().sum(),
    })
}
