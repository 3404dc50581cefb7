use nalgebra::DMatrix;
use serde::Serialize;

use super::frame::BodyFrame;
use crate::config_space::Vec3;
use crate::error::{domain, Result};
use crate::special::{OperatorBlock, C64};

/// Allowed deviation of an axis from unit length.
pub const AXIS_NORM_TOL: f64 = 1e-12;

fn ladder_up(l: u32) -> DMatrix<C64> {
    let li = l as i32;
    let dim = 2 * l as usize + 1;
    let lf = l as f64;
    let mut m = DMatrix::zeros(dim, dim);
    // <mu + 1| L+ |mu>, rows and columns indexed by l - mu
    for c in 1..dim {
        let mu = (li - c as i32) as f64;
        m[(c - 1, c)] = C64::new((lf * (lf + 1.0) - mu * (mu + 1.0)).sqrt(), 0.0);
    }
    m
}

/// `(L_x, L_y, L_z)` in the lab `|l, mu>` basis.
pub fn angular_momentum(l: u32) -> [OperatorBlock; 3] {
    let up = ladder_up(l);
    let down = up.adjoint();
    let lx = (&up + &down) * C64::new(0.5, 0.0);
    let ly = (&up - &down) * C64::new(0.0, -0.5);
    let li = l as i32;
    let dim = 2 * l as usize + 1;
    let lz = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            C64::new((li - r as i32) as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    [lx, ly, lz].map(|m| OperatorBlock::new(l, m).expect("square block of the right size"))
}

/// `axis . L` on the multiplet `l`.
pub fn k_operator(l: u32, axis: Vec3) -> Result<OperatorBlock> {
    let n = axis.norm();
    if n.is_nan() || (n - 1.0).abs() > AXIS_NORM_TOL {
        return Err(domain(format!("axis must be a unit vector, |axis| = {n}")));
    }
    let [lx, ly, lz] = angular_momentum(l);
    let m = lx.matrix() * C64::new(axis.x, 0.0) + ly.matrix() * C64::new(axis.y, 0.0) + lz.matrix() * C64::new(axis.z, 0.0);
    OperatorBlock::new(l, m)
}

/// Body-frame projections `K_j = n_j . L` of one multiplet.
pub fn body_operators(l: u32, frame: &BodyFrame) -> Result<[OperatorBlock; 3]> {
    Ok([k_operator(l, frame.n1)?, k_operator(l, frame.n2)?, k_operator(l, frame.n3)?])
}

/// Deviations from the angular momentum algebra of the body projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Su2Report {
    pub l: u32,
    /// Largest entry of `[K_i, K_j] - i K_k` over cyclic `(i, j, k)`.
    pub commutator_deviation: f64,
    /// The same with the opposite sign, `[K_i, K_j] + i K_k`.
    pub flipped_commutator_deviation: f64,
    /// Largest entry of `K_1^2 + K_2^2 + K_3^2 - l(l+1)`.
    pub casimir_deviation: f64,
    pub hermiticity_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks the commutation relations and the Casimir identity on multiplet `l`.
pub fn check_su2(l: u32, frame: &BodyFrame, tol: f64) -> Result<Su2Report> {
    let k = body_operators(l, frame)?;
    let i = C64::new(0.0, 1.0);
    let mut comm = 0.0f64;
    let mut flipped = 0.0f64;
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let lhs = k[a].commutator(&k[b]).into_matrix();
        comm = comm.max(max_abs(&(&lhs - k[c].matrix() * i)));
        flipped = flipped.max(max_abs(&(&lhs + k[c].matrix() * i)));
    }
    let dim = 2 * l as usize + 1;
    let casimir = k.iter().fold(DMatrix::<C64>::zeros(dim, dim), |acc, kj| acc + kj.mul(kj).into_matrix());
    let lf = l as f64;
    let target = DMatrix::<C64>::identity(dim, dim) * C64::new(lf * (lf + 1.0), 0.0);
    let casimir_deviation = max_abs(&(casimir - target));
    let hermiticity_deviation = k.iter().map(|kj| kj.hermiticity_error()).fold(0.0, f64::max);
    Ok(Su2Report {
        l,
        commutator_deviation: comm,
        flipped_commutator_deviation: flipped,
        casimir_deviation,
        hermiticity_deviation,
        tol,
        passed: comm <= tol && casimir_deviation <= tol && hermiticity_deviation <= tol,
    })
}

/// `exp(i t A)` for a block `A`, by the general matrix exponential.
pub fn exp_i(block: &OperatorBlock, t: f64) -> OperatorBlock {
    let m = block.matrix() * C64::new(0.0, t);
    OperatorBlock::new(block.l(), m.exp()).expect("same shape")
}
