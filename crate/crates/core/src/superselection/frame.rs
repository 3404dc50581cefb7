use nalgebra::Matrix3;

use crate::config_space::Vec3;
use crate::error::{Error, Result};

/// Relative size of `|z x r0|` below which `r0` counts as parallel to the z axis.
pub const PARALLEL_TOL: f64 = 1e-12;

/// Body-fixed triad of a two-particle configuration.
///
/// `n3` points along the relative coordinate, `n1` is horizontal and
/// perpendicular to it, and `n2 = n3 x n1` completes a right-handed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyFrame {
    pub n1: Vec3,
    pub n2: Vec3,
    pub n3: Vec3,
}

fn base_axes(r0: Vec3) -> Result<(Vec3, Vec3)> {
    let len = r0.norm();
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::DegenerateFrame(format!("r0 must be a finite nonzero vector, got {r0:?}")));
    }
    let n3 = r0 / len;
    let zx = Vec3::z().cross(&r0);
    let zx_len = zx.norm();
    if zx_len <= PARALLEL_TOL * len {
        return Err(Error::DegenerateFrame("r0 is parallel to the z axis".into()));
    }
    Ok((zx / zx_len, n3))
}

impl BodyFrame {
    pub fn new(r0: Vec3) -> Result<Self> {
        let (n1, n3) = base_axes(r0)?;
        Ok(Self { n1, n2: n3.cross(&n1), n3 })
    }

    /// The triad with `n2 = -(n3 x n1)`, which is left-handed.
    ///
    /// Its projections obey `[K_i, K_j] = -i eps_ijk K_k`; kept as a negative
    /// control for [`super::check_su2`].
    pub fn left_handed(r0: Vec3) -> Result<Self> {
        let (n1, n3) = base_axes(r0)?;
        Ok(Self { n1, n2: -n3.cross(&n1), n3 })
    }

    pub fn axes(&self) -> [Vec3; 3] {
        [self.n1, self.n2, self.n3]
    }

    /// Largest deviation of the Gram matrix of the triad from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let a = self.axes();
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a[i].dot(&a[j]) - target).abs());
            }
        }
        worst
    }

    pub fn is_right_handed(&self) -> bool {
        self.n1.cross(&self.n2).dot(&self.n3) > 0.0
    }

    /// Matrix with columns `n1, n2, n3`; a proper rotation for a right-handed frame.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.n1, self.n2, self.n3])
    }
}

/// The body frame attached to relative coordinate `r0`.
pub fn body_frame(r0: Vec3) -> Result<BodyFrame> {
    BodyFrame::new(r0)
}
