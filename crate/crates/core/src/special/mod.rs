//! Special functions with one fixed set of phase conventions.
//!
//! * Legendre functions carry the Condon–Shortley phase.
//! * Rotations use z-y-z Euler angles, `D(a, b, c) = e^{-i a Jz} e^{-i b Jy} e^{-i c Jz}`.
//! * `d^1_{1,0}(pi/2) = -1/sqrt(2)`.
//! * Matrix blocks are indexed with `mu = +l` in row/column 0 down to `mu = -l`.

mod block;
mod legendre;
mod wigner;

use std::f64::consts::{PI, TAU};

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use block::OperatorBlock;
pub use legendre::{assoc_legendre, LegendreTable};
pub use wigner::{euler_zyz, small_d_block, wigner_big_d, wigner_small_d};

pub(crate) use legendre::normalized_legendre;

pub type C64 = Complex<f64>;

/// Default orbital cap for the verification suites.
pub const DEFAULT_L_MAX: u32 = 64;

/// Condon–Shortley phase `(-1)^m` is included inside `P_l^m`.
pub const PHASE_CONVENTION: &str = "condon-shortley";
/// Euler angle order for rotation blocks.
pub const EULER_ORDER: &str = "z-y-z";
/// Sign convention of the small d-matrix.
pub const SMALL_D_CONVENTION: &str = "d^1_{1,0}(pi/2) = -1/sqrt(2)";

/// Orbital and magnetic quantum numbers with `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    l: u32,
    m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(domain(format!("harmonic index requires |m| <= l, got l={l}, m={m}")));
        }
        Ok(Self { l, m })
    }

    pub fn l(self) -> u32 {
        self.l
    }

    pub fn m(self) -> i32 {
        self.m
    }

    /// Position in the dense `(l, m)` ordering `l^2 + l + m`.
    pub fn linear(self) -> usize {
        let l = self.l as isize;
        (l * l + l + self.m as isize) as usize
    }

    /// Inverse of [`HarmonicIndex::linear`].
    pub fn from_linear(k: usize) -> Self {
        let l = (k as f64).sqrt() as usize;
        // guard against rounding in the square root
        let l = if (l + 1) * (l + 1) <= k { l + 1 } else if l * l > k { l - 1 } else { l };
        let m = k as isize - (l * l + l) as isize;
        Self { l: l as u32, m: m as i32 }
    }
}

/// Reduces an azimuth into `[0, 2 pi)`.
pub fn reduce_phi(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2 pi for tiny negative inputs, and
    // keeps the sign of a negative zero
    if r >= TAU || r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    Ok(())
}

/// Orthonormal complex spherical harmonic `Y_lm(theta, phi)`.
pub fn sph_harm(idx: HarmonicIndex, theta: f64, phi: f64) -> Result<C64> {
    check_theta(theta)?;
    let phi = reduce_phi(phi);
    let m = idx.m();
    let mut p = normalized_legendre(idx.l(), m.unsigned_abs(), theta);
    if m < 0 && m % 2 != 0 {
        p = -p;
    }
    Ok(C64::from_polar(p, m as f64 * phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(l: u32, m: i32, theta: f64, phi: f64) -> C64 {
        sph_harm(HarmonicIndex::new(l, m).unwrap(), theta, phi).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let y00 = y(0, 0, 0.4, 2.2);
        assert!((y00.re - 0.282_094_791_773_878_14).abs() < 1e-16);
        assert_eq!(y00.im, 0.0);
        // -sqrt(3/(8 pi)) at 40 digits
        let y11 = y(1, 1, PI / 2.0, 0.0);
        assert!((y11.re + 0.345_494_149_471_335_5).abs() < 1e-15);
        assert!(y11.im.abs() < 1e-16);
        assert!(y(2, 1, PI / 2.0, 0.77).norm() < 1e-12);
    }

    #[test]
    fn index_validation_and_linear_order() {
        assert!(HarmonicIndex::new(2, 3).is_err());
        assert!(HarmonicIndex::new(2, -3).is_err());
        let mut k = 0;
        for l in 0..20u32 {
            for m in -(l as i32)..=(l as i32) {
                let idx = HarmonicIndex::new(l, m).unwrap();
                assert_eq!(idx.linear(), k);
                assert_eq!(HarmonicIndex::from_linear(k), idx);
                k += 1;
            }
        }
    }

    #[test]
    fn theta_is_validated_phi_is_reduced() {
        let idx = HarmonicIndex::new(3, 2).unwrap();
        assert!(sph_harm(idx, -0.1, 0.0).is_err());
        assert!(sph_harm(idx, PI + 1e-9, 0.0).is_err());
        let a = sph_harm(idx, 1.0, 0.3).unwrap();
        let b = sph_harm(idx, 1.0, 0.3 + 4.0 * PI).unwrap();
        assert!((a - b).norm() < 1e-13);
        assert_eq!(reduce_phi(-0.0).to_bits(), 0.0f64.to_bits());
        assert!(reduce_phi(-1e-20) < TAU);
    }

    #[test]
    fn conjugation_symmetry() {
        for l in 0..=12u32 {
            for m in 0..=(l as i32) {
                let a = y(l, -m, 0.9, 1.7);
                let b = y(l, m, 0.9, 1.7).conj() * if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((a - b).norm() < 1e-14);
            }
        }
    }
}
