//! Seeded generators shared by the verification suites and the command line.
//!
//! The stream is ChaCha8 seeded from a `u64`. Coefficients are drawn in
//! ascending `l`, then ascending `m`, two uniforms per entry mapped to
//! `re = 2u - 1`, `im = 2u' - 1`. Entries outside the requested parity are
//! still drawn and then zeroed, so the even and odd parts of an unfiltered set
//! coincide with the filtered sets of the same seed. The result has unit norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{HarmonicCoefficients, ParityFilter};
use crate::config_space::Vec3;
use crate::special::{HarmonicIndex, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symmetric_unit(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Unit-norm coefficients up to `l_max` restricted to `filter`.
pub fn random_coefficients(l_max: u32, filter: ParityFilter, seed: u64) -> HarmonicCoefficients {
    let mut rng = rng(seed);
    let mut out = HarmonicCoefficients::zeros(l_max);
    for l in 0..=l_max {
        for m in -(l as i32)..=(l as i32) {
            let re = symmetric_unit(&mut rng);
            let im = symmetric_unit(&mut rng);
            if filter.admits(l) {
                let idx = HarmonicIndex::new(l, m).expect("|m| <= l");
                out.set(idx, C64::new(re, im)).expect("l <= l_max");
            }
        }
    }
    let n = out.norm();
    if n > 0.0 {
        out.scaled(1.0 / n)
    } else {
        out
    }
}

/// A point with coordinates uniform in `[-scale, scale]`.
pub fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> Vec3 {
    Vec3::new(symmetric_unit(rng), symmetric_unit(rng), symmetric_unit(rng)) * scale
}

/// A direction uniform on the unit sphere.
pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let z = symmetric_unit(rng);
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Parity;

    #[test]
    fn reproducible_and_normalized() {
        let a = random_coefficients(6, ParityFilter::Even, 7);
        let b = random_coefficients(6, ParityFilter::Even, 7);
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert_eq!(a.parity(), Parity::Even);
        assert_eq!(random_coefficients(6, ParityFilter::Odd, 7).parity(), Parity::Odd);
        assert_ne!(a, random_coefficients(6, ParityFilter::Even, 8));
    }

    #[test]
    fn parity_parts_share_the_stream() {
        let all = random_coefficients(5, ParityFilter::All, 3);
        let even = random_coefficients(5, ParityFilter::Even, 3);
        let ratio = all.norm() / all.filtered(ParityFilter::Even).norm();
        for (x, y) in all.filtered(ParityFilter::Even).as_slice().iter().zip(even.as_slice()) {
            assert!((x * ratio - y).norm() < 1e-14);
        }
    }

    #[test]
    fn unit_vectors() {
        let mut r = rng(1);
        for _ in 0..100 {
            assert!((random_unit_vector(&mut r).norm() - 1.0).abs() < 1e-14);
        }
    }
}
