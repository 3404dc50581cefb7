//! Wigner rotation matrices.
//!
//! `d^l_{mu,nu}(beta)` is evaluated by the three-term recurrence in `l` at fixed
//! `(mu, nu)`, seeded at `l = max(|mu|, |nu|)` where the factorial sum has a
//! single term. The factorial sum itself loses digits long before `l = 64`.

use nalgebra::{DMatrix, Matrix3};

use super::{OperatorBlock, C64};
use crate::error::{domain, Result};

fn check_indices(l: u32, mu: i32, nu: i32) -> Result<()> {
    if mu.unsigned_abs() > l || nu.unsigned_abs() > l {
        return Err(domain(format!(
            "wigner d requires |mu|, |nu| <= l, got l={l}, mu={mu}, nu={nu}"
        )));
    }
    Ok(())
}

/// `sqrt(binomial(n, k))` via a running product of ratios.
fn sqrt_binomial(n: i64, k: i64) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc.sqrt()
}

/// Seed `d^j_{mp,m}` for `|mp| = j >= |m|`.
fn seed(j: i64, mp: i64, m: i64, beta: f64) -> f64 {
    let c = (0.5 * beta).cos();
    let s = (0.5 * beta).sin();
    let root = sqrt_binomial(2 * j, j + m);
    if mp == j {
        let sign = if (j - m) % 2 == 0 { 1.0 } else { -1.0 };
        sign * root * c.powi((j + m) as i32) * s.powi((j - m) as i32)
    } else {
        root * c.powi((j - m) as i32) * s.powi((j + m) as i32)
    }
}

fn small_d_unchecked(l: i64, mu: i64, nu: i64, beta: f64) -> f64 {
    if mu.abs() < nu.abs() {
        // d_{mu,nu} = (-1)^{mu-nu} d_{nu,mu}
        let sign = if (mu - nu).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return sign * small_d_unchecked(l, nu, mu, beta);
    }
    let j0 = mu.abs();
    let (mp, m) = (mu as f64, nu as f64);
    let cb = beta.cos();
    let mut prev = 0.0;
    let mut cur = seed(j0, mu, nu, beta);
    for j in j0..l {
        let jf = j as f64;
        let j1 = jf + 1.0;
        let a = ((j1 * j1 - m * m) * (j1 * j1 - mp * mp)).sqrt();
        let shift = if j == 0 { 0.0 } else { m * mp / (jf * j1) };
        let b = (jf * jf - m * m) * (jf * jf - mp * mp);
        let back = if b <= 0.0 { 0.0 } else { b.sqrt() / (jf * (2.0 * jf + 1.0)) * prev };
        let next = j1 * (2.0 * jf + 1.0) / a * ((cb - shift) * cur - back);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d^l_{mu,nu}(beta) = <l, mu| e^{-i beta Jy} |l, nu>`.
pub fn wigner_small_d(l: u32, mu: i32, nu: i32, beta: f64) -> Result<f64> {
    check_indices(l, mu, nu)?;
    Ok(small_d_unchecked(l as i64, mu as i64, nu as i64, beta))
}

/// The real orthogonal block `d^l(beta)` in `mu = +l .. -l` order.
pub fn small_d_block(l: u32, beta: f64) -> DMatrix<f64> {
    let dim = 2 * l as usize + 1;
    let li = l as i64;
    DMatrix::from_fn(dim, dim, |r, c| {
        small_d_unchecked(li, li - r as i64, li - c as i64, beta)
    })
}

/// Full rotation block `D^l_{mu,nu}(alpha, beta, gamma) = e^{-i mu alpha} d^l_{mu,nu}(beta) e^{-i nu gamma}`.
pub fn wigner_big_d(l: u32, alpha: f64, beta: f64, gamma: f64) -> Result<OperatorBlock> {
    let d = small_d_block(l, beta);
    let li = l as i32;
    let matrix = DMatrix::from_fn(d.nrows(), d.ncols(), |r, c| {
        let mu = (li - r as i32) as f64;
        let nu = (li - c as i32) as f64;
        C64::from_polar(d[(r, c)], -(mu * alpha + nu * gamma))
    });
    OperatorBlock::new(l, matrix)
}

/// z-y-z Euler angles `(alpha, beta, gamma)` with `R = Rz(alpha) Ry(beta) Rz(gamma)`.
///
/// At the gimbal points `beta = 0, pi` the split between `alpha` and `gamma` is
/// fixed by `gamma = 0`.
pub fn euler_zyz(r: &Matrix3<f64>) -> (f64, f64, f64) {
    let cb = r[(2, 2)].clamp(-1.0, 1.0);
    let sb = (r[(0, 2)].powi(2) + r[(1, 2)].powi(2)).sqrt();
    if sb > 1e-12 {
        let beta = sb.atan2(cb);
        let alpha = r[(1, 2)].atan2(r[(0, 2)]);
        let gamma = r[(2, 1)].atan2(-r[(2, 0)]);
        (alpha, beta, gamma)
    } else if cb > 0.0 {
        (r[(1, 0)].atan2(r[(0, 0)]), 0.0, 0.0)
    } else {
        ((-r[(1, 0)]).atan2(-r[(0, 0)]), std::f64::consts::PI, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Rotation3, Vector3};
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Direct factorial sum, usable at low l only.
    fn factorial_sum(j: i64, mp: i64, m: i64, beta: f64) -> f64 {
        let f = |n: i64| (1..=n).map(|k| k as f64).product::<f64>();
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let mut total = 0.0;
        for k in 0..=(2 * j) {
            if j + m - k < 0 || mp - m + k < 0 || j - mp - k < 0 {
                continue;
            }
            let sign = if (mp - m + k) % 2 == 0 { 1.0 } else { -1.0 };
            let num = (f(j + mp) * f(j - mp) * f(j + m) * f(j - m)).sqrt();
            let den = f(j + m - k) * f(k) * f(mp - m + k) * f(j - mp - k);
            total += sign * num / den
                * c.powi((2 * j + m - mp - 2 * k) as i32)
                * s.powi((mp - m + 2 * k) as i32);
        }
        total
    }

    #[test]
    fn spot_values() {
        assert!(wigner_small_d(1, 0, 0, FRAC_PI_2).unwrap().abs() < 1e-16);
        assert!(wigner_small_d(2, 1, 0, FRAC_PI_2).unwrap().abs() < 1e-12);
        let v = wigner_small_d(1, 1, 0, FRAC_PI_2).unwrap();
        assert!((v + 0.5f64.sqrt()).abs() < 1e-15);
        assert!(wigner_small_d(1, 2, 0, 0.3).is_err());
    }

    #[test]
    fn recurrence_matches_factorial_sum() {
        for j in 0..=10i64 {
            for mp in -j..=j {
                for m in -j..=j {
                    for &beta in &[0.0, 0.1, 0.9, FRAC_PI_2, 2.4, PI] {
                        let a = small_d_unchecked(j, mp, m, beta);
                        let b = factorial_sum(j, mp, m, beta);
                        assert!((a - b).abs() < 1e-12, "j={j} mp={mp} m={m} beta={beta}");
                    }
                }
            }
        }
    }

    #[test]
    fn null_rotation_is_identity() {
        for l in 0..6 {
            let d = wigner_big_d(l, 0.0, 0.0, 0.0).unwrap();
            let id = OperatorBlock::identity(l);
            assert!(super::super::block::max_abs_diff(d.matrix(), id.matrix()) < 1e-15);
        }
    }

    #[test]
    fn euler_round_trip() {
        let axes = [
            Vector3::new(1.0, 2.0, 3.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(1.0, -1.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
        ];
        for axis in axes {
            for &angle in &[0.3, FRAC_PI_2, PI, -2.0] {
                let r = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
                let (a, b, g) = euler_zyz(r.matrix());
                let back = Rotation3::from_axis_angle(&Vector3::z_axis(), a)
                    * Rotation3::from_axis_angle(&Vector3::y_axis(), b)
                    * Rotation3::from_axis_angle(&Vector3::z_axis(), g);
                assert!((back.matrix() - r.matrix()).abs().max() < 1e-12);
            }
        }
    }
}
