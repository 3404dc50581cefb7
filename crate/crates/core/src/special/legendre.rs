//! Associated Legendre functions.
//!
//! Two flavours live here: the plain `P_l^m(x)` used as a reference value and
//! the orthonormalised table that the spherical harmonics are built from. Both
//! carry the Condon–Shortley phase and are evaluated with upward recurrences in
//! `l` at fixed `m`.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// `P_l^m(x)` with the Condon–Shortley phase, `0 <= m <= l`, `|x| <= 1`.
pub fn assoc_legendre(l: u32, m: i32, x: f64) -> Result<f64> {
    if m < 0 || m as u32 > l {
        return Err(domain(format!("assoc_legendre requires 0 <= m <= l, got l={l}, m={m}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("assoc_legendre requires |x| <= 1, got {x}")));
    }
    let m = m as u32;

    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    let somx2 = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * somx2;
        odd += 2.0;
    }
    if l == m {
        return Ok(pmm);
    }

    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return Ok(pmmp1);
    }

    let mf = m as f64;
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        pll = (x * (2.0 * llf - 1.0) * pmmp1 - (llf + mf - 1.0) * pmm) / (llf - mf);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    Ok(pll)
}

#[inline]
pub(crate) fn tri_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Orthonormalised Legendre values `Pbar_l^m(cos theta)` for `0 <= m <= l <= l_max`,
/// together with their theta derivatives, at one colatitude.
///
/// `Pbar_l^m` is normalised so that `Y_lm = Pbar_l^m(cos theta) e^{i m phi}`.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    l_max: usize,
    values: Vec<f64>,
    dtheta: Vec<f64>,
}

impl LegendreTable {
    /// Builds the table at colatitude `theta`. The caller validates `theta`.
    pub fn new(l_max: u32, theta: f64) -> Self {
        let l_max = l_max as usize;
        let n = tri_index(l_max, l_max) + 1;
        let mut values = vec![0.0; n];
        let x = theta.cos();
        let s = theta.sin();

        let mut diag = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=l_max {
            if m > 0 {
                let mf = m as f64;
                diag *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            }
            values[tri_index(m, m)] = diag;
            if m == l_max {
                break;
            }
            let mf = m as f64;
            values[tri_index(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * x * diag;
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lm1 = lf - 1.0;
                let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                values[tri_index(l, m)] =
                    a * (x * values[tri_index(l - 1, m)] - b * values[tri_index(l - 2, m)]);
            }
        }

        // d/dtheta Pbar_l^m = ( sqrt((l-m)(l+m+1)) Pbar_l^{m+1} - sqrt((l+m)(l-m+1)) Pbar_l^{m-1} ) / 2
        // with Pbar_l^{-1} = -Pbar_l^1.
        let mut dtheta = vec![0.0; n];
        for l in 0..=l_max {
            let lf = l as f64;
            for m in 0..=l {
                let mf = m as f64;
                let up = if m < l {
                    ((lf - mf) * (lf + mf + 1.0)).sqrt() * values[tri_index(l, m + 1)]
                } else {
                    0.0
                };
                let down = match m {
                    0 if l > 0 => -values[tri_index(l, 1)],
                    0 => 0.0,
                    _ => values[tri_index(l, m - 1)],
                };
                let down = ((lf + mf) * (lf - mf + 1.0)).sqrt() * down;
                dtheta[tri_index(l, m)] = 0.5 * (up - down);
            }
        }

        Self { l_max, values, dtheta }
    }

    pub fn l_max(&self) -> u32 {
        self.l_max as u32
    }

    /// `Pbar_l^m` for any `|m| <= l`; negative orders use `Pbar_l^{-m} = (-1)^m Pbar_l^m`.
    #[inline]
    pub fn value(&self, l: u32, m: i32) -> f64 {
        let v = self.values[tri_index(l as usize, m.unsigned_abs() as usize)];
        if m < 0 && m % 2 != 0 {
            -v
        } else {
            v
        }
    }

    /// Theta derivative of [`LegendreTable::value`].
    #[inline]
    pub fn dtheta(&self, l: u32, m: i32) -> f64 {
        let v = self.dtheta[tri_index(l as usize, m.unsigned_abs() as usize)];
        if m < 0 && m % 2 != 0 {
            -v
        } else {
            v
        }
    }
}

/// Single orthonormalised value `Pbar_l^m(cos theta)`, `0 <= m <= l`.
pub(crate) fn normalized_legendre(l: u32, m: u32, theta: f64) -> f64 {
    let x = theta.cos();
    let s = theta.sin();
    let mut diag = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        diag *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    if l == m {
        return diag;
    }
    let mf = m as f64;
    let mut prev = diag;
    let mut cur = (2.0 * mf + 3.0).sqrt() * x * diag;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lm1 = lf - 1.0;
        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
        let next = a * (x * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}
