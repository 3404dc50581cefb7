//! Continuity of hemisphere expansions across the equatorial seam.
//!
//! Points `(pi/2, phi)` and `(pi/2, phi + pi)` of the chart describe the same
//! configuration. An admissible wave function must take the same value at
//! both, and because crossing the seam reverses the direction of increasing
//! `theta`, its `theta` derivatives there must be opposite.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::analysis::{HarmonicCoefficients, Parity};
use crate::error::{domain, Error, Result};
use crate::special::{LegendreTable, C64};

/// Default tolerance of [`statistics_classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-12;
/// Minimum log-log slope for a scan to count as decaying.
pub const DECAY_SLOPE: f64 = 0.9;
/// Fewest scan rows a slope fit is attempted on.
pub const MIN_FIT_POINTS: usize = 4;
/// Mismatches below this multiple of the coefficient norm are treated as exact zeros.
pub const NOISE_FLOOR: f64 = 1e-12;
/// Relative tolerance, per unit of `l_max + 1`, of the exact gluing test.
pub const GLUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Symmetric,
    Inadmissible,
    Mixed,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Symmetric => "symmetric",
            Classification::Inadmissible => "inadmissible",
            Classification::Mixed => "mixed",
        }
    }
}

/// Seam mismatch of one expansion at colatitude `pi/2 - epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeamReport {
    pub epsilon: f64,
    pub mismatch_sup: f64,
    pub mismatch_l2: f64,
    pub derivative_defect: f64,
    pub classification: Classification,
}

/// Azimuth samples used when the caller does not choose: comfortably above `2 l_max + 1`.
pub fn default_n_phi(l_max: u32) -> usize {
    4 * l_max as usize + 8
}

/// `b_m(theta) = sum_l a_lm g(l, m)` for `m = -l_max..=l_max`.
fn fold_m<G: Fn(&LegendreTable, u32, i32) -> f64>(coeffs: &HarmonicCoefficients, theta: f64, g: G) -> Vec<C64> {
    let l_max = coeffs.l_max();
    let lm = l_max as i32;
    let table = LegendreTable::new(l_max, theta);
    let mut by_m = vec![C64::new(0.0, 0.0); 2 * l_max as usize + 1];
    for (idx, a) in coeffs.iter() {
        if a.re != 0.0 || a.im != 0.0 {
            by_m[(idx.m() + lm) as usize] += a * g(&table, idx.l(), idx.m());
        }
    }
    by_m
}

fn fourier_sum(by_m: &[C64], phi: f64) -> C64 {
    let lm = (by_m.len() / 2) as i32;
    by_m.iter()
        .enumerate()
        .map(|(k, b)| b * C64::from_polar(1.0, (k as i32 - lm) as f64 * phi))
        .sum()
}

/// Sup and L2 norms over `n_phi` uniform azimuths of `F(phi) -/+ F(phi + pi)`.
fn seam_norms(by_m: &[C64], n_phi: usize, sign: f64) -> (f64, f64) {
    let mut sup = 0.0f64;
    let mut sq = 0.0;
    for j in 0..n_phi {
        let phi = TAU * j as f64 / n_phi as f64;
        let d = fourier_sum(by_m, phi) - fourier_sum(by_m, phi + PI) * sign;
        sup = sup.max(d.norm());
        sq += d.norm_sqr();
    }
    (sup, (sq * TAU / n_phi as f64).sqrt())
}

/// Exact seam value jump and derivative defect, both sup norms over `n_phi` azimuths.
fn seam_limits(coeffs: &HarmonicCoefficients, n_phi: usize) -> (f64, f64) {
    let values = fold_m(coeffs, FRAC_PI_2, |t, l, m| t.value(l, m));
    let slopes = fold_m(coeffs, FRAC_PI_2, |t, l, m| t.dtheta(l, m));
    (seam_norms(&values, n_phi, 1.0).0, seam_norms(&slopes, n_phi, -1.0).0)
}

fn glue_scale(coeffs: &HarmonicCoefficients) -> f64 {
    GLUE_TOL * (coeffs.l_max() as f64 + 1.0) * coeffs.norm().max(f64::MIN_POSITIVE)
}

/// Classification from parity content and the exact gluing conditions.
///
/// Even content that glues is symmetric; odd content that fails to glue is
/// inadmissible; everything else, including any blend of the two, is mixed.
fn classify_report(coeffs: &HarmonicCoefficients, jump: f64, defect: f64) -> Classification {
    let scale = glue_scale(coeffs);
    let glues = jump <= scale && defect <= scale;
    match (coeffs.parity(), glues) {
        (Parity::Even, true) => Classification::Symmetric,
        (Parity::Odd, false) => Classification::Inadmissible,
        _ => Classification::Mixed,
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < FRAC_PI_2) {
        return Err(domain(format!("epsilon must lie in (0, pi/2), got {epsilon}")));
    }
    Ok(())
}

/// Compares `Psi(pi/2 - eps, phi)` with `Psi(pi/2 - eps, phi + pi)` on `n_phi` azimuths.
pub fn seam_mismatch(coeffs: &HarmonicCoefficients, epsilon: f64, n_phi: usize) -> Result<SeamReport> {
    check_epsilon(epsilon)?;
    let need = 2 * coeffs.l_max() as usize + 1;
    if n_phi < need {
        return Err(domain(format!("n_phi must be at least 2 l_max + 1 = {need}, got {n_phi}")));
    }
    let near = fold_m(coeffs, FRAC_PI_2 - epsilon, |t, l, m| t.value(l, m));
    let (mismatch_sup, mismatch_l2) = seam_norms(&near, n_phi, 1.0);
    let (jump, derivative_defect) = seam_limits(coeffs, n_phi);
    Ok(SeamReport {
        epsilon,
        mismatch_sup,
        mismatch_l2,
        derivative_defect,
        classification: classify_report(coeffs, jump, derivative_defect),
    })
}

/// Classification by parity content alone.
pub fn statistics_classify(coeffs: &HarmonicCoefficients, tol: f64) -> Result<Classification> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let ls = coeffs.active_orbitals(tol);
    if ls.is_empty() {
        return Err(Error::DegenerateInput(format!("no coefficient exceeds {tol}")));
    }
    let even = ls.iter().any(|l| l % 2 == 0);
    let odd = ls.iter().any(|l| l % 2 == 1);
    Ok(match (even, odd) {
        (true, false) => Classification::Symmetric,
        (false, true) => Classification::Inadmissible,
        _ => Classification::Mixed,
    })
}

/// Rows of a seam scan together with the decay analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeamScan {
    pub rows: Vec<SeamReport>,
    /// Norm of the scanned coefficients, which sets the noise floor.
    pub coefficient_norm: f64,
}

/// `epsilon_k = start / 2^k` for `k = 0..count`.
pub fn halving_eps(start: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start / 2f64.powi(k as i32)).collect()
}

/// The standard scan, from `1e-2` halving down to about `2e-5`.
pub fn default_eps_list() -> Vec<f64> {
    halving_eps(1e-2, 10)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl SeamScan {
    fn floor(&self) -> f64 {
        NOISE_FLOOR * self.coefficient_norm
    }

    /// Log-log slope of `mismatch_sup` against `epsilon`, if enough rows sit above the noise floor.
    pub fn slope(&self) -> Option<f64> {
        if self.rows.len() < MIN_FIT_POINTS || self.rows.iter().all(|r| r.mismatch_sup <= self.floor()) {
            return None;
        }
        let floor = self.floor().max(f64::MIN_POSITIVE);
        let pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.epsilon, r.mismatch_sup.max(floor))).collect();
        loglog_slope(&pts)
    }

    /// Whether the mismatch vanishes at least linearly in `epsilon`.
    ///
    /// `None` when the scan is too short to decide. A scan lying entirely
    /// under the noise floor counts as decaying.
    pub fn decays(&self) -> Option<bool> {
        if self.rows.len() < MIN_FIT_POINTS {
            return None;
        }
        if self.rows.iter().all(|r| r.mismatch_sup <= self.floor()) {
            return Some(true);
        }
        self.slope().map(|s| s >= DECAY_SLOPE)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["epsilon", "mismatch_sup", "mismatch_l2", "derivative_defect"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                format!("{:?}", r.epsilon),
                format!("{:?}", r.mismatch_sup),
                format!("{:?}", r.mismatch_l2),
                format!("{:?}", r.derivative_defect),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows,
            "coefficient_norm": self.coefficient_norm,
            "slope": self.slope(),
            "decaying": self.decays(),
        })
    }
}

/// One [`SeamReport`] per epsilon, using [`default_n_phi`] azimuths.
pub fn seam_limit_scan(coeffs: &HarmonicCoefficients, eps_list: &[f64]) -> Result<SeamScan> {
    if eps_list.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Greater)) {
        return Err(domain("epsilon list must be strictly decreasing"));
    }
    let n_phi = default_n_phi(coeffs.l_max());
    let rows = eps_list
        .iter()
        .map(|&e| seam_mismatch(coeffs, e, n_phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeamScan { rows, coefficient_norm: coeffs.norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{evaluate, ParityFilter};
    use crate::random::random_coefficients;
    use crate::special::{sph_harm, HarmonicIndex};

    fn single(l: u32, m: i32) -> HarmonicCoefficients {
        HarmonicCoefficients::single(l, m).unwrap()
    }

    #[test]
    fn even_m_has_no_mismatch() {
        let r = seam_mismatch(&single(2, 0), 1e-4, 9).unwrap();
        assert!(r.mismatch_sup < 1e-12);
        assert!(r.derivative_defect < 1e-12);
        assert_eq!(r.classification, Classification::Symmetric);
    }

    #[test]
    fn odd_m_odd_l_jumps() {
        let r = seam_mismatch(&single(1, 1), 1e-6, 8).unwrap();
        // 2 sqrt(3 / (8 pi))
        let expected = 0.690_988_298_942_671;
        assert!((r.mismatch_sup - expected).abs() < 1e-5);
        assert_eq!(r.classification, Classification::Inadmissible);
    }

    #[test]
    fn even_l_odd_m_is_linear_in_epsilon() {
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| seam_mismatch(&single(2, 1), e, 9).unwrap().mismatch_sup / e)
            .collect();
        // finite-difference oracle: 2 |dY21/dtheta| at the equator
        let h = 1e-5;
        let idx = HarmonicIndex::new(2, 1).unwrap();
        let slope = (sph_harm(idx, FRAC_PI_2 + h, 0.0).unwrap() - sph_harm(idx, FRAC_PI_2 - h, 0.0).unwrap())
            .norm()
            / (2.0 * h);
        for r in &ratios {
            assert!((r / ratios[0] - 1.0).abs() < 0.05);
            assert!((r / (2.0 * slope) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn odd_l_even_m_fails_only_the_derivative() {
        let r = seam_mismatch(&single(1, 0), 1e-3, 8).unwrap();
        assert!(r.mismatch_sup < 1e-12);
        assert!(r.derivative_defect > 0.1);
        assert_eq!(r.classification, Classification::Inadmissible);
    }

    #[test]
    fn argument_validation() {
        let c = single(3, 1);
        assert!(seam_mismatch(&c, 0.0, 16).is_err());
        assert!(seam_mismatch(&c, FRAC_PI_2, 16).is_err());
        assert!(seam_mismatch(&c, 1e-3, 6).is_err());
        assert!(seam_mismatch(&c, 1e-3, 7).is_ok());
        assert!(seam_limit_scan(&c, &[1e-3, 1e-2]).is_err());
        assert!(seam_limit_scan(&c, &[1e-3, 1e-3]).is_err());
        assert!(seam_limit_scan(&c, &[]).unwrap().rows.is_empty());
    }

    #[test]
    fn classify_examples() {
        let c = HarmonicCoefficients::from_entries(
            2,
            [
                (HarmonicIndex::new(0, 0).unwrap(), C64::new(1.0, 0.0)),
                (HarmonicIndex::new(2, 1).unwrap(), C64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(statistics_classify(&c, DEFAULT_CLASSIFY_TOL).unwrap(), Classification::Symmetric);
        assert_eq!(statistics_classify(&single(1, 0), DEFAULT_CLASSIFY_TOL).unwrap(), Classification::Inadmissible);
        let tiny = HarmonicCoefficients::from_entries(2, [(HarmonicIndex::new(1, 0).unwrap(), C64::new(1e-13, 0.0))])
            .unwrap();
        assert!(matches!(statistics_classify(&tiny, DEFAULT_CLASSIFY_TOL), Err(Error::DegenerateInput(_))));
        assert!(matches!(
            statistics_classify(&HarmonicCoefficients::zeros(3), DEFAULT_CLASSIFY_TOL),
            Err(Error::DegenerateInput(_))
        ));
        assert!(statistics_classify(&c, 0.0).is_err());
    }

    #[test]
    fn term_identity_on_the_equator() {
        for l in 0..=32u32 {
            for m in -(l as i32)..=(l as i32) {
                let c = single(l, m);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                for phi in [0.0, 0.4, 2.5, 5.9] {
                    let a = evaluate(&c, FRAC_PI_2, phi + PI).unwrap();
                    let b = evaluate(&c, FRAC_PI_2, phi).unwrap() * sign;
                    assert!((a - b).norm() < 1e-12, "l={l} m={m}");
                }
            }
        }
    }

    #[test]
    fn odd_orbitals_always_have_a_witness() {
        for l in (1..=31u32).step_by(2) {
            let v = evaluate(&single(l, l as i32), FRAC_PI_2, 0.0).unwrap();
            assert!(v.norm() > 0.1, "l={l}");
        }
    }

    #[test]
    fn even_parity_glues_smoothly() {
        for seed in 0..20 {
            let c = random_coefficients(24, ParityFilter::Even, seed);
            let r = seam_mismatch(&c, 1e-3, default_n_phi(24)).unwrap();
            assert!(r.derivative_defect < 1e-10, "{}", r.derivative_defect);
            assert_eq!(r.classification, Classification::Symmetric);
        }
    }

    #[test]
    fn norm_inequality() {
        let c = random_coefficients(10, ParityFilter::All, 5);
        for e in [1e-1, 1e-3] {
            let r = seam_mismatch(&c, e, 41).unwrap();
            assert!(r.mismatch_sup >= r.mismatch_l2 / TAU.sqrt());
        }
    }

    #[test]
    fn even_scan_halves() {
        for seed in 0..10 {
            let c = random_coefficients(16, ParityFilter::Even, seed);
            let eps: Vec<f64> = default_eps_list().into_iter().filter(|&e| e >= 1e-5).collect();
            let scan = seam_limit_scan(&c, &eps).unwrap();
            for w in scan.rows.windows(2) {
                assert!(w[1].mismatch_sup <= 1.1 * 0.5 * w[0].mismatch_sup);
            }
            assert!(scan.slope().unwrap() >= DECAY_SLOPE);
            assert_eq!(scan.decays(), Some(true));
        }
    }

    #[test]
    fn jump_scan_is_flat() {
        let scan = seam_limit_scan(&single(1, 1), &default_eps_list()).unwrap();
        let first = scan.rows[0].mismatch_sup;
        for r in &scan.rows {
            assert!((r.mismatch_sup - first).abs() < 1e-4);
        }
        assert_eq!(scan.decays(), Some(false));
        let flat = seam_limit_scan(&single(2, 0), &default_eps_list()).unwrap();
        assert_eq!(flat.decays(), Some(true));
        assert_eq!(seam_limit_scan(&single(1, 1), &[1e-2, 1e-3]).unwrap().decays(), None);
    }

    #[test]
    fn classification_matches_scan() {
        let eps = default_eps_list();
        for seed in 0..100u64 {
            let filter = [ParityFilter::Even, ParityFilter::Odd, ParityFilter::All][(seed % 3) as usize];
            let c = random_coefficients(12, filter, seed);
            let class = statistics_classify(&c, DEFAULT_CLASSIFY_TOL).unwrap();
            let scan = seam_limit_scan(&c, &eps).unwrap();
            assert_eq!(class == Classification::Symmetric, scan.decays() == Some(true), "seed {seed}");
            assert_eq!(class, scan.rows[0].classification, "seed {seed}");
        }
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1.0, 0.5, 0.25, 0.125].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&[(1.0, 0.0), (0.5, 1.0)]).is_none());
    }

    #[test]
    fn csv_columns() {
        let scan = seam_limit_scan(&single(1, 1), &[1e-2, 1e-3]).unwrap();
        let text = scan.to_csv();
        assert!(text.starts_with("epsilon,mismatch_sup,mismatch_l2,derivative_defect\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
