use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{DVector, Rotation3, Unit};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::frame::BodyFrame;
use crate::config_space::Vec3;
use crate::error::{domain, Error, Result};
use crate::special::{euler_zyz, sph_harm, small_d_block, wigner_big_d, HarmonicIndex, C64};

/// Default tolerance of the phase fit.
pub const SUPERSELECTION_TOL: f64 = 1e-10;

/// Which operator's eigenbasis labels `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "lab-z")]
    LabZ,
    #[serde(rename = "body-K1")]
    BodyK1,
    #[serde(rename = "body-K3")]
    BodyK3,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::LabZ => "lab-z",
            Basis::BodyK1 => "body-K1",
            Basis::BodyK3 => "body-K3",
        }
    }
}

/// Angular part of a state, as coefficients on `|l, mu>` of one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularState {
    l_max: u32,
    basis: Basis,
    entries: BTreeMap<(u32, i32), C64>,
}

fn check_basis(state: &AngularState, expected: Basis) -> Result<()> {
    if state.basis != expected {
        return Err(Error::BasisMismatch { expected: expected.as_str().into(), found: state.basis.as_str().into() });
    }
    Ok(())
}

impl AngularState {
    pub fn new(l_max: u32, basis: Basis) -> Self {
        Self { l_max, basis, entries: BTreeMap::new() }
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn set(&mut self, l: u32, mu: i32, value: C64) -> Result<()> {
        HarmonicIndex::new(l, mu)?;
        if l > self.l_max {
            return Err(domain(format!("l={l} exceeds l_max={}", self.l_max)));
        }
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(domain("coefficients must be finite"));
        }
        self.entries.insert((l, mu), value);
        Ok(())
    }

    pub fn get(&self, l: u32, mu: i32) -> C64 {
        self.entries.get(&(l, mu)).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, i32), C64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self, other> = sum conj(self) other`; both states must share a basis.
    pub fn inner(&self, other: &AngularState) -> Result<C64> {
        check_basis(other, self.basis)?;
        Ok(self.entries.iter().map(|(k, v)| v.conj() * other.get(k.0, k.1)).sum())
    }

    /// Norm of `self - other`.
    pub fn distance(&self, other: &AngularState) -> Result<f64> {
        check_basis(other, self.basis)?;
        let keys: BTreeSet<(u32, i32)> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        Ok(keys
            .iter()
            .map(|&(l, mu)| (self.get(l, mu) - other.get(l, mu)).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    fn map_entries<F: Fn(u32, i32, C64) -> C64>(&self, basis: Basis, f: F) -> Self {
        let entries = self.entries.iter().map(|(&(l, mu), &v)| ((l, mu), f(l, mu, v))).collect();
        Self { l_max: self.l_max, basis, entries }
    }

    /// The part carried by orbitals of the given parity (`0` even, `1` odd).
    pub fn orbital_part(&self, parity: u32) -> Self {
        let entries = self.entries.iter().filter(|(k, _)| k.0 % 2 == parity).map(|(k, v)| (*k, *v)).collect();
        Self { l_max: self.l_max, basis: self.basis, entries }
    }

    pub fn scaled(&self, factor: C64) -> Self {
        self.map_entries(self.basis, |_, _, v| v * factor)
    }

    /// Entrywise sum of two states in the same basis.
    pub fn plus(&self, other: &AngularState) -> Result<Self> {
        check_basis(other, self.basis)?;
        let mut out = self.clone();
        out.l_max = self.l_max.max(other.l_max);
        for (k, v) in &other.entries {
            *out.entries.entry(*k).or_default() += v;
        }
        Ok(out)
    }

    /// Coefficients of multiplet `l` ordered from `mu = +l` down to `-l`.
    pub fn block(&self, l: u32) -> DVector<C64> {
        let li = l as i32;
        DVector::from_fn(2 * l as usize + 1, |r, _| self.get(l, li - r as i32))
    }

    fn set_block(&mut self, l: u32, v: &DVector<C64>) {
        let li = l as i32;
        for (r, z) in v.iter().enumerate() {
            if z.re != 0.0 || z.im != 0.0 {
                self.entries.insert((l, li - r as i32), *z);
            }
        }
    }

    fn occupied_orbitals(&self) -> BTreeSet<u32> {
        self.entries.keys().map(|k| k.0).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StateWire::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: StateWire = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        let mut out = AngularState::new(w.l_max, w.basis);
        for (k, e) in w.entries.iter().enumerate() {
            if out.entries.contains_key(&(e.l, e.mu)) {
                return Err(Error::Parse(format!("entries[{k}]: duplicate ({}, {})", e.l, e.mu)));
            }
            out.set(e.l, e.mu, C64::new(e.re, e.im)).map_err(|err| Error::Parse(format!("entries[{k}]: {err}")))?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntryWire {
    l: u32,
    mu: i32,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateWire {
    l_max: u32,
    basis: Basis,
    entries: Vec<StateEntryWire>,
}

impl From<&AngularState> for StateWire {
    fn from(s: &AngularState) -> Self {
        let entries = s
            .entries
            .iter()
            .map(|(&(l, mu), v)| StateEntryWire { l, mu, re: v.re, im: v.im })
            .collect();
        Self { l_max: s.l_max, basis: s.basis, entries }
    }
}

/// `beta_l = sqrt((2l + 1) / 4 pi)`, the weights of the band-limited delta.
pub fn delta_weight(l: u32) -> f64 {
    ((2 * l + 1) as f64 / (4.0 * PI)).sqrt()
}

/// The position state at direction `r0`, truncated at `l_max`, in the body-K3 basis.
///
/// Only `mu = 0` entries occur: the state is invariant under rotations about its
/// own direction.
pub fn point_state(r0: Vec3, l_max: u32) -> Result<AngularState> {
    BodyFrame::new(r0)?;
    let mut s = AngularState::new(l_max, Basis::BodyK3);
    for l in 0..=l_max {
        s.set(l, 0, C64::new(delta_weight(l), 0.0))?;
    }
    Ok(s)
}

/// Re-expresses a body-K3 state in the body-K1 basis.
///
/// The two eigenbases differ by a quarter turn about `n2`, so each multiplet
/// is multiplied by `d^l(pi/2)`.
pub fn to_body_k1(state: &AngularState) -> Result<AngularState> {
    check_basis(state, Basis::BodyK3)?;
    let mut out = AngularState::new(state.l_max, Basis::BodyK1);
    for l in state.occupied_orbitals() {
        let d = small_d_block(l, FRAC_PI_2).map(|x| C64::new(x, 0.0));
        out.set_block(l, &(d * state.block(l)));
    }
    Ok(out)
}

/// The same position state in the lab basis: coefficients `conj(Y_lm(n3))`.
pub fn lab_point_state(r0: Vec3, l_max: u32) -> Result<AngularState> {
    let frame = BodyFrame::new(r0)?;
    let n3 = frame.n3;
    let theta = n3.z.clamp(-1.0, 1.0).acos();
    let phi = n3.y.atan2(n3.x);
    let mut s = AngularState::new(l_max, Basis::LabZ);
    for l in 0..=l_max {
        for m in -(l as i32)..=(l as i32) {
            let y = sph_harm(HarmonicIndex::new(l, m)?, theta, phi)?;
            s.set(l, m, y.conj())?;
        }
    }
    Ok(s)
}

/// Applies `e^{i pi K1}`, which is diagonal in the body-K1 basis: entry `(l, mu)` gains `(-1)^mu`.
pub fn rotate_pi_about_k1(state: &AngularState) -> Result<AngularState> {
    check_basis(state, Basis::BodyK1)?;
    Ok(state.map_entries(Basis::BodyK1, |_, mu, v| if mu % 2 == 0 { v } else { -v }))
}

/// Rotates a lab-basis state by `pi` about `axis`, through the `D^l` blocks of the rotation.
pub fn rotate_lab_pi_about(state: &AngularState, axis: Vec3) -> Result<AngularState> {
    check_basis(state, Basis::LabZ)?;
    if axis.norm() == 0.0 {
        return Err(domain("rotation axis must be nonzero"));
    }
    let r = Rotation3::from_axis_angle(&Unit::new_normalize(axis), PI);
    let (a, b, g) = euler_zyz(r.matrix());
    let mut out = AngularState::new(state.l_max, Basis::LabZ);
    for l in state.occupied_orbitals() {
        let d = wigner_big_d(l, a, b, g)?;
        out.set_block(l, &(d.matrix() * state.block(l)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    GlobalPhase,
    NoGlobalPhase,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::GlobalPhase => "GlobalPhase",
            Verdict::NoGlobalPhase => "NoGlobalPhase",
        }
    }
}

/// Best ray match between a state and its rotated image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFitReport {
    pub best_phase: C64,
    /// `min |rotated - lambda state| / (sqrt 2 |state|)`; an equal blend of two
    /// sectors with opposite phases scores exactly 1.
    pub residual: f64,
    pub verdict: Verdict,
}

impl PhaseFitReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "phase_re": self.best_phase.re,
            "phase_im": self.best_phase.im,
            "residual": self.residual,
            "verdict": self.verdict.as_str(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("plain data serializes")
    }
}

/// Fits `rotated ~ lambda state` over unit `lambda`.
pub fn phase_fit(state: &AngularState, rotated: &AngularState, tol: f64) -> Result<PhaseFitReport> {
    let n = state.norm();
    if n == 0.0 {
        return Err(Error::DegenerateInput("state has zero norm".into()));
    }
    let overlap = state.inner(rotated)?;
    let best_phase = if overlap.norm() <= 1e-14 * n * rotated.norm() {
        C64::new(1.0, 0.0)
    } else {
        overlap / overlap.norm()
    };
    let residual = rotated.distance(&state.scaled(best_phase))? / (2f64.sqrt() * n);
    let verdict = if residual < tol { Verdict::GlobalPhase } else { Verdict::NoGlobalPhase };
    Ok(PhaseFitReport { best_phase, residual, verdict })
}

/// Whether the half-turn `e^{i pi K1}` returns a body-K1 state to itself up to a phase.
pub fn superselection_check(state: &AngularState, tol: f64) -> Result<PhaseFitReport> {
    let rotated = rotate_pi_about_k1(state)?;
    phase_fit(state, &rotated, tol)
}

/// For each `l`, the `mu` values whose body-K1 coefficient in the point state exceeds `tol`.
///
/// Only integer `mu` can occur: the state is built from `mu = 0` multiplets of
/// integer `l`, so the half-integer branches never arise.
pub fn mu_parity_spectrum(r0: Vec3, l_max: u32, tol: f64) -> Result<BTreeMap<u32, BTreeSet<i32>>> {
    let k1 = to_body_k1(&point_state(r0, l_max)?)?;
    let mut out: BTreeMap<u32, BTreeSet<i32>> = (0..=l_max).map(|l| (l, BTreeSet::new())).collect();
    for ((l, mu), v) in k1.entries() {
        if v.norm() > tol {
            out.get_mut(&l).expect("all l present").insert(mu);
        }
    }
    Ok(out)
}

/// One point of a sweep of the phase fit over the polar angle of `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub theta0: f64,
    pub phase_re: f64,
    pub phase_im: f64,
    pub residual: f64,
}

/// Phase fits of the lab-basis point state under a half-turn about `n1`, one
/// per polar angle in `thetas`. With `parity` set, only orbitals of that
/// parity (`0` even, `1` odd) are kept.
pub fn verdict_sweep(thetas: &[f64], phi0: f64, l_max: u32, parity: Option<u32>, tol: f64) -> Result<Vec<SweepPoint>> {
    thetas
        .iter()
        .map(|&t| {
            let r0 = Vec3::new(t.sin() * phi0.cos(), t.sin() * phi0.sin(), t.cos());
            let frame = BodyFrame::new(r0)?;
            let full = lab_point_state(r0, l_max)?;
            let s = match parity {
                Some(p) => full.orbital_part(p),
                None => full,
            };
            let fit = phase_fit(&s, &rotate_lab_pi_about(&s, frame.n1)?, tol)?;
            Ok(SweepPoint { theta0: t, phase_re: fit.best_phase.re, phase_im: fit.best_phase.im, residual: fit.residual })
        })
        .collect()
}

/// Unit-norm body-K1 state on orbitals of one parity with `l - mu` even, as the point states have.
pub fn random_single_parity_state(l_max: u32, parity: u32, seed: u64) -> AngularState {
    let mut rng = crate::random::rng(seed);
    let mut s = AngularState::new(l_max, Basis::BodyK1);
    for l in (0..=l_max).filter(|l| l % 2 == parity) {
        for mu in (-(l as i32)..=(l as i32)).filter(|mu| (l as i32 - mu) % 2 == 0) {
            let re = 2.0 * rng.random::<f64>() - 1.0;
            let im = 2.0 * rng.random::<f64>() - 1.0;
            s.set(l, mu, C64::new(re, im)).expect("valid index");
        }
    }
    let n = s.norm();
    s.scaled(C64::new(1.0 / n, 0.0))
}

/// `cos(chi) E + sin(chi) O` from independent unit even and odd states, with
/// both weights at least `min_weight`.
pub fn random_mixed_state(l_max: u32, min_weight: f64, seed: u64) -> AngularState {
    let even = random_single_parity_state(l_max, 0, seed.wrapping_mul(2));
    let odd = random_single_parity_state(l_max, 1, seed.wrapping_mul(2).wrapping_add(1));
    let lo = min_weight.clamp(0.0, FRAC_1_SQRT_2).asin();
    let hi = FRAC_PI_2 - lo;
    let chi = lo + (hi - lo) * crate::random::rng(seed ^ 0x9e37_79b9_7f4a_7c15).random::<f64>();
    even.scaled(C64::new(chi.cos(), 0.0))
        .plus(&odd.scaled(C64::new(chi.sin(), 0.0)))
        .expect("same basis")
}
