//! Configuration space of two identical particles: unordered pairs of points.
//!
//! A pair is charted by its centre `R`, separation `r` and the direction of the
//! relative vector restricted to the upper hemisphere. On the equator only half
//! of the circle, `phi in [0, pi)`, belongs to the chart; the other half is the
//! same set of configurations seen from the other particle.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::hash::{Hash, Hasher};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::special::reduce_phi;

pub type Vec3 = Vector3<f64>;

/// Relative z below this fraction of `|v|` selects the equator branch.
pub const EQUATOR_REL_TOL: f64 = 1e-15;

/// An unordered pair `{p, q}` of positions.
///
/// The pair is stored with the lexicographically smaller point first, so
/// equality and hashing do not depend on construction order.
#[derive(Debug, Clone, Copy)]
pub struct UnorderedPair {
    first: Vec3,
    second: Vec3,
}

fn lex_cmp(a: &Vec3, b: &Vec3) -> Ordering {
    a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).then(a.z.total_cmp(&b.z))
}

impl UnorderedPair {
    pub fn new(p: Vec3, q: Vec3) -> Self {
        if lex_cmp(&p, &q) == Ordering::Greater {
            Self { first: q, second: p }
        } else {
            Self { first: p, second: q }
        }
    }

    pub fn from_arrays(p: [f64; 3], q: [f64; 3]) -> Self {
        Self::new(Vec3::from(p), Vec3::from(q))
    }

    pub fn points(&self) -> (Vec3, Vec3) {
        (self.first, self.second)
    }
}

impl PartialEq for UnorderedPair {
    fn eq(&self, other: &Self) -> bool {
        lex_cmp(&self.first, &other.first) == Ordering::Equal
            && lex_cmp(&self.second, &other.second) == Ordering::Equal
    }
}

impl Eq for UnorderedPair {}

impl Hash for UnorderedPair {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for v in [self.first, self.second] {
            for c in v.iter() {
                c.to_bits().hash(state);
            }
        }
    }
}

/// A point of the hemisphere chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPoint {
    pub center: Vec3,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    /// Set when the two positions coincide; the angles are then `(0, 0)` by convention.
    pub coincident: bool,
}

impl CanonicalPoint {
    /// Whether the point satisfies the chart's domain constraints.
    pub fn in_domain(&self) -> bool {
        let angles = (0.0..=PI / 2.0).contains(&self.theta) && (0.0..TAU).contains(&self.phi);
        let seam = self.theta < PI / 2.0 || self.phi < PI;
        self.r >= 0.0 && angles && seam
    }

    /// Relative vector `r (sin t cos p, sin t sin p, cos t)`.
    pub fn relative(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct) * self.r
    }

    /// The two positions `R +- v/2`.
    pub fn reconstruct(&self) -> UnorderedPair {
        let half = self.relative() * 0.5;
        UnorderedPair::new(self.center + half, self.center - half)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CanonicalWire::from(*self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        let w: CanonicalWire =
            serde_json::from_str(text).map_err(|e| crate::Error::Parse(e.to_string()))?;
        Ok(w.into())
    }
}

#[derive(Serialize, Deserialize)]
struct CanonicalWire {
    #[serde(rename = "R")]
    center: [f64; 3],
    r: f64,
    theta: f64,
    phi: f64,
    coincident: bool,
}

impl From<CanonicalPoint> for CanonicalWire {
    fn from(c: CanonicalPoint) -> Self {
        Self { center: c.center.into(), r: c.r, theta: c.theta, phi: c.phi, coincident: c.coincident }
    }
}

impl From<CanonicalWire> for CanonicalPoint {
    fn from(w: CanonicalWire) -> Self {
        Self { center: w.center.into(), r: w.r, theta: w.theta, phi: w.phi, coincident: w.coincident }
    }
}

impl Serialize for CanonicalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CanonicalWire::from(*self).serialize(s)
    }
}

/// Largest double strictly below pi.
const BELOW_PI: f64 = f64::from_bits(PI.to_bits() - 1);

/// Maps an unordered pair to its hemisphere chart point.
///
/// The relative vector is flipped into the upper half space; on the equator the
/// representative with `v_y > 0`, or `v_y = 0, v_x > 0`, is kept. The choice
/// depends only on signs, so `{p, q}` and `{q, p}` give bitwise equal results.
pub fn canonicalize(pair: &UnorderedPair) -> CanonicalPoint {
    let (p, q) = pair.points();
    canonicalize_points(p, q)
}

/// [`canonicalize`] on an ordered pair of positions; symmetric in its arguments.
pub fn canonicalize_points(p: Vec3, q: Vec3) -> CanonicalPoint {
    let center = (p + q) * 0.5;
    let mut v = p - q;
    let r = v.norm();
    if r == 0.0 {
        return CanonicalPoint { center, r: 0.0, theta: 0.0, phi: 0.0, coincident: true };
    }

    let equator = v.z.abs() < EQUATOR_REL_TOL * r;
    let flip = if equator {
        v.y < 0.0 || (v.y == 0.0 && v.x < 0.0)
    } else {
        v.z < 0.0
    };
    if flip {
        v = -v;
    }

    let rho = v.x.hypot(v.y);
    let (theta, phi) = if equator {
        let phi = reduce_phi(v.y.atan2(v.x));
        (PI / 2.0, phi.min(BELOW_PI))
    } else if rho == 0.0 {
        (0.0, 0.0)
    } else {
        (rho.atan2(v.z), reduce_phi(v.y.atan2(v.x)))
    };
    CanonicalPoint { center, r, theta, phi, coincident: false }
}

/// The chart point identified with `(theta, phi)` across the equator: `(theta, phi + pi)`.
pub fn seam_partner(theta: f64, phi: f64) -> (f64, f64) {
    (theta, reduce_phi(phi + PI))
}

/// Distance between unordered pairs: the smaller of the two matchings.
pub fn config_distance(a: &UnorderedPair, b: &UnorderedPair) -> f64 {
    let (pa, qa) = a.points();
    let (pb, qb) = b.points();
    let direct = ((pa - pb).norm_squared() + (qa - qb).norm_squared()).sqrt();
    let crossed = ((pa - qb).norm_squared() + (qa - pb).norm_squared()).sqrt();
    direct.min(crossed)
}
