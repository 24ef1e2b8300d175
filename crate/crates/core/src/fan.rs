//! Rational polyhedral fans in the plane.
//!
//! A [`Fan`] keeps its rays sorted counterclockwise from the positive x-axis and
//! its cones in a canonical order (zero cone, ray cones, two-dimensional cones by
//! position of their first generator), so structural equality is fan equality.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{LatticeVector, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("point {0} lies outside the support of the fan")]
    PointOutsideSupport(Point),
    #[error("ray {0} is not in the interior of the target cone")]
    RayNotInterior(LatticeVector),
    #[error("vector {0} is not primitive")]
    NotPrimitive(LatticeVector),
    #[error("cone {0} is not a two-dimensional cone of the fan")]
    TargetNotInFan(Cone),
    #[error("structurally invalid fan: {0}")]
    StructuralInvalid(String),
    #[error("fan text line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A strongly convex cone with 0, 1, or 2 primitive generators.
/// Two generators are stored counterclockwise (`det > 0`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct Cone {
    generators: Vec<LatticeVector>,
}

impl Cone {
    pub fn zero() -> Self {
        Cone { generators: Vec::new() }
    }

    pub fn ray(v: LatticeVector) -> Result<Self, FanError> {
        if !v.is_primitive() {
            return Err(FanError::NotPrimitive(v));
        }
        Ok(Cone { generators: vec![v] })
    }

    /// Two-dimensional cone spanned by `u` and `v`, in either order.
    pub fn span(u: LatticeVector, v: LatticeVector) -> Result<Self, FanError> {
        for w in [u, v] {
            if !w.is_primitive() {
                return Err(FanError::NotPrimitive(w));
            }
        }
        match u.det(&v) {
            d if d > 0 => Ok(Cone { generators: vec![u, v] }),
            d if d < 0 => Ok(Cone { generators: vec![v, u] }),
            _ => Err(FanError::StructuralInvalid(format!(
                "generators {u} and {v} are linearly dependent"
            ))),
        }
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Relative-interior membership.
    pub fn contains_in_relative_interior(&self, p: &Point) -> bool {
        match self.generators.as_slice() {
            [] => p.is_origin(),
            [r] => p.side_of(*r) == 0 && p.dot_sign(*r) > 0,
            [u, v] => p.side_of(*u) > 0 && p.side_of(*v) < 0,
            _ => unreachable!(),
        }
    }

    /// Closed-cone membership.
    pub fn contains(&self, p: &Point) -> bool {
        match self.generators.as_slice() {
            [] => p.is_origin(),
            [r] => p.side_of(*r) == 0 && p.dot_sign(*r) >= 0,
            [u, v] => p.side_of(*u) >= 0 && p.side_of(*v) <= 0,
            _ => unreachable!(),
        }
    }

    /// Strict interior membership for a lattice vector (two-dimensional cones only).
    pub fn has_in_interior(&self, w: LatticeVector) -> bool {
        match self.generators.as_slice() {
            [u, v] => u.det(&w) > 0 && w.det(v) > 0,
            _ => false,
        }
    }

    pub fn determinant(&self) -> Option<i64> {
        match self.generators.as_slice() {
            [u, v] => Some(u.det(v)),
            _ => None,
        }
    }

    pub fn swapped(&self) -> Cone {
        match self.generators.as_slice() {
            [] => Cone::zero(),
            [r] => Cone { generators: vec![r.swapped()] },
            [u, v] => Cone { generators: vec![v.swapped(), u.swapped()] },
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generators.as_slice() {
            [] => write!(f, "{{0}}"),
            [r] => write!(f, "({r})"),
            [u, v] => write!(f, "({u},{v})"),
            _ => unreachable!(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FanReport {
    pub smooth: bool,
    pub complete: bool,
}

/// A rank-two fan: sorted primitive rays and the cones built on them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fan {
    rays: Vec<LatticeVector>,
    cones: Vec<Cone>,
}

impl Fan {
    /// Builds a fan from its rays and its two-dimensional cones (as generator pairs).
    /// The zero cone and every ray cone are added automatically.
    pub fn new(
        mut rays: Vec<LatticeVector>,
        two_cones: &[(LatticeVector, LatticeVector)],
    ) -> Result<Self, FanError> {
        rays.sort_by(|a, b| a.angle_cmp(b));
        for r in &rays {
            if !r.is_primitive() {
                return Err(FanError::NotPrimitive(*r));
            }
        }
        if rays.windows(2).any(|w| w[0] == w[1]) {
            return Err(FanError::StructuralInvalid("duplicate ray".into()));
        }
        let mut maximal = Vec::with_capacity(two_cones.len());
        for &(u, v) in two_cones {
            let cone = Cone::span(u, v)?;
            maximal.push(cone);
        }
        maximal.sort_by(|a, b| {
            let ia = ray_index(&rays, a.generators[0]);
            let ib = ray_index(&rays, b.generators[0]);
            ia.cmp(&ib)
        });
        let mut cones = Vec::with_capacity(1 + rays.len() + maximal.len());
        cones.push(Cone::zero());
        cones.extend(rays.iter().map(|r| Cone { generators: vec![*r] }));
        cones.extend(maximal);
        let fan = Fan { rays, cones };
        fan.check_structure()?;
        Ok(fan)
    }

    pub fn empty() -> Self {
        Fan {
            rays: Vec::new(),
            cones: vec![Cone::zero()],
        }
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// All cones, including the zero cone and the rays.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn two_cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(|c| c.dim() == 2)
    }

    pub fn has_ray(&self, r: LatticeVector) -> bool {
        self.rays.contains(&r)
    }

    pub fn has_cone(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }

    fn check_structure(&self) -> Result<(), FanError> {
        let two: Vec<&Cone> = self.two_cones().collect();
        for (i, c) in two.iter().enumerate() {
            for g in c.generators() {
                if !self.rays.contains(g) {
                    return Err(FanError::StructuralInvalid(format!(
                        "cone {c} uses {g}, which is not a ray of the fan"
                    )));
                }
            }
            if let Some(r) = self.rays.iter().find(|r| c.has_in_interior(**r)) {
                return Err(FanError::StructuralInvalid(format!(
                    "ray {r} lies inside cone {c}; cones overlap improperly"
                )));
            }
            if two[..i].contains(c) {
                return Err(FanError::StructuralInvalid(format!("duplicate cone {c}")));
            }
        }
        Ok(())
    }

    /// Smallest cone whose relative interior contains `p`.
    pub fn locate(&self, p: &Point) -> Result<&Cone, FanError> {
        if p.is_origin() {
            return Ok(&self.cones[0]);
        }
        for dim in 1..=2 {
            if let Some(c) = self
                .cones
                .iter()
                .filter(|c| c.dim() == dim)
                .find(|c| c.contains_in_relative_interior(p))
            {
                return Ok(c);
            }
        }
        Err(FanError::PointOutsideSupport(p.clone()))
    }

    pub fn in_support(&self, p: &Point) -> bool {
        self.locate(p).is_ok()
    }

    /// Replaces `target` by the two cones it splits into along `ray`.
    pub fn stellar_subdivide(&self, target: &Cone, ray: LatticeVector) -> Result<Fan, FanError> {
        if target.dim() != 2 || !self.has_cone(target) {
            return Err(FanError::TargetNotInFan(target.clone()));
        }
        if !ray.is_primitive() {
            return Err(FanError::NotPrimitive(ray));
        }
        if !target.has_in_interior(ray) {
            return Err(FanError::RayNotInterior(ray));
        }
        let [u, v] = [target.generators[0], target.generators[1]];
        let mut pairs: Vec<(LatticeVector, LatticeVector)> = self
            .two_cones()
            .filter(|c| *c != target)
            .map(|c| (c.generators[0], c.generators[1]))
            .collect();
        pairs.push((u, ray));
        pairs.push((ray, v));
        let mut rays = self.rays.clone();
        rays.push(ray);
        Fan::new(rays, &pairs)
    }

    /// Smoothness and completeness of the fan.
    pub fn validate(&self) -> Result<FanReport, FanError> {
        self.check_structure()?;
        let smooth = self
            .two_cones()
            .all(|c| c.determinant().map(|d| d.abs() == 1).unwrap_or(true));
        let k = self.rays.len();
        let complete = k >= 3
            && (0..k).all(|i| {
                let u = self.rays[i];
                let v = self.rays[(i + 1) % k];
                Cone::span(u, v).map(|c| self.has_cone(&c)).unwrap_or(false)
            });
        Ok(FanReport { smooth, complete })
    }

    /// Adds every ray of `extra` not already present together with the given cones.
    pub fn extended(
        &self,
        extra_rays: &[LatticeVector],
        extra_cones: &[(LatticeVector, LatticeVector)],
    ) -> Result<Fan, FanError> {
        let mut rays = self.rays.clone();
        rays.extend(extra_rays.iter().filter(|r| !self.rays.contains(r)));
        let mut pairs: Vec<_> = self
            .two_cones()
            .map(|c| (c.generators[0], c.generators[1]))
            .collect();
        pairs.extend_from_slice(extra_cones);
        Fan::new(rays, &pairs)
    }

    /// Coordinate swap `(x,y) -> (y,x)`.
    pub fn swapped(&self) -> Fan {
        let rays: Vec<_> = self.rays.iter().map(|r| r.swapped()).collect();
        let pairs: Vec<_> = self
            .two_cones()
            .map(|c| (c.generators[0].swapped(), c.generators[1].swapped()))
            .collect();
        Fan::new(rays, &pairs).expect("reflection of a valid fan is valid")
    }

    /// Text serialization: `ray a b` lines in counterclockwise order followed by
    /// `cone a1 b1 a2 b2` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rays {
            out.push_str(&format!("ray {} {}\n", r.x, r.y));
        }
        for c in self.two_cones() {
            let [u, v] = [c.generators[0], c.generators[1]];
            out.push_str(&format!("cone {} {} {} {}\n", u.x, u.y, v.x, v.y));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Fan, FanError> {
        let mut rays = Vec::new();
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| FanError::Parse { line: idx + 1, message };
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let nums: Vec<i64> = words
                .map(|w| w.parse::<i64>().map_err(|_| err(format!("bad integer `{w}`"))))
                .collect::<Result<_, _>>()?;
            match (keyword, nums.as_slice()) {
                ("ray", &[a, b]) => rays.push(LatticeVector::new(a, b)),
                ("cone", &[a1, b1, a2, b2]) => {
                    pairs.push((LatticeVector::new(a1, b1), LatticeVector::new(a2, b2)))
                }
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            }
        }
        Fan::new(rays, &pairs)
    }
}

fn ray_index(rays: &[LatticeVector], v: LatticeVector) -> usize {
    rays.iter().position(|r| *r == v).unwrap_or(usize::MAX)
}
