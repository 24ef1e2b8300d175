//! Tropical curves in the quadrant `[0,∞)²` and the tropicalization of the
//! degenerating line family `[x_n w₁ : y_n (w₁+w₂) : w₂]`.
//!
//! Convention: min-plus, `X = v(z₁/z₃)`, `Y = v(z₂/z₃)` with `v(n^{-t}) = t`, so
//! moving right is moving deeper towards `D₁` and moving up is moving towards `D₂`.
//! With `x_n ~ n^{-p}` and `y_n ~ n^{-q}` the line is `z₁/x - z₂/y + z₃ = 0`, whose
//! tropicalization is the corner locus of `min(q+X, p+Y, p+q)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::convert::TryFrom;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{LatticeVector, Point};
use crate::rational::{common_denominator, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("valuation exponents must be non-negative, got p={p}, q={q}")]
    NegativeExponent { p: Rational, q: Rational },
    #[error("curve has no vertices")]
    Empty,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(usize),
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} lies outside the quadrant")]
    OutsideQuadrant(usize),
    #[error("edge at vertex {0} has zero contact vector")]
    ZeroContact(usize),
    #[error("segment {tail}->{head} has non-positive length")]
    NonPositiveLength { tail: usize, head: usize },
    #[error("segment {tail}->{head} breaks head - tail = length * contact")]
    SegmentIdentity { tail: usize, head: usize },
    #[error("ray from vertex {base} with contact {contact} leaves the quadrant")]
    RayExitsQuadrant { base: usize, contact: LatticeVector },
    #[error("curve is not connected")]
    Disconnected,
}

/// `x_n = c₁ n^{-p}`, `y_n = c₂ n^{-q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFamily {
    pub p: Rational,
    pub q: Rational,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl LineFamily {
    pub fn new(p: Rational, q: Rational) -> Result<Self, CurveError> {
        Self::with_coefficients(p, q, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn with_coefficients(
        p: Rational,
        q: Rational,
        c1: Complex64,
        c2: Complex64,
    ) -> Result<Self, CurveError> {
        if p.is_negative() || q.is_negative() {
            return Err(CurveError::NegativeExponent { p, q });
        }
        assert!(c1.norm() > 0.0 && c2.norm() > 0.0, "coefficients must be nonzero");
        Ok(LineFamily { p, q, c1, c2 })
    }

    pub fn swapped(&self) -> LineFamily {
        LineFamily {
            p: self.q.clone(),
            q: self.p.clone(),
            c1: self.c2,
            c2: self.c1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub x: Rational,
    pub y: Rational,
}

impl Vertex {
    pub fn position(&self) -> Point {
        Point::new(self.x.clone(), self.y.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub tail: usize,
    pub head: usize,
    pub contact: LatticeVector,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ray {
    pub base: usize,
    pub contact: LatticeVector,
}

#[derive(Deserialize)]
struct RawCurve {
    vertices: Vec<Vertex>,
    segments: Vec<Segment>,
    rays: Vec<Ray>,
}

/// A connected metric graph in the quadrant with integral edge directions.
///
/// Constructed values are validated and stored in canonical form: vertices sorted
/// by position with ids `0..n`, segments oriented so their contact vector is
/// lexicographically positive, segments and rays sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct TropicalCurve {
    vertices: Vec<Vertex>,
    segments: Vec<Segment>,
    rays: Vec<Ray>,
}

impl TryFrom<RawCurve> for TropicalCurve {
    type Error = CurveError;
    fn try_from(raw: RawCurve) -> Result<Self, CurveError> {
        TropicalCurve::new(raw.vertices, raw.segments, raw.rays)
    }
}

fn lex_positive(v: LatticeVector) -> bool {
    v.x > 0 || (v.x == 0 && v.y > 0)
}

impl TropicalCurve {
    pub fn new(
        vertices: Vec<Vertex>,
        segments: Vec<Segment>,
        rays: Vec<Ray>,
    ) -> Result<Self, CurveError> {
        check_structure(&vertices, &segments, &rays)?;
        Ok(canonicalize(vertices, segments, rays))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    /// Sum of outgoing contact vectors at each vertex.
    pub fn validate(&self) -> Result<BalanceReport, CurveError> {
        check_structure(&self.vertices, &self.segments, &self.rays)?;
        let mut sums = vec![LatticeVector::ZERO; self.vertices.len()];
        for s in &self.segments {
            sums[s.tail] = sums[s.tail] + s.contact;
            sums[s.head] = sums[s.head] - s.contact;
        }
        for r in &self.rays {
            sums[r.base] = sums[r.base] + r.contact;
        }
        let vertices = self
            .vertices
            .iter()
            .zip(sums)
            .map(|(v, sum)| VertexBalance {
                id: v.id,
                position: v.position(),
                stratum: Stratum::of(&v.position()),
                sum,
                balanced: sum.is_zero(),
            })
            .collect();
        Ok(BalanceReport { vertices })
    }

    /// Coordinate swap, the mirror `x_n <-> y_n`.
    pub fn reflect(&self) -> TropicalCurve {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex { id: v.id, x: v.y.clone(), y: v.x.clone() })
            .collect();
        let segments = self
            .segments
            .iter()
            .map(|s| Segment { contact: s.contact.swapped(), ..s.clone() })
            .collect();
        let rays = self
            .rays
            .iter()
            .map(|r| Ray { base: r.base, contact: r.contact.swapped() })
            .collect();
        canonicalize(vertices, segments, rays)
    }

    /// Points spaced at most `step` apart along every edge, rays cut at `window`
    /// in both coordinates. Vertices included.
    pub fn sample_points(&self, step: &Rational, window: &Rational) -> Vec<Point> {
        let mut out: Vec<Point> = self.vertices.iter().map(Vertex::position).collect();
        let mut walk = |start: Point, contact: LatticeVector, length: Rational| {
            let norm = contact.x.abs().max(contact.y.abs());
            let dt = step / norm;
            let mut t = dt.clone();
            while t < length {
                out.push(start.offset(&t, contact));
                t = &t + &dt;
            }
        };
        for s in &self.segments {
            walk(self.vertices[s.tail].position(), s.contact, s.length.clone());
        }
        for r in &self.rays {
            let base = self.vertices[r.base].position();
            // parameter at which the ray leaves [0, window]^2
            let mut reach = Rational::zero();
            for d in 0..2 {
                let c = r.contact.component(d);
                if c > 0 {
                    let t = (window - base.coordinate(d)) / c;
                    reach = reach.max(t);
                }
            }
            walk(base, r.contact, reach);
        }
        out
    }

    /// Sup-norm distance from `p` to the curve.
    pub fn sup_distance(&self, p: &Point) -> Rational {
        let mut best: Option<Rational> = None;
        let mut consider = |d: Rational| {
            best = Some(match best.take() {
                Some(b) => b.min(d),
                None => d,
            });
        };
        for v in &self.vertices {
            consider(p.sup_distance(&v.position()));
        }
        for s in &self.segments {
            let start = self.vertices[s.tail].position();
            consider(sup_to_edge(p, &start, s.contact, Some(&s.length)));
        }
        for r in &self.rays {
            let start = self.vertices[r.base].position();
            consider(sup_to_edge(p, &start, r.contact, None));
        }
        best.expect("curve has vertices")
    }
}

// min over t in [0, len] of |p - start - t c|_inf; piecewise linear and convex in t,
// so checking breakpoints suffices.
fn sup_to_edge(p: &Point, start: &Point, c: LatticeVector, len: Option<&Rational>) -> Rational {
    let dx = &p.x - &start.x;
    let dy = &p.y - &start.y;
    let mut candidates = vec![Rational::zero()];
    if let Some(l) = len {
        candidates.push(l.clone());
    }
    if c.x != 0 {
        candidates.push(&dx / c.x);
    }
    if c.y != 0 {
        candidates.push(&dy / c.y);
    }
    // dx - t cx = ±(dy - t cy)
    if c.x != c.y {
        candidates.push((&dx - &dy) / (c.x - c.y));
    }
    if c.x != -c.y {
        candidates.push((&dx + &dy) / (c.x + c.y));
    }
    candidates
        .into_iter()
        .filter(|t| !t.is_negative() && len.is_none_or(|l| t <= l))
        .map(|t| p.sup_distance(&start.offset(&t, c)))
        .min()
        .expect("t = 0 is always a candidate")
}

fn check_structure(vertices: &[Vertex], segments: &[Segment], rays: &[Ray]) -> Result<(), CurveError> {
    if vertices.is_empty() {
        return Err(CurveError::Empty);
    }
    let mut index = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if index.insert(v.id, i).is_some() {
            return Err(CurveError::DuplicateVertex(v.id));
        }
        if v.x.is_negative() || v.y.is_negative() {
            return Err(CurveError::OutsideQuadrant(v.id));
        }
    }
    let lookup = |id: usize| index.get(&id).copied().ok_or(CurveError::UnknownVertex(id));
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for s in segments {
        let (t, h) = (lookup(s.tail)?, lookup(s.head)?);
        if s.contact.is_zero() {
            return Err(CurveError::ZeroContact(s.tail));
        }
        if !s.length.is_positive() {
            return Err(CurveError::NonPositiveLength { tail: s.tail, head: s.head });
        }
        let expected = vertices[t].position().offset(&s.length, s.contact);
        if expected != vertices[h].position() {
            return Err(CurveError::SegmentIdentity { tail: s.tail, head: s.head });
        }
        adjacency[t].push(h);
        adjacency[h].push(t);
    }
    for r in rays {
        lookup(r.base)?;
        if r.contact.is_zero() {
            return Err(CurveError::ZeroContact(r.base));
        }
        if r.contact.x < 0 || r.contact.y < 0 {
            return Err(CurveError::RayExitsQuadrant { base: r.base, contact: r.contact });
        }
    }
    let mut seen = vec![false; vertices.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(CurveError::Disconnected);
    }
    Ok(())
}

fn canonicalize(vertices: Vec<Vertex>, segments: Vec<Segment>, rays: Vec<Ray>) -> TropicalCurve {
    let mut order: Vec<&Vertex> = vertices.iter().collect();
    order.sort_by(|a, b| (&a.x, &a.y, a.id).cmp(&(&b.x, &b.y, b.id)));
    let remap: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
    let new_vertices = order
        .iter()
        .enumerate()
        .map(|(i, v)| Vertex { id: i, x: v.x.clone(), y: v.y.clone() })
        .collect();
    let mut new_segments: Vec<Segment> = segments
        .into_iter()
        .map(|s| {
            let (t, h) = (remap[&s.tail], remap[&s.head]);
            if lex_positive(s.contact) {
                Segment { tail: t, head: h, contact: s.contact, length: s.length }
            } else {
                Segment { tail: h, head: t, contact: -s.contact, length: s.length }
            }
        })
        .collect();
    new_segments.sort();
    let mut new_rays: Vec<Ray> = rays
        .into_iter()
        .map(|r| Ray { base: remap[&r.base], contact: r.contact })
        .collect();
    new_rays.sort();
    TropicalCurve { vertices: new_vertices, segments: new_segments, rays: new_rays }
}

/// Where a vertex sits in the quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    Interior,
    /// `y = 0`, `x > 0`.
    XAxis,
    /// `x = 0`, `y > 0`.
    YAxis,
    Origin,
}

impl Stratum {
    pub fn of(p: &Point) -> Stratum {
        match (p.x.is_zero(), p.y.is_zero()) {
            (false, false) => Stratum::Interior,
            (false, true) => Stratum::XAxis,
            (true, false) => Stratum::YAxis,
            (true, true) => Stratum::Origin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexBalance {
    pub id: usize,
    pub position: Point,
    pub stratum: Stratum,
    pub sum: LatticeVector,
    pub balanced: bool,
}

/// Contact-vector sums per vertex. Unbalanced vertices are flagged, not rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub vertices: Vec<VertexBalance>,
}

impl BalanceReport {
    pub fn unbalanced(&self) -> impl Iterator<Item = &VertexBalance> {
        self.vertices.iter().filter(|v| !v.balanced)
    }
}

/// Corner locus of `min(q+X, p+Y, p+q)` intersected with the quadrant.
pub fn tropicalize_line(family: &LineFamily) -> TropicalCurve {
    let (p, q) = (&family.p, &family.q);
    let zero = Rational::zero();
    let v = |id, x: &Rational, y: &Rational| Vertex { id, x: x.clone(), y: y.clone() };
    let e1 = LatticeVector::E1;
    let e2 = LatticeVector::E2;
    let diag = LatticeVector::new(1, 1);
    let legs = |base| vec![Ray { base, contact: e1 }, Ray { base, contact: e2 }];

    let (vertices, segments, rays) = if p.is_zero() || q.is_zero() {
        // the diagonal leg leaves the quadrant at the vertex itself
        (vec![v(0, p, q)], vec![], legs(0))
    } else if p == q {
        let seg = Segment { tail: 0, head: 1, contact: diag, length: p.clone() };
        (vec![v(0, &zero, &zero), v(1, p, q)], vec![seg], legs(1))
    } else if p > q {
        let seg = Segment { tail: 0, head: 1, contact: diag, length: q.clone() };
        (vec![v(0, &(p - q), &zero), v(1, p, q)], vec![seg], legs(1))
    } else {
        let seg = Segment { tail: 0, head: 1, contact: diag, length: p.clone() };
        (vec![v(0, &zero, &(q - p)), v(1, p, q)], vec![seg], legs(1))
    };
    TropicalCurve::new(vertices, segments, rays).expect("tropical line is a valid curve")
}

/// Brute-force check: every grid point `(iΔ, jΔ)` of `[0, window]²`
/// at which the two smallest of `q+X`, `p+Y`, `p+q` differ by at most `tol`.
pub fn corner_locus_oracle(
    family: &LineFamily,
    window: &Rational,
    step: &Rational,
    tol: &Rational,
) -> BTreeSet<Point> {
    assert!(window.is_positive() && step.is_positive() && !tol.is_negative());
    let scale = common_denominator([&family.p, &family.q, window, step, tol]);
    let as_int = |r: &Rational| -> BigInt { (r * &Rational::from(scale.clone())).numer().clone() };
    let (p, q, w, s, t) = (
        as_int(&family.p),
        as_int(&family.q),
        as_int(window),
        as_int(step),
        as_int(tol),
    );
    let count = (&w / &s).to_u64().expect("grid size fits in u64");
    let small = [&p, &q, &w, &s, &t].iter().all(|v| v.to_i64().is_some());
    let mut hits: Vec<(u64, u64)> = Vec::new();
    if small {
        let [p, q, s, t] = [&p, &q, &s, &t].map(|v| v.to_i128().unwrap());
        for i in 0..=count {
            for j in 0..=count {
                let mut terms = [q + i as i128 * s, p + j as i128 * s, p + q];
                terms.sort_unstable();
                if terms[1] - terms[0] <= t {
                    hits.push((i, j));
                }
            }
        }
    } else {
        for i in 0..=count {
            for j in 0..=count {
                let mut terms = [&q + &s * i, &p + &s * j, &p + &q];
                terms.sort();
                if &terms[1] - &terms[0] <= t {
                    hits.push((i, j));
                }
            }
        }
    }
    hits.into_iter()
        .map(|(i, j)| Point::new(step * i as i64, step * j as i64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn family(p: i64, q: i64) -> LineFamily {
        LineFamily::new(p.into(), q.into()).unwrap()
    }

    #[test]
    fn example_one_curve() {
        let c = tropicalize_line(&family(4, 3));
        let pos: Vec<_> = c.vertices().iter().map(|v| v.position()).collect();
        assert_eq!(pos, vec![Point::new(1, 0), Point::new(4, 3)]);
        assert_eq!(
            c.segments(),
            &[Segment { tail: 0, head: 1, contact: LatticeVector::new(1, 1), length: 3.into() }]
        );
        assert_eq!(
            c.rays(),
            &[
                Ray { base: 1, contact: LatticeVector::new(0, 1) },
                Ray { base: 1, contact: LatticeVector::new(1, 0) },
            ]
        );
    }

    #[test]
    fn case_table() {
        let origin = tropicalize_line(&family(0, 0));
        assert_eq!(origin.vertices().len(), 1);
        assert!(origin.vertices()[0].position().is_origin());
        assert_eq!(origin.rays().len(), 2);

        let diag = tropicalize_line(&family(2, 2));
        assert_eq!(diag.vertices()[0].position(), Point::origin());
        assert_eq!(diag.vertices()[1].position(), Point::new(2, 2));
        assert_eq!(diag.segments()[0].length, Rational::from(2));

        let axis = tropicalize_line(&family(5, 0));
        assert_eq!(axis.vertices().len(), 1);
        assert_eq!(axis.vertices()[0].position(), Point::new(5, 0));

        let mirror = tropicalize_line(&family(0, 5));
        assert_eq!(mirror.vertices()[0].position(), Point::new(0, 5));

        let below = tropicalize_line(&family(1, 3));
        assert_eq!(below.vertices()[0].position(), Point::new(0, 2));
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(matches!(
            LineFamily::new((-1).into(), 0.into()),
            Err(CurveError::NegativeExponent { .. })
        ));
    }

    #[test]
    fn oracle_example_points() {
        let hits = corner_locus_oracle(&family(4, 3), &8.into(), &r(1, 4), &Rational::zero());
        for (x, y) in [(1, 0), (4, 3), (4, 4), (6, 3)] {
            assert!(hits.contains(&Point::new(x, y)), "missing ({x},{y})");
        }
        for k in 0..=12 {
            let x = Rational::from(1) + r(k, 4);
            let y = r(k, 4);
            assert!(hits.contains(&Point::new(x, y)));
        }
        assert!(!hits.contains(&Point::new(2, 2)));
    }

    #[test]
    fn oracle_origin_is_two_axes() {
        let hits = corner_locus_oracle(&family(0, 0), &4.into(), &r(1, 2), &Rational::zero());
        assert!(hits.iter().all(|p| p.x.is_zero() || p.y.is_zero()));
        assert_eq!(hits.len(), 2 * 9 - 1);
    }

    #[test]
    fn oracle_degenerate_tolerance() {
        let hits = corner_locus_oracle(&family(4, 3), &2.into(), &r(1, 2), &100.into());
        assert_eq!(hits.len(), 25);
    }

    #[test]
    fn balance_report() {
        let report = tropicalize_line(&family(4, 3)).validate().unwrap();
        let mono = &report.vertices[0];
        assert_eq!(mono.stratum, Stratum::XAxis);
        assert_eq!(mono.sum, LatticeVector::new(1, 1));
        assert!(!mono.balanced);
        let tri = &report.vertices[1];
        assert_eq!(tri.stratum, Stratum::Interior);
        assert!(tri.balanced);
    }

    #[test]
    fn bivalent_opposite_is_balanced() {
        let c = TropicalCurve::new(
            vec![
                Vertex { id: 0, x: 1.into(), y: 1.into() },
                Vertex { id: 1, x: 2.into(), y: 2.into() },
            ],
            vec![Segment { tail: 0, head: 1, contact: LatticeVector::new(1, 1), length: 1.into() }],
            vec![Ray { base: 1, contact: LatticeVector::new(1, 1) }],
        )
        .unwrap();
        let report = c.validate().unwrap();
        assert!(report.vertices[1].balanced);
    }

    #[test]
    fn structural_errors() {
        let v = |id, x: i64, y: i64| Vertex { id, x: x.into(), y: y.into() };
        let broken = TropicalCurve::new(
            vec![v(0, 1, 0), v(1, 4, 4)],
            vec![Segment { tail: 0, head: 1, contact: LatticeVector::new(1, 1), length: 3.into() }],
            vec![],
        );
        assert_eq!(broken, Err(CurveError::SegmentIdentity { tail: 0, head: 1 }));
        let exits = TropicalCurve::new(
            vec![v(0, 1, 0)],
            vec![],
            vec![Ray { base: 0, contact: LatticeVector::new(-1, 0) }],
        );
        assert!(matches!(exits, Err(CurveError::RayExitsQuadrant { .. })));
        let disconnected = TropicalCurve::new(vec![v(0, 1, 0), v(1, 2, 2)], vec![], vec![]);
        assert_eq!(disconnected, Err(CurveError::Disconnected));
    }

    #[test]
    fn json_schema() {
        let c = tropicalize_line(&family(4, 3));
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["vertices"][0]["x"], "1/1");
        assert_eq!(json["segments"][0]["contact"], serde_json::json!([1, 1]));
        assert_eq!(json["segments"][0]["length"], "3/1");
        assert_eq!(json["rays"][1]["contact"], serde_json::json!([1, 0]));
        let back: TropicalCurve = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
        let bad = serde_json::json!({
            "vertices": [{"id": 0, "x": "1/1", "y": "0/1"}],
            "segments": [],
            "rays": [{"base": 0, "contact": [0, 0]}]
        });
        assert!(serde_json::from_value::<TropicalCurve>(bad).is_err());
    }

    #[test]
    fn reflection_cases() {
        let c = tropicalize_line(&family(4, 3));
        assert_eq!(c.reflect(), tropicalize_line(&family(3, 4)));
        assert_eq!(c.reflect().reflect(), c);
        let d = tropicalize_line(&family(2, 2));
        assert_eq!(d.reflect(), d);
    }

    #[test]
    fn sup_distance_to_curve() {
        let c = tropicalize_line(&family(4, 3));
        assert_eq!(c.sup_distance(&Point::new(2, 1)), Rational::zero());
        assert_eq!(c.sup_distance(&Point::new(0, 0)), Rational::from(1));
        assert_eq!(c.sup_distance(&Point::new(9, 4)), Rational::from(1));
        assert_eq!(c.sup_distance(&Point::new(3, 1)), r(1, 2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (0i64..24, 1i64..5).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn structural_invariants(p in small_rational(), q in small_rational()) {
            let f = LineFamily::new(p.clone(), q.clone()).unwrap();
            let c = tropicalize_line(&f);
            let report = c.validate().unwrap();
            for v in &report.vertices {
                if v.stratum == Stratum::Interior {
                    prop_assert!(v.balanced);
                }
            }
            prop_assert_eq!(c.reflect(), tropicalize_line(&f.swapped()));
            let expected_vertices = if p.is_zero() || q.is_zero() { 1 } else { 2 };
            prop_assert_eq!(c.vertices().len(), expected_vertices);
        }
    }
}
