//! Deterministic SVG pictures of tropical curves and fans.
//!
//! Coordinates are computed exactly and rounded once, to hundredths of a pixel,
//! when written.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::building::LevelStructure;
use crate::fan::Fan;
use crate::geometry::{LatticeVector, Point};
use crate::rational::Rational;
use crate::tropical::TropicalCurve;

const MARGIN: i64 = 40;
const CURVE_COLOR: &str = "#1f4fd8";
const LEVEL_COLOR: &str = "#888888";
const CONE_FILLS: [&str; 2] = ["#e4e4e4", "#c8c8c8"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub window: Rational,
    /// Pixels per unit.
    pub scale: u32,
    pub show_levels: bool,
    pub labels: bool,
}

impl RenderSpec {
    pub fn new(window: Rational, scale: u32) -> Option<Self> {
        (window.is_positive() && scale > 0).then_some(RenderSpec { window, scale, show_levels: true, labels: true })
    }
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { window: Rational::from(8), scale: 60, show_levels: true, labels: true }
    }
}

/// Exact value printed with at most two decimals, ties rounded up.
fn fixed(v: &Rational) -> String {
    let hundredths = (v * 100).round_half_up();
    let neg = hundredths.is_negative();
    let (whole, frac) = hundredths.abs().div_rem(&BigInt::from(100));
    let sign = if neg { "-" } else { "" };
    let frac: u32 = frac.try_into().expect("remainder below 100");
    match frac {
        0 => format!("{sign}{whole}"),
        f if f % 10 == 0 => format!("{sign}{whole}.{}", f / 10),
        f => format!("{sign}{whole}.{f:02}"),
    }
}

/// Maps plane coordinates to SVG pixels over `[lo, hi]²`, y pointing up.
struct Canvas {
    lo: Rational,
    hi: Rational,
    scale: i64,
    body: String,
}

impl Canvas {
    fn new(lo: Rational, hi: Rational, scale: u32) -> Self {
        Canvas { lo, hi, scale: scale as i64, body: String::new() }
    }

    fn size(&self) -> Rational {
        &(&(&self.hi - &self.lo) * self.scale) + &Rational::from(2 * MARGIN)
    }

    fn sx(&self, x: &Rational) -> String {
        fixed(&(&(&(x - &self.lo) * self.scale) + &Rational::from(MARGIN)))
    }

    fn sy(&self, y: &Rational) -> String {
        fixed(&(&(&(&self.hi - y) * self.scale) + &Rational::from(MARGIN)))
    }

    fn line(&mut self, a: &Point, b: &Point, attrs: &str) {
        let _ = writeln!(
            self.body,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {attrs}/>",
            self.sx(&a.x),
            self.sy(&a.y),
            self.sx(&b.x),
            self.sy(&b.y)
        );
    }

    fn raw(&mut self, s: &str) {
        self.body.push_str(s);
    }

    fn finish(self, defs: &str) -> String {
        let size = fixed(&self.size());
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
        );
        out.push_str(defs);
        out.push_str("  <rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn arrow_marker(id: &str, color: &str) -> String {
    format!(
        "    <marker id=\"{id}\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\">\n      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"{color}\"/>\n    </marker>\n"
    )
}

fn axes(c: &mut Canvas) {
    let (lo, hi) = (c.lo.clone(), c.hi.clone());
    let zero = Rational::zero();
    c.raw("  <g id=\"axes\">\n");
    c.line(&Point::new(lo.clone(), zero.clone()), &Point::new(hi.clone(), zero.clone()), "class=\"axis\" stroke=\"#000000\" stroke-width=\"1.5\"");
    c.line(&Point::new(zero.clone(), lo), &Point::new(zero, hi), "class=\"axis\" stroke=\"#000000\" stroke-width=\"1.5\"");
    c.raw("  </g>\n");
}

// where start + t·v leaves [.., window]² (both coordinates), for a ray with v ≥ 0
fn ray_end(start: &Point, v: LatticeVector, window: &Rational) -> Point {
    let mut t: Option<Rational> = None;
    for d in 0..2 {
        let c = v.component(d);
        if c > 0 {
            let s = (window - start.coordinate(d)) / c;
            t = Some(match t {
                Some(old) => old.min(s),
                None => s,
            });
        }
    }
    let t = t.unwrap_or_else(Rational::zero).max(Rational::zero());
    start.offset(&t, v)
}

/// Quadrant picture with dashed level lines, curve edges and rays cut at the window.
pub fn render_tropical(curve: &TropicalCurve, levels: Option<&LevelStructure>, spec: &RenderSpec) -> String {
    let mut c = Canvas::new(Rational::zero(), spec.window.clone(), spec.scale);
    axes(&mut c);
    if let (Some(levels), true) = (levels, spec.show_levels) {
        c.raw("  <g id=\"levels\">\n");
        let zero = Rational::zero();
        for (i, l) in levels.levels().iter().enumerate().filter(|(_, l)| **l <= spec.window) {
            let attrs = |d: &str| {
                format!("id=\"level-{d}-{}\" class=\"level\" stroke=\"{LEVEL_COLOR}\" stroke-width=\"1\" stroke-dasharray=\"4 4\"", i + 1)
            };
            c.line(&Point::new(l.clone(), zero.clone()), &Point::new(l.clone(), spec.window.clone()), &attrs("x"));
            c.line(&Point::new(zero.clone(), l.clone()), &Point::new(spec.window.clone(), l.clone()), &attrs("y"));
        }
        c.raw("  </g>\n");
    }
    c.raw("  <g id=\"curve\">\n");
    let stroke = format!("stroke=\"{CURVE_COLOR}\" stroke-width=\"2.5\" stroke-linecap=\"round\"");
    for (k, s) in curve.segments().iter().enumerate() {
        let a = curve.vertex(s.tail).position();
        let b = curve.vertex(s.head).position();
        c.line(&a, &b, &format!("id=\"segment-{k}\" class=\"curve\" {stroke}"));
    }
    for (k, r) in curve.rays().iter().enumerate() {
        let a = curve.vertex(r.base).position();
        let b = ray_end(&a, r.contact, &spec.window);
        c.line(&a, &b, &format!("id=\"ray-{k}\" class=\"curve\" {stroke} marker-end=\"url(#arrow-curve)\""));
    }
    for v in curve.vertices() {
        let (x, y) = (c.sx(&v.x), c.sy(&v.y));
        let _ = writeln!(c.body, "  <circle id=\"vertex-{}\" cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{CURVE_COLOR}\"/>", v.id);
    }
    c.raw("  </g>\n");
    if spec.labels {
        c.raw("  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\">\n");
        for v in curve.vertices() {
            let (x, y) = (c.sx(&(&v.x + &Rational::new(1, 10))), c.sy(&(&v.y + &Rational::new(1, 10))));
            let _ = writeln!(c.body, "  <text x=\"{x}\" y=\"{y}\">({},{})</text>", v.x, v.y);
        }
        c.raw("  </g>\n");
    }
    c.finish(&format!("  <defs>\n{}  </defs>\n", arrow_marker("arrow-curve", CURVE_COLOR)))
}

/// Fan diagram: shaded cones and black arrows from the origin. The canvas covers
/// `[-w, w]²` when some ray leaves the quadrant, `[0, w]²` otherwise.
pub fn render_fan(fan: &Fan, spec: &RenderSpec) -> String {
    let w = spec.window.clone();
    let full = fan.rays().iter().any(|r| r.x < 0 || r.y < 0);
    let lo = if full { -&w } else { Rational::zero() };
    let mut c = Canvas::new(lo, w.clone(), spec.scale);
    // ray scaled to sup-norm length w
    let tip = |r: &LatticeVector| {
        let m = r.x.abs().max(r.y.abs());
        Point::new(&w * r.x / m, &w * r.y / m)
    };
    c.raw("  <g id=\"cones\">\n");
    for (k, cone) in fan.two_cones().enumerate() {
        let [u, v] = [cone.generators()[0], cone.generators()[1]];
        let (a, b) = (tip(&u), tip(&v));
        let o = Point::origin();
        let _ = writeln!(
            c.body,
            "  <polygon id=\"cone-{k}\" class=\"cone\" points=\"{},{} {},{} {},{}\" fill=\"{}\" stroke=\"none\"/>",
            c.sx(&o.x),
            c.sy(&o.y),
            c.sx(&a.x),
            c.sy(&a.y),
            c.sx(&b.x),
            c.sy(&b.y),
            CONE_FILLS[k % 2]
        );
    }
    c.raw("  </g>\n");
    axes(&mut c);
    c.raw("  <g id=\"rays\">\n");
    for (k, r) in fan.rays().iter().enumerate() {
        c.line(
            &Point::origin(),
            &tip(r),
            &format!("id=\"fan-ray-{k}\" class=\"fan-ray\" stroke=\"#000000\" stroke-width=\"2\" marker-end=\"url(#arrow-fan)\""),
        );
    }
    c.raw("  </g>\n");
    if spec.labels {
        c.raw("  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\">\n");
        for r in fan.rays() {
            let p = tip(r);
            let _ = writeln!(c.body, "  <text x=\"{}\" y=\"{}\">{r}</text>", c.sx(&p.x), c.sy(&p.y));
        }
        c.raw("  </g>\n");
    }
    c.finish(&format!("  <defs>\n{}  </defs>\n", arrow_marker("arrow-fan", "#000000")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::extract_levels;
    use crate::moduli::{exploded_fan, ionel_fan};
    use crate::tropical::{tropicalize_line, LineFamily};

    fn line(p: i64, q: i64) -> TropicalCurve {
        tropicalize_line(&LineFamily::new(p.into(), q.into()).unwrap())
    }

    #[test]
    fn fixed_point_formatting() {
        assert_eq!(fixed(&Rational::from(40)), "40");
        assert_eq!(fixed(&Rational::new(1, 3)), "0.33");
        assert_eq!(fixed(&Rational::new(1, 2)), "0.5");
        assert_eq!(fixed(&Rational::new(-1, 8)), "-0.12");
        assert_eq!(fixed(&Rational::new(1, 200)), "0.01");
    }

    #[test]
    fn example_one_picture() {
        let t = line(4, 3);
        let levels = extract_levels(&t);
        let svg = render_tropical(&t, Some(&levels), &RenderSpec::default());
        assert_eq!(svg.matches("class=\"level\"").count(), 6);
        assert_eq!(svg.matches("stroke-dasharray").count(), 6);
        assert_eq!(svg.matches("class=\"curve\"").count(), 3);
        assert_eq!(svg, render_tropical(&t, Some(&levels), &RenderSpec::default()));
        let bare = render_tropical(&t, None, &RenderSpec::default());
        assert_eq!(bare.matches("class=\"level\"").count(), 0);
    }

    #[test]
    fn ray_truncation() {
        // ray (1,0) from (4,3) ends at x = 8: pixel 40 + 8*60
        let svg = render_tropical(&line(4, 3), None, &RenderSpec::default());
        assert!(svg.contains("x1=\"280\" y1=\"340\" x2=\"520\" y2=\"340\""), "{svg}");
    }

    #[test]
    fn fan_pictures() {
        let spec = RenderSpec::default();
        assert_eq!(render_fan(&exploded_fan(false), &spec).matches("class=\"fan-ray\"").count(), 3);
        assert_eq!(render_fan(&ionel_fan(false), &spec).matches("class=\"fan-ray\"").count(), 7);
        let empty = render_fan(&Fan::empty(), &spec);
        assert_eq!(empty.matches("class=\"fan-ray\"").count(), 0);
        assert_eq!(empty.matches("class=\"axis\"").count(), 2);
        assert_eq!(render_fan(&ionel_fan(true), &spec).matches("class=\"cone\"").count(), 9);
    }
}
