//! Rescaled log images of a line family and their distance to the tropical limit.
//!
//! A point `[z₁:z₂:z₃]` is sent to `(log(m/|z₁|), log(m/|z₂|)) / log n` with
//! `m = max |z_j|`, the log-distance to the two divisors `z₁ = 0` and `z₂ = 0`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::rational::Rational;
use crate::tropical::{LineFamily, TropicalCurve};

pub const MAX_BASE: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmoebaError {
    #[error("point has a zero coordinate")]
    ZeroCoordinate,
    #[error("rescaling base must satisfy 1 < n <= 1e8, got {0}")]
    BaseOutOfRange(f64),
    #[error("sample is empty inside the window")]
    EmptySample,
    #[error("sample count must be positive")]
    NoSamples,
}

fn check_base(n: f64) -> Result<f64, AmoebaError> {
    if n.is_finite() && n > 1.0 && n <= MAX_BASE {
        Ok(n.ln())
    } else {
        Err(AmoebaError::BaseOutOfRange(n))
    }
}

/// Log image from `ln |z_j|`, clipped to the quadrant.
fn log_image_from_logs(logs: [f64; 3], ln_n: f64) -> [f64; 2] {
    let m = logs[0].max(logs[1]).max(logs[2]);
    [((m - logs[0]) / ln_n).max(0.0), ((m - logs[1]) / ln_n).max(0.0)]
}

pub fn log_image(z: [Complex64; 3], n: f64) -> Result<[f64; 2], AmoebaError> {
    let ln_n = check_base(n)?;
    if z.iter().any(|c| c.norm() == 0.0) {
        return Err(AmoebaError::ZeroCoordinate);
    }
    Ok(log_image_from_logs([z[0].norm().ln(), z[1].norm().ln(), z[2].norm().ln()], ln_n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmoebaSample {
    pub n: f64,
    /// Affine domain coordinate `u = w₁/w₂` of each point.
    pub domain: Vec<Complex64>,
    pub points: Vec<[f64; 2]>,
}

impl AmoebaSample {
    /// `re_w,im_w,X,Y` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re_w,im_w,X,Y\n");
        for (w, p) in self.domain.iter().zip(&self.points) {
            let _ = writeln!(out, "{},{},{},{}", w.re, w.im, p[0], p[1]);
        }
        out
    }
}

const GOLDEN_ANGLE: f64 = PI * (3.0 - 2.236_067_977_499_79);

/// Evaluates `f_n(u) = [x_n u, y_n (u+1), 1]` at log-polar golden-angle spirals
/// around the three punctures `u = 0`, `u = -1`, `u = ∞`, with `|u - centre|^{∓1}`
/// running from `1` to `n^{-depth}`. Deterministic.
pub fn sample_amoeba_with_depth(
    family: &LineFamily,
    n: f64,
    count: usize,
    depth: f64,
) -> Result<AmoebaSample, AmoebaError> {
    let ln_n = check_base(n)?;
    if count == 0 {
        return Err(AmoebaError::NoSamples);
    }
    let p = family.p.to_f64();
    let q = family.q.to_f64();
    let ln_c1 = family.c1.norm().ln();
    let ln_c2 = family.c2.norm().ln();
    let mut domain = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    for spiral in 0..3 {
        let m = count / 3 + usize::from(spiral < count % 3);
        for k in 0..m {
            let s = depth * (k as f64 + 0.5) / m as f64;
            let theta = k as f64 * GOLDEN_ANGLE;
            let dir = Complex64::from_polar(1.0, theta);
            let ln_r = s * ln_n;
            // ln |u| and ln |u + 1|, each computed without cancellation
            let (u, ln_u, ln_u1) = match spiral {
                0 => {
                    let u = dir * (-ln_r).exp();
                    (u, -ln_r, (u + 1.0).norm().ln())
                }
                1 => {
                    let v = dir * (-ln_r).exp();
                    (v - 1.0, (v - 1.0).norm().ln(), -ln_r)
                }
                _ => {
                    let inv = dir.conj() * (-ln_r).exp();
                    (dir * ln_r.exp(), ln_r, ln_r + (inv + 1.0).norm().ln())
                }
            };
            if !ln_u.is_finite() || !ln_u1.is_finite() {
                continue;
            }
            let logs = [ln_c1 - p * ln_n + ln_u, ln_c2 - q * ln_n + ln_u1, 0.0];
            domain.push(u);
            points.push(log_image_from_logs(logs, ln_n));
        }
    }
    Ok(AmoebaSample { n, domain, points })
}

/// Spiral depth `p + q + 1`, enough to reach past every vertex.
pub fn sample_amoeba(family: &LineFamily, n: f64, count: usize) -> Result<AmoebaSample, AmoebaError> {
    let depth = family.p.to_f64() + family.q.to_f64() + 1.0;
    sample_amoeba_with_depth(family, n, count, depth)
}

type Edge = ([f64; 2], [f64; 2]);

// curve edges clipped to [0, window]^2, rays cut where they leave it
fn clipped_edges(curve: &TropicalCurve, window: f64) -> Vec<Edge> {
    let pos = |id: usize| {
        let v = curve.vertex(id);
        [v.x.to_f64(), v.y.to_f64()]
    };
    let mut edges = Vec::new();
    for s in curve.segments() {
        let a = pos(s.tail);
        let b = pos(s.head);
        edges.push((a, b));
    }
    for r in curve.rays() {
        let a = pos(r.base);
        let (cx, cy) = (r.contact.x as f64, r.contact.y as f64);
        let mut t = f64::INFINITY;
        if cx > 0.0 {
            t = t.min((window - a[0]) / cx);
        }
        if cy > 0.0 {
            t = t.min((window - a[1]) / cy);
        }
        let t = t.max(0.0);
        edges.push((a, [a[0] + t * cx, a[1] + t * cy]));
    }
    edges
        .into_iter()
        .filter_map(|(a, b)| clip_segment(a, b, window))
        .collect()
}

fn clip_segment(a: [f64; 2], b: [f64; 2], window: f64) -> Option<Edge> {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for d in 0..2 {
        let delta = b[d] - a[d];
        for (bound, sign) in [(0.0, -1.0), (window, 1.0)] {
            // sign * (a + t delta - bound) <= 0
            let num = sign * (bound - a[d]);
            let den = sign * delta;
            if den == 0.0 {
                if num < 0.0 {
                    return None;
                }
            } else if den > 0.0 {
                t1 = t1.min(num / den);
            } else {
                t0 = t0.max(num / den);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    Some((at(t0), at(t1)))
}

fn point_segment_distance(p: [f64; 2], (a, b): Edge) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let c = [a[0] + t * d[0] - p[0], a[1] + t * d[1] - p[1]];
    c[0].hypot(c[1])
}

/// Uniform-grid spatial hash for nearest-neighbour queries.
struct Grid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<[f64; 2]>>,
}

impl Grid {
    fn new(points: &[[f64; 2]], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<[f64; 2]>> = HashMap::new();
        for p in points {
            buckets.entry(Self::key(p, cell)).or_default().push(*p);
        }
        Grid { cell, buckets }
    }

    fn key(p: &[f64; 2], cell: f64) -> (i64, i64) {
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    fn nearest(&self, p: [f64; 2]) -> f64 {
        let (kx, ky) = Self::key(&p, self.cell);
        let mut best = f64::INFINITY;
        let mut ring: i64 = 0;
        loop {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(bucket) = self.buckets.get(&(kx + dx, ky + dy)) {
                        for q in bucket {
                            best = best.min((q[0] - p[0]).hypot(q[1] - p[1]));
                        }
                    }
                }
            }
            // anything outside the searched rings is at least ring * cell away
            if best <= ring as f64 * self.cell {
                return best;
            }
            ring += 1;
            if ring > 1 << 20 {
                return best;
            }
        }
    }
}

/// Symmetric Hausdorff distance inside `[0, window]²` between the sample and the
/// curve, with the curve discretized at spacing `window / 4000`.
pub fn hausdorff(sample: &AmoebaSample, curve: &TropicalCurve, window: f64) -> Result<f64, AmoebaError> {
    let inside: Vec<[f64; 2]> = sample
        .points
        .iter()
        .copied()
        .filter(|p| p[0] <= window && p[1] <= window)
        .collect();
    if inside.is_empty() {
        return Err(AmoebaError::EmptySample);
    }
    let edges = clipped_edges(curve, window);
    let to_curve = inside
        .iter()
        .map(|&p| edges.iter().map(|&e| point_segment_distance(p, e)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let step = window / 4000.0;
    let grid = Grid::new(&inside, window / 64.0);
    let mut to_sample: f64 = 0.0;
    for (a, b) in edges {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let k = (len / step).ceil().max(1.0) as usize;
        for i in 0..=k {
            let t = i as f64 / k as f64;
            let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            to_sample = to_sample.max(grid.nearest(p));
        }
    }
    Ok(to_curve.max(to_sample))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `(n, distance)` in input order.
    pub rows: Vec<(f64, f64)>,
    /// Least-squares `C` in `d ≈ C / ln n`.
    pub constant: f64,
    pub r_squared: f64,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,hausdorff\n");
        for (n, d) in &self.rows {
            let _ = writeln!(out, "{n},{d}");
        }
        out
    }
}

/// Fits `d = C t` with `t = 1 / ln n` through the origin.
pub fn fit_inverse_log(rows: &[(f64, f64)]) -> (f64, f64) {
    let ts: Vec<f64> = rows.iter().map(|(n, _)| 1.0 / n.ln()).collect();
    let ds: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let stt: f64 = ts.iter().map(|t| t * t).sum();
    let std: f64 = ts.iter().zip(&ds).map(|(t, d)| t * d).sum();
    let c = if stt > 0.0 { std / stt } else { 0.0 };
    let mean = ds.iter().sum::<f64>() / ds.len().max(1) as f64;
    let ss_res: f64 = ts.iter().zip(&ds).map(|(t, d)| (d - c * t).powi(2)).sum();
    let ss_tot: f64 = ds.iter().map(|d| (d - mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    (c, r2)
}

/// Hausdorff distance to `tropicalize_line` at each base, in window `p + q + 1`.
pub fn convergence(family: &LineFamily, bases: &[f64], count: usize) -> Result<ConvergenceReport, AmoebaError> {
    let curve = crate::tropical::tropicalize_line(family);
    let window = (&(&family.p + &family.q) + &Rational::one()).to_f64();
    let mut rows = Vec::with_capacity(bases.len());
    for &n in bases {
        let sample = sample_amoeba(family, n, count)?;
        rows.push((n, hausdorff(&sample, &curve, window)?));
    }
    let (constant, r_squared) = fit_inverse_log(&rows);
    Ok(ConvergenceReport { rows, constant, r_squared })
}
