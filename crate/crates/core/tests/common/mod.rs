#![allow(dead_code)]

use std::path::PathBuf;

use troplim::building::LeveledDualGraph;
use troplim::rational::Rational;
use troplim::tropical::{tropicalize_line, LineFamily, TropicalCurve};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn example_one() -> LeveledDualGraph {
    let text = std::fs::read_to_string(fixture_path("example1.json")).expect("fixture present");
    serde_json::from_str(&text).expect("fixture parses")
}

pub fn line(p: &Rational, q: &Rational) -> TropicalCurve {
    tropicalize_line(&LineFamily::new(p.clone(), q.clone()).unwrap())
}

/// Exponent pairs covering the origin, both axes, the diagonal, every ray of the
/// Ionel fan and points inside each of its cones.
pub fn regression_grid() -> Vec<(Rational, Rational)> {
    let values = [r(0, 1), r(1, 3), r(1, 2), r(1, 1), r(4, 3), r(3, 2), r(2, 1), r(5, 2), r(3, 1), r(4, 1), r(7, 1)];
    let mut out = Vec::new();
    for p in &values {
        for q in &values {
            out.push((p.clone(), q.clone()));
        }
    }
    out
}

pub fn temp_dir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temp dir")
}
