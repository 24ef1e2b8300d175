mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use troplim::amoeba::convergence;
use troplim::building::{build_building, build_building_with_levels, extract_levels, LevelCoordinate, Multilevel};
use troplim::cli::run;
use troplim::fan::Fan;
use troplim::geometry::Point;
use troplim::matching::{
    build_system, check_stability, realize, solution_from_building, solve, torus_weights,
    torus_weights_with_basis, PieceWeights, StabilityRule,
};
use troplim::moduli::{
    blowup_sequence, classify, classify_by_conditions, exploded_fan, ionel_fan, type_table, LimitKind,
};
use troplim::rational::Rational;
use troplim::tropical::{corner_locus_oracle, LineFamily};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Check {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

fn acc1() -> Check {
    let start = Instant::now();
    let g = example_one();
    ensure(g.pieces().len() == 5 && g.nodes().len() == 4 && g.num_levels() == 3, || "fixture shape".into())?;
    let sys = build_system(&g).map_err(|e| e.to_string())?;
    let names: Vec<String> = sys.variables.iter().map(ToString::to_string).collect();
    ensure(names == ["α(n1)", "α(n2)", "α(n3)", "α(n4)", "α_1", "α_2", "α_3"], || format!("variables {names:?}"))?;
    ensure(sys.rank() == sys.equations.len(), || "generating set is not minimal".into())?;
    // columns: α(1) α(2) α(3) α(4) α_1 α_2 α_3
    let listed: [[i64; 7]; 7] = [
        [1, 1, 0, 0, 0, -1, 0],
        [1, 1, 1, 0, 0, -1, -1],
        [0, 0, 1, 0, 0, 0, -1],
        [1, 0, 0, 0, -1, 0, 0],
        [1, 1, 1, 0, -1, -1, 0],
        [0, 1, 1, 0, 0, -1, 0],
        [0, 0, 0, 1, 0, 0, -1],
    ];
    for row in &listed {
        ensure(sys.in_row_span(row), || format!("{row:?} not in the row span"))?;
    }
    let cone = solve(&sys);
    ensure(cone.dimension == 2 && cone.kernel_basis.len() == 2, || format!("dimension {}", cone.dimension))?;
    for v in &cone.kernel_basis {
        let same = [&v[2], &v[3], &v[4], &v[6]].iter().all(|x| **x == v[0]);
        ensure(same && v[5] == &v[0] + &v[1], || format!("basis vector {v:?} breaks the relations"))?;
    }
    for (a, b) in [(-1, -1), (-2, -5), (-7, -3)] {
        let x = ints(&[a, b, a, a, a, a + b, a]);
        ensure(sys.is_satisfied_by(&x), || format!("family point ({a},{b}) not a solution"))?;
    }
    ensure(cone.witness.as_ref().is_some_and(|w| w.iter().all(Rational::is_negative)), || "no witness".into())?;
    within(start, Duration::from_secs(1))
}

fn acc2() -> Check {
    let levels = extract_levels(&line(&r(4, 1), &r(3, 1)));
    ensure(levels.levels() == ints(&[1, 3, 4]).as_slice(), || format!("levels {:?}", levels.levels()))?;
    for (a, v) in [(0, 0), (1, 1), (2, 3), (3, 4)] {
        ensure(levels.phi(a) == Rational::from(v), || format!("φ({a}) = {}", levels.phi(a)))?;
    }
    Ok(())
}

fn acc3() -> Check {
    let b = build_building(&line(&r(4, 1), &r(3, 1))).map_err(|e| e.to_string())?;
    let mut nontrivial = BTreeSet::new();
    let mut trivial = BTreeSet::new();
    for p in b.graph.pieces() {
        let set = if p.trivial { &mut trivial } else { &mut nontrivial };
        set.insert(p.levels);
    }
    use LevelCoordinate::{At, Between};
    let want_nontrivial = BTreeSet::from([Multilevel::at(3, 2), Multilevel::at(1, 0)]);
    let want_trivial = BTreeSet::from([
        Multilevel::at(3, 3),
        Multilevel([Between(1, 2), At(1)]),
        Multilevel([At(2), Between(1, 2)]),
    ]);
    ensure(nontrivial == want_nontrivial, || format!("nontrivial {nontrivial:?}"))?;
    ensure(trivial == want_trivial, || format!("trivial {trivial:?}"))
}

fn acc4() -> Check {
    let g = example_one();
    let v = check_stability(&g, StabilityRule::Union);
    ensure(v.stable, || "example 1 should be stable".into())?;
    let curve = line(&r(4, 1), &r(3, 1));
    let refined = extract_levels(&curve).refined(&[Rational::from(2)]).ok_or("refine")?;
    let b = build_building_with_levels(&curve, &refined).map_err(|e| e.to_string())?;
    ensure(b.graph.num_levels() == 4, || "refined building has the wrong number of levels".into())?;
    let v = check_stability(&b.graph, StabilityRule::Union);
    ensure(!v.stable, || "extra level 2 should be unstable".into())
}

fn lattice(rows: [Vec<i64>; 2]) -> Vec<[i64; 2]> {
    PieceWeights { piece: String::new(), rows }.column_lattice()
}

fn acc5() -> Check {
    let g = build_building(&line(&r(3, 1), &r(2, 1))).map_err(|e| e.to_string())?.graph;
    let cone = solve(&build_system(&g).map_err(|e| e.to_string())?);
    let table = torus_weights(&g, &cone).map_err(|e| e.to_string())?;
    let mut got: BTreeMap<String, [i64; 2]> = BTreeMap::new();
    for p in &table.pieces {
        ensure(p.rows[0].len() == 1, || "ray building should have a one dimensional cone".into())?;
        got.insert(p.piece.clone(), [p.rows[0][0], p.rows[1][0]]);
    }
    let vectors: BTreeSet<[i64; 2]> = got.values().copied().collect();
    let want = BTreeSet::from([[3, 2], [1, 0], [3, 3], [2, 1]]);
    ensure(vectors == want, || format!("(3,2) weights {got:?}"))?;

    let g = example_one();
    let cone = solve(&build_system(&g).map_err(|e| e.to_string())?);
    let table = torus_weights(&g, &cone).map_err(|e| e.to_string())?;
    let weight = |id: &str| table.pieces.iter().find(|p| p.piece == id).cloned().ok_or(format!("missing {id}"));
    // pieces (1), (2), (3) of the example are c4, c1, c5
    let ranks: Vec<usize> = ["c4", "c1", "c5", "c2", "c3"]
        .iter()
        .map(|id| weight(id).map(|w| w.rank()))
        .collect::<Result<_, _>>()?;
    ensure(ranks[..3] == [2, 1, 1], || format!("ranks {ranks:?}"))?;
    // exponent matrices of (c₁,c₂), (c₁/c₂,1), (c₁,c₁)
    let listed = [
        ("c4", lattice([vec![1, 0], vec![0, 1]])),
        ("c1", lattice([vec![1, -1], vec![0, 0]])),
        ("c5", lattice([vec![1, 0], vec![1, 0]])),
    ];
    for (id, want) in &listed {
        let w = weight(id)?;
        ensure(&w.column_lattice() == want, || format!("{id}: {:?} vs {want:?}", w.column_lattice()))?;
    }
    let b = &cone.kernel_basis;
    let mixed: Vec<Vec<Rational>> = vec![
        b[0].iter().zip(&b[1]).map(|(x, y)| x * &Rational::from(2) + y).collect(),
        b[0].iter().zip(&b[1]).map(|(x, y)| x + y).collect(),
    ];
    let other = torus_weights_with_basis(&g, &mixed).map_err(|e| e.to_string())?;
    for (a, c) in table.pieces.iter().zip(&other.pieces) {
        ensure(a.column_lattice() == c.column_lattice(), || format!("{} lattice changed under basis change", a.piece))?;
    }
    Ok(())
}

const IONEL_RAYS: [[i64; 2]; 7] = [[1, 0], [2, 1], [3, 2], [1, 1], [2, 3], [1, 2], [0, 1]];

/// Region index by direct cross products: 2k for the k-th ray, 2k+1 for the open
/// cone after it, 14 for the origin.
fn region(p: &Rational, q: &Rational) -> usize {
    if p.is_zero() && q.is_zero() {
        return 14;
    }
    let cross = |[a, b]: [i64; 2]| p * &Rational::from(b) - q * &Rational::from(a);
    for (k, ray) in IONEL_RAYS.iter().enumerate() {
        let c = cross(*ray);
        if c.is_zero() {
            return 2 * k;
        }
        if c.is_positive() {
            return 2 * k - 1;
        }
    }
    unreachable!("point outside the quadrant")
}

fn acc6() -> Check {
    let start = Instant::now();
    let mut by_region: BTreeMap<usize, String> = BTreeMap::new();
    let values: Vec<Rational> = (0..200).map(|k| r(k, 20)).collect();
    for p in &values {
        for q in &values {
            let t = classify(p, q).map_err(|e| e.to_string())?;
            let label = by_region.entry(region(p, q)).or_insert_with(|| t.label.clone());
            ensure(*label == t.label, || format!("({p},{q}): {} vs {label}", t.label))?;
            let swapped = classify(q, p).map_err(|e| e.to_string())?;
            ensure(swapped.label == t.mirror, || format!("mirror of ({p},{q})"))?;
            let alt = classify_by_conditions(p, q);
            ensure(alt.as_deref() == Some(t.label.as_str()), || format!("({p},{q}): conditions give {alt:?}"))?;
        }
    }
    let labels: BTreeSet<&String> = by_region.values().collect();
    ensure(by_region.len() == 14 && labels.len() == 14, || format!("{} types", labels.len()))?;
    within(start, Duration::from_secs(5))
}

fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    r(rng.gen_range(1..60), rng.gen_range(1..12))
}

fn acc7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for row in type_table() {
        let want = match row.kind {
            LimitKind::Cone => 2,
            LimitKind::Ray => 1,
            LimitKind::Interior => 0,
        };
        ensure(row.kernel_dimension == want, || format!("{}: table kernel {}", row.label, row.kernel_dimension))?;
        ensure(row.kernel_dimension + row.quotient_dimension == 2, || format!("{}: dimensions", row.label))?;
        for _ in 0..50 {
            let (p, q) = match row.kind {
                LimitKind::Interior => (Rational::zero(), Rational::zero()),
                _ => {
                    let t = classify_point(&row.label);
                    let gens = t.ok_or(format!("bad label {}", row.label))?;
                    let mut p = Rational::zero();
                    let mut q = Rational::zero();
                    for g in gens {
                        let c = random_positive(&mut rng);
                        p = p + &c * &Rational::from(g[0]);
                        q = q + &c * &Rational::from(g[1]);
                    }
                    (p, q)
                }
            };
            let t = classify(&p, &q).map_err(|e| e.to_string())?;
            ensure(t.label == row.label, || format!("({p},{q}) classified {} not {}", t.label, row.label))?;
            let g = build_building(&line(&p, &q)).map_err(|e| e.to_string())?.graph;
            let cone = solve(&build_system(&g).map_err(|e| e.to_string())?);
            ensure(cone.dimension == want, || format!("({p},{q}) {}: kernel {}", row.label, cone.dimension))?;
        }
    }
    Ok(())
}

/// Generators parsed from a RAY(..) or CONE(..) label.
fn classify_point(label: &str) -> Option<Vec<[i64; 2]>> {
    let nums: Vec<i64> = label
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect::<Option<_>>()?;
    (nums.len().is_multiple_of(2) && !nums.is_empty()).then(|| nums.chunks(2).map(|c| [c[0], c[1]]).collect())
}

fn acc8() -> Check {
    let coarse = exploded_fan(false);
    let fine = ionel_fan(false);
    let steps = blowup_sequence(&coarse, &fine).map_err(|e| e.to_string())?;
    let rays: Vec<[i64; 2]> = steps.iter().map(|(_, r)| (*r).into()).collect();
    ensure(rays == [[2, 1], [1, 2], [3, 2], [2, 3]], || format!("rays {rays:?}"))?;
    let mut fan: Fan = coarse;
    for (cone, ray) in &steps {
        fan = fan.stellar_subdivide(cone, *ray).map_err(|e| e.to_string())?;
    }
    let report = fan.validate().map_err(|e| e.to_string())?;
    ensure(report.smooth, || "result not smooth".into())?;
    ensure(fan == fine, || "result differs from the Ionel fan".into())
}

fn acc9() -> Check {
    for (p, q) in regression_grid() {
        let t = line(&p, &q);
        let b = build_building(&t).map_err(|e| e.to_string())?;
        let back = realize(&b.graph, &solution_from_building(&b), false).map_err(|e| format!("({p},{q}): {e}"))?;
        ensure(back == t, || format!("({p},{q}) did not round trip"))?;
    }
    Ok(())
}

fn acc10() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let step = r(1, 8);
    for _ in 0..100 {
        let d = rng.gen_range(1..9);
        let p = r(rng.gen_range(0..=10 * d), d);
        let d = rng.gen_range(1..9);
        let q = r(rng.gen_range(0..=10 * d), d);
        let fam = LineFamily::new(p.clone(), q.clone()).map_err(|e| e.to_string())?;
        let curve = line(&p, &q);
        let window = (&p + &q) * Rational::from(2) + Rational::from(2);
        let hits = corner_locus_oracle(&fam, &window, &step, &step);
        for h in &hits {
            ensure(curve.sup_distance(h) <= step, || format!("({p},{q}): oracle point {h:?} far from curve"))?;
        }
        let index: BTreeSet<(i64, i64)> = hits
            .iter()
            .map(|h| ((h.x.clone() * Rational::from(8)).floor().try_into().unwrap(), (h.y.clone() * Rational::from(8)).floor().try_into().unwrap()))
            .collect();
        for s in curve.sample_points(&step, &window) {
            let (i, j): (i64, i64) =
                ((s.x.clone() * Rational::from(8)).floor().try_into().unwrap(), (s.y.clone() * Rational::from(8)).floor().try_into().unwrap());
            let near = (-1..=1).any(|a| (-1..=1).any(|b| {
                index.contains(&(i + a, j + b)) && Point::new(r(i + a, 8), r(j + b, 8)).sup_distance(&s) <= step
            }));
            ensure(near, || format!("({p},{q}): curve point {s:?} has no oracle point within a step"))?;
        }
    }
    within(start, Duration::from_secs(30))
}

fn acc11() -> Check {
    let start = Instant::now();
    let fam = LineFamily::new(r(4, 1), r(3, 1)).map_err(|e| e.to_string())?;
    let report = convergence(&fam, &[1e3, 1e4, 1e6, 1e8], 20000).map_err(|e| e.to_string())?;
    let d: Vec<f64> = report.rows.iter().map(|(_, d)| *d).collect();
    ensure(d.windows(2).all(|w| w[1] < w[0]), || format!("distances {d:?} not decreasing"))?;
    ensure(report.r_squared >= 0.9, || format!("R² = {}", report.r_squared))?;
    within(start, Duration::from_secs(10))
}

fn acc12() -> Check {
    let dir = temp_dir();
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let graph = fixture_path("example1.json").to_str().unwrap().to_string();
    let commands: Vec<(Vec<String>, Vec<String>)> = vec![
        (vec!["classify", "--p", "4", "--q", "3"], vec![]),
        (vec!["classify", "--p", "5/2", "--q", "3", "--json"], vec![]),
        (vec!["tropicalize", "--p", "4", "--q", "3", "--json", "--svg", &path("t.svg")], vec![path("t.svg")]),
        (vec!["building", "--p", "4", "--q", "3", "--json"], vec![]),
        (vec!["building", "--p", "4", "--q", "3", "--extra-level", "2"], vec![]),
        (vec!["match", "--graph", &graph], vec![]),
        (vec!["match", "--graph", &graph, "--rule", "per-direction"], vec![]),
        (vec!["fan", "--which", "exploded", "--svg", &path("f1.svg")], vec![path("f1.svg")]),
        (vec!["fan", "--which", "ionel", "--svg", &path("f2.svg")], vec![path("f2.svg")]),
        (vec!["fan", "--which", "complete", "--svg", &path("f3.svg")], vec![path("f3.svg")]),
        (vec!["blowups"], vec![]),
        (vec!["blowups", "--json"], vec![]),
        (vec!["types"], vec![]),
        (vec!["types", "--json"], vec![]),
        (
            vec!["amoeba", "--p", "4", "--q", "3", "--n", "1e3,1e6", "--samples", "2000", "--csv", &path("a.csv"), "--points-csv", &path("pts.csv")],
            vec![path("a.csv"), path("pts.csv")],
        ),
        (vec!["render", "--graph", &graph, "--svg", &path("r.svg")], vec![path("r.svg")]),
    ]
    .into_iter()
    .map(|(a, f)| (a.into_iter().map(String::from).collect(), f))
    .collect();
    for (args, files) in &commands {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let res = run(args.clone());
            ensure(res.code == 0, || format!("{args:?}: {}", res.stderr))?;
            let bytes: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(f).unwrap_or_default()).collect();
            outputs.push((res.stdout, bytes));
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?} differs between runs"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(u32, fn() -> Check); 12] = [
        (1, acc1),
        (2, acc2),
        (3, acc3),
        (4, acc4),
        (5, acc5),
        (6, acc6),
        (7, acc7),
        (8, acc8),
        (9, acc9),
        (10, acc10),
        (11, acc11),
        (12, acc12),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("ACC {n}: PASS ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("ACC {n}: FAIL {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
