//! Moduli fans of tropical line limits and the classification of limit types.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::fan::{Cone, Fan, FanError};
use crate::geometry::{LatticeVector, Point};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("exponents must be non-negative, got p={p}, q={q}")]
    NegativeExponent { p: Rational, q: Rational },
    #[error("fine fan does not refine the coarse fan: {0}")]
    NotARefinement(String),
    #[error("no sequence of smooth blowups reaches the fine fan; missing rays {missing:?}")]
    NotSmoothlyFactorizable { missing: Vec<LatticeVector> },
    #[error(transparent)]
    Fan(#[from] FanError),
}

const fn lv(x: i64, y: i64) -> LatticeVector {
    LatticeVector::new(x, y)
}

const LOWER_LEFT: [(LatticeVector, LatticeVector); 3] =
    [(lv(0, 1), lv(-1, 0)), (lv(-1, 0), lv(0, -1)), (lv(0, -1), lv(1, 0))];

fn complete(f: Fan) -> Fan {
    f.extended(&[lv(-1, 0), lv(0, -1)], &LOWER_LEFT)
        .expect("adding the lower-left quadrants keeps the fan valid")
}

/// Quadrant cut along the diagonal. With `completed`, the three cones of the
/// other quadrants are added.
pub fn exploded_fan(completed: bool) -> Fan {
    let f = Fan::new(vec![lv(1, 0), lv(1, 1), lv(0, 1)], &[(lv(1, 0), lv(1, 1)), (lv(1, 1), lv(0, 1))])
        .expect("valid fan");
    if completed {
        complete(f)
    } else {
        f
    }
}

/// The exploded fan after blowing up both corners next to the diagonal twice.
pub fn ionel_fan(completed: bool) -> Fan {
    let steps = [
        ((1, 0), (1, 1), (2, 1)),
        ((1, 1), (0, 1), (1, 2)),
        ((2, 1), (1, 1), (3, 2)),
        ((1, 1), (1, 2), (2, 3)),
    ];
    let mut f = exploded_fan(false);
    for (u, v, r) in steps {
        let cone = Cone::span(lv(u.0, u.1), lv(v.0, v.1)).expect("valid cone");
        f = f.stellar_subdivide(&cone, lv(r.0, r.1)).expect("valid subdivision");
    }
    if completed {
        complete(f)
    } else {
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LimitKind {
    Interior,
    Ray,
    Cone,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitType {
    pub kind: LimitKind,
    pub cone: Cone,
    pub label: String,
    pub mirror: String,
}

fn below_diagonal(v: &LatticeVector) -> bool {
    v.x >= v.y
}

/// `INTERIOR`, `RAY(a,b)` or `CONE(u,v)` with the generator nearer the diagonal first.
pub fn label_of(cone: &Cone) -> String {
    match cone.generators() {
        [] => "INTERIOR".to_string(),
        [r] => format!("RAY{r}"),
        [u, v] => {
            if below_diagonal(u) && below_diagonal(v) {
                format!("CONE({v},{u})")
            } else {
                format!("CONE({u},{v})")
            }
        }
        _ => unreachable!("planar cones have at most two generators"),
    }
}

fn limit_type(cone: &Cone) -> LimitType {
    let kind = match cone.dim() {
        0 => LimitKind::Interior,
        1 => LimitKind::Ray,
        _ => LimitKind::Cone,
    };
    LimitType { kind, cone: cone.clone(), label: label_of(cone), mirror: label_of(&cone.swapped()) }
}

/// Type of the limit of `[n^{-p} w₁, n^{-q}(w₁+w₂), w₂]`.
pub fn classify(p: &Rational, q: &Rational) -> Result<LimitType, ModuliError> {
    if p.is_negative() || q.is_negative() {
        return Err(ModuliError::NegativeExponent { p: p.clone(), q: q.clone() });
    }
    static FAN: OnceLock<Fan> = OnceLock::new();
    let fan = FAN.get_or_init(|| ionel_fan(false));
    let cone = fan.locate(&Point::new(p.clone(), q.clone()))?;
    Ok(limit_type(cone))
}

/// Every type in the quadrant, ordered counterclockwise after `INTERIOR`.
pub fn all_types() -> Vec<LimitType> {
    let fan = ionel_fan(false);
    let mut out = vec![limit_type(&Cone::zero())];
    let rays = fan.rays();
    for (k, r) in rays.iter().enumerate() {
        out.push(limit_type(&Cone::ray(*r).expect("primitive")));
        if k + 1 < rays.len() {
            out.push(limit_type(&Cone::span(*r, rays[k + 1]).expect("adjacent rays")));
        }
    }
    out
}

/// Stellar subdivisions turning `coarse` into `fine`. Each round inserts, in
/// counterclockwise order, every ray of `fine` that is the sum of the generators
/// of a current cone.
pub fn blowup_sequence(coarse: &Fan, fine: &Fan) -> Result<Vec<(Cone, LatticeVector)>, ModuliError> {
    check_refinement(coarse, fine)?;
    let mut current = coarse.clone();
    let mut steps = Vec::new();
    while current.rays() != fine.rays() {
        let round: Vec<(Cone, LatticeVector)> = current
            .two_cones()
            .filter_map(|c| {
                let [u, v] = [c.generators()[0], c.generators()[1]];
                let w = u + v;
                (fine.has_ray(w) && !current.has_ray(w)).then(|| (c.clone(), w))
            })
            .collect();
        if round.is_empty() {
            let missing = fine.rays().iter().filter(|r| !current.has_ray(**r)).copied().collect();
            return Err(ModuliError::NotSmoothlyFactorizable { missing });
        }
        for (c, w) in round {
            current = current.stellar_subdivide(&c, w)?;
            steps.push((c, w));
        }
    }
    if current != *fine {
        return Err(ModuliError::NotARefinement("same rays but different cones".into()));
    }
    Ok(steps)
}

// Every coarse cone must be tiled by consecutive fine cones, and nothing else.
fn check_refinement(coarse: &Fan, fine: &Fan) -> Result<(), ModuliError> {
    for r in coarse.rays() {
        if !fine.has_ray(*r) {
            return Err(ModuliError::NotARefinement(format!("coarse ray {r} is missing")));
        }
    }
    let mut covered = 0;
    for c in coarse.two_cones() {
        let [u, v] = [c.generators()[0], c.generators()[1]];
        let inside: Vec<LatticeVector> =
            fine.rays().iter().filter(|r| c.contains(&Point::from(**r))).copied().collect();
        let start = inside.iter().position(|r| *r == u).expect("u is a fine ray");
        let mut chain = vec![u];
        let mut k = start;
        while chain.last() != Some(&v) {
            k = (k + 1) % inside.len();
            chain.push(inside[k]);
            if chain.len() > inside.len() {
                return Err(ModuliError::NotARefinement(format!("cone {c} is not tiled")));
            }
        }
        for w in chain.windows(2) {
            let piece = Cone::span(w[0], w[1])?;
            if !fine.has_cone(&piece) {
                return Err(ModuliError::NotARefinement(format!("cone {c} is not tiled")));
            }
        }
        covered += chain.len() - 1;
    }
    if covered != fine.two_cones().count() {
        return Err(ModuliError::NotARefinement("fine fan has cones outside the coarse support".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "=")]
    Equal,
}

/// `lhs.0·p + lhs.1·q  (> | =)  rhs.0·p + rhs.1·q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub lhs: (i64, i64),
    pub relation: Relation,
    pub rhs: (i64, i64),
}

impl Constraint {
    const fn new(lhs: (i64, i64), relation: Relation, rhs: (i64, i64)) -> Self {
        Constraint { lhs, relation, rhs }
    }

    pub fn holds(&self, p: &Rational, q: &Rational) -> bool {
        let sign = Rational::linear_sign(self.lhs.0 - self.rhs.0, p, self.lhs.1 - self.rhs.1, q);
        match self.relation {
            Relation::Greater => sign > 0,
            Relation::Equal => sign == 0,
        }
    }

    pub fn swapped(&self) -> Constraint {
        Constraint::new((self.lhs.1, self.lhs.0), self.relation, (self.rhs.1, self.rhs.0))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |(a, b): (i64, i64)| -> String {
            let term = |c: i64, name: &str| match c {
                0 => None,
                1 => Some(name.to_string()),
                _ => Some(format!("{c}{name}")),
            };
            let terms: Vec<String> = [term(a, "p"), term(b, "q")].into_iter().flatten().collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        };
        let rel = match self.relation {
            Relation::Greater => ">",
            Relation::Equal => "=",
        };
        write!(f, "{} {} {}", side(self.lhs), rel, side(self.rhs))
    }
}

/// One limit type with its defining sequence conditions and expected dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeRow {
    pub label: String,
    pub kind: LimitKind,
    pub mirror: String,
    /// Conditions on `x_n = c₁n^{-p}`, `y_n = c₂n^{-q}` as `n → ∞`.
    pub sequence_conditions: Vec<String>,
    /// The same conditions as exact relations on the exponents.
    pub constraints: Vec<String>,
    #[serde(skip)]
    predicate: Vec<Constraint>,
    pub kernel_dimension: usize,
    pub quotient_dimension: usize,
}

impl TypeRow {
    pub fn holds(&self, p: &Rational, q: &Rational) -> bool {
        self.predicate.iter().all(|c| c.holds(p, q))
    }
}

fn swap_xy(s: &str) -> String {
    s.replace("x_n", "\u{0}").replace("y_n", "x_n").replace('\u{0}', "y_n")
}

fn kernel_of(kind: LimitKind) -> usize {
    match kind {
        LimitKind::Interior => 0,
        LimitKind::Ray => 1,
        LimitKind::Cone => 2,
    }
}

/// The fourteen types: the ordinary line, seven rays and six cones.
pub fn type_table() -> Vec<TypeRow> {
    use Relation::{Equal as E, Greater as G};
    let c = Constraint::new;
    let p_pos = c((1, 0), G, (0, 0));
    // types on or below the diagonal; the mirrors are generated
    let lower: Vec<(&str, Vec<&str>, Vec<Constraint>)> = vec![
        ("RAY(1,0)", vec!["x_n -> 0", "y_n -> a != 0"], vec![p_pos, c((0, 1), E, (0, 0))]),
        (
            "CONE((2,1),(1,0))",
            vec!["y_n -> 0", "x_n/y_n^2 -> 0"],
            vec![c((0, 1), G, (0, 0)), c((1, 0), G, (0, 2))],
        ),
        ("RAY(2,1)", vec!["x_n -> 0", "x_n/y_n^2 -> a != 0"], vec![p_pos, c((1, 0), E, (0, 2))]),
        (
            "CONE((3,2),(2,1))",
            vec!["x_n -> 0", "x_n^2/y_n^3 -> 0", "y_n^2/x_n -> 0"],
            vec![p_pos, c((2, 0), G, (0, 3)), c((0, 2), G, (1, 0))],
        ),
        ("RAY(3,2)", vec!["x_n -> 0", "x_n^2/y_n^3 -> a != 0"], vec![p_pos, c((2, 0), E, (0, 3))]),
        (
            "CONE((1,1),(3,2))",
            vec!["x_n -> 0", "x_n/y_n -> 0", "y_n^3/x_n^2 -> 0"],
            vec![p_pos, c((1, 0), G, (0, 1)), c((0, 3), G, (2, 0))],
        ),
    ];
    let row = |label: &str, conds: &[&str], predicate: Vec<Constraint>| -> TypeRow {
        let kind = if label.starts_with("CONE") {
            LimitKind::Cone
        } else if label.starts_with("RAY") {
            LimitKind::Ray
        } else {
            LimitKind::Interior
        };
        let kernel_dimension = kernel_of(kind);
        TypeRow {
            label: label.to_string(),
            kind,
            mirror: String::new(),
            sequence_conditions: conds.iter().map(|s| s.to_string()).collect(),
            constraints: predicate.iter().map(|c| c.to_string()).collect(),
            predicate,
            kernel_dimension,
            quotient_dimension: 2 - kernel_dimension,
        }
    };
    let mut rows = vec![row(
        "INTERIOR",
        &["x_n -> a != 0", "y_n -> b != 0"],
        vec![c((1, 0), E, (0, 0)), c((0, 1), E, (0, 0))],
    )];
    for (label, conds, pred) in &lower {
        rows.push(row(label, conds, pred.clone()));
    }
    rows.push(row("RAY(1,1)", &["x_n -> 0", "x_n/y_n -> a != 0"], vec![p_pos, c((1, 0), E, (0, 1))]));
    for (_, conds, pred) in lower.iter().rev() {
        let mirrored: Vec<String> = conds.iter().map(|s| swap_xy(s)).collect();
        let refs: Vec<&str> = mirrored.iter().map(String::as_str).collect();
        let pred: Vec<Constraint> = pred.iter().map(Constraint::swapped).collect();
        rows.push(row("", &refs, pred));
    }
    // labels of mirrored rows and all mirror fields come from the fan cones
    let types = all_types();
    for (r, t) in rows.iter_mut().zip(&types) {
        if r.label.is_empty() {
            r.label = t.label.clone();
            r.kind = t.kind;
            r.kernel_dimension = kernel_of(t.kind);
            r.quotient_dimension = 2 - r.kernel_dimension;
        }
        debug_assert_eq!(r.label, t.label);
        r.mirror = t.mirror.clone();
    }
    rows
}

/// Classification by the sequence conditions alone, without the fan.
pub fn classify_by_conditions(p: &Rational, q: &Rational) -> Option<String> {
    static TABLE: OnceLock<Vec<TypeRow>> = OnceLock::new();
    let table = TABLE.get_or_init(type_table);
    let hits: Vec<&str> = table.iter().filter(|r| r.holds(p, q)).map(|r| r.label.as_str()).collect();
    match hits.as_slice() {
        [one] => Some(one.to_string()),
        _ => None,
    }
}
