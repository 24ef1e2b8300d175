//! The matching system of a leveled dual graph: equations, solution cone, stability,
//! torus weights and realization as a tropical curve.
//!
//! Variables are one `α(y)` per node with nonzero contact (the negated node length)
//! and one `α_j` per level (the negated level gap `l_{j-1} - l_j`). Along every chain
//! of direction-`i`-undefined pieces joining two direction-`i`-defined pieces at
//! levels `a ≤ b`, the walk-oriented contact component `c_i` gives
//! `c_i (α(y₁) + … + α(y_k)) = α_{a+1} + … + α_b`.

pub mod linalg;
pub mod simplex;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::building::{Building, Incidence, LeveledDualGraph};
use crate::geometry::{LatticeVector, Point};
use crate::rational::Rational;
use crate::tropical::{CurveError, Ray, Segment, TropicalCurve, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("piece `{piece}` is undefined in direction {direction} but has valence {valence}")]
    AmbiguousChain { piece: String, direction: usize, valence: usize },
    #[error("chain through {nodes:?} in direction {direction} changes contact direction")]
    InconsistentChain { direction: usize, nodes: Vec<String> },
    #[error("chain through {nodes:?} has zero contact in direction {direction} across levels {from} and {to}")]
    InconsistentZeroContact { direction: usize, nodes: Vec<String>, from: usize, to: usize },
    #[error("solution cone has no strictly negative point")]
    InfeasibleCone,
    #[error("vector is not a strictly negative solution of the system")]
    SolutionNotInCone,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("node `{0}` has zero contact and cannot be realized")]
    ZeroContactNode(String),
    #[error("position of piece `{piece}` in direction {direction} is not determined")]
    UndeterminedPosition { piece: String, direction: usize },
    #[error("graph has no nontrivial piece")]
    NoNontrivialPiece,
    #[error("integer weight out of range")]
    Overflow,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Variable {
    Node { node: usize, id: String },
    Level { level: usize },
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Node { id, .. } => write!(f, "α({id})"),
            Variable::Level { level } => write!(f, "α_{level}"),
        }
    }
}

/// Where an equation came from: direction (1 or 2), the node chain and its end pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub direction: usize,
    pub chain: Vec<String>,
    pub from: String,
    pub to: String,
    pub levels: (usize, usize),
}

/// `Σ coefficients[k] · variables[k] = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub coefficients: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingSystem {
    pub variables: Vec<Variable>,
    pub equations: Vec<Equation>,
    pub provenance: Vec<Provenance>,
}

impl MatchingSystem {
    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn rational_rows(&self) -> Vec<Vec<Rational>> {
        self.equations
            .iter()
            .map(|e| e.coefficients.iter().map(|&c| Rational::from(c)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rational_rows())
    }

    /// Whether the equation `coefficients · x = 0` is implied by the system.
    pub fn in_row_span(&self, coefficients: &[i64]) -> bool {
        let mut rows = self.rational_rows();
        let base = linalg::rank(&rows);
        rows.push(coefficients.iter().map(|&c| Rational::from(c)).collect());
        linalg::rank(&rows) == base
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len()
            && self.equations.iter().all(|e| {
                e.coefficients
                    .iter()
                    .zip(x)
                    .map(|(&c, v)| v * c)
                    .sum::<Rational>()
                    .is_zero()
            })
    }

    /// Index of the node variable named `id`, or of level `j`.
    pub fn node_variable(&self, id: &str) -> Option<usize> {
        self.variables.iter().position(|v| matches!(v, Variable::Node { id: x, .. } if x == id))
    }

    pub fn level_variable(&self, j: usize) -> Option<usize> {
        self.variables.iter().position(|v| *v == Variable::Level { level: j })
    }

    pub fn format_equation(&self, e: &Equation) -> String {
        let side = |want_node: bool, sign: i64| -> String {
            let terms: Vec<String> = e
                .coefficients
                .iter()
                .zip(&self.variables)
                .filter(|(&c, v)| c != 0 && matches!(v, Variable::Node { .. }) == want_node)
                .map(|(&c, v)| {
                    let c = c * sign;
                    match c {
                        1 => v.to_string(),
                        -1 => format!("-{v}"),
                        _ => format!("{c}{v}"),
                    }
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            }
        };
        format!("{} = {}", side(true, 1), side(false, -1))
    }
}

/// Node variables in node order (nonzero contact only), then `α_1..α_m`.
fn variables_of(g: &LeveledDualGraph) -> Vec<Variable> {
    let mut vars: Vec<Variable> = g
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, n)| !n.contact.is_zero())
        .map(|(k, n)| Variable::Node { node: k, id: n.id.clone() })
        .collect();
    vars.extend((1..=g.num_levels()).map(|level| Variable::Level { level }));
    vars
}

fn node_var_index(vars: &[Variable], node: usize) -> Option<usize> {
    vars.iter().position(|v| matches!(v, Variable::Node { node: k, .. } if *k == node))
}

fn level_var_index(g: &LeveledDualGraph, j: usize) -> usize {
    let nodes = g.nodes().iter().filter(|n| !n.contact.is_zero()).count();
    nodes + j - 1
}

struct Chain {
    from: usize,
    to: usize,
    /// Nodes walked and their contact oriented along the walk.
    steps: Vec<(usize, LatticeVector)>,
}

/// Walks from an `i`-defined piece along one incidence until the next `i`-defined
/// piece. `None` when the walk runs into an end or loops.
fn walk_chain(g: &LeveledDualGraph, i: usize, start: usize, first: Incidence) -> Option<Chain> {
    let Incidence::Node { node, other, outward } = first else {
        return None;
    };
    let mut steps = vec![(node, outward)];
    let mut cur = other;
    loop {
        if g.pieces()[cur].levels.direction(i).at().is_some() {
            return Some(Chain { from: start, to: cur, steps });
        }
        if steps.len() > g.nodes().len() {
            return None;
        }
        let (last, came) = *steps.last().expect("nonempty");
        let incs = g.incidences(cur);
        let mut entering_skipped = false;
        let mut next = None;
        for inc in incs {
            match inc {
                Incidence::Node { node, outward, .. } if !entering_skipped && node == last && outward == -came => {
                    entering_skipped = true;
                }
                other => {
                    next = Some(other);
                }
            }
        }
        match next? {
            Incidence::Node { node, other, outward } => {
                steps.push((node, outward));
                cur = other;
            }
            Incidence::End { .. } => return None,
        }
    }
}

pub fn build_system(g: &LeveledDualGraph) -> Result<MatchingSystem, MatchingError> {
    let variables = variables_of(g);
    let mut equations = Vec::new();
    let mut provenance = Vec::new();
    for i in 0..2 {
        for (k, p) in g.pieces().iter().enumerate() {
            if p.levels.direction(i).at().is_none() {
                let valence = g.incidences(k).len();
                if valence != 2 {
                    return Err(MatchingError::AmbiguousChain { piece: p.id.clone(), direction: i + 1, valence });
                }
            }
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for start in 0..g.pieces().len() {
            if g.pieces()[start].levels.direction(i).at().is_none() {
                continue;
            }
            for inc in g.incidences(start) {
                let Some(mut chain) = walk_chain(g, i, start, inc) else {
                    continue;
                };
                let mut key: Vec<usize> = chain.steps.iter().map(|s| s.0).collect();
                key.sort_unstable();
                if !seen.insert(key) {
                    continue;
                }
                let level = |piece: usize| g.pieces()[piece].levels.direction(i).at().expect("defined");
                let (mut a, mut b) = (level(chain.from), level(chain.to));
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                    std::mem::swap(&mut chain.from, &mut chain.to);
                    chain.steps.reverse();
                    for s in chain.steps.iter_mut() {
                        s.1 = -s.1;
                    }
                }
                let names: Vec<String> = chain.steps.iter().map(|s| g.nodes()[s.0].id.clone()).collect();
                let c0 = chain.steps[0].1;
                if chain.steps.iter().any(|s| s.1 != c0) {
                    return Err(MatchingError::InconsistentChain { direction: i + 1, nodes: names });
                }
                let ci = c0.component(i);
                if ci == 0 {
                    if a == b {
                        continue;
                    }
                    return Err(MatchingError::InconsistentZeroContact { direction: i + 1, nodes: names, from: a, to: b });
                }
                let mut coefficients = vec![0i64; variables.len()];
                for (node, _) in &chain.steps {
                    let v = node_var_index(&variables, *node).expect("nonzero contact node has a variable");
                    coefficients[v] += ci;
                }
                for j in a + 1..=b {
                    coefficients[level_var_index(g, j)] -= 1;
                }
                equations.push(Equation { coefficients });
                provenance.push(Provenance {
                    direction: i + 1,
                    chain: names,
                    from: g.pieces()[chain.from].id.clone(),
                    to: g.pieces()[chain.to].id.clone(),
                    levels: (a, b),
                });
            }
        }
    }
    Ok(MatchingSystem { variables, equations, provenance })
}

/// Exact solution space of the equalities and a strictly negative witness if one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCone {
    pub variables: Vec<Variable>,
    /// Integral lattice basis, in canonical (negated Hermite) form.
    pub kernel_basis: Vec<Vec<Rational>>,
    pub dimension: usize,
    /// A solution with every coordinate `≤ -1`; absent exactly when infeasible.
    pub witness: Option<Vec<Rational>>,
}

impl SolutionCone {
    pub fn feasible(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn solve(sys: &MatchingSystem) -> SolutionCone {
    let n = sys.num_variables();
    let a: Vec<Vec<BigInt>> = sys
        .equations
        .iter()
        .map(|e| e.coefficients.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let kernel = linalg::row_hnf(&linalg::integer_kernel(&a, n));
    let kernel_basis: Vec<Vec<Rational>> = kernel
        .into_iter()
        .map(|v| v.into_iter().map(|x| -Rational::from(x)).collect())
        .collect();

    // x = -1 - y with y ≥ 0 turns A x = 0 into A y = -A·1
    let rows = sys.rational_rows();
    let b: Vec<Rational> = rows.iter().map(|r| -r.iter().sum::<Rational>()).collect();
    let witness = simplex::nonnegative_solution(&rows, &b, n)
        .map(|y| y.into_iter().map(|v| -v - Rational::one()).collect());
    SolutionCone { variables: sys.variables.clone(), dimension: kernel_basis.len(), kernel_basis, witness }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityRule {
    /// Every level index appears as some coordinate of some nontrivial piece.
    #[default]
    Union,
    /// Every level index appears in each direction separately.
    PerDirection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub covered: BTreeSet<usize>,
    pub rule: StabilityRule,
}

pub fn check_stability(g: &LeveledDualGraph, rule: StabilityRule) -> StabilityVerdict {
    let per_direction: Vec<BTreeSet<usize>> = (0..2)
        .map(|i| {
            g.pieces()
                .iter()
                .filter(|p| !p.trivial)
                .filter_map(|p| p.levels.direction(i).at())
                .filter(|&a| a > 0)
                .collect()
        })
        .collect();
    let covered: BTreeSet<usize> = match rule {
        StabilityRule::Union => per_direction[0].union(&per_direction[1]).copied().collect(),
        StabilityRule::PerDirection => per_direction[0].intersection(&per_direction[1]).copied().collect(),
    };
    let stable = (1..=g.num_levels()).all(|a| covered.contains(&a));
    StabilityVerdict { stable, covered, rule }
}

/// Each piece's position as integer linear functionals of the variables, one per direction.
fn position_functionals(g: &LeveledDualGraph) -> Result<Vec<[Vec<i64>; 2]>, MatchingError> {
    let vars = variables_of(g);
    let n = vars.len();
    let count = g.pieces().len();
    let mut out: Vec<[Option<Vec<i64>>; 2]> = vec![[None, None]; count];
    for i in 0..2 {
        let mut queue = VecDeque::new();
        for (k, p) in g.pieces().iter().enumerate() {
            if let Some(a) = p.levels.direction(i).at() {
                let mut f = vec![0i64; n];
                for j in 1..=a {
                    f[level_var_index(g, j)] = -1;
                }
                out[k][i] = Some(f);
                queue.push_back(k);
            }
        }
        while let Some(k) = queue.pop_front() {
            for inc in g.incidences(k) {
                let Incidence::Node { node, other, outward } = inc else { continue };
                if out[other][i].is_some() {
                    continue;
                }
                let mut f = out[k][i].clone().expect("queued pieces are placed");
                if let Some(v) = node_var_index(&vars, node) {
                    f[v] -= outward.component(i);
                }
                out[other][i] = Some(f);
                queue.push_back(other);
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(k, [x, y])| match (x, y) {
            (Some(x), Some(y)) => Ok([x, y]),
            (None, _) => Err(MatchingError::UndeterminedPosition { piece: g.pieces()[k].id.clone(), direction: 1 }),
            (_, None) => Err(MatchingError::UndeterminedPosition { piece: g.pieces()[k].id.clone(), direction: 2 }),
        })
        .collect()
}

fn apply(f: &[i64], x: &[Rational]) -> Rational {
    f.iter().zip(x).map(|(&c, v)| v * c).sum()
}

/// Per-piece weight matrix: row `i` holds the direction-`i` position functional
/// evaluated on each basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceWeights {
    pub piece: String,
    pub rows: [Vec<i64>; 2],
}

impl PieceWeights {
    pub fn rank(&self) -> usize {
        let k = self.rows[0].len();
        let nonzero = self.rows.iter().any(|r| r.iter().any(|&x| x != 0));
        if !nonzero {
            return 0;
        }
        for a in 0..k {
            for b in a + 1..k {
                let det = self.rows[0][a] as i128 * self.rows[1][b] as i128
                    - self.rows[0][b] as i128 * self.rows[1][a] as i128;
                if det != 0 {
                    return 2;
                }
            }
        }
        1
    }

    /// Hermite basis of the lattice spanned by the columns.
    pub fn column_lattice(&self) -> Vec<[i64; 2]> {
        let cols: Vec<Vec<BigInt>> = (0..self.rows[0].len())
            .map(|c| vec![BigInt::from(self.rows[0][c]), BigInt::from(self.rows[1][c])])
            .collect();
        linalg::row_hnf(&cols)
            .into_iter()
            .map(|r| [r[0].to_i64().expect("fits"), r[1].to_i64().expect("fits")])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTable {
    pub pieces: Vec<PieceWeights>,
}

pub fn torus_weights(g: &LeveledDualGraph, cone: &SolutionCone) -> Result<WeightTable, MatchingError> {
    if !cone.feasible() {
        return Err(MatchingError::InfeasibleCone);
    }
    torus_weights_with_basis(g, &cone.kernel_basis)
}

/// Weights against an arbitrary integral basis of the solution space.
pub fn torus_weights_with_basis(g: &LeveledDualGraph, basis: &[Vec<Rational>]) -> Result<WeightTable, MatchingError> {
    let functionals = position_functionals(g)?;
    let n = variables_of(g).len();
    for v in basis {
        if v.len() != n {
            return Err(MatchingError::WrongLength { expected: n, got: v.len() });
        }
    }
    let entry = |f: &[i64], v: &[Rational]| -> Result<i64, MatchingError> {
        let r = apply(f, v);
        if !r.is_integer() {
            return Err(MatchingError::Overflow);
        }
        r.numer().to_i64().ok_or(MatchingError::Overflow)
    };
    let pieces = g
        .pieces()
        .iter()
        .zip(&functionals)
        .map(|(p, [fx, fy])| {
            let row = |f: &[i64]| basis.iter().map(|v| entry(f, v)).collect::<Result<Vec<_>, _>>();
            Ok(PieceWeights { piece: p.id.clone(), rows: [row(fx)?, row(fy)?] })
        })
        .collect::<Result<Vec<_>, MatchingError>>()?;
    Ok(WeightTable { pieces })
}

/// Piece positions for a solution vector, aligned with `g.pieces()`.
pub fn piece_positions(g: &LeveledDualGraph, solution: &[Rational]) -> Result<Vec<Point>, MatchingError> {
    let n = variables_of(g).len();
    if solution.len() != n {
        return Err(MatchingError::WrongLength { expected: n, got: solution.len() });
    }
    Ok(position_functionals(g)?
        .iter()
        .map(|[fx, fy]| Point::new(apply(fx, solution), apply(fy, solution)))
        .collect())
}

/// The solution vector encoded by a building's own lengths and levels.
pub fn solution_from_building(b: &Building) -> Vec<Rational> {
    let g = &b.graph;
    let mut x: Vec<Rational> = g
        .nodes()
        .iter()
        .zip(&b.node_lengths)
        .filter(|(n, _)| !n.contact.is_zero())
        .map(|(_, l)| -l)
        .collect();
    for j in 1..=g.num_levels() {
        x.push(&b.levels.phi(j - 1) - &b.levels.phi(j));
    }
    x
}

/// Builds the tropical curve of a strictly negative solution. Trivial pieces are
/// merged into the edges through them unless `keep_trivial` is set.
pub fn realize(g: &LeveledDualGraph, solution: &[Rational], keep_trivial: bool) -> Result<TropicalCurve, MatchingError> {
    if let Some(n) = g.nodes().iter().find(|n| n.contact.is_zero()) {
        return Err(MatchingError::ZeroContactNode(n.id.clone()));
    }
    let sys = build_system(g)?;
    if !sys.is_satisfied_by(solution) || !solution.iter().all(Rational::is_negative) {
        return Err(MatchingError::SolutionNotInCone);
    }
    let positions = piece_positions(g, solution)?;
    let vars = variables_of(g);
    let length = |node: usize| -> Rational { -&solution[node_var_index(&vars, node).expect("variable")] };

    let is_vertex = |k: usize| keep_trivial || !g.pieces()[k].trivial;
    let vertex_pieces: Vec<usize> = (0..g.pieces().len()).filter(|&k| is_vertex(k)).collect();
    if vertex_pieces.is_empty() {
        return Err(MatchingError::NoNontrivialPiece);
    }
    let vertex_of = |k: usize| vertex_pieces.iter().position(|&v| v == k).expect("vertex piece");
    let vertices: Vec<Vertex> = vertex_pieces
        .iter()
        .enumerate()
        .map(|(id, &k)| Vertex { id, x: positions[k].x.clone(), y: positions[k].y.clone() })
        .collect();

    let mut segments = Vec::new();
    let mut rays = Vec::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for &start in &vertex_pieces {
        for inc in g.incidences(start) {
            match inc {
                Incidence::End { outward, .. } => rays.push(Ray { base: vertex_of(start), contact: outward }),
                Incidence::Node { node, other, outward } => {
                    if used.contains(&node) {
                        continue;
                    }
                    let mut total = length(node);
                    used.insert(node);
                    let mut cur = other;
                    let mut last = (node, outward);
                    let mut ray = false;
                    while !is_vertex(cur) {
                        let next = g
                            .incidences(cur)
                            .into_iter()
                            .find(|i| !matches!(i, Incidence::Node { node, outward, .. } if *node == last.0 && *outward == -last.1))
                            .expect("trivial pieces are bivalent");
                        match next {
                            Incidence::Node { node, other, outward } => {
                                total += &length(node);
                                used.insert(node);
                                last = (node, outward);
                                cur = other;
                            }
                            Incidence::End { .. } => {
                                ray = true;
                                break;
                            }
                        }
                    }
                    if ray {
                        rays.push(Ray { base: vertex_of(start), contact: outward });
                    } else {
                        segments.push(Segment { tail: vertex_of(start), head: vertex_of(cur), contact: outward, length: total });
                    }
                }
            }
        }
    }
    Ok(TropicalCurve::new(vertices, segments, rays)?)
}
