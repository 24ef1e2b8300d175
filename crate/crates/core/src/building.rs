//! Level structures and leveled dual graphs.
//!
//! The nonzero vertex coordinates `0 < l₁ < … < l_m` of a tropical curve cut the
//! quadrant by the lines `x = l_i` and `y = l_i`. Refining the curve along those
//! lines gives the combinatorial shadow of a level building: curve vertices
//! become nontrivial pieces at integer multilevels, crossings become trivial
//! cylinders (possibly between levels), and edge fragments become nodes and ends.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::convert::TryFrom;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{LatticeVector, Point};
use crate::rational::Rational;
use crate::tropical::TropicalCurve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no pieces")]
    Empty,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown piece `{0}`")]
    UnknownPiece(String),
    #[error("piece `{piece}` has level index outside 0..={m}")]
    LevelOutOfRange { piece: String, m: usize },
    #[error("piece `{0}` has a between-pair that is not consecutive")]
    NonConsecutiveBetween(String),
    #[error("node `{node}` has zero contact in direction {direction} but joins different levels")]
    ZeroContactLevelGap { node: String, direction: usize },
    #[error("trivial piece `{0}` is not bivalent with matching contact directions")]
    TrivialNotCylinder(String),
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error(transparent)]
    Curve(#[from] crate::tropical::CurveError),
    #[error("vertex coordinate {0} is missing from the supplied level list")]
    MissingLevel(Rational),
    #[error("level list must be strictly increasing and positive")]
    BadLevels,
    #[error("an edge crosses a level line at {0}, beyond the last level")]
    OutsideLevelRange(Point),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `0 < l₁ < … < l_m`, with `φ(0) = 0` and `φ(a) = l_a`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelStructure {
    levels: Vec<Rational>,
}

impl LevelStructure {
    pub fn new(levels: Vec<Rational>) -> Option<Self> {
        let ok = levels.first().is_none_or(|l| l.is_positive())
            && levels.windows(2).all(|w| w[0] < w[1]);
        ok.then_some(LevelStructure { levels })
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    pub fn m(&self) -> usize {
        self.levels.len()
    }

    pub fn phi(&self, a: usize) -> Rational {
        if a == 0 {
            Rational::zero()
        } else {
            self.levels[a - 1].clone()
        }
    }

    /// Union with further level values.
    pub fn refined(&self, extra: &[Rational]) -> Option<Self> {
        let mut all: BTreeSet<Rational> = self.levels.iter().cloned().collect();
        all.extend(extra.iter().cloned());
        LevelStructure::new(all.into_iter().collect())
    }

    /// Level coordinate of a value: an integer level when it equals some `φ(a)`,
    /// otherwise the consecutive pair it falls between. `None` past `l_m` or below 0.
    pub fn coordinate_of(&self, value: &Rational) -> Option<LevelCoordinate> {
        if value.is_negative() {
            return None;
        }
        if value.is_zero() {
            return Some(LevelCoordinate::At(0));
        }
        match self.levels.binary_search(value) {
            Ok(i) => Some(LevelCoordinate::At(i + 1)),
            Err(i) if i < self.levels.len() => Some(LevelCoordinate::Between(i, i + 1)),
            Err(_) => None,
        }
    }
}

/// Sorted, deduplicated nonzero vertex coordinates.
pub fn extract_levels(curve: &TropicalCurve) -> LevelStructure {
    let values: BTreeSet<Rational> = curve
        .vertices()
        .iter()
        .flat_map(|v| [v.x.clone(), v.y.clone()])
        .filter(|c| !c.is_zero())
        .collect();
    LevelStructure { levels: values.into_iter().collect() }
}

/// Level of a piece in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelCoordinate {
    At(usize),
    Between(usize, usize),
}

impl LevelCoordinate {
    /// Position on the doubled index line: `At(a) -> 2a`, `Between(a, a+1) -> 2a+1`.
    pub fn rank(&self) -> usize {
        match *self {
            LevelCoordinate::At(a) => 2 * a,
            LevelCoordinate::Between(a, _) => 2 * a + 1,
        }
    }

    pub fn at(&self) -> Option<usize> {
        match *self {
            LevelCoordinate::At(a) => Some(a),
            LevelCoordinate::Between(..) => None,
        }
    }
}

impl Ord for LevelCoordinate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for LevelCoordinate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LevelCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelCoordinate::At(a) => write!(f, "{a}"),
            LevelCoordinate::Between(a, b) => write!(f, "{a}..{b}"),
        }
    }
}

/// Level coordinates in direction 1 (towards `D₁`) and direction 2 (towards `D₂`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multilevel(pub [LevelCoordinate; 2]);

impl Multilevel {
    pub fn at(a: usize, b: usize) -> Self {
        Multilevel([LevelCoordinate::At(a), LevelCoordinate::At(b)])
    }

    pub fn direction(&self, i: usize) -> LevelCoordinate {
        self.0[i]
    }
}

impl fmt::Display for Multilevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0[0], self.0[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub id: String,
    pub levels: Multilevel,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub contact: LatticeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct End {
    pub piece: String,
    pub contact: LatticeVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphRepr {
    num_levels: usize,
    pieces: Vec<Piece>,
    nodes: Vec<Node>,
    ends: Vec<End>,
}

/// The abstract dual graph of a limit building, with multilevels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct LeveledDualGraph {
    num_levels: usize,
    pieces: Vec<Piece>,
    nodes: Vec<Node>,
    ends: Vec<End>,
    node_pieces: Vec<(usize, usize)>,
    end_pieces: Vec<usize>,
}

impl TryFrom<GraphRepr> for LeveledDualGraph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        LeveledDualGraph::new(r.num_levels, r.pieces, r.nodes, r.ends)
    }
}

impl From<LeveledDualGraph> for GraphRepr {
    fn from(g: LeveledDualGraph) -> Self {
        GraphRepr { num_levels: g.num_levels, pieces: g.pieces, nodes: g.nodes, ends: g.ends }
    }
}

/// An edge incident to a piece, oriented away from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    /// Node index, the piece at the other end, and the contact vector pointing away.
    Node { node: usize, other: usize, outward: LatticeVector },
    End { end: usize, outward: LatticeVector },
}

impl Incidence {
    pub fn outward(&self) -> LatticeVector {
        match *self {
            Incidence::Node { outward, .. } | Incidence::End { outward, .. } => outward,
        }
    }
}

impl LeveledDualGraph {
    pub fn new(
        num_levels: usize,
        pieces: Vec<Piece>,
        nodes: Vec<Node>,
        ends: Vec<End>,
    ) -> Result<Self, GraphError> {
        if pieces.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, p) in pieces.iter().enumerate() {
            if index.insert(p.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId(p.id.clone()));
            }
            for c in p.levels.0 {
                match c {
                    LevelCoordinate::At(a) if a > num_levels => {
                        return Err(GraphError::LevelOutOfRange { piece: p.id.clone(), m: num_levels })
                    }
                    LevelCoordinate::Between(a, b) if b != a + 1 => {
                        return Err(GraphError::NonConsecutiveBetween(p.id.clone()))
                    }
                    LevelCoordinate::Between(_, b) if b > num_levels => {
                        return Err(GraphError::LevelOutOfRange { piece: p.id.clone(), m: num_levels })
                    }
                    _ => {}
                }
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| GraphError::UnknownPiece(id.into()));
        let mut node_ids = BTreeSet::new();
        let mut node_pieces = Vec::with_capacity(nodes.len());
        for n in &nodes {
            if !node_ids.insert(n.id.clone()) || index.contains_key(&n.id) {
                return Err(GraphError::DuplicateId(n.id.clone()));
            }
            let (t, h) = (lookup(&n.tail)?, lookup(&n.head)?);
            for i in 0..2 {
                if n.contact.component(i) != 0 {
                    continue;
                }
                if let (Some(a), Some(b)) = (pieces[t].levels.0[i].at(), pieces[h].levels.0[i].at()) {
                    if a != b {
                        return Err(GraphError::ZeroContactLevelGap { node: n.id.clone(), direction: i });
                    }
                }
            }
            node_pieces.push((t, h));
        }
        let end_pieces = ends.iter().map(|e| lookup(&e.piece)).collect::<Result<Vec<_>, _>>()?;
        let graph = LeveledDualGraph { num_levels, pieces, nodes, ends, node_pieces, end_pieces };

        for (i, p) in graph.pieces.iter().enumerate() {
            if !p.trivial {
                continue;
            }
            let inc = graph.incidences(i);
            let ok = inc.len() == 2 && inc[0].outward() == -inc[1].outward() && !inc[0].outward().is_zero();
            if !ok {
                return Err(GraphError::TrivialNotCylinder(p.id.clone()));
            }
        }
        let mut seen = vec![false; graph.pieces.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for inc in graph.incidences(i) {
                if let Incidence::Node { other, .. } = inc {
                    if !seen[other] {
                        seen[other] = true;
                        queue.push_back(other);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    pub fn num_levels(&self) -> usize {
        self.num_levels
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn ends(&self) -> &[End] {
        &self.ends
    }

    /// `(tail, head)` piece indices of a node.
    pub fn node_pieces(&self, node: usize) -> (usize, usize) {
        self.node_pieces[node]
    }

    pub fn end_piece(&self, end: usize) -> usize {
        self.end_pieces[end]
    }

    pub fn piece_index(&self, id: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.id == id)
    }

    /// Nodes and ends at a piece, in node order then end order.
    pub fn incidences(&self, piece: usize) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (k, &(t, h)) in self.node_pieces.iter().enumerate() {
            let c = self.nodes[k].contact;
            if t == piece {
                out.push(Incidence::Node { node: k, other: h, outward: c });
            }
            if h == piece {
                out.push(Incidence::Node { node: k, other: t, outward: -c });
            }
        }
        for (k, &p) in self.end_pieces.iter().enumerate() {
            if p == piece {
                out.push(Incidence::End { end: k, outward: self.ends[k].contact });
            }
        }
        out
    }

    /// The same graph with every piece moved by `f` (used to build modified inputs).
    pub fn with_piece_levels(&self, id: &str, levels: Multilevel) -> Result<Self, GraphError> {
        let mut pieces = self.pieces.clone();
        if let Some(p) = pieces.iter_mut().find(|p| p.id == id) {
            p.levels = levels;
        } else {
            return Err(GraphError::UnknownPiece(id.into()));
        }
        LeveledDualGraph::new(self.num_levels, pieces, self.nodes.clone(), self.ends.clone())
    }
}

/// A leveled dual graph together with where each piece and node sits in the quadrant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Building {
    pub graph: LeveledDualGraph,
    pub levels: LevelStructure,
    /// Realized position of each piece, aligned with `graph.pieces()`.
    pub positions: Vec<Point>,
    /// Length of each node fragment, aligned with `graph.nodes()`.
    pub node_lengths: Vec<Rational>,
}

/// Refines a curve along its own level lines.
pub fn build_building(curve: &TropicalCurve) -> Result<Building, BuildingError> {
    build_building_with_levels(curve, &extract_levels(curve))
}

/// Refines a curve along the lines of `levels`, which must contain every nonzero
/// vertex coordinate. Extra values only add trivial pieces.
pub fn build_building_with_levels(
    curve: &TropicalCurve,
    levels: &LevelStructure,
) -> Result<Building, BuildingError> {
    curve.validate()?;
    for l in extract_levels(curve).levels() {
        if levels.levels.binary_search(l).is_err() {
            return Err(BuildingError::MissingLevel(l.clone()));
        }
    }
    let classify = |p: &Point| -> Result<Multilevel, BuildingError> {
        let cx = levels.coordinate_of(&p.x);
        let cy = levels.coordinate_of(&p.y);
        match (cx, cy) {
            (Some(a), Some(b)) => Ok(Multilevel([a, b])),
            _ => Err(BuildingError::OutsideLevelRange(p.clone())),
        }
    };

    struct RawPiece {
        levels: Multilevel,
        position: Point,
        trivial: bool,
    }
    let mut pieces: Vec<RawPiece> = Vec::new();
    let mut nodes: Vec<(usize, usize, LatticeVector, Rational)> = Vec::new();
    let mut ends: Vec<(usize, LatticeVector)> = Vec::new();

    for v in curve.vertices() {
        let position = v.position();
        pieces.push(RawPiece { levels: classify(&position)?, position, trivial: false });
    }

    // interior crossing parameters of start + t·contact with the level lines
    let crossings = |start: &Point, contact: LatticeVector, limit: Option<&Rational>| {
        let mut ts = BTreeSet::new();
        for d in 0..2 {
            let c = contact.component(d);
            if c == 0 {
                continue;
            }
            for l in levels.levels() {
                let t = (l - start.coordinate(d)) / c;
                if t.is_positive() && limit.is_none_or(|lim| &t < lim) {
                    ts.insert(t);
                }
            }
        }
        ts
    };

    let fragment = |pieces: &mut Vec<RawPiece>,
                        nodes: &mut Vec<(usize, usize, LatticeVector, Rational)>,
                        from: usize,
                        contact: LatticeVector,
                        limit: Option<&Rational>|
     -> Result<(usize, Rational), BuildingError> {
        let start = pieces[from].position.clone();
        let mut prev = from;
        let mut prev_t = Rational::zero();
        for t in crossings(&start, contact, limit) {
            let position = start.offset(&t, contact);
            let levels = classify(&position)?;
            pieces.push(RawPiece { levels, position, trivial: true });
            let here = pieces.len() - 1;
            nodes.push((prev, here, contact, &t - &prev_t));
            prev = here;
            prev_t = t;
        }
        Ok((prev, prev_t))
    };

    for s in curve.segments() {
        let (last, last_t) = fragment(&mut pieces, &mut nodes, s.tail, s.contact, Some(&s.length))?;
        nodes.push((last, s.head, s.contact, &s.length - &last_t));
    }
    for r in curve.rays() {
        let (last, _) = fragment(&mut pieces, &mut nodes, r.base, r.contact, None)?;
        ends.push((last, r.contact));
    }

    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| {
        (pieces[a].levels, &pieces[a].position).cmp(&(pieces[b].levels, &pieces[b].position))
    });
    let mut rank = vec![0; pieces.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let piece_id = |new: usize| format!("c{}", new + 1);

    nodes.sort_by(|a, b| (rank[a.0], rank[a.1]).cmp(&(rank[b.0], rank[b.1])));
    ends.sort_by(|a, b| (rank[a.0], a.1).cmp(&(rank[b.0], b.1)));

    let graph_pieces = order
        .iter()
        .enumerate()
        .map(|(new, &old)| Piece { id: piece_id(new), levels: pieces[old].levels, trivial: pieces[old].trivial })
        .collect();
    let graph_nodes = nodes
        .iter()
        .enumerate()
        .map(|(k, (t, h, c, _))| Node {
            id: format!("n{}", k + 1),
            tail: piece_id(rank[*t]),
            head: piece_id(rank[*h]),
            contact: *c,
        })
        .collect();
    let graph_ends = ends
        .iter()
        .map(|(p, c)| End { piece: piece_id(rank[*p]), contact: *c })
        .collect();
    let graph = LeveledDualGraph::new(levels.m(), graph_pieces, graph_nodes, graph_ends)?;
    Ok(Building {
        graph,
        levels: levels.clone(),
        positions: order.iter().map(|&old| pieces[old].position.clone()).collect(),
        node_lengths: nodes.into_iter().map(|n| n.3).collect(),
    })
}

/// Stable text listing: piece lines in multilevel order (ends inline), then nodes.
/// The header with the level values is omitted when there are no levels.
pub fn describe_building(b: &Building) -> String {
    let g = &b.graph;
    let mut lines = Vec::new();
    if g.num_levels() > 0 {
        let phi: Vec<String> = b.levels.levels().iter().map(|l| l.to_string()).collect();
        lines.push(format!("levels m={} l=[{}]", g.num_levels(), phi.join(",")));
    }
    let mut order: Vec<usize> = (0..g.pieces().len()).collect();
    order.sort_by_key(|&i| (g.pieces()[i].levels, i));
    for i in order {
        let p = &g.pieces()[i];
        let mut line = format!(
            "piece {} level {} {} at {}",
            p.id,
            p.levels,
            if p.trivial { "trivial" } else { "nontrivial" },
            b.positions[i]
        );
        let ends: Vec<String> = (0..g.ends().len())
            .filter(|&e| g.end_piece(e) == i)
            .map(|e| g.ends()[e].contact.to_string())
            .collect();
        if !ends.is_empty() {
            line.push_str(&format!(" ends {}", ends.join(",")));
        }
        lines.push(line);
    }
    for (k, n) in g.nodes().iter().enumerate() {
        lines.push(format!(
            "node {} {} -> {} contact {} length {}",
            n.id, n.tail, n.head, n.contact, b.node_lengths[k]
        ));
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{tropicalize_line, LineFamily};
    use LevelCoordinate::{At, Between};

    fn curve(p: i64, q: i64) -> TropicalCurve {
        tropicalize_line(&LineFamily::new(p.into(), q.into()).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn level_extraction() {
        assert_eq!(extract_levels(&curve(4, 3)).levels(), ints(&[1, 3, 4]).as_slice());
        assert_eq!(extract_levels(&curve(0, 0)).m(), 0);
        assert_eq!(extract_levels(&curve(3, 2)).levels(), ints(&[1, 2, 3]).as_slice());
        let l = extract_levels(&curve(4, 3));
        assert_eq!((l.phi(0), l.phi(1), l.phi(2), l.phi(3)), (0.into(), 1.into(), 3.into(), 4.into()));
    }

    #[test]
    fn coordinate_classification() {
        let l = extract_levels(&curve(4, 3));
        assert_eq!(l.coordinate_of(&Rational::zero()), Some(At(0)));
        assert_eq!(l.coordinate_of(&Rational::from(3)), Some(At(2)));
        assert_eq!(l.coordinate_of(&Rational::from(2)), Some(Between(1, 2)));
        assert_eq!(l.coordinate_of(&Rational::new(1, 2)), Some(Between(0, 1)));
        assert_eq!(l.coordinate_of(&Rational::from(5)), None);
    }

    #[test]
    fn example_one_building() {
        let b = build_building(&curve(4, 3)).unwrap();
        let g = &b.graph;
        assert_eq!(g.num_levels(), 3);
        let summary: Vec<(Multilevel, bool, Point)> = g
            .pieces()
            .iter()
            .zip(&b.positions)
            .map(|(p, pos)| (p.levels, p.trivial, pos.clone()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (Multilevel::at(1, 0), false, Point::new(1, 0)),
                (Multilevel([Between(1, 2), At(1)]), true, Point::new(2, 1)),
                (Multilevel([At(2), Between(1, 2)]), true, Point::new(3, 2)),
                (Multilevel::at(3, 2), false, Point::new(4, 3)),
                (Multilevel::at(3, 3), true, Point::new(4, 4)),
            ]
        );
        assert_eq!(g.nodes().len(), 4);
        assert_eq!(g.ends().len(), 2);
        let chain: Vec<(&str, &str)> = g.nodes().iter().map(|n| (n.tail.as_str(), n.head.as_str())).collect();
        assert_eq!(chain, vec![("c1", "c2"), ("c2", "c3"), ("c3", "c4"), ("c4", "c5")]);
        assert_eq!(b.node_lengths, ints(&[1, 1, 1, 1]));
    }

    #[test]
    fn origin_building() {
        let b = build_building(&curve(0, 0)).unwrap();
        assert_eq!(b.graph.pieces().len(), 1);
        assert_eq!(b.graph.pieces()[0].levels, Multilevel::at(0, 0));
        assert!(b.graph.nodes().is_empty());
        assert_eq!(b.graph.ends().len(), 2);
        assert_eq!(describe_building(&b).lines().count(), 1);
    }

    #[test]
    fn ray_three_two_building() {
        let b = build_building(&curve(3, 2)).unwrap();
        let levels: Vec<(Multilevel, bool)> = b.graph.pieces().iter().map(|p| (p.levels, p.trivial)).collect();
        assert_eq!(
            levels,
            vec![
                (Multilevel::at(1, 0), false),
                (Multilevel::at(2, 1), true),
                (Multilevel::at(3, 2), false),
                (Multilevel::at(3, 3), true),
            ]
        );
    }

    #[test]
    fn fragment_lengths_sum() {
        let c = curve(7, 4);
        let b = build_building(&c).unwrap();
        let segment_total: Rational = b
            .graph
            .nodes()
            .iter()
            .zip(&b.node_lengths)
            .filter(|(n, _)| n.contact == LatticeVector::new(1, 1))
            .map(|(_, l)| l.clone())
            .sum();
        assert_eq!(segment_total, c.segments()[0].length);
    }

    #[test]
    fn extra_level_only_adds_trivial_pieces() {
        let c = curve(4, 3);
        let base = build_building(&c).unwrap();
        let refined = extract_levels(&c).refined(&[2.into()]).unwrap();
        let more = build_building_with_levels(&c, &refined).unwrap();
        let nontrivial = |b: &Building| -> Vec<Point> {
            b.graph.pieces().iter().zip(&b.positions).filter(|(p, _)| !p.trivial).map(|(_, x)| x.clone()).collect()
        };
        assert_eq!(nontrivial(&base), nontrivial(&more));
        assert!(more.graph.pieces().len() >= base.graph.pieces().len());
        assert!(more.graph.pieces().iter().all(|p| p.levels.0.iter().all(|c| c.at().is_some())));
    }

    #[test]
    fn missing_level_is_rejected() {
        let c = curve(4, 3);
        let partial = LevelStructure::new(ints(&[1, 4])).unwrap();
        assert_eq!(
            build_building_with_levels(&c, &partial),
            Err(BuildingError::MissingLevel(3.into()))
        );
    }

    #[test]
    fn describe_is_stable() {
        let b = build_building(&curve(4, 3)).unwrap();
        let text = describe_building(&b);
        assert_eq!(text, describe_building(&b));
        assert!(text.contains("piece c4 level (3,2) nontrivial at (4,3) ends (1,0)"));
        assert!(text.contains("piece c2 level (1..2,1) trivial at (2,1)"));
        assert!(text.starts_with("levels m=3 l=[1,3,4]\n"));
    }

    #[test]
    fn graph_json_round_trip() {
        let b = build_building(&curve(4, 3)).unwrap();
        let json = serde_json::to_value(&b.graph).unwrap();
        assert_eq!(json["pieces"][1]["levels"], serde_json::json!([{"between": [1, 2]}, {"at": 1}]));
        let back: LeveledDualGraph = serde_json::from_value(json).unwrap();
        assert_eq!(back, b.graph);
    }

    #[test]
    fn graph_validation_errors() {
        let piece = |id: &str, a, b, trivial| Piece { id: id.into(), levels: Multilevel::at(a, b), trivial };
        let node = |id: &str, t: &str, h: &str, c: (i64, i64)| Node {
            id: id.into(),
            tail: t.into(),
            head: h.into(),
            contact: LatticeVector::new(c.0, c.1),
        };
        let gap = LeveledDualGraph::new(2, vec![piece("a", 1, 0, false), piece("b", 2, 1, false)], vec![node("n", "a", "b", (0, 1))], vec![]);
        assert!(matches!(gap, Err(GraphError::ZeroContactLevelGap { direction: 0, .. })));
        let lonely = LeveledDualGraph::new(1, vec![piece("a", 1, 0, true)], vec![], vec![]);
        assert!(matches!(lonely, Err(GraphError::TrivialNotCylinder(_))));
        let split = LeveledDualGraph::new(1, vec![piece("a", 1, 0, false), piece("b", 1, 1, false)], vec![], vec![]);
        assert_eq!(split, Err(GraphError::Disconnected));
        let range = LeveledDualGraph::new(1, vec![piece("a", 2, 0, false)], vec![], vec![]);
        assert!(matches!(range, Err(GraphError::LevelOutOfRange { .. })));
        let bad_between = serde_json::json!({
            "num_levels": 3,
            "pieces": [{"id": "a", "levels": [{"between": [0, 2]}, {"at": 0}], "trivial": false}],
            "nodes": [], "ends": []
        });
        assert!(serde_json::from_value::<LeveledDualGraph>(bad_between).is_err());
    }
}
