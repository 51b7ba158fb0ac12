//! Quivers with framed and gauge nodes, frozen (dashed) edges and a
//! superpotential, and mutation at a gauge node.
//!
//! JSON form:
//!
//! ```json
//! {
//!   "nodes": [{"id": "E", "kind": "framed", "label": "E", "rank": 5},
//!             {"id": "gauge", "kind": "gauge", "rank": 3}],
//!   "edges": [{"id": "X", "src": "gauge", "dst": "E", "frozen": false, "label": "X"}],
//!   "superpotential": [{"coefficient": "1", "cycle": ["P", "X", "A"]}]
//! }
//! ```
//!
//! A superpotential cycle lists edge ids along a closed directed walk.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("node `{0}` is not a gauge node")]
    NotGaugeNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown edge `{0}` in superpotential")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("gauge node `{0}` must have rank >= 1")]
    ZeroGaugeRank(String),
    #[error("superpotential term {index} is not a closed directed walk")]
    OpenCycle { index: usize },
    #[error("invalid ranks: {0}")]
    RankError(String),
    #[error("mutation at `{node}` would give rank {rank}")]
    NonPositiveRank { node: String, rank: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    Framed { label: String, rank: usize },
    Gauge { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(flatten)]
    pub kind: NodeKind,
}

impl Node {
    pub fn framed(id: &str, rank: usize) -> Self {
        Node { id: id.to_string(), kind: NodeKind::Framed { label: id.to_string(), rank } }
    }

    pub fn gauge(id: &str, rank: usize) -> Self {
        Node { id: id.to_string(), kind: NodeKind::Gauge { rank } }
    }

    pub fn rank(&self) -> usize {
        match &self.kind {
            NodeKind::Framed { rank, .. } | NodeKind::Gauge { rank } => *rank,
        }
    }

    pub fn is_gauge(&self) -> bool {
        matches!(self.kind, NodeKind::Gauge { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub src: String,
    pub dst: String,
    #[serde(default)]
    pub frozen: bool,
    #[serde(default)]
    pub label: String,
}

impl Edge {
    pub fn new(id: &str, src: &str, dst: &str) -> Self {
        Edge { id: id.to_string(), src: src.to_string(), dst: dst.to_string(), frozen: false, label: id.to_string() }
    }

    pub fn frozen(id: &str, src: &str, dst: &str) -> Self {
        Edge { frozen: true, ..Edge::new(id, src, dst) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: Rat,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuiver", into = "RawQuiver")]
pub struct Quiver {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    superpotential: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct RawQuiver {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    #[serde(default)]
    superpotential: Vec<Term>,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = QuiverError;
    fn try_from(raw: RawQuiver) -> Result<Self, Self::Error> {
        Quiver::new(raw.nodes, raw.edges, raw.superpotential)
    }
}

impl From<Quiver> for RawQuiver {
    fn from(q: Quiver) -> Self {
        RawQuiver { nodes: q.nodes, edges: q.edges, superpotential: q.superpotential }
    }
}

impl Quiver {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, superpotential: Vec<Term>) -> Result<Self, QuiverError> {
        let mut ids = BTreeSet::new();
        for n in &nodes {
            if !ids.insert(n.id.clone()) {
                return Err(QuiverError::DuplicateId(n.id.clone()));
            }
            if n.is_gauge() && n.rank() == 0 {
                return Err(QuiverError::ZeroGaugeRank(n.id.clone()));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for e in &edges {
            for end in [&e.src, &e.dst] {
                if !ids.contains(end) {
                    return Err(QuiverError::UnknownNode(end.clone()));
                }
            }
            if !edge_ids.insert(e.id.clone()) {
                return Err(QuiverError::DuplicateId(e.id.clone()));
            }
        }
        let q = Quiver { nodes, edges, superpotential };
        for (index, t) in q.superpotential.iter().enumerate() {
            let walk: Option<Vec<&Edge>> = t.cycle.iter().map(|id| q.edge(id)).collect();
            let walk = match walk {
                Some(w) => w,
                None => {
                    let bad = t.cycle.iter().find(|id| q.edge(id).is_none()).unwrap();
                    return Err(QuiverError::UnknownEdge(bad.clone()));
                }
            };
            let closed = !walk.is_empty() && (0..walk.len()).all(|i| walk[i].dst == walk[(i + 1) % walk.len()].src);
            if !closed {
                return Err(QuiverError::OpenCycle { index });
            }
        }
        Ok(q)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn superpotential(&self) -> &[Term] {
        &self.superpotential
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn gauge_rank(&self, id: &str) -> Option<usize> {
        self.node(id).filter(|n| n.is_gauge()).map(Node::rank)
    }

    pub fn frozen_edges(&self) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.frozen).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("quiver serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Graphviz rendering: framed nodes are boxes, gauge nodes circles,
    /// frozen edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for n in &self.nodes {
            let (shape, text) = match &n.kind {
                NodeKind::Framed { label, rank } => ("box", format!("{label} ({rank})")),
                NodeKind::Gauge { rank } => ("circle", format!("{rank}")),
            };
            let _ = writeln!(out, "  \"{}\" [shape={shape}, label=\"{text}\"];", n.id);
        }
        for e in &self.edges {
            let style = if e.frozen { ", style=dashed" } else { "" };
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"{style}];", e.src, e.dst, e.label);
        }
        for t in &self.superpotential {
            let _ = writeln!(out, "  // W: {} * {}", t.coefficient, t.cycle.join(" "));
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_pax(m: usize, n: usize, r: usize) -> Result<Quiver, QuiverError> {
    if m < 2 || n < 1 || r < 1 || r >= m {
        return Err(QuiverError::RankError(format!("PAX needs 1 <= r <= m-1 and n >= 1, got m={m} n={n} r={r}")));
    }
    Quiver::new(
        vec![Node::framed("E", m), Node::framed("F", n), Node::gauge("gauge", r)],
        vec![Edge::new("X", "gauge", "E"), Edge::new("P", "F", "gauge"), Edge::frozen("A", "E", "F")],
        vec![Term { coefficient: Rat::one(), cycle: ids(&["P", "X", "A"]) }],
    )
}

pub fn build_paxy(m: usize, n: usize, s: usize) -> Result<Quiver, QuiverError> {
    if m < 2 || n < 1 || s < 1 || s >= m {
        return Err(QuiverError::RankError(format!("PAXY needs 1 <= s <= m-1 and n >= 1, got m={m} n={n} s={s}")));
    }
    Quiver::new(
        vec![Node::framed("E", m), Node::framed("F", n), Node::gauge("gauge", s)],
        vec![
            Edge::new("X", "E", "gauge"),
            Edge::new("Y", "gauge", "F"),
            Edge::new("P", "F", "E"),
            Edge::frozen("A", "E", "F"),
        ],
        vec![
            Term { coefficient: Rat::one(), cycle: ids(&["P", "A"]) },
            Term { coefficient: Rat::from_int(-1), cycle: ids(&["P", "X", "Y"]) },
        ],
    )
}

/// The Grassmannian-bundle quiver `F → r → E` without superpotential.
pub fn build_basic(m: usize, n: usize, r: usize) -> Result<Quiver, QuiverError> {
    if m < 2 || n < 1 || r < 1 || r >= m {
        return Err(QuiverError::RankError(format!("need 1 <= r <= m-1 and n >= 1, got m={m} n={n} r={r}")));
    }
    Quiver::new(
        vec![Node::framed("E", m), Node::framed("F", n), Node::gauge("gauge", r)],
        vec![Edge::new("X", "gauge", "E"), Edge::new("P", "F", "gauge")],
        vec![],
    )
}

/// Frame `m` feeding a rank-`r` gauge node attached by `n` arrows to the
/// Gulliksen–Negård quiver (gauge ranks 1 and 2, frame 4). Superpotential
/// terms are omitted.
pub fn build_gn_extension(m: usize, n: usize, r: usize) -> Result<Quiver, QuiverError> {
    if m < 1 || n < 1 || r < 1 {
        return Err(QuiverError::RankError(format!("need positive ranks, got m={m} n={n} r={r}")));
    }
    let mut edges = vec![Edge::new("a", "Fm", "gr")];
    edges.extend((1..=n).map(|i| Edge::new(&format!("b{i}"), "gr", "g1")));
    edges.extend((1..=2).map(|i| Edge::new(&format!("c{i}"), "g1", "F4")));
    edges.push(Edge::new("d", "F4", "g2"));
    edges.extend((1..=4).map(|i| Edge::new(&format!("e{i}"), "g2", "g1")));
    Quiver::new(
        vec![Node::framed("Fm", m), Node::gauge("gr", r), Node::gauge("g1", 1), Node::framed("F4", 4), Node::gauge("g2", 2)],
        edges,
        vec![],
    )
}

fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationResult {
    pub quiver: Quiver,
    pub new_gauge_rank: usize,
    pub n_in: usize,
    pub n_out: usize,
    pub added_edges: Vec<String>,
    pub reversed_edges: Vec<String>,
    pub deleted_pairs: Vec<(String, String)>,
    pub added_cycles: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

fn composite_id(a: &str, b: &str) -> String {
    format!("[{a}.{b}]")
}

fn reversed_id(a: &str) -> String {
    format!("{a}*")
}

/// Mutate `q` at gauge node `k`.
pub fn mutate(q: &Quiver, k: &str) -> Result<MutationResult, QuiverError> {
    let node = q.node(k).ok_or_else(|| QuiverError::UnknownNode(k.to_string()))?;
    if !node.is_gauge() {
        return Err(QuiverError::NotGaugeNode(k.to_string()));
    }
    let rank_of = |id: &str| q.node(id).map(Node::rank).unwrap_or(0);
    let incoming: Vec<&Edge> = q.edges.iter().filter(|e| e.dst == k && e.src != k).collect();
    let outgoing: Vec<&Edge> = q.edges.iter().filter(|e| e.src == k && e.dst != k).collect();
    let n_in: usize = incoming.iter().map(|e| rank_of(&e.src)).sum();
    let n_out: usize = outgoing.iter().map(|e| rank_of(&e.dst)).sum();
    let new_rank = n_in.max(n_out) as i64 - node.rank() as i64;
    if new_rank < 1 {
        return Err(QuiverError::NonPositiveRank { node: k.to_string(), rank: new_rank });
    }

    // Step 1: composites and reversal.
    let mut composites = Vec::new();
    for ein in &incoming {
        for eout in &outgoing {
            composites.push(Edge {
                id: composite_id(&ein.id, &eout.id),
                src: ein.src.clone(),
                dst: eout.dst.clone(),
                frozen: false,
                label: format!("{}{}", ein.label, eout.label),
            });
        }
    }
    let mut edges = Vec::new();
    let mut reversed_edges = Vec::new();
    for e in &q.edges {
        let touches = (e.src == k) != (e.dst == k);
        if touches && !e.frozen {
            reversed_edges.push(e.id.clone());
            edges.push(Edge {
                id: reversed_id(&e.id),
                src: e.dst.clone(),
                dst: e.src.clone(),
                frozen: false,
                label: format!("{}*", e.label),
            });
        } else {
            edges.push(e.clone());
        }
    }
    let renamed = |id: &str| {
        if reversed_edges.iter().any(|r| r == id) {
            reversed_id(id)
        } else {
            id.to_string()
        }
    };

    // Old terms: fold each pass i → k → j into its composite.
    let mut terms = Vec::new();
    for t in &q.superpotential {
        let walk: Vec<&Edge> = t.cycle.iter().map(|id| q.edge(id).expect("validated")).collect();
        let start = (0..walk.len()).find(|&i| walk[i].src != k);
        let Some(start) = start else {
            terms.push(Term { coefficient: t.coefficient.clone(), cycle: t.cycle.iter().map(|id| renamed(id)).collect() });
            continue;
        };
        let rotated: Vec<&Edge> = walk[start..].iter().chain(walk[..start].iter()).copied().collect();
        let mut cycle = Vec::new();
        let mut i = 0;
        while i < rotated.len() {
            let e = rotated[i];
            if e.dst == k && e.src != k && i + 1 < rotated.len() && rotated[i + 1].src == k {
                cycle.push(composite_id(&e.id, &rotated[i + 1].id));
                i += 2;
            } else {
                cycle.push(renamed(&e.id));
                i += 1;
            }
        }
        terms.push(Term { coefficient: t.coefficient.clone(), cycle });
    }

    // Step 4 (before deletion, so dead terms can be reported): new triangles.
    let mut added_cycles = Vec::new();
    for ein in &incoming {
        for eout in &outgoing {
            if ein.frozen || eout.frozen {
                continue;
            }
            let cycle = vec![composite_id(&ein.id, &eout.id), reversed_id(&eout.id), reversed_id(&ein.id)];
            added_cycles.push(cycle.clone());
            terms.push(Term { coefficient: Rat::from_int(-1), cycle });
        }
    }
    let added_edges: Vec<String> = composites.iter().map(|e| e.id.clone()).collect();
    edges.extend(composites);

    // Step 3: delete non-frozen 2-cycles that involve a new arrow.
    let mut deleted: BTreeSet<String> = BTreeSet::new();
    let mut deleted_pairs = Vec::new();
    for c in &added_edges {
        if deleted.contains(c) {
            continue;
        }
        let ce = edges.iter().find(|e| &e.id == c).unwrap().clone();
        let partner = edges.iter().find(|e| {
            !e.frozen && e.id != ce.id && !deleted.contains(&e.id) && e.src == ce.dst && e.dst == ce.src
        });
        if let Some(p) = partner {
            deleted.insert(ce.id.clone());
            deleted.insert(p.id.clone());
            deleted_pairs.push((ce.id.clone(), p.id.clone()));
        }
    }
    edges.retain(|e| !deleted.contains(&e.id));
    let mut warnings = Vec::new();
    terms.retain(|t| {
        let dead = t.cycle.iter().any(|id| deleted.contains(id));
        if dead {
            warnings.push(format!("superpotential term {} * {} removed with a deleted 2-cycle", t.coefficient, t.cycle.join(" ")));
        }
        !dead
    });
    added_cycles.retain(|c| !c.iter().any(|id| deleted.contains(id)));

    let nodes = q
        .nodes
        .iter()
        .map(|n| if n.id == k { Node::gauge(k, new_rank as usize) } else { n.clone() })
        .collect();
    let quiver = Quiver::new(nodes, edges, terms)?;
    Ok(MutationResult {
        quiver,
        new_gauge_rank: new_rank as usize,
        n_in,
        n_out,
        added_edges: added_edges.into_iter().filter(|e| !deleted.contains(e)).collect(),
        reversed_edges,
        deleted_pairs,
        added_cycles,
        warnings,
    })
}

/// Directed simple cycles with at most `max_len` edges, one per rotation
/// class, each starting at its lowest-indexed edge.
pub fn cycles(q: &Quiver, max_len: usize) -> Vec<Vec<String>> {
    fn extend(
        q: &Quiver,
        start: usize,
        path: &mut Vec<usize>,
        visited: &mut Vec<String>,
        max_len: usize,
        out: &mut Vec<Vec<String>>,
    ) {
        let last = &q.edges[*path.last().unwrap()];
        let origin = &q.edges[start].src;
        if &last.dst == origin {
            out.push(path.iter().map(|&i| q.edges[i].id.clone()).collect());
            return;
        }
        if path.len() == max_len || visited.contains(&last.dst) {
            return;
        }
        visited.push(last.dst.clone());
        for (i, e) in q.edges.iter().enumerate().skip(start + 1) {
            if e.src == last.dst {
                path.push(i);
                extend(q, start, path, visited, max_len, out);
                path.pop();
            }
        }
        visited.pop();
    }
    let mut out = Vec::new();
    for start in 0..q.edges.len() {
        let mut path = vec![start];
        let mut visited = vec![q.edges[start].src.clone()];
        extend(q, start, &mut path, &mut visited, max_len, &mut out);
    }
    out
}

type EdgeShape = (usize, usize, bool);

fn rotation_min(seq: Vec<EdgeShape>) -> Vec<EdgeShape> {
    (0..seq.len().max(1))
        .map(|r| seq[r.min(seq.len())..].iter().chain(seq[..r.min(seq.len())].iter()).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn compatible(a: &Node, b: &Node) -> bool {
    a.kind == b.kind
}

/// Structural equality up to relabelling nodes and edges, rotation of
/// superpotential cycles and a global sign of the superpotential.
pub fn quiver_equal(a: &Quiver, b: &Quiver) -> bool {
    if a.nodes.len() != b.nodes.len() || a.edges.len() != b.edges.len() || a.superpotential.len() != b.superpotential.len() {
        return false;
    }
    let b_edges: Vec<EdgeShape> = {
        let idx = |id: &str| b.nodes.iter().position(|n| n.id == id).unwrap();
        let mut v: Vec<_> = b.edges.iter().map(|e| (idx(&e.src), idx(&e.dst), e.frozen)).collect();
        v.sort();
        v
    };
    let b_terms = canonical_terms(b, &(0..b.nodes.len()).collect::<Vec<_>>());
    let mut perm = vec![usize::MAX; a.nodes.len()];
    let mut used = vec![false; b.nodes.len()];
    search(a, b, 0, &mut perm, &mut used, &b_edges, &b_terms)
}

/// A superpotential cycle as `(src, dst, frozen)` triples.
pub type CycleShape = Vec<(String, String, bool)>;

/// Superpotential as `(coefficient, cycle)` with each cycle in its least
/// rotation, sorted; node ids are kept, edge ids forgotten.
pub fn superpotential_signature(q: &Quiver) -> Vec<(Rat, CycleShape)> {
    let mut v: Vec<_> = q
        .superpotential
        .iter()
        .map(|t| {
            let seq: CycleShape = t
                .cycle
                .iter()
                .map(|id| {
                    let e = q.edge(id).expect("validated");
                    (e.src.clone(), e.dst.clone(), e.frozen)
                })
                .collect();
            let best = (0..seq.len())
                .map(|r| seq[r..].iter().chain(seq[..r].iter()).cloned().collect::<Vec<_>>())
                .min()
                .unwrap_or_default();
            (t.coefficient.clone(), best)
        })
        .collect();
    v.sort_by(|x, y| (&x.1, &x.0).cmp(&(&y.1, &y.0)));
    v
}

fn canonical_terms(q: &Quiver, perm: &[usize]) -> Vec<(Rat, Vec<EdgeShape>)> {
    let idx = |id: &str| perm[q.nodes.iter().position(|n| n.id == id).unwrap()];
    let mut v: Vec<_> = q
        .superpotential
        .iter()
        .map(|t| {
            let seq = t
                .cycle
                .iter()
                .map(|id| {
                    let e = q.edge(id).unwrap();
                    (idx(&e.src), idx(&e.dst), e.frozen)
                })
                .collect();
            (t.coefficient.clone(), rotation_min(seq))
        })
        .collect();
    v.sort_by(|x, y| (&x.1, &x.0).cmp(&(&y.1, &y.0)));
    v
}

fn search(
    a: &Quiver,
    b: &Quiver,
    i: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    b_edges: &[EdgeShape],
    b_terms: &[(Rat, Vec<EdgeShape>)],
) -> bool {
    if i == a.nodes.len() {
        let idx = |id: &str| perm[a.nodes.iter().position(|n| n.id == id).unwrap()];
        let mut ae: Vec<_> = a.edges.iter().map(|e| (idx(&e.src), idx(&e.dst), e.frozen)).collect();
        ae.sort();
        if ae != b_edges {
            return false;
        }
        let at = canonical_terms(a, perm);
        if at == b_terms {
            return true;
        }
        let mut flipped: Vec<_> = at.into_iter().map(|(c, s)| (-c, s)).collect();
        flipped.sort_by(|x, y| (&x.1, &x.0).cmp(&(&y.1, &y.0)));
        return flipped == b_terms;
    }
    for j in 0..b.nodes.len() {
        if !used[j] && compatible(&a.nodes[i], &b.nodes[j]) {
            used[j] = true;
            perm[i] = j;
            if search(a, b, i + 1, perm, used, b_edges, b_terms) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Compact summary used in reports: rank per node and edge counts.
pub fn summary(q: &Quiver) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for n in &q.nodes {
        out.insert(format!("rank:{}", n.id), n.rank());
    }
    out.insert("edges".into(), q.edges.len());
    out.insert("frozen".into(), q.frozen_edges().len());
    out.insert("terms".into(), q.superpotential.len());
    out
}
