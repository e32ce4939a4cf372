//! Weighted plumbing forests and their exact linear-algebraic invariants.
//!
//! A plumbing graph is a finite forest whose vertices carry integer weights.
//! All invariants (determinant, signature, continued fractions downstream)
//! are computed in exact arithmetic; no floating point is used anywhere.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::matrix::{IntMatrix, Signature};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(VertexId),
    #[error("self loop at `{0}`")]
    SelfLoop(VertexId),
    #[error("repeated edge `{0} {1}`")]
    MultiEdge(VertexId, VertexId),
    #[error("the edge set contains a cycle")]
    Cycle,
    #[error("graph is not connected")]
    NotConnected,
    #[error("rooted graphs must be nonempty")]
    EmptyRooted,
    #[error("not in normal form: vertex `{0}` lies on a linear chain with weight > -2")]
    NotNormalForm(VertexId),
}

/// Vertex identifier: a nonempty alphanumeric token in the text format.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(s: impl Into<String>) -> Self {
        let s = s.into();
        assert!(!s.is_empty(), "vertex id must be nonempty");
        VertexId(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    Isolated,
    Final,
    Internal,
}

/// A finite weighted forest. Immutable from the outside; the move calculus
/// produces rewritten copies.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PlumbingGraph {
    weights: BTreeMap<VertexId, i64>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl PlumbingGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_parts(
        vertices: impl IntoIterator<Item = (VertexId, i64)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty();
        for (id, w) in vertices {
            if g.weights.contains_key(&id) {
                return Err(GraphError::DuplicateVertex(id));
            }
            g.adj.insert(id.clone(), BTreeSet::new());
            g.weights.insert(id, w);
        }
        for (a, b) in edges {
            g.insert_edge(a, b)?;
        }
        Ok(g)
    }

    /// Convenience constructor for a linear chain with the given weights;
    /// vertices are named `c0`, `c1`, ...
    pub fn chain(weights: &[i64]) -> Self {
        let verts: Vec<_> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (VertexId::new(format!("c{i}")), w))
            .collect();
        let edges: Vec<_> = (1..weights.len())
            .map(|i| {
                (
                    VertexId::new(format!("c{}", i - 1)),
                    VertexId::new(format!("c{i}")),
                )
            })
            .collect();
        Self::from_parts(verts, edges).expect("chain is always a valid forest")
    }

    fn insert_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if !self.weights.contains_key(&a) {
            return Err(GraphError::UnknownVertex(a));
        }
        if !self.weights.contains_key(&b) {
            return Err(GraphError::UnknownVertex(b));
        }
        if self.adj[&a].contains(&b) {
            return Err(GraphError::MultiEdge(a, b));
        }
        if self.connected_to(&a, &b) {
            return Err(GraphError::Cycle);
        }
        self.adj.get_mut(&a).unwrap().insert(b.clone());
        self.adj.get_mut(&b).unwrap().insert(a);
        Ok(())
    }

    fn connected_to(&self, a: &VertexId, b: &VertexId) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([a.clone()]);
        seen.insert(a.clone());
        while let Some(v) = queue.pop_front() {
            if &v == b {
                return true;
            }
            for u in &self.adj[&v] {
                if seen.insert(u.clone()) {
                    queue.push_back(u.clone());
                }
            }
        }
        false
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.weights.contains_key(v)
    }

    pub fn weight(&self, v: &VertexId) -> Result<i64, GraphError> {
        self.weights
            .get(v)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()))
    }

    /// Vertex ids in the canonical (sorted) order used for matrices.
    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.weights.keys().cloned().collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, i64)> {
        self.weights.iter().map(|(v, &w)| (v, w))
    }

    /// Edges with each pair ordered and the list sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (v, nbrs) in &self.adj {
            for u in nbrs {
                if v < u {
                    out.push((v.clone(), u.clone()));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: &VertexId) -> impl Iterator<Item = &VertexId> {
        self.adj.get(v).into_iter().flatten()
    }

    pub fn valency(&self, v: &VertexId) -> usize {
        self.adj.get(v).map_or(0, |s| s.len())
    }

    pub fn has_edge(&self, a: &VertexId, b: &VertexId) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(b))
    }

    pub(crate) fn set_weight(&mut self, v: &VertexId, w: i64) {
        *self.weights.get_mut(v).expect("vertex present") = w;
    }

    pub(crate) fn add_vertex(&mut self, id: VertexId, w: i64) -> Result<(), GraphError> {
        if self.weights.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.adj.insert(id.clone(), BTreeSet::new());
        self.weights.insert(id, w);
        Ok(())
    }

    pub(crate) fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        self.insert_edge(a, b)
    }

    pub(crate) fn remove_vertex(&mut self, v: &VertexId) {
        if let Some(nbrs) = self.adj.remove(v) {
            for u in nbrs {
                self.adj.get_mut(&u).unwrap().remove(v);
            }
        }
        self.weights.remove(v);
    }

    /// Vertex ids of each connected component, sorted by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.weights.keys() {
            if seen.contains(v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([v.clone()]);
            while let Some(x) = queue.pop_front() {
                if !comp.insert(x.clone()) {
                    continue;
                }
                seen.insert(x.clone());
                for u in &self.adj[&x] {
                    if !comp.contains(u) {
                        queue.push_back(u.clone());
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The subgraph induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> PlumbingGraph {
        let mut g = Self::empty();
        for v in keep {
            g.adj.insert(v.clone(), BTreeSet::new());
            g.weights.insert(v.clone(), self.weights[v]);
        }
        for v in keep {
            for u in &self.adj[v] {
                if keep.contains(u) {
                    g.adj.get_mut(v).unwrap().insert(u.clone());
                }
            }
        }
        g
    }

    /// The graph with one vertex (and its edges) removed.
    pub fn without_vertex(&self, v: &VertexId) -> PlumbingGraph {
        let keep: BTreeSet<_> = self.weights.keys().filter(|u| *u != v).cloned().collect();
        self.induced(&keep)
    }

    /// True when every vertex has valency at most two, i.e. the forest is a
    /// disjoint union of chains.
    pub fn is_linear(&self) -> bool {
        self.weights.keys().all(|v| self.valency(v) <= 2)
    }

    /// A vertex belongs to some linear chain exactly when its valency is at
    /// most two.
    pub fn on_chain(&self, v: &VertexId) -> bool {
        self.valency(v) <= 2
    }

    /// Normal form: the empty graph, a single 0-weighted vertex, or a graph
    /// in which every vertex on a linear chain has weight at most -2.
    pub fn is_normal_form(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        if self.vertex_count() == 1 {
            let (_, w) = self.vertices().next().unwrap();
            return w == 0 || w <= -2;
        }
        self.vertices()
            .all(|(v, w)| !self.on_chain(v) || w <= -2)
    }

    /// First vertex violating the normal-form chain condition, if any.
    pub fn normal_form_violation(&self) -> Option<VertexId> {
        if self.vertex_count() == 1 {
            let (v, w) = self.vertices().next().unwrap();
            return if w == 0 || w <= -2 {
                None
            } else {
                Some(v.clone())
            };
        }
        self.vertices()
            .find(|(v, w)| self.on_chain(v) && *w > -2)
            .map(|(v, _)| v.clone())
    }

    /// Mints `count` ids with the given prefix that do not collide with any
    /// existing vertex.
    pub fn fresh_ids(&self, prefix: &str, count: usize) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(count);
        let mut k = 0usize;
        while out.len() < count {
            let id = VertexId::new(format!("{prefix}{k}"));
            if !self.weights.contains_key(&id) && !out.contains(&id) {
                out.push(id);
            }
            k += 1;
        }
        out
    }
}

/// A connected plumbing graph with a distinguished vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootedGraph {
    graph: PlumbingGraph,
    root: VertexId,
}

impl RootedGraph {
    pub fn new(graph: PlumbingGraph, root: VertexId) -> Result<Self, GraphError> {
        if graph.is_empty() {
            return Err(GraphError::EmptyRooted);
        }
        if !graph.contains(&root) {
            return Err(GraphError::UnknownVertex(root));
        }
        if !graph.is_connected() {
            return Err(GraphError::NotConnected);
        }
        Ok(Self { graph, root })
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn root(&self) -> &VertexId {
        &self.root
    }

    pub fn into_parts(self) -> (PlumbingGraph, VertexId) {
        (self.graph, self.root)
    }
}

/// Intersection matrix of the graph: weights on the diagonal, 1 for each
/// edge, rows and columns in sorted-id order.
pub fn intersection_matrix(g: &PlumbingGraph) -> IntMatrix {
    let ids = g.vertex_ids();
    let mut m = IntMatrix::zero(ids.len());
    for (i, v) in ids.iter().enumerate() {
        m.set(i, i, BigInt::from(g.weight(v).unwrap()));
        for u in g.neighbors(v) {
            let j = ids.binary_search(u).unwrap();
            m.set(i, j, BigInt::from(1));
        }
    }
    m
}

/// Exact determinant of the intersection form; det(∅) = 1.
pub fn determinant(g: &PlumbingGraph) -> BigInt {
    intersection_matrix(g).determinant()
}

/// Exact inertia (b+, b-, b0) of the intersection form.
pub fn signature(g: &PlumbingGraph) -> Signature {
    intersection_matrix(g).signature()
}

/// I(Γ) = Σ (-3 - w(v)) over all vertices.
pub fn invariant_i(g: &PlumbingGraph) -> i64 {
    g.vertices().map(|(_, w)| -3 - w).sum()
}

pub fn classify_vertex(g: &PlumbingGraph, v: &VertexId) -> Result<VertexClass, GraphError> {
    if !g.contains(v) {
        return Err(GraphError::UnknownVertex(v.clone()));
    }
    Ok(match g.valency(v) {
        0 => VertexClass::Isolated,
        1 => VertexClass::Final,
        _ => VertexClass::Internal,
    })
}

/// Linear complexity: the minimal number of vertices whose removal leaves a
/// linear graph, computed per component; lc(∅) = -1. Defined on normal
/// forms only.
pub fn linear_complexity(g: &PlumbingGraph) -> Result<i64, GraphError> {
    if let Some(v) = g.normal_form_violation() {
        return Err(GraphError::NotNormalForm(v));
    }
    if g.is_empty() {
        return Ok(-1);
    }
    let mut total = 0i64;
    for comp in g.components() {
        total += component_lc(&g.induced(&comp));
    }
    Ok(total)
}

fn component_lc(g: &PlumbingGraph) -> i64 {
    if g.is_linear() {
        return 0;
    }
    let ids = g.vertex_ids();
    for k in 1..=ids.len() {
        if subsets_of_size(&ids, k).any(|drop| {
            let keep: BTreeSet<_> = ids.iter().filter(|v| !drop.contains(v)).cloned().collect();
            g.induced(&keep).is_linear()
        }) {
            return k as i64;
        }
    }
    unreachable!("removing all vertices always leaves a linear graph")
}

fn subsets_of_size<'a>(
    items: &'a [VertexId],
    k: usize,
) -> impl Iterator<Item = Vec<&'a VertexId>> + 'a {
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out: Vec<&VertexId> = idx.iter().map(|&i| &items[i]).collect();
        // Advance the combination.
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] + 1 <= n - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Canonical encoding: equal strings exactly for isomorphic weighted
/// forests. Each tree is encoded by the AHU scheme rooted at its center
/// (taking the lexicographically smaller of the two encodings for
/// bicentral trees); component encodings are sorted.
pub fn canonical_form(g: &PlumbingGraph) -> String {
    let mut parts: Vec<String> = g
        .components()
        .iter()
        .map(|comp| {
            let tree = g.induced(comp);
            let centers = tree_centers(&tree);
            centers
                .iter()
                .map(|c| encode_rooted(&tree, c, None))
                .min()
                .unwrap()
        })
        .collect();
    parts.sort();
    parts.join("|")
}

/// AHU encoding of a rooted tree, weights included.
pub fn canonical_form_rooted(rg: &RootedGraph) -> String {
    encode_rooted(rg.graph(), rg.root(), None)
}

fn encode_rooted(g: &PlumbingGraph, v: &VertexId, parent: Option<&VertexId>) -> String {
    let mut children: Vec<String> = g
        .neighbors(v)
        .filter(|u| Some(*u) != parent)
        .map(|u| encode_rooted(g, u, Some(v)))
        .collect();
    children.sort();
    format!("({}{})", g.weight(v).unwrap(), children.concat())
}

/// Centers of a tree by iterated leaf stripping (one or two vertices).
fn tree_centers(g: &PlumbingGraph) -> Vec<VertexId> {
    let n = g.vertex_count();
    if n <= 2 {
        return g.vertex_ids();
    }
    let mut degree: BTreeMap<VertexId, usize> =
        g.vertex_ids().into_iter().map(|v| {
            let d = g.valency(&v);
            (v, d)
        }).collect();
    let mut leaves: Vec<VertexId> = degree
        .iter()
        .filter(|(_, &d)| d <= 1)
        .map(|(v, _)| v.clone())
        .collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for v in &leaves {
            degree.remove(v);
            for u in g.neighbors(v) {
                if let Some(d) = degree.get_mut(u) {
                    *d -= 1;
                    if *d == 1 {
                        next.push(u.clone());
                    }
                }
            }
        }
        leaves = next;
    }
    leaves
}
