//! The move calculus on plumbing graphs: blow-downs, 0-chain absorption,
//! splitting, reduction to normal form, negative continued fractions and
//! orientation reversal (dual graphs).
//!
//! Reduction strategy: apply the moves with a fixed canonical ordering until
//! none applies, then renormalize any remaining linear component wholesale
//! through exact continued-fraction arithmetic. Graphs that stall outside
//! this fragment (a chain vertex of weight >= -1 inside a non-linear
//! component, or an S^1 x S^2 summand next to other components) raise
//! [`CalculusError::NotReduced`] naming the stuck vertex.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{canonical_form, determinant, GraphError, PlumbingGraph, RootedGraph, VertexId};
use crate::rational::ExtendedRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("cannot reduce to normal form: stuck at vertex `{at}`")]
    NotReduced { at: VertexId },
    #[error("continued fraction is indeterminate: det(graph) = det(graph - root) = 0")]
    Indeterminate0Over0,
    #[error("string of fraction requires p > q >= 1 coprime, got p={p}, q={q}")]
    BadFraction { p: BigInt, q: BigInt },
    #[error("weight {0} is not <= -2: not a normal-form string")]
    BadStringWeight(i64),
    #[error("not in normal form: vertex `{0}`")]
    NotNormalForm(VertexId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    BlowDownIsolated,
    BlowDownEnd,
    BlowDownInterior,
    ZeroChainAbsorb,
    Split,
}

/// A forward move removes vertices; a reverse move carries the insertion
/// data needed to invert the corresponding forward move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Forward { kind: MoveKind, at: VertexId },
    Reverse(ReverseMove),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReverseMove {
    /// Add an isolated vertex of weight `eps` (±1).
    InsertIsolated { id: VertexId, eps: i64 },
    /// Add a leaf of weight `eps` (±1) at `at`; `at` gains `eps`.
    InsertLeaf { at: VertexId, id: VertexId, eps: i64 },
    /// Subdivide the edge `a b` with a new vertex of weight `eps` (±1);
    /// both endpoints gain `eps`.
    Subdivide {
        a: VertexId,
        b: VertexId,
        id: VertexId,
        eps: i64,
    },
    /// Replace `at` (weight w) by `at` -- 0 -- `other` with weights
    /// `w - other_weight` and `other_weight`; the neighbors listed in
    /// `moved` migrate to `other`. Inverts a 0-chain absorption.
    InsertZeroChain {
        at: VertexId,
        zero_id: VertexId,
        other_id: VertexId,
        other_weight: i64,
        moved: Vec<VertexId>,
    },
    /// Add a new vertex `v_id` with a 0-weighted leaf `zero_id`, and edges
    /// from `v_id` to `attach` (each in a distinct component). Inverts a
    /// splitting move.
    AttachSplit {
        v_id: VertexId,
        v_weight: i64,
        zero_id: VertexId,
        attach: Vec<VertexId>,
    },
}

fn not_applicable<T>(msg: impl Into<String>) -> Result<T, CalculusError> {
    Err(CalculusError::MoveNotApplicable(msg.into()))
}

/// Applies a single move, checking its side conditions.
pub fn apply_move(g: &PlumbingGraph, m: &Move) -> Result<PlumbingGraph, CalculusError> {
    match m {
        Move::Forward { kind, at } => apply_forward(g, *kind, at),
        Move::Reverse(r) => apply_reverse(g, r),
    }
}

fn apply_forward(
    g: &PlumbingGraph,
    kind: MoveKind,
    at: &VertexId,
) -> Result<PlumbingGraph, CalculusError> {
    let w = g.weight(at)?;
    let valency = g.valency(at);
    let mut out = g.clone();
    match kind {
        MoveKind::BlowDownIsolated => {
            if w.abs() != 1 {
                return not_applicable(format!("vertex `{at}` has weight {w}, not ±1"));
            }
            if valency != 0 {
                return not_applicable(format!("vertex `{at}` is not isolated"));
            }
            out.remove_vertex(at);
        }
        MoveKind::BlowDownEnd => {
            if w.abs() != 1 {
                return not_applicable(format!("vertex `{at}` has weight {w}, not ±1"));
            }
            if valency != 1 {
                return not_applicable(format!("vertex `{at}` is not final"));
            }
            let nbr = g.neighbors(at).next().unwrap().clone();
            let nw = g.weight(&nbr)?;
            out.remove_vertex(at);
            out.set_weight(&nbr, nw - w);
        }
        MoveKind::BlowDownInterior => {
            if w.abs() != 1 {
                return not_applicable(format!("vertex `{at}` has weight {w}, not ±1"));
            }
            if valency != 2 {
                return not_applicable(format!("vertex `{at}` does not have exactly two neighbors"));
            }
            let nbrs: Vec<VertexId> = g.neighbors(at).cloned().collect();
            let (a, b) = (nbrs[0].clone(), nbrs[1].clone());
            out.remove_vertex(at);
            out.set_weight(&a, g.weight(&a)? - w);
            out.set_weight(&b, g.weight(&b)? - w);
            out.add_edge(a, b)?;
        }
        MoveKind::ZeroChainAbsorb => {
            if w != 0 {
                return not_applicable(format!("vertex `{at}` has weight {w}, not 0"));
            }
            if valency != 2 {
                return not_applicable(format!("vertex `{at}` does not have exactly two neighbors"));
            }
            let nbrs: Vec<VertexId> = g.neighbors(at).cloned().collect();
            // The lexicographically smaller neighbor survives the merge.
            let (keep, gone) = if nbrs[0] < nbrs[1] {
                (nbrs[0].clone(), nbrs[1].clone())
            } else {
                (nbrs[1].clone(), nbrs[0].clone())
            };
            let merged = g.weight(&keep)? + g.weight(&gone)?;
            let gone_nbrs: Vec<VertexId> = g
                .neighbors(&gone)
                .filter(|u| *u != at)
                .cloned()
                .collect();
            out.remove_vertex(at);
            out.remove_vertex(&gone);
            out.set_weight(&keep, merged);
            for u in gone_nbrs {
                out.add_edge(keep.clone(), u)?;
            }
        }
        MoveKind::Split => {
            if w != 0 {
                return not_applicable(format!("vertex `{at}` has weight {w}, not 0"));
            }
            if valency != 1 {
                return not_applicable(format!("vertex `{at}` is not linked to a single vertex"));
            }
            let nbr = g.neighbors(at).next().unwrap().clone();
            out.remove_vertex(at);
            out.remove_vertex(&nbr);
        }
    }
    Ok(out)
}

fn apply_reverse(g: &PlumbingGraph, r: &ReverseMove) -> Result<PlumbingGraph, CalculusError> {
    let mut out = g.clone();
    match r {
        ReverseMove::InsertIsolated { id, eps } => {
            if eps.abs() != 1 {
                return not_applicable("inserted isolated vertex must have weight ±1");
            }
            out.add_vertex(id.clone(), *eps)?;
        }
        ReverseMove::InsertLeaf { at, id, eps } => {
            if eps.abs() != 1 {
                return not_applicable("inserted leaf must have weight ±1");
            }
            let w = g.weight(at)?;
            out.add_vertex(id.clone(), *eps)?;
            out.add_edge(at.clone(), id.clone())?;
            out.set_weight(at, w + eps);
        }
        ReverseMove::Subdivide { a, b, id, eps } => {
            if eps.abs() != 1 {
                return not_applicable("subdividing vertex must have weight ±1");
            }
            if !g.has_edge(a, b) {
                return not_applicable(format!("no edge `{a} {b}` to subdivide"));
            }
            let (wa, wb) = (g.weight(a)?, g.weight(b)?);
            out = remove_edge(&out, a, b);
            out.add_vertex(id.clone(), *eps)?;
            out.add_edge(a.clone(), id.clone())?;
            out.add_edge(id.clone(), b.clone())?;
            out.set_weight(a, wa + eps);
            out.set_weight(b, wb + eps);
        }
        ReverseMove::InsertZeroChain {
            at,
            zero_id,
            other_id,
            other_weight,
            moved,
        } => {
            let w = g.weight(at)?;
            for u in moved {
                if !g.has_edge(at, u) {
                    return not_applicable(format!("`{u}` is not a neighbor of `{at}`"));
                }
            }
            for u in moved {
                out = remove_edge(&out, at, u);
            }
            out.add_vertex(other_id.clone(), *other_weight)?;
            out.add_vertex(zero_id.clone(), 0)?;
            out.set_weight(at, w - other_weight);
            out.add_edge(at.clone(), zero_id.clone())?;
            out.add_edge(zero_id.clone(), other_id.clone())?;
            for u in moved {
                out.add_edge(other_id.clone(), u.clone())?;
            }
        }
        ReverseMove::AttachSplit {
            v_id,
            v_weight,
            zero_id,
            attach,
        } => {
            let comps = g.components();
            let mut used = BTreeSet::new();
            for a in attach {
                if !g.contains(a) {
                    return Err(GraphError::UnknownVertex(a.clone()).into());
                }
                let idx = comps.iter().position(|c| c.contains(a)).unwrap();
                if !used.insert(idx) {
                    return not_applicable("attachment vertices must lie in distinct components");
                }
            }
            out.add_vertex(v_id.clone(), *v_weight)?;
            out.add_vertex(zero_id.clone(), 0)?;
            out.add_edge(v_id.clone(), zero_id.clone())?;
            for a in attach {
                out.add_edge(v_id.clone(), a.clone())?;
            }
        }
    }
    Ok(out)
}

fn remove_edge(g: &PlumbingGraph, a: &VertexId, b: &VertexId) -> PlumbingGraph {
    let verts: Vec<_> = g.vertices().map(|(v, w)| (v.clone(), w)).collect();
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .filter(|(x, y)| !((x == a && y == b) || (x == b && y == a)))
        .collect();
    PlumbingGraph::from_parts(verts, edges).expect("removing an edge keeps a valid forest")
}

/// True for the empty graph, the single 0-vertex, and graphs whose chain
/// vertices all have weight <= -2.
pub fn is_normal_form(g: &PlumbingGraph) -> bool {
    g.is_normal_form()
}

/// Reduces a plumbing graph to its Neumann normal form.
///
/// Deterministic: moves are applied in a fixed order (isolated ±1 removals,
/// then end blow-downs, interior blow-downs, 0-chain absorptions and
/// splittings, each at the smallest vertex id). Components that stall as
/// linear graphs with weights above -2 are renormalized wholesale through
/// the exact continued fraction of the associated lens space.
pub fn normalize(g: &PlumbingGraph) -> Result<PlumbingGraph, CalculusError> {
    let mut cur = g.clone();
    loop {
        match find_forward_move(&cur) {
            Some(m) => cur = apply_move(&cur, &m)?,
            None => break,
        }
    }
    if cur.is_normal_form() {
        return Ok(cur);
    }
    // The move loop has stalled; rescue linear components by fraction
    // arithmetic and reject anything else that is still not normal.
    let mut out = cur.clone();
    let mut zero_witnesses: Vec<VertexId> = Vec::new();
    for comp in cur.components() {
        let sub = cur.induced(&comp);
        if is_zero_dot(&sub) {
            zero_witnesses.push(comp.first().unwrap().clone());
            for v in &comp {
                out.remove_vertex(v);
            }
            continue;
        }
        if sub.is_normal_form() {
            continue;
        }
        if !sub.is_linear() {
            let at = sub.normal_form_violation().expect("checked not normal");
            return Err(CalculusError::NotReduced { at });
        }
        let replacement = renormalize_linear(&sub)?;
        for v in &comp {
            out.remove_vertex(v);
        }
        match replacement {
            LinearNormalForm::Empty => {}
            LinearNormalForm::ZeroDot => zero_witnesses.push(comp.first().unwrap().clone()),
            LinearNormalForm::Chain(weights) => {
                let ids = out.fresh_ids("n", weights.len());
                for (id, &w) in ids.iter().zip(&weights) {
                    out.add_vertex(id.clone(), w)?;
                }
                for i in 1..ids.len() {
                    out.add_edge(ids[i - 1].clone(), ids[i].clone())?;
                }
            }
        }
    }
    match (zero_witnesses.len(), out.is_empty()) {
        (0, _) => Ok(out),
        (1, true) => Ok(PlumbingGraph::chain(&[0])),
        // An S^1 x S^2 summand next to other pieces has no normal form in
        // this fragment.
        _ => Err(CalculusError::NotReduced {
            at: zero_witnesses.into_iter().next().unwrap(),
        }),
    }
}

fn is_zero_dot(g: &PlumbingGraph) -> bool {
    g.vertex_count() == 1 && g.vertices().next().unwrap().1 == 0
}

fn find_forward_move(g: &PlumbingGraph) -> Option<Move> {
    let forward = |kind, at: &VertexId| Move::Forward {
        kind,
        at: at.clone(),
    };
    for (v, w) in g.vertices() {
        if w.abs() == 1 && g.valency(v) == 0 {
            return Some(forward(MoveKind::BlowDownIsolated, v));
        }
    }
    for (v, w) in g.vertices() {
        if w.abs() == 1 && g.valency(v) == 1 {
            return Some(forward(MoveKind::BlowDownEnd, v));
        }
    }
    for (v, w) in g.vertices() {
        if w.abs() == 1 && g.valency(v) == 2 {
            return Some(forward(MoveKind::BlowDownInterior, v));
        }
    }
    for (v, w) in g.vertices() {
        if w == 0 && g.valency(v) == 2 {
            return Some(forward(MoveKind::ZeroChainAbsorb, v));
        }
    }
    for (v, w) in g.vertices() {
        if w == 0 && g.valency(v) == 1 {
            return Some(forward(MoveKind::Split, v));
        }
    }
    None
}

enum LinearNormalForm {
    Empty,
    ZeroDot,
    Chain(Vec<i64>),
}

/// Normal form of a connected linear graph from its continued fraction:
/// cf = ∞ gives S^3 (empty), cf = 0 gives S^1 x S^2 (the 0-vertex), and
/// cf = -p/q gives the lens space L(p, q mod p) expanded back into a chain.
fn renormalize_linear(g: &PlumbingGraph) -> Result<LinearNormalForm, CalculusError> {
    let root = g
        .vertex_ids()
        .into_iter()
        .find(|v| g.valency(v) <= 1)
        .expect("a nonempty linear graph has an end");
    let cf = continued_fraction(&RootedGraph::new(g.clone(), root)?)?;
    if cf.is_infinite() {
        return Ok(LinearNormalForm::Empty);
    }
    if cf.is_zero() {
        return Ok(LinearNormalForm::ZeroDot);
    }
    // cf = -p/q with p > 0; reduce q modulo p into 1..p.
    let p = cf.numer().abs();
    let q = if cf.numer().is_negative() {
        cf.denom().clone()
    } else {
        -cf.denom().clone()
    };
    if p.is_one() {
        return Ok(LinearNormalForm::Empty);
    }
    let q = q.mod_floor(&p);
    Ok(LinearNormalForm::Chain(string_of_fraction(&p, &q)?))
}

/// Same boundary 3-manifold: equal canonical normal forms.
pub fn same_boundary(g1: &PlumbingGraph, g2: &PlumbingGraph) -> Result<bool, CalculusError> {
    Ok(canonical_form(&normalize(g1)?) == canonical_form(&normalize(g2)?))
}

/// The continued fraction det(Γ)/det(Γ - root) of a rooted graph.
pub fn continued_fraction(rg: &RootedGraph) -> Result<ExtendedRational, CalculusError> {
    let whole = determinant(rg.graph());
    let rest = determinant(&rg.graph().without_vertex(rg.root()));
    if whole.is_zero() && rest.is_zero() {
        return Err(CalculusError::Indeterminate0Over0);
    }
    Ok(ExtendedRational::new(whole, rest).expect("not 0/0"))
}

/// The unique string (a_1, ..., a_n), all a_i <= -2, whose negative
/// continued fraction equals -p/q; computed by the negative-remainder
/// Euclidean algorithm. Requires p > q >= 1 coprime.
pub fn string_of_fraction(p: &BigInt, q: &BigInt) -> Result<Vec<i64>, CalculusError> {
    let bad = || CalculusError::BadFraction {
        p: p.clone(),
        q: q.clone(),
    };
    if !(p > q && *q >= BigInt::one() && p.gcd(q).is_one()) {
        return Err(bad());
    }
    let (mut p, mut q) = (p.clone(), q.clone());
    let mut out = Vec::new();
    while !q.is_zero() {
        let a = p.div_ceil(&q);
        out.push(-i64::try_from(&a).map_err(|_| bad())?);
        let next_q = &a * &q - &p;
        p = q;
        q = next_q;
    }
    Ok(out)
}

/// Evaluates [a_1, ..., a_n]^- = a_1 - 1/(a_2 - ...) exactly.
pub fn eval_string(s: &[i64]) -> ExtendedRational {
    let mut num = BigInt::one();
    let mut den = BigInt::zero();
    for &a in s.iter().rev() {
        // x -> a - 1/x: num/den -> (a*num - den)/num
        let new_num = BigInt::from(a) * &num - &den;
        den = std::mem::replace(&mut num, new_num);
    }
    ExtendedRational::new(num, den).expect("chain fractions are never 0/0")
}

/// The complementary string s* of a normal-form string s: the unique string
/// with 1/cf(s) + 1/cf(s*) = -1. If cf(s) = -p/q then cf(s*) = -p/(p-q).
pub fn complementary_string(s: &[i64]) -> Result<Vec<i64>, CalculusError> {
    for &a in s {
        if a > -2 {
            return Err(CalculusError::BadStringWeight(a));
        }
    }
    let cf = eval_string(s);
    let p = cf.numer().abs();
    let q = cf.denom().clone();
    string_of_fraction(&p, &(&p - &q))
}

/// Dual graph of a normal form: vertices not on a chain get weight
/// -w(v) - c(v); every maximal linear chain is replaced by its
/// complementary string, read off with fraction arithmetic.
pub fn dual(g: &PlumbingGraph) -> Result<PlumbingGraph, CalculusError> {
    if let Some(v) = g.normal_form_violation() {
        return Err(CalculusError::NotNormalForm(v));
    }
    if g.is_empty() || is_zero_dot(g) {
        return Ok(g.clone());
    }
    let nodes: BTreeSet<VertexId> = g
        .vertex_ids()
        .into_iter()
        .filter(|v| !g.on_chain(v))
        .collect();
    let mut verts: Vec<(VertexId, i64)> = Vec::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for v in &nodes {
        let chain_neighbors = g.neighbors(v).filter(|u| g.on_chain(u)).count() as i64;
        verts.push((v.clone(), -g.weight(v)? - chain_neighbors));
        for u in g.neighbors(v) {
            if nodes.contains(u) && v < u {
                edges.push((v.clone(), u.clone()));
            }
        }
    }
    let chain_vertices: BTreeSet<VertexId> = g
        .vertex_ids()
        .into_iter()
        .filter(|v| g.on_chain(v))
        .collect();
    let chain_graph = g.induced(&chain_vertices);
    for (k, comp) in chain_graph.components().iter().enumerate() {
        let path = order_path(&chain_graph.induced(comp));
        // Node attachments at the two ends of the chain, if any.
        let first_anchor = g
            .neighbors(&path[0])
            .find(|u| nodes.contains(u))
            .cloned();
        let last_anchor = g
            .neighbors(path.last().unwrap())
            .find(|u| nodes.contains(u) && (path.len() > 1 || Some(*u) != first_anchor.as_ref()))
            .cloned();
        let weights: Vec<i64> = path.iter().map(|v| g.weight(v).unwrap()).collect();
        let dual_weights = complementary_string(&weights)?;
        let ids: Vec<VertexId> = (0..dual_weights.len())
            .map(|i| VertexId::new(format!("d{k}x{i}")))
            .collect();
        for (id, &w) in ids.iter().zip(&dual_weights) {
            verts.push((id.clone(), w));
        }
        for i in 1..ids.len() {
            edges.push((ids[i - 1].clone(), ids[i].clone()));
        }
        if let Some(a) = first_anchor {
            edges.push((a, ids[0].clone()));
        }
        if let Some(a) = last_anchor {
            edges.push((a, ids.last().unwrap().clone()));
        }
    }
    let out = PlumbingGraph::from_parts(verts, edges)?;
    debug_assert!(out.is_normal_form());
    Ok(out)
}

/// Orders the vertices of a connected linear graph along its path. A single
/// vertex chain with two node attachments keeps both anchors distinct via
/// the caller's bookkeeping.
fn order_path(g: &PlumbingGraph) -> Vec<VertexId> {
    let ids = g.vertex_ids();
    if ids.len() == 1 {
        return ids;
    }
    let start = ids
        .iter()
        .filter(|v| g.valency(v) <= 1)
        .min()
        .expect("a finite path has ends")
        .clone();
    let mut path = vec![start.clone()];
    let mut prev: Option<VertexId> = None;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(&cur)
            .find(|u| Some(*u) != prev.as_ref())
            .cloned();
        match next {
            Some(n) => {
                path.push(n.clone());
                prev = Some(cur);
                cur = n;
            }
            None => break,
        }
    }
    path
}

/// The nine-vertex graph: center -1 with two -2 leaves and two -1 nodes,
/// each node carrying two -2 leaves.
#[cfg(test)]
pub(crate) fn nine_vertex_graph() -> PlumbingGraph {
    let vid = VertexId::new;
    PlumbingGraph::from_parts(
        vec![
            (vid("c"), -1),
            (vid("p"), -2),
            (vid("q"), -2),
            (vid("m"), -1),
            (vid("m1"), -2),
            (vid("m2"), -2),
            (vid("n"), -1),
            (vid("n1"), -2),
            (vid("n2"), -2),
        ],
        vec![
            (vid("c"), vid("p")),
            (vid("c"), vid("q")),
            (vid("c"), vid("m")),
            (vid("c"), vid("n")),
            (vid("m"), vid("m1")),
            (vid("m"), vid("m2")),
            (vid("n"), vid("n1")),
            (vid("n"), vid("n2")),
        ],
    )
    .unwrap()
}
