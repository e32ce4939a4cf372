//! Shared generators for the randomized suites. All randomness is seeded
//! ChaCha so every test is reproducible; set PLUMB_TEST_SEED to override.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use plumb::blocks::{join, make_block, BuildingBlock};
use plumb::calculus::{apply_move, complementary_string, normalize, Move, ReverseMove};
use plumb::graph::{PlumbingGraph, RootedGraph, VertexId};
use plumb::seifert::SeifertInvariants;

pub fn rng(default_seed: u64) -> ChaCha8Rng {
    let seed = std::env::var("PLUMB_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default_seed);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vid(s: impl Into<String>) -> VertexId {
    VertexId::new(s)
}

/// A normal-form string: weights in [-7, -2], length 1..=max_len.
pub fn random_string(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<i64> {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| rng.gen_range(-7..=-2)).collect()
}

/// A random normal-form forest with at most `max_vertices` vertices:
/// random tree shapes, chain vertices weighted in [-7, -2], node vertices
/// in [-7, 2].
pub fn random_normal_forest(rng: &mut ChaCha8Rng, max_vertices: usize) -> PlumbingGraph {
    let components = rng.gen_range(1..=3.min(max_vertices));
    let mut budget = rng.gen_range(components..=max_vertices);
    let mut verts: Vec<(VertexId, i64)> = Vec::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut counter = 0usize;
    for _ in 0..components {
        let size = if budget == 0 {
            break;
        } else {
            rng.gen_range(1..=budget)
        };
        budget -= size;
        let ids: Vec<VertexId> = (0..size)
            .map(|_| {
                counter += 1;
                vid(format!("v{counter}"))
            })
            .collect();
        for id in &ids {
            verts.push((id.clone(), 0));
        }
        for i in 1..size {
            let parent = rng.gen_range(0..i);
            edges.push((ids[parent].clone(), ids[i].clone()));
        }
    }
    let mut g = PlumbingGraph::from_parts(verts, edges).unwrap();
    for v in g.vertex_ids() {
        let w = if g.valency(&v) <= 2 {
            rng.gen_range(-7..=-2)
        } else {
            rng.gen_range(-7..=2)
        };
        g = reweight(&g, &v, w);
    }
    assert!(g.is_normal_form());
    g
}

fn reweight(g: &PlumbingGraph, v: &VertexId, w: i64) -> PlumbingGraph {
    let verts: Vec<_> = g
        .vertices()
        .map(|(id, old)| (id.clone(), if id == v { w } else { old }))
        .collect();
    PlumbingGraph::from_parts(verts, g.edges()).unwrap()
}

/// A random lc <= 1 normal-form graph: either a chain or a center with
/// final and internal legs.
pub fn random_lc1_graph(rng: &mut ChaCha8Rng, allow_chain: bool) -> PlumbingGraph {
    if allow_chain && rng.gen_bool(0.3) {
        return PlumbingGraph::chain(&random_string(rng, 8));
    }
    let center = vid("c");
    let mut verts = vec![(center.clone(), rng.gen_range(-7..=2))];
    let mut edges = Vec::new();
    let legs = rng.gen_range(3..=5);
    for i in 0..legs {
        let s = random_string(rng, 4);
        let ids: Vec<VertexId> = (0..s.len()).map(|j| vid(format!("l{i}x{j}"))).collect();
        for (id, &w) in ids.iter().zip(&s) {
            verts.push((id.clone(), w));
        }
        for j in 1..ids.len() {
            edges.push((ids[j - 1].clone(), ids[j].clone()));
        }
        // Attach at an end (final leg) or at an inner vertex (internal leg).
        let attach = if s.len() >= 3 && rng.gen_bool(0.3) {
            rng.gen_range(1..s.len() - 1)
        } else {
            0
        };
        edges.push((center.clone(), ids[attach].clone()));
    }
    let g = PlumbingGraph::from_parts(verts, edges).unwrap();
    assert!(g.is_normal_form());
    g
}

/// One random reverse move with fresh vertex ids, if any applies.
pub fn random_reverse_move(rng: &mut ChaCha8Rng, g: &PlumbingGraph) -> Move {
    let fresh = g.fresh_ids("r", 2);
    let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
    let ids = g.vertex_ids();
    let edges = g.edges();
    for _ in 0..32 {
        match rng.gen_range(0..5) {
            0 => {
                return Move::Reverse(ReverseMove::InsertIsolated {
                    id: fresh[0].clone(),
                    eps,
                })
            }
            1 if !ids.is_empty() => {
                let at = ids[rng.gen_range(0..ids.len())].clone();
                return Move::Reverse(ReverseMove::InsertLeaf {
                    at,
                    id: fresh[0].clone(),
                    eps,
                });
            }
            2 if !edges.is_empty() => {
                let (a, b) = edges[rng.gen_range(0..edges.len())].clone();
                return Move::Reverse(ReverseMove::Subdivide {
                    a,
                    b,
                    id: fresh[0].clone(),
                    eps,
                });
            }
            3 if !ids.is_empty() => {
                let at = ids[rng.gen_range(0..ids.len())].clone();
                let nbrs: Vec<VertexId> = g.neighbors(&at).cloned().collect();
                let moved: Vec<VertexId> = nbrs
                    .into_iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                let other_weight = rng.gen_range(-3..=3);
                return Move::Reverse(ReverseMove::InsertZeroChain {
                    at,
                    zero_id: fresh[0].clone(),
                    other_id: fresh[1].clone(),
                    other_weight,
                    moved,
                });
            }
            _ => {
                let comps = g.components();
                let mut attach: Vec<VertexId> = Vec::new();
                for c in &comps {
                    if rng.gen_bool(0.7) {
                        let v: Vec<&VertexId> = c.iter().collect();
                        attach.push(v[rng.gen_range(0..v.len())].clone());
                    }
                }
                return Move::Reverse(ReverseMove::AttachSplit {
                    v_id: fresh[0].clone(),
                    v_weight: rng.gen_range(-4..=4),
                    zero_id: fresh[1].clone(),
                    attach,
                });
            }
        }
    }
    Move::Reverse(ReverseMove::InsertIsolated {
        id: fresh[0].clone(),
        eps,
    })
}

/// Applies up to `count` reverse moves. If a sequence wanders outside the
/// reduction engine's fragment (normalize fails), it is regenerated.
pub fn perturb(rng: &mut ChaCha8Rng, g: &PlumbingGraph, count: usize) -> PlumbingGraph {
    for _ in 0..8 {
        let mut cur = g.clone();
        let mut applied = 0;
        let mut attempts = 0;
        while applied < count && attempts < 4 * count {
            attempts += 1;
            let m = random_reverse_move(rng, &cur);
            if let Ok(next) = apply_move(&cur, &m) {
                cur = next;
                applied += 1;
            }
        }
        if normalize(&cur).is_ok() {
            return cur;
        }
    }
    g.clone()
}

/// A random building block of the given type (dual variants for types 2-4
/// when `dual_side` is set; type 1 is self-dual).
pub fn random_block(rng: &mut ChaCha8Rng, dual_side: bool) -> BuildingBlock {
    let a = random_string(rng, 3);
    let b = complementary_string(&a).unwrap();
    match rng.gen_range(1..=4) {
        1 => BuildingBlock::one(a, b),
        2 => BuildingBlock::two(a, b, dual_side),
        3 => BuildingBlock::three(rng.gen_range(2..=4), a, b, dual_side),
        _ => {
            let c = random_string(rng, 3);
            let d = complementary_string(&c).unwrap();
            BuildingBlock::four(a, b, c, d, dual_side)
        }
    }
}

fn root_valency(block: &BuildingBlock) -> usize {
    match (block.block_type, block.is_dual) {
        (plumb::blocks::BlockType::Two, _) => 1,
        _ => 2,
    }
}

/// A random join of 2..=4 blocks, all primal or all dual, constrained so
/// that the result is in normal form (a valency-2 center needs weight
/// <= -2).
pub fn random_join(rng: &mut ChaCha8Rng, dual_side: bool) -> (RootedGraph, Vec<BuildingBlock>) {
    loop {
        let count = rng.gen_range(2..=4);
        let blocks: Vec<BuildingBlock> =
            (0..count).map(|_| random_block(rng, dual_side)).collect();
        let valency: usize = blocks.iter().map(root_valency).sum();
        let weight: i64 = blocks.iter().map(|b| b.root_weight()).sum();
        if valency == 2 && weight > -2 {
            continue;
        }
        let mut iter = blocks.iter();
        let mut acc = make_block(iter.next().unwrap()).unwrap();
        for b in iter {
            acc = join(&acc, &make_block(b).unwrap());
        }
        assert!(acc.graph().is_normal_form());
        return (acc, blocks);
    }
}

/// Seifert invariants with k complementary pairs and b = -k.
pub fn random_complementary_seifert(rng: &mut ChaCha8Rng, k: usize) -> SeifertInvariants {
    let mut pairs = Vec::new();
    for _ in 0..k {
        let s = random_string(rng, 3);
        let t = complementary_string(&s).unwrap();
        pairs.push(string_to_pair(&s));
        pairs.push(string_to_pair(&t));
    }
    SeifertInvariants::new(-(k as i64), pairs).unwrap()
}

/// (α, β) with α/β = [s]⁻ for a normal-form string.
pub fn string_to_pair(s: &[i64]) -> (i64, i64) {
    let cf = plumb::calculus::eval_string(s);
    let (p, q) = (cf.numer().clone(), cf.denom().clone());
    let (alpha, beta) = if p < BigInt::from(0) { (-p, -q) } else { (p, q) };
    (
        i64::try_from(&alpha).unwrap(),
        i64::try_from(&beta).unwrap(),
    )
}
