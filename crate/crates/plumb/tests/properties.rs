//! Cross-module property tests: the determinant recursion, continued
//! fraction identities, duality, block structure and the lattice lemmas,
//! all on seeded random instances.

mod common;

use common::*;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::prelude::*;

use plumb::blocks::{
    check_main_hypotheses, decide_bounds, decompose, make_block, recognize_block, BlockType,
    Decision,
};
use plumb::calculus::{
    complementary_string, continued_fraction, dual, eval_string, is_normal_form, normalize,
    string_of_fraction,
};
use plumb::graph::{
    canonical_form, determinant, invariant_i, linear_complexity, signature, PlumbingGraph,
    RootedGraph, VertexId,
};
use plumb::lattice::{
    contract_minus2_final, enumerate_good_subsets, expand_minus2_final, intersection_graph,
    search_embeddings, solve_extra_vector, stats, LatticeSubset,
};
use plumb::rational::ExtendedRational;
use plumb::seifert::{
    are_complementary, decide_seifert_bounds, euler_number, raw_star, seifert_from_star,
    SeifertInvariants,
};

/// Independent determinant oracle: the rooted expansion
/// det Γ = b det Γ_v - Σ_i det Γ_{v_i} Π_{j≠i} det Γ_j.
fn det_by_recursion(g: &PlumbingGraph, root: &VertexId) -> BigInt {
    if g.is_empty() {
        return BigInt::one();
    }
    let b = BigInt::from(g.weight(root).unwrap());
    let rest = g.without_vertex(root);
    let comps = rest.components();
    let comp_dets: Vec<BigInt> = comps.iter().map(|c| determinant(&rest.induced(c))).collect();
    let mut det = b;
    for d in &comp_dets {
        det *= d;
    }
    for (i, comp) in comps.iter().enumerate() {
        let attach = comp
            .iter()
            .find(|u| g.has_edge(root, u))
            .expect("one neighbor per component");
        let sub = rest.induced(comp);
        let mut term = determinant(&sub.without_vertex(attach));
        for (j, d) in comp_dets.iter().enumerate() {
            if j != i {
                term *= d;
            }
        }
        det -= term;
    }
    det
}

#[test]
fn determinant_matches_rooted_recursion_for_every_root() {
    let mut r = rng(11);
    for _ in 0..60 {
        let g = random_normal_forest(&mut r, 9);
        for comp in g.components() {
            let sub = g.induced(&comp);
            let d = determinant(&sub);
            for v in sub.vertex_ids() {
                assert_eq!(d, det_by_recursion(&sub, &v), "root {v} in {sub:?}");
            }
        }
    }
}

#[test]
fn signature_counts_and_definiteness() {
    let mut r = rng(12);
    for _ in 0..120 {
        let g = random_normal_forest(&mut r, 9);
        let s = signature(&g);
        assert_eq!(s.size(), g.vertex_count());
        if g.is_linear() {
            // Normal-form chains are negative definite.
            assert_eq!((s.b_plus, s.b_minus, s.b_zero), (0, g.vertex_count(), 0));
        }
    }
}

#[test]
fn invariant_i_is_additive_over_disjoint_union() {
    let mut r = rng(13);
    for _ in 0..60 {
        let g = random_normal_forest(&mut r, 10);
        let total: i64 = g
            .components()
            .iter()
            .map(|c| invariant_i(&g.induced(c)))
            .sum();
        assert_eq!(invariant_i(&g), total);
    }
}

#[test]
fn canonical_form_is_invariant_under_relabeling() {
    let mut r = rng(14);
    for _ in 0..80 {
        let g = random_normal_forest(&mut r, 10);
        let ids = g.vertex_ids();
        let mut names: Vec<String> = (0..ids.len()).map(|i| format!("w{i}")).collect();
        names.shuffle(&mut r);
        let map: std::collections::BTreeMap<&VertexId, VertexId> = ids
            .iter()
            .zip(names.iter().map(VertexId::new))
            .collect();
        let relabeled = PlumbingGraph::from_parts(
            g.vertices().map(|(v, w)| (map[v].clone(), w)),
            g.edges().into_iter().map(|(a, b)| (map[&a].clone(), map[&b].clone())),
        )
        .unwrap();
        assert_eq!(canonical_form(&g), canonical_form(&relabeled));
    }
}

#[test]
fn cf_satisfies_its_recursion() {
    let mut r = rng(15);
    for _ in 0..80 {
        let g = random_normal_forest(&mut r, 9);
        let comp = g.components().into_iter().next().unwrap();
        let sub = g.induced(&comp);
        for root in sub.vertex_ids() {
            let rg = RootedGraph::new(sub.clone(), root.clone()).unwrap();
            let Ok(cf) = continued_fraction(&rg) else {
                continue;
            };
            // cf = b - Σ 1/cf(Γ_i), components rooted at the attachments.
            let rest = sub.without_vertex(&root);
            let mut rhs = ExtendedRational::from_int(sub.weight(&root).unwrap());
            let mut defined = true;
            for c in rest.components() {
                let attach = c.iter().find(|u| sub.has_edge(&root, u)).unwrap().clone();
                let child = RootedGraph::new(rest.induced(&c), attach).unwrap();
                let Ok(child_cf) = continued_fraction(&child) else {
                    defined = false;
                    break;
                };
                let Ok(next) = rhs.checked_sub(&child_cf.recip()) else {
                    defined = false;
                    break;
                };
                rhs = next;
            }
            if defined {
                assert_eq!(cf, rhs, "recursion at {root}");
            }
        }
    }
}

#[test]
fn cf_of_linear_normal_chain_at_end_is_below_minus_one() {
    let mut r = rng(16);
    for _ in 0..200 {
        let s = random_string(&mut r, 10);
        let g = PlumbingGraph::chain(&s);
        let rg = RootedGraph::new(g, VertexId::new("c0")).unwrap();
        let cf = continued_fraction(&rg).unwrap();
        assert!(cf < ExtendedRational::from_int(-1), "cf {cf} for {s:?}");
        assert_eq!(cf, eval_string(&s));
    }
}

#[test]
fn det_zero_iff_cf_zero_on_lc1_graphs() {
    let mut r = rng(17);
    let mut zeros = 0;
    for _ in 0..150 {
        let g = random_lc1_graph(&mut r, false);
        let center = VertexId::new("c");
        let rest = g.without_vertex(&center);
        if !signature(&rest).is_negative_definite() {
            continue;
        }
        let cf = continued_fraction(&RootedGraph::new(g.clone(), center).unwrap()).unwrap();
        let det = determinant(&g);
        assert_eq!(det.is_zero(), cf.is_zero(), "graph {g:?}");
        if det.is_zero() {
            zeros += 1;
        }
    }
    // Zero determinant is rare for random weights; force a few through the
    // block construction, whose joins always have cf = 0.
    for _ in 0..10 {
        let (j, _) = random_join(&mut r, false);
        let cf = continued_fraction(&j).unwrap();
        assert!(cf.is_zero());
        assert!(determinant(j.graph()).is_zero());
        zeros += 1;
    }
    assert!(zeros >= 10);
}

#[test]
fn dual_preserves_det_and_b_zero_and_is_involutive() {
    let mut r = rng(18);
    for _ in 0..150 {
        let g = random_lc1_graph(&mut r, true);
        let d = dual(&g).unwrap();
        assert!(is_normal_form(&d));
        assert_eq!(
            determinant(&g).abs(),
            determinant(&d).abs(),
            "determinant changed for {g:?}"
        );
        assert_eq!(signature(&g).b_zero, signature(&d).b_zero);
        let dd = dual(&d).unwrap();
        assert_eq!(canonical_form(&dd), canonical_form(&g));
    }
}

/// Theorem 2.7's printed chain formula, for chains with at least one
/// weight below -2 (its s = 0 case degenerates; the fraction route is
/// used there instead).
fn dual_string_by_formula(s: &[i64]) -> Option<Vec<i64>> {
    let mut runs: Vec<i64> = Vec::new(); // n_0, m_1, n_1, ..., m_s, n_s
    let mut heavy: Vec<i64> = Vec::new();
    let mut current_twos = 0i64;
    for &a in s {
        if a == -2 {
            current_twos += 1;
        } else {
            runs.push(current_twos);
            heavy.push(-a - 3);
            current_twos = 0;
        }
    }
    runs.push(current_twos);
    if heavy.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    out.push(-runs[0] - 2);
    for (idx, &m) in heavy.iter().enumerate() {
        out.extend(std::iter::repeat(-2).take(m as usize));
        if idx + 1 < heavy.len() {
            out.push(-runs[idx + 1] - 3);
        }
    }
    out.push(-runs[heavy.len()] - 2);
    Some(out)
}

#[test]
fn complementary_string_matches_the_printed_formula_when_defined() {
    let mut r = rng(19);
    let mut checked = 0;
    for _ in 0..400 {
        let s = random_string(&mut r, 8);
        if let Some(formula) = dual_string_by_formula(&s) {
            assert_eq!(
                complementary_string(&s).unwrap(),
                formula,
                "formula mismatch for {s:?}"
            );
            checked += 1;
        }
    }
    assert!(checked > 100);
}

mod fraction_props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn string_of_fraction_round_trips(p in 2i64..400, q in 1i64..399) {
            prop_assume!(q < p);
            prop_assume!(num_integer::gcd(p, q) == 1);
            let s = string_of_fraction(&BigInt::from(p), &BigInt::from(q)).unwrap();
            prop_assert!(s.iter().all(|&a| a <= -2));
            let cf = eval_string(&s);
            prop_assert_eq!(cf, ExtendedRational::new(-p, q).unwrap());
        }

        #[test]
        fn complementary_fraction_identity(p in 2i64..300, q in 1i64..299) {
            prop_assume!(q < p);
            prop_assume!(num_integer::gcd(p, q) == 1);
            let s = string_of_fraction(&BigInt::from(p), &BigInt::from(q)).unwrap();
            let t = complementary_string(&s).unwrap();
            let sum = eval_string(&s).recip().checked_add(&eval_string(&t).recip()).unwrap();
            prop_assert_eq!(sum, ExtendedRational::from_int(-1));
        }
    }
}

#[test]
fn euler_number_is_cf_at_the_center() {
    let mut r = rng(20);
    for _ in 0..100 {
        let k = r.gen_range(0..=4);
        let pairs: Vec<(i64, i64)> = (0..k)
            .map(|_| {
                let alpha = r.gen_range(2..=9i64);
                let beta = loop {
                    let b = r.gen_range(-9..=9i64);
                    if num_integer::gcd(alpha, b) == 1 {
                        break b;
                    }
                };
                (alpha, beta)
            })
            .collect();
        let b = r.gen_range(-5..=5);
        let si = SeifertInvariants::new(b, pairs).unwrap();
        let star = raw_star(&si);
        assert_eq!(continued_fraction(&star).unwrap(), euler_number(&si));
    }
}

#[test]
fn seifert_star_round_trip() {
    let mut r = rng(21);
    for _ in 0..80 {
        let k = r.gen_range(3..=5);
        let pairs: Vec<(i64, i64)> = (0..k)
            .map(|_| {
                let alpha = r.gen_range(2..=9i64);
                let beta = loop {
                    let b = r.gen_range(-9..=9i64);
                    if num_integer::gcd(alpha, b) == 1 {
                        break b;
                    }
                };
                (alpha, beta)
            })
            .collect();
        let b = r.gen_range(-5..=2);
        let si = SeifertInvariants::new(b, pairs).unwrap();
        let star = plumb::seifert::star_from_seifert(&si).unwrap();
        let back = seifert_from_star(&star).unwrap();
        assert_eq!(euler_number(&back), euler_number(&si));
        let star2 = plumb::seifert::star_from_seifert(&back).unwrap();
        assert_eq!(canonical_form(&star), canonical_form(&star2));
    }
}

#[test]
fn seifert_decision_is_shift_invariant() {
    let mut r = rng(22);
    for _ in 0..60 {
        let k = r.gen_range(1..=3);
        let si = random_complementary_seifert(&mut r, k);
        let shifted: Vec<(i64, i64)> = si
            .pairs()
            .iter()
            .map(|&(a, b)| (a, b + a))
            .collect();
        let si2 = SeifertInvariants::new(si.b() + si.pairs().len() as i64, shifted).unwrap();
        let d1 = decide_seifert_bounds(&si).unwrap();
        let d2 = decide_seifert_bounds(&si2).unwrap();
        assert_eq!(d1.bounds, d2.bounds);
        assert!(d1.bounds);
    }
}

#[test]
fn bounding_stars_decompose_into_type_one_blocks() {
    let mut r = rng(23);
    for _ in 0..40 {
        let k = r.gen_range(2..=4);
        let si = random_complementary_seifert(&mut r, k);
        let star = plumb::seifert::star_from_seifert(&si).unwrap();
        let center = star
            .vertex_ids()
            .into_iter()
            .max_by_key(|v| star.valency(v))
            .unwrap();
        let d = decompose(&star, &center).expect("bounding star decomposes");
        assert_eq!(d.blocks.len(), k);
        assert!(d.blocks.iter().all(|b| b.block.block_type == BlockType::One));
    }
}

#[test]
fn block_recognition_round_trips_on_random_parameters() {
    let mut r = rng(24);
    for i in 0..120 {
        let spec = random_block(&mut r, i % 2 == 1);
        let rg = make_block(&spec).unwrap();
        let back = recognize_block(&rg).expect("generated blocks are recognized");
        assert_eq!(back, spec);
    }
}

#[test]
fn joins_are_normal_form_with_lc_one_and_additive_cf() {
    let mut r = rng(25);
    for i in 0..60 {
        let dual_side = i % 2 == 1;
        let (j, blocks) = random_join(&mut r, dual_side);
        let g = j.graph();
        assert!(is_normal_form(g));
        assert_eq!(linear_complexity(g).unwrap(), 1);
        let cf = continued_fraction(&j).unwrap();
        let mut sum = ExtendedRational::zero();
        for b in &blocks {
            let cf_b = continued_fraction(&make_block(b).unwrap()).unwrap();
            sum = sum.checked_add(&cf_b).unwrap();
        }
        assert_eq!(cf, sum);
        assert!(cf.is_zero());
    }
}

#[test]
fn decide_is_invariant_under_relabeling() {
    let mut r = rng(26);
    for i in 0..20 {
        let (j, _) = random_join(&mut r, i % 2 == 1);
        let g = j.graph().clone();
        let ids = g.vertex_ids();
        let mut names: Vec<String> = (0..ids.len()).map(|i| format!("z{i}")).collect();
        names.shuffle(&mut r);
        let map: std::collections::BTreeMap<&VertexId, VertexId> = ids
            .iter()
            .zip(names.iter().map(VertexId::new))
            .collect();
        let relabeled = PlumbingGraph::from_parts(
            g.vertices().map(|(v, w)| (map[v].clone(), w)),
            g.edges().into_iter().map(|(a, b)| (map[&a].clone(), map[&b].clone())),
        )
        .unwrap();
        let d1 = decide_bounds(&g).unwrap();
        let d2 = decide_bounds(&relabeled).unwrap();
        assert_eq!(
            std::mem::discriminant(&d1),
            std::mem::discriminant(&d2),
            "verdicts differ under relabeling"
        );
    }
}

#[test]
fn stars_agree_between_block_and_seifert_decisions() {
    let mut r = rng(27);
    for _ in 0..60 {
        let g = random_lc1_graph(&mut r, false);
        let Ok(si) = seifert_from_star(&g) else {
            continue;
        };
        let d = decide_bounds(&g).unwrap();
        let sd = decide_seifert_bounds(&si).unwrap();
        match d {
            Decision::Bounds { .. } => assert!(sd.bounds),
            Decision::NotBounds { .. } => assert!(!sd.bounds),
            Decision::Inapplicable { .. } => {}
        }
    }
}

/// Lemma basic: if the graph obtained by linking a new vertex v (weight
/// <= -1) once into each component of a linear normal form is degenerate,
/// then w(v) > -k or some marked vertex has weight -2.
#[test]
fn lemma_basic_on_generated_instances() {
    let mut r = rng(28);
    let mut degenerate = 0;
    for _ in 0..400 {
        let g = random_normal_forest(&mut r, 8);
        if !g.is_linear() || g.is_empty() {
            continue;
        }
        let comps = g.components();
        let k = comps.len();
        let marked: Vec<VertexId> = comps
            .iter()
            .map(|c| {
                let v: Vec<&VertexId> = c.iter().collect();
                v[r.gen_range(0..v.len())].clone()
            })
            .collect();
        for w in -10..=-1i64 {
            let mut bigger = g.clone();
            let extra = VertexId::new("x");
            let mut verts: Vec<(VertexId, i64)> =
                bigger.vertices().map(|(v, wt)| (v.clone(), wt)).collect();
            verts.push((extra.clone(), w));
            let mut edges = bigger.edges();
            for m in &marked {
                edges.push((extra.clone(), m.clone()));
            }
            bigger = PlumbingGraph::from_parts(verts, edges).unwrap();
            if determinant(&bigger).is_zero() {
                degenerate += 1;
                let some_minus_two = marked.iter().any(|m| g.weight(m).unwrap() == -2);
                assert!(
                    w > -(k as i64) || some_minus_two,
                    "lemma fails: w={w}, k={k}, marked weights {:?}",
                    marked.iter().map(|m| g.weight(m).unwrap()).collect::<Vec<_>>()
                );
            }
        }
    }
    // Random weights rarely produce degeneracy; add constructed instances:
    // a vertex of weight -k linked once into each of 2k complementary
    // chains has determinant zero (the Euler-number-zero stars).
    for _ in 0..50 {
        let k = r.gen_range(1..=3usize);
        let mut verts: Vec<(VertexId, i64)> = Vec::new();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        let mut marked: Vec<VertexId> = Vec::new();
        for i in 0..k {
            let a = random_string(&mut r, 3);
            let b = complementary_string(&a).unwrap();
            for (tag, s) in [('a', &a), ('b', &b)] {
                let ids: Vec<VertexId> = (0..s.len())
                    .map(|j| VertexId::new(format!("{tag}{i}x{j}")))
                    .collect();
                for (id, &w) in ids.iter().zip(s.iter()) {
                    verts.push((id.clone(), w));
                }
                for j in 1..ids.len() {
                    edges.push((ids[j - 1].clone(), ids[j].clone()));
                }
                marked.push(ids[0].clone());
            }
        }
        let g = PlumbingGraph::from_parts(verts.clone(), edges.clone()).unwrap();
        let extra = VertexId::new("x");
        verts.push((extra.clone(), -(k as i64)));
        for m in &marked {
            edges.push((extra.clone(), m.clone()));
        }
        let bigger = PlumbingGraph::from_parts(verts, edges).unwrap();
        assert!(determinant(&bigger).is_zero());
        degenerate += 1;
        let some_minus_two = marked.iter().any(|m| g.weight(m).unwrap() == -2);
        assert!(-(k as i64) > -(2 * k as i64) || some_minus_two);
    }
    assert!(degenerate >= 50, "not enough degenerate instances generated");
}

#[test]
fn expansion_families_satisfy_pairing_e_counts() {
    // Lemma on b = 0 good subsets reachable by expansions from
    // {e1+e2, e1-e2}: linked pairs have E = 1, orthogonal pairs E in {0,2}.
    let mut r = rng(29);
    for _ in 0..40 {
        let mut s = LatticeSubset::from_rows(2, &[&[1, 1], &[1, -1]]);
        for _ in 0..r.gen_range(0..5) {
            let expansions = expand_minus2_final(&s);
            if expansions.is_empty() {
                break;
            }
            let (next, _) = expansions[r.gen_range(0..expansions.len())].clone();
            s = next;
        }
        let st = stats(&s).unwrap();
        if st.bad_components != 0 || st.components != 2 {
            continue;
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let e = s.e_count(&[i, j]);
                if s.pairing(i, j) == BigInt::one() {
                    assert_eq!(e, 1, "linked pair E != 1 in {s:?}");
                } else {
                    assert!(e == 0 || e == 2, "orthogonal pair E = {e} in {s:?}");
                }
            }
        }
    }
}

#[test]
fn expansions_invert_and_preserve_components() {
    let mut r = rng(30);
    let seeds = [
        LatticeSubset::from_rows(2, &[&[1, 1], &[1, -1]]),
        LatticeSubset::from_rows(4, &[&[1, 1, 0, 0], &[0, -1, 1, 1], &[-1, 1, 0, 0]]),
    ];
    for seed in seeds {
        let mut s = seed;
        for _ in 0..4 {
            let expansions = expand_minus2_final(&s);
            for (bigger, k) in &expansions {
                assert_eq!(contract_minus2_final(bigger, *k).unwrap(), s);
                let c1 = intersection_graph(&s).unwrap().components().len();
                let c2 = intersection_graph(bigger).unwrap().components().len();
                assert_eq!(c1, c2);
            }
            if expansions.is_empty() {
                break;
            }
            s = expansions[r.gen_range(0..expansions.len())].0.clone();
        }
    }
}

/// Naive exhaustive embedding enumeration used as a completeness oracle at
/// tiny ranks: all tuples with per-coordinate bounds, no pruning beyond
/// the Gram conditions, canonicalized by brute force.
fn naive_embeddings(q: &plumb::matrix::IntMatrix, ambient: usize) -> Vec<Vec<Vec<i64>>> {
    let n = q.size();
    let norms: Vec<i64> = (0..n)
        .map(|i| -i64::try_from(q.get(i, i)).unwrap())
        .collect();
    let max = norms.iter().cloned().max().unwrap_or(0);
    let bound = (0..=max).take_while(|v| v * v <= max).last().unwrap_or(0);
    let mut all_vecs: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..ambient {
        let mut next = Vec::new();
        for v in &all_vecs {
            for c in -bound..=bound {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        all_vecs = next;
    }
    let mut found = std::collections::BTreeSet::new();
    let mut tuple: Vec<Vec<i64>> = Vec::new();
    fn rec(
        all: &[Vec<i64>],
        q: &plumb::matrix::IntMatrix,
        tuple: &mut Vec<Vec<i64>>,
        found: &mut std::collections::BTreeSet<Vec<Vec<i64>>>,
        ambient: usize,
    ) {
        let i = tuple.len();
        if i == q.size() {
            // Canonicalize under signed permutations of rows.
            let mut rows: Vec<Vec<i64>> = (0..ambient)
                .map(|c| tuple.iter().map(|v| v[c]).collect())
                .collect();
            for row in &mut rows {
                let neg: Vec<i64> = row.iter().map(|x| -x).collect();
                if neg < *row {
                    *row = neg;
                }
            }
            rows.sort();
            found.insert(rows);
            return;
        }
        'next: for cand in all {
            let norm: i64 = cand.iter().map(|c| c * c).sum();
            if norm != -i64::try_from(q.get(i, i)).unwrap() {
                continue;
            }
            for (j, prev) in tuple.iter().enumerate() {
                let dot: i64 = cand.iter().zip(prev).map(|(a, b)| a * b).sum();
                if -dot != i64::try_from(q.get(i, j)).unwrap() {
                    continue 'next;
                }
            }
            tuple.push(cand.clone());
            rec(all, q, tuple, found, ambient);
            tuple.pop();
        }
    }
    rec(&all_vecs, q, &mut tuple, &mut found, ambient);
    found.into_iter().collect()
}

#[test]
fn embedding_search_is_complete_at_small_rank() {
    let cases = [
        (PlumbingGraph::chain(&[-2, -2]), 2usize),
        (PlumbingGraph::chain(&[-2, -2]), 3),
        (PlumbingGraph::chain(&[-2, -3]), 3),
        (PlumbingGraph::chain(&[-3]), 3),
        (PlumbingGraph::chain(&[-2, -2, -2]), 3),
    ];
    for (g, ambient) in cases {
        let q = plumb::graph::intersection_matrix(&g);
        let fast = search_embeddings(&q, ambient).unwrap();
        for s in &fast {
            assert_eq!(s.gram(), q, "gram mismatch");
        }
        let naive = naive_embeddings(&q, ambient);
        let mut fast_canon: Vec<Vec<Vec<i64>>> = fast
            .iter()
            .map(|s| {
                let cols: Vec<Vec<i64>> = s
                    .vectors()
                    .iter()
                    .map(|v| v.coords().iter().map(|c| i64::try_from(c).unwrap()).collect())
                    .collect();
                let mut rows: Vec<Vec<i64>> = (0..ambient)
                    .map(|c| cols.iter().map(|v| v[c]).collect())
                    .collect();
                for row in &mut rows {
                    let neg: Vec<i64> = row.iter().map(|x| -x).collect();
                    if neg < *row {
                        *row = neg;
                    }
                }
                rows.sort();
                rows
            })
            .collect();
        fast_canon.sort();
        fast_canon.dedup();
        assert_eq!(fast_canon, naive, "orbit sets differ at ambient {ambient}");
    }
}

#[test]
fn good_subsets_with_extra_vector_have_few_components() {
    // Over enumerated good subsets with I + c <= 0 and an integral extra
    // vector, c(S) <= 2.
    for n in 2..=5usize {
        for s in enumerate_good_subsets(n, 0, |st| st.invariant_i + st.components as i64 <= 0)
            .unwrap()
        {
            let st = stats(&s).unwrap();
            let graph = intersection_graph(&s).unwrap();
            let comps = graph.components();
            for marked in marked_choices(&s, &comps) {
                if solve_extra_vector(&s, &marked).unwrap().is_some() {
                    assert!(st.components <= 2, "c = {} for {s:?}", st.components);
                }
            }
        }
    }
}

/// All ways of marking one vector per connected component.
fn marked_choices(
    s: &LatticeSubset,
    comps: &[std::collections::BTreeSet<VertexId>],
) -> Vec<Vec<usize>> {
    let ids: Vec<VertexId> = intersection_graph(s).unwrap().vertex_ids();
    let mut choices: Vec<Vec<usize>> = vec![vec![]];
    for comp in comps {
        let members: Vec<usize> = comp
            .iter()
            .map(|v| ids.iter().position(|i| i == v).unwrap())
            .collect();
        let mut next = Vec::new();
        for base in &choices {
            for &m in &members {
                let mut c = base.clone();
                c.push(m);
                next.push(c);
            }
        }
        choices = next;
    }
    for c in &mut choices {
        c.sort_unstable();
    }
    choices
}

#[test]
fn hypothesis_report_is_internally_consistent() {
    let mut r = rng(31);
    for i in 0..40 {
        let (j, _) = random_join(&mut r, i % 2 == 1);
        let g = j.graph();
        for v in plumb::blocks::linearizing_vertices(g) {
            let rep = check_main_hypotheses(g, &v).unwrap();
            let Some(d) = rep.detail else { continue };
            // Recompute rhs from the graph.
            let rhs = -(d.final_legs as i64)
                - 2 * (d.internal_legs as i64)
                - d.nodes
                    .iter()
                    .map(|u| 0.max(g.weight(u).unwrap() + 3))
                    .sum::<i64>();
            assert_eq!(d.rhs, rhs);
            assert_eq!(d.lhs, invariant_i(&g.without_vertex(&v)));
            assert_eq!(d.equality, d.lhs == d.rhs);
            assert_eq!(d.inequality_ok, d.lhs <= d.rhs);
        }
    }
}

#[test]
fn normalize_handles_exceptional_linear_forms() {
    // cf = infinity gives the empty graph, integer cf >= 0 goes through
    // the lens space convention, and splitting inside larger graphs works.
    let g = PlumbingGraph::chain(&[-7, 0]);
    assert!(normalize(&g).unwrap().is_empty());
    let g = PlumbingGraph::chain(&[3, -2]);
    let nf = normalize(&g).unwrap();
    assert!(is_normal_form(&nf));
    // +3 with a -2: cf = 3 - 1/(-2) = 7/2 -> L(7, q); |det| must agree.
    assert_eq!(determinant(&g).abs(), determinant(&nf).abs());
    let mixed = PlumbingGraph::from_parts(
        vec![
            (VertexId::new("a"), -2),
            (VertexId::new("b"), 0),
            (VertexId::new("c"), -3),
            (VertexId::new("d"), -5),
        ],
        vec![
            (VertexId::new("a"), VertexId::new("b")),
            (VertexId::new("b"), VertexId::new("c")),
        ],
    )
    .unwrap();
    let nf = normalize(&mixed).unwrap();
    assert!(is_normal_form(&nf));
    assert_eq!(
        canonical_form(&nf),
        canonical_form(
            &PlumbingGraph::from_parts(
                vec![(VertexId::new("x"), -5), (VertexId::new("y"), -5)],
                vec![],
            )
            .unwrap()
        )
    );
}

#[test]
fn are_complementary_three_conditions_agree_explicitly() {
    let mut r = rng(32);
    for _ in 0..200 {
        let s1 = random_string(&mut r, 6);
        let s2 = if r.gen_bool(0.4) {
            complementary_string(&s1).unwrap()
        } else {
            random_string(&mut r, 6)
        };
        // Condition rederivations, independent of are_complementary.
        let by_duality = complementary_string(&s1).unwrap() == s2;
        let mut middle: Vec<i64> = s2.iter().rev().copied().collect();
        middle.push(-1);
        middle.extend_from_slice(&s1);
        let nf = normalize(&PlumbingGraph::chain(&middle)).unwrap();
        let by_surgery = nf.vertex_count() == 1 && nf.vertices().next().unwrap().1 == 0;
        let sum = eval_string(&s1)
            .recip()
            .checked_add(&eval_string(&s2).recip())
            .unwrap();
        let by_fraction = sum == ExtendedRational::from_int(-1);
        assert_eq!(by_duality, by_surgery);
        assert_eq!(by_surgery, by_fraction);
        assert_eq!(are_complementary(&s1, &s2).unwrap(), by_duality);
    }
}

#[test]
fn extra_vector_solutions_satisfy_the_norm_inequality() {
    // Lemma dis checked on solved instances: handled by an assert inside
    // solve_extra_vector; here we exercise it over the enumeration.
    for n in 2..=4usize {
        for s in enumerate_good_subsets(n, 1, |_| true).unwrap() {
            let graph = intersection_graph(&s).unwrap();
            let comps = graph.components();
            for marked in marked_choices(&s, &comps) {
                if let Some(v) = solve_extra_vector(&s, &marked).unwrap() {
                    let sum: BigInt = marked.iter().map(|&i| s.pairing(i, i)).sum();
                    assert!(v.self_pairing() > sum);
                }
            }
        }
    }
}
