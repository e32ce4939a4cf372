//! The subset calculus in (Z^N, -Id): linear and good subsets, their
//! statistics, -2-final contractions and expansions, extra-vector solving,
//! and the exhaustive embedding search realizing the lattice obstruction.
//!
//! Vectors pair by u·v = -Σ uᵢvᵢ. A linear subset has all self-pairings
//! <= -2 and off-diagonal pairings in {0,1} with a linear intersection
//! graph; a good subset is moreover irreducible under the linking relation
//! (two vectors are linked when some basis vector hits both).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{signature, GraphError, PlumbingGraph, VertexId};
use crate::matrix::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("pairing violation: {0}")]
    PairingViolation(String),
    #[error("contraction side condition violated: {0}")]
    SideCondition(String),
    #[error("the linear system is singular")]
    SingularSystem,
    #[error("rank {0} exceeds the supported bound {1}")]
    RankTooLarge(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Graph(#[from] GraphError),
}

/// An integer vector in (Z^N, -Id).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// u·v = -Σ uᵢvᵢ.
    pub fn pairing(&self, other: &Self) -> BigInt {
        assert_eq!(self.len(), other.len(), "ambient ranks differ");
        -self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b)
            .sum::<BigInt>()
    }

    pub fn self_pairing(&self) -> BigInt {
        self.pairing(self)
    }
}

/// An ordered list of vectors in a common ambient Z^N.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeSubset {
    ambient: usize,
    vectors: Vec<LatticeVector>,
}

impl LatticeSubset {
    pub fn new(ambient: usize, vectors: Vec<LatticeVector>) -> Self {
        assert!(
            vectors.iter().all(|v| v.len() == ambient),
            "all vectors must live in Z^ambient"
        );
        LatticeSubset { ambient, vectors }
    }

    pub fn from_rows(ambient: usize, rows: &[&[i64]]) -> Self {
        Self::new(
            ambient,
            rows.iter().map(|r| LatticeVector::from_i64(r)).collect(),
        )
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, i: usize) -> &LatticeVector {
        &self.vectors[i]
    }

    pub fn pairing(&self, i: usize, j: usize) -> BigInt {
        self.vectors[i].pairing(&self.vectors[j])
    }

    pub fn gram(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.pairing(i, j));
            }
        }
        m
    }

    /// Does basis vector `e_k` hit vector `i`?
    pub fn hits(&self, k: usize, i: usize) -> bool {
        !self.vectors[i].coords()[k].is_zero()
    }

    /// Indices of the vectors hit by basis vector `e_k`.
    pub fn hit_set(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.hits(k, i)).collect()
    }

    /// E(v_{i_1}, ..., v_{i_j}): the number of basis vectors hitting all of
    /// the listed vectors.
    pub fn e_count(&self, indices: &[usize]) -> usize {
        (0..self.ambient)
            .filter(|&k| indices.iter().all(|&i| self.hits(k, i)))
            .count()
    }
}

fn vertex_ids_for(n: usize) -> Vec<VertexId> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n)
        .map(|i| VertexId::new(format!("v{i:0width$}")))
        .collect()
}

/// The intersection graph of a subset: one vertex per vector with weight
/// vᵢ·vᵢ, an edge where vᵢ·vⱼ = 1. Validates the linear/treelike pairing
/// conditions: off-diagonal pairings in {0,1}, a forest, and self-pairing
/// <= -2 on every chain vertex.
pub fn intersection_graph(s: &LatticeSubset) -> Result<PlumbingGraph, LatticeError> {
    let n = s.len();
    let ids = vertex_ids_for(n);
    let mut verts = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        let w = s.pairing(i, i);
        let w: i64 = i64::try_from(&w)
            .map_err(|_| LatticeError::PairingViolation("self-pairing overflows i64".into()))?;
        verts.push((id.clone(), w));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = s.pairing(i, j);
            if p == BigInt::from(1) {
                edges.push((ids[i].clone(), ids[j].clone()));
            } else if !p.is_zero() {
                return Err(LatticeError::PairingViolation(format!(
                    "pairing of vectors {i} and {j} is {p}, not 0 or 1"
                )));
            }
        }
    }
    let g = PlumbingGraph::from_parts(verts, edges).map_err(|e| match e {
        GraphError::Cycle => {
            LatticeError::PairingViolation("intersection graph contains a cycle".into())
        }
        other => LatticeError::Graph(other),
    })?;
    for (v, w) in g.vertices() {
        if g.on_chain(v) && w > -2 {
            return Err(LatticeError::PairingViolation(format!(
                "vertex `{v}` lies on a chain with self-pairing {w} > -2"
            )));
        }
    }
    Ok(g)
}

/// Statistics of a linear subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetStats {
    /// c(S): connected components of the intersection graph.
    pub components: usize,
    /// I(S) = Σ (-3 - vᵢ·vᵢ).
    pub invariant_i: i64,
    /// p_k: the number of basis vectors hitting exactly k vectors, k >= 1.
    pub p: BTreeMap<usize, usize>,
    /// b(S): the number of bad components.
    pub bad_components: usize,
    /// Partition of vector indices under the transitive closure of linking.
    pub irreducible_components: Vec<Vec<usize>>,
}

impl SubsetStats {
    pub fn is_irreducible(&self) -> bool {
        self.irreducible_components.len() <= 1
    }

    pub fn p_count(&self, k: usize) -> usize {
        self.p.get(&k).copied().unwrap_or(0)
    }
}

/// Computes c, I, p_k, the irreducible components, and the number of bad
/// components of a linear subset.
pub fn stats(s: &LatticeSubset) -> Result<SubsetStats, LatticeError> {
    let graph = intersection_graph(s)?;
    if !graph.is_linear() {
        return Err(LatticeError::PairingViolation(
            "stats requires a linear subset".into(),
        ));
    }
    let components = graph.components().len();
    let invariant_i = (0..s.len())
        .map(|i| -3 - i64::try_from(&s.pairing(i, i)).expect("desk-scale"))
        .sum();
    let mut p: BTreeMap<usize, usize> = BTreeMap::new();
    for k in 0..s.ambient_rank() {
        let hits = s.hit_set(k).len();
        if hits > 0 {
            *p.entry(hits).or_default() += 1;
        }
    }
    let irreducible_components = linking_partition(s);
    let bad_components = count_bad_components(s)?;
    Ok(SubsetStats {
        components,
        invariant_i,
        p,
        bad_components,
        irreducible_components,
    })
}

fn linking_partition(s: &LatticeSubset) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for k in 0..s.ambient_rank() {
        let hit = s.hit_set(k);
        for w in hit.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Counts bad components: connected components that contract, through
/// -2-final contractions performed inside the component, to the minimal
/// configuration of three chain vectors with squares (-2, <= -3, -2) and a
/// basis vector hitting exactly those three and nothing else. Contractions
/// inside one component leave all other vectors untouched, and the greedy
/// order is safe because in-component contractions at distinct basis
/// indices commute.
fn count_bad_components(s: &LatticeSubset) -> Result<usize, LatticeError> {
    let graph = intersection_graph(s)?;
    let ids = vertex_ids_for(s.len());
    let mut bad = 0usize;
    for comp in graph.components() {
        let members: BTreeSet<usize> = comp
            .iter()
            .map(|v| ids.iter().position(|i| i == v).unwrap())
            .collect();
        if is_bad_component(s, &members)? {
            bad += 1;
        }
    }
    Ok(bad)
}

fn is_bad_component(s: &LatticeSubset, comp: &BTreeSet<usize>) -> Result<bool, LatticeError> {
    let mut cur = s.clone();
    let mut members: Vec<usize> = comp.iter().copied().collect();
    loop {
        let step = (0..cur.ambient_rank()).find_map(|k| {
            let hit = cur.hit_set(k);
            if hit.len() == 2 && hit.iter().all(|i| members.contains(i)) {
                contract_with_removed(&cur, k).ok()
            } else {
                None
            }
        });
        match step {
            Some((next, removed)) => {
                cur = next;
                members.retain(|&i| i != removed);
                for i in &mut members {
                    if *i > removed {
                        *i -= 1;
                    }
                }
            }
            None => break,
        }
    }
    if members.len() != 3 {
        return Ok(false);
    }
    let graph = intersection_graph(&cur)?;
    let ids = vertex_ids_for(cur.len());
    let center = members
        .iter()
        .copied()
        .find(|&i| graph.valency(&ids[i]) == 2);
    let Some(center) = center else {
        return Ok(false);
    };
    let outer: Vec<usize> = members.iter().copied().filter(|&i| i != center).collect();
    let two = BigInt::from(-2);
    if cur.pairing(center, center) >= two
        || cur.pairing(outer[0], outer[0]) != two
        || cur.pairing(outer[1], outer[1]) != two
    {
        return Ok(false);
    }
    let mut sorted = members.clone();
    sorted.sort_unstable();
    Ok((0..cur.ambient_rank()).any(|k| cur.hit_set(k) == sorted))
}

/// Contraction that also reports the index of the removed vector.
fn contract_with_removed(
    s: &LatticeSubset,
    basis_index: usize,
) -> Result<(LatticeSubset, usize), LatticeError> {
    let out = contract_minus2_final(s, basis_index)?;
    let hit = s.hit_set(basis_index);
    let graph = intersection_graph(s)?;
    let ids = vertex_ids_for(s.len());
    let two = BigInt::from(-2);
    let removed = if s.pairing(hit[0], hit[0]) == two && graph.valency(&ids[hit[0]]) == 1 {
        hit[0]
    } else {
        hit[1]
    };
    Ok((out, removed))
}

/// A -2-final contraction at basis index `k`: e_k must hit exactly two
/// vectors, one a final vector of square -2 (which is removed) and the
/// other of square < -2; the coordinate k is projected away.
pub fn contract_minus2_final(
    s: &LatticeSubset,
    basis_index: usize,
) -> Result<LatticeSubset, LatticeError> {
    if basis_index >= s.ambient_rank() {
        return Err(LatticeError::SideCondition(format!(
            "basis index {basis_index} out of range"
        )));
    }
    let graph = intersection_graph(s)?;
    let ids = vertex_ids_for(s.len());
    let hit = s.hit_set(basis_index);
    if hit.len() != 2 {
        return Err(LatticeError::SideCondition(format!(
            "e_{basis_index} hits {} vectors, not two",
            hit.len()
        )));
    }
    let two = BigInt::from(-2);
    let is_final = |i: usize| graph.valency(&ids[i]) == 1;
    let (h, k) = if s.pairing(hit[0], hit[0]) == two && is_final(hit[0]) {
        (hit[0], hit[1])
    } else if s.pairing(hit[1], hit[1]) == two && is_final(hit[1]) {
        (hit[1], hit[0])
    } else {
        return Err(LatticeError::SideCondition(
            "neither hit vector is a final vector of square -2".into(),
        ));
    };
    if s.pairing(k, k) >= two {
        return Err(LatticeError::SideCondition(
            "the other hit vector must have square < -2".into(),
        ));
    }
    let vectors: Vec<LatticeVector> = s
        .vectors()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != h)
        .map(|(_, v)| {
            LatticeVector::new(
                v.coords()
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != basis_index)
                    .map(|(_, x)| x.clone())
                    .collect(),
            )
        })
        .collect();
    let out = LatticeSubset::new(s.ambient_rank() - 1, vectors);
    intersection_graph(&out)?;
    Ok(out)
}

/// All one-step -2-final expansions of a linear subset, up to relabeling:
/// the fresh basis coordinate is appended last, the new -2 vector (with
/// positive fresh coordinate) is appended last, and each result contracts
/// back to the input at the returned basis index.
pub fn expand_minus2_final(s: &LatticeSubset) -> Vec<(LatticeSubset, usize)> {
    let ambient = s.ambient_rank();
    let fresh = ambient;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for target in 0..s.len() {
        for eps in [1i64, -1] {
            for t in 0..ambient {
                for delta in [1i64, -1] {
                    let mut vectors: Vec<LatticeVector> = s
                        .vectors()
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            let mut coords = v.coords().to_vec();
                            coords.push(if i == target {
                                BigInt::from(eps)
                            } else {
                                BigInt::zero()
                            });
                            LatticeVector::new(coords)
                        })
                        .collect();
                    let mut u = vec![BigInt::zero(); ambient + 1];
                    u[t] = BigInt::from(delta);
                    u[fresh] = BigInt::from(1);
                    vectors.push(LatticeVector::new(u));
                    let candidate = LatticeSubset::new(ambient + 1, vectors);
                    if intersection_graph(&candidate).is_err() {
                        continue;
                    }
                    let back = match contract_minus2_final(&candidate, fresh) {
                        Ok(b) => b,
                        Err(_) => continue,
                    };
                    if back != *s {
                        continue;
                    }
                    if seen.insert(candidate.vectors().to_vec()) {
                        out.push((candidate, fresh));
                    }
                }
            }
        }
    }
    out
}

/// Solves for the extra vector linked once to the marked vector of each
/// connected component and orthogonal to every other vector. Requires a
/// square subset (N vectors in Z^N) with nonsingular matrix; returns the
/// unique rational solution when it is integral.
pub fn solve_extra_vector(
    s: &LatticeSubset,
    marked: &[usize],
) -> Result<Option<LatticeVector>, LatticeError> {
    let n = s.len();
    if s.ambient_rank() != n {
        return Err(LatticeError::Precondition(format!(
            "need N vectors in Z^N, got {} in Z^{}",
            n,
            s.ambient_rank()
        )));
    }
    let graph = intersection_graph(s)?;
    let ids = vertex_ids_for(n);
    let comps = graph.components();
    if marked.len() != comps.len() {
        return Err(LatticeError::Precondition(format!(
            "need one marked vector per component: {} components, {} marked",
            comps.len(),
            marked.len()
        )));
    }
    for comp in &comps {
        let count = marked
            .iter()
            .filter(|&&i| comp.contains(&ids[i]))
            .count();
        if count != 1 {
            return Err(LatticeError::Precondition(
                "marked vectors must hit every component exactly once".into(),
            ));
        }
    }
    // Lattice pairing v·w = 1 means Euclidean <w, v> = -1.
    let rhs: Vec<BigRational> = (0..n)
        .map(|i| {
            if marked.contains(&i) {
                -BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            s.get(i)
                .coords()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    let solution = solve_rational(rows, rhs).ok_or(LatticeError::SingularSystem)?;
    if !solution.iter().all(|x| x.is_integer()) {
        return Ok(None);
    }
    let v = LatticeVector::new(solution.into_iter().map(|x| x.to_integer()).collect());
    let marked_sum: BigInt = marked.iter().map(|&i| s.pairing(i, i)).sum();
    assert!(
        v.self_pairing() > marked_sum,
        "extra-vector inequality v·v > Σ wᵢ·wᵢ must hold"
    );
    Ok(Some(v))
}

/// Gaussian elimination over the rationals; `None` when singular.
fn solve_rational(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &a[r][c] - &f * &a[col][c];
                a[r][c] = v;
            }
            let v = &b[r] - &f * &b[col];
            b[r] = v;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// All subsets of Z^ambient with the given Gram matrix, one representative
/// per orbit of the signed permutations of the basis, in canonical order.
pub fn search_embeddings(
    q: &IntMatrix,
    ambient: usize,
) -> Result<Vec<LatticeSubset>, LatticeError> {
    search_embeddings_jobs(q, ambient, 1)
}

/// Parallel variant: the first-level branches are distributed over up to
/// `jobs` threads; the result is sorted, so it is independent of the
/// scheduling.
pub fn search_embeddings_jobs(
    q: &IntMatrix,
    ambient: usize,
    jobs: usize,
) -> Result<Vec<LatticeSubset>, LatticeError> {
    if !q.is_symmetric() {
        return Err(LatticeError::Precondition("gram matrix must be symmetric".into()));
    }
    let n = q.size();
    let mut target = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            target[i][j] = i64::try_from(q.get(i, j))
                .map_err(|_| LatticeError::Precondition("gram entries overflow i64".into()))?;
        }
        if target[i][i] >= 0 {
            return Err(LatticeError::Precondition(
                "gram diagonal must be negative".into(),
            ));
        }
    }
    if n == 0 {
        return Ok(vec![LatticeSubset::new(ambient, vec![])]);
    }
    let first_candidates = embedding_candidates(&target, &[], 0, ambient);
    let run = |firsts: &[Vec<i64>]| {
        let mut found: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        for first in firsts {
            let mut chosen = vec![first.clone()];
            extend_embedding(&target, &mut chosen, ambient, &mut |rows| {
                found.insert(canonical_embedding(rows, ambient));
                false
            });
        }
        found
    };
    let found = if jobs > 1 && first_candidates.len() > 1 {
        let chunk = first_candidates.len().div_ceil(jobs);
        let results: Vec<BTreeSet<Vec<Vec<i64>>>> = std::thread::scope(|scope| {
            first_candidates
                .chunks(chunk)
                .map(|part| scope.spawn(|| run(part)))
                .collect::<Vec<_>>()
                .into_iter()
                .map(|h| h.join().expect("search thread"))
                .collect()
        });
        results.into_iter().flatten().collect()
    } else {
        run(&first_candidates)
    };
    Ok(found
        .into_iter()
        .map(|rows| {
            LatticeSubset::new(
                ambient,
                rows.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            )
        })
        .collect())
}

/// Depth-first over completions of `chosen`; the visitor returns true to
/// stop the search, and the return value reports whether it stopped.
fn extend_embedding(
    target: &[Vec<i64>],
    chosen: &mut Vec<Vec<i64>>,
    ambient: usize,
    visit: &mut impl FnMut(&[Vec<i64>]) -> bool,
) -> bool {
    let i = chosen.len();
    if i == target.len() {
        return visit(chosen);
    }
    for cand in embedding_candidates(target, chosen, i, ambient) {
        chosen.push(cand);
        let stop = extend_embedding(target, chosen, ambient, visit);
        chosen.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Candidate vectors x with <x,x> = -q_ii and <x, chosen_j> = -q_ij,
/// honoring the sign rule: the first vector to use a basis coordinate uses
/// it positively.
fn embedding_candidates(
    target: &[Vec<i64>],
    chosen: &[Vec<i64>],
    i: usize,
    ambient: usize,
) -> Vec<Vec<i64>> {
    let norm = -target[i][i];
    let dots: Vec<i64> = (0..chosen.len()).map(|j| -target[i][j]).collect();
    // Suffix Euclidean norms of the chosen vectors, for pruning.
    let suffix: Vec<Vec<i64>> = chosen
        .iter()
        .map(|v| {
            let mut s = vec![0i64; ambient + 1];
            for c in (0..ambient).rev() {
                s[c] = s[c + 1] + v[c] * v[c];
            }
            s
        })
        .collect();
    let active: Vec<bool> = (0..ambient)
        .map(|c| chosen.iter().any(|v| v[c] != 0))
        .collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; ambient];
    gen_coords(
        target,
        chosen,
        &dots,
        &suffix,
        &active,
        norm,
        0,
        &mut x,
        &mut vec![0i64; chosen.len()],
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn gen_coords(
    target: &[Vec<i64>],
    chosen: &[Vec<i64>],
    dots: &[i64],
    suffix: &[Vec<i64>],
    active: &[bool],
    budget: i64,
    c: usize,
    x: &mut Vec<i64>,
    partial: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let ambient = x.len();
    if c == ambient {
        if budget == 0 && partial.iter().zip(dots).all(|(p, d)| p == d) {
            out.push(x.clone());
        }
        return;
    }
    // Prune: each remaining dot product is bounded by Cauchy-Schwarz.
    for j in 0..chosen.len() {
        let gap = dots[j] - partial[j];
        if gap * gap > budget * suffix[j][c] {
            return;
        }
    }
    let max = (0..=budget).take_while(|v| v * v <= budget).last().unwrap_or(0);
    let lo = if active[c] { -max } else { 0 };
    for val in lo..=max {
        if val * val > budget {
            continue;
        }
        x[c] = val;
        for j in 0..chosen.len() {
            partial[j] += val * chosen[j][c];
        }
        gen_coords(
            target,
            chosen,
            dots,
            suffix,
            active,
            budget - val * val,
            c + 1,
            x,
            partial,
            out,
        );
        for j in 0..chosen.len() {
            partial[j] -= val * chosen[j][c];
        }
        x[c] = 0;
    }
}

/// Canonical representative under signed permutations of the coordinates
/// (rows), with the vector order fixed: every row is replaced by the
/// lexicographically smaller of itself and its negation, and the rows are
/// sorted.
fn canonical_embedding(vectors: &[Vec<i64>], ambient: usize) -> Vec<Vec<i64>> {
    let n = vectors.len();
    let mut rows: Vec<Vec<i64>> = (0..ambient)
        .map(|c| (0..n).map(|i| vectors[i][c]).collect())
        .collect();
    for row in &mut rows {
        let neg: Vec<i64> = row.iter().map(|v| -v).collect();
        if neg < *row {
            *row = neg;
        }
    }
    rows.sort();
    // Back to column (vector) form.
    (0..n)
        .map(|i| rows.iter().map(|r| r[i]).collect())
        .collect()
}

/// Full canonical matrix of a subset under signed permutations of the
/// basis and reordering of the vectors; used to compare orbits.
pub fn canonical_subset_matrix(s: &LatticeSubset) -> Vec<Vec<i64>> {
    let n = s.len();
    let cols: Vec<Vec<i64>> = s
        .vectors()
        .iter()
        .map(|v| {
            v.coords()
                .iter()
                .map(|c| i64::try_from(c).expect("desk-scale"))
                .collect()
        })
        .collect();
    let mut best: Option<Vec<Vec<i64>>> = None;
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |perm| {
        let arranged: Vec<Vec<i64>> = perm.iter().map(|&i| cols[i].clone()).collect();
        let canon = canonical_embedding(&arranged, s.ambient_rank());
        let rows: Vec<Vec<i64>> = (0..s.ambient_rank())
            .map(|c| (0..n).map(|i| canon[i][c]).collect())
            .collect();
        if best.as_ref().is_none_or(|b| rows < *b) {
            best = Some(rows);
        }
    });
    best.unwrap_or_default()
}

fn permute(order: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == order.len() {
        f(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, f);
        order.swap(k, i);
    }
}

/// Embedding test for a normal-form graph g with a distinguished vertex v
/// such that g - v is linear and negative definite: searches for an
/// embedding of g - v into Z^(N-1) together with an integral extra vector
/// x with x·x = w(v), linked once to each neighbor of v and orthogonal to
/// the rest. This is exactly the lattice obstruction for the negative
/// semidefinite graph.
pub fn embed_with_extra(
    g: &PlumbingGraph,
    v: &VertexId,
) -> Result<Option<(LatticeSubset, LatticeVector)>, LatticeError> {
    embed_with_extra_jobs(g, v, 1)
}

pub fn embed_with_extra_jobs(
    g: &PlumbingGraph,
    v: &VertexId,
    jobs: usize,
) -> Result<Option<(LatticeSubset, LatticeVector)>, LatticeError> {
    let _ = jobs;
    let w_v = g.weight(v)?;
    let rest = g.without_vertex(v);
    if !rest.is_linear() {
        return Err(LatticeError::Precondition(
            "removing the vertex must leave a linear graph".into(),
        ));
    }
    if !signature(&rest).is_negative_definite() {
        return Err(LatticeError::Precondition(
            "the linear remainder must be negative definite".into(),
        ));
    }
    let q = crate::graph::intersection_matrix(&rest);
    let ids = rest.vertex_ids();
    let marked: Vec<usize> = ids
        .iter()
        .enumerate()
        .filter(|(_, id)| g.has_edge(v, id))
        .map(|(i, _)| i)
        .collect();
    let ambient = ids.len();
    let n = q.size();
    let mut target = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            target[i][j] = i64::try_from(q.get(i, j))
                .map_err(|_| LatticeError::Precondition("gram entries overflow i64".into()))?;
        }
    }
    // Short-circuit on the first embedding whose unique extra vector is
    // integral with the right square.
    let mut hit: Option<(LatticeSubset, LatticeVector)> = None;
    let mut error: Option<LatticeError> = None;
    let mut chosen = Vec::new();
    extend_embedding(&target, &mut chosen, ambient, &mut |rows| {
        let s = LatticeSubset::new(
            ambient,
            rows.iter().map(|r| LatticeVector::from_i64(r)).collect(),
        );
        match solve_extra_vector(&s, &marked) {
            Ok(Some(x)) if x.self_pairing() == BigInt::from(w_v) => {
                hit = Some((s, x));
                true
            }
            Ok(_) => false,
            Err(e) => {
                error = Some(e);
                true
            }
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(hit)
}

/// All good subsets of Z^n (n vectors, linear, irreducible) with
/// I(S) <= max_i, up to signed permutation of the basis and reordering,
/// filtered by the predicate on their statistics. The I-bound caps the
/// total norm at 3n + max_i, which makes the search finite.
pub fn enumerate_good_subsets(
    n: usize,
    max_i: i64,
    pred: impl Fn(&SubsetStats) -> bool,
) -> Result<Vec<LatticeSubset>, LatticeError> {
    const MAX_RANK: usize = 6;
    if n > MAX_RANK {
        return Err(LatticeError::RankTooLarge(n, MAX_RANK));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let budget = 3 * (n as i64) + max_i;
    if budget < 2 * n as i64 {
        return Ok(vec![]);
    }
    let max_norm = budget - 2 * (n as i64 - 1);
    let pool = vectors_of_norm_up_to(n, max_norm);
    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut out: Vec<LatticeSubset> = Vec::new();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    enumerate_rec(
        n,
        budget,
        &pool,
        &mut chosen,
        &pred,
        &mut seen,
        &mut out,
    );
    Ok(out)
}

fn norm_of(v: &[i64]) -> i64 {
    v.iter().map(|c| c * c).sum()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All vectors in Z^n with 2 <= Euclidean norm <= max, sorted by (norm,
/// coordinates).
fn vectors_of_norm_up_to(n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(x: &mut Vec<i64>, c: usize, remaining: i64, out: &mut Vec<Vec<i64>>) {
        if c == x.len() {
            out.push(x.clone());
            return;
        }
        let max = (0..=remaining)
            .take_while(|v| v * v <= remaining)
            .last()
            .unwrap_or(0);
        for val in -max..=max {
            x[c] = val;
            rec(x, c + 1, remaining - val * val, out);
            x[c] = 0;
        }
    }
    rec(&mut x, 0, max, &mut out);
    out.retain(|v| norm_of(v) >= 2);
    out.sort_by_key(|v| (norm_of(v), v.clone()));
    out
}

/// A canonical head vector: nonincreasing nonnegative coordinates (every
/// vector can be brought to this shape by a signed permutation).
fn is_canonical_head(v: &[i64]) -> bool {
    v.iter().all(|&c| c >= 0) && v.windows(2).all(|w| w[0] >= w[1])
}

fn enumerate_rec(
    n: usize,
    budget: i64,
    pool: &[Vec<i64>],
    chosen: &mut Vec<Vec<i64>>,
    pred: &impl Fn(&SubsetStats) -> bool,
    seen: &mut BTreeSet<Vec<Vec<i64>>>,
    out: &mut Vec<LatticeSubset>,
) {
    if chosen.len() == n {
        let subset = LatticeSubset::new(
            n,
            chosen.iter().map(|v| LatticeVector::from_i64(v)).collect(),
        );
        let Ok(st) = stats(&subset) else { return };
        if !st.is_irreducible() || !pred(&st) {
            return;
        }
        let canon = canonical_subset_matrix(&subset);
        if seen.insert(canon.clone()) {
            let ambient = subset.ambient_rank();
            out.push(LatticeSubset::new(
                ambient,
                (0..n)
                    .map(|i| LatticeVector::from_i64(&(0..ambient).map(|r| canon[r][i]).collect::<Vec<_>>()))
                    .collect(),
            ));
        }
        return;
    }
    let spent: i64 = chosen.iter().map(|v| norm_of(v)).sum();
    let remaining = (n - chosen.len()) as i64;
    let last_norm = chosen.last().map_or(2, |v| norm_of(v));
    for cand in pool {
        let nm = norm_of(cand);
        if nm < last_norm {
            continue;
        }
        if spent + nm + 2 * (remaining - 1) > budget {
            continue;
        }
        if chosen.is_empty() && !is_canonical_head(cand) {
            continue;
        }
        // Pairings with all chosen vectors must be 0 or 1 (dot 0 or -1).
        if !chosen.iter().all(|v| {
            let d = dot(v, cand);
            d == 0 || d == -1
        }) {
            continue;
        }
        chosen.push(cand.clone());
        if partial_graph_is_linear(chosen) {
            enumerate_rec(n, budget, pool, chosen, pred, seen, out);
        }
        chosen.pop();
    }
}

/// Valency <= 2 and no cycles among the pairing-one edges.
fn partial_graph_is_linear(chosen: &[Vec<i64>]) -> bool {
    let n = chosen.len();
    let mut deg = vec![0usize; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if dot(&chosen[i], &chosen[j]) == -1 {
                deg[i] += 1;
                deg[j] += 1;
                if deg[i] > 2 || deg[j] > 2 {
                    return false;
                }
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
    }
    true
}
