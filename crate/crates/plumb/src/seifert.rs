//! Seifert invariants of star-shaped plumbing graphs, Euler numbers,
//! complementary strings, and the decision procedure for which Seifert
//! fibered spaces over the 2-sphere bound rational homology S^1 x D^3's:
//! the invariants must occur in complementary pairs with Euler number zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

use crate::calculus::{
    complementary_string, eval_string, normalize, string_of_fraction,
    CalculusError,
};
use crate::graph::{PlumbingGraph, RootedGraph, VertexId};
use crate::rational::ExtendedRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("invalid pair ({alpha},{beta}): {reason}")]
    InvalidPair { alpha: i64, beta: i64, reason: String },
    #[error("not star shaped: {0}")]
    NotStarShaped(String),
    #[error("{0}")]
    Calculus(#[from] CalculusError),
}

/// Unnormalized Seifert invariants over a genus-0 base:
/// (0; b; (α₁,β₁), ..., (α_k,β_k)) with every αᵢ > 1 coprime to βᵢ.
/// Trivial multiple fibers (α = 1) are absorbed into `b` on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertInvariants {
    b: i64,
    pairs: Vec<(i64, i64)>,
}

impl SeifertInvariants {
    pub fn new(b: i64, pairs: Vec<(i64, i64)>) -> Result<Self, SeifertError> {
        let mut b = b;
        let mut kept = Vec::new();
        for (alpha, beta) in pairs {
            if alpha < 1 {
                return Err(SeifertError::InvalidPair {
                    alpha,
                    beta,
                    reason: "alpha must be positive".into(),
                });
            }
            if alpha == 1 {
                b -= beta;
                continue;
            }
            if alpha.gcd(&beta) != 1 {
                return Err(SeifertError::InvalidPair {
                    alpha,
                    beta,
                    reason: "alpha and beta must be coprime".into(),
                });
            }
            kept.push((alpha, beta));
        }
        Ok(Self { b, pairs: kept })
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    /// Shifts every β into the range -α < β < 0 (making α/β < -1),
    /// compensating b so the Euler number is unchanged.
    pub fn normalized(&self) -> (i64, Vec<(i64, i64)>) {
        let mut b = self.b;
        let mut shifted = Vec::with_capacity(self.pairs.len());
        for &(alpha, beta) in &self.pairs {
            let beta_new = beta.mod_floor(&alpha) - alpha;
            // beta = beta_new + t * alpha shifts b by -t.
            let t = (beta - beta_new) / alpha;
            b -= t;
            shifted.push((alpha, beta_new));
        }
        (b, shifted)
    }

    /// The normal-form leg strings, one per pair, read outward from the
    /// star's center.
    pub fn leg_strings(&self) -> Vec<Vec<i64>> {
        let (_, pairs) = self.normalized();
        pairs
            .iter()
            .map(|&(alpha, beta)| {
                string_of_fraction(&BigInt::from(alpha), &BigInt::from(-beta))
                    .expect("normalized pairs satisfy alpha > -beta >= 1")
            })
            .collect()
    }
}

/// e(Y) = b - Σ βᵢ/αᵢ, exactly.
pub fn euler_number(si: &SeifertInvariants) -> ExtendedRational {
    let mut e = ExtendedRational::from_int(si.b);
    for &(alpha, beta) in &si.pairs {
        let term = ExtendedRational::new(beta, alpha).expect("alpha > 1");
        e = e.checked_sub(&term).expect("finite arithmetic");
    }
    e
}

/// The star graph of the invariants: center of weight b' (the normalized b)
/// with one leg per pair, rooted at the center. Leg weights are all <= -2;
/// the center weight is unconstrained, so with fewer than three legs the
/// result may fail to be in normal form.
pub fn raw_star(si: &SeifertInvariants) -> RootedGraph {
    let (b, _) = si.normalized();
    let legs = si.leg_strings();
    let center = VertexId::new("b");
    let mut verts = vec![(center.clone(), b)];
    let mut edges = Vec::new();
    for (i, leg) in legs.iter().enumerate() {
        let ids: Vec<VertexId> = (0..leg.len())
            .map(|j| VertexId::new(format!("l{i}x{j}")))
            .collect();
        for (id, &w) in ids.iter().zip(leg) {
            verts.push((id.clone(), w));
        }
        edges.push((center.clone(), ids[0].clone()));
        for j in 1..ids.len() {
            edges.push((ids[j - 1].clone(), ids[j].clone()));
        }
    }
    let g = PlumbingGraph::from_parts(verts, edges).expect("stars are forests");
    RootedGraph::new(g, center).expect("nonempty and connected")
}

/// Normal-form plumbing graph of the Seifert manifold. Degenerate cases
/// (at most two legs with a center weight above -2) pass through the full
/// normalization.
pub fn star_from_seifert(si: &SeifertInvariants) -> Result<PlumbingGraph, SeifertError> {
    let star = raw_star(si).into_parts().0;
    if star.is_normal_form() {
        Ok(star)
    } else {
        Ok(normalize(&star)?)
    }
}

/// Reads unnormalized Seifert invariants off a star-shaped normal-form
/// graph: b is the center weight and αᵢ/βᵢ = [aᵢ₁, ..., aᵢₙ]⁻ along each
/// leg read outward from the center.
pub fn seifert_from_star(g: &PlumbingGraph) -> Result<SeifertInvariants, SeifertError> {
    let center = find_center(g)?;
    let b = g.weight(&center).expect("center is a vertex");
    let rest = g.without_vertex(&center);
    let mut pairs = Vec::new();
    for comp in rest.components() {
        let leg = rest.induced(&comp);
        let attach: Vec<&VertexId> = comp
            .iter()
            .filter(|u| g.has_edge(&center, u))
            .collect();
        if attach.len() != 1 || leg.valency(attach[0]) > 1 || !leg.is_linear() {
            return Err(SeifertError::NotStarShaped(
                "legs must be chains attached at an end".into(),
            ));
        }
        let weights = walk_leg(&leg, attach[0]);
        if weights.iter().any(|&w| w > -2) {
            return Err(SeifertError::NotStarShaped(
                "leg weights must all be <= -2".into(),
            ));
        }
        let cf = eval_string(&weights);
        // cf = α/β with α > 0.
        let (alpha, beta) = if cf.numer().is_negative() {
            (-cf.numer(), -cf.denom())
        } else {
            (cf.numer().clone(), cf.denom().clone())
        };
        pairs.push((
            i64::try_from(&alpha).expect("desk-scale alpha"),
            i64::try_from(&beta).expect("desk-scale beta"),
        ));
    }
    pairs.sort();
    SeifertInvariants::new(b, pairs)
}

fn find_center(g: &PlumbingGraph) -> Result<VertexId, SeifertError> {
    if g.is_empty() || !g.is_connected() {
        return Err(SeifertError::NotStarShaped(
            "graph must be nonempty and connected".into(),
        ));
    }
    let nodes: Vec<VertexId> = g
        .vertex_ids()
        .into_iter()
        .filter(|v| g.valency(v) >= 3)
        .collect();
    if nodes.len() > 1 {
        return Err(SeifertError::NotStarShaped(
            "more than one vertex of valency >= 3".into(),
        ));
    }
    if let Some(c) = nodes.into_iter().next() {
        return Ok(c);
    }
    if g.vertex_count() == 1 {
        return Ok(g.vertex_ids().into_iter().next().unwrap());
    }
    // On a chain the center is the unique vertex of weight >= -1, when
    // there is one; otherwise the choice is ambiguous.
    let heavy: Vec<VertexId> = g
        .vertices()
        .filter(|(_, w)| *w >= -1)
        .map(|(v, _)| v.clone())
        .collect();
    match heavy.len() {
        1 => Ok(heavy.into_iter().next().unwrap()),
        0 => Err(SeifertError::NotStarShaped(
            "ambiguous center: every vertex of the chain has weight <= -2".into(),
        )),
        _ => Err(SeifertError::NotStarShaped(
            "several candidate centers on a chain".into(),
        )),
    }
}

fn walk_leg(leg: &PlumbingGraph, start: &VertexId) -> Vec<i64> {
    let mut out = vec![leg.weight(start).unwrap()];
    let mut prev: Option<VertexId> = None;
    let mut cur = start.clone();
    while let Some(next) = leg
        .neighbors(&cur)
        .find(|u| Some(*u) != prev.as_ref())
        .cloned()
    {
        out.push(leg.weight(&next).unwrap());
        prev = Some(cur);
        cur = next;
    }
    out
}

/// Tests whether two normal-form strings are complementary. All three
/// equivalent characterizations are evaluated and must agree: string
/// duality, the (b_m..b_1, -1, a_1..a_n) chain normalizing to the
/// 0-vertex, and 1/cf(s1) + 1/cf(s2) = -1.
pub fn are_complementary(s1: &[i64], s2: &[i64]) -> Result<bool, CalculusError> {
    for &a in s1.iter().chain(s2) {
        if a > -2 {
            return Err(CalculusError::BadStringWeight(a));
        }
    }
    let by_duality = complementary_string(s1)? == s2;

    let mut middle: Vec<i64> = s2.iter().rev().copied().collect();
    middle.push(-1);
    middle.extend_from_slice(s1);
    let nf = normalize(&PlumbingGraph::chain(&middle))?;
    let by_surgery = nf.vertex_count() == 1 && nf.vertices().next().unwrap().1 == 0;

    let sum = eval_string(s1)
        .recip()
        .checked_add(&eval_string(s2).recip())
        .expect("chain fractions are finite");
    let by_fraction = sum == ExtendedRational::from_int(-1);

    assert_eq!(by_duality, by_surgery, "complementarity conditions disagree");
    assert_eq!(by_surgery, by_fraction, "complementarity conditions disagree");
    Ok(by_duality)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertDecision {
    pub bounds: bool,
    pub certificate: SeifertCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeifertCertificate {
    /// Legs (outward strings, in pair order) and the matched index pairs.
    Pairing {
        legs: Vec<Vec<i64>>,
        pairing: Vec<(usize, usize)>,
    },
    EulerNonZero(ExtendedRational),
    OddLegCount(usize),
    NoComplementaryPairing(Vec<Vec<i64>>),
}

/// A Seifert fibered space over S^2 bounds a rational homology S^1 x D^3
/// exactly when e(Y) = 0 and the invariants occur in complementary pairs.
pub fn decide_seifert_bounds(si: &SeifertInvariants) -> Result<SeifertDecision, CalculusError> {
    let e = euler_number(si);
    if !e.is_zero() {
        return Ok(SeifertDecision {
            bounds: false,
            certificate: SeifertCertificate::EulerNonZero(e),
        });
    }
    let legs = si.leg_strings();
    if legs.len() % 2 != 0 {
        return Ok(SeifertDecision {
            bounds: false,
            certificate: SeifertCertificate::OddLegCount(legs.len()),
        });
    }
    let mut used = vec![false; legs.len()];
    let mut pairing = Vec::new();
    if match_legs(&legs, &mut used, &mut pairing)? {
        // e(Y) = 0 with k complementary pairs forces center weight -k.
        let (b, _) = si.normalized();
        assert_eq!(
            b,
            -((legs.len() / 2) as i64),
            "euler number zero forces b = -(number of pairs)"
        );
        Ok(SeifertDecision {
            bounds: true,
            certificate: SeifertCertificate::Pairing { legs, pairing },
        })
    } else {
        Ok(SeifertDecision {
            bounds: false,
            certificate: SeifertCertificate::NoComplementaryPairing(legs),
        })
    }
}

fn match_legs(
    legs: &[Vec<i64>],
    used: &mut [bool],
    pairing: &mut Vec<(usize, usize)>,
) -> Result<bool, CalculusError> {
    let first = match used.iter().position(|u| !u) {
        Some(i) => i,
        None => return Ok(true),
    };
    used[first] = true;
    for j in first + 1..legs.len() {
        if used[j] || !are_complementary(&legs[first], &legs[j])? {
            continue;
        }
        used[j] = true;
        pairing.push((first, j));
        if match_legs(legs, used, pairing)? {
            return Ok(true);
        }
        pairing.pop();
        used[j] = false;
    }
    used[first] = false;
    Ok(false)
}
