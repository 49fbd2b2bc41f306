//! Both sides of the open/closed correspondence and the two lemmas behind it.
//!
//! The closed side is the restricted graph sum over `G^1`. The open side sums
//! over tuples of legs `(μ, d, A)` hanging off the special σ0 vertex; each leg
//! is a disk invariant of degree `(d+μ, d)` (type 1) or `(d, d+μ)` (type 2).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::algebra::scalar::{factorial, int, minus_one_pow};
use crate::algebra::{MonoU, Scalar};
use crate::closed::GraphValuation;
use crate::engine::Engine;
use crate::graphs::{classify_stratum, is_balanced_node, DecoratedGraph, Edge, EdgeLabel, TargetKind, VertexLabel};
use crate::open::{open_graph_contribution, Insertion};
use crate::psi::{vertex_integral, FlagWeight, VertexIntegralSpec, WeightVar};
use crate::Error;

type Beta = (u32, u32);

/// One leg at the special vertex: winding `mu`, balanced degree `d`, markings `A`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Leg {
    pub mu: u32,
    pub d: u32,
    /// 0-based marking indices.
    pub markings: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceTuple {
    /// Legs along τ1, disk class `(d+μ, d)`.
    pub type1: Vec<Leg>,
    /// Legs along τ2, disk class `(d, d+μ)`.
    pub type2: Vec<Leg>,
}

fn group_aut(legs: &[Leg]) -> u64 {
    let mut counts: BTreeMap<&Leg, u64> = BTreeMap::new();
    for leg in legs {
        *counts.entry(leg).or_insert(0) += 1;
    }
    counts.values().map(|m| (1..=*m).product::<u64>()).product()
}

impl CorrespondenceTuple {
    pub fn num_legs(&self) -> usize {
        self.type1.len() + self.type2.len()
    }

    /// `|Aut(μ¹, d¹, A¹)| · |Aut(μ², d², A²)|`.
    pub fn aut_order(&self) -> u64 {
        group_aut(&self.type1) * group_aut(&self.type2)
    }

    /// Flag weights `-u/μ¹_i` and `u/μ²_j` at the special vertex.
    pub fn flags(&self) -> Vec<FlagWeight> {
        let w = |sign: i64, mu: u32| FlagWeight::new(WeightVar::U, int(sign) / int(mu as i64));
        self.type1
            .iter()
            .map(|l| w(-1, l.mu))
            .chain(self.type2.iter().map(|l| w(1, l.mu)))
            .collect()
    }

    pub fn is_admissible(&self, beta: Beta, n: usize) -> bool {
        let l = self.type1.len();
        let m = self.type2.len();
        if l + m == 0 || (l == 1 && m == 1 && self.type1[0].mu == self.type2[0].mu) {
            return false;
        }
        let d1: u32 = self.type1.iter().map(|x| x.d + x.mu).sum::<u32>() + self.type2.iter().map(|x| x.d).sum::<u32>();
        let d2: u32 = self.type1.iter().map(|x| x.d).sum::<u32>() + self.type2.iter().map(|x| x.d + x.mu).sum::<u32>();
        let mut marks: Vec<usize> = self
            .type1
            .iter()
            .chain(&self.type2)
            .flat_map(|x| x.markings.iter().copied())
            .collect();
        marks.sort_unstable();
        (d1, d2) == beta && marks == (0..n).collect::<Vec<_>>()
    }
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort();
    out
}

/// Every admissible tuple once, legs in non-decreasing canonical order.
pub fn enumerate_tuples(beta: Beta, n: usize) -> Vec<CorrespondenceTuple> {
    let (d1, d2) = beta;
    // (type, leg) candidates in canonical order: type 1 first, then (μ, d, A).
    let mut candidates: Vec<(u8, Leg)> = Vec::new();
    for kind in [1u8, 2] {
        let (big, small) = if kind == 1 { (d1, d2) } else { (d2, d1) };
        for mu in 1..=big {
            for d in 0..=small.min(big - mu) {
                for a in subsets(n) {
                    candidates.push((kind, Leg { mu, d, markings: a }));
                }
            }
        }
    }
    candidates.sort();

    fn go(
        candidates: &[(u8, Leg)],
        start: usize,
        left: (u32, u32),
        used: &mut Vec<bool>,
        chosen: &mut Vec<(u8, Leg)>,
        out: &mut Vec<CorrespondenceTuple>,
        beta: Beta,
    ) {
        if left == (0, 0) && !chosen.is_empty() {
            let tuple = CorrespondenceTuple {
                type1: chosen.iter().filter(|c| c.0 == 1).map(|c| c.1.clone()).collect(),
                type2: chosen.iter().filter(|c| c.0 == 2).map(|c| c.1.clone()).collect(),
            };
            if tuple.is_admissible(beta, used.len()) {
                out.push(tuple);
            }
        }
        for idx in start..candidates.len() {
            let (kind, leg) = &candidates[idx];
            let cost = if *kind == 1 {
                (leg.d + leg.mu, leg.d)
            } else {
                (leg.d, leg.d + leg.mu)
            };
            if cost.0 > left.0 || cost.1 > left.1 || leg.markings.iter().any(|&i| used[i]) {
                continue;
            }
            for &i in &leg.markings {
                used[i] = true;
            }
            chosen.push((*kind, leg.clone()));
            // A leg may repeat only when it carries no markings.
            let next = if leg.markings.is_empty() { idx } else { idx + 1 };
            go(candidates, next, (left.0 - cost.0, left.1 - cost.1), used, chosen, out, beta);
            chosen.pop();
            for &i in &leg.markings {
                used[i] = false;
            }
        }
    }

    let mut out = Vec::new();
    go(&candidates, 0, beta, &mut vec![false; n], &mut Vec::new(), &mut out, beta);
    out
}

fn leg_insertions(leg: &Leg, insertions: &[Insertion]) -> Vec<Insertion> {
    leg.markings.iter().map(|&i| insertions[i]).collect()
}

/// `∏_i ((-1)^{μ¹_i}/u) ⟨A¹_i⟩ · ∏_j ((-1)^{μ²_j+1}/u) ⟨A²_j⟩`.
fn disk_product(engine: &Engine, tuple: &CorrespondenceTuple, insertions: &[Insertion]) -> Result<MonoU, Error> {
    let mut acc = MonoU::one();
    for leg in &tuple.type1 {
        let disk = engine.disk_invariant((leg.d + leg.mu, leg.d), &leg_insertions(leg, insertions))?;
        acc = &acc * &MonoU::new(minus_one_pow(leg.mu), -1);
        acc = &acc * &disk;
    }
    for leg in &tuple.type2 {
        let disk = engine.disk_invariant((leg.d, leg.d + leg.mu), &leg_insertions(leg, insertions))?;
        acc = &acc * &MonoU::new(minus_one_pow(leg.mu + 1), -1);
        acc = &acc * &disk;
    }
    Ok(acc)
}

/// `(-u²)^{l+m-1} / |Aut|`.
fn tuple_prefactor(tuple: &CorrespondenceTuple) -> MonoU {
    let k = tuple.num_legs() as u32;
    let c = minus_one_pow(k - 1) / Scalar::from_integer(BigInt::from(tuple.aut_order()));
    MonoU::new(c, 2 * (k as i64 - 1))
}

/// Tuple weight through the special-vertex integral, valid for every `l + m ≥ 1`.
pub fn tuple_weight(engine: &Engine, tuple: &CorrespondenceTuple, insertions: &[Insertion]) -> Result<MonoU, Error> {
    let disks = disk_product(engine, tuple, insertions)?;
    if disks.is_zero() {
        return Ok(MonoU::zero());
    }
    let vertex = vertex_integral(&VertexIntegralSpec::flags_only(tuple.flags()))?.restrict_antidiagonal()?;
    Ok(&(&tuple_prefactor(tuple) * &vertex) * &disks)
}

/// Tuple weight through the explicit `(b, c)` multinomial sum; needs `l + m ≥ 3`.
pub fn tuple_weight_multinomial(
    engine: &Engine,
    tuple: &CorrespondenceTuple,
    insertions: &[Insertion],
) -> Result<MonoU, Error> {
    let k = tuple.num_legs();
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "the multinomial form needs at least three legs, got {k}"
        )));
    }
    let dim = (k - 3) as u32;
    // base[i] = μ/(-u) for type 1, μ/u for type 2
    let base: Vec<MonoU> = tuple
        .type1
        .iter()
        .map(|l| MonoU::new(-int(l.mu as i64), -1))
        .chain(tuple.type2.iter().map(|l| MonoU::new(int(l.mu as i64), -1)))
        .collect();
    let mut sum = MonoU::zero();
    let mut exps = vec![0u32; k];
    loop {
        if exps.iter().sum::<u32>() == dim {
            let mut term = MonoU::new(Scalar::from_integer(factorial(dim)), 0);
            for (b, &e) in base.iter().zip(&exps) {
                for _ in 0..=e {
                    term = &term * b;
                }
                term = term.scale(&Scalar::new(BigInt::one(), factorial(e)));
            }
            sum = sum.checked_add(&term)?;
        }
        let mut i = 0;
        loop {
            if i == k {
                let disks = disk_product(engine, tuple, insertions)?;
                return Ok(&(&tuple_prefactor(tuple) * &sum) * &disks);
            }
            if exps[i] < dim {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Whether both evaluations of a stable tuple's weight agree exactly.
pub fn stable_multinomial_crosscheck(
    engine: &Engine,
    tuple: &CorrespondenceTuple,
    insertions: &[Insertion],
) -> Result<bool, Error> {
    let literal = tuple_weight_multinomial(engine, tuple, insertions)?;
    Ok(literal == tuple_weight(engine, tuple, insertions)?)
}

fn check_correspondence_input(beta: Beta, insertions: &[Insertion]) -> Result<(), Error> {
    if beta.0 == beta.1 {
        return Err(Error::InvalidInput(format!(
            "the correspondence needs d1 != d2, got ({}, {})",
            beta.0, beta.1
        )));
    }
    crate::open::check_open_insertions(insertions)
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleReport {
    pub type1: Vec<Leg>,
    pub type2: Vec<Leg>,
    pub aut: u64,
    pub weight: String,
}

/// Sum over admissible tuples of the open-side weights.
pub fn rhs_theorem(engine: &Engine, beta: Beta, insertions: &[Insertion]) -> Result<(MonoU, Vec<TupleReport>), Error> {
    check_correspondence_input(beta, insertions)?;
    let mut total = MonoU::zero();
    let mut rows = Vec::new();
    for tuple in enumerate_tuples(beta, insertions.len()) {
        let w = tuple_weight(engine, &tuple, insertions)?;
        total = total.checked_add(&w)?;
        rows.push(TupleReport {
            aut: tuple.aut_order(),
            weight: w.canonical_string(),
            type1: tuple.type1,
            type2: tuple.type2,
        });
    }
    Ok((total, rows))
}

#[derive(Clone, Debug, Serialize)]
pub struct InsertionJson {
    pub alpha: u8,
    pub a: u32,
}

pub fn insertions_json(insertions: &[Insertion]) -> Vec<InsertionJson> {
    insertions
        .iter()
        .map(|i| InsertionJson { alpha: i.alpha, a: i.a })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ValuationRow {
    pub graph: usize,
    pub k: usize,
    pub l: Option<usize>,
    /// `None` for a contribution that vanishes identically.
    pub valuation: Option<i64>,
    pub pass: bool,
}

impl From<&GraphValuation> for ValuationRow {
    fn from(g: &GraphValuation) -> Self {
        ValuationRow {
            graph: g.index,
            k: g.k,
            l: g.l,
            valuation: g.valuation,
            pass: g.passes(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub beta: [u32; 2],
    pub insertions: Vec<InsertionJson>,
    pub lhs: String,
    pub rhs: String,
    pub status: &'static str,
    pub tuples: Vec<TupleReport>,
    pub valuations: Vec<ValuationRow>,
    #[serde(skip)]
    pub lhs_value: MonoU,
    #[serde(skip)]
    pub rhs_value: MonoU,
}

impl VerificationReport {
    pub fn is_equal(&self) -> bool {
        self.status == "equal"
    }
}

pub fn verify_correspondence(engine: &Engine, beta: Beta, insertions: &[Insertion]) -> Result<VerificationReport, Error> {
    check_correspondence_input(beta, insertions)?;
    let closed = engine.closed_invariant_restricted(beta, insertions)?;
    let (rhs, tuples) = rhs_theorem(engine, beta, insertions)?;
    let lhs = closed.value;
    Ok(VerificationReport {
        beta: [beta.0, beta.1],
        insertions: insertions_json(insertions),
        lhs: lhs.canonical_string(),
        rhs: rhs.canonical_string(),
        status: if lhs == rhs { "equal" } else { "mismatch" },
        tuples,
        valuations: closed.rows.iter().map(ValuationRow::from).collect(),
        lhs_value: lhs,
        rhs_value: rhs,
    })
}

/// Removes the balanced σ0 nodes of a `G^{1,1}` graph, merging their two edges,
/// and turns the special vertex into the root. `None` when a marking sits on a
/// σ0 vertex (such graphs contribute zero for `α ∈ {1,2}`).
pub fn collapse_to_open(g: &DecoratedGraph) -> Option<DecoratedGraph> {
    let tag = classify_stratum(g).ok()?;
    let v_star = tag.v_star?;
    if tag.l != Some(1) {
        return None;
    }
    if g.markings.iter().any(|&v| g.labels[v] == VertexLabel::Sigma0) {
        return None;
    }
    let mut index = vec![usize::MAX; g.num_vertices()];
    let mut labels = Vec::new();
    for (v, slot) in index.iter_mut().enumerate() {
        if is_balanced_node(g, v) {
            continue;
        }
        *slot = labels.len();
        labels.push(match g.labels[v] {
            VertexLabel::Sigma1 => VertexLabel::Plus,
            VertexLabel::Sigma2 => VertexLabel::Minus,
            _ => VertexLabel::Root,
        });
    }
    let mut edges = Vec::new();
    for e in &g.edges {
        let [a, b] = e.ends;
        let (keep, node) = match (is_balanced_node(g, a), is_balanced_node(g, b)) {
            (false, false) => {
                edges.push(Edge {
                    ends: [index[a], index[b]],
                    label: EdgeLabel::Tau,
                    degree: e.degree,
                });
                continue;
            }
            (true, false) => (b, a),
            (false, true) => (a, b),
            (true, true) => return None,
        };
        // Emit each merged edge once, from its τ1 half.
        if e.label != EdgeLabel::Tau1 {
            continue;
        }
        let partner = g.incident(node).find(|f| f.label == EdgeLabel::Tau2)?;
        edges.push(Edge {
            ends: [index[keep], index[partner.other(node)]],
            label: EdgeLabel::Tau,
            degree: e.degree,
        });
    }
    let mut out = DecoratedGraph {
        kind: TargetKind::OpenP1,
        labels,
        edges,
        root: Some(index[v_star]),
        markings: g.markings.iter().map(|&v| index[v]).collect(),
        aut_order: 1,
    };
    out.aut_order = out.automorphism_order();
    Some(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct G11Report {
    pub beta: [u32; 2],
    pub insertions: Vec<InsertionJson>,
    pub disk: String,
    pub closed_side: String,
    pub g11_graphs: Vec<usize>,
    /// The collapse map hits every open graph exactly once with the same automorphism order.
    pub bijection: bool,
    /// `C_{φ(Γ)} = (-1)^{μ+1} μ C̃_Γ|` for every graph.
    pub termwise: bool,
    pub equal: bool,
}

pub fn check_lemma_g11(engine: &Engine, beta: Beta, insertions: &[Insertion]) -> Result<G11Report, Error> {
    check_correspondence_input(beta, insertions)?;
    let mu = beta.0.abs_diff(beta.1);
    let factor = minus_one_pow(mu + 1) * int(mu as i64);
    let disk = engine.disk_invariant(beta, insertions)?;
    let (graphs, contributions) = engine.closed_contributions(beta, insertions)?;
    let open = engine.open_graphs(insertions.len(), beta)?;
    let open_codes: BTreeMap<String, &DecoratedGraph> = open.iter().map(|g| (g.canonical_code(), g)).collect();

    let mut sum = MonoU::zero();
    let mut members = Vec::new();
    let mut hit: BTreeMap<String, usize> = BTreeMap::new();
    let mut bijection = true;
    let mut termwise = true;
    for (i, (g, c)) in graphs.iter().zip(&contributions).enumerate() {
        let tag = classify_stratum(g)?;
        if tag.k != 1 || tag.l != Some(1) {
            continue;
        }
        members.push(i);
        let restricted = c.restrict_antidiagonal()?.scale(&factor);
        sum = sum.checked_add(&restricted)?;
        match collapse_to_open(g) {
            Some(image) => {
                let code = image.canonical_code();
                match open_codes.get(&code) {
                    Some(target) if target.aut_order == g.aut_order => {
                        *hit.entry(code).or_insert(0) += 1;
                        let open_value = open_graph_contribution(target, insertions)?.restrict_antidiagonal()?;
                        termwise &= open_value == restricted;
                    }
                    _ => bijection = false,
                }
            }
            None => termwise &= restricted.is_zero(),
        }
    }
    bijection &= hit.len() == open_codes.len() && hit.values().all(|&n| n == 1);
    let closed_side = sum.checked_add(&MonoU::zero())?;
    Ok(G11Report {
        beta: [beta.0, beta.1],
        insertions: insertions_json(insertions),
        disk: disk.canonical_string(),
        closed_side: closed_side.canonical_string(),
        g11_graphs: members,
        bijection,
        termwise,
        equal: disk == closed_side,
    })
}

/// Valuation bound check for every closed graph; allowed for any nonzero `β`.
pub fn vanishing_report(engine: &Engine, beta: Beta, insertions: &[Insertion]) -> Result<Vec<ValuationRow>, Error> {
    let (graphs, contributions) = engine.closed_contributions(beta, insertions)?;
    graphs
        .iter()
        .zip(&contributions)
        .enumerate()
        .map(|(i, (g, c))| {
            let tag = classify_stratum(g)?;
            let valuation = if c.is_zero() { None } else { Some(c.s_valuation()?) };
            let pass = valuation.is_none_or(|v| v >= tag.k as i64 - 1);
            Ok(ValuationRow {
                graph: i,
                k: tag.k,
                l: tag.l,
                valuation,
                pass,
            })
        })
        .collect()
}

/// Whether every tuple of a stable shape passes the multinomial crosscheck.
pub fn crosscheck_all_stable(engine: &Engine, beta: Beta, insertions: &[Insertion]) -> Result<(usize, bool), Error> {
    let mut checked = 0;
    let mut ok = true;
    for tuple in enumerate_tuples(beta, insertions.len()) {
        if tuple.num_legs() >= 3 {
            checked += 1;
            ok &= stable_multinomial_crosscheck(engine, &tuple, insertions)?;
        }
    }
    Ok((checked, ok))
}
