//! Decorated trees indexing the torus-fixed loci, with automorphism orders
//! and the closed-side stratification.
//!
//! Trees are grown one leaf at a time and deduplicated by a canonical code.
//! The code of a rooted tree lists the root decoration followed by the sorted
//! codes of its decorated child branches; an unrooted tree uses the least
//! rooted code over all vertices.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("disk invariants vanish when d+ = d- (got beta = ({0}, {0}))")]
    BalancedDisk(u32),
    #[error("degree zero has no decorated graphs")]
    ZeroDegree,
    #[error("stratification applies to closed graphs only")]
    NotClosed,
    #[error("invalid decorated graph: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TargetKind {
    OpenP1,
    ClosedX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VertexLabel {
    /// The unlabeled root `v0` of an open graph.
    Root,
    Plus,
    Minus,
    Sigma0,
    Sigma1,
    Sigma2,
}

impl VertexLabel {
    fn code(self) -> &'static str {
        match self {
            VertexLabel::Root => "r",
            VertexLabel::Plus => "+",
            VertexLabel::Minus => "-",
            VertexLabel::Sigma0 => "0",
            VertexLabel::Sigma1 => "1",
            VertexLabel::Sigma2 => "2",
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexLabel::Root => "root",
            VertexLabel::Plus => "sigma+",
            VertexLabel::Minus => "sigma-",
            VertexLabel::Sigma0 => "sigma0",
            VertexLabel::Sigma1 => "sigma1",
            VertexLabel::Sigma2 => "sigma2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeLabel {
    Tau,
    Tau1,
    Tau2,
}

impl EdgeLabel {
    fn code(self) -> &'static str {
        match self {
            EdgeLabel::Tau => "t",
            EdgeLabel::Tau1 => "a",
            EdgeLabel::Tau2 => "b",
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeLabel::Tau => "tau",
            EdgeLabel::Tau1 => "tau1",
            EdgeLabel::Tau2 => "tau2",
        })
    }
}

/// Edge label of the target skeleton joining two vertex labels, if any.
///
/// Open: `σ+ - τ - σ-`, plus the root edge. Closed: `σ1 - τ1 - σ0 - τ2 - σ2`.
pub fn skeleton_edge(kind: TargetKind, a: VertexLabel, b: VertexLabel) -> Option<EdgeLabel> {
    use VertexLabel::*;
    match kind {
        TargetKind::OpenP1 => match (a, b) {
            (Plus, Minus) | (Minus, Plus) => Some(EdgeLabel::Tau),
            (Root, Plus | Minus) | (Plus | Minus, Root) => Some(EdgeLabel::Tau),
            _ => None,
        },
        TargetKind::ClosedX => match (a, b) {
            (Sigma0, Sigma1) | (Sigma1, Sigma0) => Some(EdgeLabel::Tau1),
            (Sigma0, Sigma2) | (Sigma2, Sigma0) => Some(EdgeLabel::Tau2),
            _ => None,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub ends: [usize; 2],
    pub label: EdgeLabel,
    pub degree: u32,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub kind: TargetKind,
    pub labels: Vec<VertexLabel>,
    pub edges: Vec<Edge>,
    /// `v0` on the open side.
    pub root: Option<usize>,
    /// Marking `i` (0-based) sits on vertex `markings[i]`.
    pub markings: Vec<usize>,
    pub aut_order: u64,
}

impl DecoratedGraph {
    fn new(kind: TargetKind, labels: Vec<VertexLabel>, edges: Vec<Edge>, root: Option<usize>) -> Self {
        DecoratedGraph {
            kind,
            labels,
            edges,
            root,
            markings: Vec::new(),
            aut_order: 1,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn incident(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.ends.contains(&v))
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incident(v).count()
    }

    pub fn markings_at(&self, v: usize) -> Vec<usize> {
        (0..self.markings.len()).filter(|&i| self.markings[i] == v).collect()
    }

    /// Vertices carrying a fixed-point label (all but the open root).
    pub fn labeled_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels.len()).filter(move |&v| Some(v) != self.root)
    }

    /// The edge at the open root.
    pub fn root_edge(&self) -> Option<&Edge> {
        let r = self.root?;
        self.incident(r).next()
    }

    pub fn degree_sum(&self, label: EdgeLabel) -> u32 {
        self.edges.iter().filter(|e| e.label == label).map(|e| e.degree).sum()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, EdgeLabel, u32)>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for e in &self.edges {
            adj[e.ends[0]].push((e.ends[1], e.label, e.degree));
            adj[e.ends[1]].push((e.ends[0], e.label, e.degree));
        }
        adj
    }

    fn rooted_code(&self, adj: &[Vec<(usize, EdgeLabel, u32)>], v: usize, parent: Option<usize>) -> String {
        let mut children: Vec<String> = adj[v]
            .iter()
            .filter(|(w, _, _)| Some(*w) != parent)
            .map(|&(w, l, d)| format!("{}{}{}", l.code(), d, self.rooted_code(adj, w, Some(v))))
            .collect();
        children.sort();
        let marks: Vec<String> = self.markings_at(v).iter().map(|i| i.to_string()).collect();
        format!("({}{}[{}]{})", self.labels[v].code(), marks.join(","), children.len(), children.concat())
    }

    fn rooted_aut(&self, adj: &[Vec<(usize, EdgeLabel, u32)>], v: usize, parent: Option<usize>) -> u64 {
        let mut groups: BTreeMap<String, u64> = BTreeMap::new();
        let mut order = 1u64;
        for &(w, l, d) in adj[v].iter().filter(|(w, _, _)| Some(*w) != parent) {
            order *= self.rooted_aut(adj, w, Some(v));
            let code = format!("{}{}{}", l.code(), d, self.rooted_code(adj, w, Some(v)));
            *groups.entry(code).or_insert(0) += 1;
        }
        for mult in groups.values() {
            order *= (1..=*mult).product::<u64>();
        }
        order
    }

    /// Canonical code: equal iff the decorated graphs are isomorphic.
    pub fn canonical_code(&self) -> String {
        let adj = self.adjacency();
        match (self.kind, self.root) {
            (TargetKind::OpenP1, Some(r)) => self.rooted_code(&adj, r, None),
            _ => (0..self.labels.len())
                .map(|v| self.rooted_code(&adj, v, None))
                .min()
                .unwrap_or_default(),
        }
    }

    /// Order of the decoration-preserving automorphism group (fixing `v0` on the open side).
    pub fn automorphism_order(&self) -> u64 {
        let adj = self.adjacency();
        match (self.kind, self.root) {
            (TargetKind::OpenP1, Some(r)) => self.rooted_aut(&adj, r, None),
            _ => {
                let codes: Vec<String> = (0..self.labels.len())
                    .map(|v| self.rooted_code(&adj, v, None))
                    .collect();
                let (best, code) = codes
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.cmp(b.1))
                    .expect("nonempty graph");
                // |Aut| = |Stab(v)| * |orbit(v)|; vertices with equal rooted code form the orbit.
                let orbit = codes.iter().filter(|c| *c == code).count() as u64;
                self.rooted_aut(&adj, best, None) * orbit
            }
        }
    }

    fn with_leaf(&self, at: usize, label: VertexLabel, edge: EdgeLabel, degree: u32) -> Self {
        let mut g = self.clone();
        let w = g.labels.len();
        g.labels.push(label);
        g.edges.push(Edge {
            ends: [at, w],
            label: edge,
            degree,
        });
        g
    }

    /// Checks every structural requirement on a decorated graph of degree `beta`.
    pub fn validate(&self, beta: (u32, u32)) -> Result<(), GraphError> {
        let bad = |m: &str| Err(GraphError::Invalid(m.to_string()));
        let nv = self.labels.len();
        if self.edges.len() + 1 != nv {
            return bad("not a tree: |E| != |V| - 1");
        }
        // connectivity
        let adj = self.adjacency();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("not connected");
        }
        for e in &self.edges {
            if e.degree == 0 {
                return bad("edge of degree zero");
            }
            let [a, b] = e.ends;
            if skeleton_edge(self.kind, self.labels[a], self.labels[b]) != Some(e.label) {
                return bad("labels do not define a map to the skeleton");
            }
        }
        if self.markings.iter().any(|&v| v >= nv || Some(v) == self.root) {
            return bad("marking on the root or out of range");
        }
        match self.kind {
            TargetKind::OpenP1 => {
                let r = match self.root {
                    Some(r) => r,
                    None => return bad("open graph without root"),
                };
                if self.labels[r] != VertexLabel::Root
                    || self.labels.iter().filter(|l| **l == VertexLabel::Root).count() != 1
                {
                    return bad("root label misplaced");
                }
                if self.valence(r) != 1 {
                    return bad("root is not univalent");
                }
                let e0 = self.root_edge().expect("root edge");
                let v1 = e0.other(r);
                let (dp, dm) = beta;
                let want = if dp > dm { VertexLabel::Plus } else { VertexLabel::Minus };
                if self.labels[v1] != want {
                    return bad("wrong label at v1");
                }
                let total: u32 = self.edges.iter().map(|e| e.degree).sum();
                if total != dp.max(dm) || total - e0.degree != dp.min(dm) {
                    return bad("degree sums");
                }
            }
            TargetKind::ClosedX => {
                if self.root.is_some() {
                    return bad("closed graph with root");
                }
                if (self.degree_sum(EdgeLabel::Tau1), self.degree_sum(EdgeLabel::Tau2)) != beta {
                    return bad("degree sums");
                }
            }
        }
        if self.aut_order != self.automorphism_order() {
            return bad("stale automorphism order");
        }
        Ok(())
    }

    pub fn to_dump(&self, beta: (u32, u32)) -> GraphDump {
        let stratum = classify_stratum(self).ok();
        GraphDump {
            side: match self.kind {
                TargetKind::OpenP1 => "open",
                TargetKind::ClosedX => "closed",
            },
            beta: [beta.0, beta.1],
            vertices: self
                .labels
                .iter()
                .enumerate()
                .map(|(id, l)| DumpVertex {
                    id,
                    label: l.to_string(),
                    markings: self.markings_at(id).iter().map(|i| i + 1).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| DumpEdge {
                    ends: e.ends,
                    label: e.label.to_string(),
                    degree: e.degree,
                })
                .collect(),
            root: self.root,
            aut_order: self.aut_order,
            stratum: stratum.map(|s| DumpStratum {
                k: s.k,
                l: s.l,
                v11: s.v11,
                v_star: s.v_star,
            }),
        }
    }
}

/// One JSON line of the graph dump.
#[derive(Debug, Serialize)]
pub struct GraphDump {
    pub side: &'static str,
    pub beta: [u32; 2],
    pub vertices: Vec<DumpVertex>,
    pub edges: Vec<DumpEdge>,
    pub root: Option<usize>,
    pub aut_order: u64,
    pub stratum: Option<DumpStratum>,
}

#[derive(Debug, Serialize)]
pub struct DumpVertex {
    pub id: usize,
    pub label: String,
    pub markings: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct DumpEdge {
    pub ends: [usize; 2],
    pub label: String,
    pub degree: u32,
}

#[derive(Debug, Serialize)]
pub struct DumpStratum {
    pub k: usize,
    pub l: Option<usize>,
    pub v11: Vec<usize>,
    pub v_star: Option<usize>,
}

/// Grows trees leaf by leaf from `seeds`; `extend` lists the admissible new
/// leaves at a vertex given the tree so far.
fn grow<F, K>(seeds: Vec<DecoratedGraph>, extend: F, keep: K) -> Vec<DecoratedGraph>
where
    F: Fn(&DecoratedGraph, usize) -> Vec<(VertexLabel, EdgeLabel, u32)>,
    K: Fn(&DecoratedGraph) -> bool,
{
    let mut level: BTreeMap<String, DecoratedGraph> =
        seeds.into_iter().map(|g| (g.canonical_code(), g)).collect();
    let mut out = Vec::new();
    while !level.is_empty() {
        let mut next = BTreeMap::new();
        for g in level.values() {
            if keep(g) {
                out.push(g.clone());
            }
            for v in 0..g.num_vertices() {
                for (label, edge, degree) in extend(g, v) {
                    let h = g.with_leaf(v, label, edge, degree);
                    next.entry(h.canonical_code()).or_insert(h);
                }
            }
        }
        level = next;
    }
    out
}

/// All placements of `n` markings on the eligible vertices, up to isomorphism.
fn place_markings(trees: Vec<DecoratedGraph>, n: usize) -> Vec<DecoratedGraph> {
    let mut classes: BTreeMap<String, DecoratedGraph> = BTreeMap::new();
    for tree in trees {
        let eligible: Vec<usize> = tree.labeled_vertices().collect();
        let mut choice = vec![0usize; n];
        loop {
            let mut g = tree.clone();
            g.markings = choice.iter().map(|&c| eligible[c]).collect();
            classes.entry(g.canonical_code()).or_insert(g);
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                choice[i] += 1;
                if choice[i] < eligible.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    classes
        .into_values()
        .map(|mut g| {
            g.aut_order = g.automorphism_order();
            g
        })
        .collect()
}

/// Isomorphism classes of `n`-pointed decorated graphs for `(P¹, L)` of degree `(d+, d-)`.
pub fn enumerate_open_graphs(n: usize, beta: (u32, u32)) -> Result<Vec<DecoratedGraph>, GraphError> {
    let (dp, dm) = beta;
    if dp == dm {
        return Err(GraphError::BalancedDisk(dp));
    }
    let mu = dp.abs_diff(dm);
    let budget = dp.min(dm);
    let v1 = if dp > dm { VertexLabel::Plus } else { VertexLabel::Minus };
    let seed = DecoratedGraph::new(
        TargetKind::OpenP1,
        vec![VertexLabel::Root, v1],
        vec![Edge {
            ends: [0, 1],
            label: EdgeLabel::Tau,
            degree: mu,
        }],
        Some(0),
    );
    let used = |g: &DecoratedGraph| g.edges.iter().map(|e| e.degree).sum::<u32>() - mu;
    let trees = grow(
        vec![seed],
        |g, v| {
            let opposite = match g.labels[v] {
                VertexLabel::Plus => VertexLabel::Minus,
                VertexLabel::Minus => VertexLabel::Plus,
                _ => return Vec::new(),
            };
            (1..=budget - used(g))
                .map(|d| (opposite, EdgeLabel::Tau, d))
                .collect()
        },
        |g| used(g) == budget,
    );
    Ok(place_markings(trees, n))
}

/// Isomorphism classes of `n`-pointed genus-zero decorated graphs for `X` of degree `(d1, d2)`.
pub fn enumerate_closed_graphs(n: usize, beta: (u32, u32)) -> Result<Vec<DecoratedGraph>, GraphError> {
    let (d1, d2) = beta;
    if d1 == 0 && d2 == 0 {
        return Err(GraphError::ZeroDegree);
    }
    let mut seeds = Vec::new();
    for (label, far, budget) in [
        (EdgeLabel::Tau1, VertexLabel::Sigma1, d1),
        (EdgeLabel::Tau2, VertexLabel::Sigma2, d2),
    ] {
        for d in 1..=budget {
            seeds.push(DecoratedGraph::new(
                TargetKind::ClosedX,
                vec![VertexLabel::Sigma0, far],
                vec![Edge {
                    ends: [0, 1],
                    label,
                    degree: d,
                }],
                None,
            ));
        }
    }
    let trees = grow(
        seeds,
        |g, v| {
            let r1 = d1 - g.degree_sum(EdgeLabel::Tau1);
            let r2 = d2 - g.degree_sum(EdgeLabel::Tau2);
            let mut out = Vec::new();
            match g.labels[v] {
                VertexLabel::Sigma0 => {
                    out.extend((1..=r1).map(|d| (VertexLabel::Sigma1, EdgeLabel::Tau1, d)));
                    out.extend((1..=r2).map(|d| (VertexLabel::Sigma2, EdgeLabel::Tau2, d)));
                }
                VertexLabel::Sigma1 => {
                    out.extend((1..=r1).map(|d| (VertexLabel::Sigma0, EdgeLabel::Tau1, d)));
                }
                VertexLabel::Sigma2 => {
                    out.extend((1..=r2).map(|d| (VertexLabel::Sigma0, EdgeLabel::Tau2, d)));
                }
                _ => {}
            }
            out
        },
        |g| (g.degree_sum(EdgeLabel::Tau1), g.degree_sum(EdgeLabel::Tau2)) == beta,
    );
    Ok(place_markings(trees, n))
}

/// Stratum data of a closed graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumTag {
    /// `|V0| - |V0^{1,1}|`.
    pub k: usize,
    /// Valence of `v_star` when `k = 1`.
    pub l: Option<usize>,
    pub v11: Vec<usize>,
    pub v_star: Option<usize>,
}

/// Whether `v` is a σ0 vertex with exactly a τ1 and a τ2 edge of equal degree.
pub fn is_balanced_node(g: &DecoratedGraph, v: usize) -> bool {
    if g.labels[v] != VertexLabel::Sigma0 {
        return false;
    }
    let edges: Vec<&Edge> = g.incident(v).collect();
    match edges.as_slice() {
        [a, b] => {
            let labels = [a.label, b.label];
            labels.contains(&EdgeLabel::Tau1) && labels.contains(&EdgeLabel::Tau2) && a.degree == b.degree
        }
        _ => false,
    }
}

pub fn classify_stratum(g: &DecoratedGraph) -> Result<StratumTag, GraphError> {
    if g.kind != TargetKind::ClosedX {
        return Err(GraphError::NotClosed);
    }
    let v0: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| g.labels[v] == VertexLabel::Sigma0)
        .collect();
    let (v11, others): (Vec<usize>, Vec<usize>) = v0.into_iter().partition(|&v| is_balanced_node(g, v));
    let k = others.len();
    let v_star = (k == 1).then(|| others[0]);
    Ok(StratumTag {
        k,
        l: v_star.map(|v| g.valence(v)),
        v11,
        v_star,
    })
}
