//! Graph enumeration against a brute-force count of vertex-labeled trees.
//!
//! Every isomorphism class with `N` free vertices and automorphism group `A`
//! appears exactly `N!/|A|` times among trees on labeled vertices, so the
//! labeled count is an independent check of both the classes and their orders.

use std::collections::{BTreeMap, BTreeSet};

use openclosed::graphs::{enumerate_closed_graphs, enumerate_open_graphs, DecoratedGraph, VertexLabel};

/// All labeled trees on `n >= 2` vertices, as edge lists, via Prüfer sequences.
fn labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let total = n.pow((n - 2) as u32);
    for mut code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        for _ in 0..n - 2 {
            seq.push(code % n);
            code /= n;
        }
        let mut degree = vec![1; n];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Ways to write `total` as an ordered sum of `parts` positive integers.
fn compositions(total: u32, parts: usize) -> u64 {
    if parts == 0 {
        return u64::from(total == 0);
    }
    if total < parts as u32 {
        return 0;
    }
    // C(total - 1, parts - 1)
    let (n, k) = (u64::from(total - 1), parts as u64 - 1);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Labeled closed trees: vertex labels 0=σ0, 1=σ1, 2=σ2; σ1 and σ2 only touch σ0.
fn closed_labeled_count(beta: (u32, u32), n: usize) -> BTreeMap<usize, u64> {
    let mut by_size = BTreeMap::new();
    for nv in 2..=(beta.0 + beta.1 + 1) as usize {
        let mut count = 0u64;
        for tree in labeled_trees(nv) {
            for mut code in 0..3usize.pow(nv as u32) {
                let mut labels = vec![0; nv];
                for l in labels.iter_mut() {
                    *l = code % 3;
                    code /= 3;
                }
                let mut e1 = 0;
                let mut e2 = 0;
                let ok = tree.iter().all(|&(a, b)| match (labels[a].min(labels[b]), labels[a].max(labels[b])) {
                    (0, 1) => {
                        e1 += 1;
                        true
                    }
                    (0, 2) => {
                        e2 += 1;
                        true
                    }
                    _ => false,
                });
                if ok {
                    count += compositions(beta.0, e1) * compositions(beta.1, e2) * (nv as u64).pow(n as u32);
                }
            }
        }
        if count > 0 {
            by_size.insert(nv, count);
        }
    }
    by_size
}

/// Labeled open trees: vertex 0 is the root, attached by one edge of degree μ
/// to a vertex of the side with the larger degree; other edges join σ+ to σ-.
fn open_labeled_count(beta: (u32, u32), n: usize) -> BTreeMap<usize, u64> {
    let (dp, dm) = beta;
    let first = if dp > dm { 1 } else { 2 };
    let mut by_size = BTreeMap::new();
    for nv in 2..=(dp.min(dm) + 2) as usize {
        let mut count = 0u64;
        for tree in labeled_trees(nv) {
            if tree.iter().filter(|&&(a, b)| a == 0 || b == 0).count() != 1 {
                continue;
            }
            for mut code in 0..2usize.pow((nv - 1) as u32) {
                let mut labels = vec![0; nv];
                for l in labels.iter_mut().skip(1) {
                    *l = 1 + code % 2;
                    code /= 2;
                }
                let ok = tree.iter().all(|&(a, b)| {
                    if a == 0 || b == 0 {
                        labels[a.max(b)] == first
                    } else {
                        labels[a] != labels[b]
                    }
                });
                if ok {
                    count += compositions(dp.min(dm), nv - 2) * ((nv - 1) as u64).pow(n as u32);
                }
            }
        }
        if count > 0 {
            by_size.insert(nv, count);
        }
    }
    by_size
}

fn class_count(graphs: &[DecoratedGraph], rooted: bool) -> BTreeMap<usize, u64> {
    let mut by_size = BTreeMap::new();
    for g in graphs {
        let nv = g.num_vertices();
        let free = if rooted { nv - 1 } else { nv };
        assert_eq!(factorial(free) % g.aut_order, 0);
        *by_size.entry(nv).or_insert(0) += factorial(free) / g.aut_order;
    }
    by_size
}

fn assert_distinct(graphs: &[DecoratedGraph]) {
    let codes: BTreeSet<String> = graphs.iter().map(|g| g.canonical_code()).collect();
    assert_eq!(codes.len(), graphs.len(), "duplicate isomorphism classes");
}

#[test]
fn closed_graphs_match_labeled_tree_count() {
    for total in 1..=5u32 {
        for d1 in 0..=total {
            let beta = (d1, total - d1);
            for n in 0..=2 {
                let graphs = enumerate_closed_graphs(n, beta).unwrap();
                assert_distinct(&graphs);
                for g in &graphs {
                    g.validate(beta).unwrap();
                }
                assert_eq!(
                    class_count(&graphs, false),
                    closed_labeled_count(beta, n),
                    "beta {beta:?}, n {n}"
                );
            }
        }
    }
}

#[test]
fn open_graphs_match_labeled_tree_count() {
    for total in 1..=6u32 {
        for dp in 0..=total {
            let beta = (dp, total - dp);
            if beta.0 == beta.1 {
                continue;
            }
            for n in 0..=2 {
                let graphs = enumerate_open_graphs(n, beta).unwrap();
                assert_distinct(&graphs);
                for g in &graphs {
                    g.validate(beta).unwrap();
                    assert_eq!(g.labels[g.root.unwrap()], VertexLabel::Root);
                }
                assert_eq!(
                    class_count(&graphs, true),
                    open_labeled_count(beta, n),
                    "beta {beta:?}, n {n}"
                );
            }
        }
    }
}

#[test]
fn balanced_class_one_one_has_a_single_closed_graph() {
    assert_eq!(enumerate_closed_graphs(0, (1, 1)).unwrap().len(), 1);
    assert_eq!(closed_labeled_count((1, 1), 0), BTreeMap::from([(3, 6)]));
}
