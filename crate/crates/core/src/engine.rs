//! Invariant-level entry points with shared caches.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::algebra::{MonoU, RatFunc2};
use crate::closed::{check_closed_insertions, closed_graph_contribution, restrict_graph_sum, GraphValuation};
use crate::graphs::{enumerate_closed_graphs, enumerate_open_graphs, DecoratedGraph, GraphError};
use crate::open::{check_open_insertions, open_graph_contribution, sum_contributions, Insertion};
use crate::Error;

type Beta = (u32, u32);
type GraphCache = Mutex<HashMap<(usize, Beta), Arc<Vec<DecoratedGraph>>>>;

/// Caches are idempotent: concurrent misses compute the same value.
#[derive(Default)]
pub struct Engine {
    open_graphs: GraphCache,
    closed_graphs: GraphCache,
    disk: Mutex<HashMap<(Beta, Vec<Insertion>), MonoU>>,
}

/// The closed invariant restricted to the antidiagonal, with its per-graph audit.
#[derive(Clone, Debug)]
pub struct RestrictedClosed {
    pub value: MonoU,
    pub graphs: Arc<Vec<DecoratedGraph>>,
    pub contributions: Vec<RatFunc2>,
    pub rows: Vec<GraphValuation>,
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    /// Process-wide engine used by the free functions.
    pub fn global() -> &'static Engine {
        static ENGINE: OnceLock<Engine> = OnceLock::new();
        ENGINE.get_or_init(Engine::new)
    }

    pub fn open_graphs(&self, n: usize, beta: Beta) -> Result<Arc<Vec<DecoratedGraph>>, GraphError> {
        if let Some(g) = self.open_graphs.lock().expect("cache poisoned").get(&(n, beta)) {
            return Ok(g.clone());
        }
        let graphs = Arc::new(enumerate_open_graphs(n, beta)?);
        self.open_graphs
            .lock()
            .expect("cache poisoned")
            .insert((n, beta), graphs.clone());
        Ok(graphs)
    }

    pub fn closed_graphs(&self, n: usize, beta: Beta) -> Result<Arc<Vec<DecoratedGraph>>, GraphError> {
        if let Some(g) = self.closed_graphs.lock().expect("cache poisoned").get(&(n, beta)) {
            return Ok(g.clone());
        }
        let graphs = Arc::new(enumerate_closed_graphs(n, beta)?);
        self.closed_graphs
            .lock()
            .expect("cache poisoned")
            .insert((n, beta), graphs.clone());
        Ok(graphs)
    }

    /// Disk invariant `<τ_{a_1}(φ_{α_1}) ⋯>` of degree `(d+, d-)`.
    pub fn disk_invariant(&self, beta: Beta, insertions: &[Insertion]) -> Result<MonoU, Error> {
        check_open_insertions(insertions)?;
        let mut key_ins = insertions.to_vec();
        key_ins.sort();
        let key = (beta, key_ins);
        if let Some(v) = self.disk.lock().expect("cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let total = self.disk_invariant_ratfunc(beta, insertions)?;
        total.homogeneous_degree().or_else(|e| if total.is_zero() { Ok(0) } else { Err(e) })?;
        let value = total.restrict_antidiagonal()?;
        self.disk.lock().expect("cache poisoned").insert(key, value.clone());
        Ok(value)
    }

    pub fn disk_invariant_ratfunc(&self, beta: Beta, insertions: &[Insertion]) -> Result<RatFunc2, Error> {
        let parts = self.open_contributions(beta, insertions)?;
        Ok(sum_contributions(&parts))
    }

    pub fn open_contributions(&self, beta: Beta, insertions: &[Insertion]) -> Result<Vec<RatFunc2>, Error> {
        check_open_insertions(insertions)?;
        let graphs = self.open_graphs(insertions.len(), beta)?;
        graphs
            .par_iter()
            .map(|g| open_graph_contribution(g, insertions))
            .collect()
    }

    pub fn closed_contributions(
        &self,
        beta: Beta,
        insertions: &[Insertion],
    ) -> Result<(Arc<Vec<DecoratedGraph>>, Vec<RatFunc2>), Error> {
        check_closed_insertions(insertions)?;
        let graphs = self.closed_graphs(insertions.len(), beta)?;
        let parts = graphs
            .par_iter()
            .map(|g| closed_graph_contribution(g, insertions))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((graphs, parts))
    }

    /// Equivariant closed invariant as an element of `Q(u1, u2)`.
    pub fn closed_invariant(&self, beta: Beta, insertions: &[Insertion]) -> Result<RatFunc2, Error> {
        let (_, parts) = self.closed_contributions(beta, insertions)?;
        Ok(sum_contributions(&parts))
    }

    /// Closed invariant at `u1 + u2 = 0, u1 = u`, restricted graph by graph after
    /// checking each valuation bound and that no graph lies in `G^0`.
    pub fn closed_invariant_restricted(&self, beta: Beta, insertions: &[Insertion]) -> Result<RestrictedClosed, Error> {
        if beta.0 == beta.1 {
            return Err(Error::InvalidInput(format!(
                "restriction needs d1 != d2, got ({}, {})",
                beta.0, beta.1
            )));
        }
        let (graphs, contributions) = self.closed_contributions(beta, insertions)?;
        let (rows, value) = restrict_graph_sum(&graphs, &contributions)?;
        Ok(RestrictedClosed {
            value,
            graphs,
            contributions,
            rows,
        })
    }
}

pub fn disk_invariant(beta: Beta, insertions: &[Insertion]) -> Result<MonoU, Error> {
    Engine::global().disk_invariant(beta, insertions)
}

pub fn closed_invariant(beta: Beta, insertions: &[Insertion]) -> Result<RatFunc2, Error> {
    Engine::global().closed_invariant(beta, insertions)
}

pub fn closed_invariant_restricted(beta: Beta, insertions: &[Insertion]) -> Result<MonoU, Error> {
    Ok(Engine::global().closed_invariant_restricted(beta, insertions)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, ratio};

    #[test]
    fn disk_examples() {
        assert_eq!(disk_invariant((1, 0), &[]).unwrap(), MonoU::one());
        assert_eq!(disk_invariant((0, 1), &[]).unwrap(), MonoU::one());
        assert_eq!(disk_invariant((2, 1), &[]).unwrap(), MonoU::new(ratio(1, 2), -2));
        // winding 2: u/2 from the vertex, D+(2)/2 = 1/u² from the disk edge
        assert_eq!(disk_invariant((2, 0), &[]).unwrap(), MonoU::new(ratio(1, 2), -1));
        assert!(matches!(
            disk_invariant((1, 1), &[]),
            Err(Error::Graph(GraphError::BalancedDisk(1)))
        ));
    }

    #[test]
    fn closed_examples() {
        assert!(closed_invariant((1, 0), &[]).unwrap().is_one());
        assert!(closed_invariant((0, 1), &[]).unwrap().is_one());
        assert_eq!(closed_invariant_restricted((1, 0), &[]).unwrap(), MonoU::new(int(1), 0));
        assert!(closed_invariant_restricted((1, 1), &[]).is_err());
    }
}
