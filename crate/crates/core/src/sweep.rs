//! The verification sweep: every check, for every class and insertion list in range.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{MonoU, RatFunc2};
use crate::correspondence::{check_lemma_g11, crosscheck_all_stable, insertions_json, verify_correspondence, InsertionJson};
use crate::engine::Engine;
use crate::graphs::classify_stratum;
use crate::open::Insertion;
use crate::Error;

type Beta = (u32, u32);

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub max_total_degree: u32,
    pub max_markings: usize,
    pub max_descendant: u32,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_total_degree: 5,
            max_markings: 2,
            max_descendant: 2,
        }
    }
}

/// Classes with `d1 != d2` and `1 <= d1 + d2 <= max`, by total degree then `d1`.
pub fn sweep_classes(max_total_degree: u32) -> Vec<Beta> {
    let mut out = Vec::new();
    for total in 1..=max_total_degree {
        for d1 in (0..=total).rev() {
            if d1 != total - d1 {
                out.push((d1, total - d1));
            }
        }
    }
    out
}

/// Ordered insertion lists with `α ∈ {1,2}`, up to the given length and exponent.
pub fn insertion_lists(max_markings: usize, max_descendant: u32) -> Vec<Vec<Insertion>> {
    let single: Vec<Insertion> = (1..=2u8)
        .flat_map(|alpha| (0..=max_descendant).map(move |a| Insertion::new(alpha, a)))
        .collect();
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_markings {
        layer = layer
            .iter()
            .flat_map(|prefix: &Vec<Insertion>| {
                single.iter().map(move |i| {
                    let mut v = prefix.clone();
                    v.push(*i);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn sweep_cases(cfg: &SweepConfig) -> Vec<(Beta, Vec<Insertion>)> {
    let lists = insertion_lists(cfg.max_markings, cfg.max_descendant);
    sweep_classes(cfg.max_total_degree)
        .into_iter()
        .flat_map(|b| lists.iter().map(move |l| (b, l.clone())))
        .collect()
}

fn swap_alphas(insertions: &[Insertion]) -> Vec<Insertion> {
    insertions.iter().map(|i| Insertion::new(3 - i.alpha, i.a)).collect()
}

/// `u ↦ -u` on a monomial.
pub fn negate_u(m: &MonoU) -> MonoU {
    if m.power() % 2 == 0 {
        m.clone()
    } else {
        -m
    }
}

/// Whether every nonzero part has one homogeneity degree, shared with the total.
fn homogeneous(parts: &[RatFunc2], total: &RatFunc2) -> Result<bool, Error> {
    let mut degree = None;
    for p in parts.iter().chain(std::iter::once(total)).filter(|p| !p.is_zero()) {
        let d = match p.homogeneous_degree() {
            Ok(d) => d,
            Err(_) => return Ok(false),
        };
        if *degree.get_or_insert(d) != d {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub beta: [u32; 2],
    pub insertions: Vec<InsertionJson>,
    pub lhs: String,
    pub rhs: String,
    pub disk: String,
    pub theorem: bool,
    pub lemma_g11: bool,
    pub valuations: bool,
    pub g0_empty: bool,
    pub homogeneous: bool,
    pub monomial: bool,
    pub multinomial: bool,
    pub stable_tuples: usize,
    pub fan_symmetry: bool,
    pub disk_swap: bool,
}

impl CaseReport {
    /// All hard checks; the disk swap property is reported separately.
    pub fn passes(&self) -> bool {
        self.theorem
            && self.lemma_g11
            && self.valuations
            && self.g0_empty
            && self.homogeneous
            && self.monomial
            && self.multinomial
            && self.fan_symmetry
    }
}

pub fn run_case(engine: &Engine, beta: Beta, insertions: &[Insertion]) -> Result<CaseReport, Error> {
    let report = verify_correspondence(engine, beta, insertions)?;
    let g11 = check_lemma_g11(engine, beta, insertions)?;
    let (graphs, closed_parts) = engine.closed_contributions(beta, insertions)?;
    let closed_total = engine.closed_invariant(beta, insertions)?;
    let open_parts = engine.open_contributions(beta, insertions)?;
    let open_total = engine.disk_invariant_ratfunc(beta, insertions)?;

    let mut g0_empty = true;
    for g in graphs.iter() {
        g0_empty &= classify_stratum(g)?.k != 0;
    }
    let homogeneous = homogeneous(&closed_parts, &closed_total)? && homogeneous(&open_parts, &open_total)?;
    let monomial = open_total.restrict_antidiagonal().is_ok()
        && closed_parts.iter().all(|c| c.restrict_antidiagonal().is_ok());

    let (stable_tuples, multinomial) = crosscheck_all_stable(engine, beta, insertions)?;

    let swapped = swap_alphas(insertions);
    let mirrored = engine.closed_invariant((beta.1, beta.0), &swapped)?;
    let fan_symmetry = mirrored == closed_total.swap_u1_u2();
    let disk = engine.disk_invariant(beta, insertions)?;
    let disk_swap = engine.disk_invariant((beta.1, beta.0), &swapped)? == negate_u(&disk);

    Ok(CaseReport {
        beta: [beta.0, beta.1],
        insertions: insertions_json(insertions),
        theorem: report.is_equal(),
        lhs: report.lhs,
        rhs: report.rhs,
        disk: disk.canonical_string(),
        lemma_g11: g11.equal && g11.bijection && g11.termwise,
        valuations: report.valuations.iter().all(|r| r.pass),
        g0_empty,
        homogeneous,
        monomial,
        multinomial,
        stable_tuples,
        fan_symmetry,
        disk_swap,
    })
}

/// Runs every case; results come back in case order whatever the schedule.
pub fn run_sweep(engine: &Engine, cfg: &SweepConfig) -> Vec<Result<CaseReport, Error>> {
    sweep_cases(cfg)
        .par_iter()
        .map(|(beta, ins)| run_case(engine, *beta, ins))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ranges() {
        assert_eq!(sweep_classes(5).len(), 18);
        assert_eq!(insertion_lists(2, 2).len(), 1 + 6 + 36);
        assert_eq!(sweep_cases(&SweepConfig::default()).len(), 774);
        assert!(sweep_classes(5).iter().all(|(a, b)| a != b));
    }

    #[test]
    fn small_case_passes() {
        let e = Engine::new();
        let r = run_case(&e, (2, 1), &[Insertion::new(2, 0), Insertion::new(1, 2)]).unwrap();
        assert!(r.passes(), "{r:?}");
        assert!(r.disk_swap);
    }
}
