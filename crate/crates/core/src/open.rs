//! Circle-equivariant disk invariants of `(P¹, L)` from the open graph sum.
//!
//! The circle parameter `u` is carried as `u1`; every value here is univariate.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::algebra::scalar::{factorial, int, minus_one_pow};
use crate::algebra::{RatFunc2, Scalar};
use crate::graphs::{DecoratedGraph, EdgeLabel, VertexLabel};
use crate::psi::{vertex_integral, FlagWeight, VertexIntegralSpec, WeightVar};
use crate::Error;

/// `τ_a(φ_α)` at one marked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Insertion {
    pub alpha: u8,
    pub a: u32,
}

impl Insertion {
    pub fn new(alpha: u8, a: u32) -> Self {
        Insertion { alpha, a }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskSide {
    Plus,
    Minus,
}

/// Fixed-point data of the circle action: `σ+ = [1,0]`, `σ- = [0,1]`.
pub struct OpenFixedPointData;

impl OpenFixedPointData {
    /// `sw(σ±) = ±u`.
    pub fn vertex_weight(label: VertexLabel) -> RatFunc2 {
        match label {
            VertexLabel::Plus => RatFunc2::u1(),
            VertexLabel::Minus => -&RatFunc2::u1(),
            _ => panic!("not an open fixed point: {label}"),
        }
    }

    /// `i*_σ φ_α` with `φ1 = H`, `φ2 = H - u`, `H|σ+ = u`, `H|σ- = 0`.
    pub fn restriction(alpha: u8, label: VertexLabel) -> RatFunc2 {
        match (alpha, label) {
            (1, VertexLabel::Plus) => RatFunc2::u1(),
            (2, VertexLabel::Minus) => -&RatFunc2::u1(),
            _ => RatFunc2::zero(),
        }
    }

    /// `w_(e,v) = ±u/d`.
    pub fn flag_weight(label: VertexLabel, degree: u32) -> FlagWeight {
        let sign = match label {
            VertexLabel::Plus => Scalar::one(),
            VertexLabel::Minus => -Scalar::one(),
            _ => panic!("not an open fixed point: {label}"),
        };
        FlagWeight::new(WeightVar::U, sign / int(degree as i64))
    }
}

/// `h(τ, d) = (-1)^d d^{2d} / ((d!)² u^{2d})`.
pub fn open_edge_factor(d: u32) -> Result<RatFunc2, Error> {
    if d == 0 {
        return Err(Error::InvalidInput("edge degree must be positive".into()));
    }
    let num = minus_one_pow(d) * Scalar::from_integer(BigInt::from(d).pow(2 * d));
    let f = factorial(d);
    let c = num / Scalar::from_integer(&f * &f);
    Ok(RatFunc2::u1_power(c, -2 * d as i64))
}

/// `D+(μ) = μ^μ/(μ! u^μ)`, `D-(μ) = (-1)^μ D+(μ)`.
pub fn disk_factor(mu: u32, side: DiskSide) -> Result<RatFunc2, Error> {
    if mu == 0 {
        return Err(Error::InvalidInput("winding must be positive".into()));
    }
    let mut c = Scalar::new(BigInt::from(mu).pow(mu), factorial(mu));
    if side == DiskSide::Minus {
        c *= minus_one_pow(mu);
    }
    Ok(RatFunc2::u1_power(c, -(mu as i64)))
}

pub(crate) fn check_open_insertions(insertions: &[Insertion]) -> Result<(), Error> {
    match insertions.iter().find(|i| !(1..=2).contains(&i.alpha)) {
        Some(i) => Err(Error::InvalidInput(format!(
            "open insertions use alpha in {{1,2}}, got {}",
            i.alpha
        ))),
        None => Ok(()),
    }
}

/// Contribution `C_Γ` of one open decorated graph. The root edge contributes
/// `D±(μ)/μ`.
pub fn open_graph_contribution(g: &DecoratedGraph, insertions: &[Insertion]) -> Result<RatFunc2, Error> {
    if g.markings.len() != insertions.len() {
        return Err(Error::InvalidInput("marking count does not match insertions".into()));
    }
    check_open_insertions(insertions)?;
    let root = g.root.ok_or_else(|| Error::InvalidInput("open graph without root".into()))?;

    let mut value = RatFunc2::scalar(Scalar::new(BigInt::one(), BigInt::from(g.aut_order)));
    for v in g.labeled_vertices() {
        let label = g.labels[v];
        let marks = g.markings_at(v);
        for &i in &marks {
            let r = OpenFixedPointData::restriction(insertions[i].alpha, label);
            if r.is_zero() {
                return Ok(RatFunc2::zero());
            }
            value = &value * &r;
        }
        let val = g.valence(v) as i64;
        value = &value * &OpenFixedPointData::vertex_weight(label).pow(val - 1)?;
        let flags = g
            .incident(v)
            .map(|e| OpenFixedPointData::flag_weight(label, e.degree))
            .collect();
        let exps = marks.iter().map(|&i| insertions[i].a).collect();
        value = &value * &vertex_integral(&VertexIntegralSpec::new(flags, exps))?;
    }
    for e in g.edges.iter().filter(|e| !e.ends.contains(&root)) {
        debug_assert_eq!(e.label, EdgeLabel::Tau);
        let f = open_edge_factor(e.degree)?.scale(&Scalar::new(BigInt::one(), BigInt::from(e.degree)));
        value = &value * &f;
    }
    let e0 = g.root_edge().expect("root edge");
    let side = match g.labels[e0.other(root)] {
        VertexLabel::Plus => DiskSide::Plus,
        _ => DiskSide::Minus,
    };
    // the disk edge carries the same 1/d cover factor as the other edges
    let cover = Scalar::new(BigInt::one(), BigInt::from(e0.degree));
    Ok(&value * &disk_factor(e0.degree, side)?.scale(&cover))
}

/// Sum of the contributions; zero graphs are skipped.
pub(crate) fn sum_contributions(parts: &[RatFunc2]) -> RatFunc2 {
    parts
        .iter()
        .filter(|p| !p.is_zero())
        .fold(RatFunc2::zero(), |acc, p| &acc + p)
}
