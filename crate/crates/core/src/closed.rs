//! Torus-equivariant genus-zero invariants of the toric surface `X`.
//!
//! `X` has fixed points σ0, σ1, σ2 and the invariant lines τ1 (σ0–σ1) and
//! τ2 (σ0–σ2) carry all curve classes. Everything is expressed in `u1` and
//! `s = u1 + u2`.

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::scalar::{factorial, int, minus_one_pow};
use crate::algebra::{AlgebraError, MonoU, RatFunc2, Scalar};
use crate::graphs::{classify_stratum, DecoratedGraph, EdgeLabel, VertexLabel};
use crate::open::Insertion;
use crate::psi::{vertex_integral, FlagWeight, VertexIntegralSpec, WeightVar};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointQuery {
    VertexWeight(VertexLabel),
    FlagWeight(EdgeLabel, VertexLabel, u32),
    Restriction(u8, VertexLabel),
}

pub struct ClosedFixedPointData;

impl ClosedFixedPointData {
    /// Tangent weights at a fixed point, one per invariant line through it.
    ///
    /// σ0: τ1 ↦ -u1, τ2 ↦ -u2. σ1: τ1 ↦ u1, τ3 ↦ -u1-u2. σ2: τ2 ↦ u2, τ4 ↦ -u1-u2.
    pub fn tangent_weights(sigma: VertexLabel) -> Result<[RatFunc2; 2], Error> {
        let minus_s = -&RatFunc2::s();
        match sigma {
            VertexLabel::Sigma0 => Ok([-&RatFunc2::u1(), -&RatFunc2::u2()]),
            VertexLabel::Sigma1 => Ok([RatFunc2::u1(), minus_s]),
            VertexLabel::Sigma2 => Ok([RatFunc2::u2(), minus_s]),
            other => Err(Error::InvalidInput(format!("{other} is not a fixed point of X"))),
        }
    }

    /// `sw(τ, σ)` for the graph lines τ1, τ2.
    pub fn line_weight(tau: EdgeLabel, sigma: VertexLabel) -> Result<FlagWeight, Error> {
        let (var, coeff) = match (tau, sigma) {
            (EdgeLabel::Tau1, VertexLabel::Sigma0) => (WeightVar::U1, -1),
            (EdgeLabel::Tau1, VertexLabel::Sigma1) => (WeightVar::U1, 1),
            (EdgeLabel::Tau2, VertexLabel::Sigma0) => (WeightVar::U2, -1),
            (EdgeLabel::Tau2, VertexLabel::Sigma2) => (WeightVar::U2, 1),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "{tau} is not incident to {sigma}"
                )))
            }
        };
        Ok(FlagWeight::new(var, int(coeff)))
    }

    /// `w_(e,v) = sw(τ_e, σ_v) / d_e`.
    pub fn flag_weight(tau: EdgeLabel, sigma: VertexLabel, degree: u32) -> Result<FlagWeight, Error> {
        if degree == 0 {
            return Err(Error::InvalidInput("edge degree must be positive".into()));
        }
        let w = Self::line_weight(tau, sigma)?;
        Ok(FlagWeight::new(w.var, w.coeff / int(degree as i64)))
    }

    /// `sw(σ1) = -u1(u1+u2)`, `sw(σ2) = -u2(u1+u2)`, `sw(σ0) = u1 u2`.
    pub fn vertex_weight(sigma: VertexLabel) -> Result<RatFunc2, Error> {
        match sigma {
            VertexLabel::Sigma0 => Ok(&RatFunc2::u1() * &RatFunc2::u2()),
            VertexLabel::Sigma1 => Ok(-&(&RatFunc2::u1() * &RatFunc2::s())),
            VertexLabel::Sigma2 => Ok(-&(&RatFunc2::u2() * &RatFunc2::s())),
            other => Err(Error::InvalidInput(format!("{other} is not a fixed point of X"))),
        }
    }

    /// `i*_σ φ̃_α`, where `φ̃_α = [p_{σ_α}] / n_α` with `n_1 = n_2 = -u1-u2`, `n_0 = u1 u2`.
    pub fn restriction(alpha: u8, sigma: VertexLabel) -> Result<RatFunc2, Error> {
        let (home, normalizer) = match alpha {
            0 => (VertexLabel::Sigma0, &RatFunc2::u1() * &RatFunc2::u2()),
            1 => (VertexLabel::Sigma1, -&RatFunc2::s()),
            2 => (VertexLabel::Sigma2, -&RatFunc2::s()),
            _ => return Err(Error::InvalidInput(format!("closed insertions use alpha in {{0,1,2}}, got {alpha}"))),
        };
        if sigma != home {
            Self::tangent_weights(sigma)?;
            return Ok(RatFunc2::zero());
        }
        let [a, b] = Self::tangent_weights(sigma)?;
        Ok((&a * &b).checked_div(&normalizer)?)
    }
}

pub fn fixed_point_data(query: FixedPointQuery) -> Result<RatFunc2, Error> {
    match query {
        FixedPointQuery::VertexWeight(sigma) => ClosedFixedPointData::vertex_weight(sigma),
        FixedPointQuery::FlagWeight(tau, sigma, d) => {
            Ok(ClosedFixedPointData::flag_weight(tau, sigma, d)?.to_ratfunc())
        }
        FixedPointQuery::Restriction(alpha, sigma) => ClosedFixedPointData::restriction(alpha, sigma),
    }
}

/// `h(τ_i, d) = (-1)^d d^{2d}/((d!)² u_i^{2d}) · ∏_{j=1}^{d-1} (-u1-u2 + j u_i/d)`.
pub fn closed_edge_factor(tau: EdgeLabel, d: u32) -> Result<RatFunc2, Error> {
    if d == 0 {
        return Err(Error::InvalidInput("edge degree must be positive".into()));
    }
    let ui = match tau {
        EdgeLabel::Tau1 => RatFunc2::u1(),
        EdgeLabel::Tau2 => RatFunc2::u2(),
        EdgeLabel::Tau => return Err(Error::InvalidInput("tau is an open-side line".into())),
    };
    let f = factorial(d);
    let c = minus_one_pow(d) * Scalar::new(BigInt::from(d).pow(2 * d), &f * &f);
    let mut value = ui.pow(-2 * d as i64)?.scale(&c);
    let minus_s = -&RatFunc2::s();
    for j in 1..d {
        let term = &minus_s + &ui.scale(&Scalar::new(BigInt::from(j), BigInt::from(d)));
        value = &value * &term;
    }
    Ok(value)
}

pub(crate) fn check_closed_insertions(insertions: &[Insertion]) -> Result<(), Error> {
    match insertions.iter().find(|i| i.alpha > 2) {
        Some(i) => Err(Error::InvalidInput(format!(
            "closed insertions use alpha in {{0,1,2}}, got {}",
            i.alpha
        ))),
        None => Ok(()),
    }
}

/// Contribution `C̃_Γ` of one closed decorated graph.
pub fn closed_graph_contribution(g: &DecoratedGraph, insertions: &[Insertion]) -> Result<RatFunc2, Error> {
    if g.markings.len() != insertions.len() {
        return Err(Error::InvalidInput("marking count does not match insertions".into()));
    }
    check_closed_insertions(insertions)?;
    let mut value = RatFunc2::scalar(Scalar::new(BigInt::one(), BigInt::from(g.aut_order)));
    // Vanishing restrictions first: most marked graphs contribute nothing.
    for (i, &v) in g.markings.iter().enumerate() {
        let r = ClosedFixedPointData::restriction(insertions[i].alpha, g.labels[v])?;
        if r.is_zero() {
            return Ok(RatFunc2::zero());
        }
        value = &value * &r;
    }
    for e in &g.edges {
        let h = closed_edge_factor(e.label, e.degree)?;
        value = &value * &h.scale(&Scalar::new(BigInt::one(), BigInt::from(e.degree)));
    }
    for v in 0..g.num_vertices() {
        let sigma = g.labels[v];
        let val = g.valence(v) as i64;
        value = &value * &ClosedFixedPointData::vertex_weight(sigma)?.pow(val - 1).map_err(Error::from)?;
        let flags = g
            .incident(v)
            .map(|e| ClosedFixedPointData::flag_weight(e.label, sigma, e.degree))
            .collect::<Result<Vec<_>, _>>()?;
        let exps = g.markings_at(v).iter().map(|&i| insertions[i].a).collect();
        value = &value * &vertex_integral(&VertexIntegralSpec::new(flags, exps))?;
    }
    Ok(value)
}

/// Per-graph data gathered while restricting a closed invariant.
#[derive(Clone, Debug)]
pub struct GraphValuation {
    pub index: usize,
    pub k: usize,
    pub l: Option<usize>,
    /// `None` when the contribution vanishes identically.
    pub valuation: Option<i64>,
    pub restricted: MonoU,
}

impl GraphValuation {
    /// Whether the contribution is divisible by `(u1+u2)^{k-1}`.
    pub fn passes(&self) -> bool {
        match self.valuation {
            None => true,
            Some(v) => v >= self.k as i64 - 1,
        }
    }
}

/// Restricts every contribution after checking its `s`-valuation bound; returns the
/// per-graph rows and the restricted total.
pub fn restrict_graph_sum(
    graphs: &[DecoratedGraph],
    contributions: &[RatFunc2],
) -> Result<(Vec<GraphValuation>, MonoU), Error> {
    let mut rows = Vec::with_capacity(graphs.len());
    let mut total = MonoU::zero();
    for (index, (g, c)) in graphs.iter().zip(contributions).enumerate() {
        let tag = classify_stratum(g)?;
        if tag.k == 0 {
            return Err(Error::Integrity(format!(
                "graph {index} lies in the empty stratum G^0"
            )));
        }
        let valuation = if c.is_zero() { None } else { Some(c.s_valuation()?) };
        let restricted = match valuation {
            Some(v) if v < tag.k as i64 - 1 => {
                return Err(Error::Integrity(format!(
                    "graph {index} in stratum {} has (u1+u2)-valuation {v}",
                    tag.k
                )))
            }
            None => MonoU::zero(),
            Some(_) => c.restrict_antidiagonal()?,
        };
        total = total.checked_add(&restricted)?;
        rows.push(GraphValuation {
            index,
            k: tag.k,
            l: tag.l,
            valuation,
            restricted,
        });
    }
    Ok((rows, total))
}

impl From<AlgebraError> for Error {
    fn from(e: AlgebraError) -> Self {
        Error::Algebra(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::ratio;
    use crate::graphs::enumerate_closed_graphs;

    #[test]
    fn edge_factor_examples() {
        assert_eq!(
            closed_edge_factor(EdgeLabel::Tau1, 1).unwrap(),
            RatFunc2::u1_power(int(-1), -2)
        );
        let t2 = closed_edge_factor(EdgeLabel::Tau2, 1).unwrap();
        assert_eq!(t2, -&RatFunc2::u2().pow(-2).unwrap());
        // (τ1, 2) = 4/u1^4 · (-s + u1/2); check at (u1, u2) = (1, 2), i.e. s = 3
        let h = closed_edge_factor(EdgeLabel::Tau1, 2).unwrap();
        assert_eq!(h.eval(&int(1), &int(3)), Some(int(4) * (int(-3) + ratio(1, 2))));
        let expected = RatFunc2::u1_power(int(4), -4);
        let lin = &(-&RatFunc2::s()) + &RatFunc2::u1().scale(&ratio(1, 2));
        assert_eq!(h, &expected * &lin);
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(
            fixed_point_data(FixedPointQuery::VertexWeight(VertexLabel::Sigma0)).unwrap(),
            &RatFunc2::u1() * &RatFunc2::u2()
        );
        assert_eq!(
            fixed_point_data(FixedPointQuery::FlagWeight(EdgeLabel::Tau1, VertexLabel::Sigma0, 2)).unwrap(),
            RatFunc2::u1().scale(&ratio(-1, 2))
        );
        assert_eq!(
            fixed_point_data(FixedPointQuery::Restriction(1, VertexLabel::Sigma1)).unwrap(),
            RatFunc2::u1()
        );
        assert_eq!(
            fixed_point_data(FixedPointQuery::Restriction(2, VertexLabel::Sigma2)).unwrap(),
            RatFunc2::u2()
        );
        assert!(fixed_point_data(FixedPointQuery::Restriction(0, VertexLabel::Sigma0))
            .unwrap()
            .is_one());
        assert!(fixed_point_data(FixedPointQuery::Restriction(1, VertexLabel::Sigma2))
            .unwrap()
            .is_zero());
        assert!(fixed_point_data(FixedPointQuery::FlagWeight(EdgeLabel::Tau1, VertexLabel::Sigma2, 1)).is_err());
    }

    #[test]
    fn vertex_weights_are_tangent_products() {
        for sigma in [VertexLabel::Sigma0, VertexLabel::Sigma1, VertexLabel::Sigma2] {
            let [a, b] = ClosedFixedPointData::tangent_weights(sigma).unwrap();
            assert_eq!(ClosedFixedPointData::vertex_weight(sigma).unwrap(), &a * &b);
        }
    }

    #[test]
    fn contribution_examples() {
        let c = |beta| {
            let g = &enumerate_closed_graphs(0, beta).unwrap()[0];
            closed_graph_contribution(g, &[]).unwrap()
        };
        assert!(c((1, 0)).is_one());
        assert!(c((0, 1)).is_one());
        assert_eq!(c((1, 1)).s_valuation(), Ok(-1));
    }
}
