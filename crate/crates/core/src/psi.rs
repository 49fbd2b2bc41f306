//! Genus-zero ψ-class integrals and the vertex factors of the graph sums.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::algebra::scalar::factorial;
use crate::algebra::{AlgebraError, RatFunc2, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PsiError {
    #[error("top intersection needs at least three points, got {0}")]
    Unstable(usize),
    #[error("vertex has no flags")]
    NoFlags,
    #[error("unsmoothable node weight: the two flag weights cancel")]
    UnsmoothableNode,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Equivariant parameter a flag weight is proportional to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeightVar {
    /// The circle parameter, embedded as `u1`.
    U,
    U1,
    U2,
}

/// Flag weight `coeff * var`, e.g. `±u/d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlagWeight {
    pub var: WeightVar,
    pub coeff: Scalar,
}

impl FlagWeight {
    pub fn new(var: WeightVar, coeff: Scalar) -> Self {
        debug_assert!(!coeff.is_zero());
        FlagWeight { var, coeff }
    }

    pub fn to_ratfunc(&self) -> RatFunc2 {
        match self.var {
            WeightVar::U | WeightVar::U1 => RatFunc2::u1().scale(&self.coeff),
            WeightVar::U2 => RatFunc2::u2().scale(&self.coeff),
        }
    }
}

/// The integrand `prod psi_i^{a_i} / prod (w_e - psi_e)` at one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexIntegralSpec {
    pub flags: Vec<FlagWeight>,
    pub marking_exponents: Vec<u32>,
}

impl VertexIntegralSpec {
    pub fn new(flags: Vec<FlagWeight>, marking_exponents: Vec<u32>) -> Self {
        VertexIntegralSpec {
            flags,
            marking_exponents,
        }
    }

    pub fn flags_only(flags: Vec<FlagWeight>) -> Self {
        VertexIntegralSpec::new(flags, Vec::new())
    }

    pub fn num_points(&self) -> usize {
        self.flags.len() + self.marking_exponents.len()
    }

    fn cache_key(&self) -> (Vec<FlagWeight>, Vec<u32>) {
        let mut flags = self.flags.clone();
        flags.sort();
        let mut marks = self.marking_exponents.clone();
        marks.sort();
        (flags, marks)
    }
}

/// `∫_{M_{0,h}} ψ_1^{s_1}⋯ψ_h^{s_h} = (h-3)!/∏ s_i!` when `Σ s_i = h-3`, else 0.
pub fn psi_top_intersection(exponents: &[u32]) -> Result<Scalar, PsiError> {
    let h = exponents.len();
    if h < 3 {
        return Err(PsiError::Unstable(h));
    }
    let dim = (h - 3) as u32;
    if exponents.iter().sum::<u32>() != dim {
        return Ok(Scalar::zero());
    }
    let den = exponents
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, &s| acc * factorial(s));
    Ok(Scalar::new(factorial(dim), den))
}

/// The same numbers by the string equation, reducing to `M_{0,3}`.
pub fn psi_oracle_string_equation(exponents: &[u32]) -> Scalar {
    fn go(sorted: Vec<u32>, memo: &mut HashMap<Vec<u32>, Scalar>) -> Scalar {
        let h = sorted.len();
        if h < 3 || sorted.iter().sum::<u32>() as usize != h - 3 {
            return Scalar::zero();
        }
        if h == 3 {
            return Scalar::one();
        }
        if let Some(v) = memo.get(&sorted) {
            return v.clone();
        }
        // Σ s_i = h - 3 < h, so some point carries no ψ.
        let zero_at = sorted.iter().position(|&s| s == 0).expect("a zero exponent");
        let mut rest = sorted.clone();
        rest.remove(zero_at);
        let mut total = Scalar::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut next = rest.clone();
            next[j] -= 1;
            next.sort_unstable();
            total += go(next, memo);
        }
        memo.insert(sorted, total.clone());
        total
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    go(sorted, &mut HashMap::new())
}

/// `∫_{M_{0,1}} 1/(1 - dψ) = 1/d²`.
pub fn unstable_one_flag(d: &RatFunc2) -> Result<RatFunc2, AlgebraError> {
    d.pow(-2)
}

/// `∫_{M_{0,2}} 1/((1 - d₁ψ₁)(1 - d₂ψ₂)) = 1/(d₁ + d₂)`.
pub fn unstable_two_flags(d1: &RatFunc2, d2: &RatFunc2) -> Result<RatFunc2, AlgebraError> {
    (d1 + d2).checked_inv()
}

/// `∫_{M_{0,2}} 1/(1 - dψ₁) = 1/d`.
pub fn unstable_flag_and_marking(d: &RatFunc2) -> Result<RatFunc2, AlgebraError> {
    d.checked_inv()
}

/// Unstable vertices in the `1/(w - ψ)` form. Each factor is rewritten as
/// `(1/w) · 1/(1 - ψ/w)`, so `d = 1/w` in the conventions above.
fn unstable_vertex(spec: &VertexIntegralSpec) -> Result<RatFunc2, PsiError> {
    let weights: Vec<RatFunc2> = spec.flags.iter().map(FlagWeight::to_ratfunc).collect();
    let inv: Vec<RatFunc2> = weights
        .iter()
        .map(RatFunc2::checked_inv)
        .collect::<Result<_, _>>()?;
    match (inv.as_slice(), spec.marking_exponents.as_slice()) {
        ([d], []) => Ok(&inv[0] * &unstable_one_flag(d)?),
        ([d1, d2], []) => {
            if (d1 + d2).is_zero() {
                return Err(PsiError::UnsmoothableNode);
            }
            Ok(&(&inv[0] * &inv[1]) * &unstable_two_flags(d1, d2)?)
        }
        ([d], [0]) => Ok(&inv[0] * &unstable_flag_and_marking(d)?),
        // ψ at a marking on a rigid edge end restricts to minus the tangent weight.
        ([_], [a]) => Ok((-&weights[0]).pow(*a as i64)?),
        ([], _) => Err(PsiError::NoFlags),
        _ => unreachable!("stable vertex routed to unstable conventions"),
    }
}

fn stable_vertex(spec: &VertexIntegralSpec) -> Result<RatFunc2, PsiError> {
    let h = spec.num_points();
    let dim = (h - 3) as u32;
    let marked: u32 = spec.marking_exponents.iter().sum();
    if marked > dim {
        return Ok(RatFunc2::zero());
    }
    let budget = dim - marked;
    let inv: Vec<RatFunc2> = spec
        .flags
        .iter()
        .map(|w| w.to_ratfunc().checked_inv())
        .collect::<Result<_, _>>()?;
    // powers[e][k] = w_e^{-(k+1)}
    let powers: Vec<Vec<RatFunc2>> = inv
        .iter()
        .map(|x| {
            let mut row = vec![x.clone()];
            for k in 1..=budget as usize {
                let next = &row[k - 1] * x;
                row.push(next);
            }
            row
        })
        .collect();

    let mut total = RatFunc2::zero();
    let mut ks = vec![0u32; spec.flags.len()];
    let mut exps = Vec::with_capacity(h);
    loop {
        if ks.iter().sum::<u32>() == budget {
            exps.clear();
            exps.extend_from_slice(&ks);
            exps.extend_from_slice(&spec.marking_exponents);
            let c = psi_top_intersection(&exps)?;
            let mut term = RatFunc2::scalar(c);
            for (e, &k) in ks.iter().enumerate() {
                term = &term * &powers[e][k as usize];
            }
            total = &total + &term;
        }
        // next composition candidate in lexicographic order
        let mut i = 0;
        loop {
            if i == ks.len() {
                return Ok(total);
            }
            if ks[i] < budget {
                ks[i] += 1;
                break;
            }
            ks[i] = 0;
            i += 1;
        }
    }
}

type VertexCache = Mutex<HashMap<(Vec<FlagWeight>, Vec<u32>), RatFunc2>>;

fn cache() -> &'static VertexCache {
    static CACHE: OnceLock<VertexCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `∫_{M_{0,E_v ∪ S_v}} ∏ψ_i^{a_i} / ∏(w_e - ψ_e)`, including the unstable cases.
pub fn vertex_integral(spec: &VertexIntegralSpec) -> Result<RatFunc2, PsiError> {
    if spec.flags.is_empty() {
        return Err(PsiError::NoFlags);
    }
    let key = spec.cache_key();
    if let Some(v) = cache().lock().expect("psi cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let value = if spec.num_points() >= 3 {
        stable_vertex(spec)?
    } else {
        unstable_vertex(spec)?
    };
    cache()
        .lock()
        .expect("psi cache poisoned")
        .insert(key, value.clone());
    Ok(value)
}
