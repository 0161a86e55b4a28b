//! The invariant itself, computed by three independent routes and reconciled.
//!
//! - closed: C(n-p, lambda1) + C(n-p, lambda2), nothing else;
//! - structural: from the formula decomposition, the total dimension of the
//!   summand classes avoiding the last block;
//! - oracle: build each maximal elementary abelian subgroup, enumerate its
//!   order-p subgroups, and maximize the count of fixed tabloids.
//!
//! The oracle deliberately maximizes over every line, not just coordinate
//! ones, so an unexpected maximum would be surfaced rather than hidden.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::groups::{build_group, enumerate_orbit_types, OrbitType, SubgroupOrderP};
use crate::tabloids::{fixed_count, formula_multiplicities_by_size, PartitionPair};

pub(crate) fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn ser_opt_biguint<S: Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// The closed formula: C(n-p, lambda1) + C(n-p, lambda2), with vanishing
/// binomials contributing zero.
pub fn gamma_closed(pp: &PartitionPair, p: u64) -> Result<BigUint> {
    pp.prime_data(p)?;
    let rows = pp.n() - p;
    Ok(binom(rows, pp.lambda1()) + binom(rows, pp.lambda2()))
}

/// The structural route: from the formula decomposition, sum mult * p^d over
/// the classes whose block set avoids the last block B_k. By signature
/// symmetry there are C(k-1, d) such d-subsets, so the sum is computed from
/// the grouped multiplicities. Returns the value and the avoided block index.
pub fn gamma_structural(pp: &PartitionPair, p: u64) -> Result<(BigUint, u64)> {
    let pd = pp.prime_data(p)?;
    let by_size = formula_multiplicities_by_size(pp, p)?;
    let mut total = BigUint::zero();
    for d in 0..pd.k {
        total += binom(pd.k - 1, d) * &by_size[d as usize] * BigUint::from(p).pow(d as u32);
    }
    Ok((total, pd.k))
}

/// The fixed-point oracle for one orbit type: builds the group, walks every
/// order-p subgroup, and returns the maximal number of fixed tabloids along
/// with an achieving subgroup.
pub fn gamma_oracle(
    pp: &PartitionPair,
    orbit_type: &OrbitType,
    budget: u64,
) -> Result<(BigUint, SubgroupOrderP)> {
    let group = build_group(orbit_type)?;
    oracle_over_lines(pp, &group, budget)
}

fn line_count(p: u64, rank: u32) -> u128 {
    let mut power = 1u128;
    for _ in 0..rank {
        power = power.saturating_mul(p as u128);
    }
    (power - 1) / (p as u128 - 1)
}

fn oracle_over_lines(
    pp: &PartitionPair,
    group: &crate::groups::ElementaryGroup,
    budget: u64,
) -> Result<(BigUint, SubgroupOrderP)> {
    let lines = line_count(group.p(), group.rank());
    let tabloids = pp.tabloid_count();
    let work = tabloids.clone() * BigUint::from(lines);
    if work > BigUint::from(budget) {
        return Err(Error::InstanceTooLarge {
            required: work.try_into().unwrap_or(u128::MAX),
            budget,
        });
    }
    let mut best: Option<(BigUint, SubgroupOrderP)> = None;
    for line in group.order_p_subgroups() {
        let count = fixed_count(group, &line, pp, budget)?;
        match &best {
            Some((top, _)) if *top >= count => {}
            _ => best = Some((count, line)),
        }
    }
    best.ok_or_else(|| Error::SelfCheckFailed("group of rank zero has no lines".to_string()))
}

/// Per-orbit-type oracle value inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitTypeGamma {
    #[serde(serialize_with = "ser_biguint")]
    pub gamma: BigUint,
    pub orbit_type: OrbitType,
    /// Exponent vector of an order-p subgroup achieving the maximum.
    pub witness: Vec<u8>,
}

/// All routes to the invariant for one instance, reconciled.
#[derive(Debug, Clone, Serialize)]
pub struct GammaReport {
    /// True when every computed route returned the same value and every
    /// orbit type stayed at or below the all-p-cycles type.
    pub agree: bool,
    #[serde(serialize_with = "ser_biguint")]
    pub gamma_closed: BigUint,
    /// Oracle value on the all-p-cycles type; absent when over budget.
    #[serde(serialize_with = "ser_opt_biguint")]
    pub gamma_oracle: Option<BigUint>,
    #[serde(serialize_with = "ser_biguint")]
    pub gamma_structural: BigUint,
    pub lambda: (u64, u64),
    pub n: u64,
    /// True when the enumeration budget prevented the oracle routes.
    pub oracle_skipped: bool,
    pub p: u64,
    /// One oracle entry per orbit type, sorted by the type encoding; empty
    /// when the oracle was skipped.
    pub per_orbit_type: Vec<OrbitTypeGamma>,
    /// The block avoided by the structural route.
    pub witness_block: u64,
    /// Witness subgroup on the all-p-cycles type, when the oracle ran.
    pub witness_line: Option<Vec<u8>>,
}

/// Computes the invariant for the full symmetric group: both formula routes
/// always, and the fixed-point oracle over every maximal elementary abelian
/// orbit type when the budget allows. Cross-checks everything and reports.
///
/// ```
/// use permgamma::{gamma_symmetric_group, PartitionPair, DEFAULT_ENUMERATION_BUDGET};
///
/// let pp = PartitionPair::from_n_r(6, 2)?;
/// let report = gamma_symmetric_group(&pp, 2, DEFAULT_ENUMERATION_BUDGET)?;
/// assert_eq!(report.gamma_closed.to_string(), "7");
/// assert!(report.agree);
/// # Ok::<(), permgamma::Error>(())
/// ```
pub fn gamma_symmetric_group(pp: &PartitionPair, p: u64, budget: u64) -> Result<GammaReport> {
    pp.prime_data(p)?;
    let closed = gamma_closed(pp, p)?;
    let (structural, witness_block) = gamma_structural(pp, p)?;

    let types = enumerate_orbit_types(pp.n(), p)?;
    let tabloids = pp.tabloid_count();
    let affordable = types.iter().all(|t| {
        BigUint::from(line_count(p, t.rank())) * &tabloids <= BigUint::from(budget)
    });

    let mut per_orbit_type = Vec::new();
    let mut oracle_value = None;
    let mut witness_line = None;
    if affordable {
        for t in &types {
            let (gamma, witness) = gamma_oracle(pp, t, budget)?;
            if t.is_p_cycles() {
                oracle_value = Some(gamma.clone());
                witness_line = Some(witness.line.clone());
            }
            per_orbit_type.push(OrbitTypeGamma {
                gamma,
                orbit_type: t.clone(),
                witness: witness.line,
            });
        }
    }

    let mut agree = closed == structural;
    if let Some(oracle) = &oracle_value {
        agree &= oracle == &closed;
        agree &= per_orbit_type.iter().all(|e| e.gamma <= *oracle);
    }

    Ok(GammaReport {
        agree,
        gamma_closed: closed,
        gamma_oracle: oracle_value,
        gamma_structural: structural,
        lambda: (pp.lambda1(), pp.lambda2()),
        n: pp.n(),
        oracle_skipped: !affordable,
        p,
        per_orbit_type,
        witness_block,
        witness_line,
    })
}

/// The hook case (n-1, 1): the permutation module is the Young module Y when
/// p divides n and k + Y otherwise, which pins gamma(Y) = dim Y - p.
/// Cross-checks the value against the closed formula for the permutation
/// module, shifted by one in the split case.
pub fn young_gamma_first_hook(n: u64, p: u64) -> Result<(BigUint, BigUint)> {
    if n < 2 {
        return Err(Error::InvalidPartition {
            reason: format!("the partition (n-1, 1) needs n >= 2, got {n}"),
        });
    }
    let pp = PartitionPair::new(n - 1, 1)?;
    let gamma_m = gamma_closed(&pp, p)?;
    let divides = n.is_multiple_of(p);
    let (dim_y, gamma_y) = if divides {
        (BigUint::from(n), BigUint::from(n - p))
    } else {
        (BigUint::from(n - 1), BigUint::from(n - p - 1))
    };
    // gamma(k + Y) = 1 + gamma(Y) when p divides |G|.
    let recovered = if divides {
        gamma_m.clone()
    } else {
        gamma_m.clone() - BigUint::from(1u32)
    };
    if recovered != gamma_y {
        return Err(Error::SelfCheckFailed(format!(
            "hook invariant mismatch at n={n}, p={p}: {gamma_y} vs {recovered} from gamma(M)={gamma_m}"
        )));
    }
    if dim_y.clone() - BigUint::from(p) != gamma_y {
        return Err(Error::SelfCheckFailed(format!(
            "hook invariant is not dim Y - p at n={n}, p={p}"
        )));
    }
    Ok((dim_y, gamma_y))
}
