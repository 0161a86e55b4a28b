//! The tensor semigroup of non-projective summand classes.
//!
//! Classes are keyed by their block sets. Tensoring two classes yields the
//! class of the union, with exact dimension bookkeeping
//! p^d1 * p^d2 = mult * p^|union|, and a product whose union covers every
//! block is projective and leaves the core. Keying by block set pools
//! isomorphic copies, so a growth run works on at most 2^k states no matter
//! how high the tensor power.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gamma::gamma_closed;
use crate::tabloids::{decompose_formula, Decomposition, PartitionPair, SummandSignature};

/// Growth runs key states by block subsets; 2^k of them must stay in memory.
pub const TENSOR_RANK_BUDGET: u64 = 16;

/// Multiset of non-projective summand classes: the core of a module (or a
/// tensor power of one) restricted to the all-p-cycles group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreState {
    rank: u32,
    p: u64,
    entries: BTreeMap<SummandSignature, BigUint>,
}

impl CoreState {
    pub fn empty(rank: u32, p: u64) -> CoreState {
        CoreState {
            rank,
            p,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a state from raw class multiplicities, dropping projective
    /// classes and zero entries.
    pub fn from_entries<I>(rank: u32, p: u64, entries: I) -> CoreState
    where
        I: IntoIterator<Item = (SummandSignature, BigUint)>,
    {
        let mut state = CoreState::empty(rank, p);
        for (sig, mult) in entries {
            if !sig.is_projective(rank) {
                state.insert(sig, mult);
            }
        }
        state
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<SummandSignature, BigUint> {
        &self.entries
    }

    pub fn multiplicity(&self, sig: &SummandSignature) -> BigUint {
        self.entries.get(sig).cloned().unwrap_or_else(BigUint::zero)
    }

    fn insert(&mut self, sig: SummandSignature, mult: BigUint) {
        if !mult.is_zero() {
            *self.entries.entry(sig).or_insert_with(BigUint::zero) += mult;
        }
    }

    /// Core dimension: sum of mult * p^d over the stored classes.
    pub fn dimension(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for (sig, mult) in &self.entries {
            acc += mult * BigUint::from(self.p.pow(sig.d()));
        }
        acc
    }
}

/// Copies the non-projective part of a decomposition: every class with
/// d below the group rank, multiplicities unchanged.
pub fn core_of(dec: &Decomposition) -> CoreState {
    let mut state = CoreState::empty(dec.rank(), dec.p());
    for (sig, mult) in dec.entries() {
        if !sig.is_projective(dec.rank()) {
            state.insert(*sig, mult.clone());
        }
    }
    state
}

/// Result of tensoring two summand classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorProduct {
    /// The product is mult copies of the class of the union.
    Class {
        signature: SummandSignature,
        multiplicity: BigUint,
    },
    /// The union covers all k blocks; the product is projective.
    Projective,
}

/// Tensor product of two classes over a rank-k block universe: the result
/// lives on the union of the block sets, and exact dimension bookkeeping
/// p^d1 * p^d2 = mult * p^|union| fixes the multiplicity.
pub fn tensor_classes(
    s1: &SummandSignature,
    s2: &SummandSignature,
    rank: u32,
    p: u64,
) -> TensorProduct {
    debug_assert_eq!(s1.d(), s1.block_mask().count_ones());
    debug_assert_eq!(s2.d(), s2.block_mask().count_ones());
    let union = s1.block_mask() | s2.block_mask();
    let d_union = union.count_ones();
    if d_union == rank {
        return TensorProduct::Projective;
    }
    let exponent = s1.d() + s2.d() - d_union;
    TensorProduct::Class {
        signature: SummandSignature::from_block_set(union),
        multiplicity: BigUint::from(p).pow(exponent),
    }
}

/// One tensor step: the core of (state tensor M), computed as the bilinear
/// convolution of the two multiplicity maps with projective products
/// discarded.
pub fn tensor_step(state: &CoreState, m_core: &CoreState) -> CoreState {
    debug_assert_eq!(state.rank, m_core.rank);
    debug_assert_eq!(state.p, m_core.p);
    let mut next = CoreState::empty(state.rank, state.p);
    for (s1, m1) in &state.entries {
        for (s2, m2) in &m_core.entries {
            match tensor_classes(s1, s2, state.rank, state.p) {
                TensorProduct::Projective => {}
                TensorProduct::Class {
                    signature,
                    multiplicity,
                } => {
                    next.insert(signature, m1 * m2 * multiplicity);
                }
            }
        }
    }
    next
}

/// Core dimensions of successive tensor powers with exact consecutive
/// ratios, floating root estimates, and the closed-formula target.
#[derive(Debug, Clone)]
pub struct GrowthEstimate {
    /// c_1 .. c_m: core dimension of the j-th tensor power.
    pub c_values: Vec<BigUint>,
    /// Exact ratios c_{j+1} / c_j; empty when the core is empty.
    pub ratio_estimates: Vec<BigRational>,
    /// Floating approximations of c_j^(1/j).
    pub root_estimates: Vec<f64>,
    /// The closed-formula invariant, for error reporting.
    pub target: Option<BigUint>,
}

impl GrowthEstimate {
    /// Exact relative errors |ratio - target| / target, one per ratio.
    /// Empty when the target is missing or zero.
    pub fn relative_errors(&self) -> Vec<BigRational> {
        let target = match &self.target {
            Some(t) if !t.is_zero() => BigRational::from(BigInt::from(t.clone())),
            _ => return Vec::new(),
        };
        self.ratio_estimates
            .iter()
            .map(|ratio| (ratio - &target).abs() / &target)
            .collect()
    }
}

/// Natural log of a big integer, split off the bit length so that values far
/// beyond f64 range stay representable.
fn big_ln(value: &BigUint) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = value.bits();
    if bits <= 53 {
        return value.to_f64().unwrap_or(f64::MAX).ln();
    }
    let shift = bits - 53;
    let head = (value >> shift).to_f64().unwrap_or(f64::MAX);
    head.ln() + shift as f64 * std::f64::consts::LN_2
}

fn root_estimate(value: &BigUint, j: u64) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    (big_ln(value) / j as f64).exp()
}

/// Iterates the tensor semigroup from the formula decomposition of
/// M^(n-r, r) and records the core-dimension sequence c_1 .. c_{m_max}.
///
/// Errors when the 2^k signature universe exceeds the rank budget.
pub fn growth(pp: &PartitionPair, p: u64, m_max: u64) -> Result<GrowthEstimate> {
    let pd = pp.prime_data(p)?;
    if pd.k > TENSOR_RANK_BUDGET {
        return Err(Error::InstanceTooLarge {
            required: 1u128 << pd.k.min(127),
            budget: 1u64 << TENSOR_RANK_BUDGET,
        });
    }
    let dec = decompose_formula(pp, p)?;
    let m_core = core_of(&dec);
    let target = gamma_closed(pp, p)?;

    let mut c_values = Vec::with_capacity(m_max as usize);
    let mut state = m_core.clone();
    c_values.push(state.dimension());
    for _ in 1..m_max {
        state = tensor_step(&state, &m_core);
        c_values.push(state.dimension());
    }

    let mut ratio_estimates = Vec::new();
    for pair in c_values.windows(2) {
        if pair[0].is_zero() {
            break;
        }
        ratio_estimates.push(BigRational::new(
            BigInt::from(pair[1].clone()),
            BigInt::from(pair[0].clone()),
        ));
    }
    let root_estimates = c_values
        .iter()
        .enumerate()
        .map(|(i, c)| root_estimate(c, i as u64 + 1))
        .collect();

    Ok(GrowthEstimate {
        c_values,
        ratio_estimates,
        root_estimates,
        target: Some(target),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, OrbitType};
    use crate::tabloids::decompose_enumerated;
    use num_traits::One;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn sig(blocks: u64) -> SummandSignature {
        SummandSignature::from_block_set(blocks)
    }

    #[test]
    fn core_drops_projective_classes() {
        let pp = PartitionPair::from_n_r(4, 2).unwrap();
        let dec = decompose_formula(&pp, 2).unwrap();
        let core = core_of(&dec);
        assert_eq!(core.multiplicity(&sig(0)), u(2));
        assert_eq!(core.entries().len(), 1);

        let pp = PartitionPair::from_n_r(6, 2).unwrap();
        let dec = decompose_formula(&pp, 2).unwrap();
        let core = core_of(&dec);
        // k = 3, maximal d in the decomposition is 2: nothing dropped.
        assert_eq!(core.entries().len(), dec.entries().len());
        assert_eq!(core.dimension(), u(15));
    }

    #[test]
    fn tensor_class_rules() {
        // Same singleton class: p^d copies of itself.
        match tensor_classes(&sig(0b1), &sig(0b1), 3, 5) {
            TensorProduct::Class {
                signature,
                multiplicity,
            } => {
                assert_eq!(signature, sig(0b1));
                assert_eq!(multiplicity, u(5));
            }
            TensorProduct::Projective => panic!("not projective"),
        }
        // Tensoring with the trivial class changes nothing.
        match tensor_classes(&sig(0), &sig(0b101), 4, 3) {
            TensorProduct::Class {
                signature,
                multiplicity,
            } => {
                assert_eq!(signature, sig(0b101));
                assert_eq!(multiplicity, u(1));
            }
            TensorProduct::Projective => panic!("not projective"),
        }
        // Union covering all blocks is projective.
        assert_eq!(
            tensor_classes(&sig(0b011), &sig(0b110), 3, 2),
            TensorProduct::Projective
        );
    }

    #[test]
    fn tensor_dimension_bookkeeping_is_exact() {
        for p in [2u64, 3, 5] {
            for b1 in 0..8u64 {
                for b2 in 0..8u64 {
                    if let TensorProduct::Class { signature, multiplicity } =
                        tensor_classes(&sig(b1), &sig(b2), 4, p)
                    {
                        let lhs = BigUint::from(p).pow(sig(b1).d() + sig(b2).d());
                        let rhs = multiplicity * BigUint::from(p).pow(signature.d());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_step_examples() {
        let mut s = CoreState::empty(3, 2);
        s.insert(sig(0), u(2));
        let step = tensor_step(&s, &s);
        assert_eq!(step.multiplicity(&sig(0)), u(4));

        let mut a = CoreState::empty(3, 2);
        a.insert(sig(0b01), u(1));
        let mut b = CoreState::empty(3, 2);
        b.insert(sig(0b10), u(1));
        let step = tensor_step(&a, &b);
        assert_eq!(step.multiplicity(&sig(0b11)), u(1));

        let mut a = CoreState::empty(3, 2);
        a.insert(sig(0b011), u(1));
        let mut b = CoreState::empty(3, 2);
        b.insert(sig(0b110), u(1));
        assert!(tensor_step(&a, &b).is_empty());
    }

    #[test]
    fn growth_doubles_for_two_trivial_summands() {
        let pp = PartitionPair::from_n_r(4, 2).unwrap();
        let est = growth(&pp, 2, 10).unwrap();
        for (i, c) in est.c_values.iter().enumerate() {
            assert_eq!(*c, BigUint::from(2u64).pow(i as u32 + 1));
        }
        for ratio in &est.ratio_estimates {
            assert_eq!(*ratio, BigRational::from(BigInt::from(2)));
        }
    }

    #[test]
    fn growth_of_trivial_module_is_constant() {
        let pp = PartitionPair::from_n_r(5, 0).unwrap();
        let est = growth(&pp, 2, 8).unwrap();
        assert!(est.c_values.iter().all(|c| c.is_one()));
        assert!(est
            .ratio_estimates
            .iter()
            .all(|r| *r == BigRational::from(BigInt::from(1))));
    }

    #[test]
    fn growth_ratio_approaches_the_invariant() {
        let pp = PartitionPair::from_n_r(6, 2).unwrap();
        let est = growth(&pp, 2, 60).unwrap();
        assert_eq!(est.target, Some(u(7)));
        let last = est.ratio_estimates.last().unwrap();
        let seven = BigRational::from(BigInt::from(7));
        let err = (last - &seven).abs() / &seven;
        assert!(err < BigRational::new(BigInt::from(1), BigInt::from(1_000_000)));
    }

    #[test]
    fn growth_on_projective_restriction_is_zero() {
        let pp = PartitionPair::from_n_r(5, 2).unwrap();
        let est = growth(&pp, 5, 6).unwrap();
        assert!(est.c_values.iter().all(|c| c.is_zero()));
        assert!(est.ratio_estimates.is_empty());
        assert!(est.relative_errors().is_empty());
    }

    #[test]
    fn growth_rank_budget() {
        let pp = PartitionPair::from_n_r(64, 2).unwrap();
        assert!(matches!(
            growth(&pp, 2, 4),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn step_agrees_with_enumerated_decomposition_of_m() {
        // The first state is the core of M itself by either route.
        let pp = PartitionPair::from_n_r(7, 3).unwrap();
        let group = build_group(&OrbitType::p_cycles(7, 2).unwrap()).unwrap();
        let enumerated = core_of(&decompose_enumerated(&pp, &group, 10_000).unwrap());
        let formula = core_of(&decompose_formula(&pp, 2).unwrap());
        assert_eq!(enumerated, formula);
    }
}
