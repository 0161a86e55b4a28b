//! Tabloids of two-part partitions and the decomposition of their span under
//! an elementary abelian p-subgroup.
//!
//! A tabloid is identified with the r-subset of {1..n} forming its second
//! row, stored as a 64-bit mask. Under the all-p-cycles subgroup the cyclic
//! span of a tabloid has dimension p^d where d counts the blocks it uses
//! partially, and its isomorphism class is determined by that block set.
//! The module computes the full multiplicity map twice: once by orbit
//! enumeration and once from closed block-sum formulas, and the two routes
//! are required to agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{binom, binom_i, BlockSumTable};
use crate::error::{Error, Result};
use crate::groups::{ElementaryGroup, SubgroupOrderP, MAX_DEGREE};

/// Default ceiling on exhaustive tabloid enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// Materializing a formula decomposition lists every block subset; beyond
/// this many blocks only the grouped-by-size route is offered.
pub const FORMULA_SUBSET_CAP: u64 = 20;

/// A two-part partition (lambda1, lambda2) of n with lambda1 >= lambda2.
/// Inputs are normalized: the two rows of a permutation module can be
/// swapped without changing it, so r is always the smaller part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionPair {
    lambda1: u64,
    lambda2: u64,
}

impl PartitionPair {
    pub fn new(lambda1: u64, lambda2: u64) -> Result<PartitionPair> {
        let (hi, lo) = if lambda1 >= lambda2 {
            (lambda1, lambda2)
        } else {
            (lambda2, lambda1)
        };
        let n = hi + lo;
        if n == 0 {
            return Err(Error::InvalidPartition {
                reason: "partition of 0 has no tabloids".to_string(),
            });
        }
        if n > MAX_DEGREE {
            return Err(Error::InvalidPartition {
                reason: format!("degree n = {n} exceeds the supported maximum {MAX_DEGREE}"),
            });
        }
        Ok(PartitionPair {
            lambda1: hi,
            lambda2: lo,
        })
    }

    /// Builds the pair (n - r, r), normalizing if r > n / 2.
    pub fn from_n_r(n: u64, r: u64) -> Result<PartitionPair> {
        if r > n {
            return Err(Error::InvalidPartition {
                reason: format!("second row r = {r} exceeds n = {n}"),
            });
        }
        PartitionPair::new(n - r, r)
    }

    pub fn n(&self) -> u64 {
        self.lambda1 + self.lambda2
    }

    pub fn lambda1(&self) -> u64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> u64 {
        self.lambda2
    }

    /// Size of the second row.
    pub fn r(&self) -> u64 {
        self.lambda2
    }

    /// Number of tabloids, C(n, r).
    pub fn tabloid_count(&self) -> BigUint {
        binom(self.n(), self.r())
    }

    /// Division data of (n, r) at the prime p.
    pub fn prime_data(&self, p: u64) -> Result<PrimeData> {
        if !crate::combinatorics::is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        let n = self.n();
        if p > n {
            return Err(Error::PrimeTooLarge { p, n });
        }
        let r = self.r();
        Ok(PrimeData {
            p,
            k: n / p,
            a0: n % p,
            q: r / p,
            b0: r % p,
        })
    }
}

/// n = kp + a0 and r = qp + b0 with 0 <= a0, b0 < p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeData {
    pub p: u64,
    pub k: u64,
    pub a0: u64,
    pub q: u64,
    pub b0: u64,
}

/// A tabloid, stored as the bitmask of its second row (bit i = point i+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tabloid {
    mask: u64,
}

impl Tabloid {
    pub fn from_points(points: &[u64]) -> Tabloid {
        let mut mask = 0u64;
        for &point in points {
            debug_assert!((1..=MAX_DEGREE).contains(&point));
            mask |= 1u64 << (point - 1);
        }
        Tabloid { mask }
    }

    pub fn from_mask(mask: u64) -> Tabloid {
        Tabloid { mask }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Second-row points in increasing order, 1-based.
    pub fn points(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut rest = self.mask;
        while rest != 0 {
            out.push(rest.trailing_zeros() as u64 + 1);
            rest &= rest - 1;
        }
        out
    }
}

/// Yields every r-subset of {1..n} in lexicographic order of the sorted
/// point lists; exactly C(n, r) tabloids.
pub fn enumerate_tabloids(pp: &PartitionPair) -> TabloidIter {
    TabloidIter::new(pp.n(), pp.r())
}

pub struct TabloidIter {
    n: u64,
    indices: Vec<u64>,
    started: bool,
    finished: bool,
}

impl TabloidIter {
    fn new(n: u64, r: u64) -> TabloidIter {
        TabloidIter {
            n,
            indices: (1..=r).collect(),
            started: false,
            finished: r > n,
        }
    }
}

impl Iterator for TabloidIter {
    type Item = Tabloid;

    fn next(&mut self) -> Option<Tabloid> {
        if self.finished {
            return None;
        }
        if self.started {
            // Advance the rightmost index that can still move.
            let r = self.indices.len();
            let mut i = r;
            loop {
                if i == 0 {
                    self.finished = true;
                    return None;
                }
                i -= 1;
                if self.indices[i] < self.n - (r - 1 - i) as u64 {
                    self.indices[i] += 1;
                    for l in i + 1..r {
                        self.indices[l] = self.indices[l - 1] + 1;
                    }
                    break;
                }
            }
        }
        self.started = true;
        Some(Tabloid::from_points(&self.indices))
    }
}

/// Isomorphism class of the cyclic span of a tabloid: the set of partially
/// used blocks, plus the orbit-size exponent d. For the all-p-cycles group
/// d equals the number of partial blocks; for factors of rank two or more a
/// block can contribute more than one to d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SummandSignature {
    /// Bitmask over non-singleton block indices (bit i = block i+1).
    blocks: u64,
    /// log_p of the orbit size.
    d: u32,
}

impl SummandSignature {
    pub fn new(blocks: u64, d: u32) -> SummandSignature {
        SummandSignature { blocks, d }
    }

    /// Signature of a block subset under the all-p-cycles group, where the
    /// exponent is the number of blocks.
    pub fn from_block_set(blocks: u64) -> SummandSignature {
        SummandSignature {
            blocks,
            d: blocks.count_ones(),
        }
    }

    pub fn empty() -> SummandSignature {
        SummandSignature { blocks: 0, d: 0 }
    }

    pub fn block_mask(&self) -> u64 {
        self.blocks
    }

    /// 1-based indices of the partially used blocks.
    pub fn block_indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut rest = self.blocks;
        while rest != 0 {
            out.push(rest.trailing_zeros() + 1);
            rest &= rest - 1;
        }
        out
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn dimension(&self, p: u64) -> u64 {
        p.pow(self.d)
    }

    /// A summand class is projective exactly when its orbit is free, i.e.
    /// d equals the rank of the acting group.
    pub fn is_projective(&self, rank: u32) -> bool {
        self.d == rank
    }
}

impl Ord for SummandSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d
            .cmp(&other.d)
            .then_with(|| cmp_block_sets_lex(self.blocks, other.blocks))
    }
}

impl PartialOrd for SummandSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the sorted index lists of two block sets: the set
/// owning the lowest differing element comes first, and a proper prefix
/// comes before its extensions.
fn cmp_block_sets_lex(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let diff = a ^ b;
    let low = diff & diff.wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Multiplicity map of the summand classes of a restricted permutation
/// module, together with the context needed to interpret it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    n: u64,
    p: u64,
    r: u64,
    rank: u32,
    block_count: u64,
    entries: BTreeMap<SummandSignature, BigUint>,
}

/// One serialized row of a decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionRow {
    pub signature: Vec<u32>,
    pub d: u32,
    pub dim: u64,
    pub mult: String,
    pub projective: bool,
}

impl Decomposition {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// Rank of the acting group; classes with d equal to it are projective.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of non-singleton blocks in the acting group.
    pub fn block_count(&self) -> u64 {
        self.block_count
    }

    pub fn entries(&self) -> &BTreeMap<SummandSignature, BigUint> {
        &self.entries
    }

    pub fn multiplicity(&self, sig: &SummandSignature) -> BigUint {
        self.entries.get(sig).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Total dimension sum(mult * p^d); must equal C(n, r).
    pub fn total_dimension(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for (sig, mult) in &self.entries {
            acc += mult * BigUint::from(sig.dimension(self.p));
        }
        acc
    }

    /// Rows sorted by (d, signature), multiplicities as decimal strings.
    pub fn rows(&self) -> Vec<DecompositionRow> {
        self.entries
            .iter()
            .map(|(sig, mult)| DecompositionRow {
                signature: sig.block_indices(),
                d: sig.d(),
                dim: sig.dimension(self.p),
                mult: mult.to_string(),
                projective: sig.is_projective(self.rank),
            })
            .collect()
    }
}

/// Signature of a tabloid under an elementary group: for each block, the
/// factor's orbit of the intersection contributes log_p(orbit) to d, and the
/// block joins the signature set when that contribution is positive.
pub fn signature_of(t: &Tabloid, group: &ElementaryGroup) -> SummandSignature {
    let p = group.p();
    let mut blocks = 0u64;
    let mut d = 0u32;
    for (i, block) in group.blocks().iter().enumerate() {
        let sub = (t.mask() & block.mask()) >> (block.start - 1);
        if sub == 0 {
            continue;
        }
        let translations = group.factor_translations(block);
        let stabilizer = translations
            .iter()
            .filter(|map| translate_local(sub, map) == sub)
            .count() as u64;
        // The stabilizer of a subset in a p-group has p-power order.
        let orbit = block.size / stabilizer;
        debug_assert_eq!(block.size % stabilizer, 0);
        let e = orbit_exponent(orbit, p);
        if e > 0 {
            blocks |= 1u64 << i;
            d += e;
        }
    }
    SummandSignature::new(blocks, d)
}

fn translate_local(sub: u64, map: &[u32]) -> u64 {
    let mut image = 0u64;
    let mut rest = sub;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        image |= 1u64 << map[bit as usize];
        rest &= rest - 1;
    }
    image
}

fn orbit_exponent(orbit: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut v = orbit;
    while v > 1 {
        debug_assert_eq!(v % p, 0, "orbit size must be a power of p");
        v /= p;
        e += 1;
    }
    e
}

fn check_budget(count: &BigUint, budget: u64) -> Result<u64> {
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::InstanceTooLarge {
            required: count.to_u128().unwrap_or(u128::MAX),
            budget,
        }),
    }
}

/// Decomposes by direct orbit enumeration: partitions the C(n, r) tabloids
/// into orbits of the group and adds one copy of each orbit's signature.
pub fn decompose_enumerated(
    pp: &PartitionPair,
    group: &ElementaryGroup,
    budget: u64,
) -> Result<Decomposition> {
    if group.n() != pp.n() {
        return Err(Error::InvalidPartition {
            reason: format!(
                "group degree {} does not match partition degree {}",
                group.n(),
                pp.n()
            ),
        });
    }
    let count = check_budget(&pp.tabloid_count(), budget)? as usize;
    let p = group.p();

    let mut masks: Vec<u64> = enumerate_tabloids(pp).map(|t| t.mask()).collect();
    debug_assert_eq!(masks.len(), count);
    masks.sort_unstable();
    let mut visited = vec![false; masks.len()];

    let mut entries: BTreeMap<SummandSignature, BigUint> = BTreeMap::new();
    let mut stack: Vec<u64> = Vec::new();
    for start in 0..masks.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        stack.push(masks[start]);
        let mut orbit_len = 0u64;
        while let Some(mask) = stack.pop() {
            orbit_len += 1;
            for gen in group.generators() {
                let image = group.apply_to_mask(gen, mask);
                let idx = masks.binary_search(&image).expect("orbit stays in range");
                if !visited[idx] {
                    visited[idx] = true;
                    stack.push(image);
                }
            }
        }
        let sig = signature_of(&Tabloid::from_mask(masks[start]), group);
        assert_eq!(
            orbit_len,
            p.pow(sig.d()),
            "orbit size must be p^d for its signature"
        );
        *entries.entry(sig).or_insert_with(BigUint::zero) += BigUint::one();
    }

    Ok(Decomposition {
        n: pp.n(),
        p,
        r: pp.r(),
        rank: group.rank(),
        block_count: group.blocks().len() as u64,
        entries,
    })
}

/// Per-subset multiplicities for the all-p-cycles group, indexed by the
/// signature size d = 0..=k. Multiplicity depends only on d, never on which
/// blocks, so this grouped form scales to every degree the crate accepts.
///
/// The empty signature collects C(k, q) C(a0, b0) tabloids (q full blocks
/// plus b0 fixed points). For d >= 1 a d-subset collects, for each number j
/// of part-covered p-multiples, C(k-d, q-j) ways to fully cover blocks
/// outside the subset times the bounded block sums over the subset, and the
/// orbit count divides by p^d exactly.
pub fn formula_multiplicities_by_size(pp: &PartitionPair, p: u64) -> Result<Vec<BigUint>> {
    let pd = pp.prime_data(p)?;
    let PrimeData { p, k, a0, q, b0 } = pd;
    let r = pp.r();
    let table = BlockSumTable::new(p, a0, k, r, true);
    let mut out = Vec::with_capacity(k as usize + 1);
    out.push(binom(k, q) * binom(a0, b0));
    for d in 1..=k {
        let mut raw = BigUint::zero();
        for j in 0..=d.min(q) {
            let total = j * p + b0;
            let coefficient = binom_i((k - d) as i64, (q - j) as i64);
            if coefficient.is_zero() {
                continue;
            }
            let weights = table.weights(d, total) + table.weights_with_tail(d, total);
            raw += coefficient * weights;
        }
        let divisor = BigUint::from(p).pow(d as u32);
        let (mult, remainder) = raw.div_rem(&divisor);
        if !remainder.is_zero() {
            return Err(Error::NonIntegralMultiplicity {
                d: d as u32,
                numerator: raw.to_string(),
                divisor: divisor.to_string(),
            });
        }
        out.push(mult);
    }
    Ok(out)
}

/// Decomposes by the closed multiplicity formulas, for the all-p-cycles
/// group only. Materializes one entry per block subset with a nonzero
/// multiplicity, so it is limited to k <= FORMULA_SUBSET_CAP blocks; the
/// grouped route has no such limit.
pub fn decompose_formula(pp: &PartitionPair, p: u64) -> Result<Decomposition> {
    let pd = pp.prime_data(p)?;
    let k = pd.k;
    if k > FORMULA_SUBSET_CAP {
        return Err(Error::InstanceTooLarge {
            required: 1u128 << k.min(127),
            budget: 1u64 << FORMULA_SUBSET_CAP,
        });
    }
    let by_size = formula_multiplicities_by_size(pp, p)?;
    let mut entries = BTreeMap::new();
    for (d, mult) in by_size.iter().enumerate() {
        if mult.is_zero() {
            continue;
        }
        for blocks in subsets_of_size(k, d as u32) {
            entries.insert(SummandSignature::from_block_set(blocks), mult.clone());
        }
    }
    Ok(Decomposition {
        n: pp.n(),
        p,
        r: pp.r(),
        rank: k as u32,
        block_count: k,
        entries,
    })
}

/// All bitmasks over k bits with exactly `size` bits set.
fn subsets_of_size(k: u64, size: u32) -> Vec<u64> {
    let mut out = Vec::new();
    if size as u64 > k {
        return out;
    }
    if size == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack, bounded by 2^k.
    let limit = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut v = (1u64 << size) - 1;
    while v <= limit {
        out.push(v);
        let c = v & v.wrapping_neg();
        let rr = v + c;
        if rr == 0 {
            break;
        }
        v = (((v ^ rr) >> 2) / c) | rr;
    }
    out
}

/// Number of tabloids fixed by (a generator of) an order-p subgroup.
///
/// Enumerates directly when C(n, r) fits the budget. Beyond the budget the
/// count is still available in closed form for a coordinate line of the
/// all-p-cycles group, where the generator is a single p-cycle: a fixed
/// tabloid either avoids that block or contains it, giving
/// C(n-p, r) + C(n-p, r-p).
pub fn fixed_count(
    group: &ElementaryGroup,
    line: &SubgroupOrderP,
    pp: &PartitionPair,
    budget: u64,
) -> Result<BigUint> {
    let n = pp.n();
    let r = pp.r();
    let count = pp.tabloid_count();
    if check_budget(&count, budget).is_ok() {
        let perm = group.permutation_of(&line.generator());
        let mut fixed = BigUint::zero();
        for t in enumerate_tabloids(pp) {
            if group.apply_to_mask(&perm, t.mask()) == t.mask() {
                fixed += BigUint::one();
            }
        }
        return Ok(fixed);
    }
    if group.orbit_type().is_p_cycles() && line.is_coordinate() {
        let p = group.p();
        return Ok(binom(n - p, r) + binom_i((n - p) as i64, r as i64 - p as i64));
    }
    Err(Error::InstanceTooLarge {
        required: count.to_u128().unwrap_or(u128::MAX),
        budget,
    })
}
