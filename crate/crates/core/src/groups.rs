//! Maximal elementary abelian p-subgroups of the symmetric group, realized
//! as concrete permutation groups.
//!
//! A subgroup is described by its orbit type: a0 fixed points plus i_j
//! regular factors of rank j acting on blocks of size p^j. The rank-j factor
//! on a block is the translation action of (Z/p)^j on itself; its j
//! generators each add 1 to one base-p digit of the block-local index.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::combinatorics::is_prime;
use crate::error::{Error, Result};

/// Largest degree the crate handles; tabloids are stored as 64-bit masks.
pub const MAX_DEGREE: u64 = 64;

/// A conjugacy class of maximal elementary abelian p-subgroups of S_n,
/// encoded by factor multiplicities: n = a0 + sum_j counts[j] * p^j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OrbitType {
    pub p: u64,
    pub n: u64,
    /// Fixed-point count, always n mod p.
    pub a0: u64,
    /// counts[j] = number of rank-j regular factors (key j >= 1).
    pub counts: BTreeMap<u32, u64>,
}

impl OrbitType {
    /// The all-p-cycles type: floor(n/p) factors of rank 1. This is the type
    /// of highest block count and the reference point for the invariant.
    pub fn p_cycles(n: u64, p: u64) -> Result<OrbitType> {
        check_prime_degree(n, p)?;
        let mut counts = BTreeMap::new();
        counts.insert(1, n / p);
        Ok(OrbitType {
            p,
            n,
            a0: n % p,
            counts,
        })
    }

    pub fn is_p_cycles(&self) -> bool {
        self.counts.keys().all(|&j| j == 1)
    }

    /// Total rank: sum_j counts[j] * j.
    pub fn rank(&self) -> u32 {
        self.counts
            .iter()
            .map(|(&j, &i)| j as u64 * i)
            .sum::<u64>() as u32
    }

    /// Number of non-singleton blocks.
    pub fn block_count(&self) -> u64 {
        self.counts.values().sum()
    }

    fn validate(&self) -> Result<()> {
        check_prime_degree(self.n, self.p)?;
        let mut covered = self.a0;
        for (&j, &i) in &self.counts {
            covered += i * self.p.pow(j);
        }
        if self.a0 != self.n % self.p || covered != self.n {
            return Err(Error::InvalidPartition {
                reason: format!(
                    "orbit type does not decompose n = {}: a0 = {}, counts = {:?}",
                    self.n, self.a0, self.counts
                ),
            });
        }
        if self.rank() < 1 {
            return Err(Error::InvalidPartition {
                reason: "orbit type must have rank at least 1".to_string(),
            });
        }
        Ok(())
    }
}

fn check_prime_degree(n: u64, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    if p > n {
        return Err(Error::PrimeTooLarge { p, n });
    }
    if n > MAX_DEGREE {
        return Err(Error::InvalidPartition {
            reason: format!("degree n = {n} exceeds the supported maximum {MAX_DEGREE}"),
        });
    }
    Ok(())
}

/// Enumerates every orbit type for S_n at the prime p: all factor-count
/// tuples with a0 + sum_j i_j p^j = n, a0 = n mod p. The list is complete,
/// duplicate-free, and sorted by the count map.
pub fn enumerate_orbit_types(n: u64, p: u64) -> Result<Vec<OrbitType>> {
    check_prime_degree(n, p)?;
    let a0 = n % p;
    // Split n - a0 = kp, i.e. distribute k among weights p^(j-1).
    let k = n / p;
    let mut weights = Vec::new();
    let mut w = 1u64;
    let mut j = 1u32;
    while w <= k {
        weights.push((j, w));
        match w.checked_mul(p) {
            Some(next) => w = next,
            None => break,
        }
        j += 1;
    }
    let mut out = Vec::new();
    let mut counts = BTreeMap::new();
    distribute(k, &weights, &mut counts, &mut out, n, p, a0);
    out.sort_by(|a, b| a.counts.cmp(&b.counts));
    Ok(out)
}

fn distribute(
    remaining: u64,
    weights: &[(u32, u64)],
    counts: &mut BTreeMap<u32, u64>,
    out: &mut Vec<OrbitType>,
    n: u64,
    p: u64,
    a0: u64,
) {
    match weights.split_first() {
        None => {
            if remaining == 0 && !counts.is_empty() {
                out.push(OrbitType {
                    p,
                    n,
                    a0,
                    counts: counts.clone(),
                });
            }
        }
        Some((&(j, w), rest)) => {
            for i in 0..=(remaining / w) {
                if i > 0 {
                    counts.insert(j, i);
                }
                distribute(remaining - i * w, rest, counts, out, n, p, a0);
                counts.remove(&j);
            }
        }
    }
}

/// One non-singleton block of an elementary group: p^exponent consecutive
/// points acted on regularly by a rank-`exponent` factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// First point of the block, 1-based.
    pub start: u64,
    /// Block size p^exponent.
    pub size: u64,
    /// Rank of the factor acting on this block.
    pub exponent: u32,
    /// Index of the factor's first generator coordinate.
    pub coord_offset: u32,
}

impl Block {
    pub fn contains(&self, point: u64) -> bool {
        point >= self.start && point < self.start + self.size
    }

    /// Points of the block as a bitmask (bit i = point i+1).
    pub fn mask(&self) -> u64 {
        let ones = if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        };
        ones << (self.start - 1)
    }
}

/// A concrete maximal elementary abelian p-subgroup of S_n: commuting
/// order-p generators acting regularly on consecutive blocks, with a0 fixed
/// points at the end.
#[derive(Debug, Clone)]
pub struct ElementaryGroup {
    orbit_type: OrbitType,
    blocks: Vec<Block>,
    /// generators[c][x] = image of point x+1, stored 0-based.
    generators: Vec<Vec<u32>>,
}

/// A group element as an exponent vector over F_p, one coordinate per
/// generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupElement {
    pub exponents: Vec<u8>,
}

impl GroupElement {
    pub fn identity(rank: u32) -> GroupElement {
        GroupElement {
            exponents: vec![0; rank as usize],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }
}

/// An order-p subgroup, canonicalized as the line through an exponent vector
/// whose first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SubgroupOrderP {
    pub line: Vec<u8>,
}

impl SubgroupOrderP {
    /// Canonical generator of the subgroup.
    pub fn generator(&self) -> GroupElement {
        GroupElement {
            exponents: self.line.clone(),
        }
    }

    /// True when the exponent vector is supported on a single coordinate,
    /// i.e. the subgroup is generated by a power of one factor generator.
    pub fn is_coordinate(&self) -> bool {
        self.line.iter().filter(|&&e| e != 0).count() == 1
    }
}

/// Builds the concrete group for an orbit type. Blocks are laid out in
/// factor-rank order, rank-1 factors first, each taking the next p^j points;
/// for the all-p-cycles type this reproduces the generators
/// (1..p)(p+1..2p)... on the blocks {1..p}, {p+1..2p}, ...
pub fn build_group(orbit_type: &OrbitType) -> Result<ElementaryGroup> {
    orbit_type.validate()?;
    let n = orbit_type.n as usize;
    let p = orbit_type.p;
    let mut blocks = Vec::new();
    let mut generators: Vec<Vec<u32>> = Vec::new();
    let mut next_point = 1u64;
    let mut coord = 0u32;
    for (&j, &copies) in &orbit_type.counts {
        let size = p.pow(j);
        for _ in 0..copies {
            let block = Block {
                start: next_point,
                size,
                exponent: j,
                coord_offset: coord,
            };
            // Generator for digit l adds 1 (mod p) to digit l of the
            // block-local index written in base p.
            for digit in 0..j {
                let stride = p.pow(digit);
                let mut perm: Vec<u32> = (0..n as u32).collect();
                for local in 0..size {
                    let d = (local / stride) % p;
                    let image_local = if d == p - 1 {
                        local - d * stride
                    } else {
                        local + stride
                    };
                    perm[(block.start - 1 + local) as usize] =
                        (block.start - 1 + image_local) as u32;
                }
                generators.push(perm);
                coord += 1;
            }
            next_point += size;
            blocks.push(block);
        }
    }
    Ok(ElementaryGroup {
        orbit_type: orbit_type.clone(),
        blocks,
        generators,
    })
}

impl ElementaryGroup {
    pub fn orbit_type(&self) -> &OrbitType {
        &self.orbit_type
    }

    pub fn n(&self) -> u64 {
        self.orbit_type.n
    }

    pub fn p(&self) -> u64 {
        self.orbit_type.p
    }

    pub fn rank(&self) -> u32 {
        self.generators.len() as u32
    }

    /// Non-singleton blocks, in construction order.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The a0 fixed points, laid out after the blocks; together with the
    /// blocks they partition {1..n}.
    pub fn fixed_points(&self) -> impl Iterator<Item = u64> {
        let first = self
            .blocks
            .last()
            .map(|b| b.start + b.size)
            .unwrap_or(1);
        first..=self.n()
    }

    /// Generator permutations as 0-based point maps.
    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    /// Image of a 1-based point under a group element.
    pub fn apply(&self, g: &GroupElement, point: u64) -> u64 {
        debug_assert!(point >= 1 && point <= self.n());
        let mut x = (point - 1) as u32;
        for (c, &e) in g.exponents.iter().enumerate() {
            for _ in 0..e {
                x = self.generators[c][x as usize];
            }
        }
        (x + 1) as u64
    }

    /// The element as a full 0-based permutation vector.
    pub fn permutation_of(&self, g: &GroupElement) -> Vec<u32> {
        let n = self.n() as usize;
        let mut perm: Vec<u32> = (0..n as u32).collect();
        for (c, &e) in g.exponents.iter().enumerate() {
            for _ in 0..e {
                for slot in perm.iter_mut() {
                    *slot = self.generators[c][*slot as usize];
                }
            }
        }
        perm
    }

    /// Image of a point-set bitmask under a group element.
    pub fn apply_to_mask(&self, perm: &[u32], mask: u64) -> u64 {
        let mut image = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            image |= 1u64 << perm[bit as usize];
            rest &= rest - 1;
        }
        image
    }

    /// Streams the canonical order-p subgroups: exactly
    /// (p^rank - 1) / (p - 1) lines, duplicate-free, ordered by pivot
    /// coordinate and then by the free coordinates as a base-p counter.
    pub fn order_p_subgroups(&self) -> impl Iterator<Item = SubgroupOrderP> + '_ {
        let rank = self.rank() as usize;
        let p = self.p() as u8;
        LineIter {
            rank,
            p,
            pivot: 0,
            tail: vec![0; rank.saturating_sub(1)],
            done: rank == 0,
        }
    }

    /// Iterates every element of one factor as exponent vectors restricted to
    /// the factor's coordinates, applied to a block-local index.
    pub(crate) fn factor_translations(&self, block: &Block) -> Vec<Vec<u32>> {
        // Build the p^j translations of the block as local index maps.
        let p = self.p();
        let j = block.exponent;
        let size = block.size;
        let count = size; // p^j translations
        let mut maps = Vec::with_capacity(count as usize);
        for v in 0..count {
            // v encodes the translation digits in base p.
            let mut map = Vec::with_capacity(size as usize);
            for local in 0..size {
                let mut image = 0u64;
                let mut stride = 1u64;
                let mut lv = local;
                let mut vv = v;
                for _ in 0..j {
                    let d = (lv % p + vv % p) % p;
                    image += d * stride;
                    lv /= p;
                    vv /= p;
                    stride *= p;
                }
                map.push(image as u32);
            }
            maps.push(map);
        }
        maps
    }
}

struct LineIter {
    rank: usize,
    p: u8,
    pivot: usize,
    tail: Vec<u8>,
    done: bool,
}

impl Iterator for LineIter {
    type Item = SubgroupOrderP;

    fn next(&mut self) -> Option<SubgroupOrderP> {
        if self.done || self.pivot >= self.rank {
            return None;
        }
        let mut line = vec![0u8; self.rank];
        line[self.pivot] = 1;
        let free = self.rank - self.pivot - 1;
        line[self.pivot + 1..].copy_from_slice(&self.tail[..free]);
        // Advance the free coordinates as a base-p counter.
        let mut i = free;
        loop {
            if i == 0 {
                self.pivot += 1;
                let free = self.rank.saturating_sub(self.pivot + 1);
                self.tail[..free].iter_mut().for_each(|t| *t = 0);
                break;
            }
            i -= 1;
            if self.tail[i] + 1 < self.p {
                self.tail[i] += 1;
                self.tail[i + 1..free].iter_mut().for_each(|t| *t = 0);
                break;
            }
            self.tail[i] = 0;
        }
        Some(SubgroupOrderP { line })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(pairs: &[(u32, u64)]) -> BTreeMap<u32, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn orbit_type_enumeration_examples() {
        let types = enumerate_orbit_types(4, 2).unwrap();
        let got: Vec<_> = types.iter().map(|t| t.counts.clone()).collect();
        assert_eq!(got, vec![counts(&[(1, 2)]), counts(&[(2, 1)])]);

        let types = enumerate_orbit_types(5, 2).unwrap();
        assert!(types.iter().all(|t| t.a0 == 1));
        let got: Vec<_> = types.iter().map(|t| t.counts.clone()).collect();
        assert_eq!(got, vec![counts(&[(1, 2)]), counts(&[(2, 1)])]);

        let types = enumerate_orbit_types(3, 3).unwrap();
        let got: Vec<_> = types.iter().map(|t| t.counts.clone()).collect();
        assert_eq!(got, vec![counts(&[(1, 1)])]);
    }

    #[test]
    fn prime_validation() {
        assert!(matches!(
            enumerate_orbit_types(4, 5),
            Err(Error::PrimeTooLarge { .. })
        ));
        assert!(matches!(
            enumerate_orbit_types(8, 4),
            Err(Error::NotPrime { .. })
        ));
    }

    #[test]
    fn enumeration_includes_p_cycle_type_and_respects_rank_bound() {
        for p in [2u64, 3, 5] {
            for n in p..=16 {
                let types = enumerate_orbit_types(n, p).unwrap();
                let k = (n / p) as u32;
                assert!(types.iter().any(|t| t.is_p_cycles()));
                for t in &types {
                    assert!(t.rank() >= 1);
                    assert!(t.rank() <= k, "rank {} > k {} for {:?}", t.rank(), k, t);
                    // For p >= 3 only the all-p-cycles type attains rank k;
                    // for p = 2 a rank-2 factor uses exactly 2 points per
                    // rank, so mixed types attain it as well.
                    if p >= 3 && t.rank() == k {
                        assert!(t.is_p_cycles());
                    }
                }
                let p_cycles = types.iter().find(|t| t.is_p_cycles()).unwrap();
                assert_eq!(p_cycles.rank(), k);
            }
        }
    }

    #[test]
    fn p2_mixed_types_can_attain_full_rank() {
        let types = enumerate_orbit_types(6, 2).unwrap();
        let mixed = types
            .iter()
            .find(|t| t.counts == counts(&[(1, 1), (2, 1)]))
            .unwrap();
        assert_eq!(mixed.rank(), 3);
        assert!(!mixed.is_p_cycles());
    }

    #[test]
    fn p_cycle_group_has_the_expected_generators() {
        let t = OrbitType::p_cycles(4, 2).unwrap();
        let e = build_group(&t).unwrap();
        assert_eq!(e.rank(), 2);
        // (1 2) and (3 4) as 0-based maps.
        assert_eq!(e.generators()[0], vec![1, 0, 2, 3]);
        assert_eq!(e.generators()[1], vec![0, 1, 3, 2]);

        // A single 3-cycle for n = p = 3.
        let e = build_group(&OrbitType::p_cycles(3, 3).unwrap()).unwrap();
        assert_eq!(e.generators(), &[vec![1, 2, 0]]);
    }

    #[test]
    fn blocks_and_fixed_points_partition_the_degree() {
        for p in [2u64, 3, 5] {
            for n in p..=13 {
                for t in enumerate_orbit_types(n, p).unwrap() {
                    let e = build_group(&t).unwrap();
                    let mut covered: Vec<u64> = Vec::new();
                    for b in e.blocks() {
                        covered.extend(b.start..b.start + b.size);
                    }
                    let fixed: Vec<u64> = e.fixed_points().collect();
                    assert_eq!(fixed.len() as u64, t.a0);
                    covered.extend(&fixed);
                    covered.sort_unstable();
                    let everything: Vec<u64> = (1..=n).collect();
                    assert_eq!(covered, everything);
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let t = OrbitType::p_cycles(4, 2).unwrap();
        let e = build_group(&t).unwrap();
        let id = GroupElement::identity(2);
        for point in 1..=4 {
            assert_eq!(e.apply(&id, point), point);
        }
        let g10 = GroupElement { exponents: vec![1, 0] };
        assert_eq!(e.apply(&g10, 1), 2);
        let g11 = GroupElement { exponents: vec![1, 1] };
        assert_eq!(e.apply(&g11, 3), 4);
    }

    #[test]
    fn regular_rank2_factor_on_four_points() {
        let t = OrbitType {
            p: 2,
            n: 4,
            a0: 0,
            counts: counts(&[(2, 1)]),
        };
        let e = build_group(&t).unwrap();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.blocks().len(), 1);
        // Two commuting double transpositions acting regularly on {1,2,3,4}:
        // every non-identity element is fixed-point-free on the block.
        for g in [
            GroupElement { exponents: vec![1, 0] },
            GroupElement { exponents: vec![0, 1] },
            GroupElement { exponents: vec![1, 1] },
        ] {
            for point in 1..=4u64 {
                assert_ne!(e.apply(&g, point), point);
            }
        }
        // Regularity: the orbit of point 1 is the whole block.
        let mut orbit: Vec<u64> = Vec::new();
        for a in 0..2u8 {
            for b in 0..2u8 {
                orbit.push(e.apply(&GroupElement { exponents: vec![a, b] }, 1));
            }
        }
        orbit.sort();
        assert_eq!(orbit, vec![1, 2, 3, 4]);
    }

    #[test]
    fn generators_commute_and_have_order_p() {
        for p in [2u64, 3] {
            for n in p..=9 {
                for t in enumerate_orbit_types(n, p).unwrap() {
                    let e = build_group(&t).unwrap();
                    let gens = e.generators();
                    for a in gens {
                        // order p
                        let mut power: Vec<u32> = (0..n as u32).collect();
                        for _ in 0..p {
                            power = power.iter().map(|&x| a[x as usize]).collect();
                        }
                        let identity: Vec<u32> = (0..n as u32).collect();
                        assert_eq!(power, identity);
                        for b in gens {
                            let ab: Vec<u32> =
                                (0..n as u32).map(|x| b[a[x as usize] as usize]).collect();
                            let ba: Vec<u32> =
                                (0..n as u32).map(|x| a[b[x as usize] as usize]).collect();
                            assert_eq!(ab, ba);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn group_order_is_p_to_rank() {
        // Elements as exponent vectors are pairwise distinct permutations.
        for t in enumerate_orbit_types(6, 2).unwrap() {
            let e = build_group(&t).unwrap();
            let rank = e.rank();
            let mut seen = std::collections::BTreeSet::new();
            let count = (e.p() as u64).pow(rank);
            for code in 0..count {
                let mut exps = Vec::with_capacity(rank as usize);
                let mut c = code;
                for _ in 0..rank {
                    exps.push((c % e.p()) as u8);
                    c /= e.p();
                }
                seen.insert(e.permutation_of(&GroupElement { exponents: exps }));
            }
            assert_eq!(seen.len() as u64, count);
        }
    }

    #[test]
    fn declared_blocks_are_the_orbits() {
        for p in [2u64, 3] {
            for n in p..=9 {
                for t in enumerate_orbit_types(n, p).unwrap() {
                    let e = build_group(&t).unwrap();
                    let mut block_of_point = vec![None; n as usize];
                    for (i, b) in e.blocks().iter().enumerate() {
                        for point in b.start..b.start + b.size {
                            block_of_point[(point - 1) as usize] = Some(i);
                        }
                    }
                    for gen in e.generators() {
                        for x in 0..n as usize {
                            assert_eq!(
                                block_of_point[x], block_of_point[gen[x] as usize],
                                "generators must preserve blocks"
                            );
                        }
                    }
                    // Within a block, the orbit of the first point covers it.
                    for b in e.blocks() {
                        let mut reached = std::collections::BTreeSet::new();
                        let mut stack = vec![(b.start - 1) as u32];
                        reached.insert((b.start - 1) as u32);
                        while let Some(x) = stack.pop() {
                            for gen in e.generators() {
                                let y = gen[x as usize];
                                if reached.insert(y) {
                                    stack.push(y);
                                }
                            }
                        }
                        assert_eq!(reached.len() as u64, b.size);
                    }
                }
            }
        }
    }

    #[test]
    fn line_counts() {
        let e = build_group(&OrbitType::p_cycles(2, 2).unwrap()).unwrap();
        assert_eq!(e.order_p_subgroups().count(), 1);

        let e = build_group(&OrbitType::p_cycles(4, 2).unwrap()).unwrap();
        assert_eq!(e.order_p_subgroups().count(), 3);

        let e = build_group(&OrbitType::p_cycles(6, 3).unwrap()).unwrap();
        assert_eq!(e.order_p_subgroups().count(), 4);

        // rank 3 at p = 3: (27 - 1) / 2 = 13
        let e = build_group(&OrbitType::p_cycles(9, 3).unwrap()).unwrap();
        assert_eq!(e.order_p_subgroups().count(), 13);

        // rank 5 at p = 2 and rank 4 at p = 3.
        let e = build_group(&OrbitType::p_cycles(10, 2).unwrap()).unwrap();
        assert_eq!(e.order_p_subgroups().count(), 31);
        let e = build_group(&OrbitType::p_cycles(12, 3).unwrap()).unwrap();
        assert_eq!(e.order_p_subgroups().count(), 40);
    }

    #[test]
    fn lines_are_canonical_and_distinct() {
        let e = build_group(&OrbitType::p_cycles(9, 3).unwrap()).unwrap();
        let lines: Vec<_> = e.order_p_subgroups().collect();
        let mut dedup = lines.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(lines.len(), dedup.len());
        for line in &lines {
            let first = line.line.iter().find(|&&e| e != 0).unwrap();
            assert_eq!(*first, 1);
        }
    }

    #[test]
    fn orbit_type_serializes_with_string_count_keys() {
        let t = OrbitType {
            p: 2,
            n: 5,
            a0: 1,
            counts: counts(&[(1, 2)]),
        };
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"p":2,"n":5,"a0":1,"counts":{"1":2}}"#
        );
    }
}
