//! Exact big-integer combinatorics: binomial coefficients, constrained
//! composition enumeration, and the weighted block sums
//! `sum over mu |= r of C(p,mu_1)...C(p,mu_d)` that drive every multiplicity
//! formula in the crate.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Binomial coefficient C(a, b) over arbitrary-precision integers.
///
/// Returns 0 outside the triangle (b > a), matching the convention used by
/// every counting formula here: vanishing coefficients silently drop terms.
pub fn binom(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut result = BigUint::one();
    for i in 0..b {
        result = result * (a - i) / (i + 1);
    }
    result
}

/// Signed-argument variant: zero whenever either argument is negative.
pub fn binom_i(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 {
        return BigUint::zero();
    }
    binom(a as u64, b as u64)
}

/// Multinomial coefficient m! / (parts_1! ... parts_w!), with m = sum(parts).
pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut result = BigUint::one();
    let mut seen = 0u64;
    for &part in parts {
        for i in 1..=part {
            result = result * (seen + i) / i;
        }
        seen += part;
    }
    result
}

/// Trial-division primality test. The degrees in play are tiny, so no
/// cleverness is warranted.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An ordered tuple of non-negative integers with a fixed sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Enumerates the compositions of `total` into exactly `d` parts, in
/// lexicographic order.
///
/// `positive` requires every part to be at least 1; `bound` (when present)
/// requires every part to be strictly below the bound. The stream is finite
/// and duplicate-free; when no composition satisfies the constraints it is
/// empty.
pub fn compositions(
    total: u64,
    d: u64,
    positive: bool,
    bound: Option<u64>,
) -> impl Iterator<Item = Composition> {
    let min_part = if positive { 1 } else { 0 };
    let max_part = bound.map(|b| b.saturating_sub(1)).unwrap_or(total);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d as usize);
    collect_compositions(total, d, min_part, max_part, &mut prefix, &mut out);
    out.into_iter()
}

fn collect_compositions(
    remaining: u64,
    slots: u64,
    min_part: u64,
    max_part: u64,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Composition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(Composition {
                parts: prefix.clone(),
            });
        }
        return;
    }
    // Feasibility window for the next part given what the rest can absorb.
    let rest_min = min_part.saturating_mul(slots - 1);
    let rest_max = max_part.saturating_mul(slots - 1);
    let lo = min_part.max(remaining.saturating_sub(rest_max));
    let hi = max_part.min(remaining.saturating_sub(rest_min));
    if lo > hi {
        return;
    }
    for part in lo..=hi {
        prefix.push(part);
        collect_compositions(remaining - part, slots - 1, min_part, max_part, prefix, out);
        prefix.pop();
    }
}

/// Weighted composition sums, tabulated by recurrence.
///
/// `weights(d, t)` is the sum over compositions mu of `t` into exactly `d`
/// positive parts (each part < p when `bounded`) of the product
/// C(p, mu_1) ... C(p, mu_d). The tail variant appends one more positive part
/// scored against C(a0, .) instead of C(p, .).
///
/// A single table serves every (d, t) pair needed by a decomposition, which
/// keeps the formula route polynomial in n.
pub struct BlockSumTable {
    p: u64,
    a0: u64,
    bounded: bool,
    /// rows[d][t] = weighted count for d block parts summing to t.
    rows: Vec<Vec<BigUint>>,
}

impl BlockSumTable {
    pub fn new(p: u64, a0: u64, max_d: u64, max_total: u64, bounded: bool) -> Self {
        let cap = if bounded { p - 1 } else { p };
        let width = max_total as usize + 1;
        let mut rows = Vec::with_capacity(max_d as usize + 1);
        let mut base = vec![BigUint::zero(); width];
        base[0] = BigUint::one();
        rows.push(base);
        for d in 1..=max_d as usize {
            let mut row = vec![BigUint::zero(); width];
            for t in 0..width as u64 {
                let mut acc = BigUint::zero();
                for m in 1..=cap.min(t) {
                    acc += binom(p, m) * &rows[d - 1][(t - m) as usize];
                }
                row[t as usize] = acc;
            }
            rows.push(row);
        }
        BlockSumTable {
            p,
            a0,
            bounded,
            rows,
        }
    }

    /// Sum over compositions of `total` into exactly `d` positive block parts.
    pub fn weights(&self, d: u64, total: u64) -> &BigUint {
        &self.rows[d as usize][total as usize]
    }

    /// Same, with one extra positive tail part scored against C(a0, .).
    pub fn weights_with_tail(&self, d: u64, total: u64) -> BigUint {
        let tail_cap = if self.bounded {
            self.a0.min(self.p - 1)
        } else {
            self.a0
        };
        let mut acc = BigUint::zero();
        for m in 1..=tail_cap.min(total) {
            acc += binom(self.a0, m) * self.weights(d, total - m);
        }
        acc
    }
}

/// Sum over compositions mu of `total` into exactly `d` positive parts of
/// C(p, mu_1) ... C(p, mu_d), with an optional (d+1)-th positive tail part
/// drawn against C(a0, .), and an optional strict bound of p on every part.
pub fn block_sum(p: u64, a0: u64, total: u64, d: u64, with_tail: bool, bounded: bool) -> BigUint {
    let table = BlockSumTable::new(p, a0, d, total, bounded);
    if with_tail {
        table.weights_with_tail(d, total)
    } else {
        table.weights(d, total).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binom_base_cases() {
        assert_eq!(binom(0, 0), u(1));
        assert_eq!(binom(5, 2), u(10));
        assert_eq!(binom(3, 5), u(0));
        assert_eq!(binom_i(-1, 0), u(0));
        assert_eq!(binom_i(4, -2), u(0));
    }

    #[test]
    fn binom_large_values_are_exact() {
        // 64 choose 32, checked against an independent source.
        assert_eq!(
            binom(64, 32).to_string(),
            "1832624140942590534"
        );
    }

    #[test]
    fn multinomial_matches_binomial_chain() {
        assert_eq!(multinomial(&[2, 1]), u(3));
        assert_eq!(multinomial(&[3, 3, 2]), binom(8, 3) * binom(5, 3));
        assert_eq!(multinomial(&[]), u(1));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&x| is_prime(x)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn compositions_examples() {
        let c: Vec<Vec<u64>> = compositions(2, 2, true, Some(3))
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(c, vec![vec![1, 1]]);

        let c: Vec<Vec<u64>> = compositions(3, 2, true, None)
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(c, vec![vec![1, 2], vec![2, 1]]);

        let c: Vec<Vec<u64>> = compositions(4, 2, true, Some(3))
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(c, vec![vec![2, 2]]);
    }

    #[test]
    fn compositions_degenerate_cases() {
        // No positive composition of 0 into one or more parts.
        assert_eq!(compositions(0, 1, true, None).count(), 0);
        assert_eq!(compositions(0, 3, true, None).count(), 0);
        // Exactly one empty composition of 0 into 0 parts.
        assert_eq!(compositions(0, 0, true, None).count(), 1);
        assert_eq!(compositions(1, 0, true, None).count(), 0);
        // Non-negative parts allowed: count is C(total + d - 1, d - 1).
        assert_eq!(compositions(4, 3, false, None).count(), 15);
    }

    #[test]
    fn compositions_are_lexicographic_and_distinct() {
        let all: Vec<Composition> = compositions(7, 3, true, Some(5)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
        assert!(all.iter().all(|c| c.total() == 7));
        assert!(all.iter().all(|c| c.parts().iter().all(|&m| (1..5).contains(&m))));
    }

    #[test]
    fn block_sum_examples() {
        // Only composition (1,1): C(2,1)^2 = 4.
        assert_eq!(block_sum(2, 0, 2, 2, false, false), u(4));
        // mu = (1,1): C(3,1) * C(1,1) = 3.
        assert_eq!(block_sum(3, 1, 2, 1, true, false), u(3));
        // No positive composition of 0.
        assert_eq!(block_sum(2, 0, 0, 1, false, false), u(0));
    }

    /// Independent oracle: evaluate the block sum by walking the composition
    /// stream directly.
    fn block_sum_by_enumeration(
        p: u64,
        a0: u64,
        total: u64,
        d: u64,
        with_tail: bool,
        bounded: bool,
    ) -> BigUint {
        let bound = if bounded { Some(p) } else { None };
        let slots = if with_tail { d + 1 } else { d };
        let mut acc = BigUint::zero();
        for c in compositions(total, slots, true, bound) {
            let mut term = BigUint::one();
            for (i, &m) in c.parts().iter().enumerate() {
                let from = if with_tail && i as u64 == d { a0 } else { p };
                term *= binom(from, m);
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn block_sum_matches_enumeration() {
        for p in [2u64, 3, 5] {
            for a0 in 0..p {
                for d in 1..=4u64 {
                    for total in 0..=(d * p + a0).min(14) {
                        for with_tail in [false, true] {
                            for bounded in [false, true] {
                                assert_eq!(
                                    block_sum(p, a0, total, d, with_tail, bounded),
                                    block_sum_by_enumeration(p, a0, total, d, with_tail, bounded),
                                    "p={p} a0={a0} total={total} d={d} tail={with_tail} bounded={bounded}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounded_block_sum_excludes_full_parts() {
        // The bounded sum equals the unbounded sum minus the contribution of
        // compositions containing a part equal to p.
        for p in [2u64, 3, 5] {
            for d in 1..=3u64 {
                for total in 0..=(d * p).min(12) {
                    let unbounded = block_sum(p, 0, total, d, false, false);
                    let bounded = block_sum(p, 0, total, d, false, true);
                    let mut with_full_part = BigUint::zero();
                    for c in compositions(total, d, true, None) {
                        if c.parts().contains(&p) {
                            let mut term = BigUint::one();
                            for &m in c.parts() {
                                term *= binom(p, m);
                            }
                            with_full_part += term;
                        }
                    }
                    assert_eq!(bounded + with_full_part, unbounded, "p={p} d={d} total={total}");
                }
            }
        }
    }
}
