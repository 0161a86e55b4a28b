//! Executable forms of the binomial identities behind the multiplicity and
//! invariant formulas: constrained-composition sums on one side, closed
//! inclusion-exclusion sums on the other.
//!
//! Every identity is evaluated by two independent code paths. The left-hand
//! side walks the composition stream and folds binomial products; the
//! right-hand side evaluates the closed form. No identity is "verified" by
//! computing one formula twice.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::combinatorics::{binom, binom_i, compositions, BlockSumTable};
use crate::error::{Error, Result};

/// A named identity instance with its parameters bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    /// sum_i C(r,i) C(s,n-i) = C(r+s,n)
    ChuVandermonde { r: u64, s: u64, n: u64 },
    /// sum over compositions of r into d non-negative parts of prod C(p,mu_i)
    /// = C(dp, r)
    UnconstrainedParts { p: u64, d: u64, r: u64 },
    /// sum over compositions of r into d positive parts of prod C(p,mu_i)
    /// = sum_i (-1)^i C(d,i) C((d-i)p, r)
    IntoDParts { p: u64, d: u64, r: u64 },
    /// tail variant: d positive parts against C(p,.) plus one positive part
    /// against C(a0,.)
    IntoDPlusOneParts { p: u64, a0: u64, d: u64, r: u64 },
    /// sum of the two previous left-hand sides
    /// = sum_i (-1)^i C(d,i) C((d-i)p + a0, r)
    AddedParts { p: u64, a0: u64, d: u64, r: u64 },
    /// the combined sum with every part < p, total jp + b0, against a double
    /// inclusion-exclusion closed form
    BoundedParts { p: u64, a0: u64, d: u64, j: u64, b0: u64 },
    /// sum_i (-1)^i C(n,i) C(n-i,m) = [m = n]
    DeltaSum { n: u64, m: u64 },
    /// (-1)^m sum_{i=m}^{k-1} (-1)^i C(k-1,i) C(i,m)
    ///   sum_{j=0}^{i-m} C(i-m,j) C(k-i, r-j) = [m = k-1 and r <= 1]
    AlternatingCoefficient { k: u64, m: u64, r: u64 },
    /// the r = p invariant evaluation: the full block-sum expansion equals
    /// 1 + C((k-1)p + a0, p)
    GammaCaseEqual { p: u64, k: u64, a0: u64 },
    /// the r < p invariant evaluation: equals C((k-1)p + a0, r)
    GammaCaseLess { p: u64, k: u64, a0: u64, r: u64 },
    /// the r > p invariant evaluation: equals
    /// C((k-1)p + a0, qp + b0) + C((k-1)p + a0, (q-1)p + b0)
    GammaCaseGreater { p: u64, k: u64, a0: u64, q: u64, b0: u64 },
}

/// Result of evaluating both sides of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl IdentityCheck {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::ChuVandermonde { .. } => "a1-chu-vandermonde",
            Identity::UnconstrainedParts { .. } => "a2-unconstrained-parts",
            Identity::IntoDParts { .. } => "a3-into-d-parts",
            Identity::IntoDPlusOneParts { .. } => "a4-into-d-plus-one-parts",
            Identity::AddedParts { .. } => "a5-added-parts",
            Identity::BoundedParts { .. } => "a6-bounded-parts",
            Identity::DeltaSum { .. } => "a7-delta",
            Identity::AlternatingCoefficient { .. } => "a8-alternating-coefficient",
            Identity::GammaCaseEqual { .. } => "t1-gamma-r-equals-p",
            Identity::GammaCaseLess { .. } => "t2-gamma-r-less-than-p",
            Identity::GammaCaseGreater { .. } => "t3-gamma-r-greater-than-p",
        }
    }

    /// Parameters as a name -> value map, for reporting.
    pub fn params(&self) -> BTreeMap<&'static str, u64> {
        let mut m = BTreeMap::new();
        match *self {
            Identity::ChuVandermonde { r, s, n } => {
                m.insert("r", r);
                m.insert("s", s);
                m.insert("n", n);
            }
            Identity::UnconstrainedParts { p, d, r } | Identity::IntoDParts { p, d, r } => {
                m.insert("p", p);
                m.insert("d", d);
                m.insert("r", r);
            }
            Identity::IntoDPlusOneParts { p, a0, d, r } | Identity::AddedParts { p, a0, d, r } => {
                m.insert("p", p);
                m.insert("a0", a0);
                m.insert("d", d);
                m.insert("r", r);
            }
            Identity::BoundedParts { p, a0, d, j, b0 } => {
                m.insert("p", p);
                m.insert("a0", a0);
                m.insert("d", d);
                m.insert("j", j);
                m.insert("b0", b0);
            }
            Identity::DeltaSum { n, m: mm } => {
                m.insert("n", n);
                m.insert("m", mm);
            }
            Identity::AlternatingCoefficient { k, m: mm, r } => {
                m.insert("k", k);
                m.insert("m", mm);
                m.insert("r", r);
            }
            Identity::GammaCaseEqual { p, k, a0 } => {
                m.insert("p", p);
                m.insert("k", k);
                m.insert("a0", a0);
            }
            Identity::GammaCaseLess { p, k, a0, r } => {
                m.insert("p", p);
                m.insert("k", k);
                m.insert("a0", a0);
                m.insert("r", r);
            }
            Identity::GammaCaseGreater { p, k, a0, q, b0 } => {
                m.insert("p", p);
                m.insert("k", k);
                m.insert("a0", a0);
                m.insert("q", q);
                m.insert("b0", b0);
            }
        }
        m
    }

    /// Builds an identity from its name and a parameter map. Names are
    /// case-insensitive.
    pub fn parse(name: &str, params: &BTreeMap<String, u64>) -> Result<Identity> {
        let get = |key: &str| -> Result<u64> {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::ParamsOutOfDomain(format!("missing parameter `{key}`")))
        };
        let id = match name.to_ascii_lowercase().as_str() {
            "a1-chu-vandermonde" => Identity::ChuVandermonde {
                r: get("r")?,
                s: get("s")?,
                n: get("n")?,
            },
            "a2-unconstrained-parts" => Identity::UnconstrainedParts {
                p: get("p")?,
                d: get("d")?,
                r: get("r")?,
            },
            "a3-into-d-parts" => Identity::IntoDParts {
                p: get("p")?,
                d: get("d")?,
                r: get("r")?,
            },
            "a4-into-d-plus-one-parts" => Identity::IntoDPlusOneParts {
                p: get("p")?,
                a0: get("a0")?,
                d: get("d")?,
                r: get("r")?,
            },
            "a5-added-parts" => Identity::AddedParts {
                p: get("p")?,
                a0: get("a0")?,
                d: get("d")?,
                r: get("r")?,
            },
            "a6-bounded-parts" => Identity::BoundedParts {
                p: get("p")?,
                a0: get("a0")?,
                d: get("d")?,
                j: get("j")?,
                b0: get("b0")?,
            },
            "a7-delta" => Identity::DeltaSum {
                n: get("n")?,
                m: get("m")?,
            },
            "a8-alternating-coefficient" => Identity::AlternatingCoefficient {
                k: get("k")?,
                m: get("m")?,
                r: get("r")?,
            },
            "t1-gamma-r-equals-p" => Identity::GammaCaseEqual {
                p: get("p")?,
                k: get("k")?,
                a0: get("a0")?,
            },
            "t2-gamma-r-less-than-p" => Identity::GammaCaseLess {
                p: get("p")?,
                k: get("k")?,
                a0: get("a0")?,
                r: get("r")?,
            },
            "t3-gamma-r-greater-than-p" => Identity::GammaCaseGreater {
                p: get("p")?,
                k: get("k")?,
                a0: get("a0")?,
                q: get("q")?,
                b0: get("b0")?,
            },
            other => return Err(Error::UnknownIdentity(other.to_string())),
        };
        Ok(id)
    }

    fn check_domain(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ParamsOutOfDomain(msg));
        match *self {
            Identity::ChuVandermonde { .. }
            | Identity::DeltaSum { .. } => Ok(()),
            Identity::UnconstrainedParts { p, d, .. } | Identity::IntoDParts { p, d, .. } => {
                if p < 1 {
                    return fail("p must be at least 1".into());
                }
                if d < 1 {
                    return fail("d must be at least 1".into());
                }
                Ok(())
            }
            Identity::IntoDPlusOneParts { p, a0, d, .. }
            | Identity::AddedParts { p, a0, d, .. } => {
                if p < 1 || d < 1 {
                    return fail("p and d must be at least 1".into());
                }
                if a0 >= p {
                    return fail(format!("a0 = {a0} must satisfy 0 <= a0 < p = {p}"));
                }
                Ok(())
            }
            Identity::BoundedParts { p, a0, d, j, b0 } => {
                if p < 2 || d < 1 {
                    return fail("p must be at least 2 and d at least 1".into());
                }
                if a0 >= p || b0 >= p {
                    return fail(format!("a0 = {a0} and b0 = {b0} must be below p = {p}"));
                }
                if j > d {
                    return fail(format!("j = {j} must satisfy 0 <= j <= d = {d}"));
                }
                Ok(())
            }
            Identity::AlternatingCoefficient { k, .. } => {
                if k < 1 {
                    return fail("k must be at least 1".into());
                }
                Ok(())
            }
            Identity::GammaCaseEqual { p, k, a0 } => {
                if p < 2 || k < 1 {
                    return fail("p must be at least 2 and k at least 1".into());
                }
                if a0 >= p {
                    return fail(format!("a0 = {a0} must satisfy 0 <= a0 < p = {p}"));
                }
                Ok(())
            }
            Identity::GammaCaseLess { p, k, a0, r } => {
                if p < 2 || k < 1 {
                    return fail("p must be at least 2 and k at least 1".into());
                }
                if a0 >= p {
                    return fail(format!("a0 = {a0} must satisfy 0 <= a0 < p = {p}"));
                }
                if r >= p {
                    return fail(format!("r = {r} must be below p = {p}"));
                }
                Ok(())
            }
            Identity::GammaCaseGreater { p, k, a0, q, b0 } => {
                if p < 2 || k < 1 {
                    return fail("p must be at least 2 and k at least 1".into());
                }
                if a0 >= p || b0 >= p {
                    return fail(format!("a0 = {a0} and b0 = {b0} must be below p = {p}"));
                }
                if q < 1 || (q == 1 && b0 == 0) {
                    return fail("r = qp + b0 must exceed p".into());
                }
                Ok(())
            }
        }
    }

    /// Evaluates both sides. Errors if the parameters violate the identity's
    /// hypotheses.
    pub fn verify(&self) -> Result<IdentityCheck> {
        self.check_domain()?;
        let (lhs, rhs) = match *self {
            Identity::ChuVandermonde { r, s, n } => {
                let mut lhs = BigUint::zero();
                for i in 0..=n {
                    lhs += binom(r, i) * binom(s, n - i);
                }
                (BigInt::from(lhs), BigInt::from(binom(r + s, n)))
            }
            Identity::UnconstrainedParts { p, d, r } => {
                let lhs = part_product_sum(r, d, p, 0, false, false, false);
                (BigInt::from(lhs), BigInt::from(binom(d * p, r)))
            }
            Identity::IntoDParts { p, d, r } => {
                let lhs = part_product_sum(r, d, p, 0, true, false, false);
                let rhs =
                    alternating_sum(d, |i| BigInt::from(binom_i(((d - i) * p) as i64, r as i64)));
                (BigInt::from(lhs), rhs)
            }
            Identity::IntoDPlusOneParts { p, a0, d, r } => {
                let lhs = part_product_sum(r, d, p, a0, true, true, false);
                let rhs = alternating_sum(d, |i| {
                    let rows = ((d - i) * p + a0) as i64;
                    let no_tail = ((d - i) * p) as i64;
                    BigInt::from(binom_i(rows, r as i64)) - BigInt::from(binom_i(no_tail, r as i64))
                });
                (BigInt::from(lhs), rhs)
            }
            Identity::AddedParts { p, a0, d, r } => {
                let lhs = part_product_sum(r, d, p, 0, true, false, false)
                    + part_product_sum(r, d, p, a0, true, true, false);
                let rhs = alternating_sum(d, |i| {
                    BigInt::from(binom_i(((d - i) * p + a0) as i64, r as i64))
                });
                (BigInt::from(lhs), rhs)
            }
            Identity::BoundedParts { p, a0, d, j, b0 } => {
                let total = j * p + b0;
                let lhs = part_product_sum(total, d, p, 0, true, false, true)
                    + part_product_sum(total, d, p, a0, true, true, true);
                let mut rhs = BigInt::zero();
                for h in 0..=j {
                    let outer = BigInt::from(binom(d, h)) * sign(h);
                    let inner = alternating_sum(d - h, |i| {
                        BigInt::from(binom_i(
                            ((d - h - i) * p + a0) as i64,
                            ((j - h) * p + b0) as i64,
                        ))
                    });
                    rhs += outer * inner;
                }
                (BigInt::from(lhs), rhs)
            }
            Identity::DeltaSum { n, m } => {
                let mut lhs = BigInt::zero();
                for i in 0..=n {
                    lhs += sign(i) * BigInt::from(binom(n, i) * binom(n - i, m));
                }
                let rhs = if m == n { BigInt::one() } else { BigInt::zero() };
                (lhs, rhs)
            }
            Identity::AlternatingCoefficient { k, m, r } => {
                let mut lhs = BigInt::zero();
                for i in m..k {
                    let mut inner = BigUint::zero();
                    for j in 0..=(i - m) {
                        inner += binom(i - m, j) * binom_i((k - i) as i64, r as i64 - j as i64);
                    }
                    lhs += sign(i) * BigInt::from(binom(k - 1, i) * binom(i, m) * inner);
                }
                lhs *= sign(m);
                let rhs = if m == k - 1 && r <= 1 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                (lhs, rhs)
            }
            Identity::GammaCaseEqual { p, k, a0 } => {
                // The d = 1 term has no part-only sum: a single fully used
                // block contributes to the fixed classes, not here.
                let table = BlockSumTable::new(p, a0, k.saturating_sub(1), p, false);
                let mut lhs = BigUint::from(k);
                if k >= 2 {
                    lhs += BigUint::from(k - 1) * table.weights_with_tail(1, p);
                }
                for d in 2..k {
                    let inner = table.weights(d, p) + table.weights_with_tail(d, p);
                    lhs += binom(k - 1, d) * inner;
                }
                let rhs = BigInt::one() + BigInt::from(binom((k - 1) * p + a0, p));
                (BigInt::from(lhs), rhs)
            }
            Identity::GammaCaseLess { p, k, a0, r } => {
                let table = BlockSumTable::new(p, a0, k.saturating_sub(1), r, false);
                let mut lhs = binom(a0, r);
                for d in 1..k {
                    let inner = table.weights(d, r) + table.weights_with_tail(d, r);
                    lhs += binom(k - 1, d) * inner;
                }
                let rhs = BigInt::from(binom((k - 1) * p + a0, r));
                (BigInt::from(lhs), rhs)
            }
            Identity::GammaCaseGreater { p, k, a0, q, b0 } => {
                let table = BlockSumTable::new(p, a0, k.saturating_sub(1), q * p + b0, true);
                let mut lhs = binom(k, q) * binom(a0, b0);
                for d in 1..k {
                    let mut per_subset = BigUint::zero();
                    for j in 0..=d.min(q) {
                        let total = j * p + b0;
                        let coefficient = binom_i((k - d) as i64, (q - j) as i64);
                        if coefficient.is_zero() {
                            continue;
                        }
                        let inner = table.weights(d, total) + table.weights_with_tail(d, total);
                        per_subset += coefficient * inner;
                    }
                    lhs += binom(k - 1, d) * per_subset;
                }
                let n_minus_p = (k - 1) * p + a0;
                let rhs = BigInt::from(binom(n_minus_p, q * p + b0))
                    + BigInt::from(binom_i(n_minus_p as i64, ((q - 1) * p + b0) as i64));
                (BigInt::from(lhs), rhs)
            }
        };
        Ok(IdentityCheck { lhs, rhs })
    }
}

fn sign(i: u64) -> BigInt {
    if i.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// sum_{i=0}^{d} (-1)^i C(d, i) f(i)
fn alternating_sum<F: Fn(u64) -> BigInt>(d: u64, f: F) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=d {
        acc += sign(i) * BigInt::from(binom(d, i)) * f(i);
    }
    acc
}

/// Folds the composition stream into the weighted sum
/// `sum over mu of C(p,mu_1)...C(p,mu_d) [C(a0, mu_{d+1})]`.
///
/// Block parts beyond p contribute a zero binomial, so the stream is pruned
/// at p (or p-1 when `bounded`) without changing the value.
fn part_product_sum(
    total: u64,
    d: u64,
    p: u64,
    a0: u64,
    positive: bool,
    with_tail: bool,
    bounded: bool,
) -> BigUint {
    let slots = if with_tail { d + 1 } else { d };
    let part_cap = if bounded { p } else { p + 1 };
    let mut acc = BigUint::zero();
    for c in compositions(total, slots, positive, Some(part_cap)) {
        let mut term = BigUint::one();
        for (i, &m) in c.parts().iter().enumerate() {
            let pool = if with_tail && i as u64 == d { a0 } else { p };
            term *= binom(pool, m);
            if term.is_zero() {
                break;
            }
        }
        acc += term;
    }
    acc
}

/// The full identity grid used by the verification sweep: every identity over
/// the supplied primes with composition lengths up to `max_d` and block counts
/// up to `max_k`, at every admissible combination of the remaining parameters.
pub fn standard_sweep(primes: &[u64], max_d: u64, max_k: u64) -> Vec<Identity> {
    let mut out = Vec::new();
    for r in 0..=12 {
        for s in 0..=12 {
            for n in 0..=(r + s + 2) {
                out.push(Identity::ChuVandermonde { r, s, n });
            }
        }
    }
    for n in 0..=10u64 {
        for m in 0..=(n + 2) {
            out.push(Identity::DeltaSum { n, m });
        }
    }
    for k in 1..=max_k {
        for m in 0..k {
            for r in 0..=(2 * k + 2) {
                out.push(Identity::AlternatingCoefficient { k, m, r });
            }
        }
    }
    for &p in primes {
        for d in 1..=max_d {
            for r in 0..=(d * p + 2) {
                out.push(Identity::UnconstrainedParts { p, d, r });
                out.push(Identity::IntoDParts { p, d, r });
            }
            for a0 in 0..p {
                for r in 0..=(d * p + a0 + 1) {
                    out.push(Identity::IntoDPlusOneParts { p, a0, d, r });
                    out.push(Identity::AddedParts { p, a0, d, r });
                }
                for j in 0..=d {
                    for b0 in 0..p {
                        out.push(Identity::BoundedParts { p, a0, d, j, b0 });
                    }
                }
            }
        }
        for k in 1..=max_k {
            for a0 in 0..p {
                out.push(Identity::GammaCaseEqual { p, k, a0 });
                for r in 0..p {
                    out.push(Identity::GammaCaseLess { p, k, a0, r });
                }
                for q in 1..=(k + 1) {
                    for b0 in 0..p {
                        if q == 1 && b0 == 0 {
                            continue;
                        }
                        out.push(Identity::GammaCaseGreater { p, k, a0, q, b0 });
                    }
                }
            }
        }
    }
    out
}
