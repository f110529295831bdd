//! The α and β weight formulas of the K-cut bounds.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::error::{domain, Result};
use crate::rational::{int, Rational};

fn product(it: impl Iterator<Item = usize>) -> Rational {
    it.fold(Rational::one(), |acc, v| acc * int(v as i64))
}

/// `α_Q(q, r)` where `Q` is the key set of `r_q` and `r_q[q]` is the
/// per-index level.
pub fn alpha(r_q: &BTreeMap<usize, usize>, q: usize, r: usize) -> Result<Rational> {
    if let Some(&bad) = r_q.keys().find(|&&p| p < 2) {
        return Err(domain(format!("Q must lie in {{2, ...}}, found {bad}")));
    }
    let Some(&rq) = r_q.get(&q) else {
        return Err(domain(format!("q = {q} is not in Q")));
    };
    if r == 0 || r > rq {
        return Err(domain(format!("need 1 <= r <= r_q = {rq}, got r = {r}")));
    }
    if r_q.contains_key(&r) {
        return Ok(int(0));
    }
    let qs = r_q.keys().copied();
    let num = product(qs.clone().filter(|&p| p < r).map(|p| p - 1))
        * product(qs.clone().filter(|&p| r < p && p <= rq));
    let den = int(rq as i64) * product(qs.filter(|&p| p <= rq).map(|p| p - 1));
    Ok(num / den)
}

fn check_q(q: &BTreeSet<usize>, size_u: usize) -> Result<()> {
    match q.iter().find(|&&p| p < 2 || p > size_u) {
        Some(bad) => Err(domain(format!("Q must lie in {{2, ..., {size_u}}}, found {bad}"))),
        None => Ok(()),
    }
}

/// `β_Q(r)` for `r ∈ [size_u]`.
pub fn beta(q: &BTreeSet<usize>, size_u: usize, r: usize) -> Result<Rational> {
    check_q(q, size_u)?;
    if r == 0 || r > size_u {
        return Err(domain(format!("need 1 <= r <= {size_u}, got r = {r}")));
    }
    if q.is_empty() {
        return Ok(int(1));
    }
    if q.contains(&r) {
        return Ok(int(0));
    }
    Ok(product(q.iter().filter(|&&p| p < r).map(|p| p - 1)) * product(q.iter().copied().filter(|&p| p > r)))
}

/// Checks `Σ_{q∈Q, q>r} α_Q(q, r) = β_Q(r) / ∏_{q∈Q}(q−1) − 1` for every
/// `r ∉ Q` below `max Q`, taking `r_q = q − 1`.
pub fn beta_prime_identity_check(q: &BTreeSet<usize>, size_u: usize) -> Result<bool> {
    check_q(q, size_u)?;
    let Some(&qmax) = q.iter().next_back() else {
        return Err(domain("Q must be nonempty"));
    };
    let r_q: BTreeMap<usize, usize> = q.iter().map(|&p| (p, p - 1)).collect();
    let norm = product(q.iter().map(|p| p - 1));
    for r in (1..qmax).filter(|r| !q.contains(r)) {
        let mut lhs = int(0);
        for &p in q.iter().filter(|&&p| p > r) {
            lhs += alpha(&r_q, p, r)?;
        }
        let rhs = beta(q, size_u, r)? / &norm - int(1);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
