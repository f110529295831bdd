use std::collections::{BTreeSet, HashSet};
use std::str::FromStr;

use super::generators::{gcsb3, gcsb_k_cor2, gcsb_k_cor3, standard_cutset, Theorem2Params};
use super::{BoundInequality, Gcsb3Variant};
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::lp::in_cone;
use crate::rational::{to_coprime_integers, Rational};
use crate::setcalc::{level_mask, IndexSet, SubsetFamily};

/// Largest `K` for which the K-cut parameter search runs.
pub const THM2_SEARCH_MAX_K: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleSet {
    pub csb: bool,
    pub gcsb3: bool,
    pub cor3: bool,
    pub cor2: bool,
    pub thm2: bool,
}

impl RuleSet {
    pub fn all() -> Self {
        Self { csb: true, gcsb3: true, cor3: true, cor2: true, thm2: true }
    }
}

impl FromStr for RuleSet {
    type Err = Error;
    /// Comma-separated rule names, or `all`.
    fn from_str(s: &str) -> Result<Self> {
        let mut r = RuleSet::default();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "all" => r = RuleSet::all(),
                "csb" => r.csb = true,
                "gcsb3" => r.gcsb3 = true,
                "cor3" => r.cor3 = true,
                "cor2" => r.cor2 = true,
                "thm2" => r.thm2 = true,
                _ => return Err(domain(format!("unknown rule `{name}`"))),
            }
        }
        if r == RuleSet::default() {
            return Err(domain("no rules selected"));
        }
        Ok(r)
    }
}

fn q_subsets(size_u: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    let pool: Vec<usize> = (2..=size_u).collect();
    (0u32..1 << pool.len()).map(move |m| pool.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &q)| q).collect())
}

fn generate(k: usize, rules: RuleSet) -> Vec<BoundInequality> {
    let mut out = Vec::new();
    let subsets = || IndexSet::nonempty_subsets(k);
    if rules.csb {
        out.extend(subsets().map(|u| standard_cutset(u).expect("nonempty U")));
    }
    if rules.gcsb3 {
        for i in 1..=k {
            for j in 1..=k {
                for l in 1..=k {
                    if i != j && j != l && i != l {
                        for v in Gcsb3Variant::ALL {
                            out.push(gcsb3(i, j, l, v).expect("distinct indices"));
                        }
                    }
                }
            }
        }
    }
    if rules.cor3 {
        for u in subsets() {
            out.extend((1..=u.len()).map(|m| gcsb_k_cor3(u, m).expect("m in range")));
        }
    }
    if rules.cor2 {
        for u in subsets() {
            out.extend(q_subsets(u.len()).map(|q| gcsb_k_cor2(u, &q).expect("Q in range")));
        }
    }
    if rules.thm2 && k <= THM2_SEARCH_MAX_K {
        out.extend(structural_theorem2_bounds(k).expect("k in search range"));
    }
    out
}

fn profile_key(b: &BoundInequality, k: usize) -> Vec<Rational> {
    to_coprime_integers(&b.profile(k))
}

/// Every bound the selected rules produce for `k` sinks, reduced to a set in
/// which no bound is a nonnegative combination of the others.
///
/// Two bounds with proportional profiles (see [`BoundInequality::profile`])
/// instantiate identically on every network, and a bound whose profile lies in
/// the cone of the others' profiles is their weighted sum on every network;
/// both kinds are dropped. The first generated representative survives, rules
/// ordered csb, gcsb3, cor3, cor2, thm2. The K-cut parameter search only runs for
/// `k <= 4`. Output is sorted by canonical term list.
pub fn enumerate_bounds(k: usize, rules: RuleSet) -> Vec<BoundInequality> {
    if k == 0 {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut unique: Vec<(usize, BoundInequality, Vec<Rational>)> = Vec::new();
    for b in generate(k, rules) {
        let key = profile_key(&b, k);
        if seen.insert(key.clone()) {
            unique.push((unique.len(), b, key));
        }
    }
    // Forward pass in order of growing support and mass, so generators tend to
    // be kept before the sums they form; the backward pass then removes what
    // later arrivals made redundant.
    unique.sort_by_cached_key(|(pos, _, p)| {
        let support = p.iter().filter(|v| !v.is_zero()).count();
        let mass: Rational = p.iter().sum();
        (support, mass, *pos)
    });
    let mut kept: Vec<(usize, BoundInequality, Vec<Rational>)> = Vec::new();
    for cand in unique {
        let gens: Vec<&[Rational]> = kept.iter().map(|(_, _, p)| p.as_slice()).collect();
        if !in_cone(&cand.2, &gens) {
            kept.push(cand);
        }
    }
    // Later arrivals have at least the support size of earlier ones, and only
    // generators inside a target's support can contribute, so an earlier bound
    // can only have become redundant through a later one with equal support.
    let support = |p: &[Rational]| p.iter().map(|v| !v.is_zero()).collect::<Vec<bool>>();
    let supports: Vec<Vec<bool>> = kept.iter().map(|(_, _, p)| support(p)).collect();
    let revisit: Vec<bool> = (0..kept.len()).map(|i| supports[i + 1..].contains(&supports[i])).collect();
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        if !revisit[i] {
            continue;
        }
        let others: Vec<&[Rational]> =
            kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (_, _, p))| p.as_slice()).collect();
        if in_cone(&kept[i].2, &others) {
            kept.remove(i);
        }
    }
    let mut out: Vec<BoundInequality> = kept.into_iter().map(|(_, b, _)| b).collect();
    out.sort_by_cached_key(sort_key);
    out
}

fn sort_key(b: &BoundInequality) -> Vec<(usize, Vec<usize>, usize, Rational)> {
    b.canonical().terms().iter().map(|t| (t.u.len(), t.u.to_vec(), t.r, t.weight.clone())).collect()
}

/// K-cut bounds whose coverage conditions hold on the generic family,
/// hence on every cut and message family with `k` members. Exhaustive over
/// `G, U, T, Q, (r_q)`; profiles are deduplicated.
pub fn structural_theorem2_bounds(k: usize) -> Result<Vec<BoundInequality>> {
    if k == 0 || k > THM2_SEARCH_MAX_K {
        return Err(domain(format!("parameter search supports 1 <= K <= {THM2_SEARCH_MAX_K}, got {k}")));
    }
    let fam = SubsetFamily::generic(k)?;
    let lvl = |u: IndexSet, r: usize| level_mask(fam.masks(), u.bits(), r);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in IndexSet::nonempty_subsets(k) {
        for u in IndexSet::nonempty_subsets(k).filter(|u| u.is_subset(g)) {
            for t in IndexSet::nonempty_subsets(k) {
                for q in q_subsets(u.len()) {
                    // levels of T shrink with r, so the admissible r_q form a prefix
                    let caps: Vec<(usize, usize)> = q
                        .iter()
                        .map(|&q| (q, (1..=t.len()).take_while(|&r| lvl(u, q) & !lvl(t, r) == 0).count()))
                        .collect();
                    if caps.iter().any(|&(_, c)| c == 0) {
                        continue;
                    }
                    let mut choice: Vec<usize> = vec![1; caps.len()];
                    loop {
                        let p = Theorem2Params {
                            g,
                            u,
                            t,
                            r_q: caps.iter().zip(&choice).map(|(&(q, _), &r)| (q, r)).collect(),
                        };
                        let b = p.bound()?;
                        if seen.insert(profile_key(&b, k)) {
                            out.push(b);
                        }
                        // odometer over r_q choices
                        let mut pos = 0;
                        while pos < choice.len() && choice[pos] == caps[pos].1 {
                            choice[pos] = 1;
                            pos += 1;
                        }
                        if pos == choice.len() {
                            break;
                        }
                        choice[pos] += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(s: &str) -> RuleSet {
        s.parse().unwrap()
    }

    #[test]
    fn rule_parsing() {
        assert_eq!(rules("all"), RuleSet::all());
        assert!(rules("csb,cor3").cor3);
        assert!("bogus".parse::<RuleSet>().is_err());
        assert!("".parse::<RuleSet>().is_err());
    }

    #[test]
    fn small_k_counts() {
        assert_eq!(enumerate_bounds(1, RuleSet::all()).len(), 1);
        assert_eq!(enumerate_bounds(2, RuleSet::all()).len(), 3);
        assert_eq!(enumerate_bounds(3, rules("csb")).len(), 7);
        assert_eq!(enumerate_bounds(3, rules("csb,gcsb3")).len(), 15);
        assert!(enumerate_bounds(0, RuleSet::all()).is_empty());
    }

    #[test]
    fn three_sinks_all_rules() {
        let all = enumerate_bounds(3, RuleSet::all());
        let base = enumerate_bounds(3, rules("csb,gcsb3"));
        assert_eq!(all.len(), 15);
        for (a, b) in all.iter().zip(&base) {
            assert!(a.same_terms(b));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(enumerate_bounds(3, RuleSet::all()), enumerate_bounds(3, RuleSet::all()));
    }

    #[test]
    fn structural_search_contains_recoveries() {
        let found = structural_theorem2_bounds(3).unwrap();
        for v in Gcsb3Variant::ALL {
            let target = gcsb3(1, 2, 3, v).unwrap();
            assert!(found.iter().any(|b| b.same_terms(&target)), "variant {v}");
        }
        assert!(structural_theorem2_bounds(5).is_err());
    }
}
