use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::coeffs::{alpha, beta};
use super::{BoundInequality, BoundTerm, Gcsb3Variant, Provenance};
use crate::error::{domain, Error, Result};
use crate::rational::int;
use crate::setcalc::{level_mask, IndexSet, SubsetFamily};

/// The single-term bound `R(I^(1)(U)) <= C(A^(1)(U))`.
pub fn standard_cutset(u: IndexSet) -> Result<BoundInequality> {
    let term = BoundTerm::new(1, u, int(1))?;
    BoundInequality::new(vec![term], Provenance::Csb { u })
}

/// One of the four three-cut bounds on sinks `i, j, k`.
pub fn gcsb3(i: usize, j: usize, k: usize, variant: Gcsb3Variant) -> Result<BoundInequality> {
    if i == j || j == k || i == k || i.min(j).min(k) == 0 {
        return Err(domain(format!("need three distinct positive indices, got ({i},{j},{k})")));
    }
    let ijk = IndexSet::new(&[i, j, k])?;
    let ij = IndexSet::new(&[i, j])?;
    let t = |r, u, w| BoundTerm::new(r, u, int(w));
    let terms = match variant {
        Gcsb3Variant::A => vec![t(1, ijk, 1)?, t(2, ij, 1)?],
        Gcsb3Variant::B => vec![t(1, ijk, 1)?, t(2, ijk, 1)?],
        Gcsb3Variant::C => vec![t(1, ijk, 1)?, t(1, ij, 1)?, t(3, ijk, 1)?],
        Gcsb3Variant::D => vec![t(1, ijk, 2)?, t(3, ijk, 1)?],
    };
    BoundInequality::new(terms, Provenance::Gcsb3 { variant, i, j, k })
}

/// Parameters of the K-cut bound: index sets `G, U, T` and `r_q` per `q ∈ Q`
/// (the key set of `r_q`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Params {
    pub g: IndexSet,
    pub u: IndexSet,
    pub t: IndexSet,
    pub r_q: BTreeMap<usize, usize>,
}

impl Theorem2Params {
    /// `G = U = T` with the default `r_q = q − 1`.
    pub fn corollary(u: IndexSet, q: &BTreeSet<usize>) -> Self {
        Self { g: u, u, t: u, r_q: q.iter().map(|&p| (p, p.saturating_sub(1))).collect() }
    }

    fn check_ranges(&self) -> Result<()> {
        if self.g.is_empty() || self.u.is_empty() || self.t.is_empty() {
            return Err(domain("G, U and T must be nonempty"));
        }
        for (&q, &rq) in &self.r_q {
            if q < 2 || q > self.u.len() {
                return Err(domain(format!("Q must lie in {{2, ..., |U| = {}}}, found {q}", self.u.len())));
            }
            if rq == 0 || rq > self.t.len() {
                return Err(domain(format!("r_{q} = {rq} outside 1..={}", self.t.len())));
            }
        }
        Ok(())
    }

    /// Term list without any containment check.
    pub(crate) fn bound(&self) -> Result<BoundInequality> {
        self.check_ranges()?;
        let mut terms = vec![BoundTerm::new(1, self.g, int(1))?];
        for r in (2..=self.u.len()).filter(|r| !self.r_q.contains_key(r)) {
            terms.push(BoundTerm::new(r, self.u, int(1))?);
        }
        for (&q, &rq) in &self.r_q {
            for r in 1..=rq {
                let a = alpha(&self.r_q, q, r)?;
                if a.is_positive() {
                    terms.push(BoundTerm::new(r, self.t, a)?);
                }
            }
        }
        BoundInequality::new(
            terms,
            Provenance::GcsbK { g: self.g, u: self.u, t: self.t, r_q: self.r_q.clone() },
        )
    }
}

/// Which of the coverage conditions hold. `cond2_t` is the condition as the
/// theorem states it; `cond2_u` reads the message side with `U` in place of
/// `T` on the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageReport {
    pub cond1: bool,
    pub cond2_t: bool,
    pub cond2_u: bool,
}

fn check_families(p: &Theorem2Params, cuts: &SubsetFamily, msgs: &SubsetFamily) -> Result<()> {
    if cuts.k() != msgs.k() {
        return Err(domain(format!("cut family has {} sets, message family {}", cuts.k(), msgs.k())));
    }
    for s in [p.g, p.u, p.t] {
        cuts.check_indices(s)?;
    }
    p.check_ranges()
}

fn level(f: &SubsetFamily, u: IndexSet, r: usize) -> Option<u64> {
    (r >= 1 && r <= u.len()).then(|| level_mask(f.masks(), u.bits(), r))
}

fn subset(a: Option<u64>, b: Option<u64>) -> bool {
    matches!((a, b), (Some(a), Some(b)) if a & !b == 0)
}

pub fn coverage_report(p: &Theorem2Params, cuts: &SubsetFamily, msgs: &SubsetFamily) -> Result<CoverageReport> {
    check_families(p, cuts, msgs)?;
    let cond1 = subset(level(cuts, p.u, 1), level(cuts, p.g, 1));
    let arcs_ok = p.r_q.iter().all(|(&q, &rq)| subset(level(cuts, p.u, q), level(cuts, p.t, rq)));
    let msgs_with = |right: IndexSet| p.r_q.iter().all(|(&q, &rq)| subset(level(msgs, p.u, q), level(msgs, right, rq)));
    Ok(CoverageReport { cond1, cond2_t: arcs_ok && msgs_with(p.t), cond2_u: arcs_ok && msgs_with(p.u) })
}

fn require(fam: &SubsetFamily, sym: char, lu: IndexSet, lr: usize, ru: IndexSet, rr: usize) -> Result<()> {
    let l = level_mask(fam.masks(), lu.bits(), lr);
    let r = level_mask(fam.masks(), ru.bits(), rr);
    if l & !r == 0 {
        return Ok(());
    }
    let g = fam.ground();
    Err(Error::Containment {
        left: format!("{sym}^({lr})({lu}) = {}", g.from_bits(l)?),
        right: format!("{sym}^({rr})({ru}) = {}", g.from_bits(r)?),
    })
}

/// The K-cut bound, after checking both coverage conditions on the given
/// cut and message families.
pub fn gcsb_k(p: &Theorem2Params, cuts: &SubsetFamily, msgs: &SubsetFamily) -> Result<BoundInequality> {
    check_families(p, cuts, msgs)?;
    require(cuts, 'A', p.u, 1, p.g, 1)?;
    for (&q, &rq) in &p.r_q {
        require(cuts, 'A', p.u, q, p.t, rq)?;
        require(msgs, 'I', p.u, q, p.t, rq)?;
    }
    p.bound()
}

/// `Σ_r β_Q(r) (r, U)` over the levels with positive weight.
pub fn gcsb_k_cor2(u: IndexSet, q: &BTreeSet<usize>) -> Result<BoundInequality> {
    if u.is_empty() {
        return Err(domain("U must be nonempty"));
    }
    let mut terms = Vec::new();
    for r in 1..=u.len() {
        let b = beta(q, u.len(), r)?;
        if !b.is_zero() {
            terms.push(BoundTerm::new(r, u, b)?);
        }
    }
    BoundInequality::new(terms, Provenance::Cor2 { u, q: q.clone() })
}

/// `m (1, U) + Σ_{r>m} (r, U)`.
pub fn gcsb_k_cor3(u: IndexSet, m: usize) -> Result<BoundInequality> {
    if m == 0 || m > u.len() {
        return Err(domain(format!("need 1 <= m <= |U| = {}, got m = {m}", u.len())));
    }
    let mut terms = vec![BoundTerm::new(1, u, int(m as i64))?];
    for r in m + 1..=u.len() {
        terms.push(BoundTerm::new(r, u, int(1))?);
    }
    BoundInequality::new(terms, Provenance::Cor3 { u, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::setcalc::GroundSet;

    fn ix(v: &[usize]) -> IndexSet {
        IndexSet::new(v).unwrap()
    }

    fn weights(b: &BoundInequality) -> Vec<(usize, Vec<usize>, String)> {
        b.terms().iter().map(|t| (t.r, t.u.to_vec(), crate::rational::format(&t.weight))).collect()
    }

    #[test]
    fn cutset_and_triples() {
        assert_eq!(weights(&standard_cutset(ix(&[1, 2, 3])).unwrap()), vec![(1, vec![1, 2, 3], "1".into())]);
        assert!(standard_cutset(IndexSet::default()).is_err());
        let d = gcsb3(3, 1, 2, Gcsb3Variant::D).unwrap();
        assert_eq!(weights(&d), vec![(1, vec![1, 2, 3], "2".into()), (3, vec![1, 2, 3], "1".into())]);
        let a = gcsb3(2, 3, 1, Gcsb3Variant::A).unwrap();
        assert_eq!(weights(&a), vec![(2, vec![2, 3], "1".into()), (1, vec![1, 2, 3], "1".into())]);
        assert!(gcsb3(1, 1, 2, Gcsb3Variant::A).is_err());
    }

    #[test]
    fn corollaries() {
        let b = gcsb_k_cor2(ix(&[1, 2, 3]), &[3].into()).unwrap();
        assert_eq!(weights(&b), vec![(1, vec![1, 2, 3], "3".into()), (2, vec![1, 2, 3], "3".into())]);
        assert!(b.same_terms(&gcsb3(1, 2, 3, Gcsb3Variant::B).unwrap()));
        let all = gcsb_k_cor2(ix(&[1, 2]), &BTreeSet::new()).unwrap();
        assert_eq!(all.terms().len(), 2);
        assert!(gcsb_k_cor3(ix(&[1, 2, 3]), 2).unwrap().same_terms(&gcsb3(1, 2, 3, Gcsb3Variant::D).unwrap()));
        assert!(gcsb_k_cor3(ix(&[1, 2]), 3).is_err());
        // Q = {2..m} on [K] equals cor3 scaled by (m−1)!
        for k in 3..=6usize {
            for m in 2..=k {
                let q: BTreeSet<usize> = (2..=m).collect();
                let c2 = gcsb_k_cor2(IndexSet::range(k), &q).unwrap();
                let c3 = gcsb_k_cor3(IndexSet::range(k), m).unwrap();
                let f = int(crate::rational::factorial(m as u64 - 1) as i64);
                let scaled: Vec<_> = c3.terms().iter().map(|t| (t.r, t.u, &t.weight * &f)).collect();
                let got: Vec<_> = c2.terms().iter().map(|t| (t.r, t.u, t.weight.clone())).collect();
                assert_eq!(got, scaled, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn theorem2_on_generic_family() {
        let fam = SubsetFamily::generic(3).unwrap();
        let p = Theorem2Params { g: ix(&[1, 2, 3]), u: ix(&[1, 2, 3]), t: ix(&[1, 2]), r_q: [(2, 1)].into() };
        let b = gcsb_k(&p, &fam, &fam).unwrap();
        assert!(b.same_terms(&gcsb3(1, 2, 3, Gcsb3Variant::C).unwrap()));
        let rep = coverage_report(&p, &fam, &fam).unwrap();
        assert_eq!(rep, CoverageReport { cond1: true, cond2_t: true, cond2_u: true });

        // T = {1} cannot cover the pairwise level of {1,2,3}
        let bad = Theorem2Params { t: ix(&[1]), ..p.clone() };
        match gcsb_k(&bad, &fam, &fam).unwrap_err() {
            Error::Containment { left, right } => {
                assert!(left.starts_with("A^(2)({1,2,3})"));
                assert!(right.starts_with("A^(1)({1})"));
            }
            e => panic!("{e:?}"),
        }
        // G smaller than U breaks the first condition
        let bad = Theorem2Params { g: ix(&[1]), ..p.clone() };
        assert!(matches!(gcsb_k(&bad, &fam, &fam), Err(Error::Containment { .. })));
        let bad = Theorem2Params { r_q: [(4, 1)].into(), ..p.clone() };
        assert!(matches!(gcsb_k(&bad, &fam, &fam), Err(Error::ParameterDomain(_))));
        let bad = Theorem2Params { r_q: [(2, 3)].into(), ..p };
        assert!(matches!(gcsb_k(&bad, &fam, &fam), Err(Error::ParameterDomain(_))));
    }

    #[test]
    fn half_weights_before_scaling() {
        let fam = SubsetFamily::generic(3).unwrap();
        let u = ix(&[1, 2, 3]);
        let p = Theorem2Params { g: u, u, t: u, r_q: [(3, 2)].into() };
        let b = gcsb_k(&p, &fam, &fam).unwrap();
        assert_eq!(b.terms().iter().map(|t| t.weight.clone()).collect::<Vec<_>>(), vec![frac(3, 2), frac(3, 2)]);
        assert!(b.same_terms(&gcsb3(1, 2, 3, Gcsb3Variant::B).unwrap()));
    }

    #[test]
    fn readings_can_differ() {
        // I_1 = ∅, I_2 = I_3 = {m}: the pairwise message level escapes I_1 but not I^(1)(U)
        let g = GroundSet::new(1).unwrap();
        let msgs = SubsetFamily::from_masks(&g, vec![0, 1, 1]).unwrap();
        let cuts = SubsetFamily::from_masks(&g, vec![1, 1, 1]).unwrap();
        let p = Theorem2Params { g: ix(&[1, 2, 3]), u: ix(&[1, 2, 3]), t: ix(&[1]), r_q: [(2, 1)].into() };
        let rep = coverage_report(&p, &cuts, &msgs).unwrap();
        assert_eq!(rep, CoverageReport { cond1: true, cond2_t: false, cond2_u: true });
        assert!(matches!(gcsb_k(&p, &cuts, &msgs), Err(Error::Containment { .. })));
    }
}
