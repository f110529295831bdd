//! Signed gaps (left side minus right side) of the multiway submodularity
//! inequality and the two-family lemmas built on the level operator.
//!
//! A gap is nonnegative for every submodular function and exactly zero for
//! every modular one. The functions report the raw value; classifying it
//! against a tolerance is left to the caller.

use num_traits::Zero;

use super::{Scalar, SetFunction};
use crate::error::{domain, Error, Result};
use crate::setcalc::{level_mask, ElementSet, IndexSet, SubsetFamily};

fn check_family<F: SetFunction>(f: &F, family: &SubsetFamily) -> Result<()> {
    if family.ground() != f.ground() {
        return Err(Error::GroundMismatch(
            "family and set function use different ground sets".into(),
        ));
    }
    Ok(())
}

fn total<F: SetFunction>(f: &F, sets: impl IntoIterator<Item = u64>) -> F::Value {
    sets.into_iter()
        .fold(F::Value::zero(), |acc, s| acc + f.value(s))
}

pub(crate) fn multiway_gap_masks<F: SetFunction>(f: &F, masks: &[u64], u: IndexSet) -> F::Value {
    let lhs = total(f, u.iter().map(|k| masks[k - 1]));
    let rhs = total(f, (1..=u.len()).map(|r| level_mask(masks, u.bits(), r)));
    lhs - rhs
}

/// `Σ_{k∈U} f(S_k) − Σ_{r=1}^{|U|} f(S^(r)(U))`.
pub fn multiway_gap<F: SetFunction>(f: &F, family: &SubsetFamily, u: IndexSet) -> Result<F::Value> {
    check_family(f, family)?;
    if u.is_empty() {
        return Err(domain("index set U must be nonempty"));
    }
    family.check_indices(u)?;
    Ok(multiway_gap_masks(f, family.masks(), u))
}

/// Shared body of Lemma-1 style gaps with every term unioned with `s0`.
pub(crate) fn lemma1_gap_masks<F: SetFunction>(
    f: &F,
    masks: &[u64],
    r_prime: usize,
    j: usize,
    s0: u64,
) -> F::Value {
    let prefix = |r: usize| IndexSet::range(r).bits();
    let lhs = total(
        f,
        (1..=j).map(|r| {
            if r <= r_prime {
                masks[r - 1] | s0
            } else {
                masks[r - 1] | level_mask(masks, prefix(r), r_prime + 1) | s0
            }
        }),
    );
    let rhs = total(
        f,
        (1..=j).map(|r| {
            if r <= r_prime {
                level_mask(masks, prefix(j), r) | s0
            } else {
                level_mask(masks, prefix(r), r_prime + 1) | s0
            }
        }),
    );
    lhs - rhs
}

fn check_lemma1(family: &SubsetFamily, r_prime: usize, j: usize) -> Result<()> {
    if !(r_prime <= j && j <= family.k()) {
        return Err(domain(format!(
            "need 0 <= r' <= J <= K, got r' = {r_prime}, J = {j}, K = {}",
            family.k()
        )));
    }
    Ok(())
}

/// Left minus right side of
/// `Σ_{r≤r'} f(S_r) + Σ_{r>r'} f(S_r ∪ S^(r'+1)([r]))
///   ≥ Σ_{r≤r'} f(S^(r)([J])) + Σ_{r>r'} f(S^(r'+1)([r]))`.
pub fn lemma1_gap<F: SetFunction>(
    f: &F,
    family: &SubsetFamily,
    r_prime: usize,
    j: usize,
) -> Result<F::Value> {
    check_family(f, family)?;
    check_lemma1(family, r_prime, j)?;
    Ok(lemma1_gap_masks(f, family.masks(), r_prime, j, 0))
}

/// [`lemma1_gap`] with `S_0` joined to every term.
pub fn corollary1_gap<F: SetFunction>(
    f: &F,
    family: &SubsetFamily,
    s0: &ElementSet,
    r_prime: usize,
    j: usize,
) -> Result<F::Value> {
    check_family(f, family)?;
    if s0.ground() != family.ground() {
        return Err(Error::GroundMismatch("S_0 is not drawn from the family's ground".into()));
    }
    check_lemma1(family, r_prime, j)?;
    Ok(lemma1_gap_masks(f, family.masks(), r_prime, j, s0.bits()))
}

/// Caller guarantees the parameter ranges and the containment
/// `S^(q)(U) ⊆ S^(r_q)(T)`.
pub(crate) fn lemma2_gap_masks<F: SetFunction>(
    f: &F,
    masks: &[u64],
    u: IndexSet,
    t: IndexSet,
    q: usize,
    r_q: usize,
) -> F::Value {
    let t_sorted = t.to_vec();
    let sq = level_mask(masks, u.bits(), q);
    let lhs = total(f, t_sorted.iter().map(|&k| masks[k - 1]))
        + F::Value::from_count(r_q) * f.value(sq);
    let mut rhs = F::Value::zero();
    for (pos, &tr) in t_sorted.iter().enumerate() {
        let r = pos + 1;
        let s_tr = masks[tr - 1];
        if r <= r_q {
            rhs = rhs + f.value(level_mask(masks, t.bits(), r)) + f.value(s_tr & sq);
        } else {
            let head = t.prefix(r).bits();
            rhs = rhs + f.value(s_tr & (sq | level_mask(masks, head, r_q + 1)));
        }
    }
    lhs - rhs
}

/// Left minus right side of the two-index-set inequality
/// `Σ_r f(S_{t_r}) + r_q f(S^(q)(U)) ≥ Σ_{r≤r_q} [f(S^(r)(T)) + f(S_{t_r} ∩ S^(q)(U))]
///   + Σ_{r>r_q} f(S_{t_r} ∩ (S^(q)(U) ∪ S^(r_q+1)({t_1..t_r})))`,
/// with `T = {t_1 < … < t_|T|}`.
///
/// Requires `S^(q)(U) ⊆ S^(r_q)(T)`; a violation is reported naming both sets.
pub fn lemma2_gap<F: SetFunction>(
    f: &F,
    family: &SubsetFamily,
    u: IndexSet,
    t: IndexSet,
    q: usize,
    r_q: usize,
) -> Result<F::Value> {
    check_family(f, family)?;
    if u.is_empty() || t.is_empty() {
        return Err(domain("U and T must be nonempty"));
    }
    family.check_indices(u)?;
    family.check_indices(t)?;
    if q == 0 || q > u.len() || r_q == 0 || r_q > t.len() {
        return Err(domain(format!(
            "need 1 <= q <= |U| and 1 <= r_q <= |T|, got q = {q}, r_q = {r_q}"
        )));
    }
    let masks = family.masks();
    let sq = level_mask(masks, u.bits(), q);
    let srt = level_mask(masks, t.bits(), r_q);
    if sq & !srt != 0 {
        let g = family.ground();
        return Err(Error::Containment {
            left: format!("S^({q})({u}) = {}", g.from_bits(sq)?),
            right: format!("S^({r_q})({t}) = {}", g.from_bits(srt)?),
        });
    }
    Ok(lemma2_gap_masks(f, masks, u, t, q, r_q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, Rational};
    use crate::setcalc::GroundSet;
    use crate::setfn::{entropy_oracle, JointDistribution, ModularFunction};
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_family(ground: &GroundSet, k: usize, rng: &mut ChaCha8Rng) -> SubsetFamily {
        let masks = (0..k).map(|_| rng.random::<u64>() & ground.full_mask()).collect();
        SubsetFamily::from_masks(ground, masks).unwrap()
    }

    fn random_modular(ground: &GroundSet, rng: &mut ChaCha8Rng) -> ModularFunction {
        let w = (0..ground.size())
            .map(|_| frac(rng.random_range(0..20), rng.random_range(1..7)))
            .collect();
        ModularFunction::new(ground, w).unwrap()
    }

    #[test]
    fn modular_gaps_vanish_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GroundSet::new(5).unwrap();
        for _ in 0..20 {
            let f = random_modular(&g, &mut rng);
            let fam = random_family(&g, 4, &mut rng);
            for u in IndexSet::nonempty_subsets(4) {
                assert!(multiway_gap(&f, &fam, u).unwrap().is_zero());
            }
            for j in 0..=4 {
                for rp in 0..=j {
                    assert!(lemma1_gap(&f, &fam, rp, j).unwrap().is_zero());
                    let s0 = g.from_bits(rng.random::<u64>() & 31).unwrap();
                    assert!(corollary1_gap(&f, &fam, &s0, rp, j).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn lemma1_boundary_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = JointDistribution::random(5, &mut rng).unwrap();
        let h = entropy_oracle(&d);
        let fam = random_family(h.ground(), 4, &mut rng);
        for j in 1..=4 {
            // r' = 0 is the trivial equality
            assert_eq!(lemma1_gap(&h, &fam, 0, j).unwrap(), 0.0);
            // r' = J is multiway submodularity on [J]
            let lhs = lemma1_gap(&h, &fam, j, j).unwrap();
            let rhs = multiway_gap(&h, &fam, IndexSet::range(j)).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
        assert!(lemma1_gap(&h, &fam, 3, 2).is_err());
        assert!(lemma1_gap(&h, &fam, 1, 5).is_err());
    }

    #[test]
    fn corollary1_special_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = entropy_oracle(&JointDistribution::random(4, &mut rng).unwrap());
        let fam = random_family(h.ground(), 3, &mut rng);
        for j in 0..=3 {
            for rp in 0..=j {
                let empty = corollary1_gap(&h, &fam, &h.ground().empty(), rp, j).unwrap();
                assert_eq!(empty, lemma1_gap(&h, &fam, rp, j).unwrap());
                let full = corollary1_gap(&h, &fam, &h.ground().full(), rp, j).unwrap();
                assert_eq!(full, 0.0);
            }
        }
    }

    #[test]
    fn singleton_multiway_gap_is_zero() {
        let g = GroundSet::new(3).unwrap();
        let f = ModularFunction::new(&g, vec![int(1), int(1), int(1)]).unwrap();
        let fam = SubsetFamily::from_masks(&g, vec![0b011, 0b110]).unwrap();
        let u = IndexSet::new(&[2]).unwrap();
        assert_eq!(multiway_gap(&f, &fam, u).unwrap(), Rational::zero());
        assert!(multiway_gap(&f, &fam, IndexSet::default()).is_err());
    }

    #[test]
    fn lemma2_trivial_and_containment_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = entropy_oracle(&JointDistribution::random(4, &mut rng).unwrap());
        let fam = SubsetFamily::from_masks(h.ground(), vec![0b0011, 0b0110, 0b1100]).unwrap();
        let t = IndexSet::new(&[2]).unwrap();
        assert!(lemma2_gap(&h, &fam, t, t, 1, 1).unwrap().abs() < 1e-12);
        // S^(1)({1}) = {0,1} is not inside S^(1)({3}) = {2,3}
        let err = lemma2_gap(&h, &fam, IndexSet::new(&[1]).unwrap(), IndexSet::new(&[3]).unwrap(), 1, 1)
            .unwrap_err();
        match err {
            Error::Containment { left, right } => {
                assert!(left.contains("S^(1)({1})"));
                assert!(right.contains("S^(1)({3})"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn lemma2_modular_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g = GroundSet::new(5).unwrap();
        for _ in 0..10 {
            let f = random_modular(&g, &mut rng);
            let fam = random_family(&g, 4, &mut rng);
            for u in IndexSet::nonempty_subsets(4) {
                for t in IndexSet::nonempty_subsets(4) {
                    for q in 1..=u.len() {
                        for rq in 1..=t.len() {
                            if let Ok(gap) = lemma2_gap(&f, &fam, u, t, q, rq) {
                                assert!(gap.is_zero(), "U={u} T={t} q={q} r_q={rq}");
                            }
                        }
                    }
                }
            }
        }
    }
}
