use std::fmt;

use num_traits::Zero;

use super::{BoundInequality, Provenance};
use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};
use crate::setcalc::{level_mask, BitIter, GroundSet, SubsetFamily};
use crate::setfn::{ModularFunction, SetFunction};

/// A bound read on a concrete network: `Σ_m a_m R_m <= Σ_e b_e C_e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstantiatedInequality {
    messages: GroundSet,
    arcs: GroundSet,
    rate_coeffs: Vec<Rational>,
    capacity_coeffs: Vec<Rational>,
    cap_value: Option<Rational>,
    provenance: Provenance,
}

fn accumulate(bound: &BoundInequality, fam: &SubsetFamily) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); fam.ground().size()];
    for t in bound.terms() {
        for i in BitIter(level_mask(fam.masks(), t.u.bits(), t.r)) {
            out[i] += &t.weight;
        }
    }
    out
}

/// Applies `bound` to the cut family `A_1..A_K` and message family
/// `I_1..I_K`. When `capacities` is given the capacity side is also evaluated.
pub fn instantiate(
    bound: &BoundInequality,
    cuts: &SubsetFamily,
    msgs: &SubsetFamily,
    capacities: Option<&ModularFunction>,
) -> Result<InstantiatedInequality> {
    if cuts.k() != msgs.k() {
        return Err(domain(format!("cut family has {} sets, message family {}", cuts.k(), msgs.k())));
    }
    if bound.max_index() > cuts.k() {
        return Err(domain(format!("bound references sink {} but only {} exist", bound.max_index(), cuts.k())));
    }
    let rate_coeffs = accumulate(bound, msgs);
    let capacity_coeffs = accumulate(bound, cuts);
    let cap_value = match capacities {
        None => None,
        Some(c) => {
            if c.ground() != cuts.ground() {
                return Err(Error::GroundMismatch("capacities are not over the arc ground".into()));
            }
            Some(capacity_coeffs.iter().zip(c.weights()).map(|(a, w)| a * w).sum())
        }
    };
    Ok(InstantiatedInequality {
        messages: msgs.ground().clone(),
        arcs: cuts.ground().clone(),
        rate_coeffs,
        capacity_coeffs,
        cap_value,
        provenance: bound.provenance().clone(),
    })
}

impl InstantiatedInequality {
    pub fn messages(&self) -> &GroundSet {
        &self.messages
    }

    pub fn arcs(&self) -> &GroundSet {
        &self.arcs
    }

    /// Dense, indexed by message.
    pub fn rate_coeffs(&self) -> &[Rational] {
        &self.rate_coeffs
    }

    /// Dense, indexed by arc.
    pub fn capacity_coeffs(&self) -> &[Rational] {
        &self.capacity_coeffs
    }

    pub fn cap_value(&self) -> Option<&Rational> {
        self.cap_value.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// No message appears on the rate side, so the bound is vacuous.
    pub fn is_degenerate(&self) -> bool {
        self.rate_coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero rate coefficients with message labels, in ground order.
    pub fn rate_terms(&self) -> impl Iterator<Item = (String, &Rational)> + '_ {
        labelled(&self.messages, &self.rate_coeffs)
    }

    pub fn capacity_terms(&self) -> impl Iterator<Item = (String, &Rational)> + '_ {
        labelled(&self.arcs, &self.capacity_coeffs)
    }

    /// Whether a rate vector (indexed by message) satisfies the inequality.
    pub fn holds_for(&self, rates: &[Rational]) -> Result<bool> {
        let Some(cap) = &self.cap_value else {
            return Err(domain("capacities were not supplied"));
        };
        if rates.len() != self.rate_coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rates for {} messages",
                rates.len(),
                self.rate_coeffs.len()
            )));
        }
        let lhs: Rational = self.rate_coeffs.iter().zip(rates).map(|(a, r)| a * r).sum();
        Ok(lhs <= *cap)
    }
}

fn labelled<'a>(g: &'a GroundSet, v: &'a [Rational]) -> impl Iterator<Item = (String, &'a Rational)> + 'a {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (g.label(i), c))
}

fn side(terms: Vec<(String, &Rational)>, sym: char) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .into_iter()
        .map(|(l, c)| {
            if c == &Rational::from_integer(1.into()) {
                format!("{sym}[{l}]")
            } else {
                format!("{} {sym}[{l}]", rational::format(c))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for InstantiatedInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", side(self.rate_terms().collect(), 'R'), side(self.capacity_terms().collect(), 'C'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{gcsb3, standard_cutset, Gcsb3Variant};
    use crate::rational::int;
    use crate::setcalc::IndexSet;

    #[test]
    fn generic_three_sink_cutset() {
        let fam = SubsetFamily::generic(3).unwrap();
        let b = standard_cutset(IndexSet::new(&[1]).unwrap()).unwrap();
        let inst = instantiate(&b, &fam, &fam, None).unwrap();
        let rates: Vec<String> = inst.rate_terms().map(|(l, _)| l).collect();
        assert_eq!(rates, vec!["{1}", "{1,2}", "{1,3}", "{1,2,3}"]);
        assert_eq!(inst.rate_coeffs(), inst.capacity_coeffs());
        assert!(inst.cap_value().is_none());
    }

    #[test]
    fn variant_d_weights() {
        let fam = SubsetFamily::generic(3).unwrap();
        let caps = ModularFunction::new(fam.ground(), vec![int(1); 7]).unwrap();
        let inst = instantiate(&gcsb3(1, 2, 3, Gcsb3Variant::D).unwrap(), &fam, &fam, Some(&caps)).unwrap();
        // every message weight 2 except the triple-demanded one at 3
        let w: Vec<_> = inst.rate_coeffs().to_vec();
        let top = fam.ground().index_of("{1,2,3}").unwrap();
        for (i, c) in w.iter().enumerate() {
            assert_eq!(*c, if i == top { int(3) } else { int(2) });
        }
        assert_eq!(inst.cap_value().unwrap(), &int(15));
        assert!(inst.holds_for(&vec![int(1); 7]).unwrap());
        assert!(!inst.holds_for(&vec![int(2); 7]).unwrap());
    }

    #[test]
    fn empty_messages_are_degenerate() {
        let cuts = SubsetFamily::generic(2).unwrap();
        let g = GroundSet::new(1).unwrap();
        let msgs = SubsetFamily::from_masks(&g, vec![0, 0]).unwrap();
        let inst = instantiate(&standard_cutset(IndexSet::range(2)).unwrap(), &cuts, &msgs, None).unwrap();
        assert!(inst.is_degenerate());
        assert!(inst.to_string().starts_with("0 <= "));
        let b = gcsb3(1, 2, 3, Gcsb3Variant::A).unwrap();
        assert!(instantiate(&b, &cuts, &msgs, None).is_err());
    }

    #[test]
    fn capacity_scaling() {
        let fam = SubsetFamily::generic(3).unwrap();
        let caps = ModularFunction::new(fam.ground(), (1..=7).map(int).collect()).unwrap();
        let lam = crate::rational::frac(5, 3);
        let scaled = caps.scaled(&lam).unwrap();
        let b = gcsb3(2, 3, 1, Gcsb3Variant::C).unwrap();
        let x = instantiate(&b, &fam, &fam, Some(&caps)).unwrap();
        let y = instantiate(&b, &fam, &fam, Some(&scaled)).unwrap();
        assert_eq!(x.rate_coeffs(), y.rate_coeffs());
        assert_eq!(y.cap_value().unwrap(), &(x.cap_value().unwrap() * &lam));
    }
}
