//! Symbolic generalized cut-set bounds.
//!
//! A bound is a weighted list of level terms `(r, U, w)`. The same list is read
//! on both sides: `Σ w R(I^(r)(U)) <= Σ w C(A^(r)(U))`, with `I_k` the demand
//! of sink `k` and `A_k` a basic cut for it.

mod coeffs;
mod enumerate;
mod generators;
mod instantiate;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{domain, Error, Result};
use crate::rational::{self, int, Rational};
use crate::setcalc::IndexSet;

pub use coeffs::{alpha, beta, beta_prime_identity_check};
pub use enumerate::{enumerate_bounds, structural_theorem2_bounds, RuleSet};
pub use generators::{
    coverage_report, gcsb3, gcsb_k, gcsb_k_cor2, gcsb_k_cor3, standard_cutset, CoverageReport, Theorem2Params,
};
pub use instantiate::{instantiate, InstantiatedInequality};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundTerm {
    pub r: usize,
    pub u: IndexSet,
    pub weight: Rational,
}

impl BoundTerm {
    pub fn new(r: usize, u: IndexSet, weight: Rational) -> Result<Self> {
        if u.is_empty() {
            return Err(domain("term index set must be nonempty"));
        }
        if r == 0 || r > u.len() {
            return Err(domain(format!("term level {r} outside 1..={}", u.len())));
        }
        if !weight.is_positive() {
            return Err(domain(format!("term weight must be positive, got {}", rational::format(&weight))));
        }
        Ok(Self { r, u, weight })
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        (self.u.len(), self.u.to_vec(), self.r).cmp(&(other.u.len(), other.u.to_vec(), other.r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gcsb3Variant {
    A,
    B,
    C,
    D,
}

impl Gcsb3Variant {
    pub const ALL: [Gcsb3Variant; 4] = [Self::A, Self::B, Self::C, Self::D];
}

impl fmt::Display for Gcsb3Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Self::A => 'a',
            Self::B => 'b',
            Self::C => 'c',
            Self::D => 'd',
        };
        write!(f, "{c}")
    }
}

impl FromStr for Gcsb3Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            "d" => Ok(Self::D),
            _ => Err(domain(format!("unknown variant `{s}`"))),
        }
    }
}

/// Which rule produced a bound, with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Provenance {
    Csb { u: IndexSet },
    Gcsb3 { variant: Gcsb3Variant, i: usize, j: usize, k: usize },
    GcsbK { g: IndexSet, u: IndexSet, t: IndexSet, r_q: BTreeMap<usize, usize> },
    Cor2 { u: IndexSet, q: BTreeSet<usize> },
    Cor3 { u: IndexSet, m: usize },
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Csb { u } => write!(f, "CSB({u})"),
            Self::Gcsb3 { variant, i, j, k } => write!(f, "GCSB3{variant}({i},{j},{k})"),
            Self::GcsbK { g, u, t, r_q } => {
                let q: BTreeSet<usize> = r_q.keys().copied().collect();
                let r: Vec<String> = r_q.values().map(|x| x.to_string()).collect();
                write!(f, "GCSBK({g},{u},{t},{},({}))", fmt_set(&q), r.join(","))
            }
            Self::Cor2 { u, q } => write!(f, "COR2({u},{})", fmt_set(q)),
            Self::Cor3 { u, m } => write!(f, "COR3({u},{m})"),
        }
    }
}

/// A bound with canonically ordered, merged terms. Weights keep the scale
/// the generating rule produced; [`BoundInequality::canonical`] rescales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInequality {
    terms: Vec<BoundTerm>,
    provenance: Provenance,
}

impl BoundInequality {
    /// Sorts by `(|U|, U, r)` and sums weights of equal `(U, r)`.
    pub fn new(terms: Vec<BoundTerm>, provenance: Provenance) -> Result<Self> {
        if terms.is_empty() {
            return Err(domain("a bound needs at least one term"));
        }
        let mut terms = terms;
        terms.sort_by(BoundTerm::key_cmp);
        let mut merged: Vec<BoundTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.r == t.r && last.u == t.u => last.weight += t.weight,
                _ => merged.push(t),
            }
        }
        Ok(Self { terms: merged, provenance })
    }

    pub fn terms(&self) -> &[BoundTerm] {
        &self.terms
    }

    /// Terms applied to messages. Identical to [`Self::capacity_terms`] by construction.
    pub fn rate_terms(&self) -> &[BoundTerm] {
        &self.terms
    }

    pub fn capacity_terms(&self) -> &[BoundTerm] {
        &self.terms
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest sink index referenced.
    pub fn max_index(&self) -> usize {
        self.terms.iter().filter_map(|t| t.u.max()).max().unwrap_or(0)
    }

    /// Same bound scaled to coprime integer weights.
    pub fn canonical(&self) -> BoundInequality {
        let w: Vec<Rational> = self.terms.iter().map(|t| t.weight.clone()).collect();
        let scaled = rational::to_coprime_integers(&w);
        let terms = self
            .terms
            .iter()
            .zip(scaled)
            .map(|(t, weight)| BoundTerm { weight, ..t.clone() })
            .collect();
        BoundInequality { terms, provenance: self.provenance.clone() }
    }

    /// Equal term lists up to positive scaling.
    pub fn same_terms(&self, other: &BoundInequality) -> bool {
        self.canonical().terms == other.canonical().terms
    }

    /// Weight each nonempty `V ⊆ [k]` receives: `Σ w [|V ∩ U| >= r]`.
    /// Index `V.bits() - 1`. Any network's instantiation depends on the bound
    /// only through this vector.
    pub fn profile(&self, k: usize) -> Vec<Rational> {
        (1u32..1 << k)
            .map(|v| {
                self.terms.iter().fold(int(0), |acc, t| {
                    if (v & t.u.bits()).count_ones() as usize >= t.r {
                        acc + &t.weight
                    } else {
                        acc
                    }
                })
            })
            .collect()
    }
}

impl fmt::Display for BoundInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |sym: char, fam: char| {
            self.terms
                .iter()
                .map(|t| {
                    let w = if t.weight == int(1) { String::new() } else { format!("{} ", rational::format(&t.weight)) };
                    format!("{w}{sym}({fam}^({})({}))", t.r, t.u)
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        write!(f, "{} <= {}", side('R', 'I'), side('C', 'A'))
    }
}
