//! Seeded randomized campaigns over the gap evaluators and the two
//! set-identity checks.
//!
//! Trial `i` draws from a ChaCha8 stream `i` keyed by the master seed, so a
//! campaign's summary does not depend on how trials are scheduled.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::beta_prime_identity_check;
use crate::error::{domain, Error, Result};
use crate::rational::frac;
use crate::setcalc::{appendix_identity_masks, level_mask, GroundSet, IndexSet};
use crate::setfn::gaps::{lemma1_gap_masks, lemma2_gap_masks, multiway_gap_masks};
use crate::setfn::{entropy_oracle, JointDistribution, ModularFunction, Scalar, SetFunction, MAX_VARIABLES};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest `K` for the gap campaigns (all parameterizations are swept).
pub const MAX_CAMPAIGN_K: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Campaign {
    Lemma1,
    Corollary1,
    Lemma2,
    Multiway,
    AppendixA,
    AppendixC,
}

impl Campaign {
    pub const ALL: [Campaign; 6] =
        [Self::Lemma1, Self::Corollary1, Self::Lemma2, Self::Multiway, Self::AppendixA, Self::AppendixC];

    fn is_gap(self) -> bool {
        matches!(self, Self::Lemma1 | Self::Corollary1 | Self::Lemma2 | Self::Multiway)
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lemma1 => "1",
            Self::Corollary1 => "cor1",
            Self::Lemma2 => "2",
            Self::Multiway => "multiway",
            Self::AppendixA => "appendixA",
            Self::AppendixC => "appendixC",
        })
    }
}

impl FromStr for Campaign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain(format!("unknown campaign `{s}` (expected 1, 2, cor1, multiway, appendixA, appendixC)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FunctionKind {
    /// Entropy of random binary variables, one variable per ground element.
    #[default]
    Entropy,
    /// Random nonnegative rational weights; gaps must vanish exactly.
    Modular,
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Entropy => "entropy",
            Self::Modular => "modular",
        })
    }
}

impl FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(Self::Entropy),
            "modular" => Ok(Self::Modular),
            _ => Err(domain(format!("unknown function kind `{s}` (expected entropy or modular)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub campaign: Campaign,
    pub functions: FunctionKind,
    pub trials: usize,
    /// Ground size for the gap campaigns and the exhaustive identity sweep.
    pub ground: usize,
    /// Family size `K`.
    pub k: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl CampaignConfig {
    pub fn new(campaign: Campaign) -> Self {
        Self {
            campaign,
            functions: FunctionKind::Entropy,
            trials: 1000,
            ground: 5,
            k: 4,
            seed: 0,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(domain(format!("tolerance {} must be finite and nonnegative", self.tolerance)));
        }
        match self.campaign {
            Campaign::AppendixC => Ok(()),
            Campaign::AppendixA => {
                if self.ground == 0 || self.ground > 64 {
                    return Err(domain(format!("ground size {} outside 1..=64", self.ground)));
                }
                if self.k < 2 || self.k > 16 {
                    return Err(domain(format!("K = {} outside 2..=16", self.k)));
                }
                Ok(())
            }
            _ => {
                let max_ground = match self.functions {
                    FunctionKind::Entropy => MAX_VARIABLES,
                    FunctionKind::Modular => 64,
                };
                if self.ground == 0 || self.ground > max_ground {
                    return Err(domain(format!("ground size {} outside 1..={max_ground}", self.ground)));
                }
                if self.k == 0 || self.k > MAX_CAMPAIGN_K {
                    return Err(domain(format!("K = {} outside 1..={MAX_CAMPAIGN_K}", self.k)));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub campaign: Campaign,
    pub functions: FunctionKind,
    pub trials: usize,
    pub tolerance: f64,
    /// Individual gap evaluations or identity checks.
    pub checks: u64,
    /// Parameter choices whose precondition failed on the drawn family.
    pub skipped: u64,
    pub violations: u64,
    pub min_gap: Option<f64>,
    pub max_gap: Option<f64>,
    pub first_violation: Option<String>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl fmt::Display for CampaignSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "campaign: {}", self.campaign)?;
        if self.campaign.is_gap() {
            writeln!(f, "functions: {}", self.functions)?;
            writeln!(f, "tolerance: {:e}", self.tolerance)?;
        }
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "checks: {}", self.checks)?;
        if self.skipped > 0 {
            writeln!(f, "skipped (precondition): {}", self.skipped)?;
        }
        if let (Some(lo), Some(hi)) = (self.min_gap, self.max_gap) {
            writeln!(f, "min gap: {lo:e}")?;
            writeln!(f, "max gap: {hi:e}")?;
        }
        writeln!(f, "violations: {}", self.violations)?;
        if let Some(v) = &self.first_violation {
            writeln!(f, "first violation: {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Params {
    Lemma1 { r_prime: usize, j: usize },
    Corollary1 { r_prime: usize, j: usize, s0: u64 },
    Lemma2 { u: IndexSet, t: IndexSet, q: usize, r_q: usize },
    Multiway { u: IndexSet },
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lemma1 { r_prime, j } => write!(f, "r'={r_prime} J={j}"),
            Self::Corollary1 { r_prime, j, s0 } => write!(f, "r'={r_prime} J={j} S0={s0:#b}"),
            Self::Lemma2 { u, t, q, r_q } => write!(f, "U={u} T={t} q={q} r_q={r_q}"),
            Self::Multiway { u } => write!(f, "U={u}"),
        }
    }
}

#[derive(Debug, Default)]
struct Tally {
    checks: u64,
    skipped: u64,
    violations: u64,
    min: Option<f64>,
    max: Option<f64>,
    first: Option<String>,
}

impl Tally {
    fn record<V: Scalar>(&mut self, trial: usize, p: Params, gap: V, exact: bool, tol: f64, family: &[u64]) {
        self.checks += 1;
        let g = gap.to_f64();
        self.min = Some(self.min.map_or(g, |m| m.min(g)));
        self.max = Some(self.max.map_or(g, |m| m.max(g)));
        let bad = if exact { !gap.within(0.0) } else { !gap.at_least_neg(tol) };
        if bad {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(format!("trial {trial}, {p}, family {family:?}, gap {g:e}"));
            }
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.checks += o.checks;
        self.skipped += o.skipped;
        self.violations += o.violations;
        self.min = match (self.min, o.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = match (self.max, o.max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.first = self.first.or(o.first);
        self
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_masks<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<u64> {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0..k).map(|_| rng.random::<u64>() & full).collect()
}

/// Every valid parameterization of the chosen gap on one family.
fn sweep<F: SetFunction>(c: Campaign, f: &F, masks: &[u64], s0: u64, mut visit: impl FnMut(Params, Option<F::Value>)) {
    let k = masks.len();
    match c {
        Campaign::Lemma1 | Campaign::Corollary1 => {
            for j in 1..=k {
                for r_prime in 0..=j {
                    let (p, s) = if c == Campaign::Lemma1 {
                        (Params::Lemma1 { r_prime, j }, 0)
                    } else {
                        (Params::Corollary1 { r_prime, j, s0 }, s0)
                    };
                    visit(p, Some(lemma1_gap_masks(f, masks, r_prime, j, s)));
                }
            }
        }
        Campaign::Multiway => {
            for u in IndexSet::nonempty_subsets(k) {
                visit(Params::Multiway { u }, Some(multiway_gap_masks(f, masks, u)));
            }
        }
        Campaign::Lemma2 => {
            for u in IndexSet::nonempty_subsets(k) {
                for t in IndexSet::nonempty_subsets(k) {
                    for q in 1..=u.len() {
                        let sq = level_mask(masks, u.bits(), q);
                        for r_q in 1..=t.len() {
                            let p = Params::Lemma2 { u, t, q, r_q };
                            if sq & !level_mask(masks, t.bits(), r_q) != 0 {
                                visit(p, None);
                            } else {
                                visit(p, Some(lemma2_gap_masks(f, masks, u, t, q, r_q)));
                            }
                        }
                    }
                }
            }
        }
        Campaign::AppendixA | Campaign::AppendixC => unreachable!("identity campaigns have no gaps"),
    }
}

fn gap_trial(cfg: &CampaignConfig, trial: usize) -> Result<Tally> {
    let mut rng = trial_rng(cfg.seed, trial);
    let n = cfg.ground;
    let masks = random_masks(&mut rng, n, cfg.k);
    let s0 = random_masks(&mut rng, n, 1)[0];
    Ok(match cfg.functions {
        FunctionKind::Entropy => {
            let f = entropy_oracle(&JointDistribution::random(n, &mut rng)?);
            tally_sweep(cfg, trial, &f, &masks, s0, false)
        }
        FunctionKind::Modular => {
            let ground = GroundSet::new(n)?;
            let w = (0..n).map(|_| frac(rng.random_range(0..20), rng.random_range(1..7))).collect();
            let f = ModularFunction::new(&ground, w)?;
            tally_sweep(cfg, trial, &f, &masks, s0, true)
        }
    })
}

fn tally_sweep<F: SetFunction>(cfg: &CampaignConfig, trial: usize, f: &F, masks: &[u64], s0: u64, exact: bool) -> Tally {
    let mut tally = Tally::default();
    sweep(cfg.campaign, f, masks, s0, |p, gap| match gap {
        None => tally.skipped += 1,
        Some(g) => tally.record(trial, p, g, exact, cfg.tolerance, masks),
    });
    tally
}

fn record_identity(tally: &mut Tally, ok: bool, what: impl FnOnce() -> String) {
    tally.checks += 1;
    if !ok {
        tally.violations += 1;
        if tally.first.is_none() {
            tally.first = Some(what());
        }
    }
}

/// Exhaustive over all `J`-set families on `n` elements, `J = 2..=min(k, 4)`
/// (when `n <= 6`), then `trials` random families on 8 to 64 elements with
/// `K` up to `max(k, 8)`.
fn appendix_a(cfg: &CampaignConfig) -> Tally {
    let n = cfg.ground;
    let mut tally = Tally::default();
    if n <= 6 {
        let per_set = 1u64 << n;
        for j in 2..=cfg.k.min(4) {
            let total = per_set.pow(j as u32);
            let part = (0..total)
                .into_par_iter()
                .map(|code| {
                    let masks: Vec<u64> = (0..j).map(|i| (code >> (n * i)) & (per_set - 1)).collect();
                    let mut t = Tally::default();
                    for r_prime in 1..j {
                        record_identity(&mut t, appendix_identity_masks(&masks, r_prime, j), || {
                            format!("r'={r_prime} J={j} family {masks:?}")
                        });
                    }
                    t
                })
                .reduce(Tally::default, Tally::merge);
            tally = tally.merge(part);
        }
    }
    let kmax = cfg.k.max(8);
    let part = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let size = rng.random_range(8..=64);
            let k = rng.random_range(2..=kmax);
            // sparse and dense families both matter for the level operator
            let density = rng.random_range(1..=3);
            let masks: Vec<u64> = (0..k)
                .map(|_| {
                    let mut m = random_masks(&mut rng, size, 1)[0];
                    for _ in 1..density {
                        m &= random_masks(&mut rng, size, 1)[0];
                    }
                    m
                })
                .collect();
            let mut t = Tally::default();
            for j in 2..=k {
                for r_prime in 1..j {
                    record_identity(&mut t, appendix_identity_masks(&masks, r_prime, j), || {
                        format!("trial {trial}, r'={r_prime} J={j} family {masks:?}")
                    });
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    tally.merge(part)
}

/// Every nonempty `Q ⊆ {2..8}` against every `|U|` from `max Q` to 8.
fn appendix_c() -> Result<Tally> {
    let mut tally = Tally::default();
    for bits in 1u32..(1 << 7) {
        let q: BTreeSet<usize> = (0..7).filter(|i| bits >> i & 1 == 1).map(|i| i + 2).collect();
        let top = *q.iter().next_back().expect("nonempty");
        for size_u in top..=8 {
            let ok = beta_prime_identity_check(&q, size_u)?;
            record_identity(&mut tally, ok, || format!("Q={q:?} |U|={size_u}"));
        }
    }
    Ok(tally)
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignSummary> {
    cfg.validate()?;
    let tally = match cfg.campaign {
        Campaign::AppendixA => appendix_a(cfg),
        Campaign::AppendixC => appendix_c()?,
        _ => {
            let parts: Vec<Tally> = (0..cfg.trials).into_par_iter().map(|t| gap_trial(cfg, t)).collect::<Result<_>>()?;
            parts.into_iter().fold(Tally::default(), Tally::merge)
        }
    };
    Ok(CampaignSummary {
        campaign: cfg.campaign,
        functions: cfg.functions,
        trials: if cfg.campaign == Campaign::AppendixC { 0 } else { cfg.trials },
        tolerance: cfg.tolerance,
        checks: tally.checks,
        skipped: tally.skipped,
        violations: tally.violations,
        min_gap: tally.min,
        max_gap: tally.max,
        first_violation: tally.first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(c: Campaign, trials: usize) -> CampaignConfig {
        CampaignConfig { trials, ..CampaignConfig::new(c) }
    }

    #[test]
    fn parse_names() {
        for c in Campaign::ALL {
            assert_eq!(c.to_string().parse::<Campaign>().unwrap(), c);
        }
        assert_eq!("appendixa".parse::<Campaign>().unwrap(), Campaign::AppendixA);
        assert!("3".parse::<Campaign>().is_err());
        assert!("uniform".parse::<FunctionKind>().is_err());
    }

    #[test]
    fn entropy_gaps_are_nonnegative() {
        for c in [Campaign::Lemma1, Campaign::Corollary1, Campaign::Lemma2, Campaign::Multiway] {
            let s = run_campaign(&cfg(c, 40)).unwrap();
            assert!(s.passed(), "{s}");
            assert!(s.checks > 0);
            assert!(s.min_gap.unwrap() >= -1e-9);
        }
    }

    #[test]
    fn modular_gaps_vanish() {
        for c in [Campaign::Lemma1, Campaign::Corollary1, Campaign::Lemma2, Campaign::Multiway] {
            let s = run_campaign(&CampaignConfig { functions: FunctionKind::Modular, ..cfg(c, 30) }).unwrap();
            assert!(s.passed(), "{s}");
            assert_eq!((s.min_gap, s.max_gap), (Some(0.0), Some(0.0)));
        }
    }

    #[test]
    fn lemma2_skips_unmet_containment() {
        let s = run_campaign(&cfg(Campaign::Lemma2, 10)).unwrap();
        assert!(s.skipped > 0);
        // 15 choices each of U and T, summed over q <= |U| and r_q <= |T|
        let per_trial: u64 = 32 * 32;
        assert_eq!(s.checks + s.skipped, 10 * per_trial);
    }

    #[test]
    fn a_non_submodular_table_is_caught() {
        // f = |A|^2 is supermodular, so the multiway gap goes negative
        struct Square(GroundSet);
        impl SetFunction for Square {
            type Value = f64;
            fn ground(&self) -> &GroundSet {
                &self.0
            }
            fn value(&self, bits: u64) -> f64 {
                (bits.count_ones() as f64).powi(2)
            }
        }
        let f = Square(GroundSet::new(3).unwrap());
        let mut tally = Tally::default();
        sweep(Campaign::Multiway, &f, &[0b011, 0b110], 0, |p, g| tally.record(0, p, g.unwrap(), false, 1e-9, &[]));
        assert_eq!(tally.violations, 1);
        assert!(tally.first.unwrap().contains("U={1,2}"));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = run_campaign(&cfg(Campaign::Lemma1, 25)).unwrap();
        let b = run_campaign(&cfg(Campaign::Lemma1, 25)).unwrap();
        assert_eq!(a, b);
        let c = run_campaign(&CampaignConfig { seed: 7, ..cfg(Campaign::Lemma1, 25) }).unwrap();
        assert_ne!(a.min_gap, c.min_gap);
    }

    #[test]
    fn identity_sweeps() {
        let s = run_campaign(&CampaignConfig { ground: 3, k: 3, ..cfg(Campaign::AppendixA, 0) }).unwrap();
        // J=2: 64 families with one r', J=3: 512 families with two
        assert_eq!(s.checks, 64 + 512 * 2);
        assert!(s.passed(), "{s}");
        let s = run_campaign(&CampaignConfig { ground: 3, k: 3, ..cfg(Campaign::AppendixA, 50) }).unwrap();
        assert!(s.checks > 64 + 512 * 2);
        assert!(s.passed(), "{s}");
        let s = run_campaign(&cfg(Campaign::AppendixC, 0)).unwrap();
        assert!(s.passed(), "{s}");
        assert!(s.checks >= 127);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_campaign(&CampaignConfig { ground: 7, ..cfg(Campaign::Lemma1, 1) }).is_err());
        assert!(run_campaign(&CampaignConfig { k: 0, ..cfg(Campaign::Lemma1, 1) }).is_err());
        assert!(run_campaign(&CampaignConfig { tolerance: -1.0, ..cfg(Campaign::Lemma1, 1) }).is_err());
        assert!(run_campaign(&CampaignConfig { k: 1, ..cfg(Campaign::AppendixA, 1) }).is_err());
    }
}
