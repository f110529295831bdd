//! Ground sets, bit-indexed subsets, and subset families.
//!
//! The central operator is the intersection level
//! `S^(r)(U) = ∪_{U' ⊆ U, |U'| = r} ∩_{k ∈ U'} S_k`, which interpolates between
//! the union (`r = 1`) and the intersection (`r = |U|`) of the family members
//! indexed by `U`.
//!
//! Family indices are 1-based at the API boundary (`U ⊆ {1, …, K}`) and
//! 0-based bits internally. Ground elements are always 0-based.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

/// Maximum number of elements in a ground set.
pub const MAX_GROUND: usize = 64;
/// Maximum number of members in a subset family.
pub const MAX_FAMILY: usize = 16;

#[derive(Debug, PartialEq, Eq)]
struct GroundInner {
    size: usize,
    labels: Option<Vec<String>>,
}

/// A finite ground set `{0, …, n-1}`, optionally labelled.
#[derive(Debug, Clone)]
pub struct GroundSet(Arc<GroundInner>);

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for GroundSet {}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_GROUND {
            return Err(domain(format!("ground size {size} outside 1..={MAX_GROUND}")));
        }
        Ok(Self(Arc::new(GroundInner { size, labels: None })))
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let size = labels.len();
        if size == 0 || size > MAX_GROUND {
            return Err(domain(format!("ground size {size} outside 1..={MAX_GROUND}")));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != size {
            return Err(domain("ground labels must be unique"));
        }
        Ok(Self(Arc::new(GroundInner {
            size,
            labels: Some(labels),
        })))
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    /// Label of element `i`, or its decimal index when unlabelled.
    pub fn label(&self, i: usize) -> String {
        match &self.0.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn full_mask(&self) -> u64 {
        if self.0.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.0.size) - 1
        }
    }

    pub fn empty(&self) -> ElementSet {
        ElementSet {
            ground: self.clone(),
            bits: 0,
        }
    }

    pub fn full(&self) -> ElementSet {
        ElementSet {
            ground: self.clone(),
            bits: self.full_mask(),
        }
    }

    pub fn set(&self, members: &[usize]) -> Result<ElementSet> {
        let mut bits = 0u64;
        for &m in members {
            if m >= self.size() {
                return Err(domain(format!("element {m} outside ground of size {}", self.size())));
            }
            bits |= 1 << m;
        }
        Ok(ElementSet {
            ground: self.clone(),
            bits,
        })
    }

    pub fn from_bits(&self, bits: u64) -> Result<ElementSet> {
        if bits & !self.full_mask() != 0 {
            return Err(domain(format!("bit mask {bits:#x} exceeds ground size {}", self.size())));
        }
        Ok(ElementSet {
            ground: self.clone(),
            bits,
        })
    }
}

/// A subset of a ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSet {
    ground: GroundSet,
    bits: u64,
}

impl ElementSet {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.bits >> i & 1 == 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members().collect()
    }

    fn check(&self, other: &ElementSet) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch(
                "element sets are drawn from different ground sets".into(),
            ));
        }
        Ok(())
    }

    pub fn union(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check(other)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn intersection(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check(other)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn difference(&self, other: &ElementSet) -> Result<ElementSet> {
        self.check(other)?;
        Ok(self.with_bits(self.bits & !other.bits))
    }

    pub fn is_subset(&self, other: &ElementSet) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub(crate) fn with_bits(&self, bits: u64) -> ElementSet {
        ElementSet {
            ground: self.ground.clone(),
            bits,
        }
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.members().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.ground.label(i))?;
        }
        write!(f, "}}")
    }
}

/// Iterates the set bit positions of a word, ascending.
#[derive(Debug, Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// A subset of the family index range `[K] = {1, …, K}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    /// Builds an index set from 1-based indices.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > MAX_FAMILY {
                return Err(domain(format!("family index {i} outside 1..={MAX_FAMILY}")));
            }
            bits |= 1 << (i - 1);
        }
        Ok(Self(bits))
    }

    /// `[k] = {1, …, k}`.
    pub fn range(k: usize) -> Self {
        debug_assert!(k <= MAX_FAMILY);
        Self(((1u64 << k) - 1) as u32)
    }

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= MAX_FAMILY && self.0 >> (i - 1) & 1 == 1
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    /// 1-based members, ascending.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        BitIter(self.0 as u64).map(|i| i + 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The `r` smallest members, `{t_1, …, t_r}`.
    pub fn prefix(self, r: usize) -> IndexSet {
        let mut bits = 0u32;
        for i in self.iter().take(r) {
            bits |= 1 << (i - 1);
        }
        IndexSet(bits)
    }

    /// Every nonempty subset of `[k]`, ordered by bit pattern.
    pub fn nonempty_subsets(k: usize) -> impl Iterator<Item = IndexSet> {
        (1u32..(1u32 << k)).map(IndexSet)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// An ordered family `S_1, …, S_K` of subsets of one ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    ground: GroundSet,
    masks: Vec<u64>,
}

impl SubsetFamily {
    pub fn new(ground: &GroundSet, sets: &[ElementSet]) -> Result<Self> {
        if sets.is_empty() || sets.len() > MAX_FAMILY {
            return Err(domain(format!(
                "family size {} outside 1..={MAX_FAMILY}",
                sets.len()
            )));
        }
        let mut masks = Vec::with_capacity(sets.len());
        for s in sets {
            if s.ground() != ground {
                return Err(Error::GroundMismatch(
                    "family member drawn from a different ground set".into(),
                ));
            }
            masks.push(s.bits());
        }
        Ok(Self {
            ground: ground.clone(),
            masks,
        })
    }

    pub fn from_masks(ground: &GroundSet, masks: Vec<u64>) -> Result<Self> {
        let sets = masks
            .iter()
            .map(|&m| ground.from_bits(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground, &sets)
    }

    /// The family whose ground set is every nonempty `V ⊆ [k]` and whose
    /// member `S_i` collects the `V` containing `i`. Any containment between
    /// intersection levels that holds here holds for every family of size `k`.
    pub fn generic(k: usize) -> Result<Self> {
        if k == 0 || k > 6 {
            return Err(domain(format!("generic family needs 1 <= k <= 6, got {k}")));
        }
        let labels: Vec<String> = IndexSet::nonempty_subsets(k).map(|v| v.to_string()).collect();
        let ground = GroundSet::with_labels(labels)?;
        let masks = (1..=k)
            .map(|i| {
                IndexSet::nonempty_subsets(k)
                    .enumerate()
                    .filter(|(_, v)| v.contains(i))
                    .fold(0u64, |m, (e, _)| m | 1 << e)
            })
            .collect();
        Self::from_masks(&ground, masks)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn k(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Member `S_k` for 1-based `k`.
    pub fn set(&self, k: usize) -> Result<ElementSet> {
        if k == 0 || k > self.k() {
            return Err(domain(format!("family index {k} outside 1..={}", self.k())));
        }
        Ok(self.ground.from_bits(self.masks[k - 1]).expect("mask fits ground"))
    }

    pub fn check_indices(&self, u: IndexSet) -> Result<()> {
        if !u.is_subset(IndexSet::range(self.k())) {
            return Err(domain(format!("index set {u} outside [{}]", self.k())));
        }
        Ok(())
    }
}

/// Mask form of the intersection level, enumerating every `r`-subset of `u`.
///
/// Callers guarantee `1 <= r <= |u|` and `u ⊆ [masks.len()]`.
pub(crate) fn level_mask(masks: &[u64], u: u32, r: usize) -> u64 {
    let mut members = [0usize; MAX_FAMILY];
    let mut m = 0;
    for k in BitIter(u as u64) {
        members[m] = k;
        m += 1;
    }
    let mut acc = 0u64;
    // Gosper's hack over r-combinations of the m positions
    let mut c: u32 = (1u32 << r) - 1;
    let limit: u32 = 1u32 << m;
    while c < limit {
        acc |= BitIter(c as u64).fold(u64::MAX, |a, p| a & masks[members[p]]);
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        c = (((ripple ^ c) >> 2) / low) | ripple;
    }
    acc
}

/// Mask-level body of [`appendix_a_identity_check`]; parameters pre-validated.
pub(crate) fn appendix_identity_masks(masks: &[u64], r_prime: usize, j: usize) -> bool {
    let mut g = [0u64; MAX_FAMILY];
    for r in 1..=j {
        g[r - 1] = if r <= r_prime {
            masks[r - 1]
        } else {
            masks[r - 1] | level_mask(masks, IndexSet::range(r).bits(), r_prime + 1)
        };
    }
    let all = IndexSet::range(j).bits();
    (1..=j).all(|r| {
        let lhs = level_mask(&g[..j], all, r);
        let rhs = if r <= r_prime {
            level_mask(masks, all, r)
        } else {
            level_mask(masks, IndexSet::range(j - r + r_prime + 1).bits(), r_prime + 1)
        };
        lhs == rhs
    })
}

/// `S^(r)(U)`: union over all `r`-element `U' ⊆ U` of `∩_{k ∈ U'} S_k`.
pub fn intersect_level(family: &SubsetFamily, u: IndexSet, r: usize) -> Result<ElementSet> {
    check_level(family, u, r)?;
    let bits = level_mask(&family.masks, u.bits(), r);
    family.ground.from_bits(bits)
}

fn check_level(family: &SubsetFamily, u: IndexSet, r: usize) -> Result<()> {
    if u.is_empty() {
        return Err(domain("index set U must be nonempty"));
    }
    family.check_indices(u)?;
    if r == 0 || r > u.len() {
        return Err(domain(format!("level r = {r} outside 1..={}", u.len())));
    }
    Ok(())
}

fn check_appendix_params(family: &SubsetFamily, r_prime: usize, j: usize) -> Result<()> {
    if !(0 < r_prime && r_prime < j && j <= family.k()) {
        return Err(domain(format!(
            "need 0 < r' < J <= K, got r' = {r_prime}, J = {j}, K = {}",
            family.k()
        )));
    }
    Ok(())
}

/// The transformed family `G_r = S_r ∪ T_r`, `r = 1, …, J`, with `T_r = ∅`
/// for `r <= r'` and `T_r = S^(r'+1)([r])` otherwise.
pub fn appendix_a_family(family: &SubsetFamily, r_prime: usize, j: usize) -> Result<SubsetFamily> {
    check_appendix_params(family, r_prime, j)?;
    let masks = (1..=j)
        .map(|r| {
            let s = family.masks[r - 1];
            if r <= r_prime {
                s
            } else {
                s | level_mask(&family.masks, IndexSet::range(r).bits(), r_prime + 1)
            }
        })
        .collect();
    SubsetFamily::from_masks(&family.ground, masks)
}

/// Checks `G^(r)([J]) = S^(r)([J])` for `r <= r'` and
/// `G^(r)([J]) = S^(r'+1)([J-r+r'+1])` for `r > r'`. The left side is the
/// level operator applied to the constructed family, the right side the level
/// operator applied to the original one.
pub fn appendix_a_identity_check(family: &SubsetFamily, r_prime: usize, j: usize) -> Result<bool> {
    check_appendix_params(family, r_prime, j)?;
    Ok(appendix_identity_masks(&family.masks, r_prime, j))
}
