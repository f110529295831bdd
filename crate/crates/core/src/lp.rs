//! Dense two-phase simplex over exact rationals.
//! Sized for the small systems this crate produces (tens of rows). Each solve
//! first runs on `i128` fractions with checked arithmetic and restarts on
//! arbitrary precision if anything overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedMul, CheckedSub, One, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

/// Field operations that may report overflow.
trait Field: Clone + Sized {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn sgn(&self) -> Ordering;
    fn ord(&self, other: &Self) -> Ordering;
    fn negate(&self) -> Option<Self>;
    fn quot(&self, other: &Self) -> Option<Self>;
    /// `self - f * p`
    fn sub_mul(&self, f: &Self, p: &Self) -> Option<Self>;
    fn to_rational(&self) -> Rational;
}

impl Field for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sgn(&self) -> Ordering {
        Ord::cmp(self, &Zero::zero())
    }
    fn ord(&self, other: &Self) -> Ordering {
        Ord::cmp(self, other)
    }
    fn negate(&self) -> Option<Self> {
        Some(-self.clone())
    }
    fn quot(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn sub_mul(&self, f: &Self, p: &Self) -> Option<Self> {
        Some(self - f * p)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

type Small = Ratio<i128>;

impl Field for Small {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sgn(&self) -> Ordering {
        self.numer().cmp(&0)
    }
    fn ord(&self, other: &Self) -> Ordering {
        // cross-multiplying may overflow; Ratio's Ord avoids it
        Ord::cmp(self, other)
    }
    fn negate(&self) -> Option<Self> {
        Some(Ratio::new_raw(self.numer().checked_neg()?, *self.denom()))
    }
    fn quot(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        self.checked_mul(&other.recip())
    }
    fn sub_mul(&self, f: &Self, p: &Self) -> Option<Self> {
        self.checked_sub(&f.checked_mul(p)?)
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

fn to_small(r: &Rational) -> Option<Small> {
    // keep headroom so early products stay in range
    let n = r.numer().to_i128()?;
    let d = r.denom().to_i128()?;
    (n.unsigned_abs() < 1 << 60 && d < 1 << 60).then(|| Ratio::new_raw(n, d))
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    obj: Vec<T>,
    obj_rhs: T,
    basis: Vec<usize>,
}

impl<T: Field> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) -> Option<()> {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.quot(&p)?;
        }
        self.rhs[row] = self.rhs[row].quot(&p)?;
        let prow = self.rows[row].clone();
        let prhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_nil() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_nil() {
                    *v = v.sub_mul(&f, pv)?;
                }
            }
            self.rhs[i] = self.rhs[i].sub_mul(&f, &prhs)?;
        }
        if !self.obj[col].is_nil() {
            let f = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_nil() {
                    *v = v.sub_mul(&f, pv)?;
                }
            }
            self.obj_rhs = self.obj_rhs.sub_mul(&f, &prhs)?;
        }
        self.basis[row] = col;
        Some(())
    }

    /// Maximizes; columns `>= allowed` never enter. `Some(false)` if unbounded.
    /// Dantzig pricing for a bounded number of pivots, then Bland's rule,
    /// which cannot cycle.
    fn run(&mut self, allowed: usize) -> Option<bool> {
        let mut budget = 20 * (self.rows.len() + allowed);
        loop {
            let negative = |j: &usize| self.obj[*j].sgn() == Ordering::Less;
            let entering = if budget > 0 {
                budget -= 1;
                (0..allowed).filter(negative).min_by(|&a, &b| self.obj[a].ord(&self.obj[b]).then(a.cmp(&b)))
            } else {
                (0..allowed).find(negative)
            };
            let Some(col) = entering else {
                return Some(true);
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.sgn() != Ordering::Greater {
                    continue;
                }
                let ratio = self.rhs[i].quot(a)?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => match ratio.ord(br) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*bi],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col)?,
                None => return Some(false),
            }
        }
    }
}

fn solve<T: Field>(
    objective: &[T],
    constraints: &[(Vec<T>, Relation, T)],
    nonneg: &[bool],
) -> Option<LpOutcome> {
    let n = objective.len();
    // column layout: one column per variable, plus a negative part for free ones
    let mut neg_col = vec![None; n];
    let mut ncols = n;
    for j in 0..n {
        if !nonneg[j] {
            neg_col[j] = Some(ncols);
            ncols += 1;
        }
    }
    let nslack = constraints.iter().filter(|c| c.1 != Relation::Eq).count();
    let m = constraints.len();
    let art_start = ncols + nslack;
    let width = art_start + m;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut slack = ncols;
    for (coeffs, rel, b) in constraints {
        let mut row = vec![T::nil(); width];
        for j in 0..n {
            row[j] = coeffs[j].clone();
            if let Some(k) = neg_col[j] {
                row[k] = coeffs[j].negate()?;
            }
        }
        match rel {
            Relation::Le => {
                row[slack] = T::unit();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = T::unit().negate()?;
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut b = b.clone();
        if b.sgn() == Ordering::Less {
            for v in row.iter_mut() {
                *v = v.negate()?;
            }
            b = b.negate()?;
        }
        rows.push(row);
        rhs.push(b);
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[art_start + i] = T::unit();
    }

    // phase 1: maximize minus the sum of artificials
    let mut obj = vec![T::nil(); width];
    let mut obj_rhs = T::nil();
    for v in &mut obj[art_start..] {
        *v = T::unit();
    }
    let one = T::unit();
    for i in 0..m {
        for j in 0..width {
            if !rows[i][j].is_nil() {
                obj[j] = obj[j].sub_mul(&one, &rows[i][j])?;
            }
        }
        obj_rhs = obj_rhs.sub_mul(&one, &rhs[i])?;
    }
    let mut t = Tableau { rows, rhs, obj, obj_rhs, basis: (art_start..width).collect() };
    t.run(width)?;
    if t.obj_rhs.sgn() == Ordering::Less {
        return Some(LpOutcome::Infeasible);
    }
    // drive remaining artificials out of the basis; rows that cannot be are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= art_start {
            if let Some(col) = (0..art_start).find(|&j| !t.rows[i][j].is_nil()) {
                t.pivot(i, col)?;
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    t.obj = vec![T::nil(); width];
    t.obj_rhs = T::nil();
    for j in 0..n {
        t.obj[j] = objective[j].negate()?;
        if let Some(k) = neg_col[j] {
            t.obj[k] = objective[j].clone();
        }
    }
    for i in 0..t.rows.len() {
        let f = t.obj[t.basis[i]].clone();
        if f.is_nil() {
            continue;
        }
        for j in 0..width {
            if !t.rows[i][j].is_nil() {
                t.obj[j] = t.obj[j].sub_mul(&f, &t.rows[i][j])?;
            }
        }
        t.obj_rhs = t.obj_rhs.sub_mul(&f, &t.rhs[i])?;
    }
    if !t.run(art_start)? {
        return Some(LpOutcome::Unbounded);
    }
    let mut col_val = vec![<Rational as Zero>::zero(); art_start];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < art_start {
            col_val[b] = t.rhs[i].to_rational();
        }
    }
    let x = (0..n)
        .map(|j| match neg_col[j] {
            Some(k) => &col_val[j] - &col_val[k],
            None => col_val[j].clone(),
        })
        .collect();
    Some(LpOutcome::Optimal { x, value: t.obj_rhs.to_rational() })
}

fn try_small(objective: &[Rational], constraints: &[Constraint], nonneg: &[bool]) -> Option<LpOutcome> {
    let obj = objective.iter().map(to_small).collect::<Option<Vec<_>>>()?;
    let cons = constraints
        .iter()
        .map(|c| Some((c.coeffs.iter().map(to_small).collect::<Option<Vec<_>>>()?, c.relation, to_small(&c.rhs)?)))
        .collect::<Option<Vec<_>>>()?;
    solve(&obj, &cons, nonneg)
}

/// Maximizes `objective · x` subject to `constraints`, with `x_j >= 0` where
/// `nonneg[j]` and `x_j` free otherwise.
pub fn maximize(objective: &[Rational], constraints: &[Constraint], nonneg: &[bool]) -> LpOutcome {
    assert_eq!(nonneg.len(), objective.len());
    assert!(constraints.iter().all(|c| c.coeffs.len() == objective.len()));
    if let Some(out) = try_small(objective, constraints, nonneg) {
        return out;
    }
    let cons: Vec<_> = constraints.iter().map(|c| (c.coeffs.clone(), c.relation, c.rhs.clone())).collect();
    solve(objective, &cons, nonneg).expect("arbitrary precision cannot overflow")
}

pub fn is_feasible(constraints: &[Constraint], nonneg: &[bool]) -> bool {
    let zero = vec![Rational::zero(); nonneg.len()];
    !matches!(maximize(&zero, constraints, nonneg), LpOutcome::Infeasible)
}

/// Whether `target` is a nonnegative combination of `generators`.
/// All vectors are assumed nonnegative.
pub fn in_cone(target: &[Rational], generators: &[&[Rational]]) -> bool {
    let support: Vec<usize> = (0..target.len()).filter(|&d| !target[d].is_zero()).collect();
    if support.is_empty() {
        return true;
    }
    // a generator reaching outside the target's support can only enter with weight 0
    let usable: Vec<&[Rational]> = generators
        .iter()
        .copied()
        .filter(|g| g.iter().zip(target).all(|(gv, tv)| gv.is_zero() || !tv.is_zero()))
        .collect();
    if !support.iter().all(|&d| usable.iter().any(|g| !g[d].is_zero())) {
        return false;
    }
    let constraints: Vec<Constraint> = support
        .iter()
        .map(|&d| Constraint {
            coeffs: usable.iter().map(|g| g[d].clone()).collect(),
            relation: Relation::Eq,
            rhs: target[d].clone(),
        })
        .collect();
    is_feasible(&constraints, &vec![true; usable.len()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn le(c: &[i64], b: i64) -> Constraint {
        Constraint {
            coeffs: c.iter().map(|&v| int(v)).collect(),
            relation: Relation::Le,
            rhs: int(b),
        }
    }

    #[test]
    fn small_optimum() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let out = maximize(&[int(1), int(1)], &[le(&[1, 2], 4), le(&[3, 1], 6)], &[true, true]);
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, frac(14, 5));
                assert_eq!(x, vec![frac(8, 5), frac(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let c = [le(&[1], -1)];
        assert_eq!(maximize(&[int(0)], &c, &[true]), LpOutcome::Infeasible);
        assert_eq!(maximize(&[int(1)], &[le(&[-1], 0)], &[true]), LpOutcome::Unbounded);
        // free variable can go negative
        match maximize(&[int(-1)], &[le(&[-1], 3)], &[false]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_rows() {
        let cs = [
            Constraint { coeffs: vec![int(1), int(1)], relation: Relation::Eq, rhs: int(2) },
            Constraint { coeffs: vec![int(1), int(0)], relation: Relation::Ge, rhs: int(1) },
            // duplicated equality exercises the redundant-row path
            Constraint { coeffs: vec![int(2), int(2)], relation: Relation::Eq, rhs: int(4) },
        ];
        match maximize(&[int(0), int(1)], &cs, &[true, true]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cone_membership() {
        let g1 = [int(1), int(0)];
        let g2 = [int(1), int(1)];
        assert!(in_cone(&[int(3), int(1)], &[&g1, &g2]));
        assert!(!in_cone(&[int(0), int(1)], &[&g1, &g2]));
        assert!(in_cone(&[int(0), int(0)], &[]));
    }

    #[test]
    fn overflow_falls_back() {
        use num_traits::Pow;
        let big = Rational::from_integer(BigInt::from(10).pow(40u32));
        let c = Constraint { coeffs: vec![big.clone(), int(1)], relation: Relation::Le, rhs: big.clone() };
        match maximize(&[int(1), int(0)], &[c], &[true, true]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(1)),
            other => panic!("{other:?}"),
        }
        // moderate inputs whose products leave i128
        let m = Rational::from_integer(BigInt::from(1i64 << 59));
        let cs = [
            Constraint { coeffs: vec![m.clone(), int(1)], relation: Relation::Le, rhs: m.clone() * &m },
            Constraint { coeffs: vec![int(1), m.clone()], relation: Relation::Le, rhs: m.clone() * &m },
        ];
        assert!(matches!(maximize(&[int(1), int(1)], &cs, &[true, true]), LpOutcome::Optimal { .. }));
    }
}
