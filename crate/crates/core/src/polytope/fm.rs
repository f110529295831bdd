use num_traits::{One, Signed, Zero};

use super::{LinearSystem, Row};
use crate::error::Result;
use crate::lp::{maximize, Constraint, LpOutcome, Relation};
use crate::rational::Rational;

/// Above this many rows only the syntactic and single-row redundancy checks run.
pub const LP_REDUNDANCY_MAX_ROWS: usize = 4096;

/// Whether `s` implies `r`: some `λ > 0` with `r <= λ s` coefficientwise on
/// nonnegative variables, equality on free ones, and `λ d <= b`.
fn implies(s: &Row, r: &Row, nonneg: &[bool]) -> bool {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let raise = |v: Rational, lo: &mut Option<Rational>| {
        if lo.as_ref().is_none_or(|l| v > *l) {
            *lo = Some(v);
        }
    };
    let lower = |v: Rational, hi: &mut Option<Rational>| {
        if hi.as_ref().is_none_or(|h| v < *h) {
            *hi = Some(v);
        }
    };
    for ((c, a), &nn) in s.coeffs.iter().zip(&r.coeffs).zip(nonneg) {
        if c.is_zero() {
            let ok = if nn { !a.is_positive() } else { a.is_zero() };
            if !ok {
                return false;
            }
            continue;
        }
        let q = a / c;
        if !nn {
            raise(q.clone(), &mut lo);
            lower(q, &mut hi);
        } else if c.is_positive() {
            raise(q, &mut lo);
        } else {
            lower(q, &mut hi);
        }
    }
    let (d, b) = (&s.rhs, &r.rhs);
    if d.is_zero() {
        if b.is_negative() {
            return false;
        }
    } else if d.is_positive() {
        lower(b / d, &mut hi);
    } else {
        raise(b / d, &mut lo);
    }
    match (&lo, &hi) {
        (_, Some(h)) if !h.is_positive() => false,
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

impl LinearSystem {
    /// Canonical form with rows implied by a single other row removed and,
    /// for at most [`LP_REDUNDANCY_MAX_ROWS`] rows, every row implied by the
    /// rest removed via an exact LP.
    pub fn remove_redundant(&self) -> LinearSystem {
        let mut sys = self.canonical();
        if sys.infeasible {
            return sys;
        }
        let mut i = 0;
        while i < sys.rows.len() {
            let dominated = (0..sys.rows.len()).any(|j| j != i && implies(&sys.rows[j], &sys.rows[i], &sys.nonneg));
            if dominated {
                sys.rows.remove(i);
            } else {
                i += 1;
            }
        }
        if sys.rows.len() > LP_REDUNDANCY_MAX_ROWS {
            return sys;
        }
        let mut i = 0;
        while i < sys.rows.len() {
            let others: Vec<Constraint> = sys
                .rows
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| Constraint { coeffs: r.coeffs.clone(), relation: Relation::Le, rhs: r.rhs.clone() })
                .collect();
            match maximize(&sys.rows[i].coeffs, &others, &sys.nonneg) {
                LpOutcome::Infeasible => {
                    sys.mark_infeasible();
                    return sys;
                }
                LpOutcome::Optimal { value, .. } if value <= sys.rows[i].rhs => {
                    sys.rows.remove(i);
                }
                _ => i += 1,
            }
        }
        // a lone row can still contradict the sign constraints
        if !crate::lp::is_feasible(
            &sys.rows
                .iter()
                .map(|r| Constraint { coeffs: r.coeffs.clone(), relation: Relation::Le, rhs: r.rhs.clone() })
                .collect::<Vec<_>>(),
            &sys.nonneg,
        ) {
            sys.mark_infeasible();
        }
        sys
    }

    fn pairings(&self, vi: usize) -> usize {
        let pos = self.rows.iter().filter(|r| r.coeffs[vi].is_positive()).count();
        let neg = self.rows.iter().filter(|r| r.coeffs[vi].is_negative()).count() + usize::from(self.nonneg[vi]);
        pos * neg
    }
}

/// Projects `var` out: its feasible set is exactly the shadow of the input's.
pub fn fourier_motzkin(sys: &LinearSystem, var: &str) -> Result<LinearSystem> {
    let vi = sys.var_index(var)?;
    let mut rows = sys.rows.clone();
    if sys.nonneg[vi] {
        let mut coeffs = vec![Rational::zero(); sys.variables.len()];
        coeffs[vi] = -Rational::one();
        rows.push(Row { coeffs, rhs: Rational::zero() });
    }
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        match r.coeffs[vi].sign_class() {
            1 => pos.push(r),
            -1 => neg.push(r),
            _ => out.push(r),
        }
    }
    for p in &pos {
        for n in &neg {
            let (a, b) = (&p.coeffs[vi], -n.coeffs[vi].clone());
            let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| &b * x + a * y).collect();
            out.push(Row { coeffs, rhs: &b * &p.rhs + a * &n.rhs });
        }
    }
    let mut next = LinearSystem { rows: out, ..sys.clone() };
    next.drop_column(vi);
    Ok(next.remove_redundant())
}

trait SignClass {
    fn sign_class(&self) -> i8;
}

impl SignClass for Rational {
    fn sign_class(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

/// Eliminates `vars` in the given order.
pub fn eliminate_in_order(sys: &LinearSystem, vars: &[&str]) -> Result<LinearSystem> {
    let mut cur = sys.clone();
    for v in vars {
        cur = fourier_motzkin(&cur, v)?;
    }
    Ok(cur)
}

/// Eliminates `vars`, each time picking the one with the fewest
/// positive-by-negative row pairings (ties by position in `vars`).
pub fn eliminate(sys: &LinearSystem, vars: &[&str]) -> Result<LinearSystem> {
    for v in vars {
        sys.var_index(v)?;
    }
    let mut cur = sys.clone();
    let mut left: Vec<&str> = vars.to_vec();
    left.dedup();
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .min_by_key(|(i, v)| (cur.pairings(cur.var_index(v).expect("checked")), *i))
            .expect("nonempty");
        let v = left.remove(pos);
        cur = fourier_motzkin(&cur, v)?;
    }
    Ok(cur)
}
