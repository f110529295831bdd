//! Two-variable regions: vertices, containment, and the closed-form corner
//! points of the symmetric combination network.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{LinearSystem, Row};
use crate::error::{domain, Error, Result};
use crate::lp::{maximize, Constraint, LpOutcome, Relation};
use crate::rational::{self, binomial, int, Rational};

pub type Point = (Rational, Rational);

/// Rows plus the sign constraints, as explicit half-planes.
fn half_planes(sys: &LinearSystem) -> Vec<Row> {
    let mut rows = sys.rows.clone();
    for (i, &nn) in sys.nonneg.iter().enumerate() {
        if nn {
            let mut coeffs = vec![Rational::zero(); sys.variables.len()];
            coeffs[i] = int(-1);
            rows.push(Row { coeffs, rhs: Rational::zero() });
        }
    }
    rows
}

fn le_constraints(rows: &[Row]) -> Vec<Constraint> {
    rows.iter().map(|r| Constraint { coeffs: r.coeffs.clone(), relation: Relation::Le, rhs: r.rhs.clone() }).collect()
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Vertices of a bounded two-variable region, counterclockwise starting from
/// the lowest (then leftmost) one. Empty for an infeasible system.
pub fn vertices_2d(sys: &LinearSystem) -> Result<Vec<Point>> {
    if sys.variables.len() != 2 {
        return Err(Error::DimensionMismatch(format!("need 2 variables, got {}", sys.variables.len())));
    }
    if sys.infeasible {
        return Ok(Vec::new());
    }
    let rows = half_planes(sys);
    if !crate::lp::is_feasible(&le_constraints(&rows), &[false, false]) {
        return Ok(Vec::new());
    }
    // a nonzero recession direction, if any, lies on the boundary of some half-plane
    let mut rays: Vec<Point> = vec![(int(1), int(0)), (int(0), int(1)), (int(-1), int(0)), (int(0), int(-1))];
    for r in &rows {
        let (a, b) = (&r.coeffs[0], &r.coeffs[1]);
        if !(a.is_zero() && b.is_zero()) {
            rays.push((-b.clone(), a.clone()));
            rays.push((b.clone(), -a.clone()));
        }
    }
    for d in rays {
        if rows.iter().all(|r| !(&r.coeffs[0] * &d.0 + &r.coeffs[1] * &d.1).is_positive()) {
            return Err(Error::Unbounded(rational::format(&d.0), rational::format(&d.1)));
        }
    }
    let mut pts: Vec<Point> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (&rows[i], &rows[j]);
            let det = &a.coeffs[0] * &b.coeffs[1] - &a.coeffs[1] * &b.coeffs[0];
            if det.is_zero() {
                continue;
            }
            let x = (&a.rhs * &b.coeffs[1] - &a.coeffs[1] * &b.rhs) / &det;
            let y = (&a.coeffs[0] * &b.rhs - &a.rhs * &b.coeffs[0]) / &det;
            let p = (x, y);
            if rows.iter().all(|r| &r.coeffs[0] * &p.0 + &r.coeffs[1] * &p.1 <= r.rhs) && !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    if pts.is_empty() {
        return Err(domain("feasible bounded region without vertices"));
    }
    let start = pts
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| p.1.cmp(&q.1).then_with(|| p.0.cmp(&q.0)))
        .map(|(i, _)| i)
        .expect("nonempty");
    let origin = pts.swap_remove(start);
    // every other vertex sits at a polar angle in [0, π) from the start
    pts.sort_by(|p, q| match cross(&origin, p, q).cmp(&Rational::zero()) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => (&p.0 - &origin.0).abs().cmp(&(&q.0 - &origin.0).abs()),
    });
    pts.insert(0, origin);
    Ok(pts)
}

/// Whether every point of `inner` satisfies `outer`. Bounded planar regions
/// are compared through the vertices of `inner`; everything else through one
/// exact LP per outer constraint.
pub fn contains(outer: &LinearSystem, inner: &LinearSystem) -> Result<bool> {
    if outer.variables != inner.variables {
        return Err(Error::DimensionMismatch(format!(
            "variables differ: {:?} vs {:?}",
            outer.variables, inner.variables
        )));
    }
    if inner.infeasible {
        return Ok(true);
    }
    if outer.infeasible {
        return Ok(!crate::lp::is_feasible(&le_constraints(&inner.rows), &inner.nonneg));
    }
    if inner.variables.len() == 2 {
        if let Ok(vs) = vertices_2d(inner) {
            for (x, y) in vs {
                if !outer.satisfies(&[x, y])? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
    }
    let cons = le_constraints(&inner.rows);
    for r in half_planes(outer) {
        match maximize(&r.coeffs, &cons, &inner.nonneg) {
            LpOutcome::Infeasible => return Ok(true),
            LpOutcome::Unbounded => return Ok(false),
            LpOutcome::Optimal { value, .. } => {
                if value > r.rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The `K + 1` points
/// `(Σ_{i=r}^{K} C(K−1, i−1) c_i, Σ_{i=1}^{r−1} C(K, i) c_i)` for `r = 1..=K+1`.
pub fn corner_points_symmetric(k: usize, c: &[Rational]) -> Result<Vec<Point>> {
    if k == 0 || c.len() != k {
        return Err(domain(format!("need one capacity per level 1..={k}, got {}", c.len())));
    }
    if let Some(bad) = c.iter().find(|v| v.is_negative()) {
        return Err(domain(format!("negative capacity {}", rational::format(bad))));
    }
    let b = |n: usize, r: usize| int(binomial(n as u64, r as u64) as i64);
    Ok((1..=k + 1)
        .map(|r| {
            let x = (r..=k).map(|i| b(k - 1, i - 1) * &c[i - 1]).sum();
            let y = (1..r).map(|i| b(k, i) * &c[i - 1]).sum();
            (x, y)
        })
        .collect())
}

/// `x,y` header, one exact point per line.
pub fn vertices_csv(points: &[Point]) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in points {
        out.push_str(&format!("{},{}\n", rational::format(x), rational::format(y)));
    }
    out
}
