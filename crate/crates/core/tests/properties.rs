use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gcsb_core::bounds::{enumerate_bounds, instantiate};
use gcsb_core::lp::{maximize, Constraint, LpOutcome, Relation};
use gcsb_core::polytope::{eliminate, vertices_2d};
use gcsb_core::rational::{frac, int};
use gcsb_core::setcalc::intersect_level;
use gcsb_core::setfn::{entropy_oracle, multiway_gap};
use gcsb_core::{GroundSet, IndexSet, JointDistribution, LinearSystem, ModularFunction, Rational, RuleSet, SubsetFamily};

fn family(n: usize, masks: &[u64]) -> SubsetFamily {
    let g = GroundSet::new(n).unwrap();
    let full = g.full_mask();
    SubsetFamily::from_masks(&g, masks.iter().map(|m| m & full).collect()).unwrap()
}

proptest! {
    // e is in S^(r)(U) exactly when at least r of the sets indexed by U hold it
    #[test]
    fn level_matches_counting(n in 1usize..=10, masks in prop::collection::vec(any::<u64>(), 1..=6), ubits in 1u32..64) {
        let f = family(n, &masks);
        let k = masks.len();
        let u = IndexSet::from_bits(ubits & ((1 << k) - 1));
        prop_assume!(!u.is_empty());
        for r in 1..=u.len() {
            let got = intersect_level(&f, u, r).unwrap();
            for e in 0..n {
                let count = u.iter().filter(|&i| f.masks()[i - 1] >> e & 1 == 1).count();
                prop_assert_eq!(got.contains(e), count >= r);
            }
        }
    }

    #[test]
    fn modular_gaps_vanish(n in 1usize..=8, masks in prop::collection::vec(any::<u64>(), 1..=6), w in prop::collection::vec(0i64..50, 8)) {
        let f = family(n, &masks);
        let g = f.ground().clone();
        let m = ModularFunction::new(&g, w[..n].iter().map(|&x| frac(x, 7)).collect()).unwrap();
        for u in IndexSet::nonempty_subsets(masks.len()) {
            prop_assert!(multiway_gap(&m, &f, u).unwrap().is_zero());
        }
    }

    #[test]
    fn entropy_gaps_nonnegative(seed in any::<u64>(), masks in prop::collection::vec(0u64..32, 2..=5)) {
        let f = family(5, &masks);
        let h = entropy_oracle(&JointDistribution::random(5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap());
        for u in IndexSet::nonempty_subsets(masks.len()) {
            prop_assert!(multiway_gap(&h, &f, u).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn canonical_ignores_scaling_and_order(rows in prop::collection::vec((prop::collection::vec(-4i64..=4, 3), 0i64..10, 1i64..6), 1..6)) {
        let mut a = LinearSystem::new(["x", "y", "z"]).unwrap();
        let mut b = a.clone();
        for (c, rhs, _) in &rows {
            a.add_row(c.iter().map(|&v| int(v)).collect(), int(*rhs)).unwrap();
        }
        for (c, rhs, s) in rows.iter().rev() {
            b.add_row(c.iter().map(|&v| frac(v * s, 3)).collect(), frac(rhs * s, 3)).unwrap();
        }
        prop_assert_eq!(a.canonical().row_strings(), b.canonical().row_strings());
        prop_assert_eq!(a.canonical().canonical(), a.canonical());
    }

    // the projection agrees with an interval test on z at every grid point
    #[test]
    fn elimination_matches_interval_oracle(rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), 0i64..=6), 1..7)) {
        let mut sys = LinearSystem::new(["x", "y", "z"]).unwrap();
        for (c, rhs) in &rows {
            sys.add_row(c.iter().map(|&v| int(v)).collect(), int(*rhs)).unwrap();
        }
        let proj = eliminate(&sys, &["z"]).unwrap();
        for xi in 0..=8 {
            for yi in 0..=8 {
                let (x, y) = (frac(xi, 2), frac(yi, 2));
                let mut lo = int(0);
                let mut hi: Option<Rational> = None;
                let mut ok = true;
                for (c, rhs) in &rows {
                    let slack = int(*rhs) - int(c[0]) * &x - int(c[1]) * &y;
                    match c[2].signum() {
                        0 => ok &= slack >= int(0),
                        1 => {
                            let b = slack / int(c[2]);
                            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
                        }
                        _ => lo = lo.max(slack / int(c[2])),
                    }
                }
                let feasible = ok && hi.is_none_or(|h| lo <= h);
                prop_assert_eq!(proj.satisfies(&[x, y]).unwrap(), feasible, "{}", proj);
            }
        }
    }

    // the best vertex of a bounded planar region is an LP optimum
    #[test]
    fn vertices_attain_lp_optimum(rows in prop::collection::vec((-3i64..=3, -3i64..=3, 0i64..=9), 0..6), obj in (-5i64..=5, -5i64..=5)) {
        let mut sys = LinearSystem::new(["x", "y"]).unwrap();
        sys.add_row(vec![int(1), int(1)], int(10)).unwrap();
        for (a, b, c) in &rows {
            sys.add_row(vec![int(*a), int(*b)], int(*c)).unwrap();
        }
        let vs = vertices_2d(&sys).unwrap();
        for (x, y) in &vs {
            prop_assert!(sys.satisfies(&[x.clone(), y.clone()]).unwrap());
        }
        let c = [int(obj.0), int(obj.1)];
        let cons: Vec<Constraint> = sys
            .rows()
            .iter()
            .map(|r| Constraint { coeffs: r.coeffs.clone(), relation: Relation::Le, rhs: r.rhs.clone() })
            .collect();
        match maximize(&c, &cons, &[true, true]) {
            LpOutcome::Optimal { value, .. } => {
                let best = vs.iter().map(|(x, y)| &c[0] * x + &c[1] * y).max().unwrap();
                prop_assert_eq!(best, value);
            }
            LpOutcome::Infeasible => prop_assert!(vs.is_empty()),
            LpOutcome::Unbounded => prop_assert!(false, "region is bounded"),
        }
    }
}

// identical cut and message families give identical coefficient vectors
#[test]
fn rate_and_capacity_sides_agree() {
    for k in 1..=4 {
        let fam = SubsetFamily::generic(k).unwrap();
        for b in enumerate_bounds(k, RuleSet::all()) {
            let inst = instantiate(&b, &fam, &fam, None).unwrap();
            assert_eq!(inst.rate_coeffs(), inst.capacity_coeffs(), "{b}");
        }
    }
}
