//! Rate regions as linear systems: bounds instantiated on a network, then
//! projected onto a few aggregate rates.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::bounds::{gcsb_k_cor3, instantiate, standard_cutset, BoundInequality};
use crate::error::{domain, Result};
use crate::network::{
    combination_network, complete_message_demands, cut_and_message_families, subset_tag, symmetric_combination_network,
    BroadcastNetwork, Cut,
};
use crate::polytope::{eliminate, LinearExpr, LinearSystem};
use crate::rational::{binomial, int, Rational};
use crate::setcalc::IndexSet;

/// One row per non-degenerate bound, over the network's message names, with
/// the capacity side evaluated.
pub fn network_rate_system(net: &BroadcastNetwork, bounds: &[BoundInequality], cuts: &[Cut]) -> Result<LinearSystem> {
    let (cf, mf) = cut_and_message_families(net, cuts)?;
    let caps = net.capacity_function();
    let names: Vec<String> = (0..mf.ground().size()).map(|i| mf.ground().label(i)).collect();
    let mut sys = LinearSystem::new(names)?;
    for b in bounds {
        let inst = instantiate(b, &cf, &mf, Some(&caps))?;
        if inst.is_degenerate() {
            continue;
        }
        sys.add_row(inst.rate_coeffs().to_vec(), inst.cap_value().expect("capacities supplied").clone())?;
    }
    Ok(sys)
}

/// Replaces each group of variables by its sum under a new name, then
/// eliminates everything that is neither an axis nor listed in `keep`.
/// The result's variables are the axes followed by `keep`.
pub fn project_sums(sys: &LinearSystem, axes: &[(String, Vec<String>)], keep: &[String]) -> Result<LinearSystem> {
    let mut cur = sys.clone();
    for (name, members) in axes {
        if members.is_empty() {
            return Err(domain(format!("axis {name} has no members")));
        }
        if members.len() == 1 && &members[0] == name {
            continue;
        }
        for m in members {
            cur.var_index(m)?;
        }
        cur.add_variable(name, true)?;
        let mut expr = LinearExpr::variable(name);
        for m in &members[1..] {
            expr.terms.push((m.clone(), int(-1)));
        }
        cur = cur.substitute(&members[0], &expr)?;
    }
    let wanted: Vec<&str> = axes.iter().map(|(n, _)| n.as_str()).chain(keep.iter().map(String::as_str)).collect();
    let drop: Vec<String> = cur.variables().iter().filter(|v| !wanted.contains(&v.as_str())).cloned().collect();
    let drop: Vec<&str> = drop.iter().map(String::as_str).collect();
    let out = eliminate(&cur, &drop)?;
    Ok(out.with_variable_order(&wanted)?.canonical())
}

fn rate_names(k: usize) -> Vec<String> {
    (0..=k).map(|j| format!("R{j}")).collect()
}

fn capacity_names(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("C{j}")).collect()
}

/// Bounds on the symmetric `k`-sink network with symbolic level capacities:
/// variables `R0..Rk` then `C1..Ck`, rows `Σ a R <= Σ b C` in cone form.
pub fn symmetric_bound_system(k: usize, bounds: &[BoundInequality]) -> Result<LinearSystem> {
    let net = symmetric_combination_network(k, &vec![int(1); k])?;
    let cuts = (1..=k).map(|j| net.min_cut(j)).collect::<Result<Vec<_>>>()?;
    let (cf, mf) = cut_and_message_families(&net, &cuts)?;
    // |U| of arc a_U is the number of sinks its head node feeds
    let mut level: BTreeMap<&str, usize> = BTreeMap::new();
    for a in net.arcs() {
        *level.entry(a.from.as_str()).or_default() += 1;
    }
    let arc_level: Vec<usize> = (0..cf.ground().size())
        .map(|p| {
            let id = cf.ground().label(p);
            let a = net.arcs().iter().find(|a| a.id == id).expect("finite arc");
            level[a.to.as_str()]
        })
        .collect();
    let mut sys = LinearSystem::new(rate_names(k).into_iter().chain(capacity_names(k)))?;
    for b in bounds {
        let inst = instantiate(b, &cf, &mf, None)?;
        if inst.is_degenerate() {
            continue;
        }
        let mut coeffs = inst.rate_coeffs().to_vec();
        coeffs.resize(2 * k + 1, Rational::zero());
        for (p, c) in inst.capacity_coeffs().iter().enumerate() {
            coeffs[k + arc_level[p]] -= c;
        }
        sys.add_row(coeffs, Rational::zero())?;
    }
    Ok(sys.canonical())
}

/// Bounds on the `k`-sink combination network with one message per nonempty
/// sink set and symbolic capacities: variables `R{U}` then `C{U}` (by size,
/// then lexicographic, `U` written as its tag), rows in cone form.
pub fn complete_bound_system(k: usize, bounds: &[BoundInequality]) -> Result<LinearSystem> {
    let caps = IndexSet::nonempty_subsets(k).map(|u| (u, int(1))).collect();
    let (messages, demands) = complete_message_demands(k);
    let net = combination_network(k, &caps, messages, &demands)?;
    let cuts = (1..=k).map(|j| net.min_cut(j)).collect::<Result<Vec<_>>>()?;
    let (cf, mf) = cut_and_message_families(&net, &cuts)?;
    let mut subsets: Vec<IndexSet> = IndexSet::nonempty_subsets(k).collect();
    subsets.sort_by_key(|u| (u.len(), u.to_vec()));
    let tags: Vec<String> = subsets.iter().map(|&u| subset_tag(u, k)).collect();
    let pos = |label: String, prefix: char| {
        let t = label.strip_prefix(prefix).expect("combination labels");
        tags.iter().position(|x| x == t).expect("known tag")
    };
    let msg_pos: Vec<usize> = (0..mf.ground().size()).map(|i| pos(mf.ground().label(i), 'W')).collect();
    let arc_pos: Vec<usize> = (0..cf.ground().size()).map(|i| pos(cf.ground().label(i), 'a')).collect();
    let n = tags.len();
    let names = tags.iter().map(|t| format!("R{t}")).chain(tags.iter().map(|t| format!("C{t}")));
    let mut sys = LinearSystem::new(names)?;
    for b in bounds {
        let inst = instantiate(b, &cf, &mf, None)?;
        if inst.is_degenerate() {
            continue;
        }
        let mut coeffs = vec![Rational::zero(); 2 * n];
        for (i, c) in inst.rate_coeffs().iter().enumerate() {
            coeffs[msg_pos[i]] += c;
        }
        for (i, c) in inst.capacity_coeffs().iter().enumerate() {
            coeffs[n + arc_pos[i]] -= c;
        }
        sys.add_row(coeffs, Rational::zero())?;
    }
    Ok(sys.canonical())
}

/// Projection onto `(R0, Rsp)` with `Rsp = R1 + … + Rk`, keeping `C1..Ck`.
pub fn common_vs_sum_private(sys: &LinearSystem, k: usize) -> Result<LinearSystem> {
    let private: Vec<String> = (1..=k).map(|j| format!("R{j}")).collect();
    let axes = [("R0".to_string(), vec!["R0".to_string()]), ("Rsp".to_string(), private)];
    project_sums(sys, &axes, &capacity_names(k))
}

/// Standard cut-set bounds for every nonempty set of sinks.
pub fn cutset_bounds(k: usize) -> Result<Vec<BoundInequality>> {
    IndexSet::nonempty_subsets(k).map(standard_cutset).collect()
}

/// The cut-set bounds plus `m (1,[k]) + Σ_{r>m} (r,[k])` for `m = 1..=k`.
pub fn symmetric_generalized_bounds(k: usize) -> Result<Vec<BoundInequality>> {
    let mut out = cutset_bounds(k)?;
    for m in 1..=k {
        out.push(gcsb_k_cor3(IndexSet::range(k), m)?);
    }
    Ok(out)
}

/// `k R0 + m Rsp <= m Σ_r C(k,r) C_r + Σ_{r>m} (r − m) C(k,r) C_r` for
/// `m = 1..=k`, written out directly over `R0, Rsp, C1..Ck`.
pub fn symmetric_closed_form(k: usize) -> Result<LinearSystem> {
    if k == 0 {
        return Err(domain("K must be at least 1"));
    }
    let mut sys = LinearSystem::new(["R0".to_string(), "Rsp".to_string()].into_iter().chain(capacity_names(k)))?;
    for m in 1..=k {
        let mut coeffs = vec![int(k as i64), int(m as i64)];
        for r in 1..=k {
            let b = binomial(k as u64, r as u64) as i64;
            let w = m as i64 * b + if r > m { (r - m) as i64 * b } else { 0 };
            coeffs.push(int(-w));
        }
        sys.add_row(coeffs, Rational::zero())?;
    }
    Ok(sys.canonical())
}

/// Substitutes numeric level capacities for `C1..Ck`.
pub fn at_capacities(sys: &LinearSystem, c: &[Rational]) -> Result<LinearSystem> {
    let mut out = sys.clone();
    for (j, v) in c.iter().enumerate() {
        out = out.fix(&format!("C{}", j + 1), v.clone())?;
    }
    Ok(out.canonical())
}
