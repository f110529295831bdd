//! Three-layer combination networks: source, one intermediate node `v_U` per
//! nonempty `U ⊆ [K]`, and the sinks. The arc `a_U` from the source to `v_U`
//! carries `C_U`; `v_U` feeds every `t_k` with `k ∈ U` through unbounded links.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{Arc, BroadcastNetwork, Capacity};
use crate::error::{domain, Result};
use crate::rational::{self, Rational};
use crate::setcalc::IndexSet;

/// Compact name for an index set: `12` when `k <= 9`, else `1_2`.
pub fn subset_tag(u: IndexSet, k: usize) -> String {
    let parts: Vec<String> = u.iter().map(|i| i.to_string()).collect();
    parts.join(if k <= 9 { "" } else { "_" })
}

/// One message `W{U}` per nonempty `U ⊆ [k]`, demanded by exactly the sinks in `U`.
pub fn complete_message_demands(k: usize) -> (Vec<String>, Vec<Vec<String>>) {
    let subsets: Vec<IndexSet> = IndexSet::nonempty_subsets(k).collect();
    let messages = subsets.iter().map(|&u| format!("W{}", subset_tag(u, k))).collect();
    let demands = (1..=k)
        .map(|j| subsets.iter().filter(|u| u.contains(j)).map(|&u| format!("W{}", subset_tag(u, k))).collect())
        .collect();
    (messages, demands)
}

/// Builds the network from `C_U` (missing entries count as 0). Intermediate
/// nodes with `C_U = 0` are left out, since they can carry nothing.
pub fn combination_network(
    k: usize,
    caps: &BTreeMap<IndexSet, Rational>,
    messages: Vec<String>,
    demands: &[Vec<String>],
) -> Result<BroadcastNetwork> {
    if k == 0 {
        return Err(domain("K must be at least 1"));
    }
    for (u, c) in caps {
        if u.is_empty() || !u.is_subset(IndexSet::range(k)) {
            return Err(domain(format!("capacity given for {u}, not a nonempty subset of [{k}]")));
        }
        if c.is_negative() {
            return Err(domain(format!("C_{u} = {} is negative", rational::format(c))));
        }
    }
    let mut nodes = vec!["s".to_string()];
    let mut arcs = Vec::new();
    for u in IndexSet::nonempty_subsets(k) {
        let Some(c) = caps.get(&u).filter(|c| !c.is_zero()) else {
            continue;
        };
        let tag = subset_tag(u, k);
        let v = format!("v{tag}");
        nodes.push(v.clone());
        arcs.push(Arc { id: format!("a{tag}"), from: "s".into(), to: v.clone(), capacity: Capacity::Finite(c.clone()) });
        for j in u.iter() {
            arcs.push(Arc { id: format!("b{tag}_{j}"), from: v.clone(), to: format!("t{j}"), capacity: Capacity::Unbounded });
        }
    }
    let sinks: Vec<String> = (1..=k).map(|j| format!("t{j}")).collect();
    nodes.extend(sinks.iter().cloned());
    BroadcastNetwork::new(nodes, arcs, "s", &sinks, messages, demands)
}

/// Symmetric capacities `C_U = c[|U| − 1]`, a common message `W0` wanted by
/// every sink and a private message `Wk` for each sink `k`.
pub fn symmetric_combination_network(k: usize, c: &[Rational]) -> Result<BroadcastNetwork> {
    if k == 0 || c.len() != k {
        return Err(domain(format!("need one capacity per level 1..={k}, got {}", c.len())));
    }
    let caps = IndexSet::nonempty_subsets(k).map(|u| (u, c[u.len() - 1].clone())).collect();
    let mut messages = vec!["W0".to_string()];
    messages.extend((1..=k).map(|j| format!("W{j}")));
    let demands: Vec<Vec<String>> = (1..=k).map(|j| vec!["W0".to_string(), format!("W{j}")]).collect();
    combination_network(k, &caps, messages, &demands)
}
