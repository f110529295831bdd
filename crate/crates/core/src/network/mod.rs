//! Capacitated broadcast networks: one source, `K` sinks, each sink demanding
//! a nonempty subset of the source messages.
//!
//! Arcs are either finite (positive rational capacity) or unbounded. Only
//! finite arcs can be cut, so the arc ground set used for cut families holds
//! the finite arcs alone.

mod combination;
mod flow;

use std::collections::{HashMap, VecDeque};

use num_traits::Signed;

use crate::error::{domain, Error, Result};
use crate::rational::{self, Rational};
use crate::setcalc::{ElementSet, GroundSet, SubsetFamily, MAX_FAMILY, MAX_GROUND};
use crate::setfn::ModularFunction;

pub use combination::{combination_network, complete_message_demands, subset_tag, symmetric_combination_network};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

impl Capacity {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(Self::Unbounded),
            t => Ok(Self::Finite(rational::parse(t)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub id: String,
    pub from: String,
    pub to: String,
    pub capacity: Capacity,
}

#[derive(Debug, Clone)]
pub struct BroadcastNetwork {
    nodes: Vec<String>,
    node_index: HashMap<String, usize>,
    arcs: Vec<Arc>,
    ends: Vec<(usize, usize)>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    /// Position in the finite-arc ground, per arc.
    finite_pos: Vec<Option<usize>>,
    finite_arcs: Vec<usize>,
    arc_ground: GroundSet,
    source: usize,
    sinks: Vec<usize>,
    message_ground: GroundSet,
    demands: Vec<u64>,
}

fn unique<'a>(what: &str, items: impl IntoIterator<Item = &'a String>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for it in items {
        if !seen.insert(it) {
            return Err(Error::Network(format!("duplicate {what} `{it}`")));
        }
    }
    Ok(())
}

impl BroadcastNetwork {
    /// Validates and builds a network. `demands[k]` lists the messages sink
    /// `sinks[k]` must decode.
    pub fn new(
        nodes: Vec<String>,
        arcs: Vec<Arc>,
        source: &str,
        sinks: &[String],
        messages: Vec<String>,
        demands: &[Vec<String>],
    ) -> Result<Self> {
        unique("node", &nodes)?;
        unique("arc id", arcs.iter().map(|a| &a.id))?;
        unique("message", &messages)?;
        unique("sink", sinks)?;
        let node_index: HashMap<String, usize> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let lookup = |n: &str| {
            node_index.get(n).copied().ok_or_else(|| Error::Network(format!("unknown node `{n}`")))
        };
        let source = lookup(source)?;
        let sink_idx = sinks.iter().map(|t| lookup(t)).collect::<Result<Vec<_>>>()?;
        if sink_idx.is_empty() || sink_idx.len() > MAX_FAMILY {
            return Err(Error::Network(format!("need 1 to {MAX_FAMILY} sinks, got {}", sink_idx.len())));
        }
        if sink_idx.contains(&source) {
            return Err(Error::Network("the source cannot be a sink".into()));
        }
        let mut ends = Vec::with_capacity(arcs.len());
        let mut out_arcs = vec![Vec::new(); nodes.len()];
        let mut in_arcs = vec![Vec::new(); nodes.len()];
        let mut finite_pos = Vec::with_capacity(arcs.len());
        let mut finite_arcs = Vec::new();
        for (i, a) in arcs.iter().enumerate() {
            let (u, v) = (lookup(&a.from)?, lookup(&a.to)?);
            if u == v {
                return Err(Error::Network(format!("arc `{}` is a self-loop", a.id)));
            }
            match &a.capacity {
                Capacity::Finite(c) if !c.is_positive() => {
                    return Err(Error::Network(format!(
                        "arc `{}` has nonpositive capacity {}",
                        a.id,
                        rational::format(c)
                    )));
                }
                Capacity::Finite(_) => {
                    finite_pos.push(Some(finite_arcs.len()));
                    finite_arcs.push(i);
                }
                Capacity::Unbounded => finite_pos.push(None),
            }
            ends.push((u, v));
            out_arcs[u].push(i);
            in_arcs[v].push(i);
        }
        if finite_arcs.len() > MAX_GROUND {
            return Err(Error::Network(format!("at most {MAX_GROUND} finite arcs supported, got {}", finite_arcs.len())));
        }
        if finite_arcs.is_empty() {
            return Err(Error::Network("no finite-capacity arcs, so no sink has a finite cut".into()));
        }
        if messages.len() > MAX_GROUND {
            return Err(Error::Network(format!("at most {MAX_GROUND} messages supported, got {}", messages.len())));
        }
        let arc_ground = GroundSet::with_labels(finite_arcs.iter().map(|&i| arcs[i].id.clone()))?;
        let message_ground = GroundSet::with_labels(messages)?;
        if demands.len() != sink_idx.len() {
            return Err(Error::Network(format!("{} demand lists for {} sinks", demands.len(), sink_idx.len())));
        }
        let mut demand_masks = Vec::with_capacity(demands.len());
        for (k, d) in demands.iter().enumerate() {
            if d.is_empty() {
                return Err(Error::Network(format!("sink `{}` demands no message", sinks[k])));
            }
            let mut m = 0u64;
            for id in d {
                let i = message_ground
                    .index_of(id)
                    .ok_or_else(|| Error::Network(format!("unknown message `{id}`")))?;
                m |= 1 << i;
            }
            demand_masks.push(m);
        }
        let net = Self {
            nodes,
            node_index,
            arcs,
            ends,
            out_arcs,
            in_arcs,
            finite_pos,
            finite_arcs,
            arc_ground,
            source,
            sinks: sink_idx,
            message_ground,
            demands: demand_masks,
        };
        net.check_acyclic()?;
        let reach = net.reachable(|_| true);
        for (k, &t) in net.sinks.iter().enumerate() {
            if !reach[t] {
                return Err(Error::Network(format!("sink `{}` is unreachable from the source", sinks[k])));
            }
        }
        Ok(net)
    }

    fn check_acyclic(&self) -> Result<()> {
        let mut indeg: Vec<usize> = self.in_arcs.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.nodes.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &a in &self.out_arcs[v] {
                let w = self.ends[a].1;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if seen != self.nodes.len() {
            return Err(Error::Network("graph contains a directed cycle".into()));
        }
        Ok(())
    }

    /// Nodes reachable from the source through arcs passing `keep`.
    fn reachable(&self, keep: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out_arcs[v] {
                let w = self.ends[a].1;
                if keep(a) && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_index.get(name).copied()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Ground set of the finite arcs, labelled by arc id.
    pub fn arc_ground(&self) -> &GroundSet {
        &self.arc_ground
    }

    pub fn message_ground(&self) -> &GroundSet {
        &self.message_ground
    }

    pub fn source(&self) -> &str {
        &self.nodes[self.source]
    }

    pub fn sinks(&self) -> Vec<&str> {
        self.sinks.iter().map(|&t| self.nodes[t].as_str()).collect()
    }

    pub fn k(&self) -> usize {
        self.sinks.len()
    }

    /// Messages demanded by sink `k` (1-based).
    pub fn demand(&self, k: usize) -> Result<ElementSet> {
        self.check_sink(k)?;
        self.message_ground.from_bits(self.demands[k - 1])
    }

    fn check_sink(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.k() {
            return Err(domain(format!("sink index {k} outside 1..={}", self.k())));
        }
        Ok(())
    }

    pub(crate) fn finite_capacity(&self, pos: usize) -> &Rational {
        match &self.arcs[self.finite_arcs[pos]].capacity {
            Capacity::Finite(c) => c,
            Capacity::Unbounded => unreachable!("finite ground holds finite arcs"),
        }
    }

    /// Capacities as a modular function on the finite arcs.
    pub fn capacity_function(&self) -> ModularFunction {
        let w = (0..self.finite_arcs.len()).map(|p| self.finite_capacity(p).clone()).collect();
        ModularFunction::new(&self.arc_ground, w).expect("capacities are positive")
    }

    /// Total capacity of a set of finite arcs.
    pub fn capacity_of(&self, arcs: &ElementSet) -> Result<Rational> {
        if arcs.ground() != &self.arc_ground {
            return Err(Error::GroundMismatch("arc set is not over this network's finite arcs".into()));
        }
        Ok(arcs.members().map(|p| self.finite_capacity(p)).sum())
    }

    /// Whether removing `arcs` leaves no path from the source to sink `k`.
    pub fn is_cut(&self, arcs: &ElementSet, k: usize) -> Result<bool> {
        self.check_sink(k)?;
        if arcs.ground() != &self.arc_ground {
            return Err(Error::GroundMismatch("arc set is not over this network's finite arcs".into()));
        }
        let bits = arcs.bits();
        let reach = self.reachable(|a| self.finite_pos[a].is_none_or(|p| bits >> p & 1 == 0));
        Ok(!reach[self.sinks[k - 1]])
    }
}

/// A verified basic cut for one sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    arcs: ElementSet,
    sink: usize,
    capacity: Rational,
}

impl Cut {
    /// Verifies that `arcs` separates the source from sink `k`.
    pub fn new(net: &BroadcastNetwork, arcs: ElementSet, k: usize) -> Result<Self> {
        if !net.is_cut(&arcs, k)? {
            return Err(Error::NotACut { sink: k });
        }
        let capacity = net.capacity_of(&arcs)?;
        Ok(Self { arcs, sink: k, capacity })
    }

    pub fn arcs(&self) -> &ElementSet {
        &self.arcs
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }
}

/// The cut family `A_1..A_K` and demand family `I_1..I_K`, given one cut per
/// sink in sink order.
pub fn cut_and_message_families(net: &BroadcastNetwork, cuts: &[Cut]) -> Result<(SubsetFamily, SubsetFamily)> {
    if cuts.len() != net.k() {
        return Err(domain(format!("{} cuts for {} sinks", cuts.len(), net.k())));
    }
    let mut sets = Vec::with_capacity(cuts.len());
    for (i, c) in cuts.iter().enumerate() {
        if c.sink != i + 1 {
            return Err(domain(format!("cut {} is for sink {}", i + 1, c.sink)));
        }
        if !net.is_cut(&c.arcs, c.sink)? {
            return Err(Error::NotACut { sink: c.sink });
        }
        sets.push(c.arcs.clone());
    }
    let cut_family = SubsetFamily::new(&net.arc_ground, &sets)?;
    let msg_family = SubsetFamily::from_masks(&net.message_ground, net.demands.clone())?;
    Ok((cut_family, msg_family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn arc(id: &str, from: &str, to: &str, cap: &str) -> Arc {
        Arc { id: id.into(), from: from.into(), to: to.into(), capacity: Capacity::parse(cap).unwrap() }
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn one_arc() -> BroadcastNetwork {
        BroadcastNetwork::new(s(&["s", "t"]), vec![arc("e", "s", "t", "3/2")], "s", &s(&["t"]), s(&["W"]), &[s(&["W"])])
            .unwrap()
    }

    #[test]
    fn single_arc_cut() {
        let n = one_arc();
        assert!(n.is_cut(&n.arc_ground().full(), 1).unwrap());
        assert!(!n.is_cut(&n.arc_ground().empty(), 1).unwrap());
        assert!(n.is_cut(&n.arc_ground().full(), 2).is_err());
        let c = Cut::new(&n, n.arc_ground().full(), 1).unwrap();
        assert_eq!(c.capacity(), &crate::rational::frac(3, 2));
        assert_eq!(Cut::new(&n, n.arc_ground().empty(), 1).unwrap_err(), Error::NotACut { sink: 1 });
    }

    #[test]
    fn rejects_bad_graphs() {
        let nodes = s(&["s", "a", "t"]);
        let cyc = vec![arc("1", "s", "a", "1"), arc("2", "a", "t", "1"), arc("3", "t", "a", "1")];
        let e = BroadcastNetwork::new(nodes.clone(), cyc, "s", &s(&["t"]), s(&["W"]), &[s(&["W"])]).unwrap_err();
        assert!(e.to_string().contains("cycle"));
        let unreach = vec![arc("1", "s", "a", "1")];
        assert!(BroadcastNetwork::new(nodes.clone(), unreach, "s", &s(&["t"]), s(&["W"]), &[s(&["W"])]).is_err());
        let zero = vec![arc("1", "s", "t", "0")];
        assert!(BroadcastNetwork::new(nodes.clone(), zero, "s", &s(&["t"]), s(&["W"]), &[s(&["W"])]).is_err());
        let ok = vec![arc("1", "s", "t", "1")];
        assert!(BroadcastNetwork::new(nodes.clone(), ok.clone(), "s", &s(&["t"]), s(&["W"]), &[vec![]]).is_err());
        assert!(BroadcastNetwork::new(nodes.clone(), ok.clone(), "s", &s(&["t"]), s(&["W"]), &[s(&["X"])]).is_err());
        assert!(BroadcastNetwork::new(nodes.clone(), ok.clone(), "s", &s(&["s"]), s(&["W"]), &[s(&["W"])]).is_err());
        let dup = vec![arc("1", "s", "t", "1"), arc("1", "s", "a", "1")];
        assert!(BroadcastNetwork::new(nodes, dup, "s", &s(&["t"]), s(&["W"]), &[s(&["W"])]).is_err());
    }

    #[test]
    fn unbounded_arcs_stay_out_of_the_ground() {
        let n = BroadcastNetwork::new(
            s(&["s", "v", "t"]),
            vec![arc("a", "s", "v", "2"), arc("b", "v", "t", "inf")],
            "s",
            &s(&["t"]),
            s(&["W"]),
            &[s(&["W"])],
        )
        .unwrap();
        assert_eq!(n.arc_ground().size(), 1);
        assert!(n.is_cut(&n.arc_ground().full(), 1).unwrap());
        assert_eq!(n.capacity_function().weights(), &[int(2)]);
    }

    #[test]
    fn families_follow_sink_order() {
        let n = one_arc();
        let cut = Cut::new(&n, n.arc_ground().full(), 1).unwrap();
        let (a, i) = cut_and_message_families(&n, &[cut.clone()]).unwrap();
        assert_eq!(a.masks(), &[1]);
        assert_eq!(i.masks(), &[1]);
        assert!(cut_and_message_families(&n, &[]).is_err());
    }
}
