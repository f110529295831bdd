//! Shortest-augmenting-path max flow over exact rationals.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use super::{BroadcastNetwork, Capacity, Cut};
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Flow {
    value: Rational,
    /// Nodes reachable from the source in the final residual graph.
    source_side: Vec<bool>,
}

impl BroadcastNetwork {
    fn residual_forward(&self, a: usize, flow: &[Rational]) -> Option<Rational> {
        match &self.arcs[a].capacity {
            Capacity::Finite(c) => Some(c - &flow[a]),
            Capacity::Unbounded => None,
        }
    }

    fn edmonds_karp(&self, k: usize) -> Result<Flow> {
        self.check_sink(k)?;
        let t = self.sinks[k - 1];
        if self.reachable(|a| self.finite_pos[a].is_none())[t] {
            return Err(Error::NoFiniteCut(k));
        }
        let n = self.nodes.len();
        let mut flow = vec![Rational::zero(); self.arcs.len()];
        loop {
            // parent[v] = (arc, forward)
            let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
            let mut seen = vec![false; n];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            while let Some(v) = queue.pop_front() {
                if v == t {
                    break;
                }
                for &a in &self.out_arcs[v] {
                    let w = self.ends[a].1;
                    let open = self.residual_forward(a, &flow).is_none_or(|r| r.is_positive());
                    if open && !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((a, true));
                        queue.push_back(w);
                    }
                }
                for &a in &self.in_arcs[v] {
                    let w = self.ends[a].0;
                    if flow[a].is_positive() && !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((a, false));
                        queue.push_back(w);
                    }
                }
            }
            if !seen[t] {
                let value = self.out_arcs[self.source].iter().map(|&a| &flow[a]).sum::<Rational>()
                    - self.in_arcs[self.source].iter().map(|&a| &flow[a]).sum::<Rational>();
                return Ok(Flow { value, source_side: seen });
            }
            let mut path = Vec::new();
            let mut v = t;
            while v != self.source {
                let (a, fwd) = parent[v].expect("path back to source");
                path.push((a, fwd));
                v = if fwd { self.ends[a].0 } else { self.ends[a].1 };
            }
            let bottleneck = path
                .iter()
                .filter_map(|&(a, fwd)| if fwd { self.residual_forward(a, &flow) } else { Some(flow[a].clone()) })
                .min()
                .expect("every source-sink path has a finite arc");
            for (a, fwd) in path {
                if fwd {
                    flow[a] += &bottleneck;
                } else {
                    flow[a] -= &bottleneck;
                }
            }
        }
    }

    /// Value of a maximum flow from the source to sink `k`.
    pub fn max_flow(&self, k: usize) -> Result<Rational> {
        Ok(self.edmonds_karp(k)?.value)
    }

    /// A minimum-capacity cut for sink `k`: the finite arcs leaving the set of
    /// nodes the source still reaches in the final residual graph, so the
    /// source side is as small as possible.
    pub fn min_cut(&self, k: usize) -> Result<Cut> {
        let f = self.edmonds_karp(k)?;
        let mut bits = 0u64;
        for (a, &(u, v)) in self.ends.iter().enumerate() {
            if f.source_side[u] && !f.source_side[v] {
                let p = self.finite_pos[a].expect("unbounded arcs keep residual capacity");
                bits |= 1 << p;
            }
        }
        let cut = Cut::new(self, self.arc_ground.from_bits(bits)?, k)?;
        assert_eq!(cut.capacity(), &f.value, "max-flow value must equal the cut capacity");
        Ok(cut)
    }
}
