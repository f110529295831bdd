//! JSON shapes read and written by the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use gcsb_core::network::{Arc, Capacity};
use gcsb_core::rational;
use gcsb_core::{BroadcastNetwork, Cut, Error, InstantiatedInequality, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDocument {
    /// Defaults to `a<position>` counting from 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub from: String,
    pub to: String,
    /// A rational `p/q` or `inf`.
    pub capacity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub nodes: Vec<String>,
    pub arcs: Vec<ArcDocument>,
    pub source: String,
    pub sinks: Vec<String>,
    pub messages: Vec<String>,
    /// Sink name to the messages it decodes.
    pub demands: BTreeMap<String, Vec<String>>,
}

impl NetworkDocument {
    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_network(&self) -> Result<BroadcastNetwork> {
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                Ok(Arc {
                    id: a.id.clone().unwrap_or_else(|| format!("a{}", i + 1)),
                    from: a.from.clone(),
                    to: a.to.clone(),
                    capacity: Capacity::parse(&a.capacity)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = self.demands.keys().find(|k| !self.sinks.contains(k)) {
            return Err(Error::Network(format!("demands name `{extra}`, which is not a sink")));
        }
        let demands = self
            .sinks
            .iter()
            .map(|t| {
                self.demands.get(t).cloned().ok_or_else(|| Error::Network(format!("no demand listed for sink `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        BroadcastNetwork::new(self.nodes.clone(), arcs, &self.source, &self.sinks, self.messages.clone(), &demands)
    }

    pub fn from_network(net: &BroadcastNetwork) -> Self {
        let sinks: Vec<String> = net.sinks().iter().map(|s| s.to_string()).collect();
        let mg = net.message_ground();
        let demands = sinks
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let d = net.demand(k + 1).expect("sink index in range");
                (t.clone(), d.members().map(|m| mg.label(m)).collect())
            })
            .collect();
        Self {
            nodes: net.nodes().to_vec(),
            arcs: net
                .arcs()
                .iter()
                .map(|a| ArcDocument {
                    id: Some(a.id.clone()),
                    from: a.from.clone(),
                    to: a.to.clone(),
                    capacity: match &a.capacity {
                        Capacity::Finite(c) => rational::format(c),
                        Capacity::Unbounded => "inf".into(),
                    },
                })
                .collect(),
            source: net.source().to_string(),
            sinks,
            messages: (0..mg.size()).map(|i| mg.label(i)).collect(),
            demands,
        }
    }
}

/// Sink name to the ids of the arcs forming its cut.
pub type CutDocument = BTreeMap<String, Vec<String>>;

/// Resolves a cut document against `net`, one verified cut per sink.
pub fn cuts_from_document(net: &BroadcastNetwork, doc: &CutDocument) -> Result<Vec<Cut>> {
    let sinks = net.sinks();
    if let Some(extra) = doc.keys().find(|k| !sinks.contains(&k.as_str())) {
        return Err(Error::Network(format!("cut given for `{extra}`, which is not a sink")));
    }
    let ground = net.arc_ground();
    sinks
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let ids = doc.get(*t).ok_or(Error::NotACut { sink: k + 1 })?;
            let pos = ids
                .iter()
                .map(|id| {
                    ground.index_of(id).ok_or_else(|| Error::Network(format!("`{id}` is not a finite-capacity arc")))
                })
                .collect::<Result<Vec<_>>>()?;
            Cut::new(net, ground.set(&pos)?, k + 1)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub provenance: String,
    pub rate_coeffs: BTreeMap<String, String>,
    pub capacity_coeffs: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_value: Option<String>,
}

impl From<&InstantiatedInequality> for ReportRow {
    fn from(inst: &InstantiatedInequality) -> Self {
        let side = |it: Vec<(String, &gcsb_core::Rational)>| it.into_iter().map(|(l, c)| (l, rational::format(c))).collect();
        Self {
            provenance: inst.provenance().to_string(),
            rate_coeffs: side(inst.rate_terms().collect()),
            capacity_coeffs: side(inst.capacity_terms().collect()),
            rhs_value: inst.cap_value().map(rational::format),
        }
    }
}

pub type BoundsReport = Vec<ReportRow>;

#[cfg(test)]
mod tests {
    use super::*;
    use gcsb_core::network::symmetric_combination_network;
    use gcsb_core::rational::int;

    const TINY: &str = r#"{
        "nodes": ["s", "t"],
        "arcs": [{"from": "s", "to": "t", "capacity": "3/2"}],
        "source": "s",
        "sinks": ["t"],
        "messages": ["W"],
        "demands": {"t": ["W"]}
    }"#;

    #[test]
    fn parses_and_builds() {
        let doc = NetworkDocument::parse(TINY).unwrap();
        let net = doc.to_network().unwrap();
        assert_eq!(net.arc_ground().label(0), "a1");
        assert_eq!(net.min_cut(1).unwrap().capacity(), &rational::frac(3, 2));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_demands() {
        let extra = TINY.replace("\"source\"", "\"weight\": 1, \"source\"");
        assert!(NetworkDocument::parse(&extra).is_err());
        let arc_extra = TINY.replace("\"capacity\"", "\"cost\": \"1\", \"capacity\"");
        assert!(NetworkDocument::parse(&arc_extra).is_err());
        let missing = TINY.replace("\"t\": [\"W\"]", "\"u\": [\"W\"]");
        assert!(NetworkDocument::parse(&missing).unwrap().to_network().is_err());
        let bad_cap = TINY.replace("3/2", "x");
        assert!(NetworkDocument::parse(&bad_cap).unwrap().to_network().is_err());
    }

    #[test]
    fn round_trips_a_network() {
        let net = symmetric_combination_network(2, &[int(1), int(2)]).unwrap();
        let doc = NetworkDocument::from_network(&net);
        let text = serde_json::to_string(&doc).unwrap();
        let back = NetworkDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(NetworkDocument::from_network(&back.to_network().unwrap()), doc);
    }

    #[test]
    fn cut_documents() {
        let net = symmetric_combination_network(2, &[int(1), int(2)]).unwrap();
        let mut doc = CutDocument::new();
        doc.insert("t1".into(), vec!["a1".into(), "a12".into()]);
        doc.insert("t2".into(), vec!["a2".into(), "a12".into()]);
        let cuts = cuts_from_document(&net, &doc).unwrap();
        assert_eq!(cuts[1].capacity(), &int(3));
        doc.insert("t2".into(), vec!["a2".into()]);
        assert_eq!(cuts_from_document(&net, &doc).unwrap_err(), Error::NotACut { sink: 2 });
        doc.remove("t2");
        assert_eq!(cuts_from_document(&net, &doc).unwrap_err(), Error::NotACut { sink: 2 });
        doc.insert("t9".into(), vec![]);
        assert!(cuts_from_document(&net, &doc).is_err());
    }
}
