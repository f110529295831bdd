//! Stored reference systems and row-level comparison against them.

use std::collections::BTreeMap;

use gcsb_core::{LinearSystem, Result};

pub const K3_COMPLETE: &str = include_str!("../golden/k3-complete.txt");
pub const K3_SYMMETRIC_CUTSET: &str = include_str!("../golden/k3-symmetric-cutset.txt");
pub const K3_SYMMETRIC_CUTSET_PROJECTED: &str = include_str!("../golden/k3-symmetric-cutset-projected.txt");
pub const K3_SYMMETRIC_CAPACITY: &str = include_str!("../golden/k3-symmetric-capacity.txt");

/// Reads the system text format: `#` comments, one `variables: a b c` line,
/// an optional `free: x y` line naming variables without a sign constraint,
/// then one inequality per line.
pub fn parse_system(text: &str) -> Result<LinearSystem> {
    let mut vars: Option<Vec<String>> = None;
    let mut free = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()) {
        if let Some(v) = line.strip_prefix("variables:") {
            vars = Some(v.split([',', ' ']).filter(|s| !s.is_empty()).map(String::from).collect());
        } else if let Some(v) = line.strip_prefix("free:") {
            free.extend(v.split([',', ' ']).filter(|s| !s.is_empty()).map(String::from));
        } else {
            rows.push(line);
        }
    }
    let vars = vars.ok_or_else(|| gcsb_core::Error::ParameterDomain("missing `variables:` line".into()))?;
    let mut sys = LinearSystem::new(vars)?;
    for v in &free {
        sys.set_nonneg(v, false)?;
    }
    for r in rows {
        sys.add_text(r)?;
    }
    Ok(sys)
}

/// Rows only in the reference, rows only in the generated system; both in
/// canonical rendering and compared as multisets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RowDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

impl RowDiff {
    pub fn is_match(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.missing {
            out.push_str(&format!("  - {r}\n"));
        }
        for r in &self.extra {
            out.push_str(&format!("  + {r}\n"));
        }
        out
    }
}

fn counts(rows: Vec<String>) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    for r in rows {
        *m.entry(r).or_insert(0) += 1;
    }
    m
}

/// Compares after putting `generated` in the reference's variable order.
pub fn diff(reference: &LinearSystem, generated: &LinearSystem) -> Result<RowDiff> {
    let order: Vec<&str> = reference.variables().iter().map(String::as_str).collect();
    let generated = generated.with_variable_order(&order)?;
    let want = counts(reference.canonical().row_strings());
    let got = counts(generated.canonical().row_strings());
    let mut d = RowDiff::default();
    for (r, n) in &want {
        for _ in 0..(n - got.get(r).copied().unwrap_or(0)).max(0) {
            d.missing.push(r.clone());
        }
    }
    for (r, n) in &got {
        for _ in 0..(n - want.get(r).copied().unwrap_or(0)).max(0) {
            d.extra.push(r.clone());
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_files_parse() {
        assert_eq!(parse_system(K3_COMPLETE).unwrap().len(), 15);
        assert_eq!(parse_system(K3_SYMMETRIC_CUTSET).unwrap().len(), 7);
        assert_eq!(parse_system(K3_SYMMETRIC_CUTSET_PROJECTED).unwrap().len(), 3);
        assert_eq!(parse_system(K3_SYMMETRIC_CAPACITY).unwrap().len(), 3);
    }

    #[test]
    fn multiset_diff() {
        let a = parse_system("variables: x y\nx <= 1\n2 x <= 2\ny <= 3").unwrap();
        let b = parse_system("variables: y x\ny <= 3\nx + y <= 5").unwrap();
        let d = diff(&a, &b).unwrap();
        // canonical form already merges the two copies of x <= 1
        assert_eq!(d.missing, vec!["x <= 1"]);
        assert_eq!(d.extra, vec!["x + y <= 5"]);
        assert!(!d.is_match());
        assert_eq!(d.render(), "  - x <= 1\n  + x + y <= 5\n");
        assert!(diff(&a, &a).unwrap().is_match());
    }

    #[test]
    fn free_variables_and_errors() {
        let s = parse_system("variables: x, y\nfree: y\nx - y <= 1 # comment").unwrap();
        assert!(!s.is_nonneg("y").unwrap());
        assert!(parse_system("x <= 1").is_err());
        assert!(parse_system("variables: x\nz <= 1").is_err());
    }
}
