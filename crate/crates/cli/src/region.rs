//! `region` and `golden` commands.

use std::fmt::Write as _;
use std::path::Path;

use gcsb_core::bounds::enumerate_bounds;
use gcsb_core::polytope::{contains, corner_points_symmetric, vertices_2d, vertices_csv};
use gcsb_core::rational::{self, frac, int};
use gcsb_core::region::{
    at_capacities, common_vs_sum_private, complete_bound_system, cutset_bounds, network_rate_system, project_sums,
    symmetric_bound_system, symmetric_generalized_bounds,
};
use gcsb_core::{BoundInequality, LinearSystem, Point, Rational, RuleSet};

use crate::golden::{self, diff, parse_system};
use crate::{
    load_cuts, load_network, parse_rules, read_file, BoundFamily, Failure, GoldenArgs, GoldenCase, Outcome, RegionArgs,
    EXIT_MISMATCH, EXIT_OK,
};

type Axes = Vec<(String, Vec<String>)>;

/// `x,y`, `x,s=a+b+c`. `Rsp` alone expands to `private` when given.
fn parse_axes(spec: &str, private: Option<&[String]>) -> Result<Axes, Failure> {
    let axes: Axes = spec
        .split(',')
        .map(str::trim)
        .map(|tok| match tok.split_once('=') {
            Some((name, sum)) => (name.trim().to_string(), sum.split('+').map(|m| m.trim().to_string()).collect()),
            None => match (tok, private) {
                ("Rsp", Some(p)) => (tok.to_string(), p.to_vec()),
                _ => (tok.to_string(), vec![tok.to_string()]),
            },
        })
        .collect();
    if axes.len() != 2 || axes.iter().any(|(n, m)| n.is_empty() || m.iter().any(String::is_empty)) {
        return Err(Failure::invalid(format!("--axes needs two axes like `x,y` or `x,s=a+b`, got `{spec}`")));
    }
    Ok(axes)
}

fn default_axes(sys: &LinearSystem) -> Result<Axes, Failure> {
    match sys.variables() {
        [x, y] => Ok(vec![(x.clone(), vec![x.clone()]), (y.clone(), vec![y.clone()])]),
        vs => Err(Failure::invalid(format!("{} variables ({}); choose two with --axes", vs.len(), vs.join(" ")))),
    }
}

fn family_bounds(k: usize, family: BoundFamily, rules: Option<RuleSet>) -> Result<Vec<BoundInequality>, Failure> {
    Ok(match (family, rules) {
        (BoundFamily::Cutset, _) => cutset_bounds(k)?,
        (BoundFamily::Gcsb, Some(r)) => enumerate_bounds(k, r),
        (BoundFamily::Gcsb, None) => enumerate_bounds(k, RuleSet::all()),
    })
}

fn fmt_point((x, y): &Point) -> String {
    format!("({}, {})", rational::format(x), rational::format(y))
}

/// A vertex of `inner` lying outside `outer`, if any.
fn witness(outer: &LinearSystem, inner: &LinearSystem) -> Result<Option<Point>, Failure> {
    for p in vertices_2d(inner)? {
        if !outer.satisfies(&[p.0.clone(), p.1.clone()])? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn containment_line(out: &mut String, outer: (&str, &LinearSystem), inner: (&str, &LinearSystem)) -> Result<(), Failure> {
    let verdict = match witness(outer.1, inner.1)? {
        None => "yes".to_string(),
        Some(p) => format!("no, e.g. {}", fmt_point(&p)),
    };
    writeln!(out, "{} region within {} region: {verdict}", inner.0, outer.0).unwrap();
    Ok(())
}

fn family_name(f: BoundFamily) -> &'static str {
    match f {
        BoundFamily::Cutset => "cutset",
        BoundFamily::Gcsb => "gcsb",
    }
}

pub(crate) fn cmd_region(a: &RegionArgs) -> Result<Outcome, Failure> {
    let rules = a.rules.as_deref().map(parse_rules).transpose()?;
    let sources = [a.network.is_some(), a.symmetric.is_some(), a.system.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(Failure::invalid("give exactly one of a network file, --symmetric or --system"));
    }
    if a.system.is_some() && a.compare.is_some() {
        return Err(Failure::invalid("--compare needs a network or --symmetric"));
    }

    // builds the projected region for one bound family
    let build: Box<dyn Fn(BoundFamily) -> Result<LinearSystem, Failure>> = if let Some(path) = &a.system {
        let sys = parse_system(&read_file(path)?)?;
        let axes = match &a.axes {
            Some(s) => parse_axes(s, None)?,
            None => default_axes(&sys)?,
        };
        Box::new(move |_| Ok(project_sums(&sys, &axes, &[])?))
    } else if let Some(args) = &a.symmetric {
        let k: usize = args[0].parse().map_err(|_| Failure::invalid(format!("K must be a positive integer, got `{}`", args[0])))?;
        if k == 0 || args.len() != k + 1 {
            return Err(Failure::invalid(format!("--symmetric {k} needs {k} capacities, got {}", args.len() - 1)));
        }
        let c = args[1..].iter().map(|s| rational::parse(s)).collect::<gcsb_core::Result<Vec<Rational>>>()?;
        if let Some(bad) = c.iter().find(|v| **v < int(0)) {
            return Err(Failure::invalid(format!("negative capacity {}", rational::format(bad))));
        }
        let private: Vec<String> = (1..=k).map(|j| format!("R{j}")).collect();
        let axes = parse_axes(a.axes.as_deref().unwrap_or("R0,Rsp"), Some(&private))?;
        Box::new(move |family| {
            let bounds = match (family, rules) {
                (BoundFamily::Gcsb, None) => symmetric_generalized_bounds(k)?,
                _ => family_bounds(k, family, rules)?,
            };
            let sys = at_capacities(&symmetric_bound_system(k, &bounds)?, &c)?;
            Ok(project_sums(&sys, &axes, &[])?)
        })
    } else {
        let net = load_network(a.network.as_deref().expect("checked above"))?;
        let cuts = load_cuts(&net, &a.cuts)?;
        Box::new(move |family| {
            let sys = network_rate_system(&net, &family_bounds(net.k(), family, rules)?, &cuts)?;
            let axes = match &a.axes {
                Some(s) => parse_axes(s, None)?,
                None => default_axes(&sys)?,
            };
            Ok(project_sums(&sys, &axes, &[])?)
        })
    };

    let region = build(a.bounds)?;
    let vertices = vertices_2d(&region)?;
    let mut out = String::new();
    write!(out, "{region}").unwrap();
    let vars = region.variables();
    writeln!(out, "vertices ({}, {}):", vars[0], vars[1]).unwrap();
    for p in &vertices {
        writeln!(out, "  {}", fmt_point(p)).unwrap();
    }
    if vertices.is_empty() {
        writeln!(out, "  (empty region)").unwrap();
    }
    if let Some(other) = a.compare {
        let theirs = build(other)?;
        vertices_2d(&theirs)?;
        let (mine, theirs) = ((family_name(a.bounds), &region), (family_name(other), &theirs));
        containment_line(&mut out, theirs, mine)?;
        containment_line(&mut out, mine, theirs)?;
    }
    let mut outcome = Outcome { code: EXIT_OK, stdout: out, files: Vec::new() };
    match a.emit.as_deref() {
        Some(p) if p == Path::new("-") => outcome.stdout.push_str(&vertices_csv(&vertices)),
        Some(p) => outcome.files.push((p.to_path_buf(), vertices_csv(&vertices))),
        None => {}
    }
    Ok(outcome)
}

struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn new(case: &str) -> Self {
        Self { text: format!("case: {case}\n"), ok: true }
    }

    fn compare(&mut self, what: &str, reference: &str, generated: &LinearSystem) -> Result<(), Failure> {
        let reference = parse_system(reference)?;
        let d = diff(&reference, generated)?;
        if d.is_match() {
            writeln!(self.text, "{what}: match ({} rows)", reference.canonical().len()).unwrap();
        } else {
            self.ok = false;
            writeln!(self.text, "{what}: mismatch (- reference only, + generated only)").unwrap();
            self.text.push_str(&d.render());
            let generated = generated.with_variable_order(&reference.variables().iter().map(String::as_str).collect::<Vec<_>>())?;
            let same = contains(&reference, &generated)? && contains(&generated, &reference)?;
            writeln!(self.text, "  same region: {}", if same { "yes" } else { "no" }).unwrap();
        }
        Ok(())
    }

    fn finish(mut self) -> Outcome {
        writeln!(self.text, "result: {}", if self.ok { "match" } else { "mismatch" }).unwrap();
        Outcome { code: if self.ok { EXIT_OK } else { EXIT_MISMATCH }, stdout: self.text, files: Vec::new() }
    }
}

/// Capacity vectors checked against the closed-form corner points.
fn sample_capacities() -> Vec<Vec<Rational>> {
    vec![
        vec![int(1), int(1), int(1)],
        vec![int(2), int(1), int(3)],
        vec![frac(1, 2), int(0), int(5)],
        vec![int(0), int(0), int(0)],
        vec![int(3), frac(7, 3), int(0)],
    ]
}

pub(crate) fn cmd_golden(a: &GoldenArgs) -> Result<Outcome, Failure> {
    match a.case {
        GoldenCase::K3Complete => {
            let mut r = Report::new("k3-complete");
            let sys = complete_bound_system(3, &enumerate_bounds(3, RuleSet::all()))?;
            r.compare("complete three-sink system", golden::K3_COMPLETE, &sys)?;
            Ok(r.finish())
        }
        GoldenCase::FmDerivation => {
            let mut r = Report::new("fm-derivation");
            let cutset = symmetric_bound_system(3, &cutset_bounds(3)?)?;
            r.compare("cut-set system", golden::K3_SYMMETRIC_CUTSET, &cutset)?;
            r.compare("projection onto (R0, Rsp)", golden::K3_SYMMETRIC_CUTSET_PROJECTED, &common_vs_sum_private(&cutset, 3)?)?;
            Ok(r.finish())
        }
        GoldenCase::K3Symmetric => {
            let mut r = Report::new("k3-symmetric");
            let sys = common_vs_sum_private(&symmetric_bound_system(3, &symmetric_generalized_bounds(3)?)?, 3)?;
            r.compare("projected region", golden::K3_SYMMETRIC_CAPACITY, &sys)?;
            for c in sample_capacities() {
                let region = at_capacities(&sys, &c)?;
                let mut got = vertices_2d(&region)?;
                let mut want = corner_points_symmetric(3, &c)?;
                want.push((int(0), int(0)));
                for v in [&mut got, &mut want] {
                    v.sort();
                    v.dedup();
                }
                let cs: Vec<String> = c.iter().map(rational::format).collect();
                if got == want {
                    writeln!(r.text, "vertices at C = ({}): match", cs.join(", ")).unwrap();
                } else {
                    r.ok = false;
                    let show = |v: &[Point]| v.iter().map(fmt_point).collect::<Vec<_>>().join(" ");
                    writeln!(r.text, "vertices at C = ({}): mismatch\n  corner points: {}\n  vertices: {}", cs.join(", "), show(&want), show(&got))
                        .unwrap();
                }
            }
            Ok(r.finish())
        }
    }
}
