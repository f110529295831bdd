//! Linear inequality systems `Σ a_i x_i <= b` over named variables with exact
//! rational coefficients, and the projections and planar geometry built on them.
//!
//! Symbolic capacities are ordinary (nonnegative) variables, so a bound
//! `3 R0 + Rsp <= 3 C1 + 6 C2` is stored as `3 R0 + Rsp - 3 C1 - 6 C2 <= 0`.

mod fm;
mod parse;
mod planar;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::rational::{self, to_coprime_integers, Rational};

pub use fm::{eliminate, eliminate_in_order, fourier_motzkin, LP_REDUNDANCY_MAX_ROWS};
pub use planar::{contains, corner_points_symmetric, vertices_2d, vertices_csv, Point};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Positive rescaling to coprime integers.
    fn normalized(&self) -> Row {
        let mut all = self.coeffs.clone();
        all.push(self.rhs.clone());
        let mut scaled = to_coprime_integers(&all);
        let rhs = scaled.pop().expect("rhs present");
        Row { coeffs: scaled, rhs }
    }

    fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }
}

/// `Σ c_j x_j + c_0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearExpr {
    pub terms: Vec<(String, Rational)>,
    pub constant: Rational,
}

impl LinearExpr {
    pub fn constant(c: Rational) -> Self {
        Self { terms: Vec::new(), constant: c }
    }

    pub fn variable(name: &str) -> Self {
        Self { terms: vec![(name.to_string(), Rational::one())], constant: Rational::zero() }
    }

    /// Parses e.g. `Rsp - R2 - R3` or `1/2 x + 3`.
    pub fn parse(s: &str) -> Result<Self> {
        parse::expression(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    variables: Vec<String>,
    nonneg: Vec<bool>,
    rows: Vec<Row>,
    infeasible: bool,
}

impl LinearSystem {
    /// Empty system; every variable starts nonnegative.
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for v in &variables {
            if !seen.insert(v) {
                return Err(domain(format!("duplicate variable `{v}`")));
            }
        }
        let n = variables.len();
        Ok(Self { variables, nonneg: vec![true; n], rows: Vec::new(), infeasible: false })
    }

    /// Builds a system from one inequality per line; `#` starts a comment.
    pub fn from_text<S: Into<String>>(variables: impl IntoIterator<Item = S>, text: &str) -> Result<Self> {
        let mut sys = Self::new(variables)?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                sys.add_text(line)?;
            }
        }
        Ok(sys)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.variables.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn is_nonneg(&self, name: &str) -> Result<bool> {
        Ok(self.nonneg[self.var_index(name)?])
    }

    pub fn set_nonneg(&mut self, name: &str, nonneg: bool) -> Result<()> {
        let i = self.var_index(name)?;
        self.nonneg[i] = nonneg;
        Ok(())
    }

    pub fn add_variable(&mut self, name: &str, nonneg: bool) -> Result<()> {
        if self.variables.iter().any(|v| v == name) {
            return Err(domain(format!("duplicate variable `{name}`")));
        }
        self.variables.push(name.to_string());
        self.nonneg.push(nonneg);
        for r in &mut self.rows {
            r.coeffs.push(Rational::zero());
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Set when a row `0 <= b` with `b < 0` was found, or a feasibility check failed.
    pub fn is_infeasible(&self) -> bool {
        self.infeasible
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.variables.len() {
            return Err(Error::DimensionMismatch(format!(
                "row has {} coefficients for {} variables",
                coeffs.len(),
                self.variables.len()
            )));
        }
        self.rows.push(Row { coeffs, rhs });
        Ok(())
    }

    /// Adds `Σ terms <= rhs`, summing repeated names.
    pub fn add_terms(&mut self, terms: &[(&str, Rational)], rhs: Rational) -> Result<()> {
        let mut coeffs = vec![Rational::zero(); self.variables.len()];
        for (name, c) in terms {
            coeffs[self.var_index(name)?] += c;
        }
        self.add_row(coeffs, rhs)
    }

    /// Adds an inequality written as `lhs <= rhs` or `lhs >= rhs`.
    pub fn add_text(&mut self, line: &str) -> Result<()> {
        let (lhs, rhs) = parse::inequality(line)?;
        // lhs - rhs <= 0
        let mut coeffs = vec![Rational::zero(); self.variables.len()];
        for (name, c) in &lhs.terms {
            coeffs[self.var_index(name)?] += c;
        }
        for (name, c) in &rhs.terms {
            coeffs[self.var_index(name)?] -= c;
        }
        self.add_row(coeffs, rhs.constant - lhs.constant)
    }

    /// Whether `x` (one value per variable) meets every row and sign constraint.
    pub fn satisfies(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.variables.len() {
            return Err(Error::DimensionMismatch(format!("point has {} coordinates for {} variables", x.len(), self.variables.len())));
        }
        if self.infeasible {
            return Ok(false);
        }
        let signs = x.iter().zip(&self.nonneg).all(|(v, &nn)| !nn || !v.is_negative());
        Ok(signs && self.rows.iter().all(|r| r.eval(x) <= r.rhs))
    }

    fn implied_by_signs(&self, r: &Row) -> bool {
        !r.rhs.is_negative()
            && r.coeffs.iter().zip(&self.nonneg).all(|(a, &nn)| if nn { !a.is_positive() } else { a.is_zero() })
    }

    /// Rows scaled to coprime integers, duplicates and rows implied by the
    /// sign constraints dropped, sorted by coefficients.
    pub fn canonical(&self) -> LinearSystem {
        let mut out = LinearSystem { rows: Vec::new(), ..self.clone() };
        if self.infeasible {
            out.mark_infeasible();
            return out;
        }
        let mut seen = HashSet::new();
        for r in &self.rows {
            if r.is_trivial() && r.rhs.is_negative() {
                out.mark_infeasible();
                return out;
            }
            if self.implied_by_signs(r) {
                continue;
            }
            let n = r.normalized();
            if seen.insert(n.clone()) {
                out.rows.push(n);
            }
        }
        out.rows.sort_by(row_order);
        out
    }

    fn mark_infeasible(&mut self) {
        self.infeasible = true;
        let zeros = vec![Rational::zero(); self.variables.len()];
        self.rows = vec![Row { coeffs: zeros, rhs: -Rational::one() }];
    }

    /// Replaces `var` by `expr` everywhere. If `var` was nonnegative the
    /// constraint `expr >= 0` is kept as a row.
    pub fn substitute(&self, var: &str, expr: &LinearExpr) -> Result<LinearSystem> {
        let vi = self.var_index(var)?;
        let mut e = vec![Rational::zero(); self.variables.len()];
        for (name, c) in &expr.terms {
            e[self.var_index(name)?] += c;
        }
        if !e[vi].is_zero() {
            let identity = expr.constant.is_zero()
                && e.iter().enumerate().all(|(j, c)| if j == vi { c.is_one() } else { c.is_zero() });
            if identity {
                return Ok(self.clone());
            }
            return Err(domain(format!("`{var}` appears in its own substitution")));
        }
        let mut rows = Vec::with_capacity(self.rows.len() + 1);
        for r in &self.rows {
            let a = &r.coeffs[vi];
            let mut coeffs = r.coeffs.clone();
            for (c, ej) in coeffs.iter_mut().zip(&e) {
                *c += a * ej;
            }
            rows.push(Row { coeffs, rhs: &r.rhs - a * &expr.constant });
        }
        if self.nonneg[vi] {
            rows.push(Row { coeffs: e.iter().map(|v| -v.clone()).collect(), rhs: expr.constant.clone() });
        }
        let mut out = LinearSystem { rows, ..self.clone() };
        out.drop_column(vi);
        Ok(out)
    }

    /// Substitutes a numeric value for `var`.
    pub fn fix(&self, var: &str, value: Rational) -> Result<LinearSystem> {
        self.substitute(var, &LinearExpr::constant(value))
    }

    fn drop_column(&mut self, i: usize) {
        self.variables.remove(i);
        self.nonneg.remove(i);
        for r in &mut self.rows {
            r.coeffs.remove(i);
        }
    }

    /// The same system with variables listed in `order`, which must be a
    /// permutation of the current names.
    pub fn with_variable_order(&self, order: &[&str]) -> Result<LinearSystem> {
        if order.len() != self.variables.len() {
            return Err(Error::DimensionMismatch(format!("{} names for {} variables", order.len(), self.variables.len())));
        }
        let idx = order.iter().map(|n| self.var_index(n)).collect::<Result<Vec<_>>>()?;
        let mut check = idx.clone();
        check.sort_unstable();
        check.dedup();
        if check.len() != idx.len() {
            return Err(domain("variable order repeats a name"));
        }
        Ok(LinearSystem {
            variables: idx.iter().map(|&i| self.variables[i].clone()).collect(),
            nonneg: idx.iter().map(|&i| self.nonneg[i]).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| Row { coeffs: idx.iter().map(|&i| r.coeffs[i].clone()).collect(), rhs: r.rhs.clone() })
                .collect(),
            infeasible: self.infeasible,
        })
    }

    /// Each row rendered as `positive terms <= negated terms + constant`.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows.iter().map(|r| self.render(r)).collect()
    }

    fn render(&self, r: &Row) -> String {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (a, v) in r.coeffs.iter().zip(&self.variables) {
            match a.cmp(&Rational::zero()) {
                Ordering::Greater => left.push(term(a, v)),
                Ordering::Less => right.push(term(&-a.clone(), v)),
                Ordering::Equal => {}
            }
        }
        let mut rhs = right.join(" + ");
        if rhs.is_empty() {
            rhs = rational::format(&r.rhs);
        } else if r.rhs.is_positive() {
            rhs = format!("{rhs} + {}", rational::format(&r.rhs));
        } else if r.rhs.is_negative() {
            rhs = format!("{rhs} - {}", rational::format(&-r.rhs.clone()));
        }
        let lhs = if left.is_empty() { "0".to_string() } else { left.join(" + ") };
        format!("{lhs} <= {rhs}")
    }
}

fn term(a: &Rational, v: &str) -> String {
    if a.is_one() {
        v.to_string()
    } else {
        format!("{} {v}", rational::format(a))
    }
}

fn row_order(a: &Row, b: &Row) -> Ordering {
    b.coeffs.cmp(&a.coeffs).then_with(|| a.rhs.cmp(&b.rhs))
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.row_strings() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
