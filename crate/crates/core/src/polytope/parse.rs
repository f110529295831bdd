//! Text form of linear expressions and inequalities: terms like `3 x`,
//! `1/2 y`, `2*z`, bare constants, joined by `+` and `-`.

use num_traits::One;

use super::LinearExpr;
use crate::error::{domain, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(rational::parse(&text)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else {
            out.push(match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                _ => return Err(domain(format!("unexpected character `{c}` in `{s}`"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

pub(super) fn expression(s: &str) -> Result<LinearExpr> {
    let toks = tokenize(s)?;
    let bad = || domain(format!("malformed expression `{s}`"));
    let mut expr = LinearExpr::default();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() {
        let mut sign = Rational::one();
        match toks[i] {
            Tok::Plus => i += 1,
            Tok::Minus => {
                sign = -sign;
                i += 1;
            }
            _ if first => {}
            _ => return Err(bad()),
        }
        first = false;
        let mut coef = None;
        if let Some(Tok::Num(n)) = toks.get(i) {
            coef = Some(n.clone());
            i += 1;
            if toks.get(i) == Some(&Tok::Star) {
                i += 1;
                if !matches!(toks.get(i), Some(Tok::Ident(_))) {
                    return Err(bad());
                }
            }
        }
        match toks.get(i) {
            Some(Tok::Ident(name)) => {
                expr.terms.push((name.clone(), sign * coef.unwrap_or_else(Rational::one)));
                i += 1;
            }
            _ => match coef {
                Some(c) => expr.constant += sign * c,
                None => return Err(bad()),
            },
        }
    }
    if first {
        return Err(bad());
    }
    Ok(expr)
}

/// Splits `lhs <= rhs` (or `>=`, flipped) into `(smaller, larger)`.
pub(super) fn inequality(line: &str) -> Result<(LinearExpr, LinearExpr)> {
    if let Some((l, r)) = line.split_once("<=") {
        Ok((expression(l)?, expression(r)?))
    } else if let Some((l, r)) = line.split_once(">=") {
        Ok((expression(r)?, expression(l)?))
    } else {
        Err(domain(format!("no `<=` or `>=` in `{line}`")))
    }
}
