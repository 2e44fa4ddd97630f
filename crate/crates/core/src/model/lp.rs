//! CPLEX-style LP text for a case model, plus a reader for the same dialect.
//!
//! Output is deterministic: variables in lexicographic `(i, j)` order,
//! constraints in model order. A row whose coefficients are not all finite
//! decimals is scaled to integers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CaseModel, ModelError};
use crate::exactmath::rational::{exact_decimal, is_integral, parse_decimal};
use crate::exactmath::{Rational, Relation};

fn decimal(value: &Rational) -> String {
    exact_decimal(value).expect("row was scaled to decimal-representable values")
}

fn write_row(out: &mut String, terms: &[(String, Rational)], relation: Relation, rhs: &Rational, filler: &str) {
    let mut scale = Rational::one();
    if terms.iter().map(|(_, c)| c).chain(std::iter::once(rhs)).any(|c| exact_decimal(c).is_none()) {
        let lcm = terms.iter().map(|(_, c)| c).chain(std::iter::once(rhs)).fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        scale = Rational::from_integer(lcm);
    }
    if terms.is_empty() {
        write!(out, "0 {filler}").unwrap();
    }
    for (k, (name, coeff)) in terms.iter().enumerate() {
        let c = coeff * &scale;
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        if k == 0 {
            if c.is_negative() {
                out.push_str("- ");
            }
        } else {
            write!(out, " {sign} ").unwrap();
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            write!(out, "{} {}", decimal(&mag), name).unwrap();
        }
    }
    let op = match relation {
        Relation::Eq => "=",
        Relation::Le => "<=",
        Relation::Ge => ">=",
        Relation::Ne => unreachable!("model rows never use !="),
    };
    writeln!(out, " {op} {}", decimal(&(rhs * &scale))).unwrap();
}

pub fn export_lp_text(model: &CaseModel) -> String {
    let spec = model.spec();
    let mut out = String::new();
    writeln!(out, "\\ Minimal counterexample system: {} red, {} blue, |P| = {}", spec.n, spec.blue, spec.total())
        .unwrap();
    for (var, reasons) in model.zeroed() {
        let labels: Vec<&str> = reasons.iter().map(|g| g.label()).collect();
        writeln!(out, "\\ zeroed {var}: {}", labels.join(", ")).unwrap();
    }
    for conflict in model.pin_conflicts() {
        writeln!(out, "\\ conflicting pin: {conflict}").unwrap();
    }
    let filler = model.variables().iter().next().map(|v| v.lp_name()).unwrap_or_else(|| "s_none".to_string());

    out.push_str("Minimize\n obj: 0\nSubject To\n");
    for c in model.constraints() {
        write!(out, " {}: ", c.label).unwrap();
        let terms: Vec<(String, Rational)> = c.terms.iter().map(|(v, k)| (v.lp_name(), k.clone())).collect();
        write_row(&mut out, &terms, c.relation, &c.rhs, &filler);
    }
    for conflict in model.pin_conflicts() {
        write!(out, " {conflict}: ").unwrap();
        write_row(&mut out, &[], Relation::Ge, &Rational::one(), &filler);
    }
    out.push_str("Bounds\n");
    if model.variables().is_empty() {
        out.push_str(" s_none = 0\n");
    }
    for v in model.variables() {
        writeln!(out, " {} >= 0", v.lp_name()).unwrap();
    }
    out.push_str("General\n");
    if !model.variables().is_empty() {
        let names: Vec<String> = model.variables().iter().map(|v| v.lp_name()).collect();
        writeln!(out, " {}", names.join(" ")).unwrap();
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub label: String,
    pub terms: BTreeMap<String, Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A parsed LP file: rows, variable bounds and integer declarations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpText {
    pub rows: Vec<LpRow>,
    pub lower: BTreeMap<String, Rational>,
    pub upper: BTreeMap<String, Rational>,
    pub generals: BTreeSet<String>,
    pub variables: BTreeSet<String>,
}

impl LpText {
    /// Labels of violated rows and bounds. Variables default to lower bound
    /// 0 and no upper bound; names absent from the file must be zero.
    pub fn violations(&self, values: &BTreeMap<String, Rational>) -> Vec<String> {
        let mut out = Vec::new();
        let get = |name: &str| values.get(name).cloned().unwrap_or_else(Rational::zero);
        for (name, v) in values {
            if !self.variables.contains(name) && !v.is_zero() {
                out.push(format!("unknown_variable:{name}"));
            }
        }
        for row in &self.rows {
            let lhs = row.terms.iter().fold(Rational::zero(), |acc, (n, c)| acc + c * get(n));
            if !row.relation.holds(&lhs, &row.rhs) {
                out.push(row.label.clone());
            }
        }
        for name in &self.variables {
            let v = get(name);
            let lo = self.lower.get(name).cloned().unwrap_or_else(Rational::zero);
            if v < lo || self.upper.get(name).is_some_and(|hi| v > *hi) {
                out.push(format!("bounds:{name}"));
            }
            if self.generals.contains(name) && !is_integral(&v) {
                out.push(format!("integrality:{name}"));
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Generals,
    End,
}

fn section_header(line: &str) -> Option<Section> {
    match line.to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "maximize" | "maximise" | "min" | "max" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "general" | "generals" | "gen" | "integer" | "integers" => Some(Section::Generals),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn parse_relation(token: &str) -> Option<Relation> {
    match token {
        "=" => Some(Relation::Eq),
        "<=" | "=<" | "<" => Some(Relation::Le),
        ">=" | "=>" | ">" => Some(Relation::Ge),
        _ => None,
    }
}

/// Splits `2 x + 0.75 y - z >= 3` into tokens, separating operators.
fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        if !current.is_empty() {
            tokens.push(std::mem::take(current));
        }
    };
    while let Some(ch) = chars.next() {
        match ch {
            ' ' | '\t' => flush(&mut current, &mut tokens),
            '+' | '-' => {
                flush(&mut current, &mut tokens);
                tokens.push(ch.to_string());
            }
            '<' | '>' | '=' => {
                flush(&mut current, &mut tokens);
                let mut op = ch.to_string();
                if let Some(&next) = chars.peek() {
                    if matches!(next, '=' | '<' | '>') {
                        op.push(next);
                        chars.next();
                    }
                }
                tokens.push(op);
            }
            _ => current.push(ch),
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

fn is_number(token: &str) -> bool {
    token.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '.')
}

/// Parses a signed linear expression into coefficients.
fn parse_linear(tokens: &[String]) -> Result<BTreeMap<String, Rational>, String> {
    let mut terms: BTreeMap<String, Rational> = BTreeMap::new();
    let mut sign = Rational::one();
    let mut coeff: Option<Rational> = None;
    for token in tokens {
        match token.as_str() {
            "+" => {}
            "-" => sign = -sign,
            t if is_number(t) => {
                coeff = Some(parse_decimal(t).map_err(|e| e.to_string())?);
            }
            name => {
                let c = coeff.take().unwrap_or_else(Rational::one) * &sign;
                *terms.entry(name.to_string()).or_insert_with(Rational::zero) += c;
                sign = Rational::one();
            }
        }
    }
    // A trailing bare constant (as in `obj: 0`) carries no variable.
    Ok(terms)
}

fn parse_signed_number(tokens: &[String]) -> Result<Rational, String> {
    let mut sign = Rational::one();
    let mut value = None;
    for t in tokens {
        match t.as_str() {
            "+" => {}
            "-" => sign = -sign,
            n if is_number(n) && value.is_none() => value = Some(parse_decimal(n).map_err(|e| e.to_string())?),
            other => return Err(format!("unexpected token `{other}` in constant")),
        }
    }
    value.map(|v| v * sign).ok_or_else(|| "missing constant".to_string())
}

pub fn parse_lp_text(text: &str) -> Result<LpText, ModelError> {
    let mut lp = LpText::default();
    let mut section = Section::Preamble;
    let mut auto_label = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ModelError::LpParse { line: line_no, message };
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(next) = section_header(line) {
            section = next;
            continue;
        }
        match section {
            Section::Preamble => return Err(err(format!("content before any section: `{line}`"))),
            Section::Objective | Section::End => {}
            Section::Constraints => {
                let (label, body) = match line.split_once(':') {
                    Some((l, b)) => (l.trim().to_string(), b),
                    None => {
                        auto_label += 1;
                        (format!("c{auto_label}"), line)
                    }
                };
                let tokens = tokenize(body);
                let op_at = tokens
                    .iter()
                    .position(|t| parse_relation(t).is_some())
                    .ok_or_else(|| err("constraint without relation".into()))?;
                let relation = parse_relation(&tokens[op_at]).unwrap();
                let terms = parse_linear(&tokens[..op_at]).map_err(err)?;
                let rhs = parse_signed_number(&tokens[op_at + 1..]).map_err(err)?;
                lp.variables.extend(terms.keys().cloned());
                lp.rows.push(LpRow { label, terms, relation, rhs });
            }
            Section::Bounds => {
                let tokens = tokenize(line);
                let ops: Vec<usize> =
                    tokens.iter().enumerate().filter(|(_, t)| parse_relation(t).is_some()).map(|(i, _)| i).collect();
                match ops.as_slice() {
                    [op] => {
                        let (left, right) = (&tokens[..*op], &tokens[op + 1..]);
                        let relation = parse_relation(&tokens[*op]).unwrap();
                        let (name, value, relation) = if left.len() == 1 && !is_number(&left[0]) {
                            (left[0].clone(), parse_signed_number(right).map_err(err)?, relation)
                        } else if right.len() == 1 {
                            (right[0].clone(), parse_signed_number(left).map_err(err)?, relation.flipped())
                        } else {
                            return Err(err(format!("cannot read bound `{line}`")));
                        };
                        lp.variables.insert(name.clone());
                        match relation {
                            Relation::Ge => {
                                lp.lower.insert(name, value);
                            }
                            Relation::Le => {
                                lp.upper.insert(name, value);
                            }
                            _ => {
                                lp.lower.insert(name.clone(), value.clone());
                                lp.upper.insert(name, value);
                            }
                        }
                    }
                    [a, b] => {
                        let lo = parse_signed_number(&tokens[..*a]).map_err(err)?;
                        let name = tokens[a + 1..*b].join("");
                        let hi = parse_signed_number(&tokens[b + 1..]).map_err(err)?;
                        lp.variables.insert(name.clone());
                        lp.lower.insert(name.clone(), lo);
                        lp.upper.insert(name, hi);
                    }
                    _ => return Err(err(format!("cannot read bound `{line}`"))),
                }
            }
            Section::Generals => {
                for name in line.split_whitespace() {
                    lp.variables.insert(name.to_string());
                    lp.generals.insert(name.to_string());
                }
            }
        }
    }
    if section != Section::End {
        return Err(ModelError::LpParse { line: text.lines().count(), message: "missing End".into() });
    }
    Ok(lp)
}
