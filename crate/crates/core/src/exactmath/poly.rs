//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, Rational};
use super::MathError;

/// A polynomial over an ordered list of named variables. Exponent vectors
/// are indexed like `vars`; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = align(self, other);
        a.terms == b.terms
    }
}

impl Poly {
    pub fn zero(vars: &[&str]) -> Self {
        Poly { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], value: Rational) -> Self {
        let mut p = Poly::zero(vars);
        let exps = vec![0; p.vars.len()];
        p.insert(exps, value);
        p
    }

    /// The polynomial consisting of the single variable `name`, which must be
    /// one of `vars`.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Poly::zero(vars);
        let idx = p.index_of(name).expect("variable not declared");
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.insert(exps, Rational::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn insert(&mut self, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Coefficient of the monomial with exponents given by variable name.
    pub fn coeff(&self, monomial: &[(&str, u32)]) -> Rational {
        let mut exps = vec![0; self.vars.len()];
        for (name, e) in monomial {
            match self.index_of(name) {
                Some(i) => exps[i] = *e,
                None if *e == 0 => {}
                None => return Rational::zero(),
            }
        }
        self.terms.get(&exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.index_of(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Variables occurring with a positive exponent in some term.
    pub fn occurring_vars(&self) -> Vec<&str> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Poly {
        let mut out = Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * factor);
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let mut acc = Poly::constant(&vars, Rational::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `name` by `replacement` everywhere. The substituted variable
    /// is dropped from the variable list unless `replacement` uses it.
    pub fn substitute(&self, name: &str, replacement: &Poly) -> Poly {
        let Some(idx) = self.index_of(name) else {
            return self.clone();
        };
        let mut vars: Vec<&str> = self.vars.iter().map(String::as_str).filter(|v| *v != name).collect();
        for v in replacement.occurring_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let replacement = replacement.over(&vars);
        let mut out = Poly::zero(&vars);
        for (exps, coeff) in &self.terms {
            let mut rest = Poly::zero(&vars);
            let mut rest_exps = vec![0; vars.len()];
            for (i, &e) in exps.iter().enumerate() {
                if i == idx {
                    continue;
                }
                let target = vars.iter().position(|v| *v == self.vars[i]).unwrap();
                rest_exps[target] = e;
            }
            rest.insert(rest_exps, coeff.clone());
            out = &out + &(&rest * &replacement.pow(exps[idx]));
        }
        out
    }

    pub fn eval(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational, MathError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for name in &self.vars {
            values.push(assignment.get(name));
        }
        for name in self.occurring_vars() {
            if !assignment.contains_key(name) {
                return Err(MathError::MissingVariable(name.to_string()));
            }
        }
        let mut total = Rational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    let v = values[i].expect("checked above");
                    for _ in 0..e {
                        term *= v;
                    }
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// If `self = α·name + β` with α a nonzero constant and β free of `name`,
    /// returns the root `-β/α`.
    pub fn linear_root_in(&self, name: &str) -> Option<Poly> {
        let idx = self.index_of(name)?;
        if self.degree_in(name) != 1 {
            return None;
        }
        let mut alpha: Option<Rational> = None;
        let mut beta = Poly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (exps, coeff) in &self.terms {
            if exps[idx] == 1 {
                if exps.iter().enumerate().any(|(i, &e)| i != idx && e > 0) || alpha.is_some() {
                    return None;
                }
                alpha = Some(coeff.clone());
            } else {
                beta.insert(exps.clone(), coeff.clone());
            }
        }
        let alpha = alpha?;
        Some(beta.scale(&(-alpha.recip())).substitute(name, &Poly::zero(&[])))
    }

    /// Coefficients `[c0, c1, ...]` when `name` is the only variable present.
    pub fn univariate_coeffs(&self, name: &str) -> Option<Vec<Rational>> {
        let others = self.occurring_vars();
        if others.iter().any(|v| *v != name) {
            return None;
        }
        let idx = self.index_of(name);
        let degree = self.degree_in(name) as usize;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (exps, c) in &self.terms {
            let e = idx.map_or(0, |i| exps[i]) as usize;
            coeffs[e] = c.clone();
        }
        Some(coeffs)
    }
}

impl Poly {
    /// Re-expresses `self` over `vars`, which must include every occurring
    /// variable.
    fn over<S: AsRef<str>>(&self, vars: &[S]) -> Poly {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = Poly { vars: vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut exps = vec![0; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => exps[j] = x,
                    None => assert_eq!(x, 0, "variable {} occurs but is not in the target list", self.vars[i]),
                }
            }
            out.insert(exps, c.clone());
        }
        out
    }
}

/// Re-expresses both polynomials over the union of their variables.
fn align(p: &Poly, q: &Poly) -> (Poly, Poly) {
    if p.vars == q.vars {
        return (p.clone(), q.clone());
    }
    let mut vars: Vec<String> = p.vars.clone();
    for v in &q.vars {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    (p.over(&vars), q.over(&vars))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut a, b) = align(self, rhs);
        for (e, c) in b.terms {
            a.insert(e, c);
        }
        a
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let (a, b) = align(self, rhs);
        let mut out = Poly { vars: a.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Highest total degree first; e.g. `-a*c + a - 3c - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        ordered.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        for (k, (exps, coeff)) in ordered.into_iter().enumerate() {
            let monomial: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            let magnitude = coeff.abs();
            let sign = if coeff.is_negative() { "-" } else { "+" };
            if k == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if monomial.is_empty() {
                write!(f, "{}", fmt_rational(&magnitude))?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{}", fmt_rational(&magnitude))?;
                }
                write!(f, "{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::det3;
    use crate::exactmath::rational::{int, rat};
    use proptest::prelude::*;

    const AC: &[&str] = &["a", "c"];

    fn a() -> Poly {
        Poly::var(AC, "a")
    }
    fn c() -> Poly {
        Poly::var(AC, "c")
    }
    fn k(v: i64) -> Poly {
        Poly::constant(AC, int(v))
    }

    #[test]
    fn difference_of_collinearity_conditions() {
        // (a - 1 - 3c - ac) - (3c - a - 1 - ac) = 2a - 6c
        let first = &(&(&a() - &k(1)) - &(&k(3) * &c())) - &(&a() * &c());
        let second = &(&(&(&k(3) * &c()) - &a()) - &k(1)) - &(&a() * &c());
        let diff = &first - &second;
        assert_eq!(diff, &(&k(2) * &a()) - &(&k(6) * &c()));
        assert_eq!(diff.to_string(), "2a - 6c");
    }

    #[test]
    fn substitution_gives_eliminant() {
        let second = &(&(&(&k(3) * &c()) - &a()) - &k(1)) - &(&a() * &c());
        let out = second.substitute("a", &(&k(3) * &c()));
        assert_eq!(out, &(&k(-3) * &c().pow(2)) - &Poly::constant(&["c"], int(1)));
        assert_eq!(out.to_string(), "-3c^2 - 1");
        assert_eq!(out.vars(), &["c".to_string()]);
    }

    #[test]
    fn multiplying_by_zero() {
        let p = &(&a() * &c()) + &k(5);
        assert!((&p * &Poly::zero(AC)).is_zero());
    }

    #[test]
    fn symbolic_det3() {
        let m = [[c(), c(), k(1)], [a(), k(-1), k(1)], [k(-1), k(1), k(1)]];
        let d = det3(&m);
        let expected = &(&(&a() - &k(1)) - &(&k(3) * &c())) - &(&a() * &c());
        assert_eq!(d, expected);
    }

    #[test]
    fn eval_requires_all_occurring_vars() {
        let p = &a() * &c();
        let mut env = BTreeMap::new();
        env.insert("a".to_string(), int(2));
        assert!(matches!(p.eval(&env), Err(MathError::MissingVariable(v)) if v == "c"));
        env.insert("c".to_string(), rat(1, 3));
        assert_eq!(p.eval(&env).unwrap(), rat(2, 3));
        // `a` alone does not need `c`.
        env.remove("c");
        assert_eq!(a().eval(&env).unwrap(), int(2));
    }

    #[test]
    fn linear_root() {
        let diff = &(&k(2) * &a()) - &(&k(6) * &c());
        let root = diff.linear_root_in("a").unwrap();
        assert_eq!(root, &k(3) * &c());
        assert!((&a() * &c()).linear_root_in("a").is_none());
        assert_eq!((&(&k(2) * &a()) - &k(6)).linear_root_in("a").unwrap().as_constant(), Some(int(3)));
    }

    #[test]
    fn univariate_view() {
        let p = &(&k(3) * &c().pow(2)) + &k(1);
        assert_eq!(p.univariate_coeffs("c").unwrap(), vec![int(1), int(0), int(3)]);
        assert!(a().univariate_coeffs("c").is_none());
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..3, 0u32..3), -5i64..=5), 0..5).prop_map(|terms| {
            let mut p = Poly::zero(AC);
            for ((ea, ec), coeff) in terms {
                p.insert(vec![ea, ec], int(coeff));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn mul_commutes_with_eval(p in small_poly(), q in small_poly(), x in -9i64..=9, y in 1i64..=7) {
            let mut env = BTreeMap::new();
            env.insert("a".to_string(), int(x));
            env.insert("c".to_string(), rat(x + 1, y));
            let lhs = (&p * &q).eval(&env).unwrap();
            let rhs = p.eval(&env).unwrap() * q.eval(&env).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!((&p * &q).terms.values().all(|c| !c.is_zero()));
        }

        #[test]
        fn substitution_commutes_with_eval(p in small_poly(), q in small_poly(), x in -4i64..=4, y in -4i64..=4) {
            let mut env = BTreeMap::new();
            env.insert("a".to_string(), int(x));
            env.insert("c".to_string(), int(y));
            let substituted = p.substitute("a", &q);
            let mut env2 = env.clone();
            env2.insert("a".to_string(), q.eval(&env).unwrap());
            prop_assert_eq!(substituted.eval(&env).unwrap(), p.eval(&env2).unwrap());
        }
    }
}
