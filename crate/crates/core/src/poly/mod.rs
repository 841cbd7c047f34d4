//! Exact multivariate polynomials and rational functions over a generic
//! field, with substitution and reduction modulo quadratic relations for
//! adjoined square roots.
//!
//! Polynomials are kept in canonical form (graded-lex term order, no zero
//! coefficients), so structural equality is mathematical equality. Rational
//! functions are *not* reduced to lowest terms; zero testing clears
//! denominators and reduces the numerator modulo the active relations.

mod parse;

pub use parse::{
    ast_to_rational_function, parse_ast, parse_polynomial, parse_rational_function, Ast,
};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, PrimeField, Rational, Rationals};

/// Errors from polynomial and rational-function arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live in different coefficient fields")]
    FieldMismatch,
    #[error("variable {0} is not bound")]
    UnboundVariable(String),
    #[error("zero denominator")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coefficient not representable in the target field: {0}")]
    BadCoefficient(String),
}

/// A variable: an operator-matrix coefficient `c_{ij}`, a free family
/// parameter, or an adjoined algebraic element (a formal square root).
///
/// The derived order is the global variable order used by the monomial
/// order: all `Coeff` (by `(i, j)`), then parameters alphabetically, then
/// aux symbols alphabetically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariableId {
    /// Matrix entry `c_{ij}`, indices 1-based.
    Coeff(u8, u8),
    Param(String),
    Aux(String),
}

impl VariableId {
    pub fn param(name: &str) -> Self {
        VariableId::Param(name.to_string())
    }

    pub fn aux(name: &str) -> Self {
        VariableId::Aux(name.to_string())
    }

    pub fn name(&self) -> String {
        match self {
            VariableId::Coeff(i, j) => {
                if *i <= 9 && *j <= 9 {
                    format!("c{i}{j}")
                } else {
                    format!("c{i}_{j}")
                }
            }
            VariableId::Param(n) | VariableId::Aux(n) => n.clone(),
        }
    }

    /// Reads a variable back from its printed name. Names of the form
    /// `c<digit><digit>` (digits 1-9) and `c<i>_<j>` are coefficients; any
    /// name in `aux_names` is an aux symbol; everything else is a parameter.
    pub fn from_name(name: &str, aux_names: &BTreeSet<String>) -> Self {
        if let Some(rest) = name.strip_prefix('c') {
            let b = rest.as_bytes();
            if b.len() == 2 && b.iter().all(|d| (b'1'..=b'9').contains(d)) {
                return VariableId::Coeff(b[0] - b'0', b[1] - b'0');
            }
            if let Some((i, j)) = rest.split_once('_') {
                if let (Ok(i), Ok(j)) = (i.parse::<u8>(), j.parse::<u8>()) {
                    if i >= 1 && j >= 1 {
                        return VariableId::Coeff(i, j);
                    }
                }
            }
        }
        if aux_names.contains(name) {
            VariableId::Aux(name.to_string())
        } else {
            VariableId::Param(name.to_string())
        }
    }

    pub fn latex(&self) -> String {
        match self {
            VariableId::Coeff(i, j) => format!("c_{{{i}{j}}}"),
            VariableId::Param(n) | VariableId::Aux(n) => n.clone(),
        }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A power product of variables; exponents positive, variables ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VariableId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VariableId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(VariableId, u32)>) -> Self {
        powers.retain(|(_, e)| *e > 0);
        powers.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(VariableId, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &VariableId) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(VariableId, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push(b.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        out.push((a.0.clone(), a.1 + b.1));
                        i += 1;
                        j += 1;
                    }
                },
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// The monomial with variable `v` removed.
    fn without(&self, v: &VariableId) -> Self {
        Monomial(self.0.iter().filter(|(w, _)| w != v).cloned().collect())
    }
}

// Graded lexicographic order: compare by total degree, then by the exponent
// on the smallest variable where the monomials differ.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An exact multivariate polynomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    field: F,
    /// Terms in strictly descending monomial order; no zero coefficients.
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F) -> Self {
        Polynomial {
            field,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        let terms = if field.is_zero(&c) {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        };
        Polynomial { field, terms }
    }

    pub fn from_i64(field: F, n: i64) -> Self {
        let c = field.from_i64(n);
        Polynomial::constant(field, c)
    }

    pub fn var(field: F, v: VariableId) -> Self {
        let one = field.one();
        Polynomial {
            field,
            terms: vec![(Monomial::var(v), one)],
        }
    }

    pub fn from_terms(field: F, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let mut map: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = field.add(acc, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Polynomial {
            terms: map
                .into_iter()
                .rev()
                .filter(|(_, c)| !field.is_zero(c))
                .collect(),
            field,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Leading coefficient in the monomial order.
    pub fn leading_coefficient(&self) -> Option<&F::Elem> {
        self.terms.first().map(|(_, c)| c)
    }

    fn check_field(&self, other: &Self) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(b.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        let c = self.field.add(&a.1, &b.1);
                        if !self.field.is_zero(&c) {
                            out.push((a.0.clone(), c));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (None, None) => unreachable!(),
            }
        }
        Ok(Polynomial {
            field: self.field.clone(),
            terms: out,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_field(other)?;
        let mut map: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = self.field.mul(ca, cb);
                match map.get_mut(&m) {
                    Some(acc) => *acc = self.field.add(acc, &c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Ok(Polynomial {
            terms: map
                .into_iter()
                .rev()
                .filter(|(_, c)| !self.field.is_zero(c))
                .collect(),
            field: self.field.clone(),
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Polynomial::zero(self.field.clone());
        }
        Polynomial {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), self.field.mul(k, c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::constant(self.field.clone(), self.field.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// All variables appearing in the polynomial, ascending.
    pub fn variables(&self) -> BTreeSet<VariableId> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.powers().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Exact evaluation at a fully bound point.
    pub fn evaluate(&self, point: &BTreeMap<VariableId, F::Elem>) -> Result<F::Elem, PolyError> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.powers() {
                let x = point
                    .get(v)
                    .ok_or_else(|| PolyError::UnboundVariable(v.name()))?;
                for _ in 0..*e {
                    t = self.field.mul(&t, x);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Replaces bound variables by rational functions; unbound parameters
    /// and aux symbols are kept. An unbound matrix coefficient is an error.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<VariableId, RationalFunction<F>>,
    ) -> Result<RationalFunction<F>, PolyError> {
        let mut acc = RationalFunction::zero(self.field.clone());
        for (m, c) in &self.terms {
            let mut t =
                RationalFunction::from_poly(Polynomial::constant(self.field.clone(), c.clone()));
            for (v, e) in m.powers() {
                match bindings.get(v) {
                    Some(rf) => {
                        for _ in 0..*e {
                            t = t.mul(rf)?;
                        }
                    }
                    None => {
                        if let VariableId::Coeff(i, j) = v {
                            return Err(PolyError::UnboundVariable(
                                VariableId::Coeff(*i, *j).name(),
                            ));
                        }
                        let var = Polynomial::var(self.field.clone(), v.clone()).pow(*e);
                        t = t.mul(&RationalFunction::from_poly(var))?;
                    }
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Rewrites `aux² ↦ radicand` until every aux variable appears with
    /// degree at most one. Radicands contain no aux variables, so a single
    /// pass per relation is confluent; the loop re-checks anyway.
    pub fn reduce_mod_relations(&self, relations: &[AlgebraicRelation<F>]) -> Self {
        let mut cur = self.clone();
        loop {
            let mut changed = false;
            for rel in relations {
                let needs = cur.terms.iter().any(|(m, _)| m.exponent(&rel.aux) >= 2);
                if !needs {
                    continue;
                }
                changed = true;
                let mut acc = Polynomial::zero(cur.field.clone());
                for (m, c) in &cur.terms {
                    let e = m.exponent(&rel.aux);
                    if e < 2 {
                        let t = Polynomial {
                            field: cur.field.clone(),
                            terms: vec![(m.clone(), c.clone())],
                        };
                        acc = acc.add(&t).expect("same field");
                    } else {
                        let rest = m.without(&rel.aux);
                        let rest = if e % 2 == 1 {
                            rest.mul(&Monomial::var(rel.aux.clone()))
                        } else {
                            rest
                        };
                        let base = Polynomial {
                            field: cur.field.clone(),
                            terms: vec![(rest, c.clone())],
                        };
                        let repl = rel.radicand.pow(e / 2);
                        acc = acc
                            .add(&base.mul(&repl).expect("same field"))
                            .expect("same field");
                    }
                }
                cur = acc;
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Coefficient map into another field (used to reduce rational systems
    /// into `𝔽_p`).
    pub fn map_coefficients<G: Field>(
        &self,
        target: G,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem, PolyError>,
    ) -> Result<Polynomial<G>, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let c = f(c)?;
            if !target.is_zero(&c) {
                terms.push((m.clone(), c));
            }
        }
        Ok(Polynomial {
            field: target,
            terms,
        })
    }

    fn display_with(&self, render_var: impl Fn(&VariableId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let cs = self.field.display(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if idx == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .powers()
                .iter()
                .map(|(v, e)| {
                    if *e == 1 {
                        render_var(v)
                    } else {
                        format!("{}^{}", render_var(v), e)
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&vars.join("*"));
            }
        }
        out
    }

    /// Renders in LaTeX with subscripted `c_{ij}` coefficients.
    pub fn to_latex(&self) -> String {
        self.display_with(|v| v.latex()).replace('*', " ")
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|v| v.name()))
    }
}

/// JSON term-list form of a polynomial over `ℚ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub c: Rational,
    pub m: Vec<(String, u32)>,
}

impl Polynomial<Rationals> {
    /// Parses the readable text form, e.g. `"c11^2 + 2*c12*c21 - a*b"`.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        parse_polynomial(text, &BTreeSet::new())
    }

    pub fn to_json(&self) -> PolynomialJson {
        let mut aux: BTreeSet<String> = BTreeSet::new();
        for v in self.variables() {
            if let VariableId::Aux(n) = v {
                aux.insert(n);
            }
        }
        PolynomialJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    c: c.clone(),
                    m: m.powers().iter().map(|(v, e)| (v.name(), *e)).collect(),
                })
                .collect(),
            aux: aux.into_iter().collect(),
        }
    }

    pub fn from_json(js: &PolynomialJson) -> Self {
        let aux: BTreeSet<String> = js.aux.iter().cloned().collect();
        let terms = js
            .terms
            .iter()
            .map(|t| {
                let m = Monomial::from_powers(
                    t.m.iter()
                        .map(|(name, e)| (VariableId::from_name(name, &aux), *e))
                        .collect(),
                );
                (m, t.c.clone())
            })
            .collect();
        Polynomial::from_terms(Rationals, terms)
    }

    /// Reduction of every coefficient into `𝔽_p`.
    pub fn to_prime_field(&self, p: u64) -> Result<Polynomial<PrimeField>, PolyError> {
        self.map_coefficients(PrimeField(p), |c| {
            c.to_fp(p)
                .map_err(|e| PolyError::BadCoefficient(e.to_string()))
        })
    }
}

/// A quotient of polynomials. The denominator is kept monic; no reduction
/// to lowest terms is attempted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction<F: Field> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        num.check_field(&den)?;
        // Monic denominator makes structurally equal denominators common,
        // which keeps the common-denominator fast path in `add` effective.
        let lead = den.leading_coefficient().expect("nonzero").clone();
        if den.field.is_one(&lead) {
            Ok(RationalFunction { num, den })
        } else {
            let inv = den.field.inv(&lead).expect("nonzero leading coefficient");
            Ok(RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            })
        }
    }

    pub fn from_poly(num: Polynomial<F>) -> Self {
        let one = Polynomial::constant(num.field.clone(), num.field.one());
        RationalFunction { num, den: one }
    }

    pub fn zero(field: F) -> Self {
        RationalFunction::from_poly(Polynomial::zero(field))
    }

    pub fn numerator(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<F> {
        &self.den
    }

    /// The pair `(numerator, denominator)`; common factors are not removed.
    pub fn clear_denominators(&self) -> (Polynomial<F>, Polynomial<F>) {
        (self.num.clone(), self.den.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.den == other.den {
            return Ok(RationalFunction {
                num: self.num.add(&other.num)?,
                den: self.den.clone(),
            });
        }
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        RationalFunction::new(num, self.den.mul(&other.den)?)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        RationalFunction::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        if other.num.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&other.den)?, self.den.mul(&other.num)?)
    }

    /// Zero test valid wherever the declared relations hold and the
    /// denominator does not vanish.
    pub fn is_zero_mod(&self, relations: &[AlgebraicRelation<F>]) -> bool {
        self.num.reduce_mod_relations(relations).is_zero()
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant()
            && self.den.field.is_one(
                self.den
                    .leading_coefficient()
                    .unwrap_or(&self.den.field.one()),
            )
        {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `aux² = radicand`, encoding an adjoined square root. The radicand is a
/// polynomial in parameters only; nested radicals are rejected upstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicRelation<F: Field> {
    pub aux: VariableId,
    pub radicand: Polynomial<F>,
}

impl<F: Field> AlgebraicRelation<F> {
    pub fn new(aux: VariableId, radicand: Polynomial<F>) -> Result<Self, PolyError> {
        if !matches!(aux, VariableId::Aux(_)) {
            return Err(PolyError::Parse(format!(
                "relation must be on an aux variable, got {aux}"
            )));
        }
        for v in radicand.variables() {
            if !matches!(v, VariableId::Param(_)) {
                return Err(PolyError::Parse(format!(
                    "radicand must involve parameters only, found {v}"
                )));
            }
        }
        Ok(AlgebraicRelation { aux, radicand })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qp(s: &str) -> Polynomial<Rationals> {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn canonical_product_of_sum_and_difference() {
        let lhs = qp("(x+y)*(x-y)");
        assert_eq!(lhs, qp("x^2 - y^2"));
    }

    #[test]
    fn additive_inverse_cancels() {
        let f = qp("3*c11^2 - 2*a*b + 7");
        assert!(f.add(&f.neg()).unwrap().is_zero());
    }

    #[test]
    fn display_matches_expected_text_form() {
        let f = qp("c11^2 + 2*c12*c21 - a*b");
        assert_eq!(f.to_string(), "c11^2 + 2*c12*c21 - a*b");
        assert_eq!(qp("0").to_string(), "0");
        assert_eq!(qp("-x + 1").to_string(), "-x + 1");
    }

    #[test]
    fn variable_order_is_coeff_then_param_then_aux() {
        let c = VariableId::Coeff(3, 3);
        let p = VariableId::param("a");
        let s = VariableId::aux("F");
        assert!(c < p && p < s);
        assert!(VariableId::Coeff(1, 2) < VariableId::Coeff(2, 1));
        assert!(VariableId::param("a") < VariableId::param("b"));
    }

    #[test]
    fn field_mismatch_is_detected() {
        let f7 = Polynomial::var(PrimeField(7), VariableId::param("x"));
        let f11 = Polynomial::var(PrimeField(11), VariableId::param("x"));
        assert_eq!(f7.add(&f11), Err(PolyError::FieldMismatch));
        assert_eq!(f7.mul(&f11), Err(PolyError::FieldMismatch));
    }

    #[test]
    fn substitute_null_family_row_sum_vanishes() {
        // Bindings c11 → a, c12 → -a collapse c11 + c12.
        let f = qp("c11 + c12");
        let mut b = BTreeMap::new();
        b.insert(
            VariableId::Coeff(1, 1),
            RationalFunction::from_poly(qp("a")),
        );
        b.insert(
            VariableId::Coeff(1, 2),
            RationalFunction::from_poly(qp("-a")),
        );
        let r = f.substitute(&b).unwrap();
        assert!(r.numerator().is_zero());
    }

    #[test]
    fn substitute_carries_denominators() {
        let f = qp("c12");
        let mut b = BTreeMap::new();
        b.insert(
            VariableId::Coeff(1, 2),
            parse_rational_function("-a^2/b", &BTreeSet::new()).unwrap(),
        );
        let r = f.substitute(&b).unwrap();
        assert_eq!(r.numerator(), &qp("-a^2"));
        assert_eq!(r.denominator(), &qp("b"));
    }

    #[test]
    fn substitute_keeps_free_parameters() {
        let f = qp("a*b + a^2");
        let r = f.substitute(&BTreeMap::new()).unwrap();
        assert_eq!(r.numerator(), &f);
    }

    #[test]
    fn identity_binding_leaves_polynomial_unchanged() {
        let f = qp("c11^2 + c11*a - 3");
        let mut b = BTreeMap::new();
        b.insert(
            VariableId::Coeff(1, 1),
            RationalFunction::from_poly(qp("c11")),
        );
        let r = f.substitute(&b).unwrap();
        assert_eq!(r.numerator(), &f);
        assert!(r.denominator().is_constant());
    }

    #[test]
    fn substitute_requires_coefficient_bindings() {
        let f = qp("c11 + a");
        let err = f.substitute(&BTreeMap::new()).unwrap_err();
        assert_eq!(err, PolyError::UnboundVariable("c11".into()));
    }

    fn relation(aux: &str, radicand: &str) -> AlgebraicRelation<Rationals> {
        AlgebraicRelation::new(VariableId::aux(aux), qp(radicand)).unwrap()
    }

    fn with_aux(text: &str, aux: &str) -> Polynomial<Rationals> {
        let names: BTreeSet<String> = [aux.to_string()].into();
        parse_polynomial(text, &names).unwrap()
    }

    #[test]
    fn radical_reduction_examples() {
        let rel = relation("s", "q");
        // s³x → q·s·x
        let f = with_aux("s^3*x", "s");
        assert_eq!(
            f.reduce_mod_relations(std::slice::from_ref(&rel)),
            with_aux("q*s*x", "s")
        );
        // s² + ab with s² = -ab → 0
        let rel2 = relation("s", "-a*b");
        let g = with_aux("s^2 + a*b", "s");
        assert!(g.reduce_mod_relations(&[rel2]).is_zero());
        // F² + ac + bd with F² = -(ac+bd) → 0
        let rel3 = relation("F", "-(a*c+b*d)");
        let h = with_aux("F^2 + a*c + b*d", "F");
        assert!(h.reduce_mod_relations(&[rel3]).is_zero());
    }

    #[test]
    fn radical_reduction_is_idempotent_and_aux_linear() {
        let rel = relation("s", "a*b - 1");
        let f = with_aux("s^5 + 3*s^4*x - s^2 + s + 7", "s");
        let once = f.reduce_mod_relations(std::slice::from_ref(&rel));
        let twice = once.reduce_mod_relations(std::slice::from_ref(&rel));
        assert_eq!(once, twice);
        for (m, _) in once.terms() {
            assert!(m.exponent(&rel.aux) <= 1);
        }
    }

    #[test]
    fn clear_denominators_examples() {
        let zero = parse_rational_function("(a^2-a^2)/b", &BTreeSet::new()).unwrap();
        assert!(zero.clear_denominators().0.is_zero());

        let sum = parse_rational_function("-a^2/b + a^2/b", &BTreeSet::new()).unwrap();
        let (n, d) = sum.clear_denominators();
        assert!(n.is_zero());
        assert_eq!(d, qp("b"));

        let s = parse_rational_function("1/b + 1/c", &BTreeSet::new()).unwrap();
        assert_eq!(s.numerator(), &qp("b + c"));
        assert_eq!(s.denominator(), &qp("b*c"));
    }

    #[test]
    fn evaluate_known_point() {
        // (c11+c12)² − 2c11(c11+c12) at c11=1, c12=−1 vanishes.
        let f = qp("(c11+c12)^2 - 2*c11*(c11+c12)");
        let mut point = BTreeMap::new();
        point.insert(VariableId::Coeff(1, 1), Rational::from_int(1));
        point.insert(VariableId::Coeff(1, 2), Rational::from_int(-1));
        assert!(f.evaluate(&point).unwrap().is_zero());
    }

    #[test]
    fn evaluate_at_origin_gives_constant_term() {
        let f = qp("x^2*y - 4*x + 5");
        let mut point = BTreeMap::new();
        point.insert(VariableId::param("x"), Rational::zero());
        point.insert(VariableId::param("y"), Rational::zero());
        assert_eq!(f.evaluate(&point).unwrap(), Rational::from_int(5));
    }

    #[test]
    fn evaluate_unbound_is_an_error() {
        let f = qp("x + y");
        let mut point = BTreeMap::new();
        point.insert(VariableId::param("x"), Rational::zero());
        assert_eq!(
            f.evaluate(&point),
            Err(PolyError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn text_form_round_trips() {
        for s in [
            "c11^2 + 2*c12*c21 - a*b",
            "-x + 1",
            "0",
            "1/2*a^3 - 7",
            "a*b*c - a^2*b^2",
        ] {
            let f = qp(s);
            assert_eq!(qp(&f.to_string()), f);
        }
    }

    #[test]
    fn json_form_round_trips() {
        let f = with_aux("F^2*c11 - 1/3*a*F + 2", "F");
        let js = serde_json::to_string(&f.to_json()).unwrap();
        let back: PolynomialJson = serde_json::from_str(&js).unwrap();
        assert_eq!(Polynomial::from_json(&back), f);
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial<Rationals>> {
        let var = prop_oneof![
            Just(VariableId::Coeff(1, 1)),
            Just(VariableId::Coeff(1, 2)),
            Just(VariableId::param("a")),
            Just(VariableId::param("b")),
        ];
        let term = (var, 0u32..3, -4i64..5).prop_map(|(v, e, c)| {
            let m = Monomial::from_powers(vec![(v, e)]);
            (m, Rational::from_int(c))
        });
        proptest::collection::vec(term, 0..6).prop_map(|ts| Polynomial::from_terms(Rationals, ts))
    }

    proptest! {
        #[test]
        fn addition_is_commutative(f in arb_poly(), g in arb_poly()) {
            prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        }

        #[test]
        fn multiplication_is_commutative_and_associative(
            f in arb_poly(), g in arb_poly(), h in arb_poly()
        ) {
            prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
            let lhs = f.mul(&g).unwrap().mul(&h).unwrap();
            let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn multiplication_distributes(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
            let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_is_additive_over_q(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let prod = f.mul(&g).unwrap();
            prop_assert_eq!(
                prod.degree().unwrap(),
                f.degree().unwrap() + g.degree().unwrap()
            );
        }

        #[test]
        fn evaluation_commutes_with_reduction_mod_p(f in arb_poly(), x in 0u64..7, y in 0u64..7, z in 0u64..7, w in 0u64..7) {
            // Integer-coefficient polynomials: evaluate over ℚ then reduce,
            // or reduce the polynomial and evaluate over 𝔽₇.
            let ints = f.terms().iter().all(|(_, c)| {
                use num_traits::One;
                c.denom().is_one()
            });
            prop_assume!(ints);
            let p = 7u64;
            let mut qpnt = BTreeMap::new();
            let mut fpnt = BTreeMap::new();
            for (v, val) in [
                (VariableId::Coeff(1, 1), x),
                (VariableId::Coeff(1, 2), y),
                (VariableId::param("a"), z),
                (VariableId::param("b"), w),
            ] {
                qpnt.insert(v.clone(), Rational::from_int(val as i64));
                fpnt.insert(v, crate::field::Fp::new(val, p));
            }
            let over_q = f.evaluate(&qpnt).unwrap().to_fp(p).unwrap();
            let over_fp = f.to_prime_field(p).unwrap().evaluate(&fpnt).unwrap();
            prop_assert_eq!(over_q, over_fp);
        }

        #[test]
        fn substitute_then_evaluate_matches_composed_evaluation(
            f in arb_poly(), a in -3i64..4, b in -3i64..4
        ) {
            // Bind c11 → a·b (a polynomial), then evaluate at a point; must
            // agree with evaluating f at the composed point directly.
            let mut bindings = BTreeMap::new();
            bindings.insert(
                VariableId::Coeff(1, 1),
                RationalFunction::from_poly(qp("a*b")),
            );
            bindings.insert(
                VariableId::Coeff(1, 2),
                RationalFunction::from_poly(qp("a + 1")),
            );
            let substituted = f.substitute(&bindings).unwrap();

            let mut point = BTreeMap::new();
            point.insert(VariableId::param("a"), Rational::from_int(a));
            point.insert(VariableId::param("b"), Rational::from_int(b));
            let num = substituted.numerator().evaluate(&point).unwrap();
            let den = substituted.denominator().evaluate(&point).unwrap();
            let via_subst = num.div(&den).unwrap();

            let mut composed = point.clone();
            composed.insert(VariableId::Coeff(1, 1), Rational::from_int(a * b));
            composed.insert(VariableId::Coeff(1, 2), Rational::from_int(a + 1));
            let direct = f.evaluate(&composed).unwrap();
            prop_assert_eq!(via_subst, direct);
        }
    }
}
