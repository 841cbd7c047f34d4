//! The curated catalog of weight-zero Rota-Baxter solution families on the
//! 22 cataloged semigroup algebras, with symbolic verification and
//! finite-field instance enumeration.
//!
//! Families are data, not code: the crate ships `data/families.json` and
//! user files with the same schema can be loaded alongside it. A family is
//! a matrix of rational functions in free parameters, a list of quadratic
//! relations `aux² = radicand` for adjoined square roots, and a list of
//! nonvanishing constraints. Square-root entries are stored radicand-first:
//! an entry `√(ab)·i` becomes an aux symbol `s` with `s² = −ab`, so no
//! standalone imaginary unit is ever needed and the same data is meaningful
//! over `𝔽_p`.
//!
//! Each constraint that comes from a derivation step carries its source
//! string, and rows whose printed annotations disagree with the derivation
//! carry an explicit `note` rather than a silent fix.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Fp, PrimeField, Rationals};
use crate::poly::{
    ast_to_rational_function, parse_ast, AlgebraicRelation, Ast, PolyError, Polynomial,
    RationalFunction, VariableId,
};
use crate::rbsystem::{generate_system, OperatorMatrix};
use crate::semigroup::{catalog_entry, CayleyTable};

/// Primes accepted by the finite-field machinery. Characteristics 2, 3
/// and 5 are excluded because the classification arguments divide by them.
pub const ORACLE_PRIMES: [u64; 3] = [7, 11, 13];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown semigroup id: {0}")]
    UnknownSemigroup(String),
    #[error("unsupported prime {0}: supported primes are 7, 11, 13")]
    UnsupportedPrime(u64),
    #[error("family {family}: {message}")]
    Schema { family: String, message: String },
    #[error("bad family JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One solution family: a matrix of rational functions in parameters and
/// aux symbols, valid wherever every nonvanishing polynomial is nonzero
/// and every relation holds.
#[derive(Debug, Clone)]
pub struct ParametricFamily {
    pub id: String,
    pub semigroup: String,
    pub entries: Vec<Vec<RationalFunction<Rationals>>>,
    pub relations: Vec<AlgebraicRelation<Rationals>>,
    pub nonvanishing: Vec<Polynomial<Rationals>>,
    /// Provenance of the row in the source classification tables.
    pub paper_row: String,
    /// Provenance of each curated constraint.
    pub constraint_sources: Vec<String>,
    /// Set when the printed table row and the derivation disagree.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FamilyFileJson {
    families: Vec<FamilyJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FamilyJson {
    id: String,
    semigroup: String,
    entries: Vec<Vec<String>>,
    #[serde(default)]
    relations: Vec<RelationJson>,
    #[serde(default)]
    nonvanishing: Vec<String>,
    paper_row: String,
    #[serde(default)]
    constraint_sources: Vec<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RelationJson {
    aux: String,
    radicand: String,
}

/// `f == c·g` for some nonzero scalar `c`?
fn is_scalar_multiple(f: &Polynomial<Rationals>, g: &Polynomial<Rationals>) -> bool {
    if f.is_zero() || g.is_zero() || f.terms().len() != g.terms().len() {
        return false;
    }
    let ratio = match f.terms()[0].1.div(&g.terms()[0].1) {
        Ok(r) => r,
        Err(_) => return false,
    };
    f.terms()
        .iter()
        .zip(g.terms())
        .all(|((mf, cf), (mg, cg))| mf == mg && cf == &cg.mul(&ratio))
}

/// Collects every factor appearing in a denominator position anywhere in
/// the expression. Factors are the multiplicative atoms of the divisor;
/// integer constants are units and disappear.
fn divisor_factors(ast: &Ast, out: &mut Vec<Ast>) -> Result<(), String> {
    fn push_factors(ast: &Ast, out: &mut Vec<Ast>) -> Result<(), String> {
        match ast {
            Ast::Mul(a, b) => {
                push_factors(a, out)?;
                push_factors(b, out)
            }
            Ast::Pow(a, e) => {
                if *e >= 1 {
                    push_factors(a, out)
                } else {
                    Ok(())
                }
            }
            Ast::Neg(a) => push_factors(a, out),
            Ast::Int(n) => {
                use num_traits::Zero;
                if n.is_zero() {
                    Err("zero denominator".to_string())
                } else {
                    Ok(())
                }
            }
            Ast::Div(..) => Err("nested division inside a denominator".to_string()),
            Ast::Var(_) | Ast::Add(..) | Ast::Sub(..) => {
                out.push(ast.clone());
                Ok(())
            }
        }
    }
    match ast {
        Ast::Int(_) | Ast::Var(_) => Ok(()),
        Ast::Neg(a) | Ast::Pow(a, _) => divisor_factors(a, out),
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) => {
            divisor_factors(a, out)?;
            divisor_factors(b, out)
        }
        Ast::Div(a, b) => {
            divisor_factors(a, out)?;
            push_factors(b, out)
        }
    }
}

impl ParametricFamily {
    fn from_json(js: FamilyJson) -> Result<Self, FamilyError> {
        let schema = |message: String| FamilyError::Schema {
            family: js.id.clone(),
            message,
        };

        let entry = catalog_entry(&js.semigroup)
            .ok_or_else(|| FamilyError::UnknownSemigroup(js.semigroup.clone()))?;
        let n = entry.table.order();
        if js.entries.len() != n || js.entries.iter().any(|r| r.len() != n) {
            return Err(schema(format!("entries must form a {n}×{n} matrix")));
        }

        // Relations first: their aux names drive identifier classification.
        let mut aux_names: BTreeSet<String> = BTreeSet::new();
        let mut relations = Vec::new();
        for rel in &js.relations {
            if !aux_names.insert(rel.aux.clone()) {
                return Err(schema(format!("duplicate relation for aux {}", rel.aux)));
            }
        }
        for rel in &js.relations {
            // Radicands are parsed with no aux names in scope; any aux
            // showing up is a nested radical and AlgebraicRelation::new
            // rejects it.
            let radicand = crate::poly::parse_polynomial(&rel.radicand, &aux_names)?;
            relations.push(
                AlgebraicRelation::new(VariableId::aux(&rel.aux), radicand)
                    .map_err(FamilyError::Poly)?,
            );
        }

        let nonvanishing: Vec<Polynomial<Rationals>> = js
            .nonvanishing
            .iter()
            .map(|s| crate::poly::parse_polynomial(s, &aux_names).map_err(FamilyError::Poly))
            .collect::<Result<_, _>>()?;

        let mut entries = Vec::with_capacity(n);
        let mut used_aux: BTreeSet<String> = BTreeSet::new();
        for row in &js.entries {
            let mut out_row = Vec::with_capacity(n);
            for text in row {
                let ast = parse_ast(text)?;
                let rf = ast_to_rational_function(&ast, &aux_names)?;
                let vars: BTreeSet<VariableId> = rf
                    .numerator()
                    .variables()
                    .into_iter()
                    .chain(rf.denominator().variables())
                    .collect();
                for v in vars {
                    match v {
                        VariableId::Coeff(..) => {
                            return Err(schema(format!(
                                "entry '{text}' uses reserved coefficient name {v}"
                            )))
                        }
                        VariableId::Aux(name) => {
                            used_aux.insert(name);
                        }
                        VariableId::Param(_) => {}
                    }
                }
                // Every denominator factor must be declared nonvanishing
                // (up to a nonzero scalar), otherwise instances could
                // divide by zero.
                let mut factors = Vec::new();
                divisor_factors(&ast, &mut factors).map_err(&schema)?;
                for factor in factors {
                    let factor_rf = ast_to_rational_function(&factor, &aux_names)?;
                    let fpoly = factor_rf.numerator();
                    let declared = nonvanishing.iter().any(|nv| is_scalar_multiple(fpoly, nv));
                    if !declared {
                        return Err(schema(format!(
                            "denominator factor '{fpoly}' of entry '{text}' is not declared nonvanishing"
                        )));
                    }
                }
                out_row.push(rf);
            }
            entries.push(out_row);
        }

        for name in &used_aux {
            if !aux_names.contains(name) {
                return Err(schema(format!("aux {name} has no relation")));
            }
        }

        Ok(ParametricFamily {
            id: js.id,
            semigroup: js.semigroup,
            entries,
            relations,
            nonvanishing,
            paper_row: js.paper_row,
            constraint_sources: js.constraint_sources,
            note: js.note,
        })
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn table(&self) -> CayleyTable {
        catalog_entry(&self.semigroup)
            .expect("validated at load")
            .table
    }

    /// The free parameters, in variable order.
    pub fn parameters(&self) -> Vec<VariableId> {
        let mut params: BTreeSet<VariableId> = BTreeSet::new();
        {
            let mut collect = |p: &Polynomial<Rationals>| {
                for v in p.variables() {
                    if matches!(v, VariableId::Param(_)) {
                        params.insert(v);
                    }
                }
            };
            for row in &self.entries {
                for rf in row {
                    collect(rf.numerator());
                    collect(rf.denominator());
                }
            }
            for nv in &self.nonvanishing {
                collect(nv);
            }
            for rel in &self.relations {
                collect(&rel.radicand);
            }
        }
        params.into_iter().collect()
    }
}

/// Loads families from JSON text (same schema as the shipped data file).
pub fn load_families(text: &str) -> Result<Vec<ParametricFamily>, FamilyError> {
    let file: FamilyFileJson =
        serde_json::from_str(text).map_err(|e| FamilyError::Json(e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(file.families.len());
    for js in file.families {
        if !seen.insert(js.id.clone()) {
            return Err(FamilyError::Schema {
                family: js.id.clone(),
                message: "duplicate family id".to_string(),
            });
        }
        out.push(ParametricFamily::from_json(js)?);
    }
    Ok(out)
}

const FAMILY_DATA: &str = include_str!("../data/families.json");

/// The 79 curated families shipped with the crate.
pub fn family_catalog() -> Vec<ParametricFamily> {
    load_families(FAMILY_DATA).expect("shipped family data is well-formed")
}

/// Families of one semigroup, in file order.
pub fn families_for(semigroup: &str) -> Result<Vec<ParametricFamily>, FamilyError> {
    if catalog_entry(semigroup).is_none() {
        return Err(FamilyError::UnknownSemigroup(semigroup.to_string()));
    }
    Ok(family_catalog()
        .into_iter()
        .filter(|f| f.semigroup == semigroup)
        .collect())
}

/// Residuals of one family against its generated system.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub family_id: String,
    /// `((i, j, m), residual)` for every equation, in system order.
    pub residuals: Vec<((usize, usize, usize), Polynomial<Rationals>)>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn nonzero_residuals(
        &self,
    ) -> impl Iterator<Item = &((usize, usize, usize), Polynomial<Rationals>)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }
}

/// Substitutes the family into its generated weight-zero system, clears
/// denominators, reduces modulo the relations, and reports the residuals.
/// A correct family row leaves every residual identically zero.
pub fn verify_family(family: &ParametricFamily) -> Result<VerificationReport, FamilyError> {
    let table = catalog_entry(&family.semigroup)
        .ok_or_else(|| FamilyError::UnknownSemigroup(family.semigroup.clone()))?
        .table;
    let system = generate_system(&table, Rationals, &crate::field::Rational::zero())
        .expect("catalog tables are associative");

    let n = table.order();
    let mut bindings = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            bindings.insert(
                VariableId::Coeff(i as u8, j as u8),
                family.entries[i - 1][j - 1].clone(),
            );
        }
    }

    let mut residuals = Vec::with_capacity(system.equations.len());
    let mut pass = true;
    for eq in &system.equations {
        let substituted = eq.poly.substitute(&bindings)?;
        let (numerator, _) = substituted.clear_denominators();
        let residual = numerator.reduce_mod_relations(&family.relations);
        if !residual.is_zero() {
            pass = false;
        }
        residuals.push(((eq.i, eq.j, eq.m), residual));
    }
    Ok(VerificationReport {
        family_id: family.id.clone(),
        residuals,
        pass,
    })
}

fn check_prime(p: u64) -> Result<(), FamilyError> {
    if ORACLE_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(FamilyError::UnsupportedPrime(p))
    }
}

/// All matrices the family produces over `𝔽_p`: every parameter assignment
/// that respects the nonvanishing constraints, with every square root of
/// each radicand value (an assignment whose radicand is a nonresidue
/// yields nothing), deduplicated.
pub fn instances_modp(
    family: &ParametricFamily,
    p: u64,
) -> Result<BTreeSet<OperatorMatrix<PrimeField>>, FamilyError> {
    check_prime(p)?;
    let field = PrimeField(p);
    let params = family.parameters();

    // Reduce everything into 𝔽_p once.
    let to_fp = |poly: &Polynomial<Rationals>| -> Result<Polynomial<PrimeField>, FamilyError> {
        poly.to_prime_field(p).map_err(FamilyError::Poly)
    };
    let entries_fp: Vec<Vec<(Polynomial<PrimeField>, Polynomial<PrimeField>)>> = family
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|rf| Ok((to_fp(rf.numerator())?, to_fp(rf.denominator())?)))
                .collect::<Result<_, FamilyError>>()
        })
        .collect::<Result<_, _>>()?;
    let nonvanishing_fp: Vec<Polynomial<PrimeField>> = family
        .nonvanishing
        .iter()
        .map(to_fp)
        .collect::<Result<_, _>>()?;
    let radicands_fp: Vec<(VariableId, Polynomial<PrimeField>)> = family
        .relations
        .iter()
        .map(|rel| Ok((rel.aux.clone(), to_fp(&rel.radicand)?)))
        .collect::<Result<_, FamilyError>>()?;
    let (nv_with_aux, nv_param_only): (Vec<_>, Vec<_>) =
        nonvanishing_fp.into_iter().partition(|nv| {
            nv.variables()
                .iter()
                .any(|v| matches!(v, VariableId::Aux(_)))
        });

    let n = family.order();
    let mut out = BTreeSet::new();
    let k = params.len();
    let mut assignment = vec![0u64; k];
    loop {
        let mut point: BTreeMap<VariableId, Fp> = params
            .iter()
            .cloned()
            .zip(assignment.iter().map(|&v| Fp::new(v, p)))
            .collect();

        let params_ok = nv_param_only
            .iter()
            .all(|nv| !nv.evaluate(&point).expect("parameters bound").is_zero());
        if params_ok {
            // Enumerate every combination of square roots.
            let mut combos: Vec<BTreeMap<VariableId, Fp>> = vec![BTreeMap::new()];
            for (aux, radicand) in &radicands_fp {
                let value = radicand.evaluate(&point).expect("parameters bound");
                let roots = value.sqrt();
                let mut next = Vec::with_capacity(combos.len() * roots.len());
                for combo in &combos {
                    for root in &roots {
                        let mut c = combo.clone();
                        c.insert(aux.clone(), *root);
                        next.push(c);
                    }
                }
                combos = next;
            }
            for combo in combos {
                point.extend(combo);
                let aux_ok = nv_with_aux
                    .iter()
                    .all(|nv| !nv.evaluate(&point).expect("all bound").is_zero());
                if aux_ok {
                    let mut rows = Vec::with_capacity(n);
                    for row in &entries_fp {
                        let mut out_row = Vec::with_capacity(n);
                        for (num, den) in row {
                            let nv = num.evaluate(&point).expect("all bound");
                            let dv = den.evaluate(&point).expect("all bound");
                            out_row.push(nv.div(dv).expect("denominator factors are nonvanishing"));
                        }
                        rows.push(out_row);
                    }
                    out.insert(OperatorMatrix::new(field, rows).expect("square"));
                }
                for (aux, _) in &radicands_fp {
                    point.remove(aux);
                }
            }
        }

        // Odometer over parameter assignments.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < p {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// Union of the instance sets of every family of one semigroup; overlaps
/// between families collapse by set semantics.
pub fn union_instances(
    semigroup: &str,
    p: u64,
) -> Result<BTreeSet<OperatorMatrix<PrimeField>>, FamilyError> {
    check_prime(p)?;
    let families = families_for(semigroup)?;
    let mut out = BTreeSet::new();
    for family in &families {
        out.extend(instances_modp(family, p)?);
    }
    Ok(out)
}
