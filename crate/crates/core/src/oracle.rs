//! Exhaustive finite-field solver and the classification completeness and
//! soundness checker.
//!
//! [`brute_force_modp`] scans every matrix in `𝔽_p^{n×n}` in row-major
//! lexicographic order and keeps those on which all generated equations
//! vanish, short-circuiting on the first nonzero value. There is no
//! algebraic shortcut; the scan's value is its independence and obvious
//! correctness. The search space factors over the first two entries, which
//! is where the parallel build fans out; partition results concatenate in
//! prefix order, so the output is identical with and without the
//! `parallel` feature.
//!
//! [`completeness_check`] compares the scan against the union of the
//! curated family instances. A discrepancy is reported with full witness
//! matrices, never silently tolerated and never a panic: the classification
//! is stated over characteristic-zero fields, so a finite-field divergence
//! is a finding to surface.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::families::{union_instances, FamilyError, ORACLE_PRIMES};
use crate::field::{Fp, PrimeField, Rational, Rationals};
use crate::poly::VariableId;
use crate::rbsystem::{generate_system, is_rbo, OperatorMatrix, RbError, RboSystem};
use crate::semigroup::{catalog_entry, CayleyTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("unsupported prime {0}: supported primes are 7, 11, 13")]
    UnsupportedPrime(u64),
    #[error("unsupported order {0}: the exhaustive search covers orders 1..=3")]
    UnsupportedOrder(usize),
    #[error("unknown semigroup id: {0}")]
    UnknownSemigroup(String),
    #[error(transparent)]
    Rb(#[from] RbError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

const NO_VAR: u8 = u8::MAX;

/// One monomial of one equation, reduced mod p: `coeff · c[v1] · c[v2]`,
/// with `v2 == NO_VAR` for linear terms.
#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: u64,
    v1: u8,
    v2: u8,
}

/// A system lowered to flat index arithmetic for the scan's inner loop.
#[derive(Debug, Clone)]
pub struct CompiledSystem {
    p: u64,
    n: usize,
    equations: Vec<Vec<Term>>,
}

impl CompiledSystem {
    /// Lowers a rational system into `𝔽_p`. Coefficient variables map to
    /// flat indices `(i-1)·n + (j-1)`.
    pub fn compile(system: &RboSystem<Rationals>, p: u64) -> Result<Self, OracleError> {
        let n = system.order();
        let mut equations = Vec::with_capacity(system.equations.len());
        for eq in &system.equations {
            let mut terms = Vec::with_capacity(eq.poly.terms().len());
            for (mono, coeff) in eq.poly.terms() {
                // Fails only for coefficients whose denominator vanishes
                // mod p, e.g. a weight of 1/7 at p = 7.
                let c = coeff
                    .to_fp(p)
                    .map_err(|e| {
                        OracleError::Rb(RbError::Poly(crate::poly::PolyError::BadCoefficient(
                            e.to_string(),
                        )))
                    })?
                    .value;
                if c == 0 {
                    continue;
                }
                let mut vars = [NO_VAR; 2];
                let mut pos = 0;
                for (v, e) in mono.powers() {
                    let VariableId::Coeff(i, j) = v else {
                        unreachable!("generated systems contain coefficients only")
                    };
                    let flat = (*i as usize - 1) * n + (*j as usize - 1);
                    for _ in 0..*e {
                        vars[pos] = flat as u8;
                        pos += 1;
                    }
                }
                terms.push(Term {
                    coeff: c,
                    v1: vars[0],
                    v2: vars[1],
                });
            }
            equations.push(terms);
        }
        Ok(CompiledSystem { p, n, equations })
    }

    /// True iff every equation vanishes at the flat candidate;
    /// short-circuits on the first nonzero value.
    #[inline]
    fn is_solution(&self, c: &[u64]) -> bool {
        for eq in &self.equations {
            let mut acc = 0u64;
            for t in eq {
                let prod = if t.v2 == NO_VAR {
                    c[t.v1 as usize]
                } else {
                    c[t.v1 as usize] * c[t.v2 as usize]
                };
                acc += t.coeff * prod;
            }
            if !acc.is_multiple_of(self.p) {
                return false;
            }
        }
        true
    }

    fn to_matrix(&self, c: &[u64]) -> OperatorMatrix<PrimeField> {
        let field = PrimeField(self.p);
        let rows = c
            .chunks(self.n)
            .map(|row| row.iter().map(|&v| Fp::new(v, self.p)).collect())
            .collect();
        OperatorMatrix::new(field, rows).expect("square candidate")
    }
}

impl CompiledSystem {
    /// Scans all candidates with the given first-two-entries prefix,
    /// in lexicographic order.
    fn scan_prefix(&self, prefix: u64) -> Vec<OperatorMatrix<PrimeField>> {
        let cells = self.n * self.n;
        let free = cells - PREFIX_CELLS.min(cells);
        let mut c = vec![0u64; cells];
        if cells >= 2 {
            c[0] = prefix / self.p;
            c[1] = prefix % self.p;
        } else {
            c[0] = prefix;
        }
        let mut out = Vec::new();
        loop {
            if self.is_solution(&c) {
                out.push(self.to_matrix(&c));
            }
            // Odometer over the free cells.
            let mut pos = cells;
            loop {
                if pos == cells - free {
                    return out;
                }
                pos -= 1;
                c[pos] += 1;
                if c[pos] < self.p {
                    break;
                }
                c[pos] = 0;
            }
        }
    }

    fn prefix_count(&self) -> u64 {
        let cells = self.n * self.n;
        if cells >= 2 {
            self.p * self.p
        } else {
            self.p
        }
    }
}

const PREFIX_CELLS: usize = 2;

fn check_inputs(table: &CayleyTable, p: u64) -> Result<(), OracleError> {
    if !ORACLE_PRIMES.contains(&p) {
        return Err(OracleError::UnsupportedPrime(p));
    }
    if !(1..=3).contains(&table.order()) {
        return Err(OracleError::UnsupportedOrder(table.order()));
    }
    Ok(())
}

/// Sequential scan. Always available; the `parallel` feature only changes
/// which path [`solve_modp`] picks.
pub fn solve_modp_sequential(
    table: &CayleyTable,
    p: u64,
    weight: &Rational,
) -> Result<Vec<OperatorMatrix<PrimeField>>, OracleError> {
    check_inputs(table, p)?;
    let system = generate_system(table, Rationals, weight)?;
    let compiled = CompiledSystem::compile(&system, p)?;
    let mut out = Vec::new();
    for prefix in 0..compiled.prefix_count() {
        out.extend(compiled.scan_prefix(prefix));
    }
    Ok(out)
}

/// Parallel scan: the `p²` prefixes of the first two matrix entries are
/// distributed over the rayon pool and the per-prefix results concatenate
/// in prefix order, giving byte-identical output to the sequential path.
#[cfg(feature = "parallel")]
pub fn solve_modp_parallel(
    table: &CayleyTable,
    p: u64,
    weight: &Rational,
) -> Result<Vec<OperatorMatrix<PrimeField>>, OracleError> {
    use rayon::prelude::*;

    check_inputs(table, p)?;
    let system = generate_system(table, Rationals, weight)?;
    let compiled = CompiledSystem::compile(&system, p)?;
    let chunks: Vec<Vec<OperatorMatrix<PrimeField>>> = (0..compiled.prefix_count())
        .into_par_iter()
        .map(|prefix| compiled.scan_prefix(prefix))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Caps the scan's worker pool; call once, before the first scan. Without
/// the `parallel` feature the scan is sequential and this is a no-op.
#[cfg(feature = "parallel")]
pub fn set_worker_threads(k: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn set_worker_threads(_k: usize) -> Result<(), String> {
    Ok(())
}

/// All weight-`λ` solutions over `𝔽_p`, in row-major lexicographic order.
pub fn solve_modp(
    table: &CayleyTable,
    p: u64,
    weight: &Rational,
) -> Result<Vec<OperatorMatrix<PrimeField>>, OracleError> {
    #[cfg(feature = "parallel")]
    {
        solve_modp_parallel(table, p, weight)
    }
    #[cfg(not(feature = "parallel"))]
    {
        solve_modp_sequential(table, p, weight)
    }
}

/// All weight-zero Rota-Baxter matrices over `𝔽_p`, exhaustively.
pub fn brute_force_modp(
    table: &CayleyTable,
    p: u64,
) -> Result<Vec<OperatorMatrix<PrimeField>>, OracleError> {
    solve_modp(table, p, &Rational::zero())
}

/// Outcome of comparing the exhaustive scan against the family union for
/// one semigroup.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub semigroup: String,
    pub p: u64,
    pub bruteforce_count: usize,
    pub family_union_count: usize,
    /// Brute-force solutions not covered by any family.
    pub missing: Vec<OperatorMatrix<PrimeField>>,
    /// Family instances that fail the identity.
    pub spurious: Vec<OperatorMatrix<PrimeField>>,
    pub pass: bool,
}

/// Compares the exhaustive solution set with the union of family
/// instances. `missing`/`spurious` witnesses are returned, not asserted:
/// a nonempty list is a reportable finding for the caller.
pub fn completeness_check(semigroup: &str, p: u64) -> Result<ClassificationReport, OracleError> {
    let entry =
        catalog_entry(semigroup).ok_or_else(|| OracleError::UnknownSemigroup(semigroup.into()))?;
    let brute = brute_force_modp(&entry.table, p)?;
    let union = union_instances(semigroup, p)?;

    let brute_set: std::collections::BTreeSet<_> = brute.iter().cloned().collect();
    let missing: Vec<_> = brute
        .iter()
        .filter(|m| !union.contains(m))
        .cloned()
        .collect();
    let spurious: Vec<_> = union
        .iter()
        .filter(|m| !brute_set.contains(m))
        .cloned()
        .collect();
    let pass = missing.is_empty() && spurious.is_empty();
    Ok(ClassificationReport {
        semigroup: semigroup.to_string(),
        p,
        bruteforce_count: brute.len(),
        family_union_count: union.len(),
        missing,
        spurious,
        pass,
    })
}

/// Structural properties of the solution set, checked on random samples
/// drawn from the exhaustive scan with a fixed-seed generator.
#[derive(Debug, Clone, Serialize)]
pub struct PropertySuiteReport {
    pub samples: usize,
    /// `s·C` stays a solution for random nonzero `s` (weight zero is
    /// homogeneous).
    pub scaling_ok: bool,
    /// Every solution on the table solves the opposite table.
    pub opposite_ok: bool,
    /// Conjugated solutions solve the relabeled table.
    pub transport_ok: bool,
}

impl PropertySuiteReport {
    pub fn pass(&self) -> bool {
        self.scaling_ok && self.opposite_ok && self.transport_ok
    }
}

/// Draws `samples` solutions from the scan and checks scaling closure,
/// opposite invariance and isomorphism transport via the direct identity
/// check (not the generated system).
pub fn property_suite(
    table: &CayleyTable,
    p: u64,
    samples: usize,
) -> Result<PropertySuiteReport, OracleError> {
    let solutions = brute_force_modp(table, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);

    let picks: Vec<&OperatorMatrix<PrimeField>> = if solutions.len() <= samples {
        solutions.iter().collect()
    } else {
        solutions.choose_multiple(&mut rng, samples).collect()
    };

    let opposite = table.opposite();
    let n = table.order();
    let mut perm: Vec<u8> = (1..=n as u8).collect();
    perm.shuffle(&mut rng);
    let relabeled = table.relabel(&perm);
    let fp_zero = Fp::new(0, p);

    let mut scaling_ok = true;
    let mut opposite_ok = true;
    let mut transport_ok = true;
    for c in &picks {
        let s = Fp::new(rng.gen_range(1..p), p);
        scaling_ok &= is_rbo(table, &c.scale(&s), &fp_zero)?;
        opposite_ok &= is_rbo(&opposite, c, &fp_zero)?;
        transport_ok &= is_rbo(&relabeled, &c.conjugate_by(&perm), &fp_zero)?;
    }
    Ok(PropertySuiteReport {
        samples: picks.len(),
        scaling_ok,
        opposite_ok,
        transport_ok,
    })
}
