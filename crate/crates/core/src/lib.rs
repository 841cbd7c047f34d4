//! Rota-Baxter operators on semigroup algebras of small order.
//!
//! A weight-`λ` Rota-Baxter operator on an algebra is a linear map `P`
//! satisfying `P(x)P(y) = P(xP(y)) + P(P(x)y) + λP(xy)`. For a semigroup
//! algebra `k[S]` with basis the semigroup elements, the condition on the
//! matrix of `P` is a system of `n³` quadratic equations determined by the
//! Cayley table of `S`. This crate
//!
//! * generates that polynomial system for any finite semigroup
//!   ([`rbsystem::generate_system`]),
//! * ships the complete catalog of semigroups of order 2 and 3 together with
//!   the known parametric solution families for weight zero
//!   ([`semigroup::catalog`], [`families::family_catalog`]),
//! * verifies each family symbolically (residual zero after substitution,
//!   denominator clearing and radical reduction), and
//! * confirms the classification independently by exhaustive search over
//!   small prime fields ([`oracle`]).
//!
//! ```
//! use rbsa_core::{families, oracle, semigroup};
//!
//! // The left-zero semigroup of order 2: x·y = x.
//! let entry = semigroup::catalog_entry("L2").unwrap();
//! assert!(entry.table.is_associative());
//!
//! // Its two solution families verify symbolically and together cover
//! // every solution over F_7.
//! for family in families::families_for("L2").unwrap() {
//!     assert!(families::verify_family(&family).unwrap().pass);
//! }
//! let report = oracle::completeness_check("L2", 7).unwrap();
//! assert!(report.pass);
//! assert_eq!(report.bruteforce_count, 49);
//! ```

pub mod families;
pub mod field;
pub mod oracle;
pub mod poly;
pub mod rbsystem;
pub mod semigroup;

pub use families::{family_catalog, instances_modp, union_instances, ParametricFamily};
pub use field::{Fp, PrimeField, Rational, Rationals};
pub use oracle::{brute_force_modp, completeness_check, ClassificationReport};
pub use poly::{Polynomial, RationalFunction, VariableId};
pub use rbsystem::{generate_system, is_rbo, rb_defect, OperatorMatrix, RboSystem};
pub use semigroup::{catalog, CayleyTable};
