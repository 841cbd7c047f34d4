//! Cayley tables, associativity and commutativity checks, structure
//! constants, opposite semigroups, isomorphism testing, exhaustive
//! enumeration for orders ≤ 3, and the built-in catalog of the 22
//! semigroups of order two and three.
//!
//! Basis indices are 1-based throughout, matching the `e_1..e_n` basis
//! convention; the JSON wire format is 1-based as well.

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("entry ({row},{col}) = {value} outside 1..={n}")]
    ClosureViolation {
        n: usize,
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("tables have different orders: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("order {0} is not supported (enumeration covers orders 1..=3)")]
    UnsupportedOrder(usize),
}

/// Multiplication table of a binary operation on `{e_1, …, e_n}`.
/// Row `k`, column `ℓ` holds the index `m` with `e_k · e_ℓ = e_m`
/// (row = left factor). Closure is checked at construction; whether the
/// operation is associative is a separate question ([`CayleyTable::is_associative`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CayleyTable {
    n: usize,
    /// Row-major, 1-based values.
    entries: Vec<u8>,
}

impl CayleyTable {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self, SemigroupError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(SemigroupError::ClosureViolation {
                    n,
                    row: r + 1,
                    col: row.len(),
                    value: 0,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v as usize > n {
                    return Err(SemigroupError::ClosureViolation {
                        n,
                        row: r + 1,
                        col: c + 1,
                        value: v as usize,
                    });
                }
                entries.push(v);
            }
        }
        Ok(CayleyTable { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// `e_k · e_ℓ`, all indices 1-based.
    #[inline]
    pub fn product(&self, k: usize, l: usize) -> usize {
        self.entries[(k - 1) * self.n + (l - 1)] as usize
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        for a in 1..=n {
            for b in 1..=n {
                let ab = self.product(a, b);
                for c in 1..=n {
                    if self.product(ab, c) != self.product(a, self.product(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        (1..=n).all(|k| (k..=n).all(|l| self.product(k, l) == self.product(l, k)))
    }

    pub fn structure_constants(&self) -> StructureConstants {
        StructureConstants {
            table: self.clone(),
        }
    }

    /// The opposite table: `entry'[k][ℓ] = entry[ℓ][k]`.
    pub fn opposite(&self) -> CayleyTable {
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for k in 1..=n {
            for l in 1..=n {
                entries[(k - 1) * n + (l - 1)] = self.product(l, k) as u8;
            }
        }
        CayleyTable { n, entries }
    }

    /// Applies a relabeling `π` (1-based image list): the returned table
    /// satisfies `t'[π(k)][π(ℓ)] = π(t[k][ℓ])`.
    pub fn relabel(&self, perm: &[u8]) -> CayleyTable {
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for k in 1..=n {
            for l in 1..=n {
                let pk = perm[k - 1] as usize;
                let pl = perm[l - 1] as usize;
                entries[(pk - 1) * n + (pl - 1)] = perm[self.product(k, l) - 1];
            }
        }
        CayleyTable { n, entries }
    }

    /// A permutation `π` with `π(x·y) = π(x)∘π(y)`, if one exists; searches
    /// all `n!` permutations.
    pub fn find_isomorphism(&self, other: &CayleyTable) -> Result<Option<Vec<u8>>, SemigroupError> {
        if self.n != other.n {
            return Err(SemigroupError::OrderMismatch(self.n, other.n));
        }
        for perm in (1..=self.n as u8).permutations(self.n) {
            if &self.relabel(&perm) == other {
                return Ok(Some(perm));
            }
        }
        Ok(None)
    }

    /// A multiplication-reversing bijection onto `other`, i.e. an
    /// isomorphism onto the opposite of `other`.
    pub fn find_anti_isomorphism(
        &self,
        other: &CayleyTable,
    ) -> Result<Option<Vec<u8>>, SemigroupError> {
        self.find_isomorphism(&other.opposite())
    }
}

// Wire form: {"n": 3, "table": [[1,1,1],[1,2,1],[1,3,1]]}, 1-based.
#[derive(Serialize, Deserialize)]
struct CayleyTableJson {
    n: usize,
    table: Vec<Vec<u8>>,
}

impl Serialize for CayleyTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CayleyTableJson {
            n: self.n,
            table: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CayleyTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let js = CayleyTableJson::deserialize(d)?;
        if js.table.len() != js.n {
            return Err(serde::de::Error::custom(format!(
                "declared order {} but {} rows",
                js.n,
                js.table.len()
            )));
        }
        CayleyTable::new(js.table).map_err(serde::de::Error::custom)
    }
}

/// The indicators `r^m_{kℓ} ∈ {0,1}` with `e_k e_ℓ = Σ_m r^m_{kℓ} e_m`.
/// For a semigroup algebra exactly one `m` fires per `(k, ℓ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    table: CayleyTable,
}

impl StructureConstants {
    /// `r^m_{kℓ}`, all indices 1-based.
    #[inline]
    pub fn r(&self, k: usize, l: usize, m: usize) -> u8 {
        u8::from(self.table.product(k, l) == m)
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }
}

/// All associative closed tables on `n ≤ 3` elements, in lexicographic
/// order of the flattened entries. Brute force over all `n^(n²)` tables.
pub fn enumerate_semigroups(n: usize) -> Result<Vec<CayleyTable>, SemigroupError> {
    if !(1..=3).contains(&n) {
        return Err(SemigroupError::UnsupportedOrder(n));
    }
    let cells = n * n;
    let total = (n as u64).pow(cells as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut entries = vec![0u8; cells];
        // Digits assigned so that ascending code is ascending lex order.
        for slot in (0..cells).rev() {
            entries[slot] = (c % n as u64) as u8 + 1;
            c /= n as u64;
        }
        let t = CayleyTable { n, entries };
        if t.is_associative() {
            out.push(t);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifyMode {
    Iso,
    IsoAndAnti,
}

/// Partitions tables into equivalence classes under isomorphism (and
/// anti-isomorphism, in [`ClassifyMode::IsoAndAnti`]); returns the
/// lexicographically minimal member of each class, sorted.
pub fn classify(tables: &[CayleyTable], mode: ClassifyMode) -> Vec<CayleyTable> {
    let mut classes: Vec<Vec<&CayleyTable>> = Vec::new();
    'next: for t in tables {
        for class in classes.iter_mut() {
            let rep = class[0];
            let related = rep.find_isomorphism(t).expect("uniform order").is_some()
                || (mode == ClassifyMode::IsoAndAnti
                    && rep
                        .find_anti_isomorphism(t)
                        .expect("uniform order")
                        .is_some());
            if related {
                class.push(t);
                continue 'next;
            }
        }
        classes.push(vec![t]);
    }
    let mut reps: Vec<CayleyTable> = classes
        .into_iter()
        .map(|class| class.into_iter().min().expect("nonempty class").clone())
        .collect();
    reps.sort();
    reps
}

/// One of the 22 cataloged semigroups of order two or three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub table: CayleyTable,
    pub commutative: bool,
}

const CATALOG_TABLES: [(&str, [&[u8]; 3]); 22] = [
    // Order 2: null, semilattice, cyclic group, left zero. The unused third
    // row marks order-2 entries.
    ("N2", [&[1, 1], &[1, 1], &[]]),
    ("Y2", [&[1, 1], &[1, 2], &[]]),
    ("Z2", [&[1, 2], &[2, 1], &[]]),
    ("L2", [&[1, 1], &[2, 2], &[]]),
    // Commutative order 3.
    ("CS(1)", [&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]),
    ("CS(2)", [&[1, 1, 1], &[1, 1, 1], &[1, 1, 2]]),
    ("CS(3)", [&[1, 1, 1], &[1, 2, 1], &[1, 1, 1]]),
    ("CS(4)", [&[1, 1, 1], &[1, 2, 1], &[1, 1, 3]]),
    ("CS(5)", [&[1, 1, 1], &[1, 2, 2], &[1, 2, 2]]),
    ("CS(6)", [&[1, 1, 1], &[1, 2, 2], &[1, 2, 3]]),
    ("CS(7)", [&[1, 1, 1], &[1, 2, 3], &[1, 3, 1]]),
    ("CS(8)", [&[1, 1, 1], &[1, 2, 3], &[1, 3, 2]]),
    ("CS(9)", [&[1, 1, 3], &[1, 1, 3], &[3, 3, 1]]),
    ("CS(10)", [&[1, 1, 3], &[1, 2, 3], &[3, 3, 1]]),
    ("CS(11)", [&[1, 2, 2], &[2, 1, 1], &[2, 1, 1]]),
    ("CS(12)", [&[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]),
    // Noncommutative order 3.
    ("NCS(1)", [&[1, 1, 1], &[1, 2, 1], &[1, 3, 1]]),
    ("NCS(2)", [&[1, 1, 1], &[1, 2, 1], &[3, 3, 3]]),
    ("NCS(3)", [&[1, 1, 1], &[1, 2, 2], &[1, 3, 3]]),
    ("NCS(4)", [&[1, 1, 1], &[2, 2, 2], &[1, 1, 1]]),
    ("NCS(5)", [&[1, 1, 1], &[2, 2, 2], &[3, 3, 3]]),
    ("NCS(6)", [&[1, 1, 1], &[1, 2, 3], &[3, 3, 3]]),
];

/// The 22 cataloged semigroups: 4 of order 2, 12 commutative of order 3,
/// 6 noncommutative of order 3.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG_TABLES
        .iter()
        .map(|(id, rows)| {
            let rows: Vec<Vec<u8>> = rows
                .iter()
                .filter(|r| !r.is_empty())
                .map(|r| r.to_vec())
                .collect();
            let table = CayleyTable::new(rows).expect("catalog tables are closed");
            let commutative = table.is_commutative();
            CatalogEntry {
                id,
                table,
                commutative,
            }
        })
        .collect()
}

pub fn catalog_entry(id: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.id == id)
}
