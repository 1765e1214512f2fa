//! Full payoff matrices over the symmetrized strategy spaces, with a
//! self-describing on-disk cache format.
//!
//! Entries are exact rationals; converting to floating point happens only at
//! the solver boundary. Equal budgets get the antisymmetry shortcut: only
//! the lower triangle is evaluated, the rest is negation and a zero diagonal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::str::FromStr;

use crate::clash;
use crate::model::{enumerate_symmetric_strategies, GameSpec, SymmetricStrategy};

/// Cache file schema version.
pub const FORMAT_VERSION: u32 = 1;

/// Per-side strategy-count cap for matrix construction.
pub const DEFAULT_SIZE_CAP: usize = 50_000;

/// Exact payoff matrix of a game: rows are the first player's symmetric
/// strategies, columns the second player's, both in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    spec: GameSpec,
    rows: Vec<SymmetricStrategy>,
    cols: Vec<SymmetricStrategy>,
    entries: Vec<BigRational>,
}

/// Builds the full payoff matrix for `spec` under the default size cap.
pub fn build_matrix(spec: &GameSpec) -> Result<PayoffMatrix, MatrixError> {
    build_matrix_capped(spec, DEFAULT_SIZE_CAP)
}

/// Builds the full payoff matrix, refusing if either side enumerates more
/// than `cap` strategies. Entry computation is parallel; results do not
/// depend on the parallelism degree.
pub fn build_matrix_capped(spec: &GameSpec, cap: usize) -> Result<PayoffMatrix, MatrixError> {
    let rows = enumerate_symmetric_strategies(spec.d_a(), spec.n());
    let cols = enumerate_symmetric_strategies(spec.d_b(), spec.n());
    if rows.len() > cap || cols.len() > cap {
        return Err(MatrixError::TooLarge {
            rows: rows.len(),
            cols: cols.len(),
            cap,
        });
    }
    let agg = spec.aggregation();
    let nc = cols.len();
    let entries = if spec.d_a() == spec.d_b() {
        // Equal budgets share one strategy list, so the matrix is
        // antisymmetric: evaluate below the diagonal only.
        debug_assert_eq!(rows, cols);
        let pairs: Vec<(usize, usize)> = (0..rows.len())
            .flat_map(|r| (0..r).map(move |c| (r, c)))
            .collect();
        let lower: Vec<BigRational> = pairs
            .par_iter()
            .map(|&(r, c)| clash::payoff(&rows[r], &cols[c], agg).expect("equal lengths"))
            .collect();
        let mut entries = vec![BigRational::zero(); rows.len() * nc];
        for (&(r, c), v) in pairs.iter().zip(lower) {
            entries[c * nc + r] = -v.clone();
            entries[r * nc + c] = v;
        }
        entries
    } else {
        (0..rows.len() * nc)
            .into_par_iter()
            .map(|idx| {
                clash::payoff(&rows[idx / nc], &cols[idx % nc], agg).expect("equal lengths")
            })
            .collect()
    };
    Ok(PayoffMatrix {
        spec: *spec,
        rows,
        cols,
        entries,
    })
}

impl PayoffMatrix {
    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn row_strategies(&self) -> &[SymmetricStrategy] {
        &self.rows
    }

    pub fn col_strategies(&self) -> &[SymmetricStrategy] {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Payoff to the first player, row strategy `r` against column `c`.
    pub fn entry(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn entry_f64(&self, r: usize, c: usize) -> f64 {
        self.entry(r, c).to_f64().expect("payoff fits in f64")
    }

    /// The whole matrix as floating-point rows, for solver input.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows.len())
            .map(|r| (0..self.cols.len()).map(|c| self.entry_f64(r, c)).collect())
            .collect()
    }

    /// Writes the matrix as a self-describing JSON document; entries are
    /// reduced `numerator/denominator` strings, so the round trip is exact.
    pub fn save(&self, path: &Path) -> Result<(), MatrixError> {
        let dto = MatrixDto {
            format_version: FORMAT_VERSION,
            spec: SpecDto {
                d_a: self.spec.d_a(),
                d_b: self.spec.d_b(),
                n: self.spec.n(),
                aggregation: self.spec.aggregation().to_string(),
            },
            row_strategies: self.rows.iter().map(|s| s.parts().to_vec()).collect(),
            col_strategies: self.cols.iter().map(|s| s.parts().to_vec()).collect(),
            entries: self
                .entries
                .iter()
                .map(|e| format!("{}/{}", e.numer(), e.denom()))
                .collect(),
        };
        let file = File::create(path)?;
        serde_json::to_writer(BufWriter::new(file), &dto)?;
        Ok(())
    }

    /// Reads a matrix written by [`PayoffMatrix::save`], validating the
    /// format version and internal consistency.
    pub fn load(path: &Path) -> Result<PayoffMatrix, MatrixError> {
        let file = File::open(path)?;
        let value: serde_json::Value = serde_json::from_reader(BufReader::new(file))?;
        let version = value
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| MatrixError::Corrupt("missing format_version".into()))?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(MatrixError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let dto: MatrixDto = serde_json::from_value(value)?;
        let agg = dto
            .spec
            .aggregation
            .parse()
            .map_err(|_| MatrixError::Corrupt(format!("bad aggregation {:?}", dto.spec.aggregation)))?;
        let spec = GameSpec::new(dto.spec.d_a, dto.spec.d_b, dto.spec.n, agg)
            .map_err(|e| MatrixError::Corrupt(e.to_string()))?;
        let rows = parse_strategies(dto.row_strategies, spec.n(), spec.d_a())?;
        let cols = parse_strategies(dto.col_strategies, spec.n(), spec.d_b())?;
        if dto.entries.len() != rows.len() * cols.len() {
            return Err(MatrixError::Corrupt(format!(
                "{} entries for a {}x{} matrix",
                dto.entries.len(),
                rows.len(),
                cols.len()
            )));
        }
        let entries = dto
            .entries
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PayoffMatrix {
            spec,
            rows,
            cols,
            entries,
        })
    }

    /// [`PayoffMatrix::load`] plus a check that the file describes `spec`.
    pub fn load_for_spec(path: &Path, spec: &GameSpec) -> Result<PayoffMatrix, MatrixError> {
        let m = PayoffMatrix::load(path)?;
        if m.spec != *spec {
            return Err(MatrixError::SpecMismatch {
                found: m.spec,
                requested: *spec,
            });
        }
        Ok(m)
    }
}

fn parse_strategies(
    raw: Vec<Vec<u32>>,
    n: usize,
    budget: u32,
) -> Result<Vec<SymmetricStrategy>, MatrixError> {
    raw.into_iter()
        .map(|parts| {
            let s = SymmetricStrategy::new(parts).map_err(|e| MatrixError::Corrupt(e.to_string()))?;
            if s.n() != n {
                return Err(MatrixError::Corrupt(format!(
                    "strategy {s} has {} battlefields, spec says {n}",
                    s.n()
                )));
            }
            if s.budget() != budget {
                return Err(MatrixError::Corrupt(format!(
                    "strategy {s} spends {}, spec says {budget}",
                    s.budget()
                )));
            }
            Ok(s)
        })
        .collect()
}

fn parse_rational(s: &str) -> Result<BigRational, MatrixError> {
    let corrupt = || MatrixError::Corrupt(format!("bad rational {s:?}"));
    let (numer, denom) = s.split_once('/').ok_or_else(corrupt)?;
    let numer = BigInt::from_str(numer).map_err(|_| corrupt())?;
    let denom = BigInt::from_str(denom).map_err(|_| corrupt())?;
    if denom.is_zero() {
        return Err(corrupt());
    }
    Ok(BigRational::new(numer, denom))
}

#[derive(Serialize, Deserialize)]
struct SpecDto {
    d_a: u32,
    d_b: u32,
    n: usize,
    aggregation: String,
}

#[derive(Serialize, Deserialize)]
struct MatrixDto {
    format_version: u32,
    spec: SpecDto,
    row_strategies: Vec<Vec<u32>>,
    col_strategies: Vec<Vec<u32>>,
    entries: Vec<String>,
}

/// Errors from matrix construction and the cache file format.
#[derive(Debug)]
pub enum MatrixError {
    TooLarge { rows: usize, cols: usize, cap: usize },
    VersionMismatch { found: u64, expected: u32 },
    SpecMismatch { found: GameSpec, requested: GameSpec },
    Corrupt(String),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::TooLarge { rows, cols, cap } => {
                write!(f, "{rows}x{cols} matrix exceeds the {cap}-strategy cap")
            }
            MatrixError::VersionMismatch { found, expected } => {
                write!(f, "cache format version {found}, this build reads {expected}")
            }
            MatrixError::SpecMismatch { found, requested } => {
                write!(f, "cache holds [{found}], requested [{requested}]")
            }
            MatrixError::Corrupt(msg) => write!(f, "corrupt matrix file: {msg}"),
            MatrixError::Io(e) => write!(f, "matrix file i/o: {e}"),
            MatrixError::Json(e) => write!(f, "matrix file syntax: {e}"),
        }
    }
}

impl std::error::Error for MatrixError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            MatrixError::Io(e) => Some(e),
            MatrixError::Json(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for MatrixError {
    fn from(e: std::io::Error) -> Self {
        MatrixError::Io(e)
    }
}

impl From<serde_json::Error> for MatrixError {
    fn from(e: serde_json::Error) -> Self {
        MatrixError::Json(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AggregationKind;

    fn spec(d_a: u32, d_b: u32, n: usize, agg: AggregationKind) -> GameSpec {
        GameSpec::new(d_a, d_b, n, agg).unwrap()
    }

    #[test]
    fn equal_budget_matrix_is_antisymmetric_and_matches_direct_payoffs() {
        let m = build_matrix(&spec(5, 5, 3, AggregationKind::Mto)).unwrap();
        assert_eq!(m.n_rows(), 5);
        for r in 0..m.n_rows() {
            for c in 0..m.n_cols() {
                assert_eq!(m.entry(r, c), &-m.entry(c, r).clone(), "({r},{c})");
                let direct = clash::payoff(
                    &m.row_strategies()[r],
                    &m.col_strategies()[c],
                    AggregationKind::Mto,
                )
                .unwrap();
                assert_eq!(m.entry(r, c), &direct, "({r},{c})");
            }
        }
    }

    #[test]
    fn unequal_budget_matrix_matches_direct_payoffs() {
        let m = build_matrix(&spec(4, 6, 3, AggregationKind::Majoritarian)).unwrap();
        for r in 0..m.n_rows() {
            for c in 0..m.n_cols() {
                let direct = clash::payoff(
                    &m.row_strategies()[r],
                    &m.col_strategies()[c],
                    AggregationKind::Majoritarian,
                )
                .unwrap();
                assert_eq!(m.entry(r, c), &direct);
            }
        }
    }

    #[test]
    fn entries_are_independent_of_thread_count() {
        let s = spec(6, 5, 4, AggregationKind::Blotto);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| build_matrix(&s).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| build_matrix(&s).unwrap());
        assert_eq!(single, multi);
    }

    #[test]
    fn size_cap_is_enforced() {
        let err = build_matrix_capped(&spec(30, 30, 8, AggregationKind::Mto), 100).unwrap_err();
        assert!(matches!(err, MatrixError::TooLarge { .. }));
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = build_matrix(&spec(5, 4, 3, AggregationKind::Mto)).unwrap();
        m.save(&path).unwrap();
        let loaded = PayoffMatrix::load(&path).unwrap();
        assert_eq!(m, loaded);
    }

    #[test]
    fn load_rejects_other_versions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let m = build_matrix(&spec(2, 2, 2, AggregationKind::Mto)).unwrap();
        m.save(&path).unwrap();
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"format_version\":1", "\"format_version\":2");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            PayoffMatrix::load(&path).unwrap_err(),
            MatrixError::VersionMismatch { found: 2, .. }
        ));
    }

    #[test]
    fn load_rejects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let garbage = dir.path().join("garbage.json");
        std::fs::write(&garbage, "not json").unwrap();
        assert!(matches!(
            PayoffMatrix::load(&garbage).unwrap_err(),
            MatrixError::Json(_)
        ));

        let path = dir.path().join("m.json");
        let m = build_matrix(&spec(2, 2, 2, AggregationKind::Mto)).unwrap();
        m.save(&path).unwrap();
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"0/1\"", "\"zero\"");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            PayoffMatrix::load(&path).unwrap_err(),
            MatrixError::Corrupt(_)
        ));
    }

    #[test]
    fn load_for_spec_checks_the_spec() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let s = spec(3, 3, 3, AggregationKind::Mto);
        build_matrix(&s).unwrap().save(&path).unwrap();
        assert!(PayoffMatrix::load_for_spec(&path, &s).is_ok());
        let other = spec(3, 3, 3, AggregationKind::Blotto);
        assert!(matches!(
            PayoffMatrix::load_for_spec(&path, &other).unwrap_err(),
            MatrixError::SpecMismatch { .. }
        ));
    }

    #[test]
    fn rationals_parse_in_both_signs() {
        assert_eq!(
            parse_rational("-1/3").unwrap(),
            BigRational::new(BigInt::from(-1), BigInt::from(3))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("7").is_err());
    }
}
