//! Interval-valued datasets: construction, CSV ingestion and splitting.
//!
//! The CSV schema is a header row where every interval variable appears as a
//! `<name>_lo`,`<name>_hi` column pair. One pair, named by the caller, is the
//! target; the remaining pairs are predictors in file order. Values are
//! decimal reals; blanks and unpaired columns are errors.

use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// N samples of p interval-valued predictors plus one interval-valued target.
///
/// Immutable after construction; rows can be viewed either as raw bounds or
/// through the center/half-range transform.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalDataset {
    x: Vec<Vec<Interval>>,
    y: Vec<Interval>,
    predictor_names: Vec<String>,
    target_name: String,
}

impl IntervalDataset {
    pub fn new(
        x: Vec<Vec<Interval>>,
        y: Vec<Interval>,
        predictor_names: Vec<String>,
        target_name: String,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::Empty);
        }
        let p = predictor_names.len();
        if p == 0 {
            return Err(Error::Parse("dataset has no predictor columns".into()));
        }
        if let Some(bad) = x.iter().find(|row| row.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: bad.len(),
            });
        }
        Ok(Self {
            x,
            y,
            predictor_names,
            target_name,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.y.len()
    }

    pub fn n_predictors(&self) -> usize {
        self.predictor_names.len()
    }

    pub fn predictor_names(&self) -> &[String] {
        &self.predictor_names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.x[i]
    }

    pub fn target(&self, i: usize) -> Interval {
        self.y[i]
    }

    pub fn targets(&self) -> &[Interval] {
        &self.y
    }

    /// Predictor bounds of row `i` interleaved as
    /// `[x1_lo, x1_hi, x2_lo, x2_hi, ...]` (length `2p`).
    pub fn bounds_row(&self, i: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.n_predictors());
        for iv in &self.x[i] {
            out.push(iv.lower());
            out.push(iv.upper());
        }
        out
    }

    /// Predictor centers of row `i` (length `p`).
    pub fn center_row(&self, i: usize) -> Vec<f64> {
        self.x[i].iter().map(|iv| iv.center()).collect()
    }

    /// Predictor half-ranges of row `i` (length `p`).
    pub fn range_row(&self, i: usize) -> Vec<f64> {
        self.x[i].iter().map(|iv| iv.half_range()).collect()
    }

    /// New dataset containing the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let x = indices.iter().map(|&i| self.x[i].clone()).collect();
        let y = indices.iter().map(|&i| self.y[i]).collect();
        Self::new(
            x,
            y,
            self.predictor_names.clone(),
            self.target_name.clone(),
        )
    }

    /// The train/test row index sets chosen by `spec`, both sorted ascending.
    pub fn split_indices(&self, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
        spec.validate()?;
        let n = self.n_samples();
        let n_train = (spec.train_fraction * n as f64).round() as usize;
        if n_train == 0 || n_train >= n {
            return Err(Error::DegenerateSplit {
                fraction: spec.train_fraction,
                n,
            });
        }
        let mut indices: Vec<usize> = (0..n).collect();
        if spec.mode == SplitMode::Random {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            indices.shuffle(&mut rng);
        }
        let mut train = indices[..n_train].to_vec();
        let mut test = indices[n_train..].to_vec();
        train.sort_unstable();
        test.sort_unstable();
        Ok((train, test))
    }

    pub fn split(&self, spec: &SplitSpec) -> Result<(Self, Self)> {
        let (train_idx, test_idx) = self.split_indices(spec)?;
        Ok((self.subset(&train_idx)?, self.subset(&test_idx)?))
    }

    pub fn load_csv(path: impl AsRef<Path>, target_column: &str) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file, target_column)
    }

    pub fn from_csv_reader(reader: impl Read, target_column: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse(format!("cannot read header row: {e}")))?
            .clone();

        // Pair up `<name>_lo`/`<name>_hi` columns, keeping first-appearance order.
        let mut names: Vec<String> = Vec::new();
        let mut pairs: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        for (col, raw) in headers.iter().enumerate() {
            let header = raw.trim();
            let (name, is_lower) = match header.strip_suffix("_lo") {
                Some(base) => (base, true),
                None => match header.strip_suffix("_hi") {
                    Some(base) => (base, false),
                    None => {
                        return Err(Error::Parse(format!(
                            "column `{header}` is not part of a `_lo`/`_hi` pair"
                        )))
                    }
                },
            };
            let slot = match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    pairs.push((None, None));
                    pairs.len() - 1
                }
            };
            let entry = if is_lower {
                &mut pairs[slot].0
            } else {
                &mut pairs[slot].1
            };
            if entry.is_some() {
                return Err(Error::Parse(format!("duplicate column `{header}`")));
            }
            *entry = Some(col);
        }
        for (name, pair) in names.iter().zip(&pairs) {
            match pair {
                (Some(_), Some(_)) => {}
                (Some(_), None) => {
                    return Err(Error::Parse(format!("missing column `{name}_hi`")))
                }
                (None, _) => return Err(Error::Parse(format!("missing column `{name}_lo`"))),
            }
        }

        let target_slot = names
            .iter()
            .position(|n| n == target_column)
            .ok_or_else(|| Error::MissingTarget(target_column.to_string()))?;
        if names.len() < 2 {
            return Err(Error::Parse("dataset has no predictor columns".into()));
        }

        let parse_cell = |record: &csv::StringRecord, col: usize, row: usize| -> Result<f64> {
            let raw = record.get(col).unwrap_or("").trim();
            if raw.is_empty() {
                return Err(Error::Parse(format!(
                    "empty value in column `{}` at row {row}",
                    headers.get(col).unwrap_or("?")
                )));
            }
            raw.parse::<f64>().map_err(|_| {
                Error::Parse(format!(
                    "malformed number `{raw}` in column `{}` at row {row}",
                    headers.get(col).unwrap_or("?")
                ))
            })
        };

        let mut x: Vec<Vec<Interval>> = Vec::new();
        let mut y: Vec<Interval> = Vec::new();
        for (row_idx, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(format!("row {row_idx}: {e}")))?;
            if record.len() != headers.len() {
                return Err(Error::Parse(format!(
                    "row {row_idx} has {} fields, expected {}",
                    record.len(),
                    headers.len()
                )));
            }
            let mut row = Vec::with_capacity(names.len() - 1);
            for (slot, &(lo_col, hi_col)) in pairs.iter().enumerate() {
                let lo = parse_cell(&record, lo_col.unwrap(), row_idx)?;
                let hi = parse_cell(&record, hi_col.unwrap(), row_idx)?;
                let interval = Interval::new(lo, hi).map_err(|_| Error::InvalidInterval {
                    lower: lo,
                    upper: hi,
                    row: Some(row_idx),
                })?;
                if slot == target_slot {
                    y.push(interval);
                } else {
                    row.push(interval);
                }
            }
            x.push(row);
        }
        if y.is_empty() {
            return Err(Error::Empty);
        }

        let predictor_names = names
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != target_slot)
            .map(|(_, n)| n.clone())
            .collect();
        Self::new(x, y, predictor_names, target_column.to_string())
    }

    /// Serializes to the same schema `load_csv` reads: predictor pairs in
    /// stored order, target pair last. `Display` formatting round-trips f64
    /// exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = Vec::new();
        for name in &self.predictor_names {
            header.push(format!("{name}_lo"));
            header.push(format!("{name}_hi"));
        }
        header.push(format!("{}_lo", self.target_name));
        header.push(format!("{}_hi", self.target_name));
        out.push_str(&header.join(","));
        out.push('\n');
        for (row, target) in self.x.iter().zip(&self.y) {
            let mut cells: Vec<String> = Vec::with_capacity(2 * row.len() + 2);
            for iv in row {
                cells.push(iv.lower().to_string());
                cells.push(iv.upper().to_string());
            }
            cells.push(target.lower().to_string());
            cells.push(target.upper().to_string());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

/// How to split a dataset into train and test sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    /// Membership by a seeded permutation.
    Random,
    /// The first `round(fraction * n)` rows are the training set, preserving
    /// row order (for time-ordered data).
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub mode: SplitMode,
    pub seed: u64,
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train_fraction must be in (0, 1), got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy_dataset(n: usize) -> IntervalDataset {
        let x = (0..n)
            .map(|i| vec![Interval::new(i as f64, i as f64 + 1.0).unwrap()])
            .collect();
        let y = (0..n)
            .map(|i| Interval::new(2.0 * i as f64, 2.0 * i as f64 + 1.0).unwrap())
            .collect();
        IntervalDataset::new(x, y, vec!["x1".into()], "y".into()).unwrap()
    }

    #[test]
    fn loads_single_predictor_file() {
        let csv = "x1_lo,x1_hi,y_lo,y_hi\n0,1,0,2\n1,2,2,4\n2,3,4,6\n";
        let d = IntervalDataset::from_csv_reader(csv.as_bytes(), "y").unwrap();
        assert_eq!(d.n_samples(), 3);
        assert_eq!(d.n_predictors(), 1);
        assert_eq!(d.predictor_names(), &["x1".to_string()]);
        assert_eq!(d.target(1), Interval::new(2.0, 4.0).unwrap());
    }

    #[test]
    fn reports_row_of_reversed_target() {
        let csv = "x1_lo,x1_hi,y_lo,y_hi\n0,1,0,2\n1,2,5,3\n";
        let err = IntervalDataset::from_csv_reader(csv.as_bytes(), "y").unwrap_err();
        match err {
            Error::InvalidInterval { row, .. } => assert_eq!(row, Some(1)),
            other => panic!("expected InvalidInterval, got {other:?}"),
        }
    }

    #[test]
    fn names_the_missing_pair_member() {
        let csv = "x1_lo,y_lo,y_hi\n0,0,2\n";
        let err = IntervalDataset::from_csv_reader(csv.as_bytes(), "y").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("x1_hi"), "message was: {msg}"),
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn rejects_blank_cells() {
        let csv = "x1_lo,x1_hi,y_lo,y_hi\n0,,0,2\n";
        assert!(matches!(
            IntervalDataset::from_csv_reader(csv.as_bytes(), "y"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn rejects_unpaired_column() {
        let csv = "x1_lo,x1_hi,note,y_lo,y_hi\n0,1,a,0,2\n";
        assert!(matches!(
            IntervalDataset::from_csv_reader(csv.as_bytes(), "y"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn missing_target_pair_is_its_own_error() {
        let csv = "x1_lo,x1_hi,y_lo,y_hi\n0,1,0,2\n";
        assert!(matches!(
            IntervalDataset::from_csv_reader(csv.as_bytes(), "z"),
            Err(Error::MissingTarget(name)) if name == "z"
        ));
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let d = toy_dataset(7);
        let text = d.to_csv_string();
        let reloaded = IntervalDataset::from_csv_reader(text.as_bytes(), "y").unwrap();
        assert_eq!(d, reloaded);
    }

    #[test]
    fn random_split_has_contracted_sizes() {
        let d = toy_dataset(10);
        let spec = SplitSpec {
            train_fraction: 0.8,
            mode: SplitMode::Random,
            seed: 7,
        };
        let (train, test) = d.split(&spec).unwrap();
        assert_eq!(train.n_samples(), 8);
        assert_eq!(test.n_samples(), 2);
        let (ti, si) = d.split_indices(&spec).unwrap();
        let mut all: Vec<usize> = ti.iter().chain(si.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn sequential_split_takes_leading_rows() {
        let d = toy_dataset(10);
        let spec = SplitSpec {
            train_fraction: 0.6,
            mode: SplitMode::Sequential,
            seed: 0,
        };
        let (train_idx, test_idx) = d.split_indices(&spec).unwrap();
        assert_eq!(train_idx, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(test_idx, vec![6, 7, 8, 9]);
    }

    #[test]
    fn equal_seeds_give_equal_splits() {
        let d = toy_dataset(20);
        let spec = SplitSpec {
            train_fraction: 0.8,
            mode: SplitMode::Random,
            seed: 99,
        };
        assert_eq!(d.split_indices(&spec).unwrap(), d.split_indices(&spec).unwrap());
    }

    #[test]
    fn tiny_fraction_degenerates() {
        let d = toy_dataset(2);
        let spec = SplitSpec {
            train_fraction: 0.1,
            mode: SplitMode::Random,
            seed: 1,
        };
        assert!(matches!(
            d.split(&spec),
            Err(Error::DegenerateSplit { .. })
        ));
    }

    proptest! {
        #[test]
        fn split_partitions_rows(n in 3usize..60, seed in any::<u64>(), f in 0.2f64..0.8) {
            let d = toy_dataset(n);
            let spec = SplitSpec { train_fraction: f, mode: SplitMode::Random, seed };
            if let Ok((train, test)) = d.split_indices(&spec) {
                let mut all = train.clone();
                all.extend(&test);
                all.sort_unstable();
                prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
                prop_assert!(train.iter().all(|i| !test.contains(i)));
            }
        }

        #[test]
        fn center_range_round_trip(lo in -1e3f64..1e3, w in 0.0f64..1e3) {
            let original = Interval::new(lo, lo + w).unwrap();
            let cr = original.to_center_range();
            let back = Interval::from_center_range(cr.center, cr.half_range).unwrap();
            prop_assert!((back.lower() - original.lower()).abs() <= 1e-12);
            prop_assert!((back.upper() - original.upper()).abs() <= 1e-12);
        }
    }
}
