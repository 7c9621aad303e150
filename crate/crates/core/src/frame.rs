//! Unit-level experiment data and its CSV representation.
//!
//! The CSV layout is fixed:
//!
//! ```text
//! unit_id,arm,y_pre,y_post[,<covariate names...>]
//! u0,1,3.2,4.1,0.7
//! ```
//!
//! `arm` is `0` (control) or `1` (treatment). Numbers use `.` as the decimal
//! separator and no grouping characters. Values are written in shortest
//! round-trip form so a write/read cycle reproduces every `f64` exactly.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reserved column names for the pre- and post-period metric.
pub const Y_PRE: &str = "y_pre";
pub const Y_POST: &str = "y_post";

const FIXED_HEADER: [&str; 4] = ["unit_id", "arm", Y_PRE, Y_POST];

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("arm {arm:?} has {count} units; at least 2 are required")]
    DegenerateArm { arm: Arm, count: usize },
    #[error("column {column} has {got} values, expected {expected}")]
    LengthMismatch {
        column: String,
        got: usize,
        expected: usize,
    },
    #[error("non-finite value in column {column} at row {row}")]
    NonFinite { column: String, row: usize },
    #[error("duplicate unit_id {0:?}")]
    DuplicateUnitId(String),
    #[error("duplicate or reserved covariate name {0:?}")]
    BadCovariateName(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Control,
    Treatment,
}

impl Arm {
    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "0" => Some(Arm::Control),
            "1" => Some(Arm::Treatment),
            _ => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Arm::Control => "0",
            Arm::Treatment => "1",
        }
    }
}

/// Column-oriented experiment data. Immutable once built; every instance
/// satisfies the frame invariants (≥ 2 units per arm, finite values, unique
/// unit ids, consistent covariate columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentFrame {
    unit_ids: Vec<String>,
    arms: Vec<Arm>,
    y_pre: Vec<f64>,
    y_post: Vec<f64>,
    covariate_names: Vec<String>,
    covariates: Vec<Vec<f64>>,
}

/// Incremental row-wise construction of an [`ExperimentFrame`].
#[derive(Debug, Clone, Default)]
pub struct FrameBuilder {
    covariate_names: Vec<String>,
    unit_ids: Vec<String>,
    arms: Vec<Arm>,
    y_pre: Vec<f64>,
    y_post: Vec<f64>,
    covariates: Vec<Vec<f64>>,
}

impl FrameBuilder {
    pub fn new<S: Into<String>>(covariate_names: impl IntoIterator<Item = S>) -> Self {
        let covariate_names: Vec<String> = covariate_names.into_iter().map(Into::into).collect();
        let covariates = vec![Vec::new(); covariate_names.len()];
        Self {
            covariate_names,
            covariates,
            ..Default::default()
        }
    }

    pub fn with_capacity<S: Into<String>>(
        covariate_names: impl IntoIterator<Item = S>,
        n: usize,
    ) -> Self {
        let mut b = Self::new(covariate_names);
        b.unit_ids.reserve(n);
        b.arms.reserve(n);
        b.y_pre.reserve(n);
        b.y_post.reserve(n);
        for c in &mut b.covariates {
            c.reserve(n);
        }
        b
    }

    /// Appends a row. Panics if `covariates` does not match the declared
    /// covariate count.
    pub fn push(
        &mut self,
        unit_id: impl Into<String>,
        arm: Arm,
        y_pre: f64,
        y_post: f64,
        covariates: &[f64],
    ) -> &mut Self {
        assert_eq!(
            covariates.len(),
            self.covariate_names.len(),
            "covariate count mismatch"
        );
        self.unit_ids.push(unit_id.into());
        self.arms.push(arm);
        self.y_pre.push(y_pre);
        self.y_post.push(y_post);
        for (col, &v) in self.covariates.iter_mut().zip(covariates) {
            col.push(v);
        }
        self
    }

    pub fn build(self) -> Result<ExperimentFrame, FrameError> {
        ExperimentFrame::from_columns(
            self.unit_ids,
            self.arms,
            self.y_pre,
            self.y_post,
            self.covariate_names.into_iter().zip(self.covariates).collect(),
        )
    }
}

impl ExperimentFrame {
    pub fn from_columns(
        unit_ids: Vec<String>,
        arms: Vec<Arm>,
        y_pre: Vec<f64>,
        y_post: Vec<f64>,
        covariates: Vec<(String, Vec<f64>)>,
    ) -> Result<Self, FrameError> {
        let n = unit_ids.len();
        let check_len = |column: &str, got: usize| {
            if got != n {
                Err(FrameError::LengthMismatch {
                    column: column.to_string(),
                    got,
                    expected: n,
                })
            } else {
                Ok(())
            }
        };
        check_len("arm", arms.len())?;
        check_len(Y_PRE, y_pre.len())?;
        check_len(Y_POST, y_post.len())?;

        let mut seen = HashSet::with_capacity(n);
        for id in &unit_ids {
            if !seen.insert(id.as_str()) {
                return Err(FrameError::DuplicateUnitId(id.clone()));
            }
        }

        let mut names = HashSet::new();
        let (covariate_names, covariates): (Vec<_>, Vec<_>) = covariates.into_iter().unzip();
        for (name, col) in covariate_names.iter().zip(&covariates) {
            if FIXED_HEADER.contains(&name.as_str()) || name.is_empty() || !names.insert(name) {
                return Err(FrameError::BadCovariateName(name.clone()));
            }
            check_len(name, col.len())?;
        }

        let all_columns = [(Y_PRE, &y_pre), (Y_POST, &y_post)]
            .into_iter()
            .chain(covariate_names.iter().map(String::as_str).zip(&covariates));
        for (name, col) in all_columns {
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(FrameError::NonFinite {
                    column: name.to_string(),
                    row,
                });
            }
        }

        for arm in [Arm::Control, Arm::Treatment] {
            let count = arms.iter().filter(|&&a| a == arm).count();
            if count < 2 {
                return Err(FrameError::DegenerateArm { arm, count });
            }
        }

        Ok(Self {
            unit_ids,
            arms,
            y_pre,
            y_post,
            covariate_names,
            covariates,
        })
    }

    pub fn len(&self) -> usize {
        self.unit_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unit_ids.is_empty()
    }

    pub fn unit_ids(&self) -> &[String] {
        &self.unit_ids
    }

    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    pub fn y_pre(&self) -> &[f64] {
        &self.y_pre
    }

    pub fn y_post(&self) -> &[f64] {
        &self.y_post
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.covariate_names
    }

    /// Looks up a pre-experiment column: `y_pre` or a named covariate.
    /// `y_post` is deliberately not reachable here.
    pub fn pre_column(&self, name: &str) -> Result<&[f64], FrameError> {
        if name == Y_PRE {
            return Ok(&self.y_pre);
        }
        self.covariate_names
            .iter()
            .position(|c| c == name)
            .map(|i| self.covariates[i].as_slice())
            .ok_or_else(|| FrameError::UnknownColumn(name.to_string()))
    }

    pub fn arm_count(&self, arm: Arm) -> usize {
        self.arms.iter().filter(|&&a| a == arm).count()
    }

    /// Reorders rows by `order` (a permutation of `0..len`).
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len());
        let pick_f = |v: &[f64]| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self {
            unit_ids: order.iter().map(|&i| self.unit_ids[i].clone()).collect(),
            arms: order.iter().map(|&i| self.arms[i]).collect(),
            y_pre: pick_f(&self.y_pre),
            y_post: pick_f(&self.y_post),
            covariate_names: self.covariate_names.clone(),
            covariates: self.covariates.iter().map(|c| pick_f(c)).collect(),
        }
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, FrameError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut records = rdr.records();

        let header = match records.next() {
            Some(h) => h?,
            None => {
                return Err(FrameError::Parse {
                    line: 1,
                    message: "empty input; expected header".into(),
                })
            }
        };
        let header: Vec<&str> = header.iter().collect();
        if header.len() < FIXED_HEADER.len() || header[..4] != FIXED_HEADER {
            return Err(FrameError::Parse {
                line: 1,
                message: format!("header must start with {}", FIXED_HEADER.join(",")),
            });
        }
        let names: Vec<String> = header[4..].iter().map(|s| s.to_string()).collect();
        let width = header.len();
        let mut builder = FrameBuilder::new(names.clone());
        let mut cov_buf = vec![0.0; names.len()];

        for record in records {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let err = |message: String| FrameError::Parse { line, message };
            if record.len() != width {
                return Err(err(format!(
                    "expected {width} fields, found {}",
                    record.len()
                )));
            }
            let number = |idx: usize| -> Result<f64, FrameError> {
                let raw = &record[idx];
                let v: f64 = raw
                    .parse()
                    .map_err(|_| err(format!("column {}: invalid number {raw:?}", header[idx])))?;
                if !v.is_finite() {
                    return Err(err(format!("column {}: non-finite value", header[idx])));
                }
                Ok(v)
            };
            let arm = Arm::from_code(&record[1])
                .ok_or_else(|| err(format!("arm must be 0 or 1, found {:?}", &record[1])))?;
            let y_pre = number(2)?;
            let y_post = number(3)?;
            for (j, slot) in cov_buf.iter_mut().enumerate() {
                *slot = number(4 + j)?;
            }
            if record[0].is_empty() {
                return Err(err("empty unit_id".into()));
            }
            builder.push(&record[0], arm, y_pre, y_post, &cov_buf);
        }
        builder.build()
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self, FrameError> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), FrameError> {
        let mut wtr = csv::Writer::from_writer(writer);
        let header: Vec<&str> = FIXED_HEADER
            .iter()
            .copied()
            .chain(self.covariate_names.iter().map(String::as_str))
            .collect();
        wtr.write_record(&header)?;
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for i in 0..self.len() {
            row.clear();
            row.push(self.unit_ids[i].clone());
            row.push(self.arms[i].code().to_string());
            row.push(format!("{}", self.y_pre[i]));
            row.push(format!("{}", self.y_post[i]));
            row.extend(self.covariates.iter().map(|c| format!("{}", c[i])));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<(), FrameError> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ExperimentFrame {
        let mut b = FrameBuilder::new(["x"]);
        b.push("a", Arm::Treatment, 1.0, 3.0, &[0.5])
            .push("b", Arm::Treatment, 2.0, 5.0, &[0.25])
            .push("c", Arm::Control, 1.5, 1.0, &[-1.0])
            .push("d", Arm::Control, 0.1, 3.0, &[1e-300]);
        b.build().unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let frame = toy();
        let mut buf = Vec::new();
        frame.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("unit_id,arm,y_pre,y_post,x\n"));
        let back = ExperimentFrame::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, frame);
    }

    #[test]
    fn rejects_small_arm() {
        let mut b = FrameBuilder::new(Vec::<String>::new());
        b.push("a", Arm::Treatment, 1.0, 1.0, &[])
            .push("b", Arm::Control, 1.0, 1.0, &[])
            .push("c", Arm::Control, 1.0, 1.0, &[]);
        assert!(matches!(
            b.build(),
            Err(FrameError::DegenerateArm {
                arm: Arm::Treatment,
                count: 1
            })
        ));
    }

    #[test]
    fn rejects_duplicates_and_reserved_names() {
        let r = ExperimentFrame::from_columns(
            vec!["a".into(), "a".into()],
            vec![Arm::Control, Arm::Treatment],
            vec![0.0; 2],
            vec![0.0; 2],
            vec![],
        );
        assert!(matches!(r, Err(FrameError::DuplicateUnitId(_))));

        let mut b = FrameBuilder::new(["y_pre"]);
        for (i, arm) in [Arm::Control, Arm::Control, Arm::Treatment, Arm::Treatment]
            .into_iter()
            .enumerate()
        {
            b.push(i.to_string(), arm, 0.0, 0.0, &[0.0]);
        }
        assert!(matches!(b.build(), Err(FrameError::BadCovariateName(_))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ExperimentFrame::read_csv("".as_bytes()).unwrap_err();
        assert!(matches!(err, FrameError::Parse { line: 1, .. }));

        let bad = "unit_id,arm,y_pre,y_post\na,1,1,2\nb,2,1,2\n";
        match ExperimentFrame::read_csv(bad.as_bytes()).unwrap_err() {
            FrameError::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }

        let bad = "unit_id,arm,y_pre,y_post\na,1,1,2\nb,1,1\n";
        match ExperimentFrame::read_csv(bad.as_bytes()).unwrap_err() {
            FrameError::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }

        let bad = "unit_id,arm,y_pre,y_post\na,1,1,2\nb,1,\"1,5\",2\n";
        assert!(matches!(
            ExperimentFrame::read_csv(bad.as_bytes()).unwrap_err(),
            FrameError::Parse { line: 3, .. }
        ));

        let bad = "id,arm,y_pre,y_post\n";
        assert!(matches!(
            ExperimentFrame::read_csv(bad.as_bytes()).unwrap_err(),
            FrameError::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn pre_column_lookup() {
        let f = toy();
        assert_eq!(f.pre_column("y_pre").unwrap(), f.y_pre());
        assert_eq!(f.pre_column("x").unwrap()[1], 0.25);
        assert!(f.pre_column("y_post").is_err());
    }
}
