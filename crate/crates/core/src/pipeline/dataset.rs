//! Labeled numeric datasets read from CSV.

use std::io::Read;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{CetError, Result};

/// Immutable table of feature vectors with class labels. Classes are
/// numbered by first appearance.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    attributes: Vec<String>,
    classes: Vec<String>,
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl Dataset {
    pub fn new(attributes: Vec<String>, classes: Vec<String>, records: Vec<(Vec<f64>, usize)>) -> Result<Self> {
        if records.is_empty() {
            return Err(CetError::EmptyDataset);
        }
        let width = attributes.len();
        let mut features = Vec::with_capacity(records.len());
        let mut labels = Vec::with_capacity(records.len());
        for (i, (x, y)) in records.into_iter().enumerate() {
            if x.len() != width {
                return Err(CetError::InvalidConfig(format!(
                    "record {i} has {} features, expected {width}",
                    x.len()
                )));
            }
            if y >= classes.len() {
                return Err(CetError::InvalidConfig(format!("record {i} has unknown class {y}")));
            }
            features.push(x);
            labels.push(y);
        }
        Ok(Dataset {
            attributes,
            classes,
            features,
            labels,
        })
    }

    pub fn from_path(path: &Path, label_column: &str) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?, label_column)
    }

    /// Header row required; every column other than `label_column` must be
    /// numeric.
    pub fn from_reader<R: Read>(reader: R, label_column: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        let label_at = header
            .iter()
            .position(|h| h == label_column)
            .ok_or_else(|| CetError::MissingLabel(label_column.to_string()))?;
        let attributes: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != label_at)
            .map(|(_, h)| h.to_string())
            .collect();

        let mut classes: Vec<String> = Vec::new();
        let mut records = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let mut x = Vec::with_capacity(attributes.len());
            let mut label = None;
            for (i, field) in rec.iter().enumerate() {
                if i == label_at {
                    label = Some(field);
                    continue;
                }
                let v: f64 = field.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                    CetError::NonNumericFeature {
                        row: row + 1,
                        column: header.get(i).unwrap_or_default().to_string(),
                        value: field.to_string(),
                    }
                })?;
                x.push(v);
            }
            let label = label.ok_or_else(|| CetError::MissingLabel(label_column.to_string()))?;
            let y = match classes.iter().position(|c| c == label) {
                Some(k) => k,
                None => {
                    classes.push(label.to_string());
                    classes.len() - 1
                }
            };
            records.push((x, y));
        }
        Self::new(attributes, classes, records)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Same records, classes renamed by `perm` (`new = perm[old]`).
    pub fn permute_labels(&self, perm: &[usize]) -> Result<Self> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.classes.len()).collect::<Vec<_>>() {
            return Err(CetError::InvalidConfig("not a permutation of the classes".into()));
        }
        let mut classes = vec![String::new(); self.classes.len()];
        for (old, new) in perm.iter().enumerate() {
            classes[*new] = self.classes[old].clone();
        }
        Ok(Dataset {
            attributes: self.attributes.clone(),
            classes,
            features: self.features.clone(),
            labels: self.labels.iter().map(|y| perm[*y]).collect(),
        })
    }
}

/// Reads a CSV file; see [`Dataset::from_reader`].
pub fn ingest_csv(path: &Path, label_column: &str) -> Result<Dataset> {
    Dataset::from_path(path, label_column)
}

/// Two isotropic Gaussian classes `a ~ N(0, I)` and `b ~ N(separation, I)`,
/// `points / 2` each, class `a` first.
pub fn two_gaussians(points: usize, dims: usize, separation: f64, seed: u64) -> Result<Dataset> {
    if points < 2 || dims == 0 {
        return Err(CetError::InvalidConfig("need at least two points and one dimension".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let per = points / 2;
    let mut records = Vec::with_capacity(2 * per);
    for (k, shift) in [(0usize, 0.0), (1, separation)] {
        for _ in 0..per {
            let x = (0..dims).map(|_| shift + normal.sample(&mut rng)).collect();
            records.push((x, k));
        }
    }
    Dataset::new(
        (1..=dims).map(|i| format!("f{i}")).collect(),
        vec!["a".into(), "b".into()],
        records,
    )
}
