//! Entropy-change pattern classifier.
//!
//! Stage 1 turns a sample into one CBBA per attribute from the change in
//! each class's mean and standard deviation when the sample is appended.
//! Stage 2 picks, per class, the training member whose entropy is closest in
//! total to every other member's. Stage 3 assigns a test sample to the class
//! whose optimal entropy it changes least.

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entropy::{measure, Method};
use crate::error::{CetError, Result};
use crate::frame::{FocalSet, Frame};
use crate::mass::Cbba;
use crate::pipeline::dataset::Dataset;
use crate::transform::combine;

/// Sample mean and standard deviation (ddof = 1) of one attribute in one class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttrStats {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    m2: f64,
}

impl AttrStats {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return AttrStats {
                n,
                mean: f64::NAN,
                sd: f64::NAN,
                m2: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let m2: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let sd = if n > 1 { (m2 / (n - 1) as f64).sqrt() } else { f64::NAN };
        AttrStats { n, mean, sd, m2 }
    }

    /// Statistics after appending `x`.
    pub fn appended(&self, x: f64) -> AttrStats {
        let n = self.n + 1;
        let mean = self.mean + (x - self.mean) / n as f64;
        let m2 = self.m2 + (x - self.mean) * (x - mean);
        AttrStats {
            n,
            mean,
            sd: (m2 / (n - 1) as f64).sqrt(),
            m2,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.n < 2 || self.sd.is_nan() || self.sd <= 0.0
    }
}

/// Per-class, per-attribute statistics over a training subset.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassStats {
    frame: Frame,
    attrs: usize,
    stats: Vec<Vec<AttrStats>>,
}

impl ClassStats {
    /// Class frame, labeled by class name.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn classes(&self) -> usize {
        self.stats.len()
    }

    pub fn attributes(&self) -> usize {
        self.attrs
    }

    pub fn get(&self, class: usize, attr: usize) -> &AttrStats {
        &self.stats[class][attr]
    }

    pub fn count(&self, class: usize) -> usize {
        self.stats[class].first().map_or(0, |s| s.n)
    }

    /// Attributes with positive spread in every class.
    pub fn usable_attributes(&self) -> Vec<usize> {
        (0..self.attrs)
            .filter(|a| self.stats.iter().all(|row| !row[*a].is_degenerate()))
            .collect()
    }

    fn check(&self, class: usize, attr: usize) -> Result<&AttrStats> {
        let s = self.get(class, attr);
        if s.n < 2 {
            return Err(CetError::DegenerateStats {
                class: self.frame.label(class).to_string(),
                reason: format!("{} training samples", s.n),
            });
        }
        if s.sd.is_nan() || s.sd <= 0.0 {
            return Err(CetError::DegenerateStats {
                class: self.frame.label(class).to_string(),
                reason: format!("attribute {attr} is constant"),
            });
        }
        Ok(s)
    }
}

/// Statistics of `subset` grouped by class.
pub fn class_stats(d: &Dataset, subset: &[usize]) -> Result<ClassStats> {
    let frame = Frame::new(d.classes().iter().cloned())?;
    let attrs = d.attributes().len();
    let mut columns = vec![vec![Vec::new(); attrs]; d.classes().len()];
    for &i in subset {
        let k = d.label(i);
        for (a, v) in d.features(i).iter().enumerate() {
            columns[k][a].push(*v);
        }
    }
    let stats = columns
        .iter()
        .map(|row| row.iter().map(|col| AttrStats::from_values(col)).collect())
        .collect();
    Ok(ClassStats { frame, attrs, stats })
}

/// Unnormalized stage-1 weights `e^{−|Δδ|}·e^{i|Δμ|}`, one per class.
pub fn stage_weights(x: &[f64], stats: &ClassStats, attr: usize) -> Result<Vec<Complex<f64>>> {
    (0..stats.classes())
        .map(|k| {
            let s = stats.check(k, attr)?;
            let t = s.appended(x[attr]);
            Ok(Complex::from_polar((-(t.sd - s.sd).abs()).exp(), (t.mean - s.mean).abs()))
        })
        .collect()
}

/// Stage-1 CBBA with one singleton per class, normalized by the complex sum.
pub fn cbba_from_sample(x: &[f64], stats: &ClassStats, attr: usize) -> Result<Cbba<f64>> {
    let w = stage_weights(x, stats, attr)?;
    let total = normalizer(&w)?;
    Cbba::new(
        stats.frame().clone(),
        w.iter().enumerate().map(|(k, z)| (FocalSet::singleton(k), z / total)),
    )
}

fn normalizer(w: &[Complex<f64>]) -> Result<Complex<f64>> {
    let total: Complex<f64> = w.iter().sum();
    if total.norm() == 0.0 {
        return Err(CetError::DegenerateMass);
    }
    Ok(total)
}

/// Focal structure of the CBBA evaluated under a class hypothesis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FocalMode {
    /// Every class singleton, identical under every hypothesis.
    Singletons,
    /// Under class `k`: `M({k}) = w_k / Σw`, the rest of the weight on `Θ`.
    #[default]
    ClassVsFrame,
}

/// How per-attribute evidence is pooled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Aggregation {
    /// Sum the per-attribute entropy differences.
    #[default]
    Sum,
    /// Combine the per-attribute CBBAs first, then measure once.
    Combined,
}

/// CBBA for sample `x`, attribute `attr`, under the hypothesis `class`.
pub fn cbba_under_class(
    x: &[f64],
    stats: &ClassStats,
    attr: usize,
    class: usize,
    mode: FocalMode,
) -> Result<Cbba<f64>> {
    match mode {
        FocalMode::Singletons => cbba_from_sample(x, stats, attr),
        FocalMode::ClassVsFrame => {
            let w = stage_weights(x, stats, attr)?;
            let total = normalizer(&w)?;
            let frame = stats.frame().clone();
            if frame.len() == 1 {
                return Ok(Cbba::vacuous(frame));
            }
            let full = frame.full();
            Cbba::new(
                frame,
                [
                    (FocalSet::singleton(class), w[class] / total),
                    (full, (total - w[class]) / total),
                ],
            )
        }
    }
}

/// Classifier switches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifierConfig {
    pub method: Method,
    pub focal_mode: FocalMode,
    pub aggregation: Aggregation,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            method: Method::Fcb,
            focal_mode: FocalMode::default(),
            aggregation: Aggregation::default(),
        }
    }
}

/// Index minimizing `Σ_j |e_i − e_j|`; ties go to the lowest index.
pub fn select_optimal(entropies: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, ei) in entropies.iter().enumerate() {
        let score: f64 = entropies.iter().map(|ej| (ei - ej).abs()).sum();
        if best.is_none_or(|(_, b)| score < b) {
            best = Some((i, score));
        }
    }
    best.map(|(i, _)| i)
}

/// Winning training member of a class.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    /// Dataset row.
    pub member: usize,
    pub cbba: Cbba<f64>,
    pub entropy: f64,
}

/// Stage 2 for one class and attribute. `members` are dataset rows of
/// `class`; those whose CBBA is invalid do not compete. `None` when no
/// member yields a valid CBBA.
pub fn select_optimal_mass(
    d: &Dataset,
    stats: &ClassStats,
    members: &[usize],
    class: usize,
    attr: usize,
    cfg: &ClassifierConfig,
) -> Result<Option<Candidate>> {
    let mut pool = Vec::with_capacity(members.len());
    for &m in members {
        if let Some(c) = valid_or_skip(cbba_under_class(d.features(m), stats, attr, class, cfg.focal_mode))? {
            let e = measure(&c, cfg.method)?.value;
            pool.push(Candidate {
                member: m,
                cbba: c,
                entropy: e,
            });
        }
    }
    Ok(pick(pool))
}

fn pick(mut pool: Vec<Candidate>) -> Option<Candidate> {
    let es: Vec<f64> = pool.iter().map(|c| c.entropy).collect();
    select_optimal(&es).map(|i| pool.swap_remove(i))
}

/// Invariant violations and vanishing weights become `None`, other errors
/// propagate.
fn valid_or_skip(r: Result<Cbba<f64>>) -> Result<Option<Cbba<f64>>> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(CetError::Invalid(_) | CetError::DegenerateMass) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Trained per-class optimal entropies.
#[derive(Clone, Debug)]
pub struct Model {
    cfg: ClassifierConfig,
    stats: ClassStats,
    attrs: Vec<usize>,
    /// `[class][slot]`: one slot per usable attribute, or a single slot when
    /// combining.
    optimal: Vec<Vec<Option<f64>>>,
}

impl Model {
    pub fn stats(&self) -> &ClassStats {
        &self.stats
    }

    pub fn attributes(&self) -> &[usize] {
        &self.attrs
    }

    pub fn optimal_entropy(&self, class: usize, slot: usize) -> Option<f64> {
        self.optimal[class][slot]
    }

    /// Stage 3: the class with the smallest entropy change; ties go to
    /// the lowest class index.
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        let scores = self.scores(x)?;
        let mut best = 0;
        for (k, s) in scores.iter().enumerate() {
            if *s < scores[best] {
                best = k;
            }
        }
        Ok(best)
    }

    /// Per-class entropy change of `x`.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        let classes = self.stats.classes();
        let mode = self.cfg.focal_mode;
        match self.cfg.aggregation {
            Aggregation::Sum => {
                let mut scores = vec![0.0; classes];
                'attr: for (slot, &a) in self.attrs.iter().enumerate() {
                    let mut per_class = Vec::with_capacity(classes);
                    for k in 0..classes {
                        let Some(opt) = self.optimal[k][slot] else { continue 'attr };
                        let Some(c) = valid_or_skip(cbba_under_class(x, &self.stats, a, k, mode))? else {
                            continue 'attr;
                        };
                        per_class.push((opt - measure(&c, self.cfg.method)?.value).abs());
                    }
                    for (s, d) in scores.iter_mut().zip(per_class) {
                        *s += d;
                    }
                }
                Ok(scores)
            }
            Aggregation::Combined => {
                let mut valid = Vec::with_capacity(self.attrs.len());
                'valid: for &a in &self.attrs {
                    for k in 0..classes {
                        if valid_or_skip(cbba_under_class(x, &self.stats, a, k, mode))?.is_none() {
                            continue 'valid;
                        }
                    }
                    valid.push(a);
                }
                (0..classes)
                    .map(|k| {
                        let Some(opt) = self.optimal[k][0] else { return Ok(f64::INFINITY) };
                        match combined(x, &self.stats, &valid, k, mode)? {
                            Some(c) => Ok((opt - measure(&c, self.cfg.method)?.value).abs()),
                            None => Ok(f64::INFINITY),
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Left fold of the per-attribute CBBAs; `None` when no attribute is valid
/// or the fold hits total conflict.
fn combined(x: &[f64], stats: &ClassStats, attrs: &[usize], class: usize, mode: FocalMode) -> Result<Option<Cbba<f64>>> {
    let mut acc: Option<Cbba<f64>> = None;
    for &a in attrs {
        let Some(c) = valid_or_skip(cbba_under_class(x, stats, a, class, mode))? else { continue };
        acc = Some(match acc {
            None => c,
            Some(prev) => match combine(&prev, &c) {
                Ok((fused, _)) => fused,
                Err(CetError::TotalConflict { .. }) => return Ok(None),
                Err(e) => return Err(e),
            },
        });
    }
    Ok(acc)
}

/// Stages 1 and 2 over the rows in `train`.
pub fn train(d: &Dataset, train: &[usize], cfg: &ClassifierConfig) -> Result<Model> {
    if !cfg.method.is_complex() {
        return Err(CetError::InvalidConfig(format!("{} is not defined for complex masses", cfg.method)));
    }
    let stats = class_stats(d, train)?;
    for k in 0..stats.classes() {
        if stats.count(k) < 2 {
            return Err(CetError::DegenerateStats {
                class: stats.frame().label(k).to_string(),
                reason: format!("{} training samples", stats.count(k)),
            });
        }
    }
    let attrs = stats.usable_attributes();
    if attrs.is_empty() {
        return Err(CetError::DegenerateStats {
            class: stats.frame().label(0).to_string(),
            reason: "no attribute varies within every class".into(),
        });
    }
    let mut members = vec![Vec::new(); stats.classes()];
    let mut rows = train.to_vec();
    rows.sort_unstable();
    rows.dedup();
    for i in rows {
        members[d.label(i)].push(i);
    }

    let mut optimal = Vec::with_capacity(stats.classes());
    for (k, ms) in members.iter().enumerate() {
        let row = match cfg.aggregation {
            Aggregation::Sum => attrs
                .iter()
                .map(|&a| Ok(select_optimal_mass(d, &stats, ms, k, a, cfg)?.map(|c| c.entropy)))
                .collect::<Result<Vec<_>>>()?,
            Aggregation::Combined => {
                let mut pool = Vec::new();
                for &m in ms {
                    if let Some(c) = combined(d.features(m), &stats, &attrs, k, cfg.focal_mode)? {
                        let e = measure(&c, cfg.method)?.value;
                        pool.push(Candidate {
                            member: m,
                            cbba: c,
                            entropy: e,
                        });
                    }
                }
                vec![pick(pool).map(|c| c.entropy)]
            }
        };
        optimal.push(row);
    }
    Ok(Model {
        cfg: *cfg,
        stats,
        attrs,
        optimal,
    })
}

/// Trains on `train` and classifies `test`; returns `(correct, total)`.
pub fn evaluate(d: &Dataset, train_rows: &[usize], test: &[usize], cfg: &ClassifierConfig) -> Result<(usize, usize)> {
    let model = train(d, train_rows, cfg)?;
    let mut correct = 0;
    for &i in test {
        if model.classify(d.features(i))? == d.label(i) {
            correct += 1;
        }
    }
    Ok((correct, test.len()))
}

/// Training-ratio sweep settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub ratios: Vec<f64>,
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Fraction of rows held out as the fixed test set.
    pub test_fraction: f64,
    pub focal_mode: FocalMode,
    pub aggregation: Aggregation,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            ratios: (1..=99).map(|i| i as f64 / 100.0).collect(),
            methods: vec![Method::Fcb],
            seed: 0,
            test_fraction: 0.3,
            focal_mode: FocalMode::default(),
            aggregation: Aggregation::default(),
        }
    }
}

/// One cell of the sweep table; `accuracy` is `None` when the training
/// split leaves a class with fewer than two members or no usable attribute.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub ratio: f64,
    pub method: Method,
    pub accuracy: Option<f64>,
    pub n_train: usize,
    pub n_test: usize,
}

/// Seeded split: `(test, pool)`. Training sets are prefixes of the pool.
pub fn split(d: &Dataset, test_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(CetError::InvalidConfig(format!("test fraction {test_fraction} outside (0, 1)")));
    }
    if d.len() < 2 {
        return Err(CetError::InvalidConfig("need at least two rows to split".into()));
    }
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_test = ((test_fraction * d.len() as f64).round() as usize).clamp(1, d.len() - 1);
    let pool = order.split_off(n_test);
    Ok((order, pool))
}

/// Accuracy for every `(ratio, method)` pair, ratio-major. Cells run in
/// parallel; the result does not depend on scheduling.
pub fn accuracy_sweep(d: &Dataset, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if let Some(m) = cfg.methods.iter().find(|m| !m.is_complex()) {
        return Err(CetError::InvalidConfig(format!("{m} is not defined for complex masses")));
    }
    if let Some(r) = cfg.ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(CetError::InvalidConfig(format!("ratio {r} outside (0, 1)")));
    }
    let (test, pool) = split(d, cfg.test_fraction, cfg.seed)?;
    let cells: Vec<(f64, Method)> = cfg
        .ratios
        .iter()
        .flat_map(|r| cfg.methods.iter().map(move |m| (*r, *m)))
        .collect();
    cells
        .par_iter()
        .map(|&(ratio, method)| {
            let n_train = (ratio * pool.len() as f64).round() as usize;
            let ccfg = ClassifierConfig {
                method,
                focal_mode: cfg.focal_mode,
                aggregation: cfg.aggregation,
            };
            let accuracy = match evaluate(d, &pool[..n_train], &test, &ccfg) {
                Ok((hit, total)) => Some(hit as f64 / total as f64),
                Err(CetError::DegenerateStats { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                ratio,
                method,
                accuracy,
                n_train,
                n_test: test.len(),
            })
        })
        .collect()
}
