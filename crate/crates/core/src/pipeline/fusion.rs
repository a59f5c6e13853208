//! Threshold-driven sequential fusion.

use serde::Serialize;

use crate::entropy::fcb;
use crate::error::{CetError, Result};
use crate::frame::FocalSet;
use crate::mass::Cbba;
use crate::transform::FusionState;

/// Acceptance thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FusionConfig {
    /// Minimum modulus of the leading singleton.
    pub sigma: f64,
    /// Maximum FCB entropy in bits.
    pub epsilon: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            sigma: 0.5,
            epsilon: 2.0,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(CetError::InvalidConfig(format!("sigma {} must be positive", self.sigma)));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(CetError::InvalidConfig(format!("epsilon {} must be positive", self.epsilon)));
        }
        Ok(())
    }

    pub fn accepts(&self, max_modulus: f64, entropy: f64) -> bool {
        max_modulus >= self.sigma && entropy <= self.epsilon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Neither threshold met.
    Undetermined,
    /// Exactly one threshold met.
    Potential,
    /// Both thresholds met.
    Accepted,
}

/// State after one fold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    /// Number of folds so far (sources `0..=step` combined).
    pub step: usize,
    /// `|M({e})|` for every frame element.
    pub singleton_moduli: Vec<f64>,
    /// Argmax of `singleton_moduli`, lowest index on ties.
    pub target: usize,
    pub max_modulus: f64,
    pub conflict_re: f64,
    pub conflict_im: f64,
    pub entropy: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Accepted { step: usize, target: usize },
    /// Evidence ran out first; carries the last verdict.
    Exhausted { last: Verdict },
    /// Total conflict while folding in source `source`.
    Conflict { step: usize, source: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecisionTrace {
    pub labels: Vec<String>,
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

/// Left-folds `evidence`, stopping at the first fused CBBA whose leading
/// singleton modulus reaches `sigma` while its FCB entropy is at most
/// `epsilon`.
pub fn fuse_until_decision(evidence: &[Cbba<f64>], cfg: &FusionConfig) -> Result<DecisionTrace> {
    cfg.validate()?;
    if evidence.len() < 2 {
        return Err(CetError::InsufficientEvidence {
            needed: 2,
            got: evidence.len(),
        });
    }
    let frame = evidence[0].frame().clone();
    if evidence.iter().any(|c| *c.frame() != frame) {
        return Err(CetError::FrameMismatch);
    }
    let mut state = FusionState::new(evidence[0].clone());
    let mut steps = Vec::new();
    for (source, next) in evidence.iter().enumerate().skip(1) {
        let k = match state.fold(next, source) {
            Ok(k) => k,
            Err(CetError::TotalConflict { .. }) => {
                return Ok(DecisionTrace {
                    labels: frame.labels().to_vec(),
                    steps,
                    outcome: Outcome::Conflict { step: source, source },
                })
            }
            Err(e) => return Err(e),
        };
        let fused = state.current();
        let moduli: Vec<f64> = (0..frame.len()).map(|i| fused.mass(FocalSet::singleton(i)).norm()).collect();
        let (target, max_modulus) = moduli
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, m)| if m > best.1 { (i, m) } else { best });
        let entropy = fcb(fused)?;
        let belief = max_modulus >= cfg.sigma;
        let certain = entropy <= cfg.epsilon;
        let verdict = match (belief, certain) {
            (true, true) => Verdict::Accepted,
            (false, false) => Verdict::Undetermined,
            _ => Verdict::Potential,
        };
        steps.push(TraceStep {
            step: source,
            singleton_moduli: moduli,
            target,
            max_modulus,
            conflict_re: k.re,
            conflict_im: k.im,
            entropy,
            verdict,
        });
        if verdict == Verdict::Accepted {
            return Ok(DecisionTrace {
                labels: frame.labels().to_vec(),
                steps,
                outcome: Outcome::Accepted { step: source, target },
            });
        }
    }
    let last = steps.last().map_or(Verdict::Undetermined, |s| s.verdict);
    Ok(DecisionTrace {
        labels: frame.labels().to_vec(),
        steps,
        outcome: Outcome::Exhausted { last },
    })
}
