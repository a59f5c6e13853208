//! CBBA JSON documents and number formatting.
//!
//! ```json
//! {"frame": ["x1", "x2"],
//!  "masses": [{"set": ["x1"], "re": 0.1, "im": -0.1},
//!             {"set": ["x1", "x2"], "re": 0.9, "im": 0.1}]}
//! ```
//!
//! A joint frame adds `"factors": [[..], [..]]`; a combination result adds
//! the conflict coefficient as `"conflict": {"re": .., "im": ..}`.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{CetError, Result};
use crate::frame::{FocalSet, Frame};
use crate::mass::Cbba;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassEntry {
    pub set: Vec<String>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CbbaDocument {
    pub frame: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<(Vec<String>, Vec<String>)>,
    pub masses: Vec<MassEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict: Option<ComplexValue>,
}

/// Parser switches.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ParseOptions {
    /// Sum-to-one tolerance; the scalar default when `None`.
    pub tolerance: Option<f64>,
    /// Keep documents that break the mass invariants (for diagnostics).
    pub allow_invalid: bool,
}

impl CbbaDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with round-trip precision.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn frame(&self) -> Result<Frame> {
        let frame = match &self.factors {
            None => Frame::new(self.frame.iter().cloned())?,
            Some((x, y)) => {
                let joint = Frame::product(&Frame::new(x.iter().cloned())?, &Frame::new(y.iter().cloned())?)?;
                if joint.labels() != self.frame.as_slice() {
                    return Err(CetError::InvalidFrame(
                        "frame labels do not match the product of the factors".into(),
                    ));
                }
                joint
            }
        };
        Ok(frame)
    }

    pub fn to_cbba<T: Real>(&self, opts: ParseOptions) -> Result<Cbba<T>> {
        let frame = self.frame()?;
        let mut masses = Vec::with_capacity(self.masses.len());
        for entry in &self.masses {
            masses.push((frame.set_of(&entry.set)?, Complex::new(T::lit(entry.re), T::lit(entry.im))));
        }
        let c = Cbba::collect(frame, masses)?;
        if !opts.allow_invalid {
            let tol = T::lit(opts.tolerance.unwrap_or(T::SUM_TOLERANCE));
            c.validate_with(tol).map_err(CetError::Invalid)?;
        }
        Ok(c)
    }

    pub fn from_cbba<T: Real>(c: &Cbba<T>) -> Self {
        let frame = c.frame();
        CbbaDocument {
            frame: frame.labels().to_vec(),
            factors: frame
                .factors()
                .map(|(x, y)| (x.labels().to_vec(), y.labels().to_vec())),
            masses: c
                .iter()
                .map(|(s, z)| MassEntry {
                    set: set_labels(frame, s),
                    re: z.re.as_f64(),
                    im: z.im.as_f64(),
                })
                .collect(),
            conflict: None,
        }
    }

    pub fn with_conflict<T: Real>(mut self, k: Complex<T>) -> Self {
        self.conflict = Some(ComplexValue {
            re: k.re.as_f64(),
            im: k.im.as_f64(),
        });
        self
    }
}

fn set_labels(frame: &Frame, s: FocalSet) -> Vec<String> {
    frame.labels_of(s).into_iter().map(str::to_string).collect()
}

pub fn parse_cbba<T: Real>(text: &str, opts: ParseOptions) -> Result<Cbba<T>> {
    CbbaDocument::from_json(text)?.to_cbba(opts)
}

pub fn read_cbba<T: Real>(path: &Path, opts: ParseOptions) -> Result<Cbba<T>> {
    parse_cbba(&std::fs::read_to_string(path)?, opts)
}

pub fn cbba_to_json<T: Real>(c: &Cbba<T>) -> String {
    CbbaDocument::from_cbba(c).to_json()
}

/// Formats `x` with `digits` significant digits, `%g`-style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Number formatting mode shared by every report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Six significant digits.
    Short,
    /// Shortest representation that round-trips.
    Full,
}

impl Precision {
    pub fn format(self, x: f64) -> String {
        match self {
            Precision::Short => format_sig(x, 6),
            Precision::Full => format!("{x:?}"),
        }
    }

    /// `x` rounded as [`Precision::format`] prints it, for JSON numbers.
    pub fn round(self, x: f64) -> f64 {
        match self {
            Precision::Short if x.is_finite() => format_sig(x, 6).parse().unwrap_or(x),
            _ => x,
        }
    }
}
