//! Complex basic belief assignments.
//!
//! A [`Cbba`] maps focal sets of a [`Frame`] to complex masses. The empty set
//! carries no mass, the complex masses sum to `1 + 0i`, and each modulus lies
//! in `[0, 1]`. Zero masses are not stored.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CetError, Result};
use crate::frame::{FocalSet, Frame};
use crate::scalar::Real;

pub type ComplexMass<T> = Complex<T>;

#[inline]
pub fn magnitude<T: Real>(z: Complex<T>) -> T {
    z.norm()
}

/// Quadrant-correct phase in `(-π, π]`.
pub fn phase<T: Real>(z: Complex<T>) -> Result<T> {
    let (u, v) = (z.re, z.im);
    let zero = T::zero();
    if u > zero {
        Ok((v / u).atan())
    } else if u == zero {
        if v > zero {
            Ok(T::FRAC_PI_2())
        } else if v < zero {
            Ok(-T::FRAC_PI_2())
        } else {
            Err(CetError::ZeroPhaseUndefined)
        }
    } else if v >= zero {
        Ok((v / u).atan() + T::PI())
    } else {
        Ok((v / u).atan() - T::PI())
    }
}

/// `m·e^{iθ}`.
#[inline]
pub fn from_euler<T: Real>(m: T, theta: T) -> Complex<T> {
    Complex::from_polar(m, theta)
}

/// First broken CBBA invariant, with the measured residual.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptySetMass { re: f64, im: f64 },
    MagnitudeViolation { set: String, magnitude: f64 },
    SumViolation { residual: f64, re: f64, im: f64 },
    NonProductFocal { set: String },
    NonFinite { set: String },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::EmptySetMass { .. } => "EmptySetMass",
            Violation::MagnitudeViolation { .. } => "MagnitudeViolation",
            Violation::SumViolation { .. } => "SumViolation",
            Violation::NonProductFocal { .. } => "NonProductFocal",
            Violation::NonFinite { .. } => "NonFinite",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySetMass { re, im } => {
                write!(f, "EmptySetMass: M(∅) = {re}{im:+}i")
            }
            Violation::MagnitudeViolation { set, magnitude } => {
                write!(f, "MagnitudeViolation: |M({set})| = {magnitude} > 1")
            }
            Violation::SumViolation { residual, re, im } => {
                write!(f, "SumViolation: masses sum to {re}{im:+}i, residual {residual}")
            }
            Violation::NonProductFocal { set } => {
                write!(f, "NonProductFocal: {set} is not a product set of the joint frame")
            }
            Violation::NonFinite { set } => write!(f, "NonFinite: M({set}) is not finite"),
        }
    }
}

/// Complex basic belief assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct Cbba<T> {
    frame: Frame,
    masses: BTreeMap<FocalSet, Complex<T>>,
}

impl<T: Real> Cbba<T> {
    /// Builds and validates at the scalar's default tolerance.
    pub fn new<I>(frame: Frame, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, Complex<T>)>,
    {
        Self::with_tolerance(frame, masses, T::lit(T::SUM_TOLERANCE))
    }

    pub fn with_tolerance<I>(frame: Frame, masses: I, tolerance: T) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, Complex<T>)>,
    {
        let c = Self::collect(frame, masses)?;
        c.validate_with(tolerance).map_err(CetError::Invalid)?;
        Ok(c)
    }

    /// Builds without checking the mass invariants. Focal sets must still
    /// belong to the frame and appear once.
    pub fn collect<I>(frame: Frame, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, Complex<T>)>,
    {
        let mut map = BTreeMap::new();
        for (set, z) in masses {
            frame.check(set)?;
            if map.insert(set, z).is_some() {
                return Err(CetError::DuplicateSet(frame.describe(set)));
            }
        }
        map.retain(|_, z| !is_zero(*z));
        Ok(Cbba { frame, masses: map })
    }

    /// Internal constructor for transform outputs already known to be in-frame.
    pub(crate) fn from_map(frame: Frame, mut masses: BTreeMap<FocalSet, Complex<T>>) -> Self {
        masses.retain(|_, z| !is_zero(*z));
        Cbba { frame, masses }
    }

    /// Convenience: `[(labels, re, im)]`.
    pub fn from_labeled(frame: Frame, entries: &[(&[&str], f64, f64)]) -> Result<Self> {
        let masses = entries
            .iter()
            .map(|(labels, re, im)| Ok((frame.set_of(labels)?, Complex::new(T::lit(*re), T::lit(*im)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, masses)
    }

    /// `M(Θ) = 1`.
    pub fn vacuous(frame: Frame) -> Self {
        let full = frame.full();
        Self::from_map(frame, BTreeMap::from([(full, Complex::new(T::one(), T::zero()))]))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self, set: FocalSet) -> Complex<T> {
        self.masses.get(&set).copied().unwrap_or_else(Complex::default)
    }

    /// Stored (nonzero) masses in ascending bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (FocalSet, Complex<T>)> + '_ {
        self.masses.iter().map(|(s, z)| (*s, *z))
    }

    pub fn focal_sets(&self) -> impl Iterator<Item = FocalSet> + '_ {
        self.masses.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> Complex<T> {
        self.masses.values().fold(Complex::default(), |acc, z| acc + z)
    }

    pub fn max_cardinality(&self) -> usize {
        self.masses.keys().map(|s| s.cardinality()).max().unwrap_or(0)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        self.validate_with(T::lit(T::SUM_TOLERANCE))
    }

    pub fn validate_with(&self, tolerance: T) -> std::result::Result<(), Violation> {
        for (set, z) in self.iter() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Violation::NonFinite {
                    set: self.frame.describe(set),
                });
            }
        }
        let empty = self.mass(FocalSet::EMPTY);
        if !is_zero(empty) {
            return Err(Violation::EmptySetMass {
                re: empty.re.as_f64(),
                im: empty.im.as_f64(),
            });
        }
        for (set, z) in self.iter() {
            let m = z.norm();
            if m > T::one() + tolerance {
                return Err(Violation::MagnitudeViolation {
                    set: self.frame.describe(set),
                    magnitude: m.as_f64(),
                });
            }
        }
        let total = self.total();
        let residual = (total - Complex::new(T::one(), T::zero())).norm();
        if residual > tolerance {
            return Err(Violation::SumViolation {
                residual: residual.as_f64(),
                re: total.re.as_f64(),
                im: total.im.as_f64(),
            });
        }
        if self.frame.is_product() {
            if let Some(set) = self.focal_sets().find(|s| self.frame.split_product(*s).is_none()) {
                return Err(Violation::NonProductFocal {
                    set: self.frame.describe(set),
                });
            }
        }
        Ok(())
    }

    /// `|M(a)| / Σ_B |M(B)|`.
    pub fn commitment(&self, a: FocalSet) -> Result<T> {
        let denom = self.modulus_sum();
        if denom <= T::zero() {
            return Err(CetError::DegenerateMass);
        }
        Ok(self.mass(a).norm() / denom)
    }

    /// Commitment of every stored focal set.
    pub fn commitments(&self) -> Result<BTreeMap<FocalSet, T>> {
        let denom = self.modulus_sum();
        if denom <= T::zero() {
            return Err(CetError::DegenerateMass);
        }
        Ok(self.iter().map(|(s, z)| (s, z.norm() / denom)).collect())
    }

    fn modulus_sum(&self) -> T {
        self.masses.values().map(|z| z.norm()).sum()
    }

    /// Interference effect `IE(b) = |Σ_{X⊆b} M(X)|² − Σ_{X⊆b} |M(X)|²`.
    pub fn interference(&self, b: FocalSet) -> T {
        let mut sum: Complex<T> = Complex::default();
        let mut squares = T::zero();
        for (_, z) in self.iter().filter(|(x, _)| x.is_subset_of(b)) {
            sum += z;
            squares += z.norm_sqr();
        }
        sum.norm_sqr() - squares
    }

    /// All mass on singletons.
    pub fn is_bayesian(&self) -> bool {
        self.focal_sets().all(|s| s.is_singleton())
    }

    /// Every imaginary part within the default tolerance of zero.
    pub fn is_real(&self) -> bool {
        let tol = T::lit(T::SUM_TOLERANCE);
        self.masses.values().all(|z| z.im.abs() <= tol)
    }

    /// Same masses, frame replaced by one of equal size.
    pub fn relabel(&self, frame: Frame) -> Result<Self> {
        if frame.len() != self.frame.len() {
            return Err(CetError::FrameMismatch);
        }
        Ok(Cbba {
            frame,
            masses: self.masses.clone(),
        })
    }
}

impl<'a, T> IntoIterator for &'a Cbba<T> {
    type Item = (&'a FocalSet, &'a Complex<T>);
    type IntoIter = btree_map::Iter<'a, FocalSet, Complex<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.masses.iter()
    }
}

#[inline]
fn is_zero<T: Real>(z: Complex<T>) -> bool {
    z.re == T::zero() && z.im == T::zero()
}

/// Real, non-negative mass function.
#[derive(Clone, Debug, PartialEq)]
pub struct Bba<T> {
    frame: Frame,
    masses: BTreeMap<FocalSet, T>,
}

impl<T: Real> Bba<T> {
    pub fn new<I>(frame: Frame, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FocalSet, T)>,
    {
        let c = Cbba::new(frame, masses.into_iter().map(|(s, m)| (s, Complex::new(m, T::zero()))))?;
        Self::try_from_cbba(&c)
    }

    /// Accepts a CBBA whose masses are all real and non-negative.
    pub fn try_from_cbba(c: &Cbba<T>) -> Result<Self> {
        let tol = T::lit(T::SUM_TOLERANCE);
        let mut masses = BTreeMap::new();
        for (s, z) in c.iter() {
            if z.im.abs() > tol {
                return Err(CetError::InvalidDistribution(format!(
                    "mass on {} has imaginary part {}",
                    c.frame().describe(s),
                    z.im
                )));
            }
            if z.re < -tol {
                return Err(CetError::InvalidDistribution(format!(
                    "mass on {} is negative ({})",
                    c.frame().describe(s),
                    z.re
                )));
            }
            if z.re > T::zero() {
                masses.insert(s, z.re);
            }
        }
        if !c.mass(FocalSet::EMPTY).is_zero_mass() {
            return Err(CetError::InvalidDistribution("mass on the empty set".into()));
        }
        let total: T = masses.values().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(CetError::InvalidDistribution(format!("masses sum to {total}")));
        }
        Ok(Bba {
            frame: c.frame().clone(),
            masses,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self, s: FocalSet) -> T {
        self.masses.get(&s).copied().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (FocalSet, T)> + '_ {
        self.masses.iter().map(|(s, m)| (*s, *m))
    }

    pub fn to_cbba(&self) -> Cbba<T> {
        Cbba::from_map(
            self.frame.clone(),
            self.iter().map(|(s, m)| (s, Complex::new(m, T::zero()))).collect(),
        )
    }
}

trait ZeroMass {
    fn is_zero_mass(&self) -> bool;
}

impl<T: Real> ZeroMass for Complex<T> {
    fn is_zero_mass(&self) -> bool {
        is_zero(*self)
    }
}

/// Shape of the masses drawn by [`random_cbba`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomProfile {
    /// Real masses on singletons only.
    RealBayesian,
    /// Real masses on random focal sets.
    RealGeneral,
    /// Complex masses on singletons only.
    ComplexBayesian,
    /// Complex masses on random focal sets: real parts on a simplex,
    /// imaginary parts summing to zero, every modulus at most 1.
    ComplexGeneral,
}

/// Seeded random CBBA. The same `(frame, seed, profile)` always yields the
/// same value.
pub fn random_cbba<T: Real>(frame: &Frame, seed: u64, profile: RandomProfile) -> Cbba<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_cbba_with(frame, &mut rng, profile)
}

pub fn random_cbba_with<T: Real, R: Rng + ?Sized>(
    frame: &Frame,
    rng: &mut R,
    profile: RandomProfile,
) -> Cbba<T> {
    let bayesian = matches!(profile, RandomProfile::RealBayesian | RandomProfile::ComplexBayesian);
    let sets: Vec<FocalSet> = if bayesian {
        (0..frame.len()).map(FocalSet::singleton).collect()
    } else {
        pick_focal_sets(frame, rng)
    };

    let weights: Vec<f64> = sets.iter().map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let re: Vec<f64> = weights.iter().map(|w| w / total).collect();

    let im: Vec<f64> = match profile {
        RandomProfile::RealBayesian | RandomProfile::RealGeneral => vec![0.0; sets.len()],
        RandomProfile::ComplexBayesian | RandomProfile::ComplexGeneral => {
            if sets.len() < 2 {
                vec![0.0; sets.len()]
            } else {
                let raw: Vec<f64> = sets.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
                let mean = raw.iter().sum::<f64>() / raw.len() as f64;
                let centered: Vec<f64> = raw.iter().map(|v| v - mean).collect();
                // largest scale keeping every modulus within the unit disc
                let cap = re
                    .iter()
                    .zip(&centered)
                    .filter(|(_, v)| v.abs() > 0.0)
                    .map(|(r, v)| (1.0 - r * r).max(0.0).sqrt() / v.abs())
                    .fold(1.0_f64, f64::min);
                let scale = cap * rng.random_range(0.05..=1.0);
                centered.iter().map(|v| v * scale).collect()
            }
        }
    };

    let masses = sets
        .iter()
        .zip(re.iter().zip(&im))
        .map(|(s, (r, i))| (*s, Complex::new(T::lit(*r), T::lit(*i))))
        .collect();
    Cbba::from_map(frame.clone(), masses)
}

fn pick_focal_sets<R: Rng + ?Sized>(frame: &Frame, rng: &mut R) -> Vec<FocalSet> {
    let universe: Vec<FocalSet> = match frame.focal_universe() {
        Ok(u) => u,
        Err(_) => {
            // frames too large to enumerate: draw raw masks
            let full = frame.full().bits();
            let k = rng.random_range(1..=2 * frame.len());
            let mut out: Vec<FocalSet> =
                (0..k).map(|_| FocalSet::from_bits(rng.random_range(1..=full))).collect();
            out.sort_unstable();
            out.dedup();
            return out;
        }
    };
    let max_k = universe.len().min(2 * frame.len() + 2);
    let k = rng.random_range(1..=max_k);
    let mut picked = rand::seq::index::sample(rng, universe.len(), k).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| universe[i]).collect()
}
