//! Belief entropies in bits.
//!
//! Classical measures take a real [`Bba`]; the complex measures take a
//! [`Cbba`]. [`measure`] dispatches on a [`Method`] for either kind, failing
//! with `InvalidDistribution` when a real-only measure meets complex masses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{CetError, Result};
use crate::frame::FocalSet;
use crate::mass::{Bba, Cbba};
use crate::scalar::{xlog2x, Real};
use crate::transform::{cpbt, fcbba, fractal_divisor};

/// Moduli of fractal masses below this count as zero.
pub const FRACTAL_ZERO: f64 = 1e-15;

/// Entropy in bits, tagged with the measure that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue<T> {
    pub value: T,
    pub method: Method,
}

/// `h(A)` catalog for [`generalized`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HModel {
    /// `1`
    Unit,
    /// `|A|`
    Cardinality,
    /// `2^|A| − 1`
    DengDenominator,
    /// `(2^|A| − 1)·e^{−(|A|−1)/n}`
    ZhouFactor,
    /// `(2^|A| − 1)·e^{−Σ_{B≠A} |A∩B| / (2^n − 1)}` over focal `B`
    CuiFactor,
}

impl HModel {
    pub const ALL: [HModel; 5] = [
        HModel::Unit,
        HModel::Cardinality,
        HModel::DengDenominator,
        HModel::ZhouFactor,
        HModel::CuiFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HModel::Unit => "unit",
            HModel::Cardinality => "cardinality",
            HModel::DengDenominator => "deng-denominator",
            HModel::ZhouFactor => "zhou-factor",
            HModel::CuiFactor => "cui-factor",
        }
    }
}

impl fmt::Display for HModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HModel {
    type Err = CetError;

    fn from_str(s: &str) -> Result<Self> {
        HModel::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CetError::UnknownModel(s.to_string()))
    }
}

/// Every measure this crate computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Shannon,
    WeightedHartley,
    Pal,
    Deng,
    Zhou,
    Cui,
    Fb,
    Generalized(HModel),
    ComplexDeng,
    Fcb,
    FcbDiscord,
    FcbNonspecificity,
}

impl Method {
    pub const ALL: [Method; 16] = [
        Method::Shannon,
        Method::WeightedHartley,
        Method::Pal,
        Method::Deng,
        Method::Zhou,
        Method::Cui,
        Method::Fb,
        Method::Generalized(HModel::Unit),
        Method::Generalized(HModel::Cardinality),
        Method::Generalized(HModel::DengDenominator),
        Method::Generalized(HModel::ZhouFactor),
        Method::Generalized(HModel::CuiFactor),
        Method::ComplexDeng,
        Method::Fcb,
        Method::FcbDiscord,
        Method::FcbNonspecificity,
    ];

    /// Whether the measure accepts complex masses.
    pub fn is_complex(self) -> bool {
        matches!(
            self,
            Method::Generalized(_) | Method::ComplexDeng | Method::Fcb | Method::FcbDiscord | Method::FcbNonspecificity
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Shannon => f.write_str("shannon"),
            Method::WeightedHartley => f.write_str("weighted-hartley"),
            Method::Pal => f.write_str("pal"),
            Method::Deng => f.write_str("deng"),
            Method::Zhou => f.write_str("zhou"),
            Method::Cui => f.write_str("cui"),
            Method::Fb => f.write_str("fb"),
            Method::Generalized(h) => write!(f, "generalized-{h}"),
            Method::ComplexDeng => f.write_str("complex-deng"),
            Method::Fcb => f.write_str("fcb"),
            Method::FcbDiscord => f.write_str("fcb-discord"),
            Method::FcbNonspecificity => f.write_str("fcb-nonspecificity"),
        }
    }
}

impl FromStr for Method {
    type Err = CetError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(model) = s.strip_prefix("generalized-") {
            return model.parse().map(Method::Generalized);
        }
        Method::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| CetError::UnknownMethod(s.to_string()))
    }
}

/// Evaluates `method` on `c`.
pub fn measure<T: Real>(c: &Cbba<T>, method: Method) -> Result<EntropyValue<T>> {
    let value = match method {
        Method::Shannon => {
            let m = Bba::try_from_cbba(c)?;
            if !c.is_bayesian() {
                return Err(CetError::InvalidDistribution(
                    "shannon needs all mass on singletons".into(),
                ));
            }
            entropy_bits(m.iter().map(|(_, p)| p))
        }
        Method::WeightedHartley => weighted_hartley(&Bba::try_from_cbba(c)?),
        Method::Pal => pal(&Bba::try_from_cbba(c)?),
        Method::Deng => deng(&Bba::try_from_cbba(c)?),
        Method::Zhou => zhou(&Bba::try_from_cbba(c)?),
        Method::Cui => cui(&Bba::try_from_cbba(c)?),
        Method::Fb => fb(&Bba::try_from_cbba(c)?)?,
        Method::Generalized(h) => generalized(c, h)?,
        Method::ComplexDeng => complex_deng(c),
        Method::Fcb => fcb(c)?,
        Method::FcbDiscord => fcb_discord(c)?,
        Method::FcbNonspecificity => fcb_nonspecificity(c)?,
    };
    Ok(EntropyValue { value, method })
}

/// `−Σ p log2 p` of an unnormalized-checked sequence.
fn entropy_bits<T: Real>(p: impl IntoIterator<Item = T>) -> T {
    -p.into_iter().map(xlog2x).sum::<T>()
}

/// Shannon entropy of a probability vector.
pub fn shannon<T: Real>(p: &[T]) -> Result<T> {
    let tol = T::lit(T::SUM_TOLERANCE);
    if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= T::zero())) {
        return Err(CetError::InvalidDistribution(format!("entry {x} is not a probability")));
    }
    let total: T = p.iter().copied().sum();
    if (total - T::one()).abs() > tol {
        return Err(CetError::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(entropy_bits(p.iter().copied()))
}

/// `Σ m(A) log2 |A|`.
pub fn weighted_hartley<T: Real>(m: &Bba<T>) -> T {
    m.iter().map(|(a, x)| x * T::from_count(a.cardinality()).log2()).sum()
}

/// `−Σ m(A) log2(m(A)/|A|)`.
pub fn pal<T: Real>(m: &Bba<T>) -> T {
    with_h(m, |a| T::from_count(a.cardinality()))
}

/// `−Σ m(A) log2(m(A)/(2^|A|−1))`.
pub fn deng<T: Real>(m: &Bba<T>) -> T {
    with_h(m, |a| fractal_divisor(a.cardinality()))
}

/// `−Σ m(A) log2(m(A)/(2^|A|−1) · e^{(|A|−1)/n})`.
pub fn zhou<T: Real>(m: &Bba<T>) -> T {
    let n = m.frame().len();
    with_h(m, |a| zhou_h(a, n))
}

/// `−Σ m(A) log2(m(A)/(2^|A|−1) · e^{Σ_{B≠A} |A∩B|/(2^n−1)})`, `B` over
/// focal elements.
pub fn cui<T: Real>(m: &Bba<T>) -> T {
    let focal: Vec<FocalSet> = m.iter().map(|(s, _)| s).collect();
    let n = m.frame().len();
    with_h(m, |a| cui_h(a, &focal, n))
}

fn with_h<T: Real>(m: &Bba<T>, h: impl Fn(FocalSet) -> T) -> T {
    m.iter()
        .filter(|(_, x)| *x > T::zero())
        .map(|(a, x)| -x * (x / h(a)).log2())
        .sum()
}

fn zhou_h<T: Real>(a: FocalSet, n: usize) -> T {
    let k = a.cardinality();
    fractal_divisor::<T>(k) * (-(T::from_count(k) - T::one()) / T::from_count(n)).exp()
}

fn cui_h<T: Real>(a: FocalSet, focal: &[FocalSet], n: usize) -> T {
    let overlap: usize = focal
        .iter()
        .filter(|b| **b != a)
        .map(|b| a.intersect(*b).cardinality())
        .sum();
    let scale = T::lit(2.0).powi(n as i32) - T::one();
    fractal_divisor::<T>(a.cardinality()) * (-T::from_count(overlap) / scale).exp()
}

/// FB entropy from the fractal rule evaluated directly over the power set.
pub fn fb<T: Real>(m: &Bba<T>) -> Result<T> {
    let focal: Vec<(FocalSet, T)> = m.iter().collect();
    let mut total = T::zero();
    for a in m.frame().power_set()? {
        let mf: T = focal
            .iter()
            .filter(|(b, _)| a.is_subset_of(*b))
            .map(|(b, x)| *x / fractal_divisor::<T>(b.cardinality()))
            .sum();
        total -= xlog2x(mf);
    }
    Ok(total)
}

/// `−Σ Com(A)·log2(Com(A)/h(A))` over the focal elements of `c`.
pub fn generalized<T: Real>(c: &Cbba<T>, model: HModel) -> Result<T> {
    let com = c.commitments()?;
    let focal: Vec<FocalSet> = com.keys().copied().collect();
    let n = c.frame().len();
    let h = |a: FocalSet| -> T {
        match model {
            HModel::Unit => T::one(),
            HModel::Cardinality => T::from_count(a.cardinality()),
            HModel::DengDenominator => fractal_divisor(a.cardinality()),
            HModel::ZhouFactor => zhou_h(a, n),
            HModel::CuiFactor => cui_h(a, &focal, n),
        }
    };
    Ok(com
        .iter()
        .filter(|(_, w)| **w > T::zero())
        .map(|(a, w)| -*w * (*w / h(*a)).log2())
        .sum())
}

/// `|−Σ |M(A)|·Ln(M(A)/(2^|A|−1))|` with the principal complex logarithm,
/// converted from nats to bits.
pub fn complex_deng<T: Real>(c: &Cbba<T>) -> T {
    let mut acc = Complex::<T>::default();
    for (a, z) in c.iter() {
        let m = z.norm();
        if m == T::zero() {
            continue;
        }
        acc -= (z / fractal_divisor::<T>(a.cardinality())).ln() * m;
    }
    acc.norm() / T::LN_2()
}

/// Normalized moduli of the fractal masses.
#[derive(Clone, Debug, PartialEq)]
pub struct ComF<T> {
    pub weights: BTreeMap<FocalSet, T>,
}

impl<T: Real> ComF<T> {
    pub fn get(&self, a: FocalSet) -> T {
        self.weights.get(&a).copied().unwrap_or_else(T::zero)
    }

    pub fn entropy(&self) -> T {
        entropy_bits(self.weights.values().copied())
    }
}

/// `Com_F(A) = |M_F(A)| / Σ_B |M_F(B)|`.
pub fn com_f<T: Real>(c: &Cbba<T>) -> Result<ComF<T>> {
    let floor = T::lit(FRACTAL_ZERO);
    let moduli: BTreeMap<FocalSet, T> = fcbba(c)?
        .iter()
        .map(|(a, z)| (a, z.norm()))
        .filter(|(_, r)| *r >= floor)
        .collect();
    let total: T = moduli.values().copied().sum();
    if total <= T::zero() {
        return Err(CetError::DegenerateMass);
    }
    Ok(ComF {
        weights: moduli.into_iter().map(|(a, r)| (a, r / total)).collect(),
    })
}

/// FCB entropy `−Σ Com_F log2 Com_F`.
pub fn fcb<T: Real>(c: &Cbba<T>) -> Result<T> {
    Ok(com_f(c)?.entropy())
}

/// `log2(2^n − 1)`.
pub fn fcb_max<T: Real>(n: usize) -> Result<T> {
    if n < 1 {
        return Err(CetError::InvalidFrame("a frame needs at least one element".into()));
    }
    Ok(fractal_divisor::<T>(n).log2())
}

/// Shannon entropy of the normalized pignistic moduli.
pub fn fcb_discord<T: Real>(c: &Cbba<T>) -> Result<T> {
    Ok(entropy_bits(cpbt(c).com()?))
}

/// `fcb − fcb_discord`.
pub fn fcb_nonspecificity<T: Real>(c: &Cbba<T>) -> Result<T> {
    Ok(decomposition(c)?.nonspecificity)
}

/// FCB entropy split into its two parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition<T> {
    pub total: T,
    pub discord: T,
    pub nonspecificity: T,
}

pub fn decomposition<T: Real>(c: &Cbba<T>) -> Result<Decomposition<T>> {
    let total = fcb(c)?;
    let discord = fcb_discord(c)?;
    Ok(Decomposition {
        total,
        discord,
        nonspecificity: total - discord,
    })
}
