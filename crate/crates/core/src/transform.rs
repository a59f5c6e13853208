//! CBBA transformations: pignistic projection and its iterative form, the
//! fractal redistribution, exponential negation, the complex combination
//! rule and joint-frame products.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{CetError, Result};
use crate::frame::{FocalSet, Frame, MAX_ENUMERABLE};
use crate::mass::Cbba;
use crate::scalar::Real;

/// Complex pignistic values, one per frame element.
#[derive(Clone, Debug, PartialEq)]
pub struct Pignistic<T> {
    frame: Frame,
    values: Vec<Complex<T>>,
}

impl<T: Real> Pignistic<T> {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, element: usize) -> Complex<T> {
        self.values[element]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn total(&self) -> Complex<T> {
        self.values.iter().fold(Complex::default(), |acc, z| acc + z)
    }

    /// `|CBet(e)| / Σ |CBet|`.
    pub fn com(&self) -> Result<Vec<T>> {
        let denom: T = self.values.iter().map(|z| z.norm()).sum();
        if denom <= T::zero() {
            return Err(CetError::DegenerateMass);
        }
        Ok(self.values.iter().map(|z| z.norm() / denom).collect())
    }
}

/// `CBet(e) = Σ_{B ∋ e} M(B) / |B|`.
pub fn cpbt<T: Real>(c: &Cbba<T>) -> Pignistic<T> {
    let n = c.frame().len();
    let mut values = vec![Complex::default(); n];
    for (set, z) in c.iter() {
        let share = z / T::from_count(set.cardinality());
        for e in set.elements() {
            values[e] += share;
        }
    }
    Pignistic {
        frame: c.frame().clone(),
        values,
    }
}

/// Repeated splitting at speed `p`. Each step every multi-element focal set
/// `A` passes `M(A)/p` to each of its singletons and keeps `(1 − |A|/p)·M(A)`.
///
/// The returned sequence has `steps + 1` entries, the input first.
pub fn cpbt_iterate<T: Real>(c: &Cbba<T>, p: T, steps: usize) -> Result<Vec<Cbba<T>>> {
    let max_card = c.max_cardinality().max(1);
    if !(p.is_finite() && p > T::from_count(max_card)) {
        return Err(CetError::InvalidSpeed {
            p: p.as_f64(),
            max_card,
        });
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(c.clone());
    for _ in 0..steps {
        let prev = out.last().expect("nonempty");
        let mut next: BTreeMap<FocalSet, Complex<T>> = prev.iter().collect();
        for (set, z) in prev.iter().filter(|(s, _)| s.cardinality() > 1) {
            let share = z / p;
            for e in set.elements() {
                *next.entry(FocalSet::singleton(e)).or_default() += share;
            }
            let keep = T::one() - T::from_count(set.cardinality()) / p;
            next.insert(set, z * keep);
        }
        out.push(Cbba::from_map(c.frame().clone(), next));
    }
    Ok(out)
}

/// Fractal-redistributed masses `M_F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fcbba<T> {
    frame: Frame,
    masses: BTreeMap<FocalSet, Complex<T>>,
}

impl<T: Real> Fcbba<T> {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mass(&self, set: FocalSet) -> Complex<T> {
        self.masses.get(&set).copied().unwrap_or_default()
    }

    /// Nonzero values in ascending bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (FocalSet, Complex<T>)> + '_ {
        self.masses.iter().map(|(s, z)| (*s, *z))
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

    /// Reinterprets the values as a CBBA (they satisfy the sum rule).
    pub fn to_cbba(&self) -> Cbba<T> {
        Cbba::from_map(self.frame.clone(), self.masses.clone())
    }
}

/// `M_F(A) = Σ_{B ⊇ A} M(B) / (2^|B| − 1)`.
///
/// On a product frame `X × Y` only product sets take part and the divisor of
/// `B × C` is `(2^|B| − 1)(2^|C| − 1)`, so `M_F` factorizes over the joint
/// frame.
pub fn fcbba<T: Real>(c: &Cbba<T>) -> Result<Fcbba<T>> {
    let frame = c.frame();
    let masses = match frame.factors() {
        None => {
            require_bits(frame.len())?;
            let mut dense = vec![Complex::<T>::default(); 1usize << frame.len()];
            for (set, z) in c.iter() {
                dense[set.bits() as usize] = z / fractal_divisor::<T>(set.cardinality());
            }
            superset_zeta(&mut dense, frame.len());
            collect_nonzero(dense.into_iter().enumerate().skip(1).map(|(i, z)| (FocalSet::from_bits(i as u32), z)))
        }
        Some((x, y)) => {
            let (nx, ny) = (x.len(), y.len());
            require_bits(nx + ny)?;
            // packed index: row set in the low bits, column set above it
            let mut dense = vec![Complex::<T>::default(); 1usize << (nx + ny)];
            for (set, z) in c.iter() {
                let (b, col) = frame.split_product(set).ok_or_else(|| {
                    CetError::Invalid(crate::mass::Violation::NonProductFocal {
                        set: frame.describe(set),
                    })
                })?;
                let idx = (b.bits() | (col.bits() << nx)) as usize;
                dense[idx] = z
                    / (fractal_divisor::<T>(b.cardinality()) * fractal_divisor::<T>(col.cardinality()));
            }
            superset_zeta(&mut dense, nx + ny);
            let row_mask = (1usize << nx) - 1;
            collect_nonzero(dense.into_iter().enumerate().filter_map(|(i, z)| {
                let b = FocalSet::from_bits((i & row_mask) as u32);
                let col = FocalSet::from_bits((i >> nx) as u32);
                (!b.is_empty() && !col.is_empty()).then(|| (frame.product_set(b, col), z))
            }))
        }
    };
    Ok(Fcbba {
        frame: frame.clone(),
        masses,
    })
}

fn require_bits(bits: usize) -> Result<()> {
    if bits > MAX_ENUMERABLE {
        Err(CetError::FrameTooLarge {
            size: bits,
            limit: MAX_ENUMERABLE,
        })
    } else {
        Ok(())
    }
}

/// `2^k − 1`.
pub(crate) fn fractal_divisor<T: Real>(k: usize) -> T {
    T::lit(2.0).powi(k as i32) - T::one()
}

/// In place: `a[s] ← Σ_{t ⊇ s} a[t]`.
fn superset_zeta<T: Real>(a: &mut [Complex<T>], bits: usize) {
    for i in 0..bits {
        let bit = 1usize << i;
        for s in 0..a.len() {
            if s & bit == 0 {
                let hi = a[s | bit];
                a[s] += hi;
            }
        }
    }
}

fn collect_nonzero<T: Real>(
    it: impl Iterator<Item = (FocalSet, Complex<T>)>,
) -> BTreeMap<FocalSet, Complex<T>> {
    it.filter(|(_, z)| z.re != T::zero() || z.im != T::zero()).collect()
}

/// Options for [`exp_negation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NegationOptions {
    /// Let `B = ∅` take part in the sums.
    pub include_empty: bool,
}

impl Default for NegationOptions {
    fn default() -> Self {
        NegationOptions { include_empty: true }
    }
}

/// Exponential negation
/// `M̄(A) ∝ Σ_{B ≠ Θ} exp(−M(B)·|A ∖ B|)`, normalized over nonempty `A`.
///
/// A product frame is flattened: the negation is not product-closed.
pub fn exp_negation<T: Real>(c: &Cbba<T>, opts: NegationOptions) -> Result<Cbba<T>> {
    let frame = c.frame().flatten();
    require_bits(frame.len())?;
    let full = frame.full();
    let sources: Vec<(FocalSet, Complex<T>)> = c.iter().filter(|(s, _)| *s != full && !s.is_empty()).collect();
    // every other B ≠ Θ has zero mass and contributes exp(0) = 1
    let subsets_below_full = (1usize << frame.len()) - 1;
    let candidates = if opts.include_empty {
        subsets_below_full
    } else {
        subsets_below_full - 1
    };
    let zeros = T::from_count(candidates - sources.len());

    let mut raw = BTreeMap::new();
    let mut denom = Complex::<T>::default();
    for a in frame.power_set()? {
        let mut acc = Complex::new(zeros, T::zero());
        for (b, z) in &sources {
            let k = T::from_count(a.difference(*b).cardinality());
            acc += (-z * k).exp();
        }
        denom += acc;
        raw.insert(a, acc);
    }
    if denom.norm() == T::zero() {
        return Err(CetError::DegenerateMass);
    }
    for z in raw.values_mut() {
        *z /= denom;
    }
    Ok(Cbba::from_map(frame, raw))
}

/// Threshold on `|1 − K|` below which combination fails.
pub const TOTAL_CONFLICT_THRESHOLD: f64 = 1e-12;

/// Complex combination: `M(C) = Σ_{A∩B=C} M_a(A)·M_b(B) / (1 − K)`, with
/// `K = Σ_{A∩B=∅} M_a(A)·M_b(B)`. Returns the combined CBBA and `K`.
pub fn combine<T: Real>(a: &Cbba<T>, b: &Cbba<T>) -> Result<(Cbba<T>, Complex<T>)> {
    if a.frame() != b.frame() {
        return Err(CetError::FrameMismatch);
    }
    let mut acc: BTreeMap<FocalSet, Complex<T>> = BTreeMap::new();
    let mut k = Complex::<T>::default();
    for (sa, za) in a.iter() {
        for (sb, zb) in b.iter() {
            let meet = sa.intersect(sb);
            let prod = za * zb;
            if meet.is_empty() {
                k += prod;
            } else {
                *acc.entry(meet).or_default() += prod;
            }
        }
    }
    let norm = Complex::new(T::one(), T::zero()) - k;
    if norm.norm() < T::lit(TOTAL_CONFLICT_THRESHOLD) {
        return Err(CetError::TotalConflict {
            re: k.re.as_f64(),
            im: k.im.as_f64(),
        });
    }
    for z in acc.values_mut() {
        *z /= norm;
    }
    Ok((Cbba::from_map(a.frame().clone(), acc), k))
}

/// Joint CBBA on `X × Y`: `M(B × C) = M_x(B)·M_y(C)`.
pub fn joint<T: Real>(cx: &Cbba<T>, cy: &Cbba<T>) -> Result<Cbba<T>> {
    let frame = Frame::product(cx.frame(), cy.frame())?;
    let mut masses = BTreeMap::new();
    for (b, zb) in cx.iter() {
        for (c, zc) in cy.iter() {
            masses.insert(frame.product_set(b, c), zb * zc);
        }
    }
    Ok(Cbba::from_map(frame, masses))
}

/// Fractal redistribution of [`joint`].
pub fn joint_fcbba<T: Real>(cx: &Cbba<T>, cy: &Cbba<T>) -> Result<Fcbba<T>> {
    fcbba(&joint(cx, cy)?)
}

/// One fold of a [`FusionState`].
#[derive(Clone, Debug, PartialEq)]
pub struct FusionStep<T> {
    pub step: usize,
    pub source: usize,
    pub conflict: Complex<T>,
}

/// Running left fold of [`combine`].
#[derive(Clone, Debug, PartialEq)]
pub struct FusionState<T> {
    current: Cbba<T>,
    history: Vec<FusionStep<T>>,
}

impl<T: Real> FusionState<T> {
    pub fn new(first: Cbba<T>) -> Self {
        FusionState {
            current: first,
            history: Vec::new(),
        }
    }

    pub fn current(&self) -> &Cbba<T> {
        &self.current
    }

    pub fn history(&self) -> &[FusionStep<T>] {
        &self.history
    }

    /// Combines `next` into the state; on error the state is unchanged.
    pub fn fold(&mut self, next: &Cbba<T>, source: usize) -> Result<Complex<T>> {
        let (fused, k) = combine(&self.current, next)?;
        self.current = fused;
        self.history.push(FusionStep {
            step: self.history.len() + 1,
            source,
            conflict: k,
        });
        Ok(k)
    }
}
