//! Frames of discernment and bitmask-encoded focal sets.
//!
//! A [`Frame`] is an ordered list of distinct labels; a [`FocalSet`] is a
//! bitmask over the frame's positions. Iteration over subsets is always in
//! ascending bitmask order so that every output is reproducible.

use std::fmt;
use std::sync::Arc;

use crate::error::{CetError, Result};

/// Largest frame the bitmask encoding accepts.
pub const MAX_FRAME: usize = 24;
/// Largest frame for which the full power set may be enumerated.
pub const MAX_ENUMERABLE: usize = 16;

/// Subset of a frame, bit `i` set when element `i` belongs to it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FocalSet(u32);

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet(0);

    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        FocalSet(bits)
    }

    #[inline]
    pub fn singleton(index: usize) -> Self {
        debug_assert!(index < MAX_FRAME);
        FocalSet(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        FocalSet(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    #[inline]
    pub const fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    #[inline]
    pub const fn is_subset_of(self, other: FocalSet) -> bool {
        self.0 & other.0 == self.0
    }

    #[inline]
    pub const fn intersect(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 & other.0)
    }

    #[inline]
    pub const fn union(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 | other.0)
    }

    #[inline]
    pub const fn difference(self, other: FocalSet) -> FocalSet {
        FocalSet(self.0 & !other.0)
    }

    /// Member positions in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// Index of the single member, if this is a singleton.
    pub fn singleton_index(self) -> Option<usize> {
        self.is_singleton().then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Debug for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FocalSet({:#b})", self.0)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct FrameInner {
    labels: Vec<String>,
    product: Option<(Frame, Frame)>,
}

/// Ordered, labeled, finite frame of discernment. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Frame {
    inner: Arc<FrameInner>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for Frame {}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        Self::check_labels(&labels)?;
        Ok(Frame {
            inner: Arc::new(FrameInner {
                labels,
                product: None,
            }),
        })
    }

    /// Frame `prefix1 .. prefixN`.
    pub fn with_size(n: usize, prefix: &str) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    fn check_labels(labels: &[String]) -> Result<()> {
        if labels.is_empty() {
            return Err(CetError::InvalidFrame("a frame needs at least one element".into()));
        }
        if labels.len() > MAX_FRAME {
            return Err(CetError::FrameTooLarge {
                size: labels.len(),
                limit: MAX_FRAME,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(CetError::InvalidFrame("labels must be non-empty".into()));
            }
            if labels[..i].contains(label) {
                return Err(CetError::DuplicateLabel(label.clone()));
            }
        }
        Ok(())
    }

    /// Cartesian product frame with pair labels `(x,y)` in row-major order:
    /// element `(i, j)` sits at position `i * |y| + j`.
    pub fn product(x: &Frame, y: &Frame) -> Result<Self> {
        let size = x.len() * y.len();
        if size > MAX_FRAME {
            return Err(CetError::FrameTooLarge {
                size,
                limit: MAX_FRAME,
            });
        }
        let labels = x
            .labels()
            .iter()
            .flat_map(|a| y.labels().iter().map(move |b| format!("({a},{b})")))
            .collect::<Vec<_>>();
        Self::check_labels(&labels)?;
        Ok(Frame {
            inner: Arc::new(FrameInner {
                labels,
                product: Some((x.clone(), y.clone())),
            }),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.inner.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.inner.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.inner.labels.iter().position(|l| l == label)
    }

    /// Factor frames when this frame was built by [`Frame::product`].
    pub fn factors(&self) -> Option<(&Frame, &Frame)> {
        self.inner.product.as_ref().map(|(x, y)| (x, y))
    }

    pub fn is_product(&self) -> bool {
        self.inner.product.is_some()
    }

    /// Same labels, product structure dropped.
    pub fn flatten(&self) -> Frame {
        if !self.is_product() {
            return self.clone();
        }
        Frame {
            inner: Arc::new(FrameInner {
                labels: self.inner.labels.clone(),
                product: None,
            }),
        }
    }

    #[inline]
    pub fn full(&self) -> FocalSet {
        FocalSet(((1u64 << self.len()) - 1) as u32)
    }

    pub fn contains_set(&self, s: FocalSet) -> bool {
        s.is_subset_of(self.full())
    }

    pub fn check(&self, s: FocalSet) -> Result<()> {
        if self.contains_set(s) {
            Ok(())
        } else {
            Err(CetError::InvalidFocal {
                bits: s.bits(),
                size: self.len(),
            })
        }
    }

    pub fn singleton(&self, label: &str) -> Result<FocalSet> {
        self.index_of(label)
            .map(FocalSet::singleton)
            .ok_or_else(|| CetError::UnknownLabel(label.to_owned()))
    }

    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<FocalSet> {
        labels.iter().try_fold(FocalSet::EMPTY, |acc, l| {
            Ok(acc.union(self.singleton(l.as_ref())?))
        })
    }

    pub fn labels_of(&self, s: FocalSet) -> Vec<&str> {
        s.elements().map(|i| self.label(i)).collect()
    }

    /// `{e1,e3}` style rendering.
    pub fn describe(&self, s: FocalSet) -> String {
        format!("{{{}}}", self.labels_of(s).join(","))
    }

    pub fn complement(&self, s: FocalSet) -> FocalSet {
        self.full().difference(s)
    }

    fn require_enumerable(&self) -> Result<()> {
        if self.len() > MAX_ENUMERABLE {
            Err(CetError::FrameTooLarge {
                size: self.len(),
                limit: MAX_ENUMERABLE,
            })
        } else {
            Ok(())
        }
    }

    /// Every nonempty subset, ascending.
    pub fn power_set(&self) -> Result<impl Iterator<Item = FocalSet>> {
        self.require_enumerable()?;
        Ok((1..=self.full().bits()).map(FocalSet))
    }

    /// Sets that can carry mass: every nonempty subset, or for product
    /// frames only the product-structured sets `B × C`.
    pub fn focal_universe(&self) -> Result<Vec<FocalSet>> {
        match self.factors() {
            None => Ok(self.power_set()?.collect()),
            Some((x, y)) => {
                x.require_enumerable()?;
                y.require_enumerable()?;
                let mut sets = Vec::with_capacity(x.full().bits() as usize * y.full().bits() as usize);
                for b in 1..=x.full().bits() {
                    for c in 1..=y.full().bits() {
                        sets.push(self.product_set(FocalSet(b), FocalSet(c)));
                    }
                }
                sets.sort_unstable();
                Ok(sets)
            }
        }
    }

    /// Every `B` with `s ⊂ B ⊆ frame`, ascending.
    pub fn strict_supersets(&self, s: FocalSet) -> Result<Vec<FocalSet>> {
        if s.is_empty() {
            return Err(CetError::EmptyFocal);
        }
        self.check(s)?;
        let free = self.complement(s).bits();
        let mut out = Vec::with_capacity((1usize << free.count_ones()) - 1);
        let mut t = free;
        while t != 0 {
            out.push(FocalSet(s.bits() | t));
            t = (t - 1) & free;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `B × C` on a product frame. Panics if this frame is not a product.
    pub fn product_set(&self, b: FocalSet, c: FocalSet) -> FocalSet {
        let (_, y) = self.factors().expect("product frame");
        let cols = y.len();
        let mut bits = 0u32;
        for i in b.elements() {
            for j in c.elements() {
                bits |= 1 << (i * cols + j);
            }
        }
        FocalSet(bits)
    }

    /// Inverse of [`Frame::product_set`]: `Some((B, C))` when `s = B × C`.
    pub fn split_product(&self, s: FocalSet) -> Option<(FocalSet, FocalSet)> {
        let (_, y) = self.factors()?;
        if s.is_empty() {
            return None;
        }
        let cols = y.len();
        let mut rows = FocalSet::EMPTY;
        let mut colset = FocalSet::EMPTY;
        for k in s.elements() {
            rows = rows.union(FocalSet::singleton(k / cols));
            colset = colset.union(FocalSet::singleton(k % cols));
        }
        (self.product_set(rows, colset) == s).then_some((rows, colset))
    }
}
