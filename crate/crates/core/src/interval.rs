//! Exact algebra on finite unions of half-open intervals `(lo, hi]` in the
//! unit interval, and of half-open rectangles in the unit square.
//!
//! Endpoints are compared exactly; no tolerance is applied anywhere.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Half-open interval `(lo, hi]` with `0 <= lo < hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::invalid(alloc::format!(
                "({lo}, {hi}] is not a nonempty interval within [0, 1]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    /// `(lo, hi]` intersected with `(0, 1]`, or `None` when that is empty.
    /// Raw endpoints may lie outside the unit interval.
    pub fn clamped(lo: f64, hi: f64) -> Option<Self> {
        let lo = lo.max(0.0);
        let hi = hi.min(1.0);
        (lo < hi).then_some(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, tau: f64) -> bool {
        self.lo < tau && tau <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// Normalized finite union of half-open intervals: sorted, disjoint and with
/// touching pieces `(a, b] ∪ (b, c]` merged into `(a, c]`.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuantileSet {
    intervals: Vec<Interval>,
}

impl QuantileSet {
    pub fn empty() -> Self {
        QuantileSet { intervals: Vec::new() }
    }

    pub fn from_interval(iv: Interval) -> Self {
        QuantileSet { intervals: alloc::vec![iv] }
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut s = QuantileSet { intervals: intervals.into_iter().collect() };
        s.normalize();
        s
    }

    /// Validating constructor from raw `(lo, hi)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let ivs = pairs.iter().map(|&(a, b)| Interval::new(a, b)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_intervals(ivs))
    }

    fn normalize(&mut self) {
        self.intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(self.intervals.len());
        for iv in self.intervals.drain(..) {
            match out.last_mut() {
                // (a,b] and (c,d] with c <= b overlap or touch
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        self.intervals = out;
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure of the set.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn union(&self, other: &QuantileSet) -> QuantileSet {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
    }

    pub fn intersection(&self, other: &QuantileSet) -> QuantileSet {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if lo < hi {
                    out.push(Interval { lo, hi });
                }
            }
        }
        Self::from_intervals(out)
    }

    /// Half-open membership `lo < tau <= hi`.
    pub fn contains(&self, tau: f64) -> bool {
        // the first interval with hi >= tau is the only candidate
        let idx = self.intervals.partition_point(|iv| iv.hi < tau);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(tau))
    }

    /// Whether every point of `self` lies in `other`. Since `other` is
    /// normalized, each interval of `self` must sit inside one of its pieces.
    pub fn is_subset_of(&self, other: &QuantileSet) -> bool {
        self.intervals
            .iter()
            .all(|a| other.intervals.iter().any(|b| a.is_subset_of(b)))
    }

    /// Renders with a fixed number of decimals, e.g. `(0.016, 0.029] ∪ …`.
    pub fn display(&self, decimals: usize) -> DisplaySet<'_> {
        DisplaySet { set: self, decimals, brackets: ("(", "]") }
    }
}

/// Formatting adaptor returned by [`QuantileSet::display`].
pub struct DisplaySet<'a> {
    set: &'a QuantileSet,
    decimals: usize,
    brackets: (&'static str, &'static str),
}

impl DisplaySet<'_> {
    /// Use closed-bracket notation `[lo, hi]` for rounded output.
    pub fn closed(mut self) -> Self {
        self.brackets = ("[", "]");
        self
    }
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.set.is_empty() {
            return f.write_str("∅");
        }
        let d = self.decimals;
        for (i, iv) in self.set.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{}{:.d$}, {:.d$}{}", self.brackets.0, iv.lo, iv.hi, self.brackets.1)?;
        }
        Ok(())
    }
}

impl fmt::Display for QuantileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display(3).fmt(f)
    }
}

/// Half-open rectangle `(x.lo, x.hi] × (y.lo, y.hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn contains(&self, t1: f64, t2: f64) -> bool {
        self.x.contains(t1) && self.y.contains(t2)
    }

    pub fn is_subset_of(&self, other: &Rect) -> bool {
        self.x.is_subset_of(&other.x) && self.y.is_subset_of(&other.y)
    }
}

/// Finite union of rectangles, with no member contained in another.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RectSet {
    rects: Vec<Rect>,
}

impl RectSet {
    pub fn empty() -> Self {
        RectSet { rects: Vec::new() }
    }

    pub fn from_rects(rects: impl IntoIterator<Item = Rect>) -> Self {
        let mut all: Vec<Rect> = rects.into_iter().collect();
        all.sort_by(|a, b| {
            a.x.lo
                .total_cmp(&b.x.lo)
                .then(a.x.hi.total_cmp(&b.x.hi))
                .then(a.y.lo.total_cmp(&b.y.lo))
                .then(a.y.hi.total_cmp(&b.y.hi))
        });
        all.dedup();
        let keep: Vec<Rect> = all
            .iter()
            .enumerate()
            .filter(|(i, r)| !all.iter().enumerate().any(|(k, o)| k != *i && r.is_subset_of(o)))
            .map(|(_, r)| *r)
            .collect();
        RectSet { rects: keep }
    }

    /// Cartesian product of two quantile sets.
    pub fn product(a: &QuantileSet, b: &QuantileSet) -> Self {
        let rects = a
            .intervals()
            .iter()
            .flat_map(|x| b.intervals().iter().map(move |y| Rect { x: *x, y: *y }));
        Self::from_rects(rects)
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn contains(&self, t1: f64, t2: f64) -> bool {
        self.rects.iter().any(|r| r.contains(t1, t2))
    }

    pub fn union(&self, other: &RectSet) -> RectSet {
        Self::from_rects(self.rects.iter().chain(&other.rects).copied())
    }

    /// Exact containment of unions of rectangles.
    ///
    /// Each rectangle of `self` is cut along every endpoint of `other` into
    /// elementary cells; a cell is covered iff its upper-right corner (which
    /// belongs to the half-open cell) lies in `other`.
    pub fn is_subset_of(&self, other: &RectSet) -> bool {
        self.rects.iter().all(|r| {
            if other.rects.iter().any(|o| r.is_subset_of(o)) {
                return true;
            }
            let xs = cuts(r.x, other.rects.iter().map(|o| o.x));
            let ys = cuts(r.y, other.rects.iter().map(|o| o.y));
            xs.windows(2).all(|wx| ys.windows(2).all(|wy| other.contains(wx[1], wy[1])))
        })
    }
}

fn cuts(span: Interval, others: impl Iterator<Item = Interval>) -> Vec<f64> {
    let mut v = alloc::vec![span.lo, span.hi];
    for o in others {
        for e in [o.lo, o.hi] {
            if span.lo < e && e < span.hi {
                v.push(e);
            }
        }
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}
