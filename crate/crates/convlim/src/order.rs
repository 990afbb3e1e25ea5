//! Finite linearly ordered time sets and interval partitions.
//!
//! A [`TimeSet`] is a finite linearly ordered set of opaque labels; the order
//! is the declaration order, not any lexicographic order on the labels. A
//! [`Partition`] is a strictly increasing selection of time points; the family
//! of partitions of a fixed interval `[s,t]` containing both endpoints forms
//! the poset `K(s,t)` under inclusion, and the family of all selections of
//! size >= 2 forms the global poset `K`.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// A finite linearly ordered set of time labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimeSet {
    labels: Vec<String>,
}

impl TimeSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>, Error> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::Order("a time set needs at least 2 labels".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::Order(format!("duplicate time label {a:?}")));
            }
        }
        Ok(Arc::new(TimeSet { labels }))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Integer value of each label, for systems generated by convolution
    /// powers where the gap `t - s` is meaningful.
    pub fn integer_positions(&self) -> Result<Vec<i64>, Error> {
        let mut out = Vec::with_capacity(self.labels.len());
        for l in &self.labels {
            let v: i64 = l
                .parse()
                .map_err(|_| Error::Order(format!("label {l:?} is not an integer")))?;
            out.push(v);
        }
        for w in out.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Order("integer labels must be strictly increasing".into()));
            }
        }
        Ok(out)
    }
}

/// A finite partition of an interval: a strictly increasing sequence of time
/// indices into one [`TimeSet`], with at least two points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    times: Arc<TimeSet>,
    points: Vec<usize>,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.times.label(p))?;
        }
        write!(f, "}}")
    }
}

impl Partition {
    pub fn new(times: &Arc<TimeSet>, points: Vec<usize>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::Order("a partition needs at least 2 points".into()));
        }
        for w in points.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Order("partition points must be strictly increasing".into()));
            }
        }
        if *points.last().unwrap() >= times.len() {
            return Err(Error::Order("partition point out of range".into()));
        }
        Ok(Partition {
            times: Arc::clone(times),
            points,
        })
    }

    pub fn from_labels(times: &Arc<TimeSet>, labels: &[&str]) -> Result<Self, Error> {
        let points = labels
            .iter()
            .map(|l| {
                times
                    .index_of(l)
                    .ok_or_else(|| Error::Order(format!("unknown time label {l:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(times, points)
    }

    pub fn times(&self) -> &Arc<TimeSet> {
        &self.times
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn first(&self) -> usize {
        self.points[0]
    }

    pub fn last(&self) -> usize {
        *self.points.last().unwrap()
    }

    pub fn window(&self) -> PairWindow {
        PairWindow::new(self.first(), self.last())
    }

    pub fn is_trivial(&self) -> bool {
        self.points.len() == 2
    }

    /// Adjacent cells `(p_k, p_{k+1})` of the partition, in order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    fn same_times(&self, other: &Partition) -> Result<(), Error> {
        if !Arc::ptr_eq(&self.times, &other.times) && self.times != other.times {
            return Err(Error::Order("partitions over different time sets".into()));
        }
        Ok(())
    }

    /// Whether `other` refines `self` within the same window: same endpoints
    /// and `self`'s points are a subset of `other`'s.
    pub fn refines(&self, other: &Partition) -> Result<bool, Error> {
        self.same_times(other)?;
        Ok(self.window() == other.window() && self.subset_of(other))
    }

    /// Subset comparison as point sets, regardless of endpoints.
    pub fn subset_of(&self, other: &Partition) -> bool {
        let mut it = other.points.iter();
        self.points.iter().all(|p| it.any(|q| q == p))
    }

    /// The per-cell blocks of a refinement `J` of `self`: block `k` collects
    /// the points of `J` between `p_k` and `p_{k+1}` inclusive.
    pub fn decompose_blocks(&self, refinement: &Partition) -> Result<Vec<Partition>, Error> {
        if !self.refines(refinement)? {
            return Err(Error::Order(format!(
                "{refinement} does not refine {self} within the same window"
            )));
        }
        let mut blocks = Vec::with_capacity(self.points.len() - 1);
        for (lo, hi) in self.cells() {
            let pts: Vec<usize> = refinement
                .points
                .iter()
                .copied()
                .filter(|&p| lo <= p && p <= hi)
                .collect();
            blocks.push(Partition::new(&self.times, pts)?);
        }
        Ok(blocks)
    }

    /// Splits a global refinement `J` of `self` into the left overhang, the
    /// window part, and the right overhang. The window part refines `self`
    /// and overlaps the overhangs exactly at the endpoints of `self`.
    pub fn decompose_lcr(&self, refinement: &Partition) -> Result<LcrDecomposition, Error> {
        self.same_times(refinement)?;
        if !self.subset_of(refinement) {
            return Err(Error::Order(format!("{self} is not a subset of {refinement}")));
        }
        let (s, t) = (self.first(), self.last());
        let left: Vec<usize> = refinement.points.iter().copied().filter(|&p| p <= s).collect();
        let right: Vec<usize> = refinement.points.iter().copied().filter(|&p| p >= t).collect();
        let window: Vec<usize> = refinement
            .points
            .iter()
            .copied()
            .filter(|&p| s <= p && p <= t)
            .collect();
        Ok(LcrDecomposition {
            left,
            window: Partition::new(&self.times, window)?,
            right,
        })
    }
}

/// Result of [`Partition::decompose_lcr`]: `J = left ∪ window ∪ right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcrDecomposition {
    pub left: Vec<usize>,
    pub window: Partition,
    pub right: Vec<usize>,
}

/// An ordered pair of time indices `s <= t`, i.e. an interval window.
/// Windows are ordered by reverse inclusion of intervals: `(s,t) <= (u,v)`
/// iff `u <= s <= t <= v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairWindow {
    pub s: usize,
    pub t: usize,
}

impl PairWindow {
    pub fn new(s: usize, t: usize) -> Self {
        assert!(s <= t, "window endpoints out of order");
        PairWindow { s, t }
    }

    pub fn contains(&self, other: &PairWindow) -> bool {
        self.s <= other.s && other.t <= self.t
    }

    pub fn is_degenerate(&self) -> bool {
        self.s == self.t
    }
}

impl fmt::Display for PairWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

/// All partitions of `[s,t]` containing both endpoints, coarsest first in
/// subset-mask order; the last element is the full grid (the maximum of the
/// poset).
pub fn enumerate_window(times: &Arc<TimeSet>, s: usize, t: usize) -> Vec<Partition> {
    assert!(s < t, "window needs s < t");
    let interior: Vec<usize> = (s + 1..t).collect();
    let n = interior.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        let mut pts = vec![s];
        for (bit, &p) in interior.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                pts.push(p);
            }
        }
        pts.push(t);
        out.push(Partition::new(times, pts).expect("enumerated points are valid"));
    }
    out.sort_by_key(|p| p.points().len());
    out
}

/// All subsets of the time set of size >= 2, i.e. the global poset `K`.
/// The last element is the whole time set (the maximum).
pub fn enumerate_global(times: &Arc<TimeSet>) -> Vec<Partition> {
    let n = times.len();
    let mut out = Vec::new();
    for mask in 0u64..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let pts: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        out.push(Partition::new(times, pts).expect("enumerated points are valid"));
    }
    out.sort_by_key(|p| p.points().len());
    out
}

/// The full grid over a window: every time point in `[s,t]`.
pub fn full_grid(times: &Arc<TimeSet>, s: usize, t: usize) -> Partition {
    Partition::new(times, (s..=t).collect()).expect("grid points are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(n: usize) -> Arc<TimeSet> {
        TimeSet::new((0..n).map(|i| i.to_string())).unwrap()
    }

    fn part(times: &Arc<TimeSet>, pts: &[usize]) -> Partition {
        Partition::new(times, pts.to_vec()).unwrap()
    }

    #[test]
    fn timeset_rejects_duplicates_and_singletons() {
        assert!(TimeSet::new(["a", "b", "a"]).is_err());
        assert!(TimeSet::new(["a"]).is_err());
    }

    #[test]
    fn refines_examples() {
        let t = ts(4);
        assert!(part(&t, &[0, 3]).refines(&part(&t, &[0, 1, 3])).unwrap());
        assert!(part(&t, &[0, 3]).refines(&part(&t, &[0, 3])).unwrap());
        assert!(!part(&t, &[0, 2]).refines(&part(&t, &[0, 1, 3])).unwrap());
    }

    #[test]
    fn refines_rejects_mismatched_timesets() {
        let t1 = ts(4);
        let t2 = TimeSet::new(["a", "b", "c", "d"]).unwrap();
        assert!(part(&t1, &[0, 3]).refines(&part(&t2, &[0, 3])).is_err());
    }

    #[test]
    fn decompose_blocks_examples() {
        let t = ts(4);
        let blocks = part(&t, &[0, 2, 3])
            .decompose_blocks(&part(&t, &[0, 1, 2, 3]))
            .unwrap();
        assert_eq!(blocks, vec![part(&t, &[0, 1, 2]), part(&t, &[2, 3])]);

        let blocks = part(&t, &[0, 3])
            .decompose_blocks(&part(&t, &[0, 1, 2, 3]))
            .unwrap();
        assert_eq!(blocks, vec![part(&t, &[0, 1, 2, 3])]);

        let t2 = ts(2);
        let blocks = part(&t2, &[0, 1]).decompose_blocks(&part(&t2, &[0, 1])).unwrap();
        assert_eq!(blocks, vec![part(&t2, &[0, 1])]);
    }

    #[test]
    fn decompose_lcr_examples() {
        let t = ts(4);
        let d = part(&t, &[1, 2]).decompose_lcr(&part(&t, &[0, 1, 2, 3])).unwrap();
        assert_eq!(d.left, vec![0, 1]);
        assert_eq!(d.window, part(&t, &[1, 2]));
        assert_eq!(d.right, vec![2, 3]);

        let d = part(&t, &[0, 3]).decompose_lcr(&part(&t, &[0, 1, 2, 3])).unwrap();
        assert_eq!(d.left, vec![0]);
        assert_eq!(d.window, part(&t, &[0, 1, 2, 3]));
        assert_eq!(d.right, vec![3]);

        let d = part(&t, &[1, 3]).decompose_lcr(&part(&t, &[1, 2, 3])).unwrap();
        assert_eq!(d.left, vec![1]);
        assert_eq!(d.window, part(&t, &[1, 2, 3]));
        assert_eq!(d.right, vec![3]);

        assert!(part(&t, &[0, 2]).decompose_lcr(&part(&t, &[1, 2, 3])).is_err());
    }

    #[test]
    fn enumerate_window_examples() {
        let t = ts(3);
        let ps = enumerate_window(&t, 0, 2);
        assert_eq!(ps, vec![part(&t, &[0, 2]), part(&t, &[0, 1, 2])]);

        let t2 = ts(2);
        assert_eq!(enumerate_window(&t2, 0, 1), vec![part(&t2, &[0, 1])]);
    }

    #[test]
    fn enumerate_global_examples() {
        let t = ts(3);
        let ps = enumerate_global(&t);
        assert_eq!(ps.len(), 4);
        assert_eq!(ps.last().unwrap(), &part(&t, &[0, 1, 2]));
    }

    #[test]
    fn blocks_merge_back_to_refinement_exhaustively() {
        for n in 2..=6 {
            let t = ts(n);
            for s in 0..n - 1 {
                for u in s + 1..n {
                    for j in enumerate_window(&t, s, u) {
                        for i in enumerate_window(&t, s, u) {
                            if !i.refines(&j).unwrap() {
                                continue;
                            }
                            let blocks = i.decompose_blocks(&j).unwrap();
                            let mut merged = vec![blocks[0].points()[0]];
                            for b in &blocks {
                                merged.extend_from_slice(&b.points()[1..]);
                            }
                            assert_eq!(merged, j.points(), "I={i} J={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lcr_window_agrees_with_blocks_and_overlaps() {
        let t = ts(6);
        for j in enumerate_global(&t) {
            for i in enumerate_global(&t) {
                if !i.subset_of(&j) {
                    continue;
                }
                let d = i.decompose_lcr(&j).unwrap();
                assert!(i.refines(&d.window).unwrap());
                let blocks = i.decompose_blocks(&d.window).unwrap();
                let mut merged = vec![blocks[0].points()[0]];
                for b in &blocks {
                    merged.extend_from_slice(&b.points()[1..]);
                }
                assert_eq!(merged, d.window.points());
                assert_eq!(*d.left.last().unwrap(), i.first());
                assert_eq!(d.right[0], i.last());
            }
        }
    }

    #[test]
    fn refines_is_a_partial_order() {
        let t = ts(5);
        let mut all = Vec::new();
        for s in 0..4 {
            for u in s + 1..5 {
                all.extend(enumerate_window(&t, s, u));
            }
        }
        for i in &all {
            assert!(i.refines(i).unwrap());
            for j in &all {
                let ij = i.refines(j).unwrap();
                let ji = j.refines(i).unwrap();
                if ij && ji {
                    assert_eq!(i, j);
                }
                for k in &all {
                    if ij && j.refines(k).unwrap() {
                        assert!(i.refines(k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn posets_are_directed_with_maximum() {
        let t = ts(4);
        for s in 0..3 {
            for u in s + 1..4 {
                let ps = enumerate_window(&t, s, u);
                let top = ps.last().unwrap();
                for p in &ps {
                    assert!(p.refines(top).unwrap());
                }
            }
        }
        let ps = enumerate_global(&t);
        let top = ps.last().unwrap();
        for p in &ps {
            assert!(p.subset_of(top));
        }
    }
}
