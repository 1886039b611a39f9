//! Subsets of a ground set `[n] = {1, ..., n}` packed into fixed-width words.
//!
//! Element `e` lives at bit `e - 1`. Masks compare as unsigned integers, so the
//! canonical order is colexicographic: `{1,2} < {1,3} < {2,3} < {1,4}`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;
const WORDS: usize = 4;

/// Largest supported ground set.
pub const MAX_GROUND: usize = WORD_BITS * WORDS;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    words: [u64; WORDS],
    n: u16,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(Self::empty_unchecked(n))
    }

    pub(crate) fn empty_unchecked(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        SubsetMask {
            words: [0; WORDS],
            n: n as u16,
        }
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Result<Self> {
        let mut m = Self::empty(n)?;
        for pos in 0..n {
            m.set_bit(pos);
        }
        Ok(m)
    }

    /// Builds a mask from 1-based elements. Repeated elements are fine.
    pub fn from_elements<I>(n: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut m = Self::empty(n)?;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            m.set_bit(e - 1);
        }
        Ok(m)
    }

    pub(crate) fn from_positions(n: usize, positions: &[usize]) -> Self {
        let mut m = Self::empty_unchecked(n);
        for &p in positions {
            m.set_bit(p);
        }
        m
    }

    #[inline]
    pub(crate) fn set_bit(&mut self, pos: usize) {
        self.words[pos / WORD_BITS] |= 1u64 << (pos % WORD_BITS);
    }

    #[inline]
    pub(crate) fn bit(&self, pos: usize) -> bool {
        self.words[pos / WORD_BITS] >> (pos % WORD_BITS) & 1 == 1
    }

    /// Ground set size.
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Whether the 1-based element `e` is in the set.
    pub fn contains(&self, e: usize) -> bool {
        e >= 1 && e <= self.n() && self.bit(e - 1)
    }

    pub fn is_subset(&self, other: &SubsetMask) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &SubsetMask) -> SubsetMask {
        self.zip_with(other, |a, b| a & !b)
    }

    fn zip_with(&self, other: &SubsetMask, f: impl Fn(u64, u64) -> u64) -> SubsetMask {
        let mut words = [0; WORDS];
        for (i, w) in words.iter_mut().enumerate() {
            *w = f(self.words[i], other.words[i]);
        }
        SubsetMask {
            words,
            n: self.n.max(other.n),
        }
    }

    /// Returns a copy with `e` added; `e` must be in `[n]`.
    pub fn with(&self, e: usize) -> Result<SubsetMask> {
        if e == 0 || e > self.n() {
            return Err(Error::ElementOutOfRange { element: e, n: self.n() });
        }
        let mut m = *self;
        m.set_bit(e - 1);
        Ok(m)
    }

    /// Same bits over a larger ground set.
    pub fn widen(&self, n: usize) -> Result<SubsetMask> {
        check_ground(n)?;
        if n < self.n() && self.max_element().is_some_and(|e| e > n) {
            return Err(Error::ElementOutOfRange {
                element: self.max_element().unwrap_or(0),
                n,
            });
        }
        Ok(SubsetMask {
            words: self.words,
            n: n as u16,
        })
    }

    /// 1-based elements in ascending order.
    pub fn elements(&self) -> Elements {
        Elements {
            words: self.words,
            word: 0,
        }
    }

    /// 0-based bit positions in ascending order.
    pub(crate) fn positions(&self) -> impl Iterator<Item = usize> {
        self.elements().map(|e| e - 1)
    }

    pub fn max_element(&self) -> Option<usize> {
        (0..WORDS).rev().find_map(|i| {
            let w = self.words[i];
            (w != 0).then(|| i * WORD_BITS + (WORD_BITS - w.leading_zeros() as usize))
        })
    }

    pub fn min_element(&self) -> Option<usize> {
        (0..WORDS).find_map(|i| {
            let w = self.words[i];
            (w != 0).then(|| i * WORD_BITS + w.trailing_zeros() as usize + 1)
        })
    }

    /// Ordering of the masks as unsigned integers, ignoring the ground size.
    pub fn cmp_bits(&self, other: &SubsetMask) -> Ordering {
        for i in (0..WORDS).rev() {
            match self.words[i].cmp(&other.words[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_bits(other).then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/[{}]", self, self.n)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl serde::Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

pub struct Elements {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] = w & (w - 1);
                return Some(self.word * WORD_BITS + bit + 1);
            }
            self.word += 1;
        }
        None
    }
}

pub(crate) fn check_ground(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::EmptyGround)
    } else if n > MAX_GROUND {
        Err(Error::GroundTooLarge(n))
    } else {
        Ok(())
    }
}

/// All `r`-subsets of a pool of bit positions, in increasing canonical order.
///
/// The pool must be sorted ascending; the mapping from index tuples to masks
/// is then order preserving, so colex order on indices is integer order on masks.
pub struct Combinations {
    n: usize,
    pool: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, pool: Vec<usize>, r: usize) -> Self {
        let done = r > pool.len();
        Combinations {
            n,
            pool,
            idx: (0..r).collect(),
            done,
        }
    }

    fn current(&self) -> SubsetMask {
        let mut m = SubsetMask::empty_unchecked(self.n);
        for &i in &self.idx {
            m.set_bit(self.pool[i]);
        }
        m
    }

    fn advance(&mut self) {
        let r = self.idx.len();
        let mut j = 0;
        while j < r {
            let limit = if j + 1 < r { self.idx[j + 1] } else { self.pool.len() };
            if self.idx[j] + 1 < limit {
                self.idx[j] += 1;
                for (t, slot) in self.idx[..j].iter_mut().enumerate() {
                    *slot = t;
                }
                return;
            }
            j += 1;
        }
        self.done = true;
    }
}

impl Iterator for Combinations {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// Stream of all `r`-subsets of `[n]` in increasing canonical order.
pub fn enumerate_subsets(n: usize, r: usize) -> Result<Combinations> {
    check_ground(n)?;
    if r > n {
        return Err(Error::CardinalityTooLarge { r, n });
    }
    Ok(Combinations::new(n, (0..n).collect(), r))
}

/// Canonically first `r`-subset of `pool` (sorted bit positions) satisfying `pred`.
///
/// With `workers > 1` the probes are partitioned by their largest element and the
/// partitions are scanned concurrently; the earliest partition with a hit wins, so
/// the answer matches the sequential scan.
pub(crate) fn find_first_subset<P>(
    n: usize,
    pool: &[usize],
    r: usize,
    workers: usize,
    pred: P,
) -> Option<SubsetMask>
where
    P: Fn(&SubsetMask) -> bool + Sync,
{
    if r > pool.len() {
        return None;
    }
    if r == 0 {
        let e = SubsetMask::empty_unchecked(n);
        return pred(&e).then_some(e);
    }
    if workers <= 1 {
        return Combinations::new(n, pool.to_vec(), r).find(|m| pred(m));
    }
    let scan_top = |top: usize| -> Option<SubsetMask> {
        Combinations::new(n, pool[..top].to_vec(), r - 1).find_map(|mut m| {
            m.set_bit(pool[top]);
            pred(&m).then_some(m)
        })
    };
    crate::parallel::install(workers, || {
        use rayon::prelude::*;
        ((r - 1)..pool.len())
            .into_par_iter()
            .find_map_first(scan_top)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(v: Vec<SubsetMask>) -> Vec<Vec<usize>> {
        v.into_iter().map(|m| m.to_vec()).collect()
    }

    #[test]
    fn enumerates_two_subsets_of_three() {
        let got: Vec<_> = enumerate_subsets(3, 2).unwrap().collect();
        assert_eq!(sets(got), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn zero_subsets_is_the_empty_mask() {
        let got: Vec<_> = enumerate_subsets(4, 0).unwrap().collect();
        assert_eq!(got.len(), 1);
        assert!(got[0].is_empty());
    }

    #[test]
    fn rejects_r_above_n() {
        assert!(matches!(
            enumerate_subsets(3, 4).err(),
            Some(Error::CardinalityTooLarge { r: 4, n: 3 })
        ));
    }

    #[test]
    fn full_subset_is_single() {
        let got: Vec<_> = enumerate_subsets(5, 5).unwrap().collect();
        assert_eq!(sets(got), vec![vec![1, 2, 3, 4, 5]]);
    }

    #[test]
    fn order_crosses_word_boundaries() {
        let a = SubsetMask::from_elements(200, [64, 1]).unwrap();
        let b = SubsetMask::from_elements(200, [65]).unwrap();
        let c = SubsetMask::from_elements(200, [129]).unwrap();
        assert!(a < b && b < c);
        assert_eq!(c.max_element(), Some(129));
        assert_eq!(a.min_element(), Some(1));
        assert_eq!(a.to_vec(), vec![1, 64]);
    }

    #[test]
    fn element_bounds() {
        assert!(SubsetMask::from_elements(5, [6]).is_err());
        assert!(SubsetMask::from_elements(5, [0]).is_err());
        assert!(SubsetMask::empty(0).is_err());
        assert!(SubsetMask::empty(MAX_GROUND + 1).is_err());
        assert_eq!(SubsetMask::full(MAX_GROUND).unwrap().len(), MAX_GROUND);
    }

    #[test]
    fn parallel_first_matches_sequential() {
        let pool: Vec<usize> = (0..12).collect();
        let pred = |m: &SubsetMask| m.contains(7) && m.contains(3) && !m.contains(1);
        let seq = find_first_subset(12, &pool, 4, 1, pred);
        let par = find_first_subset(12, &pool, 4, 6, pred);
        assert_eq!(seq, par);
        assert_eq!(seq.unwrap().to_vec(), vec![2, 3, 4, 7]);
    }
}
