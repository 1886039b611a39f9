use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mask::{check_ground, SubsetMask};

/// A finite family of subsets of `[n]`, stored deduplicated in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    members: Vec<SubsetMask>,
    uniform_size: Option<usize>,
}

impl SetFamily {
    /// Builds a family from masks over `[n]`. Order and repetition of the input do not matter.
    pub fn from_masks<I>(n: usize, masks: I) -> Result<SetFamily>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        check_ground(n)?;
        let mut members = Vec::new();
        for m in masks {
            if let Some(e) = m.max_element().filter(|&e| e > n) {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            members.push(m.widen(n)?);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_canonical(n, members))
    }

    /// `members` must already be sorted, distinct, and over `[n]`.
    pub(crate) fn from_canonical(n: usize, members: Vec<SubsetMask>) -> SetFamily {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let uniform_size = match members.first() {
            Some(first) => {
                let s = first.len();
                members.iter().all(|m| m.len() == s).then_some(s)
            }
            None => None,
        };
        SetFamily {
            n,
            members,
            uniform_size,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Common member size, when every member has the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        self.uniform_size
    }

    pub fn require_uniform(&self) -> Result<usize> {
        self.uniform_size.ok_or(Error::NonUniform)
    }

    pub fn contains(&self, m: &SubsetMask) -> bool {
        self.members.binary_search(m).is_ok()
    }

    pub fn max_member_size(&self) -> usize {
        self.members.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Elements of `[n]` lying in every member.
    pub fn common_elements(&self) -> SubsetMask {
        let full = SubsetMask::full(self.n).expect("ground size checked at construction");
        self.members.iter().fold(full, |acc, m| acc.intersection(m))
    }

    /// Elements of `[n]` lying in at least one member.
    pub fn support(&self) -> SubsetMask {
        let empty = SubsetMask::empty_unchecked(self.n);
        self.members.iter().fold(empty, |acc, m| acc.union(m))
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.to_vec()).collect()
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily(n={}, ", self.n)?;
        f.debug_list().entries(self.members.iter().map(|m| m.to_vec())).finish()?;
        f.write_str(")")
    }
}

/// Builds a canonical family from 1-based element lists.
pub fn make_family<I, S>(n: usize, members: I) -> Result<SetFamily>
where
    I: IntoIterator<Item = S>,
    S: IntoIterator<Item = usize>,
{
    check_ground(n)?;
    let masks = members
        .into_iter()
        .map(|m| SubsetMask::from_elements(n, m))
        .collect::<Result<Vec<_>>>()?;
    SetFamily::from_masks(n, masks)
}

/// The triple `(k, s, n)`: covering arity, member size, ground size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Parameters {
    pub k: usize,
    pub s: usize,
    pub n: usize,
}

impl Parameters {
    pub fn new(k: usize, s: usize, n: usize) -> Result<Parameters> {
        if k == 0 || k > s || s > n {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k <= s <= n, got k={k} s={s} n={n}"
            )));
        }
        check_ground(n)?;
        Ok(Parameters { k, s, n })
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.s, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dedups_identical_members() {
        let f = make_family(4, [vec![1, 2], vec![3, 4], vec![2, 1]]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.uniform_size(), Some(2));
        assert_eq!(f.to_vecs(), vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn empty_member_allowed() {
        let f = make_family(3, [Vec::<usize>::new()]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.uniform_size(), Some(0));
    }

    #[test]
    fn out_of_range_element() {
        assert_eq!(
            make_family(5, [vec![1, 6]]).unwrap_err(),
            Error::ElementOutOfRange { element: 6, n: 5 }
        );
        assert_eq!(make_family(0, Vec::<Vec<usize>>::new()).unwrap_err(), Error::EmptyGround);
    }

    #[test]
    fn mixed_sizes_are_not_uniform() {
        let f = make_family(4, [vec![1], vec![2, 3]]).unwrap();
        assert_eq!(f.uniform_size(), None);
        assert_eq!(f.require_uniform(), Err(Error::NonUniform));
    }

    #[test]
    fn parameter_order() {
        assert!(Parameters::new(2, 3, 5).is_ok());
        assert!(Parameters::new(3, 2, 5).is_err());
        assert!(Parameters::new(0, 2, 5).is_err());
        assert!(Parameters::new(2, 6, 5).is_err());
    }

    proptest! {
        #[test]
        fn any_permutation_gives_same_family(
            members in proptest::collection::vec(proptest::collection::btree_set(1usize..=9, 0..=9), 0..12),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let a = make_family(9, members.clone()).unwrap();
            let mut shuffled = members.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let b = make_family(9, shuffled).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.members().windows(2).all(|w| w[0] < w[1]));
        }
    }
}
