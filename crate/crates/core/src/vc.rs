//! Shattering and VC-dimension.

use num_bigint::BigUint;
use serde::Serialize;

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{find_first_subset, SubsetMask};

/// The distinct intersections `probe ∩ S` over the members `S` of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSet {
    pub probe: SubsetMask,
    /// Sorted and deduplicated.
    pub traces: Vec<SubsetMask>,
}

impl TraceSet {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }
}

pub fn trace(f: &SetFamily, probe: &SubsetMask) -> TraceSet {
    debug_assert!(probe.max_element().unwrap_or(0) <= f.n());
    let mut traces: Vec<SubsetMask> = f.members().iter().map(|s| probe.intersection(s)).collect();
    traces.sort_unstable();
    traces.dedup();
    TraceSet {
        probe: *probe,
        traces,
    }
}

/// Whether every subset of `probe` arises as `probe ∩ S` for some member `S`.
pub fn shatters(f: &SetFamily, probe: &SubsetMask) -> Result<bool> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let positions: Vec<usize> = probe.positions().collect();
    Ok(shatters_positions(f.members(), &positions))
}

/// Trace-pattern test on 0-based positions; stops as soon as all patterns are seen.
pub(crate) fn shatters_positions(members: &[SubsetMask], positions: &[usize]) -> bool {
    let r = positions.len();
    if r >= usize::BITS as usize - 1 || (1usize << r) > members.len() {
        return false;
    }
    let target = 1usize << r;
    let mut inline = [0u64; 64];
    let mut heap;
    let seen: &mut [u64] = if target <= 64 * 64 {
        &mut inline[..target.div_ceil(64)]
    } else {
        heap = vec![0u64; target / 64];
        &mut heap
    };
    let mut distinct = 0usize;
    for m in members {
        let mut pattern = 0usize;
        for (j, &p) in positions.iter().enumerate() {
            pattern |= (m.bit(p) as usize) << j;
        }
        let (w, b) = (pattern / 64, pattern % 64);
        if seen[w] >> b & 1 == 0 {
            seen[w] |= 1 << b;
            distinct += 1;
            if distinct == target {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VcReport {
    pub dimension: usize,
    /// Canonically first shattered set of maximal size.
    pub witness: SubsetMask,
    /// Smallest size at which nothing is shattered, capped at `n + 1`.
    pub refuted_size: usize,
}

pub fn vc_dimension(f: &SetFamily) -> Result<VcReport> {
    vc_dimension_with(f, 1)
}

/// VC-dimension with the probe scans split over `workers` threads.
///
/// Probe sizes are tried in ascending order and the first shattered probe of each
/// size is kept. Probes only draw from elements that are in some but not all
/// members; any other element can never be part of a shattered set. A size above
/// `min(max member size, floor(log2 |F|))` is refuted by counting alone.
pub fn vc_dimension_with(f: &SetFamily, workers: usize) -> Result<VcReport> {
    if f.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let n = f.n();
    let bound = n
        .min(f.max_member_size())
        .min(f.len().ilog2() as usize);
    // Free positions: in the support but not common to all members.
    let free_mask = f.support().difference(&f.common_elements());
    let pool: Vec<usize> = free_mask.positions().collect();

    let mut dimension = 0;
    let mut witness = SubsetMask::empty_unchecked(n);
    for r in 1..=bound {
        match find_first_subset(n, &pool, r, workers, |probe| {
            let positions: Vec<usize> = probe.positions().collect();
            shatters_positions(f.members(), &positions)
        }) {
            Some(probe) => {
                dimension = r;
                witness = probe;
            }
            None => break,
        }
    }
    Ok(VcReport {
        dimension,
        witness,
        refuted_size: (dimension + 1).min(n + 1),
    })
}

/// `sum_{i < k} C(n, i)`: a family larger than this has VC-dimension at least `k`.
pub fn sauer_shelah_sum(n: usize, k: usize) -> BigUint {
    (0..k).map(|i| binomial(n, i)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{full_family, initial_segment_family};
    use crate::family::make_family;
    use proptest::prelude::*;

    fn mask(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn pairs() -> SetFamily {
        make_family(4, [vec![1, 2], vec![3, 4]]).unwrap()
    }

    #[test]
    fn traces_of_pairs() {
        let t = trace(&pairs(), &mask(4, &[1, 3]));
        assert_eq!(t.traces, vec![mask(4, &[1]), mask(4, &[3])]);
        let t = trace(&pairs(), &mask(4, &[1]));
        assert_eq!(t.traces, vec![mask(4, &[]), mask(4, &[1])]);
    }

    #[test]
    fn trace_of_full_family_on_pair() {
        // Oracle: intersect each of the six 2-subsets of [4] with {1,2} by hand.
        let f = full_family(4, 2).unwrap();
        let t = trace(&f, &mask(4, &[1, 2]));
        assert_eq!(t.len(), 4);
        assert!(shatters(&f, &mask(4, &[1, 2])).unwrap());
    }

    #[test]
    fn shattering_of_pairs() {
        assert!(shatters(&pairs(), &mask(4, &[1])).unwrap());
        assert!(!shatters(&pairs(), &mask(4, &[1, 3])).unwrap());
        let empty = make_family(4, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(shatters(&empty, &mask(4, &[1])), Err(Error::EmptyFamily));
    }

    #[test]
    fn vc_examples() {
        assert_eq!(vc_dimension(&full_family(5, 2).unwrap()).unwrap().dimension, 2);
        let single = make_family(4, [vec![1, 2]]).unwrap();
        let r = vc_dimension(&single).unwrap();
        assert_eq!((r.dimension, r.refuted_size), (0, 1));
        assert!(r.witness.is_empty());
        assert_eq!(vc_dimension(&initial_segment_family(5).unwrap()).unwrap().dimension, 1);
        let e = make_family(3, Vec::<Vec<usize>>::new()).unwrap();
        assert_eq!(vc_dimension(&e), Err(Error::EmptyFamily));
    }

    #[test]
    fn witness_is_canonical_first() {
        let r = vc_dimension(&full_family(6, 3).unwrap()).unwrap();
        assert_eq!(r.dimension, 3);
        assert_eq!(r.witness.to_vec(), vec![1, 2, 3]);
        assert_eq!(r.refuted_size, 4);
    }

    #[test]
    fn refuted_size_caps_at_n_plus_one() {
        let power = SetFamily::from_masks(3, (0..8u32).map(|b| {
            mask(3, &(1..=3).filter(|e| b >> (e - 1) & 1 == 1).collect::<Vec<_>>())
        }))
        .unwrap();
        let r = vc_dimension(&power).unwrap();
        assert_eq!((r.dimension, r.refuted_size), (3, 4));
    }

    #[test]
    fn sauer_shelah_sums() {
        assert_eq!(sauer_shelah_sum(14, 2), BigUint::from(15u32));
        assert_eq!(sauer_shelah_sum(9, 0), BigUint::from(0u32));
        assert_eq!(sauer_shelah_sum(10, 11), BigUint::from(1024u32));
    }

    fn brute_vc(f: &SetFamily) -> usize {
        let n = f.n();
        (0..1u32 << n)
            .filter(|b| {
                let p: Vec<usize> = (1..=n).filter(|e| b >> (e - 1) & 1 == 1).collect();
                let probe = mask(n, &p);
                let mut traces: Vec<_> = f.members().iter().map(|s| probe.intersection(s)).collect();
                traces.sort();
                traces.dedup();
                traces.len() == 1 << p.len()
            })
            .map(|b| b.count_ones() as usize)
            .max()
            .unwrap()
    }

    fn family_strategy() -> impl Strategy<Value = SetFamily> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::btree_set(1..=n, 0..=n), 1..20)
                .prop_map(move |ms| make_family(n, ms).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matches_power_set_scan(f in family_strategy()) {
            let r = vc_dimension(&f).unwrap();
            prop_assert_eq!(r.dimension, brute_vc(&f));
            prop_assert!(shatters(&f, &r.witness).unwrap());
            prop_assert_eq!(r.witness.len(), r.dimension);
            prop_assert!(r.dimension <= f.len().ilog2() as usize);
            prop_assert!(r.dimension <= f.max_member_size());
            prop_assert_eq!(vc_dimension_with(&f, 4).unwrap(), r);
        }

        #[test]
        fn shattering_is_trace_count(f in family_strategy(), bits in any::<u16>()) {
            let n = f.n();
            let p: Vec<usize> = (1..=n.min(4)).filter(|e| bits >> e & 1 == 1).collect();
            let probe = mask(n, &p);
            prop_assert_eq!(shatters(&f, &probe).unwrap(), trace(&f, &probe).len() == 1 << p.len());
            if shatters(&f, &probe).unwrap() {
                for sub in 0..1u32 << p.len() {
                    let q: Vec<usize> = p.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).map(|(_, &e)| e).collect();
                    prop_assert!(shatters(&f, &mask(n, &q)).unwrap());
                }
            }
        }

        #[test]
        fn subfamily_has_no_larger_vc(f in family_strategy(), keep in any::<u32>()) {
            let sub: Vec<SubsetMask> = f.members().iter().enumerate()
                .filter(|(i, _)| keep >> (i % 32) & 1 == 1).map(|(_, m)| *m).collect();
            if !sub.is_empty() {
                let g = SetFamily::from_masks(f.n(), sub).unwrap();
                prop_assert!(vc_dimension(&g).unwrap().dimension <= vc_dimension(&f).unwrap().dimension);
            }
        }
    }
}
