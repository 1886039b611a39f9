//! A fixed collection of named families used by the property suites.
//!
//! Everything here is deterministic: the random members come from a seeded
//! ChaCha stream, so the corpus is identical on every run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    base_pairs_family, build_fk, covering_witness_family, full_family, hypercube_family,
    initial_segment_family,
};
use crate::family::{make_family, SetFamily};
use crate::mask::SubsetMask;

const SEED: u64 = 0x5eed_f00d;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub family: SetFamily,
}

fn entry(name: String, family: SetFamily) -> CorpusEntry {
    CorpusEntry { name, family }
}

/// Named families with ground size at most `max_n`.
pub fn corpus(max_n: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let ok = |f: &SetFamily| f.n() <= max_n;

    for n in 1..=max_n.min(9) {
        for s in 0..=n {
            out.push(entry(format!("full-{n}-{s}"), full_family(n, s).expect("s <= n")));
        }
    }
    for n in 2..=max_n {
        out.push(entry(format!("segments-{n}"), initial_segment_family(n).expect("n >= 2")));
    }
    for m in 2..=max_n {
        out.push(entry(format!("pairs-{m}"), base_pairs_family(m).expect("m >= 2")));
    }
    for m in 2..=8 {
        for k in 2..=4 {
            let f = build_fk(m, k).expect("valid F_k parameters");
            if ok(&f) {
                out.push(entry(format!("fk-{m}-{k}"), f));
            }
        }
    }
    for (k, m) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1), (4, 1), (1, 4)] {
        let f = hypercube_family(k, m).expect("small hypercube");
        if ok(&f) {
            out.push(entry(format!("hypercube-{k}-{m}"), f));
        }
    }
    for n in 3..=max_n {
        for s in 2..n {
            for k in 1..s {
                if (n + s + k) % 3 == 0 {
                    let f = covering_witness_family(k, s, n).expect("k <= s <= n");
                    out.push(entry(format!("witness-{k}-{s}-{n}"), f));
                }
            }
        }
    }
    out.push(entry(
        "disjoint-pairs".into(),
        make_family(4, [vec![1, 2], vec![3, 4]]).expect("in range"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..24 {
        let n = rng.gen_range(3..=max_n.max(3));
        if n > max_n {
            continue;
        }
        let uniform = i % 2 == 0;
        let s = rng.gen_range(1..n);
        let count = rng.gen_range(1..=12);
        let members = (0..count).map(|_| {
            let size = if uniform { s } else { rng.gen_range(0..=n) };
            random_subset(&mut rng, n, size)
        });
        let members: Vec<SubsetMask> = members.collect();
        let f = SetFamily::from_masks(n, members).expect("in range");
        let kind = if uniform { "uniform" } else { "mixed" };
        out.push(entry(format!("random-{kind}-{i}"), f));
    }
    out
}

/// Uniform families only.
pub fn uniform_corpus(max_n: usize) -> Vec<CorpusEntry> {
    corpus(max_n)
        .into_iter()
        .filter(|e| e.family.uniform_size().is_some())
        .collect()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> SubsetMask {
    let mut pool: Vec<usize> = (1..=n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    SubsetMask::from_elements(n, pool[..size].iter().copied()).expect("in range")
}

/// `count` random nonempty families on grounds of size at most `max_n`.
pub fn random_families(seed: u64, count: usize, max_n: usize) -> Vec<SetFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let size = rng.gen_range(1..=(1usize << n).min(80));
            let members: Vec<SubsetMask> = (0..size)
                .map(|_| {
                    let bits: u64 = rng.gen::<u64>() & ((1u64 << n) - 1);
                    SubsetMask::from_elements(n, (1..=n).filter(|e| bits >> (e - 1) & 1 == 1))
                        .expect("in range")
                })
                .collect();
            SetFamily::from_masks(n, members).expect("in range")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_stable_and_bounded() {
        let a = corpus(10);
        let b = corpus(10);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.family, y.family);
            assert!(x.family.n() <= 10);
        }
        let names: std::collections::BTreeSet<_> = a.iter().map(|e| e.name.clone()).collect();
        assert_eq!(names.len(), a.len());
    }

    #[test]
    fn random_families_nonempty() {
        for f in random_families(7, 50, 12) {
            assert!(!f.is_empty());
            assert!(f.n() <= 12);
        }
    }
}
