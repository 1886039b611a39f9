use proptest::prelude::*;

use vcfam::constructions::{cone, product};
use vcfam::covering::is_k_covering;
use vcfam::vc::{sauer_shelah_sum, vc_dimension};
use vcfam::{make_family, SetFamily};

fn bits(f: &SetFamily) -> Vec<u32> {
    f.members().iter().map(|m| m.elements().map(|e| 1u32 << (e - 1)).sum()).collect()
}

/// VC-dimension by trying every subset of the ground set.
fn brute_vc(f: &SetFamily) -> usize {
    let members = bits(f);
    (0u32..(1 << f.n()))
        .filter(|&p| {
            let traces: std::collections::BTreeSet<u32> = members.iter().map(|m| m & p).collect();
            traces.len() == 1 << p.count_ones()
        })
        .map(|p| p.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn family() -> impl Strategy<Value = SetFamily> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(0u32..(1 << n), 1..16).prop_map(move |raw| {
            let members: Vec<Vec<usize>> =
                raw.iter().map(|b| (1..=n).filter(|e| b >> (e - 1) & 1 == 1).collect()).collect();
            make_family(n, members).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn vc_matches_brute_force(f in family()) {
        prop_assert_eq!(vc_dimension(&f).unwrap().dimension, brute_vc(&f));
    }

    #[test]
    fn cone_and_product_keep_vc(f in family(), l in 2usize..=3) {
        let vc = brute_vc(&f);
        prop_assert_eq!(brute_vc(&cone(&f).unwrap()), vc);
        prop_assert_eq!(vc_dimension(&product(&f, l).unwrap()).unwrap().dimension, vc);
    }

    #[test]
    fn covering_survives_cone_and_product(f in family(), k in 1usize..=3, l in 2usize..=3) {
        prop_assume!(k <= f.n() && is_k_covering(&f, k).unwrap().holds);
        prop_assert!(is_k_covering(&cone(&f).unwrap(), k).unwrap().holds);
        prop_assert!(is_k_covering(&product(&f, l).unwrap(), k).unwrap().holds);
    }

    #[test]
    fn large_families_have_large_vc(f in family()) {
        let vc = brute_vc(&f);
        let size = num_bigint::BigUint::from(f.len());
        for k in 0..=f.n() + 1 {
            if size > sauer_shelah_sum(f.n(), k) {
                prop_assert!(vc >= k);
            }
        }
    }
}
