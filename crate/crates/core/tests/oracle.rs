use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tok_core::oracle::{census_matches_bfs, census_matches_bfs_with, orbit_bfs, MemoryCap, OracleError, Space233};
use tok_core::{canonical_form, classify_g, classify_h, Field, GroupElement, OrbitLabel, Tensor233};

fn field(q: u32) -> Field {
    Field::with_order(q).unwrap()
}

#[test]
fn negative_control_is_rejected() {
    use OrbitLabel::*;
    // Swaps o7 and o7T: every count still matches, but seeds carry the wrong label.
    let wrong = |f: &Field, t: &Tensor233| match classify_h(f, t) {
        O7 => O7T,
        O7T => O7,
        other => other,
    };
    let r = census_matches_bfs_with(&field(2), wrong, MemoryCap::from_mb(256)).unwrap();
    assert!(!r.passed());
    assert!(r.failures.iter().any(|s| s.contains("o7")), "{:?}", r.failures);

    // Merging o13 into o14 breaks homogeneity and the counts.
    let merged = |f: &Field, t: &Tensor233| match classify_h(f, t) {
        O13 => O14,
        other => other,
    };
    let r = census_matches_bfs_with(&field(2), merged, MemoryCap::from_mb(256)).unwrap();
    assert!(r.failures.iter().any(|s| s.contains("foreign")), "{:?}", r.failures);
}

#[test]
fn tiny_memory_cap_falls_back_or_refuses() {
    let f = field(2);
    let cap = MemoryCap { bytes: 8192 };
    let space = Space233::standard(&f, false);
    let small = orbit_bfs(&space, canonical_form(&f, OrbitLabel::O1).encode(2), cap).unwrap();
    assert_eq!(small.size, 147);
    let big = orbit_bfs(&space, canonical_form(&f, OrbitLabel::O14).encode(2), cap);
    assert!(matches!(big, Err(OracleError::OrbitTooLarge { .. })));
    assert!(census_matches_bfs(&f, cap).is_err());
}

#[test]
fn small_orbits_at_q4_by_sparse_bfs() {
    // |orbit of o1| = (q^2-1)(q^3-1)^2/(q-1)^2, |orbit of o2| = (q+1) * #(rank-2 3x3)
    let f = field(4);
    let q = 4u64;
    let space = Space233::standard(&f, false);
    let cap = MemoryCap::from_mb(64);
    let o1 = orbit_bfs(&space, canonical_form(&f, OrbitLabel::O1).encode(4), cap).unwrap();
    assert_eq!(o1.size, (q * q - 1) * (q.pow(3) - 1).pow(2) / (q - 1).pow(2));
    let rank2 = (q.pow(3) - 1) * (q.pow(3) - q) * (q.pow(3) - 1) * (q.pow(3) - q) / ((q * q - 1) * (q * q - q));
    let o2 = orbit_bfs(&space, canonical_form(&f, OrbitLabel::O2).encode(4), cap).unwrap();
    assert_eq!(o2.size, (q + 1) * rank2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_tensors_keep_their_label(q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]), seed in any::<u64>()) {
        let f = field(q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Tensor233::random(&f, &mut rng);
        let h = GroupElement::random(&f, &mut rng, false);
        prop_assert_eq!(classify_h(&f, &t), classify_h(&f, &t.act(&f, &h)));
        let g = GroupElement::random(&f, &mut rng, true);
        let moved = t.act(&f, &g);
        prop_assert_eq!(classify_h(&f, &moved), classify_h(&f, &t).transposed());
        prop_assert_eq!(classify_g(&f, &moved), classify_g(&f, &t));
        prop_assert_eq!(moved.act(&f, &g.inverse(&f)), t);
    }
}

#[test]
#[ignore = "long-running: BFS over all 3^18 tensors"]
fn bfs_cross_check_q3() {
    let r = census_matches_bfs(&field(3), MemoryCap::from_env()).unwrap();
    for c in &r.h_orbits {
        println!("{:>5} census={:>11} bfs={:>11}", c.label.name(), c.census, c.orbit_size);
    }
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.covered, 3u64.pow(18));
}

/// Regression goldens, recorded after the BFS cross-check at q=2 passed.
#[test]
fn q2_census_goldens() {
    let golden: [u64; 21] = [
        1, 147, 882, 504, 294, 294, 5292, 2646, 10584, 10584, 28224, 10584, 588, 7056, 7056, 7056, 84672, 28224,
        28224, 21168, 8064,
    ];
    let census = tok_core::oracle::full_census(&field(2)).unwrap();
    assert_eq!(census.counts, golden);
    assert_eq!(golden.iter().sum::<u64>(), 1 << 18);
}
