use proptest::prelude::*;
use sktour::qr::{build_qr, legendre_chi, QrModulus};
use sktour::sk::{
    g_h_values, has_strong_sk, has_strong_skm, has_strong_skm_with, has_weak_sk, witnesses, CheckOptions,
    DominationPattern,
};
use sktour::teaching::{canonical_nc_teacher, induced_class, rtd, td_min, verify_nc_teacher, DEFAULT_CAP};
use sktour::{Direction, Tournament};

const PRIMES: [u64; 6] = [3, 7, 11, 19, 23, 31];

fn pattern_strategy(p: u64, k: usize) -> impl Strategy<Value = DominationPattern> {
    (
        proptest::sample::subsequence((0..p as usize).collect::<Vec<_>>(), k).prop_shuffle(),
        0usize..1 << k,
    )
        .prop_map(move |(targets, code)| {
            DominationPattern::new(targets, DominationPattern::signs_from_code(k, code)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degrees_partition_and_edge_list_roundtrip(n in 1usize..40, seed: u64) {
        let t = Tournament::random(n, seed).unwrap();
        prop_assert!(t.check_invariants());
        for x in 0..n {
            let out = t.neighborhood(x, Direction::Out).unwrap();
            let inn = t.neighborhood(x, Direction::In).unwrap();
            prop_assert_eq!(out.len() + inn.len(), n - 1);
        }
        let edges: Vec<_> = t.edges().collect();
        prop_assert_eq!(&Tournament::build(n, &edges).unwrap(), &t);
        prop_assert_eq!(&Tournament::parse_edge_list(&t.to_edge_list()).unwrap(), &t);
    }

    #[test]
    fn chi_is_multiplicative(pi in 0usize..PRIMES.len(), a in 1u64..1000, b in 1u64..1000) {
        let p = PRIMES[pi];
        let (a, b) = (a % (p - 1) + 1, b % (p - 1) + 1);
        let ab = a * b % p;
        prop_assert_eq!(legendre_chi(p, ab).unwrap(), legendre_chi(p, a).unwrap() * legendre_chi(p, b).unwrap());
    }

    #[test]
    fn single_offset_sums_vanish(pi in 0usize..PRIMES.len(), a in 0u64..1000) {
        let q = QrModulus::new(PRIMES[pi]).unwrap();
        prop_assert_eq!(q.character_sum(&[a % q.p()]).unwrap().value, 0);
    }

    #[test]
    fn g_counts_witnesses_and_h_minus_g_is_quantized(
        (p, pat) in (0usize..PRIMES.len() - 1, 1usize..=3)
            .prop_flat_map(|(pi, k)| { let p = PRIMES[pi + 1]; (Just(p), pattern_strategy(p, k)) })
    ) {
        let q = QrModulus::new(p).unwrap();
        let k = pat.k() as u32;
        let (g, h) = g_h_values(&q, &pat).unwrap();
        let count = witnesses(&q.tournament(), &pat).unwrap().count as i64;
        prop_assert_eq!(g, (1i64 << k) * count);
        let d = h - g;
        prop_assert!(d == 0 || d == 1 << (k - 1) || d == 1 << k, "h - g = {}", d);
        prop_assert_eq!(g > 0, count > 0);
    }

    #[test]
    fn sk_implications(n in 4usize..14, seed: u64, k in 1usize..3) {
        let t = Tournament::random(n, seed).unwrap();
        let strong = has_strong_sk(&t, k).unwrap();
        if strong.holds {
            prop_assert!(has_weak_sk(&t, k).unwrap().holds);
        }
        prop_assert_eq!(strong.holds, has_strong_skm(&t, k, 1).unwrap().holds);
        prop_assert_eq!(&strong.failing_pattern, &has_strong_skm(&t, k, 1).unwrap().failing_pattern);
        for m in 1..4 {
            if has_strong_skm(&t, k, m + 1).unwrap().holds {
                prop_assert!(has_strong_skm(&t, k, m).unwrap().holds);
            }
        }
        if k + 1 < n && has_strong_sk(&t, k + 1).unwrap().holds {
            prop_assert!(has_strong_skm(&t, k, 2).unwrap().holds);
        }
        let full = has_strong_skm_with(&t, k, 1, CheckOptions { threads: 1, full_report: true }).unwrap();
        prop_assert!(full.complete);
        prop_assert_eq!(full.holds, full.min_count >= 1);
    }

    #[test]
    fn failing_verdict_has_short_pattern(n in 3usize..12, seed: u64, k in 1usize..3, m in 1usize..4) {
        let t = Tournament::random(n, seed).unwrap();
        prop_assume!(k < n);
        let v = has_strong_skm(&t, k, m).unwrap();
        match v.failing_pattern {
            Some(p) => prop_assert!(witnesses(&t, &p).unwrap().count < m),
            None => prop_assert!(v.min_count >= m),
        }
    }

    #[test]
    fn teaching_invariants_on_random_tournaments(n in 1usize..12, seed: u64) {
        let t = Tournament::random(n, seed).unwrap();
        let class = induced_class(&t);
        prop_assert_eq!(class.len(), n);
        let trace = rtd(&class, DEFAULT_CAP).unwrap();
        let min = td_min(&class, DEFAULT_CAP).unwrap();
        prop_assert!(trace.rtd >= min);
        prop_assert!(trace.rtd <= (n as f64).log2().ceil() as usize);
        let mut seen: Vec<usize> = trace.layers.iter().flat_map(|l| l.removed.clone()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
        prop_assert!(verify_nc_teacher(&class, &canonical_nc_teacher(&t)).unwrap().valid);
    }
}

#[test]
fn qr_tournaments_are_regular() {
    for p in [3u64, 7, 11, 19, 23, 31, 43, 151] {
        let t = build_qr(p).unwrap();
        for x in 0..p as usize {
            assert_eq!(t.out_degree(x) as u64, (p - 1) / 2);
            assert_eq!(t.in_degree(x) as u64, (p - 1) / 2);
        }
    }
}

#[test]
fn qr_conformance_below_threshold_budget() {
    // every valid p > k²·2^(2k−2) up to 200 for k = 1, 2; p = 151, 163 for k = 3
    let primes: Vec<u64> = (3..200).filter(|&p| QrModulus::new(p).is_ok()).collect();
    for &p in &primes {
        let t = build_qr(p).unwrap();
        for k in 1..=2u32 {
            if p > (k * k) as u64 * (1 << (2 * k - 2)) {
                assert!(has_strong_sk(&t, k as usize).unwrap().holds, "p {p} k {k}");
            }
        }
    }
}

#[test]
fn qr7_strong_s2_verdict() {
    // below the p > 16 guarantee, yet an independent enumeration finds
    // every pattern realised once or twice
    let t = build_qr(7).unwrap();
    assert!(has_weak_sk(&t, 2).unwrap().holds);
    let full = has_strong_skm_with(&t, 2, 1, CheckOptions { threads: 1, full_report: true }).unwrap();
    assert!(full.holds);
    assert_eq!(full.min_count, 1);
    assert!(!has_strong_skm(&t, 2, 2).unwrap().holds);
}
