mod common;

use common::{random_code, steane, Oracle};
use holowedge::metrics::{
    self, check_window, connected_distance, connected_price, distance, dressed_distance, find_tripartition, price,
    Scan, SizeFunction,
};
use holowedge::{Region, SubsystemCode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Brute {
    d: Option<usize>,
    d_dressed: Option<usize>,
    d_c: Option<usize>,
    p: usize,
    p_c: usize,
}

fn is_interval(n: usize, mask: u32) -> bool {
    let full = (1u32 << n) - 1;
    if mask == 0 || mask == full {
        return true;
    }
    // One run of ones, cyclically.
    let rotated = (mask >> 1) | ((mask & 1) << (n - 1));
    (mask ^ rotated).count_ones() == 2
}

fn brute(code: &SubsystemCode, s: &[usize]) -> Brute {
    let o = Oracle::new(code, s);
    let n = code.n();
    let full = (1u32 << n) - 1;
    let min = |f: &dyn Fn(u32) -> bool| (0..=full).filter(|&m| f(m)).map(|m| m.count_ones() as usize).min();
    Brute {
        d: min(&|m| m != 0 && !o.correctable(m)),
        d_dressed: min(&|m| m != 0 && !o.pauli_dressed_cleanable(m)),
        d_c: min(&|m| m != 0 && is_interval(n, m) && !o.correctable(m)),
        p: min(&|m| o.correctable(full & !m)).unwrap(),
        p_c: min(&|m| is_interval(n, m) && o.correctable(full & !m)).unwrap(),
    }
}

fn assert_metrics(code: &SubsystemCode, s: &[usize]) {
    let b = brute(code, s);
    let n = code.n();
    assert_eq!(distance(code, s, n).unwrap().value(), b.d);
    assert_eq!(dressed_distance(code, s, n).unwrap().value(), b.d_dressed);
    assert_eq!(connected_distance(code, s).unwrap().map(|(v, _)| v), b.d_c);
    assert_eq!(price(code, s, n).unwrap().value(), Some(b.p));
    assert_eq!(connected_price(code, s).unwrap().0, b.p_c);
    if let Scan::Found { witness, .. } = distance(code, s, n).unwrap() {
        assert!(!Oracle::new(code, s).correctable(mask_of(&witness)));
    }
}

fn mask_of(r: &Region) -> u32 {
    r.iter().fold(0, |m, i| m | 1 << i)
}

#[test]
fn named_codes_match_brute_force() {
    assert_metrics(&SubsystemCode::five_qubit(), &[0]);
    assert_metrics(&SubsystemCode::bacon_shor_2x2(), &[0]);
    assert_metrics(&steane(), &[0]);
    let b = brute(&steane(), &[0]);
    assert_eq!((b.d, b.p), (Some(3), 3));
}

#[test]
fn cutoff_is_reported() {
    let code = steane();
    assert_eq!(distance(&code, &[0], 2).unwrap(), Scan::Exceeded { cutoff: 2 });
    let budgeted = metrics::distance_budgeted(&code, &[0], 7, 10).unwrap();
    assert!(matches!(budgeted, Scan::Exceeded { cutoff } if cutoff < 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_codes_match_brute_force(seed in any::<u64>(), n in 3usize..=7, k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_code(n, n - k, &mut rng);
        assert_metrics(&code, &[0]);
        if k == 2 {
            assert_metrics(&code, &[0, 1]);
        }
    }

    #[test]
    fn window_yields_tripartition(seed in any::<u64>(), n in 3usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_code(n, n - 1, &mut rng);
        let rep = check_window(&code, &[0], n).unwrap();
        let (d, p) = (rep.d.value().unwrap(), rep.p.value().unwrap());
        prop_assert!(p >= d);
        prop_assert_eq!(rep.window_ok, Some(2 <= p && p + 2 <= 2 * d));
        if rep.window_ok == Some(true) {
            let tri = find_tripartition(&code, &[0], 0).unwrap();
            prop_assert!(tri.is_some());
            let o = Oracle::new(&code, &[0]);
            let m: Vec<u32> = tri.unwrap().iter().map(mask_of).collect();
            prop_assert!(o.correctable(m[0]) && o.pauli_dressed_cleanable(m[1]) && o.pauli_dressed_cleanable(m[2]));
        }
        // d_c >= d and p_c >= p.
        if let (Some(d), Some(dc)) = (rep.d.value(), rep.d_c) {
            prop_assert!(dc >= d);
        }
        prop_assert!(rep.p_c >= rep.p.value().unwrap());
    }
}

#[test]
fn tripartition_is_certifiable() {
    for code in [SubsystemCode::five_qubit(), steane()] {
        let tri = find_tripartition(&code, &[0], 0).unwrap().expect("tripartition");
        let o = Oracle::new(&code, &[0]);
        let masks: Vec<u32> = tri.iter().map(mask_of).collect();
        assert_eq!(masks.iter().fold(0, |a, m| a | m), (1 << code.n()) - 1);
        assert_eq!(masks.iter().map(|m| m.count_ones()).sum::<u32>(), code.n() as u32);
        assert!(o.correctable(masks[0]));
        assert!(o.pauli_dressed_cleanable(masks[1]) && o.pauli_dressed_cleanable(masks[2]));
    }
}

#[test]
fn sigma_distance_with_cardinality_is_distance() {
    let code = steane();
    let sigma = SizeFunction::cardinality();
    let (v, w) = metrics::sigma_distance(&code, &[0], &sigma, metrics::regions_by_size(7, &sigma))
        .unwrap()
        .unwrap();
    assert_eq!(v, 3.0);
    assert_eq!(w.len(), 3);
}

