mod common;

use common::{span, Bits};
use holowedge::symplectic::{canonicalize, centralizer, commutes, multiply};
use holowedge::Pauli;
use proptest::prelude::*;

fn pauli(n: usize) -> impl Strategy<Value = Pauli> {
    (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(|(letters, phase)| {
        let s: String = letters.iter().map(|&l| ['I', 'X', 'Y', 'Z'][l as usize]).collect();
        let mut p: Pauli = s.parse().unwrap();
        p.set_phase(phase);
        p
    })
}

fn paulis(n: usize, count: usize) -> impl Strategy<Value = Vec<Pauli>> {
    proptest::collection::vec(pauli(n), 1..=count)
}

/// 2x2 complex matrices as `[[re, im]; 4]`, row major.
type M2 = [[f64; 2]; 4];

fn letter_matrix(x: bool, z: bool) -> M2 {
    match (x, z) {
        (false, false) => [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        (true, false) => [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
        (false, true) => [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]],
        // X·Z
        (true, true) => [[0.0, 0.0], [-1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
    }
}

/// Entry `(r, c)` of the dense operator, as a multiple of `i^k` or zero.
fn dense_entry(p: &Pauli, r: usize, c: usize) -> Option<(u8, bool)> {
    let mut neg = false;
    for j in 0..p.n() {
        let m = letter_matrix(p.x(j), p.z(j));
        let e = m[2 * (r >> j & 1) + (c >> j & 1)];
        if e[0] == 0.0 {
            return None;
        }
        neg ^= e[0] < 0.0;
    }
    Some((p.phase(), neg))
}

fn dense_product(p: &Pauli, q: &Pauli, r: usize, c: usize) -> Option<u8> {
    let dim = 1 << p.n();
    let mut out = None;
    for k in 0..dim {
        if let (Some((a, na)), Some((b, nb))) = (dense_entry(p, r, k), dense_entry(q, k, c)) {
            let ph = (a + b + if na ^ nb { 2 } else { 0 }) % 4;
            assert!(out.is_none(), "Pauli products have one nonzero per row");
            out = Some(ph);
        }
    }
    out
}

proptest! {
    #[test]
    fn product_matches_dense((p, q) in (1usize..=3).prop_flat_map(|n| (pauli(n), pauli(n)))) {
        let n = p.n();
        let pq = multiply(&p, &q).unwrap();
        for r in 0..1 << n {
            for c in 0..1 << n {
                let want = dense_product(&p, &q, r, c);
                let got = dense_entry(&pq, r, c).map(|(a, neg)| (a + if neg { 2 } else { 0 }) % 4);
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn product_is_associative(a in pauli(5), b in pauli(5), c in pauli(5)) {
        let ab_c = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn dagger_inverts(a in pauli(6)) {
        let id = multiply(&a, &a.dagger()).unwrap();
        prop_assert!(id.is_identity());
        prop_assert_eq!(id.phase(), 0);
        prop_assert_eq!(a.is_hermitian(), a == a.dagger());
    }

    #[test]
    fn commutation_matches_bits(a in pauli(6), b in pauli(6)) {
        prop_assert_eq!(commutes(&a, &b).unwrap(), !Bits::of(&a).anticommutes(Bits::of(&b)));
        prop_assert_eq!(a.anticommutes_with(&b), b.anticommutes_with(&a));
    }

    #[test]
    fn span_membership(gens in paulis(5, 5), picks in proptest::collection::vec(any::<bool>(), 5), probe in pauli(5)) {
        let basis = canonicalize(&gens);
        let bits: Vec<Bits> = gens.iter().map(Bits::of).collect();
        let group = span(&bits);
        prop_assert_eq!(basis.rank(), group.len().trailing_zeros() as usize);
        let mut prod = Pauli::identity(5);
        for (g, &take) in gens.iter().zip(&picks) {
            if take {
                prod = multiply(&prod, g).unwrap();
            }
        }
        prop_assert!(basis.member(&prod).is_some());
        prop_assert_eq!(basis.member(&probe).is_some(), group.contains(&Bits::of(&probe)));
        let elems: Vec<Bits> = basis.span_elements().iter().map(Bits::of).collect();
        prop_assert_eq!(elems.len(), group.len());
        prop_assert!(elems.iter().all(|e| group.contains(e)));
    }

    #[test]
    fn centralizer_is_exact(gens in paulis(4, 3), probe in pauli(4)) {
        let basis = canonicalize(&gens);
        let c = centralizer(&basis);
        let commutes_all = gens.iter().all(|g| !g.anticommutes_with(&probe));
        prop_assert_eq!(c.member(&probe).is_some(), commutes_all);
        prop_assert_eq!(c.rank(), 2 * 4 - basis.rank());
    }
}
