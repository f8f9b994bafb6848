mod common;

use common::{random_code, random_layout};
use holowedge::hierarchy::{
    classify_level, encoding_isometry, logical_action, py_certify, transversal_action, transversal_census, Gate,
    Layout, Variant,
};
use holowedge::{Pauli, Region, SubsystemCode};
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn one_qubit(g: &Gate) -> Option<[C; 4]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Some(match g {
        Gate::H(_) => [c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
        Gate::S(_) => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        // S·H
        Gate::K(_) => [c(h, 0.0), c(h, 0.0), c(0.0, h), c(0.0, -h)],
        Gate::X(_) => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        Gate::Y(_) => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        Gate::Z(_) => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => return None,
    })
}

/// Dense gate on `n` qubits, qubit `j` being bit `j`.
fn gate_matrix(g: &Gate, n: usize) -> DMatrix<C> {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        match *g {
            Gate::Cx(a, b) => m[(if col >> a & 1 == 1 { col ^ 1 << b } else { col }, col)] = c(1.0, 0.0),
            Gate::Cz(a, b) => {
                m[(col, col)] = c(if col >> a & col >> b & 1 == 1 { -1.0 } else { 1.0 }, 0.0)
            }
            Gate::Swap(a, b) => {
                let (ba, bb) = (col >> a & 1, col >> b & 1);
                let row = col & !(1 << a) & !(1 << b) | bb << a | ba << b;
                m[(row, col)] = c(1.0, 0.0);
            }
            ref single => {
                let u = one_qubit(single).unwrap();
                let j = single.sites()[0];
                let bit = col >> j & 1;
                for out in 0..2 {
                    m[(col & !(1 << j) | out << j, col)] += u[2 * out + bit];
                }
            }
        }
    }
    m
}

fn layout_matrix(l: &Layout) -> DMatrix<C> {
    let dim = 1 << l.n();
    l.gates()
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc, g| gate_matrix(g, l.n()) * acc)
}

fn pauli_matrix(p: &Pauli) -> DMatrix<C> {
    let n = p.n();
    let dim = 1 << n;
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase() as usize];
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        // X^x Z^z |col>
        let mut row = col;
        let mut sign = 1.0;
        for j in 0..n {
            if p.z(j) && col >> j & 1 == 1 {
                sign = -sign;
            }
            if p.x(j) {
                row ^= 1 << j;
            }
        }
        m[(row, col)] = phase * sign;
    }
    m
}

fn close(a: &DMatrix<C>, b: &DMatrix<C>) -> bool {
    (a - b).iter().all(|e| e.norm() < 1e-9)
}

fn inverse(l: &Layout) -> Layout {
    let mut gates = Vec::new();
    for g in l.gates().iter().rev() {
        let reps = match g {
            Gate::S(_) => 3,
            Gate::K(_) => 2,
            _ => 1,
        };
        gates.extend(std::iter::repeat_n(*g, reps));
    }
    Layout::new(l.n(), gates).unwrap()
}

fn layout_strategy(max_n: usize, max_gates: usize) -> impl Strategy<Value = Layout> {
    (1..=max_n, 0..=max_gates, any::<u64>()).prop_map(|(n, g, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_layout(n, g, &mut rng)
    })
}

proptest! {
    #[test]
    fn tableau_matches_dense(l in layout_strategy(3, 12)) {
        let u = layout_matrix(&l);
        prop_assert!(close(&l.dense(), &u));
        let n = l.n();
        for j in 0..n {
            for q in [Pauli::single(n, j, holowedge::symplectic::Letter::X), Pauli::single(n, j, holowedge::symplectic::Letter::Z)] {
                let want = &u * pauli_matrix(&q) * u.adjoint();
                prop_assert!(close(&pauli_matrix(&l.tableau().conjugate(&q)), &want), "{} under {}", q, l.to_text());
            }
        }
    }

    #[test]
    fn composition_is_functorial(a in layout_strategy(4, 10), seed in any::<u64>(), p in any::<u64>()) {
        let n = a.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_layout(n, 10, &mut rng);
        let letters: String = (0..n).map(|j| ['I', 'X', 'Y', 'Z'][(p >> (2 * j)) as usize & 3]).collect();
        let q: Pauli = letters.parse().unwrap();
        let ab = a.then(&b);
        prop_assert_eq!(ab.tableau().conjugate(&q), b.tableau().conjugate(&a.tableau().conjugate(&q)));
        prop_assert_eq!(a.tableau().then(b.tableau()), ab.tableau().clone());
        prop_assert!(ab.spread() <= a.spread() + b.spread());
        prop_assert!(inverse(&a).then(&a).tableau().conjugate(&q) == q);
    }

    #[test]
    fn group_commutator_spread(u in layout_strategy(6, 8), seed in any::<u64>()) {
        let n = u.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let paulis: Vec<Gate> = (0..n)
            .filter_map(|j| match rng.gen_range(0..4) {
                1 => Some(Gate::X(j)),
                2 => Some(Gate::Y(j)),
                3 => Some(Gate::Z(j)),
                _ => None,
            })
            .collect();
        let p = Layout::new(n, paulis).unwrap();
        prop_assert_eq!(p.spread(), 0);
        prop_assert!(inverse(&u).spread() <= u.spread());
        // U P U† P† as a circuit: P† first, then U†, P, U.
        let comm = p.then(&inverse(&u)).then(&p).then(&u);
        prop_assert!(comm.spread() <= 2 * u.spread());
    }

    #[test]
    fn layout_text_round_trips(l in layout_strategy(5, 15)) {
        let back = Layout::parse(&l.to_text(), l.n()).unwrap();
        prop_assert_eq!(back.gates(), l.gates());
    }
}

/// `V_0† U V_0` conjugates each logical Pauli to the reported image.
#[test]
fn transversal_actions_match_dense_encoding() {
    let code = SubsystemCode::five_qubit();
    let v0 = encoding_isometry(&code).unwrap();
    for g in code.stabilizers().rows() {
        assert!(close(&(pauli_matrix(g) * &v0), &v0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    use rand::Rng;
    let mut checked = 0;
    while checked < 40 {
        let idx: Vec<usize> = if checked < 24 {
            vec![checked; 5]
        } else {
            (0..5).map(|_| rng.gen_range(0..24)).collect()
        };
        let action = transversal_action(&code, &[0], &idx).unwrap();
        let layout = Layout::transversal(&idx);
        assert_eq!(action, logical_action(&code, &[0], &layout).unwrap());
        let u = layout_matrix(&layout);
        let ul = v0.adjoint() * &u * &v0;
        let unitary = close(&(ul.adjoint() * &ul), &DMatrix::identity(2, 2));
        assert_eq!(unitary, !action.rejected(), "{idx:?}");
        if unitary {
            for (q, img) in [("X", &action.images[0].0), ("Z", &action.images[0].1)] {
                let q: Pauli = q.parse().unwrap();
                assert!(close(&(&ul * pauli_matrix(&q) * ul.adjoint()), &pauli_matrix(img)), "{idx:?}");
            }
        }
        checked += 1;
    }
}

/// Every two-region certificate on a random gauge code bounds the exhaustive
/// transversal census.
#[test]
fn certificates_bound_random_censuses() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut certified = 0;
    for _ in 0..12 {
        let code = random_code(4, 2, &mut rng);
        let n = code.n();
        let mut dressed_one = false;
        let mut bare_one = false;
        for mask in 1u32..(1 << n) - 1 {
            let r0 = Region::from_sites(n, (0..n).filter(|i| mask >> i & 1 == 1));
            let parts = [r0.clone(), r0.complement()];
            dressed_one |= py_certify(&code, &[0], &parts, 0, Variant::Dressed).unwrap().is_ok_and(|c| c.level == 1);
            bare_one |= py_certify(&code, &[0], &parts, 0, Variant::Bare).unwrap().is_ok_and(|c| c.level == 1);
        }
        let census = transversal_census(&code, &[0], None).unwrap();
        assert!(census.exhaustive);
        if dressed_one {
            certified += 1;
            assert!(census.max_level().is_none_or(|l| l <= 1));
        }
        if bare_one {
            certified += 1;
            assert!(census.max_bare_level().is_none_or(|l| l <= 1));
        }
    }
    assert!(certified > 0, "no random code admitted a certificate");
}

#[test]
fn classify_levels_of_transversal_paulis() {
    let code = SubsystemCode::five_qubit();
    assert_eq!(classify_level(&logical_action(&code, &[0], &Layout::identity(5)).unwrap()), Some(0));
    for g in [Gate::X, Gate::Y, Gate::Z] {
        assert_eq!(classify_level(&logical_action(&code, &[0], &Layout::uniform(5, g)).unwrap()), Some(1));
    }
    assert_eq!(classify_level(&logical_action(&code, &[0], &Layout::uniform(5, Gate::H)).unwrap()), None);
}
