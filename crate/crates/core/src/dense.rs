//! Dense state vectors and matrices for desk-scale cross-checks.
//!
//! Qubit `j` is bit `j` of a basis-state index.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::symplectic::Pauli;

pub type C64 = Complex64;

fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

fn masks(p: &Pauli) -> (usize, usize) {
    assert!(p.n() < usize::BITS as usize);
    let mut x = 0usize;
    let mut z = 0usize;
    for j in 0..p.n() {
        if p.x(j) {
            x |= 1 << j;
        }
        if p.z(j) {
            z |= 1 << j;
        }
    }
    (x, z)
}

/// `P |psi>` for a Pauli on `log2(len)` qubits.
pub fn apply_pauli(p: &Pauli, psi: &[C64]) -> Vec<C64> {
    assert_eq!(psi.len(), 1 << p.n());
    let (x, z) = masks(p);
    let c = i_pow(p.phase());
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    for (b, &a) in psi.iter().enumerate() {
        let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out[b ^ x] = c * a * sign;
    }
    out
}

/// Dense matrix of a Pauli operator.
pub fn pauli_matrix(p: &Pauli) -> DMatrix<C64> {
    let dim = 1usize << p.n();
    let (x, z) = masks(p);
    let c = i_pow(p.phase());
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        m[(b ^ x, b)] = c * sign;
    }
    m
}

pub fn norm(psi: &[C64]) -> f64 {
    psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// The normalized joint `+1` eigenvector of `n` independent commuting
/// Hermitian Paulis on `n` qubits.
pub fn stabilizer_state(gens: &[Pauli]) -> Vec<C64> {
    let n = gens.first().map_or(0, Pauli::n);
    let dim = 1usize << n;
    for seed in 0..dim {
        let mut psi = vec![C64::new(0.0, 0.0); dim];
        psi[seed] = C64::new(1.0, 0.0);
        for g in gens {
            let gp = apply_pauli(g, &psi);
            for (a, b) in psi.iter_mut().zip(gp) {
                *a = (*a + b) * 0.5;
            }
        }
        let nrm = norm(&psi);
        if nrm > 1e-6 {
            for a in psi.iter_mut() {
                *a /= nrm;
            }
            return psi;
        }
    }
    panic!("generators have no common +1 eigenvector");
}

/// Reshape a state on `legs` qubits into the matrix from the qubits not in
/// `rows` to the qubits in `rows` (row index bits follow `rows` order).
pub fn bipartition_matrix(psi: &[C64], legs: usize, rows: &[usize]) -> DMatrix<C64> {
    let cols: Vec<usize> = (0..legs).filter(|j| !rows.contains(j)).collect();
    let mut m = DMatrix::zeros(1 << rows.len(), 1 << cols.len());
    for (b, &a) in psi.iter().enumerate() {
        let r = rows
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| acc | (((b >> q) & 1) << k));
        let c = cols
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| acc | (((b >> q) & 1) << k));
        m[(r, c)] = a;
    }
    m
}

/// Is `M M^dagger` proportional to the identity (nonzero)?
pub fn is_scaled_coisometry(m: &DMatrix<C64>, tol: f64) -> bool {
    let g = m * m.adjoint();
    let scale = g.trace().re / g.nrows() as f64;
    if scale <= tol {
        return false;
    }
    let id = DMatrix::<C64>::identity(g.nrows(), g.nrows()) * C64::new(scale, 0.0);
    (g - id).iter().all(|e| e.norm() <= tol * scale.max(1.0))
}

/// Sum of singular values.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Project qubits `a` and `b` of `psi` onto the unnormalized `|00> + |11>`,
/// dropping them from the register.
pub fn contract_pair(psi: &[C64], legs: usize, a: usize, b: usize) -> Vec<C64> {
    assert!(a != b && a < legs && b < legs);
    let keep: Vec<usize> = (0..legs).filter(|&q| q != a && q != b).collect();
    let mut out = vec![C64::new(0.0, 0.0); 1 << keep.len()];
    for (b_idx, &amp) in psi.iter().enumerate() {
        if ((b_idx >> a) & 1) != ((b_idx >> b) & 1) {
            continue;
        }
        let r = keep
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| acc | (((b_idx >> q) & 1) << k));
        out[r] += amp;
    }
    out
}

/// Tensor product `phi ⊗ psi`, with `phi`'s qubits first.
pub fn kron_states(phi: &[C64], psi: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(phi.len() * psi.len());
    for &b in psi {
        for &a in phi {
            out.push(a * b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state_is_stabilized() {
        let xx: Pauli = "XX".parse().unwrap();
        let zz: Pauli = "ZZ".parse().unwrap();
        let psi = stabilizer_state(&[xx.clone(), zz.clone()]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi[0].re - h).abs() < 1e-12 && (psi[3].re - h).abs() < 1e-12);
        let yy = multiply_dense(&xx, &zz);
        // XX·ZZ = -YY, so the Bell state has YY eigenvalue -1.
        let v = apply_pauli(&yy, &psi);
        assert!((v[0] - psi[0]).norm() < 1e-12);
    }

    fn multiply_dense(a: &Pauli, b: &Pauli) -> Pauli {
        crate::symplectic::multiply(a, b).unwrap()
    }

    #[test]
    fn pauli_matrix_matches_apply() {
        let p: Pauli = "-iXYZ".parse().unwrap();
        let m = pauli_matrix(&p);
        let psi: Vec<C64> = (0..8).map(|k| C64::new(k as f64, 1.0 - k as f64)).collect();
        let v = apply_pauli(&p, &psi);
        let mv = &m * nalgebra::DVector::from_vec(psi);
        for k in 0..8 {
            assert!((v[k] - mv[k]).norm() < 1e-12);
        }
    }
}
