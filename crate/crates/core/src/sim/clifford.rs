//! Single-qubit gates and the 24-element single-qubit Clifford group.

use num_complex::Complex64;

pub type Mat2 = [[Complex64; 2]; 2];

pub mod gate {
    use super::Mat2;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const L: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);
    const R: Complex64 = Complex64::new(FRAC_1_SQRT_2, 0.0);

    pub const ID: Mat2 = [[L, O], [O, L]];
    pub const X: Mat2 = [[O, L], [L, O]];
    pub const Y: Mat2 = [[O, Complex64::new(0.0, -1.0)], [I, O]];
    pub const Z: Mat2 = [[L, O], [O, Complex64::new(-1.0, 0.0)]];
    pub const H: Mat2 = [[R, R], [R, Complex64::new(-FRAC_1_SQRT_2, 0.0)]];
    pub const S: Mat2 = [[L, O], [O, I]];
    pub const S_DAG: Mat2 = [[L, O], [O, Complex64::new(0.0, -1.0)]];

    /// exp(iπ/4 Z).
    pub fn exp_z_quarter() -> Mat2 {
        let p = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        [[p, O], [O, p.conj()]]
    }

    /// exp(−iπ/4 X) = (I − iX)/√2.
    pub fn exp_minus_x_quarter() -> Mat2 {
        let m = Complex64::new(0.0, -FRAC_1_SQRT_2);
        [[R, m], [m, R]]
    }
}

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// Representative with the first nonzero entry real and positive.
fn fix_phase(a: &Mat2) -> Mat2 {
    let first = a.iter().flatten().find(|x| x.norm() > 1e-9).copied().expect("nonzero matrix");
    let ph = first.conj() / first.norm();
    a.map(|row| row.map(|x| x * ph))
}

fn close(a: &Mat2, b: &Mat2) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-9)
}

/// The 24 single-qubit Cliffords modulo global phase, identity first.
pub fn single_qubit_cliffords() -> Vec<Mat2> {
    let mut group = vec![gate::ID];
    let mut frontier = vec![gate::ID];
    while let Some(m) = frontier.pop() {
        for g in [gate::H, gate::S] {
            let next = fix_phase(&mul(&g, &m));
            if !group.iter().any(|x| close(x, &next)) {
                group.push(next);
                frontier.push(next);
            }
        }
    }
    group
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_24_elements_and_permutes_paulis() {
        let group = single_qubit_cliffords();
        assert_eq!(group.len(), 24);
        let paulis = [gate::X, gate::Y, gate::Z];
        for c in &group {
            let u = mul(c, &dagger(c));
            assert!(close(&u, &gate::ID));
            for p in &paulis {
                let conj = mul(&mul(c, p), &dagger(c));
                let hit = paulis.iter().any(|q| close(&conj, q) || close(&conj, &q.map(|r| r.map(|x| -x))));
                assert!(hit, "Clifford must map Paulis to signed Paulis");
            }
        }
    }

    #[test]
    fn quarter_rotations_are_cliffords() {
        let group = single_qubit_cliffords();
        for m in [gate::exp_z_quarter(), gate::exp_minus_x_quarter()] {
            assert!(group.iter().any(|c| close(c, &fix_phase(&m))));
        }
    }
}
