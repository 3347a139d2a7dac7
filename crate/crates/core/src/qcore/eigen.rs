//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL iterations.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Hermitian, Matrix, State, C64};
use crate::{Error, Result};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<State>,
}

const MAX_QL_SWEEPS: usize = 60;

/// Full eigendecomposition of a Hermitian operator.
pub fn eig_hermitian(h: &Hermitian) -> Result<EigenDecomposition> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidParameter { name: "operator", reason: "dimension must be positive" });
    }
    if h.matrix().as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("operator entries"));
    }

    let mut a = h.matrix().clone();
    let mut q = Matrix::identity(n);
    tridiagonalize(&mut a, &mut q);

    // Remove the phases of the sub-diagonal so the tridiagonal is real.
    let mut diag = vec![0.0; n];
    let mut sub = vec![0.0; n];
    let mut phase = vec![C64::new(1.0, 0.0); n];
    for i in 0..n {
        diag[i] = a[(i, i)].re;
        if i + 1 < n {
            let e = a[(i + 1, i)];
            let r = e.norm();
            sub[i + 1] = r;
            phase[i + 1] = if r > 0.0 { phase[i] * e / r } else { phase[i] };
        }
    }

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut diag, &mut sub, &mut z, n)?;

    // Eigenvectors: Q * diag(phase) * Z.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in &order {
        values.push(diag[k]);
        let col: Vec<C64> = (0..n).map(|i| phase[i] * z[i * n + k]).collect();
        let v = q.apply(&col);
        vectors.push(State::normalized(v)?);
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Reduces `a` in place to Hermitian tridiagonal form `Q^dagger A Q` and
/// accumulates the reflectors into `q`.
fn tridiagonalize(a: &mut Matrix, q: &mut Matrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let col_norm = ((k + 1)..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if col_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        for z in v.iter_mut() {
            *z = C64::new(0.0, 0.0);
        }
        for i in (k + 1)..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] += ph * col_norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // A <- (1 - 2vv^+) A (1 - 2vv^+) = A - 2(v w^+ + w v^+), w = Av - (v^+Av) v
        for i in 0..n {
            p[i] = ((k + 1)..n).map(|j| a[(i, j)] * v[j]).sum();
        }
        let kappa: f64 = ((k + 1)..n).map(|i| (v[i].conj() * p[i]).re).sum();
        for i in 0..n {
            p[i] -= v[i] * kappa;
        }
        for i in 0..n {
            for j in 0..n {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                if upd != C64::new(0.0, 0.0) {
                    a[(i, j)] -= upd * 2.0;
                }
            }
        }

        // Q <- Q (1 - 2vv^+)
        for i in 0..n {
            let qv: C64 = ((k + 1)..n).map(|j| q[(i, j)] * v[j]).sum();
            for j in (k + 1)..n {
                q[(i, j)] -= qv * v[j].conj() * 2.0;
            }
        }
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix.
///
/// `d` holds the diagonal, `e[i]` the element `(i, i-1)` (with `e[0]` unused).
/// Rotations are accumulated into the row-major `n x n` matrix `z`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::NoConvergence("Hermitian eigensolver"));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk = &mut z[k * n..(k + 1) * n];
                        h = zk[i + 1];
                        zk[i + 1] = s * zk[i] + c * h;
                        zk[i] = c * zk[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c, pauli};

    fn residual(h: &Hermitian, eig: &EigenDecomposition) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            let hv = h.apply(v.amplitudes());
            for (a, b) in hv.iter().zip(v.amplitudes()) {
                worst = worst.max((a - b * *l).norm());
            }
        }
        worst
    }

    #[test]
    fn sigma_x_spectrum_and_vectors() {
        let eig = eig_hermitian(&pauli::x()).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let s = 1.0 / 2.0f64.sqrt();
        let minus = State::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap();
        let plus = State::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap();
        assert!((eig.vectors[0].fidelity(&minus) - 1.0).abs() < 1e-12);
        assert!((eig.vectors[1].fidelity(&plus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_values_come_back_sorted() {
        let eig = eig_hermitian(&Hermitian::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn complex_dense_matrix_residual() {
        // Deterministic pseudo-random Hermitian 7x7 with complex entries.
        let n = 7;
        let m = Matrix::from_fn(n, |i, j| {
            let x = ((i * 31 + j * 17) % 13) as f64 / 13.0 - 0.5;
            let y = ((i * 7 + j * 29) % 11) as f64 / 11.0 - 0.5;
            c(x, y)
        });
        let h = Hermitian::from_matrix_unchecked(m.add(&m.adjoint()));
        let eig = eig_hermitian(&h).unwrap();
        assert!(residual(&h, &eig) < 1e-12);
        for a in 0..n {
            for b in 0..n {
                let ip = eig.vectors[a].inner(&eig.vectors[b]).norm();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12);
            }
        }
        let sum_sq: f64 = eig.values.iter().map(|l| l * l).sum();
        assert!((sum_sq.sqrt() - h.frobenius_norm()).abs() < 1e-12);
    }

    #[test]
    fn highly_degenerate_spectrum() {
        // 1 - |+><+| in dimension 16: eigenvalues {0, 1 x 15}.
        let plus = State::uniform(16);
        let h = Hermitian::identity(16).minus(&Hermitian::projector(plus.amplitudes()));
        let eig = eig_hermitian(&h).unwrap();
        assert!(eig.values[0].abs() < 1e-13);
        assert!(eig.values[1..].iter().all(|v| (v - 1.0).abs() < 1e-13));
        assert!(residual(&h, &eig) < 1e-12);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let h = Hermitian::diagonal(&[f64::NAN, 1.0]);
        assert!(matches!(eig_hermitian(&h), Err(Error::NonFinite(_))));
    }
}
