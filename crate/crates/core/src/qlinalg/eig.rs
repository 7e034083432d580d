use super::mat::CMat;
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// Returns eigenvalues in ascending order and the matrix whose columns are
/// the matching orthonormal eigenvectors. Intended for the matrix sizes this
/// crate actually uses (dimension up to a few hundred).
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.dim();
    let mut a = m.symmetrize();
    let mut v = CMat::identity(n);
    if n == 1 {
        return (vec![a[(0, 0)].re], v);
    }

    let scale = a.frobenius_norm().max(1.0);
    let tol = 1e-15 * scale;
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Unitary 2x2 rotation diagonalizing [[app, apq], [apq*, aqq]].
                let abs = apq.norm();
                let phase = apq / abs;
                let theta = 0.5 * (-2.0 * abs).atan2(app - aqq);
                let c = theta.cos();
                let s = phase * theta.sin();
                rotate(&mut a, p, q, c, s);
                rotate_cols(&mut v, p, q, c, s);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vecs = CMat::zeros(n);
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for r in 0..n {
            vecs[(r, new_col)] = v[(r, old_col)];
        }
    }
    (vals, vecs)
}

/// Conjugates `a` by the rotation J acting on coordinates p, q:
/// columns: J = [[c, s], [-conj(s), c]] with real c.
fn rotate(a: &mut CMat, p: usize, q: usize, c: f64, s: Complex64) {
    let n = a.dim();
    // A <- J^dagger A J; first the columns, then the rows.
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * c - arq * s.conj();
        a[(r, q)] = arp * s + arq * c;
    }
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = apc * c - aqc * s;
        a[(q, col)] = apc * s.conj() + aqc * c;
    }
}

fn rotate_cols(v: &mut CMat, p: usize, q: usize, c: f64, s: Complex64) {
    let n = v.dim();
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * c - vrq * s.conj();
        v[(r, q)] = vrp * s + vrq * c;
    }
}
