//! Dense linear-algebra helpers: condition numbers and complex eigenpairs of
//! real nonsymmetric matrices.

use nalgebra::{Complex, DMatrix, DVector, Schur};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// 2-norm condition number; `inf` for singular or empty-rank matrices.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// All eigenvalues of a real square matrix, via the real Schur form.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigenvalues of a {:?} matrix", a.shape())));
    }
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite entry in state matrix".into()));
    }
    let (b, scale) = balance(a);
    let b = b / scale;
    // A defective cluster at zero can stall deflation; a real shift moves it away.
    let vals: Vec<C64> = [0.0, 0.125, -0.375]
        .iter()
        .find_map(|&sigma| {
            let shifted = &b + DMatrix::identity(b.nrows(), b.ncols()) * sigma;
            Schur::try_new(shifted, f64::EPSILON, 30 * b.nrows())
                .map(|s| s.complex_eigenvalues().iter().map(|v| (v - sigma) * scale).collect())
        })
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok(vals)
}

/// Diagonal similarity by powers of two that evens out row and column norms,
/// followed by the max-norm of the result (1 for a zero matrix).
fn balance(a: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let mut b = a.clone();
    let n = b.nrows();
    for _ in 0..64 {
        let mut done = true;
        for i in 0..n {
            let c: f64 = (0..n).filter(|&j| j != i).map(|j| b[(j, i)].abs()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| b[(i, j)].abs()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let f = 2f64.powi(((r / c).log2() / 2.0).round() as i32);
            if f != 1.0 && (c * f + r / f) < 0.95 * (c + r) {
                b.column_mut(i).scale_mut(f);
                b.row_mut(i).scale_mut(1.0 / f);
                done = false;
            }
        }
        if done {
            break;
        }
    }
    let m = b.amax();
    (b, if m > 0.0 { m } else { 1.0 })
}

/// Group of (nearly) coincident eigenvalues with an orthonormal basis of the
/// corresponding invariant subspace.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub values: Vec<C64>,
    pub basis: DMatrix<C64>,
}

fn start_vectors(n: usize, k: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, k, |i, j| {
        let (fi, fj) = (i as f64, j as f64);
        C64::new((1.0 + 0.7 * fi + 1.3 * fj).sin(), (0.3 + 1.1 * fi + 0.5 * fj).cos())
    })
}

fn orthonormalize(x: DMatrix<C64>) -> DMatrix<C64> {
    let k = x.ncols();
    let q = x.qr().q();
    q.columns(0, k).into_owned()
}

/// Eigenvalues with non-negative imaginary part, grouped into clusters.
///
/// Eigenvalues closer than `rel_tol` (relative to their modulus) share one
/// cluster; eigenvalues below `1e-6·max|λ|` form a single zero cluster. Each
/// basis is obtained by block inverse iteration.
pub fn eigen_clusters(a: &DMatrix<f64>, rel_tol: f64) -> Result<Vec<EigenCluster>> {
    let vals = eigenvalues(a)?;
    let n = a.nrows();
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let zero_tol = 1e-6 * scale;
    let mut upper: Vec<C64> = vals.into_iter().filter(|v| v.im >= 0.0).collect();
    upper.sort_by(|x, y| x.norm().total_cmp(&y.norm()).then(x.im.total_cmp(&y.im)));

    let mut groups: Vec<Vec<C64>> = vec![];
    for v in upper {
        let joined = match groups.last_mut() {
            Some(g) => {
                let head = g[0];
                let is_zero = head.norm() <= zero_tol && v.norm() <= zero_tol;
                let close = (v - head).norm() <= rel_tol * v.norm().max(head.norm());
                if is_zero || close {
                    g.push(v);
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if !joined {
            groups.push(vec![v]);
        }
    }

    let ac = to_complex(a);
    let frob = a.norm().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        let k = g.len();
        let mean = g.iter().sum::<C64>() / k as f64;
        let delta = 1e-9 * mean.norm() + 1e-13 * frob;
        let shift = mean + C64::new(delta, delta);
        let mut m = ac.clone();
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        let lu = m.lu();
        let mut x = orthonormalize(start_vectors(n, k));
        for _ in 0..3 {
            x = lu
                .solve(&x)
                .ok_or_else(|| Error::Numerical("inverse iteration hit a singular shift".into()))?;
            if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Numerical("inverse iteration diverged".into()));
            }
            x = orthonormalize(x);
        }
        out.push(EigenCluster { values: g, basis: x });
    }
    Ok(out)
}

/// Normalizes a complex vector to unit 2-norm with its largest entry real positive.
pub fn normalize_phase(v: &DVector<C64>) -> DVector<C64> {
    let (imax, _) = v
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let pivot = v[imax];
    if pivot.norm() == 0.0 {
        return v.clone();
    }
    let phase = pivot.conj() / pivot.norm();
    let w = v.map(|z| z * phase);
    let norm = w.norm();
    w / C64::new(norm, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_of_identity_and_singular() {
        assert_eq!(condition_number(&DMatrix::identity(3, 3)), 1.0);
        assert!(condition_number(&DMatrix::zeros(2, 2)).is_infinite());
    }

    #[test]
    fn oscillator_eigenpairs() {
        // ẍ + 4x = 0 and ÿ + 4y = 0: one double cluster at 2i
        let mut a = DMatrix::zeros(4, 4);
        a[(0, 2)] = 1.0;
        a[(1, 3)] = 1.0;
        a[(2, 0)] = -4.0;
        a[(3, 1)] = -4.0;
        let cl = eigen_clusters(&a, 1e-8).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].values.len(), 2);
        let ac = to_complex(&a);
        let lam = C64::new(0.0, 2.0);
        let r = &ac * &cl[0].basis - &cl[0].basis * lam;
        assert!(r.norm() < 1e-9);
    }

    #[test]
    fn free_rigid_body_with_oscillator() {
        // double integrators (defective zeros) coupled to a stiff oscillator
        let n = 8;
        let mut a = DMatrix::zeros(n, n);
        for k in 0..3 {
            a[(k, k + 3)] = 1.0;
        }
        a[(6, 7)] = 1.0;
        a[(7, 6)] = -1e4;
        a[(7, 0)] = 3.0;
        a[(4, 7)] = 0.5;
        let vals = eigenvalues(&a).unwrap();
        assert_eq!(vals.len(), n);
        let zeros = vals.iter().filter(|v| v.norm() < 1e-5).count();
        assert_eq!(zeros, 6);
        assert!(vals.iter().any(|v| (v.im.abs() - 100.0).abs() < 1e-9));
    }
}
