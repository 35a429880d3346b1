//! Dense numeric kernel: partial-pivot LU, inversion, determinants, the
//! Perron pair of an adjacency matrix, and pseudoinverses of symmetric
//! matrices with a known one-dimensional kernel.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Condition-number estimate above which a matrix is treated as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e12;

/// LU factorisation with partial pivoting, `P·M = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(m: &Matrix) -> Lu {
        let n = m.order();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&a, &b| lu[(a, col)].abs().total_cmp(&lu[(b, col)].abs()))
                .unwrap_or(col);
            if lu[(pivot_row, col)] == 0.0 {
                singular = true;
                continue;
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(col, pivot_row);
                sign = -sign;
            }
            let pivot = lu[(col, col)];
            for r in col + 1..n {
                let factor = lu[(r, col)] / pivot;
                lu[(r, col)] = factor;
                if factor != 0.0 {
                    for j in col + 1..n {
                        lu[(r, j)] -= factor * lu[(col, j)];
                    }
                }
            }
        }
        Lu {
            lu,
            perm,
            sign,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn determinant(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.lu.order()).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }

    /// Solves `M·x = b`. Callers must check [`Lu::is_singular`] first.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.order();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    fn inverse_unchecked(&self) -> Matrix {
        let n = self.lu.order();
        let mut inv = Matrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            for (i, x) in self.solve(&e).into_iter().enumerate() {
                inv[(i, j)] = x;
            }
        }
        inv
    }
}

/// Inverse of a nonsingular matrix. Fails when a pivot vanishes or the
/// 1-norm condition number exceeds [`SINGULARITY_THRESHOLD`].
pub fn invert(m: &Matrix) -> Result<Matrix> {
    let lu = Lu::factor(m);
    if lu.is_singular() {
        return Err(Error::Singular {
            condition: f64::INFINITY,
        });
    }
    let inv = lu.inverse_unchecked();
    let condition = m.norm_one() * inv.norm_one();
    if !condition.is_finite() || condition > SINGULARITY_THRESHOLD {
        return Err(Error::Singular { condition });
    }
    Ok(inv)
}

pub fn determinant(m: &Matrix) -> f64 {
    Lu::factor(m).determinant()
}

/// Spectral radius and Perron vector of a connected graph's adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub rho: f64,
    /// Strictly positive, normalised to sum 1.
    pub perron: Vec<f64>,
}

impl SpectralData {
    /// Perron vector rescaled to unit Euclidean norm.
    pub fn unit_perron(&self) -> Vec<f64> {
        let norm = self.perron.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.perron.iter().map(|x| x / norm).collect()
    }

    /// `‖p‖₂²` under the sum-1 normalisation.
    pub fn perron_norm_sq(&self) -> f64 {
        self.perron.iter().map(|x| x * x).sum()
    }
}

pub const POWER_ITERATION_CAP: usize = 1_000_000;

/// Shifted power iteration on `A + c·I`, `c` the maximum row sum, which is
/// primitive for connected graphs even when `A` is bipartite.
pub fn spectral_data(a: &Matrix) -> Result<SpectralData> {
    let n = a.order();
    let shift = a.row_sums().into_iter().fold(0.0, f64::max);
    let apply = |x: &[f64]| -> Vec<f64> {
        a.matvec(x)
            .iter()
            .zip(x)
            .map(|(ax, xi)| ax + shift * xi)
            .collect()
    };

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut rayleigh = f64::NAN;
    let mut settled = 0usize;
    for iter in 0..POWER_ITERATION_CAP {
        let y = apply(&x);
        let next_rayleigh: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NoConvergence { iterations: iter });
        }
        let y: Vec<f64> = y.into_iter().map(|v| v / norm).collect();
        let step = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let rayleigh_settled = (next_rayleigh - rayleigh).abs() < 1e-13 * next_rayleigh.abs();
        rayleigh = next_rayleigh;
        x = y;
        if rayleigh_settled {
            // The eigenvector converges at the square root of the Rayleigh
            // rate; keep going until the iterate itself stops moving.
            settled += 1;
            if step < 1e-15 || settled > 10_000 {
                break;
            }
        }
        if iter + 1 == POWER_ITERATION_CAP {
            return Err(Error::NoConvergence {
                iterations: POWER_ITERATION_CAP,
            });
        }
    }

    let ax = a.matvec(&x);
    let rho: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
    let residual = ax
        .iter()
        .zip(&x)
        .map(|(a, b)| (a - rho * b).abs())
        .fold(0.0, f64::max);
    if !rho.is_finite() || rho <= 0.0 || residual > 1e-9 * rho || x.iter().any(|&v| v <= 0.0) {
        return Err(Error::NoConvergence {
            iterations: POWER_ITERATION_CAP,
        });
    }
    let total: f64 = x.iter().sum();
    Ok(SpectralData {
        rho,
        perron: x.into_iter().map(|v| v / total).collect(),
    })
}

/// Pseudoinverse of a symmetric matrix whose kernel is spanned by `kernel`.
///
/// With `u = kernel/‖kernel‖` and any `α > 0`, `M + α·u·uᵀ` is nonsingular
/// and `M⁺ = (M + α·u·uᵀ)⁻¹ − u·uᵀ/α`.
pub fn symmetric_pseudoinverse(m: &Matrix, kernel: &[f64]) -> Result<Matrix> {
    let n = m.order();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "pseudoinverse needs order > 1, got {n}"
        )));
    }
    if kernel.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: kernel.len(),
        });
    }
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    if !m.is_symmetric(1e-12 * scale) {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let knorm = kernel.iter().map(|x| x * x).sum::<f64>().sqrt();
    if knorm.is_nan() || knorm <= 0.0 {
        return Err(Error::KernelMismatch { residual: f64::NAN });
    }
    let u: Vec<f64> = kernel.iter().map(|x| x / knorm).collect();
    let residual = m.matvec(&u).iter().map(|x| x.abs()).fold(0.0, f64::max);
    if residual > 1e-9 * scale {
        return Err(Error::KernelMismatch { residual });
    }

    let trace: f64 = m.diagonal().iter().sum();
    let alpha = if trace > 0.0 { trace / n as f64 } else { 1.0 };
    let proj = Matrix::from_fn(n, |i, j| u[i] * u[j]);
    let inv = invert(&m.add(&proj.scaled(alpha)))?;
    let pinv = inv.sub(&proj.scaled(1.0 / alpha));
    // symmetrise away rounding asymmetry
    Ok(Matrix::from_fn(n, |i, j| {
        0.5 * (pinv[(i, j)] + pinv[(j, i)])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn inverts_two_by_two() {
        let inv = invert(&m(&[&[2.0, -1.0], &[-1.0, 2.0]])).unwrap();
        let expected = m(&[&[2.0, 1.0], &[1.0, 2.0]]).scaled(1.0 / 3.0);
        assert!(inv.max_abs_diff(&expected) < 1e-15);
        assert_eq!(invert(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn rank_one_is_singular() {
        assert!(matches!(
            invert(&m(&[&[1.0, 1.0], &[1.0, 1.0]])),
            Err(Error::Singular { .. })
        ));
        // nonzero pivots but hopeless conditioning
        let near = m(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-14]]);
        assert!(matches!(invert(&near), Err(Error::Singular { .. })));
    }

    #[test]
    fn determinants_of_forest_matrices() {
        let il = |g: &Graph| Matrix::identity(g.order()).add(&g.laplacian());
        assert!((determinant(&il(&Graph::path(2).unwrap())) - 3.0).abs() < 1e-12);
        assert!((determinant(&il(&Graph::path(4).unwrap())) - 21.0).abs() < 1e-12);
        assert!(determinant(&Graph::complete(4).unwrap().laplacian()).abs() < 1e-12);
        assert_eq!(determinant(&m(&[&[0.0, 1.0], &[1.0, 0.0]])), -1.0);
    }

    #[test]
    fn lu_solve_matches_inverse() {
        let a = m(&[&[4.0, 1.0, 2.0], &[1.0, 5.0, 3.0], &[2.0, 3.0, 6.0]]);
        let x = Lu::factor(&a).solve(&[1.0, 2.0, 3.0]);
        let back = a.matvec(&x);
        for (b, e) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((b - e).abs() < 1e-13);
        }
    }

    #[test]
    fn spectral_data_of_small_graphs() {
        let p2 = spectral_data(&Graph::path(2).unwrap().adjacency_matrix()).unwrap();
        assert!((p2.rho - 1.0).abs() < 1e-12);
        assert!(p2.perron.iter().all(|x| (x - 0.5).abs() < 1e-12));

        let k3 = spectral_data(&Graph::complete(3).unwrap().adjacency_matrix()).unwrap();
        assert!((k3.rho - 2.0).abs() < 1e-12);
        assert!(k3.perron.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));

        let p3 = spectral_data(&Graph::path(3).unwrap().adjacency_matrix()).unwrap();
        assert!((p3.rho - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pseudoinverse_of_p2_laplacian() {
        let l = Graph::path(2).unwrap().laplacian();
        let pinv = symmetric_pseudoinverse(&l, &[1.0, 1.0]).unwrap();
        let expected = m(&[&[1.0, -1.0], &[-1.0, 1.0]]).scaled(0.25);
        assert!(pinv.max_abs_diff(&expected) < 1e-15);

        // para-Laplacian ρI − A coincides with L on P2
        let a = Graph::path(2).unwrap().adjacency_matrix();
        let sd = spectral_data(&a).unwrap();
        let para = Matrix::identity(2).scaled(sd.rho).sub(&a);
        let pinv2 = symmetric_pseudoinverse(&para, &sd.perron).unwrap();
        assert!(pinv2.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn pseudoinverse_rejects_bad_input() {
        assert!(symmetric_pseudoinverse(&Matrix::zeros(1), &[1.0]).is_err());
        let l = Graph::path(3).unwrap().laplacian();
        assert!(matches!(
            symmetric_pseudoinverse(&l, &[1.0, 0.0, 0.0]),
            Err(Error::KernelMismatch { .. })
        ));
    }
}
