//! Dense complex kernels: LU inversion with a condition estimate, complex Schur
//! form, Kronecker-sum resolvents and eigen-decomposition.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Schur};


use crate::error::{Error, Result};
use crate::C64;

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(m: &DMatrix<C64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `A⁻¹` together with the 1-norm condition number `‖A‖₁‖A⁻¹‖₁`.
pub fn inverse_with_condition(a: DMatrix<C64>) -> Option<(DMatrix<C64>, f64)> {
    let norm = norm1(&a);
    let inv = a.lu().try_inverse()?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    let cond = norm * norm1(&inv);
    Some((inv, cond))
}

/// `A = Q R Q†` with `R` upper triangular.
#[derive(Debug, Clone)]
pub struct ComplexSchur {
    pub q: DMatrix<C64>,
    pub r: DMatrix<C64>,
}

impl ComplexSchur {
    pub fn new(a: DMatrix<C64>) -> Result<Self> {
        let n = a.nrows();
        let scale = norm1(&a).max(1.0);
        let schur = Schur::try_new(a, f64::EPSILON, 10_000).ok_or(Error::IllConditioned {
            what: "Schur iteration",
            condition: f64::INFINITY,
        })?;
        let (q, mut r) = schur.unpack();
        for j in 0..n {
            for i in j + 1..n {
                // anything left below the diagonal is round-off
                if r[(i, j)].norm() > 1e-10 * scale {
                    return Err(Error::IllConditioned { what: "Schur form", condition: r[(i, j)].norm() });
                }
                r[(i, j)] = C64::new(0.0, 0.0);
            }
        }
        Ok(ComplexSchur { q, r })
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.r[(i, i)]).collect()
    }
}

/// Solver for `E·X − H X − X Hᵀ = B`, i.e. `(E − H⊗I − I⊗H) vec(X) = vec(B)`
/// with row-major `vec`, by Bartels–Stewart on the Schur form of `H`.
#[derive(Debug, Clone)]
pub struct KroneckerSumSolver {
    schur: ComplexSchur,
    /// row-major copy of `R`
    r: Vec<C64>,
}

impl KroneckerSumSolver {
    pub fn new(h: &DMatrix<C64>) -> Result<Self> {
        let schur = ComplexSchur::new(h.clone())?;
        let n = schur.dim();
        let mut r = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                r[i * n + j] = schur.r[(i, j)];
            }
        }
        Ok(KroneckerSumSolver { schur, r })
    }

    pub fn dim(&self) -> usize {
        self.schur.dim()
    }

    pub fn q(&self) -> &DMatrix<C64> {
        &self.schur.q
    }

    pub fn schur(&self) -> &ComplexSchur {
        &self.schur
    }

    /// Solves the triangular problem `E·Y − R Y − Y Rᵀ = C` in place (`c` row-major).
    pub fn solve_triangular(&self, energy: f64, c: &mut [C64]) -> Result<()> {
        let n = self.dim();
        let r = &self.r;
        let e = C64::new(energy, 0.0);
        let floor = f64::EPSILON * (1.0 + energy.abs());
        for a in (0..n).rev() {
            for b in (0..n).rev() {
                let mut acc = c[a * n + b];
                for k in a + 1..n {
                    acc += r[a * n + k] * c[k * n + b];
                }
                for k in b + 1..n {
                    acc += r[b * n + k] * c[a * n + k];
                }
                let denom = e - r[a * n + a] - r[b * n + b];
                if denom.norm() <= floor {
                    return Err(Error::SingularProjection { energy });
                }
                c[a * n + b] = acc / denom;
            }
        }
        Ok(())
    }

    /// Entries `X[a][b]` for the requested `(a, b)` of the solution with a rank-one
    /// right-hand side `B = e_c e_dᵀ`.
    pub fn unit_response(&self, energy: f64, c: usize, d: usize, wanted: &[(usize, usize)]) -> Result<Vec<C64>> {
        let n = self.dim();
        let q = &self.schur.q;
        // C = (Q† e_c)(Q† e_d)ᵀ
        let left: Vec<C64> = (0..n).map(|m| q[(c, m)].conj()).collect();
        let right: Vec<C64> = (0..n).map(|m| q[(d, m)].conj()).collect();
        let mut y = vec![C64::new(0.0, 0.0); n * n];
        for m in 0..n {
            for k in 0..n {
                y[m * n + k] = left[m] * right[k];
            }
        }
        self.solve_triangular(energy, &mut y)?;
        // X = Q Y Qᵀ, only at the wanted entries; P = Y Qᵀ column by needed b
        let mut cache: Vec<Option<Vec<C64>>> = vec![None; n];
        let mut out = Vec::with_capacity(wanted.len());
        for &(a, b) in wanted {
            if cache[b].is_none() {
                let col: Vec<C64> = (0..n)
                    .map(|m| (0..n).map(|k| y[m * n + k] * q[(b, k)]).sum())
                    .collect();
                cache[b] = Some(col);
            }
            let col = cache[b].as_ref().unwrap();
            out.push((0..n).map(|m| q[(a, m)] * col[m]).sum());
        }
        Ok(out)
    }
}

/// Right eigenvectors `V`, eigenvalues `λ` and `V⁻¹` of a general complex matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: DMatrix<C64>,
    pub inverse: DMatrix<C64>,
    pub condition: f64,
}

pub const EIGENVECTOR_CONDITION_LIMIT: f64 = 1e10;

impl EigenDecomposition {
    pub fn new(a: &DMatrix<C64>) -> Result<Self> {
        let n = a.nrows();
        let schur = ComplexSchur::new(a.clone())?;
        let r = &schur.r;
        let scale = norm1(r).max(f64::MIN_POSITIVE);
        let small = f64::EPSILON * scale;
        let mut y = DMatrix::<C64>::zeros(n, n);
        for k in 0..n {
            let lambda = r[(k, k)];
            y[(k, k)] = C64::new(1.0, 0.0);
            for j in (0..k).rev() {
                let mut acc = C64::new(0.0, 0.0);
                for l in j + 1..=k {
                    acc += r[(j, l)] * y[(l, k)];
                }
                let mut denom = r[(j, j)] - lambda;
                if denom.norm() < small {
                    denom = C64::new(small, 0.0);
                }
                y[(j, k)] = -acc / denom;
            }
        }
        let mut vectors = &schur.q * y;
        for mut col in vectors.column_iter_mut() {
            let norm = col.norm();
            col /= C64::new(norm, 0.0);
        }
        let (inverse, condition) = inverse_with_condition(vectors.clone()).ok_or(Error::IllConditioned {
            what: "eigenvector basis",
            condition: f64::INFINITY,
        })?;
        if condition > EIGENVECTOR_CONDITION_LIMIT {
            return Err(Error::IllConditioned { what: "eigenvector basis", condition });
        }
        Ok(EigenDecomposition { values: schur.eigenvalues(), vectors, inverse, condition })
    }

    /// `(z − A)⁻¹ = V diag(1/(z − λ)) V⁻¹`.
    pub fn resolvent(&self, z: C64) -> DMatrix<C64> {
        let n = self.values.len();
        let weights = DVector::from_iterator(n, self.values.iter().map(|l| C64::new(1.0, 0.0) / (z - l)));
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= weights[k];
        }
        scaled * &self.inverse
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> DMatrix<C64> {
        // small LCG, deterministic
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn schur_is_triangular_and_reconstructs() {
        let a = sample(7, 3);
        let s = ComplexSchur::new(a.clone()).unwrap();
        let back = &s.q * &s.r * s.q.adjoint();
        assert!((back - a).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn kronecker_sum_matches_dense() {
        let n = 4;
        let h = sample(n, 11);
        let solver = KroneckerSumSolver::new(&h).unwrap();
        let e = 0.37;
        let eye = DMatrix::<C64>::identity(n, n);
        let h2 = h.kronecker(&eye) + eye.kronecker(&h);
        let g2 = (DMatrix::<C64>::identity(n * n, n * n) * C64::new(e, 0.0) - h2).try_inverse().unwrap();
        let wanted: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        for &(c, d) in &[(0usize, 0usize), (1, 3), (2, 1)] {
            let got = solver.unit_response(e, c, d, &wanted).unwrap();
            for (k, &(a, b)) in wanted.iter().enumerate() {
                let expect = g2[(a * n + b, c * n + d)];
                assert!((got[k] - expect).norm() < 1e-10, "({a},{b})<-({c},{d})");
            }
        }
    }

    #[test]
    fn eigen_reconstructs() {
        let a = sample(6, 5);
        let eig = EigenDecomposition::new(&a).unwrap();
        let lam = DMatrix::from_diagonal(&DVector::from_vec(eig.values.clone()));
        let back = &eig.vectors * lam * &eig.inverse;
        assert!((back - &a).iter().all(|z| z.norm() < 1e-10));
        let z = C64::new(0.2, 0.9);
        let direct = (DMatrix::<C64>::identity(6, 6) * z - &a).try_inverse().unwrap();
        assert!((eig.resolvent(z) - direct).iter().all(|w| w.norm() < 1e-10));
    }

    #[test]
    fn inverse_condition_of_identity() {
        let (inv, cond) = inverse_with_condition(DMatrix::<C64>::identity(3, 3)).unwrap();
        assert_eq!(inv, DMatrix::<C64>::identity(3, 3));
        assert!((cond - 1.0).abs() < 1e-15);
        assert!(inverse_with_condition(DMatrix::<C64>::zeros(2, 2)).is_none());
    }
}
