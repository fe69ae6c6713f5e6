use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::operator::Operators;
use crate::error::{Error, Result};

/// Seed of the start block. Changing it changes nothing beyond round-off.
pub const START_SEED: u64 = 0x5eed_1a9c_0b1e_2024;
pub const BLOCK_SIZE: usize = 8;
pub const MAX_ITERATIONS: usize = 400;
/// Shift of the inverted pencil `(−L + σM)`; positive so the pencil is
/// definite even with the constant null vector present.
pub const SHIFT: f64 = 1.0;

/// Eigenpairs of `−L f = λ M f`, eigenvalues ascending, eigenvectors as
/// columns normalized to `fᵀ M f = 1`.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
    /// `‖L f + λ M f‖ / ‖M f‖` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

struct ShiftInvert {
    factor: CscCholesky<f64>,
    order: Vec<usize>,
    scale: DVector<f64>,
}

impl ShiftInvert {
    fn new(op: &Operators) -> Result<Self> {
        let n = op.dim();
        let mut position = vec![0usize; n];
        for (p, &k) in op.order.iter().enumerate() {
            position[k] = p;
        }
        let mut coo = CooMatrix::new(n, n);
        for (i, j, v) in op.laplacian.triplet_iter() {
            coo.push(position[i], position[j], -v);
        }
        for k in 0..n {
            coo.push(position[k], position[k], SHIFT * op.mass[k]);
        }
        let factor = CscCholesky::factor(&CscMatrix::from(&coo))
            .map_err(|e| Error::Degenerate(format!("shifted pencil is not definite: {e:?}")))?;
        Ok(Self { factor, order: op.order.clone(), scale: op.mass.map(f64::sqrt) })
    }

    /// `D (−L + σM)⁻¹ D x` with `D = M^{1/2}`.
    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let (n, b) = x.shape();
        let mut rhs = DMatrix::zeros(n, b);
        for (p, &k) in self.order.iter().enumerate() {
            for c in 0..b {
                rhs[(p, c)] = self.scale[k] * x[(k, c)];
            }
        }
        let sol = self.factor.solve(&rhs);
        let mut out = DMatrix::zeros(n, b);
        for (p, &k) in self.order.iter().enumerate() {
            for c in 0..b {
                out[(k, c)] = self.scale[k] * sol[(p, c)];
            }
        }
        out
    }
}

/// Orthonormalizes the columns of `w` against `v` and each other (two
/// Gram–Schmidt passes); dependent columns are replaced by random ones.
fn orthonormalize(v: &DMatrix<f64>, mut w: DMatrix<f64>, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let n = w.nrows();
    let mut c = 0;
    let mut attempts = 0;
    while c < w.ncols() {
        let before = w.column(c).norm();
        for _ in 0..2 {
            if v.ncols() > 0 {
                let coef = v.tr_mul(&w.column(c));
                let proj = v * coef;
                let mut col = w.column_mut(c);
                col -= proj;
            }
            for p in 0..c {
                let d = w.column(p).dot(&w.column(c));
                let q = w.column(p).clone_owned();
                w.column_mut(c).axpy(-d, &q, 1.0);
            }
        }
        let after = w.column(c).norm();
        if after > 1e-10 * before.max(f64::MIN_POSITIVE) && after > 0.0 {
            w.column_mut(c).scale_mut(1.0 / after);
            c += 1;
            attempts = 0;
        } else {
            attempts += 1;
            if attempts > 8 || v.ncols() + c >= n {
                w = w.columns(0, c).clone_owned();
                break;
            }
            for r in 0..n {
                w[(r, c)] = rng.random::<f64>() - 0.5;
            }
        }
    }
    w
}

/// The `k` smallest eigenpairs of `−L f = λ M f` by block Lanczos on the
/// shift-inverted operator with full reorthogonalization and thick
/// restarts. Every returned pair satisfies the residual bound `tol`.
pub fn lowest_eigenpairs(op: &Operators, k: usize, tol: f64) -> Result<Eigenpairs> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::Input(format!("cannot compute {k} eigenpairs of a {n}-dimensional problem")));
    }
    let apply = ShiftInvert::new(op)?;
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let block = BLOCK_SIZE.min(n);
    let max_basis = n.min((3 * k + 2 * block).max(48));

    let start = DMatrix::from_fn(n, block, |_, _| rng.random::<f64>() - 0.5);
    let mut v = orthonormalize(&DMatrix::zeros(n, 0), start, &mut rng);
    let mut tv = apply.apply(&v);
    let mut last_residual = f64::INFINITY;

    for iteration in 1..=MAX_ITERATIONS {
        let mut h = v.tr_mul(&tv);
        h = (&h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(h);
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let wanted = k.min(idx.len());
        let mut values = Vec::with_capacity(wanted);
        let mut vectors = DMatrix::zeros(n, wanted);
        let mut residuals = Vec::with_capacity(wanted);
        let mut expand = Vec::new();
        for (c, &r) in idx.iter().take(wanted).enumerate() {
            let theta = eig.eigenvalues[r];
            let z = eig.eigenvectors.column(r);
            let y = &v * z;
            let f = y.component_div(&apply.scale);
            let lambda = 1.0 / theta - SHIFT;
            let res = op.relative_residual(&f, lambda);
            if !(res <= tol) {
                expand.push(&tv * z - &y * theta);
            }
            values.push(lambda);
            vectors.set_column(c, &f);
            residuals.push(res);
        }
        last_residual = residuals.iter().cloned().fold(0.0, f64::max);
        if wanted == k && expand.is_empty() {
            return Ok(Eigenpairs { values, vectors, residuals, iterations: iteration });
        }
        if v.ncols() == n {
            return Err(Error::Convergence {
                iterations: iteration,
                detail: format!("basis exhausted with residual {last_residual:.3e}"),
            });
        }
        // Fill the block with residuals of the next Ritz pairs.
        for &r in idx.iter().skip(wanted) {
            if expand.len() >= block {
                break;
            }
            let z = eig.eigenvectors.column(r);
            expand.push(&tv * z - (&v * z) * eig.eigenvalues[r]);
        }
        expand.truncate(block);
        while expand.len() < block {
            expand.push(DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5));
        }

        if v.ncols() + block > max_basis {
            let keep = (k + block).min(idx.len());
            let z = DMatrix::from_fn(idx.len(), keep, |i, c| eig.eigenvectors[(i, idx[c])]);
            v = &v * &z;
            tv = &tv * &z;
        }
        let w = orthonormalize(&v, DMatrix::from_columns(&expand), &mut rng);
        if w.ncols() == 0 {
            continue;
        }
        let tw = apply.apply(&w);
        let m = v.ncols();
        v = v.resize_horizontally(m + w.ncols(), 0.0);
        v.columns_mut(m, w.ncols()).copy_from(&w);
        tv = tv.resize_horizontally(m + w.ncols(), 0.0);
        tv.columns_mut(m, w.ncols()).copy_from(&tw);
    }
    Err(Error::Convergence {
        iterations: MAX_ITERATIONS,
        detail: format!("largest residual {last_residual:.3e} above {tol:.1e}"),
    })
}

/// All eigenvalues of the pencil, ascending, by a dense symmetric solve.
pub fn dense_eigenvalues(op: &Operators) -> Vec<f64> {
    let (s, _) = op.dense();
    let d = op.mass.map(|m| 1.0 / m.sqrt());
    let a = DMatrix::from_fn(s.nrows(), s.ncols(), |i, j| d[i] * s[(i, j)] * d[j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
