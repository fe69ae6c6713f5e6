use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use super::grid::{ConformalGrid, GridGluing};
use crate::error::{Error, Result};

/// Discrete pair `(L, M)` of the generalized problem `−L f = λ M f`.
#[derive(Debug, Clone)]
pub struct Operators {
    /// `Δt Δs` times the 5-point flat Laplacian (negative semi-definite).
    pub laplacian: CsrMatrix<f64>,
    /// Diagonal of `M = e^{2u} Δt Δs`.
    pub mass: DVector<f64>,
    /// Elimination order keeping Cholesky fill inside a band: node layers
    /// in `s` taken alternately from both ends of the ring.
    pub order: Vec<usize>,
}

impl Operators {
    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// `‖L f + λ M f‖ / ‖M f‖`
    pub fn relative_residual(&self, f: &DVector<f64>, lambda: f64) -> f64 {
        let mf = self.mass.component_mul(f);
        let lf = spmv(&self.laplacian, f);
        (lf + &mf * lambda).norm() / mf.norm()
    }

    /// Dense copies `(−L, M)` for small-scale cross-checks.
    pub fn dense(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let mut s = DMatrix::zeros(n, n);
        for (i, j, v) in self.laplacian.triplet_iter() {
            s[(i, j)] -= *v;
        }
        (s, DMatrix::from_diagonal(&self.mass))
    }
}

pub(crate) fn spmv(a: &CsrMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    let mut y = DVector::zeros(a.nrows());
    for (r, row) in a.row_iter().enumerate() {
        let mut acc = 0.0;
        for (&c, &v) in row.col_indices().iter().zip(row.values()) {
            acc += v * x[c];
        }
        y[r] = acc;
    }
    y
}

/// Layers `0, n−1, 1, n−2, …` so that ring neighbours sit at most two
/// layers apart.
fn folded_layers(n: usize) -> Vec<usize> {
    let (mut lo, mut hi) = (0usize, n as isize - 1);
    let mut out = Vec::with_capacity(n);
    while (lo as isize) <= hi {
        out.push(lo);
        if (lo as isize) < hi {
            out.push(hi as usize);
        }
        lo += 1;
        hi -= 1;
    }
    out
}

fn layered_order(nt: usize, layers: usize) -> Vec<usize> {
    folded_layers(layers)
        .into_iter()
        .flat_map(|j| (0..nt).map(move |i| j * nt + i))
        .collect()
}

/// Builds `L` from a neighbour rule. `up(i, j)` / `down(i, j)` give the node
/// across the `s` edges, which may involve a reflection in `t`.
fn assemble_with(
    grid: &ConformalGrid,
    layers: usize,
    up: impl Fn(usize, usize) -> (usize, usize),
    down: impl Fn(usize, usize) -> (usize, usize),
    weight: impl Fn(usize, usize) -> f64,
) -> Operators {
    let nt = grid.nt;
    let n = nt * layers;
    let area = grid.cell_area();
    let (ct, cs) = (area / (grid.dt * grid.dt), area / (grid.ds * grid.ds));
    let mut coo = CooMatrix::new(n, n);
    let mut mass = DVector::zeros(n);
    for j in 0..layers {
        for i in 0..nt {
            let k = j * nt + i;
            coo.push(k, k, -2.0 * (ct + cs));
            coo.push(k, j * nt + (i + 1) % nt, ct);
            coo.push(k, j * nt + (i + nt - 1) % nt, ct);
            let (a, b) = up(i, j);
            coo.push(k, b * nt + a, cs);
            let (a, b) = down(i, j);
            coo.push(k, b * nt + a, cs);
            mass[k] = weight(i, j) * area;
        }
    }
    Operators { laplacian: CsrMatrix::from(&coo), mass, order: layered_order(nt, layers) }
}

/// `(L, M)` on the full grid: the torus itself, or the oriented double cover
/// of a Klein bottle.
pub fn assemble(grid: &ConformalGrid) -> Operators {
    let ns = grid.ns;
    assemble_with(
        grid,
        ns,
        |i, j| (i, (j + 1) % ns),
        |i, j| (i, (j + ns - 1) % ns),
        |i, j| grid.weights[grid.index(i, j)],
    )
}

/// `(L, M)` on the Klein bottle itself: `nt × ns/2` nodes, the `s` edges
/// glued through the glide.
pub fn assemble_klein(grid: &ConformalGrid) -> Result<Operators> {
    if grid.gluing != GridGluing::Klein {
        return Err(Error::Precondition("grid does not carry Klein gluing".into()));
    }
    let (nt, half) = (grid.nt, grid.ns / 2);
    let reflect = |i: usize| (nt / 2 + nt - i) % nt;
    Ok(assemble_with(
        grid,
        half,
        |i, j| if j + 1 == half { (reflect(i), 0) } else { (i, j + 1) },
        |i, j| if j == 0 { (reflect(i), half - 1) } else { (i, j - 1) },
        |i, j| grid.weights[grid.index(i, j)],
    ))
}

/// Restrictions of `(L, M)` on the double cover to functions even (`+`) and
/// odd (`−`) under the deck involution, in the orthonormal bases
/// `(e_n ± e_τn)/√2` indexed by the nodes with `j < ns/2`.
#[derive(Debug, Clone)]
pub struct ParitySplit {
    pub plus: Operators,
    pub minus: Operators,
    /// Representative node of each basis pair and its image.
    pub pairs: Vec<(usize, usize)>,
}

pub fn parity_split(grid: &ConformalGrid) -> Result<ParitySplit> {
    if grid.gluing != GridGluing::Klein {
        return Err(Error::Precondition("parity split needs Klein gluing".into()));
    }
    let (nt, half) = (grid.nt, grid.ns / 2);
    let full = assemble(grid);
    let mut slot = vec![(usize::MAX, 0.0); grid.len()];
    let mut pairs = Vec::with_capacity(nt * half);
    for j in 0..half {
        for i in 0..nt {
            let (a, b) = grid.involution(i, j).expect("klein");
            let (n, m) = (grid.index(i, j), grid.index(a, b));
            if n == m {
                return Err(Error::Precondition("involution fixes a node".into()));
            }
            let p = pairs.len();
            slot[n] = (p, 1.0);
            slot[m] = (p, -1.0);
            pairs.push((n, m));
        }
    }
    let build = |sign: f64| {
        let dim = pairs.len();
        let mut coo = CooMatrix::new(dim, dim);
        let mut mass = DVector::zeros(dim);
        for (p, &(n, m)) in pairs.iter().enumerate() {
            let row = full.laplacian.row(n);
            for (&c, &v) in row.col_indices().iter().zip(row.values()) {
                let (q, parity) = slot[c];
                coo.push(p, q, if parity > 0.0 { v } else { sign * v });
            }
            mass[p] = 0.5 * (full.mass[n] + full.mass[m]);
        }
        Operators { laplacian: CsrMatrix::from(&coo), mass, order: layered_order(nt, half) }
    };
    Ok(ParitySplit { plus: build(1.0), minus: build(-1.0), pairs })
}

/// Dirichlet energy with forward differences over the weighted `L²` norm,
/// on the full periodic grid.
pub fn rayleigh(grid: &ConformalGrid, f: &[f64]) -> Result<f64> {
    if f.len() != grid.len() {
        return Err(Error::Input(format!("function has {} values for {} nodes", f.len(), grid.len())));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..grid.ns {
        for i in 0..grid.nt {
            let k = grid.index(i, j);
            let ft = (f[grid.index((i + 1) % grid.nt, j)] - f[k]) / grid.dt;
            let fs = (f[grid.index(i, (j + 1) % grid.ns)] - f[k]) / grid.ds;
            num += ft * ft + fs * fs;
            den += f[k] * f[k] * grid.weights[k];
        }
    }
    if !(den > 0.0) {
        return Err(Error::Domain("test function vanishes on the grid".into()));
    }
    Ok(num / den)
}
