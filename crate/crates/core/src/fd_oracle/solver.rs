use serde::Serialize;

use super::grid::VoxelDomain;
use super::stencil::{neighbour_slot, StencilTable};
use crate::materials::MaterialPair;
use crate::{par, Error, Result};

/// Discrete operator restricted to interior rows; boundary rows are zero.
pub struct Operator {
    pub domain: VoxelDomain,
    table: StencilTable,
    signatures: Vec<u8>,
    offsets: [isize; 27],
}

impl Operator {
    pub fn new(pair: &MaterialPair, domain: &VoxelDomain) -> Self {
        let g = domain.grid;
        let table = StencilTable::new(pair, g.spacing());
        let mut signatures = vec![0u8; g.nodes()];
        for (p, sig) in signatures.iter_mut().enumerate() {
            if g.is_boundary(p) {
                continue;
            }
            let (i, j, k) = g.ijk(p);
            let mut s = 0u8;
            for c in 0..8 {
                let (dx, dy, dz) = (c & 1, (c >> 1) & 1, (c >> 2) & 1);
                if domain.cell(i - 1 + dx, j - 1 + dy, k - 1 + dz) {
                    s |= 1 << c;
                }
            }
            *sig = s;
        }
        let n = g.n as isize;
        let mut offsets = [0isize; 27];
        for oz in -1..=1 {
            for oy in -1..=1 {
                for ox in -1..=1 {
                    offsets[neighbour_slot([ox as i64, oy as i64, oz as i64])] = ox + n * (oy + n * oz);
                }
            }
        }
        Self { domain: domain.clone(), table, signatures, offsets }
    }

    pub fn len(&self) -> usize {
        3 * self.domain.grid.nodes()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `out = A x` on interior rows.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let g = self.domain.grid;
        let plane = 3 * g.n * g.n;
        par::for_each_chunk_mut(out, plane, |k, chunk| {
            for (local, v) in chunk.chunks_mut(3).enumerate() {
                let p = k * g.n * g.n + local;
                if g.is_boundary(p) {
                    v.fill(0.0);
                    continue;
                }
                let s = &self.table.stencils[self.signatures[p] as usize];
                let mut acc = [0.0; 3];
                for (slot, m) in s.iter().enumerate() {
                    let q = 3 * (p as isize + self.offsets[slot]) as usize;
                    let (a, b, c) = (x[q], x[q + 1], x[q + 2]);
                    for (i, r) in acc.iter_mut().enumerate() {
                        *r += m[(i, 0)] * a + m[(i, 1)] * b + m[(i, 2)] * c;
                    }
                }
                v.copy_from_slice(&acc);
            }
        });
    }

    /// Jacobi weights `1 / A_ii` (zero on boundary rows).
    pub fn inverse_diagonal(&self) -> Vec<f64> {
        let g = self.domain.grid;
        let mut d = vec![0.0; self.len()];
        for p in 0..g.nodes() {
            if !g.is_boundary(p) {
                let diag = self.table.diagonals[self.signatures[p] as usize];
                for i in 0..3 {
                    d[3 * p + i] = 1.0 / diag[i];
                }
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct SolverOptions {
    /// Target `‖r‖ / ‖b‖`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverStats {
    pub iterations: usize,
    pub relative_residual: f64,
    pub unknowns: usize,
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    par::for_each_chunk_mut(y, par::REDUCE_CHUNK, |c, chunk| {
        let off = c * par::REDUCE_CHUNK;
        for (i, v) in chunk.iter_mut().enumerate() {
            *v += a * x[off + i];
        }
    });
}

/// Jacobi-preconditioned conjugate gradients for `A x = b` on interior rows.
/// `b` must vanish on boundary rows; `x` starts at zero.
pub fn pcg(op: &Operator, b: &[f64], opts: &SolverOptions) -> Result<(Vec<f64>, SolverStats)> {
    let n = op.len();
    let unknowns = 3 * (0..op.domain.grid.nodes()).filter(|&p| !op.domain.grid.is_boundary(p)).count();
    let mut x = vec![0.0; n];
    let bnorm = par::dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok((x, SolverStats { iterations: 0, relative_residual: 0.0, unknowns }));
    }
    let dinv = op.inverse_diagonal();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&dinv).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = par::dot(&r, &z);
    for it in 1..=opts.max_iterations {
        op.apply(&p, &mut ap);
        let pap = par::dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::SolverDiverged { iterations: it, residual: par::dot(&r, &r).sqrt() / bnorm });
        }
        let alpha = rz / pap;
        axpy(&mut x, alpha, &p);
        axpy(&mut r, -alpha, &ap);
        let res = par::dot(&r, &r).sqrt() / bnorm;
        if !res.is_finite() {
            return Err(Error::SolverDiverged { iterations: it, residual: res });
        }
        if res <= opts.tolerance {
            return Ok((x, SolverStats { iterations: it, relative_residual: res, unknowns }));
        }
        par::for_each_chunk_mut(&mut z, par::REDUCE_CHUNK, |c, chunk| {
            let off = c * par::REDUCE_CHUNK;
            for (i, v) in chunk.iter_mut().enumerate() {
                *v = r[off + i] * dinv[off + i];
            }
        });
        let rz_new = par::dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        par::for_each_chunk_mut(&mut p, par::REDUCE_CHUNK, |c, chunk| {
            let off = c * par::REDUCE_CHUNK;
            for (i, v) in chunk.iter_mut().enumerate() {
                *v = z[off + i] + beta * *v;
            }
        });
    }
    let res = par::dot(&r, &r).sqrt() / bnorm;
    Err(Error::SolverDiverged { iterations: opts.max_iterations, residual: res })
}
