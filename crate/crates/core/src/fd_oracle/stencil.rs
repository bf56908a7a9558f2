//! 27-point stencils of the Lamé operator with cell-constant coefficients.
//!
//! The coefficients are those of the energy `Σ_cells ∫ λ div u div v +
//! 2μ ε(u):ε(v)` for trilinear nodal interpolants, integrated with the
//! 2×2×2 Gauss rule. Each interior node sees eight cells; its stencil
//! depends only on which of them belong to the inclusion, so all 256 cases
//! are tabulated once per material pair and spacing.

use crate::materials::{LameMaterial, MaterialPair};
use crate::Mat3;

/// Stencil entries ordered by neighbour offset `(ox+1) + 3(oy+1) + 9(oz+1)`.
pub type NodeStencil = [Mat3; 27];

pub const CENTER: usize = 13;

fn vertex(a: usize) -> [usize; 3] {
    [a & 1, (a >> 1) & 1, (a >> 2) & 1]
}

fn shape_gradient(a: usize, xi: [f64; 3]) -> [f64; 3] {
    let v = vertex(a);
    let f = |d: usize| if v[d] == 1 { xi[d] } else { 1.0 - xi[d] };
    let s = |d: usize| if v[d] == 1 { 1.0 } else { -1.0 };
    [s(0) * f(1) * f(2), f(0) * s(1) * f(2), f(0) * f(1) * s(2)]
}

/// Unit-cube element matrices `(K_λ, K_μ)`, blocks indexed `[a][b]`.
pub fn unit_element() -> (Vec<Vec<Mat3>>, Vec<Vec<Mat3>>) {
    let g = 0.5 / 3f64.sqrt();
    let pts = [0.5 - g, 0.5 + g];
    let mut kl = vec![vec![Mat3::zeros(); 8]; 8];
    let mut km = vec![vec![Mat3::zeros(); 8]; 8];
    for &x in &pts {
        for &y in &pts {
            for &z in &pts {
                let w = 0.125;
                let grads: Vec<[f64; 3]> = (0..8).map(|a| shape_gradient(a, [x, y, z])).collect();
                for a in 0..8 {
                    for b in 0..8 {
                        let (ga, gb) = (grads[a], grads[b]);
                        let dot: f64 = (0..3).map(|d| ga[d] * gb[d]).sum();
                        for i in 0..3 {
                            for j in 0..3 {
                                kl[a][b][(i, j)] += w * ga[i] * gb[j];
                                let delta = if i == j { dot } else { 0.0 };
                                km[a][b][(i, j)] += w * (delta + ga[j] * gb[i]);
                            }
                        }
                    }
                }
            }
        }
    }
    (kl, km)
}

pub fn neighbour_slot(o: [i64; 3]) -> usize {
    ((o[0] + 1) + 3 * (o[1] + 1) + 9 * (o[2] + 1)) as usize
}

/// Bit `dx + 2dy + 4dz` of a signature refers to the cell with lower corner
/// `(i−1+dx, j−1+dy, k−1+dz)` around node `(i, j, k)`.
pub struct StencilTable {
    pub stencils: Vec<NodeStencil>,
    pub diagonals: Vec<[f64; 3]>,
}

impl StencilTable {
    pub fn new(pair: &MaterialPair, h: f64) -> Self {
        let (kl, km) = unit_element();
        let element = |m: &LameMaterial| -> Vec<Vec<Mat3>> {
            (0..8).map(|a| (0..8).map(|b| (kl[a][b] * m.lambda() + km[a][b] * m.mu()) * h).collect()).collect()
        };
        let host = element(&pair.host);
        let incl = element(&pair.inclusion);
        let mut stencils = Vec::with_capacity(256);
        for sig in 0..256usize {
            let mut s = [Mat3::zeros(); 27];
            for c in 0..8 {
                let d = vertex(c);
                let el = if sig >> c & 1 == 1 { &incl } else { &host };
                // the node is local vertex 1 − d of this cell
                let local = (1 - d[0]) + 2 * (1 - d[1]) + 4 * (1 - d[2]);
                for q in 0..8 {
                    let v = vertex(q);
                    let o = [0, 1, 2].map(|t| v[t] as i64 - (1 - d[t] as i64));
                    s[neighbour_slot(o)] += el[local][q];
                }
            }
            stencils.push(s);
        }
        let diagonals = stencils.iter().map(|s| [s[CENTER][(0, 0)], s[CENTER][(1, 1)], s[CENTER][(2, 2)]]).collect();
        Self { stencils, diagonals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::material_from_poisson;

    #[test]
    fn element_matrices_are_symmetric_with_rigid_kernel() {
        let (kl, km) = unit_element();
        for a in 0..8 {
            for b in 0..8 {
                assert!((kl[a][b] - kl[b][a].transpose()).norm() < 1e-15);
                assert!((km[a][b] - km[b][a].transpose()).norm() < 1e-15);
            }
            // translations carry no energy
            let row_l: Mat3 = (0..8).map(|b| kl[a][b]).sum();
            let row_m: Mat3 = (0..8).map(|b| km[a][b]).sum();
            assert!(row_l.norm() < 1e-14 && row_m.norm() < 1e-14);
        }
    }

    #[test]
    fn homogeneous_stencil_annihilates_affine_fields() {
        let pair = MaterialPair::homogeneous(material_from_poisson(1.3, 0.3).unwrap());
        let t = StencilTable::new(&pair, 0.1);
        let a = Mat3::new(0.3, -1.0, 0.2, 0.5, 0.7, -0.4, 1.1, 0.0, 0.9);
        for sig in [0usize, 255] {
            let mut r = crate::Vec3::zeros();
            for oz in -1i64..=1 {
                for oy in -1i64..=1 {
                    for ox in -1i64..=1 {
                        let x = crate::Vec3::new(ox as f64, oy as f64, oz as f64) * 0.1;
                        r += t.stencils[sig][neighbour_slot([ox, oy, oz])] * (a * x);
                    }
                }
            }
            assert!(r.norm() < 1e-13, "{r:?}");
        }
    }

    #[test]
    fn signatures_cover_mixed_cells() {
        let pair = MaterialPair::unchecked(
            material_from_poisson(1.0, 0.3).unwrap(),
            material_from_poisson(4.0, 0.2).unwrap(),
        );
        let t = StencilTable::new(&pair, 1.0);
        assert!(t.diagonals[255][0] > t.diagonals[15][0] && t.diagonals[15][0] > t.diagonals[0][0]);
        assert!(t.diagonals.iter().all(|d| d.iter().all(|v| *v > 0.0)));
    }
}
