use serde::{Deserialize, Serialize};

use super::grid::{Field, VoxelDomain};
use super::solver::{pcg, Operator, SolverOptions, SolverStats};
use crate::bimaterial::BimaterialGreen;
use crate::kelvin::{kelvin_gradient, kelvin_matrix};
use crate::materials::{LameMaterial, MaterialPair};
use crate::quadrature::GaussLegendre;
use crate::{directional_gradient, par, Error, Mat3, Result, Vec3};

/// Dirichlet data on the box boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryData {
    /// `u = A x + b`, `A` given by rows.
    Affine {
        #[serde(with = "row_major")]
        a: Mat3,
        b: Vec3,
    },
    /// Kelvin column `Γ(x, source) direction` of the host material.
    Kelvin { source: Vec3, direction: Vec3 },
    /// `Γ⁺(x, source) direction`.
    GammaPlus { source: Vec3, direction: Vec3 },
    Zero,
}

mod row_major {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::Mat3;

    pub fn serialize<S: Serializer>(m: &Mat3, s: S) -> Result<S::Ok, S::Error> {
        let rows: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]));
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat3, D::Error> {
        let rows = <[[f64; 3]; 3]>::deserialize(d)?;
        Ok(Mat3::from_fn(|i, j| rows[i][j]))
    }
}

impl BoundaryData {
    pub fn eval(&self, x: &Vec3, pair: &MaterialPair) -> Result<Vec3> {
        match self {
            BoundaryData::Affine { a, b } => Ok(a * x + b),
            BoundaryData::Kelvin { source, direction } => Ok(kelvin_matrix(x, source, &pair.host)? * direction),
            BoundaryData::GammaPlus { source, direction } => {
                Ok(BimaterialGreen::new(*pair).matrix(x, source)? * direction)
            }
            BoundaryData::Zero => Ok(Vec3::zeros()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransmissionProblem {
    pub pair: MaterialPair,
    pub domain: VoxelDomain,
    pub boundary: BoundaryData,
    pub options: SolverOptions,
}

impl TransmissionProblem {
    pub fn new(pair: MaterialPair, domain: VoxelDomain, boundary: BoundaryData) -> Self {
        Self { pair, domain, boundary, options: SolverOptions::default() }
    }

    fn boundary_field(&self, data: impl Fn(&Vec3) -> Result<Vec3> + Sync + Send) -> Result<Vec<f64>> {
        let g = self.domain.grid;
        let values = par::map_range(g.nodes(), |p| if g.is_boundary(p) { data(&g.node(p)) } else { Ok(Vec3::zeros()) });
        let mut u = vec![0.0; 3 * g.nodes()];
        for (p, v) in values.into_iter().enumerate() {
            let v = v?;
            if !v.iter().all(|c| c.is_finite()) {
                return Err(Error::OutOfBounds(format!("boundary data not finite at {:?}", g.node(p))));
            }
            u[3 * p..3 * p + 3].copy_from_slice(v.as_slice());
        }
        Ok(u)
    }

    /// Solves `A u = load` with `u` fixed to `bnd` on the boundary.
    fn solve_with(&self, op: &Operator, mut bnd: Vec<f64>, load: Option<Vec<f64>>) -> Result<(Field, SolverStats)> {
        let mut b = vec![0.0; bnd.len()];
        op.apply(&bnd, &mut b);
        for v in b.iter_mut() {
            *v = -*v;
        }
        if let Some(f) = load {
            let g = self.domain.grid;
            for (i, (bv, fv)) in b.iter_mut().zip(f).enumerate() {
                if !g.is_boundary(i / 3) {
                    *bv += fv;
                }
            }
        }
        let (x, stats) = pcg(op, &b, &self.options)?;
        for (u, dx) in bnd.iter_mut().zip(&x) {
            *u += dx;
        }
        Ok((Field { grid: self.domain.grid, data: bnd }, stats))
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub field: Field,
    pub stats: SolverStats,
}

/// Solves the source-free transmission problem with the given boundary data.
pub fn solve_transmission(problem: &TransmissionProblem) -> Result<Solution> {
    let op = Operator::new(&problem.pair, &problem.domain);
    let bnd = problem.boundary_field(|x| problem.boundary.eval(x, &problem.pair))?;
    let (field, stats) = problem.solve_with(&op, bnd, None)?;
    Ok(Solution { field, stats })
}

/// Closed-form part subtracted from the numeric Green's function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Kelvin matrix of the material at the source.
    Kelvin,
    /// Bonded half-space matrix Γ⁺ (inclusion in `x3 > 0`).
    HalfSpace,
}

#[derive(Debug, Clone, Copy)]
enum RefGreen {
    Kelvin(LameMaterial),
    HalfSpace(BimaterialGreen),
}

impl RefGreen {
    fn matrix(&self, x: &Vec3, y: &Vec3) -> Result<Mat3> {
        match self {
            RefGreen::Kelvin(m) => kelvin_matrix(x, y, m),
            RefGreen::HalfSpace(g) => g.matrix(x, y),
        }
    }

    fn grad(&self, x: &Vec3, y: &Vec3, l: &Vec3) -> Result<Mat3> {
        let g = match self {
            RefGreen::Kelvin(m) => kelvin_gradient(x, y, m)?,
            RefGreen::HalfSpace(g) => g.gradient(x, y, None)?,
        };
        Ok(directional_gradient(&g, l))
    }

    fn inclusion_at(&self, cell_center: &Vec3, own: bool) -> bool {
        match self {
            RefGreen::Kelvin(_) => own,
            RefGreen::HalfSpace(_) => cell_center.z > 0.0,
        }
    }
}

/// `Γ^D(·, y) l` as reference part plus grid remainder.
#[derive(Debug, Clone)]
pub struct NumericGreen {
    pub source: Vec3,
    pub direction: Vec3,
    pub reference: Reference,
    pub remainder: Field,
    pub stats: SolverStats,
    /// Cells where the domain differs from the reference medium.
    pub contrast_cells: usize,
    green: RefGreen,
}

impl NumericGreen {
    pub fn reference_value(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.green.matrix(x, &self.source)? * self.direction)
    }

    pub fn remainder_at(&self, x: &Vec3) -> Result<Vec3> {
        self.remainder.interpolate(x)
    }

    /// `u^D(x) = reference + interpolated remainder`.
    pub fn value_at(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.reference_value(x)? + self.remainder_at(x)?)
    }

    /// `u^D` at every node; fails if the source is a node.
    pub fn reconstruct(&self) -> Result<Field> {
        let g = self.remainder.grid;
        let mut out = self.remainder.clone();
        for p in 0..g.nodes() {
            let v = out.at(p) + self.reference_value(&g.node(p))?;
            out.set(p, &v);
        }
        Ok(out)
    }
}

fn trilinear_gradients(xi: [f64; 3], h: f64) -> [[f64; 3]; 8] {
    let mut out = [[0.0; 3]; 8];
    for (a, g) in out.iter_mut().enumerate() {
        let v = [a & 1, (a >> 1) & 1, (a >> 2) & 1];
        let f = |d: usize| if v[d] == 1 { xi[d] } else { 1.0 - xi[d] };
        let s = |d: usize| if v[d] == 1 { 1.0 / h } else { -1.0 / h };
        *g = [s(0) * f(1) * f(2), f(0) * s(1) * f(2), f(0) * f(1) * s(2)];
    }
    out
}

/// Numeric Green's function by singularity subtraction: the remainder
/// `R = u^D − G_ref l` solves the transmission problem with load
/// `−∫ (C_D − C_ref) ∇(G_ref l) : ∇v` and boundary data `given − G_ref l`.
pub fn numeric_green(problem: &TransmissionProblem, source: &Vec3, direction: &Vec3, reference: Reference) -> Result<NumericGreen> {
    let dom = &problem.domain;
    let g = dom.grid;
    let h = g.spacing();
    if !g.contains_interior(source) {
        return Err(Error::OutOfBounds(format!("source {source:?} not strictly inside the box")));
    }
    if g.on_node(source) {
        return Err(Error::CoincidentPoints(0.0));
    }
    let pair = problem.pair;
    let green = match reference {
        Reference::Kelvin => {
            let c = g.cells();
            let idx = |t: f64| (((t - g.lo) / h).floor() as usize).min(c - 1);
            let own = dom.cell(idx(source.x), idx(source.y), idx(source.z));
            RefGreen::Kelvin(if own { pair.inclusion } else { pair.host })
        }
        Reference::HalfSpace => {
            if !g.has_plane(0.0) {
                return Err(Error::GridMismatch);
            }
            if !(source.z < 0.0) {
                return Err(Error::SourceOnWrongSide(source.z));
            }
            RefGreen::HalfSpace(BimaterialGreen::new(pair))
        }
    };
    let (ref_host, ref_incl) = match green {
        RefGreen::Kelvin(m) => (m, m),
        RefGreen::HalfSpace(_) => (pair.host, pair.inclusion),
    };

    let c = g.cells();
    let mut contrast = Vec::new();
    for k in 0..c {
        for j in 0..c {
            for i in 0..c {
                let center = g.cell_center(i, j, k);
                let d = if dom.cell(i, j, k) { pair.inclusion } else { pair.host };
                let r = if green.inclusion_at(&center, false) { ref_incl } else { ref_host };
                if d.mu() != r.mu() || d.lambda() != r.lambda() {
                    if (center - source).norm() < 2.0 * h {
                        return Err(Error::SourceTooCloseToInterface(format!(
                            "contrast cell at {center:?} within two cells of {source:?}"
                        )));
                    }
                    contrast.push((i, j, k, d.lambda() - r.lambda(), d.mu() - r.mu()));
                }
            }
        }
    }

    let rule = GaussLegendre::new(3);
    let pts: Vec<(f64, f64)> = rule.mapped(0.0, 1.0).collect();
    let cell_loads = par::map_range(contrast.len(), |ci| -> Result<[Vec3; 8]> {
        let (i, j, k, dl, dm) = contrast[ci];
        let base = Vec3::new(g.coord(i), g.coord(j), g.coord(k));
        let mut loads = [Vec3::zeros(); 8];
        for &(a, wa) in &pts {
            for &(b, wb) in &pts {
                for &(cz, wc) in &pts {
                    let x = base + Vec3::new(a, b, cz) * h;
                    let du = green.grad(&x, source, direction)?;
                    let stress = Mat3::identity() * (dl * du.trace()) + (du + du.transpose()) * dm;
                    let w = wa * wb * wc * h * h * h;
                    for (q, gq) in trilinear_gradients([a, b, cz], h).iter().enumerate() {
                        loads[q] -= stress * Vec3::from(*gq) * w;
                    }
                }
            }
        }
        Ok(loads)
    });
    let mut load = vec![0.0; 3 * g.nodes()];
    for (ci, cell) in cell_loads.into_iter().enumerate() {
        let (i, j, k, _, _) = contrast[ci];
        for (q, f) in cell?.iter().enumerate() {
            let p = g.index(i + (q & 1), j + ((q >> 1) & 1), k + ((q >> 2) & 1));
            for d in 0..3 {
                load[3 * p + d] += f[d];
            }
        }
    }

    let op = Operator::new(&pair, dom);
    let bnd = problem.boundary_field(|x| {
        Ok(problem.boundary.eval(x, &pair)? - green.matrix(x, source)? * direction)
    })?;
    let (remainder, stats) = problem.solve_with(&op, bnd, Some(load))?;
    Ok(NumericGreen {
        source: *source,
        direction: *direction,
        reference,
        remainder,
        stats,
        contrast_cells: contrast.len(),
        green,
    })
}
