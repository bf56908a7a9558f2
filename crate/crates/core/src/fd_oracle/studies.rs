//! Convergence, reciprocity and asymptotics runs of the oracle.

use serde::Serialize;

use super::grid::{Field, GraphInterface, Grid, VoxelDomain};
use super::problem::{numeric_green, solve_transmission, BoundaryData, Reference, TransmissionProblem};
use super::solver::SolverStats;
use crate::bimaterial::BimaterialGreen;
use crate::dataset::{loglog_slope, Cell, ScanDataset, ScanKind};
use crate::kelvin::kelvin_matrix;
use crate::materials::MaterialPair;
use crate::{numfmt, Error, Result, Vec3};

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub grid_n: usize,
    #[serde(serialize_with = "numfmt::serialize")]
    pub spacing: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub error_l2: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub error_max: f64,
    /// L2 error restricted to nodes with `|x3| ≥` the far distance.
    #[serde(serialize_with = "numfmt::serialize")]
    pub far_error_l2: f64,
    pub stats: SolverStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub name: String,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares order of the L2 error.
    #[serde(serialize_with = "numfmt::serialize")]
    pub order_l2: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub order_far: f64,
}

impl ConvergenceStudy {
    fn order(rows: &[ConvergenceRow], f: impl Fn(&ConvergenceRow) -> f64) -> f64 {
        loglog_slope(&rows.iter().map(|r| (r.spacing, f(r))).collect::<Vec<_>>())
    }

    /// CSV with the order against the previous grid (empty on the first row).
    pub fn to_dataset(&self) -> ScanDataset {
        let mut d = ScanDataset::new(ScanKind::Convergence);
        for (i, r) in self.rows.iter().enumerate() {
            let order = if i == 0 {
                Cell::from("")
            } else {
                let p = &self.rows[i - 1];
                Cell::from((p.error_l2 / r.error_l2).ln() / (p.spacing / r.spacing).ln())
            };
            d.push(vec![Cell::from(r.grid_n), r.error_l2.into(), r.error_max.into(), order]);
        }
        d
    }
}

/// Source and box used by the manufactured-solution runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceSetup {
    pub lo: f64,
    pub hi: f64,
    pub source: Vec3,
    pub direction: Vec3,
    pub far_distance: f64,
}

impl Default for ConvergenceSetup {
    fn default() -> Self {
        Self {
            lo: -1.0,
            hi: 1.0,
            source: Vec3::new(0.3, 0.2, -1.6),
            direction: Vec3::new(0.48, 0.6, 0.64),
            far_distance: 0.25,
        }
    }
}

fn errors(field: &Field, exact: impl Fn(&Vec3) -> Result<Vec3>, far: f64) -> Result<(f64, f64, f64)> {
    let g = field.grid;
    let h3 = g.spacing().powi(3);
    let (mut l2, mut mx, mut far_l2) = (0.0, 0.0f64, 0.0);
    for p in 0..g.nodes() {
        if g.is_boundary(p) {
            continue;
        }
        let x = g.node(p);
        let e = (field.at(p) - exact(&x)?).norm();
        l2 += e * e;
        mx = mx.max(e);
        if x.z.abs() >= far {
            far_l2 += e * e;
        }
    }
    Ok(((h3 * l2).sqrt(), mx, (h3 * far_l2).sqrt()))
}

fn study(
    name: &str,
    grids: &[usize],
    setup: &ConvergenceSetup,
    make: impl Fn(Grid) -> TransmissionProblem,
    exact: impl Fn(&Vec3) -> Result<Vec3>,
) -> Result<ConvergenceStudy> {
    if grids.len() < 3 {
        return Err(Error::GridTooCoarse("convergence orders need at least three grids".into()));
    }
    let mut rows = Vec::new();
    for &n in grids {
        let grid = Grid::new(n, setup.lo, setup.hi)?;
        let sol = solve_transmission(&make(grid))?;
        let (error_l2, error_max, far_error_l2) = errors(&sol.field, &exact, setup.far_distance)?;
        rows.push(ConvergenceRow { grid_n: n, spacing: grid.spacing(), error_l2, error_max, far_error_l2, stats: sol.stats });
    }
    let order_l2 = ConvergenceStudy::order(&rows, |r| r.error_l2);
    let order_far = ConvergenceStudy::order(&rows, |r| r.far_error_l2);
    Ok(ConvergenceStudy { name: name.to_owned(), rows, order_l2, order_far })
}

/// Homogeneous host material with Kelvin boundary data from a source
/// outside the box.
pub fn kelvin_convergence(pair: &MaterialPair, grids: &[usize], setup: &ConvergenceSetup) -> Result<ConvergenceStudy> {
    let homog = MaterialPair::homogeneous(pair.host);
    let bd = BoundaryData::Kelvin { source: setup.source, direction: setup.direction };
    study(
        "kelvin",
        grids,
        setup,
        |g| TransmissionProblem::new(homog, VoxelDomain::homogeneous(g), bd),
        |x| Ok(kelvin_matrix(x, &setup.source, &homog.host)? * setup.direction),
    )
}

/// Flat interface `x3 = 0` with Γ⁺ boundary data from a host-side source
/// outside the box.
pub fn flat_interface_convergence(pair: &MaterialPair, grids: &[usize], setup: &ConvergenceSetup) -> Result<ConvergenceStudy> {
    let bd = BoundaryData::GammaPlus { source: setup.source, direction: setup.direction };
    let green = BimaterialGreen::new(*pair);
    study(
        "flat_interface",
        grids,
        setup,
        |g| TransmissionProblem::new(*pair, VoxelDomain::half_space(g), bd),
        |x| Ok(green.matrix(x, &setup.source)? * setup.direction),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocitySetup {
    pub half_width: f64,
    pub radius: f64,
    pub y1: Vec3,
    pub x2: Vec3,
    /// Component `i` read at `x2` for the source direction `e_j`.
    pub i: usize,
    pub j: usize,
    pub grid_n: usize,
    pub reference_n: usize,
}

impl Default for ReciprocitySetup {
    fn default() -> Self {
        Self {
            half_width: 2.0,
            radius: 0.5,
            y1: Vec3::new(-0.93, 0.11, 0.23),
            x2: Vec3::new(0.87, -0.19, -0.41),
            i: 0,
            j: 2,
            grid_n: 33,
            reference_n: 65,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReciprocityReport {
    pub setup: ReciprocitySetup,
    /// `e_i · u^D(x2; y1, e_j)`.
    #[serde(serialize_with = "numfmt::serialize")]
    pub forward: f64,
    /// `e_j · u^D(y1; x2, e_i)`.
    #[serde(serialize_with = "numfmt::serialize")]
    pub backward: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub defect: f64,
    /// Largest change of either value against the reference grid.
    #[serde(serialize_with = "numfmt::serialize")]
    pub discretization_error: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub ratio: f64,
}

/// Two solves with the sources exchanged inside a spherical inclusion
/// setup, homogeneous Dirichlet data on the box.
pub fn reciprocity(pair: &MaterialPair, setup: &ReciprocitySetup) -> Result<ReciprocityReport> {
    let values = |n: usize| -> Result<(f64, f64)> {
        let grid = Grid::new(n, -setup.half_width, setup.half_width)?;
        let dom = VoxelDomain::sphere(grid, Vec3::zeros(), setup.radius);
        let p = TransmissionProblem::new(*pair, dom, BoundaryData::Zero);
        let (ei, ej) = (Vec3::ith(setup.i, 1.0), Vec3::ith(setup.j, 1.0));
        let fwd = numeric_green(&p, &setup.y1, &ej, Reference::Kelvin)?.value_at(&setup.x2)?[setup.i];
        let bwd = numeric_green(&p, &setup.x2, &ei, Reference::Kelvin)?.value_at(&setup.y1)?[setup.j];
        Ok((fwd, bwd))
    };
    let (forward, backward) = values(setup.grid_n)?;
    let (f_ref, b_ref) = values(setup.reference_n)?;
    let defect = (forward - backward).abs();
    let discretization_error = (forward - f_ref).abs().max((backward - b_ref).abs());
    Ok(ReciprocityReport { setup: *setup, forward, backward, defect, discretization_error, ratio: defect / discretization_error })
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsSetup {
    pub grid_n: usize,
    pub half_width: f64,
    pub graph: GraphInterface,
    pub direction: Vec3,
    pub source_heights: Vec<f64>,
}

impl AsymptoticsSetup {
    /// Paraboloid `x3 = M0 |x′|²` on `[−1, 1]³` with 65 nodes per axis;
    /// sources half a cell off the node planes at depths `(k + 1/2) h` for
    /// `k = 1..=8`.
    pub fn paraboloid(m0: f64) -> Self {
        Self::paraboloid_on(m0, 65)
    }

    pub fn paraboloid_on(m0: f64, grid_n: usize) -> Self {
        let h = 2.0 / (grid_n - 1) as f64;
        Self {
            grid_n,
            half_width: 1.0,
            graph: GraphInterface { m0, alpha: 1.0 },
            direction: Vec3::new(0.0, 0.0, 1.0),
            source_heights: (1..=8).map(|k| (k as f64 + 0.5) * h).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsRow {
    #[serde(serialize_with = "numfmt::serialize")]
    pub source_height: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub distance: f64,
    /// `|u^D(x) − u⁺(x)|` at `x = (0, 0, h)` for the source `(0, 0, −h)`.
    #[serde(serialize_with = "numfmt::serialize")]
    pub difference: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub magnitude: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsProbe {
    pub rows: Vec<AsymptoticsRow>,
    #[serde(serialize_with = "numfmt::serialize")]
    pub slope: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub slope_stderr: f64,
    /// Exponent `−1 + α` of the remainder bound.
    #[serde(serialize_with = "numfmt::serialize")]
    pub predicted: f64,
}

impl AsymptoticsProbe {
    pub fn to_dataset(&self) -> ScanDataset {
        let mut d = ScanDataset::new(ScanKind::Asymptotics);
        for r in &self.rows {
            d.push(vec![r.distance.into(), r.difference.into(), r.source_height.into()]);
        }
        d
    }
}

/// Fewest source heights for a slope fit.
pub const MIN_SAMPLES: usize = 8;

fn slope_with_error(points: &[(f64, f64)]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let slope = loglog_slope(points);
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sse: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (sse / (n - 2.0) / sxx).sqrt())
}

/// Remainder `u^D − u⁺` on the axis for sources below a graph interface,
/// with Γ⁺ boundary data.
pub fn asymptotics_probe(pair: &MaterialPair, setup: &AsymptoticsSetup) -> Result<AsymptoticsProbe> {
    let grid = Grid::new(setup.grid_n, -setup.half_width, setup.half_width)?;
    let h = grid.spacing();
    let usable: Vec<f64> = setup
        .source_heights
        .iter()
        .copied()
        .filter(|&s| s >= h && s < setup.half_width - h && !grid.has_plane(-s))
        .collect();
    if usable.len() < MIN_SAMPLES {
        return Err(Error::GridTooCoarse(format!("{} usable source heights, need {MIN_SAMPLES}", usable.len())));
    }
    let dom = VoxelDomain::graph(grid, setup.graph)?;
    let mut rows = Vec::new();
    for s in usable {
        let y = Vec3::new(0.0, 0.0, -s);
        let x = Vec3::new(0.0, 0.0, s);
        let bd = BoundaryData::GammaPlus { source: y, direction: setup.direction };
        let p = TransmissionProblem::new(*pair, dom.clone(), bd);
        let ng = numeric_green(&p, &y, &setup.direction, Reference::HalfSpace)?;
        rows.push(AsymptoticsRow {
            source_height: s,
            distance: 2.0 * s,
            difference: ng.remainder_at(&x)?.norm(),
            magnitude: ng.value_at(&x)?.norm(),
        });
    }
    let (slope, slope_stderr) = if rows.iter().all(|r| r.difference > 0.0) {
        slope_with_error(&rows.iter().map(|r| (r.distance, r.difference)).collect::<Vec<_>>())
    } else {
        (0.0, 0.0)
    };
    Ok(AsymptoticsProbe { rows, slope, slope_stderr, predicted: -1.0 + setup.graph.alpha })
}
