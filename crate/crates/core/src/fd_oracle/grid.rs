use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Uniform nodal grid on the cube `[lo, hi]³` with `n` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
}

/// Fewest cells per axis accepted by the solver.
pub const MIN_CELLS: usize = 9;

impl Grid {
    pub fn new(n: usize, lo: f64, hi: f64) -> Result<Self> {
        if n < MIN_CELLS + 1 {
            return Err(Error::GridTooCoarse(format!("{} cells per axis, need at least {MIN_CELLS}", n.saturating_sub(1))));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::OutOfBounds(format!("box [{lo}, {hi}]")));
        }
        Ok(Self { n, lo, hi })
    }

    pub fn cells(&self) -> usize {
        self.n - 1
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.cells() as f64
    }

    pub fn nodes(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i == self.cells() {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    /// x-fastest node index.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    pub fn ijk(&self, p: usize) -> (usize, usize, usize) {
        (p % self.n, (p / self.n) % self.n, p / (self.n * self.n))
    }

    pub fn node(&self, p: usize) -> Vec3 {
        let (i, j, k) = self.ijk(p);
        Vec3::new(self.coord(i), self.coord(j), self.coord(k))
    }

    pub fn is_boundary(&self, p: usize) -> bool {
        let (i, j, k) = self.ijk(p);
        let m = self.n - 1;
        i == 0 || j == 0 || k == 0 || i == m || j == m || k == m
    }

    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        let c = self.cells();
        i + c * (j + c * k)
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Vec3 {
        let h = self.spacing();
        Vec3::new(self.lo + (i as f64 + 0.5) * h, self.lo + (j as f64 + 0.5) * h, self.lo + (k as f64 + 0.5) * h)
    }

    /// Whether `z` coincides with a node plane.
    pub fn has_plane(&self, z: f64) -> bool {
        let t = (z - self.lo) / self.spacing();
        (t - t.round()).abs() < 1e-9 && t.round() >= 0.0 && t.round() <= self.cells() as f64
    }

    /// Whether `x` lies strictly inside the box.
    pub fn contains_interior(&self, x: &Vec3) -> bool {
        x.iter().all(|&c| c > self.lo && c < self.hi)
    }

    /// Whether `x` coincides with a grid node.
    pub fn on_node(&self, x: &Vec3) -> bool {
        x.iter().all(|&c| {
            let t = (c - self.lo) / self.spacing();
            (t - t.round()).abs() < 1e-9
        })
    }
}

/// Interface `x3 = M0 |x′|^{1+α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphInterface {
    pub m0: f64,
    pub alpha: f64,
}

impl GraphInterface {
    pub fn phi(&self, x: f64, y: f64) -> f64 {
        self.m0 * x.hypot(y).powf(1.0 + self.alpha)
    }
}

/// Grid plus a per-cell inclusion indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelDomain {
    pub grid: Grid,
    /// `χ_D` per cell, x-fastest.
    pub chi: Vec<u8>,
    pub graph: Option<GraphInterface>,
}

impl VoxelDomain {
    pub fn from_fn(grid: Grid, inside: impl Fn(&Vec3) -> bool) -> Self {
        let c = grid.cells();
        let mut chi = vec![0u8; c * c * c];
        for k in 0..c {
            for j in 0..c {
                for i in 0..c {
                    chi[grid.cell_index(i, j, k)] = inside(&grid.cell_center(i, j, k)) as u8;
                }
            }
        }
        Self { grid, chi, graph: None }
    }

    pub fn homogeneous(grid: Grid) -> Self {
        Self::from_fn(grid, |_| false)
    }

    /// Inclusion `x3 > 0`.
    pub fn half_space(grid: Grid) -> Self {
        Self::from_fn(grid, |x| x.z > 0.0)
    }

    /// Inclusion above the graph `x3 = M0 |x′|^{1+α}`.
    pub fn graph(grid: Grid, graph: GraphInterface) -> Result<Self> {
        if !(graph.alpha > 0.0 && graph.alpha <= 1.0) || !(graph.m0 >= 0.0) {
            return Err(Error::OutOfBounds(format!("graph parameters {graph:?}")));
        }
        let mut d = Self::from_fn(grid, |x| x.z > graph.phi(x.x, x.y));
        d.graph = Some(graph);
        Ok(d)
    }

    pub fn sphere(grid: Grid, center: Vec3, radius: f64) -> Self {
        Self::from_fn(grid, |x| (x - center).norm() < radius)
    }

    pub fn cell(&self, i: usize, j: usize, k: usize) -> bool {
        self.chi[self.grid.cell_index(i, j, k)] != 0
    }

    pub fn inclusion_cells(&self) -> usize {
        self.chi.iter().filter(|&&c| c != 0).count()
    }
}

/// Vector field sampled at the nodes, components interleaved per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, data: vec![0.0; 3 * grid.nodes()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&Vec3) -> Vec3 + Sync + Send) -> Self {
        let data = crate::par::map_range(grid.nodes(), |p| f(&grid.node(p)));
        Self { grid, data: data.iter().flat_map(|v| [v.x, v.y, v.z]).collect() }
    }

    pub fn at(&self, p: usize) -> Vec3 {
        Vec3::new(self.data[3 * p], self.data[3 * p + 1], self.data[3 * p + 2])
    }

    pub fn set(&mut self, p: usize, v: &Vec3) {
        self.data[3 * p..3 * p + 3].copy_from_slice(v.as_slice());
    }

    /// Trilinear interpolation; `x` must lie in the box.
    pub fn interpolate(&self, x: &Vec3) -> Result<Vec3> {
        let g = &self.grid;
        if !x.iter().all(|&c| c >= g.lo && c <= g.hi) {
            return Err(Error::OutOfBounds(format!("{x:?} outside the grid box")));
        }
        let h = g.spacing();
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for d in 0..3 {
            let t = (x[d] - g.lo) / h;
            let i = (t.floor() as usize).min(g.cells() - 1);
            base[d] = i;
            frac[d] = t - i as f64;
        }
        let mut v = Vec3::zeros();
        for corner in 0..8 {
            let o = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
            let w: f64 = (0..3).map(|d| if o[d] == 1 { frac[d] } else { 1.0 - frac[d] }).product();
            v += self.at(g.index(base[0] + o[0], base[1] + o[1], base[2] + o[2])) * w;
        }
        Ok(v)
    }

    pub fn max_norm(&self) -> f64 {
        (0..self.grid.nodes()).map(|p| self.at(p).norm()).fold(0.0, f64::max)
    }
}
