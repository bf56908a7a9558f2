//! Hausdorff distance, reachable complement and modified distance on
//! voxelized inclusions.
//!
//! Voxels are the cells of an [`fd_oracle::Grid`](crate::fd_oracle::Grid) and
//! are represented by their centers. Distances are exact between voxel
//! centers, either by brute force or by a separable Euclidean distance
//! transform; every reported length carries the voxel diagonal as its
//! resolution.

use std::collections::VecDeque;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dataset::{Cell, ScanDataset, ScanKind};
use crate::fd_oracle::io::{read_u8, write_u8, DType, Sidecar};
use crate::fd_oracle::{Grid, VoxelDomain};
use crate::{numfmt, par, Error, Result, Vec3};

/// Sets larger than this use the distance transform.
pub const BRUTE_FORCE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct VoxelSet {
    pub grid: Grid,
    occupancy: Vec<u8>,
    boundary: Vec<usize>,
}

const NEIGHBOURS: [[i64; 3]; 6] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];

impl VoxelSet {
    pub fn from_occupancy(grid: Grid, occupancy: Vec<u8>) -> Result<Self> {
        let c = grid.cells();
        if occupancy.len() != c * c * c {
            return Err(Error::GridMismatch);
        }
        if occupancy.iter().any(|&v| v > 1) {
            return Err(Error::ConfigParse("occupancy values must be 0 or 1".into()));
        }
        let mut s = Self { grid, occupancy, boundary: Vec::new() };
        s.boundary = (0..s.occupancy.len()).filter(|&v| s.occupancy[v] == 1 && s.touches(v, |w| w.is_none_or(|w| s.occupancy[w] == 0))).collect();
        Ok(s)
    }

    pub fn from_fn(grid: Grid, inside: impl Fn(&Vec3) -> bool) -> Self {
        Self::from_domain(&VoxelDomain::from_fn(grid, inside))
    }

    pub fn from_domain(domain: &VoxelDomain) -> Self {
        Self::from_occupancy(domain.grid, domain.chi.clone()).expect("domain indicator is 0/1")
    }

    pub fn ball(grid: Grid, center: Vec3, radius: f64) -> Self {
        Self::from_fn(grid, |x| (x - center).norm() <= radius)
    }

    pub fn occupancy(&self) -> &[u8] {
        &self.occupancy
    }

    pub fn len(&self) -> usize {
        self.occupancy.iter().filter(|&&v| v == 1).count()
    }

    pub fn is_empty(&self) -> bool {
        self.occupancy.iter().all(|&v| v == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.occupancy[v] == 1
    }

    /// Occupied voxels with at least one unoccupied 6-neighbour (outside the
    /// grid counts as unoccupied).
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn voxel_diagonal(&self) -> f64 {
        self.grid.spacing() * 3f64.sqrt()
    }

    pub fn ijk(&self, v: usize) -> [usize; 3] {
        let c = self.grid.cells();
        [v % c, (v / c) % c, v / (c * c)]
    }

    pub fn center(&self, v: usize) -> Vec3 {
        let [i, j, k] = self.ijk(v);
        self.grid.cell_center(i, j, k)
    }

    pub fn points(&self) -> Vec<Vec3> {
        (0..self.occupancy.len()).filter(|&v| self.contains(v)).map(|v| self.center(v)).collect()
    }

    pub fn boundary_points(&self) -> Vec<Vec3> {
        self.boundary.iter().map(|&v| self.center(v)).collect()
    }

    fn neighbour(&self, v: usize, d: [i64; 3]) -> Option<usize> {
        let c = self.grid.cells() as i64;
        let [i, j, k] = self.ijk(v).map(|t| t as i64);
        let (a, b, e) = (i + d[0], j + d[1], k + d[2]);
        ((0..c).contains(&a) && (0..c).contains(&b) && (0..c).contains(&e)).then(|| (a + c * (b + c * e)) as usize)
    }

    fn touches(&self, v: usize, pred: impl Fn(Option<usize>) -> bool) -> bool {
        NEIGHBOURS.iter().any(|&d| pred(self.neighbour(v, d)))
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        Self::from_occupancy(self.grid, self.occupancy.iter().zip(&other.occupancy).map(|(a, b)| a | b).collect())
    }

    /// Voxels whose centers lie within `r` of the set.
    pub fn dilate(&self, r: f64) -> Self {
        let h = self.grid.spacing();
        let edt = distance_transform(self);
        let lim = (r / h).powi(2) + 1e-9;
        Self::from_occupancy(self.grid, edt.iter().map(|&d| (d <= lim) as u8).collect()).expect("0/1 occupancy")
    }

    pub fn write(&self, bin: &Path, seed: Option<u64>, description: &str) -> Result<()> {
        let g = self.grid;
        let h = g.spacing();
        let mut side = Sidecar::new(DType::U8, [g.cells(); 3], 1, [g.lo + 0.5 * h; 3], h);
        side.seed = seed;
        side.description = description.to_owned();
        write_u8(bin, &side, &self.occupancy)
    }

    pub fn read(bin: &Path) -> Result<Self> {
        let (s, data) = read_u8(bin)?;
        let c = s.shape[0];
        if s.shape != [c; 3] || s.components != 1 || s.origin != [s.origin[0]; 3] {
            return Err(Error::GridMismatch);
        }
        let lo = s.origin[0] - 0.5 * s.spacing;
        Self::from_occupancy(Grid::new(c + 1, lo, lo + s.spacing * c as f64)?, data)
    }
}

/// Squared distance (in voxel units) from every voxel center to the nearest
/// occupied voxel center; `f64::INFINITY` for an empty set.
pub fn distance_transform(set: &VoxelSet) -> Vec<f64> {
    let c = set.grid.cells();
    let mut d: Vec<f64> = set.occupancy.iter().map(|&v| if v == 1 { 0.0 } else { f64::INFINITY }).collect();
    for axis in 0..3 {
        let stride = [1, c, c * c][axis];
        let line_starts: Vec<usize> = (0..c * c)
            .map(|l| {
                let (a, b) = (l % c, l / c);
                match axis {
                    0 => c * (a + c * b),
                    1 => a + c * c * b,
                    _ => a + c * b,
                }
            })
            .collect();
        let lines = par::map_range(line_starts.len(), |l| {
            let f: Vec<f64> = (0..c).map(|t| d[line_starts[l] + t * stride]).collect();
            envelope_1d(&f)
        });
        for (l, line) in lines.into_iter().enumerate() {
            for (t, v) in line.into_iter().enumerate() {
                d[line_starts[l] + t * stride] = v;
            }
        }
    }
    d
}

/// Lower envelope of the parabolas `f(q) + (p − q)²`.
fn envelope_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let sites: Vec<usize> = (0..n).filter(|&q| f[q].is_finite()).collect();
    if sites.is_empty() {
        return vec![f64::INFINITY; n];
    }
    let mut v: Vec<usize> = Vec::with_capacity(sites.len());
    let mut z: Vec<f64> = Vec::with_capacity(sites.len() + 1);
    let meet = |q: usize, p: usize| ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
    for &q in &sites {
        while let Some(&p) = v.last() {
            if meet(q, p) <= z[z.len() - 1] {
                v.pop();
                z.pop();
            } else {
                break;
            }
        }
        z.push(if v.is_empty() { f64::NEG_INFINITY } else { meet(q, *v.last().unwrap()) });
        v.push(q);
    }
    z.push(f64::INFINITY);
    let mut out = vec![0.0; n];
    let mut k = 0;
    for (p, o) in out.iter_mut().enumerate() {
        while z[k + 1] < p as f64 {
            k += 1;
        }
        let q = v[k];
        *o = (p as f64 - q as f64).powi(2) + f[q];
    }
    out
}

/// `max_{a ∈ A} dist(a, B)` by brute force.
pub fn directed_distance(a: &[Vec3], b: &[Vec3]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let worst = par::max_range(a.len(), |i| b.iter().map(|q| (a[i] - q).norm_squared()).fold(f64::INFINITY, f64::min));
    Ok(worst.unwrap_or(0.0).sqrt())
}

/// `d_H(A, B)` between point sets by brute force.
pub fn hausdorff_points(a: &[Vec3], b: &[Vec3]) -> Result<f64> {
    Ok(directed_distance(a, b)?.max(directed_distance(b, a)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    /// Brute force up to [`BRUTE_FORCE_LIMIT`] voxels per set, transform above.
    Auto,
    BruteForce,
    Transform,
}

/// `max dist(x, target)` over the voxels `from`, both on `target`'s grid.
fn directed_voxels(from: &[usize], from_set: &VoxelSet, target: &VoxelSet, target_voxels: &[usize], method: DistanceMethod) -> Result<f64> {
    if from.is_empty() || target_voxels.is_empty() {
        return Err(Error::EmptySet);
    }
    let brute = match method {
        DistanceMethod::BruteForce => true,
        DistanceMethod::Transform => false,
        DistanceMethod::Auto => from.len().max(target_voxels.len()) <= BRUTE_FORCE_LIMIT,
    };
    if brute {
        let a: Vec<Vec3> = from.iter().map(|&v| from_set.center(v)).collect();
        let b: Vec<Vec3> = target_voxels.iter().map(|&v| target.center(v)).collect();
        return directed_distance(&a, &b);
    }
    let mask = VoxelSet::from_occupancy(target.grid, {
        let mut m = vec![0u8; target.occupancy.len()];
        for &v in target_voxels {
            m[v] = 1;
        }
        m
    })?;
    let edt = distance_transform(&mask);
    let worst = from.iter().map(|&v| edt[v]).fold(0.0, f64::max);
    Ok(worst.sqrt() * target.grid.spacing())
}

/// `d_H(∂D1, ∂D2)` between boundary voxels.
pub fn hausdorff_distance(d1: &VoxelSet, d2: &VoxelSet, method: DistanceMethod) -> Result<f64> {
    d1.check_same_grid(d2)?;
    let (b1, b2) = (d1.boundary(), d2.boundary());
    Ok(directed_voxels(b1, d1, d2, b2, method)?.max(directed_voxels(b2, d2, d1, b1, method)?))
}

/// `d_H(D1, D2)` between all occupied voxels.
pub fn hausdorff_solid(d1: &VoxelSet, d2: &VoxelSet, method: DistanceMethod) -> Result<f64> {
    d1.check_same_grid(d2)?;
    let v1: Vec<usize> = (0..d1.occupancy.len()).filter(|&v| d1.contains(v)).collect();
    let v2: Vec<usize> = (0..d2.occupancy.len()).filter(|&v| d2.contains(v)).collect();
    Ok(directed_voxels(&v1, d1, d2, &v2, method)?.max(directed_voxels(&v2, d2, d1, &v1, method)?))
}

/// The complement component reachable from the grid boundary, `G`, and
/// `Ω_D = grid \ G`.
#[derive(Debug, Clone)]
pub struct ReachableComplement {
    pub reachable: VoxelSet,
    pub omega: VoxelSet,
}

/// 6-connected flood fill of the complement of `D1 ∪ D2` from the outer
/// layer of voxels, which must be free.
pub fn reachable_complement(d1: &VoxelSet, d2: &VoxelSet) -> Result<ReachableComplement> {
    d1.check_same_grid(d2)?;
    if d1.is_empty() || d2.is_empty() {
        return Err(Error::EmptySet);
    }
    let union = d1.union(d2)?;
    let c = union.grid.cells();
    let n = c * c * c;
    let on_shell = |v: usize| {
        let [i, j, k] = union.ijk(v);
        i == 0 || j == 0 || k == 0 || i == c - 1 || j == c - 1 || k == c - 1
    };
    let mut reached = vec![0u8; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if on_shell(v) {
            if union.contains(v) {
                return Err(Error::NoFreeMargin);
            }
            reached[v] = 1;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for d in NEIGHBOURS {
            if let Some(w) = union.neighbour(v, d) {
                if reached[w] == 0 && !union.contains(w) {
                    reached[w] = 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let omega: Vec<u8> = reached.iter().map(|&r| 1 - r).collect();
    Ok(ReachableComplement {
        reachable: VoxelSet::from_occupancy(union.grid, reached)?,
        omega: VoxelSet::from_occupancy(union.grid, omega)?,
    })
}

/// Voxels of `d` on `∂Ω_D`, i.e. with a 6-neighbour in `G`.
fn exposed(d: &VoxelSet, g: &VoxelSet) -> Vec<usize> {
    d.boundary().iter().copied().filter(|&v| d.touches(v, |w| w.is_some_and(|w| g.contains(w)))).collect()
}

/// `d_μ(D1, D2)`. A maximum over an empty exposed boundary counts as zero.
pub fn modified_distance(d1: &VoxelSet, d2: &VoxelSet, method: DistanceMethod) -> Result<f64> {
    let rc = reachable_complement(d1, d2)?;
    let all = |d: &VoxelSet| -> Vec<usize> { (0..d.occupancy.len()).filter(|&v| d.contains(v)).collect() };
    let (a1, a2) = (all(d1), all(d2));
    let mut worst = 0.0f64;
    for (exp, from, target, tv) in [(exposed(d1, &rc.reachable), d1, d2, &a2), (exposed(d2, &rc.reachable), d2, d1, &a1)] {
        if !exp.is_empty() {
            worst = worst.max(directed_voxels(&exp, from, target, tv, method)?);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub label: String,
    #[serde(serialize_with = "numfmt::serialize")]
    pub hausdorff: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub modified: f64,
    /// `d_H / d_μ` (infinite when `d_μ = 0 < d_H`).
    #[serde(serialize_with = "numfmt::serialize")]
    pub ratio: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub voxel_diagonal: f64,
}

pub fn metric_report(label: &str, d1: &VoxelSet, d2: &VoxelSet) -> Result<MetricReport> {
    let hausdorff = hausdorff_distance(d1, d2, DistanceMethod::Auto)?;
    let modified = modified_distance(d1, d2, DistanceMethod::Auto)?;
    let ratio = if modified > 0.0 { hausdorff / modified } else if hausdorff == 0.0 { 1.0 } else { f64::INFINITY };
    Ok(MetricReport { label: label.to_owned(), hausdorff, modified, ratio, voxel_diagonal: d1.voxel_diagonal() })
}

pub fn metrics_dataset(reports: &[MetricReport]) -> ScanDataset {
    let mut d = ScanDataset::new(ScanKind::Metrics);
    for r in reports {
        d.push(vec![Cell::from(r.label.as_str()), r.hausdorff.into(), r.modified.into(), r.ratio.into()]);
    }
    d
}

/// Solid ball `|x| ≤ 0.55` against a hollow ball `0.2 ≤ |x| ≤ 0.6` on
/// `[−1, 1]³`. The inner sphere of the shell is sealed off from the
/// exterior, so `d_μ ≈ 0.05` while `d_H ≈ 0.35`.
pub fn pocket_example(grid_n: usize) -> Result<(VoxelSet, VoxelSet)> {
    let g = Grid::new(grid_n, -1.0, 1.0)?;
    let d1 = VoxelSet::ball(g, Vec3::zeros(), 0.55);
    let d2 = VoxelSet::from_fn(g, |x| (0.2..=0.6).contains(&x.norm()));
    Ok((d1, d2))
}

/// Star-shaped set `|x − c| ≤ r(u)` with a smooth low-order radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarShape {
    pub center: Vec3,
    pub radius: f64,
    pub amplitudes: [f64; 3],
    pub axes: [Vec3; 3],
}

impl StarShape {
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut unit = || {
            let z: f64 = rng.random_range(-1.0..1.0);
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            Vec3::new(s * t.cos(), s * t.sin(), z)
        };
        let axes = [unit(), unit(), unit()];
        let mut r = || rng.random_range(-1.0..1.0);
        Self {
            center: Vec3::new(r(), r(), r()) * 0.1,
            radius: 0.45 + 0.15 * r().abs(),
            amplitudes: [0.15 * r(), 0.15 * r(), 0.15 * r()],
            axes,
        }
    }

    pub fn radius_in(&self, u: &Vec3) -> f64 {
        let [a, b, c] = self.amplitudes;
        let (p, q, s) = (u.dot(&self.axes[0]), u.dot(&self.axes[1]), u.dot(&self.axes[2]));
        self.radius * (1.0 + a * p + b * (q * q - 1.0 / 3.0) + c * s * s * s)
    }

    pub fn contains(&self, x: &Vec3) -> bool {
        let d = x - self.center;
        let r = d.norm();
        r == 0.0 || r <= self.radius_in(&(d / r))
    }

    pub fn voxelize(&self, grid: Grid) -> VoxelSet {
        VoxelSet::from_fn(grid, |x| self.contains(x))
    }
}

/// `count` seeded pairs of star-shaped sets on `[−1, 1]³`.
pub fn random_shape_pairs(seed: u64, count: usize, grid_n: usize) -> Result<Vec<(VoxelSet, VoxelSet)>> {
    let g = Grid::new(grid_n, -1.0, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let (a, b) = (StarShape::random(&mut rng), StarShape::random(&mut rng));
            (a.voxelize(g), b.voxelize(g))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::new(n, -1.0, 1.0).unwrap()
    }

    #[test]
    fn point_set_examples() {
        let a = [Vec3::zeros()];
        assert_eq!(hausdorff_points(&a, &[Vec3::new(3.0, 4.0, 0.0)]).unwrap(), 5.0);
        let pts = vec![Vec3::new(0.1, 0.2, 0.3), Vec3::new(-1.0, 0.0, 2.0)];
        assert_eq!(hausdorff_points(&pts, &pts).unwrap(), 0.0);
        assert!(matches!(hausdorff_points(&[], &pts), Err(Error::EmptySet)));
    }

    #[test]
    fn boundary_voxels() {
        let g = grid(12);
        let cube = VoxelSet::from_fn(g, |x| x.iter().all(|c| c.abs() < 0.5));
        // 5 cells per side, interior 3³
        assert_eq!(cube.len(), 125);
        assert_eq!(cube.boundary().len(), 125 - 27);
        assert_eq!(VoxelSet::from_fn(g, |_| true).boundary().len(), 11usize.pow(3) - 9usize.pow(3));
    }

    #[test]
    fn transform_matches_brute_force() {
        let g = grid(24);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let a = StarShape::random(&mut rng).voxelize(g);
            let b = StarShape::random(&mut rng).voxelize(g);
            let brute = hausdorff_distance(&a, &b, DistanceMethod::BruteForce).unwrap();
            let edt = hausdorff_distance(&a, &b, DistanceMethod::Transform).unwrap();
            assert!((brute - edt).abs() < 1e-12, "{brute} {edt}");
            let brute = hausdorff_solid(&a, &b, DistanceMethod::BruteForce).unwrap();
            let edt = hausdorff_solid(&a, &b, DistanceMethod::Transform).unwrap();
            assert!((brute - edt).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_balls_at_fine_resolution() {
        // centers one unit apart, h = 0.02
        let g = Grid::new(161, -1.1, 2.1).unwrap();
        let a = VoxelSet::ball(g, Vec3::new(0.0, 0.5, 0.5), 1.0);
        let b = VoxelSet::ball(g, Vec3::new(1.0, 0.5, 0.5), 1.0);
        assert!(a.boundary().len() > BRUTE_FORCE_LIMIT);
        let d = hausdorff_distance(&a, &b, DistanceMethod::Auto).unwrap();
        assert!((d - 1.0).abs() <= 2.0 * a.voxel_diagonal(), "{d}");
        let coarse = Grid::new(33, -1.1, 2.1).unwrap();
        let (a, b) = (VoxelSet::ball(coarse, Vec3::new(0.0, 0.5, 0.5), 1.0), VoxelSet::ball(coarse, Vec3::new(1.0, 0.5, 0.5), 1.0));
        let brute = hausdorff_points(&a.boundary_points(), &b.boundary_points()).unwrap();
        assert!((brute - 1.0).abs() <= 2.0 * a.voxel_diagonal());
    }

    #[test]
    fn dilation_keeps_hausdorff_distance() {
        let g = grid(41);
        let a = VoxelSet::ball(g, Vec3::new(-0.2, 0.0, 0.0), 0.3);
        let b = VoxelSet::ball(g, Vec3::new(0.25, 0.1, 0.0), 0.3);
        let d0 = hausdorff_solid(&a, &b, DistanceMethod::Auto).unwrap();
        let d1 = hausdorff_solid(&a.dilate(0.2), &b.dilate(0.2), DistanceMethod::Auto).unwrap();
        assert!((d0 - d1).abs() <= 2.0 * a.voxel_diagonal(), "{d0} {d1}");
        assert_eq!(a.dilate(0.0), a);
    }

    #[test]
    fn reachable_complement_examples() {
        let g = grid(31);
        let a = VoxelSet::ball(g, Vec3::new(-0.5, 0.0, 0.0), 0.3);
        let b = VoxelSet::ball(g, Vec3::new(0.5, 0.0, 0.0), 0.3);
        let rc = reachable_complement(&a, &b).unwrap();
        assert_eq!(rc.omega, a.union(&b).unwrap());
        assert_eq!(reachable_complement(&a, &a).unwrap().omega, a);
        assert_eq!(modified_distance(&a, &a, DistanceMethod::Auto).unwrap(), 0.0);
        let full = VoxelSet::from_fn(g, |x| x.x < -0.9);
        assert!(matches!(reachable_complement(&full, &b), Err(Error::NoFreeMargin)));
        let empty = VoxelSet::from_fn(g, |_| false);
        assert!(matches!(reachable_complement(&empty, &b), Err(Error::EmptySet)));
        assert!(matches!(reachable_complement(&a, &VoxelSet::ball(grid(21), Vec3::zeros(), 0.3)), Err(Error::GridMismatch)));
    }

    #[test]
    fn interlocking_c_shapes_enclose_a_pocket() {
        // two half-shells around the same center that only close up together
        let g = grid(31);
        let shell = |x: &Vec3| (0.4..=0.6).contains(&x.norm());
        let upper = VoxelSet::from_fn(g, |x| shell(x) && x.z >= 0.0);
        let lower = VoxelSet::from_fn(g, |x| shell(x) && x.z < 0.0);
        let rc = reachable_complement(&upper, &lower).unwrap();
        let pocket = g.cells() / 2;
        let center = g.cell_index(pocket, pocket, pocket);
        assert!(rc.omega.contains(center) && !upper.contains(center) && !lower.contains(center));
        // brute-force check: every Ω voxel outside the shells lies inside the cavity
        for v in 0..rc.omega.occupancy().len() {
            if rc.omega.contains(v) && !upper.contains(v) && !lower.contains(v) {
                assert!(rc.omega.center(v).norm() < 0.4);
            }
        }
        let alone = reachable_complement(&upper, &VoxelSet::ball(g, Vec3::new(0.0, 0.0, -0.85), 0.05)).unwrap();
        assert!(!alone.omega.contains(center));
    }

    #[test]
    fn separated_balls_have_equal_distances() {
        let g = grid(41);
        let a = VoxelSet::ball(g, Vec3::new(-0.45, 0.0, 0.0), 0.3);
        let b = VoxelSet::ball(g, Vec3::new(0.45, 0.05, 0.0), 0.35);
        let dh = hausdorff_distance(&a, &b, DistanceMethod::Auto).unwrap();
        let dm = modified_distance(&a, &b, DistanceMethod::Auto).unwrap();
        assert!((dh - dm).abs() <= 2.0 * a.voxel_diagonal(), "{dh} {dm}");
    }

    #[test]
    fn pocket_makes_modified_distance_strictly_smaller() {
        let (d1, d2) = pocket_example(61).unwrap();
        let r = metric_report("pocket", &d1, &d2).unwrap();
        assert!(r.modified < r.hausdorff - r.voxel_diagonal, "{r:?}");
        assert!((r.hausdorff - 0.35).abs() <= 2.0 * r.voxel_diagonal);
        assert!((r.modified - 0.05).abs() <= 2.0 * r.voxel_diagonal);
        let brute = modified_distance(&d1, &d2, DistanceMethod::BruteForce).unwrap();
        assert!((brute - r.modified).abs() < 1e-12);
    }

    #[test]
    fn random_pairs_respect_the_bound() {
        let pairs = random_shape_pairs(42, 5, 31).unwrap();
        let again = random_shape_pairs(42, 5, 31).unwrap();
        for (i, ((a, b), (a2, b2))) in pairs.iter().zip(&again).enumerate() {
            assert_eq!((a, b), (a2, b2));
            let r = metric_report(&i.to_string(), a, b).unwrap();
            assert!(r.modified <= r.hausdorff + 2.0 * r.voxel_diagonal, "{r:?}");
        }
    }

    #[test]
    fn voxel_io_round_trip() {
        let (d1, _) = pocket_example(21).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let bin = dir.path().join("d1.bin");
        d1.write(&bin, Some(3), "pocket").unwrap();
        let back = VoxelSet::read(&bin).unwrap();
        assert_eq!(back.occupancy(), d1.occupancy());
        assert!((back.grid.spacing() - d1.grid.spacing()).abs() < 1e-15);
    }
}
