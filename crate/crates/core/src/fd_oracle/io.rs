//! Flat binary arrays with a JSON sidecar, and the problem-spec format.
//!
//! An array is stored as `<name>.bin` (little-endian, x-fastest, components
//! interleaved per sample) next to `<name>.json` describing its layout.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::grid::{Field, GraphInterface, Grid, VoxelDomain};
use super::problem::{BoundaryData, Reference, TransmissionProblem};
use super::solver::SolverOptions;
use crate::config::MaterialConfig;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DType {
    F64,
    U8,
}

impl DType {
    fn size(&self) -> usize {
        match self {
            DType::F64 => 8,
            DType::U8 => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub dtype: DType,
    pub endianness: String,
    pub ordering: String,
    /// Samples per axis.
    pub shape: [usize; 3],
    pub components: usize,
    /// Position of the first sample.
    pub origin: [f64; 3],
    pub spacing: f64,
    pub seed: Option<u64>,
    pub description: String,
}

impl Sidecar {
    pub fn new(dtype: DType, shape: [usize; 3], components: usize, origin: [f64; 3], spacing: f64) -> Self {
        Self {
            dtype,
            endianness: "little".into(),
            ordering: "x-fastest".into(),
            shape,
            components,
            origin,
            spacing,
            seed: None,
            description: String::new(),
        }
    }

    fn values(&self) -> usize {
        self.shape.iter().product::<usize>() * self.components
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

fn write_raw(bin: &Path, sidecar: &Sidecar, bytes: &[u8]) -> Result<()> {
    assert_eq!(bytes.len(), sidecar.values() * sidecar.dtype.size());
    fs::write(bin, bytes).map_err(|e| io_err(bin, e))?;
    let side = sidecar_path(bin);
    let json = crate::numfmt::to_json_pretty(sidecar).map_err(|e| io_err(&side, e))?;
    fs::write(&side, json).map_err(|e| io_err(&side, e))
}

fn read_raw(bin: &Path, dtype: DType) -> Result<(Sidecar, Vec<u8>)> {
    let side = sidecar_path(bin);
    let text = fs::read_to_string(&side).map_err(|e| io_err(&side, e))?;
    let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    if sidecar.dtype != dtype || sidecar.endianness != "little" || sidecar.ordering != "x-fastest" {
        return Err(Error::ConfigParse(format!("unsupported layout in {}", side.display())));
    }
    let bytes = fs::read(bin).map_err(|e| io_err(bin, e))?;
    if bytes.len() != sidecar.values() * dtype.size() {
        return Err(Error::GridMismatch);
    }
    Ok((sidecar, bytes))
}

pub fn write_f64(bin: &Path, sidecar: &Sidecar, data: &[f64]) -> Result<()> {
    let bytes: Vec<u8> = data.iter().flat_map(|v| v.to_le_bytes()).collect();
    write_raw(bin, &Sidecar { dtype: DType::F64, ..sidecar.clone() }, &bytes)
}

pub fn read_f64(bin: &Path) -> Result<(Sidecar, Vec<f64>)> {
    let (s, bytes) = read_raw(bin, DType::F64)?;
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok((s, data))
}

pub fn write_u8(bin: &Path, sidecar: &Sidecar, data: &[u8]) -> Result<()> {
    write_raw(bin, &Sidecar { dtype: DType::U8, ..sidecar.clone() }, data)
}

pub fn read_u8(bin: &Path) -> Result<(Sidecar, Vec<u8>)> {
    read_raw(bin, DType::U8)
}

fn field_sidecar(field: &Field, seed: Option<u64>, description: &str) -> Sidecar {
    let g = field.grid;
    Sidecar {
        seed,
        description: description.to_owned(),
        ..Sidecar::new(DType::F64, [g.n; 3], 3, [g.lo; 3], g.spacing())
    }
}

pub fn write_field(bin: &Path, field: &Field, seed: Option<u64>, description: &str) -> Result<()> {
    write_f64(bin, &field_sidecar(field, seed, description), &field.data)
}

pub fn read_field(bin: &Path) -> Result<Field> {
    let (s, data) = read_f64(bin)?;
    let n = s.shape[0];
    if s.shape != [n; 3] || s.components != 3 || s.origin != [s.origin[0]; 3] {
        return Err(Error::GridMismatch);
    }
    let lo = s.origin[0];
    let grid = Grid::new(n, lo, lo + s.spacing * (n - 1) as f64)?;
    Ok(Field { grid, data })
}

/// Inclusion geometry of a problem spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InterfaceSpec {
    #[default]
    None,
    HalfSpace,
    Graph {
        m0: f64,
        alpha: f64,
    },
    Sphere {
        center: Vec3,
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub position: Vec3,
    pub direction: Vec3,
    pub reference: Reference,
}

/// Problem description read by the `oracle solve` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub grid: Grid,
    pub materials: MaterialConfig,
    #[serde(default)]
    pub interface: InterfaceSpec,
    pub boundary: BoundaryData,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub source: Option<SourceSpec>,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)
    }

    pub fn build(&self) -> Result<TransmissionProblem> {
        let grid = Grid::new(self.grid.n, self.grid.lo, self.grid.hi)?;
        let pair = self.materials.pair_allowing_homogeneous()?;
        let domain = match self.interface {
            InterfaceSpec::None => VoxelDomain::homogeneous(grid),
            InterfaceSpec::HalfSpace => VoxelDomain::half_space(grid),
            InterfaceSpec::Graph { m0, alpha } => VoxelDomain::graph(grid, GraphInterface { m0, alpha })?,
            InterfaceSpec::Sphere { center, radius } => VoxelDomain::sphere(grid, center, radius),
        };
        let mut p = TransmissionProblem::new(pair, domain, self.boundary);
        p.options = self.solver;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trip() {
        let g = Grid::new(10, -1.0, 1.0).unwrap();
        let f = Field::from_fn(g, |x| Vec3::new(x.x, x.y * x.z, 1.0 / 3.0));
        let dir = tempfile::tempdir().unwrap();
        let bin = dir.path().join("u.bin");
        write_field(&bin, &f, Some(7), "test").unwrap();
        assert_eq!(fs::metadata(&bin).unwrap().len(), 8 * 3 * 1000);
        let back = read_field(&bin).unwrap();
        assert_eq!(back.data, f.data);
        assert_eq!(back.grid.n, 10);
        let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(sidecar_path(&bin)).unwrap()).unwrap();
        assert_eq!(side["seed"], 7);
        assert_eq!(side["ordering"], "x-fastest");
        fs::write(&bin, [0u8; 5]).unwrap();
        assert!(matches!(read_field(&bin), Err(Error::GridMismatch)));
    }

    #[test]
    fn occupancy_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let bin = dir.path().join("v.bin");
        let data: Vec<u8> = (0..27).map(|i| (i % 2) as u8).collect();
        write_u8(&bin, &Sidecar::new(DType::U8, [3; 3], 1, [0.0; 3], 0.5), &data).unwrap();
        assert_eq!(read_u8(&bin).unwrap().1, data);
        assert!(read_f64(&bin).is_err());
    }

    #[test]
    fn problem_spec_parses_and_builds() {
        let text = r#"{
            "grid": {"n": 11, "lo": -1.0, "hi": 1.0},
            "materials": {"host": {"mu": 1.0, "nu": 0.3}, "inclusion": {"mu": 3.0, "nu": 0.2}},
            "interface": {"kind": "graph", "m0": 1.0, "alpha": 1.0},
            "boundary": {"kind": "affine", "a": [[1, 0, 0], [0, 2, 0], [0, 0, 3]], "b": [0, 0, 1]}
        }"#;
        let spec = ProblemSpec::from_json(text).unwrap();
        let p = spec.build().unwrap();
        assert!(p.domain.graph.is_some());
        assert_eq!(p.boundary.eval(&Vec3::new(1.0, 1.0, 1.0), &p.pair).unwrap(), Vec3::new(1.0, 2.0, 4.0));
        assert_eq!(p.options, SolverOptions::default());
        let back = ProblemSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let kelvin = text.replace(
            r#"{"kind": "affine", "a": [[1, 0, 0], [0, 2, 0], [0, 0, 3]], "b": [0, 0, 1]}"#,
            r#"{"kind": "gamma_plus", "source": [0, 0, -2], "direction": [0, 0, 1]}"#,
        );
        assert!(matches!(ProblemSpec::from_json(&kelvin).unwrap().boundary, BoundaryData::GammaPlus { .. }));
        assert!(ProblemSpec::from_json(&text.replace("\"n\": 11", "\"n\": 5")).unwrap().build().is_err());
        assert!(matches!(ProblemSpec::from_json(&text.replace("affine", "cubic")), Err(Error::ConfigParse(_))));
    }
}
