//! Output directory handling. Every file written here carries the run seed.

use std::fs;
use std::path::{Path, PathBuf};

use elastogreen::dataset::ScanDataset;
use elastogreen::numfmt::{to_json_pretty, Sig17};
use elastogreen::{Error, Mat3, Result};
use serde::Serialize;

pub struct Artifacts {
    pub dir: PathBuf,
    pub seed: u64,
    pub command: String,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    seed: u64,
    result: &'a T,
}

#[derive(Serialize)]
struct CsvMeta<'a, P: Serialize> {
    command: &'a str,
    seed: u64,
    kind: String,
    columns: &'static [&'static str],
    rows: usize,
    parameters: &'a P,
}

fn io(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

impl Artifacts {
    pub fn new(dir: &Path, seed: u64, command: &str) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        Ok(Self { dir: dir.to_owned(), seed, command: command.to_owned() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `{command, seed, result}` and returns the rendered text.
    pub fn json<T: Serialize>(&self, name: &str, result: &T) -> Result<String> {
        let env = Envelope { command: &self.command, seed: self.seed, result };
        let text = to_json_pretty(&env)?;
        let p = self.path(name);
        fs::write(&p, &text).map_err(|e| io(&p, e))?;
        Ok(text)
    }

    /// Writes `<stem>.csv` plus `<stem>.meta.json`.
    pub fn csv<P: Serialize>(&self, stem: &str, data: &ScanDataset, parameters: &P) -> Result<PathBuf> {
        let p = self.path(&format!("{stem}.csv"));
        data.write_csv(&p)?;
        let meta = CsvMeta {
            command: &self.command,
            seed: self.seed,
            kind: data.kind.to_string(),
            columns: data.header(),
            rows: data.len(),
            parameters,
        };
        let m = self.path(&format!("{stem}.meta.json"));
        fs::write(&m, to_json_pretty(&meta)?).map_err(|e| io(&m, e))?;
        Ok(p)
    }

    pub fn text(&self, name: &str, body: &str) -> Result<()> {
        let p = self.path(name);
        fs::write(&p, body).map_err(|e| io(&p, e))
    }
}

pub fn rows(m: &Mat3) -> [[Sig17; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| Sig17(m[(i, j)])))
}

pub fn vector(v: &elastogreen::Vec3) -> [Sig17; 3] {
    [Sig17(v.x), Sig17(v.y), Sig17(v.z)]
}
