//! On-disk graph cache: versioned JSON with a SHA-256 checksum.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::field::Elem;
use super::graph::{build_graph_capped, DualPolarGraph};
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::qcore::{Family, PolarParams};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "POLAR_EKR_CACHE";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub schema_version: u32,
    pub family: Family,
    pub q: u64,
    pub d: usize,
    pub n: usize,
    pub vertices: Vec<Vec<Vec<Elem>>>,
    pub codim: Vec<u8>,
    pub checksum: String,
}

fn checksum(family: Family, q: u64, d: usize, vertices: &[Vec<Vec<Elem>>], codim: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("{SCHEMA_VERSION}|{}|{q}|{d}|{}|", family.tag(), vertices.len()).as_bytes());
    for v in vertices {
        for row in v {
            h.update(row);
        }
    }
    h.update(codim);
    format!("{:x}", h.finalize())
}

impl GraphFile {
    pub fn from_graph(g: &DualPolarGraph) -> Self {
        let p = g.params();
        let vertices: Vec<Vec<Vec<Elem>>> = g.vertices().iter().map(|v| v.rows().to_vec()).collect();
        let codim = g.codim_bytes().to_vec();
        let checksum = checksum(p.family(), p.q(), p.d(), &vertices, &codim);
        GraphFile {
            schema_version: SCHEMA_VERSION,
            family: p.family(),
            q: p.q(),
            d: p.d(),
            n: g.n(),
            vertices,
            codim,
            checksum,
        }
    }

    pub fn into_graph(self) -> Result<DualPolarGraph> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Cache(format!("schema version {} (expected {SCHEMA_VERSION})", self.schema_version)));
        }
        let expect = checksum(self.family, self.q, self.d, &self.vertices, &self.codim);
        if expect != self.checksum {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        if self.vertices.len() != self.n {
            return Err(Error::Cache(format!("n = {} but {} vertices stored", self.n, self.vertices.len())));
        }
        let params = PolarParams::new(self.family, self.q, self.d)?;
        let ambient = self.family.vector_dim(self.d);
        let vertices = self.vertices.into_iter().map(|rows| Subspace::from_canonical(ambient, rows)).collect();
        DualPolarGraph::from_parts(params, vertices, self.codim)
    }
}

pub fn cache_file_name(p: &PolarParams) -> String {
    format!("{}-q{}-d{}-v{SCHEMA_VERSION}.json", p.family().tag(), p.q(), p.d())
}

/// The directory from `explicit`, else the environment override.
pub fn resolve_cache_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

pub fn save_graph(dir: &Path, g: &DualPolarGraph) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
    let path = dir.join(cache_file_name(g.params()));
    let text = serde_json::to_string(&GraphFile::from_graph(g)).map_err(|e| Error::Cache(e.to_string()))?;
    fs::write(&path, text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn load_graph(path: &Path) -> Result<DualPolarGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
    file.into_graph()
}

/// Loads the cached graph if present and valid; otherwise builds it and, when
/// a directory is given, writes it. Stale or corrupt files are rebuilt.
pub fn load_or_build(dir: Option<&Path>, p: &PolarParams, cap: usize) -> Result<DualPolarGraph> {
    if let Some(dir) = dir {
        let path = dir.join(cache_file_name(p));
        if path.exists() {
            if let Ok(g) = load_graph(&path) {
                if g.params() == p {
                    return Ok(g);
                }
            }
        }
        let g = build_graph_capped(p, cap)?;
        save_graph(dir, &g)?;
        return Ok(g);
    }
    build_graph_capped(p, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::graph::build_graph;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let p = PolarParams::new(Family::Symplectic, 2, 2).unwrap();
        let g = build_graph(&p).unwrap();
        let path = save_graph(dir.path(), &g).unwrap();
        let back = load_graph(&path).unwrap();
        assert_eq!(back.vertices(), g.vertices());
        assert_eq!(back.codim_bytes(), g.codim_bytes());

        let mut file: GraphFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        file.codim[1] ^= 3;
        assert!(matches!(file.clone().into_graph(), Err(Error::Cache(_))));
        file.schema_version = 0;
        assert!(file.into_graph().is_err());

        fs::write(&path, "{not json").unwrap();
        let rebuilt = load_or_build(Some(dir.path()), &p, 100).unwrap();
        assert_eq!(rebuilt.n(), 15);
        assert!(load_graph(&path).is_ok());
    }

    #[test]
    fn checksum_is_stable() {
        let p = PolarParams::new(Family::HyperbolicQPlus, 2, 2).unwrap();
        let a = GraphFile::from_graph(&build_graph(&p).unwrap());
        let b = GraphFile::from_graph(&build_graph(&p).unwrap());
        assert_eq!(a.checksum, b.checksum);
        assert_eq!(a.checksum.len(), 64);
    }
}
