//! Dataset loading.
//!
//! Input is the KONECT edge-list layout: one edge per line as whitespace
//! separated 1-based ids, `%` lines are comments, and any columns after the
//! first two (weights, timestamps) are ignored. A comment line made of three
//! integers before the first edge is read as the KONECT size line
//! `% m n_b n_w` and fixes the side sizes, which keeps trailing isolated
//! vertices. Files ending in `.gz` are decompressed on the fly.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use flate2::read::MultiGzDecoder;
use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetFormat {
    /// Two id columns, one per side.
    #[default]
    KonectBipartite,
    /// Undirected edges over a single id space, cloned onto both sides.
    EdgelistUnipartite,
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "konect-bipartite" | "konect" => Ok(DatasetFormat::KonectBipartite),
            "edgelist-unipartite" | "unipartite" => Ok(DatasetFormat::EdgelistUnipartite),
            other => Err(Error::InvalidConfig(format!(
                "unknown dataset format {other:?}"
            ))),
        }
    }
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetFormat::KonectBipartite => "konect-bipartite",
            DatasetFormat::EdgelistUnipartite => "edgelist-unipartite",
        })
    }
}

/// Which side of the file the top-k query runs over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    #[default]
    #[serde(rename = "b", alias = "B")]
    B,
    #[serde(rename = "w", alias = "W")]
    W,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b" | "B" => Ok(Side::B),
            "w" | "W" => Ok(Side::W),
            other => Err(Error::InvalidConfig(format!(
                "source side must be b or w, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::B => "b",
            Side::W => "w",
        })
    }
}

/// A dataset on disk plus optional declared statistics.
///
/// Declared counts describe the file as written (before any side swap) and
/// must match what is loaded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub path: PathBuf,
    #[serde(default)]
    pub format: DatasetFormat,
    #[serde(default)]
    pub n_b: Option<u32>,
    #[serde(default)]
    pub n_w: Option<u32>,
    #[serde(default)]
    pub m: Option<u64>,
    #[serde(default)]
    pub source_side: Side,
}

impl DatasetManifest {
    pub fn new(path: impl Into<PathBuf>, format: DatasetFormat, source_side: Side) -> Self {
        let path = path.into();
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self {
            name,
            path,
            format,
            n_b: None,
            n_w: None,
            m: None,
            source_side,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: u64,
    pub edges_read: u64,
    pub duplicates: u64,
    pub self_loops: u64,
}

struct RawEdges {
    pairs: Vec<(u32, u32)>,
    declared: Option<(u32, u32)>,
    max_left: u32,
    max_right: u32,
    report: LoadReport,
}

fn open(path: &Path) -> Result<Box<dyn BufRead>> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let reader: Box<dyn Read> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    Ok(Box::new(BufReader::with_capacity(1 << 20, reader)))
}

fn parse_id(token: &str, path: &Path, line: u64) -> Result<u32> {
    let err = |message: String| Error::Parse {
        path: path.to_owned(),
        line,
        message,
    };
    let id: u64 = token
        .parse()
        .map_err(|_| err(format!("expected a vertex id, found {token:?}")))?;
    if id == 0 {
        return Err(err("vertex ids are 1-based".into()));
    }
    u32::try_from(id - 1).map_err(|_| err(format!("vertex id {id} is too large")))
}

fn read_edges(path: &Path) -> Result<RawEdges> {
    let mut raw = RawEdges {
        pairs: Vec::new(),
        declared: None,
        max_left: 0,
        max_right: 0,
        report: LoadReport::default(),
    };
    let mut reader = open(path)?;
    let mut buf = String::new();
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        if n == 0 {
            break;
        }
        raw.report.lines += 1;
        let line_no = raw.report.lines;
        let line = buf.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('%') {
            if raw.pairs.is_empty() && raw.declared.is_none() {
                let nums: Vec<u64> = comment
                    .split_whitespace()
                    .map_while(|t| t.parse().ok())
                    .collect();
                if nums.len() == 3 && comment.split_whitespace().count() == 3 {
                    let side = |v: u64| {
                        u32::try_from(v).map_err(|_| Error::Parse {
                            path: path.to_owned(),
                            line: line_no,
                            message: format!("declared size {v} is too large"),
                        })
                    };
                    raw.declared = Some((side(nums[1])?, side(nums[2])?));
                }
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: line_no,
                message: "expected two vertex ids".into(),
            });
        };
        let left = parse_id(a, path, line_no)?;
        let right = parse_id(b, path, line_no)?;
        raw.max_left = raw.max_left.max(left + 1);
        raw.max_right = raw.max_right.max(right + 1);
        raw.pairs.push((left, right));
        raw.report.edges_read += 1;
    }
    if raw.report.edges_read == 0 {
        warn!("{}: no edges found", path.display());
    }
    Ok(raw)
}

fn side_size(observed: u32, declared: Option<u32>, what: &str, path: &Path) -> Result<u32> {
    match declared {
        Some(d) if d < observed => Err(Error::Parse {
            path: path.to_owned(),
            line: 0,
            message: format!("{what} id {observed} exceeds declared size {d}"),
        }),
        Some(d) => Ok(d),
        None => Ok(observed),
    }
}

/// Loads a bipartite KONECT file. With `source_side = W` the result is
/// transposed so the file's second column becomes the black side.
pub fn load_konect(
    path: impl AsRef<Path>,
    source_side: Side,
) -> Result<(BipartiteGraph, LoadReport)> {
    let path = path.as_ref();
    let (graph, report) = load_konect_as_written(path)?;
    Ok(match source_side {
        Side::B => (graph, report),
        Side::W => (graph.swap_sides(), report),
    })
}

fn load_konect_as_written(path: &Path) -> Result<(BipartiteGraph, LoadReport)> {
    let raw = read_edges(path)?;
    let n_b = side_size(raw.max_left, raw.declared.map(|d| d.0), "black", path)?;
    let n_w = side_size(raw.max_right, raw.declared.map(|d| d.1), "white", path)?;
    let (graph, duplicates) = BipartiteGraph::from_pairs(n_b, n_w, raw.pairs);
    if duplicates > 0 {
        warn!("{}: dropped {duplicates} duplicate edges", path.display());
    }
    let report = LoadReport {
        duplicates,
        ..raw.report
    };
    Ok((graph, report))
}

/// Loads an undirected edge list and clones its vertex set onto both sides.
/// Self-loops are dropped.
pub fn load_unipartite_as_bipartite(
    path: impl AsRef<Path>,
) -> Result<(BipartiteGraph, LoadReport)> {
    let path = path.as_ref();
    let mut raw = read_edges(path)?;
    let observed = raw.max_left.max(raw.max_right);
    let declared = raw.declared.map(|(a, b)| a.max(b));
    let n = side_size(observed, declared, "vertex", path)?;

    let before = raw.pairs.len();
    raw.pairs.retain(|&(i, j)| i != j);
    let self_loops = (before - raw.pairs.len()) as u64;
    if self_loops > 0 {
        warn!("{}: dropped {self_loops} self-loops", path.display());
    }
    let (graph, duplicates) = BipartiteGraph::clone_to_bipartite(n, raw.pairs)?;
    if duplicates > 0 {
        warn!("{}: dropped {duplicates} duplicate edges", path.display());
    }
    let report = LoadReport {
        duplicates,
        self_loops,
        ..raw.report
    };
    Ok((graph, report))
}

/// Loads the dataset a manifest points at, checks declared counts against
/// the file as written, then applies the source side.
pub fn load_manifest(manifest: &DatasetManifest) -> Result<(BipartiteGraph, LoadReport)> {
    let (graph, report) = match manifest.format {
        DatasetFormat::KonectBipartite => load_konect_as_written(&manifest.path)?,
        DatasetFormat::EdgelistUnipartite => load_unipartite_as_bipartite(&manifest.path)?,
    };
    let checks = [
        (
            "n_b",
            manifest.n_b.map(u64::from),
            u64::from(graph.n_black()),
        ),
        (
            "n_w",
            manifest.n_w.map(u64::from),
            u64::from(graph.n_white()),
        ),
        ("m", manifest.m, graph.m()),
    ];
    for (what, declared, actual) in checks {
        if let Some(declared) = declared {
            if declared != actual {
                return Err(Error::ManifestMismatch {
                    name: manifest.name.clone(),
                    what,
                    declared,
                    actual,
                });
            }
        }
    }
    Ok(match manifest.source_side {
        Side::B => (graph, report),
        Side::W => (graph.swap_sides(), report),
    })
}

/// Writes `graph` as a KONECT bipartite file, including the size line.
pub fn write_konect<W: Write>(graph: &BipartiteGraph, mut out: W) -> io::Result<()> {
    writeln!(out, "% bip unweighted")?;
    writeln!(
        out,
        "% {} {} {}",
        graph.m(),
        graph.n_black(),
        graph.n_white()
    )?;
    for (b, w) in graph.edges() {
        writeln!(out, "{} {}", b + 1, w + 1)?;
    }
    out.flush()
}
