//! File formats: JSON spaces and functions in, CSV curves and JSON
//! summaries out. Every output is written to a temporary sibling and
//! renamed into place.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use rimetric::space::generate::PlaneComponent;
use rimetric::space::{AnalyticSpace, Metric};
use rimetric::Space;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Euclidean,
    Linf,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceFile {
    Discrete {
        #[serde(default)]
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
        metric: MetricKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dist_matrix: Option<Vec<Vec<f64>>>,
        /// Measure component of each atom, for sampled plane measures.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        components: Option<Vec<PlaneComponent>>,
    },
    EuclideanLebesgue {
        dim: usize,
    },
    AppendixPlane,
}

impl SpaceFile {
    pub fn from_discrete(space: &Space, components: Option<Vec<PlaneComponent>>) -> Self {
        let (points, metric, dist_matrix) = match space.metric() {
            Metric::Euclidean(p) => (p.clone(), MetricKind::Euclidean, None),
            Metric::Chebyshev(p) => (p.clone(), MetricKind::Linf, None),
            Metric::Matrix(m) => (Vec::new(), MetricKind::Matrix, Some(m.clone())),
        };
        SpaceFile::Discrete { points, weights: space.weights().to_vec(), metric, dist_matrix, components }
    }

    pub fn into_space(self) -> Result<LoadedSpace> {
        match self {
            SpaceFile::Discrete { points, weights, metric, dist_matrix, components } => {
                if let Some(c) = &components {
                    if c.len() != weights.len() {
                        bail!("{} components for {} weights", c.len(), weights.len());
                    }
                }
                let metric = match (metric, dist_matrix) {
                    (MetricKind::Euclidean, None) => Metric::Euclidean(points),
                    (MetricKind::Linf, None) => Metric::Chebyshev(points),
                    (MetricKind::Matrix, Some(m)) => Metric::Matrix(m),
                    (MetricKind::Matrix, None) => bail!("metric \"matrix\" needs \"dist_matrix\""),
                    (_, Some(_)) => bail!("\"dist_matrix\" is only allowed with metric \"matrix\""),
                };
                Ok(LoadedSpace::Discrete(Space::new(metric, weights)?))
            }
            SpaceFile::EuclideanLebesgue { dim } => {
                if dim == 0 {
                    bail!("dimension must be positive");
                }
                Ok(LoadedSpace::Analytic(AnalyticSpace::EuclideanLebesgue { dim }))
            }
            SpaceFile::AppendixPlane => Ok(LoadedSpace::Analytic(AnalyticSpace::AppendixPlane)),
        }
    }
}

pub enum LoadedSpace {
    Discrete(Space),
    Analytic(AnalyticSpace),
}

impl LoadedSpace {
    pub fn discrete(&self) -> Result<&Space> {
        match self {
            LoadedSpace::Discrete(s) => Ok(s),
            LoadedSpace::Analytic(_) => bail!("this command needs a discrete space"),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {what} file {}", path.display()))?;
    // serde_json reports line and column
    serde_json::from_str(&text).with_context(|| format!("parsing {what} file {}", path.display()))
}

pub fn load_space(path: &Path) -> Result<LoadedSpace> {
    let file: SpaceFile = read_json(path, "space")?;
    file.into_space().with_context(|| format!("invalid space file {}", path.display()))
}

/// Loads a JSON array aligned with the `n` points of a space.
pub fn load_function(path: &Path, n: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = read_json(path, "function")?;
    if values.len() != n {
        bail!("function file {} has {} values, the space has {} points", path.display(), values.len(), n);
    }
    Ok(values)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| anyhow!("writing {}: {}", path.display(), e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

/// CSV with a header row; numbers use the shortest round-trip form.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{}", e.error()))?;
    write_atomic(path, &bytes)
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

/// `"0.2,0"` -> `[0.2, 0.0]`.
pub fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad coordinate {c:?} in {s:?}")))
        .collect()
}

/// `"a=0.001"` -> `0.001`.
pub fn parse_probe(s: &str) -> Result<f64, String> {
    let value = s.strip_prefix("a=").unwrap_or(s);
    let a: f64 = value.parse().map_err(|_| format!("expected a=<number>, got {s:?}"))?;
    if a > 0.0 && a < 0.5 {
        Ok(a)
    } else {
        Err(format!("a must lie in (0, 1/2), got {a}"))
    }
}
