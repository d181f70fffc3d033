//! Run configuration: a JSON file with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num::ToPrimitive;
use serde::{Deserialize, Serialize};
use tautrel::exactalg::{parse_poly, parse_rational, Frac, Rational};
use tautrel::frobenius::{charts, ChartSpec, ExpansionSpec};
use tautrel::reconstruct::CohFTOptions;
use tautrel::relations::Bounds;
use tautrel::rmatrix::ConstantPolicy;

use crate::CliError;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// A chart file, or `builtin:NAME` (a bare builtin name works when no such file exists).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    /// Replaces the chart's expansion point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion_point: Option<ExpansionSpec>,
    /// Series truncation order in the local parameter.
    #[serde(default = "default_precision")]
    pub precision: String,
    #[serde(default = "default_z_order")]
    pub z_order: usize,
    #[serde(default = "default_codim")]
    pub max_codim: u32,
    /// Explicit `(g, n)` cells; when empty, every stable cell with `3g - 3 + n <= max_dim`.
    #[serde(default)]
    pub cells: Vec<(u32, usize)>,
    #[serde(default = "default_max_dim")]
    pub max_dim: u32,
    /// Integration constants of the R-matrix recursion, per z-order, one per idempotent.
    #[serde(default)]
    pub constants: BTreeMap<usize, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Worker threads; results do not depend on it, so it is not echoed.
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

fn default_precision() -> String {
    "6".into()
}

fn default_z_order() -> usize {
    3
}

fn default_codim() -> u32 {
    2
}

fn default_max_dim() -> u32 {
    4
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(serde_json::from_str("{}").expect("defaults")),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("config {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", p.display())))
            }
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.z_order == 0 || self.max_codim == 0 || self.max_dim == 0 {
            return Err(CliError::Input("bounds must be positive".into()));
        }
        if self.precision_frac()? <= Frac::from_integer(0) {
            return Err(CliError::Input("precision must be positive".into()));
        }
        Ok(())
    }

    pub fn precision_frac(&self) -> Result<Frac, CliError> {
        let q = parse_rational(&self.precision).map_err(|e| CliError::Input(format!("precision: {e}")))?;
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(a), Some(b)) => Ok(Frac::new(a, b)),
            _ => Err(CliError::Input("precision out of range".into())),
        }
    }

    pub fn chart_spec(&self) -> Result<ChartSpec, CliError> {
        let name = self.chart.as_deref().ok_or_else(|| CliError::Input("no chart given".into()))?;
        let mut spec = load_chart(name)?;
        if let Some(e) = &self.expansion_point {
            spec.expansion_point = Some(e.clone());
        }
        Ok(spec)
    }

    pub fn cohft_options(&self) -> Result<CohFTOptions, CliError> {
        let policy = if self.constants.is_empty() {
            ConstantPolicy::Zero
        } else {
            let mut t = BTreeMap::new();
            for (k, v) in &self.constants {
                let polys = v.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>, _>>().map_err(|e| CliError::Input(format!("constants: {e}")))?;
                t.insert(*k, polys);
            }
            ConstantPolicy::Table(t)
        };
        Ok(CohFTOptions { precision: self.precision_frac()?, z_order: self.z_order, policy, probe: self.probe_vec()? })
    }

    pub fn probe_vec(&self) -> Result<Option<Vec<Rational>>, CliError> {
        self.probe.as_ref().map(|p| parse_vector_items(p)).transpose()
    }

    pub fn bounds(&self) -> Result<Bounds, CliError> {
        if self.cells.is_empty() {
            Ok(Bounds::up_to_dim(self.max_dim, self.max_codim))
        } else {
            Bounds::new(self.cells.clone(), self.max_codim).map_err(|e| CliError::Input(e.to_string()))
        }
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

pub fn load_chart(name: &str) -> Result<ChartSpec, CliError> {
    if let Some(b) = name.strip_prefix("builtin:") {
        return charts::builtin(b).ok_or_else(|| CliError::Input(format!("unknown builtin chart {b}; known: {}", charts::BUILTIN_NAMES.join(", "))));
    }
    if !Path::new(name).exists() {
        if let Some(spec) = charts::builtin(name) {
            return Ok(spec);
        }
    }
    let text = std::fs::read_to_string(name).map_err(|e| CliError::Input(format!("chart {name}: {e}")))?;
    ChartSpec::from_json(&text).map_err(|e| CliError::Input(format!("chart {name}: {e}")))
}

fn parse_vector_items(items: &[String]) -> Result<Vec<Rational>, CliError> {
    items.iter().map(|s| parse_rational(s.trim()).map_err(|e| CliError::Input(format!("vector entry {s:?}: {e}")))).collect()
}

/// A comma-separated rational vector such as `0,1` or `1/2,-3`.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>, CliError> {
    parse_vector_items(&text.split(',').map(str::to_string).collect::<Vec<_>>())
}

/// `g,n`.
pub fn parse_cell(text: &str) -> Result<(u32, usize), String> {
    let (g, n) = text.split_once(',').ok_or_else(|| format!("expected g,n, got {text:?}"))?;
    Ok((g.trim().parse().map_err(|e| format!("{e}"))?, n.trim().parse().map_err(|e| format!("{e}"))?))
}
