//! Machine-readable report schema and writers.
//!
//! JSON is the primary format (decimal endpoints for humans, hex-float
//! endpoints for bit-exact reproduction); sweep data also exports as CSV
//! with columns `param,lo,hi,branch`. Timing fields are optional so that
//! default reports are byte-identical across runs.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::norms::{Branch, CertifiedBound, PipelineTolerances};
use crate::scalar::Scalar;
use crate::tuner::SweepResult;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Report envelope identifying the producing tool and command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Endpoint scalar type of the run.
    pub scalar: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl ReportMeta {
    pub fn new(command: &str, scalar: &str) -> Self {
        Self {
            tool: "sobocert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            scalar: scalar.into(),
            wall_ms: None,
        }
    }
}

/// One moment-check enclosure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct MomentEntry<F: Scalar> {
    pub m: u32,
    pub value: Interval<F>,
}

/// Output of the `constants` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct ConstantsReport<F: Scalar> {
    pub meta: ReportMeta,
    pub n: u32,
    pub c_omega: Interval<F>,
    pub tolerances: PipelineTolerances<F>,
    pub a0: Interval<F>,
    pub a1: Interval<F>,
    pub mollifier_c: Interval<F>,
    pub i1: Interval<F>,
    pub p_fraenkel: Interval<F>,
    pub moments: Vec<MomentEntry<F>>,
}

/// Output of the `bound` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct BoundsReport<F: Scalar> {
    pub meta: ReportMeta,
    pub bounds: Vec<CertifiedBound<F>>,
}

/// Output of the `sweep` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct SweepReport<F: Scalar> {
    pub meta: ReportMeta,
    pub sweep: SweepResult<F>,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))
}

fn branch_label(branch: Option<Branch>) -> &'static str {
    match branch {
        Some(Branch::RAtMostGamma) => "R<=gamma",
        Some(Branch::RAboveGamma) => "R>gamma",
        Some(Branch::Hull) => "hull",
        None => "-",
    }
}

/// Sweep data as CSV with columns `param,lo,hi,branch`; the argmin row is
/// one of the emitted rows (the one with the smallest `hi`).
pub fn sweep_to_csv<F: Scalar>(sweep: &SweepResult<F>) -> String {
    let mut out = String::from("param,lo,hi,branch\n");
    for pt in &sweep.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            pt.param,
            pt.bound.value.lo(),
            pt.bound.value.hi(),
            branch_label(pt.bound.branch),
        ));
    }
    out
}

/// Write once, atomically: temp file in the same directory then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name()
                .map(|s| s.to_string_lossy())
                .unwrap_or_default()
        )),
        None => Path::new(&format!(
            ".{}.tmp",
            path.file_name()
                .map(|s| s.to_string_lossy())
                .unwrap_or_default()
        ))
        .to_path_buf(),
    };
    let io_err = |e: std::io::Error| Error::Parse(format!("io error on {}: {e}", path.display()));
    {
        let mut f = std::fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(contents.as_bytes()).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    std::fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}
