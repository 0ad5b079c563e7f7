//! Run metadata embedded in every output file.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::rng::RNG_ALGORITHM;

pub const TOOL_NAME: &str = "ecbalance";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tool version, master seed, RNG identifier and the effective configuration.
///
/// CSV outputs carry it as leading `#` comment lines; JSON outputs carry it
/// under a `metadata` key. It contains no timestamps or host details, so
/// rerunning an echoed configuration reproduces the files byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub rng: &'static str,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
}

impl RunMetadata {
    pub fn new(seed: Option<u64>, config: impl Serialize) -> Result<Self> {
        Ok(Self {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            rng: RNG_ALGORITHM,
            seed,
            config: serde_json::to_value(config)?,
        })
    }

    pub fn write_csv_preamble<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# tool: {} {}", self.tool, self.version)?;
        if let Some(seed) = self.seed {
            writeln!(w, "# seed: {seed}")?;
        }
        writeln!(w, "# rng: {}", self.rng)?;
        writeln!(w, "# config: {}", serde_json::to_string(&self.config)?)?;
        Ok(())
    }
}

/// Writes the optional preamble followed by CSV content produced by `body`.
pub fn write_with_preamble<W, F>(mut w: W, meta: Option<&RunMetadata>, body: F) -> Result<()>
where
    W: Write,
    F: FnOnce(&mut W) -> Result<()>,
{
    if let Some(meta) = meta {
        meta.write_csv_preamble(&mut w)?;
    }
    body(&mut w)?;
    w.flush()?;
    Ok(())
}
