//! Parsing of measure and graph arguments.

use std::fs;
use std::path::Path;

use freewreath_core::measures::moments_of;
use freewreath_core::{CatalogMeasure, Error, MomentSequence, PrecoloredGraph, Result, SignedAtomicMeasure};

/// A measure given on the command line: a catalog literal or inline atoms.
#[derive(Clone, Debug)]
pub enum MeasureArg {
    Catalog(CatalogMeasure),
    Atoms(SignedAtomicMeasure),
}

impl MeasureArg {
    /// `name:params`, inline JSON atoms `[["loc","weight"],...]`, or `@FILE` holding the JSON.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(path) = text.strip_prefix('@') {
            return Self::parse(&read(Path::new(path))?);
        }
        if text.starts_with('[') {
            let atoms: SignedAtomicMeasure =
                serde_json::from_str(text).map_err(|e| Error::SchemaError(format!("atomic measure: {e}")))?;
            return Ok(MeasureArg::Atoms(atoms));
        }
        Ok(MeasureArg::Catalog(text.parse()?))
    }

    pub fn label(&self) -> String {
        match self {
            MeasureArg::Catalog(c) => c.name(),
            MeasureArg::Atoms(a) => a.to_string(),
        }
    }

    pub fn atoms(&self) -> Result<SignedAtomicMeasure> {
        match self {
            MeasureArg::Atoms(a) => Ok(a.clone()),
            MeasureArg::Catalog(c) => c
                .atoms()?
                .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a finite atomic measure", c.name()))),
        }
    }

    pub fn moments(&self, order: usize) -> Result<MomentSequence> {
        match self {
            MeasureArg::Atoms(a) => Ok(a.moments(order)),
            MeasureArg::Catalog(c) => moments_of(c, order),
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

/// A built-in graph name, or a path to a JSON graph document.
pub fn graph(spec: &str) -> Result<PrecoloredGraph> {
    let path = Path::new(spec);
    if path.is_file() {
        return freewreath_core::graphs::parse_graph(&read(path)?);
    }
    spec.parse()
}
