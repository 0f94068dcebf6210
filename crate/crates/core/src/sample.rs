use alloc::string::String;
use alloc::vec::Vec;

use crate::ensembles::ExtractionMode;
use crate::error::{Error, Result};

/// A pool of non-negative spacings together with how it was normalized.
///
/// `spacings` holds the raw values divided by `grand_mean_used`. Samples
/// drawn directly from a law are left on their natural scale
/// (`grand_mean_used == 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSample {
    spacings: Vec<f64>,
    grand_mean_used: f64,
    extraction_mode: Option<ExtractionMode>,
    provenance: String,
}

impl SpacingSample {
    /// Divides `raw` by its mean so the stored spacings have unit mean.
    pub fn normalized(
        raw: Vec<f64>,
        extraction_mode: Option<ExtractionMode>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        validate(&raw)?;
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        if !(mean > 0.0) {
            return Err(Error::degenerate("spacings have zero mean"));
        }
        let spacings = raw.into_iter().map(|s| s / mean).collect();
        Ok(SpacingSample {
            spacings,
            grand_mean_used: mean,
            extraction_mode,
            provenance: provenance.into(),
        })
    }

    /// Keeps `values` on their own scale.
    pub fn unnormalized(values: Vec<f64>, provenance: impl Into<String>) -> Result<Self> {
        validate(&values)?;
        Ok(SpacingSample {
            spacings: values,
            grand_mean_used: 1.0,
            extraction_mode: None,
            provenance: provenance.into(),
        })
    }

    /// Reassembles a sample that was serialized earlier.
    pub fn from_parts(
        spacings: Vec<f64>,
        grand_mean_used: f64,
        extraction_mode: Option<ExtractionMode>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        validate(&spacings)?;
        if !(grand_mean_used.is_finite() && grand_mean_used > 0.0) {
            return Err(Error::domain("grand mean must be finite and positive"));
        }
        Ok(SpacingSample {
            spacings,
            grand_mean_used,
            extraction_mode,
            provenance: provenance.into(),
        })
    }

    pub fn spacings(&self) -> &[f64] {
        &self.spacings
    }

    pub fn into_spacings(self) -> Vec<f64> {
        self.spacings
    }

    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn grand_mean_used(&self) -> f64 {
        self.grand_mean_used
    }

    pub fn extraction_mode(&self) -> Option<ExtractionMode> {
        self.extraction_mode
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn mean(&self) -> f64 {
        self.spacings.iter().sum::<f64>() / self.spacings.len() as f64
    }
}

fn validate(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain("spacing sample is empty"));
    }
    if let Some(bad) = values.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(Error::domain(alloc::format!(
            "spacings must be finite and non-negative, found {bad}"
        )));
    }
    Ok(())
}
