//! JSON form of spectral data:
//! `{"blocks":[{"z":[re,im],"alphas":[[re,im],...]}],"betas":[[re,im],...]}`.
//!
//! `alphas[0]` is the superdiagonal entry next to the last diagonal entry.

use serde::{Deserialize, Serialize};
use sobolev_core::jordan::{JordanBlock, JordanOperator, SpectralData, WeightVector};
use sobolev_core::C64;

use crate::AppResult;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDto {
    pub z: [f64; 2],
    #[serde(default)]
    pub alphas: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub blocks: Vec<BlockDto>,
    pub betas: Vec<[f64; 2]>,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl SpectralDto {
    pub fn from_data(data: &SpectralData, label: Option<&str>) -> Self {
        SpectralDto {
            label: label.map(str::to_owned),
            blocks: data
                .operator()
                .blocks()
                .iter()
                .map(|b| BlockDto {
                    z: pair(b.eigenvalue()),
                    alphas: b.alphas().iter().copied().map(pair).collect(),
                })
                .collect(),
            betas: data.weights().betas().iter().copied().map(pair).collect(),
        }
    }

    /// Validates through the core constructors.
    pub fn to_data(&self) -> AppResult<SpectralData> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| JordanBlock::new(complex(b.z), b.alphas.iter().copied().map(complex).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let betas = self.betas.iter().copied().map(complex).collect();
        Ok(SpectralData::new(JordanOperator::new(blocks)?, WeightVector::new(betas)?)?)
    }
}

/// Reads one JSON document or JSON lines, one instance per line.
pub fn parse_many(text: &str) -> AppResult<Vec<SpectralDto>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    let mut out = Vec::new();
    for item in serde_json::Deserializer::from_str(text).into_iter::<SpectralDto>() {
        out.push(item?);
    }
    Ok(out)
}
