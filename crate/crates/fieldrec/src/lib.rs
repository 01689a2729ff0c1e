//! Challenge generation, JSON reports, campaigns and density tables on top
//! of `fieldrec-core`.

pub mod challenge;
pub mod report;

use num_traits::ToPrimitive;

pub use challenge::{generate_challenge, Challenge, Family};
pub use report::{run_campaign, run_challenge, CampaignConfig, CampaignReport, EngineSettings, Report};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] fieldrec_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

/// One row of a density table.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityRow {
    pub p: u64,
    pub r: u64,
    pub d: u64,
    pub exact: String,
    pub value: f64,
    pub limit: f64,
    pub relative_error: f64,
}

pub fn density_row(p: u64, r: u64, d: u64) -> Result<DensityRow, HarnessError> {
    let exact = fieldrec_core::lines::density_ratio(p, r, d)?;
    let limit = fieldrec_core::lines::density_limit(p, r);
    let rel = ((&exact - &limit) / &limit).to_f64().unwrap_or(f64::NAN).abs();
    Ok(DensityRow {
        p,
        r,
        d,
        exact: exact.to_string(),
        value: exact.to_f64().unwrap_or(f64::NAN),
        limit: limit.to_f64().unwrap_or(f64::NAN),
        relative_error: rel,
    })
}

/// Tab-separated table with a header line.
pub fn density_tsv(rows: &[DensityRow]) -> String {
    let mut s = String::from("p\tr\td\texact\tvalue\tlimit\trelative_error\n");
    for r in rows {
        s.push_str(&format!("{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\n", r.p, r.r, r.d, r.exact, r.value, r.limit, r.relative_error));
    }
    s
}
