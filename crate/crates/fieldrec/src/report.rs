//! Per-challenge reports and parallel campaigns.

use std::collections::BTreeMap;
use std::time::Instant;

use fieldrec_core::reconstruct::{reconstruct_timed, CheckCounts, EngineConfig};
use fieldrec_core::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::challenge::{generate_challenge, Challenge, Family};
use crate::HarnessError;

/// Engine knobs as they appear in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineSettings {
    pub relation_pairs: usize,
    pub sign_sample: usize,
}

impl Default for EngineSettings {
    fn default() -> Self {
        let d = EngineConfig::default();
        EngineSettings { relation_pairs: d.relation_pairs, sign_sample: d.sign_sample }
    }
}

impl EngineSettings {
    pub fn config(&self, ch: &Challenge) -> EngineConfig {
        EngineConfig {
            seed: ch.seed,
            probe_budget: ch.probe_budget,
            relation_pairs: self.relation_pairs,
            sign_sample: self.sign_sample,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub line_probes: usize,
    pub constants: usize,
    pub additivity: usize,
    pub multiplicativity: usize,
    pub uniqueness: usize,
    pub sign_sample: usize,
    pub verification: usize,
}

impl From<CheckCounts> for Checks {
    fn from(c: CheckCounts) -> Self {
        Checks {
            line_probes: c.line_probes,
            constants: c.constants,
            additivity: c.additivity,
            multiplicativity: c.multiplicativity,
            uniqueness: c.uniqueness,
            sign_sample: c.sign_sample,
            verification: c.verification,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Option<String>,
    pub message: String,
    pub class: Option<String>,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        match e {
            Error::Reconstruction { stage, message, class } => {
                Failure { stage: Some(stage.to_string()), message: message.clone(), class: class.clone() }
            }
            other => Failure { stage: None, message: other.to_string(), class: None },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub challenge_id: String,
    pub field: String,
    pub family: Family,
    pub corrupted: bool,
    /// Recovered map equals the hidden one and the signs agree.
    pub success: bool,
    pub recovered_map: Option<Vec<String>>,
    pub sign: Option<i64>,
    pub power: Option<i64>,
    pub checks: Checks,
    pub failure: Option<Failure>,
    /// Milliseconds per stage, then `total`.
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    /// JSON with timings removed, for determinism comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.timings_ms.clear();
        serde_json::to_string(&r).expect("report serializes")
    }
}

pub fn run_challenge(ch: &Challenge, settings: &EngineSettings) -> Report {
    let start = Instant::now();
    let mut report = Report {
        challenge_id: ch.id.clone(),
        field: ch.field.clone(),
        family: ch.family,
        corrupted: ch.corrupt_class.is_some(),
        success: false,
        recovered_map: None,
        sign: None,
        power: None,
        checks: Checks::default(),
        failure: None,
        timings_ms: BTreeMap::new(),
    };
    let outcome = (|| -> Result<_, HarnessError> {
        let oracle = ch.oracle()?;
        let hidden = ch.hidden_morphism()?;
        let clock = || start.elapsed().as_nanos() as u64;
        Ok((reconstruct_timed(&oracle, &settings.config(ch), &clock), hidden))
    })();
    match outcome {
        Err(e) => report.failure = Some(Failure { stage: None, message: e.to_string(), class: None }),
        Ok((Err(e), _)) => report.failure = Some(Failure::from(&e)),
        Ok((Ok(rec), hidden)) => {
            report.recovered_map = Some(rec.morphism.images().iter().map(|f| f.to_string()).collect());
            report.sign = Some(rec.sign);
            report.power = Some(rec.power);
            report.checks = rec.checks.into();
            for (stage, ns) in &rec.timings {
                *report.timings_ms.entry(stage.to_string()).or_default() += *ns as f64 / 1e6;
            }
            report.success = rec.morphism == hidden && rec.sign == ch.hidden_sign;
            if !report.success {
                report.failure = Some(Failure {
                    stage: None,
                    message: format!("recovered ({}, ε = {}) differs from the hidden map", rec.morphism, rec.sign),
                    class: None,
                });
            }
        }
    }
    report.timings_ms.insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Field descriptors such as `Q(t1,t2)` or `F3(t1,t2)`.
    pub fields: Vec<String>,
    pub families: Vec<Family>,
    /// Challenges per field; families are used round-robin.
    pub count: usize,
    /// Corrupt one probe class in every oracle.
    #[serde(default)]
    pub corrupt: bool,
    #[serde(default)]
    pub engine: EngineSettings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub successes: usize,
    pub failures: usize,
    /// Successes on corrupted oracles.
    pub false_successes: usize,
    /// Failures with a stage tag.
    pub diagnosed_failures: usize,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub summary: Summary,
    pub reports: Vec<Report>,
}

impl CampaignReport {
    /// Every clean challenge succeeded and every corrupted one failed.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.success != r.corrupted)
    }
}

pub fn campaign_challenges(cfg: &CampaignConfig) -> Result<Vec<Challenge>, HarnessError> {
    if cfg.families.is_empty() {
        return Err(HarnessError::Invalid("no families configured".into()));
    }
    let mut out = Vec::new();
    for (fi, field) in cfg.fields.iter().enumerate() {
        let desc = std::sync::Arc::new(field.parse::<fieldrec_core::FieldDescriptor>()?);
        for i in 0..cfg.count {
            let family = cfg.families[i % cfg.families.len()];
            let seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add((fi as u64) << 32 | i as u64);
            let ch = generate_challenge(seed, family, &desc)?;
            out.push(if cfg.corrupt { ch.corrupted(seed)? } else { ch });
        }
    }
    Ok(out)
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, HarnessError> {
    let challenges = campaign_challenges(cfg)?;
    let reports: Vec<Report> = challenges.par_iter().map(|ch| run_challenge(ch, &cfg.engine)).collect();
    let successes = reports.iter().filter(|r| r.success).count();
    let summary = Summary {
        total: reports.len(),
        successes,
        failures: reports.len() - successes,
        false_successes: reports.iter().filter(|r| r.success && r.corrupted).count(),
        diagnosed_failures: reports.iter().filter(|r| r.failure.as_ref().is_some_and(|f| f.stage.is_some())).count(),
        success_rate: if reports.is_empty() { 0.0 } else { successes as f64 / reports.len() as f64 },
    };
    Ok(CampaignReport { summary, reports })
}
