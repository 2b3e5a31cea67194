//! Machine-readable run records.

use serde::{Deserialize, Serialize};

use qmbead::pipeline::{plan_shots, MultiplyConfig, Outcomes, Prepared, ReconstructionResult};

/// Formula identifiers written into every record, bumped when the math changes.
pub const SHOT_PLANNER: &str = "c0*2^(1+ceil(log2(max(n_u,n_v))))";
pub const QUBIT_COUNT: &str = "1+ceil(log2 n_b)+ceil(log2 n_a)";
pub const PROBABILITY_MODEL: &str = "sum-register marginal c_gamma/(w_u*w_v)";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub gamma_bits: String,
    pub gamma: u64,
    /// Observed count, or the expected count at `shots` in exact mode.
    pub count: u64,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub gamma: u64,
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub qmbead: String,
    pub shot_planner: String,
    pub qubit_count: String,
    pub probability_model: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            qmbead: env!("CARGO_PKG_VERSION").to_string(),
            shot_planner: SHOT_PLANNER.to_string(),
            qubit_count: QUBIT_COUNT.to_string(),
            probability_model: PROBABILITY_MODEL.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub u: String,
    pub v: String,
    pub scale_base: u32,
    pub adder: String,
    pub mode: String,
    pub shots: u64,
    pub seed: u64,
    pub c0: u64,
    pub anchor: String,
    pub verify: bool,
    pub allow_negative: bool,
    pub qubits: usize,
    pub histogram: Vec<HistogramEntry>,
    pub coefficients: Vec<Coefficient>,
    pub product: String,
    pub product_bits: u64,
    pub scale_exp: u32,
    pub final_value: String,
    pub verified: Option<bool>,
    pub low_confidence: bool,
    pub wall_ms: f64,
    pub versions: Versions,
}

impl RunRecord {
    pub fn new(
        prepared: &Prepared,
        cfg: &MultiplyConfig,
        result: &ReconstructionResult,
        wall_ms: f64,
    ) -> Self {
        let (shots, histogram) = histogram_entries(prepared, cfg, result);
        RunRecord {
            u: prepared.u.text.clone(),
            v: prepared.v.text.clone(),
            scale_base: cfg.scale_base.radix(),
            adder: cfg.adder_version.to_string(),
            mode: cfg.mode.to_string(),
            shots,
            seed: cfg.seed,
            c0: cfg.c0,
            anchor: cfg.anchor.to_string(),
            verify: cfg.verify,
            allow_negative: cfg.allow_negative,
            qubits: result.qubits_used,
            histogram,
            coefficients: result
                .coefficients
                .iter()
                .map(|(&gamma, &c)| Coefficient { gamma, c })
                .collect(),
            product: result.product.to_string(),
            product_bits: result.product_bits(),
            scale_exp: result.scale_exp,
            final_value: result.final_value.clone(),
            verified: result.verified,
            low_confidence: result.low_confidence,
            wall_ms,
            versions: Versions::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

/// Shot count and histogram rows; exact runs report expected counts at the
/// planned shot budget.
pub fn histogram_entries(
    prepared: &Prepared,
    cfg: &MultiplyConfig,
    result: &ReconstructionResult,
) -> (u64, Vec<HistogramEntry>) {
    match &result.outcomes {
        Outcomes::Sampled(h) => (
            h.shots,
            h.counts
                .iter()
                .map(|(&gamma, &count)| HistogramEntry {
                    gamma_bits: h.bits(gamma),
                    gamma,
                    count,
                    probability: count as f64 / h.shots as f64,
                })
                .collect(),
        ),
        Outcomes::Exact(d) => {
            let shots = cfg.shots.unwrap_or_else(|| {
                plan_shots(prepared.u.mantissa.bits(), prepared.v.mantissa.bits(), cfg.c0)
            });
            let rows = d
                .probs
                .iter()
                .map(|(&gamma, &p)| HistogramEntry {
                    gamma_bits: d.bits(gamma),
                    gamma,
                    count: (p * shots as f64).round() as u64,
                    probability: p,
                })
                .collect();
            (shots, rows)
        }
        Outcomes::None => (0, Vec::new()),
    }
}
