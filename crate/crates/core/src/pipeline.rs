//! End-to-end multiplication: encode both operands, run the adder on their
//! joint exponent state, measure the sum register and rebuild the product
//! from outcome ratios.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::adder::{build_adder, AdderVersion, Circuit};
use crate::codec::{
    ceil_log2, decompose, encode, parse_operand, render_scaled, EncodedOperand, ScaleBase,
    ScaledOperand,
};
use crate::error::PipelineError;
use crate::oracle::weighted_sum;
use crate::sim::{init_superposition, sample, Distribution, MeasurementHistogram};

pub const DEFAULT_C0: u64 = 2000;

/// Outcomes with less mass than this are simulation round-off.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// `|ratio - round(ratio)|` above this marks a reconstruction as shaky.
pub const LOW_CONFIDENCE_GAP: f64 = 0.3;

const MAX_REFINEMENTS: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Sampled,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sampled => "sampled",
            Mode::Exact => "exact",
        })
    }
}

/// How the probability of a unit coefficient is estimated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Anchor {
    /// Smallest observed frequency, used as is.
    MinObserved,
    /// Starts from the smallest frequency, then re-estimates the unit as
    /// `total / Σ ĉ` until the rounded coefficients stop changing. Both agree
    /// in exact mode; under sampling this averages the anchor over every
    /// shot instead of trusting a single outcome's count.
    #[default]
    Refined,
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Anchor::MinObserved => "min",
            Anchor::Refined => "refined",
        })
    }
}

impl FromStr for Anchor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(Anchor::MinObserved),
            "refined" => Ok(Anchor::Refined),
            other => Err(format!("unknown anchor {other:?} (expected min or refined)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplyConfig {
    pub adder_version: AdderVersion,
    pub mode: Mode,
    /// Overrides the planned shot count.
    pub shots: Option<u64>,
    pub c0: u64,
    pub seed: u64,
    pub scale_base: ScaleBase,
    pub verify: bool,
    pub anchor: Anchor,
    pub allow_negative: bool,
}

impl Default for MultiplyConfig {
    fn default() -> Self {
        MultiplyConfig {
            adder_version: AdderVersion::V1,
            mode: Mode::Sampled,
            shots: None,
            c0: DEFAULT_C0,
            seed: 0,
            scale_base: ScaleBase::Ten,
            verify: false,
            anchor: Anchor::Refined,
            allow_negative: true,
        }
    }
}

impl MultiplyConfig {
    pub fn exact() -> Self {
        MultiplyConfig {
            mode: Mode::Exact,
            ..Default::default()
        }
    }
}

/// Shots needed to see the rarest exponent about `c0` times:
/// `c0 · 2^{1 + ceil(log2 max(n_u, n_v))}`.
pub fn plan_shots(n_u: u64, n_v: u64, c0: u64) -> u64 {
    let n_m = n_u.max(n_v).max(1);
    c0 << (1 + ceil_log2(n_m))
}

/// Circuit and operand placement for one multiplication.
#[derive(Clone, Debug)]
pub struct CircuitPlan {
    /// Operand held in register A (the wider one).
    pub a: EncodedOperand,
    /// Operand held in register B.
    pub b: EncodedOperand,
    /// True when `v` sits in A and `u` in B.
    pub swapped: bool,
    pub circuit: Circuit,
}

impl CircuitPlan {
    pub fn new(u: &BigUint, v: &BigUint, version: AdderVersion) -> Result<Self, PipelineError> {
        let eu = encode(&decompose(u))?;
        let ev = encode(&decompose(v))?;
        let swapped = ev.qubit_count > eu.qubit_count;
        let (a, b) = if swapped { (ev, eu) } else { (eu, ev) };
        let circuit = build_adder(version, b.qubit_count, a.qubit_count)?;
        Ok(CircuitPlan {
            a,
            b,
            swapped,
            circuit,
        })
    }

    pub fn qubits(&self) -> usize {
        self.circuit.layout.total_qubits()
    }

    /// Product of the two exponent superpositions, amplitudes injected directly.
    pub fn initial_entries(&self) -> Vec<(u64, f64)> {
        let layout = &self.circuit.layout;
        let amp = 1.0 / ((self.a.basis_states.len() * self.b.basis_states.len()) as f64).sqrt();
        self.b
            .basis_states
            .iter()
            .flat_map(|&bv| {
                self.a
                    .basis_states
                    .iter()
                    .map(move |&av| (layout.basis_index(bv, av) as u64, amp))
            })
            .collect()
    }

    /// Runs the adder and returns the sum-register marginal without
    /// round-off outcomes.
    pub fn sum_distribution(&self) -> Result<Distribution, PipelineError> {
        let mut state = init_superposition(self.qubits(), &self.initial_entries())?;
        state.apply_all(&self.circuit.ops)?;
        let marginal = state.marginal(&self.circuit.layout.sum_qubits())?;
        Ok(marginal.pruned(SUPPORT_CUTOFF))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub product: BigUint,
    pub coefficients: BTreeMap<u64, u64>,
    pub low_confidence: bool,
}

/// Rebuilds the product from measured counts with the smallest observed
/// frequency as the unit coefficient.
pub fn reconstruct(counts: &BTreeMap<u64, u64>) -> Result<Reconstruction, PipelineError> {
    reconstruct_counts(counts, Anchor::MinObserved)
}

pub fn reconstruct_counts(
    counts: &BTreeMap<u64, u64>,
    anchor: Anchor,
) -> Result<Reconstruction, PipelineError> {
    let weights: BTreeMap<u64, f64> = counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(&g, &c)| (g, c as f64))
        .collect();
    reconstruct_weights(&weights, anchor)
}

/// Rebuilds the product from any positive outcome weights (counts or
/// probabilities); only their ratios matter.
pub fn reconstruct_weights(
    weights: &BTreeMap<u64, f64>,
    anchor: Anchor,
) -> Result<Reconstruction, PipelineError> {
    if weights.is_empty() {
        return Err(PipelineError::EmptyHistogram);
    }
    let observed: Vec<(u64, f64)> = weights.iter().map(|(&g, &w)| (g, w)).collect();
    let round = |x: f64| (x.round() as u64).max(1);

    let mut unit = observed
        .iter()
        .map(|&(_, w)| w)
        .fold(f64::INFINITY, f64::min);
    let mut coeffs: Vec<u64> = observed.iter().map(|&(_, w)| round(w / unit)).collect();

    if anchor == Anchor::Refined {
        let total: f64 = observed.iter().map(|&(_, w)| w).sum();
        for _ in 0..MAX_REFINEMENTS {
            let candidate = total / coeffs.iter().sum::<u64>() as f64;
            let next: Vec<u64> = observed.iter().map(|&(_, w)| round(w / candidate)).collect();
            unit = candidate;
            if next == coeffs {
                break;
            }
            coeffs = next;
        }
    }

    let low_confidence = observed
        .iter()
        .zip(&coeffs)
        .any(|(&(_, w), &c)| (w / unit - c as f64).abs() > LOW_CONFIDENCE_GAP)
        || coeffs.iter().min() != Some(&1);
    let coefficients: BTreeMap<u64, u64> = observed
        .iter()
        .zip(coeffs)
        .map(|(&(g, _), c)| (g, c))
        .collect();
    Ok(Reconstruction {
        product: weighted_sum(&coefficients),
        coefficients,
        low_confidence,
    })
}

/// Raw measurement data a result was rebuilt from.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcomes {
    Sampled(MeasurementHistogram),
    Exact(Distribution),
    /// A zero operand short-circuits before any simulation.
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    /// Magnitude of the scaled integer product.
    pub product: BigUint,
    pub negative: bool,
    pub coefficients: BTreeMap<u64, u64>,
    pub outcomes: Outcomes,
    pub final_value: String,
    pub scale_base: ScaleBase,
    /// Combined scale `s_u + s_v`.
    pub scale_exp: u32,
    pub qubits_used: usize,
    pub shots_used: u64,
    pub low_confidence: bool,
    /// Outcome of the classical check, when requested.
    pub verified: Option<bool>,
}

impl ReconstructionResult {
    pub fn product_bits(&self) -> u64 {
        self.product.bits()
    }

    pub fn final_rational(&self) -> BigRational {
        let magnitude = BigRational::new(
            self.product.clone().into(),
            self.scale_base.pow(self.scale_exp).into(),
        );
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// Parsed operands plus, unless one of them is zero, the circuit plan.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub u: ScaledOperand,
    pub v: ScaledOperand,
    pub plan: Option<CircuitPlan>,
}

pub fn prepare(u_text: &str, v_text: &str, cfg: &MultiplyConfig) -> Result<Prepared, PipelineError> {
    let u = parse_operand(u_text, cfg.scale_base, cfg.allow_negative)?;
    let v = parse_operand(v_text, cfg.scale_base, cfg.allow_negative)?;
    let plan = if u.is_zero() || v.is_zero() {
        None
    } else {
        Some(CircuitPlan::new(&u.mantissa, &v.mantissa, cfg.adder_version)?)
    };
    Ok(Prepared { u, v, plan })
}

pub fn multiply(u_text: &str, v_text: &str, cfg: &MultiplyConfig) -> Result<ReconstructionResult, PipelineError> {
    let prepared = prepare(u_text, v_text, cfg)?;
    run_prepared(&prepared, cfg)
}

pub fn multiply_exact(
    u_text: &str,
    v_text: &str,
    cfg: &MultiplyConfig,
) -> Result<ReconstructionResult, PipelineError> {
    let cfg = MultiplyConfig {
        mode: Mode::Exact,
        ..cfg.clone()
    };
    multiply(u_text, v_text, &cfg)
}

/// Multiplies two non-negative integers, skipping the text layer.
pub fn multiply_integers(
    u: &BigUint,
    v: &BigUint,
    cfg: &MultiplyConfig,
) -> Result<ReconstructionResult, PipelineError> {
    let operand = |m: &BigUint| ScaledOperand {
        text: m.to_string(),
        mantissa: m.clone(),
        scale_base: cfg.scale_base,
        scale_exp: 0,
        negative: false,
    };
    let plan = if u.is_zero() || v.is_zero() {
        None
    } else {
        Some(CircuitPlan::new(u, v, cfg.adder_version)?)
    };
    run_prepared(
        &Prepared {
            u: operand(u),
            v: operand(v),
            plan,
        },
        cfg,
    )
}

pub fn run_prepared(prepared: &Prepared, cfg: &MultiplyConfig) -> Result<ReconstructionResult, PipelineError> {
    let Prepared { u, v, plan } = prepared;
    let scale_exp = u.scale_exp + v.scale_exp;
    let negative = u.negative != v.negative;

    let Some(plan) = plan else {
        return Ok(ReconstructionResult {
            product: BigUint::zero(),
            negative: false,
            coefficients: BTreeMap::new(),
            outcomes: Outcomes::None,
            final_value: "0".to_string(),
            scale_base: cfg.scale_base,
            scale_exp,
            qubits_used: 0,
            shots_used: 0,
            low_confidence: false,
            verified: cfg.verify.then_some(true),
        });
    };

    let dist = plan.sum_distribution()?;
    let (rebuilt, outcomes, shots_used) = match cfg.mode {
        Mode::Exact => (
            reconstruct_weights(&dist.probs, cfg.anchor)?,
            Outcomes::Exact(dist),
            0,
        ),
        Mode::Sampled => {
            let shots = cfg.shots.unwrap_or_else(|| {
                plan_shots(u.mantissa.bits(), v.mantissa.bits(), cfg.c0)
            });
            let hist = sample(&dist, shots, cfg.seed)?;
            (
                reconstruct_counts(&hist.counts, cfg.anchor)?,
                Outcomes::Sampled(hist),
                shots,
            )
        }
    };

    let expected = &u.mantissa * &v.mantissa;
    let verified = cfg.verify.then(|| rebuilt.product == expected);
    let result = ReconstructionResult {
        final_value: render_scaled(&rebuilt.product, cfg.scale_base, scale_exp, negative),
        negative: negative && !rebuilt.product.is_zero(),
        product: rebuilt.product,
        coefficients: rebuilt.coefficients,
        outcomes,
        scale_base: cfg.scale_base,
        scale_exp,
        qubits_used: plan.qubits(),
        shots_used,
        low_confidence: rebuilt.low_confidence,
        verified,
    };
    if verified == Some(false) {
        return Err(PipelineError::ReconstructionMismatch {
            expected,
            got: result.product.clone(),
            result: Box::new(result),
        });
    }
    Ok(result)
}
