//! Dense statevector simulation.
//!
//! Qubit `q` is bit `q` of the amplitude index, so qubit 0 is the least
//! significant bit of whatever register it starts. Bit patterns print most
//! significant first, matching ket notation.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::codec::format_bits;
use crate::error::SimError;

pub const DEFAULT_MAX_QUBITS: usize = 24;

const NORM_TOLERANCE: f64 = 1e-12;
const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// A gate from the adder gate set. `R_x` denotes `diag(1, e^{iπ·2^x})`;
/// `dagger` selects its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    H(usize),
    X(usize),
    Phase {
        x: i32,
        dagger: bool,
        target: usize,
    },
    ControlledPhase {
        x: i32,
        dagger: bool,
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
}

impl GateOp {
    pub fn cpr(x: i32, control: usize, target: usize) -> Self {
        GateOp::ControlledPhase {
            x,
            dagger: false,
            control,
            target,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            GateOp::Phase { x, dagger, target } => GateOp::Phase {
                x,
                dagger: !dagger,
                target,
            },
            GateOp::ControlledPhase {
                x,
                dagger,
                control,
                target,
            } => GateOp::ControlledPhase {
                x,
                dagger: !dagger,
                control,
                target,
            },
            op => op,
        }
    }

    /// Every qubit the gate touches, control first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::H(q) | GateOp::X(q) => vec![q],
            GateOp::Phase { target, .. } => vec![target],
            GateOp::ControlledPhase {
                control, target, ..
            } => vec![control, target],
            GateOp::Swap(a, b) => vec![a, b],
        }
    }

    /// Qubits whose computational-basis value the gate can change.
    pub fn mutated_qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::H(q) | GateOp::X(q) => vec![q],
            GateOp::Swap(a, b) => vec![a, b],
            GateOp::Phase { .. } | GateOp::ControlledPhase { .. } => Vec::new(),
        }
    }

    /// The rotation exponent, for phase gates.
    pub fn rotation(&self) -> Option<i32> {
        match *self {
            GateOp::Phase { x, .. } | GateOp::ControlledPhase { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// `e^{±iπ·2^x}` with the common angles produced exactly.
pub fn rotation_phase(x: i32, dagger: bool) -> Complex64 {
    let phase = match x {
        x if x >= 1 => Complex64::new(1.0, 0.0),
        0 => Complex64::new(-1.0, 0.0),
        -1 => Complex64::new(0.0, 1.0),
        -2 => Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        x => Complex64::from_polar(1.0, PI * 2f64.powi(x)),
    };
    if dagger {
        phase.conj()
    } else {
        phase
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dg = |d: bool| if d { "dg" } else { "" };
        match *self {
            GateOp::H(q) => write!(f, "H {q}"),
            GateOp::X(q) => write!(f, "X {q}"),
            GateOp::Phase { x, dagger, target } => write!(f, "PR{} x={x} t={target}", dg(dagger)),
            GateOp::ControlledPhase {
                x,
                dagger,
                control,
                target,
            } => write!(f, "CPR{} x={x} c={control} t={target}", dg(dagger)),
            GateOp::Swap(a, b) => write!(f, "SWAP {a} {b}"),
        }
    }
}

impl FromStr for GateOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split_whitespace();
        let name = parts.next().ok_or("empty gate line")?;
        let args: Vec<&str> = parts.collect();
        let index = |a: &str| a.parse::<usize>().map_err(|e| format!("{a:?}: {e}"));
        let field = |key: &str| -> Result<&str, String> {
            args.iter()
                .find_map(|a| a.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .ok_or_else(|| format!("missing {key}= in {s:?}"))
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("{name} takes {n} arguments: {s:?}"))
            }
        };
        let op = match name {
            "H" => {
                arity(1)?;
                GateOp::H(index(args[0])?)
            }
            "X" => {
                arity(1)?;
                GateOp::X(index(args[0])?)
            }
            "SWAP" => {
                arity(2)?;
                GateOp::Swap(index(args[0])?, index(args[1])?)
            }
            "PR" | "PRdg" => {
                arity(2)?;
                GateOp::Phase {
                    x: field("x")?.parse().map_err(|e| format!("x: {e}"))?,
                    dagger: name.ends_with("dg"),
                    target: index(field("t")?)?,
                }
            }
            "CPR" | "CPRdg" => {
                arity(3)?;
                GateOp::ControlledPhase {
                    x: field("x")?.parse().map_err(|e| format!("x: {e}"))?,
                    dagger: name.ends_with("dg"),
                    control: index(field("c")?)?,
                    target: index(field("t")?)?,
                }
            }
            other => return Err(format!("unknown gate {other:?}")),
        };
        Ok(op)
    }
}

#[inline]
fn insert_zero_bit(i: usize, q: usize) -> usize {
    ((i >> q) << (q + 1)) | (i & ((1 << q) - 1))
}

/// Indices with zeros at both `a` and `b` (`a != b`), enumerated from a
/// counter over the remaining bits.
#[inline]
fn insert_two_zero_bits(i: usize, a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    insert_zero_bit(insert_zero_bit(i, lo), hi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `qubits` qubits, subject to the default cap.
    pub fn zero(qubits: usize) -> Result<Self, SimError> {
        Self::zero_capped(qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_capped(qubits: usize, cap: usize) -> Result<Self, SimError> {
        if qubits > cap {
            return Err(SimError::TooManyQubits {
                requested: qubits,
                cap,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { qubits, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check(&self, q: usize) -> Result<(), SimError> {
        if q < self.qubits {
            Ok(())
        } else {
            Err(SimError::IndexOutOfRange {
                index: q,
                qubits: self.qubits,
            })
        }
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<(), SimError> {
        for q in op.qubits() {
            self.check(q)?;
        }
        match *op {
            GateOp::H(q) => self.hadamard(q),
            GateOp::X(q) => {
                let bit = 1 << q;
                for i in 0..self.amps.len() / 2 {
                    let lo = insert_zero_bit(i, q);
                    self.amps.swap(lo, lo | bit);
                }
            }
            GateOp::Phase { x, dagger, target } => {
                if x >= 1 {
                    return Ok(());
                }
                let phase = rotation_phase(x, dagger);
                let bit = 1 << target;
                for i in 0..self.amps.len() / 2 {
                    self.amps[insert_zero_bit(i, target) | bit] *= phase;
                }
            }
            GateOp::ControlledPhase {
                x,
                dagger,
                control,
                target,
            } => {
                if control == target {
                    return Err(SimError::ControlIsTarget(control));
                }
                if x >= 1 {
                    return Ok(());
                }
                let phase = rotation_phase(x, dagger);
                let both = (1 << control) | (1 << target);
                for i in 0..self.amps.len() / 4 {
                    self.amps[insert_two_zero_bits(i, control, target) | both] *= phase;
                }
            }
            GateOp::Swap(a, b) => {
                if a == b {
                    return Ok(());
                }
                let (ba, bb) = (1 << a, 1 << b);
                for i in 0..self.amps.len() / 4 {
                    let base = insert_two_zero_bits(i, a, b);
                    self.amps.swap(base | ba, base | bb);
                }
            }
        }
        Ok(())
    }

    fn hadamard(&mut self, q: usize) {
        let bit = 1 << q;
        for i in 0..self.amps.len() / 2 {
            let lo = insert_zero_bit(i, q);
            let hi = lo | bit;
            let (a, b) = (self.amps[lo], self.amps[hi]);
            self.amps[lo] = (a + b) * FRAC_1_SQRT_2;
            self.amps[hi] = (a - b) * FRAC_1_SQRT_2;
        }
    }

    pub fn apply_all<'a>(&mut self, ops: impl IntoIterator<Item = &'a GateOp>) -> Result<(), SimError> {
        for op in ops {
            self.apply(op)?;
        }
        Ok(())
    }

    /// Probability of each pattern over `qubits`, where `qubits[i]` becomes
    /// bit `i` of the pattern. Zero-probability patterns are omitted.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Distribution, SimError> {
        for (i, &q) in qubits.iter().enumerate() {
            self.check(q)?;
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateQubit(q));
            }
        }
        // Fast path: a contiguous low block maps to a mask.
        let contiguous = qubits.iter().enumerate().all(|(i, &q)| q == i);
        let mut acc = vec![0.0f64; 1 << qubits.len()];
        for (index, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let pattern = if contiguous {
                index & ((1 << qubits.len()) - 1)
            } else {
                qubits
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (bit, &q)| acc | ((index >> q) & 1) << bit)
            };
            acc[pattern] += p;
        }
        let probs = acc
            .into_iter()
            .enumerate()
            .filter(|&(_, p)| p > 0.0)
            .map(|(k, p)| (k as u64, p))
            .collect();
        Ok(Distribution {
            qubits: qubits.to_vec(),
            probs,
        })
    }
}

/// Builds a state with exactly the given amplitudes on the listed patterns.
pub fn init_superposition(qubits: usize, entries: &[(u64, f64)]) -> Result<Statevector, SimError> {
    let mut state = Statevector::zero(qubits)?;
    state.amps[0] = Complex64::new(0.0, 0.0);
    let mut norm = 0.0;
    let mut seen = std::collections::BTreeSet::new();
    for &(pattern, amp) in entries {
        if qubits < 64 && pattern >> qubits != 0 {
            return Err(SimError::WidthOverflow {
                pattern,
                width: qubits,
            });
        }
        if !seen.insert(pattern) {
            return Err(SimError::DuplicatePattern(pattern));
        }
        state.amps[pattern as usize] = Complex64::new(amp, 0.0);
        norm += amp * amp;
    }
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(SimError::NormViolation(norm));
    }
    Ok(state)
}

/// Outcome probabilities over an ordered list of measured qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub qubits: Vec<usize>,
    pub probs: BTreeMap<u64, f64>,
}

impl Distribution {
    /// A distribution over `width` abstract qubits `0..width`.
    pub fn new(width: usize, probs: BTreeMap<u64, f64>) -> Self {
        Distribution {
            qubits: (0..width).collect(),
            probs,
        }
    }

    pub fn width(&self) -> usize {
        self.qubits.len()
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Drops outcomes at or below `cutoff`; simulation round-off leaves
    /// ~1e-30 mass on patterns the circuit never produces.
    pub fn pruned(&self, cutoff: f64) -> Distribution {
        Distribution {
            qubits: self.qubits.clone(),
            probs: self
                .probs
                .iter()
                .filter(|&(_, &p)| p > cutoff)
                .map(|(&k, &p)| (k, p))
                .collect(),
        }
    }

    pub fn get(&self, pattern: u64) -> f64 {
        self.probs.get(&pattern).copied().unwrap_or(0.0)
    }

    pub fn bits(&self, pattern: u64) -> String {
        format_bits(pattern, self.width())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementHistogram {
    pub measured_qubits: Vec<usize>,
    pub counts: BTreeMap<u64, u64>,
    pub shots: u64,
}

impl MeasurementHistogram {
    pub fn width(&self) -> usize {
        self.measured_qubits.len()
    }

    pub fn bits(&self, pattern: u64) -> String {
        format_bits(pattern, self.width())
    }
}

/// Draws `shots` outcomes from `dist` as one multinomial sample.
///
/// The draw is a chain of conditional binomials over outcomes in ascending
/// pattern order, fed by a single ChaCha8 stream seeded from `seed`, so equal
/// inputs give equal histograms on every platform.
pub fn sample(dist: &Distribution, shots: u64, seed: u64) -> Result<MeasurementHistogram, SimError> {
    if shots == 0 {
        return Err(SimError::InvalidDistribution("shots must be at least 1".into()));
    }
    if dist.probs.is_empty() {
        return Err(SimError::InvalidDistribution("no outcomes".into()));
    }
    if let Some((&k, &p)) = dist.probs.iter().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(SimError::InvalidDistribution(format!(
            "probability {p} for pattern {k}"
        )));
    }
    let total = dist.total();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(SimError::InvalidDistribution(format!(
            "probabilities sum to {total}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    let mut remaining = shots;
    let mut remaining_mass = total;
    let last = dist.probs.len() - 1;
    for (i, (&pattern, &p)) in dist.probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let count = if i == last {
            remaining
        } else {
            let q = if remaining_mass > 0.0 {
                (p / remaining_mass).clamp(0.0, 1.0)
            } else {
                1.0
            };
            Binomial::new(remaining, q)
                .map_err(|e| SimError::InvalidDistribution(e.to_string()))?
                .sample(&mut rng)
        };
        remaining -= count;
        remaining_mass -= p;
        if count > 0 {
            counts.insert(pattern, count);
        }
    }
    Ok(MeasurementHistogram {
        measured_qubits: dist.qubits.clone(),
        counts,
        shots,
    })
}
