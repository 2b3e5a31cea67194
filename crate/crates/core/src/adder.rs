//! QFT-based exponent adders and their resource profiles.
//!
//! Both adders work on Fourier states where the qubit of weight index `t`
//! carries the phase `e^{2πi·s/2^{t+1}}`. Adding an operand bit `j` to that
//! qubit is the rotation `R_{j-t}`; rotations with `j > t` are identities and
//! are never emitted, only counted.
//!
//! Register placement (qubit 0 is the least significant bit):
//!
//! * in-place (v1): `A = 0..k_a`, carry `C = k_a`, `B` above it. The sum is
//!   read from `[C;A]`, i.e. qubits `0..=k_a`.
//! * out-of-place (v2): `S = 0..=k_a`, then `A`, then `B`.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::CircuitError;
use crate::sim::GateOp;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AdderVersion {
    /// In-place adder; the wider operand register is overwritten with the sum.
    #[default]
    V1,
    /// Out-of-place adder writing into a fresh sum register.
    V2,
}

impl fmt::Display for AdderVersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdderVersion::V1 => "v1",
            AdderVersion::V2 => "v2",
        })
    }
}

impl FromStr for AdderVersion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "v1" => Ok(AdderVersion::V1),
            "v2" => Ok(AdderVersion::V2),
            other => Err(format!("unknown adder {other:?} (expected v1 or v2)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub version: AdderVersion,
    pub b: Range<usize>,
    pub a: Range<usize>,
    /// Carry qubit, v1 only.
    pub carry: Option<usize>,
    /// Sum register, `k_a + 1` qubits starting at qubit 0 in both versions.
    pub sum: Range<usize>,
}

impl RegisterLayout {
    pub fn new(version: AdderVersion, k_b: usize, k_a: usize) -> Result<Self, CircuitError> {
        if k_b == 0 || k_b > k_a {
            return Err(CircuitError::InvalidWidth { k_b, k_a });
        }
        Ok(match version {
            AdderVersion::V1 => RegisterLayout {
                version,
                a: 0..k_a,
                carry: Some(k_a),
                b: k_a + 1..k_a + 1 + k_b,
                sum: 0..k_a + 1,
            },
            AdderVersion::V2 => RegisterLayout {
                version,
                sum: 0..k_a + 1,
                a: k_a + 1..2 * k_a + 1,
                b: 2 * k_a + 1..2 * k_a + 1 + k_b,
                carry: None,
            },
        })
    }

    pub fn k_a(&self) -> usize {
        self.a.len()
    }

    pub fn k_b(&self) -> usize {
        self.b.len()
    }

    pub fn total_qubits(&self) -> usize {
        self.b.end
    }

    pub fn sum_qubits(&self) -> Vec<usize> {
        self.sum.clone().collect()
    }

    /// Basis index for register values `b_value` and `a_value` with every
    /// other qubit at zero.
    pub fn basis_index(&self, b_value: u64, a_value: u64) -> usize {
        ((b_value as usize) << self.b.start) | ((a_value as usize) << self.a.start)
    }

    /// Reads a register's integer value out of a basis index.
    pub fn read(index: usize, register: &Range<usize>) -> u64 {
        ((index >> register.start) & ((1 << register.len()) - 1)) as u64
    }

    fn header(&self) -> String {
        let r = |r: &Range<usize>| format!("{}..{}", r.start, r.end);
        match self.version {
            AdderVersion::V1 => format!(
                "qubits {}; B={} C={} A={}",
                self.total_qubits(),
                r(&self.b),
                self.carry.expect("v1 layout has a carry"),
                r(&self.a)
            ),
            AdderVersion::V2 => format!(
                "qubits {}; B={} A={} S={}",
                self.total_qubits(),
                r(&self.b),
                r(&self.a),
                r(&self.sum)
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageKind {
    Qft1,
    Hadamard,
    Rotations,
    InverseQft1,
    /// Inverse QFT including its swap layer.
    InverseQft,
}

impl StageKind {
    pub fn name(self) -> &'static str {
        match self {
            StageKind::Qft1 => "qft1",
            StageKind::Hadamard => "hadamard",
            StageKind::Rotations => "rotations",
            StageKind::InverseQft1 => "iqft1",
            StageKind::InverseQft => "iqft",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        [
            StageKind::Qft1,
            StageKind::Hadamard,
            StageKind::Rotations,
            StageKind::InverseQft1,
            StageKind::InverseQft,
        ]
        .into_iter()
        .find(|k| k.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub kind: StageKind,
    /// Span of this stage in the circuit's op list.
    pub ops: Range<usize>,
    /// Identity rotations (`x >= 1`) dropped at build time.
    pub elided: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub ops: Vec<GateOp>,
    pub stages: Vec<Stage>,
}

/// Swap-free QFT on `qubits`, where `qubits[t]` has weight `2^t`.
pub fn qft1_on(qubits: &[usize]) -> Vec<GateOp> {
    let mut ops = Vec::with_capacity(qubits.len() * (qubits.len() + 1) / 2);
    for i in (0..qubits.len()).rev() {
        ops.push(GateOp::H(qubits[i]));
        for j in (0..i).rev() {
            ops.push(GateOp::cpr(j as i32 - i as i32, qubits[j], qubits[i]));
        }
    }
    ops
}

/// Swap-free QFT on qubits `0..width`.
pub fn build_qft1(width: usize) -> Vec<GateOp> {
    let qubits: Vec<usize> = (0..width).collect();
    qft1_on(&qubits)
}

pub fn inverse_ops(ops: &[GateOp]) -> Vec<GateOp> {
    ops.iter().rev().map(|op| op.inverse()).collect()
}

pub fn iqft1_on(qubits: &[usize]) -> Vec<GateOp> {
    inverse_ops(&qft1_on(qubits))
}

/// Inverse of the full QFT (swap layer included): swaps, then inverse QFT1.
pub fn iqft_on(qubits: &[usize]) -> Vec<GateOp> {
    let m = qubits.len();
    let mut ops: Vec<GateOp> = (0..m / 2)
        .map(|t| GateOp::Swap(qubits[t], qubits[m - 1 - t]))
        .collect();
    ops.extend(iqft1_on(qubits));
    ops
}

/// Controlled rotations adding the value held in `controls` (bit `j` on
/// `controls[j]`) into a Fourier register whose weight-`t` qubit is
/// `fourier(t)` for `t < width`. Returns the number of elided identities.
fn add_rotations(
    ops: &mut Vec<GateOp>,
    controls: &[usize],
    width: usize,
    fourier: impl Fn(usize) -> usize,
) -> usize {
    let mut elided = 0;
    for t in (0..width).rev() {
        for (j, &control) in controls.iter().enumerate() {
            let x = j as i32 - t as i32;
            if x >= 1 {
                elided += 1;
            } else {
                ops.push(GateOp::cpr(x, control, fourier(t)));
            }
        }
    }
    elided
}

struct Builder {
    ops: Vec<GateOp>,
    stages: Vec<Stage>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            ops: Vec::new(),
            stages: Vec::new(),
        }
    }

    fn stage(&mut self, kind: StageKind, f: impl FnOnce(&mut Vec<GateOp>) -> usize) {
        let start = self.ops.len();
        let elided = f(&mut self.ops);
        self.stages.push(Stage {
            kind,
            ops: start..self.ops.len(),
            elided,
        });
    }

    fn finish(self, layout: RegisterLayout) -> Circuit {
        Circuit {
            layout,
            ops: self.ops,
            stages: self.stages,
        }
    }
}

/// In-place adder: `|φ⟩_B|0⟩_C|ψ⟩_A → |φ⟩_B|φ+ψ⟩_{CA}`.
pub fn build_adder_v1(k_b: usize, k_a: usize) -> Result<Circuit, CircuitError> {
    let layout = RegisterLayout::new(AdderVersion::V1, k_b, k_a)?;
    let ca = layout.sum_qubits();
    let controls: Vec<usize> = layout.b.clone().collect();
    let mut b = Builder::new();
    b.stage(StageKind::Qft1, |ops| {
        ops.extend(qft1_on(&ca));
        0
    });
    b.stage(StageKind::Rotations, |ops| {
        add_rotations(ops, &controls, ca.len(), |t| ca[t])
    });
    b.stage(StageKind::InverseQft1, |ops| {
        ops.extend(iqft1_on(&ca));
        0
    });
    Ok(b.finish(layout))
}

/// Out-of-place adder: `|φ⟩_B|ψ⟩_A|0⟩_S → |φ⟩_B|ψ⟩_A|φ+ψ⟩_S`.
pub fn build_adder_v2(k_b: usize, k_a: usize) -> Result<Circuit, CircuitError> {
    let layout = RegisterLayout::new(AdderVersion::V2, k_b, k_a)?;
    let s = layout.sum_qubits();
    let m = s.len();
    let a_controls: Vec<usize> = layout.a.clone().collect();
    let b_controls: Vec<usize> = layout.b.clone().collect();
    // The swap layer of the closing inverse QFT expects weight t on S[m-1-t].
    let fourier = |t: usize| s[m - 1 - t];
    let mut b = Builder::new();
    b.stage(StageKind::Hadamard, |ops| {
        ops.extend(s.iter().map(|&q| GateOp::H(q)));
        0
    });
    b.stage(StageKind::Rotations, |ops| {
        add_rotations(ops, &a_controls, m, fourier) + add_rotations(ops, &b_controls, m, fourier)
    });
    b.stage(StageKind::InverseQft, |ops| {
        ops.extend(iqft_on(&s));
        0
    });
    Ok(b.finish(layout))
}

pub fn build_adder(version: AdderVersion, k_b: usize, k_a: usize) -> Result<Circuit, CircuitError> {
    match version {
        AdderVersion::V1 => build_adder_v1(k_b, k_a),
        AdderVersion::V2 => build_adder_v2(k_b, k_a),
    }
}

impl Circuit {
    pub fn version(&self) -> AdderVersion {
        self.layout.version
    }

    pub fn stage(&self, kind: StageKind) -> Option<&Stage> {
        self.stages.iter().find(|s| s.kind == kind)
    }

    pub fn stage_ops(&self, kind: StageKind) -> &[GateOp] {
        self.stage(kind).map_or(&[], |s| &self.ops[s.ops.clone()])
    }

    /// Gate count per stage under the standard counting convention: the
    /// in-place adder counts emitted gates only, the out-of-place adder also
    /// counts every control/target rotation slot, identities included.
    pub fn stage_counts(&self) -> Vec<(StageKind, usize)> {
        self.stages
            .iter()
            .map(|s| {
                let mut n = s.ops.len();
                if self.version() == AdderVersion::V2 {
                    n += s.elided;
                }
                (s.kind, n)
            })
            .collect()
    }

    pub fn counted_gates(&self) -> usize {
        self.stage_counts().iter().map(|(_, n)| n).sum()
    }

    /// Depth of a greedy as-soon-as-possible layering where gates sharing a
    /// qubit never overlap.
    pub fn scheduled_depth(&self) -> usize {
        let mut level = vec![0usize; self.layout.total_qubits()];
        let mut depth = 0;
        for op in &self.ops {
            let qs = op.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Line-oriented text form: header, then one op per line with `#` stage
    /// markers.
    pub fn dump(&self) -> String {
        let mut out = self.layout.header();
        out.push('\n');
        for stage in &self.stages {
            out.push_str(&format!("# stage {} elided={}\n", stage.kind.name(), stage.elided));
            for op in &self.ops[stage.ops.clone()] {
                out.push_str(&op.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Circuit, CircuitError> {
        let err = |line: usize, message: String| CircuitError::Parse { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty dump".into()))?;
        let layout = parse_header(header).map_err(|m| err(1, m))?;

        let mut ops = Vec::new();
        let mut stages: Vec<Stage> = Vec::new();
        for (n, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# stage ") {
                let mut parts = rest.split_whitespace();
                let name = parts.next().unwrap_or_default();
                let kind = StageKind::from_name(name)
                    .ok_or_else(|| err(n + 1, format!("unknown stage {name:?}")))?;
                let elided = parts
                    .next()
                    .and_then(|p| p.strip_prefix("elided="))
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| err(n + 1, "missing elided=".into()))?;
                if let Some(last) = stages.last_mut() {
                    last.ops.end = ops.len();
                }
                stages.push(Stage {
                    kind,
                    ops: ops.len()..ops.len(),
                    elided,
                });
            } else if line.starts_with('#') {
                continue;
            } else {
                let op: GateOp = line.parse().map_err(|m| err(n + 1, m))?;
                if op.qubits().iter().any(|&q| q >= layout.total_qubits()) {
                    return Err(err(n + 1, format!("{line:?} exceeds the layout")));
                }
                ops.push(op);
            }
        }
        if let Some(last) = stages.last_mut() {
            last.ops.end = ops.len();
        }
        Ok(Circuit { layout, ops, stages })
    }
}

fn parse_header(line: &str) -> Result<RegisterLayout, String> {
    let range = |s: &str| -> Result<Range<usize>, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("bad range {s:?}"))?;
        Ok(a.parse().map_err(|_| format!("bad range {s:?}"))?..b.parse().map_err(|_| format!("bad range {s:?}"))?)
    };
    let (count, regs) = line
        .split_once(';')
        .ok_or_else(|| format!("bad header {line:?}"))?;
    let total: usize = count
        .trim()
        .strip_prefix("qubits ")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("bad qubit count in {line:?}"))?;
    let mut b = None;
    let mut a = None;
    let mut c = None;
    let mut s = None;
    for field in regs.split_whitespace() {
        let (name, value) = field
            .split_once('=')
            .ok_or_else(|| format!("bad field {field:?}"))?;
        match name {
            "B" => b = Some(range(value)?),
            "A" => a = Some(range(value)?),
            "S" => s = Some(range(value)?),
            "C" => c = Some(value.parse::<usize>().map_err(|_| format!("bad carry {value:?}"))?),
            other => return Err(format!("unknown register {other:?}")),
        }
    }
    let (a, b) = (a.ok_or("missing A")?, b.ok_or("missing B")?);
    let version = match (c, &s) {
        (Some(_), None) => AdderVersion::V1,
        (None, Some(_)) => AdderVersion::V2,
        _ => return Err("header needs exactly one of C or S".into()),
    };
    let layout = RegisterLayout::new(version, b.len(), a.len()).map_err(|e| e.to_string())?;
    let matches = layout.a == a
        && layout.b == b
        && layout.carry == c
        && s.is_none_or(|s| s == layout.sum)
        && layout.total_qubits() == total;
    if !matches {
        return Err(format!("header {line:?} does not match the standard layout"));
    }
    Ok(layout)
}

/// Per-stage totals behind a [`ResourceEstimate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageBreakdown {
    pub kind: StageKind,
    pub serial: u64,
    pub parallel: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceEstimate {
    pub version: AdderVersion,
    pub k: u64,
    pub qubits: u64,
    pub gate_count_serial: u64,
    /// Depth with rotations on distinct target qubits overlapped, from the
    /// closed forms.
    pub depth_parallel: u64,
    /// Depth reported for the requested convention.
    pub depth: u64,
    pub parallel_rotations: bool,
    pub breakdown: Vec<StageBreakdown>,
}

/// Closed-form qubit and depth counts for two equal `k`-qubit operands.
pub fn estimate_resources(version: AdderVersion, k: u64, parallel_rotations: bool) -> ResourceEstimate {
    assert!(k >= 1, "register width must be at least 1");
    let qft = (k + 1) * (k + 2) / 2;
    let (qubits, breakdown) = match version {
        AdderVersion::V1 => (
            2 * k + 1,
            vec![
                StageBreakdown { kind: StageKind::Qft1, serial: qft, parallel: qft },
                StageBreakdown { kind: StageKind::Rotations, serial: k * (k + 3) / 2, parallel: k },
                StageBreakdown { kind: StageKind::InverseQft1, serial: qft, parallel: qft },
            ],
        ),
        AdderVersion::V2 => (
            3 * k + 1,
            vec![
                StageBreakdown { kind: StageKind::Hadamard, serial: 1, parallel: 1 },
                StageBreakdown { kind: StageKind::Rotations, serial: 2 * k * (k + 1), parallel: 2 * (k + 1) },
                StageBreakdown { kind: StageKind::InverseQft, serial: qft + k.div_ceil(2), parallel: qft + 1 },
            ],
        ),
    };
    let serial_depth: u64 = breakdown.iter().map(|s| s.serial).sum();
    let depth_parallel = match version {
        AdderVersion::V1 => k * k + 4 * k + 2,
        AdderVersion::V2 => (k * k + 7 * k) / 2 + 4,
    };
    // For v2 the per-stage parallel terms sum to one more than the closed
    // form; the closed form is what gets reported.
    // Serial gate count: the Hadamard layer is k+1 gates even though its depth is 1.
    let gate_count_serial = match version {
        AdderVersion::V1 => serial_depth,
        AdderVersion::V2 => serial_depth - 1 + (k + 1),
    };
    ResourceEstimate {
        version,
        k,
        qubits,
        gate_count_serial,
        depth_parallel,
        depth: if parallel_rotations { depth_parallel } else { serial_depth },
        parallel_rotations,
        breakdown,
    }
}
