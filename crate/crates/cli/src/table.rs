//! Reproduction of the reference multiplications.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use qmbead::cases::{reference_case, ReferenceCase, REFERENCE_CASES};
use qmbead::codec::decimal_to_rational;
use qmbead::pipeline::{multiply, Anchor, MultiplyConfig};

use crate::{push_line, Output, ReproduceArgs, EXIT_MISMATCH, EXIT_OK};

/// Row ids picked on the command line, in first-mention order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSelection(pub Vec<u32>);

/// Parses `1-6,13,16` into row ids.
pub fn parse_rows(text: &str) -> Result<RowSelection, String> {
    let mut rows = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = part.split_once('-').unwrap_or((part, part));
        let a: u32 = a.trim().parse().map_err(|_| format!("bad row {part:?}"))?;
        let b: u32 = b.trim().parse().map_err(|_| format!("bad row {part:?}"))?;
        if a > b {
            return Err(format!("descending row range {part:?}"));
        }
        for id in a..=b {
            if reference_case(id).is_none() {
                return Err(format!("no row {id} (rows are 1-{})", REFERENCE_CASES.len()));
            }
            if !rows.contains(&id) {
                rows.push(id);
            }
        }
    }
    if rows.is_empty() {
        return Err("empty row list".into());
    }
    Ok(RowSelection(rows))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub id: u32,
    pub u: String,
    pub v: String,
    pub shots: u64,
    pub seed: u64,
    pub expected: String,
    pub final_value: String,
    /// Exact rational equality with the expected product.
    pub product_ok: bool,
    /// Byte equality of the rendered value.
    pub text_match: bool,
    pub bits: u64,
    pub reference_bits: u64,
    pub bits_note: Option<String>,
    pub qubits: usize,
    pub reference_qubits: usize,
    pub low_confidence: bool,
    pub pass: bool,
    pub wall_ms: f64,
}

pub fn reproduce_row(case: &ReferenceCase, seed: u64, anchor: Anchor) -> anyhow::Result<RowReport> {
    let cfg = MultiplyConfig {
        shots: Some(case.shots),
        seed,
        anchor,
        ..Default::default()
    };
    let start = Instant::now();
    let r = multiply(case.u, case.v, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let product_ok = r.final_rational() == decimal_to_rational(case.product)?;
    let bits = r.product_bits();
    let bits_ok = bits == case.bits || case.bits_note.is_some();
    let qubits_ok = r.qubits_used == case.qubits;
    Ok(RowReport {
        id: case.id,
        u: case.u.into(),
        v: case.v.into(),
        shots: case.shots,
        seed,
        expected: case.product.into(),
        text_match: r.final_value == case.product,
        final_value: r.final_value,
        product_ok,
        bits,
        reference_bits: case.bits,
        bits_note: case.bits_note.map(str::to_string),
        qubits: r.qubits_used,
        reference_qubits: case.qubits,
        low_confidence: r.low_confidence,
        pass: product_ok && bits_ok && qubits_ok,
        wall_ms,
    })
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> anyhow::Result<Output> {
    let ids: Vec<u32> = match &args.rows {
        Some(sel) => sel.0.clone(),
        None => REFERENCE_CASES.iter().map(|c| c.id).collect(),
    };
    let mut reports = Vec::new();
    for id in ids {
        let case = reference_case(id).expect("row ids are validated");
        reports.push(reproduce_row(case, u64::from(id), args.anchor)?);
    }
    let passed = reports.iter().filter(|r| r.pass).count();

    let mut out = String::new();
    if args.json {
        out = serde_json::to_string_pretty(&reports)? + "\n";
    } else {
        for r in &reports {
            let bits = match (&r.bits_note, r.bits == r.reference_bits) {
                (_, true) => format!("bits {}", r.bits),
                (Some(note), false) => format!("bits {} vs {} (known: {note})", r.bits, r.reference_bits),
                (None, false) => format!("bits {} vs {}", r.bits, r.reference_bits),
            };
            push_line(
                &mut out,
                format_args!(
                    "row {:>2} {} {} qubits {}/{} {bits} shots {} seed {}{}",
                    r.id,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.final_value,
                    r.qubits,
                    r.reference_qubits,
                    r.shots,
                    r.seed,
                    if r.text_match { "" } else { " (equal as rationals)" },
                ),
            );
        }
        push_line(&mut out, format_args!("{passed}/{} rows pass", reports.len()));
    }
    Ok(Output {
        stdout: out,
        stderr: String::new(),
        code: if passed == reports.len() { EXIT_OK } else { EXIT_MISMATCH },
    })
}
