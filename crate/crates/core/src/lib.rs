//! Integer and decimal multiplication by exponent-state addition.
//!
//! Each operand `u = Σ 2^α` becomes a uniform superposition over its set-bit
//! positions `|α⟩`. A Fourier-basis adder sums the two exponent registers, so
//! the sum register is measured as `γ = α + β` with probability proportional
//! to the number of pairs reaching `γ`. The product is `Σ c_γ · 2^γ`, with
//! each `c_γ` recovered from frequency ratios.
//!
//! ```
//! use qmbead::{multiply, MultiplyConfig};
//!
//! let r = multiply("2.5", "1.75", &MultiplyConfig::exact()).unwrap();
//! assert_eq!(r.final_value, "4.375");
//! assert_eq!(r.qubits_used, 7);
//! ```

pub mod adder;
pub mod cases;
pub mod codec;
pub mod error;
pub mod oracle;
pub mod pipeline;
pub mod sim;

pub use adder::{build_adder, estimate_resources, AdderVersion, Circuit, RegisterLayout, ResourceEstimate};
pub use codec::{decompose, encode, parse_operand, render_scaled, ScaleBase, ScaledOperand};
pub use error::{CircuitError, CodecError, PipelineError, SimError};
pub use oracle::{convolution_counts, expected_distribution, verify_product};
pub use pipeline::{
    multiply, multiply_exact, multiply_integers, plan_shots, reconstruct, Anchor, Mode,
    MultiplyConfig, ReconstructionResult,
};
pub use sim::{sample, Distribution, GateOp, MeasurementHistogram, Statevector};
