//! Quaternary (radix-4) arithmetic circuits.
//!
//! * [`arith`]: reference operations on single quaternary digits (ring Z/4Z,
//!   field GF(4)) and the published bit-level equations.
//! * [`netlist`]: a typed gate-level IR mixing binary and quaternary nets.
//! * [`circuits`]: builders for the converter, modulo-4 and GF(4) circuits.
//! * [`minimizer`]: exact two-level minimization (Quine-McCluskey + Petrick).
//! * [`sim`]: exhaustive stimulus sweeps and CSV/VCD trace export.

pub mod arith;
pub mod circuits;
pub mod minimizer;
pub mod netlist;
pub mod sim;

pub use arith::{BitPair, OpKind, Quat};
pub use circuits::{CircuitError, CircuitId};
pub use netlist::{CostTable, GateKind, Level, Metrics, NetId, Netlist, NetlistError, SignalType};
pub use sim::{SimError, Stimulus, Trace, VoltageMap};
