//! Exact two-level minimization and a few helpers for auditing hand-derived
//! boolean equations.
//!
//! [`prime_implicants`] is the tabular Quine-McCluskey procedure;
//! [`minimize_exact`] picks a cheapest prime cover (the covering problem of
//! Petrick's method, solved by exact branch and bound).
//! Cost is compared as (terms, literals, cube list), so results are unique.

mod audit;
mod cube;
mod expr;
mod pla;
mod qm;
mod xor;

use thiserror::Error;

pub use audit::{audit_paper_functions, paper_functions, AuditReport, AuditRow, PaperFunction};
pub use cube::{Cube, Literal, SopExpr, MAX_VARS};
pub use expr::{Expr, XorStyle};
pub use pla::{parse_pla, write_pla, PlaError};
pub use qm::{minimize_exact, prime_implicants};
pub use xor::{recognize_xor, XorReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimizerError {
    #[error("variable count {0} outside 1..={MAX_VARS}")]
    VarCount(usize),
    #[error("expected {expected} output entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid cube: {0}")]
    BadCube(String),
    #[error("expression parse error at offset {offset}: {msg}")]
    ExprParse { offset: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
}

/// One output entry of a truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    Off,
    On,
    DontCare,
}

/// A single-output boolean function over up to [`MAX_VARS`] variables.
/// Entry `i` is the value for the assignment whose bits, read with variable
/// 0 as the most significant, spell `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTableSpec {
    names: Vec<String>,
    outputs: Vec<Tri>,
}

impl TruthTableSpec {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        outputs: Vec<Tri>,
    ) -> Result<Self, MinimizerError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(MinimizerError::VarCount(names.len()));
        }
        let expected = 1 << names.len();
        if outputs.len() != expected {
            return Err(MinimizerError::Length {
                expected,
                got: outputs.len(),
            });
        }
        Ok(TruthTableSpec { names, outputs })
    }

    /// Fully specified function from a predicate on minterm indices.
    pub fn from_fn<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        f: impl Fn(u32) -> bool,
    ) -> Result<Self, MinimizerError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let size = 1u32 << names.len().min(31);
        let outputs = (0..size)
            .map(|m| if f(m) { Tri::On } else { Tri::Off })
            .collect();
        TruthTableSpec::new(names, outputs)
    }

    /// Default variable names `i0, i1, ...`.
    pub fn default_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("i{i}")).collect()
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn outputs(&self) -> &[Tri] {
        &self.outputs
    }

    pub fn get(&self, minterm: u32) -> Tri {
        self.outputs[minterm as usize]
    }

    fn indices_with(&self, want: Tri) -> Vec<u32> {
        (0..self.outputs.len() as u32)
            .filter(|&m| self.outputs[m as usize] == want)
            .collect()
    }

    pub fn on_set(&self) -> Vec<u32> {
        self.indices_with(Tri::On)
    }

    pub fn off_set(&self) -> Vec<u32> {
        self.indices_with(Tri::Off)
    }

    pub fn dc_set(&self) -> Vec<u32> {
        self.indices_with(Tri::DontCare)
    }
}

/// True iff `e` agrees with `spec` on every row that is not a don't-care.
pub fn check_equiv(e: &SopExpr, spec: &TruthTableSpec) -> bool {
    e.n_vars() == spec.n_vars()
        && (0..spec.outputs.len() as u32).all(|m| match spec.get(m) {
            Tri::On => e.eval(m),
            Tri::Off => !e.eval(m),
            Tri::DontCare => true,
        })
}
