//! Cross-checks the hand-minimized output equations of every circuit against
//! truth tables generated from the arithmetic oracles.

use std::fmt;

use super::{check_equiv, minimize_exact, Expr, SopExpr, TruthTableSpec, XorStyle};
use crate::arith::{decode_b2q, encode_q2b, BitPair, OpKind, Quat};

/// One published output-bit equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperFunction {
    pub label: &'static str,
    pub op: OpKind,
    /// `true` for the msb of the result pair.
    pub msb: bool,
    /// Final form as published (may use XOR).
    pub form: &'static str,
    /// Two-level form, when one was published alongside the final form.
    pub sop_form: Option<&'static str>,
}

impl PaperFunction {
    pub fn var_names(&self) -> Vec<String> {
        let names: &[&str] = if self.op.is_unary() {
            &["x1", "x2"]
        } else {
            &["x1", "x2", "y1", "y2"]
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Truth table of this output bit, built from the table oracle.
    pub fn spec(&self) -> TruthTableSpec {
        let n = self.var_names().len();
        let op = self.op;
        let msb = self.msb;
        TruthTableSpec::from_fn(self.var_names(), move |m| {
            let bit = |v: usize| (m >> (n - 1 - v)) & 1 == 1;
            let x = decode_b2q(BitPair::new(bit(0), bit(1)));
            let y = if n == 4 {
                decode_b2q(BitPair::new(bit(2), bit(3)))
            } else {
                Quat::ZERO
            };
            let r = encode_q2b(op.apply(x, y));
            if msb {
                r.msb
            } else {
                r.lsb
            }
        })
        .expect("2 or 4 variables")
    }
}

/// The fourteen published output equations.
pub fn paper_functions() -> Vec<PaperFunction> {
    let f = |label, op, msb, form, sop_form| PaperFunction {
        label,
        op,
        msb,
        form,
        sop_form,
    };
    use OpKind::*;
    vec![
        f("mod4 a1", Mod4Add, true, "(x1 ^ y1) ^ (x2 y2)", None),
        f("mod4 a2", Mod4Add, false, "x2 ^ y2", None),
        f(
            "mod4 m1",
            Mod4Mul,
            true,
            "(x1 y2) ^ (x2 y1)",
            Some("x1 y1' y2 + x1 x2' y2 + x1' x2 y1 + x2 y1 y2'"),
        ),
        f("mod4 m2", Mod4Mul, false, "x2 y2", None),
        f("mod4 s1", Mod4Sub, true, "(x1 ^ y1) ^ (x2' y2)", None),
        f(
            "mod4 s2",
            Mod4Sub,
            false,
            "x2 ^ y2",
            Some("x2 y2' + x2' y2"),
        ),
        f("mod4 n1", Mod4Neg, true, "x1 ^ x2", None),
        f("mod4 n2", Mod4Neg, false, "x2", None),
        f("mod4 d1", Mod4Double, true, "x2", None),
        f("mod4 d2", Mod4Double, false, "0", None),
        f("gf4 a1", Gf4Add, true, "x1 ^ y1", None),
        f("gf4 a2", Gf4Add, false, "x2 ^ y2", None),
        f(
            "gf4 m1",
            Gf4Mul,
            true,
            "x1 y1' y2 + x1 x2' y1 y2' + x1' x2 y1 + x2 y1 y2",
            None,
        ),
        f("gf4 m2", Gf4Mul, false, "x1 y1 ^ x2 y2", None),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub function: PaperFunction,
    pub names: Vec<String>,
    pub spec: TruthTableSpec,
    pub paper: Expr,
    /// The published two-level form, or the final form if it is already one.
    pub paper_sop: Option<SopExpr>,
    /// Every published form matches the table.
    pub equivalent: bool,
    pub exact: SopExpr,
}

impl AuditRow {
    pub fn paper_literals(&self) -> usize {
        self.paper.literal_count()
    }

    pub fn paper_gates(&self) -> usize {
        self.paper.gate_count()
    }

    pub fn paper_sop_literals(&self) -> Option<usize> {
        self.paper_sop.as_ref().map(SopExpr::literal_count)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn all_equivalent(&self) -> bool {
        self.rows.iter().all(|r| r.equivalent)
    }

    pub fn equivalent_count(&self) -> usize {
        self.rows.iter().filter(|r| r.equivalent).count()
    }
}

pub fn audit_paper_functions() -> AuditReport {
    let rows = paper_functions()
        .into_iter()
        .map(|function| {
            let names = function.var_names();
            let n = names.len();
            let spec = function.spec();
            let paper = Expr::parse(function.form, &names).expect("catalog forms parse");
            let mut equivalent = check_equiv(&paper.expand(n), &spec);
            let paper_sop = match function.sop_form {
                Some(text) => {
                    let sop = Expr::parse(text, &names)
                        .expect("catalog forms parse")
                        .as_sop(n)
                        .expect("catalog two-level forms are sums of products");
                    equivalent &= check_equiv(&sop, &spec);
                    Some(sop)
                }
                None => paper.as_sop(n),
            };
            let exact = minimize_exact(&spec);
            AuditRow {
                function,
                names,
                spec,
                paper,
                paper_sop,
                equivalent,
                exact,
            }
        })
        .collect();
    AuditReport { rows }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.paper.render(&r.names, XorStyle::Ascii))
            .collect();
        let w = forms
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0)
            .max(14);
        writeln!(
            f,
            "{:<8}  {:<w$}  {:>4}  {:>5}  {:>7}  {:>11}  {:<5}  exact SOP",
            "output", "published form", "lits", "gates", "sop-lit", "exact t/lit", "equiv"
        )?;
        for (r, form) in self.rows.iter().zip(&forms) {
            let sop = r
                .paper_sop_literals()
                .map_or_else(|| "-".to_string(), |l| l.to_string());
            writeln!(
                f,
                "{:<8}  {:<w$}  {:>4}  {:>5}  {:>7}  {:>11}  {:<5}  {}",
                r.function.label,
                form,
                r.paper_literals(),
                r.paper_gates(),
                sop,
                format!("{}/{}", r.exact.term_count(), r.exact.literal_count()),
                if r.equivalent { "yes" } else { "NO" },
                r.exact.render(&r.names),
            )?;
        }
        write!(
            f,
            "{}/{} published equations match their tables",
            self.equivalent_count(),
            self.rows.len()
        )
    }
}
