//! Builders for every circuit in the catalog, plus the registry that ties
//! each one to its oracle and reference data.
//!
//! Binary-core circuits use the port names `x1 x2 [y1 y2]` for operands
//! (msb first) and a two-letter result pair such as `a1 a2`. Fully
//! quaternary circuits use `X`, `Y` and `Q`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arith::{self, BitPair, OpKind, Quat};
use crate::netlist::{
    CostTable, GateKind, Level, Metrics, NetId, Netlist, NetlistError, PaperReference, SignalType,
};

use SignalType::{Binary as B, Quaternary as Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("unknown circuit `{0}`")]
    UnknownCircuit(String),
    #[error("port shape mismatch: {0}")]
    PortShapeMismatch(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// Threshold voltages of the transistor-level converter designs. Carried as
/// metadata only; evaluation never reads them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// `(Vtp, Vtn)` for DLC1, DLC2, DLC3, in volts.
    pub dlc_thresholds: [(f64, f64); 3],
    /// Thresholds of M1..M4 in the binary-to-quaternary converter, in volts.
    pub b2q_thresholds: [f64; 4],
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            dlc_thresholds: [(-2.2, 0.2), (-1.2, 1.2), (0.2, 2.2)],
            b2q_thresholds: [-0.6, 0.6, -1.2, 0.6],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircuitId {
    Q2b,
    B2q,
    Mod4Add,
    Mod4Sub,
    Mod4Mul,
    Mod4Neg,
    Mod4Dbl,
    Gf4Add,
    Gf4MulSop,
    Gf4MulMux,
}

/// Shared note attached to every literature transistor count.
///
/// Reported counts are shown next to the computed estimate, never compared
/// with it:
///
/// ```
/// use mvq_core::circuits::{CircuitId, PAPER_COUNT_NOTE};
/// use mvq_core::CostTable;
///
/// let m = CircuitId::Mod4Add.metrics(&CostTable::default()).unwrap();
/// let reference = m.paper_reference.unwrap();
/// assert_eq!(reference.transistors, 40);
/// assert_eq!(reference.note, PAPER_COUNT_NOTE);
/// assert!(PAPER_COUNT_NOTE.starts_with("reference only"));
/// ```
pub const PAPER_COUNT_NOTE: &str = "reference only: the reported count has no stated per-gate \
     cost basis and cannot be reproduced by any single cost table; not compared with the estimate";

impl CircuitId {
    pub const ALL: [CircuitId; 10] = [
        CircuitId::Q2b,
        CircuitId::B2q,
        CircuitId::Mod4Add,
        CircuitId::Mod4Sub,
        CircuitId::Mod4Mul,
        CircuitId::Mod4Neg,
        CircuitId::Mod4Dbl,
        CircuitId::Gf4Add,
        CircuitId::Gf4MulSop,
        CircuitId::Gf4MulMux,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CircuitId::Q2b => "q2b",
            CircuitId::B2q => "b2q",
            CircuitId::Mod4Add => "mod4-add",
            CircuitId::Mod4Sub => "mod4-sub",
            CircuitId::Mod4Mul => "mod4-mul",
            CircuitId::Mod4Neg => "mod4-neg",
            CircuitId::Mod4Dbl => "mod4-dbl",
            CircuitId::Gf4Add => "gf4-add",
            CircuitId::Gf4MulSop => "gf4-mul-sop",
            CircuitId::Gf4MulMux => "gf4-mul-mux",
        }
    }

    /// The arithmetic operation the circuit realizes, if any.
    pub fn op(self) -> Option<OpKind> {
        match self {
            CircuitId::Q2b | CircuitId::B2q => None,
            CircuitId::Mod4Add => Some(OpKind::Mod4Add),
            CircuitId::Mod4Sub => Some(OpKind::Mod4Sub),
            CircuitId::Mod4Mul => Some(OpKind::Mod4Mul),
            CircuitId::Mod4Neg => Some(OpKind::Mod4Neg),
            CircuitId::Mod4Dbl => Some(OpKind::Mod4Double),
            CircuitId::Gf4Add => Some(OpKind::Gf4Add),
            CircuitId::Gf4MulSop | CircuitId::Gf4MulMux => Some(OpKind::Gf4Mul),
        }
    }

    /// True for circuits built on binary-encoded ports that need converters
    /// to present a quaternary interface.
    pub fn is_binary_core(self) -> bool {
        !matches!(self, CircuitId::Q2b | CircuitId::B2q | CircuitId::Gf4MulMux)
    }

    pub fn build(self) -> Netlist {
        match self {
            CircuitId::Q2b => build_q2b(),
            CircuitId::B2q => build_b2q(),
            CircuitId::Mod4Add => build_mod4_adder(),
            CircuitId::Mod4Sub => build_mod4_subtractor(),
            CircuitId::Mod4Mul => build_mod4_multiplier(),
            CircuitId::Mod4Neg => build_mod4_negator(),
            CircuitId::Mod4Dbl => build_mod4_doubler(),
            CircuitId::Gf4Add => build_gf4_adder(),
            CircuitId::Gf4MulSop => build_gf4_mul_sop(),
            CircuitId::Gf4MulMux => build_gf4_mul_mux(),
        }
    }

    /// The circuit as seen from quaternary signals: binary cores are wrapped
    /// with converters, the rest are returned as built.
    pub fn quaternary_view(self) -> Netlist {
        let core = self.build();
        if self.is_binary_core() {
            compose_with_converters(&core).expect("registry cores have converter-compatible ports")
        } else {
            core
        }
    }

    /// Expected outputs for the native ports of [`CircuitId::build`].
    pub fn oracle(self, inputs: &[Level]) -> Vec<Level> {
        let bit = |i: usize| inputs[i] != 0;
        let quat = |i: usize| Quat::wrapping(inputs[i]);
        match self {
            CircuitId::Q2b => {
                let p = arith::encode_q2b(quat(0));
                vec![p.msb as Level, p.lsb as Level]
            }
            CircuitId::B2q => vec![arith::decode_b2q(BitPair::new(bit(0), bit(1))).value()],
            CircuitId::Gf4MulMux => vec![arith::gf4_mul(quat(0), quat(1)).value()],
            _ => {
                let op = self.op().expect("binary cores carry an op");
                let x = arith::decode_b2q(BitPair::new(bit(0), bit(1)));
                let y = if op.is_unary() {
                    Quat::ZERO
                } else {
                    arith::decode_b2q(BitPair::new(bit(2), bit(3)))
                };
                let r = arith::encode_q2b(op.apply(x, y));
                vec![r.msb as Level, r.lsb as Level]
            }
        }
    }

    /// Expected outputs for the ports of [`CircuitId::quaternary_view`].
    pub fn quaternary_oracle(self, inputs: &[Level]) -> Vec<Level> {
        match self.op() {
            Some(op) if self.is_binary_core() => {
                let x = Quat::wrapping(inputs[0]);
                let y = inputs.get(1).map_or(Quat::ZERO, |&v| Quat::wrapping(v));
                vec![op.apply(x, y).value()]
            }
            _ => self.oracle(inputs),
        }
    }

    /// Transistor count reported in the literature, where one exists.
    pub fn paper_reference(self) -> Option<PaperReference> {
        let transistors = match self {
            CircuitId::Mod4Add => 40,
            CircuitId::Mod4Mul => 24,
            CircuitId::Gf4Add => 24,
            CircuitId::Gf4MulMux => 72,
            _ => return None,
        };
        Some(PaperReference {
            transistors,
            note: PAPER_COUNT_NOTE,
        })
    }

    /// Metrics of the built netlist, annotated with the reference count.
    pub fn metrics(self, costs: &CostTable) -> Result<Metrics, NetlistError> {
        let mut m = self.build().metrics(costs)?;
        m.paper_reference = self.paper_reference();
        Ok(m)
    }
}

impl fmt::Display for CircuitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CircuitId {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CircuitId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CircuitError::UnknownCircuit(s.to_string()))
    }
}

fn binary_core(name: &str, unary: bool, outputs: [&str; 2]) -> Netlist {
    let inputs: &[&str] = if unary {
        &["x1", "x2"]
    } else {
        &["x1", "x2", "y1", "y2"]
    };
    Netlist::new(
        inputs.iter().map(|&n| (n, B)),
        outputs.iter().map(|&n| (n, B)),
    )
    .expect("static port names are unique")
    .with_name(name)
}

fn net(n: &Netlist, name: &str) -> NetId {
    n.input_net(name).expect("static port exists")
}

/// Builder helper: gate insertion that cannot fail on our own static wiring.
fn gate(n: &mut Netlist, kind: GateKind, inputs: &[NetId]) -> NetId {
    n.add_gate(kind, inputs)
        .expect("static wiring is well-typed")
}

fn connect(n: &mut Netlist, port: &str, driver: NetId) {
    n.connect_output(port, driver)
        .expect("static output wiring is well-typed");
}

/// Quaternary-to-binary converter from three down-literal circuits and a
/// 2:1 mux. The DLC outputs are complemented, hence the output inverters.
pub fn build_q2b() -> Netlist {
    let mut n = Netlist::new([("Q", Q)], [("x1", B), ("x2", B)])
        .expect("static ports")
        .with_name("q2b");
    let q = net(&n, "Q");
    let dlc1 = gate(&mut n, GateKind::Dlc1, &[q]);
    let dlc2 = gate(&mut n, GateKind::Dlc2, &[q]);
    let dlc3 = gate(&mut n, GateKind::Dlc3, &[q]);
    let x1 = gate(&mut n, GateKind::Not, &[dlc2]);
    // DLC2 separates {0,1} from {2,3}; within each half the lsb comes from
    // DLC1 (low half) or DLC3 (high half).
    let mux = gate(&mut n, GateKind::BMux2, &[dlc2, dlc1, dlc3]);
    let x2 = gate(&mut n, GateKind::Not, &[mux]);
    connect(&mut n, "x1", x1);
    connect(&mut n, "x2", x2);
    n
}

/// Binary-to-quaternary converter as a single behavioral primitive.
pub fn build_b2q() -> Netlist {
    let mut n = Netlist::new([("x1", B), ("x2", B)], [("Q", Q)])
        .expect("static ports")
        .with_name("b2q");
    let (x1, x2) = (net(&n, "x1"), net(&n, "x2"));
    let q = gate(&mut n, GateKind::B2q, &[x1, x2]);
    connect(&mut n, "Q", q);
    n
}

/// `a1 = (x1 ^ y1) ^ (x2 y2)`, `a2 = x2 ^ y2`.
pub fn build_mod4_adder() -> Netlist {
    let mut n = binary_core("mod4-add", false, ["a1", "a2"]);
    let [x1, x2, y1, y2] = ["x1", "x2", "y1", "y2"].map(|p| net(&n, p));
    let t = gate(&mut n, GateKind::Xor2, &[x1, y1]);
    let carry = gate(&mut n, GateKind::And2, &[x2, y2]);
    let a1 = gate(&mut n, GateKind::Xor2, &[t, carry]);
    let a2 = gate(&mut n, GateKind::Xor2, &[x2, y2]);
    connect(&mut n, "a1", a1);
    connect(&mut n, "a2", a2);
    n
}

/// `s1 = (x1 ^ y1) ^ (x2' y2)`, `s2 = x2 ^ y2`. The borrow term is a single
/// inhibit gate.
pub fn build_mod4_subtractor() -> Netlist {
    let mut n = binary_core("mod4-sub", false, ["s1", "s2"]);
    let [x1, x2, y1, y2] = ["x1", "x2", "y1", "y2"].map(|p| net(&n, p));
    let t = gate(&mut n, GateKind::Xor2, &[x1, y1]);
    let borrow = gate(&mut n, GateKind::AndN2, &[x2, y2]);
    let s1 = gate(&mut n, GateKind::Xor2, &[t, borrow]);
    let s2 = gate(&mut n, GateKind::Xor2, &[x2, y2]);
    connect(&mut n, "s1", s1);
    connect(&mut n, "s2", s2);
    n
}

/// `m1 = (x1 y2) ^ (x2 y1)`, `m2 = x2 y2`.
pub fn build_mod4_multiplier() -> Netlist {
    let mut n = binary_core("mod4-mul", false, ["m1", "m2"]);
    let [x1, x2, y1, y2] = ["x1", "x2", "y1", "y2"].map(|p| net(&n, p));
    let p = gate(&mut n, GateKind::And2, &[x1, y2]);
    let q = gate(&mut n, GateKind::And2, &[x2, y1]);
    let m1 = gate(&mut n, GateKind::Xor2, &[p, q]);
    let m2 = gate(&mut n, GateKind::And2, &[x2, y2]);
    connect(&mut n, "m1", m1);
    connect(&mut n, "m2", m2);
    n
}

/// `n1 = x1 ^ x2`, `n2 = x2` (a wire).
pub fn build_mod4_negator() -> Netlist {
    let mut n = binary_core("mod4-neg", true, ["n1", "n2"]);
    let (x1, x2) = (net(&n, "x1"), net(&n, "x2"));
    let n1 = gate(&mut n, GateKind::Xor2, &[x1, x2]);
    connect(&mut n, "n1", n1);
    connect(&mut n, "n2", x2);
    n
}

/// `d1 = x2`, `d2 = 0`: no logic at all.
pub fn build_mod4_doubler() -> Netlist {
    let mut n = binary_core("mod4-dbl", true, ["d1", "d2"]);
    let x2 = net(&n, "x2");
    let zero = gate(&mut n, GateKind::Const0, &[]);
    connect(&mut n, "d1", x2);
    connect(&mut n, "d2", zero);
    n
}

/// `a1 = x1 ^ y1`, `a2 = x2 ^ y2`.
pub fn build_gf4_adder() -> Netlist {
    let mut n = binary_core("gf4-add", false, ["a1", "a2"]);
    let [x1, x2, y1, y2] = ["x1", "x2", "y1", "y2"].map(|p| net(&n, p));
    let a1 = gate(&mut n, GateKind::Xor2, &[x1, y1]);
    let a2 = gate(&mut n, GateKind::Xor2, &[x2, y2]);
    connect(&mut n, "a1", a1);
    connect(&mut n, "a2", a2);
    n
}

/// Two-level GF(4) multiplier:
/// `m1 = x1 y1' y2 + x1 x2' y1 y2' + x1' x2 y1 + x2 y1 y2`,
/// `m2 = x1 y1 ^ x2 y2`, with explicit inverters.
pub fn build_gf4_mul_sop() -> Netlist {
    let mut n = binary_core("gf4-mul-sop", false, ["m1", "m2"]);
    let [x1, x2, y1, y2] = ["x1", "x2", "y1", "y2"].map(|p| net(&n, p));
    let nx1 = gate(&mut n, GateKind::Not, &[x1]);
    let nx2 = gate(&mut n, GateKind::Not, &[x2]);
    let ny1 = gate(&mut n, GateKind::Not, &[y1]);
    let ny2 = gate(&mut n, GateKind::Not, &[y2]);
    let t0 = gate(&mut n, GateKind::And3, &[x1, ny1, y2]);
    let t1 = gate(&mut n, GateKind::And4, &[x1, nx2, y1, ny2]);
    let t2 = gate(&mut n, GateKind::And3, &[nx1, x2, y1]);
    let t3 = gate(&mut n, GateKind::And3, &[x2, y1, y2]);
    let m1 = gate(&mut n, GateKind::Or4, &[t0, t1, t2, t3]);
    let p = gate(&mut n, GateKind::And2, &[x1, y1]);
    let q = gate(&mut n, GateKind::And2, &[x2, y2]);
    let m2 = gate(&mut n, GateKind::Xor2, &[p, q]);
    connect(&mut n, "m1", m1);
    connect(&mut n, "m2", m2);
    n
}

/// Multiplexer GF(4) multiplier working directly on quaternary levels.
///
/// The main mux selects on `X` between ground, `Y`, and two sub-muxes that
/// select on `Y` over the constant rows `0 2 3 1` and `0 3 1 2`.
pub fn build_gf4_mul_mux() -> Netlist {
    let mut n = Netlist::new([("X", Q), ("Y", Q)], [("Q", Q)])
        .expect("static ports")
        .with_name("gf4-mul-mux");
    let (x, y) = (net(&n, "X"), net(&n, "Y"));
    let c: Vec<NetId> = Quat::ALL
        .into_iter()
        .map(|l| gate(&mut n, GateKind::QConst(l), &[]))
        .collect();
    let row2 = gate(&mut n, GateKind::QMux4, &[y, c[0], c[2], c[3], c[1]]);
    let row3 = gate(&mut n, GateKind::QMux4, &[y, c[0], c[3], c[1], c[2]]);
    let q = gate(&mut n, GateKind::QMux4, &[x, c[0], y, row2, row3]);
    connect(&mut n, "Q", q);
    n
}

/// Wraps a binary core (`x1 x2 [y1 y2] -> o1 o2`) with a quaternary-to-binary
/// converter per operand and a binary-to-quaternary converter on the result.
/// The wrapped netlist has ports `X [Y] -> Q`.
pub fn compose_with_converters(core: &Netlist) -> Result<Netlist, CircuitError> {
    let n_in = core.inputs().len();
    let shape_ok = (n_in == 2 || n_in == 4)
        && core.inputs().iter().all(|p| p.ty == B)
        && core.outputs().len() == 2
        && core.outputs().iter().all(|p| p.ty == B);
    if !shape_ok {
        return Err(CircuitError::PortShapeMismatch(format!(
            "`{}` needs 2 or 4 binary inputs and 2 binary outputs, has {} inputs and {} outputs",
            core.name(),
            n_in,
            core.outputs().len()
        )));
    }
    let operands: &[&str] = if n_in == 2 { &["X"] } else { &["X", "Y"] };
    let mut n = Netlist::new(operands.iter().map(|&o| (o, Q)), [("Q", Q)])?
        .with_name(format!("{}+conv", core.name()));
    let q2b = build_q2b();
    let mut bits = Vec::with_capacity(n_in);
    for &operand in operands {
        let q = net(&n, operand);
        bits.extend(n.instantiate(&q2b, &[q])?);
    }
    let result = n.instantiate(core, &bits)?;
    let q = n.instantiate(&build_b2q(), &result)?;
    n.connect_output("Q", q[0])?;
    Ok(n)
}

/// Outcome of an exhaustive netlist-versus-oracle check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub circuit: CircuitId,
    pub vectors: usize,
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub inputs: Vec<(String, Level)>,
    pub expected: Vec<(String, Level)>,
    pub actual: Vec<(String, Level)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |v: &[(String, Level)]| {
            v.iter()
                .map(|(n, l)| format!("{n}={l}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "{}: expected {}, got {}",
            render(&self.inputs),
            render(&self.expected),
            render(&self.actual)
        )
    }
}

/// Checks `netlist` against the oracle of `id`. The netlist must expose the
/// same ports as the registry builder (names and types, in order).
pub fn verify_netlist(id: CircuitId, netlist: &Netlist) -> Result<Verification, CircuitError> {
    let reference = id.build();
    let ports = |n: &Netlist| {
        (
            n.inputs()
                .iter()
                .map(|p| (p.name.clone(), p.ty))
                .collect::<Vec<_>>(),
            n.outputs()
                .iter()
                .map(|p| (p.name.clone(), p.ty))
                .collect::<Vec<_>>(),
        )
    };
    if ports(&reference) != ports(netlist) {
        return Err(CircuitError::PortShapeMismatch(format!(
            "netlist ports do not match circuit `{id}`"
        )));
    }
    check_against(id, netlist, |inputs| id.oracle(inputs))
}

/// Exhaustively checks the registry builder and, for binary cores, the
/// converter-wrapped quaternary view as well.
pub fn verify(id: CircuitId) -> Result<Verification, CircuitError> {
    let native = check_against(id, &id.build(), |inputs| id.oracle(inputs))?;
    if !native.passed() || !id.is_binary_core() {
        return Ok(native);
    }
    let wrapped = check_against(id, &id.quaternary_view(), |inputs| {
        id.quaternary_oracle(inputs)
    })?;
    Ok(Verification {
        circuit: id,
        vectors: native.vectors + wrapped.vectors,
        mismatch: wrapped.mismatch,
    })
}

fn check_against(
    id: CircuitId,
    netlist: &Netlist,
    oracle: impl Fn(&[Level]) -> Vec<Level>,
) -> Result<Verification, CircuitError> {
    let table = netlist.truth_table()?;
    let named = |names: &[(String, SignalType)], levels: &[Level]| {
        names
            .iter()
            .map(|(n, _)| n.clone())
            .zip(levels.iter().copied())
            .collect::<Vec<_>>()
    };
    let mismatch = table.rows.iter().find_map(|row| {
        let expected = oracle(&row.inputs);
        (expected != row.outputs).then(|| Mismatch {
            inputs: named(&table.inputs, &row.inputs),
            expected: named(&table.outputs, &expected),
            actual: named(&table.outputs, &row.outputs),
        })
    });
    Ok(Verification {
        circuit: id,
        vectors: table.rows.len(),
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(n: &Netlist, inputs: &[Level]) -> Vec<Level> {
        n.eval_vector(inputs).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in CircuitId::ALL {
            assert_eq!(id.name().parse::<CircuitId>().unwrap(), id);
        }
        assert_eq!(
            "bogus".parse::<CircuitId>(),
            Err(CircuitError::UnknownCircuit("bogus".into()))
        );
    }

    #[test]
    fn builder_examples() {
        assert_eq!(eval(&build_q2b(), &[2]), vec![1, 0]);
        assert_eq!(eval(&build_q2b(), &[0]), vec![0, 0]);
        assert_eq!(eval(&build_q2b(), &[1]), vec![0, 1]);
        assert_eq!(eval(&build_b2q(), &[1, 1]), vec![3]);
        assert_eq!(eval(&build_b2q(), &[0, 0]), vec![0]);
        // 2 + 3 = 1
        assert_eq!(eval(&build_mod4_adder(), &[1, 0, 1, 1]), vec![0, 1]);
        // 2 - 3 = 3
        assert_eq!(eval(&build_mod4_subtractor(), &[1, 0, 1, 1]), vec![1, 1]);
        // 3 * 3 = 1
        assert_eq!(eval(&build_mod4_multiplier(), &[1, 1, 1, 1]), vec![0, 1]);
        assert_eq!(eval(&build_mod4_negator(), &[0, 1]), vec![1, 1]);
        assert_eq!(eval(&build_mod4_doubler(), &[1, 1]), vec![1, 0]);
        assert_eq!(eval(&build_gf4_adder(), &[1, 0, 1, 1]), vec![0, 1]);
        assert_eq!(eval(&build_gf4_mul_sop(), &[1, 0, 1, 0]), vec![1, 1]);
        assert_eq!(eval(&build_gf4_mul_sop(), &[1, 1, 1, 0]), vec![0, 1]);
        assert_eq!(eval(&build_gf4_mul_mux(), &[1, 3]), vec![3]);
        assert_eq!(eval(&build_gf4_mul_mux(), &[2, 3]), vec![1]);
        for y in 0..4 {
            assert_eq!(eval(&build_gf4_mul_mux(), &[0, y]), vec![0]);
        }
    }

    #[test]
    fn every_builder_validates_and_verifies() {
        for id in CircuitId::ALL {
            let n = id.build();
            n.validate().unwrap();
            assert_eq!(n.name(), id.name());
            let v = verify(id).unwrap();
            assert!(v.passed(), "{id}: {:?}", v.mismatch);
        }
    }

    #[test]
    fn structural_metrics() {
        let costs = CostTable::default();
        let expect = [
            (CircuitId::Mod4Add, 4, 2),
            (CircuitId::Mod4Sub, 4, 2),
            (CircuitId::Mod4Mul, 4, 2),
            (CircuitId::Mod4Neg, 1, 1),
            (CircuitId::Mod4Dbl, 0, 0),
            (CircuitId::Gf4Add, 2, 1),
        ];
        for (id, gates, depth) in expect {
            let m = id.metrics(&costs).unwrap();
            assert_eq!((m.gate_count, m.depth), (gates, depth), "{id}");
        }
        let mux = CircuitId::Gf4MulMux.metrics(&costs).unwrap();
        assert_eq!(mux.gate_histogram.get("QMUX4"), Some(&3));
        assert_eq!(mux.gate_count, 3);
        let sub = CircuitId::Mod4Sub.build();
        let kinds: Vec<_> = sub.gates().iter().map(|g| g.kind).collect();
        assert_eq!(
            kinds,
            [
                GateKind::Xor2,
                GateKind::AndN2,
                GateKind::Xor2,
                GateKind::Xor2
            ]
        );
    }

    #[test]
    fn mux_multiplier_has_no_converters() {
        let n = build_gf4_mul_mux();
        assert!(n
            .gates()
            .iter()
            .all(|g| matches!(g.kind, GateKind::QMux4 | GateKind::QConst(_))));
    }

    #[test]
    fn composition() {
        let add = compose_with_converters(&build_mod4_adder()).unwrap();
        assert_eq!(eval(&add, &[2, 3]), vec![1]);
        let neg = compose_with_converters(&build_mod4_negator()).unwrap();
        assert_eq!(eval(&neg, &[2]), vec![2]);
        let mul = compose_with_converters(&build_mod4_multiplier()).unwrap();
        for x in Quat::ALL {
            for y in Quat::ALL {
                assert_eq!(
                    eval(&mul, &[x.value(), y.value()]),
                    vec![arith::mod4_mul(x, y).value()]
                );
            }
        }
        assert!(matches!(
            compose_with_converters(&build_gf4_mul_mux()),
            Err(CircuitError::PortShapeMismatch(_))
        ));
    }

    #[test]
    fn converters_compose_to_identity() {
        let mut n = Netlist::new([("x1", B), ("x2", B)], [("y1", B), ("y2", B)]).unwrap();
        let ins = [n.input_net("x1").unwrap(), n.input_net("x2").unwrap()];
        let q = n.instantiate(&build_b2q(), &ins).unwrap();
        let bits = n.instantiate(&build_q2b(), &q).unwrap();
        n.connect_output("y1", bits[0]).unwrap();
        n.connect_output("y2", bits[1]).unwrap();
        for row in n.truth_table().unwrap().rows {
            assert_eq!(row.inputs, row.outputs);
        }
    }

    #[test]
    fn corrupted_netlist_fails_verification() {
        let mut bad = Netlist::new(
            [("x1", B), ("x2", B), ("y1", B), ("y2", B)],
            [("a1", B), ("a2", B)],
        )
        .unwrap();
        let [x1, x2, y1, y2] = ["x1", "x2", "y1", "y2"].map(|p| bad.input_net(p).unwrap());
        let a1 = bad.add_gate(GateKind::Xor2, &[x1, y1]).unwrap();
        let a2 = bad.add_gate(GateKind::Xor2, &[x2, y2]).unwrap();
        bad.connect_output("a1", a1).unwrap();
        bad.connect_output("a2", a2).unwrap();
        let v = verify_netlist(CircuitId::Mod4Add, &bad).unwrap();
        let m = v.mismatch.expect("missing carry must be caught");
        // First failing vector in lexicographic order is 1 + 1.
        assert_eq!(
            m.to_string(),
            "x1=0 x2=1 y1=0 y2=1: expected a1=1 a2=0, got a1=0 a2=0"
        );
        assert!(matches!(
            verify_netlist(CircuitId::Mod4Neg, &bad),
            Err(CircuitError::PortShapeMismatch(_))
        ));
    }

    #[test]
    fn reported_counts_are_metadata() {
        let refs: Vec<_> = CircuitId::ALL
            .iter()
            .filter_map(|id| id.paper_reference().map(|r| (id.name(), r.transistors)))
            .collect();
        assert_eq!(
            refs,
            [
                ("mod4-add", 40),
                ("mod4-mul", 24),
                ("gf4-add", 24),
                ("gf4-mul-mux", 72)
            ]
        );
    }

    #[test]
    fn device_params_defaults() {
        let p = DeviceParams::default();
        assert_eq!(p.dlc_thresholds[0], (-2.2, 0.2));
        assert_eq!(p.b2q_thresholds, [-0.6, 0.6, -1.2, 0.6]);
    }
}
