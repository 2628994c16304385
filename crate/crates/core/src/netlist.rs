//! Typed combinational netlists mixing binary and quaternary nets.
//!
//! A [`Netlist`] is built incrementally with [`Netlist::add_gate`], checked by
//! [`Netlist::validate`] (which caches a topological order) and then evaluated
//! any number of times. Once validated it is never mutated, so it can be
//! shared across threads freely.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Quat;

/// A signal value: `0..=1` on binary nets, `0..=3` on quaternary nets.
pub type Level = u8;

/// Truth tables and sweeps refuse to enumerate more rows than this.
pub const MAX_STATE_SPACE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignalType {
    #[serde(rename = "bin")]
    Binary,
    #[serde(rename = "quat")]
    Quaternary,
}

impl SignalType {
    /// Number of distinct levels on a net of this type.
    pub fn radix(self) -> u8 {
        match self {
            SignalType::Binary => 2,
            SignalType::Quaternary => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SignalType::Binary => "bin",
            SignalType::Quaternary => "quat",
        }
    }
}

impl fmt::Display for SignalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("duplicate port name `{0}`")]
    DuplicatePortName(String),
    #[error("{kind} takes {expected} inputs, got {got}")]
    ArityMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("type mismatch at {context}: expected {expected}, found {found}")]
    TypeMismatch {
        context: String,
        expected: SignalType,
        found: SignalType,
    },
    #[error("instance expects {expected} inputs, got {got}")]
    InstanceArity { expected: usize, got: usize },
    #[error("unknown net {0}")]
    UnknownNet(usize),
    #[error("unknown port `{0}`")]
    UnknownPort(String),
    #[error("net {0} is driven more than once")]
    MultipleDrivers(usize),
    #[error("duplicate gate id {0}")]
    DuplicateGateId(usize),
    #[error("unknown gate kind `{0}`")]
    UnknownGateKind(String),
    #[error("combinational cycle through net {0}")]
    CombinationalCycle(NetId),
    #[error("output port `{0}` is not driven")]
    UndrivenOutput(String),
    #[error("no level assigned to input port `{0}`")]
    MissingAssignment(String),
    #[error("level {level} out of range for {ty} port `{port}`")]
    LevelOutOfRange {
        port: String,
        level: Level,
        ty: SignalType,
    },
    #[error("input state space of {0} combinations exceeds the limit of {MAX_STATE_SPACE}")]
    StateSpaceTooLarge(u64),
    #[error("cost table has no entry for {0}")]
    MissingCostEntry(String),
    #[error("malformed netlist document: {0}")]
    Json(String),
}

pub type Result<T, E = NetlistError> = std::result::Result<T, E>;

/// Every primitive the IR knows about. Port signatures are fixed per kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    Not,
    And2,
    And3,
    And4,
    Or2,
    Or3,
    Or4,
    Xor2,
    Nand2,
    Nor2,
    /// Inhibit gate: `a' & b`.
    AndN2,
    Const0,
    Const1,
    /// 2:1 binary mux, inputs `(sel, a, b)`, yields `a` when `sel = 1`.
    BMux2,
    /// Down-literal circuits: high iff the input level is below `k`.
    Dlc1,
    Dlc2,
    Dlc3,
    /// Binary pair `(x1, x2)` to quaternary level `2*x1 + x2`.
    B2q,
    QConst(Quat),
    /// Quaternary 4:1 mux, inputs `(sel, d0, d1, d2, d3)`.
    QMux4,
}

use SignalType::{Binary as B, Quaternary as Q};

impl GateKind {
    /// All kinds, with one `QConst` per level.
    pub fn all() -> Vec<GateKind> {
        use GateKind::*;
        let mut kinds = vec![
            Not, And2, And3, And4, Or2, Or3, Or4, Xor2, Nand2, Nor2, AndN2, Const0, Const1, BMux2,
            Dlc1, Dlc2, Dlc3, B2q,
        ];
        kinds.extend(Quat::ALL.into_iter().map(QConst));
        kinds.push(QMux4);
        kinds
    }

    /// Name without parameters; also the cost-table key.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::And2 => "AND2",
            GateKind::And3 => "AND3",
            GateKind::And4 => "AND4",
            GateKind::Or2 => "OR2",
            GateKind::Or3 => "OR3",
            GateKind::Or4 => "OR4",
            GateKind::Xor2 => "XOR2",
            GateKind::Nand2 => "NAND2",
            GateKind::Nor2 => "NOR2",
            GateKind::AndN2 => "ANDN2",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
            GateKind::BMux2 => "BMUX2",
            GateKind::Dlc1 => "DLC1",
            GateKind::Dlc2 => "DLC2",
            GateKind::Dlc3 => "DLC3",
            GateKind::B2q => "B2Q",
            GateKind::QConst(_) => "QCONST",
            GateKind::QMux4 => "QMUX4",
        }
    }

    pub fn input_types(&self) -> &'static [SignalType] {
        match self {
            GateKind::Not => &[B],
            GateKind::And2
            | GateKind::Or2
            | GateKind::Xor2
            | GateKind::Nand2
            | GateKind::Nor2
            | GateKind::AndN2 => &[B, B],
            GateKind::And3 | GateKind::Or3 => &[B, B, B],
            GateKind::And4 | GateKind::Or4 => &[B, B, B, B],
            GateKind::Const0 | GateKind::Const1 | GateKind::QConst(_) => &[],
            GateKind::BMux2 => &[B, B, B],
            GateKind::Dlc1 | GateKind::Dlc2 | GateKind::Dlc3 => &[Q],
            GateKind::B2q => &[B, B],
            GateKind::QMux4 => &[Q, Q, Q, Q, Q],
        }
    }

    pub fn output_type(&self) -> SignalType {
        match self {
            GateKind::B2q | GateKind::QConst(_) | GateKind::QMux4 => Q,
            _ => B,
        }
    }

    pub fn arity(&self) -> usize {
        self.input_types().len()
    }

    /// Constant sources are free: they count towards neither gates nor depth.
    pub fn is_constant(&self) -> bool {
        matches!(
            self,
            GateKind::Const0 | GateKind::Const1 | GateKind::QConst(_)
        )
    }

    /// Gate function. `inputs` must already match the port signature.
    pub fn eval(&self, inputs: &[Level]) -> Level {
        let bit = |i: usize| inputs[i] != 0;
        let out = match self {
            GateKind::Not => !bit(0),
            GateKind::And2 | GateKind::And3 | GateKind::And4 => inputs.iter().all(|&v| v != 0),
            GateKind::Or2 | GateKind::Or3 | GateKind::Or4 => inputs.iter().any(|&v| v != 0),
            GateKind::Xor2 => bit(0) ^ bit(1),
            GateKind::Nand2 => !(bit(0) && bit(1)),
            GateKind::Nor2 => !(bit(0) || bit(1)),
            GateKind::AndN2 => !bit(0) && bit(1),
            GateKind::Const0 => false,
            GateKind::Const1 => true,
            GateKind::BMux2 => {
                if bit(0) {
                    bit(1)
                } else {
                    bit(2)
                }
            }
            GateKind::Dlc1 => inputs[0] < 1,
            GateKind::Dlc2 => inputs[0] < 2,
            GateKind::Dlc3 => inputs[0] < 3,
            GateKind::B2q => return 2 * inputs[0] + inputs[1],
            GateKind::QConst(level) => return level.value(),
            GateKind::QMux4 => return inputs[1 + inputs[0] as usize],
        };
        out as Level
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::QConst(level) => write!(f, "QCONST({level})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for GateKind {
    type Err = NetlistError;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::all()
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| NetlistError::UnknownGateKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetId(usize);

impl NetId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputPort {
    pub name: String,
    pub ty: SignalType,
    pub net: NetId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPort {
    pub name: String,
    pub ty: SignalType,
    pub net: Option<NetId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Driver {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Net {
    ty: SignalType,
    driver: Driver,
}

#[derive(Debug, Clone, Default)]
pub struct Netlist {
    name: String,
    inputs: Vec<InputPort>,
    outputs: Vec<OutputPort>,
    gates: Vec<Gate>,
    nets: Vec<Net>,
    order: OnceLock<Vec<usize>>,
}

impl Netlist {
    /// Declares the port interface. Each input port gets its own driven net.
    pub fn new<I, O, S, T>(inputs: I, outputs: O) -> Result<Self>
    where
        I: IntoIterator<Item = (S, SignalType)>,
        O: IntoIterator<Item = (T, SignalType)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut n = Netlist::default();
        let mut seen = HashSet::new();
        for (name, ty) in inputs {
            let name = name.into();
            if !seen.insert(name.clone()) {
                return Err(NetlistError::DuplicatePortName(name));
            }
            let net = NetId(n.nets.len());
            n.nets.push(Net {
                ty,
                driver: Driver::Input(n.inputs.len()),
            });
            n.inputs.push(InputPort { name, ty, net });
        }
        for (name, ty) in outputs {
            let name = name.into();
            if !seen.insert(name.clone()) {
                return Err(NetlistError::DuplicatePortName(name));
            }
            n.outputs.push(OutputPort {
                name,
                ty,
                net: None,
            });
        }
        Ok(n)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[InputPort] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[OutputPort] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn net_count(&self) -> usize {
        self.nets.len()
    }

    pub fn net_type(&self, net: NetId) -> Option<SignalType> {
        self.nets.get(net.0).map(|n| n.ty)
    }

    pub fn input_net(&self, name: &str) -> Option<NetId> {
        self.inputs.iter().find(|p| p.name == name).map(|p| p.net)
    }

    pub fn input_types(&self) -> Vec<SignalType> {
        self.inputs.iter().map(|p| p.ty).collect()
    }

    pub fn output_types(&self) -> Vec<SignalType> {
        self.outputs.iter().map(|p| p.ty).collect()
    }

    /// Appends a gate after checking arity and port types; returns its output net.
    pub fn add_gate(&mut self, kind: GateKind, inputs: &[NetId]) -> Result<NetId> {
        let expected = kind.input_types();
        if inputs.len() != expected.len() {
            return Err(NetlistError::ArityMismatch {
                kind,
                expected: expected.len(),
                got: inputs.len(),
            });
        }
        for (pin, (&net, &want)) in inputs.iter().zip(expected).enumerate() {
            let found = self.net_type(net).ok_or(NetlistError::UnknownNet(net.0))?;
            if found != want {
                return Err(NetlistError::TypeMismatch {
                    context: format!("{kind} input {pin}"),
                    expected: want,
                    found,
                });
            }
        }
        Ok(self.push_gate(kind, inputs.to_vec()))
    }

    fn push_gate(&mut self, kind: GateKind, inputs: Vec<NetId>) -> NetId {
        let output = NetId(self.nets.len());
        self.nets.push(Net {
            ty: kind.output_type(),
            driver: Driver::Gate(self.gates.len()),
        });
        self.gates.push(Gate {
            kind,
            inputs,
            output,
        });
        self.order = OnceLock::new();
        output
    }

    /// Drives the named output port from `net`.
    pub fn connect_output(&mut self, name: &str, net: NetId) -> Result<()> {
        let found = self.net_type(net).ok_or(NetlistError::UnknownNet(net.0))?;
        let port = self
            .outputs
            .iter_mut()
            .find(|p| p.name == name)
            .ok_or_else(|| NetlistError::UnknownPort(name.to_string()))?;
        if port.ty != found {
            return Err(NetlistError::TypeMismatch {
                context: format!("output `{name}`"),
                expected: port.ty,
                found,
            });
        }
        port.net = Some(net);
        self.order = OnceLock::new();
        Ok(())
    }

    /// Copies `sub`'s gates into `self`, binding its input ports (in
    /// declaration order) to `inputs`. Returns the nets that drive `sub`'s
    /// outputs, in declaration order.
    pub fn instantiate(&mut self, sub: &Netlist, inputs: &[NetId]) -> Result<Vec<NetId>> {
        let order = sub.topo_order()?;
        if inputs.len() != sub.inputs.len() {
            return Err(NetlistError::InstanceArity {
                expected: sub.inputs.len(),
                got: inputs.len(),
            });
        }
        let mut map: HashMap<NetId, NetId> = HashMap::new();
        for (port, &outer) in sub.inputs.iter().zip(inputs) {
            let found = self
                .net_type(outer)
                .ok_or(NetlistError::UnknownNet(outer.0))?;
            if found != port.ty {
                return Err(NetlistError::TypeMismatch {
                    context: format!("instance input `{}`", port.name),
                    expected: port.ty,
                    found,
                });
            }
            map.insert(port.net, outer);
        }
        for &g in order {
            let gate = &sub.gates[g];
            let ins: Vec<NetId> = gate.inputs.iter().map(|n| map[n]).collect();
            let out = self.add_gate(gate.kind, &ins)?;
            map.insert(gate.output, out);
        }
        sub.outputs
            .iter()
            .map(|p| {
                p.net
                    .map(|n| map[&n])
                    .ok_or_else(|| NetlistError::UndrivenOutput(p.name.clone()))
            })
            .collect()
    }

    /// Checks types, connectivity and acyclicity, caching a topological order.
    pub fn validate(&self) -> Result<()> {
        self.topo_order().map(|_| ())
    }

    fn topo_order(&self) -> Result<&[usize]> {
        if let Some(order) = self.order.get() {
            return Ok(order);
        }
        let order = self.compute_order()?;
        Ok(self.order.get_or_init(|| order))
    }

    fn compute_order(&self) -> Result<Vec<usize>> {
        for gate in &self.gates {
            let expected = gate.kind.input_types();
            if gate.inputs.len() != expected.len() {
                return Err(NetlistError::ArityMismatch {
                    kind: gate.kind,
                    expected: expected.len(),
                    got: gate.inputs.len(),
                });
            }
            for (pin, (&net, &want)) in gate.inputs.iter().zip(expected).enumerate() {
                let found = self.net_type(net).ok_or(NetlistError::UnknownNet(net.0))?;
                if found != want {
                    return Err(NetlistError::TypeMismatch {
                        context: format!("{} input {pin}", gate.kind),
                        expected: want,
                        found,
                    });
                }
            }
        }
        for port in &self.outputs {
            let net = port
                .net
                .ok_or_else(|| NetlistError::UndrivenOutput(port.name.clone()))?;
            let found = self.net_type(net).ok_or(NetlistError::UnknownNet(net.0))?;
            if found != port.ty {
                return Err(NetlistError::TypeMismatch {
                    context: format!("output `{}`", port.name),
                    expected: port.ty,
                    found,
                });
            }
        }

        // Kahn's algorithm over gates; an edge g -> h when h reads g's output.
        let mut pending: Vec<usize> = vec![0; self.gates.len()];
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (h, gate) in self.gates.iter().enumerate() {
            for net in &gate.inputs {
                if let Driver::Gate(g) = self.nets[net.0].driver {
                    pending[h] += 1;
                    readers[g].push(h);
                }
            }
        }
        let mut ready: Vec<usize> = (0..self.gates.len())
            .filter(|&g| pending[g] == 0)
            .rev()
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(g) = ready.pop() {
            order.push(g);
            for &h in readers[g].iter().rev() {
                pending[h] -= 1;
                if pending[h] == 0 {
                    ready.push(h);
                }
            }
        }
        if order.len() < self.gates.len() {
            return Err(NetlistError::CombinationalCycle(
                self.find_cycle_net(&pending),
            ));
        }
        Ok(order)
    }

    /// Walks backwards from a gate stuck in Kahn's algorithm until a gate repeats.
    fn find_cycle_net(&self, pending: &[usize]) -> NetId {
        let mut g = pending.iter().position(|&p| p > 0).expect("stuck gate");
        let mut visited = HashSet::new();
        loop {
            let gate = &self.gates[g];
            if !visited.insert(g) {
                return gate.output;
            }
            let next = gate
                .inputs
                .iter()
                .find_map(|net| match self.nets[net.0].driver {
                    Driver::Gate(h) if pending[h] > 0 => Some(h),
                    _ => None,
                });
            match next {
                Some(h) => g = h,
                None => return gate.output,
            }
        }
    }

    /// Positional evaluation: `levels[i]` drives input port `i`; the result
    /// lists output levels in port order.
    pub fn eval_vector(&self, levels: &[Level]) -> Result<Vec<Level>> {
        let order = self.topo_order()?;
        if levels.len() != self.inputs.len() {
            let missing = self
                .inputs
                .get(levels.len())
                .map(|p| p.name.clone())
                .unwrap_or_default();
            return Err(NetlistError::MissingAssignment(missing));
        }
        let mut values: Vec<Level> = vec![0; self.nets.len()];
        for (port, &level) in self.inputs.iter().zip(levels) {
            if level >= port.ty.radix() {
                return Err(NetlistError::LevelOutOfRange {
                    port: port.name.clone(),
                    level,
                    ty: port.ty,
                });
            }
            values[port.net.0] = level;
        }
        let mut scratch = Vec::with_capacity(5);
        for &g in order {
            let gate = &self.gates[g];
            scratch.clear();
            scratch.extend(gate.inputs.iter().map(|n| values[n.0]));
            values[gate.output.0] = gate.kind.eval(&scratch);
        }
        Ok(self
            .outputs
            .iter()
            .map(|p| values[p.net.expect("validated").0])
            .collect())
    }

    /// Evaluates with a named assignment. Unknown names are rejected.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<String, Level>,
    ) -> Result<BTreeMap<String, Level>> {
        if let Some(extra) = assignment
            .keys()
            .find(|k| !self.inputs.iter().any(|p| &p.name == *k))
        {
            return Err(NetlistError::UnknownPort(extra.clone()));
        }
        let levels = self
            .inputs
            .iter()
            .map(|p| {
                assignment
                    .get(&p.name)
                    .copied()
                    .ok_or_else(|| NetlistError::MissingAssignment(p.name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let out = self.eval_vector(&levels)?;
        Ok(self
            .outputs
            .iter()
            .map(|p| p.name.clone())
            .zip(out)
            .collect())
    }

    /// Product of the input port radices.
    pub fn input_space(&self) -> u64 {
        self.inputs.iter().map(|p| p.ty.radix() as u64).product()
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        self.validate()?;
        let space = self.input_space();
        if space > MAX_STATE_SPACE {
            return Err(NetlistError::StateSpaceTooLarge(space));
        }
        let rows = enumerate_inputs(&self.input_types())
            .map(|inputs| {
                let outputs = self.eval_vector(&inputs)?;
                Ok(TruthRow { inputs, outputs })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruthTable {
            inputs: self.inputs.iter().map(|p| (p.name.clone(), p.ty)).collect(),
            outputs: self
                .outputs
                .iter()
                .map(|p| (p.name.clone(), p.ty))
                .collect(),
            rows,
        })
    }

    /// Gate count, depth of net and transistor estimate.
    pub fn metrics(&self, costs: &CostTable) -> Result<Metrics> {
        let order = self.topo_order()?;
        let mut gate_count = 0;
        let mut transistors = 0u64;
        let mut histogram = BTreeMap::new();
        // Depth per net; `None` when no input port reaches the net.
        let mut depth: Vec<Option<usize>> = vec![None; self.nets.len()];
        for port in &self.inputs {
            depth[port.net.0] = Some(0);
        }
        for &g in order {
            let gate = &self.gates[g];
            let reach = gate.inputs.iter().filter_map(|n| depth[n.0]).max();
            if gate.kind.is_constant() {
                continue;
            }
            gate_count += 1;
            *histogram.entry(gate.kind.name().to_string()).or_insert(0) += 1;
            transistors += costs
                .cost(gate.kind)
                .ok_or_else(|| NetlistError::MissingCostEntry(gate.kind.name().to_string()))?
                as u64;
            depth[gate.output.0] = reach.map(|d| d + 1);
        }
        let depth = self
            .outputs
            .iter()
            .filter_map(|p| depth[p.net.expect("validated").0])
            .max()
            .unwrap_or(0);
        Ok(Metrics {
            gate_count,
            depth,
            transistor_estimate: transistors,
            gate_histogram: histogram,
            paper_reference: None,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = NetlistDoc {
            name: (!self.name.is_empty()).then(|| self.name.clone()),
            inputs: self
                .inputs
                .iter()
                .map(|p| PortDoc {
                    name: p.name.clone(),
                    ty: p.ty,
                })
                .collect(),
            outputs: self
                .outputs
                .iter()
                .map(|p| OutputDoc {
                    name: p.name.clone(),
                    ty: p.ty,
                    net: p.net.map(|n| n.0),
                })
                .collect(),
            gates: self
                .gates
                .iter()
                .enumerate()
                .map(|(id, g)| GateDoc {
                    id,
                    kind: g.kind.to_string(),
                    inputs: g.inputs.iter().map(|n| n.0).collect(),
                    output: g.output.0,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("netlist documents always serialize")
    }

    /// Parses the JSON document form. Input port `i` drives net `i`; gate
    /// outputs may use any other ids, and gates may appear in any order.
    /// The result is validated before it is returned.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetlistDoc =
            serde_json::from_str(text).map_err(|e| NetlistError::Json(e.to_string()))?;
        let mut n = Netlist::new(
            doc.inputs.iter().map(|p| (p.name.clone(), p.ty)),
            doc.outputs.iter().map(|p| (p.name.clone(), p.ty)),
        )?;
        n.name = doc.name.unwrap_or_default();

        // File net ids -> internal ids. Inputs keep their positions.
        let mut ids: HashMap<usize, NetId> = (0..n.inputs.len()).map(|i| (i, NetId(i))).collect();
        let mut gate_ids = HashSet::new();
        let mut kinds = Vec::with_capacity(doc.gates.len());
        for g in &doc.gates {
            if !gate_ids.insert(g.id) {
                return Err(NetlistError::DuplicateGateId(g.id));
            }
            let kind: GateKind = g.kind.parse()?;
            if ids.contains_key(&g.output) {
                return Err(NetlistError::MultipleDrivers(g.output));
            }
            let internal = NetId(n.nets.len() + kinds.len());
            ids.insert(g.output, internal);
            kinds.push(kind);
        }
        for (g, kind) in doc.gates.iter().zip(kinds) {
            let inputs = g
                .inputs
                .iter()
                .map(|i| ids.get(i).copied().ok_or(NetlistError::UnknownNet(*i)))
                .collect::<Result<Vec<_>>>()?;
            n.push_gate(kind, inputs);
        }
        for (port, od) in n.outputs.iter_mut().zip(&doc.outputs) {
            port.net = match od.net {
                Some(i) => Some(ids.get(&i).copied().ok_or(NetlistError::UnknownNet(i))?),
                None => None,
            };
        }
        n.validate()?;
        Ok(n)
    }
}

/// All input vectors for ports of the given types, first port slowest-varying.
pub fn enumerate_inputs(types: &[SignalType]) -> impl Iterator<Item = Vec<Level>> + '_ {
    let total: u64 = types.iter().map(|t| t.radix() as u64).product();
    (0..total).map(move |mut index| {
        let mut levels = vec![0; types.len()];
        for (slot, ty) in levels.iter_mut().zip(types).rev() {
            let radix = ty.radix() as u64;
            *slot = (index % radix) as Level;
            index /= radix;
        }
        levels
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthRow {
    pub inputs: Vec<Level>,
    pub outputs: Vec<Level>,
}

/// Exhaustive input/output listing in lexicographic input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub inputs: Vec<(String, SignalType)>,
    pub outputs: Vec<(String, SignalType)>,
    pub rows: Vec<TruthRow>,
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .inputs
            .iter()
            .chain(&self.outputs)
            .map(|(n, _)| n.as_str())
            .collect();
        let split = self.inputs.len();
        writeln!(
            f,
            "{} | {}",
            names[..split].join(" "),
            names[split..].join(" ")
        )?;
        for row in &self.rows {
            let cells = |levels: &[Level], names: &[&str]| {
                levels
                    .iter()
                    .zip(names)
                    .map(|(l, n)| format!("{l:>w$}", w = n.len()))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            writeln!(
                f,
                "{} | {}",
                cells(&row.inputs, &names[..split]),
                cells(&row.outputs, &names[split..])
            )?;
        }
        Ok(())
    }
}

/// Transistor cost per gate kind, keyed by [`GateKind::name`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostTable(BTreeMap<String, u32>);

impl Default for CostTable {
    /// Static-CMOS counts: complementary pairs per input, plus an output
    /// inverter for AND/OR, 10 for a transmission-style XOR.
    fn default() -> Self {
        let entries = [
            ("NOT", 2),
            ("NAND2", 4),
            ("NOR2", 4),
            ("AND2", 6),
            ("OR2", 6),
            ("AND3", 8),
            ("OR3", 8),
            ("AND4", 10),
            ("OR4", 10),
            ("XOR2", 10),
            ("ANDN2", 6),
            ("BMUX2", 6),
            ("DLC1", 2),
            ("DLC2", 2),
            ("DLC3", 2),
            ("B2Q", 8),
            ("QMUX4", 24),
        ];
        CostTable(
            entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }
}

impl CostTable {
    pub fn empty() -> Self {
        CostTable(BTreeMap::new())
    }

    pub fn cost(&self, kind: GateKind) -> Option<u32> {
        self.0.get(kind.name()).copied()
    }

    pub fn set(&mut self, kind: GateKind, transistors: u32) {
        self.0.insert(kind.name().to_string(), transistors);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Parses a JSON object mapping kind names to counts.
    pub fn from_json(text: &str) -> Result<Self> {
        let table: CostTable =
            serde_json::from_str(text).map_err(|e| NetlistError::Json(e.to_string()))?;
        let known: HashSet<&str> = GateKind::all().iter().map(|k| k.name()).collect();
        if let Some(bad) = table.0.keys().find(|k| !known.contains(k.as_str())) {
            return Err(NetlistError::UnknownGateKind(bad.clone()));
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cost tables always serialize")
    }
}

/// A transistor count reported in the literature for a circuit, kept only for
/// display next to the computed estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperReference {
    pub transistors: u32,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    /// Logic gates, excluding constant sources.
    pub gate_count: usize,
    /// Gates on the longest input-port to output-port path.
    pub depth: usize,
    pub transistor_estimate: u64,
    pub gate_histogram: BTreeMap<String, usize>,
    pub paper_reference: Option<PaperReference>,
}

#[derive(Serialize, Deserialize)]
struct NetlistDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    inputs: Vec<PortDoc>,
    outputs: Vec<OutputDoc>,
    gates: Vec<GateDoc>,
}

#[derive(Serialize, Deserialize)]
struct PortDoc {
    name: String,
    #[serde(rename = "type")]
    ty: SignalType,
}

#[derive(Serialize, Deserialize)]
struct OutputDoc {
    name: String,
    #[serde(rename = "type")]
    ty: SignalType,
    net: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct GateDoc {
    id: usize,
    kind: String,
    inputs: Vec<usize>,
    output: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_netlist() -> Netlist {
        let mut n = Netlist::new([("a", B), ("b", B)], [("y", B)]).unwrap();
        let a = n.input_net("a").unwrap();
        let b = n.input_net("b").unwrap();
        let y = n.add_gate(GateKind::Xor2, &[a, b]).unwrap();
        n.connect_output("y", y).unwrap();
        n
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Netlist::new([("x", Q), ("x", Q)], Vec::<(&str, _)>::new()).unwrap_err(),
            NetlistError::DuplicatePortName("x".into())
        );
        let n = Netlist::new(Vec::<(&str, _)>::new(), [("k", Q)]).unwrap();
        assert!(n.inputs().is_empty());

        let mut n = Netlist::new([("q", Q), ("b", B)], [("y", B)]).unwrap();
        let q = n.input_net("q").unwrap();
        let b = n.input_net("b").unwrap();
        assert!(matches!(
            n.add_gate(GateKind::Xor2, &[q, b]),
            Err(NetlistError::TypeMismatch { .. })
        ));
        assert!(matches!(
            n.add_gate(GateKind::Xor2, &[b]),
            Err(NetlistError::ArityMismatch {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert_eq!(
            n.add_gate(GateKind::Not, &[NetId(42)]),
            Err(NetlistError::UnknownNet(42))
        );
        let dlc = n.add_gate(GateKind::Dlc2, &[q]).unwrap();
        assert_eq!(n.net_type(dlc), Some(B));
    }

    #[test]
    fn undriven_output() {
        let n = Netlist::new([("a", B)], [("y", B)]).unwrap();
        assert_eq!(n.validate(), Err(NetlistError::UndrivenOutput("y".into())));
    }

    #[test]
    fn cycle_is_reported() {
        // Gate 0 reads net 2 (gate 1's output) and gate 1 reads net 1.
        let text = r#"{"inputs":[{"name":"a","type":"bin"}],
            "outputs":[{"name":"y","type":"bin","net":2}],
            "gates":[{"id":0,"kind":"AND2","inputs":[0,2],"output":1},
                     {"id":1,"kind":"NOT","inputs":[1],"output":2}]}"#;
        match Netlist::from_json(text) {
            Err(NetlistError::CombinationalCycle(net)) => assert!(net.0 == 1 || net.0 == 2),
            other => panic!("expected cycle, got {other:?}"),
        }

        let self_loop = r#"{"inputs":[],"outputs":[{"name":"y","type":"bin","net":0}],
            "gates":[{"id":0,"kind":"NOT","inputs":[0],"output":0}]}"#;
        assert!(matches!(
            Netlist::from_json(self_loop),
            Err(NetlistError::CombinationalCycle(_))
        ));
    }

    #[test]
    fn evaluate_named() {
        let n = xor_netlist();
        let mut asg = BTreeMap::new();
        asg.insert("a".to_string(), 1);
        assert_eq!(
            n.evaluate(&asg),
            Err(NetlistError::MissingAssignment("b".into()))
        );
        asg.insert("b".to_string(), 2);
        assert!(matches!(
            n.evaluate(&asg),
            Err(NetlistError::LevelOutOfRange { level: 2, .. })
        ));
        asg.insert("b".to_string(), 0);
        assert_eq!(n.evaluate(&asg).unwrap()["y"], 1);
        asg.insert("c".to_string(), 0);
        assert_eq!(n.evaluate(&asg), Err(NetlistError::UnknownPort("c".into())));
    }

    #[test]
    fn gate_semantics_exhaustive() {
        // Independent reference for each kind, written from its documented behaviour.
        fn reference(kind: GateKind, v: &[u8]) -> u8 {
            let ones = v.iter().filter(|&&x| x == 1).count();
            match kind {
                GateKind::Not => 1 - v[0],
                GateKind::And2 | GateKind::And3 | GateKind::And4 => (ones == v.len()) as u8,
                GateKind::Or2 | GateKind::Or3 | GateKind::Or4 => (ones > 0) as u8,
                GateKind::Xor2 => (ones % 2) as u8,
                GateKind::Nand2 => (ones != 2) as u8,
                GateKind::Nor2 => (ones == 0) as u8,
                GateKind::AndN2 => (v[0] == 0 && v[1] == 1) as u8,
                GateKind::Const0 => 0,
                GateKind::Const1 => 1,
                GateKind::BMux2 => [v[2], v[1]][v[0] as usize],
                GateKind::Dlc1 => [1, 0, 0, 0][v[0] as usize],
                GateKind::Dlc2 => [1, 1, 0, 0][v[0] as usize],
                GateKind::Dlc3 => [1, 1, 1, 0][v[0] as usize],
                GateKind::B2q => v[0] * 2 + v[1],
                GateKind::QConst(l) => l.value(),
                GateKind::QMux4 => v[1..][v[0] as usize],
            }
        }
        for kind in GateKind::all() {
            for v in enumerate_inputs(kind.input_types()) {
                assert_eq!(kind.eval(&v), reference(kind, &v), "{kind} on {v:?}");
            }
        }
    }

    #[test]
    fn dlc_matches_down_literal_table() {
        // Rows: input level; columns DLC1..3 with physical output 3 mapped to 1.
        let table = [[3, 3, 3], [0, 3, 3], [0, 0, 3], [0, 0, 0]];
        for (level, row) in table.iter().enumerate() {
            for (kind, &out) in [GateKind::Dlc1, GateKind::Dlc2, GateKind::Dlc3]
                .iter()
                .zip(row)
            {
                assert_eq!(kind.eval(&[level as u8]), (out == 3) as u8);
            }
        }
    }

    #[test]
    fn kind_names_parse() {
        for kind in GateKind::all() {
            assert_eq!(kind.to_string().parse::<GateKind>().unwrap(), kind);
        }
        assert!("XOR3".parse::<GateKind>().is_err());
    }

    #[test]
    fn enumerate_order() {
        let rows: Vec<_> = enumerate_inputs(&[B, Q]).collect();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0], vec![0, 0]);
        assert_eq!(rows[1], vec![0, 1]);
        assert_eq!(rows[4], vec![1, 0]);
        assert_eq!(enumerate_inputs(&[]).count(), 1);
    }

    #[test]
    fn state_space_limit() {
        let ports: Vec<(String, SignalType)> = (0..9).map(|i| (format!("q{i}"), Q)).collect();
        let mut n = Netlist::new(ports, [("y", Q)]).unwrap();
        let q0 = n.input_net("q0").unwrap();
        n.connect_output("y", q0).unwrap();
        assert_eq!(
            n.truth_table(),
            Err(NetlistError::StateSpaceTooLarge(1 << 18))
        );
    }

    #[test]
    fn metrics_and_costs() {
        let n = xor_netlist();
        let m = n.metrics(&CostTable::default()).unwrap();
        assert_eq!((m.gate_count, m.depth, m.transistor_estimate), (1, 1, 10));
        assert_eq!(
            n.metrics(&CostTable::empty()),
            Err(NetlistError::MissingCostEntry("XOR2".into()))
        );
    }

    #[test]
    fn constant_only_netlist() {
        let mut n = Netlist::new(Vec::<(&str, _)>::new(), [("k", Q)]).unwrap();
        let k = n.add_gate(GateKind::QConst(Quat::TWO), &[]).unwrap();
        n.connect_output("k", k).unwrap();
        let tt = n.truth_table().unwrap();
        assert_eq!(tt.rows.len(), 1);
        assert_eq!(tt.rows[0].outputs, vec![2]);
        let m = n.metrics(&CostTable::empty()).unwrap();
        assert_eq!((m.gate_count, m.depth), (0, 0));
    }

    #[test]
    fn cost_table_json() {
        let t = CostTable::default();
        assert_eq!(CostTable::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(
            CostTable::from_json(r#"{"XOR9": 3}"#),
            Err(NetlistError::UnknownGateKind("XOR9".into()))
        );
    }

    #[test]
    fn json_rejects_bad_documents() {
        let dup_driver = r#"{"inputs":[{"name":"a","type":"bin"}],
            "outputs":[{"name":"y","type":"bin","net":0}],
            "gates":[{"id":0,"kind":"NOT","inputs":[0],"output":0}]}"#;
        assert_eq!(
            Netlist::from_json(dup_driver).unwrap_err(),
            NetlistError::MultipleDrivers(0)
        );
        let unknown = r#"{"inputs":[],"outputs":[{"name":"y","type":"bin","net":7}],"gates":[]}"#;
        assert_eq!(
            Netlist::from_json(unknown).unwrap_err(),
            NetlistError::UnknownNet(7)
        );
        assert!(matches!(
            Netlist::from_json("{"),
            Err(NetlistError::Json(_))
        ));
    }
}
