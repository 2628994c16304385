//! Exhaustive stimulus sweeps and trace export.
//!
//! Steps are purely combinational: each step is evaluated on its own and
//! recorded at `index * step_duration`. Traces export to CSV (levels or
//! voltages) and VCD, where quaternary signals become 2-bit vectors in the
//! natural encoding.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{enumerate_inputs, Level, Netlist, NetlistError, SignalType, MAX_STATE_SPACE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("input state space of {0} combinations exceeds the limit of {MAX_STATE_SPACE}")]
    StateSpaceTooLarge(u64),
    #[error("stimulus ports do not match the netlist inputs: {0}")]
    PortMismatch(String),
    #[error("invalid stimulus: {0}")]
    BadStimulus(String),
    #[error("invalid voltage map: {0}")]
    BadVoltageMap(String),
    #[error("csv line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

pub type Signal = (String, SignalType);

/// Input vectors applied one per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    ports: Vec<Signal>,
    steps: Vec<Vec<Level>>,
    step_duration: u64,
}

impl Stimulus {
    /// Every step must assign every port a level valid for its type.
    pub fn new(ports: Vec<Signal>, steps: Vec<Vec<Level>>) -> Result<Self, SimError> {
        for (i, step) in steps.iter().enumerate() {
            if step.len() != ports.len() {
                return Err(SimError::BadStimulus(format!(
                    "step {i} assigns {} of {} ports",
                    step.len(),
                    ports.len()
                )));
            }
            if let Some(((name, ty), level)) = ports
                .iter()
                .zip(step)
                .find(|((_, ty), &level)| level >= ty.radix())
            {
                return Err(SimError::BadStimulus(format!(
                    "step {i}: level {level} out of range for {ty} port `{name}`"
                )));
            }
        }
        Ok(Stimulus {
            ports,
            steps,
            step_duration: 1,
        })
    }

    pub fn with_step_duration(mut self, step_duration: u64) -> Self {
        self.step_duration = step_duration.max(1);
        self
    }

    pub fn ports(&self) -> &[Signal] {
        &self.ports
    }

    pub fn steps(&self) -> &[Vec<Level>] {
        &self.steps
    }

    pub fn step_duration(&self) -> u64 {
        self.step_duration
    }
}

/// All input combinations in lexicographic order, first port slowest.
pub fn sweep_all(n: &Netlist) -> Result<Stimulus, SimError> {
    let space = n.input_space();
    if space > MAX_STATE_SPACE {
        return Err(SimError::StateSpaceTooLarge(space));
    }
    let ports = port_signals(n);
    let types = n.input_types();
    let steps = enumerate_inputs(&types).collect();
    Stimulus::new(ports, steps)
}

fn port_signals(n: &Netlist) -> Vec<Signal> {
    n.inputs().iter().map(|p| (p.name.clone(), p.ty)).collect()
}

/// Recorded levels of every input and output port, one row per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub name: String,
    pub signals: Vec<Signal>,
    pub rows: Vec<Vec<Level>>,
    pub step_duration: u64,
}

pub fn run(n: &Netlist, s: &Stimulus) -> Result<Trace, SimError> {
    let ports = port_signals(n);
    if ports != s.ports {
        return Err(SimError::PortMismatch(format!(
            "netlist has [{}], stimulus has [{}]",
            describe(&ports),
            describe(&s.ports)
        )));
    }
    let mut signals = ports;
    signals.extend(n.outputs().iter().map(|p| (p.name.clone(), p.ty)));
    let rows = s
        .steps
        .iter()
        .map(|step| {
            let mut row = step.clone();
            row.extend(n.eval_vector(step)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let name = if n.name().is_empty() {
        "top".to_string()
    } else {
        n.name().to_string()
    };
    Ok(Trace {
        name,
        signals,
        rows,
        step_duration: s.step_duration,
    })
}

fn describe(signals: &[Signal]) -> String {
    signals
        .iter()
        .map(|(n, t)| format!("{n}:{t}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn csv_header(t: &Trace) -> String {
    let mut out = String::from("time");
    for (name, _) in &t.signals {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    out
}

/// `time,<signals...>` followed by one row of decimal levels per step.
pub fn export_csv(t: &Trace) -> String {
    let mut out = csv_header(t);
    for (i, row) in t.rows.iter().enumerate() {
        let _ = write!(out, "{}", i as u64 * t.step_duration);
        for level in row {
            let _ = write!(out, ",{level}");
        }
        out.push('\n');
    }
    out
}

/// Reads [`export_csv`] output back. Signal types are not part of the CSV
/// and must be supplied; the step duration is taken from the time column.
pub fn parse_csv(text: &str, types: &[SignalType]) -> Result<Trace, SimError> {
    let err = |line: usize, msg: String| SimError::Csv { line, msg };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("time") {
        return Err(err(1, "first column must be `time`".into()));
    }
    let names: Vec<String> = cols.map(str::to_string).collect();
    if names.len() != types.len() {
        return Err(err(
            1,
            format!(
                "{} signals in header, {} types given",
                names.len(),
                types.len()
            ),
        ));
    }
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let mut fields = line.split(',');
        let time: u64 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| err(lineno, "bad time".into()))?;
        let row = fields
            .map(|f| f.parse::<Level>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(lineno, e.to_string()))?;
        if row.len() != types.len() {
            return Err(err(lineno, format!("expected {} values", types.len())));
        }
        if let Some((l, ty)) = row.iter().zip(types).find(|(l, ty)| **l >= ty.radix()) {
            return Err(err(lineno, format!("level {l} out of range for {ty}")));
        }
        times.push(time);
        rows.push(row);
    }
    let step_duration = times.get(1).copied().unwrap_or(1).max(1);
    if let Some(i) = (0..times.len()).find(|&i| times[i] != i as u64 * step_duration) {
        return Err(err(i + 2, "time column is not evenly spaced from 0".into()));
    }
    Ok(Trace {
        name: "top".to_string(),
        signals: names.into_iter().zip(types.iter().copied()).collect(),
        rows,
        step_duration,
    })
}

/// VCD identifier for the `i`-th variable: printable ASCII `!`..`~`, base 94.
fn vcd_id(mut i: usize) -> String {
    let mut id = String::new();
    loop {
        id.push((b'!' + (i % 94) as u8) as char);
        i /= 94;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    id
}

fn vcd_value(ty: SignalType, level: Level, id: &str) -> String {
    match ty {
        SignalType::Binary => format!("{level}{id}"),
        SignalType::Quaternary => format!("b{}{} {id}", level >> 1, level & 1),
    }
}

/// Value change dump with a 1 ns timescale. Only changed signals are
/// written after the initial `$dumpvars` block at time 0.
pub fn export_vcd(t: &Trace) -> String {
    let scope: String = t
        .name
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    let ids: Vec<String> = (0..t.signals.len()).map(vcd_id).collect();
    let mut out = String::new();
    out.push_str("$version mvq $end\n");
    out.push_str("$timescale 1ns $end\n");
    let _ = writeln!(out, "$scope module {scope} $end");
    for ((name, ty), id) in t.signals.iter().zip(&ids) {
        let width = match ty {
            SignalType::Binary => 1,
            SignalType::Quaternary => 2,
        };
        let _ = writeln!(out, "$var wire {width} {id} {name} $end");
    }
    out.push_str("$upscope $end\n");
    out.push_str("$enddefinitions $end\n");

    let mut previous: Option<&Vec<Level>> = None;
    for (i, row) in t.rows.iter().enumerate() {
        let time = i as u64 * t.step_duration;
        match previous {
            None => {
                let _ = writeln!(out, "#{time}");
                out.push_str("$dumpvars\n");
                for (((_, ty), id), &level) in t.signals.iter().zip(&ids).zip(row) {
                    out.push_str(&vcd_value(*ty, level, id));
                    out.push('\n');
                }
                out.push_str("$end\n");
            }
            Some(prev) => {
                let changes: Vec<String> = t
                    .signals
                    .iter()
                    .zip(&ids)
                    .zip(row.iter().zip(prev))
                    .filter(|(_, (now, before))| now != before)
                    .map(|(((_, ty), id), (&now, _))| vcd_value(*ty, now, id))
                    .collect();
                if !changes.is_empty() {
                    let _ = writeln!(out, "#{time}");
                    for c in changes {
                        out.push_str(&c);
                        out.push('\n');
                    }
                }
            }
        }
        previous = Some(row);
    }
    out
}

/// What [`lint_vcd`] found in a well-formed dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcdSummary {
    /// `(id, width, name)` in declaration order.
    pub vars: Vec<(String, usize, String)>,
    pub timestamps: Vec<u64>,
    pub value_changes: usize,
}

/// Structural check of a VCD document: balanced scopes, every value change
/// refers to a declared id with a value of the declared width, timestamps
/// strictly increase, and no value appears before the first timestamp.
pub fn lint_vcd(text: &str) -> Result<VcdSummary, String> {
    let mut tokens = text.split_whitespace().peekable();
    let mut vars = Vec::new();
    let mut widths: HashMap<String, usize> = HashMap::new();
    let mut depth = 0usize;
    let mut max_depth = 0usize;

    // Declaration section.
    loop {
        let tok = tokens
            .next()
            .ok_or("unexpected end of file before $enddefinitions")?;
        let body: Vec<&str> = tokens.by_ref().take_while(|t| *t != "$end").collect();
        match tok {
            "$scope" => {
                if body.len() != 2 {
                    return Err(format!("malformed $scope: {body:?}"));
                }
                depth += 1;
                max_depth = max_depth.max(depth);
            }
            "$upscope" => {
                depth = depth.checked_sub(1).ok_or("$upscope without $scope")?;
            }
            "$var" => {
                if depth == 0 {
                    return Err("$var outside any scope".into());
                }
                if body.len() < 4 {
                    return Err(format!("malformed $var: {body:?}"));
                }
                let width: usize = body[1]
                    .parse()
                    .map_err(|_| format!("bad width `{}`", body[1]))?;
                let id = body[2].to_string();
                if widths.insert(id.clone(), width).is_some() {
                    return Err(format!("id `{id}` declared twice"));
                }
                vars.push((id, width, body[3].to_string()));
            }
            "$enddefinitions" => break,
            "$version" | "$timescale" | "$date" | "$comment" => {}
            other => return Err(format!("unexpected `{other}` in header")),
        }
    }
    if depth != 0 {
        return Err("unbalanced $scope/$upscope".into());
    }
    if max_depth == 0 {
        return Err("no $scope declared".into());
    }

    let mut timestamps: Vec<u64> = Vec::new();
    let mut value_changes = 0;
    let mut seen_ids = HashSet::new();
    while let Some(tok) = tokens.next() {
        if let Some(t) = tok.strip_prefix('#') {
            let t: u64 = t.parse().map_err(|_| format!("bad timestamp `{tok}`"))?;
            if timestamps.last().is_some_and(|&last| t <= last) {
                return Err(format!("timestamp #{t} is not increasing"));
            }
            timestamps.push(t);
            continue;
        }
        if matches!(
            tok,
            "$dumpvars" | "$end" | "$dumpall" | "$dumpon" | "$dumpoff"
        ) {
            continue;
        }
        if timestamps.is_empty() {
            return Err(format!("value change `{tok}` before the first timestamp"));
        }
        let (bits, id) = if let Some(bits) = tok.strip_prefix('b') {
            let id = tokens.next().ok_or("vector value without id")?;
            (bits.to_string(), id.to_string())
        } else {
            let mut chars = tok.chars();
            let v = chars.next().expect("non-empty token");
            (v.to_string(), chars.as_str().to_string())
        };
        let width = *widths
            .get(&id)
            .ok_or_else(|| format!("value change for undeclared id `{id}`"))?;
        if bits.len() != width || !bits.chars().all(|c| matches!(c, '0' | '1' | 'x' | 'z')) {
            return Err(format!("value `{bits}` does not fit {width}-bit id `{id}`"));
        }
        seen_ids.insert(id);
        value_changes += 1;
    }
    Ok(VcdSummary {
        vars,
        timestamps,
        value_changes,
    })
}

/// Voltage assigned to each logic level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoltageMap {
    pub quaternary: [f64; 4],
    pub binary: [f64; 2],
}

impl Default for VoltageMap {
    /// Evenly spaced quaternary levels on a 3.3 V swing.
    fn default() -> Self {
        VoltageMap {
            quaternary: [0.0, 1.1, 2.2, 3.3],
            binary: [0.0, 3.3],
        }
    }
}

impl VoltageMap {
    pub fn new(quaternary: [f64; 4], binary: [f64; 2]) -> Result<Self, SimError> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&quaternary) || !increasing(&binary) {
            return Err(SimError::BadVoltageMap(
                "voltages must strictly increase with level".into(),
            ));
        }
        Ok(VoltageMap { quaternary, binary })
    }

    /// Parses `{"quaternary": [..4], "binary": [..2]}`.
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let raw: VoltageMap =
            serde_json::from_str(text).map_err(|e| SimError::BadVoltageMap(e.to_string()))?;
        VoltageMap::new(raw.quaternary, raw.binary)
    }

    pub fn voltage(&self, ty: SignalType, level: Level) -> f64 {
        match ty {
            SignalType::Binary => self.binary[level as usize],
            SignalType::Quaternary => self.quaternary[level as usize],
        }
    }
}

/// [`export_csv`] with every level replaced by its voltage (one decimal).
pub fn voltage_view(t: &Trace, vmap: &VoltageMap) -> String {
    let mut out = csv_header(t);
    for (i, row) in t.rows.iter().enumerate() {
        let _ = write!(out, "{}", i as u64 * t.step_duration);
        for ((_, ty), &level) in t.signals.iter().zip(row) {
            let _ = write!(out, ",{:.1}", vmap.voltage(*ty, level));
        }
        out.push('\n');
    }
    out
}
