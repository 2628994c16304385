//! Single-output subset of the Berkeley PLA format.
//!
//! ```text
//! .i 4
//! .o 1
//! .ilb x1 x2 y1 y2
//! -1-0 1
//! -0-1 1
//! .e
//! ```
//!
//! Input columns may use `-` (expanded to every matching row); the output
//! column is `0`, `1` or `-` (don't care). Rows not listed are off.

use thiserror::Error;

use super::{Tri, TruthTableSpec, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unsupported: {msg}")]
    UnsupportedFeature { line: usize, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> PlaError {
    PlaError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_pla(text: &str) -> Result<TruthTableSpec, PlaError> {
    let mut n_inputs: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut outputs: Vec<Option<Tri>> = Vec::new();
    let mut seen_rows = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let head = fields.next().expect("non-empty line");
        if let Some(directive) = head.strip_prefix('.') {
            let args: Vec<&str> = fields.collect();
            match directive {
                "i" => {
                    if seen_rows || n_inputs.is_some() {
                        return Err(parse_err(line, "`.i` must come once, before any row"));
                    }
                    let n: usize = args
                        .first()
                        .and_then(|a| a.parse().ok())
                        .ok_or_else(|| parse_err(line, "`.i` needs an integer"))?;
                    if n == 0 || n > MAX_VARS {
                        return Err(PlaError::UnsupportedFeature {
                            line,
                            msg: format!("{n} inputs (supported: 1..={MAX_VARS})"),
                        });
                    }
                    n_inputs = Some(n);
                    outputs = vec![None; 1 << n];
                }
                "o" => {
                    let n: usize = args
                        .first()
                        .and_then(|a| a.parse().ok())
                        .ok_or_else(|| parse_err(line, "`.o` needs an integer"))?;
                    if n != 1 {
                        return Err(PlaError::UnsupportedFeature {
                            line,
                            msg: format!("{n} outputs (only single-output files are supported)"),
                        });
                    }
                }
                "ilb" => {
                    let n = n_inputs.ok_or_else(|| parse_err(line, "`.ilb` before `.i`"))?;
                    if args.len() != n {
                        return Err(parse_err(
                            line,
                            format!("`.ilb` lists {} names for {n} inputs", args.len()),
                        ));
                    }
                    names = Some(args.iter().map(|s| s.to_string()).collect());
                }
                "ob" | "p" => {}
                "type" => {
                    if !matches!(args.first(), Some(&"f") | Some(&"fd")) {
                        return Err(PlaError::UnsupportedFeature {
                            line,
                            msg: format!("`.type {}`", args.join(" ")),
                        });
                    }
                }
                "e" | "end" => break,
                other => {
                    return Err(PlaError::UnsupportedFeature {
                        line,
                        msg: format!("directive `.{other}`"),
                    })
                }
            }
            continue;
        }

        let n = n_inputs.ok_or_else(|| parse_err(line, "row before `.i`"))?;
        let out = fields
            .next()
            .ok_or_else(|| parse_err(line, "row has no output column"))?;
        if fields.next().is_some() {
            return Err(parse_err(line, "row has more than two columns"));
        }
        if head.chars().count() != n {
            return Err(parse_err(
                line,
                format!("input column has {} characters, expected {n}", head.len()),
            ));
        }
        let value = match out {
            "0" => Tri::Off,
            "1" => Tri::On,
            "-" | "~" => Tri::DontCare,
            other => return Err(parse_err(line, format!("bad output value `{other}`"))),
        };
        let mut rows: Vec<u32> = vec![0];
        for c in head.chars() {
            rows = match c {
                '0' => rows.into_iter().map(|r| r << 1).collect(),
                '1' => rows.into_iter().map(|r| (r << 1) | 1).collect(),
                '-' => rows
                    .into_iter()
                    .flat_map(|r| [r << 1, (r << 1) | 1])
                    .collect(),
                other => return Err(parse_err(line, format!("bad input character `{other}`"))),
            };
        }
        for r in rows {
            let slot = &mut outputs[r as usize];
            // Explicit 0/1 entries take precedence over don't-cares.
            match (*slot, value) {
                (Some(Tri::On), Tri::Off) | (Some(Tri::Off), Tri::On) => {
                    return Err(parse_err(line, format!("row {r} given conflicting values")))
                }
                (Some(_), Tri::DontCare) => {}
                _ => *slot = Some(value),
            }
        }
        seen_rows = true;
    }

    let n = n_inputs.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `.i`"))?;
    let names = names.unwrap_or_else(|| TruthTableSpec::default_names(n));
    let outputs = outputs.into_iter().map(|o| o.unwrap_or(Tri::Off)).collect();
    Ok(TruthTableSpec::new(names, outputs).expect("sizes checked while parsing"))
}

/// Writes every row explicitly, so parsing the output reproduces `spec`.
pub fn write_pla(spec: &TruthTableSpec) -> String {
    let n = spec.n_vars();
    let mut out = format!(".i {n}\n.o 1\n.ilb {}\n", spec.names().join(" "));
    for (m, value) in spec.outputs().iter().enumerate() {
        let bits: String = (0..n)
            .map(|v| {
                if (m >> (n - 1 - v)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        let v = match value {
            Tri::Off => '0',
            Tri::On => '1',
            Tri::DontCare => '-',
        };
        out.push_str(&format!("{bits} {v}\n"));
    }
    out.push_str(".e\n");
    out
}
