//! Acceptance suite: one check per acceptance criterion, each printing a
//! single PASS/FAIL line. Run with
//!
//! ```text
//! cargo test -p mvq-cli --test acceptance -- --nocapture
//! ```
//!
//! Reference values are computed here from first principles (integer and
//! polynomial arithmetic, brute-force search) rather than taken from the
//! library under test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use mvq_core::arith::{self, Quat};
use mvq_core::circuits::{self, CircuitId, PAPER_COUNT_NOTE};
use mvq_core::minimizer::{
    audit_paper_functions, minimize_exact, Cube, Literal, Tri, TruthTableSpec,
};
use mvq_core::netlist::enumerate_inputs;
use mvq_core::sim;
use mvq_core::{CostTable, GateKind, Netlist, SignalType};

fn mvq(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mvq").chain(args.iter().copied());
    let code = mvq_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn q(v: u8) -> Quat {
    Quat::new(v).unwrap()
}

/// Expected outputs from plain integer / carry-less arithmetic on the
/// native ports of each circuit.
fn reference(id: CircuitId, inputs: &[u8]) -> Vec<u8> {
    let pair = |i: usize| inputs[i] * 2 + inputs[i + 1];
    let bits = |v: u8| vec![v >> 1, v & 1];
    let gf_mul = |a: u8, b: u8| {
        let mut p = 0u8;
        for i in 0..2 {
            if b >> i & 1 == 1 {
                p ^= a << i;
            }
        }
        if p & 0b100 != 0 {
            p ^= 0b111;
        }
        p
    };
    match id {
        CircuitId::Q2b => bits(inputs[0]),
        CircuitId::B2q => vec![pair(0)],
        CircuitId::Mod4Add => bits((pair(0) + pair(2)) % 4),
        CircuitId::Mod4Sub => bits((pair(0) + 4 - pair(2)) % 4),
        CircuitId::Mod4Mul => bits(pair(0) * pair(2) % 4),
        CircuitId::Mod4Neg => bits((4 - pair(0)) % 4),
        CircuitId::Mod4Dbl => bits(2 * pair(0) % 4),
        CircuitId::Gf4Add => bits(pair(0) ^ pair(2)),
        CircuitId::Gf4MulSop => bits(gf_mul(pair(0), pair(2))),
        CircuitId::Gf4MulMux => vec![gf_mul(inputs[0], inputs[1])],
    }
}

fn criterion_1() -> Result<()> {
    let start = Instant::now();
    for id in CircuitId::ALL {
        let n = id.build();
        let table = n.truth_table()?;
        let expected_size = match id {
            CircuitId::Mod4Neg | CircuitId::Mod4Dbl | CircuitId::Q2b | CircuitId::B2q => 4,
            _ => 16,
        };
        ensure!(
            table.rows.len() == expected_size,
            "{id}: {} rows",
            table.rows.len()
        );
        for row in &table.rows {
            ensure!(
                row.outputs == reference(id, &row.inputs),
                "{id} at {:?}: got {:?}",
                row.inputs,
                row.outputs
            );
            ensure!(
                row.outputs == id.oracle(&row.inputs),
                "{id}: library oracle disagrees"
            );
        }
        ensure!(circuits::verify(id)?.passed(), "{id}: verify failed");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(())
}

fn criterion_2() -> Result<()> {
    let report = audit_paper_functions();
    ensure!(report.rows.len() == 14, "{} rows", report.rows.len());
    ensure!(report.all_equivalent(), "{}", report);
    let (code, out, _) = mvq(&["audit"]);
    ensure!(code == 0, "mvq audit exited {code}");
    ensure!(out.contains("14/14"), "audit summary missing");
    Ok(())
}

fn criterion_3() -> Result<()> {
    let costs = CostTable::default();
    let m = |id: CircuitId| id.metrics(&costs);
    let check = |id: CircuitId, gates: usize, depth: Option<usize>| -> Result<()> {
        let got = m(id)?;
        ensure!(got.gate_count == gates, "{id}: gates={}", got.gate_count);
        if let Some(d) = depth {
            ensure!(got.depth == d, "{id}: depth={}", got.depth);
        }
        Ok(())
    };
    check(CircuitId::Mod4Add, 4, Some(2))?;
    check(CircuitId::Mod4Mul, 4, Some(2))?;
    check(CircuitId::Mod4Sub, 4, None)?;
    check(CircuitId::Gf4Add, 2, Some(1))?;
    check(CircuitId::Mod4Neg, 1, None)?;
    let mux = m(CircuitId::Gf4MulMux)?;
    ensure!(
        mux.gate_histogram.get("QMUX4") == Some(&3),
        "{:?}",
        mux.gate_histogram
    );
    let (code, out, _) = mvq(&["metrics", "mod4-add"]);
    ensure!(
        code == 0 && out.contains("gates=4") && out.contains("depth=2"),
        "{out}"
    );
    Ok(())
}

fn criterion_4() -> Result<()> {
    let mux = CircuitId::Gf4MulMux.quaternary_view();
    let sop = CircuitId::Gf4MulSop.quaternary_view();
    let rows = [[0u8, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    let types = [SignalType::Quaternary; 2];
    let mut pairs = 0;
    for v in enumerate_inputs(&types) {
        let (x, y) = (v[0], v[1]);
        let a = mux.eval_vector(&v)?[0];
        let b = sop.eval_vector(&v)?[0];
        let poly = arith::gf4_mul_poly(q(x), q(y)).value();
        let table = arith::gf4_mul(q(x), q(y)).value();
        let row = rows[x as usize][y as usize];
        ensure!(
            a == b && b == poly && poly == table && table == row,
            "X={x} Y={y}: mux {a}, sop {b}, poly {poly}, table {table}, row {row}"
        );
        pairs += 1;
    }
    ensure!(pairs == 16);
    let (code, out, _) = mvq(&["compare", "gf4-mul-mux", "gf4-mul-sop"]);
    ensure!(code == 0 && out.starts_with("EQUAL"), "{out}");
    Ok(())
}

fn criterion_5() -> Result<()> {
    let all: Vec<Quat> = (0..4).map(q).collect();
    let mut triples = 0;
    for &a in &all {
        ensure!(arith::mod4_add(a, arith::mod4_neg(a)) == Quat::ZERO);
        ensure!(arith::gf4_add(a, a) == Quat::ZERO, "x + x != 0 for {a}");
        if a != Quat::ZERO {
            let inv = arith::gf4_inv(a).context("missing inverse")?;
            ensure!(arith::gf4_mul(a, inv) == Quat::ONE, "bad inverse of {a}");
        }
        for &b in &all {
            ensure!(arith::mod4_add(a, b) == arith::mod4_add(b, a));
            ensure!(arith::mod4_mul(a, b) == arith::mod4_mul(b, a));
            ensure!(arith::gf4_add(a, b) == arith::gf4_add(b, a));
            ensure!(arith::gf4_mul(a, b) == arith::gf4_mul(b, a));
            for &c in &all {
                for (add, mul) in [
                    (
                        arith::mod4_add as fn(Quat, Quat) -> Quat,
                        arith::mod4_mul as fn(Quat, Quat) -> Quat,
                    ),
                    (arith::gf4_add, arith::gf4_mul),
                ] {
                    ensure!(add(add(a, b), c) == add(a, add(b, c)));
                    ensure!(mul(mul(a, b), c) == mul(a, mul(b, c)));
                    ensure!(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
                }
                triples += 1;
            }
        }
    }
    ensure!(triples == 64);
    ensure!(arith::gf4_inv(Quat::ZERO).is_none());
    Ok(())
}

/// Primes found by checking every one of the 3^n cubes.
fn brute_primes(spec: &TruthTableSpec) -> Vec<Cube> {
    let n = spec.n_vars();
    let implicant = |c: &Cube| c.minterms().into_iter().all(|m| spec.get(m) != Tri::Off);
    let mut cubes: Vec<Vec<Literal>> = vec![vec![]];
    for _ in 0..n {
        cubes = cubes
            .into_iter()
            .flat_map(|c| {
                [Literal::Zero, Literal::One, Literal::Dash].map(|l| {
                    let mut c = c.clone();
                    c.push(l);
                    c
                })
            })
            .collect();
    }
    cubes
        .iter()
        .map(|l| Cube::from_literals(l))
        .filter(implicant)
        .filter(|c| {
            (0..n).all(|v| {
                c.literal(v) == Literal::Dash || !implicant(&c.with_literal(v, Literal::Dash))
            })
        })
        .filter(|c| c.minterms().into_iter().any(|m| spec.get(m) == Tri::On))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn brute_min_cost(spec: &TruthTableSpec) -> (usize, usize) {
    let primes = brute_primes(spec);
    let on = spec.on_set();
    let mut best = (usize::MAX, usize::MAX);
    for mask in 0u32..1 << primes.len() {
        let chosen: Vec<&Cube> = (0..primes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &primes[i])
            .collect();
        if on.iter().all(|&m| chosen.iter().any(|c| c.covers(m))) {
            best = best.min((chosen.len(), chosen.iter().map(|c| c.literal_count()).sum()));
        }
    }
    best
}

fn criterion_6() -> Result<()> {
    let report = audit_paper_functions();
    for row in &report.rows {
        let label = row.function.label;
        let exact = minimize_exact(&row.spec);
        let cost = (exact.term_count(), exact.literal_count());
        ensure!(
            cost == brute_min_cost(&row.spec),
            "{label}: {cost:?} is not minimal"
        );
        if let Some(paper) = row.paper_sop_literals() {
            ensure!(
                exact.literal_count() <= paper,
                "{label}: {} > published {paper}",
                exact.literal_count()
            );
        }
    }
    let gf_m1 = report
        .rows
        .iter()
        .find(|r| r.function.label == "gf4 m1")
        .context("gf4 m1 row")?;
    ensure!(gf_m1.paper_sop_literals() == Some(13));
    ensure!(gf_m1.exact.literal_count() <= 13);
    Ok(())
}

fn criterion_7() -> Result<()> {
    // Down-literal table: high output is the top rail (level 3).
    let table1 = [[3, 3, 3], [0, 3, 3], [0, 0, 3], [0, 0, 0]];
    for (input, expected) in table1.iter().enumerate() {
        for (k, kind) in [GateKind::Dlc1, GateKind::Dlc2, GateKind::Dlc3]
            .iter()
            .enumerate()
        {
            let got = kind.eval(&[input as u8]) * 3;
            ensure!(got == expected[k], "{kind} at {input}: {got}");
        }
    }
    let q2b = CircuitId::Q2b.build();
    let m = q2b.metrics(&CostTable::default())?;
    for kind in ["DLC1", "DLC2", "DLC3", "BMUX2", "NOT"] {
        ensure!(m.gate_histogram.contains_key(kind), "q2b lacks {kind}");
    }
    let table2 = [[0, 0], [0, 1], [1, 0], [1, 1]];
    for level in 0..4u8 {
        ensure!(
            q2b.eval_vector(&[level])? == table2[level as usize],
            "q2b at {level}"
        );
    }
    // b2q after q2b, wired as one netlist.
    let mut chain = Netlist::new(
        [("Q", SignalType::Quaternary)],
        [("R", SignalType::Quaternary)],
    )?;
    let input = chain.input_net("Q").context("port")?;
    let bits = chain.instantiate(&q2b, &[input])?;
    let back = chain.instantiate(&CircuitId::B2q.build(), &bits)?;
    chain.connect_output("R", back[0])?;
    for level in 0..4u8 {
        ensure!(
            chain.eval_vector(&[level])? == [level],
            "round trip at {level}"
        );
    }
    Ok(())
}

fn criterion_8() -> Result<()> {
    let dir = tempfile::tempdir()?;
    for id in CircuitId::ALL {
        let n = id.build();
        let csv_path = dir.path().join(format!("{id}.csv"));
        let vcd_path = dir.path().join(format!("{id}.vcd"));
        let (code, _, err) = mvq(&[
            "sim",
            id.name(),
            "--csv",
            csv_path.to_str().unwrap(),
            "--vcd",
            vcd_path.to_str().unwrap(),
        ]);
        ensure!(code == 0, "{id}: exit {code}: {err}");
        let csv = std::fs::read_to_string(&csv_path)?;
        let lines: Vec<&str> = csv.lines().collect();
        let table = n.truth_table()?;
        ensure!(
            lines.len() == table.rows.len() + 1,
            "{id}: {} lines",
            lines.len()
        );
        if n.input_types() == [SignalType::Binary; 4] {
            ensure!(lines.len() == 17, "{id}: {} lines", lines.len());
        }
        for (i, (line, row)) in lines[1..].iter().zip(&table.rows).enumerate() {
            let expected: Vec<String> = std::iter::once(i.to_string())
                .chain(row.inputs.iter().chain(&row.outputs).map(u8::to_string))
                .collect();
            ensure!(*line == expected.join(","), "{id} row {i}: {line}");
        }
        let vcd = std::fs::read_to_string(&vcd_path)?;
        let summary = sim::lint_vcd(&vcd).map_err(anyhow::Error::msg)?;
        let signals = n
            .inputs()
            .iter()
            .map(|p| p.ty)
            .chain(n.outputs().iter().map(|p| p.ty));
        for ((_, width, name), ty) in summary.vars.iter().zip(signals) {
            let want = if ty == SignalType::Quaternary { 2 } else { 1 };
            ensure!(*width == want, "{id}: {name} declared {width} bits");
        }
        ensure!(summary.timestamps.windows(2).all(|w| w[0] < w[1]));
    }
    Ok(())
}

fn criterion_9() -> Result<()> {
    let refs = [
        (CircuitId::Mod4Add, 40),
        (CircuitId::Mod4Mul, 24),
        (CircuitId::Gf4Add, 24),
        (CircuitId::Gf4MulMux, 72),
    ];
    for (id, count) in refs {
        let (code, out, _) = mvq(&["metrics", id.name()]);
        ensure!(code == 0, "{id}: exit {code}");
        ensure!(
            out.contains(&format!("paper_ref_transistors={count}")),
            "{id}: {out}"
        );
        ensure!(out.contains("transistors="), "{id}: no estimate");
        ensure!(out.contains(PAPER_COUNT_NOTE), "{id}: note missing");
    }
    ensure!(PAPER_COUNT_NOTE.starts_with("reference only"));
    let (_, out, _) = mvq(&["metrics", "mod4-neg"]);
    ensure!(out.contains("paper_ref_transistors=none"), "{out}");
    Ok(())
}

fn criterion_10() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let vcd = dir.path().join("t.vcd");
    let vcd = vcd.to_str().unwrap();
    let runs: [&[&str]; 5] = [
        &["verify", "all"],
        &["audit"],
        &["sim", "mod4-add", "--csv", "-"],
        &["sim", "gf4-mul-mux", "--csv", "-", "--volts"],
        &["sim", "q2b", "--vcd", vcd],
    ];
    for args in runs {
        let first = mvq(args);
        let first_file = std::fs::read(vcd).ok();
        let second = mvq(args);
        let second_file = std::fs::read(vcd).ok();
        if first != second || first_file != second_file {
            bail!("`mvq {}` is not deterministic", args.join(" "));
        }
    }
    Ok(())
}

type Check = fn() -> Result<()>;

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Check); 10] = [
        ("exhaustive functional equivalence", criterion_1),
        ("published equation audit", criterion_2),
        ("structural metrics", criterion_3),
        ("three-way GF(4) multiplier agreement", criterion_4),
        ("ring and field axioms", criterion_5),
        ("minimizer exactness", criterion_6),
        ("converter correctness", criterion_7),
        ("trace fidelity", criterion_8),
        ("transistor-count reporting", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("[PASS] {:>2}. {name}", i + 1),
            Err(e) => {
                println!("[FAIL] {:>2}. {name}: {e:#}", i + 1);
                failures.push(i + 1);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
