use super::{Cube, Expr, Literal, SopExpr, XorStyle};

/// XOR-factored rendering of a sum of products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorReport {
    pub expr: Expr,
    /// Two-input gate equivalents of `expr`.
    pub gate_count: usize,
    /// Number of `P ⊕ Q` groups found.
    pub xor_terms: usize,
}

impl XorReport {
    pub fn render(&self, names: &[String], style: XorStyle) -> String {
        self.expr.render(names, style)
    }
}

/// Positive products of one or two variables: the XOR operand candidates.
fn operand_candidates(n: usize) -> Vec<Cube> {
    let mut out = Vec::new();
    for a in 0..n {
        out.push(Cube::universe(n).with_literal(a, Literal::One));
        for b in a + 1..n {
            out.push(
                Cube::universe(n)
                    .with_literal(a, Literal::One)
                    .with_literal(b, Literal::One),
            );
        }
    }
    out
}

fn vars_of(c: &Cube) -> Vec<usize> {
    (0..c.n_vars())
        .filter(|&v| c.literal(v) != Literal::Dash)
        .collect()
}

/// Literals shared by every cube in `group`.
fn common_cube(group: &[Cube], n: usize) -> Cube {
    let mut c = Cube::universe(n);
    for v in 0..n {
        let first = group[0].literal(v);
        if first != Literal::Dash && group.iter().all(|g| g.literal(v) == first) {
            c = c.with_literal(v, first);
        }
    }
    c
}

struct Candidate {
    absorbed: Vec<usize>,
    term: Expr,
    key: (std::cmp::Reverse<usize>, usize, usize, usize),
}

/// Looks for groups of cubes that together form `C·(P ⊕ Q)` where `P` and
/// `Q` are products of one or two positive literals and `C` is the group's
/// common remaining literals. Each group found is replaced by one XOR term;
/// cubes that fit no pattern are kept as they are.
///
/// A group is only replaced when the XOR term stays inside the original
/// function, so the result is always equivalent to `e`; this is rechecked
/// exhaustively before returning.
pub fn recognize_xor(e: &SopExpr) -> XorReport {
    let n = e.n_vars();
    let on: Vec<bool> = (0..1u32 << n).map(|m| e.eval(m)).collect();
    let operands = operand_candidates(n);
    let mut remaining: Vec<Cube> = e.cubes().to_vec();
    let mut terms: Vec<Expr> = Vec::new();

    loop {
        let mut best: Option<Candidate> = None;
        for (i, p) in operands.iter().enumerate() {
            for (j, q) in operands.iter().enumerate().skip(i + 1) {
                if p.contains(q) || q.contains(p) {
                    continue;
                }
                let xor_on = |m: u32| p.covers(m) ^ q.covers(m);
                let absorbed: Vec<usize> = (0..remaining.len())
                    .filter(|&k| remaining[k].minterms().into_iter().all(xor_on))
                    .collect();
                if absorbed.len() < 2 {
                    continue;
                }
                let group: Vec<Cube> = absorbed.iter().map(|&k| remaining[k]).collect();
                let mut common = common_cube(&group, n);
                for v in vars_of(p).into_iter().chain(vars_of(q)) {
                    common = common.with_literal(v, Literal::Dash);
                }
                let fits = (0..1u32 << n)
                    .filter(|&m| common.covers(m) && xor_on(m))
                    .all(|m| on[m as usize]);
                if !fits {
                    continue;
                }
                // Operands print with the lower variable indices first.
                let (first, second) = if vars_of(p) <= vars_of(q) {
                    (p, q)
                } else {
                    (q, p)
                };
                let xor = Expr::xor(Expr::from_cube(first), Expr::from_cube(second));
                let term = if common.literal_count() == 0 {
                    xor
                } else {
                    let mut factors = match Expr::from_cube(&common) {
                        Expr::And(fs) => fs,
                        single => vec![single],
                    };
                    factors.push(xor);
                    Expr::And(factors)
                };
                let key = (
                    std::cmp::Reverse(absorbed.len()),
                    term.gate_count(),
                    term.literal_count(),
                    i * operands.len() + j,
                );
                if best.as_ref().is_none_or(|b| key < b.key) {
                    best = Some(Candidate {
                        absorbed,
                        term,
                        key,
                    });
                }
            }
        }
        let Some(found) = best else { break };
        for &k in found.absorbed.iter().rev() {
            remaining.remove(k);
        }
        terms.push(found.term);
    }

    let xor_terms = terms.len();
    terms.extend(remaining.iter().map(Expr::from_cube));
    let mut expr = match terms.len() {
        0 => Expr::Const(false),
        1 => terms.pop().unwrap(),
        _ => Expr::Or(terms),
    };
    if (0..1u32 << n).any(|m| expr.eval(n, m) != on[m as usize]) {
        expr = Expr::from_sop(e);
    }
    XorReport {
        gate_count: expr.gate_count(),
        expr,
        xor_terms,
    }
}
