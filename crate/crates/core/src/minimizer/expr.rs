use std::fmt::Write as _;

use super::{Cube, Literal, MinimizerError, SopExpr};

/// Boolean expression tree with XOR, used for hand-factored equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XorStyle {
    /// `⊕`
    Unicode,
    /// `^`
    Ascii,
}

impl XorStyle {
    fn symbol(self) -> &'static str {
        match self {
            XorStyle::Unicode => "⊕",
            XorStyle::Ascii => "^",
        }
    }
}

impl Expr {
    pub fn xor(a: Expr, b: Expr) -> Expr {
        Expr::Xor(Box::new(a), Box::new(b))
    }

    /// Product of the cube's literals (`Const(true)` for the universe).
    pub fn from_cube(cube: &Cube) -> Expr {
        let lits: Vec<Expr> = (0..cube.n_vars())
            .filter_map(|v| match cube.literal(v) {
                Literal::Dash => None,
                Literal::One => Some(Expr::Var(v)),
                Literal::Zero => Some(Expr::Not(Box::new(Expr::Var(v)))),
            })
            .collect();
        match lits.len() {
            0 => Expr::Const(true),
            1 => lits.into_iter().next().unwrap(),
            _ => Expr::And(lits),
        }
    }

    pub fn from_sop(e: &SopExpr) -> Expr {
        let terms: Vec<Expr> = e.cubes().iter().map(Expr::from_cube).collect();
        match terms.len() {
            0 => Expr::Const(false),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Or(terms),
        }
    }

    /// Evaluates on minterm `m` of an `n`-variable space (variable 0 is the msb).
    pub fn eval(&self, n: usize, m: u32) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(v) => (m >> (n - 1 - v)) & 1 == 1,
            Expr::Not(e) => !e.eval(n, m),
            Expr::And(es) => es.iter().all(|e| e.eval(n, m)),
            Expr::Or(es) => es.iter().any(|e| e.eval(n, m)),
            Expr::Xor(a, b) => a.eval(n, m) ^ b.eval(n, m),
        }
    }

    pub fn truth(&self, n: usize) -> Vec<bool> {
        (0..1u32 << n).map(|m| self.eval(n, m)).collect()
    }

    /// Variable occurrences.
    pub fn literal_count(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(_) => 1,
            Expr::Not(e) => e.literal_count(),
            Expr::And(es) | Expr::Or(es) => es.iter().map(Expr::literal_count).sum(),
            Expr::Xor(a, b) => a.literal_count() + b.literal_count(),
        }
    }

    /// Two-input gate equivalents. Complemented variables are free literals;
    /// an n-ary AND/OR counts as n-1 gates.
    pub fn gate_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 0,
            Expr::Not(e) => match **e {
                Expr::Var(_) => 0,
                _ => 1 + e.gate_count(),
            },
            Expr::And(es) | Expr::Or(es) => {
                es.len().saturating_sub(1) + es.iter().map(Expr::gate_count).sum::<usize>()
            }
            Expr::Xor(a, b) => 1 + a.gate_count() + b.gate_count(),
        }
    }

    /// Canonical (minterm) sum of products with the same truth table.
    pub fn expand(&self, n: usize) -> SopExpr {
        SopExpr::new(
            n,
            (0..1u32 << n)
                .filter(|&m| self.eval(n, m))
                .map(|m| Cube::minterm(n, m)),
        )
    }

    /// The expression as written, if it is already a sum of products of
    /// literals.
    pub fn as_sop(&self, n: usize) -> Option<SopExpr> {
        fn product(e: &Expr, n: usize) -> Option<Cube> {
            let mut cube = Cube::universe(n);
            let lits: Vec<&Expr> = match e {
                Expr::And(es) => es.iter().collect(),
                Expr::Const(true) => Vec::new(),
                other => vec![other],
            };
            for lit in lits {
                let (v, l) = match lit {
                    Expr::Var(v) => (*v, Literal::One),
                    Expr::Not(inner) => match **inner {
                        Expr::Var(v) => (v, Literal::Zero),
                        _ => return None,
                    },
                    _ => return None,
                };
                if cube.literal(v) != Literal::Dash {
                    return None;
                }
                cube = cube.with_literal(v, l);
            }
            Some(cube)
        }
        let terms: Vec<&Expr> = match self {
            Expr::Const(false) => Vec::new(),
            Expr::Or(es) => es.iter().collect(),
            other => vec![other],
        };
        let cubes = terms
            .into_iter()
            .map(|t| product(t, n))
            .collect::<Option<Vec<_>>>()?;
        Some(SopExpr::new(n, cubes))
    }

    pub fn render(&self, names: &[String], style: XorStyle) -> String {
        let mut out = String::new();
        self.write(&mut out, names, style);
        out
    }

    fn write(&self, out: &mut String, names: &[String], style: XorStyle) {
        let paren = |e: &Expr, out: &mut String| {
            out.push('(');
            e.write(out, names, style);
            out.push(')');
        };
        match self {
            Expr::Const(b) => out.push(if *b { '1' } else { '0' }),
            Expr::Var(v) => out.push_str(&names[*v]),
            Expr::Not(e) => {
                match **e {
                    Expr::Var(_) | Expr::Const(_) => e.write(out, names, style),
                    _ => paren(e, out),
                }
                out.push('\'');
            }
            Expr::And(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    match e {
                        Expr::Or(_) | Expr::Xor(..) => paren(e, out),
                        _ => e.write(out, names, style),
                    }
                }
            }
            Expr::Or(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    match e {
                        Expr::Xor(..) => paren(e, out),
                        _ => e.write(out, names, style),
                    }
                }
            }
            Expr::Xor(a, b) => {
                for (i, e) in [a, b].into_iter().enumerate() {
                    if i > 0 {
                        let _ = write!(out, " {} ", style.symbol());
                    }
                    match **e {
                        Expr::And(_) | Expr::Or(_) | Expr::Xor(..) => paren(e, out),
                        _ => e.write(out, names, style),
                    }
                }
            }
        }
    }

    /// Parses `+` (or), `^`/`⊕` (xor), juxtaposition or `*` (and), postfix
    /// `'` (not), parentheses and the constants `0`/`1`. Binding from loosest:
    /// or, xor, and, not. Identifiers must appear in `names`.
    pub fn parse(text: &str, names: &[String]) -> Result<Expr, MinimizerError> {
        let mut p = Parser {
            chars: text.char_indices().collect(),
            pos: 0,
            names,
        };
        let e = p.or()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(
            || self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()),
            |&(i, _)| i,
        )
    }

    fn error(&self, msg: &str) -> MinimizerError {
        MinimizerError::ExprParse {
            offset: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn or(&mut self) -> Result<Expr, MinimizerError> {
        let mut terms = vec![self.xor()?];
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                terms.push(self.xor()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Or(terms)
        })
    }

    fn xor(&mut self) -> Result<Expr, MinimizerError> {
        let mut acc = self.and()?;
        loop {
            self.skip_ws();
            if matches!(self.peek(), Some('^') | Some('⊕')) {
                self.pos += 1;
                let rhs = self.and()?;
                acc = Expr::xor(acc, rhs);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Expr, MinimizerError> {
        let mut factors = vec![self.unary()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    factors.push(self.unary()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() || c == '_' => {
                    factors.push(self.unary()?);
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::And(factors)
        })
    }

    fn unary(&mut self) -> Result<Expr, MinimizerError> {
        let mut e = self.atom()?;
        while self.peek() == Some('\'') {
            self.pos += 1;
            e = Expr::Not(Box::new(e));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, MinimizerError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.or()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Expr::Const(false))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Expr::Const(true))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos]
                    .iter()
                    .map(|&(_, c)| c)
                    .collect();
                self.names
                    .iter()
                    .position(|n| *n == ident)
                    .map(Expr::Var)
                    .ok_or(MinimizerError::UnknownVar(ident))
            }
            _ => Err(self.error("expected a variable, constant or `(`")),
        }
    }
}
