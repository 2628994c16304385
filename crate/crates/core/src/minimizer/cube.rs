use std::cmp::Ordering;
use std::fmt;

use super::MinimizerError;

/// Maximum number of variables a cube (and a spec) may have.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Zero,
    One,
    Dash,
}

impl Literal {
    fn rank(self) -> u8 {
        match self {
            Literal::Dash => 0,
            Literal::One => 1,
            Literal::Zero => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Literal::Zero => '0',
            Literal::One => '1',
            Literal::Dash => '-',
        }
    }
}

/// A product term over `n` variables. Variable 0 is the most significant bit
/// of a minterm index.
///
/// Cubes order literal-by-literal with `- < 1 < 0`, which gives the
/// deterministic tie-break used by the exact minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    n: u8,
    care: u8,
    value: u8,
}

impl Cube {
    pub fn universe(n: usize) -> Self {
        assert!(n <= MAX_VARS);
        Cube {
            n: n as u8,
            care: 0,
            value: 0,
        }
    }

    pub fn minterm(n: usize, index: u32) -> Self {
        assert!(n <= MAX_VARS && index < (1 << n));
        Cube {
            n: n as u8,
            care: ((1u32 << n) - 1) as u8,
            value: index as u8,
        }
    }

    pub fn from_literals(lits: &[Literal]) -> Self {
        let mut c = Cube::universe(lits.len());
        for (var, &lit) in lits.iter().enumerate() {
            c = c.with_literal(var, lit);
        }
        c
    }

    pub fn n_vars(&self) -> usize {
        self.n as usize
    }

    fn bit(&self, var: usize) -> u8 {
        debug_assert!(var < self.n as usize);
        1 << (self.n as usize - 1 - var)
    }

    pub fn literal(&self, var: usize) -> Literal {
        let b = self.bit(var);
        if self.care & b == 0 {
            Literal::Dash
        } else if self.value & b != 0 {
            Literal::One
        } else {
            Literal::Zero
        }
    }

    pub fn with_literal(mut self, var: usize, lit: Literal) -> Self {
        let b = self.bit(var);
        match lit {
            Literal::Dash => {
                self.care &= !b;
                self.value &= !b;
            }
            Literal::One => {
                self.care |= b;
                self.value |= b;
            }
            Literal::Zero => {
                self.care |= b;
                self.value &= !b;
            }
        }
        self
    }

    pub fn literals(&self) -> Vec<Literal> {
        (0..self.n_vars()).map(|v| self.literal(v)).collect()
    }

    /// Number of non-dash positions.
    pub fn literal_count(&self) -> usize {
        self.care.count_ones() as usize
    }

    pub fn covers(&self, minterm: u32) -> bool {
        (minterm as u8 ^ self.value) & self.care == 0
    }

    /// True when every minterm of `other` is also in `self`.
    pub fn contains(&self, other: &Cube) -> bool {
        self.care & other.care == self.care && (self.value ^ other.value) & self.care == 0
    }

    /// All minterm indices covered, ascending.
    pub fn minterms(&self) -> Vec<u32> {
        let free = !self.care as u32 & ((1u32 << self.n) - 1);
        let mut out = Vec::with_capacity(1 << free.count_ones());
        // Enumerate subsets of the free bits.
        let mut sub = 0u32;
        loop {
            out.push(self.value as u32 | sub);
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        out.sort_unstable();
        out
    }

    /// Combines two cubes that differ in exactly one cared-for literal.
    pub fn merge(&self, other: &Cube) -> Option<Cube> {
        if self.care != other.care {
            return None;
        }
        let diff = self.value ^ other.value;
        (diff.count_ones() == 1).then_some(Cube {
            n: self.n,
            care: self.care & !diff,
            value: self.value & !diff,
        })
    }

    /// Parses the `01-` notation, one character per variable.
    pub fn parse(text: &str) -> Result<Self, MinimizerError> {
        let lits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(Literal::Zero),
                '1' => Ok(Literal::One),
                '-' => Ok(Literal::Dash),
                other => Err(MinimizerError::BadCube(format!("unexpected `{other}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if lits.len() > MAX_VARS {
            return Err(MinimizerError::VarCount(lits.len()));
        }
        Ok(Cube::from_literals(&lits))
    }

    /// Renders the product with the given variable names, e.g. `x2 y2'`.
    /// The all-dash cube renders as `1`.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = (0..self.n_vars())
            .filter_map(|v| match self.literal(v) {
                Literal::Dash => None,
                Literal::One => Some(names[v].clone()),
                Literal::Zero => Some(format!("{}'", names[v])),
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl Ord for Cube {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            (0..self.n_vars())
                .map(|v| self.literal(v).rank().cmp(&other.literal(v).rank()))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in self.literals() {
            write!(f, "{}", lit.symbol())?;
        }
        Ok(())
    }
}

/// A sum of products, kept sorted with duplicates and contained cubes removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SopExpr {
    n: u8,
    cubes: Vec<Cube>,
}

impl SopExpr {
    pub fn new(n: usize, cubes: impl IntoIterator<Item = Cube>) -> Self {
        let mut cubes: Vec<Cube> = cubes.into_iter().collect();
        assert!(cubes.iter().all(|c| c.n_vars() == n), "cube width mismatch");
        cubes.sort();
        cubes.dedup();
        let keep: Vec<Cube> = cubes
            .iter()
            .filter(|c| !cubes.iter().any(|d| d != *c && d.contains(c)))
            .copied()
            .collect();
        SopExpr {
            n: n as u8,
            cubes: keep,
        }
    }

    pub fn zero(n: usize) -> Self {
        SopExpr::new(n, [])
    }

    pub fn n_vars(&self) -> usize {
        self.n as usize
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn term_count(&self) -> usize {
        self.cubes.len()
    }

    pub fn literal_count(&self) -> usize {
        self.cubes.iter().map(Cube::literal_count).sum()
    }

    pub fn eval(&self, minterm: u32) -> bool {
        self.cubes.iter().any(|c| c.covers(minterm))
    }

    /// `x2 y2' + x2' y2`; the empty sum renders as `0`.
    pub fn render(&self, names: &[String]) -> String {
        if self.cubes.is_empty() {
            return "0".to_string();
        }
        self.cubes
            .iter()
            .map(|c| c.render(names))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
