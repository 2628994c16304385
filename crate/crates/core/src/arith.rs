//! Reference arithmetic on single quaternary digits.
//!
//! Everything here is defined directly from the operation tables (ring Z/4Z
//! and the field GF(4)) and from the published bit-level equations. Nothing in
//! this module touches the netlist evaluator, so these functions serve as the
//! independent oracles the circuit builders are checked against.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("quaternary level {0} out of range (expected 0..=3)")]
    LevelOutOfRange(u8),
    #[error("bit value {0} out of range (expected 0 or 1)")]
    BitOutOfRange(u8),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
}

/// A quaternary logic level in `0..=3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quat(u8);

impl Quat {
    pub const ZERO: Quat = Quat(0);
    pub const ONE: Quat = Quat(1);
    pub const TWO: Quat = Quat(2);
    pub const THREE: Quat = Quat(3);

    /// All four levels in ascending order.
    pub const ALL: [Quat; 4] = [Quat(0), Quat(1), Quat(2), Quat(3)];

    pub fn new(value: u8) -> Result<Self, ArithError> {
        if value <= 3 {
            Ok(Quat(value))
        } else {
            Err(ArithError::LevelOutOfRange(value))
        }
    }

    /// Wraps any integer into range by reduction mod 4.
    pub const fn wrapping(value: u8) -> Self {
        Quat(value & 3)
    }

    pub const fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Quat {
    type Error = ArithError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Quat::new(value)
    }
}

impl From<Quat> for u8 {
    fn from(q: Quat) -> u8 {
        q.0
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Natural two-bit encoding of a quaternary digit: `level = 2*msb + lsb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitPair {
    pub msb: bool,
    pub lsb: bool,
}

impl BitPair {
    pub const fn new(msb: bool, lsb: bool) -> Self {
        BitPair { msb, lsb }
    }

    /// Builds a pair from 0/1 integers, rejecting anything else.
    pub fn from_bits(msb: u8, lsb: u8) -> Result<Self, ArithError> {
        let bit = |b: u8| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(ArithError::BitOutOfRange(other)),
        };
        Ok(BitPair::new(bit(msb)?, bit(lsb)?))
    }

    pub const fn bits(self) -> (u8, u8) {
        (self.msb as u8, self.lsb as u8)
    }
}

impl fmt::Display for BitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.msb as u8, self.lsb as u8)
    }
}

pub fn encode_q2b(q: Quat) -> BitPair {
    BitPair::new(q.0 >= 2, q.0 % 2 == 1)
}

pub fn decode_b2q(p: BitPair) -> Quat {
    Quat(2 * p.msb as u8 + p.lsb as u8)
}

pub fn mod4_add(a: Quat, b: Quat) -> Quat {
    Quat((a.0 + b.0) % 4)
}

/// `a - b (mod 4)`; the second argument is the subtrahend.
pub fn mod4_sub(a: Quat, b: Quat) -> Quat {
    Quat((a.0 + 4 - b.0) % 4)
}

pub fn mod4_mul(a: Quat, b: Quat) -> Quat {
    Quat((a.0 * b.0) % 4)
}

pub fn mod4_neg(a: Quat) -> Quat {
    Quat((4 - a.0) % 4)
}

pub fn mod4_double(a: Quat) -> Quat {
    Quat((2 * a.0) % 4)
}

/// GF(4) addition is XOR of the natural encodings.
pub fn gf4_add(a: Quat, b: Quat) -> Quat {
    Quat(a.0 ^ b.0)
}

/// Rows of the GF(4) multiplication table, indexed `[x][y]`.
const GF4_MUL_TABLE: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

/// Table-driven GF(4) product.
pub fn gf4_mul(a: Quat, b: Quat) -> Quat {
    Quat(GF4_MUL_TABLE[a.0 as usize][b.0 as usize])
}

/// The irreducible polynomial `t^2 + t + 1` as a bit mask.
const GF4_MODULUS: u8 = 0b111;

/// GF(4) product computed algebraically: carry-less multiply of the two
/// degree-1 polynomials followed by reduction modulo `t^2 + t + 1`.
pub fn gf4_mul_poly(a: Quat, b: Quat) -> Quat {
    let mut product = 0u8;
    for i in 0..2 {
        if (b.0 >> i) & 1 == 1 {
            product ^= a.0 << i;
        }
    }
    if product & 0b100 != 0 {
        product ^= GF4_MODULUS;
    }
    Quat(product)
}

/// Multiplicative inverse in GF(4), `None` for zero.
pub fn gf4_inv(a: Quat) -> Option<Quat> {
    Quat::ALL.into_iter().find(|&b| gf4_mul(a, b) == Quat::ONE)
}

/// The seven single-digit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Mod4Add,
    Mod4Sub,
    Mod4Mul,
    Mod4Neg,
    Mod4Double,
    Gf4Add,
    Gf4Mul,
}

impl OpKind {
    pub const ALL: [OpKind; 7] = [
        OpKind::Mod4Add,
        OpKind::Mod4Sub,
        OpKind::Mod4Mul,
        OpKind::Mod4Neg,
        OpKind::Mod4Double,
        OpKind::Gf4Add,
        OpKind::Gf4Mul,
    ];

    pub fn is_unary(self) -> bool {
        matches!(self, OpKind::Mod4Neg | OpKind::Mod4Double)
    }

    pub fn arity(self) -> usize {
        if self.is_unary() {
            1
        } else {
            2
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Mod4Add => "mod4-add",
            OpKind::Mod4Sub => "mod4-sub",
            OpKind::Mod4Mul => "mod4-mul",
            OpKind::Mod4Neg => "mod4-neg",
            OpKind::Mod4Double => "mod4-dbl",
            OpKind::Gf4Add => "gf4-add",
            OpKind::Gf4Mul => "gf4-mul",
        }
    }

    /// Applies the table oracle. Unary kinds ignore `b`.
    pub fn apply(self, a: Quat, b: Quat) -> Quat {
        match self {
            OpKind::Mod4Add => mod4_add(a, b),
            OpKind::Mod4Sub => mod4_sub(a, b),
            OpKind::Mod4Mul => mod4_mul(a, b),
            OpKind::Mod4Neg => mod4_neg(a),
            OpKind::Mod4Double => mod4_double(a),
            OpKind::Gf4Add => gf4_add(a, b),
            OpKind::Gf4Mul => gf4_mul(a, b),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OpKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ArithError::UnknownOp(s.to_string()))
    }
}

/// Evaluates the published minimal two-level/XOR function for `kind`
/// directly on the encoded bits. `y` is ignored for unary kinds.
pub fn bitwise_formula(kind: OpKind, x: BitPair, y: BitPair) -> BitPair {
    let (x1, x2) = (x.msb, x.lsb);
    let (y1, y2) = (y.msb, y.lsb);
    match kind {
        OpKind::Mod4Add => BitPair::new((x1 ^ y1) ^ (x2 & y2), x2 ^ y2),
        OpKind::Mod4Mul => BitPair::new((x1 & y2) ^ (x2 & y1), x2 & y2),
        OpKind::Mod4Sub => BitPair::new((x1 ^ y1) ^ (!x2 & y2), (x2 & !y2) | (!x2 & y2)),
        OpKind::Mod4Neg => BitPair::new(x1 ^ x2, x2),
        OpKind::Mod4Double => BitPair::new(x2, false),
        OpKind::Gf4Add => BitPair::new(x1 ^ y1, x2 ^ y2),
        OpKind::Gf4Mul => {
            let m1 = (x1 & !y1 & y2) | (x1 & !x2 & y1 & !y2) | (!x1 & x2 & y1) | (x2 & y1 & y2);
            let m2 = (x1 & y1) ^ (x2 & y2);
            BitPair::new(m1, m2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u8) -> Quat {
        Quat::new(v).unwrap()
    }

    #[test]
    fn quat_range() {
        assert!(Quat::new(3).is_ok());
        assert_eq!(Quat::new(4), Err(ArithError::LevelOutOfRange(4)));
        assert_eq!(Quat::wrapping(6), q(2));
    }

    #[test]
    fn table_examples() {
        assert_eq!(mod4_add(q(2), q(3)), q(1));
        assert_eq!(mod4_add(q(3), q(3)), q(2));
        assert_eq!(mod4_sub(q(2), q(3)), q(3));
        assert_eq!(mod4_sub(q(1), q(2)), q(3));
        assert_eq!(mod4_mul(q(3), q(3)), q(1));
        assert_eq!(mod4_mul(q(2), q(3)), q(2));
        assert_eq!(mod4_neg(q(1)), q(3));
        assert_eq!(mod4_neg(q(0)), q(0));
        assert_eq!(mod4_neg(q(2)), q(2));
        assert_eq!(mod4_double(q(1)), q(2));
        assert_eq!(mod4_double(q(3)), q(2));
        assert_eq!(gf4_add(q(2), q(3)), q(1));
        assert_eq!(gf4_add(q(1), q(2)), q(3));
        assert_eq!(gf4_mul(q(2), q(2)), q(3));
        assert_eq!(gf4_mul(q(3), q(3)), q(2));
        assert_eq!(gf4_mul_poly(q(2), q(2)), q(3));
        assert_eq!(gf4_mul_poly(q(2), q(3)), q(1));
        for a in Quat::ALL {
            assert_eq!(mod4_add(Quat::ZERO, a), a);
            assert_eq!(mod4_sub(a, Quat::ZERO), a);
            assert_eq!(mod4_mul(a, Quat::ZERO), Quat::ZERO);
            assert_eq!(gf4_add(a, a), Quat::ZERO);
            assert_eq!(gf4_mul(Quat::ONE, a), a);
            assert_eq!(gf4_mul_poly(Quat::ZERO, a), Quat::ZERO);
        }
    }

    #[test]
    fn encoding() {
        assert_eq!(encode_q2b(q(2)), BitPair::new(true, false));
        assert_eq!(encode_q2b(q(0)), BitPair::new(false, false));
        assert_eq!(encode_q2b(q(3)), BitPair::new(true, true));
        assert_eq!(decode_b2q(BitPair::new(false, true)), q(1));
        assert_eq!(decode_b2q(BitPair::new(true, false)), q(2));
        for a in Quat::ALL {
            assert_eq!(decode_b2q(encode_q2b(a)), a);
        }
        assert_eq!(BitPair::from_bits(1, 2), Err(ArithError::BitOutOfRange(2)));
    }

    #[test]
    fn formula_examples() {
        let two = BitPair::new(true, false);
        let three = BitPair::new(true, true);
        let zero = BitPair::new(false, false);
        assert_eq!(bitwise_formula(OpKind::Mod4Mul, two, three), two);
        assert_eq!(bitwise_formula(OpKind::Gf4Mul, two, two), three);
        assert_eq!(bitwise_formula(OpKind::Mod4Neg, zero, three), zero);
    }

    #[test]
    fn op_names_round_trip() {
        for k in OpKind::ALL {
            assert_eq!(k.name().parse::<OpKind>().unwrap(), k);
        }
        assert!("mod5-add".parse::<OpKind>().is_err());
    }
}
