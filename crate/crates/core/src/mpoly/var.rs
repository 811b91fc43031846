//! Structured variable identifiers.
//!
//! The derived `Ord` on [`VarId`] is the canonical global variable order:
//! plain variables by index, then positive block variables by (block, σ),
//! then negative block variables by (block, σ), then gadget variables by
//! (kind, indices). Within a block all strings have the same width and the
//! first position of the interval is the most significant bit of `sigma`, so
//! numeric order on `sigma` is lexicographic order on strings.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Auxiliary variables introduced by gadgets, placeholders and encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gadget {
    /// Second factor of the `x_i ↦ x_i y_i` lift, rendered `y_i`.
    LiftY(u32),
    /// Selector `z_{i,j}` of the any-order gadget.
    Z(u32, u32),
    /// Pre-gadget variable `w_{i,j}` of the any-order instance.
    W(u32, u32),
    /// Axiom placeholder, rendered `ya_i`.
    AxiomPh(u32),
    /// Boolean-axiom placeholder, rendered `zb_k`.
    BoolPh(u32),
    /// Field value of an encoded circuit node (`sub = 0`) or of its
    /// `sub`-th chain extension variable.
    Node { gate: u32, sub: u32 },
    /// Unary bit `bit` of the node `(gate, sub)`.
    Bit { gate: u32, sub: u32, bit: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    Plain(u32),
    /// `x^{(block)}_σ`; `block` is the 1-based word index.
    Pos { block: u16, width: u8, sigma: u32 },
    /// `y^{(block)}_σ`.
    Neg { block: u16, width: u8, sigma: u32 },
    Gadget(Gadget),
}

pub const MAX_BLOCK_WIDTH: u8 = 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid variable name {0:?}")]
pub struct BadVarName(pub String);

impl VarId {
    pub fn plain(i: u32) -> VarId {
        VarId::Plain(i)
    }

    pub fn pos(block: u16, width: u8, sigma: u32) -> VarId {
        debug_assert!(width <= MAX_BLOCK_WIDTH && sigma >> width == 0);
        VarId::Pos { block, width, sigma }
    }

    pub fn neg(block: u16, width: u8, sigma: u32) -> VarId {
        debug_assert!(width <= MAX_BLOCK_WIDTH && sigma >> width == 0);
        VarId::Neg { block, width, sigma }
    }

    pub fn gadget(g: Gadget) -> VarId {
        VarId::Gadget(g)
    }

    /// Block index of a positive or negative block variable.
    pub fn block(&self) -> Option<u16> {
        match self {
            VarId::Pos { block, .. } | VarId::Neg { block, .. } => Some(*block),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

fn bits(width: u8, sigma: u32) -> String {
    (0..width)
        .map(|t| if (sigma >> (width - 1 - t)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::Plain(i) => write!(f, "x_{i}"),
            VarId::Pos { block, width, sigma } => write!(f, "x^({block})_{}", bits(width, sigma)),
            VarId::Neg { block, width, sigma } => write!(f, "y^({block})_{}", bits(width, sigma)),
            VarId::Gadget(g) => match g {
                Gadget::LiftY(i) => write!(f, "y_{i}"),
                Gadget::Z(i, j) => write!(f, "z_{{{i},{j}}}"),
                Gadget::W(i, j) => write!(f, "w_{{{i},{j}}}"),
                Gadget::AxiomPh(i) => write!(f, "ya_{i}"),
                Gadget::BoolPh(k) => write!(f, "zb_{k}"),
                Gadget::Node { gate, sub } => write!(f, "g_{{{gate},{sub}}}"),
                Gadget::Bit { gate, sub, bit } => write!(f, "b_{{{gate},{sub},{bit}}}"),
            },
        }
    }
}

fn num<T: FromStr>(s: &str) -> Option<T> {
    if s.is_empty() || s.len() > 10 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn braced(s: &str, n: usize) -> Option<Vec<u32>> {
    let inner = s.strip_prefix('{')?.strip_suffix('}')?;
    let parts: Vec<u32> = inner.split(',').map(num).collect::<Option<_>>()?;
    (parts.len() == n).then_some(parts)
}

fn block_var(rest: &str) -> Option<(u16, u8, u32)> {
    let rest = rest.strip_prefix('(')?;
    let (block, tail) = rest.split_once(')')?;
    let block: u16 = num(block)?;
    let s = tail.strip_prefix('_')?;
    if s.is_empty() || s.len() > MAX_BLOCK_WIDTH as usize || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    let sigma = s.bytes().fold(0u32, |acc, b| (acc << 1) | u32::from(b == b'1'));
    Some((block, s.len() as u8, sigma))
}

impl FromStr for VarId {
    type Err = BadVarName;

    fn from_str(s: &str) -> Result<VarId, BadVarName> {
        let bad = || BadVarName(s.to_string());
        let v = if let Some(r) = s.strip_prefix("x^") {
            let (block, width, sigma) = block_var(r).ok_or_else(bad)?;
            VarId::Pos { block, width, sigma }
        } else if let Some(r) = s.strip_prefix("y^") {
            let (block, width, sigma) = block_var(r).ok_or_else(bad)?;
            VarId::Neg { block, width, sigma }
        } else if let Some(r) = s.strip_prefix("x_") {
            VarId::Plain(num(r).ok_or_else(bad)?)
        } else if let Some(r) = s.strip_prefix("ya_") {
            VarId::Gadget(Gadget::AxiomPh(num(r).ok_or_else(bad)?))
        } else if let Some(r) = s.strip_prefix("zb_") {
            VarId::Gadget(Gadget::BoolPh(num(r).ok_or_else(bad)?))
        } else if let Some(r) = s.strip_prefix("y_") {
            VarId::Gadget(Gadget::LiftY(num(r).ok_or_else(bad)?))
        } else if let Some(r) = s.strip_prefix("z_") {
            let p = braced(r, 2).ok_or_else(bad)?;
            VarId::Gadget(Gadget::Z(p[0], p[1]))
        } else if let Some(r) = s.strip_prefix("w_") {
            let p = braced(r, 2).ok_or_else(bad)?;
            VarId::Gadget(Gadget::W(p[0], p[1]))
        } else if let Some(r) = s.strip_prefix("g_") {
            let p = braced(r, 2).ok_or_else(bad)?;
            VarId::Gadget(Gadget::Node { gate: p[0], sub: p[1] })
        } else if let Some(r) = s.strip_prefix("b_") {
            let p = braced(r, 3).ok_or_else(bad)?;
            VarId::Gadget(Gadget::Bit { gate: p[0], sub: p[1], bit: p[2] })
        } else {
            return Err(bad());
        };
        Ok(v)
    }
}
