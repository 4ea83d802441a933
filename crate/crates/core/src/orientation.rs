//! Orientations of a linear tree `v_1 - v_2 - ... - v_n`.
//!
//! An orientation is a sign vector `(e_1, .., e_{n-1})`; `e_j = +` when the
//! edge `{v_j, v_{j+1}}` starts at `v_j`. Signs are stored as bits (bit
//! `j-1` set iff `e_j = +`). Text form is a string over `+`/`-` of length
//! `n-1`.
//!
//! Orientations are ordered like their text form under byte order, so `+`
//! sorts before `-` and earlier edges are more significant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported tree size.
pub const MAX_TREE_SIZE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error("tree size {0} is outside 1..={MAX_TREE_SIZE}")]
    NTooLarge(usize),
    #[error("v_{0} is not a sink")]
    NotASink(usize),
    #[error("vertex index {index} out of range for a tree with {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("invalid character {0:?} in orientation string")]
    BadChar(char),
}

/// Vertex count of a linear tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearTree {
    n: usize,
}

impl LinearTree {
    pub fn new(n: usize) -> Result<Self, OrientationError> {
        if n == 0 || n > MAX_TREE_SIZE {
            return Err(OrientationError::NTooLarge(n));
        }
        Ok(LinearTree { n })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.n - 1
    }

    /// Edge `j` (1-based) joins `v_j` and `v_{j+1}`.
    pub fn edge(&self, j: usize) -> (usize, usize) {
        (j, j + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Orientation {
    n: u8,
    bits: u16,
}

impl Orientation {
    /// Orientation of an `n`-vertex tree from its sign bits; bits beyond
    /// `n-1` are discarded.
    pub fn from_bits(n: usize, bits: u32) -> Result<Self, OrientationError> {
        LinearTree::new(n)?;
        let mask = (1u32 << (n - 1)) - 1;
        Ok(Orientation {
            n: n as u8,
            bits: (bits & mask) as u16,
        })
    }

    /// All signs `-`.
    pub fn all_minus(n: usize) -> Result<Self, OrientationError> {
        Self::from_bits(n, 0)
    }

    /// All signs `+`.
    pub fn all_plus(n: usize) -> Result<Self, OrientationError> {
        Self::from_bits(n, u32::MAX)
    }

    pub fn tree_size(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits as u32
    }

    /// Sign of edge `j` (1-based): `true` for `+`.
    pub fn sign(&self, j: usize) -> bool {
        debug_assert!(j >= 1 && j < self.tree_size());
        self.bits >> (j - 1) & 1 == 1
    }

    pub fn signs(&self) -> impl Iterator<Item = bool> + '_ {
        (1..self.tree_size()).map(|j| self.sign(j))
    }

    /// Drops the last edge, giving an orientation of the `(n-1)`-vertex tree.
    pub fn truncate_last(&self) -> Option<Orientation> {
        (self.n > 1).then(|| Orientation {
            n: self.n - 1,
            bits: self.bits & ((1u16 << (self.n - 2)) - 1),
        })
    }

    /// Appends an edge with the given sign.
    pub fn extend(&self, plus: bool) -> Result<Orientation, OrientationError> {
        Orientation::from_bits(
            self.tree_size() + 1,
            self.bits() | (u32::from(plus) << (self.n - 1)),
        )
    }

    /// Same orientation with edge `j` reversed.
    pub fn flip(&self, j: usize) -> Orientation {
        debug_assert!(j >= 1 && j < self.tree_size());
        Orientation {
            n: self.n,
            bits: self.bits ^ (1 << (j - 1)),
        }
    }

    pub fn is_sink(&self, j: usize) -> bool {
        let n = self.tree_size();
        if j == 0 || j > n {
            return false;
        }
        if n == 1 {
            return true;
        }
        let left_in = j == 1 || self.sign(j - 1);
        let right_in = j == n || !self.sign(j);
        left_in && right_in
    }

    pub fn to_sign_string(&self) -> String {
        self.signs().map(|s| if s { '+' } else { '-' }).collect()
    }

    /// Parses a sign string for a tree of `len + 1` vertices. Accepts ASCII
    /// `-` and U+2212 for minus.
    pub fn parse(s: &str) -> Result<Orientation, OrientationError> {
        let mut bits = 0u32;
        let mut len = 0usize;
        for c in s.chars() {
            let plus = match c {
                '+' => true,
                '-' | '\u{2212}' => false,
                other => return Err(OrientationError::BadChar(other)),
            };
            if len + 1 >= MAX_TREE_SIZE {
                return Err(OrientationError::NTooLarge(len + 2));
            }
            bits |= u32::from(plus) << len;
            len += 1;
        }
        Orientation::from_bits(len + 1, bits)
    }
}

impl Ord for Orientation {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.bits ^ other.bits;
        let first = if diff == 0 {
            None
        } else {
            Some(diff.trailing_zeros() as usize)
        };
        match first {
            // shorter prefix wins when the common edges agree
            None => self.n.cmp(&other.n),
            Some(b) if b + 1 >= self.n.min(other.n) as usize => self.n.cmp(&other.n),
            // '+' sorts before '-'
            Some(b) => {
                if self.bits >> b & 1 == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }
}

impl PartialOrd for Orientation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sign_string())
    }
}

impl FromStr for Orientation {
    type Err = OrientationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Orientation::parse(s)
    }
}

impl Serialize for Orientation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sign_string())
    }
}

impl<'de> Deserialize<'de> for Orientation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Orientation::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Every orientation of the `n`-vertex tree, in ascending order.
pub fn all_orientations(n: usize) -> Result<Vec<Orientation>, OrientationError> {
    LinearTree::new(n)?;
    let mut all: Vec<Orientation> = (0..1u32 << (n - 1))
        .map(|b| Orientation::from_bits(n, b))
        .collect::<Result<_, _>>()?;
    all.sort();
    Ok(all)
}

/// Sink vertices of `rho`, 1-based and ascending.
pub fn sinks(rho: &Orientation) -> Vec<usize> {
    (1..=rho.tree_size()).filter(|&j| rho.is_sink(j)).collect()
}

/// Reverses every edge at the sink `v_j`.
pub fn apply_sink_reversal(rho: &Orientation, j: usize) -> Result<Orientation, OrientationError> {
    let n = rho.tree_size();
    if j == 0 || j > n {
        return Err(OrientationError::VertexOutOfRange { index: j, n });
    }
    if !rho.is_sink(j) {
        return Err(OrientationError::NotASink(j));
    }
    let mut out = *rho;
    if j > 1 {
        out = out.flip(j - 1);
    }
    if j < n {
        out = out.flip(j);
    }
    Ok(out)
}

/// Number of `+` signs.
pub fn weight(rho: &Orientation) -> usize {
    rho.bits.count_ones() as usize
}
