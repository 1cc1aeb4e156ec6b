//! Binary n-tuples.
//!
//! An [`NTuple`] is stored as a mask whose most significant of the `n` bits is
//! component 1 (qubit 1). Printing the mask in binary with `n` digits therefore
//! gives the tuple as it is usually written, e.g. `(1,0,1)` is `"101"`, and the
//! mask is also the computational-basis index `|k_1 … k_n⟩`.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NTuple(pub u32);

impl NTuple {
    pub const ZERO: NTuple = NTuple(0);

    /// Unit tuple `e_j` with a single one at component `j` (1-based).
    pub fn unit(j: usize, n: u32) -> NTuple {
        debug_assert!(j >= 1 && j <= n as usize);
        NTuple(1 << (n as usize - j))
    }

    /// All-ones tuple `(1,…,1)`.
    pub fn ones(n: u32) -> NTuple {
        NTuple(((1u64 << n) - 1) as u32)
    }

    /// Component `j` (1-based).
    pub fn component(self, j: usize, n: u32) -> bool {
        (self.0 >> (n as usize - j)) & 1 == 1
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Integer dot product `Σ a_j b_j` (not reduced).
    pub fn dot(self, other: NTuple) -> u32 {
        (self.0 & other.0).count_ones()
    }

    /// Dot product modulo 2.
    pub fn dot2(self, other: NTuple) -> u32 {
        self.dot(other) & 1
    }

    /// Parse a string of `0`/`1` characters, component 1 first.
    pub fn parse(s: &str, n: u32) -> Result<NTuple> {
        let s = s.trim();
        if s.len() != n as usize {
            return Err(invalid(format!("tuple '{s}' must have exactly {n} binary digits")));
        }
        let mut bits = 0u32;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(invalid(format!("tuple '{s}' contains non-binary digit '{c}'"))),
            }
        }
        Ok(NTuple(bits))
    }

    pub fn display(self, n: u32) -> TupleDisplay {
        TupleDisplay { bits: self.0, n }
    }

    /// Convert from a component-indexed vector mask (bit `i` = component `i+1`).
    pub(crate) fn from_component_mask(v: u32, n: u32) -> NTuple {
        NTuple(reverse_bits(v, n))
    }

    pub(crate) fn to_component_mask(self, n: u32) -> u32 {
        reverse_bits(self.0, n)
    }
}

fn reverse_bits(v: u32, n: u32) -> u32 {
    if n == 0 {
        0
    } else {
        v.reverse_bits() >> (32 - n)
    }
}

impl BitXor for NTuple {
    type Output = NTuple;
    fn bitxor(self, rhs: NTuple) -> NTuple {
        NTuple(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for NTuple {
    fn bitxor_assign(&mut self, rhs: NTuple) {
        self.0 ^= rhs.0;
    }
}

pub struct TupleDisplay {
    bits: u32,
    n: u32,
}

impl fmt::Display for TupleDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            let bit = (self.bits >> (self.n - 1 - j)) & 1;
            write!(f, "{bit}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let t = NTuple::parse("101", 3).unwrap();
        assert_eq!(t.0, 0b101);
        assert_eq!(t.display(3).to_string(), "101");
        assert!(t.component(1, 3));
        assert!(!t.component(2, 3));
        assert_eq!(NTuple::unit(1, 3), NTuple(0b100));
        assert!(NTuple::parse("12", 2).is_err());
        assert!(NTuple::parse("1", 2).is_err());
    }

    #[test]
    fn component_mask_roundtrip() {
        for n in 1..=12 {
            for v in [0u32, 1, 5, (1 << n) - 1] {
                let v = v & ((1u32 << n) - 1);
                let t = NTuple::from_component_mask(v, n);
                assert_eq!(t.to_component_mask(n), v);
            }
        }
        // component 1 ↔ bit 0 of the component mask
        assert_eq!(NTuple::from_component_mask(0b001, 3), NTuple(0b100));
    }

    #[test]
    fn dot_products() {
        let a = NTuple(0b1101);
        let b = NTuple(0b0111);
        assert_eq!(a.dot(b), 2);
        assert_eq!(a.dot2(b), 0);
        assert_eq!(NTuple::ones(5).weight(), 5);
    }
}
