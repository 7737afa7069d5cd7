//! Fixed-length bitstrings of at most 64 bits.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A bitstring `x_0 x_1 … x_{n-1}` packed into a `u64`, bit `i` of the word
/// holding `x_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString {
    len: usize,
    bits: u64,
}

impl BitString {
    pub const MAX_LEN: usize = 64;

    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > Self::MAX_LEN {
            return domain(format!("bitstring length {len} exceeds 64"));
        }
        if len < 64 && bits >> len != 0 {
            return domain(format!("value {bits:#x} does not fit in {len} bits"));
        }
        Ok(Self { len, bits })
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len <= Self::MAX_LEN);
        Self { len, bits: 0 }
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mut word = 0u64;
        for (i, &b) in bits.iter().enumerate().take(64) {
            word |= (b as u64) << i;
        }
        Self::new(bits.len(), word)
    }

    /// Parses a hexadecimal string; the least significant hex digit carries
    /// `x_0..x_3`.
    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let s = hex.trim_start_matches("0x");
        let bits = u64::from_str_radix(s, 16)
            .map_err(|e| crate::Error::Domain(format!("bad hex bitstring {hex:?}: {e}")))?;
        Self::new(len, bits)
    }

    pub fn to_hex(&self) -> String {
        format!("{:x}", self.bits)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let bits = if len == 64 { rng.gen() } else { rng.gen::<u64>() & ((1u64 << len) - 1) };
        Self { len, bits }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn word(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.bits >> i & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        Self { len: self.len, bits: self.bits ^ other.bits }
    }

    pub fn distance(&self, other: &Self) -> usize {
        self.xor(other).weight()
    }

    pub fn complement(&self) -> Self {
        let mask = if self.len == 64 { u64::MAX } else { (1u64 << self.len) - 1 };
        Self { len: self.len, bits: !self.bits & mask }
    }

    /// Appends `extra` zero bits after position `len - 1`.
    pub fn pad_zeros(&self, extra: usize) -> Result<Self> {
        Self::new(self.len + extra, self.bits)
    }

    /// Strings of length `len` with exactly `weight` ones, in increasing
    /// numeric order.
    pub fn all_of_weight(len: usize, weight: usize) -> Vec<Self> {
        assert!(len <= 30, "enumeration capped at 30 bits");
        (0u64..1 << len)
            .filter(|w| w.count_ones() as usize == weight)
            .map(|bits| Self { len, bits })
            .collect()
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}
