//! Bit-vector helpers shared across the crate.
//!
//! Bits are plain `Vec<bool>`; serialized form is a 0/1 string with index 0
//! leftmost.

use crate::error::{Error, Result};

/// Ordered sequence of bits, index 0 first.
pub type Bits = Vec<bool>;

/// Parses a 0/1 string (index 0 leftmost) into bits.
pub fn bits_from_str(s: &str) -> Result<Bits> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::invalid_input(format!(
                "expected 0/1 string, found {other:?}"
            ))),
        })
        .collect()
}

/// Formats bits as a 0/1 string, index 0 leftmost.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Reads bit `j` (LSB = bit 0) of `index` as a bool.
#[inline]
pub fn index_bit(index: usize, j: usize) -> bool {
    (index >> j) & 1 == 1
}

/// Packs bits into an integer with `bits[j]` as bit `j` (LSB first).
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0usize, |acc, (j, &b)| acc | ((b as usize) << j))
}
