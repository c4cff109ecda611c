//! Bit-pattern helpers shared by the gate and simulation code.
//!
//! Throughout the crate a bit vector is an ordered `[bool]` whose first
//! element is the first-listed port (A before B before C ...). When a
//! vector is packed into an integer pattern, the first element becomes the
//! most significant bit, so ascending pattern order matches the row order
//! of a conventional truth table.

use thiserror::Error;

/// Packs a bit slice into an integer pattern, first element as MSB.
pub fn pack(bits: &[bool]) -> usize {
    debug_assert!(bits.len() <= usize::BITS as usize);
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Unpacks the low `width` bits of `pattern` into a vector, MSB first.
pub fn unpack(pattern: usize, width: usize) -> Vec<bool> {
    (0..width).rev().map(|i| (pattern >> i) & 1 == 1).collect()
}

/// XOR-fold of a bit slice: true iff an odd number of bits are set.
pub fn parity(bits: &[bool]) -> bool {
    bits.iter().fold(false, |acc, &b| acc ^ b)
}

/// Parity of the low `width` bits of a packed pattern.
pub fn pattern_parity(pattern: usize, width: usize) -> bool {
    (pattern & ((1usize << width) - 1)).count_ones() % 2 == 1
}

/// Renders bits as a compact '0'/'1' string, first element leftmost.
pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Renders the low `width` bits of a packed pattern, MSB leftmost.
pub fn format_pattern(pattern: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|i| if (pattern >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitStringError {
    #[error("invalid bit character {0:?} (expected '0' or '1')")]
    BadChar(char),
    #[error("expected {expected} bits, got {got}")]
    BadLength { expected: usize, got: usize },
}

/// Parses a '0'/'1' string into a bit vector.
pub fn parse_bitstring(s: &str) -> Result<Vec<bool>, BitStringError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(BitStringError::BadChar(other)),
        })
        .collect()
}

/// Parses a '0'/'1' string that must have exactly `width` bits.
pub fn parse_bitstring_exact(s: &str, width: usize) -> Result<Vec<bool>, BitStringError> {
    let bits = parse_bitstring(s)?;
    if bits.len() != width {
        return Err(BitStringError::BadLength {
            expected: width,
            got: bits.len(),
        });
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_is_msb_first() {
        assert_eq!(pack(&[true, false]), 0b10);
        assert_eq!(pack(&[false, true, true]), 0b011);
        assert_eq!(pack(&[]), 0);
    }

    #[test]
    fn unpack_round_trips() {
        for width in 1..=6 {
            for pattern in 0..(1usize << width) {
                assert_eq!(pack(&unpack(pattern, width)), pattern);
            }
        }
    }

    #[test]
    fn parity_counts_odd_ones() {
        assert!(!parity(&[]));
        assert!(parity(&[true, false, false]));
        assert!(!parity(&[true, true]));
        assert!(pattern_parity(0b100, 3));
        assert!(!pattern_parity(0b110, 3));
    }

    #[test]
    fn bitstring_round_trip_and_errors() {
        assert_eq!(
            parse_bitstring("0110").unwrap(),
            vec![false, true, true, false]
        );
        assert_eq!(format_bits(&[false, true, true, false]), "0110");
        assert_eq!(parse_bitstring("01x"), Err(BitStringError::BadChar('x')));
        assert_eq!(
            parse_bitstring_exact("01", 3),
            Err(BitStringError::BadLength {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn format_pattern_matches_unpack() {
        assert_eq!(format_pattern(0b1010, 4), "1010");
        assert_eq!(format_pattern(0b1, 3), "001");
    }
}
