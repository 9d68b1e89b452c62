//! Perfect binary Hamming codes, used to build small dominating sets of tori.

use crate::error::{Error, Result};

/// Codewords of the Hamming code of redundancy `r` (block length `2^r - 1`),
/// as bitmasks (bit j = coordinate j). A word is in the code iff the XOR of
/// the binary representations of its set positions (1-based) vanishes.
/// Returns the `2^(2^r - 1) / 2^r` codewords sorted as integers.
///
/// `r = 1` degenerates to the zero code of length 1 (just `{0}`), which keeps
/// the torus constructions uniform at small `d`.
pub fn hamming_code(r: usize) -> Result<Vec<u32>> {
    if r == 0 || r > 4 {
        return Err(Error::invalid(format!("hamming_code supports 1 <= r <= 4, got {r}")));
    }
    let len = (1usize << r) - 1;
    let mut words = Vec::with_capacity(1 << (len - r));
    for x in 0u32..(1 << len) {
        let mut syndrome = 0u32;
        let mut bits = x;
        while bits != 0 {
            let j = bits.trailing_zeros();
            syndrome ^= j + 1; // column j holds the binary representation of j+1
            bits &= bits - 1;
        }
        if syndrome == 0 {
            words.push(x);
        }
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight(x: u32) -> u32 {
        x.count_ones()
    }

    #[test]
    fn sizes() {
        assert_eq!(hamming_code(1).unwrap(), vec![0]);
        assert_eq!(hamming_code(2).unwrap(), vec![0, 0b111]);
        assert_eq!(hamming_code(3).unwrap().len(), 16);
        assert_eq!(hamming_code(4).unwrap().len(), 2048);
        assert!(hamming_code(5).is_err());
    }

    #[test]
    fn min_distance_three() {
        for r in 2..=3 {
            let code = hamming_code(r).unwrap();
            for (i, &a) in code.iter().enumerate() {
                for &b in &code[i + 1..] {
                    assert!(weight(a ^ b) >= 3);
                }
            }
        }
    }

    #[test]
    fn perfect_covering() {
        // balls of radius 1 around codewords partition the whole space
        for r in 2..=3 {
            let len = (1usize << r) - 1;
            let code = hamming_code(r).unwrap();
            let mut covered = vec![0u32; 1 << len];
            for &c in &code {
                covered[c as usize] += 1;
                for j in 0..len {
                    covered[(c ^ (1 << j)) as usize] += 1;
                }
            }
            assert!(covered.iter().all(|&k| k == 1));
        }
    }
}
