// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference computations, independent of the coset engine.
//!
//! Everything here works on words of at most 24 bits packed into `u64`
//! and trades speed for obviousness. Used by tests and `oracle-check`.

use std::collections::VecDeque;

use crate::gf2linalg::SymmetricMatrix;
use crate::{Error, Result};

/// Largest length handled by the hypercube searches.
pub const MAX_ORACLE_LENGTH: usize = 24;

fn check_len(n: usize) -> Result<()> {
    if n > MAX_ORACLE_LENGTH {
        return Err(Error::OutOfRange(format!("oracle length {n} exceeds {MAX_ORACLE_LENGTH}")));
    }
    Ok(())
}

/// Every codeword spanned by `generators`, in no particular order.
pub fn span(generators: &[u64]) -> Vec<u64> {
    let mut words = vec![0u64];
    for &g in generators {
        let extra: Vec<u64> = words.iter().map(|w| w ^ g).collect();
        words.extend(extra);
    }
    words.sort_unstable();
    words.dedup();
    words
}

/// Evaluations of the monomials of degree at most `k` in `m <= 6`
/// variables: a basis of `RM(k, m)` computed from the definition.
pub fn rm_generators(k: usize, m: usize) -> Result<Vec<u64>> {
    if m > 6 {
        return Err(Error::OutOfRange(format!("m = {m} exceeds 6")));
    }
    let eval = |mono: u32| (0u32..1 << m).fold(0u64, |acc, x| acc | u64::from(x & mono == mono) << x);
    Ok((0u32..1 << m)
        .filter(|x| x.count_ones() as usize <= k)
        .map(eval)
        .collect())
}

/// All codewords of `RM(k, m)` (dimension at most 24).
pub fn rm_codewords(k: usize, m: usize) -> Result<Vec<u64>> {
    let gens = rm_generators(k, m)?;
    check_len(gens.len())?;
    Ok(span(&gens))
}

/// `min_c wt(v ^ c)` by scanning the codewords.
pub fn distance_by_enumeration(v: u64, codewords: &[u64]) -> u32 {
    codewords.iter().map(|c| (v ^ c).count_ones()).min().unwrap_or(u32::MAX)
}

/// Distance of every word of length `n` to the set `sources`, by a
/// multi-source breadth-first search on the hypercube.
pub fn hypercube_distances(n: usize, sources: &[u64]) -> Result<Vec<u8>> {
    check_len(n)?;
    let mut dist = vec![u8::MAX; 1 << n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s as usize] != 0 {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize] + 1;
        for bit in 0..n {
            let y = (x ^ 1 << bit) as usize;
            if dist[y] == u8::MAX {
                dist[y] = d;
                queue.push_back(y as u64);
            }
        }
    }
    Ok(dist)
}

/// Covering radius of a set of words.
pub fn covering_radius(n: usize, set: &[u64]) -> Result<u32> {
    Ok(u32::from(hypercube_distances(n, set)?.into_iter().max().unwrap_or(0)))
}

/// Metric complement of a set: every word at maximal distance, sorted.
pub fn metric_complement(n: usize, set: &[u64]) -> Result<Vec<u64>> {
    let dist = hypercube_distances(n, set)?;
    let r = dist.iter().copied().max().unwrap_or(0);
    Ok((0..dist.len() as u64).filter(|&x| dist[x as usize] == r).collect())
}

/// Whether the set equals the complement of its complement.
pub fn is_metrically_regular(n: usize, set: &[u64]) -> Result<bool> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(metric_complement(n, &metric_complement(n, &sorted)?)? == sorted)
}

/// Codewords with coordinate `position` deleted.
pub fn puncture(codewords: &[u64], position: usize) -> Vec<u64> {
    let low = (1u64 << position) - 1;
    let mut out: Vec<u64> = codewords
        .iter()
        .map(|&c| (c & low) | (c >> (position + 1)) << position)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Distance of a truth table (`m <= 6`) to the affine functions, over all
/// `2^(m+1)` of them.
pub fn affine_distance(m: usize, table: u64) -> u32 {
    let n = 1u32 << m;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    (0u32..n)
        .flat_map(|a| {
            let lin = (0..n).fold(0u64, |acc, x| acc | u64::from((a & x).count_ones() & 1) << x);
            [lin, lin ^ full]
        })
        .map(|l| (table ^ l).count_ones())
        .min()
        .unwrap_or(0)
}

/// `t(S)` for every symmetric `m x m` matrix, indexed by its packed triangle:
/// the least number of outer products `b b^T` summing to it, found by
/// breadth-first search from zero.
pub fn t_table(m: usize) -> Result<Vec<u8>> {
    let bits = SymmetricMatrix::packed_len(m);
    if bits > MAX_ORACLE_LENGTH {
        return Err(Error::OutOfRange(format!("t table of order {m}")));
    }
    let steps: Vec<usize> = (1u32..1 << m)
        .map(|b| SymmetricMatrix::from_outer_products(m, &[b]).packed() as usize)
        .collect();
    let mut t = vec![u8::MAX; 1 << bits];
    t[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in &steps {
            if t[x ^ s] == u8::MAX {
                t[x ^ s] = t[x] + 1;
                queue.push_back(x ^ s);
            }
        }
    }
    Ok(t)
}

/// Syndrome of `word` against parity-check rows: bit `i` is `<word, rows[i]>`.
pub fn syndrome(word: u64, rows: &[u64]) -> usize {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (i, r)| acc | (((word & r).count_ones() & 1) as usize) << i)
}

/// A minimum-weight word and its weight for every syndrome, trying words
/// of weight `0, 1, ..., max_weight` in turn (`n <= 64`). Syndromes not
/// reached are `None`.
pub fn coset_leaders(n: usize, rows: &[u64], max_weight: usize) -> Result<Vec<Option<(u8, u64)>>> {
    if rows.len() > MAX_ORACLE_LENGTH || n > 64 {
        return Err(Error::OutOfRange(format!("{} parity checks on length {n}", rows.len())));
    }
    let mut leaders = vec![None; 1 << rows.len()];
    leaders[0] = Some((0, 0));
    for w in 1..=max_weight.min(n) {
        // Gosper's hack over all n-bit words of weight w
        let mut x: u64 = (1u64 << w) - 1;
        loop {
            let s = syndrome(x, rows);
            if leaders[s].is_none() {
                leaders[s] = Some((w as u8, x));
            }
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            if r == 0 || (n < 64 && r >> n != 0) {
                break;
            }
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    Ok(leaders)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_codes() {
        let rep = rm_codewords(0, 3).unwrap();
        assert_eq!(rep, vec![0, 0xff]);
        assert_eq!(covering_radius(8, &rep).unwrap(), 4);
        assert_eq!(rm_codewords(1, 4).unwrap().len(), 32);
        assert_eq!(covering_radius(16, &rm_codewords(1, 4).unwrap()).unwrap(), 6);
    }

    #[test]
    fn repetition_code_is_regular() {
        assert!(is_metrically_regular(5, &[0, 0b11111]).unwrap());
        // a single word: its complement is the antipode, and back
        assert!(is_metrically_regular(4, &[0b0101]).unwrap());
    }

    #[test]
    fn puncture_drops_a_coordinate() {
        assert_eq!(puncture(&[0b1011], 1), vec![0b101]);
        assert_eq!(puncture(&[0b1, 0b0], 0), vec![0]);
    }

    #[test]
    fn affine_distance_of_bent_function() {
        // x1x2 + x3x4 is bent
        let f = (0u64..16).fold(0, |acc, x| acc | (((x & 1) & (x >> 1 & 1)) ^ ((x >> 2 & 1) & (x >> 3 & 1))) << x);
        assert_eq!(affine_distance(4, f), 6);
    }

    #[test]
    fn leader_weights_of_hamming_code() {
        // the [7,4] Hamming code is perfect: every nonzero syndrome has a weight-1 leader
        let rows = [0b1010101, 0b1100110, 0b1111000];
        let leaders = coset_leaders(7, &rows, 3).unwrap();
        assert_eq!(leaders[0], Some((0, 0)));
        assert!(leaders[1..].iter().all(|l| matches!(l, Some((1, _)))));
    }

    #[test]
    fn t_table_small_orders() {
        let t = t_table(2).unwrap();
        // zero, a rank-one diagonal matrix, the hyperbolic plane (needs 3)
        assert_eq!(t[0], 0);
        assert_eq!(*t.iter().max().unwrap(), 3);
        assert!(t.iter().all(|&v| v != u8::MAX));
    }
}
