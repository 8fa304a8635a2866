// SPDX-License-Identifier: Apache-2.0

//! Exact linear algebra over GF(2) on bit-packed data.
//!
//! Rows of a [`BitMatrix`] are packed into `u64` words, so elimination
//! steps are word-parallel XORs. [`SymmetricMatrix`] stores only the upper
//! triangle, which is the natural shape of a syndrome of the punctured
//! code `RM(m-3, m)`.

use std::fmt;

use rand::Rng;

use crate::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector of length `len <= 64` from the low bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD, "from_u64 needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits & tail_mask(len);
        }
        v
    }

    /// Builds a vector from packed words; bits past `len` are cleared.
    pub fn from_words(len: usize, words: &[u64]) -> Self {
        let mut v = Self::zeros(len);
        let n = v.words.len().min(words.len());
        v.words[..n].copy_from_slice(&words[..n]);
        v.clear_tail();
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn parse_bits(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The vector as a single word, when it fits.
    pub fn as_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        BitVector { len: self.len, words }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in distance");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Concatenation `(self, other)`: `self` occupies the low indices.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Matrix with `cols <= 64` columns whose row `i` is the word `rows[i]`.
    pub fn from_row_words(cols: usize, rows: &[u64]) -> Self {
        assert!(cols <= WORD);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, &r) in rows.iter().enumerate() {
            if cols > 0 {
                m.data[i] = r & tail_mask(cols);
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(i))
    }

    /// Row `i` as a single word; only valid when `cols <= 64`.
    pub fn row_u64(&self, i: usize) -> u64 {
        debug_assert!(self.cols <= WORD);
        if self.stride == 0 {
            0
        } else {
            self.data[i * self.stride]
        }
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= x;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in self.row(i).iter_ones() {
                for w in 0..out.stride {
                    out.data[i * out.stride + w] ^= other.data[k * other.stride + w];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn invert(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in self.row(i).iter_ones() {
                aug.set(i, j, true);
            }
            aug.set(i, n + i, true);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        Ok(BitMatrix::from_fn(n, n, |i, j| aug.get(i, n + j)))
    }

    /// Copy of the matrix restricted to the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Symmetric `m x m` matrix over GF(2), stored as its packed upper triangle
/// (diagonal included, row-major: `s11 s12 .. s1m s22 .. smm`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetricMatrix {
    m: usize,
    bits: u128,
}

impl SymmetricMatrix {
    /// Largest supported order (the packed triangle must fit in 128 bits).
    pub const MAX_ORDER: usize = 15;

    pub fn zero(m: usize) -> Self {
        assert!(m <= Self::MAX_ORDER, "symmetric matrices support m <= 15");
        Self { m, bits: 0 }
    }

    pub fn identity(m: usize) -> Self {
        let mut s = Self::zero(m);
        for i in 0..m {
            s.set(i, i, true);
        }
        s
    }

    /// Number of packed entries, `m(m+1)/2`.
    pub fn packed_len(m: usize) -> usize {
        m * (m + 1) / 2
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Packed upper-triangle bits; bit `k` is the `k`-th entry in row-major order.
    pub fn packed(&self) -> u128 {
        self.bits
    }

    pub fn from_packed(m: usize, bits: u128) -> Self {
        assert!(m <= Self::MAX_ORDER);
        let len = Self::packed_len(m);
        let mask = if len == 128 { u128::MAX } else { (1u128 << len) - 1 };
        Self { m, bits: bits & mask }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.bits >> packed_index(self.m, i, j)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let mask = 1u128 << packed_index(self.m, i, j);
        if value {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    /// Parses the upper triangle given as a `0`/`1` string, `s11` first.
    pub fn from_upper_bits(m: usize, text: &str) -> Result<Self> {
        if m > Self::MAX_ORDER {
            return Err(Error::OutOfRange(format!("m = {m} exceeds {}", Self::MAX_ORDER)));
        }
        let v = BitVector::parse_bits(text)?;
        if v.len() != Self::packed_len(m) {
            return Err(Error::DimensionMismatch {
                expected: Self::packed_len(m),
                got: v.len(),
            });
        }
        let mut bits = 0u128;
        for k in v.iter_ones() {
            bits |= 1u128 << k;
        }
        Ok(Self { m, bits })
    }

    pub fn upper_bits(&self) -> String {
        (0..Self::packed_len(self.m))
            .map(|k| if (self.bits >> k) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Lowercase hex of the packed integer, padded to whole entries.
    pub fn to_hex(&self) -> String {
        let digits = Self::packed_len(self.m).div_ceil(4).max(1);
        format!("{:0width$x}", self.bits, width = digits)
    }

    pub fn from_hex(m: usize, text: &str) -> Result<Self> {
        let bits = u128::from_str_radix(text, 16)
            .map_err(|e| Error::Parse(format!("bad hex {text:?}: {e}")))?;
        if m > Self::MAX_ORDER {
            return Err(Error::OutOfRange(format!("m = {m} exceeds {}", Self::MAX_ORDER)));
        }
        let len = Self::packed_len(m);
        if len < 128 && bits >> len != 0 {
            return Err(Error::Parse(format!("hex {text:?} has bits past the triangle")));
        }
        Ok(Self { m, bits })
    }

    pub fn from_matrix(a: &BitMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: a.cols(),
            });
        }
        let m = a.rows();
        if m > Self::MAX_ORDER {
            return Err(Error::OutOfRange(format!("m = {m} exceeds {}", Self::MAX_ORDER)));
        }
        let mut s = Self::zero(m);
        for i in 0..m {
            for j in i..m {
                if a.get(i, j) != a.get(j, i) {
                    return Err(Error::Inconsistent(format!("matrix is not symmetric at ({i}, {j})")));
                }
                s.set(i, j, a.get(i, j));
            }
        }
        Ok(s)
    }

    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.m, self.m, |i, j| self.get(i, j))
    }

    /// Row `i` as a bitmask over columns.
    pub fn row_mask(&self, i: usize) -> u32 {
        (0..self.m).fold(0, |acc, j| acc | ((self.get(i, j) as u32) << j))
    }

    pub fn row_masks(&self) -> Vec<u32> {
        (0..self.m).map(|i| self.row_mask(i)).collect()
    }

    /// The diagonal `(s11, .., smm)` as a bitmask.
    pub fn diagonal(&self) -> u32 {
        (0..self.m).fold(0, |acc, i| acc | ((self.get(i, i) as u32) << i))
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn rank(&self) -> usize {
        rank_of_words(&self.row_masks().iter().map(|&r| r as u64).collect::<Vec<_>>())
    }

    /// `sum_c c c^T` over the given column vectors (bit `i` = row `i`).
    pub fn from_outer_products(m: usize, columns: &[u32]) -> Self {
        let mut s = Self::zero(m);
        for &c in columns {
            for i in 0..m {
                if (c >> i) & 1 == 0 {
                    continue;
                }
                for j in i..m {
                    if (c >> j) & 1 == 1 {
                        s.bits ^= 1u128 << packed_index(m, i, j);
                    }
                }
            }
        }
        s
    }

    /// Enumerates every symmetric matrix of order `m` (guarded at `m <= 6`).
    pub fn all(m: usize) -> Result<impl Iterator<Item = SymmetricMatrix>> {
        if m > 6 {
            return Err(Error::Infeasible(format!(
                "enumerating all 2^{} symmetric matrices",
                Self::packed_len(m)
            )));
        }
        let len = Self::packed_len(m);
        Ok((0u128..(1u128 << len)).map(move |bits| SymmetricMatrix { m, bits }))
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricMatrix(m={}, {})", self.m, self.upper_bits())
    }
}

#[inline]
fn packed_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows before i hold m + (m-1) + .. + (m-i+1) entries
    i * m - i * i.saturating_sub(1) / 2 + (j - i)
}

/// Rank of a list of words treated as row vectors.
pub fn rank_of_words(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Translates a truth table of a function on `2^m <= 64` points by `c`:
/// bit `x` of the result is bit `x ^ c` of `t`.
#[inline]
pub fn xor_translate(t: u64, c: u32, m: usize) -> u64 {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    let mut t = t;
    for (j, &mask) in MASKS.iter().enumerate().take(m) {
        if (c >> j) & 1 == 1 {
            let s = 1u32 << j;
            t = ((t & mask) << s) | ((t >> s) & mask);
        }
    }
    t
}

/// Largest order accepted by [`enumerate_invertible`].
pub const MAX_ENUMERATION_ORDER: usize = 5;

/// Size of `GL(m, 2)`: `prod_{i<m} (2^m - 2^i)`.
pub fn gl_order(m: usize) -> u128 {
    (0..m).map(|i| (1u128 << m) - (1u128 << i)).product()
}

/// Rows of an invertible matrix of order at most 5, bit `j` of `rows[i]`
/// being entry `(i, j)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SmallMatrix {
    pub m: usize,
    pub rows: [u32; MAX_ENUMERATION_ORDER],
}

impl SmallMatrix {
    pub fn identity(m: usize) -> Self {
        let mut rows = [0; MAX_ENUMERATION_ORDER];
        for (i, r) in rows.iter_mut().enumerate().take(m) {
            *r = 1 << i;
        }
        Self { m, rows }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        let mut y = 0;
        for i in 0..self.m {
            y |= ((self.rows[i] & x).count_ones() & 1) << i;
        }
        y
    }

    /// Columns `A e_j` as bitmasks.
    pub fn columns(&self) -> [u32; MAX_ENUMERATION_ORDER] {
        let mut cols = [0; MAX_ENUMERATION_ORDER];
        for (j, c) in cols.iter_mut().enumerate().take(self.m) {
            *c = self.apply(1 << j);
        }
        cols
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.m, self.m, |i, j| (self.rows[i] >> j) & 1 == 1)
    }

    pub fn from_bit_matrix(a: &BitMatrix) -> Result<Self> {
        if !a.is_square() || a.rows() > MAX_ENUMERATION_ORDER {
            return Err(Error::OutOfRange(format!(
                "small matrices are square of order <= {MAX_ENUMERATION_ORDER}"
            )));
        }
        let mut rows = [0; MAX_ENUMERATION_ORDER];
        for (i, r) in rows.iter_mut().enumerate().take(a.rows()) {
            *r = a.row_u64(i) as u32;
        }
        Ok(Self { m: a.rows(), rows })
    }
}

/// Stream over `GL(m, 2)` in a fixed order: rows are chosen one at a time,
/// each extending the span of the previous ones, smallest candidate first.
#[derive(Clone, Debug)]
pub struct InvertibleMatrices {
    m: usize,
    rows: [u32; MAX_ENUMERATION_ORDER],
    // spans[l] = bitset over F_2^m of span(rows[..l])
    spans: [u64; MAX_ENUMERATION_ORDER + 1],
    first_row_end: u32,
    state: IterState,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl InvertibleMatrices {
    fn new(m: usize, first_rows: std::ops::Range<u32>) -> Self {
        let mut it = Self {
            m,
            rows: [0; MAX_ENUMERATION_ORDER],
            spans: [0; MAX_ENUMERATION_ORDER + 1],
            first_row_end: first_rows.end.min(1 << m),
            state: IterState::Fresh,
        };
        it.spans[0] = 1;
        let start = first_rows.start.max(1);
        if m == 0 {
            return it;
        }
        if start >= it.first_row_end {
            it.state = IterState::Done;
            return it;
        }
        it.rows[0] = start;
        it.spans[1] = it.spans[0] | xor_translate(it.spans[0], start, m);
        it.fill_from(1);
        it
    }

    fn fill_from(&mut self, level: usize) {
        for l in level..self.m {
            let r = next_outside(self.spans[l], 0, 1 << self.m).expect("span is proper");
            self.rows[l] = r;
            self.spans[l + 1] = self.spans[l] | xor_translate(self.spans[l], r, self.m);
        }
    }

    fn current(&self) -> SmallMatrix {
        SmallMatrix {
            m: self.m,
            rows: self.rows,
        }
    }

    fn advance(&mut self) -> bool {
        let mut level = self.m;
        while level > 0 {
            level -= 1;
            let limit = if level == 0 { self.first_row_end } else { 1 << self.m };
            if let Some(r) = next_outside(self.spans[level], self.rows[level] + 1, limit) {
                self.rows[level] = r;
                self.spans[level + 1] =
                    self.spans[level] | xor_translate(self.spans[level], r, self.m);
                self.fill_from(level + 1);
                return true;
            }
        }
        false
    }
}

#[inline]
fn next_outside(span: u64, from: u32, limit: u32) -> Option<u32> {
    (from..limit).find(|&v| (span >> v) & 1 == 0)
}

impl Iterator for InvertibleMatrices {
    type Item = SmallMatrix;

    fn next(&mut self) -> Option<SmallMatrix> {
        match self.state {
            IterState::Done => None,
            IterState::Fresh => {
                self.state = IterState::Running;
                Some(self.current())
            }
            IterState::Running => {
                if self.m > 0 && self.advance() {
                    Some(self.current())
                } else {
                    self.state = IterState::Done;
                    None
                }
            }
        }
    }
}

/// Every element of `GL(m, 2)` exactly once, `m <= 5`.
pub fn enumerate_invertible(m: usize) -> Result<InvertibleMatrices> {
    enumerate_invertible_with_first_rows(m, 1..(1u32 << m.min(31)))
}

/// The part of [`enumerate_invertible`] whose first row lies in `first_rows`;
/// disjoint ranges give disjoint streams.
pub fn enumerate_invertible_with_first_rows(
    m: usize,
    first_rows: std::ops::Range<u32>,
) -> Result<InvertibleMatrices> {
    if m > MAX_ENUMERATION_ORDER {
        return Err(Error::Infeasible(format!(
            "GL({m}, 2) has {} elements; enumeration is limited to m <= {MAX_ENUMERATION_ORDER}",
            gl_order(m)
        )));
    }
    Ok(InvertibleMatrices::new(m, first_rows))
}

/// Uniformly random element of `GL(m, 2)` by rejection sampling.
pub fn random_invertible<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BitMatrix {
    loop {
        let a = BitMatrix::from_fn(m, m, |_, _| rng.gen());
        if a.is_invertible() {
            return a;
        }
    }
}

/// Column operations that keep `B B^T` fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorOp {
    DeleteZeroColumn(usize),
    DeleteEqualColumns(usize, usize),
    SwapColumns(usize, usize),
    /// Adds `vector` to every listed column; the listed columns must be
    /// distinct, even in number and sum to zero.
    AddToColumns { columns: Vec<usize>, vector: BitVector },
}

/// Applies one of the product-preserving column operations to a factor.
pub fn factor_ops(b: &BitMatrix, op: &FactorOp) -> Result<BitMatrix> {
    let mut cols = b.columns();
    let check = |j: usize| {
        if j < cols.len() {
            Ok(())
        } else {
            Err(Error::InvalidFactorOp(format!("column {j} out of range")))
        }
    };
    match op {
        FactorOp::DeleteZeroColumn(j) => {
            check(*j)?;
            if !cols[*j].is_zero() {
                return Err(Error::InvalidFactorOp(format!("column {j} is not zero")));
            }
            cols.remove(*j);
        }
        FactorOp::DeleteEqualColumns(a, c) => {
            check(*a)?;
            check(*c)?;
            if a == c || cols[*a] != cols[*c] {
                return Err(Error::InvalidFactorOp(format!("columns {a} and {c} are not two equal columns")));
            }
            let (hi, lo) = if a > c { (*a, *c) } else { (*c, *a) };
            cols.remove(hi);
            cols.remove(lo);
        }
        FactorOp::SwapColumns(a, c) => {
            check(*a)?;
            check(*c)?;
            cols.swap(*a, *c);
        }
        FactorOp::AddToColumns { columns, vector } => {
            for &j in columns {
                check(j)?;
            }
            if vector.len() != b.rows() {
                return Err(Error::DimensionMismatch {
                    expected: b.rows(),
                    got: vector.len(),
                });
            }
            let mut seen = columns.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != columns.len() {
                return Err(Error::InvalidFactorOp("repeated column in subset".into()));
            }
            if columns.len() % 2 == 1 {
                return Err(Error::InvalidFactorOp("subset has odd size".into()));
            }
            let mut sum = BitVector::zeros(b.rows());
            for &j in columns {
                sum.xor_assign(&cols[j]);
            }
            if !sum.is_zero() {
                return Err(Error::InvalidFactorOp("subset columns do not sum to zero".into()));
            }
            for &j in columns {
                cols[j].xor_assign(vector);
            }
        }
    }
    BitMatrix::from_columns(b.rows(), &cols)
}
