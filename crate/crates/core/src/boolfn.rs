// SPDX-License-Identifier: Apache-2.0

//! Boolean functions of `m <= 16` variables.
//!
//! Truth-table index `i` encodes the assignment with `x_1` as the least
//! significant bit and `x_m` as the most significant one, so the first half
//! of a table is the restriction to `x_m = 0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::gf2linalg::{BitMatrix, BitVector};
use crate::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 16;

const LO_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

fn check_vars(m: usize) -> Result<()> {
    if m > MAX_VARS {
        Err(Error::OutOfRange(format!("m = {m} exceeds {MAX_VARS} variables")))
    } else {
        Ok(())
    }
}

fn table_words(m: usize) -> usize {
    (1usize << m).div_ceil(64)
}

fn table_mask(m: usize) -> u64 {
    if m >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << m)) - 1
    }
}

/// In-place Möbius transform over GF(2); it is its own inverse.
fn moebius_in_place(m: usize, words: &mut [u64]) {
    for (j, &mask) in LO_MASKS.iter().enumerate().take(m.min(6)) {
        let s = 1 << j;
        for w in words.iter_mut() {
            *w ^= (*w & mask) << s;
        }
    }
    for j in 6..m {
        let step = 1usize << (j - 6);
        for w in 0..words.len() {
            if w & step != 0 {
                words[w] ^= words[w ^ step];
            }
        }
    }
}

/// Möbius transform of a single-word table (`m <= 6`).
#[inline]
pub fn moebius_u64(m: usize, mut t: u64) -> u64 {
    for (j, &mask) in LO_MASKS.iter().enumerate().take(m) {
        t ^= (t & mask) << (1 << j);
    }
    t
}

/// Degree of a Boolean function; the zero function has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    /// Whether a function of this degree lies in `RM(k, m)`.
    pub fn at_most(self, k: u32) -> bool {
        match self {
            Degree::MinusInfinity => true,
            Degree::Finite(d) => d <= k,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Truth table of a function `F_2^m -> F_2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    m: usize,
    table: Vec<u64>,
}

impl BooleanFunction {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_VARS, "m = {m} exceeds {MAX_VARS}");
        Self {
            m,
            table: vec![0; table_words(m)],
        }
    }

    pub fn one(m: usize) -> Self {
        let mut f = Self::zero(m);
        for w in f.table.iter_mut() {
            *w = u64::MAX;
        }
        f.table[0] &= table_mask(m);
        f
    }

    /// Single-word table, `m <= 6`.
    pub fn from_u64(m: usize, table: u64) -> Self {
        assert!(m <= 6, "from_u64 needs m <= 6");
        Self {
            m,
            table: vec![table & table_mask(m)],
        }
    }

    pub fn from_words(m: usize, words: &[u64]) -> Result<Self> {
        check_vars(m)?;
        if words.len() != table_words(m) {
            return Err(Error::DimensionMismatch {
                expected: table_words(m),
                got: words.len(),
            });
        }
        let mut f = Self {
            m,
            table: words.to_vec(),
        };
        f.table[0] &= if m >= 6 { u64::MAX } else { table_mask(m) };
        Ok(f)
    }

    pub fn from_fn(m: usize, mut f: impl FnMut(u32) -> bool) -> Self {
        let mut g = Self::zero(m);
        for x in 0..(1u32 << m) {
            if f(x) {
                g.table[(x / 64) as usize] |= 1 << (x % 64);
            }
        }
        g
    }

    /// Truth table given as a bit vector of length `2^m`.
    pub fn from_bit_vector(v: &BitVector) -> Result<Self> {
        let n = v.len();
        if !n.is_power_of_two() {
            return Err(Error::Parse(format!("table length {n} is not a power of two")));
        }
        let m = n.trailing_zeros() as usize;
        Self::from_words(m, v.words())
    }

    pub fn to_bit_vector(&self) -> BitVector {
        BitVector::from_words(self.len(), &self.table)
    }

    /// The coordinate function `x_i`, `1 <= i <= m`.
    pub fn variable(m: usize, i: usize) -> Self {
        assert!((1..=m).contains(&i));
        Self::from_fn(m, |x| (x >> (i - 1)) & 1 == 1)
    }

    /// The monomial with variable mask `mask` (bit `i-1` stands for `x_i`).
    pub fn monomial(m: usize, mask: u32) -> Self {
        Self::from_fn(m, |x| x & mask == mask)
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    /// Table length `2^m`.
    pub fn len(&self) -> usize {
        1 << self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.table
    }

    pub fn as_u64(&self) -> Option<u64> {
        (self.m <= 6).then(|| self.table[0])
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        (self.table[(x / 64) as usize] >> (x % 64)) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.table.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&w| w == 0)
    }

    /// Inputs where the function is 1, in increasing order.
    pub fn support(&self) -> Vec<u32> {
        self.to_bit_vector().iter_ones().map(|i| i as u32).collect()
    }

    fn same_vars(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a ^ b).collect();
        Ok(Self { m: self.m, table })
    }

    /// Componentwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_vars(other)?;
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a & b).collect();
        Ok(Self { m: self.m, table })
    }

    pub fn complement(&self) -> Self {
        self.add(&Self::one(self.m)).expect("same m")
    }

    pub fn distance(&self, other: &Self) -> Result<usize> {
        self.same_vars(other)?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn anf(&self) -> AnfPolynomial {
        anf_from_truth_table(self)
    }

    pub fn degree(&self) -> Degree {
        self.anf().degree()
    }

    /// Walsh spectrum `W(a) = sum_x (-1)^(f(x) + <a,x>)`.
    pub fn walsh_spectrum(&self) -> Vec<i32> {
        walsh_spectrum(self)
    }

    /// Halves `(f|x_m=0, f|x_m=1)` as functions of `m-1` variables.
    pub fn split_last(&self) -> Result<(Self, Self)> {
        if self.m == 0 {
            return Err(Error::OutOfRange("cannot split a function of 0 variables".into()));
        }
        let h = self.m - 1;
        let lo = Self::from_fn(h, |x| self.get(x));
        let hi = Self::from_fn(h, |x| self.get(x | (1 << h)));
        Ok((lo, hi))
    }

    /// The function of `m+1` variables equal to `lo` on `x_{m+1} = 0` and `hi` on `x_{m+1} = 1`.
    pub fn concat(lo: &Self, hi: &Self) -> Result<Self> {
        lo.same_vars(hi)?;
        let m = lo.m;
        check_vars(m + 1)?;
        Ok(Self::from_fn(m + 1, |x| {
            if x >> m & 1 == 0 {
                lo.get(x)
            } else {
                hi.get(x & !(1 << m))
            }
        }))
    }

    /// Lowercase hex of the table read as an integer with bit `i` = `f(i)`.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let nibble = (self.table[bit / 64] >> (bit % 64)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).expect("nibble"));
        }
        s
    }

    /// Parses [`to_hex`](Self::to_hex) output; shorter strings are zero-extended.
    pub fn from_hex(m: usize, text: &str) -> Result<Self> {
        check_vars(m)?;
        let text = text.strip_prefix("0x").unwrap_or(text);
        if text.is_empty() {
            return Err(Error::Parse("empty hex string".into()));
        }
        let mut f = Self::zero(m);
        for (d, c) in text.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))? as u64;
            if nibble == 0 {
                continue;
            }
            let bit = d * 4;
            if bit >= f.len() || (f.len() < 4 && nibble >> f.len() != 0) {
                return Err(Error::Parse(format!("hex {text:?} is too long for m = {m}")));
            }
            f.table[bit / 64] |= nibble << (bit % 64);
        }
        Ok(f)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(m={}, {})", self.m, self.to_hex())
    }
}

/// Polynomial over GF(2) as a set of monomials; each monomial is a variable
/// mask, bit `i-1` standing for `x_i`, and the empty mask is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnfPolynomial {
    m: usize,
    monomials: BTreeSet<u32>,
}

impl AnfPolynomial {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            monomials: BTreeSet::new(),
        }
    }

    /// Builds a polynomial; repeated monomials cancel.
    pub fn from_monomials(m: usize, monomials: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_vars(m)?;
        let mut p = Self::zero(m);
        let limit = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        for mono in monomials {
            if mono & !limit != 0 {
                return Err(Error::OutOfRange(format!("monomial {mono:#b} uses variables past x_{m}")));
            }
            p.toggle(mono);
        }
        Ok(p)
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    pub fn monomials(&self) -> &BTreeSet<u32> {
        &self.monomials
    }

    pub fn contains(&self, mono: u32) -> bool {
        self.monomials.contains(&mono)
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    fn toggle(&mut self, mono: u32) {
        if !self.monomials.remove(&mono) {
            self.monomials.insert(mono);
        }
    }

    pub fn degree(&self) -> Degree {
        self.monomials
            .iter()
            .map(|m| m.count_ones())
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        let monomials = self
            .monomials
            .symmetric_difference(&other.monomials)
            .copied()
            .collect();
        Ok(Self { m: self.m, monomials })
    }

    /// Product in the ring of Boolean functions (`x_i^2 = x_i`).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        let mut out = Self::zero(self.m);
        for &a in &self.monomials {
            for &b in &other.monomials {
                out.toggle(a | b);
            }
        }
        Ok(out)
    }

    /// Part of degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            m: self.m,
            monomials: self
                .monomials
                .iter()
                .copied()
                .filter(|x| x.count_ones() == d)
                .collect(),
        }
    }

    /// Drops every monomial of degree at most `k`.
    pub fn reduce_mod_rm(&self, k: u32) -> Self {
        Self {
            m: self.m,
            monomials: self
                .monomials
                .iter()
                .copied()
                .filter(|x| x.count_ones() > k)
                .collect(),
        }
    }

    pub fn truth_table(&self) -> BooleanFunction {
        truth_table_from_anf(self)
    }

    /// Same polynomial viewed in `m' >= m` variables.
    pub fn widen(&self, m: usize) -> Result<Self> {
        if m < self.m {
            return Err(Error::OutOfRange(format!("cannot narrow {} variables to {m}", self.m)));
        }
        check_vars(m)?;
        Ok(Self {
            m,
            monomials: self.monomials.clone(),
        })
    }
}

impl fmt::Display for AnfPolynomial {
    /// Abbreviated notation: digits per monomial, higher degree first,
    /// `0` for the constant term and for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<u32> = self.monomials.iter().copied().collect();
        terms.sort_by_key(|&t| (std::cmp::Reverse(t.count_ones()), std::cmp::Reverse(t.reverse_bits())));
        let rendered: Vec<String> = terms
            .iter()
            .map(|&t| {
                if t == 0 {
                    "0".to_string()
                } else {
                    (0..32)
                        .filter(|i| t >> i & 1 == 1)
                        .map(|i| monomial_digit(i as usize + 1))
                        .collect()
                }
            })
            .collect();
        f.write_str(&rendered.join("+"))
    }
}

impl fmt::Debug for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfPolynomial(m={}, {self})", self.m)
    }
}

fn monomial_digit(i: usize) -> char {
    char::from_digit(i as u32, 10).unwrap_or('?')
}

/// Evaluates the polynomial as a truth table (Möbius transform).
pub fn truth_table_from_anf(anf: &AnfPolynomial) -> BooleanFunction {
    let mut f = BooleanFunction::zero(anf.m);
    for &mono in &anf.monomials {
        f.table[(mono / 64) as usize] ^= 1 << (mono % 64);
    }
    moebius_in_place(anf.m, &mut f.table);
    f
}

pub fn anf_from_truth_table(f: &BooleanFunction) -> AnfPolynomial {
    let mut coeffs = f.table.clone();
    moebius_in_place(f.m, &mut coeffs);
    let monomials = BitVector::from_words(f.len(), &coeffs)
        .iter_ones()
        .map(|i| i as u32)
        .collect();
    AnfPolynomial { m: f.m, monomials }
}

/// Parses the abbreviated notation, e.g. `2345+123+14+25`.
///
/// Each term is a string of distinct digits in `1..=m`; the term `0` is the
/// constant 1. Whitespace is rejected.
pub fn parse_abbrev(text: &str, m: usize) -> Result<AnfPolynomial> {
    check_vars(m)?;
    if m > 9 {
        return Err(Error::OutOfRange("the digit notation covers at most 9 variables".into()));
    }
    if text.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = AnfPolynomial::zero(m);
    for term in text.split('+') {
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {text:?}")));
        }
        if term == "0" {
            p.toggle(0);
            continue;
        }
        let mut mono = 0u32;
        for c in term.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in {text:?}")))?
                as usize;
            if d == 0 || d > m {
                return Err(Error::Parse(format!("variable {d} out of range 1..={m} in {text:?}")));
            }
            let bit = 1 << (d - 1);
            if mono & bit != 0 {
                return Err(Error::Parse(format!("repeated variable {d} in term {term:?}")));
            }
            mono |= bit;
        }
        p.toggle(mono);
    }
    Ok(p)
}

/// Fast Walsh-Hadamard transform of `(-1)^f`.
pub fn walsh_spectrum(f: &BooleanFunction) -> Vec<i32> {
    let n = f.len();
    let mut w: Vec<i32> = (0..n as u32).map(|x| if f.get(x) { -1 } else { 1 }).collect();
    let mut h = 1;
    while h < n {
        for block in w.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (u, v) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*u + *v, *u - *v);
                *u = s;
                *v = d;
            }
        }
        h *= 2;
    }
    w
}

/// Affine map `x -> Ax + b` on `F_2^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub matrix: BitMatrix,
    pub shift: BitVector,
}

impl AffineMap {
    pub fn identity(m: usize) -> Self {
        Self {
            matrix: BitMatrix::identity(m),
            shift: BitVector::zeros(m),
        }
    }

    pub fn new(matrix: BitMatrix, shift: BitVector) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: matrix.cols(),
            });
        }
        if shift.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                got: shift.len(),
            });
        }
        Ok(Self { matrix, shift })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `self ∘ inner`, i.e. `x -> A1 (A2 x + b2) + b1`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        let matrix = self.matrix.mul(&inner.matrix)?;
        let shift = self.matrix.mul_vec(&inner.shift)?.xor(&self.shift);
        Ok(AffineMap { matrix, shift })
    }

    #[inline]
    pub fn apply_mask(&self, x: u32) -> u32 {
        let cols = self.column_masks();
        let mut y = self.shift_mask();
        for (j, c) in cols.iter().enumerate() {
            if x >> j & 1 == 1 {
                y ^= c;
            }
        }
        y
    }

    pub fn column_masks(&self) -> Vec<u32> {
        (0..self.dim())
            .map(|j| {
                (0..self.dim()).fold(0u32, |acc, i| acc | ((self.matrix.get(i, j) as u32) << i))
            })
            .collect()
    }

    pub fn shift_mask(&self) -> u32 {
        self.shift.iter_ones().fold(0u32, |acc, i| acc | 1 << i)
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap({:?}, shift {})", self.matrix, self.shift)
    }
}

/// `g(x) = f(Ax + b)` from column masks of `A` and the shift `b`.
pub(crate) fn substitute_masks(f: &BooleanFunction, cols: &[u32], shift: u32) -> BooleanFunction {
    let m = f.m;
    let mut g = BooleanFunction::zero(m);
    let mut y = shift;
    let mut x = 0u32;
    // walk the inputs in Gray-code order so each step adds one column
    for k in 0..(1u32 << m) {
        if k > 0 {
            let j = k.trailing_zeros();
            x ^= 1 << j;
            y ^= cols[j as usize];
        }
        if f.get(y) {
            g.table[(x / 64) as usize] |= 1 << (x % 64);
        }
    }
    g
}

/// `g(x) = f(Ax + b)`; `A` need not be invertible.
pub fn apply_affine_substitution(
    f: &BooleanFunction,
    a: &BitMatrix,
    b: &BitVector,
) -> Result<BooleanFunction> {
    let map = AffineMap::new(a.clone(), b.clone())?;
    if map.dim() != f.m {
        return Err(Error::DimensionMismatch {
            expected: f.m,
            got: map.dim(),
        });
    }
    Ok(substitute_masks(f, &map.column_masks(), map.shift_mask()))
}

/// One elementary variable substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScriptStep {
    /// `x_i <-> x_j`.
    Swap(usize, usize),
    /// `x_target <- x_target + sum of sources (+1 if constant)`; `sources`
    /// is a variable mask that excludes `target`.
    Add {
        target: usize,
        sources: u32,
        constant: bool,
    },
}

impl ScriptStep {
    fn validate(&self, m: usize) -> Result<()> {
        let in_range = |i: usize| (1..=m).contains(&i);
        match *self {
            ScriptStep::Swap(i, j) if in_range(i) && in_range(j) => Ok(()),
            ScriptStep::Add { target, sources, .. }
                if in_range(target)
                    && sources >> m == 0
                    && sources & (1 << (target - 1)) == 0 =>
            {
                Ok(())
            }
            other => Err(Error::Parse(format!("step {other} is invalid for m = {m}"))),
        }
    }

    /// The step as an affine map; row `i` gives the new expression for `x_i`.
    pub fn affine_map(&self, m: usize) -> Result<AffineMap> {
        self.validate(m)?;
        let mut map = AffineMap::identity(m);
        match *self {
            ScriptStep::Swap(i, j) => {
                map.matrix = BitMatrix::from_fn(m, m, |r, c| {
                    let r = r + 1;
                    let src = if r == i {
                        j
                    } else if r == j {
                        i
                    } else {
                        r
                    };
                    c + 1 == src
                });
            }
            ScriptStep::Add {
                target,
                sources,
                constant,
            } => {
                for s in 0..m {
                    if sources >> s & 1 == 1 {
                        map.matrix.set(target - 1, s, true);
                    }
                }
                map.shift.set(target - 1, constant);
            }
        }
        Ok(map)
    }
}

impl fmt::Display for ScriptStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScriptStep::Swap(i, j) => write!(f, "{i}<->{j}"),
            ScriptStep::Add {
                target,
                sources,
                constant,
            } => {
                write!(f, "{target}<-{target}")?;
                for s in 0..32 {
                    if sources >> s & 1 == 1 {
                        write!(f, "+{}", s + 1)?;
                    }
                }
                if constant {
                    f.write_str("+0")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ScriptStep {
    type Err = Error;

    /// Accepts `i<->j`, `i↔j`, `i<-i+j+..` and `i←i+j+..`; the source `0`
    /// is the constant 1.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed script step {text:?}"));
        let index = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some((a, b)) = text.split_once("<->").or_else(|| text.split_once('↔')) {
            return Ok(ScriptStep::Swap(index(a)?, index(b)?));
        }
        let (lhs, rhs) = text
            .split_once("<-")
            .or_else(|| text.split_once('←'))
            .ok_or_else(bad)?;
        let target = index(lhs)?;
        let mut terms = rhs.split('+');
        if terms.next().map(index).transpose()? != Some(target) {
            return Err(bad());
        }
        let mut sources = 0u32;
        let mut constant = false;
        for t in terms {
            match index(t)? {
                0 => constant ^= true,
                s if s == target || s > 32 => return Err(bad()),
                s => sources ^= 1 << (s - 1),
            }
        }
        if target == 0 {
            return Err(bad());
        }
        Ok(ScriptStep::Add {
            target,
            sources,
            constant,
        })
    }
}

/// Sequence of substitutions applied one after another:
/// `f_1 = f ∘ L_1`, `f_2 = f_1 ∘ L_2`, and so on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TransformScript {
    pub steps: Vec<ScriptStep>,
}

impl TransformScript {
    pub fn new(steps: Vec<ScriptStep>) -> Self {
        Self { steps }
    }

    /// Parses steps separated by `;` (a trailing `;` is allowed).
    pub fn parse(text: &str) -> Result<Self> {
        let steps = text
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { steps })
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        self.steps.iter().try_for_each(|s| s.validate(m))
    }

    /// Single map `L` with `run_script(f) = f ∘ L`, i.e. `L_1 ∘ L_2 ∘ ..`.
    pub fn composed(&self, m: usize) -> Result<AffineMap> {
        self.steps.iter().try_fold(AffineMap::identity(m), |acc, s| {
            acc.compose(&s.affine_map(m)?)
        })
    }
}

impl fmt::Display for TransformScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Applies the steps consecutively.
pub fn run_script(f: &BooleanFunction, script: &TransformScript) -> Result<BooleanFunction> {
    script.validate(f.m)?;
    script.steps.iter().try_fold(f.clone(), |g, step| {
        let map = step.affine_map(f.m)?;
        Ok(substitute_masks(&g, &map.column_masks(), map.shift_mask()))
    })
}
