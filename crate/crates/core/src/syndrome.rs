// SPDX-License-Identifier: Apache-2.0

//! Syndromes of the punctured code `RM(m-3, m)` as symmetric matrices,
//! minimal factors `B` with `B B^T = S`, the deep-hole generators of
//! `RM(m-3, m)`, quadratic duals and `EL^k` equivalence.
//!
//! The punctured code drops the coordinate of the zero input, so punctured
//! coordinate `j - 1` belongs to input `j` (`1 <= j < 2^m`). A column of a
//! factor is an input `x`, stored as a bitmask with bit `i - 1` = `x_i`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfn::{moebius_u64, substitute_masks, AnfPolynomial, BooleanFunction, Degree};
use crate::gf2linalg::{
    enumerate_invertible_with_first_rows, BitMatrix, BitVector, SmallMatrix, SymmetricMatrix,
    MAX_ENUMERATION_ORDER,
};
use crate::{Error, Result};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Punctured tables of `x_1..x_m`, then of `x_i x_j` (`i < j`, lexicographic).
pub fn parity_check_rm_m3(m: usize) -> Result<BitMatrix> {
    if !(3..=16).contains(&m) {
        return Err(Error::OutOfRange(format!("parity checks need 3 <= m <= 16, got {m}")));
    }
    let n = (1usize << m) - 1;
    let mut monomials: Vec<u32> = (0..m).map(|i| 1 << i).collect();
    for i in 0..m {
        for j in i + 1..m {
            monomials.push(1 << i | 1 << j);
        }
    }
    Ok(BitMatrix::from_fn(monomials.len(), n, |r, c| {
        let x = c as u32 + 1;
        x & monomials[r] == monomials[r]
    }))
}

fn check_punctured(v: &BitVector, m: usize) -> Result<()> {
    if !(1..=16).contains(&m) {
        return Err(Error::OutOfRange(format!("m = {m} out of range")));
    }
    let n = (1usize << m) - 1;
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

/// Rows of `S = sum_{x in supp} x x^T` as column masks.
fn gram_rows(m: usize, support: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut rows = vec![0u32; m];
    for x in support {
        for (i, r) in rows.iter_mut().enumerate() {
            if x >> i & 1 == 1 {
                *r ^= x;
            }
        }
    }
    rows
}

fn symmetric_from_rows(m: usize, rows: &[u32]) -> SymmetricMatrix {
    let mut s = SymmetricMatrix::zero(m);
    for (i, &row) in rows.iter().enumerate().take(m) {
        for j in i..m {
            s.set(i, j, row >> j & 1 == 1);
        }
    }
    s
}

/// The syndrome of a punctured word arranged as a symmetric matrix:
/// `s_ii` is the check of `x_i`, `s_ij` the check of `x_i x_j`.
pub fn syndrome_matrix(v: &BitVector, m: usize) -> Result<SymmetricMatrix> {
    check_punctured(v, m)?;
    if m > SymmetricMatrix::MAX_ORDER {
        return Err(Error::OutOfRange(format!("m = {m} exceeds {}", SymmetricMatrix::MAX_ORDER)));
    }
    let rows = gram_rows(m, v.iter_ones().map(|j| j as u32 + 1));
    Ok(symmetric_from_rows(m, &rows))
}

/// Columns of a binary `m x t` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub m: usize,
    pub columns: Vec<u32>,
}

impl Factor {
    pub fn new(m: usize, columns: Vec<u32>) -> Result<Self> {
        if m > 31 || columns.iter().any(|&c| c >> m != 0) {
            return Err(Error::InvalidFactor(format!("columns must fit in {m} rows")));
        }
        Ok(Self { m, columns })
    }

    /// `B B^T`.
    pub fn gram(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_outer_products(self.m, &self.columns)
    }

    /// `Col(B)`, the number of nonzero columns.
    pub fn nonzero_columns(&self) -> usize {
        self.columns.iter().filter(|&&c| c != 0).count()
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.m, self.columns.len(), |i, j| self.columns[j] >> i & 1 == 1)
    }

    /// Every proper subset of the columns is linearly independent (and the
    /// columns are nonzero and distinct).
    pub fn proper_subsets_independent(&self) -> bool {
        let cols = &self.columns;
        let rank = rank_u32(cols);
        if rank == cols.len() {
            return true;
        }
        // a dependent set with independent proper subsets is a circuit:
        // removing any single column leaves an independent set
        rank + 1 == cols.len()
            && (0..cols.len()).all(|skip| {
                let rest: Vec<u32> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &c)| c)
                    .collect();
                rank_u32(&rest) == rest.len()
            })
    }
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factor(m={}, {:?})", self.m, self.columns)
    }
}

fn rank_u32(v: &[u32]) -> usize {
    crate::gf2linalg::rank_of_words(&v.iter().map(|&x| x as u64).collect::<Vec<_>>())
}

/// `B_v`: column `j` is input `j` when `v` has a one at punctured position
/// `j - 1`, zero otherwise.
pub fn bv_matrix(v: &BitVector, m: usize) -> Result<Factor> {
    check_punctured(v, m)?;
    let columns = (0..v.len())
        .map(|p| if v.get(p) { p as u32 + 1 } else { 0 })
        .collect();
    Factor::new(m, columns)
}

#[inline]
fn beta(rows: &[u32], x: u32, y: u32) -> bool {
    let mut sy = 0u32;
    for (i, &r) in rows.iter().enumerate() {
        sy |= ((r & y).count_ones() & 1) << i;
    }
    (x & sy).count_ones() & 1 == 1
}

fn rank_and_diag(rows: &[u32]) -> (usize, u32) {
    let diag = rows
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, &r)| acc | (r >> i & 1) << i);
    (rank_u32(rows), diag)
}

/// `t(S)` from the rows of `S`: the rank, plus one for a nonzero
/// alternating (zero-diagonal) matrix.
#[inline]
pub fn t_from_rows(rows: &[u32]) -> u32 {
    let (rank, diag) = rank_and_diag(rows);
    rank as u32 + u32::from(rank > 0 && diag == 0)
}

struct Reduction {
    diagonal: Vec<u32>,
    pairs: Vec<(u32, u32)>,
    radical: Vec<u32>,
}

/// Splits `F_2^m` into an orthogonal sum of diagonal vectors, hyperbolic
/// pairs and the radical of `beta(x, y) = x^T S y`.
fn reduce(rows: &[u32]) -> Reduction {
    let m = rows.len();
    let mut rest: Vec<u32> = (0..m).map(|i| 1 << i).collect();
    let mut diagonal = Vec::new();
    let mut pairs = Vec::new();
    loop {
        if let Some(p) = rest.iter().position(|&u| beta(rows, u, u)) {
            let u = rest.remove(p);
            for w in rest.iter_mut() {
                if beta(rows, *w, u) {
                    *w ^= u;
                }
            }
            diagonal.push(u);
            continue;
        }
        let found = (0..rest.len()).find_map(|i| {
            (i + 1..rest.len())
                .find(|&j| beta(rows, rest[i], rest[j]))
                .map(|j| (i, j))
        });
        let Some((i, j)) = found else { break };
        let w = rest.remove(j);
        let u = rest.remove(i);
        for z in rest.iter_mut() {
            let (bzw, bzu) = (beta(rows, *z, w), beta(rows, *z, u));
            if bzw {
                *z ^= u;
            }
            if bzu {
                *z ^= w;
            }
        }
        pairs.push((u, w));
    }
    Reduction {
        diagonal,
        pairs,
        radical: rest,
    }
}

/// Inverse of the matrix whose rows are `basis`, returned as columns.
fn inverse_columns(m: usize, basis: &[u32]) -> Vec<u32> {
    let v = BitMatrix::from_fn(m, m, |i, j| basis[i] >> j & 1 == 1);
    let inv = v.invert().expect("reduction yields a basis");
    (0..m)
        .map(|j| (0..m).fold(0u32, |acc, i| acc | (inv.get(i, j) as u32) << i))
        .collect()
}

/// `t(S)`, the least number of nonzero columns of a factor of `S`, and one
/// minimal factor.
///
/// The factor is built from an orthogonal decomposition of the form
/// `x^T S y`, so no search is involved; the choice among minimal factors is
/// fixed by the reduction order.
pub fn t_of_s(s: &SymmetricMatrix) -> Result<(usize, Factor)> {
    let m = s.order();
    let rows = s.row_masks();
    if s.is_zero() {
        return Ok((0, Factor::new(m, Vec::new())?));
    }
    let red = reduce(&rows);
    let columns = if let Some((&first, others)) = red.diagonal.split_first() {
        let mut orth: Vec<u32> = others.to_vec();
        let mut d = first;
        for &(u, w) in &red.pairs {
            orth.push(d ^ u);
            orth.push(d ^ w);
            d ^= u ^ w;
        }
        orth.push(d);
        let r = orth.len();
        let mut basis = orth;
        basis.extend(&red.radical);
        inverse_columns(m, &basis)[..r].to_vec()
    } else {
        let mut basis = Vec::with_capacity(m);
        let mut z = 0u32;
        for &(u, w) in &red.pairs {
            basis.push(u ^ z);
            basis.push(w ^ z);
            z ^= u ^ w;
        }
        let r = basis.len();
        basis.extend(&red.radical);
        let w = inverse_columns(m, &basis);
        let mut cols = w[..r].to_vec();
        cols.push(cols.iter().fold(0, |a, &c| a ^ c));
        cols
    };
    let factor = Factor::new(m, columns)?;
    debug_assert_eq!(factor.gram(), *s);
    Ok((factor.columns.len(), factor))
}

/// Whether `t(S)` reaches the maximum `m + 1 - (m mod 2)`.
pub fn is_t_maximal(s: &SymmetricMatrix) -> bool {
    let m = s.order();
    let (rank, diag) = rank_and_diag(&s.row_masks());
    if m.is_multiple_of(2) {
        rank == m && diag == 0
    } else {
        rank == m || (rank + 1 == m && diag == 0 && rank > 0)
    }
}

/// `d(v, punctured RM(m-3, m)) = t(S_v)`.
pub fn distance_via_syndrome(v: &BitVector, m: usize) -> Result<u32> {
    let s = syndrome_matrix(v, m)?;
    Ok(t_from_rows(&s.row_masks()))
}

/// Distance of a full-length word (bit `x` = value at input `x`, `m <= 6`)
/// to `RM(m-3, m)`. A nearest punctured codeword extends by its parity bit,
/// so one more step is needed exactly when the parities disagree.
pub fn distance_rm_m3_word(v: u64, m: usize) -> u32 {
    let punctured = v >> 1;
    let rows = gram_rows(m, BitVector::from_u64(64, punctured).iter_ones().map(|j| j as u32 + 1));
    let t = t_from_rows(&rows);
    t + ((t ^ v.count_ones()) & 1)
}

/// The punctured word whose support is the set of columns of `b`.
pub fn coset_leader_from_factor(b: &Factor, m: usize) -> Result<BitVector> {
    if b.m != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.m,
        });
    }
    let mut v = BitVector::zeros((1 << m) - 1);
    for &c in &b.columns {
        if c == 0 {
            return Err(Error::InvalidFactor("zero column".into()));
        }
        if v.get(c as usize - 1) {
            return Err(Error::InvalidFactor(format!("column {c} repeated")));
        }
        v.set(c as usize - 1, true);
    }
    Ok(v)
}

/// Parity of `m`, which decides the shape of the deep holes of `RM(m-3, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Supports generating the metric complement of `RM(m-3, m)` modulo the code.
///
/// Every support contains the zero input. For even `m` they are
/// `{0, x_1, .., x_m, x_1 + .. + x_m}` with `x_1..x_m` a basis; for odd `m`
/// they are `{0, x_1, .., x_m}` with a basis (`G1`) and
/// `{0, x_1, .., x_{m-1}, x_1 + .. + x_{m-1}}` with independent `x_i` (`G2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementGenerators {
    pub m: usize,
    pub parity: Parity,
}

/// Largest `m` whose generator sets are enumerated.
pub const MAX_GENERATOR_ENUMERATION: usize = 5;

impl ComplementGenerators {
    /// Support sizes of the generator classes (`[G]` or `[G1, G2]`).
    pub fn support_sizes(&self) -> Vec<usize> {
        match self.parity {
            Parity::Even => vec![self.m + 2],
            Parity::Odd => vec![self.m + 1, self.m + 1],
        }
    }

    /// Generator functions as words (`2^m <= 64` bits) for one class:
    /// `0` is `G` or `G1`, `1` is `G2`.
    pub fn enumerate_class(&self, class: usize) -> Result<Vec<u64>> {
        let m = self.m;
        if m > MAX_GENERATOR_ENUMERATION {
            return Err(Error::Infeasible(format!(
                "enumerating generators is limited to m <= {MAX_GENERATOR_ENUMERATION}"
            )));
        }
        let (size, with_sum) = match (self.parity, class) {
            (Parity::Even, 0) => (m, true),
            (Parity::Odd, 0) => (m, false),
            (Parity::Odd, 1) => (m - 1, true),
            _ => return Err(Error::OutOfRange(format!("no generator class {class}"))),
        };
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(size);
        independent_sets(m, size, 1, &mut chosen, &mut |set| {
            let mut word = 1u64;
            let mut sum = 0u32;
            for &x in set {
                word |= 1 << x;
                sum ^= x;
            }
            if with_sum {
                word |= 1 << sum;
            }
            out.push(word);
        });
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// All generator words of every class.
    pub fn enumerate(&self) -> Result<Vec<u64>> {
        let classes = match self.parity {
            Parity::Even => 1,
            Parity::Odd => 2,
        };
        let mut out = Vec::new();
        for c in 0..classes {
            out.extend(self.enumerate_class(c)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

pub fn complement_generators(m: usize) -> Result<ComplementGenerators> {
    if !(3..=16).contains(&m) {
        return Err(Error::OutOfRange(format!("complement generators need 3 <= m <= 16, got {m}")));
    }
    let parity = if m.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    Ok(ComplementGenerators { m, parity })
}

fn independent_sets(m: usize, size: usize, from: u32, chosen: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if chosen.len() == size {
        emit(chosen);
        return;
    }
    for x in from..(1u32 << m) {
        chosen.push(x);
        if rank_u32(chosen) == chosen.len() {
            independent_sets(m, size, x + 1, chosen, emit);
        }
        chosen.pop();
    }
}

fn check_parity(m: usize, even: bool) -> Result<()> {
    if m < 3 || m.is_multiple_of(2) != even {
        return Err(Error::OutOfRange(format!(
            "m = {m} must be {} and at least 3",
            if even { "even" } else { "odd" }
        )));
    }
    Ok(())
}

fn full_mask(m: usize) -> u32 {
    ((1u64 << m) - 1) as u32
}

/// `g*` for even `m`: the sum of all monomials in exactly `m - 2` variables.
pub fn gstar(m: usize) -> Result<AnfPolynomial> {
    check_parity(m, true)?;
    AnfPolynomial::from_monomials(
        m,
        (0..=full_mask(m)).filter(|x| x.count_ones() as usize == m - 2),
    )
}

/// `g⋆` over `x_1..x_{m-1}`: all monomials in `m - 3` of those variables.
/// For `m = 3` the single pair gives the constant 1.
fn gstar_small(m: usize) -> impl Iterator<Item = u32> {
    (0..=full_mask(m - 1)).filter(move |x| x.count_ones() as usize == m - 3)
}

/// `g2* = x_m g⋆` for odd `m`.
pub fn g2star(m: usize) -> Result<AnfPolynomial> {
    check_parity(m, false)?;
    let xm = 1u32 << (m - 1);
    AnfPolynomial::from_monomials(m, gstar_small(m).map(|x| x | xm))
}

/// `g1* = x̄_m + x_m g⋆` for odd `m`, `x̄_m = x_1 .. x_{m-1}`.
pub fn g1star(m: usize) -> Result<AnfPolynomial> {
    let mut p = g2star(m)?;
    p = p.add(&AnfPolynomial::from_monomials(m, [full_mask(m - 1)])?)?;
    Ok(p)
}

fn indicator(m: usize, points: &[u32]) -> BooleanFunction {
    let set: BTreeSet<u32> = points.iter().copied().collect();
    BooleanFunction::from_fn(m, |x| set.contains(&x))
}

/// The function with support `{0, e_1, .., e_m, 1}` (even `m`).
pub fn gstar_support_form(m: usize) -> Result<BooleanFunction> {
    check_parity(m, true)?;
    let mut pts: Vec<u32> = (0..m).map(|i| 1 << i).collect();
    pts.extend([0, full_mask(m)]);
    Ok(indicator(m, &pts))
}

/// The function with support `{0, e_1, .., e_m}` (odd `m`).
pub fn g1star_support_form(m: usize) -> Result<BooleanFunction> {
    check_parity(m, false)?;
    let mut pts: Vec<u32> = (0..m).map(|i| 1 << i).collect();
    pts.push(0);
    Ok(indicator(m, &pts))
}

/// The function with support `{0, e_1, .., e_{m-1}, e_1 + .. + e_{m-1}}` (odd `m`).
pub fn g2star_support_form(m: usize) -> Result<BooleanFunction> {
    check_parity(m, false)?;
    let mut pts: Vec<u32> = (0..m - 1).map(|i| 1 << i).collect();
    pts.extend([0, full_mask(m - 1)]);
    Ok(indicator(m, &pts))
}

/// `p_k = x̄_1x̄_2 + x̄_3x̄_4 + .. + x̄_{2k-1}x̄_{2k}` in `m` variables,
/// where `x̄_i x̄_j` is the product of all variables except `x_i, x_j`.
pub fn p_k(k: usize, m: usize) -> Result<AnfPolynomial> {
    if 2 * k > m {
        return Err(Error::OutOfRange(format!("p_{k} needs 2k <= m = {m}")));
    }
    AnfPolynomial::from_monomials(
        m,
        (0..k).map(|i| full_mask(m) & !(0b11 << (2 * i))),
    )
}

/// Quadratic form `sum_{(i,j) in I} x_i x_j` (linear and constant parts dropped).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadraticForm {
    pub m: usize,
    /// Pairs `(i, j)`, `1 <= i < j <= m`.
    pub pairs: BTreeSet<(usize, usize)>,
}

impl QuadraticForm {
    pub fn as_anf(&self) -> Result<AnfPolynomial> {
        AnfPolynomial::from_monomials(
            self.m,
            self.pairs.iter().map(|&(i, j)| 1u32 << (i - 1) | 1 << (j - 1)),
        )
    }

    /// Row masks of the alternating matrix with ones at `(i, j)` and `(j, i)`.
    pub fn alternating_rows(&self) -> Vec<u32> {
        let mut rows = vec![0u32; self.m];
        for &(i, j) in &self.pairs {
            rows[i - 1] |= 1 << (j - 1);
            rows[j - 1] |= 1 << (i - 1);
        }
        rows
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        Ok(Self {
            m: self.m,
            pairs: self.pairs.symmetric_difference(&other.pairs).copied().collect(),
        })
    }
}

/// Reads `I` off the degree-`(m-2)` monomials of `f`: the monomial missing
/// `x_i` and `x_j` contributes the pair `(i, j)`.
pub fn quadratic_dual(f: &AnfPolynomial) -> Result<QuadraticForm> {
    let m = f.vars();
    if m < 2 {
        return Err(Error::OutOfRange("quadratic duals need m >= 2".into()));
    }
    if f.degree() != Degree::Finite(m as u32 - 2) {
        return Err(Error::OutOfRange(format!(
            "quadratic dual needs degree {} but the degree is {}",
            m - 2,
            f.degree()
        )));
    }
    let full = full_mask(m);
    let pairs = f
        .homogeneous_part(m as u32 - 2)
        .monomials()
        .iter()
        .map(|&mono| {
            let missing = full & !mono;
            let i = missing.trailing_zeros() as usize + 1;
            let j = 32 - missing.leading_zeros() as usize;
            (i, j)
        })
        .collect();
    Ok(QuadraticForm { m, pairs })
}

/// The `k` with `q` equivalent to `x_1x_2 + .. + x_{2k-1}x_{2k}`: half the
/// rank of the associated alternating matrix.
pub fn quad_canonical_rank(q: &QuadraticForm) -> usize {
    rank_u32(&q.alternating_rows()) / 2
}

/// Whether `A` has last column `e_m` and an invertible leading
/// `(m-1) x (m-1)` block.
pub fn lemma8_form(a: &BitMatrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: a.cols(),
        });
    }
    let m = a.rows();
    if m == 0 {
        return Ok(true);
    }
    let last_ok = (0..m).all(|i| a.get(i, m - 1) == (i == m - 1));
    let idx: Vec<usize> = (0..m - 1).collect();
    Ok(last_ok && a.submatrix(&idx, &idx).is_invertible())
}

/// Rungs of the invariant ladder used before the exhaustive scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub degree: bool,
    pub weight_distribution: bool,
    pub canonical_rank: bool,
}

impl Default for Ladder {
    fn default() -> Self {
        Self {
            degree: true,
            weight_distribution: true,
            canonical_rank: true,
        }
    }
}

impl Ladder {
    /// Skip straight to the exhaustive scan.
    pub fn exhaustive_only() -> Self {
        Self {
            degree: false,
            weight_distribution: false,
            canonical_rank: false,
        }
    }
}

/// Why two functions are not equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Refutation {
    ReducedDegree,
    CosetWeightDistribution,
    CanonicalRank,
    ExhaustiveSearch,
}

/// Outcome of an equivalence test. A witness `(A, b, h)` certifies
/// `f(x) = g(Ax + b) + h(x)` with `deg h <= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent {
        matrix: SmallMatrix,
        shift: u32,
        h: AnfPolynomial,
    },
    NotEquivalent(Refutation),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }
}

/// Monomial masks of degree above `k` in `m` variables, as a word mask over
/// ANF coefficients.
fn high_degree_mask(m: usize, k: usize) -> u64 {
    (0..(1u32 << m))
        .filter(|x| x.count_ones() as usize > k)
        .fold(0u64, |acc, x| acc | 1 << x)
}

fn word(f: &BooleanFunction) -> u64 {
    f.as_u64().expect("m <= 6")
}

/// Sorted weights of `f + c` over all `c` in `RM(k, m)`.
fn coset_weights(f: u64, m: usize, k: usize) -> Vec<u32> {
    let gens: Vec<u64> = (0..(1u32 << m))
        .filter(|x| x.count_ones() as usize <= k)
        .map(|mono| word(&BooleanFunction::monomial(m, mono)))
        .collect();
    let mut x = f;
    let mut out = Vec::with_capacity(1 << gens.len());
    out.push(x.count_ones());
    for i in 1u64..(1 << gens.len()) {
        x ^= gens[i.trailing_zeros() as usize];
        out.push(x.count_ones());
    }
    out.sort_unstable();
    out
}

fn reduced_degree(f: &BooleanFunction, k: usize) -> Degree {
    f.anf().reduce_mod_rm(k as u32).degree()
}

fn ladder_refutation(f: &BooleanFunction, g: &BooleanFunction, k: usize, ladder: &Ladder) -> Option<Refutation> {
    let m = f.vars();
    if ladder.degree && reduced_degree(f, k) != reduced_degree(g, k) {
        return Some(Refutation::ReducedDegree);
    }
    let dim: usize = (0..=k).map(|i| binomial(m, i)).sum();
    if ladder.weight_distribution && dim <= 16 && coset_weights(word(f), m, k) != coset_weights(word(g), m, k) {
        return Some(Refutation::CosetWeightDistribution);
    }
    if ladder.canonical_rank && m >= 3 && k + 3 == m {
        let (rf, rg) = (f.anf().reduce_mod_rm(k as u32), g.anf().reduce_mod_rm(k as u32));
        if rf.degree() == Degree::Finite(m as u32 - 2) && rg.degree() == rf.degree() {
            let (qf, qg) = (quadratic_dual(&rf).ok()?, quadratic_dual(&rg).ok()?);
            if quad_canonical_rank(&qf) != quad_canonical_rank(&qg) {
                return Some(Refutation::CanonicalRank);
            }
        }
    }
    None
}

fn check_small(f: &BooleanFunction, g: &BooleanFunction) -> Result<usize> {
    if f.vars() != g.vars() {
        return Err(Error::DimensionMismatch {
            expected: f.vars(),
            got: g.vars(),
        });
    }
    let m = f.vars();
    if m > MAX_ENUMERATION_ORDER {
        return Err(Error::Infeasible(format!(
            "equivalence search is limited to m <= {MAX_ENUMERATION_ORDER}"
        )));
    }
    Ok(m)
}

/// First `(A, b)` in enumeration order with `f + g∘L_A^b` in `RM(k, m)`;
/// shifts are tried only when `affine` is set.
fn exhaustive_scan(f: &BooleanFunction, g: &BooleanFunction, k: usize, affine: bool) -> Option<(SmallMatrix, u32)> {
    let m = f.vars();
    let fw = word(f);
    let high = high_degree_mask(m, k);
    let shifts = if affine { 1u32 << m } else { 1 };
    (1u32..(1 << m)).into_par_iter().find_map_first(|first| {
        let part = enumerate_invertible_with_first_rows(m, first..first + 1).ok()?;
        for a in part {
            let cols = a.columns();
            let ga = substitute_masks(g, &cols[..m], 0);
            for b in 0..shifts {
                // g(Ax + b) = (g∘L_A)(x + A^{-1}b); translating in x covers every b
                let shifted = crate::gf2linalg::xor_translate(word(&ga), b, m);
                if moebius_u64(m, fw ^ shifted) & high == 0 {
                    let shift = a.apply(b);
                    return Some((a, shift));
                }
            }
        }
        None
    })
}

fn witness(f: &BooleanFunction, g: &BooleanFunction, a: SmallMatrix, shift: u32) -> Verdict {
    let m = f.vars();
    let cols = a.columns();
    let moved = substitute_masks(g, &cols[..m], shift);
    let h = f.add(&moved).expect("same m").anf();
    Verdict::Equivalent {
        matrix: a,
        shift,
        h,
    }
}

/// `EL^k` equivalence: `f = g∘L_A + h`, `A` invertible, `deg h <= k`.
pub fn el_equivalent(f: &BooleanFunction, g: &BooleanFunction, k: usize) -> Result<Verdict> {
    el_equivalent_with(f, g, k, &Ladder::default())
}

pub fn el_equivalent_with(f: &BooleanFunction, g: &BooleanFunction, k: usize, ladder: &Ladder) -> Result<Verdict> {
    let m = check_small(f, g)?;
    if let Some(r) = ladder_refutation(f, g, k, ladder) {
        return Ok(Verdict::NotEquivalent(r));
    }
    let _ = m;
    Ok(match exhaustive_scan(f, g, k, false) {
        Some((a, b)) => witness(f, g, a, b),
        None => Verdict::NotEquivalent(Refutation::ExhaustiveSearch),
    })
}

/// Extended affine equivalence: `f = g∘L_A^b + h`, `deg h <= 1`.
pub fn ea_equivalent(f: &BooleanFunction, g: &BooleanFunction) -> Result<Verdict> {
    ea_equivalent_with(f, g, &Ladder::default())
}

pub fn ea_equivalent_with(f: &BooleanFunction, g: &BooleanFunction, ladder: &Ladder) -> Result<Verdict> {
    check_small(f, g)?;
    let ladder = Ladder {
        canonical_rank: false,
        ..*ladder
    };
    if let Some(r) = ladder_refutation(f, g, 1, &ladder) {
        return Ok(Verdict::NotEquivalent(r));
    }
    Ok(match exhaustive_scan(f, g, 1, true) {
        Some((a, b)) => witness(f, g, a, b),
        None => Verdict::NotEquivalent(Refutation::ExhaustiveSearch),
    })
}

/// Serializable result of a minimal-factor computation.
#[derive(Clone, Debug, Serialize)]
pub struct TofsReport {
    pub m: usize,
    #[serde(rename = "S")]
    pub s: String,
    pub t: usize,
    /// Columns as inputs `1..2^m - 1`.
    pub factor_columns: Vec<u32>,
}

impl TofsReport {
    pub fn new(s: &SymmetricMatrix) -> Result<Self> {
        let (t, factor) = t_of_s(s)?;
        Ok(Self {
            m: s.order(),
            s: s.to_hex(),
            t,
            factor_columns: factor.columns,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::parse_abbrev;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parity_check_shape() {
        let h = parity_check_rm_m3(3).unwrap();
        assert_eq!((h.rows(), h.cols()), (6, 7));
        // row x1x2 is the product of rows x1 and x2
        assert_eq!(h.row(3), h.row(0).and(&h.row(1)));
        assert_eq!(parity_check_rm_m3(5).unwrap().rank(), 15);
        assert!(parity_check_rm_m3(2).is_err());
    }

    #[test]
    fn syndrome_is_gram_of_bv() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 3..=6 {
            let h = parity_check_rm_m3(m).unwrap();
            for _ in 0..50 {
                let v = BitVector::from_bits(&(0..(1 << m) - 1).map(|_| rng.gen()).collect::<Vec<_>>());
                let s = syndrome_matrix(&v, m).unwrap();
                let b = bv_matrix(&v, m).unwrap();
                assert_eq!(b.gram(), s);
                assert_eq!(b.nonzero_columns(), v.weight());
                let hv = h.mul_vec(&v).unwrap();
                for i in 0..m {
                    assert_eq!(hv.get(i), s.get(i, i));
                }
            }
        }
    }

    #[test]
    fn t_examples() {
        let (t, f) = t_of_s(&SymmetricMatrix::zero(4)).unwrap();
        assert_eq!((t, f.columns.len()), (0, 0));
        let (t, f) = t_of_s(&SymmetricMatrix::identity(5)).unwrap();
        assert_eq!(t, 5);
        assert_eq!(f.gram(), SymmetricMatrix::identity(5));
        let hyper = SymmetricMatrix::from_upper_bits(2, "010").unwrap();
        assert_eq!(t_of_s(&hyper).unwrap().0, 3);
        assert!(is_t_maximal(&hyper));
        assert!(!is_t_maximal(&SymmetricMatrix::identity(2)));
    }

    #[test]
    fn factors_reproduce_every_matrix_m4() {
        for s in SymmetricMatrix::all(4).unwrap() {
            let (t, f) = t_of_s(&s).unwrap();
            assert_eq!(f.gram(), s);
            assert_eq!(t, f.columns.len());
            assert!(f.columns.iter().all(|&c| c != 0));
            assert!(f.proper_subsets_independent(), "{s:?} {f:?}");
            assert_eq!(t as u32, t_from_rows(&s.row_masks()));
        }
    }

    #[test]
    fn leader_from_factor() {
        let id = Factor::new(3, vec![1, 2, 4]).unwrap();
        let u = coset_leader_from_factor(&id, 3).unwrap();
        assert_eq!(u.iter_ones().collect::<Vec<_>>(), vec![0, 1, 3]);
        assert!(coset_leader_from_factor(&Factor::new(3, vec![1, 1]).unwrap(), 3).is_err());
        assert!(coset_leader_from_factor(&Factor::new(3, vec![0]).unwrap(), 3).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let s = SymmetricMatrix::from_packed(4, rng.gen());
            let (t, f) = t_of_s(&s).unwrap();
            let u = coset_leader_from_factor(&f, 4).unwrap();
            assert_eq!(u.weight(), t);
            assert_eq!(syndrome_matrix(&u, 4).unwrap(), s);
        }
    }

    #[test]
    fn generator_support_sizes() {
        let g4 = complement_generators(4).unwrap();
        let words = g4.enumerate().unwrap();
        assert!(words.iter().all(|w| w.count_ones() == 6 && w & 1 == 1));
        let g5 = complement_generators(5).unwrap();
        assert!(g5.enumerate_class(0).unwrap().iter().all(|w| w.count_ones() == 6));
        assert!(g5.enumerate_class(1).unwrap().iter().all(|w| w.count_ones() == 6));
    }

    #[test]
    fn gstar_shapes() {
        assert_eq!(gstar(4).unwrap().monomials().len(), 6);
        let diff = g1star(5).unwrap().add(&g2star(5).unwrap()).unwrap();
        assert_eq!(diff, parse_abbrev("1234", 5).unwrap());
        // at m = 3 the small sum is the constant, so g2* = x3
        assert_eq!(g2star(3).unwrap(), parse_abbrev("3", 3).unwrap());
        assert!(gstar(5).is_err());
        assert!(g1star(4).is_err());
    }

    #[test]
    fn quadratic_duals() {
        let f = AnfPolynomial::from_monomials(6, [0b111100]).unwrap();
        let q = quadratic_dual(&f).unwrap();
        assert_eq!(q.pairs.iter().copied().collect::<Vec<_>>(), vec![(1, 2)]);
        let p = p_k(2, 6).unwrap();
        let q = quadratic_dual(&p).unwrap();
        assert_eq!(q.as_anf().unwrap(), parse_abbrev("12+34", 6).unwrap());
        assert_eq!(quad_canonical_rank(&q), 2);
        assert!(quadratic_dual(&parse_abbrev("12", 6).unwrap()).is_err());
        assert!(quadratic_dual(&AnfPolynomial::zero(6)).is_err());
    }

    #[test]
    fn lemma8_examples() {
        assert!(lemma8_form(&BitMatrix::identity(4)).unwrap());
        let swap = BitMatrix::from_fn(4, 4, |i, j| match i {
            0 => j == 3,
            3 => j == 0,
            _ => i == j,
        });
        assert!(!lemma8_form(&swap).unwrap());
        let mut w = BitMatrix::identity(4);
        w.set(3, 0, true);
        w.set(3, 2, true);
        assert!(lemma8_form(&w).unwrap());
    }

    #[test]
    fn equivalence_basics() {
        let f = parse_abbrev("2345+123+14", 5).unwrap().truth_table();
        match el_equivalent(&f, &f, 1).unwrap() {
            Verdict::Equivalent { matrix, h, .. } => {
                assert_eq!(matrix, SmallMatrix::identity(5));
                assert!(h.is_zero());
            }
            other => panic!("{other:?}"),
        }
        let p1 = p_k(1, 5).unwrap().truth_table();
        let p2 = p_k(2, 5).unwrap().truth_table();
        assert!(!el_equivalent(&p1, &p2, 2).unwrap().is_equivalent());
        assert!(!el_equivalent_with(&p1, &p2, 2, &Ladder::exhaustive_only())
            .unwrap()
            .is_equivalent());
    }
}
