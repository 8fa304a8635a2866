// SPDX-License-Identifier: Apache-2.0

//! Binary linear codes of length at most 64, Reed-Muller codes in
//! particular: distances, covering radii, metric complements, second
//! complements and metric regularity.
//!
//! Words of length `n <= 64` are `u64`s with coordinate `i` at bit `i`; for
//! a Reed-Muller code coordinate `i` is the truth-table index `i`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boolfn::{BooleanFunction, MAX_VARS};
use crate::gf2linalg::{rank_of_words, BitVector};
use crate::syndrome;
use crate::{Error, Result};

/// Largest word length handled by the coset engine.
pub const MAX_ENGINE_LENGTH: usize = 64;
/// Largest `n - k` for a general coset scan.
pub const MAX_SCAN_BITS: usize = 26;
/// Scans with the weight-only distance (repetition codes) may go further.
pub const MAX_CHEAP_SCAN_BITS: usize = 32;
/// Largest `n - k` for which leader weights are tabulated by BFS.
pub const MAX_TABLE_BITS: usize = 22;
/// Largest dimension for distance by codeword enumeration.
pub const MAX_ENUMERATION_DIM: usize = 26;
/// Complements with more cosets than this are kept implicit.
pub const MAX_STORED_REPRESENTATIVES: u64 = 1 << 24;

const CHUNK_BITS: usize = 16;

/// `(k, m)` of a Reed-Muller code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RmLabel {
    pub k: usize,
    pub m: usize,
}

/// Binary linear code given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    generators: Vec<BitVector>,
    label: Option<RmLabel>,
}

impl LinearCode {
    /// Checks lengths and linear independence of the generators.
    pub fn new(n: usize, generators: Vec<BitVector>) -> Result<Self> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        let rank = if n <= 64 {
            rank_of_words(&generators.iter().map(|g| g.as_u64().unwrap_or(0)).collect::<Vec<_>>())
        } else {
            crate::gf2linalg::BitMatrix::from_rows(&generators)?.rank()
        };
        if rank != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(Self {
            n,
            generators,
            label: None,
        })
    }

    /// Code of length `n <= 64` from generator words.
    pub fn from_words(n: usize, generators: &[u64]) -> Result<Self> {
        if n > MAX_ENGINE_LENGTH {
            return Err(Error::OutOfRange(format!("word codes need n <= 64, got {n}")));
        }
        Self::new(n, generators.iter().map(|&g| BitVector::from_u64(n, g)).collect())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[BitVector] {
        &self.generators
    }

    /// Generators as words; `None` when `n > 64`.
    pub fn generator_words(&self) -> Option<Vec<u64>> {
        (self.n <= MAX_ENGINE_LENGTH)
            .then(|| self.generators.iter().map(|g| g.as_u64().unwrap_or(0)).collect())
    }

    pub fn label(&self) -> Option<RmLabel> {
        self.label
    }

    pub fn name(&self) -> String {
        match self.label {
            Some(RmLabel { k, m }) => format!("RM({k},{m})"),
            None => format!("[{}, {}] code", self.n, self.dim()),
        }
    }

    /// All codewords as words, guarded at dimension 22.
    pub fn codeword_words(&self) -> Result<Vec<u64>> {
        let gens = self.words_or_err()?;
        if gens.len() > 22 {
            return Err(Error::Infeasible(format!("listing 2^{} codewords", gens.len())));
        }
        let mut out = Vec::with_capacity(1 << gens.len());
        let mut c = 0u64;
        out.push(c);
        for i in 1u64..(1 << gens.len()) {
            c ^= gens[i.trailing_zeros() as usize];
            out.push(c);
        }
        Ok(out)
    }

    fn words_or_err(&self) -> Result<Vec<u64>> {
        self.generator_words()
            .ok_or_else(|| Error::Infeasible(format!("length {} exceeds 64", self.n)))
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        let mut rows = self.generators.clone();
        rows.push(v.clone());
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(crate::gf2linalg::BitMatrix::from_rows(&rows)?.rank() == self.dim())
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `RM(k, m)`: truth tables of the monomials of degree at most `k`, ordered
/// by degree and then by variable mask.
pub fn rm_code(k: usize, m: usize) -> Result<LinearCode> {
    if k > m || m > MAX_VARS {
        return Err(Error::OutOfRange(format!("RM({k},{m}) needs 0 <= k <= m <= {MAX_VARS}")));
    }
    let mut monomials: Vec<u32> = (0..(1u32 << m)).filter(|x| x.count_ones() as usize <= k).collect();
    monomials.sort_by_key(|&x| (x.count_ones(), x));
    debug_assert_eq!(monomials.len(), (0..=k).map(|i| binomial(m, i)).sum::<usize>());
    let generators = monomials
        .iter()
        .map(|&mono| BooleanFunction::monomial(m, mono).to_bit_vector())
        .collect();
    Ok(LinearCode {
        n: 1 << m,
        generators,
        label: Some(RmLabel { k, m }),
    })
}

/// `{(u, u + v) : u in c1, v in c2}`, `u` in the low half.
pub fn uuv_code(c1: &LinearCode, c2: &LinearCode) -> Result<LinearCode> {
    if c1.n != c2.n {
        return Err(Error::DimensionMismatch {
            expected: c1.n,
            got: c2.n,
        });
    }
    let zero = BitVector::zeros(c1.n);
    let mut generators: Vec<BitVector> = c1.generators.iter().map(|u| u.concat(u)).collect();
    generators.extend(c2.generators.iter().map(|v| zero.concat(v)));
    let mut code = LinearCode::new(2 * c1.n, generators)?;
    if let (Some(a), Some(b)) = (c1.label, c2.label) {
        if a.m == b.m && a.k == b.k + 1 {
            code.label = Some(RmLabel { k: a.k, m: a.m + 1 });
        }
    }
    Ok(code)
}

/// Code with a parity bit prepended: `(wt(c) mod 2, c)`.
pub fn parity_extension(code: &LinearCode) -> Result<LinearCode> {
    let generators = code
        .generators
        .iter()
        .map(|g| BitVector::from_bits(&[g.weight() % 2 == 1]).concat(g))
        .collect();
    LinearCode::new(code.n + 1, generators)
}

/// How a [`CosetSpace`] measures distance to the code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DistanceMethod {
    /// Minimum over all codewords.
    Enumerate,
    /// BFS table of coset-leader weights.
    Table,
    /// `RM(1, m)`, `m <= 6`, via correlation with linear functions.
    Walsh,
    /// `RM(0, m)`: `min(wt, n - wt)`.
    Repetition,
    /// `RM(m-3, m)` via the minimal factor of the syndrome matrix.
    Syndrome,
}

#[derive(Debug)]
enum Backend {
    Enumerate { codewords: Option<Vec<u64>> },
    Table { weights: Vec<u8> },
    Walsh { linear: Vec<u64> },
    Repetition,
    Syndrome { m: usize },
}

/// Cosets of a code of length `n <= 64` with canonical representatives.
///
/// Generators are put in reduced echelon form with the pivot at the lowest
/// set bit; a word is canonical when it vanishes on every pivot. The coset
/// index is the word restricted to the free (non-pivot) coordinates.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    n: usize,
    code: LinearCode,
    rows: Vec<u64>,
    pivots: Vec<u32>,
    free: Vec<u32>,
    unit_index: Vec<u64>,
    method: DistanceMethod,
    backend: Arc<Backend>,
}

impl CosetSpace {
    /// Picks the fastest exact method available for the code.
    pub fn new(code: &LinearCode) -> Result<Self> {
        let bits = code.n - code.dim();
        let method = match code.label {
            Some(RmLabel { k: 0, .. }) => DistanceMethod::Repetition,
            Some(RmLabel { k: 1, m }) if m <= 6 && bits > MAX_TABLE_BITS => DistanceMethod::Walsh,
            _ if bits <= MAX_TABLE_BITS => DistanceMethod::Table,
            Some(RmLabel { k, m }) if m >= 3 && k + 3 == m => DistanceMethod::Syndrome,
            _ => DistanceMethod::Enumerate,
        };
        Self::with_method(code, method)
    }

    pub fn with_method(code: &LinearCode, method: DistanceMethod) -> Result<Self> {
        let n = code.n;
        if n > MAX_ENGINE_LENGTH {
            return Err(Error::Infeasible(format!("length {n} exceeds {MAX_ENGINE_LENGTH}")));
        }
        let gens = code.words_or_err()?;
        let (rows, pivots) = echelon_lowest_pivot(&gens);
        let pivot_mask = pivots.iter().fold(0u64, |acc, &p| acc | 1 << p);
        let free: Vec<u32> = (0..n as u32).filter(|i| pivot_mask >> i & 1 == 0).collect();
        let mut space = Self {
            n,
            code: code.clone(),
            rows,
            pivots,
            free,
            unit_index: Vec::new(),
            method,
            backend: Arc::new(Backend::Repetition),
        };
        space.unit_index = (0..n).map(|i| space.index_of(1 << i)).collect();
        let rm = code.label;
        let backend = match method {
            DistanceMethod::Enumerate => {
                if gens.len() > MAX_ENUMERATION_DIM {
                    return Err(Error::Infeasible(format!("enumerating 2^{} codewords", gens.len())));
                }
                Backend::Enumerate {
                    codewords: (gens.len() <= 16).then(|| code.codeword_words()).transpose()?,
                }
            }
            DistanceMethod::Table => {
                if space.coset_bits() > MAX_TABLE_BITS {
                    return Err(Error::Infeasible(format!(
                        "tabulating 2^{} coset leaders",
                        space.coset_bits()
                    )));
                }
                Backend::Table {
                    weights: space.leader_table(),
                }
            }
            DistanceMethod::Walsh => match rm {
                Some(RmLabel { k: 1, m }) if m <= 6 => Backend::Walsh {
                    linear: (0..(1u32 << m))
                        .map(|a| {
                            (0..(1u32 << m))
                                .filter(|&x| (a & x).count_ones() % 2 == 1)
                                .fold(0u64, |t, x| t | 1 << x)
                        })
                        .collect(),
                },
                _ => return Err(Error::Inconsistent("the Walsh method needs RM(1, m <= 6)".into())),
            },
            DistanceMethod::Repetition => match rm {
                Some(RmLabel { k: 0, .. }) => Backend::Repetition,
                _ => return Err(Error::Inconsistent("the repetition method needs RM(0, m)".into())),
            },
            DistanceMethod::Syndrome => match rm {
                Some(RmLabel { k, m }) if m >= 3 && k + 3 == m => Backend::Syndrome { m },
                _ => return Err(Error::Inconsistent("the syndrome method needs RM(m-3, m)".into())),
            },
        };
        space.backend = Arc::new(backend);
        Ok(space)
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn method(&self) -> DistanceMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `n - k`.
    pub fn coset_bits(&self) -> usize {
        self.free.len()
    }

    pub fn coset_count(&self) -> u128 {
        1u128 << self.coset_bits()
    }

    /// Reduced echelon rows of the code.
    pub fn echelon_rows(&self) -> &[u64] {
        &self.rows
    }

    /// The canonical representative of `v + C`.
    #[inline]
    pub fn canonical(&self, v: u64) -> u64 {
        let mut v = v;
        for (&r, &p) in self.rows.iter().zip(&self.pivots) {
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    #[inline]
    pub fn in_code(&self, v: u64) -> bool {
        self.canonical(v) == 0
    }

    /// Coset index of `v`: its canonical form restricted to the free coordinates.
    #[inline]
    pub fn index_of(&self, v: u64) -> u64 {
        let c = self.canonical(v);
        self.free
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &f)| acc | ((c >> f) & 1) << j)
    }

    /// Canonical representative with the given index.
    #[inline]
    pub fn representative(&self, index: u64) -> u64 {
        self.free
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &f)| acc | ((index >> j) & 1) << f)
    }

    /// Weight of the coset leader of `v + C`.
    pub fn distance(&self, v: u64) -> u32 {
        match &*self.backend {
            Backend::Enumerate { codewords: Some(cw) } => {
                cw.iter().map(|&c| (v ^ c).count_ones()).min().unwrap_or(0)
            }
            Backend::Enumerate { codewords: None } => {
                let gens = self.code.generator_words().expect("engine code fits in words");
                min_weight_gray(v, &gens)
            }
            Backend::Table { weights } => weights[self.index_of(v) as usize] as u32,
            Backend::Walsh { linear } => walsh_distance(v, linear, self.n as u32),
            Backend::Repetition => {
                let w = v.count_ones();
                w.min(self.n as u32 - w)
            }
            Backend::Syndrome { m } => syndrome::distance_rm_m3_word(v, *m),
        }
    }

    #[inline]
    fn distance_indexed(&self, index: u64, rep: u64) -> u32 {
        match &*self.backend {
            Backend::Table { weights } => weights[index as usize] as u32,
            _ => self.distance(rep),
        }
    }

    fn leader_table(&self) -> Vec<u8> {
        let size = 1usize << self.coset_bits();
        let mut weights = vec![u8::MAX; size];
        let mut frontier = vec![0u64];
        weights[0] = 0;
        let mut level = 0u8;
        while !frontier.is_empty() {
            level += 1;
            let mut next = Vec::new();
            for &idx in &frontier {
                for &u in &self.unit_index {
                    let j = (idx ^ u) as usize;
                    if weights[j] == u8::MAX {
                        weights[j] = level;
                        next.push(j as u64);
                    }
                }
            }
            frontier = next;
        }
        weights
    }

    /// Errors when a full coset scan of this space is beyond the limits.
    pub fn check_scan(&self) -> Result<()> {
        let limit = match self.method {
            DistanceMethod::Repetition => MAX_CHEAP_SCAN_BITS,
            _ => MAX_SCAN_BITS,
        };
        if self.coset_bits() > limit {
            Err(Error::Infeasible(format!(
                "{} has 2^{} cosets; scans are limited to 2^{limit}",
                self.code.name(),
                self.coset_bits()
            )))
        } else {
            Ok(())
        }
    }

    fn chunk_count(&self) -> u64 {
        1u64 << self.coset_bits().saturating_sub(CHUNK_BITS)
    }

    /// Visits every coset of chunk `c` as `(index, canonical representative)`.
    /// Inside a chunk the indices follow a Gray code, so each step flips one bit.
    fn walk_chunk(&self, c: u64, mut visit: impl FnMut(u64, u64)) {
        let per = 1u64 << self.coset_bits().min(CHUNK_BITS);
        let start = c * per;
        let gray = |i: u64| i ^ (i >> 1);
        let mut index = gray(start);
        let mut rep = self.representative(index);
        visit(index, rep);
        for i in start + 1..start + per {
            let j = i.trailing_zeros() as usize;
            index ^= 1 << j;
            rep ^= 1 << self.free[j];
            visit(index, rep);
        }
    }

    /// Parallel fold over all cosets; `visit(acc, index, rep, distance)`.
    fn fold_cosets<A, F, R>(&self, identity: impl Fn() -> A + Sync + Send, visit: F, reduce: R) -> Result<A>
    where
        A: Send,
        F: Fn(&mut A, u64, u64, u32) + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        self.check_scan()?;
        Ok((0..self.chunk_count())
            .into_par_iter()
            .map(|c| {
                let mut acc = identity();
                self.walk_chunk(c, |idx, rep| {
                    let d = self.distance_indexed(idx, rep);
                    visit(&mut acc, idx, rep, d);
                });
                acc
            })
            .reduce(&identity, reduce))
    }

    /// `(radius, number of cosets at the radius)`.
    pub fn radius_and_count(&self) -> Result<(u32, u64)> {
        self.fold_cosets(
            || (0u32, 0u64),
            |acc, _, _, d| {
                if d > acc.0 {
                    *acc = (d, 1);
                } else if d == acc.0 {
                    acc.1 += 1;
                }
            },
            |a, b| match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => (a.0, a.1 + b.1),
            },
        )
    }

    /// Canonical representatives of all cosets at distance `d`, in scan order.
    pub fn cosets_at_distance(&self, d: u32) -> Result<Vec<u64>> {
        self.check_scan()?;
        let parts: Vec<Vec<u64>> = (0..self.chunk_count())
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::new();
                self.walk_chunk(c, |idx, rep| {
                    if self.distance_indexed(idx, rep) == d {
                        out.push(rep);
                    }
                });
                out
            })
            .collect();
        Ok(parts.concat())
    }

    /// Histogram of coset-leader weights.
    pub fn leader_weight_distribution(&self) -> Result<Vec<u64>> {
        let n = self.n;
        self.fold_cosets(
            || vec![0u64; n + 1],
            |acc, _, _, d| acc[d as usize] += 1,
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
    }
}

fn echelon_lowest_pivot(gens: &[u64]) -> (Vec<u64>, Vec<u32>) {
    let mut rows: Vec<u64> = Vec::new();
    for &g in gens {
        let mut v = g;
        for &r in &rows {
            if v >> r.trailing_zeros() & 1 == 1 {
                v ^= r;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros();
        for r in rows.iter_mut() {
            if *r >> p & 1 == 1 {
                *r ^= v;
            }
        }
        rows.push(v);
    }
    rows.sort_by_key(|r| r.trailing_zeros());
    let pivots = rows.iter().map(|r| r.trailing_zeros()).collect();
    (rows, pivots)
}

fn min_weight_gray(v: u64, gens: &[u64]) -> u32 {
    let mut x = v;
    let mut best = x.count_ones();
    for i in 1u64..(1 << gens.len()) {
        x ^= gens[i.trailing_zeros() as usize];
        best = best.min(x.count_ones());
    }
    best
}

#[inline]
fn walsh_distance(v: u64, linear: &[u64], n: u32) -> u32 {
    let mut best = n;
    for &l in linear {
        let w = (v ^ l).count_ones();
        best = best.min(w).min(n - w);
    }
    best
}

/// Exact `d(v, C)`.
pub fn distance_to_code(v: &BitVector, code: &LinearCode) -> Result<u32> {
    if v.len() != code.n {
        return Err(Error::DimensionMismatch {
            expected: code.n,
            got: v.len(),
        });
    }
    if code.n <= MAX_ENGINE_LENGTH {
        let word = v.as_u64().unwrap_or(0);
        // a single query does not justify building a leader table
        let space = match CosetSpace::new(code)? {
            s if s.method() == DistanceMethod::Table && code.dim() <= 16 => {
                CosetSpace::with_method(code, DistanceMethod::Enumerate)?
            }
            s => s,
        };
        return Ok(space.distance(word));
    }
    if code.dim() > MAX_ENUMERATION_DIM {
        return Err(Error::Infeasible(format!(
            "no fast path for {} and 2^{} codewords is too many",
            code.name(),
            code.dim()
        )));
    }
    let mut x = v.clone();
    let mut best = x.weight();
    for i in 1u64..(1 << code.dim()) {
        x.xor_assign(&code.generators[i.trailing_zeros() as usize]);
        best = best.min(x.weight());
    }
    Ok(best as u32)
}

pub fn covering_radius(code: &LinearCode) -> Result<u32> {
    Ok(CosetSpace::new(code)?.radius_and_count()?.0)
}

/// The metric complement of a code as a union of cosets.
#[derive(Clone, Debug)]
pub struct ComplementDescription {
    pub radius: u32,
    /// Number of cosets at distance `radius`.
    pub coset_count: u64,
    /// Canonical representatives, when few enough to keep.
    representatives: Option<Vec<u64>>,
    space: CosetSpace,
}

impl ComplementDescription {
    pub fn space(&self) -> &CosetSpace {
        &self.space
    }

    pub fn code(&self) -> &LinearCode {
        self.space.code()
    }

    /// Number of deep holes, `coset_count * 2^k`.
    pub fn size(&self) -> u128 {
        (self.coset_count as u128) << self.code().dim()
    }

    pub fn stored_representatives(&self) -> Option<&[u64]> {
        self.representatives.as_deref()
    }

    /// Representatives, rescanning when they were not stored.
    pub fn representatives(&self) -> Result<Vec<u64>> {
        match &self.representatives {
            Some(r) => Ok(r.clone()),
            None => self.space.cosets_at_distance(self.radius),
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        self.space.distance(v) == self.radius
    }

    /// Every deep hole, for small complements (at most `2^24` words).
    pub fn expand(&self) -> Result<Vec<u64>> {
        if self.size() > 1 << 24 {
            return Err(Error::Infeasible(format!("expanding {} deep holes", self.size())));
        }
        let codewords = self.code().codeword_words()?;
        let mut out: Vec<u64> = self
            .representatives()?
            .iter()
            .flat_map(|&r| codewords.iter().map(move |&c| r ^ c))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Rebuilds the description around precomputed representatives.
    pub fn from_representatives(code: &LinearCode, radius: u32, mut reps: Vec<u64>) -> Result<Self> {
        let space = CosetSpace::new(code)?;
        for r in reps.iter_mut() {
            if space.distance(*r) != radius {
                return Err(Error::Inconsistent(format!("{r:#x} is not at distance {radius}")));
            }
            *r = space.canonical(*r);
        }
        reps.sort_unstable();
        reps.dedup();
        Ok(Self {
            radius,
            coset_count: reps.len() as u64,
            representatives: Some(reps),
            space,
        })
    }
}

pub fn metric_complement(code: &LinearCode) -> Result<ComplementDescription> {
    let space = CosetSpace::new(code)?;
    let (radius, coset_count) = space.radius_and_count()?;
    let representatives = if coset_count <= MAX_STORED_REPRESENTATIVES {
        Some(space.cosets_at_distance(radius)?)
    } else {
        None
    };
    Ok(ComplementDescription {
        radius,
        coset_count,
        representatives,
        space,
    })
}

const PROBES: usize = 64;

fn probe_holes(comp: &ComplementDescription) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    match &comp.representatives {
        Some(reps) => (0..PROBES.min(reps.len()))
            .map(|_| reps[rng.gen_range(0..reps.len())])
            .collect(),
        None => {
            let n = comp.space.len();
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let mut out = Vec::new();
            for _ in 0..10_000_000u32 {
                let v = rng.gen::<u64>() & mask;
                if comp.contains(v) {
                    out.push(v);
                    if out.len() == PROBES {
                        break;
                    }
                }
            }
            out
        }
    }
}

/// Canonical representatives `x` with `x + Ĉ = Ĉ`, sorted (always contains 0).
pub fn second_complement_members(code: &LinearCode, comp: &ComplementDescription) -> Result<Vec<u64>> {
    if comp.code() != code {
        return Err(Error::Inconsistent("complement was computed for another code".into()));
    }
    let space = &comp.space;
    let reps = comp.representatives()?;
    let Some(&d0) = reps.first() else {
        return Err(Error::Inconsistent("empty metric complement".into()));
    };
    let probes = probe_holes(comp);
    let preserves = |x: u64, holes: &[u64]| holes.iter().all(|&h| space.distance(x ^ h) == comp.radius);
    // x + d0 must be deep, so the candidates are Ĉ + d0
    let mut members: Vec<u64> = reps
        .par_iter()
        .filter_map(|&d| {
            let x = space.canonical(d ^ d0);
            if x == 0 {
                return Some(0);
            }
            (preserves(x, &probes) && preserves(x, &reps)).then_some(x)
        })
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(members)
}

pub fn is_metrically_regular(code: &LinearCode) -> Result<bool> {
    let comp = metric_complement(code)?;
    Ok(second_complement_members(code, &comp)? == vec![0])
}

/// Complement of the parity-extended code from the complement of `C`
/// (radius `r`): representative `v` becomes `(wt(v) + [r even] mod 2, v)`.
pub fn extend_parity_complement(comp: &ComplementDescription) -> Result<ComplementDescription> {
    let extended = parity_extension(comp.code())?;
    let flip = u64::from(comp.radius.is_multiple_of(2));
    let reps = comp
        .representatives()?
        .iter()
        .map(|&v| (v << 1) | ((v.count_ones() as u64 & 1) ^ flip))
        .collect();
    ComplementDescription::from_representatives(&extended, comp.radius + 1, reps)
}

/// Exact `d((y, w), RM(2, 6))` by walking all `2^22` codewords.
pub fn rm26_witness_distance(y: u32, w: u32) -> u32 {
    let code = rm_code(2, 6).expect("valid parameters");
    let gens = code.generator_words().expect("n = 64");
    min_weight_gray(y as u64 | (w as u64) << 32, &gens)
}

/// A pair `(y, w)` at distance 18 from `RM(2, 6)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rm26Witness {
    pub y: u32,
    pub w: u32,
    pub distance: u32,
    /// Codewords `u` of `RM(2,5)` at distance 6 from `y`.
    pub close_codewords: usize,
    pub candidates_tried: usize,
}

/// Searches for `(y, w)` with `y` a deep hole of `RM(2, 5)` and `w + u` a deep
/// hole of `RM(1, 5)` for every `u` in `RM(2, 5)` at distance 6 from `y`, then
/// confirms the distance by full enumeration.
pub fn find_rm26_witness(y: u32, rm15_holes: &ComplementDescription) -> Result<Rm26Witness> {
    let rm25 = rm_code(2, 5)?;
    let rm25_space = CosetSpace::new(&rm25)?;
    if rm25_space.distance(y as u64) != 6 {
        return Err(Error::Inconsistent(format!("{y:#x} is not a deep hole of RM(2,5)")));
    }
    let close: Vec<u64> = rm25
        .codeword_words()?
        .into_iter()
        .filter(|&u| (u ^ y as u64).count_ones() == 6)
        .collect();
    let u1 = close[0];
    let mut tried = 0;
    for d in rm15_holes.representatives()? {
        let w = u1 ^ d;
        if !close.iter().all(|&u| rm15_holes.contains(w ^ u)) {
            continue;
        }
        tried += 1;
        let distance = rm26_witness_distance(y, w as u32);
        if distance == 18 {
            return Ok(Rm26Witness {
                y,
                w: w as u32,
                distance,
                close_codewords: close.len(),
                candidates_tried: tried,
            });
        }
    }
    Err(Error::Inconsistent("no compatible w reaches distance 18".into()))
}

/// Serializable summary of a complement computation.
#[derive(Clone, Debug, Serialize)]
pub struct CodeReport {
    pub code: CodeParams,
    pub radius: u32,
    pub complement_class_count: u64,
    pub complement_size: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeParams {
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub dim: usize,
}

impl CodeReport {
    pub fn new(comp: &ComplementDescription, regular: Option<bool>) -> Self {
        let code = comp.code();
        let label = code.label().unwrap_or(RmLabel { k: 0, m: 0 });
        Self {
            code: CodeParams {
                k: label.k,
                m: label.m,
                n: code.len(),
                dim: code.dim(),
            },
            radius: comp.radius,
            complement_class_count: comp.coset_count,
            complement_size: comp.size(),
            regular,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::parse_abbrev;

    fn word(text: &str, m: usize) -> u64 {
        parse_abbrev(text, m).unwrap().truth_table().words()[0]
    }

    #[test]
    fn rm_parameters() {
        let c = rm_code(0, 3).unwrap();
        assert_eq!((c.len(), c.dim()), (8, 1));
        assert_eq!(c.generator_words().unwrap(), vec![0xff]);
        assert_eq!(rm_code(1, 5).unwrap().dim(), 6);
        assert_eq!(rm_code(2, 6).unwrap().dim(), 22);
        assert!(rm_code(4, 3).is_err());
    }

    #[test]
    fn canonical_form_is_a_coset_invariant() {
        let code = rm_code(1, 4).unwrap();
        let space = CosetSpace::new(&code).unwrap();
        let cw = code.codeword_words().unwrap();
        for v in [0x1234u64, 0xbeef, 0x8001] {
            let c = space.canonical(v);
            for &x in &cw {
                assert_eq!(space.canonical(v ^ x), c);
            }
            assert_eq!(space.representative(space.index_of(v)), c);
        }
    }

    #[test]
    fn methods_agree_on_small_codes() {
        for (k, m) in [(1usize, 4usize), (1, 3), (0, 4), (1, 5), (2, 5)] {
            let code = rm_code(k, m).unwrap();
            let reference = CosetSpace::with_method(&code, DistanceMethod::Enumerate).unwrap();
            let mut others = Vec::new();
            if code.len() - code.dim() <= MAX_TABLE_BITS {
                others.push(CosetSpace::with_method(&code, DistanceMethod::Table).unwrap());
            }
            if k == 1 {
                others.push(CosetSpace::with_method(&code, DistanceMethod::Walsh).unwrap());
            }
            if k == 0 {
                others.push(CosetSpace::with_method(&code, DistanceMethod::Repetition).unwrap());
            }
            if k + 3 == m {
                others.push(CosetSpace::with_method(&code, DistanceMethod::Syndrome).unwrap());
            }
            let mask = if code.len() == 64 { u64::MAX } else { (1u64 << code.len()) - 1 };
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64 * 10 + m as u64);
            for _ in 0..300 {
                let v = rng.gen::<u64>() & mask;
                let d = reference.distance(v);
                for o in &others {
                    assert_eq!(o.distance(v), d, "{:?} on RM({k},{m})", o.method());
                }
            }
        }
    }

    #[test]
    fn known_distances() {
        let rm15 = rm_code(1, 5).unwrap();
        let v = BooleanFunction::from_u64(5, word("2345+123+24+35", 5)).to_bit_vector();
        assert_eq!(distance_to_code(&v, &rm15).unwrap(), 12);
        let odd = BitVector::from_u64(16, 0x0001);
        assert_eq!(distance_to_code(&odd, &rm_code(2, 4).unwrap()).unwrap(), 1);
        let inside = BitVector::from_u64(32, word("3+0", 5));
        assert_eq!(distance_to_code(&inside, &rm15).unwrap(), 0);
    }

    #[test]
    fn small_radii() {
        assert_eq!(covering_radius(&rm_code(0, 3).unwrap()).unwrap(), 4);
        assert_eq!(covering_radius(&rm_code(2, 4).unwrap()).unwrap(), 2);
        assert_eq!(covering_radius(&rm_code(1, 4).unwrap()).unwrap(), 6);
        assert_eq!(covering_radius(&rm_code(4, 4).unwrap()).unwrap(), 0);
    }

    #[test]
    fn whole_space_is_its_own_complement() {
        let code = rm_code(3, 3).unwrap();
        let comp = metric_complement(&code).unwrap();
        assert_eq!(comp.radius, 0);
        assert_eq!(comp.size(), 256);
        assert_eq!(second_complement_members(&code, &comp).unwrap(), vec![0]);
    }

    #[test]
    fn top_layer_complement() {
        // RM(m-2, m) has the degree-(m-1) layer as its complement
        let code = rm_code(2, 4).unwrap();
        let comp = metric_complement(&code).unwrap();
        let holes = comp.expand().unwrap();
        let expect: Vec<u64> = (0u64..1 << 16)
            .filter(|&v| {
                let d = BooleanFunction::from_u64(4, v).degree();
                d == crate::boolfn::Degree::Finite(3)
            })
            .collect();
        assert_eq!(holes, expect);
    }

    #[test]
    fn uuv_rebuilds_reed_muller() {
        for (r, m) in [(1usize, 2usize), (2, 5), (1, 4)] {
            let c = uuv_code(&rm_code(r, m).unwrap(), &rm_code(r - 1, m).unwrap()).unwrap();
            let target = rm_code(r, m + 1).unwrap();
            assert_eq!(c.dim(), target.dim());
            let space = CosetSpace::with_method(&target, DistanceMethod::Enumerate).unwrap();
            assert!(c.generator_words().unwrap().iter().all(|&g| space.in_code(g)));
        }
        let zero = LinearCode::new(4, vec![]).unwrap();
        assert_eq!(uuv_code(&zero, &zero).unwrap().len(), 8);
    }

    #[test]
    fn witness_distance_basics() {
        assert_eq!(rm26_witness_distance(0, 0), 0);
        assert_eq!(rm26_witness_distance(1, 0), 1);
    }

    #[test]
    fn parity_extension_small() {
        let code = rm_code(1, 3).unwrap();
        let comp = metric_complement(&code).unwrap();
        let ext = extend_parity_complement(&comp).unwrap();
        let direct = metric_complement(&parity_extension(&code).unwrap()).unwrap();
        assert_eq!(ext.radius, direct.radius);
        assert_eq!(ext.representatives().unwrap(), {
            let mut r = direct.representatives().unwrap();
            r.sort_unstable();
            r
        });
    }
}
