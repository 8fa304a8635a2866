// SPDX-License-Identifier: Apache-2.0

//! Randomized property checks shared by the acceptance harness and the
//! proptest suite. Each check draws its case from the given RNG and returns
//! a description of the first violation.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rm_metric::boolfn::{apply_affine_substitution, run_script, AnfPolynomial, BooleanFunction, TransformScript};
use rm_metric::gf2linalg::{factor_ops, random_invertible, BitMatrix, BitVector, FactorOp};
use rm_metric::oracle;
use rm_metric::rmcodes::{extend_parity_complement, metric_complement, parity_extension, LinearCode};
use rm_metric::syndrome::{el_equivalent, lemma8_form, quad_canonical_rank, quadratic_dual, Verdict};

pub type Check = Result<(), String>;

pub fn random_function<R: Rng>(rng: &mut R, m: usize) -> BooleanFunction {
    let words: Vec<u64> = (0..(1usize << m).div_ceil(64)).map(|_| rng.gen()).collect();
    BooleanFunction::from_fn(m, |x| words[x as usize / 64] >> (x % 64) & 1 == 1)
}

pub fn random_anf<R: Rng>(rng: &mut R, m: usize, max_degree: u32) -> AnfPolynomial {
    let monos = (0u32..1 << m).filter(|x| x.count_ones() <= max_degree && rng.gen_bool(0.5));
    AnfPolynomial::from_monomials(m, monos).expect("valid monomials")
}

/// Sum of squared Walsh coefficients is `4^m`; `W(0)` gives the weight.
pub fn parseval<R: Rng>(rng: &mut R) -> Check {
    let m = rng.gen_range(1..=8);
    let f = random_function(rng, m);
    let w = f.walsh_spectrum();
    let energy: i64 = w.iter().map(|&x| i64::from(x) * i64::from(x)).sum();
    if energy != 1i64 << (2 * m) {
        return Err(format!("m={m}: sum W^2 = {energy}"));
    }
    if f.weight() as i64 != (1i64 << (m - 1)) - i64::from(w[0]) / 2 {
        return Err(format!("m={m}: weight {} vs W(0) = {}", f.weight(), w[0]));
    }
    if m <= 5 {
        let walsh = (1u32 << (m - 1)) - w.iter().map(|x| x.unsigned_abs()).max().unwrap() / 2;
        let brute = oracle::affine_distance(m, f.words()[0]);
        if walsh != brute {
            return Err(format!("m={m}: Walsh distance {walsh}, brute force {brute}"));
        }
    }
    Ok(())
}

pub fn moebius_round_trip<R: Rng>(rng: &mut R) -> Check {
    let m = rng.gen_range(1..=8);
    let a = random_anf(rng, m, m as u32);
    let back = a.truth_table().anf();
    if back != a {
        return Err(format!("m={m}: {a} came back as {back}"));
    }
    Ok(())
}

fn gram(b: &BitMatrix) -> BitMatrix {
    b.mul(&b.transpose()).expect("conformable")
}

/// Every factor operation keeps `B B^T`.
pub fn factor_op<R: Rng>(rng: &mut R) -> Check {
    let m = rng.gen_range(2..=6);
    let t = rng.gen_range(1..=8);
    let mut cols: Vec<BitVector> = (0..t)
        .map(|_| BitVector::from_u64(m, rng.gen::<u64>() & ((1 << m) - 1)))
        .collect();
    let op = match rng.gen_range(0..4) {
        0 => {
            let j = rng.gen_range(0..=cols.len());
            cols.insert(j, BitVector::zeros(m));
            FactorOp::DeleteZeroColumn(j)
        }
        1 => {
            let src = cols[rng.gen_range(0..cols.len())].clone();
            let j = rng.gen_range(0..=cols.len());
            cols.insert(j, src.clone());
            let other = cols.iter().enumerate().position(|(i, c)| i != j && *c == src).unwrap();
            FactorOp::DeleteEqualColumns(j, other)
        }
        2 => FactorOp::SwapColumns(rng.gen_range(0..cols.len()), rng.gen_range(0..cols.len())),
        _ => {
            // an odd number of columns plus their sum: an even set summing to zero
            let mut idx: Vec<usize> = (0..cols.len()).collect();
            idx.shuffle(rng);
            let j = rng.gen_range(0..cols.len().div_ceil(2)) * 2 + 1;
            let mut chosen: Vec<usize> = idx[..j.min(cols.len())].to_vec();
            if chosen.len().is_multiple_of(2) {
                chosen.pop();
            }
            let sum = chosen.iter().fold(BitVector::zeros(m), |acc, &i| acc.xor(&cols[i]));
            cols.push(sum);
            chosen.push(cols.len() - 1);
            FactorOp::AddToColumns {
                columns: chosen,
                vector: BitVector::from_u64(m, rng.gen::<u64>() & ((1 << m) - 1)),
            }
        }
    };
    let b = BitMatrix::from_columns(m, &cols).map_err(|e| e.to_string())?;
    let b2 = factor_ops(&b, &op).map_err(|e| format!("{op:?}: {e}"))?;
    if gram(&b) != gram(&b2) {
        return Err(format!("{op:?} changed the product"));
    }
    Ok(())
}

/// Orbits of degree-3 parts in five variables under `GL(5,2)`, computed by
/// breadth-first search over the `2^10` possible top layers.
pub struct CubicOrbits {
    labels: Vec<u16>,
}

impl CubicOrbits {
    const MONOS: usize = 10;

    fn monomials() -> Vec<u32> {
        (0u32..32).filter(|x| x.count_ones() == 3).collect()
    }

    fn layer(f: &AnfPolynomial) -> usize {
        Self::monomials()
            .iter()
            .enumerate()
            .filter(|(_, m)| f.contains(**m))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn new() -> Self {
        let monos = Self::monomials();
        let gens: Vec<TransformScript> = ["1<->2", "1<->2;2<->3;3<->4;4<->5", "1<-1+2"]
            .iter()
            .map(|s| TransformScript::parse(s).unwrap())
            .collect();
        let act = |x: usize, g: &TransformScript| {
            let f = AnfPolynomial::from_monomials(5, (0..Self::MONOS).filter(|i| x >> i & 1 == 1).map(|i| monos[i])).unwrap();
            Self::layer(&run_script(&f.truth_table(), g).unwrap().anf())
        };
        let mut labels = vec![u16::MAX; 1 << Self::MONOS];
        let mut next = 0;
        for start in 0..labels.len() {
            if labels[start] != u16::MAX {
                continue;
            }
            labels[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = act(x, g);
                    if labels[y] == u16::MAX {
                        labels[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        Self { labels }
    }

    pub fn label(&self, f: &AnfPolynomial) -> u16 {
        self.labels[Self::layer(f)]
    }
}

fn random_cubic<R: Rng>(rng: &mut R) -> AnfPolynomial {
    loop {
        let f = random_anf(rng, 5, 3);
        if f.degree() == rm_metric::boolfn::Degree::Finite(3) {
            return f;
        }
    }
}

/// Degree-3 functions in five variables are `EL^2`-equivalent exactly when
/// their quadratic duals have the same canonical rank.
pub fn dual_equivalence<R: Rng>(rng: &mut R, orbits: &CubicOrbits) -> Check {
    let f = random_cubic(rng);
    let g = if rng.gen_bool(0.5) {
        let a = random_invertible(5, rng);
        let moved = apply_affine_substitution(&random_cubic(rng).truth_table(), &a, &BitVector::zeros(5)).unwrap();
        moved.add(&random_anf(rng, 5, 2).truth_table()).unwrap().anf()
    } else {
        random_cubic(rng)
    };
    let same_orbit = orbits.label(&f) == orbits.label(&g);
    let rank = |p: &AnfPolynomial| quad_canonical_rank(&quadratic_dual(&p.reduce_mod_rm(2)).unwrap());
    let same_rank = rank(&f) == rank(&g);
    let (ft, gt) = (f.truth_table(), g.truth_table());
    let verdict = el_equivalent(&ft, &gt, 2).map_err(|e| e.to_string())?;
    if same_orbit != same_rank || verdict.is_equivalent() != same_orbit {
        return Err(format!(
            "f = {f}, g = {g}: orbit {same_orbit}, rank {same_rank}, search {}",
            verdict.is_equivalent()
        ));
    }
    if let Verdict::Equivalent { matrix, shift, .. } = verdict {
        let moved = apply_affine_substitution(&gt, &matrix.to_bit_matrix(), &BitVector::from_u64(5, u64::from(shift))).unwrap();
        let h = ft.add(&moved).unwrap().anf();
        if !h.degree().at_most(2) {
            return Err(format!("witness for {f} ~ {g} leaves {h}"));
        }
    }
    Ok(())
}

fn lemma8_matrix<R: Rng>(rng: &mut R, m: usize) -> BitMatrix {
    let lead = random_invertible(m - 1, rng);
    BitMatrix::from_fn(m, m, |i, j| match (i < m - 1, j < m - 1) {
        (true, true) => lead.get(i, j),
        (true, false) => false,
        (false, true) => rng.gen(),
        (false, false) => true,
    })
}

/// `x1..x_{m-1} ∘ L_A` keeps its top layer exactly for matrices of the
/// block form.
pub fn block_form<R: Rng>(rng: &mut R) -> Check {
    let m = rng.gen_range(4..=5);
    let a = if rng.gen_bool(0.5) { lemma8_matrix(rng, m) } else { random_invertible(m, rng) };
    let top = (1u32 << (m - 1)) - 1;
    let moved = apply_affine_substitution(&BooleanFunction::monomial(m, top), &a, &BitVector::zeros(m)).unwrap();
    let reduced = moved.anf().reduce_mod_rm(m as u32 - 2);
    let keeps = reduced.monomials().iter().copied().eq([top]);
    let form = lemma8_form(&a).unwrap();
    if keeps != form {
        return Err(format!("m={m}: keeps top layer {keeps}, block form {form}"));
    }
    Ok(())
}

/// For block-form `A`, the part of `f∘L_A` divisible by `x_m` is `x_m`
/// times the leading block applied to the cofactor.
pub fn cofactor_transform<R: Rng>(rng: &mut R) -> Check {
    let m = 5;
    let a = lemma8_matrix(rng, m);
    let q = random_anf(rng, m - 1, 4);
    let r = random_anf(rng, m - 1, 4);
    let xm = 1u32 << (m - 1);
    let f = AnfPolynomial::from_monomials(m, q.monomials().iter().map(|x| x | xm).chain(r.monomials().iter().copied())).unwrap();
    let moved = apply_affine_substitution(&f.truth_table(), &a, &BitVector::zeros(m)).unwrap().anf();
    let layer: BTreeSet<u32> = moved.monomials().iter().filter(|x| *x & xm != 0).map(|x| x ^ xm).collect();
    let idx: Vec<usize> = (0..m - 1).collect();
    let lead = a.submatrix(&idx, &idx);
    let expected = apply_affine_substitution(&q.truth_table(), &lead, &BitVector::zeros(m - 1)).unwrap().anf();
    if &layer != expected.monomials() {
        return Err(format!("q = {q}: got layer {layer:?}, expected {expected}"));
    }
    Ok(())
}

pub fn random_code<R: Rng>(rng: &mut R, max_len: usize) -> LinearCode {
    loop {
        let n = rng.gen_range(2..=max_len);
        let k = rng.gen_range(1..=n);
        let gens: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & ((1 << n) - 1)).collect();
        if let Ok(code) = LinearCode::from_words(n, &gens) {
            return code;
        }
    }
}

/// The parity-extension rule for complements against a brute-force
/// complement of the extended code.
pub fn parity_extension_rule<R: Rng>(rng: &mut R) -> Check {
    let code = random_code(rng, 11);
    let n = code.len();
    let comp = metric_complement(&code).map_err(|e| e.to_string())?;
    let mut ours = extend_parity_complement(&comp).and_then(|c| c.expand()).map_err(|e| e.to_string())?;
    ours.sort_unstable();
    let ext = parity_extension(&code).unwrap();
    let words = oracle::span(&ext.generator_words().unwrap());
    let brute = oracle::metric_complement(n + 1, &words).unwrap();
    if ours != brute {
        return Err(format!("{}: {} words vs {} by brute force", code.name(), ours.len(), brute.len()));
    }
    Ok(())
}
