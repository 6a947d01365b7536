//! Brute-force symmetrizer: the sum over all permutations of their
//! Matsumoto lifts, each built from a reduced word found by bubble sort.
//! Independent of the factorized construction in [`crate::nichols`].

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{Field, Scalar};
use crate::braided::{diagonal_space, rack_space, w_space, BraidedVectorSpace, DiagonalMatrixSpec};
use crate::linalg::{self, Matrix, SparseVec};
use crate::nichols::{apply_c, SymmetrizerOp};
use crate::par::ExecMode;
use crate::racks::{enumerate_quandles, next_permutation, Rack};

/// Adjacent transpositions, as slot positions, that bubble-sort `perm`.
pub fn reduced_word(perm: &[usize]) -> Vec<usize> {
    let mut a = perm.to_vec();
    let mut word = Vec::new();
    let n = a.len();
    for pass in 0..n {
        for i in 0..n.saturating_sub(1 + pass) {
            if a[i] > a[i + 1] {
                a.swap(i, i + 1);
                word.push(i);
            }
        }
    }
    word
}

pub fn matsumoto_symmetrizer(v: &BraidedVectorSpace, n: usize) -> SymmetrizerOp {
    let f = v.field();
    let size = v.dim().pow(n as u32);
    let mut words = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        words.push(reduced_word(&perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let columns: Vec<SparseVec> = (0..size)
        .map(|w| {
            let mut acc: Vec<(usize, crate::arith::Scalar)> = Vec::new();
            for word in &words {
                let mut x: SparseVec = vec![(w, f.one())];
                for &pos in word {
                    x = apply_c(v, n, pos, &x);
                }
                acc.extend(x);
            }
            linalg::normalize(f, acc)
        })
        .collect();
    SymmetrizerOp { degree: n, dim: v.dim(), columns }
}

fn random_unit(f: &Field, rng: &mut ChaCha8Rng) -> Scalar {
    let p = f.characteristic() as i64;
    f.from_int(rng.gen_range(1..p))
}

fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let p = f.characteristic() as i64;
    loop {
        let m: Matrix = (0..n).map(|_| (0..n).map(|_| f.from_int(rng.gen_range(0..p))).collect()).collect();
        if linalg::rank(f, &m) == n {
            return m;
        }
    }
}

/// A braided vector space of dimension at most `max_dim` (at least 1) drawn
/// from diagonal, rack-type and W-type families over small prime fields,
/// about half of them written in a random basis so that the braiding is not
/// monomial.
pub fn random_braided_space(rng: &mut ChaCha8Rng, max_dim: usize) -> BraidedVectorSpace {
    let max_dim = max_dim.max(1);
    let f = Field::prime([5, 7][rng.gen_range(0..2)]).expect("prime");
    let base = match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..=max_dim);
            let q = (0..n).map(|_| (0..n).map(|_| random_unit(&f, rng)).collect()).collect();
            diagonal_space(&DiagonalMatrixSpec { q }, &f).expect("diagonal")
        }
        1 if max_dim >= 3 => {
            let f3 = Field::prime(3).expect("prime");
            let a = f3.from_int(2);
            let b = f3.from_int(rng.gen_range(1..3));
            return maybe_twist(w_space(3, &a, &b, &f3).expect("W-space"), rng);
        }
        _ => {
            let n = rng.gen_range(1..=max_dim);
            let tables = enumerate_quandles(n, ExecMode::Sequential);
            let rack = Rack::from_table(tables[rng.gen_range(0..tables.len())].clone()).expect("quandle");
            rack_space(&rack, &random_unit(&f, rng), &f).expect("rack space")
        }
    };
    maybe_twist(base, rng)
}

fn maybe_twist(v: BraidedVectorSpace, rng: &mut ChaCha8Rng) -> BraidedVectorSpace {
    if rng.gen_bool(0.5) {
        let g = random_invertible(v.field(), v.dim(), rng);
        v.in_basis(&g).expect("invertible basis").with_name("random basis change")
    } else {
        v
    }
}
