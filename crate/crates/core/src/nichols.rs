//! Quantum symmetrizers and the per-degree dimensions of Nichols algebras.
//!
//! `S_n` is assembled column by column from `S_{n-1}` through
//! `S_n = (S_{n-1} ⊗ id) · T_n` with
//! `T_n = 1 + c_{n-1}(1 + c_{n-2}(⋯(1 + c_1)))`. Basis tensors split into
//! components linked by the supports of the `c_i`; the symmetrizer is block
//! diagonal along them and each block is ranked on its own.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{gauss_binomial, Field, FieldSpec, Scalar};
use crate::braided::BraidedVectorSpace;
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonBasis, SparseVec};
use crate::par::{self, ExecMode};

pub const DEFAULT_BUDGET_CHAR0: u128 = 200_000;
pub const DEFAULT_BUDGET_PRIME: u128 = 1_000_000;

pub fn default_budget(field: &Field) -> u128 {
    match field.spec() {
        FieldSpec::Finite { .. } => DEFAULT_BUDGET_PRIME,
        _ => DEFAULT_BUDGET_CHAR0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertReport {
    pub space: String,
    pub cap: usize,
    /// `dim B^n(V)` for `n = 0, 1, ...`; ends at the first zero when terminated.
    pub ranks: Vec<u64>,
    pub terminated: bool,
    pub total: Option<u64>,
    pub elapsed_ms: u64,
    /// Set when the ranks do not determine the whole Hilbert series.
    pub partial: bool,
}

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct EngineConfig {
    /// Largest admissible `dim(V)^n`; `None` picks the field default.
    pub budget: Option<u128>,
    pub mode: ExecMode,
}


/// `S_n` as sparse columns: `columns[w] = S_n e_w`, with tensor words
/// encoded in base `dim`, first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizerOp {
    pub degree: usize,
    pub dim: usize,
    pub columns: Vec<SparseVec>,
}

impl SymmetrizerOp {
    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn to_dense(&self, field: &Field) -> linalg::Matrix {
        let n = self.size();
        let mut m = linalg::zeros(field, n, n);
        for (col, v) in self.columns.iter().enumerate() {
            for (row, c) in v {
                m[*row][col] = c.clone();
            }
        }
        m
    }

    pub fn apply(&self, field: &Field, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.size()];
        for (col, x) in v.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (row, c) in &self.columns[col] {
                out[*row] = field.add(&out[*row], &field.mul(x, c));
            }
        }
        out
    }
}

fn word_count(dim: usize, n: usize) -> Option<u128> {
    (dim as u128).checked_pow(n as u32)
}

/// `c` in slots `(pos, pos+1)` of a sparse degree-`n` tensor.
pub(crate) fn apply_c(v: &BraidedVectorSpace, n: usize, pos: usize, x: &[(usize, Scalar)]) -> SparseVec {
    let f = v.field();
    let d = v.dim();
    let hi = d.pow((n - 1 - pos) as u32);
    let lo = d.pow((n - 2 - pos) as u32);
    let mut out = Vec::with_capacity(x.len());
    for (w, coef) in x {
        let a = (w / hi) % d;
        let b = (w / lo) % d;
        let base = w - a * hi - b * lo;
        for (k, l, c) in v.c(a, b) {
            out.push((base + k * hi + l * lo, f.mul(coef, c)));
        }
    }
    linalg::normalize(f, out)
}

fn add_sparse(f: &Field, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
    linalg::axpy(f, a, &f.one(), b)
}

/// `T_n e_w`.
fn shuffle_column(v: &BraidedVectorSpace, n: usize, w: usize) -> SparseVec {
    let f = v.field();
    let e: SparseVec = vec![(w, f.one())];
    let mut u = e.clone();
    for pos in 0..n - 1 {
        u = add_sparse(f, &e, &apply_c(v, n, pos, &u));
    }
    u
}

/// `S_n e_w` from the columns of `S_{n-1}`.
fn next_column(v: &BraidedVectorSpace, n: usize, prev: &[SparseVec], w: usize) -> SparseVec {
    let f = v.field();
    let d = v.dim();
    let mut acc: Vec<(usize, Scalar)> = Vec::new();
    for (wt, t) in shuffle_column(v, n, w) {
        let (head, last) = (wt / d, wt % d);
        for (idx, c) in &prev[head] {
            acc.push((idx * d + last, f.mul(&t, c)));
        }
    }
    linalg::normalize(f, acc)
}

fn identity_columns(v: &BraidedVectorSpace, n: usize) -> Vec<SparseVec> {
    let size = v.dim().pow(n as u32);
    (0..size).map(|w| vec![(w, v.field().one())]).collect()
}

fn check_budget(v: &BraidedVectorSpace, n: usize, budget: u128) -> Result<()> {
    match word_count(v.dim(), n) {
        Some(rows) if rows <= budget => Ok(()),
        rows => Err(Error::Resource(format!(
            "degree {n} needs {} rows, budget is {budget}",
            rows.map_or("more than 2^128".to_string(), |r| r.to_string())
        ))),
    }
}

fn build_degree(v: &BraidedVectorSpace, n: usize, prev: &[SparseVec], mode: ExecMode) -> Vec<SparseVec> {
    if n <= 1 {
        return identity_columns(v, n);
    }
    let size = v.dim().pow(n as u32);
    par::map_range(mode, size, |w| next_column(v, n, prev, w))
}

pub fn symmetrizer(v: &BraidedVectorSpace, n: usize) -> Result<SymmetrizerOp> {
    symmetrizer_with(v, n, &EngineConfig::default())
}

pub fn symmetrizer_with(v: &BraidedVectorSpace, n: usize, cfg: &EngineConfig) -> Result<SymmetrizerOp> {
    let budget = cfg.budget.unwrap_or_else(|| default_budget(v.field()));
    check_budget(v, n, budget)?;
    let mut cols = identity_columns(v, n.min(1));
    for k in 2..=n {
        cols = build_degree(v, k, &cols, cfg.mode);
    }
    Ok(SymmetrizerOp { degree: n, dim: v.dim(), columns: cols })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Components of the degree-`n` tensor basis under the supports of the
/// `c_i`; each block is sorted and blocks are ordered by least element.
pub fn tensor_blocks(v: &BraidedVectorSpace, n: usize) -> Vec<Vec<usize>> {
    let d = v.dim();
    let size = d.pow(n as u32);
    let mut uf = UnionFind::new(size);
    for w in 0..size {
        for pos in 0..n.saturating_sub(1) {
            let hi = d.pow((n - 1 - pos) as u32);
            let lo = d.pow((n - 2 - pos) as u32);
            let a = (w / hi) % d;
            let b = (w / lo) % d;
            let base = w - a * hi - b * lo;
            for (k, l, _) in v.c(a, b) {
                uf.union(w, base + k * hi + l * lo);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for w in 0..size {
        let r = uf.find(w);
        groups.entry(r).or_default().push(w);
    }
    groups.into_values().collect()
}

fn block_rank(field: &Field, cols: &[SparseVec], block: &[usize]) -> usize {
    let mut order: Vec<usize> = block.to_vec();
    order.sort_by_key(|&w| (cols[w].len(), w));
    let mut basis = EchelonBasis::new(field);
    for w in order {
        if basis.rank() == block.len() {
            break;
        }
        if !cols[w].is_empty() {
            basis.insert(cols[w].clone());
        }
    }
    basis.rank()
}

/// `rank S_n` by blocks.
pub fn symmetrizer_rank(v: &BraidedVectorSpace, op: &SymmetrizerOp, mode: ExecMode) -> u64 {
    let blocks = tensor_blocks(v, op.degree);
    par::map(mode, &blocks, |b| block_rank(v.field(), &op.columns, b)).into_iter().sum::<usize>() as u64
}

pub fn hilbert_series(v: &BraidedVectorSpace, cap: usize, budget: Option<u128>) -> Result<HilbertReport> {
    hilbert_series_with(v, cap, &EngineConfig { budget, ..EngineConfig::default() })
}

pub fn hilbert_series_with(v: &BraidedVectorSpace, cap: usize, cfg: &EngineConfig) -> Result<HilbertReport> {
    let start = Instant::now();
    let budget = cfg.budget.unwrap_or_else(|| default_budget(v.field()));
    let mut report =
        HilbertReport { space: v.name.clone(), cap, ranks: vec![1], terminated: false, total: None, elapsed_ms: 0, partial: true };
    let finish = |mut r: HilbertReport| {
        r.elapsed_ms = start.elapsed().as_millis() as u64;
        r.partial = !r.terminated;
        if r.terminated {
            r.total = Some(r.ranks.iter().sum());
        }
        r
    };
    let mut prev = identity_columns(v, 1);
    for n in 1..=cap {
        let rank = if n == 1 {
            v.dim() as u64
        } else {
            if check_budget(v, n, budget).is_err() {
                let rows = word_count(v.dim(), n).unwrap_or(u128::MAX);
                return Err(Error::Budget { degree: n, rows, budget, partial: Box::new(finish(report)) });
            }
            let op = SymmetrizerOp { degree: n, dim: v.dim(), columns: build_degree(v, n, &prev, cfg.mode) };
            let r = symmetrizer_rank(v, &op, cfg.mode);
            prev = op.columns;
            r
        };
        report.ranks.push(rank);
        if rank == 0 {
            report.terminated = true;
            break;
        }
    }
    Ok(finish(report))
}

/// Like [`hilbert_series_with`], but a budget stop returns the partial
/// report together with `true`.
pub fn hilbert_or_partial(v: &BraidedVectorSpace, cap: usize, cfg: &EngineConfig) -> Result<(HilbertReport, bool)> {
    match hilbert_series_with(v, cap, cfg) {
        Ok(r) => Ok((r, false)),
        Err(Error::Budget { partial, .. }) => Ok((*partial, true)),
        Err(e) => Err(e),
    }
}

/// Basis of `ker S_n` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationBasis {
    pub degree: usize,
    pub vectors: Vec<Vec<Scalar>>,
}

pub fn relations(v: &BraidedVectorSpace, n: usize) -> Result<RelationBasis> {
    if n < 2 {
        return Err(Error::Domain("relations start in degree 2".into()));
    }
    let op = symmetrizer(v, n)?;
    let f = v.field();
    let size = op.size();
    let blocks = tensor_blocks(v, n);
    let per_block: Vec<Vec<Vec<Scalar>>> = par::map(ExecMode::default(), &blocks, |block| {
        let pos: std::collections::HashMap<usize, usize> = block.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let k = block.len();
        let mut rows = linalg::zeros(f, k, k);
        for (j, &w) in block.iter().enumerate() {
            for (r, c) in &op.columns[w] {
                rows[pos[r]][j] = c.clone();
            }
        }
        linalg::nullspace(f, &rows, k)
            .into_iter()
            .map(|local| {
                let mut full = vec![f.zero(); size];
                for (i, x) in local.into_iter().enumerate() {
                    full[block[i]] = x;
                }
                full
            })
            .collect()
    });
    let mut vectors: Vec<Vec<Scalar>> = per_block.into_iter().flatten().collect();
    vectors.sort_by_key(|v| v.iter().position(|x| !f.is_zero(x)));
    Ok(RelationBasis { degree: n, vectors })
}

/// The `i ∈ (0, r)` with `binom(r, i)_λ ≠ 0`.
pub fn power_primitivity_defect(r: u64, lambda: &Scalar, field: &Field) -> Result<Vec<u64>> {
    if r == 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    if field.is_zero(lambda) {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    let mut out = Vec::new();
    for i in 1..r {
        let g = gauss_binomial(r as usize, i as usize)?;
        if !field.is_zero(&field.eval_poly(&g, lambda)) {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntPoly;
    use crate::braided::{diagonal_space, rack_space, DiagonalMatrixSpec};
    use crate::oracle::matsumoto_symmetrizer;
    use crate::racks::{affine_rack, AffineRackSpec};
    use proptest::prelude::*;

    fn aff_space(p: u64, a: u64, f: &Field) -> BraidedVectorSpace {
        rack_space(&affine_rack(AffineRackSpec::new(p, a).unwrap()), &f.from_int(-1), f).unwrap()
    }

    fn one_dim(f: &Field, q: Scalar) -> BraidedVectorSpace {
        diagonal_space(&DiagonalMatrixSpec { q: vec![vec![q]] }, f).unwrap()
    }

    #[test]
    fn small_symmetrizers() {
        let q = Field::rationals();
        let v = aff_space(3, 2, &q);
        let s2 = symmetrizer(&v, 2).unwrap();
        // 1 + c
        for w in 0..9 {
            let (i, j) = (w / 3, w % 3);
            let mut expect = vec![(w, q.one())];
            for (k, l, c) in v.c(i, j) {
                expect.push((k * 3 + l, c.clone()));
            }
            assert_eq!(s2.columns[w], linalg::normalize(&q, expect));
        }
        // 1-dim: (n)!_q
        let t = q.from_int(3);
        let x = one_dim(&q, t.clone());
        for n in 0..6 {
            let s = symmetrizer(&x, n).unwrap();
            let fact = (1..=n).fold(IntPoly::one(), |acc, k| acc.mul(&IntPoly::q_int(k)));
            assert_eq!(s.columns[0], vec![(0, q.eval_poly(&fact, &t))]);
        }
    }

    #[test]
    fn hilbert_examples() {
        let q = Field::rationals();
        let r = hilbert_series(&aff_space(3, 2, &q), 6, None).unwrap();
        assert_eq!(r.ranks, vec![1, 3, 4, 3, 1, 0]);
        assert!(r.terminated && !r.partial);
        assert_eq!(r.total, Some(12));

        let ext = hilbert_series(&one_dim(&q, q.from_int(-1)), 6, None).unwrap();
        assert_eq!((ext.ranks, ext.total), (vec![1, 1, 0], Some(2)));

        let poly = hilbert_series(&one_dim(&q, q.one()), 5, None).unwrap();
        assert_eq!(poly.ranks, vec![1; 6]);
        assert!(!poly.terminated && poly.partial && poly.total.is_none());
    }

    #[test]
    fn budget_carries_partial_report() {
        let q = Field::rationals();
        match hilbert_series(&aff_space(5, 2, &q), 6, Some(200)) {
            Err(Error::Budget { degree, partial, .. }) => {
                assert_eq!(degree, 4);
                assert_eq!(partial.ranks, vec![1, 5, 15, 35]);
                assert!(partial.partial);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn relation_bases() {
        let q = Field::rationals();
        let ext = relations(&one_dim(&q, q.from_int(-1)), 2).unwrap();
        assert_eq!(ext.vectors, vec![vec![q.one()]]);
        let v = aff_space(3, 2, &q);
        let rel = relations(&v, 2).unwrap();
        assert_eq!(rel.vectors.len(), 5);
        let s = symmetrizer(&v, 2).unwrap();
        for r in &rel.vectors {
            assert!(s.apply(&q, r).iter().all(|x| q.is_zero(x)));
        }
        let flip = diagonal_space(&DiagonalMatrixSpec { q: vec![vec![q.one(); 2]; 2] }, &q).unwrap();
        let rel = relations(&flip, 2).unwrap();
        // e0⊗e1 - e1⊗e0
        assert_eq!(rel.vectors, vec![vec![q.zero(), q.one(), q.from_int(-1), q.zero()]]);
        let r3 = relations(&v, 3).unwrap();
        assert_eq!(r3.vectors.len(), 27 - 3);
    }

    #[test]
    fn primitivity_defects() {
        let q = Field::rationals();
        assert!(power_primitivity_defect(2, &q.from_int(-1), &q).unwrap().is_empty());
        assert_eq!(power_primitivity_defect(2, &q.one(), &q).unwrap(), vec![1]);
        let f3 = Field::prime(3).unwrap();
        assert!(power_primitivity_defect(2, &f3.from_int(-1), &f3).unwrap().is_empty());
        let c5 = Field::cyclotomic(5).unwrap();
        assert!(power_primitivity_defect(5, &c5.generator(), &c5).unwrap().is_empty());
        assert_eq!(power_primitivity_defect(3, &c5.generator(), &c5).unwrap(), vec![1, 2]);
    }

    #[test]
    fn modes_are_bit_identical() {
        let f = Field::prime(7).unwrap();
        let v = rack_space(&affine_rack(AffineRackSpec::new(5, 3).unwrap()), &f.from_int(3), &f).unwrap();
        let seq = EngineConfig { budget: None, mode: ExecMode::Sequential };
        let par = EngineConfig { budget: None, mode: ExecMode::Parallel };
        assert_eq!(symmetrizer_with(&v, 4, &seq).unwrap(), symmetrizer_with(&v, 4, &par).unwrap());
        let a = hilbert_series_with(&v, 4, &seq).unwrap();
        let b = hilbert_series_with(&v, 4, &par).unwrap();
        assert_eq!(a.ranks, b.ranks);
    }

    fn random_space(f: &Field, dim: usize, raw: &[(usize, usize, i64)]) -> BraidedVectorSpace {
        // arbitrary (not necessarily braided) operators exercise the algebra of
        // the factorization just as well
        let mut terms = vec![Vec::new(); dim * dim];
        for (idx, &(k, l, c)) in raw.iter().enumerate() {
            terms[idx % (dim * dim)].push((k % dim, l % dim, f.from_int(c)));
        }
        BraidedVectorSpace::from_terms(f, dim, terms, "random").unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn factorized_matches_matsumoto(dim in 1usize..4, raw in proptest::collection::vec((0usize..3, 0usize..3, -3i64..4), 1..30)) {
            let f = Field::prime(101).unwrap();
            let v = random_space(&f, dim, &raw);
            for n in 0..=3 {
                prop_assert_eq!(symmetrizer(&v, n).unwrap(), matsumoto_symmetrizer(&v, n));
            }
        }

        #[test]
        fn diagonal_twist_invariance(q11 in 1i64..13, q12 in 1i64..13, q21 in 1i64..13, q22 in 1i64..13, t in 1i64..13) {
            let f = Field::prime(13).unwrap();
            let m = |a: i64, b: i64, c: i64, d: i64| DiagonalMatrixSpec {
                q: vec![vec![f.from_int(a), f.from_int(b)], vec![f.from_int(c), f.from_int(d)]],
            };
            let tinv = crate::arith::modp::inv(t as u64, 13) as i64;
            let v = diagonal_space(&m(q11, q12, q21, q22), &f).unwrap();
            let w = diagonal_space(&m(q11, q12 * t, q21 * tinv, q22), &f).unwrap();
            let a = hilbert_series(&v, 5, None).unwrap();
            let b = hilbert_series(&w, 5, None).unwrap();
            prop_assert_eq!(&a.ranks, &b.ranks);
            for n in 1..a.ranks.len() {
                prop_assert!(a.ranks[n] <= 2 * a.ranks[n - 1]);
            }
        }
    }
}
