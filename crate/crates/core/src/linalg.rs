//! Exact linear algebra over a runtime [`Field`]: dense reduced row-echelon
//! forms and a sparse incremental echelon basis used by the rank engine.

use std::collections::BTreeMap;

use crate::arith::{Field, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

/// Sorted `(index, nonzero coefficient)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![field.zero(); cols]; rows]
}

pub fn identity(field: &Field, n: usize) -> Matrix {
    let mut m = zeros(field, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    m
}

pub fn mat_mul(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter().zip(b.iter()).fold(field.zero(), |acc, (x, brow)| {
                        if field.is_zero(x) || field.is_zero(&brow[j]) {
                            acc
                        } else {
                            field.add(&acc, &field.mul(x, &brow[j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(field: &Field, a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Reduced row-echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(field: &Field, rows: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.clone();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !field.is_zero(&row[c]) {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !field.is_zero(y) {
                        *x = field.sub(x, &field.mul(&f, y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(field: &Field, rows: &Matrix) -> usize {
    rref(field, rows).1.len()
}

/// Basis of `{x : A x = 0}` for `A` with `ncols` columns, returned in
/// reduced row-echelon form.
pub fn nullspace(field: &Field, a: &Matrix, ncols: usize) -> Matrix {
    let (r, pivots) = if a.is_empty() { (Vec::new(), Vec::new()) } else { rref(field, a) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Matrix = free
        .iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = field.neg(&row[f]);
            }
            v
        })
        .collect();
    if basis.is_empty() {
        basis
    } else {
        rref(field, &basis).0
    }
}

pub fn inverse(field: &Field, a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(field, &aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coefficients expressing `v` in the span of `basis` (rows), if possible.
pub fn solve_in_span(field: &Field, basis: &Matrix, v: &[Scalar]) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return v.iter().all(|x| field.is_zero(x)).then(Vec::new);
    }
    // columns = basis vectors; augmented with v
    let k = basis.len();
    let n = v.len();
    let aug: Matrix = (0..n)
        .map(|i| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(field, &aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![field.zero(); k];
    for (row, &pc) in r.iter().zip(&pivots) {
        x[pc] = row[k].clone();
    }
    Some(x)
}

pub fn in_span(field: &Field, basis: &Matrix, v: &[Scalar]) -> bool {
    solve_in_span(field, basis, v).is_some()
}

/// Sparse `a + coef * b`.
pub fn axpy(field: &Field, a: &[(usize, Scalar)], coef: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(coef, &b[j].1)));
            j += 1;
        } else {
            let s = field.add(&a[i].1, &field.mul(coef, &b[j].1));
            if !field.is_zero(&s) {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sum duplicate indices and drop zeros.
pub fn normalize(field: &Field, mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|t| t.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = field.add(acc, &c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !field.is_zero(c));
    out
}

/// Row-echelon basis built one sparse vector at a time. Each stored vector
/// has leading coefficient 1 at its pivot.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: Field,
    rows: BTreeMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new(field: &Field) -> Self {
        EchelonBasis { field: field.clone(), rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let f = &self.field;
        let mut start = 0;
        while start < v.len() {
            let (idx, c) = v[start].clone();
            match self.rows.get(&idx) {
                Some(row) => {
                    v = axpy(f, &v, &f.neg(&c), row);
                }
                None => start += 1,
            }
        }
        v
    }

    /// Insert `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce_leading(v);
        if r.is_empty() {
            return false;
        }
        let f = &self.field;
        let inv = f.inv(&r[0].1).expect("nonzero leading coefficient");
        let r: SparseVec = r.into_iter().map(|(i, c)| (i, f.mul(&c, &inv))).collect();
        self.rows.insert(r[0].0, r);
        true
    }

    /// Reduce only until the leading index is a new pivot.
    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        let f = &self.field;
        while let Some((idx, c)) = v.first().cloned() {
            match self.rows.get(&idx) {
                Some(row) => v = axpy(f, &v, &f.neg(&c), row),
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce_leading(v).is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Scalar> {
        let f = Field::rationals();
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn rref_and_nullspace() {
        let f = Field::rationals();
        let a = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[1, 0, 1])];
        assert_eq!(rank(&f, &a), 2);
        let ns = nullspace(&f, &a, 3);
        assert_eq!(ns.len(), 1);
        let img = mat_vec(&f, &a, &ns[0]);
        assert!(img.iter().all(|x| f.is_zero(x)));
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::prime(7).unwrap();
        let a: Matrix = vec![
            vec![f.from_int(1), f.from_int(2)],
            vec![f.from_int(3), f.from_int(4)],
        ];
        let ai = inverse(&f, &a).unwrap();
        assert_eq!(mat_mul(&f, &a, &ai), identity(&f, 2));
        let sing = vec![vec![f.from_int(1), f.from_int(2)], vec![f.from_int(2), f.from_int(4)]];
        assert!(inverse(&f, &sing).is_none());
    }

    #[test]
    fn span_membership() {
        let f = Field::rationals();
        let basis = vec![q(&[1, 0, 1]), q(&[0, 1, 1])];
        assert_eq!(solve_in_span(&f, &basis, &q(&[2, 3, 5])).unwrap(), q(&[2, 3]));
        assert!(!in_span(&f, &basis, &q(&[0, 0, 1])));
    }

    #[test]
    fn echelon_basis_tracks_rank() {
        let f = Field::rationals();
        let mut b = EchelonBasis::new(&f);
        let v = |pairs: &[(usize, i64)]| -> SparseVec { pairs.iter().map(|&(i, c)| (i, f.from_int(c))).collect() };
        assert!(b.insert(v(&[(0, 1), (2, 1)])));
        assert!(b.insert(v(&[(0, 1), (1, 1)])));
        assert!(!b.insert(v(&[(1, 2), (2, -2)])));
        assert!(b.contains(v(&[(1, 1), (2, -1)])));
        assert!(b.insert(v(&[(2, 5)])));
        assert_eq!(b.rank(), 3);
    }
}
