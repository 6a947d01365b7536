//! Braided vector spaces with a finite basis and a sparse braiding
//! `c(e_i ⊗ e_j) = Σ coeff · e_k ⊗ e_l`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{Field, FieldSpec, Scalar};
use crate::error::{Error, Result};
use crate::linalg;
use crate::racks::Rack;

/// One term `coeff · e_k ⊗ e_l`.
pub type Term = (usize, usize, Scalar);

/// Yetter–Drinfeld data over the group generated by a rack: basis vector
/// `j` has degree `g_{y_j}^{r_j}`, and `g_y` acts by `e_j ↦ μ e_{y ▷ j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YdLabels {
    pub rack: Rack,
    pub eigen: Scalar,
    pub degrees: Vec<(usize, u64)>,
}

impl YdLabels {
    /// `g_y^r · e_j`.
    pub fn act(&self, field: &Field, y: usize, r: u64, j: usize) -> (usize, Scalar) {
        let mut idx = j;
        for _ in 0..r {
            idx = self.rack.op(y, idx);
        }
        (idx, field.pow(&self.eigen, r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidedVectorSpace {
    field: Field,
    dim: usize,
    /// Indexed by `i * dim + j`; each list sorted by `(k, l)` without zeros.
    terms: Vec<Vec<Term>>,
    pub name: String,
    pub labels: Option<Vec<String>>,
    pub yd: Option<YdLabels>,
    /// Layer index of each basis vector, for graded spaces.
    pub grading: Option<Vec<usize>>,
}

fn normalize_terms(field: &Field, mut ts: Vec<Term>) -> Vec<Term> {
    ts.sort_by_key(|t| (t.0, t.1));
    let mut out: Vec<Term> = Vec::with_capacity(ts.len());
    for (k, l, c) in ts {
        match out.last_mut() {
            Some((k2, l2, acc)) if *k2 == k && *l2 == l => *acc = field.add(acc, &c),
            _ => out.push((k, l, c)),
        }
    }
    out.retain(|t| !field.is_zero(&t.2));
    out
}

impl BraidedVectorSpace {
    /// Build from raw term lists; does not check the braid equation.
    pub fn from_terms(field: &Field, dim: usize, terms: Vec<Vec<Term>>, name: impl Into<String>) -> Result<Self> {
        if terms.len() != dim * dim {
            return Err(Error::Invalid(format!("expected {} term lists, got {}", dim * dim, terms.len())));
        }
        let terms: Vec<Vec<Term>> = terms.into_iter().map(|ts| normalize_terms(field, ts)).collect();
        if terms.iter().flatten().any(|t| t.0 >= dim || t.1 >= dim) {
            return Err(Error::Invalid("term index out of range".into()));
        }
        Ok(BraidedVectorSpace {
            field: field.clone(),
            dim,
            terms,
            name: name.into(),
            labels: None,
            yd: None,
            grading: None,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Terms of `c(e_i ⊗ e_j)`.
    #[inline]
    pub fn c(&self, i: usize, j: usize) -> &[Term] {
        &self.terms[i * self.dim + j]
    }

    pub fn all_terms(&self) -> &[Vec<Term>] {
        &self.terms
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.iter().all(|ts| ts.len() == 1)
    }

    /// The braiding on `V ⊗ V` as a dense `dim² × dim²` matrix (column
    /// `i*dim+j` is `c(e_i ⊗ e_j)`).
    pub fn matrix(&self) -> linalg::Matrix {
        let n2 = self.dim * self.dim;
        let mut m = linalg::zeros(&self.field, n2, n2);
        for (col, ts) in self.terms.iter().enumerate() {
            for (k, l, c) in ts {
                m[k * self.dim + l][col] = c.clone();
            }
        }
        m
    }

    /// Apply `c` in slots `(pos, pos+1)` to the sparse tensor `v` of length
    /// `n`, accumulating `coef · c_pos(v)` into `out`.
    pub fn apply_at(&self, n: usize, pos: usize, v: &BTreeMap<Vec<usize>, Scalar>) -> BTreeMap<Vec<usize>, Scalar> {
        let f = &self.field;
        let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        debug_assert!(pos + 1 < n);
        for (word, coef) in v {
            for (k, l, c) in self.c(word[pos], word[pos + 1]) {
                let mut w = word.clone();
                w[pos] = *k;
                w[pos + 1] = *l;
                let add = f.mul(coef, c);
                let e = out.entry(w).or_insert_with(|| f.zero());
                *e = f.add(e, &add);
            }
        }
        out.retain(|_, c| !f.is_zero(c));
        out
    }

    /// First basis triple on which the braid equation fails.
    pub fn braid_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = BTreeMap::new();
                    v.insert(vec![i, j, k], self.field.one());
                    let lhs = self.apply_at(3, 0, &self.apply_at(3, 1, &self.apply_at(3, 0, &v)));
                    let rhs = self.apply_at(3, 1, &self.apply_at(3, 0, &self.apply_at(3, 1, &v)));
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_braid_equation(&self) -> bool {
        self.braid_violation().is_none()
    }

    /// The inverse braiding, or `None` if `c` is singular.
    pub fn inverse(&self) -> Option<BraidedVectorSpace> {
        let f = &self.field;
        let n = self.dim;
        let inv = linalg::inverse(f, &self.matrix())?;
        let terms = (0..n * n)
            .map(|col| {
                inv.iter()
                    .enumerate()
                    .filter(|(_, row)| !f.is_zero(&row[col]))
                    .map(|(r, row)| (r / n, r % n, row[col].clone()))
                    .collect()
            })
            .collect();
        let mut out = BraidedVectorSpace::from_terms(f, n, terms, format!("inverse of {}", self.name)).ok()?;
        out.labels = self.labels.clone();
        Some(out)
    }

    /// `c⁻¹ ∘ c` and `c ∘ c⁻¹` are the identity on all basis tensors.
    pub fn check_inverse(&self, inv: &BraidedVectorSpace) -> bool {
        let f = &self.field;
        let n = self.dim;
        let compose = |a: &BraidedVectorSpace, b: &BraidedVectorSpace, i: usize, j: usize| {
            let mut v = BTreeMap::new();
            v.insert(vec![i, j], f.one());
            a.apply_at(2, 0, &b.apply_at(2, 0, &v))
        };
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mut id = BTreeMap::new();
                id.insert(vec![i, j], f.one());
                compose(inv, self, i, j) == id && compose(self, inv, i, j) == id
            })
        })
    }

    /// Same space with every scalar passed through `map` into `target`.
    pub fn map_scalars(&self, target: &Field, map: impl Fn(&Scalar) -> Result<Scalar>) -> Result<BraidedVectorSpace> {
        let terms = self
            .terms
            .iter()
            .map(|ts| ts.iter().map(|(k, l, c)| Ok((*k, *l, map(c)?))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut out = BraidedVectorSpace::from_terms(target, self.dim, terms, self.name.clone())?;
        out.labels = self.labels.clone();
        out.grading = self.grading.clone();
        if let Some(yd) = &self.yd {
            out.yd = Some(YdLabels { rack: yd.rack.clone(), eigen: map(&yd.eigen)?, degrees: yd.degrees.clone() });
        }
        Ok(out)
    }

    /// The same braiding written in the basis given by the rows of `b`.
    pub fn in_basis(&self, b: &linalg::Matrix) -> Result<BraidedVectorSpace> {
        let field = &self.field;
        let n = self.dim;
        if b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("basis must be {n}x{n}")));
        }
        let p = linalg::inverse(field, &linalg::transpose(b)).ok_or_else(|| Error::Invalid("basis is singular".into()))?;
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for bb in 0..n {
                let mut img = vec![field.zero(); n * n];
                for (i, x) in b[a].iter().enumerate().filter(|(_, x)| !field.is_zero(x)) {
                    for (j, y) in b[bb].iter().enumerate().filter(|(_, y)| !field.is_zero(y)) {
                        let xy = field.mul(x, y);
                        for (k, l, c) in self.c(i, j) {
                            let t = &mut img[k * n + l];
                            *t = field.add(t, &field.mul(&xy, c));
                        }
                    }
                }
                let mut terms = Vec::new();
                for a2 in 0..n {
                    for b2 in 0..n {
                        let mut s = field.zero();
                        for (kl, c) in img.iter().enumerate().filter(|(_, c)| !field.is_zero(c)) {
                            let (k, l) = (kl / n, kl % n);
                            if !field.is_zero(&p[a2][k]) && !field.is_zero(&p[b2][l]) {
                                s = field.add(&s, &field.mul(c, &field.mul(&p[a2][k], &p[b2][l])));
                            }
                        }
                        if !field.is_zero(&s) {
                            terms.push((a2, b2, s));
                        }
                    }
                }
                out.push(terms);
            }
        }
        BraidedVectorSpace::from_terms(field, n, out, self.name.clone())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Square matrix of braiding scalars `q_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMatrixSpec {
    pub q: Vec<Vec<Scalar>>,
}

pub fn diagonal_space(spec: &DiagonalMatrixSpec, field: &Field) -> Result<BraidedVectorSpace> {
    let n = spec.q.len();
    if spec.q.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("braiding matrix must be square".into()));
    }
    if spec.q.iter().flatten().any(|x| field.is_zero(x)) {
        return Err(Error::Domain("diagonal braiding entries must be nonzero".into()));
    }
    let terms = (0..n * n).map(|ij| vec![(ij % n, ij / n, spec.q[ij / n][ij % n].clone())]).collect();
    let desc = spec
        .q
        .iter()
        .map(|row| row.iter().map(|x| field.format(x)).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";");
    BraidedVectorSpace::from_terms(field, n, terms, format!("diagonal [{desc}] over {}", field.spec()))
}

/// `c(v_x ⊗ v_y) = λ v_{x▷y} ⊗ v_x`.
pub fn rack_space(r: &Rack, lambda: &Scalar, field: &Field) -> Result<BraidedVectorSpace> {
    if field.is_zero(lambda) {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    let n = r.size();
    let terms = (0..n * n).map(|ij| vec![(r.op(ij / n, ij % n), ij / n, lambda.clone())]).collect();
    let mut v = BraidedVectorSpace::from_terms(
        field,
        n,
        terms,
        format!("rack of size {n}, lambda={} over {}", field.format(lambda), field.spec()),
    )?;
    v.labels = Some((0..n).map(|x| format!("v{x}")).collect());
    v.yd = Some(YdLabels { rack: r.clone(), eigen: lambda.clone(), degrees: (0..n).map(|y| (y, 1)).collect() });
    Ok(v)
}

/// The span of the `r`-th powers `v_y^r` of a rack space: degrees
/// `g_y^r`, action eigenvalue `λ^r`.
pub fn power_space(rk: &Rack, lambda: &Scalar, r: u64, field: &Field) -> Result<BraidedVectorSpace> {
    if field.is_zero(lambda) {
        return Err(Error::Domain("lambda must be nonzero".into()));
    }
    let n = rk.size();
    let yd = YdLabels { rack: rk.clone(), eigen: field.pow(lambda, r), degrees: (0..n).map(|y| (y, r)).collect() };
    let terms = (0..n * n)
        .map(|ij| {
            let (x, y) = (ij / n, ij % n);
            let (idx, c) = yd.act(field, x, r, y);
            vec![(idx, x, c)]
        })
        .collect();
    let mut v = BraidedVectorSpace::from_terms(field, n, terms, format!("power {r} of rack space of size {n}"))?;
    v.labels = Some((0..n).map(|x| format!("v{x}^{r}")).collect());
    v.yd = Some(yd);
    Ok(v)
}

fn binom_mod(n: u64, k: u64, p: u64) -> u64 {
    // Lucas is unnecessary: n < p here
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = crate::arith::modp::mul(num, (n - i) % p, p);
        den = crate::arith::modp::mul(den, (i + 1) % p, p);
    }
    crate::arith::modp::mul(num, crate::arith::modp::inv(den, p), p)
}

pub(crate) fn binom_scalar(field: &Field, n: u64, k: u64) -> Scalar {
    let p = field.characteristic();
    if p == 0 {
        let v = (0..k).fold(num_bigint::BigInt::from(1), |acc, i| acc * (n - i) / (i + 1));
        field.from_bigint(&v)
    } else {
        field.from_int(binom_mod(n % p, k, p) as i64)
    }
}

/// `c(β_m ⊗ β_n) = b Σ_k binom(m,k) (1-a)^k a^n β_{n+k} ⊗ β_{m-k}` on
/// `β_0, ..., β_{p-1}`, dropping `n+k ≥ p`.
pub fn w_space(p: u64, a: &Scalar, b: &Scalar, field: &Field) -> Result<BraidedVectorSpace> {
    if field.characteristic() != p {
        return Err(Error::Domain(format!("w_space needs characteristic {p}, field is {}", field.spec())));
    }
    if field.is_zero(a) || field.is_one(a) || field.is_zero(b) {
        return Err(Error::Domain("w_space needs a ∉ {0,1} and b ≠ 0".into()));
    }
    let n = p as usize;
    let one_minus_a = field.sub(&field.one(), a);
    let terms = (0..n * n)
        .map(|mn| {
            let (m, nn) = (mn / n, mn % n);
            let base = field.mul(b, &field.pow(a, nn as u64));
            (0..=m)
                .filter(|k| nn + k < n)
                .map(|k| {
                    let c = field.mul(
                        &field.mul(&base, &binom_scalar(field, m as u64, k as u64)),
                        &field.pow(&one_minus_a, k as u64),
                    );
                    (nn + k, m - k, c)
                })
                .collect()
        })
        .collect();
    let mut v = BraidedVectorSpace::from_terms(
        field,
        n,
        terms,
        format!("W(p={p}, a={}, b={}) over {}", field.format(a), field.format(b), field.spec()),
    )?;
    v.labels = Some((0..n).map(|i| format!("b{i}")).collect());
    v.grading = Some((0..n).collect());
    Ok(v)
}

/// How to braid basis vectors of different summands.
#[derive(Clone, Debug)]
pub enum CrossRule {
    /// `c(u ⊗ w) = (deg u)·w ⊗ u` from the Yetter–Drinfeld labels.
    YetterDrinfeld,
    /// `c(v_i ⊗ w_j) = q12[i][j] w_j ⊗ v_i`, `c(w_j ⊗ v_i) = q21[j][i] v_i ⊗ w_j`.
    Diagonal { q12: Vec<Vec<Scalar>>, q21: Vec<Vec<Scalar>> },
}

pub fn direct_sum(v: &BraidedVectorSpace, w: &BraidedVectorSpace, cross: &CrossRule) -> Result<BraidedVectorSpace> {
    if v.field != w.field {
        return Err(Error::Invalid("direct sum of spaces over different fields".into()));
    }
    let f = &v.field;
    let (dv, dw) = (v.dim, w.dim);
    let n = dv + dw;
    let mut terms: Vec<Vec<Term>> = vec![Vec::new(); n * n];
    for i in 0..dv {
        for j in 0..dv {
            terms[i * n + j] = v.c(i, j).to_vec();
        }
    }
    for i in 0..dw {
        for j in 0..dw {
            terms[(dv + i) * n + dv + j] = w.c(i, j).iter().map(|(k, l, c)| (dv + k, dv + l, c.clone())).collect();
        }
    }
    let mut yd_out = None;
    match cross {
        CrossRule::YetterDrinfeld => {
            let (Some(yv), Some(yw)) = (&v.yd, &w.yd) else {
                if dv == 0 || dw == 0 {
                    return finish_sum(v, w, f, n, terms, None);
                }
                return Err(Error::Invalid("Yetter–Drinfeld cross rule needs degree labels on both summands".into()));
            };
            if yv.rack != yw.rack {
                return Err(Error::Invalid("summands are graded over different racks".into()));
            }
            for i in 0..dv {
                for j in 0..dw {
                    let (y, r) = yv.degrees[i];
                    let (idx, c) = yw.act(f, y, r, j);
                    terms[i * n + dv + j] = vec![(dv + idx, i, c)];
                    let (y, r) = yw.degrees[j];
                    let (idx, c) = yv.act(f, y, r, i);
                    terms[(dv + j) * n + i] = vec![(idx, dv + j, c)];
                }
            }
            // a common eigenvalue keeps the sum describable by one label set
            if yv.eigen == yw.eigen {
                let mut degrees = yv.degrees.clone();
                degrees.extend(yw.degrees.iter().copied());
                if degrees.len() == yv.rack.size() {
                    yd_out = Some(YdLabels { rack: yv.rack.clone(), eigen: yv.eigen.clone(), degrees });
                }
            }
        }
        CrossRule::Diagonal { q12, q21 } => {
            if q12.len() != dv || q12.iter().any(|r| r.len() != dw) || q21.len() != dw || q21.iter().any(|r| r.len() != dv)
            {
                return Err(Error::Invalid("cross scalar matrices have the wrong shape".into()));
            }
            for i in 0..dv {
                for j in 0..dw {
                    terms[i * n + dv + j] = vec![(dv + j, i, q12[i][j].clone())];
                    terms[(dv + j) * n + i] = vec![(i, dv + j, q21[j][i].clone())];
                }
            }
        }
    }
    finish_sum(v, w, f, n, terms, yd_out)
}

fn finish_sum(
    v: &BraidedVectorSpace,
    w: &BraidedVectorSpace,
    f: &Field,
    n: usize,
    terms: Vec<Vec<Term>>,
    yd: Option<YdLabels>,
) -> Result<BraidedVectorSpace> {
    let mut out = BraidedVectorSpace::from_terms(f, n, terms, format!("({}) + ({})", v.name, w.name))?;
    if let (Some(a), Some(b)) = (&v.labels, &w.labels) {
        out.labels = Some(a.iter().chain(b).cloned().collect());
    }
    out.yd = yd;
    if let Some((i, j, k)) = out.braid_violation() {
        return Err(Error::Invalid(format!("cross rule breaks the braid equation at ({i},{j},{k})")));
    }
    Ok(out)
}

/// `(q11, q12 q21, q22)`.
pub fn dynkin_diagram(spec: &DiagonalMatrixSpec, field: &Field) -> Result<(Scalar, Scalar, Scalar)> {
    let q = &spec.q;
    if q.len() != 2 || q.iter().any(|r| r.len() != 2) {
        return Err(Error::Invalid("Dynkin labels need a 2x2 braiding matrix".into()));
    }
    Ok((q[0][0].clone(), field.mul(&q[0][1], &q[1][0]), q[1][1].clone()))
}

/// Serialized form of a braided space; scalars are coefficient-string lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidedDump {
    pub field: FieldSpec,
    pub dim: usize,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yd: Option<YdDump>,
    /// `[i, j, k, l, coeff]` meaning `c(e_i ⊗ e_j) ∋ coeff · e_k ⊗ e_l`.
    pub terms: Vec<(usize, usize, usize, usize, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YdDump {
    pub rack: Vec<Vec<usize>>,
    pub eigen: Vec<String>,
    pub degrees: Vec<(usize, u64)>,
}

impl BraidedVectorSpace {
    pub fn to_dump(&self) -> BraidedDump {
        let f = &self.field;
        let n = self.dim;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .flat_map(|(ij, ts)| ts.iter().map(move |(k, l, c)| (ij / n, ij % n, *k, *l, f.to_coeff_strings(c))))
            .collect();
        BraidedDump {
            field: f.spec().clone(),
            dim: n,
            name: self.name.clone(),
            labels: self.labels.clone(),
            grading: self.grading.clone(),
            yd: self.yd.as_ref().map(|y| YdDump {
                rack: y.rack.table().to_vec(),
                eigen: f.to_coeff_strings(&y.eigen),
                degrees: y.degrees.clone(),
            }),
            terms,
        }
    }

    pub fn from_dump(d: &BraidedDump) -> Result<BraidedVectorSpace> {
        let f = Field::new(d.field.clone())?;
        let n = d.dim;
        let mut terms: Vec<Vec<Term>> = vec![Vec::new(); n * n];
        for (i, j, k, l, c) in &d.terms {
            if *i >= n || *j >= n {
                return Err(Error::Invalid(format!("term index ({i},{j}) out of range")));
            }
            terms[i * n + j].push((*k, *l, f.from_coeff_strings(c)?));
        }
        let mut v = BraidedVectorSpace::from_terms(&f, n, terms, d.name.clone())?;
        v.labels = d.labels.clone();
        v.grading = d.grading.clone();
        if let Some(y) = &d.yd {
            v.yd = Some(YdLabels {
                rack: Rack::from_table(y.rack.clone())?,
                eigen: f.from_coeff_strings(&y.eigen)?,
                degrees: y.degrees.clone(),
            });
        }
        Ok(v)
    }
}

impl Serialize for BraidedVectorSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dump().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BraidedVectorSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dump = BraidedDump::deserialize(d)?;
        BraidedVectorSpace::from_dump(&dump).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::racks::{affine_rack, AffineRackSpec};
    use proptest::prelude::*;

    fn aff(p: u64, a: u64) -> Rack {
        affine_rack(AffineRackSpec::new(p, a).unwrap())
    }

    fn diag(f: &Field, q: &[&[i64]]) -> DiagonalMatrixSpec {
        DiagonalMatrixSpec { q: q.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect() }
    }

    #[test]
    fn diagonal_examples() {
        let q = Field::rationals();
        let sign = diagonal_space(&diag(&q, &[&[-1]]), &q).unwrap();
        assert_eq!(sign.c(0, 0), &[(0, 0, q.from_int(-1))]);
        let flip = diagonal_space(&diag(&q, &[&[1, 1], &[1, 1]]), &q).unwrap();
        assert_eq!(flip.c(0, 1), &[(1, 0, q.one())]);
        assert!(diagonal_space(&diag(&q, &[&[0]]), &q).is_err());
        let f5 = Field::prime(5).unwrap();
        let d = diag(&f5, &[&[1, 1], &[2, -1]]);
        let (a, r, b) = dynkin_diagram(&d, &f5).unwrap();
        assert_eq!((a, r, b), (f5.one(), f5.from_int(2), f5.from_int(-1)));
    }

    #[test]
    fn dynkin_labels() {
        let q = Field::rationals();
        let d = DiagonalMatrixSpec {
            q: vec![vec![q.from_int(-1), q.from_int(5)], vec![q.parse_scalar("1/5").unwrap(), q.from_int(-1)]],
        };
        assert_eq!(dynkin_diagram(&d, &q).unwrap().1, q.one());
        let (_, r, _) = dynkin_diagram(&diag(&q, &[&[1, 2], &[3, 4]]), &q).unwrap();
        assert_eq!(r, q.from_int(6));
    }

    #[test]
    fn rack_space_matches_dihedral_formula() {
        let q = Field::rationals();
        let v = rack_space(&aff(3, 2), &q.from_int(-1), &q).unwrap();
        assert!(v.is_monomial());
        for i in 0..3 {
            for j in 0..3 {
                let target = (2 * 3 + 2 * i - j) % 3;
                assert_eq!(v.c(i, j), &[(target, i, q.from_int(-1))]);
            }
        }
        assert!(v.satisfies_braid_equation());
        assert!(rack_space(&aff(3, 2), &q.zero(), &q).is_err());
        let one = rack_space(&Rack::trivial(1), &q.from_int(7), &q).unwrap();
        assert_eq!(one.c(0, 0), &[(0, 0, q.from_int(7))]);
    }

    #[test]
    fn w_space_examples() {
        let f3 = Field::prime(3).unwrap();
        let w = w_space(3, &f3.from_int(2), &f3.from_int(-1), &f3).unwrap();
        // k=0: b·a = -2; k=1: b·(1-a)·a = 2
        assert_eq!(w.c(1, 1), &[(1, 1, f3.from_int(-2)), (2, 0, f3.from_int(2))]);
        for nn in 0..3 {
            let expect = f3.mul(&f3.from_int(-1), &f3.pow(&f3.from_int(2), nn as u64));
            assert_eq!(w.c(0, nn), &[(nn, 0, expect)]);
        }
        assert!(w.satisfies_braid_equation());
        let f5 = Field::prime(5).unwrap();
        assert!(w_space(5, &f5.from_int(2), &f5.from_int(-1), &f5).unwrap().satisfies_braid_equation());
        assert!(w_space(5, &f3.from_int(2), &f3.from_int(-1), &f3).is_err());
    }

    #[test]
    fn direct_sums() {
        let q = Field::rationals();
        let v = rack_space(&aff(3, 2), &q.from_int(-1), &q).unwrap();
        let zero = BraidedVectorSpace::from_terms(&q, 0, Vec::new(), "0").unwrap();
        let s = direct_sum(&v, &zero, &CrossRule::YetterDrinfeld).unwrap();
        assert_eq!(s.all_terms(), v.all_terms());

        let a = diagonal_space(&diag(&q, &[&[-1]]), &q).unwrap();
        let b = diagonal_space(&diag(&q, &[&[2]]), &q).unwrap();
        let rule = CrossRule::Diagonal { q12: vec![vec![q.from_int(3)]], q21: vec![vec![q.from_int(5)]] };
        let ab = direct_sum(&a, &b, &rule).unwrap();
        let expect = diagonal_space(&diag(&q, &[&[-1, 3], &[5, 2]]), &q).unwrap();
        assert_eq!(ab.all_terms(), expect.all_terms());

        let c6 = Field::cyclotomic(6).unwrap();
        let lambda = crate::arith::LambdaSpec::root(6, 1).to_scalar(&c6).unwrap();
        let v = rack_space(&aff(3, 2), &lambda, &c6).unwrap();
        let w = power_space(&aff(3, 2), &lambda, 2, &c6).unwrap();
        let vw = direct_sum(&v, &w, &CrossRule::YetterDrinfeld).unwrap();
        assert_eq!(vw.dim(), 6);
        assert!(vw.satisfies_braid_equation());
        let sign6 = diagonal_space(&DiagonalMatrixSpec { q: vec![vec![c6.from_int(-1)]] }, &c6).unwrap();
        assert!(direct_sum(&v, &sign6, &CrossRule::YetterDrinfeld).is_err());
    }

    #[test]
    fn bad_cross_rule_is_rejected() {
        let q = Field::rationals();
        let v = rack_space(&aff(3, 2), &q.from_int(-1), &q).unwrap();
        let w = diagonal_space(&diag(&q, &[&[-1]]), &q).unwrap();
        let rule = CrossRule::Diagonal {
            q12: vec![vec![q.from_int(1)], vec![q.from_int(2)], vec![q.from_int(3)]],
            q21: vec![vec![q.from_int(1), q.from_int(1), q.from_int(1)]],
        };
        assert!(direct_sum(&v, &w, &rule).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c3 = Field::cyclotomic(3).unwrap();
        let v = rack_space(&aff(3, 2), &c3.generator(), &c3).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: BraidedVectorSpace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let f3 = Field::prime(3).unwrap();
        let w = w_space(3, &f3.from_int(2), &f3.from_int(-1), &f3).unwrap();
        let back: BraidedVectorSpace = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn inverses() {
        let f7 = Field::prime(7).unwrap();
        for a in 2..7 {
            let v = rack_space(&aff(7, a), &f7.from_int(3), &f7).unwrap();
            let inv = v.inverse().unwrap();
            assert!(v.check_inverse(&inv));
        }
        let w = w_space(7, &f7.from_int(3), &f7.from_int(-1), &f7).unwrap();
        assert!(w.check_inverse(&w.inverse().unwrap()));
    }

    proptest! {
        #[test]
        fn constructed_spaces_are_braided(pi in 0usize..3, a in 2u64..7, lam in 1i64..7) {
            let p = [3u64, 5, 7][pi];
            prop_assume!(a < p && lam % p as i64 != 0);
            let f = Field::prime(p).unwrap();
            let v = rack_space(&aff(p, a), &f.from_int(lam), &f).unwrap();
            prop_assert!(v.satisfies_braid_equation());
            prop_assert!(v.check_inverse(&v.inverse().unwrap()));
            let w = w_space(p, &f.from_int(a as i64), &f.from_int(lam), &f).unwrap();
            prop_assert!(w.satisfies_braid_equation());
            prop_assert!(w.check_inverse(&w.inverse().unwrap()));
            // filtration-triangular: k + l = m + n on every term
            for m in 0..p as usize {
                for n in 0..p as usize {
                    prop_assert!(w.c(m, n).iter().all(|(k, l, _)| k + l == m + n));
                }
            }
        }

        #[test]
        fn diagonal_spaces_are_braided(qs in proptest::collection::vec(1i64..11, 9)) {
            let f = Field::prime(11).unwrap();
            let q: Vec<Vec<Scalar>> = qs.chunks(3).map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect();
            let v = diagonal_space(&DiagonalMatrixSpec { q }, &f).unwrap();
            prop_assert!(v.satisfies_braid_equation());
            prop_assert!(v.check_inverse(&v.inverse().unwrap()));
        }
    }
}
