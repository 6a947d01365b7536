//! Decreasing filtrations of braided vector spaces, their associated graded
//! braidings, the J-adic degeneration of an affine rack space, and the
//! triangular bases used to compare a flag with a grading.

use serde::{Deserialize, Serialize};

use crate::arith::{Field, Scalar};
use crate::braided::{rack_space, BraidedVectorSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::racks::{affine_rack, AffineRackSpec};

/// `F⁰V ⊇ F¹V ⊇ ⋯ ⊇ FᵐV = 0`, each level given by a basis of row vectors in
/// the coordinates of the ambient space.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub ambient: BraidedVectorSpace,
    pub flags: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationCheck {
    pub valid: bool,
    /// 1: `F⁰ = V`; 2: decreasing with zero intersection; 3: braiding
    /// compatibility.
    pub violated: Option<u8>,
    pub detail: Option<String>,
}

impl FiltrationCheck {
    fn ok() -> Self {
        FiltrationCheck { valid: true, violated: None, detail: None }
    }

    fn fail(cond: u8, detail: String) -> Self {
        FiltrationCheck { valid: false, violated: Some(cond), detail: Some(detail) }
    }
}

impl Filtration {
    pub fn new(ambient: BraidedVectorSpace, flags: Vec<Matrix>) -> Result<Filtration> {
        let n = ambient.dim();
        let field = ambient.field().clone();
        for (i, fl) in flags.iter().enumerate() {
            if fl.iter().any(|row| row.len() != n) {
                return Err(Error::Invalid(format!("level {i}: basis vectors must have length {n}")));
            }
            if linalg::rank(&field, fl) != fl.len() {
                return Err(Error::Invalid(format!("level {i}: basis vectors are linearly dependent")));
            }
        }
        if flags.is_empty() {
            return Err(Error::Invalid("a filtration needs at least one level".into()));
        }
        Ok(Filtration { ambient, flags })
    }

    /// `V ⊇ 0`.
    pub fn trivial(v: &BraidedVectorSpace) -> Filtration {
        let id = linalg::identity(v.field(), v.dim());
        Filtration { ambient: v.clone(), flags: vec![id, Vec::new()] }
    }

    /// Levels `F^i = im u^i` for a nilpotent operator `u` acting on columns.
    pub fn from_nilpotent(v: &BraidedVectorSpace, u: &Matrix) -> Result<Filtration> {
        let field = v.field();
        let n = v.dim();
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("operator must be {n}x{n}")));
        }
        let mut flags = Vec::new();
        let mut power = linalg::identity(field, n);
        for _ in 0..=n {
            let cols = linalg::transpose(&power);
            let (basis, _) = linalg::rref(field, &cols);
            let zero = basis.is_empty();
            flags.push(basis);
            if zero {
                return Ok(Filtration { ambient: v.clone(), flags });
            }
            power = linalg::mat_mul(field, u, &power);
        }
        Err(Error::Domain("operator is not nilpotent".into()))
    }

    pub fn depth(&self) -> usize {
        self.flags.len()
    }

    fn dims(&self) -> Vec<usize> {
        self.flags.iter().map(Vec::len).collect()
    }
}

/// Basis adapted to the flag, deepest level first, plus the level of each
/// vector. Each layer extends the deeper ones by the first supplied vectors
/// of that level that are not yet in the span.
fn adapted_basis(f: &Filtration) -> (Matrix, Vec<usize>) {
    let field = f.ambient.field();
    let mut basis: Matrix = Vec::new();
    let mut level = Vec::new();
    for (k, fl) in f.flags.iter().enumerate().rev() {
        for v in fl {
            if !linalg::in_span(field, &basis, v) {
                basis.push(v.clone());
                level.push(k);
            }
        }
    }
    (basis, level)
}

pub fn check_filtration(f: &Filtration) -> Result<FiltrationCheck> {
    let field = f.ambient.field();
    let n = f.ambient.dim();
    let dims = f.dims();
    if dims[0] != n {
        return Ok(FiltrationCheck::fail(1, format!("F^0 has dimension {} but V has dimension {n}", dims[0])));
    }
    for (i, w) in f.flags.windows(2).enumerate() {
        if let Some(v) = w[1].iter().find(|v| !linalg::in_span(field, &w[0], v)) {
            return Ok(FiltrationCheck::fail(2, format!("F^{} is not contained in F^{i}: {v:?}", i + 1)));
        }
    }
    if *dims.last().unwrap() != 0 {
        return Ok(FiltrationCheck::fail(2, "last level is not zero".into()));
    }
    let (basis, level) = adapted_basis(f);
    let terms = f.ambient.in_basis(&basis)?.all_terms().to_vec();
    for (ab, ts) in terms.iter().enumerate() {
        let (a, b) = (ab / n, ab % n);
        if let Some((a2, b2, _)) = ts.iter().find(|(a2, b2, _)| level[*a2] + level[*b2] < level[a] + level[b]) {
            return Ok(FiltrationCheck::fail(
                3,
                format!(
                    "c(F^{} ⊗ F^{}) has a component in F^{} ⊗ F^{} (adapted basis {a},{b} -> {a2},{b2})",
                    level[a], level[b], level[*a2], level[*b2]
                ),
            ));
        }
    }
    Ok(FiltrationCheck::ok())
}

/// `V^gr = ⊕ FⁱV/Fⁱ⁺¹V` with the leading terms of `c`. The basis runs over
/// the layers in increasing order, and `grading` records the layer.
pub fn associated_graded(f: &Filtration) -> Result<BraidedVectorSpace> {
    let check = check_filtration(f)?;
    if !check.valid {
        return Err(Error::Domain(format!(
            "not a filtration of braided vector spaces (condition {}): {}",
            check.violated.unwrap(),
            check.detail.unwrap_or_default()
        )));
    }
    let (deep_first, deep_levels) = adapted_basis(f);
    let mut order: Vec<usize> = (0..deep_first.len()).collect();
    order.sort_by_key(|&i| deep_levels[i]);
    let basis: Matrix = order.iter().map(|&i| deep_first[i].clone()).collect();
    let level: Vec<usize> = order.iter().map(|&i| deep_levels[i]).collect();
    let n = basis.len();
    let full = f.ambient.in_basis(&basis)?.all_terms().to_vec();
    let terms = full
        .into_iter()
        .enumerate()
        .map(|(ab, ts)| {
            let s = level[ab / n] + level[ab % n];
            ts.into_iter().filter(|(a2, b2, _)| level[*a2] + level[*b2] == s).collect()
        })
        .collect();
    let mut g = BraidedVectorSpace::from_terms(f.ambient.field(), n, terms, format!("gr {}", f.ambient.name))?;
    g.labels = Some((0..n).map(|i| format!("y{i}")).collect());
    g.grading = Some(level);
    Ok(g)
}

/// `γ = g_0 g_1^{-1}` on the rack space of `Aff(p, α)`: `v_j ↦ v_{j+α-1}`,
/// independently of `λ`.
pub fn gamma_matrix(spec: AffineRackSpec, field: &Field) -> Matrix {
    let n = spec.p as usize;
    let shift = (spec.alpha - 1) as usize;
    let mut m = linalg::zeros(field, n, n);
    for j in 0..n {
        m[(j + shift) % n][j] = field.one();
    }
    m
}

/// `(JⁱV)` for `J = (γ-1)𝕜G`, with level `i` spanned by `(γ-1)ʲv_0`, `j ≥ i`.
pub fn jadic_filtration(spec: AffineRackSpec, lambda: &Scalar, field: &Field) -> Result<Filtration> {
    spec.validate()?;
    if field.characteristic() != spec.p {
        return Err(Error::Domain(format!(
            "the J-adic filtration needs characteristic {}, field is {}",
            spec.p,
            field.spec()
        )));
    }
    let v = rack_space(&affine_rack(spec), lambda, field)?;
    let n = v.dim();
    let mut u = gamma_matrix(spec, field);
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = field.sub(&row[i], &field.one());
    }
    let mut y = Vec::with_capacity(n);
    let mut cur = vec![field.zero(); n];
    cur[0] = field.one();
    for _ in 0..n {
        y.push(cur.clone());
        cur = linalg::mat_vec(field, &u, &cur);
    }
    if cur.iter().any(|x| !field.is_zero(x)) {
        return Err(Error::Domain("(γ-1)^p does not vanish".into()));
    }
    let flags = (0..=n).map(|i| y[i..].to_vec()).collect();
    Filtration::new(v, flags)
}

/// The graded Yetter–Drinfeld module on `y_0, …, y_{p-1}` built from
/// `g_0 y_j = λαʲ y_j`, `(γ-1) y_j = y_{j+1}` and
/// `δ(y_j) = Σ_i binom(j,i)(1-α)ⁱ (γ-1)ⁱg_0 ⊗ y_{j-i}`.
pub fn jadic_degeneration(p: u64, alpha: &Scalar, lambda: &Scalar, field: &Field) -> Result<BraidedVectorSpace> {
    if field.characteristic() != p {
        return Err(Error::Domain(format!("degeneration needs characteristic {p}, field is {}", field.spec())));
    }
    if field.is_zero(alpha) || field.is_one(alpha) || field.is_zero(lambda) {
        return Err(Error::Domain("need alpha ∉ {0,1} and lambda ≠ 0".into()));
    }
    let n = p as usize;
    // Pascal's triangle in the field
    let mut binom = vec![vec![field.zero(); n]; n];
    for j in 0..n {
        binom[j][0] = field.one();
        for i in 1..=j {
            binom[j][i] = if i == j { field.one() } else { field.add(&binom[j - 1][i - 1], &binom[j - 1][i]) };
        }
    }
    let one_minus_alpha = field.sub(&field.one(), alpha);
    let coaction = |j: usize| -> Vec<(usize, Scalar, usize)> {
        (0..=j).map(|i| (i, field.mul(&binom[j][i], &field.pow(&one_minus_alpha, i as u64)), j - i)).collect()
    };
    // (γ-1)^i g_0 applied to y_k
    let act = |i: usize, k: usize| -> Option<(usize, Scalar)> {
        let eig = field.mul(lambda, &field.pow(alpha, k as u64));
        (k + i < n).then_some((k + i, eig))
    };
    let mut terms = Vec::with_capacity(n * n);
    for m in 0..n {
        for k in 0..n {
            let ts = coaction(m)
                .into_iter()
                .filter_map(|(i, c, rest)| act(i, k).map(|(idx, e)| (idx, rest, field.mul(&c, &e))))
                .collect();
            terms.push(ts);
        }
    }
    let mut v = BraidedVectorSpace::from_terms(
        field,
        n,
        terms,
        format!("J-adic degeneration of Aff({p}, {}) with lambda={}", field.format(alpha), field.format(lambda)),
    )?;
    v.labels = Some((0..n).map(|i| format!("y{i}")).collect());
    v.grading = Some((0..n).collect());
    Ok(v)
}

/// The W-space of `(p, α, λ̄)` with the checks run on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateReport {
    pub p: u64,
    pub alpha: u64,
    pub lambda_bar: Vec<String>,
    pub space: BraidedVectorSpace,
    pub braid_equation: bool,
    /// The direct construction from the graded action and coaction agrees.
    pub direct_agrees: bool,
    /// The associated graded of the J-adic filtration agrees.
    pub graded_agrees: bool,
    pub kfinite: bool,
}

pub fn degenerate_report(p: u64, alpha: u64, lambda_bar: &Scalar, field: &Field) -> Result<DegenerateReport> {
    let spec = AffineRackSpec::new(p, alpha)?;
    let a = field.from_int(alpha as i64);
    let w = crate::braided::w_space(p, &a, lambda_bar, field)?;
    let direct = jadic_degeneration(p, &a, lambda_bar, field)?;
    let graded = associated_graded(&jadic_filtration(spec, lambda_bar, field)?)?;
    let minus_one = *lambda_bar == field.from_int(-1);
    Ok(DegenerateReport {
        p,
        alpha,
        lambda_bar: field.to_coeff_strings(lambda_bar),
        braid_equation: w.satisfies_braid_equation(),
        direct_agrees: direct.all_terms() == w.all_terms(),
        graded_agrees: graded.all_terms() == w.all_terms(),
        kfinite: crate::decide::kfinite_contains(p, alpha, minus_one),
        space: w,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularBasisResult {
    /// Rows `x_i` in ambient coordinates, each inside one block.
    pub x: Matrix,
    /// Rows `b_i`; the first `dim F^k` of them span `F^k`.
    pub b: Matrix,
    /// `b_i = Σ_j s_ij x_j`, unit upper triangular.
    pub s: Matrix,
    /// Flag level `f(i)`.
    pub f: Vec<usize>,
    /// Block `g(i)`.
    pub g: Vec<usize>,
}

/// Bases `(x_i)` and `(b_i)` relating a block decomposition to a flag, with
/// `b_i = x_i + Σ s_ij x_j` where `s_ij ≠ 0` needs `f(j) < f(i)` and
/// `g(j) ≠ g(i)`.
///
/// `basis` is any basis of `V` whose `i`-th row lies in block `blocks[i]`;
/// `flag` lists `F⁰ = V ⊇ ⋯ ⊇ Fᵐ = 0`.
pub fn triangular_bases(field: &Field, basis: &Matrix, blocks: &[usize], flag: &[Matrix]) -> Result<TriangularBasisResult> {
    let n = basis.len();
    if blocks.len() != n || basis.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(format!("need {n} block labels and {n}x{n} basis")));
    }
    if flag.is_empty() || flag[0].len() != n || !flag.last().unwrap().is_empty() {
        return Err(Error::Invalid("flag must start at V and end at 0".into()));
    }
    if flag.iter().flatten().any(|r| r.len() != n) {
        return Err(Error::Invalid("flag vectors have the wrong length".into()));
    }
    let xinv = linalg::inverse(field, &linalg::transpose(basis)).ok_or_else(|| Error::Invalid("basis is singular".into()))?;
    let coords = |v: &[Scalar]| linalg::mat_vec(field, &xinv, v);

    // Step 1: levels from the deepest, each reduced against the chosen pivots
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut f = Vec::new();
    for (t, fl) in flag.iter().enumerate().rev() {
        let target = fl.len();
        let mut cand: Matrix = fl
            .iter()
            .map(|v| {
                let mut c = coords(v);
                for (row, &pc) in rows.iter().zip(&pivots) {
                    if !field.is_zero(&c[pc]) {
                        let k = c[pc].clone();
                        for (x, y) in c.iter_mut().zip(row) {
                            *x = field.sub(x, &field.mul(&k, y));
                        }
                    }
                }
                c
            })
            .collect();
        cand.retain(|c| c.iter().any(|x| !field.is_zero(x)));
        let (new_rows, new_piv) = if cand.is_empty() { (Vec::new(), Vec::new()) } else { linalg::rref(field, &cand) };
        if rows.len() + new_rows.len() != target {
            return Err(Error::Invalid(format!("flag is not decreasing at level {t}")));
        }
        for (r, pc) in new_rows.into_iter().zip(new_piv) {
            rows.push(r);
            pivots.push(pc);
            f.push(t);
        }
    }
    if rows.len() != n {
        return Err(Error::Invalid("F^0 is not the whole space".into()));
    }
    // reorder the x basis so that pivot columns come first, in order
    let mut x: Matrix = pivots.iter().map(|&pc| basis[pc].clone()).collect();
    let g: Vec<usize> = pivots.iter().map(|&pc| blocks[pc]).collect();
    let mut s: Matrix = rows.iter().map(|r| pivots.iter().map(|&pc| r[pc].clone()).collect()).collect();

    // Step 2: absorb same-block entries into x_i, row by row
    for i in 0..n {
        let js: Vec<usize> = (i + 1..n).filter(|&j| g[j] == g[i] && !field.is_zero(&s[i][j])).collect();
        if js.is_empty() {
            continue;
        }
        let coef: Vec<(usize, Scalar)> = js.iter().map(|&j| (j, s[i][j].clone())).collect();
        for (j, c) in &coef {
            let xj = x[*j].clone();
            for (a, b) in x[i].iter_mut().zip(&xj) {
                *a = field.add(a, &field.mul(c, b));
            }
        }
        // S ← S (I - N), N supported on row i
        for row in s.iter_mut() {
            let sri = row[i].clone();
            if field.is_zero(&sri) {
                continue;
            }
            for (j, c) in &coef {
                row[*j] = field.sub(&row[*j], &field.mul(&sri, c));
            }
        }
    }
    let b = linalg::mat_mul(field, &s, &x);
    Ok(TriangularBasisResult { x, b, s, f, g })
}

/// Checks the three defining properties of a [`TriangularBasisResult`]
/// against the block decomposition and flag it was built from.
pub fn check_triangular(
    field: &Field,
    res: &TriangularBasisResult,
    basis: &Matrix,
    blocks: &[usize],
    flag: &[Matrix],
) -> std::result::Result<(), String> {
    let n = res.x.len();
    let nblocks = blocks.iter().max().map_or(0, |m| m + 1);
    for i in 0..n {
        let block: Matrix = (0..n).filter(|&k| blocks[k] == res.g[i]).map(|k| basis[k].clone()).collect();
        if !linalg::in_span(field, &block, &res.x[i]) || res.g[i] >= nblocks {
            return Err(format!("x_{i} is not in block {}", res.g[i]));
        }
    }
    if linalg::rank(field, &res.x) != n {
        return Err("x is not a basis".into());
    }
    for (k, fl) in flag.iter().enumerate() {
        let d = fl.len();
        let first: Matrix = res.b[..d].to_vec();
        if linalg::rank(field, &first) != d || fl.iter().any(|v| !linalg::in_span(field, &first, v)) {
            return Err(format!("first {d} vectors of b do not span F^{k}"));
        }
        if (0..n).any(|i| (i < d) != (res.f[i] >= k)) {
            return Err(format!("levels disagree with dim F^{k}"));
        }
    }
    for i in 0..n {
        if !field.is_one(&res.s[i][i]) {
            return Err(format!("s_{i}{i} is not 1"));
        }
        for j in 0..n {
            let z = field.is_zero(&res.s[i][j]);
            if i != j && !z && (j < i || res.f[j] >= res.f[i] || res.g[j] == res.g[i]) {
                return Err(format!("s_{i}{j} should vanish"));
            }
        }
    }
    if linalg::mat_mul(field, &res.s, &res.x) != res.b {
        return Err("b ≠ S x".into());
    }
    Ok(())
}

/// `h FⁱV ⊆ FⁱV` for each `h` in `preserving` and `(g-1)FⁱV ⊆ Fⁱ⁺¹V` for
/// each `g` in `subgroup`; matrices act on column vectors.
pub fn check_congruence_subgroup_action(f: &Filtration, preserving: &[Matrix], subgroup: &[Matrix]) -> Result<bool> {
    let field = f.ambient.field();
    let n = f.ambient.dim();
    if preserving.iter().chain(subgroup).any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
        return Err(Error::Invalid(format!("action matrices must be {n}x{n}")));
    }
    for (i, fl) in f.flags.iter().enumerate() {
        let next = f.flags.get(i + 1).cloned().unwrap_or_default();
        for v in fl {
            for h in preserving {
                if !linalg::in_span(field, fl, &linalg::mat_vec(field, h, v)) {
                    return Ok(false);
                }
            }
            for g in subgroup {
                let gv = linalg::mat_vec(field, g, v);
                let d: Vec<Scalar> = gv.iter().zip(v).map(|(a, b)| field.sub(a, b)).collect();
                if !linalg::in_span(field, &next, &d) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::w_space;
    use crate::groups::model_from_rack;
    use crate::nichols::hilbert_series;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn aff(p: u64, a: u64) -> AffineRackSpec {
        AffineRackSpec::new(p, a).unwrap()
    }

    #[test]
    fn trivial_filtration() {
        let f3 = Field::prime(3).unwrap();
        let v = rack_space(&affine_rack(aff(3, 2)), &f3.from_int(-1), &f3).unwrap();
        let f = Filtration::trivial(&v);
        assert!(check_filtration(&f).unwrap().valid);
        let g = associated_graded(&f).unwrap();
        assert_eq!(g.all_terms(), v.all_terms());
    }

    #[test]
    fn jadic_filtrations_are_valid() {
        for (p, a) in [(3, 2), (5, 2), (5, 3), (5, 4), (7, 3)] {
            let fp = Field::prime(p).unwrap();
            let f = jadic_filtration(aff(p, a), &fp.from_int(-1), &fp).unwrap();
            assert_eq!(f.depth(), p as usize + 1);
            assert_eq!(check_filtration(&f).unwrap(), FiltrationCheck::ok());
        }
        let q = Field::rationals();
        assert!(jadic_filtration(aff(3, 2), &q.from_int(-1), &q).is_err());
    }

    #[test]
    fn gamma_minus_one_is_nilpotent_of_order_p() {
        for (p, a) in [(3, 2), (5, 2), (7, 3), (7, 5)] {
            let fp = Field::prime(p).unwrap();
            let mut u = gamma_matrix(aff(p, a), &fp);
            for (i, row) in u.iter_mut().enumerate() {
                row[i] = fp.sub(&row[i], &fp.one());
            }
            let mut pw = linalg::identity(&fp, p as usize);
            for k in 1..=p {
                pw = linalg::mat_mul(&fp, &u, &pw);
                let zero = pw.iter().flatten().all(|x| fp.is_zero(x));
                assert_eq!(zero, k == p, "p={p} k={k}");
            }
            // γ agrees with the group model
            let gm = model_from_rack(aff(p, a));
            let model = gm.action_matrix(&fp, &fp.one(), gm.gamma()).unwrap();
            assert_eq!(model, gamma_matrix(aff(p, a), &fp));
        }
    }

    #[test]
    fn graded_jadic_is_w_space() {
        for (p, a) in [(3, 2), (5, 3), (5, 2), (7, 3)] {
            let fp = Field::prime(p).unwrap();
            let f = jadic_filtration(aff(p, a), &fp.from_int(-1), &fp).unwrap();
            let g = associated_graded(&f).unwrap();
            assert!(g.satisfies_braid_equation());
            let w = w_space(p, &fp.from_int(a as i64), &fp.from_int(-1), &fp).unwrap();
            assert_eq!(g.all_terms(), w.all_terms(), "p={p} a={a}");
            assert_eq!(g.grading, Some((0..p as usize).collect()));
        }
    }

    #[test]
    fn direct_degeneration_matches_w_space() {
        for p in [3u64, 5, 7] {
            let fp = Field::prime(p).unwrap();
            for a in 2..p {
                let (al, la) = (fp.from_int(a as i64), fp.from_int(-1));
                let j = jadic_degeneration(p, &al, &la, &fp).unwrap();
                let w = w_space(p, &al, &la, &fp).unwrap();
                assert_eq!(j.all_terms(), w.all_terms());
                // first row: c(y_0 ⊗ y_n) = λαⁿ y_n ⊗ y_0
                for n in 0..p as usize {
                    let e = fp.mul(&la, &fp.pow(&al, n as u64));
                    assert_eq!(j.c(0, n), &[(n, 0, e)]);
                }
            }
        }
        let f7 = Field::prime(7).unwrap();
        assert!(jadic_degeneration(7, &f7.from_int(3), &f7.from_int(-1), &f7).unwrap().satisfies_braid_equation());
        assert!(jadic_degeneration(5, &f7.from_int(3), &f7.from_int(-1), &f7).is_err());
    }

    #[test]
    fn graded_ranks_are_bounded() {
        let f3 = Field::prime(3).unwrap();
        let v = rack_space(&affine_rack(aff(3, 2)), &f3.from_int(-1), &f3).unwrap();
        let g = associated_graded(&jadic_filtration(aff(3, 2), &f3.from_int(-1), &f3).unwrap()).unwrap();
        let rv = hilbert_series(&v, 5, None).unwrap();
        let rg = hilbert_series(&g, 5, None).unwrap();
        for (a, b) in rv.ranks.iter().zip(&rg.ranks) {
            assert!(a >= b);
        }
        // V^gr is the W-space of (3,2,-1), which has a finite Nichols algebra too
        assert!(rg.terminated);
    }

    #[test]
    fn random_flags_fail_compatibility() {
        let f5 = Field::prime(5).unwrap();
        let v = rack_space(&affine_rack(aff(5, 2)), &f5.from_int(-1), &f5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut failures = 0;
        for _ in 0..10 {
            let line: Vec<Scalar> = (0..5).map(|_| f5.from_int(rng.gen_range(0..5))).collect();
            if line.iter().all(|x| f5.is_zero(x)) {
                continue;
            }
            let f = Filtration::new(v.clone(), vec![linalg::identity(&f5, 5), vec![line], Vec::new()]).unwrap();
            let c = check_filtration(&f).unwrap();
            if !c.valid {
                assert_eq!(c.violated, Some(3));
                failures += 1;
            }
        }
        assert!(failures >= 8);
        let bad = Filtration::new(v.clone(), vec![vec![linalg::identity(&f5, 5)[0].clone()], Vec::new()]).unwrap();
        assert_eq!(check_filtration(&bad).unwrap().violated, Some(1));
        let not_zero = Filtration::new(v, vec![linalg::identity(&f5, 5)]).unwrap();
        assert_eq!(check_filtration(&not_zero).unwrap().violated, Some(2));
    }

    #[test]
    fn congruence_action() {
        let f3 = Field::prime(3).unwrap();
        let lambda = f3.from_int(-1);
        let gm = model_from_rack(aff(3, 2));
        let gens: Vec<Matrix> = (0..3).map(|i| gm.action_matrix(&f3, &lambda, gm.g(i)).unwrap()).collect();
        let gamma = gm.action_matrix(&f3, &lambda, gm.gamma()).unwrap();
        let j = jadic_filtration(aff(3, 2), &lambda, &f3).unwrap();
        assert!(check_congruence_subgroup_action(&j, &gens, std::slice::from_ref(&gamma)).unwrap());
        let t = Filtration::trivial(&j.ambient);
        let id = linalg::identity(&f3, 3);
        assert!(check_congruence_subgroup_action(&t, &gens, std::slice::from_ref(&id)).unwrap());
        assert!(!check_congruence_subgroup_action(&t, &gens, &[gamma]).unwrap());
    }

    #[test]
    fn triangular_examples() {
        let q = Field::rationals();
        let id2 = linalg::identity(&q, 2);
        let flag = vec![id2.clone(), vec![vec![q.one(), q.one()]], Vec::new()];
        let res = triangular_bases(&q, &id2, &[0, 1], &flag).unwrap();
        assert_eq!(res.b[0], vec![q.one(), q.one()]);
        assert_eq!(res.s[0][1], q.one());
        assert_eq!(res.f, vec![1, 0]);
        check_triangular(&q, &res, &id2, &[0, 1], &flag).unwrap();

        let id4 = linalg::identity(&q, 4);
        let flag = vec![id4.clone(), Vec::new()];
        let res = triangular_bases(&q, &id4, &[0, 1, 1, 2], &flag).unwrap();
        assert_eq!(res.s, id4);

        // same block: the correction is absorbed into x
        let res = triangular_bases(&q, &id2, &[0, 0], &[id2.clone(), vec![vec![q.one(), q.one()]], Vec::new()]).unwrap();
        assert_eq!(res.s, id2);
        check_triangular(&q, &res, &id2, &[0, 0], &[id2.clone(), vec![vec![q.one(), q.one()]], Vec::new()]).unwrap();
    }

    proptest! {
        #[test]
        fn triangular_invariants(seed in any::<u64>()) {
            let f = Field::prime(5).unwrap();
            let (basis, blocks, flag) = crate::verify::random_flag_instance(&f, seed);
            let res = triangular_bases(&f, &basis, &blocks, &flag).unwrap();
            prop_assert_eq!(check_triangular(&f, &res, &basis, &blocks, &flag), Ok(()));
        }
    }

    #[test]
    fn degenerate_reports() {
        let f3 = Field::prime(3).unwrap();
        let rep = degenerate_report(3, 2, &f3.from_int(-1), &f3).unwrap();
        assert!(rep.kfinite && rep.braid_equation && rep.direct_agrees && rep.graded_agrees);
        let f5 = Field::prime(5).unwrap();
        assert!(!degenerate_report(5, 4, &f5.from_int(-1), &f5).unwrap().kfinite);
        let f7 = Field::prime(7).unwrap();
        let rep = degenerate_report(7, 3, &f7.from_int(-1), &f7).unwrap();
        assert!(rep.kfinite);
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<DegenerateReport>(&json).unwrap(), rep);
    }
}
