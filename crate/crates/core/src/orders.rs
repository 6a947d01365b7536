//! ℤ[λ]-orders of rack spaces and their reductions modulo maximal ideals
//! over a rational prime.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{cyclotomic_poly, fppoly, modp, Field, FieldSpec, LambdaSpec, Rat, Scalar};
use crate::braided::{power_space, rack_space, BraidedVectorSpace};
use crate::nichols::{hilbert_or_partial, EngineConfig, HilbertReport};
use crate::error::{Error, Result};
use crate::groups::{conjugacy_class, model_from_rack, GroupElem};
use crate::racks::{affine_rack, AffineRackSpec, Rack};

/// The free ℤ[λ]-lattice spanned by the rack basis, with `λ = ζ_N^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpec {
    #[serde(rename = "N")]
    pub n: u64,
    pub e: u64,
    pub rack: AffineRackSpec,
}

impl OrderSpec {
    pub fn new(n: u64, e: u64, rack: AffineRackSpec) -> Result<OrderSpec> {
        if n < 2 {
            return Err(Error::Domain(format!("order needs N >= 2 (got {n})")));
        }
        LambdaSpec::root(n, e).validate()?;
        rack.validate()?;
        Ok(OrderSpec { n, e, rack })
    }

    pub fn lambda(&self) -> LambdaSpec {
        LambdaSpec::root(self.n, self.e)
    }

    /// Basis labels, one per rack element.
    pub fn labels(&self) -> Vec<String> {
        (0..self.rack.p).map(|y| format!("h{y}v0")).collect()
    }

    /// The space over ℚ(ζ_N).
    pub fn generic_space(&self) -> Result<BraidedVectorSpace> {
        let field = Field::cyclotomic(self.n)?;
        let lambda = self.lambda().to_scalar(&field)?;
        let mut v = rack_space(&affine_rack(self.rack), &lambda, &field)?;
        v.name = format!("{} over {} with lambda=zeta_{}^{}", self.rack, field.spec(), self.n, self.e);
        v.labels = Some(self.labels());
        Ok(v)
    }
}

/// `N` and `e` without a rack, as given on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderParams {
    pub n: u64,
    pub e: u64,
}

impl FromStr for OrderParams {
    type Err = Error;

    /// `order:N=6` or `order:N=6,e=5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("order spec {s:?}; expected order:N=<n>[,e=<k>]"));
        let body = s.trim().strip_prefix("order:").ok_or_else(bad)?;
        let mut n = None;
        let mut e = 1;
        for part in body.split(',') {
            match part.trim().split_once('=') {
                Some(("N", v)) => n = Some(v.parse().map_err(|_| bad())?),
                Some(("e", v)) => e = v.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        Ok(OrderParams { n: n.ok_or_else(bad)?, e })
    }
}

/// Choice of a maximal ideal over `p` by its index into the target list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetSelector {
    pub p: u64,
    pub factor: usize,
}

impl FromStr for TargetSelector {
    type Err = Error;

    /// `at:p=3` or `at:p=3,factor=1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("target spec {s:?}; expected at:p=<prime>[,factor=<k>]"));
        let body = s.trim().strip_prefix("at:").ok_or_else(bad)?;
        let mut p = None;
        let mut factor = 0;
        for part in body.split(',') {
            match part.trim().split_once('=') {
                Some(("p", v)) => p = Some(v.parse().map_err(|_| bad())?),
                Some(("factor", v)) => factor = v.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        let p = p.ok_or_else(bad)?;
        if !modp::is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(TargetSelector { p, factor })
    }
}

/// A monic irreducible factor of `Φ_N` over `𝔽_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecializationSpec {
    #[serde(rename = "N")]
    pub n: u64,
    pub p: u64,
    /// Ascending coefficients, monic.
    pub factor: Vec<u64>,
    pub index: usize,
}

impl SpecializationSpec {
    pub fn degree(&self) -> usize {
        self.factor.len() - 1
    }

    /// The residue field. Linear factors give the prime field itself.
    pub fn field(&self) -> Result<Field> {
        if self.degree() == 1 {
            Ok(Field::prime(self.p)?)
        } else {
            Ok(Field::new(FieldSpec::Finite { p: self.p, minpoly: self.factor.clone() })?)
        }
    }

    /// Image of `ζ_N`.
    pub fn zeta_bar(&self) -> Result<Scalar> {
        let f = self.field()?;
        if self.degree() == 1 {
            Ok(f.from_int(modp::neg(self.factor[0], self.p) as i64))
        } else {
            Ok(f.generator())
        }
    }

    /// Multiplicative order of the image of `ζ_N^e`.
    pub fn residue_order(&self, e: u64) -> Result<u64> {
        let f = self.field()?;
        let x = self.reduce(e)?;
        Ok(modp::divisors(self.n).into_iter().find(|&d| f.is_one(&f.pow(&x, d))).expect("x^N = 1"))
    }

    /// Image of `ζ_N^e`.
    pub fn reduce(&self, e: u64) -> Result<Scalar> {
        let f = self.field()?;
        Ok(f.pow(&self.zeta_bar()?, e))
    }
}

impl fmt::Display for SpecializationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = self
            .factor
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}x^{k}"),
            })
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "p={} factor #{} of Phi_{}: {poly}", self.p, self.index, self.n)
    }
}

/// Φ_N reduced modulo p.
pub fn cyclotomic_mod_p(n: u64, p: u64) -> Result<Vec<u64>> {
    let phi = cyclotomic_poly(n)?;
    Ok(fppoly::trim(phi.coeffs().iter().map(|c| Rat::from_bigint(c).mod_p(p).expect("integer")).collect()))
}

/// All maximal ideals of ℤ[ζ_N] over `p`, as factors of Φ_N mod p, ordered
/// by degree and then by ascending coefficient tuple.
pub fn specialization_targets(n: u64, p: u64) -> Result<Vec<SpecializationSpec>> {
    if !modp::is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let phi = cyclotomic_mod_p(n, p)?;
    Ok(fppoly::irreducible_factors(&phi, p)
        .into_iter()
        .enumerate()
        .map(|(index, factor)| SpecializationSpec { n, p, factor, index })
        .collect())
}

pub fn select_target(n: u64, sel: TargetSelector) -> Result<SpecializationSpec> {
    let ts = specialization_targets(n, sel.p)?;
    let count = ts.len();
    ts.into_iter()
        .nth(sel.factor)
        .ok_or_else(|| Error::Invalid(format!("factor index {} out of range ({count} targets)", sel.factor)))
}

/// `R/𝔪 ⊗ V_R`: the rack space with `λ` replaced by its residue.
pub fn specialize_space(order: &OrderSpec, target: &SpecializationSpec) -> Result<BraidedVectorSpace> {
    if target.n != order.n {
        return Err(Error::Invalid(format!("target is for N = {}, order has N = {}", target.n, order.n)));
    }
    let field = target.field()?;
    let lambda_bar = target.reduce(order.e)?;
    let mut v = rack_space(&affine_rack(order.rack), &lambda_bar, &field)?;
    v.name = format!("{} over {} with lambda={}", order.rack, field.spec(), field.format(&lambda_bar));
    v.labels = Some(order.labels());
    Ok(v)
}

/// The support `{g_y^r}` of the span of `r`-th powers, with its conjugation
/// rack and the braided space it carries over the residue field.
#[derive(Clone, Debug)]
pub struct PowerSupport {
    pub r: u64,
    pub support: Vec<GroupElem>,
    pub rack: Rack,
    pub space: BraidedVectorSpace,
}

impl PowerSupport {
    pub fn size(&self) -> usize {
        self.support.len()
    }
}

pub fn power_module_support(order: &OrderSpec, target: &SpecializationSpec, r: u64) -> Result<PowerSupport> {
    let m = order.rack.inner_order();
    if num_integer::gcd(r, m) != 1 {
        return Err(Error::Domain(format!("gcd(r = {r}, m = {m}) must be 1")));
    }
    let gm = model_from_rack(order.rack);
    let p = order.rack.p;
    let support: Vec<GroupElem> = (0..p).map(|y| gm.pow(gm.g(y), r)).collect();
    let mut distinct = support.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() as u64 != p {
        return Err(Error::Domain(format!("support of the r-th powers has {} elements, expected {p}", distinct.len())));
    }
    let class = conjugacy_class(&gm, support[0]);
    if class != distinct {
        return Err(Error::Domain("r-th powers do not form one conjugacy class".into()));
    }
    let pos = |e: GroupElem| support.iter().position(|&s| s == e).expect("closed under conjugation");
    let op = (0..p as usize)
        .map(|x| (0..p as usize).map(|y| pos(gm.conj(support[x], support[y]))).collect())
        .collect();
    let rack = Rack::from_table(op)?;
    let field = target.field()?;
    let lambda_bar = target.reduce(order.e)?;
    let mut space = power_space(&affine_rack(order.rack), &lambda_bar, r, &field)?;
    space.name = format!("{r}-th powers of {} over {}", order.rack, field.spec());
    Ok(PowerSupport { r, support, rack, space })
}

/// Ranks over `ℚ(ζ_N)` and over a residue field, side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializeReport {
    pub order: OrderSpec,
    pub target: SpecializationSpec,
    pub lambda_bar: Vec<String>,
    pub char0: HilbertReport,
    pub charp: HilbertReport,
    /// Degree-wise `charp ≤ char0` wherever both ranks are known.
    pub inequality_holds: bool,
    pub space: BraidedVectorSpace,
}

impl SpecializeReport {
    /// Whether either computation stopped at the budget.
    pub fn budget_hit(&self) -> bool {
        [&self.char0, &self.charp].iter().any(|r| !r.terminated && r.ranks.len() <= r.cap)
    }
}

fn rank_at(r: &HilbertReport, n: usize) -> Option<u64> {
    match r.ranks.get(n) {
        Some(&x) => Some(x),
        None if r.terminated => Some(0),
        None => None,
    }
}

/// Degree-wise `a ≤ b` up to the larger cap, skipping unknown degrees.
pub fn ranks_dominated(a: &HilbertReport, b: &HilbertReport) -> bool {
    (0..=a.cap.max(b.cap)).all(|n| match (rank_at(a, n), rank_at(b, n)) {
        (Some(x), Some(y)) => x <= y,
        _ => true,
    })
}

pub fn specialize_report(order: &OrderSpec, target: &SpecializationSpec, cap: usize, cfg: &EngineConfig) -> Result<SpecializeReport> {
    let v0 = order.generic_space()?;
    let vp = specialize_space(order, target)?;
    let (char0, _) = hilbert_or_partial(&v0, cap, cfg)?;
    let (charp, _) = hilbert_or_partial(&vp, cap, cfg)?;
    let field = target.field()?;
    Ok(SpecializeReport {
        order: *order,
        target: target.clone(),
        lambda_bar: field.to_coeff_strings(&target.reduce(order.e)?),
        inequality_holds: ranks_dominated(&charp, &char0),
        char0,
        charp,
        space: vp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_examples() {
        let t = specialization_targets(6, 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].degree(), 1);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(t[0].zeta_bar().unwrap(), f3.from_int(-1));

        let t = specialization_targets(4, 5).unwrap();
        assert_eq!(t.len(), 2);
        let f5 = Field::prime(5).unwrap();
        let mut roots: Vec<Scalar> = t.iter().map(|s| s.zeta_bar().unwrap()).collect();
        roots.sort_by_key(|x| f5.format(x));
        assert_eq!(roots, vec![f5.from_int(2), f5.from_int(3)]);

        let t = specialization_targets(2, 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].zeta_bar().unwrap(), f3.from_int(-1));
    }

    #[test]
    fn residue_orders() {
        for n in 1..=60u64 {
            for p in [2u64, 3, 5, 7, 11, 13] {
                let expected = modp::prime_to_part(n, p);
                for t in specialization_targets(n, p).unwrap() {
                    assert_eq!(t.residue_order(1).unwrap(), expected, "N={n} p={p}");
                    assert!(fppoly::is_irreducible(&t.factor, p));
                }
            }
        }
    }

    #[test]
    fn specialized_spaces() {
        let aff32 = AffineRackSpec::new(3, 2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let expect = rack_space(&affine_rack(aff32), &f3.from_int(-1), &f3).unwrap();
        for n in [6, 2] {
            let order = OrderSpec::new(n, 1, aff32).unwrap();
            let t = select_target(n, TargetSelector { p: 3, factor: 0 }).unwrap();
            let v = specialize_space(&order, &t).unwrap();
            assert_eq!(v.all_terms(), expect.all_terms());
            assert!(v.satisfies_braid_equation());
        }
        let aff52 = AffineRackSpec::new(5, 2).unwrap();
        let f5 = Field::prime(5).unwrap();
        let t = select_target(2, TargetSelector { p: 5, factor: 0 }).unwrap();
        let v = specialize_space(&OrderSpec::new(2, 1, aff52).unwrap(), &t).unwrap();
        assert_eq!(v.all_terms(), rack_space(&affine_rack(aff52), &f5.from_int(-1), &f5).unwrap().all_terms());
    }

    #[test]
    fn power_supports() {
        // λ of order 6 over Aff(3,2): the certificate prime is 2 and r = 3
        let order = OrderSpec::new(6, 1, AffineRackSpec::new(3, 2).unwrap()).unwrap();
        let t = select_target(6, TargetSelector { p: 2, factor: 0 }).unwrap();
        let s = power_module_support(&order, &t, 3).unwrap();
        assert_eq!(s.size(), 3);
        assert!(s.space.satisfies_braid_equation());
        assert!(power_module_support(&order, &t, 2).is_err());

        let order = OrderSpec::new(12, 1, AffineRackSpec::new(5, 2).unwrap()).unwrap();
        let t = select_target(12, TargetSelector { p: 5, factor: 0 }).unwrap();
        assert_eq!(power_module_support(&order, &t, 3).unwrap().size(), 5);

        let order = OrderSpec::new(14, 1, AffineRackSpec::new(7, 3).unwrap()).unwrap();
        let t = select_target(14, TargetSelector { p: 2, factor: 0 }).unwrap();
        assert_eq!(power_module_support(&order, &t, 7).unwrap().size(), 7);
    }

    #[test]
    fn spec_strings() {
        assert_eq!("order:N=6".parse::<OrderParams>().unwrap(), OrderParams { n: 6, e: 1 });
        assert_eq!("order:N=10,e=3".parse::<OrderParams>().unwrap(), OrderParams { n: 10, e: 3 });
        assert_eq!("at:p=3".parse::<TargetSelector>().unwrap(), TargetSelector { p: 3, factor: 0 });
        assert_eq!("at:p=5,factor=1".parse::<TargetSelector>().unwrap(), TargetSelector { p: 5, factor: 1 });
        assert!("at:p=4".parse::<TargetSelector>().is_err());
        assert!("order:6".parse::<OrderParams>().is_err());
        assert!(select_target(4, TargetSelector { p: 5, factor: 2 }).is_err());
    }

    #[test]
    fn specialize_reports() {
        let order = OrderSpec::new(6, 1, AffineRackSpec::new(3, 2).unwrap()).unwrap();
        let t = select_target(6, TargetSelector { p: 3, factor: 0 }).unwrap();
        let rep = specialize_report(&order, &t, 4, &EngineConfig::default()).unwrap();
        assert!(rep.inequality_holds);
        assert!(!rep.budget_hit());
        assert_eq!(rep.charp.ranks, vec![1, 3, 4, 3, 1]);
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<SpecializeReport>(&json).unwrap(), rep);
    }
}
