//! Finiteness decision for Nichols algebras of absolutely irreducible
//! Yetter–Drinfeld modules of prime dimension over affine racks, with
//! replayable certificates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{modp, IntPoly, LambdaSpec};
use crate::error::{Error, Result};
use crate::nichols::power_primitivity_defect;
use crate::orders::{power_module_support, specialization_targets, OrderSpec, SpecializationSpec};
use crate::racks::AffineRackSpec;

/// `(p, α, λ)` in characteristic `p` with a finite-dimensional Nichols algebra.
pub const RANK2_CHARP: [(u64, u64, i64); 5] = [(3, 2, -1), (5, 2, -1), (5, 3, -1), (7, 3, -1), (7, 5, -1)];

/// `(p, a, b)` for which the W-space has a finite-dimensional Nichols
/// algebra; `a` is written as a signed representative.
pub const KFINITE: [(u64, i64, i64); 5] = [(3, -1, -1), (5, 2, -1), (5, 3, -1), (7, 3, -1), (7, 5, -1)];

/// Dimension pairs `{dim V, dim W}` allowed for a finite-dimensional Nichols
/// algebra of a semisimple sum of two simple modules.
pub const SEMISIMPLE_DIMS: [&[u64]; 5] = [&[1, 3], &[1, 4], &[2], &[2, 3], &[2, 4]];

/// `p ↦ (p-1)_t^{p-1} (p)_t` and its value at `t = 1`.
pub const TABLE1: [(u64, u64); 3] = [(3, 12), (5, 1280), (7, 326_592)];

/// Tables bundled for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTables {
    pub rank2_charp: Vec<(u64, u64, i64)>,
    pub kfinite: Vec<(u64, i64, i64)>,
    pub semisimple_dims: Vec<Vec<u64>>,
    pub table1: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: u64,
    pub hilbert: String,
    pub total: u64,
}

pub fn tables() -> ClassificationTables {
    ClassificationTables {
        rank2_charp: RANK2_CHARP.to_vec(),
        kfinite: KFINITE.to_vec(),
        semisimple_dims: SEMISIMPLE_DIMS.iter().map(|s| s.to_vec()).collect(),
        table1: TABLE1.iter().map(|&(p, total)| TableRow { p, hilbert: hilbert_label(p), total }).collect(),
    }
}

fn hilbert_label(p: u64) -> String {
    format!("({})_t^{} ({})_t", p - 1, p - 1, p)
}

/// Both lists agree after reducing `a` modulo `p`, and the totals are the
/// values of the products at 1.
pub fn tables_consistent() -> bool {
    let mut k: Vec<(u64, u64, i64)> =
        KFINITE.iter().map(|&(p, a, b)| (p, modp::from_i64(a, p), b)).collect();
    let mut r = RANK2_CHARP.to_vec();
    k.sort_unstable();
    r.sort_unstable();
    k == r && TABLE1.iter().all(|&(p, total)| expected_hilbert(p).map(|(_, t)| t).ok() == Some(total))
}

pub fn rank2_listed(p: u64, alpha: u64) -> bool {
    RANK2_CHARP.iter().any(|&(q, a, _)| q == p && a == alpha % p)
}

/// Whether `(p, a, b)` is in the W-space table, for `a` given mod `p`.
pub fn kfinite_contains(p: u64, a: u64, b_is_minus_one: bool) -> bool {
    b_is_minus_one && KFINITE.iter().any(|&(q, x, _)| q == p && modp::from_i64(x, p) == a % p)
}

/// `(p-1)_t^{p-1} (p)_t` for `p ∈ {3, 5, 7}`.
pub fn expected_hilbert(p: u64) -> Result<(IntPoly, u64)> {
    if !TABLE1.iter().any(|&(q, _)| q == p) {
        return Err(Error::Domain(format!("no finite-dimensional example of dimension {p}")));
    }
    let poly = IntPoly::q_int(p as usize - 1).pow(p as u32 - 1).mul(&IntPoly::q_int(p as usize));
    let total = poly.eval_int(1).try_into().expect("small total");
    Ok((poly, total))
}

/// True when `{dim_v, dim_w}` is not an allowed pair.
pub fn semisimple_obstruction(dim_v: u64, dim_w: u64) -> bool {
    let mut pair = vec![dim_v, dim_w];
    pair.sort_unstable();
    pair.dedup();
    !SEMISIMPLE_DIMS.contains(&pair.as_slice())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPrimesCheck {
    pub applicable: bool,
    pub prime_factors: Vec<u64>,
    pub gcd: u64,
    /// The single prime dividing `gcd(m, N)`, when that gcd is a nontrivial
    /// prime power.
    pub gcd_prime: Option<u64>,
}

/// `N` has two distinct prime factors and `gcd(m, N)` is 1 or a prime power.
pub fn two_primes_applicable(m: u64, n: u64) -> TwoPrimesCheck {
    let prime_factors = modp::prime_factors(n);
    let gcd = num_integer::gcd(m, n);
    let gp = modp::prime_factors(gcd);
    let gcd_prime = (gp.len() == 1).then(|| gp[0]);
    let applicable = prime_factors.len() >= 2 && gp.len() <= 1;
    TwoPrimesCheck { applicable, prime_factors, gcd, gcd_prime }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Finite,
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    NotRootOfUnityOrOne,
    TwoPrimes,
    CharPDegeneration,
    TableMatch,
}

/// Reduction of `λ` at one maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetWitness {
    pub prime: u64,
    pub index: usize,
    pub factor: Vec<u64>,
    pub degree: usize,
    pub lambda_bar: Vec<String>,
    pub lambda_bar_order: u64,
    pub lambda_bar_is_minus_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPrimesWitness {
    pub check: TwoPrimesCheck,
    /// The prime whose maximal ideal carries the certificate.
    pub q: u64,
    /// Prime-to-`q` part of `N`.
    pub r: u64,
    pub target: TargetWitness,
    pub defect: Vec<u64>,
    pub support_size: usize,
    pub semisimple_obstruction: bool,
    /// Defect at the ideal over `p`, with `r` the prime-to-`p` part of `N`.
    pub p_side_r: u64,
    pub p_side_defect: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    /// Exact order of `λ`.
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub m: u64,
    pub listed: bool,
    pub target: Option<TargetWitness>,
    pub kfinite: Option<bool>,
    pub two_primes: Option<TwoPrimesWitness>,
    pub table_row: Option<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub p: u64,
    pub alpha: u64,
    pub lambda: LambdaSpec,
    pub verdict: Verdict,
    pub branch: Branch,
    pub witnesses: Witnesses,
    pub expected_hilbert: Option<Vec<i64>>,
}

fn target_witness(t: &SpecializationSpec, e: u64) -> Result<TargetWitness> {
    let f = t.field()?;
    let lb = t.reduce(e)?;
    Ok(TargetWitness {
        prime: t.p,
        index: t.index,
        factor: t.factor.clone(),
        degree: t.degree(),
        lambda_bar: f.to_coeff_strings(&lb),
        lambda_bar_order: t.residue_order(e)?,
        lambda_bar_is_minus_one: lb == f.from_int(-1),
    })
}

fn first_target(n: u64, p: u64) -> Result<SpecializationSpec> {
    specialization_targets(n, p)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Domain(format!("Phi_{n} has no factor mod {p}")))
}

/// Reduced form `(N, e)` with `gcd(N, e) = 1`.
fn reduced(lambda: &LambdaSpec) -> Option<(u64, u64)> {
    match *lambda {
        LambdaSpec::RootOfUnity { n, e } => {
            let o = lambda.order()?;
            Some((o, if o == 1 { 0 } else { (e / (n / o)) % o }))
        }
        LambdaSpec::NonRoot { .. } => None,
    }
}

pub fn decide(p: u64, alpha: u64, lambda: LambdaSpec) -> Result<Decision> {
    let rack = AffineRackSpec::new(p, alpha)?;
    lambda.validate()?;
    let m = rack.inner_order();
    let listed = rank2_listed(p, alpha);
    let mut w = Witnesses { n: lambda.order(), m, listed, target: None, kfinite: None, two_primes: None, table_row: None };
    let done = |verdict, branch, w, expected_hilbert| Decision { p, alpha, lambda, verdict, branch, witnesses: w, expected_hilbert };

    let Some((n, e)) = reduced(&lambda).filter(|&(n, _)| n > 1) else {
        return Ok(done(Verdict::Infinite, Branch::NotRootOfUnityOrOne, w, None));
    };
    let target = first_target(n, p)?;
    let tw = target_witness(&target, e)?;
    let minus_one = tw.lambda_bar_is_minus_one;
    w.target = Some(tw);
    if !minus_one || !listed {
        w.kfinite = Some(kfinite_contains(p, alpha, minus_one));
        return Ok(done(Verdict::Infinite, Branch::CharPDegeneration, w, None));
    }
    if n == 2 {
        let (poly, total) = expected_hilbert(p)?;
        w.table_row = Some(TableRow { p, hilbert: hilbert_label(p), total });
        return Ok(done(Verdict::Finite, Branch::TableMatch, w, poly.to_i64s()));
    }
    // λ ≠ -1 but λ̄ = -1: the order of λ is 2p^k
    if modp::prime_to_part(n, p) != 2 {
        return Err(Error::Domain(format!("order {n} of lambda is not of the form 2p^k")));
    }
    let check = two_primes_applicable(m, n);
    if !check.applicable {
        return Err(Error::Domain(format!("gcd({m}, {n}) is not a prime power")));
    }
    let q = check.gcd_prime.unwrap_or(check.prime_factors[0]);
    let r = modp::prime_to_part(n, q);
    let order = OrderSpec::new(n, e, rack)?;
    let tq = first_target(n, q)?;
    let qw = target_witness(&tq, e)?;
    let defect = power_primitivity_defect(r, &tq.reduce(e)?, &tq.field()?)?;
    let support = power_module_support(&order, &tq, r)?;
    let p_side_r = modp::prime_to_part(n, p);
    let p_side_defect = power_primitivity_defect(p_side_r, &target.reduce(e)?, &target.field()?)?;
    w.two_primes = Some(TwoPrimesWitness {
        check,
        q,
        r,
        target: qw,
        defect,
        support_size: support.size(),
        semisimple_obstruction: semisimple_obstruction(p, support.size() as u64),
        p_side_r,
        p_side_defect,
    });
    Ok(done(Verdict::Infinite, Branch::TwoPrimes, w, None))
}

/// Recomputes every witness of `d` and checks that the branch conclusion
/// follows from them.
pub fn replay(d: &Decision) -> std::result::Result<(), String> {
    let fresh = decide(d.p, d.alpha, d.lambda).map_err(|e| e.to_string())?;
    if fresh != *d {
        return Err("recomputed decision differs".into());
    }
    let w = &d.witnesses;
    let rack = AffineRackSpec::new(d.p, d.alpha).map_err(|e| e.to_string())?;
    if w.m != rack.inner_order() || w.listed != rank2_listed(d.p, d.alpha) {
        return Err("rack data mismatch".into());
    }
    let verify_target = |t: &TargetWitness, n: u64, e: u64| -> std::result::Result<(), String> {
        let spec = SpecializationSpec { n, p: t.prime, factor: t.factor.clone(), index: t.index };
        if !crate::arith::fppoly::is_irreducible(&spec.factor, t.prime) {
            return Err("target factor is reducible".into());
        }
        let phi = crate::orders::cyclotomic_mod_p(n, t.prime).map_err(|e| e.to_string())?;
        if !crate::arith::fppoly::rem(&phi, &spec.factor, t.prime).iter().all(|&c| c == 0) {
            return Err("target factor does not divide Phi_N".into());
        }
        let f = spec.field().map_err(|e| e.to_string())?;
        let lb = f.from_coeff_strings(&t.lambda_bar).map_err(|e| e.to_string())?;
        if lb != spec.reduce(e).map_err(|e| e.to_string())? {
            return Err("lambda_bar is not the residue of lambda".into());
        }
        if t.lambda_bar_order != modp::prime_to_part(n, t.prime) {
            return Err("residue order is not the prime-to-p part of N".into());
        }
        Ok(())
    };
    match d.branch {
        Branch::NotRootOfUnityOrOne => {
            if !matches!(d.lambda.order(), None | Some(1)) {
                return Err("lambda is a nontrivial root of unity".into());
            }
        }
        Branch::CharPDegeneration => {
            let (n, e) = reduced(&d.lambda).ok_or("missing order")?;
            let t = w.target.as_ref().ok_or("missing target")?;
            verify_target(t, n, e)?;
            if t.lambda_bar_is_minus_one && w.listed {
                return Err("listed pair with lambda_bar = -1 needs another branch".into());
            }
            if w.kfinite != Some(false) {
                return Err("degeneration lies in the finite W-space table".into());
            }
        }
        Branch::TableMatch => {
            if d.lambda.order() != Some(2) || !w.listed {
                return Err("table match needs lambda = -1 on a listed pair".into());
            }
            let (poly, total) = expected_hilbert(d.p).map_err(|e| e.to_string())?;
            if d.expected_hilbert != poly.to_i64s() || w.table_row.as_ref().map(|r| r.total) != Some(total) {
                return Err("table row mismatch".into());
            }
        }
        Branch::TwoPrimes => {
            let (n, e) = reduced(&d.lambda).ok_or("missing order")?;
            let t = w.target.as_ref().ok_or("missing target")?;
            verify_target(t, n, e)?;
            let tp = w.two_primes.as_ref().ok_or("missing certificate")?;
            verify_target(&tp.target, n, e)?;
            if !tp.check.applicable || tp.check != two_primes_applicable(w.m, n) {
                return Err("gcd conditions fail".into());
            }
            if tp.target.lambda_bar_order != tp.r || modp::prime_to_part(n, tp.q) != tp.r || tp.r < 2 {
                return Err("lambda_bar over q does not have order r".into());
            }
            if !tp.defect.is_empty() || !tp.p_side_defect.is_empty() {
                return Err("some Gaussian binomial does not vanish".into());
            }
            if tp.support_size as u64 != d.p || !tp.semisimple_obstruction || !semisimple_obstruction(d.p, d.p) {
                return Err("the dimension pair is allowed".into());
            }
        }
    }
    Ok(())
}

fn lambda_text(l: &LambdaSpec) -> String {
    match *l {
        LambdaSpec::RootOfUnity { n, e } => format!("zeta_{n}^{e}"),
        LambdaSpec::NonRoot { .. } => "a non-root of unity".into(),
    }
}

/// A step-by-step account of the argument behind a decision.
pub fn narrative(d: &Decision) -> String {
    let w = &d.witnesses;
    let mut s = String::new();
    let _ = writeln!(s, "V: rack space over Aff({}, {}), inner order m = {}, lambda = {}", d.p, d.alpha, w.m, lambda_text(&d.lambda));
    match w.n {
        None => {
            let _ = writeln!(s, "Root-of-unity test: lambda is not a root of unity.");
        }
        Some(1) => {
            let _ = writeln!(s, "Root-of-unity test: lambda = 1.");
        }
        Some(n) => {
            let _ = writeln!(s, "Root-of-unity test: lambda has order N = {n}.");
        }
    }
    if let Some(t) = &w.target {
        let _ = writeln!(
            s,
            "Reduction at a maximal ideal over {}: factor #{} {:?} of degree {}, lambda_bar = [{}] of order {}.",
            t.prime,
            t.index,
            t.factor,
            t.degree,
            t.lambda_bar.join(", "),
            t.lambda_bar_order
        );
        let _ = writeln!(
            s,
            "Rank-two list in characteristic p: (p, alpha) = ({}, {}) is {}listed; lambda_bar {} -1.",
            d.p,
            d.alpha,
            if w.listed { "" } else { "not " },
            if t.lambda_bar_is_minus_one { "=" } else { "≠" }
        );
    }
    match d.branch {
        Branch::NotRootOfUnityOrOne => {
            let _ = writeln!(s, "Branch: not a root of unity or equal to 1; B(V) is infinite-dimensional.");
        }
        Branch::CharPDegeneration => {
            let _ = writeln!(
                s,
                "Branch: degeneration in characteristic p. The J-adic filtration degenerates V to the W-space with \
                 (a, b) = (alpha, lambda_bar); W-space table membership: {}. Hence B(V) is infinite-dimensional.",
                if w.kfinite == Some(true) { "yes" } else { "no" }
            );
        }
        Branch::TableMatch => {
            let row = w.table_row.as_ref().expect("table row");
            let _ = writeln!(s, "Branch: table match. lambda = -1 and (p, alpha) is listed.");
            let _ = writeln!(s, "Hilbert series {} with total dimension {}.", row.hilbert, row.total);
        }
        Branch::TwoPrimes => {
            let tp = w.two_primes.as_ref().expect("certificate");
            let _ = writeln!(
                s,
                "Branch: two primes. lambda ≠ -1 with lambda_bar = -1, so N = {} = 2*{}^k; prime factors {:?}, gcd(m, N) = {}.",
                w.n.unwrap_or(0),
                d.p,
                tp.check.prime_factors,
                tp.check.gcd
            );
            let _ = writeln!(
                s,
                "At a maximal ideal over q = {}: lambda_bar has order r = {}; nonvanishing Gaussian binomials (r choose i): {:?}.",
                tp.q, tp.r, tp.defect
            );
            let _ = writeln!(
                s,
                "The r-th powers span a space of primitives with support of size {}; dimension pair {{{}, {}}} obstructed: {}.",
                tp.support_size, d.p, tp.support_size, tp.semisimple_obstruction
            );
            let _ = writeln!(s, "Hence B(V) is infinite-dimensional.");
        }
    }
    let _ = writeln!(s, "Verdict: {}", if d.verdict == Verdict::Finite { "finite" } else { "infinite" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_data() {
        assert!(tables_consistent());
        assert_eq!(expected_hilbert(3).unwrap().1, 12);
        assert_eq!(expected_hilbert(5).unwrap().1, 1280);
        assert_eq!(expected_hilbert(7).unwrap().1, 326_592);
        assert_eq!(expected_hilbert(3).unwrap().0.to_i64s().unwrap(), vec![1, 3, 4, 3, 1]);
        assert!(expected_hilbert(11).is_err());
    }

    #[test]
    fn obstruction_pairs() {
        assert!(semisimple_obstruction(3, 3));
        assert!(!semisimple_obstruction(2, 3));
        assert!(!semisimple_obstruction(3, 2));
        assert!(!semisimple_obstruction(2, 2));
        assert!(semisimple_obstruction(5, 5));
        assert!(semisimple_obstruction(1, 1));
    }

    #[test]
    fn two_primes_conditions() {
        assert!(two_primes_applicable(2, 6).applicable);
        let c = two_primes_applicable(4, 12);
        assert!(c.applicable);
        assert_eq!((c.gcd, c.gcd_prime), (4, Some(2)));
        assert!(!two_primes_applicable(6, 9).applicable);
        assert!(!two_primes_applicable(6, 30).applicable);
        assert!(two_primes_applicable(7, 10).applicable);
    }

    #[test]
    fn decision_examples() {
        let d = decide(3, 2, LambdaSpec::minus_one()).unwrap();
        assert_eq!((d.verdict, d.branch), (Verdict::Finite, Branch::TableMatch));
        assert_eq!(d.expected_hilbert, Some(vec![1, 3, 4, 3, 1]));

        let d = decide(5, 4, LambdaSpec::minus_one()).unwrap();
        assert_eq!((d.verdict, d.branch), (Verdict::Infinite, Branch::CharPDegeneration));
        assert_eq!(d.witnesses.kfinite, Some(false));

        let d = decide(3, 2, LambdaSpec::root(6, 1)).unwrap();
        assert_eq!((d.verdict, d.branch), (Verdict::Infinite, Branch::TwoPrimes));
        assert!(d.witnesses.target.as_ref().unwrap().lambda_bar_is_minus_one);
        let tp = d.witnesses.two_primes.as_ref().unwrap();
        assert_eq!((tp.q, tp.r, tp.support_size), (2, 3, 3));
        assert!(tp.defect.is_empty());

        let d = decide(7, 3, LambdaSpec::root(1, 0)).unwrap();
        assert_eq!(d.branch, Branch::NotRootOfUnityOrOne);
        let d = decide(7, 3, LambdaSpec::non_root()).unwrap();
        assert_eq!(d.branch, Branch::NotRootOfUnityOrOne);

        // ζ_6^3 = -1 exactly
        assert_eq!(decide(5, 2, LambdaSpec::root(6, 3)).unwrap().branch, Branch::TableMatch);
        assert!(decide(5, 1, LambdaSpec::minus_one()).is_err());
        assert!(decide(5, 2, LambdaSpec::root(6, 7)).is_err());
    }

    #[test]
    fn decisions_replay_and_serialize() {
        for (p, a) in [(3, 2), (5, 2), (5, 4), (7, 3)] {
            for lam in [LambdaSpec::minus_one(), LambdaSpec::root(6, 1), LambdaSpec::root(10, 3), LambdaSpec::root(7, 2)] {
                let d = decide(p, a, lam).unwrap();
                replay(&d).unwrap();
                let json = serde_json::to_string(&d).unwrap();
                let back: Decision = serde_json::from_str(&json).unwrap();
                assert_eq!(back, d);
                assert!(narrative(&d).contains("Verdict"));
            }
        }
        let mut d = decide(3, 2, LambdaSpec::root(6, 1)).unwrap();
        d.witnesses.two_primes.as_mut().unwrap().support_size = 2;
        assert!(replay(&d).is_err());
        let json = serde_json::to_value(decide(3, 2, LambdaSpec::minus_one()).unwrap()).unwrap();
        assert_eq!(json["lambda"], serde_json::json!({"N": 2, "e": 1}));
        assert_eq!(json["branch"], "table-match");
    }

    #[test]
    fn minus_one_test_is_factor_independent() {
        for n in 1..=50u64 {
            for p in [3u64, 5, 7] {
                for e in 0..n {
                    let verdicts: Vec<bool> = specialization_targets(n, p)
                        .unwrap()
                        .iter()
                        .map(|t| {
                            let f = t.field().unwrap();
                            t.reduce(e).unwrap() == f.from_int(-1)
                        })
                        .collect();
                    assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "N={n} p={p} e={e}");
                }
            }
        }
    }
}
