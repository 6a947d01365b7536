//! Self-check suites over a fixed corpus, grouped by area.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{modp, Field, LambdaSpec};
use crate::braided::{diagonal_space, rack_space, w_space, BraidedVectorSpace, DiagonalMatrixSpec};
use crate::decide::{decide, replay, tables_consistent, Verdict};
use crate::degen::{associated_graded, check_filtration, jadic_degeneration, jadic_filtration, triangular_bases, check_triangular};
use crate::error::{Error, Result};
use crate::groups::{model_from_rack, power_class_size, verify_commutator_cosets, verify_gamma_relations, verify_ordered_monomials};
use crate::linalg::{self, Matrix};
use crate::nichols::{hilbert_series, symmetrizer};
use crate::oracle::{matsumoto_symmetrizer, random_braided_space};
use crate::orders::{specialization_targets, specialize_space, OrderSpec};
use crate::par::ExecMode;
use crate::racks::{affine_rack, is_indecomposable, is_quandle, verify_egs_with, AffineRackSpec, Rack};

pub const SUITES: [&str; 8] = ["braided", "oracle", "racks", "groups", "hilbert", "orders", "degen", "decide"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub elapsed_ms: u64,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: usize,
    pub failed: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Suites to run; all when empty.
    pub only: Vec<String>,
    /// Racks added to the corpus.
    pub extra_racks: Vec<Rack>,
    pub mode: ExecMode,
}

type Check = Box<dyn Fn() -> std::result::Result<(), String>>;

fn check(name: impl Into<String>, f: impl Fn() -> std::result::Result<(), String> + 'static) -> (String, Check) {
    (name.into(), Box::new(f))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn affine_corpus() -> Vec<AffineRackSpec> {
    [3u64, 5, 7].iter().flat_map(|&p| (2..p).map(move |a| AffineRackSpec { p, alpha: a })).collect()
}

fn space_corpus(extra: &[Rack]) -> Vec<BraidedVectorSpace> {
    let q = Field::rationals();
    let f5 = Field::prime(5).unwrap();
    let mut out: Vec<BraidedVectorSpace> = affine_corpus()
        .into_iter()
        .map(|s| rack_space(&affine_rack(s), &q.from_int(-1), &q).unwrap().with_name(format!("{s} over QQ, lambda=-1")))
        .collect();
    out.push(rack_space(&affine_rack(AffineRackSpec { p: 5, alpha: 2 }), &f5.from_int(2), &f5).unwrap());
    out.push(diagonal_space(&DiagonalMatrixSpec { q: vec![vec![q.from_int(-1), q.from_int(2)], vec![q.from_int(3), q.from_int(-1)]] }, &q).unwrap());
    for r in extra {
        out.push(rack_space(r, &q.from_int(-1), &q).unwrap().with_name("supplied rack, lambda=-1"));
    }
    out
}

fn suite_checks(name: &str, opts: &VerifyOptions) -> Vec<(String, Check)> {
    let mode = opts.mode;
    match name {
        "braided" => space_corpus(&opts.extra_racks)
            .into_iter()
            .map(|v| {
                check(format!("braid equation and inverse: {}", v.name), move || {
                    if let Some(t) = v.braid_violation() {
                        return Err(format!("braid equation fails at {t:?}"));
                    }
                    let inv = v.inverse().ok_or("not invertible")?;
                    ensure(v.check_inverse(&inv), || "inverse check failed".into())
                })
            })
            .collect(),
        "oracle" => (0..20u64)
            .map(|seed| {
                check(format!("factorized symmetrizer = permutation sum, seed {seed}"), move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let v = random_braided_space(&mut rng, 3);
                    for n in 1..=3 {
                        let a = symmetrizer(&v, n).map_err(|e| e.to_string())?;
                        let b = matsumoto_symmetrizer(&v, n);
                        ensure(a.columns == b.columns, || format!("degree {n} differs on {}", v.name))?;
                    }
                    Ok(())
                })
            })
            .collect(),
        "racks" => {
            let mut cs: Vec<(String, Check)> = affine_corpus()
                .into_iter()
                .map(|s| {
                    check(format!("{s} is an indecomposable quandle"), move || {
                        let r = affine_rack(s);
                        ensure(r.distributivity_violation().is_none() && is_quandle(&r) && is_indecomposable(&r), || {
                            "axiom failure".into()
                        })
                    })
                })
                .collect();
            for (i, r) in opts.extra_racks.iter().cloned().enumerate() {
                cs.push(check(format!("supplied rack #{i} is self-distributive"), move || {
                    ensure(r.distributivity_violation().is_none(), || "self-distributivity fails".into())
                }));
            }
            for p in [2u64, 3, 5] {
                cs.push(check(format!("indecomposable quandles of size {p} are affine"), move || {
                    let rep = verify_egs_with(p, mode).map_err(|e| e.to_string())?;
                    ensure(rep.holds, || format!("{rep:?}"))
                }));
            }
            cs
        }
        "groups" => affine_corpus()
            .into_iter()
            .map(|s| {
                check(format!("group model of {s}"), move || {
                    let gm = model_from_rack(s);
                    ensure(verify_gamma_relations(&gm), || "relations among g_i and gamma".into())?;
                    ensure(verify_commutator_cosets(&gm), || "commutator cosets".into())?;
                    ensure(gm.class_is_affine(), || "class rack is not the affine rack".into())?;
                    ensure(verify_ordered_monomials(&gm, 3), || "ordered monomials".into())?;
                    for r in 1..=2 * gm.m {
                        if num_integer::gcd(r, gm.m) == 1 {
                            ensure(power_class_size(&gm, r) == s.p as usize, || format!("class of g^{r}"))?;
                        }
                    }
                    Ok(())
                })
            })
            .collect(),
        "hilbert" => vec![
            check("Aff(3,2), lambda=-1 over QQ", || {
                let q = Field::rationals();
                let v = rack_space(&affine_rack(AffineRackSpec { p: 3, alpha: 2 }), &q.from_int(-1), &q).unwrap();
                let h = hilbert_series(&v, 6, None).map_err(|e| e.to_string())?;
                ensure(h.ranks == [1, 3, 4, 3, 1, 0] && h.total == Some(12), || format!("{:?}", h.ranks))
            }),
            check("one-dimensional, q=-1", || {
                let q = Field::rationals();
                let v = diagonal_space(&DiagonalMatrixSpec { q: vec![vec![q.from_int(-1)]] }, &q).unwrap();
                let h = hilbert_series(&v, 6, None).map_err(|e| e.to_string())?;
                ensure(h.ranks == [1, 1, 0] && h.total == Some(2), || format!("{:?}", h.ranks))
            }),
            check("Aff(5,2), lambda=-1 over QQ, degrees 0..4", || {
                let q = Field::rationals();
                let v = rack_space(&affine_rack(AffineRackSpec { p: 5, alpha: 2 }), &q.from_int(-1), &q).unwrap();
                let h = hilbert_series(&v, 4, None).map_err(|e| e.to_string())?;
                ensure(h.ranks == [1, 5, 15, 35, 66], || format!("{:?}", h.ranks))
            }),
        ],
        "orders" => {
            let mut cs = vec![check("residue orders for N <= 30", || {
                for n in 1..=30u64 {
                    for p in [2u64, 3, 5, 7] {
                        for t in specialization_targets(n, p).map_err(|e| e.to_string())? {
                            let o = t.residue_order(1).map_err(|e| e.to_string())?;
                            ensure(o == modp::prime_to_part(n, p), || format!("N={n} p={p}: order {o}"))?;
                        }
                    }
                }
                Ok(())
            })];
            for (p, a, n, ell) in [(3u64, 2u64, 6u64, 3u64), (3, 2, 2, 3), (3, 2, 4, 5), (3, 2, 3, 2)] {
                cs.push(check(format!("ranks of Aff({p},{a}) with N={n} drop at {ell}"), move || {
                    let order = OrderSpec::new(n, 1, AffineRackSpec { p, alpha: a }).map_err(|e| e.to_string())?;
                    let v0 = order.generic_space().map_err(|e| e.to_string())?;
                    let r0 = hilbert_series(&v0, 3, None).map_err(|e| e.to_string())?;
                    for t in specialization_targets(n, ell).map_err(|e| e.to_string())? {
                        let vp = specialize_space(&order, &t).map_err(|e| e.to_string())?;
                        let rp = hilbert_series(&vp, 3, None).map_err(|e| e.to_string())?;
                        ensure(rp.ranks.iter().zip(&r0.ranks).all(|(x, y)| x <= y), || {
                            format!("{:?} vs {:?}", rp.ranks, r0.ranks)
                        })?;
                    }
                    Ok(())
                }));
            }
            cs
        }
        "degen" => {
            let mut cs: Vec<(String, Check)> = affine_corpus()
                .into_iter()
                .map(|s| {
                    check(format!("J-adic degeneration of {s} at lambda=-1"), move || {
                        let f = Field::prime(s.p).unwrap();
                        let (a, l) = (f.from_int(s.alpha as i64), f.from_int(-1));
                        let w = w_space(s.p, &a, &l, &f).map_err(|e| e.to_string())?;
                        let j = jadic_degeneration(s.p, &a, &l, &f).map_err(|e| e.to_string())?;
                        ensure(j.all_terms() == w.all_terms(), || "direct construction differs".into())?;
                        let filt = jadic_filtration(s, &l, &f).map_err(|e| e.to_string())?;
                        ensure(check_filtration(&filt).map_err(|e| e.to_string())?.valid, || "invalid filtration".into())?;
                        let g = associated_graded(&filt).map_err(|e| e.to_string())?;
                        ensure(g.all_terms() == w.all_terms(), || "associated graded differs".into())
                    })
                })
                .collect();
            cs.push(check("triangular bases on random instances", || {
                let f = Field::prime(5).unwrap();
                for seed in 0..20u64 {
                    let (basis, blocks, flag) = random_flag_instance(&f, seed);
                    let res = triangular_bases(&f, &basis, &blocks, &flag).map_err(|e| e.to_string())?;
                    check_triangular(&f, &res, &basis, &blocks, &flag)?;
                }
                Ok(())
            }));
            cs
        }
        "decide" => vec![
            check("classification tables", || ensure(tables_consistent(), || "tables disagree".into())),
            check("decisions for N <= 12 replay", || {
                for s in affine_corpus() {
                    let mut lams: Vec<LambdaSpec> = (1..=12u64).flat_map(|n| (0..n).map(move |e| LambdaSpec::root(n, e))).collect();
                    lams.push(LambdaSpec::non_root());
                    for l in lams {
                        let d = decide(s.p, s.alpha, l).map_err(|e| e.to_string())?;
                        replay(&d).map_err(|e| format!("{s} {l:?}: {e}"))?;
                        let finite = l.order() == Some(2) && crate::decide::rank2_listed(s.p, s.alpha);
                        ensure((d.verdict == Verdict::Finite) == finite, || format!("{s} {l:?}"))?;
                    }
                }
                Ok(())
            }),
        ],
        _ => Vec::new(),
    }
}

/// A random basis with block labels and a random flag in dimension 6.
pub fn random_flag_instance(f: &Field, seed: u64) -> (Matrix, Vec<usize>, Vec<Matrix>) {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 6;
    let p = f.characteristic() as i64;
    let rand_mat = |rng: &mut ChaCha8Rng| -> Matrix {
        loop {
            let m: Matrix = (0..n).map(|_| (0..n).map(|_| f.from_int(rng.gen_range(0..p))).collect()).collect();
            if linalg::rank(f, &m) == n {
                return m;
            }
        }
    };
    let basis = rand_mat(&mut rng);
    let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let m = rand_mat(&mut rng);
    let mut dims: Vec<usize> = (1..n).filter(|_| rng.gen_bool(0.5)).collect();
    dims.push(n);
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let mut flag: Vec<Matrix> = dims.iter().map(|&d| m[..d].to_vec()).collect();
    flag.push(Vec::new());
    (basis, blocks, flag)
}

pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    if let Some(bad) = opts.only.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(Error::Invalid(format!("unknown suite {bad:?}; available: {}", SUITES.join(", "))));
    }
    let mut suites = Vec::new();
    for name in SUITES.iter().filter(|s| opts.only.is_empty() || opts.only.iter().any(|o| o == *s)) {
        let start = Instant::now();
        let checks: Vec<CheckResult> = suite_checks(name, opts)
            .into_iter()
            .map(|(cname, f)| {
                let r = f();
                CheckResult { name: cname, passed: r.is_ok(), detail: r.err() }
            })
            .collect();
        let passed = checks.iter().filter(|c| c.passed).count();
        suites.push(SuiteReport {
            suite: name.to_string(),
            passed,
            failed: checks.len() - passed,
            elapsed_ms: start.elapsed().as_millis() as u64,
            checks,
        });
    }
    let passed = suites.iter().map(|s| s.passed).sum();
    let failed = suites.iter().map(|s| s.failed).sum();
    Ok(VerifyReport { passed, failed, suites })
}
