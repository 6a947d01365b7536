//! The group ℤ/p ⋊ ⟨α⟩ generated by the conjugacy class realizing Aff(p, α),
//! with the checks of its structural lemmas.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{modp, Field, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::racks::{affine_rack, rack_isomorphic, AffineRackSpec, Rack};

/// The pair `(a, s)` with `a ∈ ℤ/p` and `s ∈ ⟨α⟩ ⊆ (ℤ/p)^×`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    pub a: u64,
    pub s: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineGroupModel {
    pub p: u64,
    pub alpha: u64,
    /// Multiplicative order of α.
    pub m: u64,
    powers: Vec<u64>,
}

pub fn model_from_rack(spec: AffineRackSpec) -> AffineGroupModel {
    let p = spec.p;
    let m = spec.inner_order();
    let powers = (0..m).map(|k| modp::pow(spec.alpha, k, p)).collect();
    AffineGroupModel { p, alpha: spec.alpha, m, powers }
}

impl AffineGroupModel {
    pub fn spec(&self) -> AffineRackSpec {
        AffineRackSpec { p: self.p, alpha: self.alpha }
    }

    pub fn order(&self) -> u64 {
        self.p * self.m
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem { a: 0, s: 1 }
    }

    pub fn mul(&self, x: GroupElem, y: GroupElem) -> GroupElem {
        let p = self.p;
        GroupElem { a: modp::add(x.a, modp::mul(x.s, y.a, p), p), s: modp::mul(x.s, y.s, p) }
    }

    pub fn inv(&self, x: GroupElem) -> GroupElem {
        let p = self.p;
        let si = modp::inv(x.s, p);
        GroupElem { a: modp::neg(modp::mul(si, x.a, p), p), s: si }
    }

    pub fn pow(&self, x: GroupElem, e: u64) -> GroupElem {
        (0..e).fold(self.identity(), |acc, _| self.mul(acc, x))
    }

    pub fn conj(&self, g: GroupElem, h: GroupElem) -> GroupElem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn commutator(&self, x: GroupElem, y: GroupElem) -> GroupElem {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    /// All elements, sorted.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out: Vec<GroupElem> =
            self.powers.iter().flat_map(|&s| (0..self.p).map(move |a| GroupElem { a, s })).collect();
        out.sort();
        out
    }

    /// `g_i = (i, α)`.
    pub fn g(&self, i: u64) -> GroupElem {
        GroupElem { a: i % self.p, s: self.alpha }
    }

    /// `γ = g_0 g_1^{-1}`.
    pub fn gamma(&self) -> GroupElem {
        self.mul(self.g(0), self.inv(self.g(1)))
    }

    /// Exponent `k` with `s = α^k`.
    pub fn log_alpha(&self, s: u64) -> Option<u64> {
        self.powers.iter().position(|&x| x == s).map(|k| k as u64)
    }

    /// Index of `g_j` under `x`-conjugation: `(a, s)` sends `g_j` to
    /// `g_{(1-α)a + s j}`.
    pub fn act_on_index(&self, x: GroupElem, j: u64) -> u64 {
        let p = self.p;
        let one_minus = modp::sub(1, self.alpha, p);
        modp::add(modp::mul(one_minus, x.a, p), modp::mul(x.s, j % p, p), p)
    }

    /// The designated class `{g_i}` under conjugation, as a rack.
    pub fn class_rack(&self) -> Rack {
        let p = self.p;
        let idx = |e: GroupElem| -> usize {
            assert_eq!(e.s, self.alpha, "conjugate left the class");
            e.a as usize
        };
        let op = (0..p)
            .map(|i| (0..p).map(|j| idx(self.conj(self.g(i), self.g(j)))).collect())
            .collect();
        Rack::from_table(op).expect("conjugation on a class is a rack")
    }

    /// The class `{g_i}` is isomorphic to Aff(p, α).
    pub fn class_is_affine(&self) -> bool {
        rack_isomorphic(&self.class_rack(), &affine_rack(self.spec())).is_some()
    }

    /// `λ^m = 1`, so that `g_0 ↦ λ` on `v_0` extends to a representation
    /// of this model.
    pub fn lambda_compatible(&self, field: &Field, lambda: &Scalar) -> bool {
        field.is_one(&field.pow(lambda, self.m))
    }

    /// Matrix of `(a, α^k)` on the rack space with eigenvalue `λ`:
    /// `v_j ↦ λ^k v_{(1-α)a + α^k j}`.
    pub fn action_matrix(&self, field: &Field, lambda: &Scalar, x: GroupElem) -> Result<Matrix> {
        let k = self
            .log_alpha(x.s)
            .ok_or_else(|| Error::Domain(format!("{x:?} is not in the model group")))?;
        let coef = field.pow(lambda, k);
        let n = self.p as usize;
        let mut mat = crate::linalg::zeros(field, n, n);
        for j in 0..n {
            mat[self.act_on_index(x, j as u64) as usize][j] = coef.clone();
        }
        Ok(mat)
    }
}

/// The three families of relations among `g_i` and `γ`.
pub fn verify_gamma_relations(gm: &AffineGroupModel) -> bool {
    let p = gm.p;
    let gamma = gm.gamma();
    let gi = |i: u64| gm.g(i);
    for x in 0..p {
        for y in 0..p {
            let lhs = gm.mul(gi(x), gm.inv(gi(y)));
            for z in 0..p {
                if lhs != gm.mul(gi(x + z), gm.inv(gi(y + z))) {
                    return false;
                }
            }
        }
    }
    for k in 0..2 * p {
        if gm.mul(gi(0), gm.inv(gi(k))) != gm.pow(gamma, k) {
            return false;
        }
    }
    (0..p).all(|x| gm.mul(gi(x), gamma) == gm.mul(gm.pow(gamma, gm.alpha), gi(x)))
}

fn closure(gm: &AffineGroupModel, gens: &[GroupElem]) -> Vec<GroupElem> {
    let mut set: BTreeSet<GroupElem> = BTreeSet::from([gm.identity()]);
    let mut frontier = vec![gm.identity()];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = gm.mul(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Commutator subgroup, as a sorted element list.
pub fn derived_subgroup(gm: &AffineGroupModel) -> Vec<GroupElem> {
    let els = gm.elements();
    let comms: BTreeSet<GroupElem> =
        els.iter().flat_map(|&x| els.iter().map(move |&y| (x, y))).map(|(x, y)| gm.commutator(x, y)).collect();
    closure(gm, &comms.into_iter().collect::<Vec<_>>())
}

pub fn conjugacy_class(gm: &AffineGroupModel, x: GroupElem) -> Vec<GroupElem> {
    let set: BTreeSet<GroupElem> = gm.elements().into_iter().map(|g| gm.conj(g, x)).collect();
    set.into_iter().collect()
}

/// `|(g_0^r)^G|`.
pub fn power_class_size(gm: &AffineGroupModel, r: u64) -> usize {
    conjugacy_class(gm, gm.pow(gm.g(0), r)).len()
}

/// Every product of `n` class elements is an ordered monomial
/// `x_1^{n_1}⋯x_k^{n_k} z^l` with `x_1 < ⋯ < x_k < z = g_{p-1}` and
/// `1 ≤ n_i ≤ m-1`; checked for all `n ≤ max_n`.
pub fn verify_ordered_monomials(gm: &AffineGroupModel, max_n: usize) -> bool {
    let p = gm.p;
    let z = p - 1;
    for n in 0..=max_n {
        let mut ordered: BTreeSet<GroupElem> = BTreeSet::new();
        ordered_products(gm, 0, z, n, gm.identity(), &mut ordered);
        let mut words: BTreeSet<GroupElem> = BTreeSet::from([gm.identity()]);
        for _ in 0..n {
            words = words.iter().flat_map(|&w| (0..p).map(move |i| (w, i))).map(|(w, i)| gm.mul(w, gm.g(i))).collect();
        }
        if !words.is_subset(&ordered) {
            return false;
        }
    }
    true
}

fn ordered_products(
    gm: &AffineGroupModel,
    next: u64,
    z: u64,
    remaining: usize,
    acc: GroupElem,
    out: &mut BTreeSet<GroupElem>,
) {
    // close with z^remaining
    out.insert(gm.mul(acc, gm.pow(gm.g(z), remaining as u64)));
    for x in next..z {
        let mut cur = acc;
        for e in 1..gm.m.min(remaining as u64 + 1) {
            cur = gm.mul(cur, gm.g(x));
            ordered_products(gm, x + 1, z, remaining - e as usize, cur, out);
        }
    }
}

/// `G = [G,G]⟨z⟩` for `z = g_0`.
pub fn verify_commutator_cosets(gm: &AffineGroupModel) -> bool {
    let derived = derived_subgroup(gm);
    let z_powers = closure(gm, &[gm.g(0)]);
    let prod: BTreeSet<GroupElem> =
        derived.iter().flat_map(|&d| z_powers.iter().map(move |&zk| (d, zk))).map(|(d, zk)| gm.mul(d, zk)).collect();
    prod.len() as u64 == gm.order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: u64, a: u64) -> AffineGroupModel {
        model_from_rack(AffineRackSpec::new(p, a).unwrap())
    }

    #[test]
    fn orders_and_gamma() {
        let gm = model(3, 2);
        assert_eq!(gm.elements().len(), 6);
        assert_eq!(gm.gamma(), GroupElem { a: 2, s: 1 });
        assert_eq!(gm.pow(gm.gamma(), 3), gm.identity());
        assert_ne!(gm.pow(gm.gamma(), 1), gm.identity());
        assert_eq!(model(5, 2).elements().len(), 20);
        assert_eq!(model(7, 3).elements().len(), 42);
    }

    #[test]
    fn gamma_relations() {
        for (p, a) in [(3, 2), (5, 3), (7, 5), (7, 2), (11, 3)] {
            assert!(verify_gamma_relations(&model(p, a)));
        }
    }

    #[test]
    fn derived_subgroups() {
        let d = derived_subgroup(&model(3, 2));
        let expected: Vec<GroupElem> = (0..3).map(|a| GroupElem { a, s: 1 }).collect();
        assert_eq!(d, expected);
        for (p, a) in [(5, 2), (7, 3)] {
            let gm = model(p, a);
            let d = derived_subgroup(&gm);
            assert_eq!(d.len() as u64, p);
            assert_eq!(d, closure(&gm, &[gm.gamma()]));
        }
    }

    #[test]
    fn power_classes() {
        assert_eq!(power_class_size(&model(5, 2), 3), 5);
        assert_eq!(power_class_size(&model(3, 2), 1), 3);
        // g_0^2 = (0, 4) and conjugates are (b(1-4), 4): again p of them
        assert_eq!(power_class_size(&model(5, 2), 2), 5);
        // g_0^m is the identity
        assert_eq!(power_class_size(&model(5, 2), 4), 1);
    }

    #[test]
    fn class_is_affine_and_lemmas() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 2..p {
                let gm = model(p, a);
                assert!(gm.class_is_affine());
                assert!(verify_commutator_cosets(&gm));
            }
        }
        for p in [3u64, 5, 7] {
            for a in 2..p {
                assert!(verify_ordered_monomials(&model(p, a), 4), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn action_is_a_representation_when_compatible() {
        let f = Field::prime(5).unwrap();
        let gm = model(5, 2);
        let lambda = f.from_int(-1);
        assert!(gm.lambda_compatible(&f, &lambda));
        let els = gm.elements();
        for &x in &els {
            for &y in &els {
                let lhs = gm.action_matrix(&f, &lambda, gm.mul(x, y)).unwrap();
                let rhs = crate::linalg::mat_mul(
                    &f,
                    &gm.action_matrix(&f, &lambda, x).unwrap(),
                    &gm.action_matrix(&f, &lambda, y).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
        }
        assert!(!model(7, 2).lambda_compatible(&Field::prime(7).unwrap(), &Field::prime(7).unwrap().from_int(-1)));
    }
}
