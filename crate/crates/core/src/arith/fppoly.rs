//! Dense univariate polynomials over 𝔽_p and their factorization.
//!
//! Coefficients are ascending and trimmed (no trailing zeros); the zero
//! polynomial is the empty vector. Factorization runs square-free reduction,
//! distinct-degree splitting, then Cantor–Zassenhaus equal-degree splitting
//! with a fixed seed so the output order is reproducible.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::modp;

pub type FpPoly = Vec<u64>;

const EDF_SEED: u64 = 0x5eed_0f_c2a7;

pub fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn from_i64s(coeffs: &[i64], p: u64) -> FpPoly {
    trim(coeffs.iter().map(|&c| modp::from_i64(c, p)).collect())
}

pub fn degree(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| modp::add(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| modp::sub(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = modp::add(out[i + j], modp::mul(a, b, p), p);
        }
    }
    trim(out)
}

pub fn scale(f: &[u64], c: u64, p: u64) -> FpPoly {
    trim(f.iter().map(|&a| modp::mul(a, c, p)).collect())
}

/// Quotient and remainder; panics if `g` is zero.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let dg = degree(g).expect("division by zero polynomial");
    let lead_inv = modp::inv(g[dg], p);
    let mut r = f.to_vec();
    if r.len() <= dg {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - dg];
    for i in (dg..r.len()).rev() {
        let c = modp::mul(r[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        q[i - dg] = c;
        for (j, &gj) in g.iter().enumerate() {
            let idx = i - dg + j;
            r[idx] = modp::sub(r[idx], modp::mul(c, gj, p), p);
        }
    }
    r.truncate(dg);
    (trim(q), trim(r))
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    divrem(f, g, p).1
}

pub fn monic(f: &[u64], p: u64) -> FpPoly {
    match f.last() {
        None => Vec::new(),
        Some(&lc) => scale(f, modp::inv(lc, p), p),
    }
}

pub fn gcd(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(f: &[u64], p: u64) -> FpPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| modp::mul(c, (i as u64) % p, p))
            .collect(),
    )
}

pub fn mulmod(f: &[u64], g: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(f, g, p), m, p)
}

pub fn powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        acc = mulmod(&acc, &acc, m, p);
        if exp.bit(i) {
            acc = mulmod(&acc, &b, m, p);
        }
    }
    acc
}

/// Product of the distinct monic irreducible factors of `f`.
pub fn radical(f: &[u64], p: u64) -> FpPoly {
    let f = monic(f, p);
    if f.len() <= 1 {
        return f;
    }
    let df = derivative(&f, p);
    if df.is_empty() {
        // f(x) = h(x^p) = h(x)^p over 𝔽_p
        let h: FpPoly = f.iter().step_by(p as usize).copied().collect();
        return radical(&h, p);
    }
    let g = gcd(&f, &df, p);
    let w = divrem(&f, &g, p).0;
    if g.len() <= 1 {
        return w;
    }
    let r = radical(&g, p);
    let common = gcd(&w, &r, p);
    monic(&divrem(&mul(&w, &r, p), &common, p).0, p)
}

/// Distinct-degree split of a square-free monic polynomial: pairs
/// `(d, product of all irreducible factors of degree d)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, FpPoly)> {
    let mut out = Vec::new();
    let mut rest = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let pb = BigUint::from(p);
    let mut d = 0usize;
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod(&h, &pb, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((d, g.clone()));
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    if degree(&rest).unwrap_or(0) >= 1 {
        out.push((rest.len() - 1, rest));
    }
    out
}

/// Split a square-free monic product of irreducibles of common degree `d`.
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = degree(f).unwrap_or(0);
    if n == d {
        return vec![monic(f, p)];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() <= 1 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            sub(&powmod(&a, &exp, f, p), &[1], p)
        };
        let g = gcd(f, &candidate, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// Distinct monic irreducible factors, sorted by degree then lexicographically
/// on ascending coefficient tuples.
pub fn irreducible_factors(f: &[u64], p: u64) -> Vec<FpPoly> {
    let rad = radical(f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    let mut out = Vec::new();
    for (d, g) in distinct_degree(&rad, p) {
        out.extend(equal_degree(&g, d, p, &mut rng));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    if degree(&f).unwrap_or(0) == 0 {
        return false;
    }
    let m = monic(&f, p);
    radical(&m, p) == m && irreducible_factors(&m, p).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let p = 7;
        let f = vec![3, 0, 5, 1, 2];
        let g = vec![1, 4, 1];
        let (q, r) = divrem(&f, &g, p);
        assert_eq!(add(&mul(&q, &g, p), &r, p), f);
        assert!(r.len() < g.len());
    }

    #[test]
    fn factor_x4_minus_1_mod_5() {
        // x^4 - 1 splits into linear factors over 𝔽_5
        let f = from_i64s(&[-1, 0, 0, 0, 1], 5);
        let fs = irreducible_factors(&f, 5);
        assert_eq!(fs, vec![vec![1, 1], vec![2, 1], vec![3, 1], vec![4, 1]]);
    }

    #[test]
    fn radical_of_power() {
        // (x+1)^3 over 𝔽_3 is x^3 + 1
        let f = vec![1, 0, 0, 1];
        assert_eq!(radical(&f, 3), vec![1, 1]);
        // (x+1)^2 (x+2) over 𝔽_5
        let f = mul(&mul(&[1, 1], &[1, 1], 5), &[2, 1], 5);
        assert_eq!(radical(&f, 5), mul(&[1, 1], &[2, 1], 5));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[2, 0, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
    }

    #[test]
    fn char_two_equal_degree() {
        // x^15 - 1 over 𝔽_2: Φ_15 splits into two quartics
        let f = from_i64s(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1], 2);
        let fs = irreducible_factors(&f, 2);
        let degs: Vec<usize> = fs.iter().map(|g| g.len() - 1).collect();
        assert_eq!(degs, vec![1, 2, 4, 4, 4]);
        let prod = fs.iter().fold(vec![1], |acc, g| mul(&acc, g, 2));
        assert_eq!(prod, f);
    }
}
