//! Exact fields chosen at runtime: ℚ, cyclotomic fields ℚ(ζ_N) stored modulo
//! Φ_N, and finite fields 𝔽_p[x]/(f) for an explicit irreducible `f`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::fppoly;
use super::intpoly::{cyclotomic_poly, IntPoly};
use super::modp;
use super::rat::Rat;
use super::ArithError;

/// Declarative description of a field, with the CLI grammar
/// `QQ`, `cyclo:N`, `gf:p:c0,c1,...` (monic minimal polynomial, ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Rationals,
    Cyclotomic { n: u64 },
    Finite { p: u64, minpoly: Vec<u64> },
}

impl FieldSpec {
    pub fn prime(p: u64) -> FieldSpec {
        FieldSpec::Finite { p, minpoly: vec![0, 1] }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Cyclotomic { n } => write!(f, "cyclo:{n}"),
            FieldSpec::Finite { p, minpoly } => {
                let cs: Vec<String> = minpoly.iter().map(|c| c.to_string()).collect();
                write!(f, "gf:{p}:{}", cs.join(","))
            }
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| ArithError::Parse(format!("field spec {s:?}: {why}"));
        let s = s.trim();
        if s == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["cyclo", n] => {
                let n: u64 = n.parse().map_err(|_| bad("N is not an integer"))?;
                Ok(FieldSpec::Cyclotomic { n })
            }
            ["gf", p] => {
                let p: u64 = p.parse().map_err(|_| bad("p is not an integer"))?;
                Ok(FieldSpec::prime(p))
            }
            ["gf", p, coeffs] => {
                let p: u64 = p.parse().map_err(|_| bad("p is not an integer"))?;
                let minpoly = coeffs
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad("bad coefficient"))?;
                if p < 2 {
                    return Err(bad("p must be prime"));
                }
                Ok(FieldSpec::Finite { p, minpoly: fppoly::from_i64s(&minpoly, p) })
            }
            _ => Err(bad("expected QQ, cyclo:N, gf:p or gf:p:coeffs")),
        }
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = ArithError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

/// Element of a [`Field`]. The representation is canonical, so derived
/// equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rat),
    /// Coefficients of `1, ζ, ..., ζ^(φ(N)-1)`.
    Cyclotomic(Vec<Rat>),
    /// Coefficients of `1, x, ..., x^(d-1)` in `𝔽_p[x]/(f)`.
    Finite(SmallVec<[u64; 4]>),
}

#[derive(Debug)]
enum Kind {
    Rationals,
    Cyclotomic { n: u64, phi: Vec<Rat> },
    Finite { p: u64, modulus: Vec<u64>, order: BigUint },
}

/// A validated field with its arithmetic. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    kind: Arc<Kind>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field, ArithError> {
        let kind = match &spec {
            FieldSpec::Rationals => Kind::Rationals,
            FieldSpec::Cyclotomic { n } => {
                if *n == 0 {
                    return Err(ArithError::Domain("cyclotomic field needs N >= 1".into()));
                }
                let phi = cyclotomic_poly(*n)?;
                Kind::Cyclotomic { n: *n, phi: phi.coeffs().iter().map(Rat::from_bigint).collect() }
            }
            FieldSpec::Finite { p, minpoly } => {
                if !modp::is_prime(*p) {
                    return Err(ArithError::Domain(format!("{p} is not prime")));
                }
                if minpoly.last() != Some(&1) {
                    return Err(ArithError::Domain("minimal polynomial must be monic".into()));
                }
                if !fppoly::is_irreducible(minpoly, *p) {
                    return Err(ArithError::Domain(format!("minimal polynomial {minpoly:?} is reducible over F_{p}")));
                }
                let d = minpoly.len() as u32 - 1;
                Kind::Finite { p: *p, modulus: minpoly.clone(), order: BigUint::from(*p).pow(d) }
            }
        };
        Ok(Field { spec, kind: Arc::new(kind) })
    }

    pub fn rationals() -> Field {
        Field::new(FieldSpec::Rationals).expect("QQ is valid")
    }

    pub fn cyclotomic(n: u64) -> Result<Field, ArithError> {
        Field::new(FieldSpec::Cyclotomic { n })
    }

    pub fn prime(p: u64) -> Result<Field, ArithError> {
        Field::new(FieldSpec::prime(p))
    }

    pub fn parse(s: &str) -> Result<Field, ArithError> {
        Field::new(s.parse()?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match &*self.kind {
            Kind::Finite { p, .. } => *p,
            _ => 0,
        }
    }

    /// Dimension over the prime field.
    pub fn degree(&self) -> usize {
        match &*self.kind {
            Kind::Rationals => 1,
            Kind::Cyclotomic { phi, .. } => phi.len() - 1,
            Kind::Finite { modulus, .. } => modulus.len() - 1,
        }
    }

    /// Number of elements, for finite fields.
    pub fn size(&self) -> Option<BigUint> {
        match &*self.kind {
            Kind::Finite { order, .. } => Some(order.clone()),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.kind {
            Kind::Rationals => Scalar::Rational(Rat::zero()),
            Kind::Cyclotomic { phi, .. } => Scalar::Cyclotomic(vec![Rat::zero(); phi.len() - 1]),
            Kind::Finite { modulus, .. } => Scalar::Finite(SmallVec::from_elem(0, modulus.len() - 1)),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Scalar {
        self.from_rat(&Rat::from_int(v)).expect("integers embed in every field")
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        self.from_rat(&Rat::from_bigint(v)).expect("integers embed in every field")
    }

    /// Image of a rational number; fails in characteristic p when p divides
    /// the denominator.
    pub fn from_rat(&self, v: &Rat) -> Result<Scalar, ArithError> {
        Ok(match &*self.kind {
            Kind::Rationals => Scalar::Rational(v.clone()),
            Kind::Cyclotomic { phi, .. } => {
                let mut c = vec![Rat::zero(); phi.len() - 1];
                c[0] = v.clone();
                Scalar::Cyclotomic(c)
            }
            Kind::Finite { p, modulus, .. } => {
                let r = v.mod_p(*p).ok_or_else(|| ArithError::Domain(format!("{v} has no image mod {p}")))?;
                let mut c: SmallVec<[u64; 4]> = SmallVec::from_elem(0, modulus.len() - 1);
                c[0] = r;
                Scalar::Finite(c)
            }
        })
    }

    /// The distinguished generator: ζ_N for cyclotomic fields, the class of
    /// `x` for finite fields, and 1 for ℚ.
    pub fn generator(&self) -> Scalar {
        match &*self.kind {
            Kind::Rationals => self.one(),
            Kind::Cyclotomic { .. } => self.from_coeff_poly_rat(&[Rat::zero(), Rat::one()]),
            Kind::Finite { .. } => self.from_coeff_poly_u64(&[0, 1]),
        }
    }

    /// Reduce a polynomial in the generator (cyclotomic case).
    pub fn from_coeff_poly_rat(&self, coeffs: &[Rat]) -> Scalar {
        match &*self.kind {
            Kind::Cyclotomic { phi, .. } => Scalar::Cyclotomic(reduce_rat(coeffs.to_vec(), phi)),
            _ => {
                let g = self.generator();
                let mut acc = self.zero();
                for c in coeffs.iter().rev() {
                    acc = self.add(&self.mul(&acc, &g), &self.from_rat(c).expect("coefficient embeds"));
                }
                acc
            }
        }
    }

    /// Reduce a polynomial over 𝔽_p in the generator (finite case).
    pub fn from_coeff_poly_u64(&self, coeffs: &[u64]) -> Scalar {
        match &*self.kind {
            Kind::Finite { p, modulus, .. } => {
                let r = fppoly::rem(&fppoly::trim(coeffs.iter().map(|c| c % p).collect()), modulus, *p);
                Scalar::Finite(pad(r, modulus.len() - 1))
            }
            _ => panic!("from_coeff_poly_u64 on a characteristic-zero field"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Cyclotomic(c) => c.iter().all(Rat::is_zero),
            Scalar::Finite(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, &*self.kind) {
            (Scalar::Rational(x), Scalar::Rational(y), _) => Scalar::Rational(x.add(y)),
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y), _) => {
                Scalar::Cyclotomic(x.iter().zip(y).map(|(u, v)| u.add(v)).collect())
            }
            (Scalar::Finite(x), Scalar::Finite(y), Kind::Finite { p, .. }) => {
                Scalar::Finite(x.iter().zip(y).map(|(&u, &v)| modp::add(u, v, *p)).collect())
            }
            _ => panic!("scalar does not belong to field {}", self.spec),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (a, &*self.kind) {
            (Scalar::Rational(x), _) => Scalar::Rational(x.neg()),
            (Scalar::Cyclotomic(x), _) => Scalar::Cyclotomic(x.iter().map(Rat::neg).collect()),
            (Scalar::Finite(x), Kind::Finite { p, .. }) => Scalar::Finite(x.iter().map(|&u| modp::neg(u, *p)).collect()),
            _ => panic!("scalar does not belong to field {}", self.spec),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, &*self.kind) {
            (Scalar::Rational(x), Scalar::Rational(y), _) => Scalar::Rational(x.sub(y)),
            (Scalar::Finite(x), Scalar::Finite(y), Kind::Finite { p, .. }) => {
                Scalar::Finite(x.iter().zip(y).map(|(&u, &v)| modp::sub(u, v, *p)).collect())
            }
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, &*self.kind) {
            (Scalar::Rational(x), Scalar::Rational(y), _) => Scalar::Rational(x.mul(y)),
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y), Kind::Cyclotomic { phi, .. }) => {
                let mut prod = vec![Rat::zero(); x.len() + y.len() - 1];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if !v.is_zero() {
                            prod[i + j] = prod[i + j].add(&u.mul(v));
                        }
                    }
                }
                Scalar::Cyclotomic(reduce_rat(prod, phi))
            }
            (Scalar::Finite(x), Scalar::Finite(y), Kind::Finite { p, modulus, .. }) => {
                if x.len() == 1 {
                    let mut out = x.clone();
                    out[0] = modp::mul(x[0], y[0], *p);
                    return Scalar::Finite(out);
                }
                let prod = fppoly::mul(&fppoly::trim(x.to_vec()), &fppoly::trim(y.to_vec()), *p);
                Scalar::Finite(pad(fppoly::rem(&prod, modulus, *p), modulus.len() - 1))
            }
            _ => panic!("scalar does not belong to field {}", self.spec),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (a, &*self.kind) {
            (Scalar::Rational(x), _) => Scalar::Rational(x.inv()),
            (Scalar::Cyclotomic(x), Kind::Cyclotomic { .. }) => {
                let d = x.len();
                if d == 1 {
                    return Some(Scalar::Cyclotomic(vec![x[0].inv()]));
                }
                // Solve (a · y) = 1 with the multiplication-by-a matrix.
                let gen = self.generator();
                let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(d);
                let mut cur = a.clone();
                for _ in 0..d {
                    match &cur {
                        Scalar::Cyclotomic(c) => cols.push(c.clone()),
                        _ => unreachable!(),
                    }
                    cur = self.mul(&cur, &gen);
                }
                let mut rhs = vec![Rat::zero(); d];
                rhs[0] = Rat::one();
                Scalar::Cyclotomic(solve_rat(cols, rhs))
            }
            (Scalar::Finite(x), Kind::Finite { p, modulus, order }) => {
                if x.len() == 1 {
                    let mut out = x.clone();
                    out[0] = modp::inv(x[0], *p);
                    return Some(Scalar::Finite(out));
                }
                let e = order - 2u32;
                let r = fppoly::powmod(&fppoly::trim(x.to_vec()), &e, modulus, *p);
                Scalar::Finite(pad(r, modulus.len() - 1))
            }
            _ => panic!("scalar does not belong to field {}", self.spec),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, a: &Scalar, e: i64) -> Option<Scalar> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs()))
        }
    }

    /// Horner evaluation of an integer polynomial.
    pub fn eval_poly(&self, pol: &IntPoly, x: &Scalar) -> Scalar {
        pol.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), &self.from_bigint(c)))
    }

    /// Least `k >= 1` with `x^k = 1`, or `None` when `x` has infinite order.
    pub fn scalar_order(&self, x: &Scalar) -> Result<Option<u64>, ArithError> {
        if self.is_zero(x) {
            return Err(ArithError::Domain("order of zero".into()));
        }
        let bound: u64 = match &*self.kind {
            Kind::Rationals => 2,
            Kind::Cyclotomic { n, .. } => num_integer::lcm(2, *n),
            Kind::Finite { order, .. } => {
                let q: u64 = order.try_into().map_err(|_| ArithError::Resource("field too large for order search".into()))?;
                q - 1
            }
        };
        for d in modp::divisors(bound) {
            if self.is_one(&self.pow(x, d)) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// All elements of a finite field, in lexicographic order of coefficient
    /// tuples (ascending). `None` for infinite fields.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match &*self.kind {
            Kind::Finite { p, modulus, order } => {
                let q: u64 = order.try_into().ok()?;
                let d = modulus.len() - 1;
                Some(
                    (0..q)
                        .map(|mut idx| {
                            let mut c: SmallVec<[u64; 4]> = SmallVec::from_elem(0, d);
                            for slot in c.iter_mut().rev() {
                                *slot = idx % p;
                                idx /= p;
                            }
                            Scalar::Finite(c)
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Coefficient strings for serialization.
    pub fn to_coeff_strings(&self, a: &Scalar) -> Vec<String> {
        match a {
            Scalar::Rational(r) => vec![r.to_string()],
            Scalar::Cyclotomic(c) => c.iter().map(|r| r.to_string()).collect(),
            Scalar::Finite(c) => c.iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn from_coeff_strings(&self, cs: &[String]) -> Result<Scalar, ArithError> {
        let bad = || ArithError::Parse(format!("scalar {cs:?} does not fit field {}", self.spec));
        if cs.len() != self.degree() {
            return Err(bad());
        }
        match &*self.kind {
            Kind::Rationals => Ok(Scalar::Rational(cs[0].parse().map_err(|_| bad())?)),
            Kind::Cyclotomic { .. } => Ok(Scalar::Cyclotomic(
                cs.iter().map(|s| s.parse::<Rat>().map_err(|_| bad())).collect::<Result<_, _>>()?,
            )),
            Kind::Finite { p, .. } => {
                let c: SmallVec<[u64; 4]> =
                    cs.iter().map(|s| s.parse::<u64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
                if c.iter().any(|x| x >= p) {
                    return Err(bad());
                }
                Ok(Scalar::Finite(c))
            }
        }
    }

    /// Parse a scalar literal: a rational `a/b`, or `[-][c*]z^k` meaning a
    /// multiple of a power of the generator (`z` alone is `z^1`).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, ArithError> {
        let s = s.trim();
        if let Ok(r) = s.parse::<Rat>() {
            return self.from_rat(&r);
        }
        let bad = || ArithError::Parse(format!("scalar literal {s:?}"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        let (coef, power) = match body.split_once('*') {
            Some((c, z)) => (c.trim().parse::<Rat>().map_err(|_| bad())?, z.trim()),
            None => (Rat::one(), body),
        };
        let k: i64 = match power {
            "z" => 1,
            _ => power.strip_prefix("z^").ok_or_else(bad)?.parse().map_err(|_| bad())?,
        };
        let g = self.powi(&self.generator(), k).ok_or_else(bad)?;
        let mut v = self.mul(&self.from_rat(&coef)?, &g);
        if neg {
            v = self.neg(&v);
        }
        Ok(v)
    }

    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(r) => r.to_string(),
            Scalar::Cyclotomic(c) if c.len() == 1 => c[0].to_string(),
            Scalar::Finite(c) if c.len() == 1 => c[0].to_string(),
            _ => {
                let cs = self.to_coeff_strings(a);
                let terms: Vec<String> = cs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.as_str() != "0")
                    .map(|(k, c)| match k {
                        0 => c.clone(),
                        1 => format!("{c}*z"),
                        _ => format!("{c}*z^{k}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }
}

fn pad(mut v: Vec<u64>, len: usize) -> SmallVec<[u64; 4]> {
    v.resize(len, 0);
    SmallVec::from_vec(v)
}

/// Reduce modulo a monic polynomial with rational coefficients.
fn reduce_rat(mut c: Vec<Rat>, modulus: &[Rat]) -> Vec<Rat> {
    let d = modulus.len() - 1;
    if c.len() > d {
        for i in (d..c.len()).rev() {
            let lead = c[i].clone();
            if lead.is_zero() {
                continue;
            }
            for (j, m) in modulus.iter().enumerate().take(d) {
                if !m.is_zero() {
                    c[i - d + j] = c[i - d + j].sub(&lead.mul(m));
                }
            }
            c[i] = Rat::zero();
        }
    }
    c.resize(d, Rat::zero());
    c
}

/// Solve a nonsingular square system given by its columns.
fn solve_rat(cols: Vec<Vec<Rat>>, rhs: Vec<Rat>) -> Vec<Rat> {
    let n = rhs.len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("singular system");
        m.swap(col, piv);
        let inv = m[col][col].inv();
        for x in m[col].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let v = m[col][k].mul(&f);
                    m[r][k] = m[r][k].sub(&v);
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_grammar_round_trips() {
        for s in ["QQ", "cyclo:12", "gf:5:2,0,1"] {
            let f: FieldSpec = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("cyclo:x".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert!(Field::parse("gf:4:0,1").is_err());
        assert!(Field::parse("gf:5:1,0,1").is_err());
        assert!(Field::parse("cyclo:0").is_err());
    }

    #[test]
    fn cyclotomic_generator_has_order_n() {
        let f = Field::cyclotomic(6).unwrap();
        let z = f.generator();
        assert_eq!(f.scalar_order(&z).unwrap(), Some(6));
        assert!(f.is_zero(&f.eval_poly(&cyclotomic_poly(6).unwrap(), &z)));
    }

    #[test]
    fn orders() {
        let q = Field::rationals();
        assert_eq!(q.scalar_order(&q.from_int(-1)).unwrap(), Some(2));
        assert_eq!(q.scalar_order(&q.from_int(2)).unwrap(), None);
        assert!(q.scalar_order(&q.zero()).is_err());
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.scalar_order(&f5.from_int(2)).unwrap(), Some(4));
        // in ℚ(ζ_3) the element -ζ has order 6
        let c3 = Field::cyclotomic(3).unwrap();
        let x = c3.neg(&c3.generator());
        assert_eq!(c3.scalar_order(&x).unwrap(), Some(6));
    }

    #[test]
    fn extension_field_inverse() {
        let f = Field::parse("gf:2:1,1,1").unwrap();
        let x = f.generator();
        let xi = f.inv(&x).unwrap();
        assert!(f.is_one(&f.mul(&x, &xi)));
        assert_eq!(f.scalar_order(&x).unwrap(), Some(3));
        assert_eq!(f.elements().unwrap().len(), 4);
    }

    #[test]
    fn scalar_literals() {
        let f = Field::cyclotomic(4).unwrap();
        let i = f.parse_scalar("z").unwrap();
        assert_eq!(f.mul(&i, &i), f.from_int(-1));
        assert_eq!(f.parse_scalar("-z^2").unwrap(), f.one());
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_rat(&Rat::new(1, 2)).unwrap());
        assert_eq!(f.parse_scalar("3*z^-1").unwrap(), f.mul(&f.from_int(3), &f.inv(&i).unwrap()));
        assert!(f.parse_scalar("w").is_err());
        let g = Field::prime(3).unwrap();
        assert!(g.parse_scalar("1/3").is_err());
    }

    #[test]
    fn coeff_strings_round_trip() {
        let f = Field::cyclotomic(5).unwrap();
        let a = f.parse_scalar("2*z^3").unwrap();
        let s = f.to_coeff_strings(&a);
        assert_eq!(f.from_coeff_strings(&s).unwrap(), a);
        assert!(f.from_coeff_strings(&["1".into()]).is_err());
    }
}
