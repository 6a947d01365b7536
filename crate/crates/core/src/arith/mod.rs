//! Exact scalar arithmetic: rationals, cyclotomic and finite fields, integer
//! polynomials and Gaussian binomials.

pub mod field;
pub mod fppoly;
pub mod intpoly;
pub mod modp;
pub mod rat;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use field::{Field, FieldSpec, Scalar};
pub use intpoly::{cyclotomic_poly, gauss_binomial, IntPoly};
pub use rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource limit: {0}")]
    Resource(String),
}

/// A scalar described symbolically: either `ζ_N^e` for a primitive N-th root
/// of unity, or a value that is not a root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    RootOfUnity {
        #[serde(rename = "N")]
        n: u64,
        e: u64,
    },
    NonRoot {
        nonroot: bool,
    },
}

impl LambdaSpec {
    pub fn root(n: u64, e: u64) -> LambdaSpec {
        LambdaSpec::RootOfUnity { n, e }
    }

    pub fn minus_one() -> LambdaSpec {
        LambdaSpec::root(2, 1)
    }

    pub fn non_root() -> LambdaSpec {
        LambdaSpec::NonRoot { nonroot: true }
    }

    pub fn validate(&self) -> Result<(), ArithError> {
        match *self {
            LambdaSpec::RootOfUnity { n, .. } if n == 0 => Err(ArithError::Domain("root of unity of order 0".into())),
            LambdaSpec::RootOfUnity { n, e } if e >= n && n > 1 => {
                Err(ArithError::Domain(format!("exponent {e} not reduced modulo N = {n}")))
            }
            LambdaSpec::NonRoot { nonroot: false } => Err(ArithError::Domain("nonroot flag must be true".into())),
            _ => Ok(()),
        }
    }

    /// Exact multiplicative order, `None` for non-roots.
    pub fn order(&self) -> Option<u64> {
        match *self {
            LambdaSpec::RootOfUnity { n, e } => Some(n / num_integer::gcd(n, e % n.max(1)).max(1)),
            LambdaSpec::NonRoot { .. } => None,
        }
    }

    /// The value in a concrete field.
    ///
    /// In finite fields whose minimal polynomial divides Φ_N the generator is
    /// taken as the image of ζ_N, matching residue fields of ℤ[ζ_N];
    /// otherwise the smallest root of Φ_order (in coefficient order) is used.
    pub fn to_scalar(&self, field: &Field) -> Result<Scalar, ArithError> {
        self.validate()?;
        let (n, e) = match *self {
            LambdaSpec::RootOfUnity { n, e } => (n, e),
            LambdaSpec::NonRoot { .. } => {
                return Err(ArithError::Domain("a non-root-of-unity has no canonical value".into()))
            }
        };
        let o = self.order().unwrap();
        let g = n / o;
        let e_red = (e / g.max(1)) % o.max(1);
        if o == 1 {
            return Ok(field.one());
        }
        if o == 2 {
            return Ok(field.from_int(-1));
        }
        match field.spec().clone() {
            FieldSpec::Rationals => Err(ArithError::Domain(format!("QQ has no primitive {o}-th root of unity"))),
            FieldSpec::Cyclotomic { n: m } => {
                if m % o == 0 {
                    Ok(field.pow(&field.generator(), (m / o) * e_red))
                } else if m % 2 == 1 && (2 * m) % o == 0 {
                    let omega = field.neg(&field.pow(&field.generator(), m.div_ceil(2)));
                    Ok(field.pow(&omega, (2 * m / o) * e_red))
                } else {
                    Err(ArithError::Domain(format!("cyclo:{m} has no primitive {o}-th root of unity")))
                }
            }
            FieldSpec::Finite { p, minpoly } => {
                let phi_n = cyclotomic_poly(n)?;
                let phi_mod: Vec<u64> = fppoly::trim(
                    phi_n.coeffs().iter().map(|c| Rat::from_bigint(c).mod_p(p).unwrap()).collect(),
                );
                if fppoly::rem(&phi_mod, &minpoly, p).is_empty() {
                    return Ok(field.pow(&field.generator(), e));
                }
                let phi_o = cyclotomic_poly(o)?;
                let elems = field
                    .elements()
                    .ok_or_else(|| ArithError::Resource("field too large to search for roots".into()))?;
                let root = elems
                    .into_iter()
                    .find(|x| !field.is_zero(x) && field.is_zero(&field.eval_poly(&phi_o, x)))
                    .ok_or_else(|| ArithError::Domain(format!("{} has no root of Φ_{o}", field.spec())))?;
                Ok(field.pow(&root, e_red))
            }
        }
    }
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::RootOfUnity { n, e } => write!(f, "cyclo:{n}:{e}"),
            LambdaSpec::NonRoot { .. } => write!(f, "nonroot"),
        }
    }
}

impl FromStr for LambdaSpec {
    type Err = ArithError;

    /// `cyclo:N:e` or `nonroot`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "nonroot" {
            return Ok(LambdaSpec::non_root());
        }
        let bad = || ArithError::Parse(format!("lambda spec {s:?}; expected cyclo:N:e or nonroot"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["cyclo", n, e] => {
                let l = LambdaSpec::root(n.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?);
                l.validate()?;
                Ok(l)
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_orders() {
        assert_eq!(LambdaSpec::root(6, 1).order(), Some(6));
        assert_eq!(LambdaSpec::root(6, 3).order(), Some(2));
        assert_eq!(LambdaSpec::root(6, 0).order(), Some(1));
        assert_eq!(LambdaSpec::root(1, 0).order(), Some(1));
        assert_eq!(LambdaSpec::non_root().order(), None);
        assert!("cyclo:0:0".parse::<LambdaSpec>().is_err());
        assert!("cyclo:4:5".parse::<LambdaSpec>().is_err());
    }

    #[test]
    fn lambda_in_fields() {
        let q = Field::rationals();
        assert_eq!(LambdaSpec::root(2, 1).to_scalar(&q).unwrap(), q.from_int(-1));
        assert_eq!(LambdaSpec::root(4, 2).to_scalar(&q).unwrap(), q.from_int(-1));
        assert!(LambdaSpec::root(3, 1).to_scalar(&q).is_err());

        let c3 = Field::cyclotomic(3).unwrap();
        let l = LambdaSpec::root(6, 1).to_scalar(&c3).unwrap();
        assert_eq!(c3.scalar_order(&l).unwrap(), Some(6));

        let c12 = Field::cyclotomic(12).unwrap();
        let l = LambdaSpec::root(4, 1).to_scalar(&c12).unwrap();
        assert_eq!(c12.mul(&l, &l), c12.from_int(-1));

        let f7 = Field::prime(7).unwrap();
        let l = LambdaSpec::root(3, 1).to_scalar(&f7).unwrap();
        assert_eq!(f7.scalar_order(&l).unwrap(), Some(3));
        assert!(LambdaSpec::root(5, 1).to_scalar(&f7).is_err());
    }

    #[test]
    fn lambda_json_shape() {
        let s = serde_json::to_string(&LambdaSpec::root(6, 1)).unwrap();
        assert_eq!(s, r#"{"N":6,"e":1}"#);
        let back: LambdaSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, LambdaSpec::root(6, 1));
        let nr: LambdaSpec = serde_json::from_str(r#"{"nonroot":true}"#).unwrap();
        assert_eq!(nr, LambdaSpec::non_root());
    }
}
