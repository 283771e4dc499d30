//! Closed-form ball sizes, reversible counts, reconstruction numbers and
//! sphere-packing bounds, all in exact integer arithmetic.
//!
//! | quantity            | TDRL                                  | MTDRL                        |
//! |---------------------|---------------------------------------|------------------------------|
//! | out/in ball         | `2^n - n`                             | `2^(n-1)`                    |
//! | out/in ball, width k| `(n-k+2)(2^(k-1)-1) - k + 2`          | `(n-k+1)(2^(k-1)-1) + 1`     |
//! | reversible          | `1 + C(n,2) + C(n,3)`                 | `n`                          |
//! | reversible, width k | `(n-k+1)C(k,2) + C(k,3) + 1`          | `(n-k+1)(k-1) + 1`           |
//! | max intersection    | `2^(n-1)`                             | `2^(n-1)`                    |
//!
//! The unbounded rows are the width-`n` rows evaluated at `k = n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighborhood::{ball_in, ball_out, max_intersection, reversible_set, Limits};
use crate::perm::{OpKind, Permutation};

/// Largest `n` accepted by the closed forms.
pub const MAX_FORMULA_N: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Out-ball size.
    Sout,
    /// In-ball size.
    Sin,
    /// Size of out-ball ∩ in-ball.
    Srev,
    /// Largest intersection of two distinct out-balls.
    Nmax,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Sout, Measure::Sin, Measure::Srev, Measure::Nmax];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Sout => "sout",
            Measure::Sin => "sin",
            Measure::Srev => "srev",
            Measure::Nmax => "nmax",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "").as_str() {
            "sout" => Ok(Measure::Sout),
            "sin" => Ok(Measure::Sin),
            "srev" => Ok(Measure::Srev),
            "nmax" => Ok(Measure::Nmax),
            _ => Err(Error::Parse(format!("unknown quantity {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quantity {
    pub measure: Measure,
    pub kind: OpKind,
}

impl Quantity {
    pub fn new(measure: Measure, kind: OpKind) -> Self {
        Quantity { measure, kind }
    }
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn to_unsigned(v: BigInt) -> BigUint {
    v.to_biguint().expect("closed forms are non-negative")
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("n must be at least {min}, got {n}")));
    }
    if n > MAX_FORMULA_N {
        return Err(Error::InvalidArgument(format!(
            "n must be at most {MAX_FORMULA_N}, got {n}"
        )));
    }
    Ok(())
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidWidth { k, n });
    }
    Ok(())
}

/// Exact value of `q` at `n`, with window width `k` (`None` for the
/// unbounded model).
pub fn closed_form(q: Quantity, n: usize, k: Option<usize>) -> Result<BigUint> {
    if q.measure == Measure::Nmax {
        check_n(n, 2)?;
        if k.is_some() {
            return Err(Error::Unsupported(
                "the maximum intersection is only defined for the unbounded model".into(),
            ));
        }
        return Ok(to_unsigned(pow2(n - 1)));
    }
    check_n(n, 1)?;
    let k = k.unwrap_or(n);
    check_k(n, k)?;
    let windows = BigInt::from(n - k + 1);
    let value = match (q.measure, q.kind) {
        (Measure::Sout | Measure::Sin, OpKind::Tdrl) => {
            (&windows + 1) * (pow2(k - 1) - 1) - BigInt::from(k) + 2
        }
        (Measure::Sout | Measure::Sin, OpKind::Mtdrl) => windows * (pow2(k - 1) - 1) + 1,
        (Measure::Srev, OpKind::Tdrl) => windows * binomial(k, 2) + binomial(k, 3) + 1,
        (Measure::Srev, OpKind::Mtdrl) => windows * BigInt::from(k - 1) + 1,
        (Measure::Nmax, _) => unreachable!(),
    };
    Ok(to_unsigned(value))
}

/// `floor(n! / S_out(n; k))`, the sphere-packing bound on a code correcting
/// one windowed operation of width `k`.
pub fn sphere_packing_bound(n: usize, k: usize, kind: OpKind) -> Result<BigUint> {
    check_n(n, 2)?;
    if k < 2 || k > n {
        return Err(Error::InvalidWidth { k, n });
    }
    let ball = closed_form(Quantity::new(Measure::Sout, kind), n, Some(k))?;
    Ok(factorial(n) / ball)
}

/// `S_rev(n) / S_out(n)` as a reduced fraction.
pub fn reversible_fraction(n: usize, kind: OpKind) -> Result<BigRational> {
    let rev = closed_form(Quantity::new(Measure::Srev, kind), n, None)?;
    let out = closed_form(Quantity::new(Measure::Sout, kind), n, None)?;
    Ok(BigRational::new(rev.into(), out.into()))
}

/// The same quantity obtained by enumeration around `id(n)`.
pub fn enumerated_value(q: Quantity, n: usize, k: Option<usize>, limits: &Limits) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let id = Permutation::identity(n);
    let size = match q.measure {
        Measure::Sout => ball_out(&id, q.kind, k, limits)?.len(),
        Measure::Sin => ball_in(&id, q.kind, k, limits)?.len(),
        Measure::Srev => reversible_set(&id, q.kind, k, limits)?.len(),
        Measure::Nmax => {
            if k.is_some() {
                return Err(Error::Unsupported(
                    "the maximum intersection is only defined for the unbounded model".into(),
                ));
            }
            max_intersection(n, q.kind, limits)?.value
        }
    };
    Ok(BigUint::from(size))
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid decimal {s:?}")))
    }

    pub mod option {
        use num_bigint::BigUint;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_str(&v.to_str_radix(10)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| {
                    BigUint::parse_bytes(s.as_bytes(), 10)
                        .ok_or_else(|| serde::de::Error::custom(format!("invalid decimal {s:?}")))
                })
                .transpose()
        }
    }
}

pub(crate) use decimal::serialize as serialize_decimal;

/// One formula-versus-enumeration record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub quantity: Measure,
    pub kind: OpKind,
    pub n: usize,
    /// Window width; `None` is the unbounded model.
    pub k: Option<usize>,
    #[serde(with = "decimal")]
    pub formula_value: BigUint,
    #[serde(with = "decimal::option")]
    pub enumerated_value: Option<BigUint>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

impl CountReport {
    pub const CSV_HEADER: &'static str = "quantity,kind,n,k,formula_value,enumerated_value,match";

    pub fn formula(q: Quantity, n: usize, k: Option<usize>) -> Result<Self> {
        Ok(CountReport {
            quantity: q.measure,
            kind: q.kind,
            n,
            k,
            formula_value: closed_form(q, n, k)?,
            enumerated_value: None,
            matches: None,
        })
    }

    pub fn enumerated(q: Quantity, n: usize, k: Option<usize>, limits: &Limits) -> Result<Self> {
        let formula_value = closed_form(q, n, k)?;
        let enumerated = enumerated_value(q, n, k, limits)?;
        Ok(CountReport {
            quantity: q.measure,
            kind: q.kind,
            n,
            k,
            matches: Some(formula_value == enumerated),
            formula_value,
            enumerated_value: Some(enumerated),
        })
    }

    pub fn passed(&self) -> bool {
        self.matches != Some(false)
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.quantity,
            self.kind,
            self.n,
            opt(self.k.map(|k| k.to_string())),
            self.formula_value,
            opt(self.enumerated_value.as_ref().map(|v| v.to_string())),
            opt(self.matches.map(|m| m.to_string())),
        )
    }
}
