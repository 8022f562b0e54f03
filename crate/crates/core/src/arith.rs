//! Exact arithmetic: binomials, factorials and reduced rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest `n` covered by the precomputed tables.
pub const TABLE_MAX: usize = 20;

fn pascal() -> &'static [[u64; TABLE_MAX + 1]; TABLE_MAX + 1] {
    static TABLE: OnceLock<[[u64; TABLE_MAX + 1]; TABLE_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u64; TABLE_MAX + 1]; TABLE_MAX + 1];
        for n in 0..=TABLE_MAX {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

fn factorials() -> &'static [BigUint; TABLE_MAX + 1] {
    static TABLE: OnceLock<[BigUint; TABLE_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = BigUint::one();
        std::array::from_fn(|i| {
            if i > 0 {
                acc *= BigUint::from(i);
            }
            acc.clone()
        })
    })
}

/// `C(n, k)` for `0 <= n <= 20`; zero when `k` falls outside `0..=n`.
///
/// Panics if `n` is outside the table.
pub fn binomial(n: i64, k: i64) -> u64 {
    assert!(
        (0..=TABLE_MAX as i64).contains(&n),
        "binomial table covers 0..=20, got n={n}"
    );
    if k < 0 || k > n {
        return 0;
    }
    pascal()[n as usize][k as usize]
}

/// `n!` for `0 <= n <= 20`.
pub fn factorial(n: usize) -> BigUint {
    assert!(n <= TABLE_MAX, "factorial table covers 0..=20, got {n}");
    factorials()[n].clone()
}

/// `C(n, floor(n/2)) + C(n, floor(n/2) + 1)`.
pub fn two_largest_binomials(n: usize) -> u64 {
    let n = n as i64;
    binomial(n, n / 2) + binomial(n, n / 2 + 1)
}

/// Exact rational in lowest terms with a positive denominator.
///
/// Displays and serializes as `"p/q"`, always with an explicit denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rat {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    /// `1 / C(n, k)`; `k` must lie in `0..=n`.
    pub fn inverse_binomial(n: usize, k: usize) -> Rat {
        let c = binomial(n as i64, k as i64);
        assert!(c > 0, "C({n},{k}) is zero");
        Rat::new(1, c)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    /// Lossy conversion for human-facing summaries only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn parse(text: &str) -> Option<Rat> {
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text.trim(), "1"),
        };
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rat::new(p, q))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Rat::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::from_integer(v)
    }
}
