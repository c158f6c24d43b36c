//! Exact scalars and the small amount of combinatorics built on them.
//!
//! Everything in this crate is computed over [`Rational`]; there is no floating
//! point anywhere on the verification paths.

mod poly;
mod span;

pub use poly::MultiPoly;
pub use span::EchelonBasis;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `num / den` as an exact rational.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `twice / 2`; shorthand for the half-integers that fill the weight code.
pub fn half(twice: i64) -> Rational {
    q(twice, 2)
}

/// `x` lies in `Z + 1/2`.
pub fn is_half_odd(x: &Rational) -> bool {
    let twice = x * qi(2);
    twice.is_integer() && !x.is_integer()
}

/// Canonical string form: `a/b`, or `a` when the denominator is one.
pub fn fmt_q(x: &Rational) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!`.
pub fn binom(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut top = x.clone();
    for i in 1..=k {
        acc = acc * &top / qi(i as i64);
        top -= Rational::one();
    }
    acc
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `sum_{k=0}^{n} (-1)^k C(n,k) q(k)` for a univariate polynomial `q`.
///
/// Vanishes whenever `deg q < n`.
pub fn alternating_binom_sum(poly: &MultiPoly, n: u64) -> Rational {
    assert_eq!(
        poly.nvars(),
        1,
        "alternating_binom_sum expects a univariate polynomial"
    );
    let n_q = qi(n as i64);
    (0..=n).fold(Rational::zero(), |acc, k| {
        let c = binom(&n_q, k);
        let term = c * poly.eval(&[qi(k as i64)]);
        if k % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Product `start (start + step) (start + 2 step) ... ` with `count` factors.
pub fn falling_product(start: &MultiPoly, count: u64, step: &Rational) -> MultiPoly {
    let mut acc = MultiPoly::one(start.nvars());
    let mut factor = start.clone();
    let shift = MultiPoly::constant(start.nvars(), step.clone());
    for _ in 0..count {
        acc = &acc * &factor;
        factor = &factor + &shift;
    }
    acc
}

/// Scalar version of [`falling_product`].
pub fn falling_product_scalar(start: &Rational, count: u64, step: &Rational) -> Rational {
    let mut acc = Rational::one();
    let mut x = start.clone();
    for _ in 0..count {
        acc *= &x;
        x += step;
    }
    acc
}

/// Serde adapters writing rationals as `"a/b"` strings.
pub mod serde_q {
    use super::{fmt_q, parse_q, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).ok_or_else(|| D::Error::custom(format!("not a rational: {raw:?}")))
    }

    pub mod vec {
        use super::super::{fmt_q, parse_q, Rational};
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| {
                    parse_q(s).ok_or_else(|| D::Error::custom(format!("not a rational: {s:?}")))
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_examples() {
        assert_eq!(binom(&qi(5), 2), qi(10));
        assert_eq!(binom(&q(7, 3), 0), qi(1));
        assert_eq!(binom(&q(-1, 2), 1), q(-1, 2));
        assert_eq!(binom(&qi(3), 5), qi(0));
    }

    #[test]
    fn alternating_sum_examples() {
        let k = MultiPoly::var(1, 0);
        assert_eq!(alternating_binom_sum(&k, 2), qi(0));
        assert_eq!(alternating_binom_sum(&MultiPoly::one(1), 1), qi(0));
        // 0 - 2*1 + 1*4
        assert_eq!(alternating_binom_sum(&(&k * &k), 2), qi(2));
    }

    #[test]
    fn falling_product_examples() {
        let three = MultiPoly::constant(1, qi(3));
        assert_eq!(
            falling_product(&three, 3, &qi(-1)),
            MultiPoly::constant(1, qi(6))
        );
        assert_eq!(falling_product(&three, 0, &qi(-1)), MultiPoly::one(1));
        assert_eq!(falling_product_scalar(&qi(3), 3, &qi(-1)), qi(6));

        // h1 - n + k at n = 2, k = 2
        let h1 = MultiPoly::var(2, 0);
        let start = &h1 + &MultiPoly::constant(2, qi(-2 + 2));
        let expected = &h1 * &(&h1 - &MultiPoly::one(2));
        assert_eq!(falling_product(&start, 2, &qi(-1)), expected);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_q(&q(-3, 2)), "-3/2");
        assert_eq!(fmt_q(&q(4, 2)), "2");
        assert_eq!(parse_q("-3/2"), Some(q(-3, 2)));
        assert_eq!(parse_q("5"), Some(qi(5)));
        assert!(parse_q("x").is_none());
        assert!(is_half_odd(&q(-3, 2)));
        assert!(!is_half_odd(&qi(1)));
    }

    fn small_q() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..9).prop_map(|(a, b)| q(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn alternating_sum_kills_low_degree(n in 1u64..=12, coeffs in prop::collection::vec(-20i64..20, 1..12)) {
            let deg = (n as usize - 1).min(coeffs.len() - 1);
            let k = MultiPoly::var(1, 0);
            let mut poly = MultiPoly::zero(1);
            let mut power = MultiPoly::one(1);
            for c in coeffs.iter().take(deg + 1) {
                poly = &poly + &power.scale(&qi(*c));
                power = &power * &k;
            }
            prop_assert_eq!(alternating_binom_sum(&poly, n), qi(0));
        }

        #[test]
        fn pascal_rule(x in small_q(), k in 1u64..=20) {
            let one = qi(1);
            prop_assert_eq!(binom(&x, k), binom(&(&x - &one), k) + binom(&(&x - &one), k - 1));
        }
    }
}
