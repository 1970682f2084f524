//! Exact rational arithmetic, sparse polynomials over the bigraded generic
//! ring, and exact linear algebra.

pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod poly;

pub use linalg::{
    det_and_adjugate, det_bareiss, det_cofactor, exact_kernel, rank_over_fraction_field,
    RankMode, RankResult,
};
pub use matrix::SparseMatrix;
pub use parse::parse_rational;
pub use poly::{format_rational, Monomial, Poly, VarId};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> num_bigint::BigInt {
    use num_traits::One;
    if k < 0 || n < 0 || k > n {
        return num_bigint::BigInt::default();
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient `n! / (k_1! ... k_m!)`, zero if any part is negative
/// or the parts do not sum to `n`.
pub fn multinomial(n: i64, parts: &[i64]) -> num_bigint::BigInt {
    if parts.iter().any(|&k| k < 0) || parts.iter().sum::<i64>() != n {
        return num_bigint::BigInt::default();
    }
    let mut rest = n;
    let mut acc = num_bigint::BigInt::from(1);
    for &k in parts {
        acc *= binomial(rest, k);
        rest -= k;
    }
    acc
}
