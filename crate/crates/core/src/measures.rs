//! Plancherel and Jack_α probabilities, the statistic T, and content
//! polynomials.
//!
//! T is carried as the exact numerator `S_α(λ) = Σ_x c_α(x)` plus the scale
//! `√(α·C(n,2))`; only the final division happens in floating point.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::partition::Partition;
use crate::rational::{self, int, AlphaParam, Rational};

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// n!/Π h(x)², i.e. dim(λ)²/n!.
pub fn plancherel_prob(lambda: &Partition) -> Rational {
    let dim = BigInt::from(lambda.dimension());
    Rational::new(&dim * &dim, factorial(lambda.size()))
}

/// αⁿ·n!/(c·c′).
pub fn jack_prob(lambda: &Partition, alpha: &AlphaParam) -> Rational {
    let n = lambda.size();
    let (c, c_prime) = lambda.hook_products(alpha);
    rational::pow(alpha.value(), n as u32) * Rational::from_integer(factorial(n)) / (c * c_prime)
}

fn require_t_defined(lambda: &Partition) -> Result<usize, Error> {
    let n = lambda.size();
    if n < 2 {
        return Err(Error::Domain(format!(
            "the statistic needs n >= 2, got n = {n} for {lambda}"
        )));
    }
    Ok(n)
}

/// χ^λ(12)/dim(λ) by the row/column binomial formula.
pub fn char_ratio(lambda: &Partition) -> Result<Rational, Error> {
    let n = require_t_defined(lambda)?;
    let (rows, cols) = lambda.binomial_sums();
    Ok(Rational::new(
        BigInt::from(rows as i64 - cols as i64),
        BigInt::from(rational::binom2(n as u64)),
    ))
}

/// S_α(λ) = Σ_i [α·C(λ_i,2) − C(λ'_i,2)], defined for every λ.
pub fn s_value(lambda: &Partition, alpha: &AlphaParam) -> Rational {
    let (rows, cols) = lambda.binomial_sums();
    alpha.value() * int(rows as i64) - int(cols as i64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TStat {
    pub n: usize,
    pub alpha: AlphaParam,
    pub s_value: Rational,
    pub t_float: f64,
}

impl TStat {
    /// α·C(n,2), the variance of S.
    pub fn variance(&self) -> Rational {
        self.alpha.value() * int(rational::binom2(self.n as u64) as i64)
    }
}

pub fn t_statistic(lambda: &Partition, alpha: &AlphaParam) -> Result<TStat, Error> {
    let n = require_t_defined(lambda)?;
    let s = s_value(lambda, alpha);
    let scale = (alpha.float_view() * rational::binom2(n as u64) as f64).sqrt();
    Ok(TStat {
        n,
        alpha: alpha.clone(),
        t_float: rational::to_f64(&s) / scale,
        s_value: s,
    })
}

fn alpha_contents(lambda: &Partition, alpha: &AlphaParam) -> Vec<Rational> {
    lambda.cells().map(|c| c.alpha_content(alpha)).collect()
}

/// Elementary symmetric functions e_0..e_k of `values`.
pub(crate) fn elementary_all(values: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); values.len() + 1];
    e[0] = Rational::one();
    for (k, v) in values.iter().enumerate() {
        for r in (1..=k + 1).rev() {
            let add = &e[r - 1] * v;
            e[r] += add;
        }
    }
    e
}

/// e_r of the α-contents of λ, for 1 ≤ r ≤ |λ|.
pub fn content_elementary(
    lambda: &Partition,
    r: usize,
    alpha: &AlphaParam,
) -> Result<Rational, Error> {
    let n = lambda.size();
    if r < 1 || r > n {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as i64,
            range: format!("1..={n}"),
        });
    }
    Ok(elementary_all(&alpha_contents(lambda, alpha)).swap_remove(r))
}

/// Π_x (m + c_α(x)).
pub fn content_product(lambda: &Partition, m: i64, alpha: &AlphaParam) -> Result<Rational, Error> {
    if m < 1 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m,
            range: "m >= 1".into(),
        });
    }
    let m = int(m);
    Ok(alpha_contents(lambda, alpha)
        .into_iter()
        .map(|c| &m + c)
        .fold(Rational::one(), |acc, f| acc * f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use crate::rational::{ratio, sample_alphas};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn plancherel_examples() {
        assert_eq!(plancherel_prob(&p("[4,2,1]")), ratio(35, 144));
        assert_eq!(plancherel_prob(&p("[5]")), ratio(1, 120));
        let total: Rational = enumerate_partitions(6).map(|l| plancherel_prob(&l)).sum();
        assert_eq!(total, int(1));
    }

    #[test]
    fn jack_examples() {
        for alpha in sample_alphas() {
            let a = alpha.value().clone();
            let one = int(1);
            let expected = int(30) * &a * &a
                / ((int(3) * &a + &one)
                    * (&a + int(2))
                    * (int(2) * &a + &one)
                    * (&a + &one)
                    * (&a + &one));
            assert_eq!(jack_prob(&p("[3,2]"), &alpha), expected);
            assert_eq!(jack_prob(&p("[2]"), &alpha), (&a + &one).recip());
            assert_eq!(jack_prob(&p("[1,1]"), &alpha), &a / (&a + &one));
        }
        assert_eq!(jack_prob(&p("[4,2,1]"), &AlphaParam::one()), ratio(35, 144));
    }

    #[test]
    fn jack_reduces_to_plancherel() {
        for n in 1..=9 {
            for lam in enumerate_partitions(n) {
                assert_eq!(jack_prob(&lam, &AlphaParam::one()), plancherel_prob(&lam));
            }
        }
    }

    #[test]
    fn char_ratio_examples() {
        assert_eq!(char_ratio(&p("[6]")).unwrap(), int(1));
        assert_eq!(char_ratio(&p("[1,1,1,1]")).unwrap(), int(-1));
        assert_eq!(char_ratio(&p("[2,1]")).unwrap(), int(0));
        assert!(char_ratio(&p("[1]")).is_err());
        assert!(char_ratio(&p("[]")).is_err());
    }

    #[test]
    fn t_statistic_examples() {
        for alpha in sample_alphas() {
            let a = alpha.float_view();
            let t = t_statistic(&p("[2]"), &alpha).unwrap();
            assert_eq!(t.s_value, alpha.value().clone());
            assert!((t.t_float - a.sqrt()).abs() < 1e-14);
            let t = t_statistic(&p("[1,1]"), &alpha).unwrap();
            assert_eq!(t.s_value, int(-1));
            assert!((t.t_float + 1.0 / a.sqrt()).abs() < 1e-14);
            let t = t_statistic(&p("[2,1]"), &alpha).unwrap();
            assert_eq!(t.s_value, alpha.value() - int(1));
        }
        assert!(t_statistic(&p("[1]"), &AlphaParam::one()).is_err());
    }

    #[test]
    fn t_float_matches_exact_square() {
        for alpha in sample_alphas() {
            for n in 2..=10 {
                for lam in enumerate_partitions(n) {
                    let t = t_statistic(&lam, &alpha).unwrap();
                    let s2 = rational::to_f64(&(&t.s_value * &t.s_value));
                    let lhs = t.t_float * t.t_float * rational::to_f64(&t.variance());
                    assert!((lhs - s2).abs() <= 1e-12 * s2.abs().max(1e-300), "{lam}");
                }
            }
        }
    }

    #[test]
    fn s_value_at_one_is_scaled_char_ratio() {
        for n in 2..=9 {
            for lam in enumerate_partitions(n) {
                let s = s_value(&lam, &AlphaParam::one());
                assert_eq!(
                    s,
                    char_ratio(&lam).unwrap() * int(rational::binom2(n as u64) as i64)
                );
            }
        }
    }

    #[test]
    fn content_polynomial_examples() {
        let one = AlphaParam::one();
        for n in 1..=8 {
            for lam in enumerate_partitions(n) {
                assert_eq!(content_elementary(&lam, n, &one).unwrap(), int(0));
            }
        }
        assert_eq!(content_elementary(&p("[2,1]"), 2, &one).unwrap(), int(-1));
        assert_eq!(content_elementary(&p("[3]"), 1, &one).unwrap(), int(3));
        assert!(content_elementary(&p("[3]"), 0, &one).is_err());
        assert!(content_elementary(&p("[3]"), 4, &one).is_err());

        assert_eq!(content_product(&p("[2,1]"), 2, &one).unwrap(), int(6));
        assert_eq!(content_product(&p("[1,1,1,1]"), 3, &one).unwrap(), int(0));
        assert!(content_product(&p("[2,1]"), 0, &one).is_err());
        // the (1,1) box contributes the factor m
        for alpha in sample_alphas() {
            for m in 1..4 {
                let lam = p("[3,1]");
                let rest: Rational = lam
                    .cells()
                    .skip(1)
                    .map(|c| int(m) + c.alpha_content(&alpha))
                    .product();
                assert_eq!(content_product(&lam, m, &alpha).unwrap(), int(m) * rest);
            }
        }
    }

    #[test]
    fn normalization_and_duality() {
        for alpha in sample_alphas() {
            let dual = alpha.recip();
            for n in 1..=10 {
                let mut total = int(0);
                for lam in enumerate_partitions(n) {
                    let m = jack_prob(&lam, &alpha);
                    assert_eq!(m, jack_prob(&lam.conjugate(), &dual), "{lam}");
                    assert_eq!(
                        s_value(&lam.conjugate(), &dual),
                        -s_value(&lam, &alpha) / alpha.value(),
                    );
                    total += m;
                }
                assert_eq!(total, int(1), "n = {n}, alpha = {alpha}");
            }
        }
    }
}
