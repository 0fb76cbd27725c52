//! Kolmogorov distance between the law of T and the standard normal, by
//! exact enumeration or by Monte Carlo, plus log-log rate fits and a
//! concentration probe for the last increment.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::growth::{self, GrowthSampler, RngStream};
use crate::measures::{jack_prob, s_value};
use crate::partition::enumerate_partitions;
use crate::rational::{self, int, AlphaParam, Rational};

/// Largest n accepted by the exact distribution.
pub const EXACT_MAX_N: usize = 40;
/// Smallest Monte Carlo sample.
pub const MC_MIN_SAMPLES: usize = 1000;

/// Φ(x), via the complementary error function.
///
/// `libm` carries the musl erfc, accurate to about one ulp.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// 99% Dvoretzky–Kiefer–Wolfowitz half-width for `count` samples.
pub fn dkw_eps_99(count: usize) -> f64 {
    ((2.0f64 / 0.01).ln() / (2.0 * count as f64)).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CdfAtom {
    pub t_value: f64,
    pub exact_s: Rational,
    pub prob: Rational,
    pub cum_prob: Rational,
}

/// T for an exact S: sign(s)·√(s²/(α·C(n,2))). The square root is taken of
/// a correctly rounded rational so that T_α(λ) and −T_{1/α}(λ′) agree to
/// the bit.
pub fn t_from_s(s: &Rational, alpha: &AlphaParam, n: usize) -> f64 {
    let var = alpha.value() * int(rational::binom2(n as u64) as i64);
    let mag = rational::to_f64(&(s * s / var)).sqrt();
    if s.is_negative() {
        -mag
    } else {
        mag
    }
}

fn check_exact_range(n: usize) -> Result<(), Error> {
    if !(2..=EXACT_MAX_N).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: format!("2..={EXACT_MAX_N}"),
        });
    }
    Ok(())
}

/// The law of T under Jack_α at size n, one atom per distinct exact S.
pub fn exact_cdf(n: usize, alpha: &AlphaParam) -> Result<Vec<CdfAtom>, Error> {
    check_exact_range(n)?;
    let mut mass: BTreeMap<Rational, Rational> = BTreeMap::new();
    for lam in enumerate_partitions(n) {
        *mass
            .entry(s_value(&lam, alpha))
            .or_insert_with(Rational::zero) += jack_prob(&lam, alpha);
    }
    Ok(accumulate(mass.into_iter().map(|(s, p)| {
        let t = t_from_s(&s, alpha, n);
        (s, t, p)
    })))
}

fn accumulate(atoms: impl Iterator<Item = (Rational, f64, Rational)>) -> Vec<CdfAtom> {
    let mut cum = Rational::zero();
    atoms
        .map(|(exact_s, t_value, prob)| {
            cum += &prob;
            CdfAtom {
                t_value,
                exact_s,
                prob,
                cum_prob: cum.clone(),
            }
        })
        .collect()
}

/// The atoms of −T re-expressed on the 1/α scale: S ↦ −S/α, t ↦ −t.
pub fn negate_atoms(atoms: &[CdfAtom], alpha: &AlphaParam) -> Vec<CdfAtom> {
    accumulate(
        atoms
            .iter()
            .rev()
            .map(|a| (-(&a.exact_s) / alpha.value(), -a.t_value, a.prob.clone())),
    )
}

/// sup_x |F(x) − Φ(x)| for a discrete F, checking both one-sided limits at
/// every atom.
pub fn atoms_distance(atoms: &[CdfAtom]) -> f64 {
    let mut prev = 0.0f64;
    let mut d = 0.0f64;
    for a in atoms {
        let phi = normal_cdf(a.t_value);
        let cum = rational::to_f64(&a.cum_prob);
        d = d.max((cum - phi).abs()).max((prev - phi).abs());
        prev = cum;
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Mc,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub n: usize,
    #[serde(serialize_with = "rational::serialize")]
    pub alpha: Rational,
    pub method: Method,
    pub sample_count: Option<usize>,
    pub distance: f64,
    pub dkw_eps_99: Option<f64>,
    pub seed: Option<u64>,
}

pub fn kolmogorov_exact(n: usize, alpha: &AlphaParam) -> Result<DistanceReport, Error> {
    let atoms = exact_cdf(n, alpha)?;
    Ok(DistanceReport {
        n,
        alpha: alpha.value().clone(),
        method: Method::Exact,
        sample_count: None,
        distance: atoms_distance(&atoms),
        dkw_eps_99: None,
        seed: None,
    })
}

/// Kolmogorov distance of a sample to Φ.
pub fn empirical_distance(mut ts: Vec<f64>) -> f64 {
    ts.sort_by(f64::total_cmp);
    let count = ts.len() as f64;
    ts.iter().enumerate().fold(0.0f64, |d, (i, &t)| {
        let phi = normal_cdf(t);
        let hi = (i + 1) as f64 / count;
        let lo = i as f64 / count;
        d.max((hi - phi).abs()).max((lo - phi).abs())
    })
}

/// T values of `count` sampled paths; draw i uses stream (seed, i).
pub fn sample_t_values(n: usize, alpha: &AlphaParam, count: usize, seed: u64) -> Vec<f64> {
    growth::sample_batch(n, alpha, count, seed)
        .into_iter()
        .map(|s| s.t_float(alpha, n))
        .collect()
}

pub fn kolmogorov_mc(
    n: usize,
    alpha: &AlphaParam,
    count: usize,
    seed: u64,
) -> Result<DistanceReport, Error> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: "n >= 2".into(),
        });
    }
    if count < MC_MIN_SAMPLES {
        return Err(Error::OutOfRange {
            what: "count",
            value: count as i64,
            range: format!("count >= {MC_MIN_SAMPLES}"),
        });
    }
    let distance = empirical_distance(sample_t_values(n, alpha, count, seed));
    Ok(DistanceReport {
        n,
        alpha: alpha.value().clone(),
        method: Method::Mc,
        sample_count: Some(count),
        distance,
        dkw_eps_99: Some(dkw_eps_99(count)),
        seed: Some(seed),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: usize,
    pub distance: f64,
    /// distance·√n
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub points: Vec<RatePoint>,
    pub slope: f64,
    pub intercept: f64,
    /// max distance·√n: an empirical lower bound on any valid Berry–Esseen
    /// constant, not an estimate of it.
    pub sup_scaled: f64,
}

/// Least-squares fit of log(distance) on log(n).
pub fn rate_fit(reports: &[DistanceReport]) -> Result<RateReport, Error> {
    if reports.len() < 3 {
        return Err(Error::Domain(format!(
            "a rate fit needs at least 3 points, got {}",
            reports.len()
        )));
    }
    let alpha = &reports[0].alpha;
    if reports.iter().any(|r| &r.alpha != alpha) {
        return Err(Error::Domain(
            "all points of a rate fit must share alpha".into(),
        ));
    }
    let mut ns: Vec<usize> = reports.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("rate fit points need distinct n".into()));
    }
    if let Some(r) = reports
        .iter()
        .find(|r| r.distance.is_nan() || r.distance <= 0.0 || r.n == 0)
    {
        return Err(Error::Domain(format!(
            "nonpositive distance {} at n = {}",
            r.distance, r.n
        )));
    }
    let mut points: Vec<RatePoint> = reports
        .iter()
        .map(|r| RatePoint {
            n: r.n,
            distance: r.distance,
            scaled: r.distance * (r.n as f64).sqrt(),
        })
        .collect();
    points.sort_by_key(|p| p.n);
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.distance.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let sup_scaled = points.iter().map(|p| p.scaled).fold(0.0, f64::max);
    Ok(RateReport {
        points,
        slope,
        intercept: my - slope * mx,
        sup_scaled,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// 2e√n
    pub threshold: f64,
    pub max_abs_last: i64,
    pub exceedances: usize,
    /// Steps with |X_j| > j.
    pub step_bound_violations: usize,
    /// Steps with |X_j| > j − 1 (informational, tighter than the bound used).
    pub content_bound_violations: usize,
}

impl ConcentrationReport {
    pub fn passed(&self) -> bool {
        self.exceedances == 0 && self.step_bound_violations == 0
    }
}

#[derive(Clone, Copy, Default)]
struct ProbeTally {
    max_abs_last: i64,
    exceedances: usize,
    step_violations: usize,
    content_violations: usize,
}

impl ProbeTally {
    fn merge(self, other: Self) -> Self {
        ProbeTally {
            max_abs_last: self.max_abs_last.max(other.max_abs_last),
            exceedances: self.exceedances + other.exceedances,
            step_violations: self.step_violations + other.step_violations,
            content_violations: self.content_violations + other.content_violations,
        }
    }
}

/// Plancherel-only probe of |X_n| against 2e√n, and of every step against
/// the bound |X_j| ≤ j.
pub fn concentration_probe(
    n: usize,
    samples: usize,
    alpha: &AlphaParam,
    seed: u64,
) -> Result<ConcentrationReport, Error> {
    if !alpha.is_one() {
        return Err(Error::Domain(
            "the concentration probe is defined for alpha = 1 only".into(),
        ));
    }
    if n < 3 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: "n >= 3".into(),
        });
    }
    let threshold = 2.0 * std::f64::consts::E * (n as f64).sqrt();
    let tally = (0..samples as u64)
        .into_par_iter()
        .map_init(
            || GrowthSampler::new(alpha),
            |sampler, i| {
                let mut rng = RngStream::new(seed, i).rng();
                let mut t = ProbeTally::default();
                sampler.run(n, &mut rng, |j, b| {
                    let x = if j == 1 { 0 } else { b.content().abs() };
                    if x > j as i64 {
                        t.step_violations += 1;
                    }
                    if x > j as i64 - 1 {
                        t.content_violations += 1;
                    }
                    if j == n {
                        t.max_abs_last = x;
                        if x as f64 > threshold {
                            t.exceedances += 1;
                        }
                    }
                });
                t
            },
        )
        .reduce(ProbeTally::default, ProbeTally::merge);
    Ok(ConcentrationReport {
        n,
        samples,
        seed,
        threshold,
        max_abs_last: tally.max_abs_last,
        exceedances: tally.exceedances,
        step_bound_violations: tally.step_violations,
        content_bound_violations: tally.content_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    /// Composite Simpson rule for ∫_0^x φ, independent of erfc.
    fn phi_by_quadrature(x: f64) -> f64 {
        let steps = 200_000;
        let h = x / steps as f64;
        let f = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut acc = f(0.0) + f(x);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(i as f64 * h);
        }
        0.5 + acc * h / 3.0
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for x in [0.5, 1.0, 2.0, 5.0] {
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() <= 1e-12);
        }
        let oracle = phi_by_quadrature(1.0);
        assert!((oracle - 0.841344746068543).abs() <= 1e-12);
        assert!(
            (normal_cdf(1.0) - oracle).abs() <= 1e-12,
            "{} vs {}",
            normal_cdf(1.0),
            oracle
        );
        for x in [0.3, 1.7, 2.5, 3.9] {
            assert!(
                (normal_cdf(x) - phi_by_quadrature(x)).abs() <= 1e-12,
                "x = {x}"
            );
        }
    }

    #[test]
    fn exact_cdf_examples() {
        let one = AlphaParam::one();
        let atoms = exact_cdf(2, &one).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(
            (atoms[0].exact_s.clone(), atoms[0].prob.clone()),
            (int(-1), ratio(1, 2))
        );
        assert_eq!(
            (atoms[1].exact_s.clone(), atoms[1].prob.clone()),
            (int(1), ratio(1, 2))
        );
        assert_eq!((atoms[0].t_value, atoms[1].t_value), (-1.0, 1.0));

        let atoms = exact_cdf(3, &one).unwrap();
        let got: Vec<(Rational, Rational)> = atoms
            .iter()
            .map(|a| (a.exact_s.clone(), a.prob.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                (int(-3), ratio(1, 6)),
                (int(0), ratio(2, 3)),
                (int(3), ratio(1, 6))
            ]
        );
        assert!((atoms[2].t_value - 3f64.sqrt()).abs() < 1e-15);

        assert!(exact_cdf(1, &one).is_err());
        assert!(exact_cdf(41, &one).is_err());
    }

    #[test]
    fn exact_cdf_total_mass() {
        for alpha in crate::rational::sample_alphas() {
            for n in 2..=12 {
                let atoms = exact_cdf(n, &alpha).unwrap();
                assert_eq!(atoms.last().unwrap().cum_prob, int(1));
                assert!(atoms.windows(2).all(|w| w[0].exact_s < w[1].exact_s));
                assert!(atoms.windows(2).all(|w| w[0].t_value < w[1].t_value));
            }
        }
    }

    #[test]
    fn two_point_distance() {
        let r = kolmogorov_exact(2, &AlphaParam::one()).unwrap();
        assert!((r.distance - (normal_cdf(1.0) - 0.5)).abs() <= 1e-9);
        assert!((r.distance - 0.341345).abs() <= 1e-6);
    }

    #[test]
    fn negated_atoms_match_reciprocal_alpha() {
        for alpha in [
            AlphaParam::from_ratio(2, 1),
            AlphaParam::from_ratio(3, 2),
            AlphaParam::from_ratio(5, 1),
        ] {
            for n in 2..=10 {
                let neg = negate_atoms(&exact_cdf(n, &alpha).unwrap(), &alpha);
                let dual = exact_cdf(n, &alpha.recip()).unwrap();
                assert_eq!(neg, dual);
                assert_eq!(
                    atoms_distance(&neg),
                    kolmogorov_exact(n, &alpha.recip()).unwrap().distance
                );
            }
        }
    }

    #[test]
    fn empirical_distance_on_known_sample() {
        // a single point at 0: ECDF jumps 0 -> 1 where Φ = 1/2
        assert_eq!(empirical_distance(vec![0.0]), 0.5);
        let d = empirical_distance(vec![-1.0, 1.0]);
        assert!((d - (normal_cdf(1.0) - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn mc_two_point_within_dkw() {
        let one = AlphaParam::one();
        let r = kolmogorov_mc(2, &one, 100_000, 5).unwrap();
        let exact = kolmogorov_exact(2, &one).unwrap().distance;
        assert!((r.distance - exact).abs() <= r.dkw_eps_99.unwrap());
        assert_eq!(r, kolmogorov_mc(2, &one, 100_000, 5).unwrap());
        assert!(kolmogorov_mc(2, &one, 999, 5).is_err());
        assert!(kolmogorov_mc(1, &one, 1000, 5).is_err());
    }

    fn synthetic(points: &[(usize, f64)]) -> Vec<DistanceReport> {
        points
            .iter()
            .map(|&(n, distance)| DistanceReport {
                n,
                alpha: int(1),
                method: Method::Exact,
                sample_count: None,
                distance,
                dkw_eps_99: None,
                seed: None,
            })
            .collect()
    }

    #[test]
    fn rate_fit_exact_power_laws() {
        let ns = [8usize, 16, 32, 64, 128];
        let r = rate_fit(&synthetic(&ns.map(|n| (n, (n as f64).powf(-0.5))))).unwrap();
        assert!((r.slope + 0.5).abs() <= 1e-12);
        assert!(r.intercept.abs() <= 1e-12);
        let r = rate_fit(&synthetic(&ns.map(|n| (n, 2.0 * (n as f64).powf(-0.5))))).unwrap();
        assert!((r.slope + 0.5).abs() <= 1e-12);
        assert!((r.sup_scaled - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn rate_fit_rejects_bad_input() {
        assert!(rate_fit(&synthetic(&[(8, 0.1), (16, 0.05)])).is_err());
        assert!(rate_fit(&synthetic(&[(8, 0.1), (8, 0.05), (16, 0.01)])).is_err());
        assert!(rate_fit(&synthetic(&[(8, 0.1), (16, 0.0), (32, 0.01)])).is_err());
        let mut mixed = synthetic(&[(8, 0.1), (16, 0.05), (32, 0.01)]);
        mixed[1].alpha = int(2);
        assert!(rate_fit(&mixed).is_err());
    }

    #[test]
    fn concentration_probe_small() {
        let one = AlphaParam::one();
        let r = concentration_probe(25, 20_000, &one, 3).unwrap();
        assert!(r.passed());
        assert_eq!(r.content_bound_violations, 0);
        assert!(r.max_abs_last <= 24);
        assert!(concentration_probe(25, 10, &AlphaParam::from_ratio(2, 1), 3).is_err());
        assert!(concentration_probe(2, 10, &one, 3).is_err());
    }
}
