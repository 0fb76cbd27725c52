//! Exhaustive exact checks of the martingale and moment identities.
//!
//! Every check produces [`CheckResult`] rows comparing two exact rationals.
//! Conditional expectations come straight from one kernel row; only the
//! projection check walks whole paths. The `*_with` variants take the
//! kernel as a parameter so a corrupted kernel can be fed through the same
//! checks.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::growth::{self, KernelRow};
use crate::measures::{self, jack_prob, s_value};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{self, int, AlphaParam, Rational};
use crate::symfun::PieriOracle;

/// Largest n for the level-by-level checks.
pub const MAX_LEVEL: usize = 10;
/// Largest n for which the projection check enumerates paths.
pub const MAX_PATH_LEVEL: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
}

impl Relation {
    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    #[serde(rename = "check")]
    pub check_id: String,
    pub n: usize,
    #[serde(serialize_with = "rational::serialize")]
    pub alpha: Rational,
    pub relation: Relation,
    #[serde(serialize_with = "rational::serialize")]
    pub lhs: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub rhs: Rational,
    pub status: Status,
    pub context: String,
}

impl CheckResult {
    pub fn new(
        check_id: &str,
        n: usize,
        alpha: &AlphaParam,
        relation: Relation,
        lhs: Rational,
        rhs: Rational,
        context: impl Into<String>,
    ) -> Self {
        let status = if relation.holds(&lhs, &rhs) {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckResult {
            check_id: check_id.to_string(),
            n,
            alpha: alpha.value().clone(),
            relation,
            lhs,
            rhs,
            status,
            context: context.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn sort_key(&self) -> (String, usize, Rational, String) {
        (
            self.check_id.clone(),
            self.n,
            self.alpha.clone(),
            self.context.clone(),
        )
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Gt => ">",
        };
        write!(
            f,
            "{:?} {} n={} alpha={} {} {} {} {}",
            self.status,
            self.check_id,
            self.n,
            rational::to_text(&self.alpha),
            rational::to_text(&self.lhs),
            rel,
            rational::to_text(&self.rhs),
            self.context
        )
    }
}

/// Sort rows by (check, n, α, context) so reports are order-independent.
pub fn sort_results(results: &mut [CheckResult]) {
    results.sort_by_key(|a| a.sort_key());
}

fn check_bound(what: &'static str, n: usize, max: usize) -> Result<(), Error> {
    if n > max {
        return Err(Error::OutOfRange {
            what,
            value: n as i64,
            range: format!("..={max}"),
        });
    }
    Ok(())
}

fn binom2(n: usize) -> Rational {
    int(rational::binom2(n as u64) as i64)
}

/// Row sums, positivity and Jack-marginal coherence of the kernel.
pub fn check_kernel(n_max: usize, alpha: &AlphaParam) -> Result<Vec<CheckResult>, Error> {
    check_kernel_with(n_max, alpha, growth::kernel)
}

pub fn check_kernel_with<K>(
    n_max: usize,
    alpha: &AlphaParam,
    kernel_fn: K,
) -> Result<Vec<CheckResult>, Error>
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    check_bound("n_max", n_max, MAX_LEVEL)?;
    let mut out = Vec::new();
    for j in 0..=n_max {
        for mu in enumerate_partitions(j) {
            let row = kernel_fn(&mu, alpha);
            out.push(CheckResult::new(
                "kernel.row_sum",
                j,
                alpha,
                Relation::Eq,
                row.total(),
                int(1),
                mu.to_string(),
            ));
            let min = row
                .entries
                .iter()
                .map(|e| e.prob.clone())
                .min()
                .unwrap_or_else(Rational::zero);
            out.push(CheckResult::new(
                "kernel.min_entry",
                j,
                alpha,
                Relation::Gt,
                min,
                int(0),
                mu.to_string(),
            ));
        }
    }
    for j in 1..=n_max {
        let pushed = growth::push_forward(j - 1, alpha, &kernel_fn);
        for lam in enumerate_partitions(j) {
            let lhs = pushed.get(&lam).cloned().unwrap_or_else(Rational::zero);
            out.push(CheckResult::new(
                "kernel.coherence",
                j,
                alpha,
                Relation::Eq,
                lhs,
                jack_prob(&lam, alpha),
                lam.to_string(),
            ));
        }
    }
    Ok(out)
}

/// At α = 1 the kernel must equal the dimension-ratio rule.
pub fn check_alpha_one_reduction(n_max: usize) -> Result<Vec<CheckResult>, Error> {
    check_bound("n_max", n_max, MAX_LEVEL)?;
    let one = AlphaParam::one();
    let mut out = Vec::new();
    for j in 0..=n_max {
        for mu in enumerate_partitions(j) {
            let general = growth::kernel(&mu, &one);
            let dim_rule = growth::plancherel_kernel(&mu);
            for (g, d) in general.entries.iter().zip(&dim_rule.entries) {
                out.push(CheckResult::new(
                    "kernel.alpha1_reduction",
                    j,
                    &one,
                    Relation::Eq,
                    g.prob.clone(),
                    d.prob.clone(),
                    format!("{mu} + {}", g.corner),
                ));
            }
        }
    }
    Ok(out)
}

/// Kernel entries against ψ′ from the Gram–Schmidt oracle times the full
/// hook-product ratio c(μ)/c(λ).
pub fn check_pieri(max_size: usize, alpha: &AlphaParam) -> Result<Vec<CheckResult>, Error> {
    let oracle = PieriOracle::new(max_size, alpha)?;
    let mut out = Vec::new();
    for j in 0..=max_size {
        for mu in enumerate_partitions(j) {
            let psi = oracle.coefficients(&mu)?;
            let row = growth::kernel(&mu, alpha);
            let (c_mu, _) = mu.hook_products(alpha);
            for e in &row.entries {
                let lam = mu.with_box(e.corner).expect("addable");
                let (c_lam, _) = lam.hook_products(alpha);
                let expected =
                    psi.get(&e.corner).cloned().unwrap_or_else(Rational::zero) * &c_mu / c_lam;
                out.push(CheckResult::new(
                    "kernel.pieri_oracle",
                    j,
                    alpha,
                    Relation::Eq,
                    e.prob.clone(),
                    expected,
                    format!("{mu} + {}", e.corner),
                ));
            }
            out.push(CheckResult::new(
                "kernel.pieri_support",
                j,
                alpha,
                Relation::Eq,
                int(psi.len() as i64),
                int(row.entries.len() as i64),
                mu.to_string(),
            ));
        }
    }
    Ok(out)
}

/// Σ c_α(x)^k over the boxes of μ, k = 1, 2.
fn content_power_sums(mu: &Partition, alpha: &AlphaParam) -> (Rational, Rational) {
    mu.cells().fold((int(0), int(0)), |(s1, s2), c| {
        let v = c.alpha_content(alpha);
        (s1 + &v, s2 + &v * &v)
    })
}

/// Closed form of E(X_j⁴ | λ(j−1) = μ).
pub fn conditional_fourth_moment(mu: &Partition, alpha: &AlphaParam) -> Rational {
    let j = mu.size() + 1;
    let a = alpha.value();
    let am1 = a - int(1);
    let (s1, s2) = content_power_sums(mu, alpha);
    a * a * binom2(j)
        + a * &am1 * &am1 * int(j as i64 - 1)
        + int(3) * a * s2
        + int(3) * a * &am1 * s1
}

/// Conditional mean, second and fourth moments of X_j given λ(j−1), for
/// every μ with 1 ≤ |μ| < n_max.
pub fn conditional_moments_check(
    n_max: usize,
    alpha: &AlphaParam,
) -> Result<Vec<CheckResult>, Error> {
    conditional_moments_check_with(n_max, alpha, growth::kernel)
}

pub fn conditional_moments_check_with<K>(
    n_max: usize,
    alpha: &AlphaParam,
    kernel_fn: K,
) -> Result<Vec<CheckResult>, Error>
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    check_bound("n_max", n_max, MAX_LEVEL)?;
    let mut out = Vec::new();
    for j in 2..=n_max {
        for mu in enumerate_partitions(j - 1) {
            let row = kernel_fn(&mu, alpha);
            let ctx = mu.to_string();
            let mean = row.expect(alpha, |x| x.clone());
            let second = row.expect(alpha, |x| x * x);
            let fourth = row.expect(alpha, |x| rational::pow(x, 4));
            out.push(CheckResult::new(
                "lemma1.cond_mean",
                j,
                alpha,
                Relation::Eq,
                mean,
                int(0),
                ctx.clone(),
            ));
            out.push(CheckResult::new(
                "lemma2.cond_second",
                j,
                alpha,
                Relation::Eq,
                second,
                alpha.value() * int(j as i64 - 1),
                ctx.clone(),
            ));
            out.push(CheckResult::new(
                "lemma2.cond_fourth",
                j,
                alpha,
                Relation::Eq,
                fourth,
                conditional_fourth_moment(&mu, alpha),
                ctx,
            ));
        }
    }
    Ok(out)
}

/// E(X_j | S = s) = (j − 1)·s / C(n,2) over all enumerated paths, for
/// 2 ≤ n ≤ n_max.
pub fn projection_check(n_max: usize, alpha: &AlphaParam) -> Result<Vec<CheckResult>, Error> {
    projection_check_with(n_max, alpha, growth::kernel)
}

pub fn projection_check_with<K>(
    n_max: usize,
    alpha: &AlphaParam,
    kernel_fn: K,
) -> Result<Vec<CheckResult>, Error>
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    check_bound("n_max", n_max, MAX_PATH_LEVEL)?;
    let mut out = Vec::new();
    for n in 2..=n_max {
        let paths = growth::enumerate_paths_with(n, alpha, MAX_PATH_LEVEL, &kernel_fn)?;
        // s -> (P(S = s), Σ_paths P·X_j for each j)
        let mut groups: BTreeMap<Rational, (Rational, Vec<Rational>)> = BTreeMap::new();
        for path in &paths {
            let prob = path
                .prob
                .clone()
                .expect("enumerated paths carry probabilities");
            let entry = groups
                .entry(path.s_value())
                .or_insert_with(|| (int(0), vec![int(0); n]));
            for (acc, x) in entry.1.iter_mut().zip(&path.increments) {
                *acc += &prob * x;
            }
            entry.0 += prob;
        }
        let scale = binom2(n);
        for (s, (mass, weighted)) in groups {
            for (j, w) in weighted.into_iter().enumerate() {
                let lhs = w / &mass;
                let rhs = int(j as i64) * &s / &scale;
                out.push(CheckResult::new(
                    "lemma1.projection",
                    n,
                    alpha,
                    Relation::Eq,
                    lhs,
                    rhs,
                    format!("s={} j={}", rational::to_text(&s), j + 1),
                ));
            }
        }
    }
    Ok(out)
}

/// Level-n increment moments assembled from (μ ⊢ n−1, corner).
struct IncrementMoments {
    second: Rational,
    fourth: Rational,
    abs_third: Rational,
    /// Σ_μ M(μ)·|S(μ)|·E(|X_n|³ | μ)
    weighted_abs_third: Rational,
    /// Σ_μ M(μ)·E(|X_n|³ | μ)²
    cond_abs_third_sq: Rational,
}

fn increment_moments<K>(n: usize, alpha: &AlphaParam, kernel_fn: &K) -> IncrementMoments
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    let mut m = IncrementMoments {
        second: int(0),
        fourth: int(0),
        abs_third: int(0),
        weighted_abs_third: int(0),
        cond_abs_third_sq: int(0),
    };
    for mu in enumerate_partitions(n - 1) {
        let w = jack_prob(&mu, alpha);
        let row = kernel_fn(&mu, alpha);
        let g = row.expect(alpha, |x| rational::pow(&x.abs(), 3));
        m.second += &w * row.expect(alpha, |x| x * x);
        m.fourth += &w * row.expect(alpha, |x| rational::pow(x, 4));
        m.abs_third += &w * &g;
        m.weighted_abs_third += &w * s_value(&mu, alpha).abs() * &g;
        m.cond_abs_third_sq += &w * &g * &g;
    }
    m
}

/// Unconditional identities at each level 2 ≤ n ≤ n_max: E S = 0,
/// E S² = α·C(n,2), E S³ = α(α−1)·C(n,2), E X_n² = α(n−1), the closed form
/// of E X_n⁴ (n ≥ 3), and at α = 1 the Cauchy–Schwarz chain behind the
/// third-moment bounds (n ≥ 3).
pub fn global_moments_check(n_max: usize, alpha: &AlphaParam) -> Result<Vec<CheckResult>, Error> {
    global_moments_check_with(n_max, alpha, growth::kernel)
}

pub fn global_moments_check_with<K>(
    n_max: usize,
    alpha: &AlphaParam,
    kernel_fn: K,
) -> Result<Vec<CheckResult>, Error>
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    check_bound("n_max", n_max, MAX_LEVEL)?;
    let a = alpha.value();
    let am1 = a - int(1);
    let mut out = Vec::new();
    for n in 2..=n_max {
        let (mut m1, mut m2, mut m3) = (int(0), int(0), int(0));
        for lam in enumerate_partitions(n) {
            let w = jack_prob(&lam, alpha);
            let s = s_value(&lam, alpha);
            let s2 = &s * &s;
            m1 += &w * &s;
            m3 += &w * &s2 * &s;
            m2 += w * s2;
        }
        let push = |out: &mut Vec<CheckResult>, id: &str, rel, lhs, rhs| {
            out.push(CheckResult::new(id, n, alpha, rel, lhs, rhs, ""));
        };
        push(&mut out, "lemma1.mean", Relation::Eq, m1, int(0));
        push(&mut out, "lemma1.variance", Relation::Eq, m2, a * binom2(n));
        push(
            &mut out,
            "third_moment",
            Relation::Eq,
            m3,
            a * &am1 * binom2(n),
        );

        let inc = increment_moments(n, alpha, &kernel_fn);
        push(
            &mut out,
            "lemma1.increment_second",
            Relation::Eq,
            inc.second.clone(),
            a * int(n as i64 - 1),
        );
        if n < 3 {
            continue;
        }
        let closed = a * a * binom2(n)
            + int(3) * a * a * binom2(n - 1)
            + a * &am1 * &am1 * int(n as i64 - 1);
        push(
            &mut out,
            "lemma8.fourth_moment",
            Relation::Eq,
            inc.fourth.clone(),
            closed,
        );

        if alpha.is_one() {
            let nm1 = int(n as i64 - 1);
            let bound_sq = &nm1 * &nm1 * int(2 * n as i64 - 3);
            let cs_product = &inc.second * &inc.fourth;
            let third_sq = &inc.abs_third * &inc.abs_third;
            push(
                &mut out,
                "lemma4.third_cauchy_schwarz",
                Relation::Le,
                third_sq.clone(),
                cs_product.clone(),
            );
            push(
                &mut out,
                "lemma4.cauchy_schwarz_value",
                Relation::Eq,
                cs_product,
                bound_sq.clone(),
            );
            push(
                &mut out,
                "lemma4.third_abs_bound",
                Relation::Le,
                third_sq,
                bound_sq.clone(),
            );

            // (E|T_{n-1}||X_n|^3)^2 = (Σ M |S| g)^2 / C(n-1,2)
            let mixed_sq = &inc.weighted_abs_third * &inc.weighted_abs_third / binom2(n - 1);
            push(
                &mut out,
                "lemma4.mixed_cauchy_schwarz",
                Relation::Le,
                mixed_sq.clone(),
                inc.cond_abs_third_sq.clone(),
            );
            push(
                &mut out,
                "lemma4.mixed_conditional_cs",
                Relation::Le,
                inc.cond_abs_third_sq,
                &nm1 * &inc.fourth,
            );
            push(
                &mut out,
                "lemma4.mixed_bound",
                Relation::Le,
                mixed_sq,
                bound_sq,
            );
        }
    }
    Ok(out)
}

/// E(e_{r,α}(λ)) = 0 for 1 ≤ r ≤ n and E Π(m + c_α(x)) = mⁿ.
pub fn symmetric_identities_check(
    n_max: usize,
    alpha: &AlphaParam,
    m_values: &[i64],
) -> Result<Vec<CheckResult>, Error> {
    check_bound("n_max", n_max, MAX_LEVEL)?;
    if let Some(&m) = m_values.iter().find(|&&m| m < 1) {
        return Err(Error::OutOfRange {
            what: "m",
            value: m,
            range: "m >= 1".into(),
        });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let mut e_means = vec![int(0); n + 1];
        let mut prod_means = vec![int(0); m_values.len()];
        for lam in enumerate_partitions(n) {
            let w = jack_prob(&lam, alpha);
            let contents: Vec<Rational> = lam.cells().map(|c| c.alpha_content(alpha)).collect();
            for (acc, e) in e_means.iter_mut().zip(measures::elementary_all(&contents)) {
                *acc += &w * e;
            }
            for (acc, &m) in prod_means.iter_mut().zip(m_values) {
                *acc += &w * measures::content_product(&lam, m, alpha)?;
            }
        }
        for (r, mean) in e_means.into_iter().enumerate().skip(1) {
            out.push(CheckResult::new(
                "lemma3.elementary",
                n,
                alpha,
                Relation::Eq,
                mean,
                int(0),
                format!("r={r}"),
            ));
        }
        for (mean, &m) in prod_means.into_iter().zip(m_values) {
            out.push(CheckResult::new(
                "lemma7.content_product",
                n,
                alpha,
                Relation::Eq,
                mean,
                rational::pow(&int(m), n as u32),
                format!("m={m}"),
            ));
        }
    }
    Ok(out)
}

/// Knobs for [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub path_n_max: usize,
    pub m_values: Vec<i64>,
    /// Largest |μ| for the Pieri oracle; `None` skips it.
    pub oracle_max: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: MAX_LEVEL,
            path_n_max: 8,
            m_values: vec![1, 2, 3],
            oracle_max: None,
        }
    }
}

/// Every check at one α, sorted by key.
pub fn run_suite(config: &SuiteConfig, alpha: &AlphaParam) -> Result<Vec<CheckResult>, Error> {
    let mut out = check_kernel(config.n_max, alpha)?;
    if alpha.is_one() {
        out.extend(check_alpha_one_reduction(config.n_max)?);
    }
    out.extend(conditional_moments_check(config.n_max, alpha)?);
    out.extend(projection_check(
        config.path_n_max.min(config.n_max),
        alpha,
    )?);
    out.extend(global_moments_check(config.n_max, alpha)?);
    out.extend(symmetric_identities_check(
        config.n_max,
        alpha,
        &config.m_values,
    )?);
    if let Some(max) = config.oracle_max {
        out.extend(check_pieri(max, alpha)?);
    }
    sort_results(&mut out);
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
}

pub fn summarize(results: &[CheckResult]) -> Summary {
    let passed = results.iter().filter(|r| r.passed()).count();
    Summary {
        run: results.len(),
        passed,
        failed: results.len() - passed,
    }
}

/// Number of failures per check id, for the human-readable table.
pub fn tally(results: &[CheckResult]) -> BTreeMap<String, Summary> {
    let mut out: BTreeMap<String, Summary> = BTreeMap::new();
    for r in results {
        let entry = out.entry(r.check_id.clone()).or_default();
        entry.run += 1;
        if r.passed() {
            entry.passed += 1;
        } else {
            entry.failed += 1;
        }
    }
    out
}
