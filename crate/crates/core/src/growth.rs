//! Kerov's growth process and its Jack_α analog.
//!
//! The exact one-step kernel from μ to λ = μ + b is
//!
//! ```text
//! p(μ → λ) = ψ′_{λ/μ}(α) · c(μ, α) / c(λ, α)
//! ```
//!
//! where c is the first hook product Π(α·a + l + 1) and ψ′ is the
//! single-box Pieri coefficient, a product over the boxes strictly above b
//! in its column. Only boxes in the row and column of b change their hook
//! factors when b is added, so c(λ)/c(μ) is computed from those boxes alone
//! and one kernel entry costs O(row + column).
//!
//! Sampling uses a floating-point evaluation of the same kernel through the
//! interlacing form of the transition measure: with x_k the α-contents of the
//! addable corners and y_i = c_α(removable corner i) + α − 1,
//!
//! ```text
//! p_k = Π_i (x_k − y_i) / Π_{j≠k} (x_k − x_j)
//! ```
//!
//! which costs O(corners²) per step and agrees with the exact rows (see the
//! tests below).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::measures;
use crate::partition::{BoxRef, Partition};
use crate::rational::{self, int, AlphaParam, Rational};

/// Default largest n accepted by [`enumerate_paths`].
pub const DEFAULT_PATH_BOUND: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct KernelEntry {
    pub corner: BoxRef,
    pub prob: Rational,
    pub prob_float: f64,
}

/// Exact one-step distribution from `source` over its addable corners, in
/// increasing row order.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelRow {
    pub source: Partition,
    pub entries: Vec<KernelEntry>,
}

impl KernelRow {
    pub fn prob_of(&self, corner: BoxRef) -> Option<&Rational> {
        self.entries
            .iter()
            .find(|e| e.corner == corner)
            .map(|e| &e.prob)
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().map(|e| &e.prob).sum()
    }

    /// E[f(c_α(b))] over the row.
    pub fn expect<F: Fn(&Rational) -> Rational>(&self, alpha: &AlphaParam, f: F) -> Rational {
        self.entries
            .iter()
            .map(|e| &e.prob * f(&e.corner.alpha_content(alpha)))
            .sum()
    }

    fn from_probs(source: &Partition, probs: Vec<(BoxRef, Rational)>) -> Self {
        KernelRow {
            source: source.clone(),
            entries: probs
                .into_iter()
                .map(|(corner, prob)| KernelEntry {
                    corner,
                    prob_float: rational::to_f64(&prob),
                    prob,
                })
                .collect(),
        }
    }
}

struct HookScalars {
    alpha: Rational,
    one: Rational,
}

impl HookScalars {
    /// α·a + l + shift, with `shift` ∈ {1, 2, α, 1 + α} given as (integer part, with α).
    fn factor(&self, arm: usize, leg: usize, plus_int: i64, plus_alpha: bool) -> Rational {
        let mut v = &self.alpha * int(arm as i64) + int(leg as i64 + plus_int);
        if plus_alpha {
            v += &self.alpha;
        }
        v
    }
}

/// Arms (in μ) of the boxes strictly above `corner` in its column, paired
/// with their legs in μ.
fn column_above(mu: &Partition, corner: BoxRef) -> impl Iterator<Item = (usize, usize)> + '_ {
    (1..corner.row).map(move |row| (mu.row(row) - corner.col, corner.row - 1 - row))
}

/// Single-box Pieri coefficient ψ′_{λ/μ}(α) for λ = μ + `corner`.
pub fn pieri_coefficient(mu: &Partition, corner: BoxRef, alpha: &AlphaParam) -> Rational {
    let h = HookScalars {
        alpha: alpha.value().clone(),
        one: Rational::one(),
    };
    let mut psi = h.one.clone();
    for (a, l) in column_above(mu, corner) {
        // leg grows by one in λ; arm is unchanged
        let num = h.factor(a, l, 0, true) * h.factor(a, l + 1, 1, false);
        let den = h.factor(a, l, 1, false) * h.factor(a, l + 1, 0, true);
        psi *= num / den;
    }
    psi
}

/// c(μ + corner, α) / c(μ, α), touching only the row and column of `corner`.
pub fn hook_ratio(mu: &Partition, corner: BoxRef, alpha: &AlphaParam) -> Rational {
    let h = HookScalars {
        alpha: alpha.value().clone(),
        one: Rational::one(),
    };
    let conj = mu.conjugate();
    let col_len = |c: usize| conj.parts().get(c - 1).copied().unwrap_or(0);
    let mut ratio = h.one.clone();
    // row of the new box: arm grows by one
    for col in 1..corner.col {
        let a = corner.col - 1 - col;
        let l = col_len(col) - corner.row;
        ratio *= h.factor(a + 1, l, 1, false) / h.factor(a, l, 1, false);
    }
    // column of the new box: leg grows by one
    for (a, l) in column_above(mu, corner) {
        ratio *= h.factor(a, l + 1, 1, false) / h.factor(a, l, 1, false);
    }
    // the new box itself contributes α·0 + 0 + 1 = 1
    ratio
}

/// Exact growth kernel row from μ.
pub fn kernel(mu: &Partition, alpha: &AlphaParam) -> KernelRow {
    let probs = mu
        .addable()
        .into_iter()
        .map(|b| {
            (
                b,
                pieri_coefficient(mu, b, alpha) / hook_ratio(mu, b, alpha),
            )
        })
        .collect();
    KernelRow::from_probs(mu, probs)
}

/// The Plancherel rule dim(μ + b) / ((|μ| + 1) · dim(μ)).
pub fn plancherel_kernel(mu: &Partition) -> KernelRow {
    let j = BigInt::from(mu.size() + 1);
    let dim_mu = BigInt::from(mu.dimension());
    let probs = mu
        .addable()
        .into_iter()
        .map(|b| {
            let lam = mu.with_box(b).expect("addable corner");
            (
                b,
                Rational::new(BigInt::from(lam.dimension()), &j * &dim_mu),
            )
        })
        .collect();
    KernelRow::from_probs(mu, probs)
}

/// Seeded source of uniform variates: the stream is a pure function of
/// `(master_seed, stream_index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// A realized path λ(1) ⊂ … ⊂ λ(n).
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthPath {
    pub n: usize,
    pub alpha: AlphaParam,
    pub boxes: Vec<BoxRef>,
    pub increments: Vec<Rational>,
    /// Product of the kernel entries along the path; set for enumerated paths.
    pub prob: Option<Rational>,
}

impl GrowthPath {
    fn from_boxes(alpha: &AlphaParam, boxes: Vec<BoxRef>, prob: Option<Rational>) -> Self {
        let increments = increment_values(&boxes, alpha);
        GrowthPath {
            n: boxes.len(),
            alpha: alpha.clone(),
            boxes,
            increments,
            prob,
        }
    }

    /// λ(j) for j = 1..=n.
    pub fn shapes(&self) -> Vec<Partition> {
        let mut shape = Partition::empty();
        self.boxes
            .iter()
            .map(|&b| {
                shape = shape.with_box(b).expect("path adds an addable corner");
                shape.clone()
            })
            .collect()
    }

    pub fn final_shape(&self) -> Partition {
        self.shapes().pop().unwrap_or_default()
    }

    pub fn s_value(&self) -> Rational {
        self.increments.iter().sum()
    }
}

fn increment_values(boxes: &[BoxRef], alpha: &AlphaParam) -> Vec<Rational> {
    boxes
        .iter()
        .enumerate()
        .map(|(j, b)| {
            if j == 0 {
                Rational::zero()
            } else {
                b.alpha_content(alpha)
            }
        })
        .collect()
}

/// X_1..X_n recomputed from the boxes: X_1 = 0, X_j = c_α(box j).
pub fn increments(path: &GrowthPath) -> Vec<Rational> {
    increment_values(&path.boxes, &path.alpha)
}

/// Float-kernel sampler over a reusable shape buffer.
#[derive(Clone, Debug)]
pub struct GrowthSampler {
    alpha: f64,
    rows: Vec<usize>,
    add_rows: Vec<usize>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    probs: Vec<f64>,
}

impl GrowthSampler {
    pub fn new(alpha: &AlphaParam) -> Self {
        GrowthSampler {
            alpha: alpha.float_view(),
            rows: Vec::new(),
            add_rows: Vec::new(),
            xs: Vec::new(),
            ys: Vec::new(),
            probs: Vec::new(),
        }
    }

    pub fn reset(&mut self) {
        self.rows.clear();
    }

    pub fn shape(&self) -> Partition {
        Partition::from_parts_unchecked(self.rows.clone())
    }

    /// Load an arbitrary shape.
    pub fn set_shape(&mut self, shape: &Partition) {
        self.rows.clear();
        self.rows.extend_from_slice(shape.parts());
    }

    /// Float kernel of the current shape, in increasing row order of the
    /// addable corners.
    pub fn float_kernel(&mut self) -> Vec<(BoxRef, f64)> {
        self.compute_row();
        self.add_rows
            .iter()
            .zip(&self.probs)
            .map(|(&r, &p)| {
                (
                    BoxRef::new(r + 1, self.rows.get(r).copied().unwrap_or(0) + 1),
                    p,
                )
            })
            .collect()
    }

    fn compute_row(&mut self) {
        let a = self.alpha;
        let k = self.rows.len();
        self.add_rows.clear();
        self.xs.clear();
        self.ys.clear();
        for i in 0..k {
            let len = self.rows[i];
            if i == 0 || self.rows[i - 1] > len {
                self.add_rows.push(i);
                self.xs.push(a * len as f64 - i as f64);
            }
            if i + 1 == k || len > self.rows[i + 1] {
                self.ys.push(a * len as f64 - i as f64 - 1.0);
            }
        }
        self.add_rows.push(k);
        self.xs.push(-(k as f64));
        self.probs.clear();
        for (idx, &x) in self.xs.iter().enumerate() {
            let mut p = 1.0;
            for &y in &self.ys {
                p *= x - y;
            }
            for (jdx, &xj) in self.xs.iter().enumerate() {
                if jdx != idx {
                    p /= x - xj;
                }
            }
            self.probs.push(p);
        }
    }

    /// Add one box chosen by the uniform variate `u ∈ [0,1)` against the
    /// cumulative float row.
    pub fn step(&mut self, u: f64) -> BoxRef {
        self.compute_row();
        let mut cum = 0.0;
        let mut pick = self.add_rows.len() - 1;
        for (idx, &p) in self.probs.iter().enumerate() {
            cum += p;
            if u < cum {
                pick = idx;
                break;
            }
        }
        let r = self.add_rows[pick];
        if r == self.rows.len() {
            self.rows.push(1);
        } else {
            self.rows[r] += 1;
        }
        BoxRef::new(r + 1, self.rows[r])
    }

    /// Grow a fresh path of `n` boxes, one variate per step, calling
    /// `on_box(j, box)` for j = 1..=n.
    pub fn run<R: RngCore, F: FnMut(usize, BoxRef)>(
        &mut self,
        n: usize,
        rng: &mut R,
        mut on_box: F,
    ) {
        self.reset();
        for j in 1..=n {
            let u: f64 = rng.gen();
            let b = self.step(u);
            on_box(j, b);
        }
    }
}

/// Integer summary of a sampled path: S_α = α·col_sum − row_sum, where the
/// sums run over (col − 1) and (row − 1) of every box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ContentSums {
    pub col_sum: i64,
    pub row_sum: i64,
}

impl ContentSums {
    pub fn add(&mut self, b: BoxRef) {
        self.col_sum += b.col as i64 - 1;
        self.row_sum += b.row as i64 - 1;
    }

    /// Numerator of S_α over the denominator of α: p·col_sum − q·row_sum for α = p/q.
    pub fn s_scaled_numerator(&self, alpha: &AlphaParam) -> BigInt {
        BigInt::from(self.col_sum) * alpha.value().numer()
            - BigInt::from(self.row_sum) * alpha.value().denom()
    }

    pub fn s_value(&self, alpha: &AlphaParam) -> Rational {
        alpha.value() * int(self.col_sum) - int(self.row_sum)
    }

    /// T = S/√(α·C(n,2)) in double precision.
    pub fn t_float(&self, alpha: &AlphaParam, n: usize) -> f64 {
        let s = match alpha.as_small_ratio() {
            Some((p, q)) => {
                (p as f64 * self.col_sum as f64 - q as f64 * self.row_sum as f64) / q as f64
            }
            None => rational::to_f64(&self.s_value(alpha)),
        };
        s / (alpha.float_view() * rational::binom2(n as u64) as f64).sqrt()
    }
}

/// Content sums of `count` independent paths of length `n`; draw `i` uses
/// stream `(master_seed, i)`, so the output does not depend on how the
/// draws are scheduled across threads.
pub fn sample_batch(
    n: usize,
    alpha: &AlphaParam,
    count: usize,
    master_seed: u64,
) -> Vec<ContentSums> {
    (0..count as u64)
        .into_par_iter()
        .map_init(
            || GrowthSampler::new(alpha),
            |sampler, i| {
                let mut rng = RngStream::new(master_seed, i).rng();
                let mut sums = ContentSums::default();
                sampler.run(n, &mut rng, |_, b| sums.add(b));
                sums
            },
        )
        .collect()
}

/// Sample one growth path of length `n`.
pub fn sample_path(n: usize, alpha: &AlphaParam, stream: RngStream) -> Result<GrowthPath, Error> {
    if n < 1 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: "n >= 1".into(),
        });
    }
    let mut sampler = GrowthSampler::new(alpha);
    let mut rng = stream.rng();
    let mut boxes = Vec::with_capacity(n);
    sampler.run(n, &mut rng, |_, b| boxes.push(b));
    Ok(GrowthPath::from_boxes(alpha, boxes, None))
}

/// Every chain of nested partitions of sizes 1..=n with its exact
/// probability; `n` is capped at [`DEFAULT_PATH_BOUND`].
pub fn enumerate_paths(n: usize, alpha: &AlphaParam) -> Result<Vec<GrowthPath>, Error> {
    enumerate_paths_bounded(n, alpha, DEFAULT_PATH_BOUND)
}

pub fn enumerate_paths_bounded(
    n: usize,
    alpha: &AlphaParam,
    bound: usize,
) -> Result<Vec<GrowthPath>, Error> {
    enumerate_paths_with(n, alpha, bound, kernel)
}

/// Path enumeration against a caller-supplied kernel.
pub fn enumerate_paths_with<K>(
    n: usize,
    alpha: &AlphaParam,
    bound: usize,
    kernel_fn: K,
) -> Result<Vec<GrowthPath>, Error>
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    if n < 1 || n > bound {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            range: format!("1..={bound}"),
        });
    }
    let mut cache: HashMap<Partition, KernelRow> = HashMap::new();
    let mut out = Vec::new();
    let mut boxes = Vec::with_capacity(n);
    walk(
        &Partition::empty(),
        Rational::one(),
        n,
        alpha,
        &kernel_fn,
        &mut cache,
        &mut boxes,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk<K>(
    shape: &Partition,
    prob: Rational,
    n: usize,
    alpha: &AlphaParam,
    kernel_fn: &K,
    cache: &mut HashMap<Partition, KernelRow>,
    boxes: &mut Vec<BoxRef>,
    out: &mut Vec<GrowthPath>,
) where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    if boxes.len() == n {
        out.push(GrowthPath::from_boxes(alpha, boxes.clone(), Some(prob)));
        return;
    }
    let row = cache
        .entry(shape.clone())
        .or_insert_with(|| kernel_fn(shape, alpha))
        .clone();
    for e in row.entries {
        let next = shape.with_box(e.corner).expect("kernel corner is addable");
        boxes.push(e.corner);
        walk(
            &next,
            &prob * &e.prob,
            n,
            alpha,
            kernel_fn,
            cache,
            boxes,
            out,
        );
        boxes.pop();
    }
}

/// Jack marginal at level j pushed one step through `kernel_fn`, compared
/// against the level j + 1 marginal: returns the pushed-forward masses.
pub fn push_forward<K>(
    level: usize,
    alpha: &AlphaParam,
    kernel_fn: K,
) -> HashMap<Partition, Rational>
where
    K: Fn(&Partition, &AlphaParam) -> KernelRow,
{
    let mut next: HashMap<Partition, Rational> = HashMap::new();
    for mu in crate::partition::enumerate_partitions(level) {
        let m = measures::jack_prob(&mu, alpha);
        for e in kernel_fn(&mu, alpha).entries {
            let lam = mu.with_box(e.corner).expect("addable");
            *next.entry(lam).or_insert_with(Rational::zero) += &m * &e.prob;
        }
    }
    next
}
