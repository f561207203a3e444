//! Exhaustive search over regular position vectors.
//!
//! Each regular vector fixes which data runs form segments. Segment fits are
//! computed left to right; a vector is dropped as soon as the partial residual
//! exceeds the best one seen so far, or two neighboring fits fail to cross
//! inside their gap. Surviving candidates compete on residual.
//!
//! # Determinism
//!
//! The enumeration is split into chunks by vector prefix. Workers may process
//! chunks in any order (prioritized or not), but every chunk keeps its
//! running-minimum candidates in lexicographic order, and the final choice is
//! the lexicographically smallest vector whose residual is within
//! [`TIE_RTOL`] of the minimum. Pruning only removes candidates that are worse
//! than some known candidate by far more than the tie band, so the reported
//! result does not depend on thread count, chunking or pruning.
//!
//! The pruning bound itself is never shared between running chunks. The
//! first chunk in processing order runs alone and fixes a base bound; every
//! other chunk prunes against that base and its own best. That keeps the
//! statistics reproducible across thread counts as well.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::assembly::{assemble, intersect_in_gap, Candidate};
use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::lsq::{divided_differences, fit_fixed_knots_into, HatLsq, SegmentFit};
use crate::position::{is_regular_slice, PositionVector, RegularVectors};
use crate::segmentation::{segmentize_into, Segmentation};

/// Residuals closer than this (relative to the larger of the residual and the
/// data norm) are considered tied.
pub const TIE_RTOL: f64 = 1e-12;
/// Pruning keeps everything within this relative margin of the best residual.
const PRUNE_SLACK_RTOL: f64 = 1e-9;
/// The enumeration is split into at least this many chunks. The number does
/// not depend on the thread count so that statistics are reproducible.
const MIN_CHUNKS: usize = 64;
/// Vectors evaluated between two looks at the clock.
const CLOCK_EVERY: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub threads: usize,
    pub time_limit: Option<Duration>,
    /// Visit chunks whose leading knots sit near large second differences first.
    pub prioritize: bool,
    /// Abandon vectors whose partial residual already exceeds the best so far.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            time_limit: None,
            prioritize: true,
            prune: true,
        }
    }
}

impl SearchOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    /// Vectors whose evaluation was started.
    pub examined: u64,
    /// Regular vectors produced by the enumeration.
    pub regular: u64,
    pub rejected_no_intersection: u64,
    pub pruned: u64,
    pub elapsed: Duration,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.examined += other.examined;
        self.regular += other.regular;
        self.rejected_no_intersection += other.rejected_no_intersection;
        self.pruned += other.pruned;
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub best: Candidate,
    /// False when the time limit stopped the search early; `best` is then the
    /// best candidate found so far.
    pub complete: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Outcome {
    Accepted { residual_sq: f64 },
    Rejected,
    Pruned,
}

#[derive(Debug, Default)]
struct CachedFit {
    valid: bool,
    lo: usize,
    hi: usize,
    knots: Vec<usize>,
    fit: SegmentFit,
}

/// Per-worker evaluation state. Consecutive vectors in lexicographic order
/// usually share their leading segments, so the last fit of every segment
/// slot is kept and reused when its range and knots are unchanged.
pub(crate) struct Evaluator<'a> {
    data: &'a DataSet,
    ws: HatLsq,
    seg: Segmentation,
    cache: Vec<CachedFit>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(data: &'a DataSet) -> Self {
        Self {
            data,
            ws: HatLsq::new(),
            seg: Segmentation::default(),
            cache: Vec::new(),
        }
    }

    /// Runs the segment fits and crossing checks for a regular vector.
    pub(crate) fn evaluate(&mut self, p: &[u32], cutoff_sq: f64) -> Result<Outcome> {
        let data = self.data;
        segmentize_into(p, data.mu(), &mut self.seg);
        let nseg = self.seg.segments.len();
        if self.cache.len() < nseg {
            self.cache.resize_with(nseg, CachedFit::default);
        }
        let mut acc = 0.0;
        for l in 0..nseg {
            let s = &self.seg.segments[l];
            let entry = &mut self.cache[l];
            if !(entry.valid && entry.lo == s.lo && entry.hi == s.hi && entry.knots == s.knots) {
                entry.valid = false;
                fit_fixed_knots_into(&mut self.ws, &mut entry.fit, data, s.lo, s.hi, &s.knots)?;
                entry.lo = s.lo;
                entry.hi = s.hi;
                entry.knots.clone_from(&s.knots);
                entry.valid = true;
            }
            acc += entry.fit.residual_sq;
            if acc > cutoff_sq {
                return Ok(Outcome::Pruned);
            }
            if l > 0 {
                let i = self.seg.gaps[l - 1];
                let left = self.cache[l - 1].fit.fit.last_piece();
                let right = self.cache[l].fit.fit.first_piece();
                if intersect_in_gap(left, right, (data.x(i), data.x(i + 1))).is_none() {
                    return Ok(Outcome::Rejected);
                }
            }
        }
        Ok(Outcome::Accepted { residual_sq: acc })
    }

    /// Builds the candidate for the vector just accepted by [`Self::evaluate`].
    pub(crate) fn candidate(&self, p: &[u32]) -> Option<Candidate> {
        let nseg = self.seg.segments.len();
        let fits: Vec<SegmentFit> = self.cache[..nseg].iter().map(|c| c.fit.clone()).collect();
        assemble(
            &fits,
            &self.seg.gaps,
            self.data,
            PositionVector::new(p.to_vec()),
        )
    }
}

/// Evaluates one regular vector: a fixed-knot fit when all knots are data
/// knots, otherwise segment fits joined at their crossings.
///
/// Returns `None` when the vector is rejected (no crossing inside a gap) or
/// when its residual provably exceeds `cutoff`.
pub fn evaluate_vector(
    p: &PositionVector,
    data: &DataSet,
    cutoff: f64,
) -> Result<Option<Candidate>> {
    if !is_regular_slice(p.components(), data.mu()) {
        return Err(Error::NotRegular(p.components().to_vec()));
    }
    let mut ev = Evaluator::new(data);
    let cutoff_sq = if cutoff.is_finite() {
        cutoff * cutoff
    } else {
        f64::INFINITY
    };
    match ev.evaluate(p.components(), cutoff_sq)? {
        Outcome::Accepted { .. } => Ok(ev.candidate(p.components())),
        Outcome::Rejected | Outcome::Pruned => Ok(None),
    }
}

/// Scores knot codes by the size of nearby second divided differences.
///
/// A data knot at `x_i` scores `|D2_i|`; a knot inside `(x_i, x_{i+1})` scores
/// the mean of the two neighbors (absent ones count as zero). A vector or
/// prefix scores the sum over its codes.
#[derive(Debug, Clone)]
pub struct Prioritizer {
    code_weight: Vec<f64>,
}

impl Prioritizer {
    pub fn score(&self, p: &[u32]) -> f64 {
        p.iter()
            .map(|&c| self.code_weight.get(c as usize).copied().unwrap_or(0.0))
            .sum()
    }

    pub fn code_weight(&self, code: u32) -> f64 {
        self.code_weight.get(code as usize).copied().unwrap_or(0.0)
    }
}

pub fn prioritize_order(data: &DataSet, mu: usize, _k: usize) -> Prioritizer {
    let (_, second) = divided_differences(data);
    // |D2_i| for i = 0..=mu+1, zero where undefined
    let at = |i: usize| -> f64 {
        if (1..=mu).contains(&i) {
            second.get(i - 1).map_or(0.0, |v| v.abs())
        } else {
            0.0
        }
    };
    let code_weight = (0..=2 * mu)
        .map(|c| {
            let i = c / 2;
            if c % 2 == 1 {
                at(i + 1)
            } else {
                0.5 * (at(i) + at(i + 1))
            }
        })
        .collect();
    Prioritizer { code_weight }
}

#[derive(Debug, Default)]
struct ChunkOutcome {
    /// Running-minimum candidates in enumeration order.
    records: Vec<Candidate>,
    stats: SearchStats,
    finished: bool,
}

impl ChunkOutcome {
    fn best_residual(&self) -> f64 {
        self.records.last().map_or(f64::INFINITY, |c| c.residual)
    }
}

struct Shared<'a> {
    data: &'a DataSet,
    k: usize,
    prefixes: &'a [Vec<u32>],
    order: &'a [usize],
    /// Next position in `order` to hand out.
    next: AtomicUsize,
    stop: AtomicBool,
    base_bound: f64,
    scale: f64,
    prune: bool,
    deadline: Option<Instant>,
    slots: Vec<Mutex<Option<ChunkOutcome>>>,
    error: Mutex<Option<Error>>,
}

impl Shared<'_> {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn cutoff_sq(&self, bound: f64) -> f64 {
        if !self.prune {
            return f64::INFINITY;
        }
        let cutoff = bound + PRUNE_SLACK_RTOL * bound.max(self.scale);
        cutoff * cutoff
    }

    fn worker(&self) {
        let mut ev = Evaluator::new(self.data);
        while !self.stop.load(Ordering::Relaxed) {
            let idx = self.next.fetch_add(1, Ordering::Relaxed);
            let Some(&chunk) = self.order.get(idx) else {
                return;
            };
            self.run_one(&mut ev, chunk);
        }
    }

    /// Runs one chunk and stores its outcome, raising the stop flag on
    /// timeout or error.
    fn run_one(&self, ev: &mut Evaluator<'_>, chunk: usize) {
        if self.expired() {
            self.stop.store(true, Ordering::Relaxed);
            return;
        }
        match self.run_chunk(ev, &self.prefixes[chunk]) {
            Ok(outcome) => {
                if !outcome.finished {
                    self.stop.store(true, Ordering::Relaxed);
                }
                *self.slots[chunk].lock().expect("slot lock") = Some(outcome);
            }
            Err(e) => {
                self.error.lock().expect("error lock").get_or_insert(e);
                self.stop.store(true, Ordering::Relaxed);
            }
        }
    }

    fn run_chunk(&self, ev: &mut Evaluator<'_>, prefix: &[u32]) -> Result<ChunkOutcome> {
        let mut out = ChunkOutcome::default();
        let mut walk = RegularVectors::with_prefix(self.data.mu(), self.k, prefix)?;
        let mut cutoff_sq = self.cutoff_sq(self.base_bound);
        let mut tick = 0u32;
        while let Some(p) = walk.advance() {
            tick += 1;
            if tick == CLOCK_EVERY {
                tick = 0;
                if self.stop.load(Ordering::Relaxed) || self.expired() {
                    return Ok(out);
                }
            }
            out.stats.regular += 1;
            out.stats.examined += 1;
            match ev.evaluate(p, cutoff_sq)? {
                Outcome::Pruned => out.stats.pruned += 1,
                Outcome::Rejected => out.stats.rejected_no_intersection += 1,
                Outcome::Accepted { residual_sq } => {
                    let residual = residual_sq.sqrt();
                    if residual < out.best_residual() {
                        match ev.candidate(p) {
                            Some(c) => out.records.push(c),
                            None => {
                                return Err(Error::precondition(
                                    "accepted vector failed to assemble",
                                ))
                            }
                        }
                        cutoff_sq = cutoff_sq.min(self.cutoff_sq(residual));
                    }
                }
            }
        }
        out.finished = true;
        Ok(out)
    }
}

/// Prefixes splitting the enumeration into at least `min_chunks` pieces (or
/// full vectors when that is impossible), in lexicographic order.
fn chunk_prefixes(mu: usize, k: usize, min_chunks: usize) -> Result<Vec<Vec<u32>>> {
    let mut prefixes = Vec::new();
    for len in 1..=k {
        prefixes.clear();
        let mut walk = RegularVectors::prefixes(mu, k, len)?;
        while let Some(p) = walk.advance() {
            prefixes.push(p.to_vec());
        }
        if prefixes.len() >= min_chunks {
            break;
        }
    }
    Ok(prefixes)
}

/// Finds a best least-squares broken line with `k` free knots.
///
/// On a complete run the result is a global minimizer; among minimizers
/// (residuals tied within [`TIE_RTOL`]) the one with the lexicographically
/// smallest position vector is reported.
pub fn run_search(data: &DataSet, k: usize, opts: &SearchOptions) -> Result<FitResult> {
    let start = Instant::now();
    let mu = data.mu();
    if k == 0 {
        return Err(Error::precondition("need at least one knot (k >= 1)"));
    }
    if k + 1 > mu {
        return Err(Error::precondition(format!(
            "{} data points with k = {k} knots: need at least k + 3 = {} points; \
             with fewer the data are reproduced exactly by a broken line",
            data.len(),
            k + 3
        )));
    }
    if opts.threads == 0 {
        return Err(Error::precondition("threads must be at least 1"));
    }
    let scale = data.value_norm();

    // The all-data-knot vector (1, 3, ..., 2k-1) is lexicographically first
    // and always feasible; it seeds the bound and guarantees a result.
    let seed_vector: Vec<u32> = (0..k as u32).map(|j| 2 * j + 1).collect();
    let mut seed_eval = Evaluator::new(data);
    let seed = match seed_eval.evaluate(&seed_vector, f64::INFINITY)? {
        Outcome::Accepted { .. } => seed_eval
            .candidate(&seed_vector)
            .ok_or_else(|| Error::precondition("seed vector failed to assemble"))?,
        _ => return Err(Error::precondition("seed vector was not accepted")),
    };

    let prefixes = chunk_prefixes(mu, k, MIN_CHUNKS)?;
    let mut order: Vec<usize> = (0..prefixes.len()).collect();
    if opts.prioritize {
        let prio = prioritize_order(data, mu, k);
        let scores: Vec<f64> = prefixes.iter().map(|p| prio.score(p)).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    }

    let shared = Shared {
        data,
        k,
        prefixes: &prefixes,
        order: &order,
        next: AtomicUsize::new(0),
        stop: AtomicBool::new(false),
        base_bound: seed.residual,
        scale,
        prune: opts.prune,
        deadline: opts.time_limit.map(|t| start + t),
        slots: (0..prefixes.len()).map(|_| Mutex::new(None)).collect(),
        error: Mutex::new(None),
    };

    // The first chunk in processing order runs alone; its best residual
    // becomes the pruning base for all the others.
    let mut shared = shared;
    if let Some(&first) = order.first() {
        shared.next.store(1, Ordering::Relaxed);
        shared.run_one(&mut Evaluator::new(data), first);
        if let Some(outcome) = shared.slots[first].get_mut().expect("slot lock").as_ref() {
            shared.base_bound = shared.base_bound.min(outcome.best_residual());
        }
    }
    if opts.threads == 1 {
        shared.worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..opts.threads {
                s.spawn(|| shared.worker());
            }
        });
    }
    if let Some(e) = shared.error.into_inner().expect("error lock") {
        return Err(e);
    }

    let mut stats = SearchStats::default();
    let mut complete = true;
    let mut records: Vec<Candidate> = vec![seed];
    for slot in shared.slots {
        match slot.into_inner().expect("slot lock") {
            Some(outcome) => {
                complete &= outcome.finished;
                stats.absorb(&outcome.stats);
                records.extend(outcome.records);
            }
            None => complete = false,
        }
    }
    let min = records
        .iter()
        .map(|c| c.residual)
        .fold(f64::INFINITY, f64::min);
    let threshold = min + TIE_RTOL * min.max(scale);
    let best = records
        .into_iter()
        .find(|c| c.residual <= threshold)
        .expect("the minimum is attained");
    stats.elapsed = start.elapsed();
    Ok(FitResult {
        best,
        complete,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{classify_knots, KnotKind};
    use crate::lsq::{fit_fixed_knots, residual_norm};
    use crate::position::{count_regular, is_regular};
    use crate::segmentation::segmentize;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn bump() -> DataSet {
        let xs: Vec<f64> = (0..=16).map(f64::from).collect();
        DataSet::from_fn(xs, |x| if x == 8.0 { 2.0 } else { 1.0 }).unwrap()
    }

    fn random_instance(rng: &mut StdRng, n: usize) -> DataSet {
        let xs = (0..n)
            .map(|i| i as f64 + rng.random_range(-0.3..0.3))
            .collect();
        let fs = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        DataSet::new(xs, fs).unwrap()
    }

    fn single_thread() -> SearchOptions {
        SearchOptions::default().with_threads(1)
    }

    /// Minimum over every regular vector, evaluated one at a time without pruning.
    fn exhaustive_min(data: &DataSet, k: usize) -> f64 {
        RegularVectors::new(data.mu(), k)
            .unwrap()
            .filter_map(|p| evaluate_vector(&p, data, f64::INFINITY).unwrap())
            .map(|c| c.residual)
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn evaluate_examples() {
        let d = bump();
        let c = evaluate_vector(&PositionVector::new(vec![13, 15, 17]), &d, f64::INFINITY)
            .unwrap()
            .unwrap();
        assert!(c.residual < 1e-12);
        assert_eq!(c.knots(), &[7.0, 8.0, 9.0]);
        // cutoff 0 prunes anything that is not an exact fit
        assert!(evaluate_vector(&PositionVector::new(vec![15]), &d, 0.0)
            .unwrap()
            .is_none());
        assert!(evaluate_vector(&PositionVector::new(vec![2, 4]), &d, 1.0).is_err());
    }

    #[test]
    fn bump_results() {
        let d = bump();
        let expect: [(&[f64], f64); 2] = [(&[8.0], 0.87586), (&[7.0, 8.0], 0.78881)];
        for (k, (knots, res)) in expect.iter().enumerate() {
            let r = run_search(&d, k + 1, &single_thread()).unwrap();
            assert!(r.complete);
            assert!(
                (r.best.residual - res).abs() < 1e-4,
                "k={} {}",
                k + 1,
                r.best.residual
            );
            for (a, b) in r.best.knots().iter().zip(knots.iter()) {
                assert!((a - b).abs() < 1e-9, "{:?}", r.best.knots());
            }
        }
        for k in 3..=5 {
            let r = run_search(&d, k, &single_thread()).unwrap();
            assert!(r.best.residual <= 1e-9);
            let proper = classify_knots(&r.best, 1e-9)
                .iter()
                .filter(|k| **k == KnotKind::Proper)
                .count();
            assert_eq!(proper, 3, "k={k} {:?}", r.best.knots());
        }
    }

    #[test]
    fn collinear_data_fit_exactly() {
        let xs: Vec<f64> = (0..9).map(|i| f64::from(i).powf(1.3)).collect();
        let d = DataSet::from_fn(xs, |x| 0.5 - 2.0 * x).unwrap();
        for k in 1..=3 {
            let r = run_search(&d, k, &single_thread()).unwrap();
            assert!(r.best.residual < 1e-9);
            assert!(classify_knots(&r.best, 1e-9)
                .iter()
                .all(|k| *k == KnotKind::Improper));
        }
    }

    #[test]
    fn preconditions() {
        let d = bump();
        assert!(run_search(&d, 0, &single_thread()).is_err());
        assert!(run_search(&d, 15, &single_thread()).is_err());
        assert!(run_search(&d, 2, &SearchOptions::default().with_threads(0)).is_err());
    }

    #[test]
    fn stats_count_every_regular_vector() {
        let mut rng = StdRng::seed_from_u64(3);
        let d = random_instance(&mut rng, 13);
        for k in 1..=3 {
            let r = run_search(&d, k, &single_thread()).unwrap();
            assert_eq!(r.stats.regular, count_regular(d.mu(), k).unwrap());
            assert_eq!(r.stats.examined, r.stats.regular);
        }
    }

    #[test]
    fn matches_exhaustive_minimum() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.random_range(6..13);
            let k = rng.random_range(1..=3usize.min(n - 4));
            let d = random_instance(&mut rng, n);
            let r = run_search(&d, k, &single_thread()).unwrap();
            let brute = exhaustive_min(&d, k);
            assert!((r.best.residual - brute).abs() <= 1e-12 * brute.max(1.0));
            assert!((residual_norm(&d, &r.best.spline) - r.best.residual).abs() < 1e-9);
        }
    }

    #[test]
    fn pruning_threads_and_priority_do_not_change_result() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(6..=15);
            let k = rng.random_range(1..=3usize.min(n - 4));
            let d = random_instance(&mut rng, n);
            let base = run_search(&d, k, &single_thread()).unwrap();
            for opts in [
                SearchOptions {
                    prune: false,
                    ..single_thread()
                },
                SearchOptions {
                    prioritize: false,
                    ..single_thread()
                },
                SearchOptions::default().with_threads(3),
            ] {
                let r = run_search(&d, k, &opts).unwrap();
                assert_eq!(r.best.residual, base.best.residual);
                assert_eq!(r.best.source_vector, base.best.source_vector);
                assert_eq!(r.best.spline, base.best.spline);
            }
            for threads in [2, 8] {
                let mut r =
                    run_search(&d, k, &SearchOptions::default().with_threads(threads)).unwrap();
                let mut b = run_search(&d, k, &SearchOptions::default().with_threads(1)).unwrap();
                r.stats.elapsed = Duration::ZERO;
                b.stats.elapsed = Duration::ZERO;
                assert_eq!(r.stats, b.stats);
            }
        }
    }

    #[test]
    fn winner_is_optimal_on_each_segment() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let d = random_instance(&mut rng, 14);
            let r = run_search(&d, 3, &single_thread()).unwrap();
            let p = &r.best.source_vector;
            assert!(is_regular(p, d.mu()));
            let seg = segmentize(p, d.mu()).unwrap();
            for s in &seg.segments {
                let refit = fit_fixed_knots(&d, s.lo, s.hi, &s.knots).unwrap();
                let on_spline: f64 = (s.lo..=s.hi)
                    .map(|i| (d.f(i) - r.best.spline.eval(d.x(i))).powi(2))
                    .sum();
                assert!(
                    (on_spline - refit.residual_sq).abs() <= 1e-9 * refit.residual_sq.max(1e-12)
                );
            }
        }
    }

    #[test]
    fn zero_time_limit_returns_incomplete() {
        let mut rng = StdRng::seed_from_u64(1);
        let d = random_instance(&mut rng, 40);
        let opts = SearchOptions {
            time_limit: Some(Duration::ZERO),
            ..single_thread()
        };
        let r = run_search(&d, 4, &opts).unwrap();
        assert!(!r.complete);
        assert!(r.best.residual.is_finite());
        assert_eq!(r.best.source_vector.len(), 4);
    }

    #[test]
    fn priority_scores() {
        let d = bump();
        let prio = prioritize_order(&d, d.mu(), 1);
        let mut codes: Vec<u32> = (1..=29).collect();
        codes.sort_by(|a, b| prio.code_weight(*b).total_cmp(&prio.code_weight(*a)));
        let top: Vec<u32> = {
            let mut t = codes[..5].to_vec();
            t.sort();
            t
        };
        // data knots x_7, x_8, x_9 and the two intervals between them
        assert_eq!(top, vec![13, 14, 15, 16, 17]);
        assert_eq!(prio.code_weight(15), 2.0);
        assert_eq!(prio.code_weight(3), 0.0);

        let flat = DataSet::from_fn((0..10).map(f64::from).collect(), |x| 2.0 * x + 1.0).unwrap();
        let prio = prioritize_order(&flat, flat.mu(), 2);
        assert!((1..=15).all(|c| prio.code_weight(c) == 0.0));
    }
}
