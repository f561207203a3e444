//! Brute-force reference solvers used to cross-check the search.
//!
//! Nothing here prunes or exploits structure. The grid oracle tries every
//! k-subset of a finite candidate set of knot locations and fits each with
//! the general breakpoint solver, so its residual is an upper bound for the
//! true optimum.

use crate::assembly::Candidate;
use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::lsq::{fit_breakpoints_with, residual_norm, BrokenLine, HatLsq, Line};

/// Subsets tried by [`grid_oracle`] before it refuses.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// Knot candidates: every interior data abscissa plus, inside each data
/// interval, the points at fractions `j / (r + 1)` for all `r <= refinement`.
///
/// Taking the union over all coarser refinements makes the candidate sets
/// nested, so the oracle residual can only go down as `refinement` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    refinement: usize,
}

impl GridSpec {
    pub fn new(refinement: usize) -> Result<Self> {
        if refinement == 0 {
            return Err(Error::precondition("grid refinement must be at least 1"));
        }
        Ok(Self { refinement })
    }

    pub fn refinement(&self) -> usize {
        self.refinement
    }

    /// Distinct fractions in (0, 1), ascending.
    fn fractions(&self) -> Vec<(usize, usize)> {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let mut out: Vec<(usize, usize)> = (2..=self.refinement + 1)
            .flat_map(|den| (1..den).map(move |num| (num, den)))
            .filter(|&(num, den)| gcd(num, den) == 1)
            .collect();
        out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        out
    }

    /// Candidate knot locations for `data`, strictly increasing.
    pub fn candidates(&self, data: &DataSet) -> Vec<f64> {
        let fr = self.fractions();
        let mu = data.mu();
        let mut out = Vec::with_capacity((mu + 1) * (fr.len() + 1));
        for i in 0..=mu {
            let (lo, hi) = (data.x(i), data.x(i + 1));
            if i > 0 {
                out.push(lo);
            }
            out.extend(
                fr.iter()
                    .map(|&(n, d)| lo + (hi - lo) * n as f64 / d as f64),
            );
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.checked_mul((n - j) as u128)? / (j as u128 + 1);
    }
    Some(acc)
}

/// Smallest residual over all `k`-subsets of the grid candidates.
pub fn grid_oracle(data: &DataSet, k: usize, grid: GridSpec) -> Result<f64> {
    grid_oracle_with_budget(data, k, grid, DEFAULT_BUDGET)
}

pub fn grid_oracle_with_budget(
    data: &DataSet,
    k: usize,
    grid: GridSpec,
    budget: u128,
) -> Result<f64> {
    let mu = data.mu();
    if k == 0 || k + 1 > mu {
        return Err(Error::precondition(format!(
            "k = {k} needs 1 <= k and at least k + 3 data points, got {}",
            data.len()
        )));
    }
    let cand = grid.candidates(data);
    let n = cand.len();
    let required = binomial(n, k).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let mut ws = HatLsq::new();
    let mut bp = vec![0.0; k + 2];
    bp[0] = data.a();
    bp[k + 1] = data.b();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best = f64::INFINITY;
    loop {
        for (slot, &i) in bp[1..=k].iter_mut().zip(&idx) {
            *slot = cand[i];
        }
        best = best.min(fit_breakpoints_with(&mut ws, data, &bp)?);
        // next combination in lexicographic order
        let Some(j) = (0..k).rev().find(|&j| idx[j] < n - k + j) else {
            break;
        };
        idx[j] += 1;
        for m in j + 1..k {
            idx[m] = idx[m - 1] + 1;
        }
    }
    Ok(best.max(0.0).sqrt())
}

fn two_knots(base: &Candidate) -> Result<(f64, f64)> {
    match base.knots() {
        &[t1, t2] => Ok((t1, t2)),
        other => Err(Error::precondition(format!(
            "expected a fit with two knots, got {}",
            other.len()
        ))),
    }
}

fn outer_chord_residual(
    data: &DataSet,
    base: &Candidate,
    y1: f64,
    y2: f64,
    mid: Line,
) -> Result<f64> {
    let s = &base.spline;
    let (first, last) = (s.first_piece(), s.last_piece());
    let line = BrokenLine::new(
        vec![data.a(), y1, y2, data.b()],
        vec![
            first.eval(data.a()),
            mid.eval(y1),
            mid.eval(y2),
            last.eval(data.b()),
        ],
    )?;
    Ok(residual_norm(data, &line))
}

/// Residual of the two-knot spline that keeps the outer pieces of `base`
/// and bridges them by the chord from `(y1, s1(y1))` to `(y2, s3(y2))`.
///
/// When no abscissa lies strictly between the knots of `base`, every member
/// with `t1 <= y1 < y2 <= t2` touches the same data as `base` does.
pub fn nonuniqueness_family_residual(
    data: &DataSet,
    base: &Candidate,
    y1: f64,
    y2: f64,
) -> Result<f64> {
    let (t1, t2) = two_knots(base)?;
    if !(t1 <= y1 && y1 < y2 && y2 <= t2) {
        return Err(Error::precondition(format!(
            "need {t1} <= y1 < y2 <= {t2}, got y1 = {y1}, y2 = {y2}"
        )));
    }
    if data.xs().iter().any(|&x| t1 < x && x < t2) {
        return Err(Error::precondition(
            "a data abscissa lies strictly between the knots",
        ));
    }
    let s = &base.spline;
    let mid = Line::through(y1, s.first_piece().eval(y1), y2, s.last_piece().eval(y2));
    outer_chord_residual(data, base, y1, y2, mid)
}

/// Residual of the family member whose middle piece passes through the one
/// data point strictly between the knots of `base` and through
/// `(y2, s3(y2))`. The first knot `y1` is where that chord meets the left
/// piece of `base`.
pub fn anchored_family_residual(data: &DataSet, base: &Candidate, y2: f64) -> Result<f64> {
    let (t1, t2) = two_knots(base)?;
    let inside: Vec<usize> = (0..data.len())
        .filter(|&i| t1 < data.x(i) && data.x(i) < t2)
        .collect();
    let &[m] = inside.as_slice() else {
        return Err(Error::precondition(format!(
            "expected exactly one data abscissa between the knots, found {}",
            inside.len()
        )));
    };
    let xm = data.x(m);
    if !(xm < y2 && y2 <= t2) {
        return Err(Error::precondition(format!(
            "need {xm} < y2 <= {t2}, got {y2}"
        )));
    }
    let s = &base.spline;
    let first = s.first_piece();
    let mid = Line::through(xm, s.eval(xm), y2, s.last_piece().eval(y2));
    if mid.slope == first.slope {
        return Err(Error::precondition("chord is parallel to the left piece"));
    }
    let y1 = (first.intercept - mid.intercept) / (mid.slope - first.slope);
    if !(data.a() < y1 && y1 < xm) {
        return Err(Error::precondition(format!(
            "chord meets the left piece at {y1}, outside ({}, {xm})",
            data.a()
        )));
    }
    outer_chord_residual(data, base, y1, y2, mid)
}
