//! Continuous piecewise-linear least squares with fixed breakpoints.
//!
//! A broken line is parameterized by its values at the breakpoints (hat
//! basis), so continuity holds by construction. Every data row has at most two
//! nonzero entries in adjacent columns, which makes `R` upper bidiagonal. The
//! factorization is built one row at a time with Givens rotations; the part of
//! each row rotated past the last column contributes directly to the residual.

use crate::dataset::DataSet;
use crate::error::{Error, Result};

/// Rotated remainders below this size are treated as exact zeros. Hat basis
/// entries live in `[0, 1]`, so the threshold is absolute.
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    pub fn through(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        Self {
            slope,
            intercept: y0 - slope * x0,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// A continuous piecewise-linear function given by breakpoints and values.
///
/// Outside `[breakpoints[0], breakpoints[last]]` the end pieces are extended.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BrokenLine {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl BrokenLine {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::LengthMismatch {
                abscissae: breakpoints.len(),
                values: values.len(),
            });
        }
        if breakpoints.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: breakpoints.len(),
            });
        }
        if let Some(index) = breakpoints
            .iter()
            .chain(&values)
            .position(|v| !v.is_finite())
        {
            return Err(Error::NonFinite {
                index: index % breakpoints.len(),
            });
        }
        if let Some(index) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonIncreasingAbscissa { index: index + 1 });
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// The linear function on `[breakpoints[j], breakpoints[j+1]]`.
    pub fn piece(&self, j: usize) -> Line {
        Line::through(
            self.breakpoints[j],
            self.values[j],
            self.breakpoints[j + 1],
            self.values[j + 1],
        )
    }

    pub fn pieces(&self) -> impl Iterator<Item = Line> + '_ {
        (0..self.piece_count()).map(|j| self.piece(j))
    }

    pub fn first_piece(&self) -> Line {
        self.piece(0)
    }

    pub fn last_piece(&self) -> Line {
        self.piece(self.piece_count() - 1)
    }

    /// Interior breakpoints, i.e. the knots.
    pub fn knots(&self) -> &[f64] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.breakpoints.len();
        // index of the first breakpoint strictly greater than x, clamped to a piece
        let j = self
            .breakpoints
            .partition_point(|&b| b <= x)
            .clamp(1, n - 1)
            - 1;
        let (x0, x1) = (self.breakpoints[j], self.breakpoints[j + 1]);
        let (y0, y1) = (self.values[j], self.values[j + 1]);
        let t = (x - x0) / (x1 - x0);
        y0 + t * (y1 - y0)
    }

    pub(crate) fn clear(&mut self) {
        self.breakpoints.clear();
        self.values.clear();
    }

    pub(crate) fn push(&mut self, x: f64, v: f64) {
        self.breakpoints.push(x);
        self.values.push(v);
    }
}

/// Least-squares fit on one segment of the data.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SegmentFit {
    pub fit: BrokenLine,
    /// Sum of squared residuals over the segment's data points.
    pub residual_sq: f64,
}

impl SegmentFit {
    /// Leftmost and rightmost linear pieces.
    pub fn boundary_lines(&self) -> (Line, Line) {
        (self.fit.first_piece(), self.fit.last_piece())
    }
}

/// Reusable workspace for the bidiagonal Givens least-squares solve.
#[derive(Debug, Clone, Default)]
pub struct HatLsq {
    diag: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
    filled: Vec<bool>,
    values: Vec<f64>,
    residual_sq: f64,
}

impl HatLsq {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, n: usize) {
        self.diag.clear();
        self.diag.resize(n, 0.0);
        self.sup.clear();
        self.sup.resize(n, 0.0);
        self.rhs.clear();
        self.rhs.resize(n, 0.0);
        self.filled.clear();
        self.filled.resize(n, false);
        self.values.clear();
        self.values.resize(n, 0.0);
        self.residual_sq = 0.0;
    }

    /// Adds the row `a * e_col + b * e_{col+1}` with right-hand side `y`.
    fn add_row(&mut self, mut col: usize, mut a: f64, mut b: f64, mut y: f64) {
        let n = self.diag.len();
        loop {
            if col >= n {
                self.residual_sq += y * y;
                return;
            }
            if a.abs() <= PIVOT_EPS {
                a = b;
                b = 0.0;
                col += 1;
                continue;
            }
            if !self.filled[col] {
                self.diag[col] = a;
                self.sup[col] = b;
                self.rhs[col] = y;
                self.filled[col] = true;
                return;
            }
            let (d, e, z) = (self.diag[col], self.sup[col], self.rhs[col]);
            let r = d.hypot(a);
            let (c, s) = (d / r, a / r);
            self.diag[col] = r;
            self.sup[col] = c * e + s * b;
            self.rhs[col] = c * z + s * y;
            a = c * b - s * e;
            b = 0.0;
            y = c * y - s * z;
            col += 1;
        }
    }

    /// Fits breakpoint values to `(xs, fs)`; returns the residual sum of squares.
    ///
    /// `xs` must be sorted and lie within the breakpoint range. With
    /// `allow_deficient`, parameters not determined by the data are set to zero
    /// (the residual is still the least-squares minimum); otherwise a rank
    /// deficient design is an error.
    pub fn solve(
        &mut self,
        xs: &[f64],
        fs: &[f64],
        breakpoints: &[f64],
        allow_deficient: bool,
    ) -> Result<f64> {
        let n = breakpoints.len();
        debug_assert!(n >= 2);
        self.reset(n);
        let mut j = 0;
        for (&x, &y) in xs.iter().zip(fs) {
            while j + 2 < n && x > breakpoints[j + 1] {
                j += 1;
            }
            let (b0, b1) = (breakpoints[j], breakpoints[j + 1]);
            let h = b1 - b0;
            self.add_row(j, (b1 - x) / h, (x - b0) / h, y);
        }
        for c in (0..n).rev() {
            if !self.filled[c] {
                if !allow_deficient {
                    return Err(Error::RankDeficient);
                }
                self.values[c] = 0.0;
                continue;
            }
            let next = if c + 1 < n { self.values[c + 1] } else { 0.0 };
            self.values[c] = (self.rhs[c] - self.sup[c] * next) / self.diag[c];
        }
        Ok(self.residual_sq)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Least-squares broken line on `data[lo..=hi]` with breakpoints at `x_lo`, the
/// given data knots, and `x_hi`. With no knots this is straight-line regression.
pub fn fit_fixed_knots(
    data: &DataSet,
    lo: usize,
    hi: usize,
    knots: &[usize],
) -> Result<SegmentFit> {
    let mut out = SegmentFit::default();
    fit_fixed_knots_into(&mut HatLsq::new(), &mut out, data, lo, hi, knots)?;
    Ok(out)
}

pub(crate) fn fit_fixed_knots_into(
    ws: &mut HatLsq,
    out: &mut SegmentFit,
    data: &DataSet,
    lo: usize,
    hi: usize,
    knots: &[usize],
) -> Result<()> {
    if hi <= lo || hi >= data.len() {
        return Err(Error::precondition(format!(
            "segment [{lo}, {hi}] needs at least two data points"
        )));
    }
    if knots.windows(2).any(|w| w[1] <= w[0]) || knots.iter().any(|&i| i <= lo || i >= hi) {
        return Err(Error::precondition(format!(
            "data knots {knots:?} must be increasing and strictly inside [{lo}, {hi}]"
        )));
    }
    out.fit.clear();
    out.fit.push(data.x(lo), 0.0);
    for &i in knots {
        out.fit.push(data.x(i), 0.0);
    }
    out.fit.push(data.x(hi), 0.0);
    out.residual_sq = ws.solve(
        &data.xs()[lo..=hi],
        &data.fs()[lo..=hi],
        &out.fit.breakpoints,
        false,
    )?;
    out.fit.values.copy_from_slice(ws.values());
    Ok(())
}

/// Least-squares broken line with arbitrary breakpoints spanning all the data.
///
/// Breakpoints may fall between abscissae. Pieces without enough data make the
/// problem rank deficient; the minimal residual is still returned together
/// with one minimizer.
pub fn fit_breakpoints(data: &DataSet, breakpoints: &[f64]) -> Result<(BrokenLine, f64)> {
    let mut ws = HatLsq::new();
    let residual_sq = fit_breakpoints_with(&mut ws, data, breakpoints)?;
    let line = BrokenLine::new(breakpoints.to_vec(), ws.values().to_vec())?;
    Ok((line, residual_sq))
}

pub(crate) fn fit_breakpoints_with(
    ws: &mut HatLsq,
    data: &DataSet,
    breakpoints: &[f64],
) -> Result<f64> {
    if breakpoints.len() < 2
        || breakpoints.windows(2).any(|w| w[1] <= w[0])
        || breakpoints[0] > data.a()
        || breakpoints[breakpoints.len() - 1] < data.b()
    {
        return Err(Error::precondition(
            "breakpoints must increase strictly and span the data",
        ));
    }
    ws.solve(data.xs(), data.fs(), breakpoints, true)
}

/// Euclidean norm of `F - s(X)` over all data points.
pub fn residual_norm(data: &DataSet, s: &BrokenLine) -> f64 {
    data.xs()
        .iter()
        .zip(data.fs())
        .map(|(&x, &f)| {
            let r = f - s.eval(x);
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// First and second divided differences.
///
/// `first[j] = (f_{j+1} - f_j) / (x_{j+1} - x_j)` for `j = 0..=mu`, and
/// `second[j - 1] = (f_{j+1} - 2 f_j + f_{j-1}) / (x_{j+1} - x_j)^2` for
/// `j = 1..=mu`. The second difference uses the right-hand spacing squared
/// even for uneven spacing.
pub fn divided_differences(data: &DataSet) -> (Vec<f64>, Vec<f64>) {
    let (x, f) = (data.xs(), data.fs());
    let first = (0..x.len() - 1)
        .map(|j| (f[j + 1] - f[j]) / (x[j + 1] - x[j]))
        .collect();
    let second = (1..x.len() - 1)
        .map(|j| {
            let h = x[j + 1] - x[j];
            (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h)
        })
        .collect();
    (first, second)
}
