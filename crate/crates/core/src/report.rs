//! Machine-readable fit reports and plot samples.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::assembly::{classify_knots, Candidate, KnotKind};
use crate::numfmt::format_g17;
use crate::search::FitResult;

/// Slope-change tolerance used to flag proper knots in reports.
pub const PROPER_KNOT_RTOL: f64 = 1e-9;
/// Samples strictly inside each piece in plot output.
pub const PLOT_SAMPLES_PER_PIECE: usize = 16;

fn g17<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return Err(serde::ser::Error::custom(format!("non-finite number {v}")));
    }
    let raw = RawValue::from_string(format_g17(*v)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

fn g17_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => g17(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotReport {
    #[serde(serialize_with = "g17")]
    pub t: f64,
    pub proper: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceReport {
    #[serde(serialize_with = "g17")]
    pub slope: f64,
    #[serde(serialize_with = "g17")]
    pub intercept: f64,
    #[serde(serialize_with = "g17")]
    pub from: f64,
    #[serde(serialize_with = "g17")]
    pub to: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub examined: u64,
    pub regular: u64,
    pub rejected: u64,
    pub pruned: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub knots: Vec<KnotReport>,
    pub pieces: Vec<PieceReport>,
    #[serde(serialize_with = "g17")]
    pub residual: f64,
    pub source_vector: Vec<u32>,
    pub stats: StatsReport,
    pub complete: bool,
    #[serde(
        default,
        serialize_with = "g17_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub kappa0: Option<f64>,
    #[serde(
        default,
        serialize_with = "g17_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub mbc: Option<f64>,
    #[serde(
        default,
        serialize_with = "g17_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub mic: Option<f64>,
}

impl FitReport {
    pub fn from_candidate(c: &Candidate) -> Self {
        let kinds = classify_knots(c, PROPER_KNOT_RTOL);
        let s = &c.spline;
        let bp = s.breakpoints();
        Self {
            knots: s
                .knots()
                .iter()
                .zip(kinds)
                .map(|(&t, kind)| KnotReport {
                    t,
                    proper: kind == KnotKind::Proper,
                })
                .collect(),
            pieces: s
                .pieces()
                .enumerate()
                .map(|(j, line)| PieceReport {
                    slope: line.slope,
                    intercept: line.intercept,
                    from: bp[j],
                    to: bp[j + 1],
                })
                .collect(),
            residual: c.residual,
            source_vector: c.source_vector.components().to_vec(),
            stats: StatsReport {
                examined: 0,
                regular: 0,
                rejected: 0,
                pruned: 0,
                elapsed_ms: 0,
            },
            complete: true,
            kappa0: None,
            mbc: None,
            mic: None,
        }
    }

    pub fn from_result(r: &FitResult) -> Self {
        let mut out = Self::from_candidate(&r.best);
        out.stats = StatsReport {
            examined: r.stats.examined,
            regular: r.stats.regular,
            rejected: r.stats.rejected_no_intersection,
            pruned: r.stats.pruned,
            elapsed_ms: u64::try_from(r.stats.elapsed.as_millis()).unwrap_or(u64::MAX),
        };
        out.complete = r.complete;
        out
    }

    /// Adds the dilution concentrations at the two knots, `kappa0 * 2^-t`.
    pub fn with_concentrations(mut self, kappa0: f64) -> Self {
        let conc = |i: usize| self.knots.get(i).map(|k| kappa0 * (-k.t).exp2());
        self.mbc = conc(0);
        self.mic = conc(1);
        self.kappa0 = Some(kappa0);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite");
        s.push('\n');
        s
    }
}

/// `x,s(x)` samples of a fit: every piece from its left to its right end,
/// so each interior breakpoint appears twice (once per one-sided limit).
pub fn plot_csv(c: &Candidate) -> String {
    use std::fmt::Write;
    let s = &c.spline;
    let bp = s.breakpoints();
    let mut out = String::from("x,s(x)\n");
    for (j, line) in s.pieces().enumerate() {
        let (lo, hi) = (bp[j], bp[j + 1]);
        let n = PLOT_SAMPLES_PER_PIECE + 1;
        for m in 0..=n {
            let x = if m == n {
                hi
            } else {
                lo + (hi - lo) * m as f64 / n as f64
            };
            let _ = writeln!(out, "{},{}", format_g17(x), format_g17(line.eval(x)));
        }
    }
    out
}
