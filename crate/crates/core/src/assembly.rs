//! Gluing segment fits into one broken line over the whole data range.
//!
//! Neighboring segment fits are joined where their boundary pieces cross. The
//! crossing has to fall strictly inside the gap between the two segments,
//! otherwise the layout is rejected.

use crate::dataset::DataSet;
use crate::lsq::{BrokenLine, Line, SegmentFit};
use crate::position::PositionVector;

/// Relative tolerance for treating two boundary pieces as the same line.
pub const IDENTICAL_LINE_RTOL: f64 = 1e-12;
/// Crossings closer than this fraction of the gap width to an end are rejected.
pub const GAP_EDGE_RTOL: f64 = 1e-12;

/// A feasible broken line for one position vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Breakpoints are `x_0`, the knots, and `x_{mu+1}`.
    pub spline: BrokenLine,
    pub residual: f64,
    pub source_vector: PositionVector,
}

impl Candidate {
    pub fn knots(&self) -> &[f64] {
        self.spline.knots()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotKind {
    Proper,
    Improper,
}

/// Where the left and right pieces meet inside the open gap `(lo, hi)`.
///
/// Identical pieces meet everywhere; the gap midpoint is returned for them.
pub fn intersect_in_gap(left: Line, right: Line, gap: (f64, f64)) -> Option<f64> {
    let (lo, hi) = gap;
    debug_assert!(lo < hi);
    let (la, lb, ra, rb) = (left.eval(lo), left.eval(hi), right.eval(lo), right.eval(hi));
    let scale = la.abs().max(lb.abs()).max(ra.abs()).max(rb.abs());
    if (la - ra).abs() <= IDENTICAL_LINE_RTOL * scale
        && (lb - rb).abs() <= IDENTICAL_LINE_RTOL * scale
    {
        return Some(0.5 * (lo + hi));
    }
    let dslope = left.slope - right.slope;
    if dslope == 0.0 {
        return None;
    }
    let z = (right.intercept - left.intercept) / dslope;
    let margin = GAP_EDGE_RTOL * (hi - lo);
    (z > lo + margin && z < hi - margin).then_some(z)
}

/// Joins segment fits at the crossings inside the gaps.
///
/// `gaps[l]` is the data index `i` of the open interval `(x_i, x_{i+1})`
/// between `fits[l]` and `fits[l + 1]`. The residual is the sum of the segment
/// residuals, which is exact because the joined function agrees with each
/// segment fit on that segment's abscissae.
pub fn assemble(
    fits: &[SegmentFit],
    gaps: &[usize],
    data: &DataSet,
    source_vector: PositionVector,
) -> Option<Candidate> {
    debug_assert_eq!(fits.len(), gaps.len() + 1);
    let mut crossings = Vec::with_capacity(gaps.len());
    for (l, &i) in gaps.iter().enumerate() {
        let left = fits[l].fit.last_piece();
        let right = fits[l + 1].fit.first_piece();
        crossings.push(intersect_in_gap(left, right, (data.x(i), data.x(i + 1)))?);
    }
    let mut breakpoints = Vec::with_capacity(source_vector.len() + 2);
    let mut values = Vec::with_capacity(source_vector.len() + 2);
    for (l, fit) in fits.iter().enumerate() {
        let start = match l {
            0 => {
                breakpoints.push(data.a());
                values.push(fit.fit.values()[0]);
                1
            }
            _ => {
                let z = crossings[l - 1];
                breakpoints.push(z);
                values.push(fits[l - 1].fit.last_piece().eval(z));
                1
            }
        };
        let bp = fit.fit.breakpoints();
        let vals = fit.fit.values();
        // data knots of this segment
        for j in start..bp.len() - 1 {
            breakpoints.push(bp[j]);
            values.push(vals[j]);
        }
    }
    breakpoints.push(data.b());
    values.push(*fits.last()?.fit.values().last()?);
    let residual = fits.iter().map(|f| f.residual_sq).sum::<f64>().sqrt();
    let spline = BrokenLine::new(breakpoints, values).ok()?;
    Some(Candidate {
        spline,
        residual,
        source_vector,
    })
}

/// A knot is proper when the slope changes there:
/// `|slope_right - slope_left| > tol * (1 + |slope_left|)`.
pub fn classify_knots(candidate: &Candidate, tol: f64) -> Vec<KnotKind> {
    let s = &candidate.spline;
    (1..s.piece_count())
        .map(|j| {
            let left = s.piece(j - 1).slope;
            let right = s.piece(j).slope;
            if (right - left).abs() > tol * (1.0 + left.abs()) {
                KnotKind::Proper
            } else {
                KnotKind::Improper
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsq::{fit_fixed_knots, residual_norm};

    fn dilution() -> DataSet {
        let fs = [
            3.6273, 3.381, 3.0339, 2.8414, 2.7507, 2.9006, 2.941, 2.9986, 3.2127, 3.8381, 8.2629,
            37.7363, 84.0146, 94.7914, 98.7679, 97.0424, 98.0432, 95.5602, 99.0313, 100.0,
        ];
        DataSet::new((0..20).map(f64::from).collect(), fs.to_vec()).unwrap()
    }

    #[test]
    fn crossing_of_published_pieces() {
        let z = intersect_in_gap(
            Line::new(0.2368, 2.43313),
            Line::new(46.2783, -471.325),
            (10.0, 11.0),
        )
        .unwrap();
        assert!((z - 10.28981).abs() < 1e-4, "{z}");
    }

    #[test]
    fn degenerate_crossings() {
        let a = Line::new(1.0, 0.0);
        assert_eq!(intersect_in_gap(a, Line::new(1.0, 1.0), (0.0, 1.0)), None);
        assert_eq!(intersect_in_gap(a, a, (3.0, 4.0)), Some(3.5));
        // meets exactly at the left end of the gap
        assert_eq!(intersect_in_gap(a, Line::new(2.0, -3.0), (3.0, 4.0)), None);
        assert_eq!(intersect_in_gap(a, Line::new(2.0, -4.0), (3.0, 4.0)), None);
        assert_eq!(
            intersect_in_gap(a, Line::new(2.0, -3.5), (3.0, 4.0)),
            Some(3.5)
        );
    }

    #[test]
    fn assembles_three_segments() {
        let d = dilution();
        let fits = vec![
            fit_fixed_knots(&d, 0, 10, &[]).unwrap(),
            fit_fixed_knots(&d, 11, 12, &[]).unwrap(),
            fit_fixed_knots(&d, 13, 19, &[]).unwrap(),
        ];
        let c = assemble(&fits, &[10, 12], &d, PositionVector::new(vec![20, 24])).unwrap();
        let knots = c.knots();
        assert_eq!(knots.len(), 2);
        assert!((knots[0] - 10.28981).abs() < 1e-3, "{knots:?}");
        assert!((knots[1] - 12.25123).abs() < 1e-3, "{knots:?}");
        assert!((c.residual - 5.7246).abs() < 1e-3, "{}", c.residual);
        assert!((residual_norm(&d, &c.spline) - c.residual).abs() < 1e-9 * c.residual);
        // agrees with each segment fit on its data
        for (fit, (lo, hi)) in fits.iter().zip([(0, 10), (11, 12), (13, 19)]) {
            for i in lo..=hi {
                assert!((c.spline.eval(d.x(i)) - fit.fit.eval(d.x(i))).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn single_segment_is_the_fit_itself() {
        let d = dilution();
        let fit = fit_fixed_knots(&d, 0, 19, &[9, 13]).unwrap();
        let c = assemble(
            std::slice::from_ref(&fit),
            &[],
            &d,
            PositionVector::new(vec![17, 25]),
        )
        .unwrap();
        assert_eq!(c.spline, fit.fit);
        assert_eq!(c.residual, fit.residual_sq.sqrt());
    }

    #[test]
    fn parallel_boundary_pieces_are_rejected() {
        let d = DataSet::new(
            (0..6).map(f64::from).collect(),
            vec![0.0, 1.0, 2.0, 5.0, 6.0, 7.0],
        )
        .unwrap();
        let fits = vec![
            fit_fixed_knots(&d, 0, 2, &[]).unwrap(),
            fit_fixed_knots(&d, 3, 5, &[]).unwrap(),
        ];
        assert!(assemble(&fits, &[2], &d, PositionVector::new(vec![4])).is_none());
    }

    #[test]
    fn knot_classification() {
        let line = BrokenLine::new(vec![0.0, 1.0, 2.5, 4.0], vec![1.0, 3.0, 6.0, 9.0]).unwrap();
        let c = Candidate {
            spline: line,
            residual: 0.0,
            source_vector: PositionVector::new(vec![1, 3]),
        };
        assert_eq!(
            classify_knots(&c, 1e-9),
            vec![KnotKind::Improper, KnotKind::Improper]
        );
        let kinked = BrokenLine::new(vec![0.0, 1.0, 2.0, 4.0], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let c = Candidate {
            spline: kinked,
            ..c
        };
        assert_eq!(
            classify_knots(&c, 1e-9),
            vec![KnotKind::Proper, KnotKind::Proper]
        );
    }
}
