//! Segments induced by a regular position vector.
//!
//! Every interior knot (even code `2i`) splits the data between `x_i` and
//! `x_{i+1}`. The runs of abscissae between consecutive splits are the
//! segments; odd codes inside a segment become fixed data knots of that
//! segment's fit.

use crate::error::{Error, Result};
use crate::position::{is_regular_slice, PositionVector};

/// An inclusive index range `[lo, hi]` of the data with the data knots strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segment {
    pub lo: usize,
    pub hi: usize,
    pub knots: Vec<usize>,
}

impl Segment {
    pub fn point_count(&self) -> usize {
        self.hi - self.lo + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segmentation {
    pub segments: Vec<Segment>,
    /// Gap `l` is the open interval `(x_i, x_{i+1})` holding interior knot `l`,
    /// stored as `i`.
    pub gaps: Vec<usize>,
}

impl Segmentation {
    /// Number of interior knots.
    pub fn interior_count(&self) -> usize {
        self.gaps.len()
    }

    /// Reconstructs the position vector from the segments and gaps.
    pub fn encode(&self) -> PositionVector {
        let mut codes = Vec::new();
        for (l, seg) in self.segments.iter().enumerate() {
            if l > 0 {
                codes.push(2 * self.gaps[l - 1] as u32);
            }
            codes.extend(seg.knots.iter().map(|&i| 2 * i as u32 - 1));
        }
        PositionVector::new(codes)
    }
}

/// Splits `0..=mu+1` into the segments of a regular vector.
pub fn segmentize(p: &PositionVector, mu: usize) -> Result<Segmentation> {
    if !is_regular_slice(p.components(), mu) {
        return Err(Error::NotRegular(p.components().to_vec()));
    }
    let mut out = Segmentation::default();
    segmentize_into(p.components(), mu, &mut out);
    Ok(out)
}

/// Fills `out` in place, reusing its buffers. `p` must be regular.
pub(crate) fn segmentize_into(p: &[u32], mu: usize, out: &mut Segmentation) {
    let interior = p.iter().filter(|&&c| c % 2 == 0).count();
    out.gaps.clear();
    out.segments.resize_with(interior + 1, Segment::default);
    let mut lo = 0;
    let mut l = 0;
    out.segments[0].knots.clear();
    for &c in p {
        if c % 2 == 0 {
            let i = (c / 2) as usize;
            out.segments[l].lo = lo;
            out.segments[l].hi = i;
            out.gaps.push(i);
            l += 1;
            lo = i + 1;
            out.segments[l].knots.clear();
        } else {
            out.segments[l].knots.push(c.div_ceil(2) as usize);
        }
    }
    out.segments[l].lo = lo;
    out.segments[l].hi = mu + 1;
    debug_assert!(out.segments.iter().all(|s| s.hi > s.lo));
}
