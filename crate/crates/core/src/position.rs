//! Position vectors: integer codes for where knots sit relative to the data.
//!
//! For data `x_0 < ... < x_{mu+1}`, a knot at the abscissa `x_i` is coded `2i - 1`
//! and a knot strictly inside `(x_i, x_{i+1})` is coded `2i`. A vector of `k`
//! such codes describes the knot layout of a broken line with `k` knots.
//!
//! Only *regular* vectors are ever needed by the search; they are streamed in
//! lexicographic order by [`RegularVectors`] and counted independently by
//! [`count_regular`].

use std::fmt;

use crate::error::{Error, Result};

/// Knot codes `p(1..=k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionVector(Vec<u32>);

impl PositionVector {
    pub fn new(components: Vec<u32>) -> Self {
        Self(components)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    /// Checks the general position-vector bounds for `mu` inner abscissae:
    /// `0 <= p(j) <= p(j+1) <= 2mu`, equality only between even codes.
    pub fn validate(&self, mu: usize) -> Result<()> {
        validate_components(&self.0, mu)
    }

    pub fn decode(&self, mu: usize) -> Result<KnotPlacement> {
        decode(self, mu)
    }
}

impl From<Vec<u32>> for PositionVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for PositionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn validate_components(p: &[u32], mu: usize) -> Result<()> {
    let invalid = |reason: String| Error::InvalidPositionVector {
        vector: p.to_vec(),
        reason,
    };
    let top = 2 * mu as u64;
    for (j, &c) in p.iter().enumerate() {
        if c as u64 > top {
            return Err(invalid(format!(
                "component {} = {c} exceeds 2mu = {top}",
                j + 1
            )));
        }
    }
    for (j, w) in p.windows(2).enumerate() {
        if w[1] < w[0] {
            return Err(invalid(format!(
                "components {} and {} decrease",
                j + 1,
                j + 2
            )));
        }
        if w[1] == w[0] && w[0] % 2 == 1 {
            return Err(invalid(format!(
                "components {} and {} repeat the odd code {}",
                j + 1,
                j + 2,
                w[0]
            )));
        }
    }
    Ok(())
}

/// Where a single knot lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnotPosition {
    /// The knot coincides with the abscissa `x_i`.
    Data(usize),
    /// The knot lies strictly inside `(x_i, x_{i+1})`.
    Interval(usize),
}

impl KnotPosition {
    pub fn code(self) -> u32 {
        match self {
            KnotPosition::Data(i) => (2 * i - 1) as u32,
            KnotPosition::Interval(i) => (2 * i) as u32,
        }
    }

    pub fn from_code(code: u32) -> Self {
        if code % 2 == 1 {
            KnotPosition::Data(code.div_ceil(2) as usize)
        } else {
            KnotPosition::Interval((code / 2) as usize)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotPlacement(pub Vec<KnotPosition>);

impl KnotPlacement {
    pub fn positions(&self) -> &[KnotPosition] {
        &self.0
    }
}

pub fn decode(p: &PositionVector, mu: usize) -> Result<KnotPlacement> {
    p.validate(mu)?;
    Ok(KnotPlacement(
        p.0.iter().map(|&c| KnotPosition::from_code(c)).collect(),
    ))
}

pub fn encode(placement: &KnotPlacement) -> Result<PositionVector> {
    if placement.0.contains(&KnotPosition::Data(0)) {
        return Err(Error::InvalidPositionVector {
            vector: vec![],
            reason: "a knot cannot coincide with x_0".into(),
        });
    }
    let codes: Vec<u32> = placement.0.iter().map(|k| k.code()).collect();
    let max = codes.iter().copied().max().unwrap_or(0) as usize;
    validate_components(&codes, max.div_ceil(2))?;
    Ok(PositionVector(codes))
}

/// Regularity test, conditions (a) to (d) taken literally on the codes.
pub fn is_regular(p: &PositionVector, mu: usize) -> bool {
    is_regular_slice(&p.0, mu)
}

pub(crate) fn is_regular_slice(p: &[u32], mu: usize) -> bool {
    let k = p.len();
    let top = 2 * mu as i64 - 1;
    // (a)
    if p.iter().any(|&c| c == 0 || c as i64 > top) {
        return false;
    }
    for j in 0..k {
        if !p[j].is_multiple_of(2) {
            continue;
        }
        // (b)
        if p[..j].iter().any(|&c| c + 1 == p[j]) || p[j + 1..].iter().any(|&c| c == p[j] + 1) {
            return false;
        }
        // (c): next even component after l odd ones
        if let Some(off) = p[j + 1..].iter().position(|&c| c % 2 == 0) {
            let next = p[j + 1 + off];
            let l = off as i64;
            if ((next / 2) as i64) - ((p[j] / 2) as i64) < 2 + l {
                return false;
            }
        }
    }
    // (d)
    p.windows(2).all(|w| {
        let gap = w[1] as i64 - w[0] as i64;
        let need = if w[0] % 2 == 0 && w[1] % 2 == 0 { 4 } else { 2 };
        gap >= need
    })
}

/// Evaluates the geometric knot features directly on a concrete knot layout.
///
/// The abscissae are realized as `x_i = i` and knots are placed at real
/// positions; the features are then checked as statements about real numbers:
///
/// * (a) `x_1 <= t_1` and `t_k <= x_mu`;
/// * (b) abscissae adjacent to an interior knot are not knots;
/// * (c) between any two interior knots lie at least two abscissae that are not knots;
/// * (d) on or between neighboring knots (including `x_0` and `x_{mu+1}`) lie two
///   consecutive abscissae.
///
/// This shares no code with [`is_regular`] and serves as its cross-check.
pub fn theorem12_features_abcd(p: &PositionVector, mu: usize) -> bool {
    if p.validate(mu).is_err() {
        return false;
    }
    let knots = realize_knots(&p.0);
    let n_abscissae = mu + 2;
    let abscissa = |i: usize| i as f64;
    let is_knot = |x: f64| knots.contains(&x);
    let is_interior = |t: f64| t.fract() != 0.0;

    // (a)
    if let (Some(&first), Some(&last)) = (knots.first(), knots.last()) {
        if first < abscissa(1) || last > abscissa(mu) {
            return false;
        }
    }
    // (b)
    for &t in knots.iter().filter(|t| is_interior(**t)) {
        if is_knot(t.floor()) || is_knot(t.ceil()) {
            return false;
        }
    }
    // (c)
    let interior: Vec<f64> = knots.iter().copied().filter(|t| is_interior(*t)).collect();
    for (a, &lo) in interior.iter().enumerate() {
        for &hi in &interior[a + 1..] {
            let free = (0..n_abscissae)
                .map(abscissa)
                .filter(|&x| lo < x && x < hi && !is_knot(x))
                .count();
            if free < 2 {
                return false;
            }
        }
    }
    // (d)
    let mut bounds = Vec::with_capacity(knots.len() + 2);
    bounds.push(abscissa(0));
    bounds.extend_from_slice(&knots);
    bounds.push(abscissa(mu + 1));
    bounds
        .windows(2)
        .all(|w| (0..n_abscissae - 1).any(|i| w[0] <= abscissa(i) && abscissa(i + 1) <= w[1]))
}

/// Concrete knot positions for codes on the abscissae `x_i = i`; knots sharing
/// an interval are spread evenly inside it.
fn realize_knots(p: &[u32]) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.len());
    let mut j = 0;
    while j < p.len() {
        let c = p[j];
        if c % 2 == 1 {
            out.push(c.div_ceil(2) as f64);
            j += 1;
            continue;
        }
        let run = p[j..].iter().take_while(|&&d| d == c).count();
        let base = (c / 2) as f64;
        for m in 0..run {
            out.push(base + (m + 1) as f64 / (run + 1) as f64);
        }
        j += run;
    }
    out
}

/// Streams regular position vectors of length `k` in lexicographic order.
///
/// The search walks strictly increasing code sequences over `1..=2mu-1` depth
/// first and cuts every prefix that already violates a regularity condition, so
/// the work stays proportional to the number of regular vectors. Memory use is
/// `O(k)` regardless of how many vectors are produced.
#[derive(Debug, Clone)]
pub struct RegularVectors {
    mu: u32,
    k: usize,
    /// Depth at which a vector is emitted; `k` for full vectors, less for prefixes.
    emit_depth: usize,
    fixed: usize,
    cur: Vec<u32>,
    state: WalkState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WalkState {
    Fresh,
    Emitted,
    Done,
}

impl RegularVectors {
    pub fn new(mu: usize, k: usize) -> Result<Self> {
        Self::with_prefix(mu, k, &[])
    }

    /// All regular vectors starting with `prefix`.
    pub fn with_prefix(mu: usize, k: usize, prefix: &[u32]) -> Result<Self> {
        check_sizes(mu, k)?;
        if prefix.len() > k {
            return Err(Error::precondition("prefix longer than the vector"));
        }
        let mut walk = Self {
            mu: mu as u32,
            k,
            emit_depth: k,
            fixed: prefix.len(),
            cur: Vec::with_capacity(k),
            state: WalkState::Fresh,
        };
        for &c in prefix {
            if !walk.admissible(c) {
                walk.state = WalkState::Done;
                break;
            }
            walk.cur.push(c);
        }
        Ok(walk)
    }

    /// Regular prefixes of length `len`, each extendable by at least the spacing rules.
    pub fn prefixes(mu: usize, k: usize, len: usize) -> Result<Self> {
        let mut walk = Self::new(mu, k)?;
        walk.emit_depth = len.min(k);
        Ok(walk)
    }

    /// Advances to the next vector and returns it without allocating.
    pub fn advance(&mut self) -> Option<&[u32]> {
        match self.state {
            WalkState::Done => return None,
            WalkState::Fresh => self.state = WalkState::Emitted,
            WalkState::Emitted => {
                if !self.step_back() {
                    self.state = WalkState::Done;
                    return None;
                }
            }
        }
        while self.cur.len() < self.emit_depth {
            let start = self.cur.last().map_or(1, |&v| v + 2);
            match self.first_admissible(start) {
                Some(w) => self.cur.push(w),
                None => {
                    if !self.step_back() {
                        self.state = WalkState::Done;
                        return None;
                    }
                }
            }
        }
        Some(&self.cur)
    }

    /// Replaces the deepest free component by its next admissible value,
    /// popping exhausted levels. Returns false when the walk is finished.
    fn step_back(&mut self) -> bool {
        while self.cur.len() > self.fixed {
            let last = self.cur.pop().expect("non-empty");
            if let Some(w) = self.first_admissible(last + 1) {
                self.cur.push(w);
                return true;
            }
        }
        false
    }

    fn first_admissible(&self, from: u32) -> Option<u32> {
        let remaining_after = (self.k - self.cur.len() - 1) as u32;
        let top = 2 * self.mu - 1;
        // Each later component needs at least two more code units.
        let limit = top.checked_sub(2 * remaining_after)?;
        (from..=limit).find(|&w| self.admissible(w))
    }

    /// Whether `w` may follow the current prefix.
    fn admissible(&self, w: u32) -> bool {
        let top = 2 * self.mu - 1;
        if w == 0 || w > top {
            return false;
        }
        if let Some(&v) = self.cur.last() {
            let need = if v % 2 == 0 && w.is_multiple_of(2) {
                4
            } else {
                2
            };
            if w < v + need {
                return false;
            }
        }
        if w.is_multiple_of(2) {
            // Next interior knot must leave two free abscissae after the previous one.
            let prev_even = self.cur.iter().rev().enumerate().find(|(_, c)| *c % 2 == 0);
            if let Some((odd_since, &c)) = prev_even {
                if w / 2 < c / 2 + 2 + odd_since as u32 {
                    return false;
                }
            }
        }
        true
    }
}

impl Iterator for RegularVectors {
    type Item = PositionVector;

    fn next(&mut self) -> Option<PositionVector> {
        self.advance().map(|v| PositionVector(v.to_vec()))
    }
}

/// Streams the regular vectors of length `k` for `mu` inner abscissae.
pub fn enumerate_regular(mu: usize, k: usize) -> Result<RegularVectors> {
    RegularVectors::new(mu, k)
}

fn check_sizes(mu: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::precondition("need at least one knot (k >= 1)"));
    }
    if mu < k + 1 {
        return Err(Error::precondition(format!(
            "need mu >= k + 1 (at least k + 3 data points); got mu = {mu}, k = {k}"
        )));
    }
    if mu > (u32::MAX / 4) as usize {
        return Err(Error::precondition("too many data points"));
    }
    Ok(())
}

/// Number of regular vectors, by dynamic programming.
///
/// The state after placing some components is the last code `v` and the
/// smallest half-code `h` allowed for the next even component (0 when no even
/// component has appeared). Counts are exact; overflow of `u64` is an error.
pub fn count_regular(mu: usize, k: usize) -> Result<u64> {
    check_sizes(mu, k)?;
    let top = 2 * mu - 1;
    let h_dim = mu + k + 3;
    let idx = |v: usize, h: usize| v * h_dim + h;
    let mut cur = vec![0u64; (top + 1) * h_dim];
    // First component.
    for w in 1..=top {
        let h = if w % 2 == 0 { w / 2 + 2 } else { 0 };
        cur[idx(w, h)] += 1;
    }
    for _ in 1..k {
        let mut next = vec![0u64; (top + 1) * h_dim];
        for v in 1..=top {
            for h in 0..h_dim {
                let n = cur[idx(v, h)];
                if n == 0 {
                    continue;
                }
                for w in v + 2..=top {
                    let nh = if w % 2 == 1 {
                        if h == 0 {
                            0
                        } else {
                            h + 1
                        }
                    } else {
                        if v % 2 == 0 && w < v + 4 {
                            continue;
                        }
                        if h != 0 && w / 2 < h {
                            continue;
                        }
                        w / 2 + 2
                    };
                    // Beyond mu no even code can follow; larger values are equivalent.
                    let nh = nh.min(h_dim - 1);
                    let slot = &mut next[idx(w, nh)];
                    *slot = slot
                        .checked_add(n)
                        .ok_or(Error::Overflow("regular position vectors"))?;
                }
            }
        }
        cur = next;
    }
    cur.iter().try_fold(0u64, |acc, &n| {
        acc.checked_add(n)
            .ok_or(Error::Overflow("regular position vectors"))
    })
}

/// Number of strictly increasing code vectors over `1..=2mu-1`: `C(2mu-1, k)`.
pub fn count_superset(mu: usize, k: usize) -> Result<u64> {
    let n = (2 * mu).saturating_sub(1) as u128;
    let k = k as u128;
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c
            .checked_mul(n - i)
            .ok_or(Error::Overflow("position vectors"))?
            / (i + 1);
        if c > u64::MAX as u128 {
            return Err(Error::Overflow("position vectors"));
        }
    }
    Ok(c as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(v: &[u32]) -> PositionVector {
        PositionVector(v.to_vec())
    }

    /// Every vector satisfying the general bounds, by brute force.
    fn all_valid(mu: usize, k: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(mu: usize, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().copied().unwrap_or(0);
            for c in start..=(2 * mu) as u32 {
                if cur.last() == Some(&c) && c % 2 == 1 {
                    continue;
                }
                cur.push(c);
                rec(mu, k, cur, out);
                cur.pop();
            }
        }
        rec(mu, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn decode_examples() {
        assert_eq!(KnotPosition::from_code(13), KnotPosition::Data(7));
        assert_eq!(KnotPosition::from_code(6), KnotPosition::Interval(3));
        assert_eq!(decode(&pv(&[1]), 5).unwrap().0, vec![KnotPosition::Data(1)]);
        assert!(decode(&pv(&[11]), 5).is_err());
        assert!(decode(&pv(&[3, 3]), 5).is_err());
        assert!(decode(&pv(&[4, 4]), 5).is_ok());
    }

    #[test]
    fn encode_example_layout() {
        use KnotPosition::*;
        let placement = KnotPlacement(vec![Interval(3), Data(7), Data(10), Interval(12), Data(15)]);
        assert_eq!(encode(&placement).unwrap(), pv(&[6, 13, 19, 24, 29]));
        assert_eq!(encode(&KnotPlacement(vec![Data(1)])).unwrap(), pv(&[1]));
        assert!(encode(&KnotPlacement(vec![Data(0)])).is_err());
    }

    #[test]
    fn regularity_examples() {
        assert!(is_regular(&pv(&[6, 13, 19, 24, 29]), 18));
        assert!(theorem12_features_abcd(&pv(&[6, 13, 19, 24, 29]), 18));
        assert!(!is_regular(&pv(&[2, 4]), 5));
        assert!(!is_regular(&pv(&[0, 5]), 5));
        assert!(!theorem12_features_abcd(&pv(&[0, 5]), 5));
        // any odd, gap >= 2
        assert!(is_regular(&pv(&[1, 3, 5, 9]), 5));
        assert!(!is_regular(&pv(&[1, 3, 5, 11]), 5));
    }

    #[test]
    fn regularity_matches_geometric_features() {
        for (mu, k) in [(4, 1), (4, 2), (5, 3), (6, 2), (7, 4)] {
            for v in all_valid(mu, k) {
                let p = PositionVector(v);
                assert_eq!(
                    is_regular(&p, mu),
                    theorem12_features_abcd(&p, mu),
                    "{p} mu={mu}"
                );
            }
        }
    }

    #[test]
    fn enumerator_matches_filtered_brute_force() {
        for mu in 2..=9 {
            for k in 1..=mu - 1 {
                let brute: Vec<Vec<u32>> = all_valid(mu, k)
                    .into_iter()
                    .filter(|v| is_regular(&PositionVector(v.clone()), mu))
                    .collect();
                let streamed: Vec<Vec<u32>> =
                    RegularVectors::new(mu, k).unwrap().map(|p| p.0).collect();
                assert_eq!(streamed, brute, "mu={mu} k={k}");
                assert_eq!(count_regular(mu, k).unwrap(), brute.len() as u64);
            }
        }
    }

    #[test]
    fn k1_closed_form() {
        for mu in 2..40 {
            assert_eq!(count_regular(mu, 1).unwrap(), 2 * mu as u64 - 1);
        }
        assert_eq!(count_regular(13, 1).unwrap(), 25);
    }

    #[test]
    fn prefixes_partition_the_stream() {
        let (mu, k) = (10, 4);
        let all: Vec<_> = RegularVectors::new(mu, k).unwrap().collect();
        for len in 1..=k {
            let mut joined = Vec::new();
            let mut prefixes = RegularVectors::prefixes(mu, k, len).unwrap();
            while let Some(pre) = prefixes.advance() {
                let pre = pre.to_vec();
                joined.extend(RegularVectors::with_prefix(mu, k, &pre).unwrap());
            }
            assert_eq!(joined, all, "prefix length {len}");
        }
    }

    #[test]
    fn superset_counts() {
        assert_eq!(count_superset(18, 7).unwrap(), 6_724_520);
        assert_eq!(count_superset(18, 10).unwrap(), 183_579_396);
        assert_eq!(count_superset(18, 0).unwrap(), 1);
        assert!(matches!(count_superset(5000, 40), Err(Error::Overflow(_))));
    }

    #[test]
    fn count_overflow_is_reported() {
        assert!(matches!(count_regular(400, 30), Err(Error::Overflow(_))));
    }

    #[test]
    fn preconditions() {
        assert!(RegularVectors::new(3, 3).is_err());
        assert!(RegularVectors::new(3, 0).is_err());
        assert!(count_regular(2, 2).is_err());
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(raw in proptest::collection::vec(0u32..40, 1..8)) {
            let mu = 20usize;
            let mut codes = raw;
            codes.sort_unstable();
            codes.dedup_by(|a, b| a == b && *a % 2 == 1);
            let p = PositionVector(codes);
            prop_assume!(p.validate(mu).is_ok());
            let placement = decode(&p, mu).unwrap();
            prop_assert_eq!(encode(&placement).unwrap(), p);
        }

        #[test]
        fn regular_vectors_are_strictly_increasing_inner_codes(mu in 3usize..14, k in 1usize..5) {
            prop_assume!(mu > k);
            let mut prev: Option<PositionVector> = None;
            for p in RegularVectors::new(mu, k).unwrap().take(2000) {
                prop_assert!(p.0.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(p.0.iter().all(|&c| c >= 1 && (c as usize) < 2 * mu));
                prop_assert!(is_regular(&p, mu));
                if let Some(q) = &prev {
                    prop_assert!(q < &p);
                }
                prev = Some(p);
            }
        }
    }
}
