//! Noncrossing perfect matchings on cyclically ordered points, and the cycle
//! structure of a pair of matchings.
//!
//! Points on a boundary circle are numbered 1..2n along the orientation,
//! starting after the marked point. The marked point cuts the circle, so
//! noncrossing in the cyclic order coincides with noncrossing in the linear
//! order.

use std::fmt;

/// Perfect matching of the points 1..2n with no interleaved pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NoncrossingMatching {
    /// partner[k] is the (1-based) partner of point k+1
    partner: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    PointOutOfRange(u32),
    NotInvolution,
    FixedPoint(u32),
    Crossing((u32, u32), (u32, u32)),
    Parse(String),
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::PointOutOfRange(p) => write!(f, "point {} out of range", p),
            MatchingError::NotInvolution => write!(f, "pairs do not form an involution"),
            MatchingError::FixedPoint(p) => write!(f, "point {} is matched to itself", p),
            MatchingError::Crossing(a, b) => {
                write!(f, "pairs {}-{} and {}-{} cross", a.0, a.1, b.0, b.1)
            }
            MatchingError::Parse(s) => write!(f, "bad matching syntax: {}", s),
        }
    }
}

impl std::error::Error for MatchingError {}

/// True iff no two pairs interleave in the cyclic order on 1..2n.
///
/// Pairs {a,b} and {c,d} cross when exactly one of c, d lies strictly
/// between a and b.
pub fn is_noncrossing(pairs: &[(u32, u32)]) -> bool {
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        for &(c, d) in &pairs[i + 1..] {
            let c_in = a < c && c < b;
            let d_in = a < d && d < b;
            if c_in != d_in {
                return false;
            }
        }
    }
    true
}

impl NoncrossingMatching {
    /// The empty matching (n = 0).
    pub fn empty() -> Self {
        NoncrossingMatching { partner: vec![] }
    }

    /// Half the number of points.
    pub fn n(&self) -> u32 {
        (self.partner.len() / 2) as u32
    }

    /// Number of points, 2n.
    pub fn size(&self) -> u32 {
        self.partner.len() as u32
    }

    pub fn partner_of(&self, p: u32) -> u32 {
        self.partner[(p - 1) as usize]
    }

    /// Pairs (a, b) with a < b, ascending in a.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.partner.len() / 2);
        for p in 1..=self.size() {
            let q = self.partner_of(p);
            if p < q {
                out.push((p, q));
            }
        }
        out
    }

    /// Validating constructor from unordered pairs.
    pub fn try_from_pairs(n: u32, pairs: &[(u32, u32)]) -> Result<Self, MatchingError> {
        let size = 2 * n as usize;
        let mut partner = vec![0u32; size];
        for &(a, b) in pairs {
            for &p in &[a, b] {
                if p == 0 || p as usize > size {
                    return Err(MatchingError::PointOutOfRange(p));
                }
            }
            if a == b {
                return Err(MatchingError::FixedPoint(a));
            }
            for &(p, q) in &[(a, b), (b, a)] {
                let slot = &mut partner[(p - 1) as usize];
                if *slot != 0 && *slot != q {
                    return Err(MatchingError::NotInvolution);
                }
                *slot = q;
            }
        }
        if partner.contains(&0) {
            return Err(MatchingError::NotInvolution);
        }
        let m = NoncrossingMatching { partner };
        let ps = m.pairs();
        for (i, &a) in ps.iter().enumerate() {
            for &b in &ps[i + 1..] {
                if !is_noncrossing(&[a, b]) {
                    return Err(MatchingError::Crossing(a, b));
                }
            }
        }
        Ok(m)
    }

    /// Relabel every point p as 2n+1-p. The result of reflecting the disc.
    pub fn reflected(&self) -> Self {
        let size = self.size();
        let mut partner = vec![0u32; size as usize];
        for p in 1..=size {
            let q = self.partner_of(p);
            partner[(size - p) as usize] = size + 1 - q;
        }
        NoncrossingMatching { partner }
    }

    /// Text form "1-4,2-3"; the empty matching prints as "-".
    pub fn parse(text: &str) -> Result<Self, MatchingError> {
        let text = text.trim();
        if text == "-" || text.is_empty() {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for chunk in text.split(',') {
            let mut it = chunk.trim().split('-');
            let a = it
                .next()
                .and_then(|s| s.trim().parse::<u32>().ok())
                .ok_or_else(|| MatchingError::Parse(chunk.to_string()))?;
            let b = it
                .next()
                .and_then(|s| s.trim().parse::<u32>().ok())
                .ok_or_else(|| MatchingError::Parse(chunk.to_string()))?;
            if it.next().is_some() {
                return Err(MatchingError::Parse(chunk.to_string()));
            }
            pairs.push((a, b));
        }
        Self::try_from_pairs(pairs.len() as u32, &pairs)
    }
}

impl fmt::Display for NoncrossingMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() == 0 {
            return write!(f, "-");
        }
        let mut first = true;
        for (a, b) in self.pairs() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}-{}", a, b)?;
            first = false;
        }
        Ok(())
    }
}

/// All noncrossing matchings on 2n points, in lexicographic order of the
/// partner sequence (partner of 1, partner of 2, ...). There are Catalan(n).
pub fn enumerate_noncrossing(n: u32) -> Vec<NoncrossingMatching> {
    let size = 2 * n as usize;
    let mut out = Vec::new();
    let mut partner = vec![0u32; size];
    fill(&mut partner, &mut out);
    out
}

fn fill(partner: &mut Vec<u32>, out: &mut Vec<NoncrossingMatching>) {
    let first = match partner.iter().position(|&p| p == 0) {
        None => {
            out.push(NoncrossingMatching {
                partner: partner.clone(),
            });
            return;
        }
        Some(i) => i,
    };
    // The first unmatched point pairs rightward, skipping odd gaps; a
    // matched point bounds its interval, since pairing past it would cross
    // the pair that point belongs to.
    let size = partner.len();
    let mut gap = 0usize;
    for j in first + 1..size {
        if partner[j] != 0 {
            break;
        }
        if gap.is_multiple_of(2) {
            partner[first] = (j + 1) as u32;
            partner[j] = (first + 1) as u32;
            fill(partner, out);
            partner[first] = 0;
            partner[j] = 0;
        }
        gap += 1;
    }
}

/// Cycles of the union of two perfect matchings on the same point set.
///
/// Each cycle is recorded in walk order, alternating an `inside` arc with an
/// `outside` arc; cycles are listed by ascending minimal point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclePartition {
    pub cycles: Vec<Vec<u32>>,
}

impl CyclePartition {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    /// Index of the cycle containing point p, in canonical cycle order.
    pub fn cycle_of(&self, p: u32) -> usize {
        self.cycles
            .iter()
            .position(|c| c.contains(&p))
            .expect("point not in any cycle")
    }
}

/// Trace the circles formed by an inside matching and an outside matching of
/// the same 2n points.
pub fn trace_cycles(inside: &NoncrossingMatching, outside: &NoncrossingMatching) -> CyclePartition {
    assert_eq!(inside.n(), outside.n(), "matchings on different point sets");
    let size = inside.size();
    let mut seen = vec![false; size as usize + 1];
    let mut cycles = Vec::new();
    for start in 1..=size {
        if seen[start as usize] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut p = start;
        loop {
            cycle.push(p);
            seen[p as usize] = true;
            let q = inside.partner_of(p);
            cycle.push(q);
            seen[q as usize] = true;
            p = outside.partner_of(q);
            if p == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    CyclePartition { cycles }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u32, pairs: &[(u32, u32)]) -> NoncrossingMatching {
        NoncrossingMatching::try_from_pairs(n, pairs).unwrap()
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_noncrossing(0), vec![NoncrossingMatching::empty()]);
        assert_eq!(
            enumerate_noncrossing(2),
            vec![m(2, &[(1, 2), (3, 4)]), m(2, &[(1, 4), (2, 3)])]
        );
        assert_eq!(enumerate_noncrossing(3).len(), 5);
    }

    #[test]
    fn catalan_counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430];
        for n in 0..=8u32 {
            assert_eq!(enumerate_noncrossing(n).len(), catalan[n as usize]);
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        for n in 0..=6u32 {
            let all = enumerate_noncrossing(n);
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(all, sorted);
        }
    }

    #[test]
    fn crossing_detection() {
        assert!(!is_noncrossing(&[(1, 3), (2, 4)]));
        assert!(is_noncrossing(&[(1, 2), (3, 4)]));
        assert!(is_noncrossing(&[(1, 6), (2, 3), (4, 5)]));
    }

    #[test]
    fn rejects_crossing_pairs() {
        assert!(matches!(
            NoncrossingMatching::try_from_pairs(2, &[(1, 3), (2, 4)]),
            Err(MatchingError::Crossing(_, _))
        ));
    }

    #[test]
    fn trace_examples() {
        // same nested matching on both sides: two circles
        let nested = m(2, &[(1, 4), (2, 3)]);
        let adj = m(2, &[(1, 2), (3, 4)]);
        let two = trace_cycles(&nested, &nested);
        assert_eq!(two.count(), 2);
        assert_eq!(two.cycles[0], vec![1, 4]);
        assert_eq!(two.cycles[1], vec![2, 3]);
        // nested against adjacent: a single circle through all four points
        let one = trace_cycles(&nested, &adj);
        assert_eq!(one.count(), 1);
        assert_eq!(one.cycles[0].len(), 4);
        // n = 1: the only option
        let tiny = m(1, &[(1, 2)]);
        assert_eq!(trace_cycles(&tiny, &tiny).cycles, vec![vec![1, 2]]);
    }

    #[test]
    fn trace_is_symmetric_as_partition() {
        for a in enumerate_noncrossing(3) {
            for b in enumerate_noncrossing(3) {
                let ab = trace_cycles(&a, &b);
                let ba = trace_cycles(&b, &a);
                let norm = |cp: &CyclePartition| -> Vec<Vec<u32>> {
                    cp.cycles
                        .iter()
                        .map(|c| {
                            let mut c = c.clone();
                            c.sort();
                            c
                        })
                        .collect()
                };
                assert_eq!(norm(&ab), norm(&ba));
            }
        }
    }

    #[test]
    fn cycles_alternate_and_are_even() {
        for a in enumerate_noncrossing(3) {
            for b in enumerate_noncrossing(3) {
                for cycle in trace_cycles(&a, &b).cycles {
                    assert_eq!(cycle.len() % 2, 0);
                    for (i, &p) in cycle.iter().enumerate() {
                        let next = cycle[(i + 1) % cycle.len()];
                        if i % 2 == 0 {
                            assert_eq!(a.partner_of(p), next);
                        } else {
                            assert_eq!(b.partner_of(p), next);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decorated_filling_counts() {
        // sum of 2^{#cycles} over matching pairs: 1, 2, 12 for n = 0, 1, 2
        for (n, expected) in [(0u32, 1u64), (1, 2), (2, 12)] {
            let all = enumerate_noncrossing(n);
            let total: u64 = all
                .iter()
                .flat_map(|a| {
                    all.iter()
                        .map(move |b| 1u64 << trace_cycles(a, b).count())
                })
                .sum();
            assert_eq!(total, expected);
        }
    }

    #[test]
    fn reflection() {
        let nested = m(2, &[(1, 4), (2, 3)]);
        assert_eq!(nested.reflected(), nested);
        let mm = m(3, &[(1, 2), (3, 6), (4, 5)]);
        assert_eq!(mm.reflected(), m(3, &[(5, 6), (1, 4), (2, 3)]));
    }

    #[test]
    fn matching_text_round_trip() {
        for n in 0..=4u32 {
            for mt in enumerate_noncrossing(n) {
                assert_eq!(NoncrossingMatching::parse(&mt.to_string()).unwrap(), mt);
            }
        }
        assert!(NoncrossingMatching::parse("1-").is_err());
    }
}
