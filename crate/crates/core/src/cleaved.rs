//! Cleaved links: the generators of the modules I_{2n}.
//!
//! A cleaved link on 2n marked equator points is a triple (inside matching,
//! outside matching, decoration), where the decoration assigns a sign to each
//! circle traced out by the two matchings. I_{2n} is the free module on these
//! generators; this module provides the canonical enumeration, the basis
//! index, the decoration-flipping conjugation, and the pairing dual.

use crate::combinatorics::{
    enumerate_noncrossing, trace_cycles, CyclePartition, NoncrossingMatching,
};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Circle decoration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// +1 or -1, as the sign in weight exponents.
    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Render a decoration vector as a string of +/- characters.
pub fn signs_to_string(signs: &[Sign]) -> String {
    if signs.is_empty() {
        return "".to_string();
    }
    signs.iter().map(|s| s.to_string()).collect()
}

pub fn signs_from_str(text: &str) -> Option<Vec<Sign>> {
    text.chars()
        .map(|c| match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        })
        .collect()
}

/// Basis element of I_{2n}: matchings on both sides of the equator plus one
/// sign per circle, indexed in canonical cycle order (ascending minimal
/// point).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CleavedLink {
    inside: NoncrossingMatching,
    outside: NoncrossingMatching,
    decorations: Vec<Sign>,
}

impl CleavedLink {
    pub fn new(
        inside: NoncrossingMatching,
        outside: NoncrossingMatching,
        decorations: Vec<Sign>,
    ) -> Self {
        assert_eq!(inside.n(), outside.n(), "matchings on different point sets");
        let cycles = trace_cycles(&inside, &outside);
        assert_eq!(
            decorations.len(),
            cycles.count(),
            "decoration count must equal circle count"
        );
        CleavedLink {
            inside,
            outside,
            decorations,
        }
    }

    pub fn n(&self) -> u32 {
        self.inside.n()
    }

    pub fn inside(&self) -> &NoncrossingMatching {
        &self.inside
    }

    pub fn outside(&self) -> &NoncrossingMatching {
        &self.outside
    }

    pub fn decorations(&self) -> &[Sign] {
        &self.decorations
    }

    pub fn cycles(&self) -> CyclePartition {
        trace_cycles(&self.inside, &self.outside)
    }

    /// All decorations flipped.
    pub fn conjugated(&self) -> CleavedLink {
        CleavedLink {
            inside: self.inside.clone(),
            outside: self.outside.clone(),
            decorations: self.decorations.iter().map(|s| s.flipped()).collect(),
        }
    }

    /// The unique basis element pairing with this one to 1 under the annular
    /// pairing: the two matchings swap roles under the relabeling
    /// p -> 2n+1-p, and each circle keeps its decoration.
    pub fn dual(&self) -> CleavedLink {
        let inside = self.outside.reflected();
        let outside = self.inside.reflected();
        let size = self.inside.size();
        let own_cycles = self.cycles();
        let dual_cycles = trace_cycles(&inside, &outside);
        let decorations = dual_cycles
            .cycles
            .iter()
            .map(|cycle| {
                // the circle through dual point p is the circle through
                // original point 2n+1-p
                let original = size + 1 - cycle[0];
                self.decorations[own_cycles.cycle_of(original)]
            })
            .collect();
        CleavedLink {
            inside,
            outside,
            decorations,
        }
    }
}

impl fmt::Display for CleavedLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "in={}; out={}; dec={}",
            self.inside,
            self.outside,
            signs_to_string(&self.decorations)
        )?;
        if let Some(label) = display_label(self) {
            write!(f, " [{}]", label)?;
        }
        Ok(())
    }
}

/// dim I_{2n} without enumerating: the sum of 2^{#circles} over all pairs
/// of noncrossing matchings.
pub fn dimension(n: u32) -> u64 {
    let matchings = enumerate_noncrossing(n);
    matchings
        .iter()
        .flat_map(|a| {
            matchings
                .iter()
                .map(move |b| 1u64 << trace_cycles(a, b).count())
        })
        .sum()
}

/// All cleaved links on 2n points, ordered lexicographically by
/// (inside, outside, decoration vector) with + before -.
pub fn enumerate_cleaved(n: u32) -> Vec<CleavedLink> {
    let matchings = enumerate_noncrossing(n);
    let mut out = Vec::new();
    for inside in &matchings {
        for outside in &matchings {
            let k = trace_cycles(inside, outside).count();
            for bits in 0..(1u64 << k) {
                // binary counter, + before -, first cycle most significant
                let decorations = (0..k)
                    .map(|c| {
                        if bits >> (k - 1 - c) & 1 == 0 {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        }
                    })
                    .collect();
                out.push(CleavedLink {
                    inside: inside.clone(),
                    outside: outside.clone(),
                    decorations,
                });
            }
        }
    }
    out
}

/// Canonical basis of I_{2n} with position lookup.
#[derive(Debug)]
pub struct CleavedBasis {
    n: u32,
    elems: Vec<CleavedLink>,
    index: HashMap<CleavedLink, usize>,
}

impl PartialEq for CleavedBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}
impl Eq for CleavedBasis {}

impl CleavedBasis {
    pub fn new(n: u32) -> Self {
        let elems = enumerate_cleaved(n);
        let index = elems
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        CleavedBasis { n, elems, index }
    }

    /// Shared, memoized basis.
    pub fn shared(n: u32) -> Arc<CleavedBasis> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CleavedBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(CleavedBasis::new(n)))
            .clone()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[CleavedLink] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &CleavedLink {
        &self.elems[i]
    }

    pub fn index_of(&self, link: &CleavedLink) -> Option<usize> {
        self.index.get(link).copied()
    }
}

fn nested(n2_pairs: &[(u32, u32)]) -> NoncrossingMatching {
    NoncrossingMatching::try_from_pairs(2, n2_pairs).unwrap()
}

/// The named generators of I_4. The letter fixes the pair of matchings and
/// the subscripts give the circle decorations in canonical cycle order
/// (circle through point 1 first):
///
/// - `A_s`: inside 1-4,2-3; outside 1-2,3-4 (one circle)
/// - `B_{s1 s2}`: inside 1-4,2-3; outside 1-4,2-3 (circles {1,4}, {2,3})
/// - `C_{s1 s2}`: inside 1-2,3-4; outside 1-2,3-4 (circles {1,2}, {3,4})
/// - `D_s`: inside 1-2,3-4; outside 1-4,2-3 (one circle)
pub fn named_generator(label: &str) -> Option<CleavedLink> {
    let (letter, subscript) = label.split_at(1);
    let signs = signs_from_str(subscript)?;
    let adj = nested(&[(1, 2), (3, 4)]);
    let nest = nested(&[(1, 4), (2, 3)]);
    let (inside, outside, circles) = match letter {
        "A" => (nest.clone(), adj.clone(), 1),
        "B" => (nest.clone(), nest.clone(), 2),
        "C" => (adj.clone(), adj.clone(), 2),
        "D" => (adj, nest, 1),
        _ => return None,
    };
    if signs.len() != circles {
        return None;
    }
    Some(CleavedLink::new(inside, outside, signs))
}

/// Short name for generators of I_0, I_2, and I_4.
pub fn display_label(link: &CleavedLink) -> Option<String> {
    match link.n() {
        0 => Some("I_0".to_string()),
        1 => Some(format!("I_{}", link.decorations[0])),
        2 => {
            let adj = nested(&[(1, 2), (3, 4)]);
            let letter = match (link.inside == adj, link.outside == adj) {
                (false, true) => "A",
                (false, false) => "B",
                (true, true) => "C",
                (true, false) => "D",
            };
            Some(format!("{}{}", letter, signs_to_string(&link.decorations)))
        }
        _ => None,
    }
}

/// The display order used for I_4 throughout:
/// C++, C-+, C+-, C--, D+, D-, A+, A-, B++, B+-, B-+, B--.
pub const I4_LABELS: [&str; 12] = [
    "C++", "C-+", "C+-", "C--", "D+", "D-", "A+", "A-", "B++", "B+-", "B-+", "B--",
];

/// Basis of I_{2n} in display order: the named order above for n = 2, the
/// canonical enumeration otherwise.
pub fn display_basis(n: u32) -> Vec<CleavedLink> {
    if n == 2 {
        I4_LABELS
            .iter()
            .map(|l| named_generator(l).unwrap())
            .collect()
    } else {
        enumerate_cleaved(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_dimensions() {
        assert_eq!(enumerate_cleaved(0).len(), 1);
        assert_eq!(enumerate_cleaved(1).len(), 2);
        assert_eq!(enumerate_cleaved(2).len(), 12);
    }

    #[test]
    fn dimension_matches_cycle_count_oracle() {
        // independent route: sum 2^{#cycles} over all matching pairs
        for n in 0..=3u32 {
            let ms = enumerate_noncrossing(n);
            let total: usize = ms
                .iter()
                .flat_map(|a| ms.iter().map(move |b| 1usize << trace_cycles(a, b).count()))
                .sum();
            assert_eq!(enumerate_cleaved(n).len(), total);
        }
    }

    #[test]
    fn dimension_i6_regression() {
        assert_eq!(enumerate_cleaved(3).len(), 104);
        assert_eq!(dimension(3), 104);
    }

    #[test]
    fn dimension_agrees_with_enumeration() {
        for n in 0..=4u32 {
            assert_eq!(dimension(n), enumerate_cleaved(n).len() as u64);
        }
    }

    #[test]
    fn conjugation_examples() {
        let i_plus = &enumerate_cleaved(1)[0];
        let i_minus = &enumerate_cleaved(1)[1];
        assert_eq!(i_plus.decorations(), &[Sign::Plus]);
        assert_eq!(&i_plus.conjugated(), i_minus);

        let b_pm = named_generator("B+-").unwrap();
        let b_mp = named_generator("B-+").unwrap();
        assert_eq!(b_pm.conjugated(), b_mp);

        let i0 = &enumerate_cleaved(0)[0];
        assert_eq!(&i0.conjugated(), i0);
    }

    #[test]
    fn conjugation_is_involution() {
        for n in 0..=2u32 {
            for l in enumerate_cleaved(n) {
                assert_eq!(l.conjugated().conjugated(), l);
            }
        }
    }

    #[test]
    fn dual_examples() {
        // n = 1: the single circle crosses both discs of the pairing, so
        // I_+ and I_- are self-dual
        for l in enumerate_cleaved(1) {
            assert_eq!(l.dual(), l);
        }
        let i0 = &enumerate_cleaved(0)[0];
        assert_eq!(&i0.dual(), i0);
    }

    #[test]
    fn dual_is_involution() {
        for n in 0..=3u32 {
            for l in enumerate_cleaved(n) {
                assert_eq!(l.dual().dual(), l);
            }
        }
    }

    #[test]
    fn dual_commutes_with_conjugation() {
        for n in 0..=2u32 {
            for l in enumerate_cleaved(n) {
                assert_eq!(l.dual().conjugated(), l.conjugated().dual());
            }
        }
    }

    #[test]
    fn basis_index_is_bijective() {
        for n in 0..=3u32 {
            let basis = CleavedBasis::new(n);
            for (i, l) in basis.elems().iter().enumerate() {
                assert_eq!(basis.index_of(l), Some(i));
            }
        }
    }

    #[test]
    fn named_generators_cover_i4() {
        let basis = CleavedBasis::new(2);
        let mut seen = [false; 12];
        for label in I4_LABELS {
            let link = named_generator(label).unwrap();
            let idx = basis.index_of(&link).unwrap();
            assert!(!seen[idx]);
            seen[idx] = true;
            assert_eq!(display_label(&link).unwrap(), label);
        }
        assert!(seen.iter().all(|&b| b));
    }
}
