//! Braid words on 2n strands as annular tangles acting on I_{2n}.
//!
//! A braid diagram is wrapped into an annulus: boundary 1 carries the input
//! end of the strands, boundary 0 the output end, and point k of each
//! boundary is the k-th strand position. Strands are oriented from boundary
//! 1 to boundary 0. Concatenating words multiplies the representing
//! matrices in the same order, so the last letter of a word sits next to
//! the input boundary.

use crate::partition::PartitionMatrix;
use crate::tangle::{braid_letter_crossing, Crossing, End, TangleArc, TangleDiagram, TangleError};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BraidError {
    OddStrandCount(u32),
    PositionOutOfRange { position: u32, strands: u32 },
    BadSign(i8),
    Parse(String),
}

impl fmt::Display for BraidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidError::OddStrandCount(s) => {
                write!(f, "strand count {} must be even and positive", s)
            }
            BraidError::PositionOutOfRange { position, strands } => write!(
                f,
                "letter position {} out of range for {} strands",
                position, strands
            ),
            BraidError::BadSign(s) => write!(f, "letter sign {} must be +1 or -1", s),
            BraidError::Parse(tok) => write!(f, "bad braid letter `{}`", tok),
        }
    }
}

impl std::error::Error for BraidError {}

/// A word in the braid group on an even number of strands. Letters are
/// (position, sign) with position in 1..strands-1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<(u32, i8)>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<(u32, i8)>) -> Result<Self, BraidError> {
        if strands == 0 || !strands.is_multiple_of(2) {
            return Err(BraidError::OddStrandCount(strands));
        }
        for &(pos, sign) in &letters {
            if pos == 0 || pos >= strands {
                return Err(BraidError::PositionOutOfRange {
                    position: pos,
                    strands,
                });
            }
            if sign != 1 && sign != -1 {
                return Err(BraidError::BadSign(sign));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Parse letters like `s1 s2^-1 s3`.
    pub fn parse(strands: u32, text: &str) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let rest = tok
                .strip_prefix('s')
                .ok_or_else(|| BraidError::Parse(tok.to_string()))?;
            let (num, sign) = match rest.strip_suffix("^-1") {
                Some(head) => (head, -1),
                None => (rest, 1),
            };
            let pos: u32 = num.parse().map_err(|_| BraidError::Parse(tok.to_string()))?;
            letters.push((pos, sign));
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[(u32, i8)] {
        &self.letters
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// The group inverse: letters reversed with signs flipped.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(p, s)| (p, -s))
                .collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for &(p, s) in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if s > 0 {
                write!(f, "s{}", p)?;
            } else {
                write!(f, "s{}^-1", p)?;
            }
        }
        Ok(())
    }
}

/// The annular tangle of a braid word: signature (n; n), all strands
/// oriented from boundary 1 toward boundary 0, the word's last letter next
/// to boundary 1.
pub fn braid_to_tangle(word: &BraidWord) -> TangleDiagram {
    let k = word.strands;
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut arcs: Vec<TangleArc> = Vec::new();
    let mut frontier: Vec<End> = (1..=k).map(|p| End::bp(1, p)).collect();
    for &(pos, sign) in word.letters.iter().rev() {
        let c = crossings.len() as u32;
        crossings.push(braid_letter_crossing(sign > 0));
        let left = (pos - 1) as usize;
        // strand segments flow into the top ports 0 and 3 and continue from
        // the bottom ports 1 and 2
        arcs.push(TangleArc {
            a: frontier[left],
            b: End::port(c, 0),
            directed: true,
        });
        arcs.push(TangleArc {
            a: frontier[left + 1],
            b: End::port(c, 3),
            directed: true,
        });
        frontier[left] = End::port(c, 1);
        frontier[left + 1] = End::port(c, 2);
    }
    for (p, &end) in frontier.iter().enumerate() {
        arcs.push(TangleArc {
            a: end,
            b: End::bp(0, p as u32 + 1),
            directed: true,
        });
    }
    TangleDiagram::new(vec![k / 2, k / 2], crossings, arcs, 0)
}

/// The representation matrix of a braid word on I_{2n}.
pub fn braid_rep(word: &BraidWord) -> Result<PartitionMatrix, TangleError> {
    braid_to_tangle(word).partition_tangle()
}
