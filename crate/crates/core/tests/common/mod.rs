//! Shared generators for the randomized suites: planar diagrams and tangles
//! sampled in a standard position that guarantees embeddability.
//!
//! All boundaries (and, for tangles, all crossings as little four-point
//! discs) hang off the outer basepoint in a row; cutting along the hanging
//! slits unrolls the surface into a disc whose boundary visits every point
//! once. Any noncrossing matching of that cut sequence is then a valid
//! diagram, so sampling one uniformly-ish at random gives arbitrary planar
//! inputs without rejection.

// each integration test compiles its own copy and uses a different subset
#![allow(dead_code)]

use cleaved_core::diagram::{Bp, PlanarDiagram};
use cleaved_core::tangle::{Crossing, End, TangleArc, TangleDiagram};
use rand::rngs::StdRng;
use rand::Rng;

/// Random matching of 0..len-1 with no crossing pair in the linear order.
fn random_noncrossing_positions(rng: &mut StdRng, len: usize) -> Vec<usize> {
    assert!(len.is_multiple_of(2));
    let mut partner = vec![usize::MAX; len];
    fn rec(rng: &mut StdRng, partner: &mut [usize], lo: usize, hi: usize) {
        if lo >= hi {
            return;
        }
        let count = (hi - lo).div_ceil(2);
        let pick = lo + 1 + 2 * rng.random_range(0..count);
        partner[lo] = pick;
        partner[pick] = lo;
        rec(rng, partner, lo + 1, pick.wrapping_sub(1));
        rec(rng, partner, pick + 1, hi);
    }
    if len > 0 {
        rec(rng, &mut partner, 0, len - 1);
    }
    partner
}

/// Random signature: outer half-count plus up to `max_inner` inner
/// boundaries, total points capped.
pub fn random_signature(rng: &mut StdRng, max_inner: usize, max_n: u32, total_cap: u32) -> Vec<u32> {
    loop {
        let m = rng.random_range(0..=max_inner);
        let sig: Vec<u32> = (0..=m).map(|_| rng.random_range(0..=max_n)).collect();
        if sig.iter().sum::<u32>() <= total_cap {
            return sig;
        }
    }
}

/// Random strict-valid planar diagram with the given signature.
pub fn random_planar(rng: &mut StdRng, signature: &[u32], free_circles: u32) -> PlanarDiagram {
    let mut seq: Vec<Bp> = Vec::new();
    for (b, &n) in signature.iter().enumerate().skip(1) {
        for p in (1..=2 * n).rev() {
            seq.push(Bp::new(b as u32, p));
        }
    }
    for p in 1..=2 * signature[0] {
        seq.push(Bp::new(0, p));
    }
    let partner = random_noncrossing_positions(rng, seq.len());
    let mut arcs = Vec::new();
    for (i, &j) in partner.iter().enumerate() {
        if i < j {
            arcs.push((seq[i], seq[j]));
        }
    }
    let d = PlanarDiagram::new(signature.to_vec(), arcs, free_circles);
    debug_assert_eq!(d.validate(true), Ok(()));
    d
}

/// Random strict-valid tangle: like `random_planar` but with `crossings`
/// extra four-port discs hanging in the row. Unoriented.
pub fn random_tangle(
    rng: &mut StdRng,
    signature: &[u32],
    crossings: usize,
    free_circles: u32,
) -> TangleDiagram {
    let mut seq: Vec<End> = Vec::new();
    for (b, &n) in signature.iter().enumerate().skip(1) {
        for p in (1..=2 * n).rev() {
            seq.push(End::bp(b as u32, p));
        }
    }
    for c in 0..crossings {
        for port in [3u8, 2, 1, 0] {
            seq.push(End::port(c as u32, port));
        }
    }
    for p in 1..=2 * signature[0] {
        seq.push(End::bp(0, p));
    }
    let partner = random_noncrossing_positions(rng, seq.len());
    let mut arcs = Vec::new();
    for (i, &j) in partner.iter().enumerate() {
        if i < j {
            arcs.push(TangleArc {
                a: seq[i],
                b: seq[j],
                directed: false,
            });
        }
    }
    let t = TangleDiagram::new(
        signature.to_vec(),
        vec![
            Crossing {
                over13: rng.random_bool(0.5)
            };
            crossings
        ],
        arcs,
        free_circles,
    );
    let t = randomize_over_flags(rng, t);
    debug_assert_eq!(t.validate(true), Ok(()));
    t
}

fn randomize_over_flags(rng: &mut StdRng, t: TangleDiagram) -> TangleDiagram {
    let crossings: Vec<Crossing> = t
        .crossings()
        .iter()
        .map(|_| Crossing {
            over13: rng.random_bool(0.5),
        })
        .collect();
    TangleDiagram::new(
        t.half_counts().to_vec(),
        crossings,
        t.arcs().to_vec(),
        t.free_circles(),
    )
}

/// Orient every strand. Open strands run away from their lexicographically
/// least boundary endpoint; closed strands start at their least port. The
/// rule is deterministic, so diagrams with equal strand connectivity receive
/// matching boundary orientations.
pub fn orient_strands(t: &TangleDiagram) -> TangleDiagram {
    let arcs = t.arcs();
    let mut at_end: std::collections::BTreeMap<End, usize> = std::collections::BTreeMap::new();
    for (i, arc) in arcs.iter().enumerate() {
        at_end.insert(arc.a, i);
        at_end.insert(arc.b, i);
    }
    let mut directed: Vec<Option<(End, End)>> = vec![None; arcs.len()];
    let mut visited = vec![false; arcs.len()];
    let walk = |start: End, directed: &mut Vec<Option<(End, End)>>, visited: &mut Vec<bool>| {
        let mut from = start;
        let mut idx = at_end[&from];
        loop {
            if visited[idx] {
                break;
            }
            visited[idx] = true;
            let arc = &arcs[idx];
            let to = if arc.a == from { arc.b } else { arc.a };
            directed[idx] = Some((from, to));
            match to {
                End::B(_) => break,
                End::X { crossing, port } => {
                    from = End::port(crossing, (port + 2) % 4);
                    idx = at_end[&from];
                }
            }
        }
    };
    // open strands first
    let mut starts: Vec<End> = at_end
        .keys()
        .filter(|e| matches!(e, End::B(_)))
        .copied()
        .collect();
    starts.sort();
    for s in starts {
        if !visited[at_end[&s]] {
            walk(s, &mut directed, &mut visited);
        }
    }
    // closed strands from their least endpoint
    for i in 0..arcs.len() {
        if !visited[i] {
            walk(arcs[i].a.min(arcs[i].b), &mut directed, &mut visited);
        }
    }
    let new_arcs = arcs
        .iter()
        .enumerate()
        .map(|(i, arc)| match directed[i] {
            Some((a, b)) => TangleArc {
                a,
                b,
                directed: true,
            },
            None => *arc,
        })
        .collect();
    TangleDiagram::new(
        t.half_counts().to_vec(),
        t.crossings().to_vec(),
        new_arcs,
        t.free_circles(),
    )
}

/// True when some strand through a crossing has no boundary endpoint.
pub fn has_closed_crossing_strand(t: &TangleDiagram) -> bool {
    // follow each strand in from the boundary; crossing arcs left unreached
    // lie on closed strands
    let arcs = t.arcs();
    let mut at_end: std::collections::BTreeMap<End, usize> = std::collections::BTreeMap::new();
    for (i, arc) in arcs.iter().enumerate() {
        at_end.insert(arc.a, i);
        at_end.insert(arc.b, i);
    }
    let mut reached = vec![false; arcs.len()];
    for (e, &idx) in &at_end {
        if !matches!(e, End::B(_)) || reached[idx] {
            continue;
        }
        let mut from = *e;
        let mut i = idx;
        loop {
            if reached[i] {
                break;
            }
            reached[i] = true;
            let arc = &arcs[i];
            let to = if arc.a == from { arc.b } else { arc.a };
            match to {
                End::B(_) => break,
                End::X { crossing, port } => {
                    from = End::port(crossing, (port + 2) % 4);
                    i = at_end[&from];
                }
            }
        }
    }
    arcs.iter().enumerate().any(|(i, arc)| {
        !reached[i] && (matches!(arc.a, End::X { .. }) || matches!(arc.b, End::X { .. }))
    })
}

/// Braid word drawn in a bare disc: bottom points 1..s left to right, top
/// points 2s..s+1 continuing counterclockwise, all strands oriented
/// downward, last letter at the top.
pub fn disc_braid(strands: u32, letters: &[(u32, i8)]) -> TangleDiagram {
    let s = strands;
    let mut crossings = Vec::new();
    let mut arcs = Vec::new();
    let mut frontier: Vec<End> = (1..=s).map(|p| End::bp(0, 2 * s + 1 - p)).collect();
    for &(pos, sign) in letters.iter().rev() {
        let c = crossings.len() as u32;
        crossings.push(cleaved_core::tangle::braid_letter_crossing(sign > 0));
        let left = (pos - 1) as usize;
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
    TangleDiagram::new(vec![s], crossings, arcs, 0)
}

/// Trace closure of a braid word: each strand position wraps from the
/// bottom of the word back to its top. Orientations stay coherent since
/// every strand keeps flowing the same way around.
pub fn closed_braid(strands: u32, letters: &[(u32, i8)]) -> TangleDiagram {
    let open = disc_braid(strands, letters);
    let mut arcs: Vec<TangleArc> = open.arcs().to_vec();
    let mut circles = open.free_circles();
    let mut drop = Vec::new();
    let mut fused = Vec::new();
    for k in 1..=strands {
        let bottom = End::bp(0, k);
        let top = End::bp(0, 2 * strands + 1 - k);
        let bi = arcs
            .iter()
            .position(|a| a.a == bottom || a.b == bottom)
            .unwrap();
        let ti = arcs
            .iter()
            .position(|a| a.a == top || a.b == top)
            .unwrap();
        if bi == ti {
            // a bare strand closes straight into a circle
            drop.push(bi);
            circles += 1;
            continue;
        }
        let from = if arcs[bi].a == bottom {
            arcs[bi].b
        } else {
            arcs[bi].a
        };
        let to = if arcs[ti].a == top {
            arcs[ti].b
        } else {
            arcs[ti].a
        };
        drop.push(bi);
        drop.push(ti);
        fused.push(TangleArc {
            a: from,
            b: to,
            directed: true,
        });
    }
    drop.sort_unstable();
    for &idx in drop.iter().rev() {
        arcs.remove(idx);
    }
    arcs.extend(fused);
    TangleDiagram::new(vec![0], open.crossings().to_vec(), arcs, circles)
}

/// Strip all orientations.
pub fn unoriented(t: &TangleDiagram) -> TangleDiagram {
    TangleDiagram::new(
        t.half_counts().to_vec(),
        t.crossings().to_vec(),
        t.arcs()
            .iter()
            .map(|a| TangleArc {
                directed: false,
                ..*a
            })
            .collect(),
        t.free_circles(),
    )
}

/// Insert an empty inner boundary at position `pos` (1-based).
pub fn insert_empty_boundary(d: &PlanarDiagram, pos: usize) -> PlanarDiagram {
    let mut hc = d.half_counts().to_vec();
    hc.insert(pos, 0);
    let arcs = d
        .arcs()
        .iter()
        .map(|&(a, b)| {
            let bump = |p: Bp| -> Bp {
                if (p.boundary as usize) >= pos {
                    Bp::new(p.boundary + 1, p.point)
                } else {
                    p
                }
            };
            (bump(a), bump(b))
        })
        .collect();
    PlanarDiagram::new(hc, arcs, d.free_circles())
}
