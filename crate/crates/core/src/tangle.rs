//! Tangle diagrams with crossings: resolutions, the state-sum partition map,
//! skein identities, mirrors, and Jones values of closed diagrams.
//!
//! A crossing has four ports in counterclockwise order 0..3; the strands run
//! through ports (0,2) and (1,3) and the over flag picks which strand is on
//! top. The 0-smoothing joins each over-strand port to the next port
//! counterclockwise, the 1-smoothing to the previous one. With both strands
//! of a braid generator oriented downward this makes the 0-resolution of the
//! positive generator the identity braid.
//!
//! For a tangle T with crossing set ordered as in the input,
//!
//!   unshifted:  sum over resolutions of (-q)^{h} Z_{resolved}
//!   shifted:    (-1)^{n_-} q^{n_+ - 2 n_-} times the unshifted map
//!
//! and on closed diagrams the shifted map is multiplication by the
//! Khovanov-normalized Jones polynomial (unknot value q + q^{-1}).

use crate::diagram::{
    parse_statements, Bp, DiagramError, ParseError, PlanarDiagram, RawEnd, RawStatement,
};
use crate::partition::{partition_map, PartitionError, PartitionMatrix};
use crate::ring::HalfLaurent;
use std::collections::BTreeMap;
use std::fmt;

/// Endpoint of a tangle arc: a boundary point or a crossing port.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum End {
    B(Bp),
    /// crossing index (declaration order), port 0..3
    X { crossing: u32, port: u8 },
}

impl End {
    pub fn port(crossing: u32, port: u8) -> End {
        End::X { crossing, port }
    }

    pub fn bp(boundary: u32, point: u32) -> End {
        End::B(Bp::new(boundary, point))
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::B(p) => write!(f, "{}", p),
            End::X { crossing, port } => write!(f, "x{}:{}", crossing, port),
        }
    }
}

/// A crossing: `over13` selects the (1,3) strand as the over strand,
/// otherwise (0,2) is over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Crossing {
    pub over13: bool,
}

/// A tangle arc; when `directed` the strand runs from `a` to `b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TangleArc {
    pub a: End,
    pub b: End,
    pub directed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TangleError {
    Diagram(DiagramError),
    Partition(PartitionError),
    PortOutOfRange(End),
    DanglingPort(End),
    ReusedEnd(End),
    MissingOrientation { crossing: u32 },
    InconsistentOrientation,
    NotClosed,
}

impl fmt::Display for TangleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangleError::Diagram(e) => write!(f, "{}", e),
            TangleError::Partition(e) => write!(f, "{}", e),
            TangleError::PortOutOfRange(e) => write!(f, "port {} out of range", e),
            TangleError::DanglingPort(e) => write!(f, "port {} is not used by any arc", e),
            TangleError::ReusedEnd(e) => write!(f, "endpoint {} is used more than once", e),
            TangleError::MissingOrientation { crossing } => {
                write!(f, "crossing {} has an unoriented strand", crossing)
            }
            TangleError::InconsistentOrientation => write!(f, "orientations conflict"),
            TangleError::NotClosed => write!(f, "diagram has boundary points"),
        }
    }
}

impl std::error::Error for TangleError {}

impl From<DiagramError> for TangleError {
    fn from(e: DiagramError) -> Self {
        TangleError::Diagram(e)
    }
}

impl From<PartitionError> for TangleError {
    fn from(e: PartitionError) -> Self {
        TangleError::Partition(e)
    }
}

/// A choice of smoothing, 0 or 1, at every crossing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Resolution {
    pub choices: Vec<u8>,
}

impl Resolution {
    pub fn from_bits(bits: u64, crossings: usize) -> Self {
        // crossing 0 is the most significant bit
        Resolution {
            choices: (0..crossings)
                .map(|c| (bits >> (crossings - 1 - c) & 1) as u8)
                .collect(),
        }
    }

    /// Total homological weight h: the number of 1-smoothings.
    pub fn weight(&self) -> u32 {
        self.choices.iter().map(|&c| c as u32).sum()
    }
}

/// An (optionally oriented) tangle diagram over a disc configuration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangleDiagram {
    half_counts: Vec<u32>,
    crossings: Vec<Crossing>,
    arcs: Vec<TangleArc>,
    free_circles: u32,
}

impl TangleDiagram {
    pub fn new(
        half_counts: Vec<u32>,
        crossings: Vec<Crossing>,
        arcs: Vec<TangleArc>,
        free_circles: u32,
    ) -> Self {
        assert!(!half_counts.is_empty());
        let mut arcs: Vec<TangleArc> = arcs
            .into_iter()
            .map(|arc| {
                if !arc.directed && arc.b < arc.a {
                    TangleArc {
                        a: arc.b,
                        b: arc.a,
                        directed: false,
                    }
                } else {
                    arc
                }
            })
            .collect();
        arcs.sort_by_key(|arc| (arc.a.min(arc.b), arc.a.max(arc.b)));
        TangleDiagram {
            half_counts,
            crossings,
            arcs,
            free_circles,
        }
    }

    pub fn from_planar(d: &PlanarDiagram) -> Self {
        TangleDiagram::new(
            d.half_counts().to_vec(),
            vec![],
            d.arcs()
                .iter()
                .map(|&(a, b)| TangleArc {
                    a: End::B(a),
                    b: End::B(b),
                    directed: false,
                })
                .collect(),
            d.free_circles(),
        )
    }

    pub fn half_counts(&self) -> &[u32] {
        &self.half_counts
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn arcs(&self) -> &[TangleArc] {
        &self.arcs
    }

    pub fn free_circles(&self) -> u32 {
        self.free_circles
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_closed(&self) -> bool {
        self.half_counts.iter().all(|&n| n == 0)
    }

    fn end_in_range(&self, e: End) -> bool {
        match e {
            End::B(p) => {
                (p.boundary as usize) < self.half_counts.len()
                    && p.point >= 1
                    && p.point <= 2 * self.half_counts[p.boundary as usize]
            }
            End::X { crossing, port } => (crossing as usize) < self.crossings.len() && port < 4,
        }
    }

    /// Structural check: every boundary point and every port used exactly
    /// once; orientations propagate consistently. With `strict`, also check
    /// the projection embeds in the surface (each crossing counts as a small
    /// disc with its four ports in counterclockwise order).
    pub fn validate(&self, strict: bool) -> Result<(), TangleError> {
        let mut used: BTreeMap<End, u32> = BTreeMap::new();
        for arc in &self.arcs {
            for e in [arc.a, arc.b] {
                if !self.end_in_range(e) {
                    return match e {
                        End::B(p) => Err(DiagramError::PointOutOfRange(p).into()),
                        End::X { .. } => Err(TangleError::PortOutOfRange(e)),
                    };
                }
                *used.entry(e).or_insert(0) += 1;
            }
        }
        for (b, &n) in self.half_counts.iter().enumerate() {
            for pt in 1..=2 * n {
                let e = End::bp(b as u32, pt);
                match used.get(&e).copied().unwrap_or(0) {
                    0 => return Err(DiagramError::DanglingPoint(Bp::new(b as u32, pt)).into()),
                    1 => {}
                    _ => return Err(TangleError::ReusedEnd(e)),
                }
            }
        }
        for c in 0..self.crossings.len() {
            for port in 0..4u8 {
                let e = End::port(c as u32, port);
                match used.get(&e).copied().unwrap_or(0) {
                    0 => return Err(TangleError::DanglingPort(e)),
                    1 => {}
                    _ => return Err(TangleError::ReusedEnd(e)),
                }
            }
        }
        self.propagated_directions()?;
        if strict {
            self.projection_diagram()
                .validate(true)
                .map_err(TangleError::from)?;
        }
        Ok(())
    }

    /// The projection as a planar diagram: each crossing becomes an extra
    /// inner boundary with four points (port p at point p+1).
    fn projection_diagram(&self) -> PlanarDiagram {
        let m = self.half_counts.len();
        let mut hc = self.half_counts.clone();
        hc.extend(std::iter::repeat_n(2, self.crossings.len()));
        let conv = |e: End| -> Bp {
            match e {
                End::B(p) => p,
                End::X { crossing, port } => {
                    Bp::new((m + crossing as usize) as u32, port as u32 + 1)
                }
            }
        };
        PlanarDiagram::new(
            hc,
            self.arcs
                .iter()
                .map(|arc| (conv(arc.a), conv(arc.b)))
                .collect(),
            self.free_circles,
        )
    }

    /// All over flags flipped; orientations kept.
    pub fn mirror(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.crossings {
            c.over13 = !c.over13;
        }
        out
    }

    /// Direction of each arc after propagating orientations through the
    /// crossings: arcs entering a strand force the arc leaving it.
    ///
    /// Returns, per arc, `Some(true)` when directed a -> b, `Some(false)`
    /// when directed b -> a, `None` when untouched by any orientation.
    fn propagated_directions(&self) -> Result<Vec<Option<bool>>, TangleError> {
        let mut dir: Vec<Option<bool>> = self
            .arcs
            .iter()
            .map(|arc| if arc.directed { Some(true) } else { None })
            .collect();
        let mut at_port: BTreeMap<(u32, u8), (usize, bool)> = BTreeMap::new(); // -> (arc, end is a)
        for (i, arc) in self.arcs.iter().enumerate() {
            if let End::X { crossing, port } = arc.a {
                at_port.insert((crossing, port), (i, true));
            }
            if let End::X { crossing, port } = arc.b {
                at_port.insert((crossing, port), (i, false));
            }
        }
        // flow at a port: Some(true) = into the crossing
        let flow = |dir: &[Option<bool>], key: (u32, u8)| -> Option<bool> {
            let &(i, end_is_a) = at_port.get(&key)?;
            let d = dir[i]?;
            // arc directed a->b (d = true) flows INTO the endpoint b
            Some(d != end_is_a)
        };
        loop {
            let mut changed = false;
            for c in 0..self.crossings.len() as u32 {
                for (pin, pout) in [(0u8, 2u8), (2, 0), (1, 3), (3, 1)] {
                    let fin = flow(&dir, (c, pin));
                    let fout = flow(&dir, (c, pout));
                    match (fin, fout) {
                        (Some(true), Some(true)) | (Some(false), Some(false)) => {
                            return Err(TangleError::InconsistentOrientation)
                        }
                        (Some(true), None) => {
                            // strand enters at pin, so it must leave at pout
                            let (i, end_is_a) = at_port[&(c, pout)];
                            dir[i] = Some(end_is_a);
                            changed = true;
                        }
                        (None, Some(false)) => {
                            // strand leaves at pout, so it must enter at pin
                            let (i, end_is_a) = at_port[&(c, pin)];
                            dir[i] = Some(!end_is_a);
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(dir)
    }

    /// Signed crossing counts (n_+, n_-). Requires every crossing strand to
    /// be oriented.
    pub fn crossing_signs(&self) -> Result<(u32, u32), TangleError> {
        let dir = self.propagated_directions()?;
        let mut at_port: BTreeMap<(u32, u8), (usize, bool)> = BTreeMap::new();
        for (i, arc) in self.arcs.iter().enumerate() {
            if let End::X { crossing, port } = arc.a {
                at_port.insert((crossing, port), (i, true));
            }
            if let End::X { crossing, port } = arc.b {
                at_port.insert((crossing, port), (i, false));
            }
        }
        let flow = |key: (u32, u8)| -> Option<bool> {
            let &(i, end_is_a) = at_port.get(&key)?;
            let d = dir[i]?;
            Some(d != end_is_a)
        };
        let mut n_plus = 0u32;
        let mut n_minus = 0u32;
        for (c, crossing) in self.crossings.iter().enumerate() {
            let c = c as u32;
            // start port of a strand: where its arc flows into the crossing
            let start = |p0: u8, p1: u8| -> Result<u8, TangleError> {
                match (flow((c, p0)), flow((c, p1))) {
                    (Some(true), Some(false)) => Ok(p0),
                    (Some(false), Some(true)) => Ok(p1),
                    (Some(_), Some(_)) => Err(TangleError::InconsistentOrientation),
                    _ => Err(TangleError::MissingOrientation { crossing: c }),
                }
            };
            let (over_start, under_start) = if crossing.over13 {
                (start(1, 3)?, start(0, 2)?)
            } else {
                (start(0, 2)?, start(1, 3)?)
            };
            // positive exactly when the under strand enters three ports
            // counterclockwise from the over entry
            if (under_start + 4 - over_start) % 4 == 3 {
                n_plus += 1;
            } else {
                n_minus += 1;
            }
        }
        Ok((n_plus, n_minus))
    }

    /// Replace every crossing by its chosen smoothing.
    pub fn resolve(&self, rho: &Resolution) -> PlanarDiagram {
        assert_eq!(rho.choices.len(), self.crossings.len());
        // smoothing partner of each port
        let mut join: BTreeMap<(u32, u8), (u32, u8)> = BTreeMap::new();
        for (c, crossing) in self.crossings.iter().enumerate() {
            let c = c as u32;
            let over = if crossing.over13 { [1u8, 3] } else { [0u8, 2] };
            for p in over {
                let q = if rho.choices[c as usize] == 0 {
                    (p + 1) % 4
                } else {
                    (p + 3) % 4
                };
                join.insert((c, p), (c, q));
                join.insert((c, q), (c, p));
            }
        }
        let mut arc_at: BTreeMap<End, usize> = BTreeMap::new();
        for (i, arc) in self.arcs.iter().enumerate() {
            arc_at.insert(arc.a, i);
            arc_at.insert(arc.b, i);
        }
        let other = |i: usize, from: End| -> End {
            let arc = &self.arcs[i];
            if arc.a == from {
                arc.b
            } else {
                arc.a
            }
        };

        let mut visited = vec![false; self.arcs.len()];
        let mut arcs = Vec::new();
        // open chains
        for (i, arc) in self.arcs.iter().enumerate() {
            for start in [arc.a, arc.b] {
                let start_bp = match start {
                    End::B(p) => p,
                    End::X { .. } => continue,
                };
                if visited[i] {
                    continue;
                }
                let mut idx = i;
                let mut from = start;
                let end_bp = loop {
                    visited[idx] = true;
                    match other(idx, from) {
                        End::B(p) => break p,
                        End::X { crossing, port } => {
                            let (c2, p2) = join[&(crossing, port)];
                            from = End::port(c2, p2);
                            idx = arc_at[&from];
                        }
                    }
                };
                arcs.push((start_bp, end_bp));
            }
        }
        // closed chains become free circles
        let mut circles = self.free_circles;
        for i in 0..self.arcs.len() {
            if visited[i] {
                continue;
            }
            circles += 1;
            let mut idx = i;
            let mut from = self.arcs[i].a;
            loop {
                visited[idx] = true;
                match other(idx, from) {
                    End::B(_) => unreachable!("closed chain reached a boundary"),
                    End::X { crossing, port } => {
                        let (c2, p2) = join[&(crossing, port)];
                        from = End::port(c2, p2);
                        idx = arc_at[&from];
                        if idx == i && from == self.arcs[i].a {
                            break;
                        }
                    }
                }
            }
        }
        PlanarDiagram::new(self.half_counts.clone(), arcs, circles)
    }

    /// Smooth a single crossing, keeping the others. Chains through the
    /// removed ports fuse; a chain closing on itself becomes a free circle.
    pub fn resolve_crossing(&self, target: u32, choice: u8) -> TangleDiagram {
        let crossing = self.crossings[target as usize];
        let over = if crossing.over13 { [1u8, 3] } else { [0u8, 2] };
        let mut join = [0u8; 4];
        for p in over {
            let q = if choice == 0 { (p + 1) % 4 } else { (p + 3) % 4 };
            join[p as usize] = q;
            join[q as usize] = p;
        }
        let mut crossings = self.crossings.clone();
        crossings.remove(target as usize);
        let relabel = |e: End| -> End {
            match e {
                End::X { crossing, port } if crossing > target => End::X {
                    crossing: crossing - 1,
                    port,
                },
                _ => e,
            }
        };
        let on_target = |e: End| -> Option<u8> {
            match e {
                End::X { crossing, port } if crossing == target => Some(port),
                _ => None,
            }
        };
        let mut arc_at = [usize::MAX; 4];
        for (i, arc) in self.arcs.iter().enumerate() {
            for e in [arc.a, arc.b] {
                if let Some(p) = on_target(e) {
                    arc_at[p as usize] = i;
                }
            }
        }
        let mut visited = vec![false; self.arcs.len()];
        let mut arcs = Vec::new();
        for (i, arc) in self.arcs.iter().enumerate() {
            if on_target(arc.a).is_some() || on_target(arc.b).is_some() {
                continue;
            }
            visited[i] = true;
            arcs.push(TangleArc {
                a: relabel(arc.a),
                b: relabel(arc.b),
                directed: arc.directed,
            });
        }
        // Open chains through the smoothed crossing. A smoothing need not
        // respect orientation (the strand can double back), so a fused
        // chain keeps a direction only when all its directed pieces agree.
        for i in 0..self.arcs.len() {
            for start in [self.arcs[i].a, self.arcs[i].b] {
                if visited[i] || on_target(start).is_some() {
                    continue;
                }
                let mut idx = i;
                let mut from = start;
                let mut with = false;
                let mut against = false;
                let end = loop {
                    visited[idx] = true;
                    let arc = &self.arcs[idx];
                    let forward = arc.a == from;
                    if arc.directed {
                        if forward {
                            with = true;
                        } else {
                            against = true;
                        }
                    }
                    let to = if forward { arc.b } else { arc.a };
                    match on_target(to) {
                        None => break to,
                        Some(p) => {
                            from = End::port(target, join[p as usize]);
                            idx = arc_at[join[p as usize] as usize];
                        }
                    }
                };
                let (a, b, directed) = match (with, against) {
                    (true, false) => (relabel(start), relabel(end), true),
                    (false, true) => (relabel(end), relabel(start), true),
                    _ => (relabel(start), relabel(end), false),
                };
                arcs.push(TangleArc { a, b, directed });
            }
        }
        // closed chains
        let mut circles = self.free_circles;
        for i in 0..self.arcs.len() {
            if visited[i] {
                continue;
            }
            circles += 1;
            let mut idx = i;
            let mut from = self.arcs[i].a;
            loop {
                visited[idx] = true;
                let arc = &self.arcs[idx];
                let to = if arc.a == from { arc.b } else { arc.a };
                let p = on_target(to).expect("closed chain stays on the crossing");
                from = End::port(target, join[p as usize]);
                idx = arc_at[join[p as usize] as usize];
                if idx == i && from == self.arcs[i].a {
                    break;
                }
            }
        }
        TangleDiagram::new(self.half_counts.clone(), crossings, arcs, circles)
    }

    /// The state sum over all resolutions with coefficient (-q)^h.
    pub fn unshifted_partition(&self) -> Result<PartitionMatrix, TangleError> {
        let k = self.crossings.len();
        let mut total: Option<PartitionMatrix> = None;
        for bits in 0..(1u64 << k) {
            let rho = Resolution::from_bits(bits, k);
            let z = partition_map(&self.resolve(&rho))?;
            let h = rho.weight();
            // (-q)^h
            let coeff = HalfLaurent::monomial(2 * h as i64, if h.is_multiple_of(2) { 1 } else { -1 });
            match &mut total {
                None => total = Some(z.scaled(&coeff)),
                Some(t) => t.add_assign_scaled(&z, &coeff),
            }
        }
        Ok(total.expect("at least one resolution"))
    }

    /// The oriented partition map: the unshifted sum scaled by
    /// (-1)^{n_-} q^{n_+ - 2 n_-}.
    pub fn partition_tangle(&self) -> Result<PartitionMatrix, TangleError> {
        let (n_plus, n_minus) = self.crossing_signs()?;
        let unshifted = self.unshifted_partition()?;
        let shift = HalfLaurent::monomial(
            2 * (n_plus as i64 - 2 * n_minus as i64),
            if n_minus % 2 == 0 { 1 } else { -1 },
        );
        Ok(unshifted.scaled(&shift))
    }

    /// Jones polynomial of a closed diagram, Khovanov normalization.
    pub fn jones_closed(&self) -> Result<HalfLaurent, TangleError> {
        if !self.is_closed() {
            return Err(TangleError::NotClosed);
        }
        let z = self.partition_tangle()?;
        debug_assert_eq!(z.rows(), 1);
        debug_assert_eq!(z.cols(), 1);
        Ok(z.entry(0, 0))
    }

    /// Independent state sum for closed diagrams: counts loops of each
    /// resolution by connectivity closure and evaluates
    /// (-1)^{n_-} q^{n_+ - 2n_-} sum_rho (-q)^{h} (q + q^{-1})^{loops}.
    ///
    /// Shares nothing with the partition-map pipeline.
    pub fn kauffman_oracle(&self) -> Result<HalfLaurent, TangleError> {
        if !self.is_closed() {
            return Err(TangleError::NotClosed);
        }
        let (n_plus, n_minus) = self.crossing_signs()?;
        let k = self.crossings.len();
        let delta = HalfLaurent::circle();
        let mut total = HalfLaurent::zero();
        for bits in 0..(1u64 << k) {
            // union-find over ports; smoothing joins and arcs both merge
            let mut parent: Vec<usize> = (0..4 * k.max(1)).collect();
            fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
                let (ra, rb) = (find(parent, a), find(parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            };
            let pid = |c: u32, p: u8| -> usize { 4 * c as usize + p as usize };
            let mut h = 0u32;
            for (c, crossing) in self.crossings.iter().enumerate() {
                let choice = (bits >> (k - 1 - c)) & 1;
                h += choice as u32;
                let over = if crossing.over13 { [1u8, 3] } else { [0u8, 2] };
                for p in over {
                    let q = if choice == 0 { (p + 1) % 4 } else { (p + 3) % 4 };
                    union(&mut parent, pid(c as u32, p), pid(c as u32, q));
                }
            }
            let mut loops = self.free_circles;
            if k == 0 {
                // nothing else; arcs cannot exist in a closed crossing-free
                // diagram without free circles
            } else {
                for arc in &self.arcs {
                    match (arc.a, arc.b) {
                        (
                            End::X {
                                crossing: c1,
                                port: p1,
                            },
                            End::X {
                                crossing: c2,
                                port: p2,
                            },
                        ) => union(&mut parent, pid(c1, p1), pid(c2, p2)),
                        _ => unreachable!("closed diagram has no boundary points"),
                    }
                }
                let mut roots: Vec<usize> = (0..4 * k)
                    .map(|x| find(&mut parent, x))
                    .collect();
                roots.sort_unstable();
                roots.dedup();
                loops += roots.len() as u32;
            }
            let sign = if h.is_multiple_of(2) { 1 } else { -1 };
            let term = HalfLaurent::monomial(2 * h as i64, sign);
            total += &(&term * &delta.pow(loops));
        }
        let shift = HalfLaurent::monomial(
            2 * (n_plus as i64 - 2 * n_minus as i64),
            if n_minus % 2 == 0 { 1 } else { -1 },
        );
        Ok(&shift * &total)
    }

    /// Glue `inner`'s outer boundary into boundary i, fusing arcs and
    /// orientations.
    pub fn compose(&self, i: usize, inner: &TangleDiagram) -> Result<TangleDiagram, TangleError> {
        if i == 0 {
            return Err(DiagramError::InnerBoundaryRequired.into());
        }
        if i >= self.half_counts.len() {
            return Err(DiagramError::BoundaryOutOfRange(i as u32).into());
        }
        let n = self.half_counts[i];
        if inner.half_counts[0] != n {
            return Err(DiagramError::SignatureMismatch {
                index: i,
                expected: n,
                found: inner.half_counts[0],
            }
            .into());
        }
        self.validate(false)?;
        inner.validate(false)?;

        let inner_m = inner.half_counts.len() - 1;
        let mut half_counts = Vec::new();
        half_counts.extend_from_slice(&self.half_counts[..i]);
        half_counts.extend_from_slice(&inner.half_counts[1..]);
        half_counts.extend_from_slice(&self.half_counts[i + 1..]);
        let crossing_offset = self.crossings.len() as u32;
        let mut crossings = self.crossings.clone();
        crossings.extend_from_slice(&inner.crossings);

        let outer_relabel = |e: End| -> End {
            match e {
                End::B(p) => {
                    let b = p.boundary as usize;
                    debug_assert_ne!(b, i);
                    if b < i {
                        End::B(p)
                    } else {
                        End::bp((b + inner_m - 1) as u32, p.point)
                    }
                }
                End::X { .. } => e,
            }
        };
        let inner_relabel = |e: End| -> End {
            match e {
                End::B(p) => {
                    debug_assert_ne!(p.boundary, 0);
                    End::bp(p.boundary + i as u32 - 1, p.point)
                }
                End::X { crossing, port } => End::port(crossing + crossing_offset, port),
            }
        };

        #[derive(Clone, Copy, PartialEq)]
        enum Side {
            Outer,
            Inner,
        }
        let arcs_of = |side: Side| -> &[TangleArc] {
            match side {
                Side::Outer => &self.arcs,
                Side::Inner => &inner.arcs,
            }
        };
        let is_interface = |side: Side, e: End| -> Option<u32> {
            match (side, e) {
                (Side::Outer, End::B(p)) if p.boundary as usize == i => Some(p.point),
                (Side::Inner, End::B(p)) if p.boundary == 0 => Some(p.point),
                _ => None,
            }
        };
        let mut outer_at = vec![usize::MAX; (2 * n + 1) as usize];
        let mut inner_at = vec![usize::MAX; (2 * n + 1) as usize];
        for (idx, arc) in self.arcs.iter().enumerate() {
            for e in [arc.a, arc.b] {
                if let Some(k) = is_interface(Side::Outer, e) {
                    outer_at[k as usize] = idx;
                }
            }
        }
        for (idx, arc) in inner.arcs.iter().enumerate() {
            for e in [arc.a, arc.b] {
                if let Some(k) = is_interface(Side::Inner, e) {
                    inner_at[k as usize] = idx;
                }
            }
        }

        let mut visited = [
            vec![false; self.arcs.len()],
            vec![false; inner.arcs.len()],
        ];
        let vix = |s: Side| -> usize {
            match s {
                Side::Outer => 0,
                Side::Inner => 1,
            }
        };

        // walk a chain; returns final side/end and the direction of the new
        // fused arc relative to the walk (None if no constituent is directed)
        let walk = |side0: Side,
                    idx0: usize,
                    start: End,
                    visited: &mut [Vec<bool>; 2]|
         -> Result<(Side, End, Option<bool>), TangleError> {
            let mut side = side0;
            let mut idx = idx0;
            let mut from = start;
            let mut chain_dir: Option<bool> = None;
            loop {
                visited[vix(side)][idx] = true;
                let arc = &arcs_of(side)[idx];
                let walking_a_to_b = arc.a == from;
                if arc.directed {
                    let along = walking_a_to_b;
                    match chain_dir {
                        None => chain_dir = Some(along),
                        Some(d) if d != along => {
                            return Err(TangleError::InconsistentOrientation)
                        }
                        _ => {}
                    }
                }
                let to = if walking_a_to_b { arc.b } else { arc.a };
                match is_interface(side, to) {
                    None => return Ok((side, to, chain_dir)),
                    Some(k) => {
                        let (next_side, next_idx) = match side {
                            Side::Outer => (Side::Inner, inner_at[k as usize]),
                            Side::Inner => (Side::Outer, outer_at[k as usize]),
                        };
                        side = next_side;
                        idx = next_idx;
                        from = match side {
                            Side::Outer => End::bp(i as u32, k),
                            Side::Inner => End::bp(0, k),
                        };
                    }
                }
            }
        };

        let mut arcs = Vec::new();
        for side0 in [Side::Outer, Side::Inner] {
            let list = arcs_of(side0);
            for (idx, arc) in list.iter().enumerate() {
                for start in [arc.a, arc.b] {
                    if is_interface(side0, start).is_some() || visited[vix(side0)][idx] {
                        continue;
                    }
                    let (end_side, end, along) = walk(side0, idx, start, &mut visited)?;
                    let start_l = match side0 {
                        Side::Outer => outer_relabel(start),
                        Side::Inner => inner_relabel(start),
                    };
                    let end_l = match end_side {
                        Side::Outer => outer_relabel(end),
                        Side::Inner => inner_relabel(end),
                    };
                    let (a, b, directed) = match along {
                        Some(true) | None => (start_l, end_l, along.is_some()),
                        Some(false) => (end_l, start_l, true),
                    };
                    arcs.push(TangleArc { a, b, directed });
                }
            }
        }

        // remaining arcs close through the interface into free circles;
        // check their orientations agree around each cycle
        let mut circles = self.free_circles + inner.free_circles;
        for idx0 in 0..self.arcs.len() {
            if visited[0][idx0] {
                continue;
            }
            circles += 1;
            let mut side = Side::Outer;
            let mut idx = idx0;
            let mut from = self.arcs[idx0].a;
            let mut chain_dir: Option<bool> = None;
            loop {
                visited[vix(side)][idx] = true;
                let arc = &arcs_of(side)[idx];
                let walking_a_to_b = arc.a == from;
                if arc.directed {
                    match chain_dir {
                        None => chain_dir = Some(walking_a_to_b),
                        Some(d) if d != walking_a_to_b => {
                            return Err(TangleError::InconsistentOrientation)
                        }
                        _ => {}
                    }
                }
                let to = if walking_a_to_b { arc.b } else { arc.a };
                let k = is_interface(side, to).expect("closed chain stays on interface");
                let (next_side, next_idx) = match side {
                    Side::Outer => (Side::Inner, inner_at[k as usize]),
                    Side::Inner => (Side::Outer, outer_at[k as usize]),
                };
                side = next_side;
                idx = next_idx;
                from = match side {
                    Side::Outer => End::bp(i as u32, k),
                    Side::Inner => End::bp(0, k),
                };
                if side == Side::Outer && idx == idx0 {
                    break;
                }
            }
        }
        debug_assert!(visited[1].iter().all(|&v| v));

        Ok(TangleDiagram::new(half_counts, crossings, arcs, circles))
    }
}

// ---------------------------------------------------------------------------
// text format
// ---------------------------------------------------------------------------

impl TangleDiagram {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let stmts = parse_statements(text)?;
        let mut half_counts: Option<Vec<u32>> = None;
        let mut crossing_ids: BTreeMap<u32, u32> = BTreeMap::new();
        let mut crossings: Vec<Crossing> = Vec::new();
        let mut arcs: Vec<TangleArc> = Vec::new();
        let mut orients: Vec<(usize, End, End)> = Vec::new();
        let mut circles = 0u32;
        let mut seen_circles = false;
        for (line, stmt) in stmts {
            let fail = |message: String| -> ParseError {
                ParseError {
                    line,
                    column: 1,
                    message,
                }
            };
            let conv = |e: RawEnd,
                        hc: &Option<Vec<u32>>,
                        ids: &BTreeMap<u32, u32>|
             -> Result<End, ParseError> {
                match e {
                    RawEnd::Boundary(b, p) => {
                        let hc = hc
                            .as_ref()
                            .ok_or_else(|| fail("endpoint before boundaries statement".into()))?;
                        if (b as usize) >= hc.len() {
                            return Err(fail(format!("boundary {} out of range", b)));
                        }
                        if p < 1 || p > 2 * hc[b as usize] {
                            return Err(fail(format!(
                                "point {}:{} out of range (half-count {})",
                                b, p, hc[b as usize]
                            )));
                        }
                        Ok(End::bp(b, p))
                    }
                    RawEnd::Port(id, port) => {
                        let &idx = ids
                            .get(&id)
                            .ok_or_else(|| fail(format!("crossing {} not declared", id)))?;
                        Ok(End::port(idx, port))
                    }
                }
            };
            match stmt {
                RawStatement::Boundaries(counts) => {
                    if half_counts.is_some() {
                        return Err(fail("duplicate boundaries statement".into()));
                    }
                    half_counts = Some(counts);
                }
                RawStatement::Crossing { id, over13 } => {
                    if crossing_ids.contains_key(&id) {
                        return Err(fail(format!("crossing {} declared twice", id)));
                    }
                    crossing_ids.insert(id, crossings.len() as u32);
                    crossings.push(Crossing { over13 });
                }
                RawStatement::Arc(a, b) => {
                    let a = conv(a, &half_counts, &crossing_ids)?;
                    let b = conv(b, &half_counts, &crossing_ids)?;
                    arcs.push(TangleArc {
                        a,
                        b,
                        directed: false,
                    });
                }
                RawStatement::Orient(a, b) => {
                    let a = conv(a, &half_counts, &crossing_ids)?;
                    let b = conv(b, &half_counts, &crossing_ids)?;
                    orients.push((line, a, b));
                }
                RawStatement::Circles(k) => {
                    if seen_circles {
                        return Err(fail("duplicate circles statement".into()));
                    }
                    seen_circles = true;
                    circles = k;
                }
            }
        }
        let half_counts = half_counts.ok_or(ParseError {
            line: 1,
            column: 1,
            message: "missing boundaries statement".into(),
        })?;
        for (line, a, b) in orients {
            let fail = |message: String| -> ParseError {
                ParseError {
                    line,
                    column: 1,
                    message,
                }
            };
            let mut found = false;
            for arc in &mut arcs {
                if (arc.a, arc.b) == (a, b) {
                    if arc.directed {
                        return Err(fail("arc oriented twice".into()));
                    }
                    arc.directed = true;
                    found = true;
                    break;
                }
                if (arc.a, arc.b) == (b, a) {
                    if arc.directed {
                        return Err(fail("arc oriented twice".into()));
                    }
                    std::mem::swap(&mut arc.a, &mut arc.b);
                    arc.directed = true;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(fail(format!("orient references no arc {}-{}", a, b)));
            }
        }
        Ok(TangleDiagram::new(half_counts, crossings, arcs, circles))
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let counts: Vec<String> = self.half_counts.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!("boundaries {}\n", counts.join(",")));
        for (c, crossing) in self.crossings.iter().enumerate() {
            out.push_str(&format!(
                "crossing {} over={}\n",
                c,
                if crossing.over13 { "13" } else { "02" }
            ));
        }
        for arc in &self.arcs {
            out.push_str(&format!("arc {}-{}\n", arc.a, arc.b));
        }
        for arc in &self.arcs {
            if arc.directed {
                out.push_str(&format!("orient {} -> {}\n", arc.a, arc.b));
            }
        }
        if self.free_circles > 0 {
            out.push_str(&format!("circles {}\n", self.free_circles));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// small builders used across the crate and its tests
// ---------------------------------------------------------------------------

/// Crossing flag for a braid letter whose strands run through ports 0/3 on
/// the input side and 1/2 on the output side: positive letters put the
/// (0,2) strand on top.
pub fn braid_letter_crossing(positive: bool) -> Crossing {
    Crossing { over13: !positive }
}

/// The one-crossing tangle on a (1)-signature disc: a strand from point 1 to
/// point 2 with a kink. `positive` picks the kink sign (strand oriented
/// 1 -> 2).
pub fn kink(positive: bool) -> TangleDiagram {
    TangleDiagram::new(
        vec![1],
        vec![Crossing { over13: !positive }],
        vec![
            TangleArc {
                a: End::bp(0, 1),
                b: End::port(0, 0),
                directed: true,
            },
            TangleArc {
                a: End::port(0, 2),
                b: End::port(0, 3),
                directed: true,
            },
            TangleArc {
                a: End::port(0, 1),
                b: End::bp(0, 2),
                directed: true,
            },
        ],
        0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_to_tangle, BraidWord};
    use crate::cleaved::CleavedBasis;

    fn poly(pairs: &[(i64, i64)]) -> HalfLaurent {
        HalfLaurent::from_pairs(pairs.iter().copied())
    }

    fn sigma() -> TangleDiagram {
        braid_to_tangle(&BraidWord::new(2, vec![(1, 1)]).unwrap())
    }

    fn sigma_inv() -> TangleDiagram {
        braid_to_tangle(&BraidWord::new(2, vec![(1, -1)]).unwrap())
    }

    #[test]
    fn resolutions_of_positive_generator() {
        let t = sigma();
        let id = t.resolve(&Resolution::from_bits(0, 1));
        assert_eq!(id, PlanarDiagram::radial_identity(1));
        let cupcap = t.resolve(&Resolution::from_bits(1, 1));
        let expected = PlanarDiagram::new(
            vec![1, 1],
            vec![
                (Bp::new(0, 1), Bp::new(0, 2)),
                (Bp::new(1, 1), Bp::new(1, 2)),
            ],
            0,
        );
        assert_eq!(cupcap, expected);
    }

    #[test]
    fn resolve_crossing_free() {
        let d = PlanarDiagram::pairing(1);
        let t = TangleDiagram::from_planar(&d);
        assert_eq!(t.resolve(&Resolution::from_bits(0, 0)), d);
    }

    #[test]
    fn crossing_sign_examples() {
        assert_eq!(sigma().crossing_signs().unwrap(), (1, 0));
        assert_eq!(sigma_inv().crossing_signs().unwrap(), (0, 1));
        assert_eq!(sigma().mirror().crossing_signs().unwrap(), (0, 1));
        let flat = TangleDiagram::from_planar(&PlanarDiagram::radial_identity(1));
        assert_eq!(flat.crossing_signs().unwrap(), (0, 0));
    }

    #[test]
    fn unshifted_positive_generator_matrix() {
        let z = sigma().unshifted_partition().unwrap();
        assert_eq!(z.entry(0, 0), poly(&[(0, 1), (4, -1)])); // 1 - q^2
        assert_eq!(z.entry(0, 1), poly(&[(2, -1)])); // -q
        assert_eq!(z.entry(1, 0), poly(&[(2, -1)]));
        assert_eq!(z.entry(1, 1), HalfLaurent::zero());
    }

    #[test]
    fn shifted_generator_matrices() {
        let z = sigma().partition_tangle().unwrap();
        assert_eq!(z.entry(0, 0), poly(&[(2, 1), (6, -1)])); // q - q^3
        assert_eq!(z.entry(0, 1), poly(&[(4, -1)])); // -q^2
        assert_eq!(z.entry(1, 0), poly(&[(4, -1)]));
        assert_eq!(z.entry(1, 1), HalfLaurent::zero());

        let zi = sigma_inv().partition_tangle().unwrap();
        assert_eq!(zi.entry(0, 0), HalfLaurent::zero());
        assert_eq!(zi.entry(0, 1), poly(&[(-4, -1)])); // -q^{-2}
        assert_eq!(zi.entry(1, 0), poly(&[(-4, -1)]));
        assert_eq!(zi.entry(1, 1), poly(&[(-2, 1), (-6, -1)])); // q^{-1} - q^{-3}

        let product = z.matmul(&zi).unwrap();
        assert_eq!(
            product,
            PartitionMatrix::identity(CleavedBasis::shared(1))
        );
    }

    #[test]
    fn skein_at_the_crossing() {
        let t = sigma();
        let z = t.unshifted_partition().unwrap();
        let z0 = t.resolve_crossing(0, 0).unshifted_partition().unwrap();
        let z1 = t.resolve_crossing(0, 1).unshifted_partition().unwrap();
        let mut rhs = z0;
        rhs.add_assign_scaled(&z1, &HalfLaurent::monomial(2, -1));
        assert_eq!(z, rhs);
    }

    #[test]
    fn partial_resolution_matches_full() {
        // resolving crossings one at a time agrees with resolving all at once
        let w = BraidWord::new(2, vec![(1, 1), (1, -1)]).unwrap();
        let t = braid_to_tangle(&w);
        for bits in 0..4u64 {
            let rho = Resolution::from_bits(bits, 2);
            let step = t
                .resolve_crossing(1, rho.choices[1])
                .resolve_crossing(0, rho.choices[0]);
            let all = t.resolve(&rho);
            assert_eq!(step.resolve(&Resolution::from_bits(0, 0)), all);
        }
    }

    #[test]
    fn crossing_free_tangle_is_plain_partition() {
        let d = PlanarDiagram::pairing(1);
        let t = TangleDiagram::from_planar(&d);
        assert_eq!(
            t.unshifted_partition().unwrap(),
            partition_map(&d).unwrap()
        );
    }

    #[test]
    fn mirror_is_involution() {
        let t = sigma();
        assert_eq!(t.mirror().mirror(), t);
        let flat = TangleDiagram::from_planar(&PlanarDiagram::cup());
        assert_eq!(flat.mirror(), flat);
    }

    #[test]
    fn kink_signs() {
        assert_eq!(kink(true).crossing_signs().unwrap(), (1, 0));
        assert_eq!(kink(false).crossing_signs().unwrap(), (0, 1));
    }

    #[test]
    fn kink_is_invariant_under_reidemeister_one() {
        let plain = TangleDiagram::from_planar(&PlanarDiagram::cap());
        let z_plain = plain.partition_tangle().unwrap();
        for positive in [true, false] {
            let z = kink(positive).partition_tangle().unwrap();
            assert_eq!(z, z_plain, "kink positive={}", positive);
        }
    }

    #[test]
    fn jones_unknot_and_unlinks() {
        // one free circle, no crossings
        let unknot = TangleDiagram::new(vec![0], vec![], vec![], 1);
        assert_eq!(unknot.jones_closed().unwrap(), HalfLaurent::circle());
        let two = TangleDiagram::new(vec![0], vec![], vec![], 2);
        assert_eq!(
            two.jones_closed().unwrap(),
            HalfLaurent::circle().pow(2)
        );
    }

    #[test]
    fn jones_requires_closed_diagram() {
        let open = TangleDiagram::from_planar(&PlanarDiagram::cap());
        assert!(matches!(open.jones_closed(), Err(TangleError::NotClosed)));
        assert!(matches!(
            open.kauffman_oracle(),
            Err(TangleError::NotClosed)
        ));
    }

    #[test]
    fn oracle_matches_on_unknot() {
        let unknot = TangleDiagram::new(vec![0], vec![], vec![], 1);
        assert_eq!(unknot.kauffman_oracle().unwrap(), HalfLaurent::circle());
    }

    #[test]
    fn parse_and_serialize_round_trip() {
        let t = sigma();
        let text = t.serialize();
        assert_eq!(TangleDiagram::parse(&text).unwrap(), t);
    }

    #[test]
    fn parse_reports_unknown_crossing() {
        let err = TangleDiagram::parse("boundaries 1\narc 0:1-x2:0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("not declared"));
    }

    #[test]
    fn parser_survives_mutations() {
        // single-byte corruptions must produce a clean result, never a panic
        let text = sigma().serialize();
        let bytes = text.as_bytes();
        for pos in 0..bytes.len() {
            for replacement in [b'x', b'9', b' ', b'-'] {
                let mut mutated = bytes.to_vec();
                mutated[pos] = replacement;
                if let Ok(s) = String::from_utf8(mutated) {
                    let _ = TangleDiagram::parse(&s);
                }
            }
        }
    }

    #[test]
    fn orientation_propagates_through_crossings() {
        let t = sigma();
        let strip_then_orient_into = |ports: &[u8]| -> TangleDiagram {
            let arcs: Vec<TangleArc> = t
                .arcs()
                .iter()
                .map(|a| {
                    let mut arc = TangleArc {
                        directed: false,
                        ..*a
                    };
                    for &p in ports {
                        if arc.a == End::port(0, p) {
                            std::mem::swap(&mut arc.a, &mut arc.b);
                        }
                        if arc.b == End::port(0, p) {
                            arc.directed = true;
                        }
                    }
                    arc
                })
                .collect();
            TangleDiagram::new(t.half_counts().to_vec(), t.crossings().to_vec(), arcs, 0)
        };
        // orienting one arc per strand is enough: the rest propagates
        let both = strip_then_orient_into(&[0, 3]);
        assert_eq!(both.crossing_signs().unwrap(), (1, 0));
        // with only one strand oriented the other is reported missing
        let half = strip_then_orient_into(&[0]);
        assert!(matches!(
            half.crossing_signs(),
            Err(TangleError::MissingOrientation { .. })
        ));
    }

    #[test]
    fn validate_strict_tangle() {
        assert_eq!(sigma().validate(true), Ok(()));
        assert_eq!(kink(true).validate(true), Ok(()));
    }
}
