//! Disc configurations, planar diagrams, validation, composition, and the
//! diagram text format.
//!
//! A planar diagram lives in a disc with m holes. Boundary 0 is the outer
//! circle, boundaries 1..m are the holes, and boundary i carries 2n_i marked
//! points numbered along its orientation from the basepoint. The diagram is
//! a set of arcs pairing up all boundary points, plus a count of closed
//! circles floating in the surface.
//!
//! Validation has two levels: the cheap structural check (every point used
//! exactly once) and a strict check that builds the rotation system of the
//! boundary-plus-arc graph and verifies via Euler characteristic that the
//! diagram embeds in the multi-holed disc.

use crate::combinatorics::NoncrossingMatching;
use std::collections::BTreeMap;
use std::fmt;

/// A boundary point: point `point` (1-based) on boundary `boundary`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bp {
    pub boundary: u32,
    pub point: u32,
}

impl Bp {
    pub fn new(boundary: u32, point: u32) -> Self {
        Bp { boundary, point }
    }
}

impl fmt::Display for Bp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.boundary, self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    PointOutOfRange(Bp),
    BoundaryOutOfRange(u32),
    DanglingPoint(Bp),
    ReusedPoint(Bp),
    /// The arc graph cannot be drawn in the multi-holed disc.
    GenusViolation,
    SignatureMismatch {
        index: usize,
        expected: u32,
        found: u32,
    },
    BoundaryNotEmpty {
        index: usize,
        half_count: u32,
    },
    InnerBoundaryRequired,
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::PointOutOfRange(p) => write!(f, "point {} out of range", p),
            DiagramError::BoundaryOutOfRange(b) => write!(f, "boundary {} out of range", b),
            DiagramError::DanglingPoint(p) => write!(f, "point {} is not used by any arc", p),
            DiagramError::ReusedPoint(p) => write!(f, "point {} is used more than once", p),
            DiagramError::GenusViolation => {
                write!(f, "arcs cannot be embedded in the surface (genus > 0)")
            }
            DiagramError::SignatureMismatch {
                index,
                expected,
                found,
            } => write!(
                f,
                "signature mismatch at boundary {}: expected half-count {}, found {}",
                index, expected, found
            ),
            DiagramError::BoundaryNotEmpty { index, half_count } => write!(
                f,
                "boundary {} has half-count {}, expected 0",
                index, half_count
            ),
            DiagramError::InnerBoundaryRequired => {
                write!(f, "operation requires an inner boundary (index >= 1)")
            }
        }
    }
}

impl std::error::Error for DiagramError {}

/// Arcs and circles in a disc configuration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanarDiagram {
    half_counts: Vec<u32>,
    /// canonical form: each arc (a, b) with a <= b, arcs sorted
    arcs: Vec<(Bp, Bp)>,
    free_circles: u32,
}

impl PlanarDiagram {
    pub fn new(half_counts: Vec<u32>, arcs: Vec<(Bp, Bp)>, free_circles: u32) -> Self {
        assert!(!half_counts.is_empty(), "need at least the outer boundary");
        let mut arcs: Vec<(Bp, Bp)> = arcs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        arcs.sort();
        PlanarDiagram {
            half_counts,
            arcs,
            free_circles,
        }
    }

    /// The signature (n_0; n_1, ..., n_m).
    pub fn half_counts(&self) -> &[u32] {
        &self.half_counts
    }

    /// Number of inner boundaries, m.
    pub fn inner_count(&self) -> usize {
        self.half_counts.len() - 1
    }

    pub fn arcs(&self) -> &[(Bp, Bp)] {
        &self.arcs
    }

    pub fn free_circles(&self) -> u32 {
        self.free_circles
    }

    pub fn with_extra_circles(&self, k: u32) -> Self {
        let mut out = self.clone();
        out.free_circles += k;
        out
    }

    /// Signature-(n) diagram whose arcs realize the given matching.
    pub fn from_matching(m: &NoncrossingMatching) -> Self {
        let arcs = m
            .pairs()
            .iter()
            .map(|&(a, b)| (Bp::new(0, a), Bp::new(0, b)))
            .collect();
        PlanarDiagram::new(vec![m.n()], arcs, 0)
    }

    /// The identity diagram of the annular operad: signature (n; n), point k
    /// of the outer boundary joined radially to point k of the inner one.
    pub fn radial_identity(n: u32) -> Self {
        let arcs = (1..=2 * n)
            .map(|k| (Bp::new(0, k), Bp::new(1, k)))
            .collect();
        PlanarDiagram::new(vec![n, n], arcs, 0)
    }

    /// The pairing diagram: signature (0; n, n), with point k of boundary 1
    /// joined to point 2n+1-k of boundary 2.
    pub fn pairing(n: u32) -> Self {
        let arcs = (1..=2 * n)
            .map(|k| (Bp::new(1, k), Bp::new(2, 2 * n + 1 - k)))
            .collect();
        PlanarDiagram::new(vec![0, n, n], arcs, 0)
    }

    /// Signature (0; 1): a single arc closing off the two inner points.
    pub fn cup() -> Self {
        PlanarDiagram::new(vec![0, 1], vec![(Bp::new(1, 1), Bp::new(1, 2))], 0)
    }

    /// Signature (1): a single arc between the two outer points.
    pub fn cap() -> Self {
        PlanarDiagram::new(vec![1], vec![(Bp::new(0, 1), Bp::new(0, 2))], 0)
    }

    fn point_in_range(&self, p: Bp) -> bool {
        (p.boundary as usize) < self.half_counts.len()
            && p.point >= 1
            && p.point <= 2 * self.half_counts[p.boundary as usize]
    }

    /// Structural validation; with `strict` also check planar embeddability.
    pub fn validate(&self, strict: bool) -> Result<(), DiagramError> {
        let mut used: BTreeMap<Bp, u32> = BTreeMap::new();
        for &(a, b) in &self.arcs {
            for p in [a, b] {
                if !self.point_in_range(p) {
                    return Err(DiagramError::PointOutOfRange(p));
                }
                *used.entry(p).or_insert(0) += 1;
            }
        }
        for (i, &n) in self.half_counts.iter().enumerate() {
            for pt in 1..=2 * n {
                let p = Bp::new(i as u32, pt);
                match used.get(&p).copied().unwrap_or(0) {
                    0 => return Err(DiagramError::DanglingPoint(p)),
                    1 => {}
                    _ => return Err(DiagramError::ReusedPoint(p)),
                }
            }
        }
        if strict {
            self.check_planarity()?;
        }
        Ok(())
    }

    /// Replace boundary i of `self` by the diagram `inner`, gluing point k of
    /// `inner`'s outer boundary to point k of boundary i.
    pub fn compose(&self, i: usize, inner: &PlanarDiagram) -> Result<PlanarDiagram, DiagramError> {
        if i == 0 {
            return Err(DiagramError::InnerBoundaryRequired);
        }
        if i >= self.half_counts.len() {
            return Err(DiagramError::BoundaryOutOfRange(i as u32));
        }
        let n = self.half_counts[i];
        if inner.half_counts[0] != n {
            return Err(DiagramError::SignatureMismatch {
                index: i,
                expected: n,
                found: inner.half_counts[0],
            });
        }
        self.validate(false)?;
        inner.validate(false)?;

        let inner_m = inner.inner_count();
        let mut half_counts = Vec::new();
        half_counts.extend_from_slice(&self.half_counts[..i]);
        half_counts.extend_from_slice(&inner.half_counts[1..]);
        half_counts.extend_from_slice(&self.half_counts[i + 1..]);

        let outer_relabel = |p: Bp| -> Bp {
            let b = p.boundary as usize;
            debug_assert_ne!(b, i);
            if b < i {
                p
            } else {
                Bp::new((b + inner_m - 1) as u32, p.point)
            }
        };
        let inner_relabel = |p: Bp| -> Bp {
            debug_assert_ne!(p.boundary, 0);
            Bp::new(p.boundary + i as u32 - 1, p.point)
        };

        // Interface point k has one arc end in each diagram; walk chains.
        let mut outer_at = vec![usize::MAX; (2 * n + 1) as usize];
        let mut inner_at = vec![usize::MAX; (2 * n + 1) as usize];
        for (idx, &(a, b)) in self.arcs.iter().enumerate() {
            for p in [a, b] {
                if p.boundary as usize == i {
                    outer_at[p.point as usize] = idx;
                }
            }
        }
        for (idx, &(a, b)) in inner.arcs.iter().enumerate() {
            for p in [a, b] {
                if p.boundary == 0 {
                    inner_at[p.point as usize] = idx;
                }
            }
        }

        #[derive(Clone, Copy, PartialEq)]
        enum Side {
            Outer,
            Inner,
        }
        let other_end = |side: Side, arc_idx: usize, from: Bp| -> Bp {
            let (a, b) = match side {
                Side::Outer => self.arcs[arc_idx],
                Side::Inner => inner.arcs[arc_idx],
            };
            if a == from {
                b
            } else {
                a
            }
        };
        let is_interface = |side: Side, p: Bp| -> bool {
            match side {
                Side::Outer => p.boundary as usize == i,
                Side::Inner => p.boundary == 0,
            }
        };

        let mut visited_outer = vec![false; self.arcs.len()];
        let mut visited_inner = vec![false; inner.arcs.len()];
        let mut arcs = Vec::new();

        // Walk a chain of arcs through the glued interface; returns the side
        // and endpoint where it leaves the interface.
        let walk = |side0: Side,
                         arc_idx0: usize,
                         start: Bp,
                         visited_outer: &mut Vec<bool>,
                         visited_inner: &mut Vec<bool>|
         -> (Side, Bp) {
            let mut side = side0;
            let mut arc_idx = arc_idx0;
            let mut from = start;
            loop {
                match side {
                    Side::Outer => visited_outer[arc_idx] = true,
                    Side::Inner => visited_inner[arc_idx] = true,
                }
                let to = other_end(side, arc_idx, from);
                if !is_interface(side, to) {
                    return (side, to);
                }
                let k = to.point as usize;
                let (next_side, next_idx) = match side {
                    Side::Outer => (Side::Inner, inner_at[k]),
                    Side::Inner => (Side::Outer, outer_at[k]),
                };
                side = next_side;
                arc_idx = next_idx;
                from = match side {
                    Side::Outer => Bp::new(i as u32, to.point),
                    Side::Inner => Bp::new(0, to.point),
                };
            }
        };

        for (idx, &(a, b)) in self.arcs.iter().enumerate() {
            for start in [a, b] {
                if is_interface(Side::Outer, start) || visited_outer[idx] {
                    continue;
                }
                let (end_side, end) = walk(
                    Side::Outer,
                    idx,
                    start,
                    &mut visited_outer,
                    &mut visited_inner,
                );
                let end = match end_side {
                    Side::Outer => outer_relabel(end),
                    Side::Inner => inner_relabel(end),
                };
                arcs.push((outer_relabel(start), end));
            }
        }
        for (idx, &(a, b)) in inner.arcs.iter().enumerate() {
            for start in [a, b] {
                if is_interface(Side::Inner, start) || visited_inner[idx] {
                    continue;
                }
                let (end_side, end) = walk(
                    Side::Inner,
                    idx,
                    start,
                    &mut visited_outer,
                    &mut visited_inner,
                );
                let end = match end_side {
                    Side::Outer => outer_relabel(end),
                    Side::Inner => inner_relabel(end),
                };
                arcs.push((inner_relabel(start), end));
            }
        }

        // Leftover arcs lie on chains closed up through the interface; each
        // such cycle alternates between the two diagrams, so scanning the
        // outer arcs finds every one. Walk with explicit termination since
        // these chains never leave the interface.
        let mut closed = 0u32;
        for idx in 0..self.arcs.len() {
            if visited_outer[idx] {
                continue;
            }
            closed += 1;
            let mut side = Side::Outer;
            let mut arc_idx = idx;
            let mut from = self.arcs[idx].0;
            loop {
                match side {
                    Side::Outer => visited_outer[arc_idx] = true,
                    Side::Inner => visited_inner[arc_idx] = true,
                }
                let to = other_end(side, arc_idx, from);
                debug_assert!(is_interface(side, to));
                let k = to.point;
                let (next_side, next_idx) = match side {
                    Side::Outer => (Side::Inner, inner_at[k as usize]),
                    Side::Inner => (Side::Outer, outer_at[k as usize]),
                };
                side = next_side;
                arc_idx = next_idx;
                from = match side {
                    Side::Outer => Bp::new(i as u32, k),
                    Side::Inner => Bp::new(0, k),
                };
                if side == Side::Outer && arc_idx == idx {
                    break;
                }
            }
        }
        debug_assert!(visited_inner.iter().all(|&v| v));

        Ok(PlanarDiagram::new(
            half_counts,
            arcs,
            self.free_circles + inner.free_circles + closed,
        ))
    }

    /// Remove an inner boundary that carries no points.
    pub fn drop_trivial_boundary(&self, i: usize) -> Result<PlanarDiagram, DiagramError> {
        if i == 0 {
            return Err(DiagramError::InnerBoundaryRequired);
        }
        if i >= self.half_counts.len() {
            return Err(DiagramError::BoundaryOutOfRange(i as u32));
        }
        if self.half_counts[i] != 0 {
            return Err(DiagramError::BoundaryNotEmpty {
                index: i,
                half_count: self.half_counts[i],
            });
        }
        let mut half_counts = self.half_counts.clone();
        half_counts.remove(i);
        let relabel = |p: Bp| -> Bp {
            if (p.boundary as usize) > i {
                Bp::new(p.boundary - 1, p.point)
            } else {
                p
            }
        };
        let arcs = self
            .arcs
            .iter()
            .map(|&(a, b)| (relabel(a), relabel(b)))
            .collect();
        Ok(PlanarDiagram::new(half_counts, arcs, self.free_circles))
    }

    /// Euler-characteristic planarity check of the boundary-plus-arc graph.
    ///
    /// Builds the combinatorial map whose vertices are the boundary points,
    /// whose edges are the boundary segments between consecutive points plus
    /// the arcs, with rotations chosen so arcs leave inner boundaries into
    /// the surface and leave the outer boundary inward. Every connected
    /// component must satisfy V - E + F = 2, and each disc interior must
    /// come back as a single arc-free face.
    fn check_planarity(&self) -> Result<(), DiagramError> {
        // vertex ids
        let mut offset = vec![0usize; self.half_counts.len() + 1];
        for (b, &n) in self.half_counts.iter().enumerate() {
            offset[b + 1] = offset[b] + 2 * n as usize;
        }
        let n_vertices = offset[self.half_counts.len()];
        if n_vertices == 0 {
            return Ok(());
        }
        let vid = |p: Bp| -> usize { offset[p.boundary as usize] + (p.point - 1) as usize };

        // edges: per-boundary segments then arcs
        #[derive(Clone, Copy, PartialEq)]
        enum EdgeKind {
            Segment { boundary: u32 },
            Arc,
        }
        let mut edges: Vec<(usize, usize, EdgeKind)> = Vec::new();
        let mut seg_edge = BTreeMap::new(); // (boundary, from point) -> edge id
        for (b, &n) in self.half_counts.iter().enumerate() {
            let k = 2 * n;
            for p in 1..=k {
                let q = if p == k { 1 } else { p + 1 };
                seg_edge.insert((b as u32, p), edges.len());
                edges.push((
                    vid(Bp::new(b as u32, p)),
                    vid(Bp::new(b as u32, q)),
                    EdgeKind::Segment { boundary: b as u32 },
                ));
            }
        }
        let mut arc_at: BTreeMap<usize, usize> = BTreeMap::new(); // vertex -> arc edge id
        for &(a, b) in &self.arcs {
            let id = edges.len();
            arc_at.insert(vid(a), id);
            arc_at.insert(vid(b), id);
            edges.push((vid(a), vid(b), EdgeKind::Arc));
        }

        // darts: 2*edge + end. dart at vertex:
        let dart_vertex = |d: usize| -> usize {
            let (a, b, _) = edges[d / 2];
            if d.is_multiple_of(2) {
                a
            } else {
                b
            }
        };
        let n_darts = 2 * edges.len();

        // rotation: list darts at each vertex in counterclockwise order
        let mut rot_next = vec![usize::MAX; n_darts];
        for (b, &n) in self.half_counts.iter().enumerate() {
            let k = 2 * n;
            for p in 1..=k {
                let v = Bp::new(b as u32, p);
                let prev_pt = if p == 1 { k } else { p - 1 };
                let prev_dart = 2 * seg_edge[&(b as u32, prev_pt)] + 1;
                let next_dart = 2 * seg_edge[&(b as u32, p)];
                // arc endpoints are distinct points once the structural
                // check has passed, so exactly one dart of the arc sits here
                let arc_dart = {
                    let e = arc_at[&vid(v)];
                    if dart_vertex(2 * e) == vid(v) {
                        2 * e
                    } else {
                        2 * e + 1
                    }
                };
                let cycle: [usize; 3] = if b == 0 {
                    [prev_dart, next_dart, arc_dart]
                } else {
                    [prev_dart, arc_dart, next_dart]
                };
                for w in 0..3 {
                    rot_next[cycle[w]] = cycle[(w + 1) % 3];
                }
            }
        }

        // components via union-find on vertices
        let mut parent: Vec<usize> = (0..n_vertices).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b, _) in &edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }

        let mut v_count: BTreeMap<usize, i64> = BTreeMap::new();
        let mut e_count: BTreeMap<usize, i64> = BTreeMap::new();
        let mut f_count: BTreeMap<usize, i64> = BTreeMap::new();
        for v in 0..n_vertices {
            *v_count.entry(find(&mut parent, v)).or_insert(0) += 1;
        }
        for &(a, _, _) in &edges {
            *e_count.entry(find(&mut parent, a)).or_insert(0) += 1;
        }

        // faces: orbits of dart -> rot_next(twin(dart))
        let mut seen = vec![false; n_darts];
        for d0 in 0..n_darts {
            if seen[d0] {
                continue;
            }
            let mut d = d0;
            loop {
                seen[d] = true;
                d = rot_next[d ^ 1];
                if d == d0 {
                    break;
                }
            }
            let comp = find(&mut parent, dart_vertex(d0));
            *f_count.entry(comp).or_insert(0) += 1;
        }

        for (comp, &v) in &v_count {
            let e = e_count.get(comp).copied().unwrap_or(0);
            let f = f_count.get(comp).copied().unwrap_or(0);
            if v - e + f != 2 {
                return Err(DiagramError::GenusViolation);
            }
        }

        // each disc interior must be one arc-free face: for inner boundaries
        // that face is traced by the backward segment darts, for the outer
        // boundary by the forward ones
        for (b, &n) in self.half_counts.iter().enumerate() {
            let k = 2 * n;
            if k == 0 {
                continue;
            }
            let start = if b == 0 {
                2 * seg_edge[&(b as u32, 1)]
            } else {
                2 * seg_edge[&(b as u32, 1)] + 1
            };
            let mut d = start;
            let mut len = 0u32;
            loop {
                match edges[d / 2].2 {
                    EdgeKind::Segment { boundary } if boundary == b as u32 => {}
                    _ => return Err(DiagramError::GenusViolation),
                }
                len += 1;
                d = rot_next[d ^ 1];
                if d == start {
                    break;
                }
            }
            if len != k {
                return Err(DiagramError::GenusViolation);
            }
        }
        Ok(())
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

// ---------------------------------------------------------------------------
// text format
// ---------------------------------------------------------------------------

/// Parse error with 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Syntactic endpoint: a boundary point or a crossing port.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RawEnd {
    Boundary(u32, u32),
    Port(u32, u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawStatement {
    Boundaries(Vec<u32>),
    Arc(RawEnd, RawEnd),
    Circles(u32),
    Crossing { id: u32, over13: bool },
    Orient(RawEnd, RawEnd),
}

struct LineCursor<'a> {
    line: &'a str,
    line_no: usize,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line_no,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.line[self.pos..].starts_with(' ') || self.line[self.pos..].starts_with('\t') {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.line.len()
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.line[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            self.err(format!("expected `{}`", token))
        }
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let rest = &self.line[self.pos..];
        let digits: usize = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return self.err("expected a number");
        }
        let value = rest[..digits]
            .parse::<u32>()
            .map_err(|_| ParseError {
                line: self.line_no,
                column: self.pos + 1,
                message: "number out of range".into(),
            })?;
        self.pos += digits;
        Ok(value)
    }

    fn endpoint(&mut self) -> Result<RawEnd, ParseError> {
        self.skip_ws();
        if self.line[self.pos..].starts_with('x') {
            self.pos += 1;
            let id = self.number()?;
            self.expect(":")?;
            let port = self.number()?;
            if port > 3 {
                return self.err("crossing port must be 0..3");
            }
            Ok(RawEnd::Port(id, port as u8))
        } else {
            let b = self.number()?;
            self.expect(":")?;
            let p = self.number()?;
            Ok(RawEnd::Boundary(b, p))
        }
    }
}

pub(crate) fn parse_statements(text: &str) -> Result<Vec<(usize, RawStatement)>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw_line.find('#') {
            Some(h) => &raw_line[..h],
            None => raw_line,
        };
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = LineCursor {
            line: content,
            line_no,
            pos: 0,
        };
        cur.skip_ws();
        let word_len = content[cur.pos..]
            .chars()
            .take_while(|c| c.is_ascii_alphabetic())
            .count();
        let keyword = &content[cur.pos..cur.pos + word_len];
        let kw_pos = cur.pos;
        cur.pos += word_len;
        let stmt = match keyword {
            "boundaries" => {
                let mut counts = vec![cur.number()?];
                loop {
                    cur.skip_ws();
                    if cur.line[cur.pos..].starts_with(',') {
                        cur.pos += 1;
                        counts.push(cur.number()?);
                    } else {
                        break;
                    }
                }
                RawStatement::Boundaries(counts)
            }
            "arc" => {
                let a = cur.endpoint()?;
                cur.expect("-")?;
                let b = cur.endpoint()?;
                RawStatement::Arc(a, b)
            }
            "circles" => RawStatement::Circles(cur.number()?),
            "crossing" => {
                let id = cur.number()?;
                cur.expect("over=")?;
                cur.skip_ws();
                let over13 = if cur.line[cur.pos..].starts_with("02") {
                    cur.pos += 2;
                    false
                } else if cur.line[cur.pos..].starts_with("13") {
                    cur.pos += 2;
                    true
                } else {
                    return cur.err("expected `02` or `13`");
                };
                RawStatement::Crossing { id, over13 }
            }
            "orient" => {
                let a = cur.endpoint()?;
                cur.expect("->")?;
                let b = cur.endpoint()?;
                RawStatement::Orient(a, b)
            }
            _ => {
                cur.pos = kw_pos;
                return cur.err(format!("unknown statement `{}`", keyword));
            }
        };
        if !cur.at_end() {
            return cur.err("trailing input");
        }
        out.push((line_no, stmt));
    }
    Ok(out)
}

impl PlanarDiagram {
    /// Parse the diagram text format. Crossing and orient statements are
    /// rejected here; use the tangle parser for those.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let stmts = parse_statements(text)?;
        let mut half_counts: Option<Vec<u32>> = None;
        let mut arcs = Vec::new();
        let mut circles = 0u32;
        let mut seen_circles = false;
        for (line, stmt) in stmts {
            let fail = |message: &str| -> ParseError {
                ParseError {
                    line,
                    column: 1,
                    message: message.into(),
                }
            };
            match stmt {
                RawStatement::Boundaries(counts) => {
                    if half_counts.is_some() {
                        return Err(fail("duplicate boundaries statement"));
                    }
                    half_counts = Some(counts);
                }
                RawStatement::Arc(a, b) => {
                    let hc = half_counts
                        .as_ref()
                        .ok_or_else(|| fail("arc before boundaries statement"))?;
                    let conv = |e: RawEnd| -> Result<Bp, ParseError> {
                        match e {
                            RawEnd::Boundary(bb, pp) => {
                                if (bb as usize) >= hc.len() {
                                    return Err(fail(&format!("boundary {} out of range", bb)));
                                }
                                if pp < 1 || pp > 2 * hc[bb as usize] {
                                    return Err(fail(&format!(
                                        "point {}:{} out of range (half-count {})",
                                        bb, pp, hc[bb as usize]
                                    )));
                                }
                                Ok(Bp::new(bb, pp))
                            }
                            RawEnd::Port(..) => {
                                Err(fail("crossing ports are not allowed in a planar diagram"))
                            }
                        }
                    };
                    arcs.push((conv(a)?, conv(b)?));
                }
                RawStatement::Circles(k) => {
                    if seen_circles {
                        return Err(fail("duplicate circles statement"));
                    }
                    seen_circles = true;
                    circles = k;
                }
                RawStatement::Crossing { .. } | RawStatement::Orient(..) => {
                    return Err(fail(
                        "crossing statements are not allowed in a planar diagram",
                    ));
                }
            }
        }
        let half_counts =
            half_counts.ok_or_else(|| ParseError {
                line: 1,
                column: 1,
                message: "missing boundaries statement".into(),
            })?;
        Ok(PlanarDiagram::new(half_counts, arcs, circles))
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let counts: Vec<String> = self.half_counts.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!("boundaries {}\n", counts.join(",")));
        for &(a, b) in &self.arcs {
            out.push_str(&format!("arc {}-{}\n", a, b));
        }
        if self.free_circles > 0 {
            out.push_str(&format!("circles {}\n", self.free_circles));
        }
        out
    }
}
