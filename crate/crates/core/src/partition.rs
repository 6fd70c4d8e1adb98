//! Multiply cleaved links, weights, boundary maps, and the partition map of
//! a planar diagram as an exact matrix.
//!
//! Filling every boundary of a planar diagram with a noncrossing matching
//! closes the arcs into circles; decorating each circle with a sign gives a
//! multiply cleaved link. Its weight is the product over circles of
//! q^{+(1 - N/2)} or q^{-(1 - N/2)} by decoration, where N counts the
//! boundary circles the circle meets. Summing weights over all decorated
//! fillings, organized by the cleaved links induced on each boundary, yields
//! the partition matrix
//!
//!   rows:    basis of I_{2n_0}
//!   columns: product of the bases of I_{2n_1}, ..., I_{2n_m}
//!
//! with columns flattened in row-major order over the factors.

use crate::cleaved::{CleavedBasis, CleavedLink, Sign};
use crate::combinatorics::{
    enumerate_noncrossing, is_noncrossing, trace_cycles, NoncrossingMatching,
};
use crate::diagram::{Bp, DiagramError, PlanarDiagram};
use crate::ring::HalfLaurent;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    Diagram(DiagramError),
    /// A matching traced through the diagram crossed itself: the input is
    /// not realizable in the plane, so the partition map is undefined.
    NonPlanarTrace {
        boundary: u32,
    },
    BasisMismatch,
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::Diagram(e) => write!(f, "{}", e),
            PartitionError::NonPlanarTrace { boundary } => write!(
                f,
                "matching traced at boundary {} crosses itself; diagram is not planar",
                boundary
            ),
            PartitionError::BasisMismatch => write!(f, "bases do not match"),
        }
    }
}

impl std::error::Error for PartitionError {}

impl From<DiagramError> for PartitionError {
    fn from(e: DiagramError) -> Self {
        PartitionError::Diagram(e)
    }
}

/// A circle of a filled diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    /// boundary points visited, walk order; empty for a free circle
    pub points: Vec<Bp>,
    /// distinct boundaries met
    pub boundaries: Vec<u32>,
}

impl Circle {
    /// Number of boundary circles met.
    pub fn meets(&self) -> usize {
        self.boundaries.len()
    }
}

/// An undecorated filling of a planar diagram: one noncrossing matching per
/// boundary (boundary 0's matching fills the outer region) together with the
/// traced circles and per-boundary cleaved-link skeletons.
#[derive(Debug, Clone)]
pub struct FilledDiagram {
    fillings: Vec<NoncrossingMatching>,
    /// circles in canonical order: by least endpoint, free circles last
    circles: Vec<Circle>,
    /// per boundary: (inside, outside) matchings of the induced cleaved link
    induced: Vec<(NoncrossingMatching, NoncrossingMatching)>,
    /// per boundary: canonical cycle index -> circle index
    cycle_circle: Vec<Vec<usize>>,
}

impl FilledDiagram {
    pub fn fillings(&self) -> &[NoncrossingMatching] {
        &self.fillings
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    /// Total circle count including free circles.
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }
}

/// A decorated filling: a multiply cleaved link over a fixed base diagram.
#[derive(Debug, Clone)]
pub struct MultiCleavedLink {
    skeleton: FilledDiagram,
    decorations: Vec<Sign>,
}

impl MultiCleavedLink {
    pub fn new(skeleton: FilledDiagram, decorations: Vec<Sign>) -> Self {
        assert_eq!(decorations.len(), skeleton.circle_count());
        MultiCleavedLink {
            skeleton,
            decorations,
        }
    }

    pub fn decorations(&self) -> &[Sign] {
        &self.decorations
    }

    pub fn skeleton(&self) -> &FilledDiagram {
        &self.skeleton
    }

    /// The weight: product over circles of q^{±(1 - N/2)}, always a single
    /// monomial.
    pub fn weight(&self) -> HalfLaurent {
        let mut half_exp = 0i64;
        for (circle, sign) in self.skeleton.circles.iter().zip(&self.decorations) {
            half_exp += sign.unit() * (2 - circle.meets() as i64);
        }
        HalfLaurent::monomial(half_exp, 1)
    }

    /// The cleaved link induced on boundary i.
    pub fn boundary(&self, i: usize) -> CleavedLink {
        let (inside, outside) = self.skeleton.induced[i].clone();
        let decorations = self.skeleton.cycle_circle[i]
            .iter()
            .map(|&c| self.decorations[c])
            .collect();
        CleavedLink::new(inside, outside, decorations)
    }
}

/// Enumerate the fillings of a diagram: the Cartesian product of noncrossing
/// matchings over all boundaries, with circles traced through arcs and
/// fillings.
pub fn enumerate_fillings(diagram: &PlanarDiagram) -> Result<Vec<FilledDiagram>, PartitionError> {
    diagram.validate(false)?;
    let per_boundary: Vec<Vec<NoncrossingMatching>> = diagram
        .half_counts()
        .iter()
        .map(|&n| enumerate_noncrossing(n))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_boundary.len()];
    loop {
        let fillings: Vec<NoncrossingMatching> = choice
            .iter()
            .zip(&per_boundary)
            .map(|(&c, opts)| opts[c].clone())
            .collect();
        out.push(fill_skeleton(diagram, fillings)?);
        // advance the mixed-radix counter, last boundary fastest
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < per_boundary[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

fn fill_skeleton(
    diagram: &PlanarDiagram,
    fillings: Vec<NoncrossingMatching>,
) -> Result<FilledDiagram, PartitionError> {
    let hc = diagram.half_counts();
    let mut arc_partner: BTreeMap<Bp, Bp> = BTreeMap::new();
    for &(a, b) in diagram.arcs() {
        arc_partner.insert(a, b);
        arc_partner.insert(b, a);
    }
    let fill =
        |p: Bp| -> Bp { Bp::new(p.boundary, fillings[p.boundary as usize].partner_of(p.point)) };

    // trace circles: alternate arc / filling steps
    let mut circles = Vec::new();
    let mut seen: BTreeMap<Bp, usize> = BTreeMap::new();
    for (b, &n) in hc.iter().enumerate() {
        for pt in 1..=2 * n {
            let start = Bp::new(b as u32, pt);
            if seen.contains_key(&start) {
                continue;
            }
            let idx = circles.len();
            let mut points = Vec::new();
            let mut p = start;
            loop {
                points.push(p);
                seen.insert(p, idx);
                let q = arc_partner[&p];
                points.push(q);
                seen.insert(q, idx);
                p = fill(q);
                if p == start {
                    break;
                }
            }
            let mut boundaries: Vec<u32> = points.iter().map(|p| p.boundary).collect();
            boundaries.sort_unstable();
            boundaries.dedup();
            circles.push(Circle { points, boundaries });
        }
    }
    for _ in 0..diagram.free_circles() {
        circles.push(Circle {
            points: vec![],
            boundaries: vec![],
        });
    }

    // induced cleaved link per boundary: one matching is the filling, the
    // other is traced through the rest of the diagram
    let mut induced = Vec::with_capacity(hc.len());
    let mut cycle_circle = Vec::with_capacity(hc.len());
    for (b, &n) in hc.iter().enumerate() {
        let b32 = b as u32;
        let mut traced_pairs = Vec::new();
        let mut done = vec![false; (2 * n + 1) as usize];
        for pt in 1..=2 * n {
            if done[pt as usize] {
                continue;
            }
            // leave through the arc at pt; apply fillings of the other
            // boundaries until coming back to boundary b
            let mut e = arc_partner[&Bp::new(b32, pt)];
            while e.boundary != b32 {
                e = arc_partner[&fill(e)];
            }
            done[pt as usize] = true;
            done[e.point as usize] = true;
            traced_pairs.push((pt, e.point));
        }
        if !is_noncrossing(&traced_pairs) {
            return Err(PartitionError::NonPlanarTrace { boundary: b32 });
        }
        let traced = NoncrossingMatching::try_from_pairs(n, &traced_pairs)
            .map_err(|_| PartitionError::NonPlanarTrace { boundary: b32 })?;
        let (inside, outside) = if b == 0 {
            (traced, fillings[0].clone())
        } else {
            (fillings[b].clone(), traced)
        };
        let cycles = trace_cycles(&inside, &outside);
        let map = cycles
            .cycles
            .iter()
            .map(|cyc| seen[&Bp::new(b32, cyc[0])])
            .collect();
        induced.push((inside, outside));
        cycle_circle.push(map);
    }

    Ok(FilledDiagram {
        fillings,
        circles,
        induced,
        cycle_circle,
    })
}

// ---------------------------------------------------------------------------
// partition matrices
// ---------------------------------------------------------------------------

/// Sparse exact matrix between cleaved-link modules. Column indices run in
/// row-major order over the factor bases.
#[derive(Clone, PartialEq, Debug)]
pub struct PartitionMatrix {
    row_basis: Arc<CleavedBasis>,
    col_factors: Vec<Arc<CleavedBasis>>,
    entries: BTreeMap<(usize, u64), HalfLaurent>,
}

impl PartitionMatrix {
    pub fn zero(row_basis: Arc<CleavedBasis>, col_factors: Vec<Arc<CleavedBasis>>) -> Self {
        PartitionMatrix {
            row_basis,
            col_factors,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(basis: Arc<CleavedBasis>) -> Self {
        let mut entries = BTreeMap::new();
        for i in 0..basis.len() {
            entries.insert((i, i as u64), HalfLaurent::one());
        }
        PartitionMatrix {
            row_basis: basis.clone(),
            col_factors: vec![basis],
            entries,
        }
    }

    pub fn row_basis(&self) -> &Arc<CleavedBasis> {
        &self.row_basis
    }

    pub fn col_factors(&self) -> &[Arc<CleavedBasis>] {
        &self.col_factors
    }

    pub fn rows(&self) -> usize {
        self.row_basis.len()
    }

    pub fn cols(&self) -> u64 {
        self.col_factors.iter().map(|b| b.len() as u64).product()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u64, &HalfLaurent)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: u64) -> HalfLaurent {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(HalfLaurent::zero)
    }

    fn add_entry(&mut self, row: usize, col: u64, value: HalfLaurent) {
        if value.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.entries.entry((row, col)) {
            Entry::Vacant(v) => {
                v.insert(value);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Split a flat column index into per-factor indices.
    pub fn col_tuple(&self, mut col: u64) -> Vec<usize> {
        let mut out = vec![0usize; self.col_factors.len()];
        for (k, basis) in self.col_factors.iter().enumerate().rev() {
            let size = basis.len() as u64;
            out[k] = (col % size) as usize;
            col /= size;
        }
        out
    }

    pub fn flat_col(&self, tuple: &[usize]) -> u64 {
        assert_eq!(tuple.len(), self.col_factors.len());
        let mut col = 0u64;
        for (k, basis) in self.col_factors.iter().enumerate() {
            col = col * basis.len() as u64 + tuple[k] as u64;
        }
        col
    }

    pub fn scaled(&self, factor: &HalfLaurent) -> Self {
        let mut out = Self::zero(self.row_basis.clone(), self.col_factors.clone());
        for (&(r, c), v) in &self.entries {
            out.add_entry(r, c, v * factor);
        }
        out
    }

    pub fn add_assign_scaled(&mut self, other: &Self, factor: &HalfLaurent) {
        assert_eq!(self.row_basis, other.row_basis);
        assert_eq!(self.col_factors, other.col_factors);
        for (&(r, c), v) in &other.entries {
            self.add_entry(r, c, v * factor);
        }
    }

    /// Compose along the i-th tensor factor (0-based among the factors):
    /// feed `inner`'s output into that slot.
    pub fn compose_at(&self, i: usize, inner: &Self) -> Result<Self, PartitionError> {
        if i >= self.col_factors.len() || self.col_factors[i] != inner.row_basis {
            return Err(PartitionError::BasisMismatch);
        }
        let mut col_factors = Vec::new();
        col_factors.extend_from_slice(&self.col_factors[..i]);
        col_factors.extend_from_slice(&inner.col_factors);
        col_factors.extend_from_slice(&self.col_factors[i + 1..]);
        let mut out = Self::zero(self.row_basis.clone(), col_factors);

        let slot_size = self.col_factors[i].len() as u64;
        let post_size: u64 = self.col_factors[i + 1..]
            .iter()
            .map(|b| b.len() as u64)
            .product::<u64>()
            .max(1);
        let inner_cols = inner.cols().max(1);

        // group inner entries by row
        let mut by_row: Vec<Vec<(u64, &HalfLaurent)>> = vec![Vec::new(); inner.rows()];
        for (&(r, c), v) in &inner.entries {
            by_row[r].push((c, v));
        }

        for (&(r, c), v) in &self.entries {
            let post = c % post_size;
            let rest = c / post_size;
            let slot = (rest % slot_size) as usize;
            let pre = rest / slot_size;
            for &(ic, iv) in &by_row[slot] {
                let col = (pre * inner_cols + ic) * post_size + post;
                out.add_entry(r, col, v * iv);
            }
        }
        Ok(out)
    }

    /// Matrix product of single-factor matrices.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, PartitionError> {
        self.compose_at(0, rhs)
    }

    /// Conjugate every entry and relabel rows and columns by conjugating the
    /// basis elements.
    pub fn conjugated(&self) -> Self {
        let mut out = Self::zero(self.row_basis.clone(), self.col_factors.clone());
        for (&(r, c), v) in &self.entries {
            let new_r = self
                .row_basis
                .index_of(&self.row_basis.get(r).conjugated())
                .unwrap();
            let tuple = self.col_tuple(c);
            let new_tuple: Vec<usize> = tuple
                .iter()
                .zip(&self.col_factors)
                .map(|(&t, basis)| basis.index_of(&basis.get(t).conjugated()).unwrap())
                .collect();
            out.add_entry(new_r, self.flat_col(&new_tuple), v.conjugate());
        }
        out
    }

    pub fn apply(&self, v: &ModuleVector) -> Result<ModuleVector, PartitionError> {
        if v.factors != self.col_factors {
            return Err(PartitionError::BasisMismatch);
        }
        let mut out = ModuleVector::zero(vec![self.row_basis.clone()]);
        for (&(r, c), entry) in &self.entries {
            if let Some(coeff) = v.coeffs.get(&c) {
                out.add_term(r as u64, &(entry * coeff));
            }
        }
        Ok(out)
    }

    /// True when the entries are exactly one 1 in each row and each column.
    pub fn is_permutation(&self) -> bool {
        let n = self.rows() as u64;
        if self.cols() != n || self.entries.len() as u64 != n {
            return false;
        }
        let mut row_seen = vec![false; n as usize];
        let mut col_seen = vec![false; n as usize];
        for (&(r, c), v) in &self.entries {
            if !v.is_one() || row_seen[r] || col_seen[c as usize] {
                return false;
            }
            row_seen[r] = true;
            col_seen[c as usize] = true;
        }
        true
    }
}

/// Formal combination of column-basis tuples over the ring.
#[derive(Clone, PartialEq, Debug)]
pub struct ModuleVector {
    factors: Vec<Arc<CleavedBasis>>,
    coeffs: BTreeMap<u64, HalfLaurent>,
}

impl ModuleVector {
    pub fn zero(factors: Vec<Arc<CleavedBasis>>) -> Self {
        ModuleVector {
            factors,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis vector of a single cleaved link.
    pub fn generator(basis: Arc<CleavedBasis>, link: &CleavedLink) -> Self {
        let idx = basis.index_of(link).expect("link not in basis") as u64;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, HalfLaurent::one());
        ModuleVector {
            factors: vec![basis],
            coeffs,
        }
    }

    pub fn add_term(&mut self, idx: u64, value: &HalfLaurent) {
        if value.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(value.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u64, &HalfLaurent)> {
        self.coeffs.iter().map(|(&i, v)| (i, v))
    }

    pub fn coeff_of(&self, idx: u64) -> HalfLaurent {
        self.coeffs
            .get(&idx)
            .cloned()
            .unwrap_or_else(HalfLaurent::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn worker_count() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        let avail = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        match std::env::var("CLEAVED_THREADS") {
            Ok(s) => s
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .unwrap_or(avail)
                .min(avail),
            Err(_) => avail,
        }
    })
}

/// The partition map of a planar diagram as an exact matrix.
pub fn partition_map(diagram: &PlanarDiagram) -> Result<PartitionMatrix, PartitionError> {
    partition_map_with_threads(diagram, worker_count())
}

/// Same map with an explicit worker count; the result is identical for every
/// count since partial sums merge by commutative addition in a fixed order.
pub fn partition_map_with_threads(
    diagram: &PlanarDiagram,
    threads: usize,
) -> Result<PartitionMatrix, PartitionError> {
    let skeletons = enumerate_fillings(diagram)?;
    let hc = diagram.half_counts();
    let row_basis = CleavedBasis::shared(hc[0]);
    let col_factors: Vec<Arc<CleavedBasis>> =
        hc[1..].iter().map(|&n| CleavedBasis::shared(n)).collect();
    let mut out = PartitionMatrix::zero(row_basis.clone(), col_factors.clone());

    let threads = threads.max(1).min(skeletons.len().max(1));
    let chunk_size = skeletons.len().div_ceil(threads).max(1);

    let accumulate = |chunk: &[FilledDiagram]| -> Vec<((usize, u64), HalfLaurent)> {
        let mut acc: BTreeMap<(usize, u64), HalfLaurent> = BTreeMap::new();
        for skel in chunk {
            accumulate_skeleton(skel, &row_basis, &col_factors, &mut acc);
        }
        acc.into_iter().collect()
    };

    if threads <= 1 {
        for ((r, c), v) in accumulate(&skeletons) {
            out.add_entry(r, c, v);
        }
        return Ok(out);
    }

    let partials: Vec<Vec<((usize, u64), HalfLaurent)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = skeletons
            .chunks(chunk_size)
            .map(|chunk| scope.spawn(|| accumulate(chunk)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for partial in partials {
        for ((r, c), v) in partial {
            out.add_entry(r, c, v);
        }
    }
    Ok(out)
}

fn accumulate_skeleton(
    skel: &FilledDiagram,
    row_basis: &CleavedBasis,
    col_factors: &[Arc<CleavedBasis>],
    acc: &mut BTreeMap<(usize, u64), HalfLaurent>,
) {
    let k = skel.circle_count();
    let plus_exp: Vec<i64> = skel.circles.iter().map(|c| 2 - c.meets() as i64).collect();
    let mut decorations = vec![Sign::Plus; k];
    for bits in 0..(1u64 << k) {
        // binary counter over circles in canonical order, + before -
        for (c, d) in decorations.iter_mut().enumerate() {
            *d = if bits >> (k - 1 - c) & 1 == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
        }
        let mut half_exp = 0i64;
        for (c, d) in decorations.iter().enumerate() {
            half_exp += d.unit() * plus_exp[c];
        }

        let link_at = |b: usize| -> CleavedLink {
            let (inside, outside) = skel.induced[b].clone();
            let dec = skel.cycle_circle[b]
                .iter()
                .map(|&ci| decorations[ci])
                .collect();
            CleavedLink::new(inside, outside, dec)
        };

        let row = row_basis.index_of(&link_at(0)).expect("row basis element");
        let mut col = 0u64;
        for (j, basis) in col_factors.iter().enumerate() {
            let idx = basis
                .index_of(&link_at(j + 1))
                .expect("column basis element");
            col = col * basis.len() as u64 + idx as u64;
        }

        use std::collections::btree_map::Entry;
        let value = HalfLaurent::monomial(half_exp, 1);
        match acc.entry((row, col)) {
            Entry::Vacant(v) => {
                v.insert(value);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Partition matrix of the pairing diagram on I_{2n} (1 row, two factors).
pub fn pairing_matrix(n: u32) -> PartitionMatrix {
    partition_map(&PlanarDiagram::pairing(n)).expect("pairing diagram is valid")
}

/// View a two-factor scalar-output matrix as a square array over one factor.
pub fn gram_view(matrix: &PartitionMatrix) -> Result<PartitionMatrix, PartitionError> {
    if matrix.rows() != 1 || matrix.col_factors.len() != 2 {
        return Err(PartitionError::BasisMismatch);
    }
    if matrix.col_factors[0] != matrix.col_factors[1] {
        return Err(PartitionError::BasisMismatch);
    }
    let basis = matrix.col_factors[0].clone();
    let mut out = PartitionMatrix::zero(basis.clone(), vec![basis.clone()]);
    let size = basis.len() as u64;
    for (&(_, c), v) in &matrix.entries {
        out.add_entry((c / size) as usize, c % size, v.clone());
    }
    Ok(out)
}
