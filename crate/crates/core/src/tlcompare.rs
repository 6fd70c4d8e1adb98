//! The Temperley-Lieb planar algebra at delta = q + q^{-1}, its inclusion
//! into the cleaved-link modules, and exact rank computations used to
//! compare the two.
//!
//! TL_{2n} is spanned by the noncrossing matchings on 2n points; a planar
//! diagram acts by gluing matchings into its inner boundaries, deleting the
//! closed circles against a factor of q + q^{-1} each, and reading off the
//! outer matching. Mapping a matching m to the image of 1 under its own
//! partition map embeds TL_{2n} into I_{2n}; the generator matrices on I_4
//! measure how far that embedding is from split.
//!
//! Ranks are taken over the fraction field Q(q^{1/2}) with fraction-free
//! Bareiss elimination, cross-checked by exact rational evaluation at three
//! substitution points.

use crate::cleaved::{display_basis, named_generator, CleavedBasis};
use crate::combinatorics::{enumerate_noncrossing, is_noncrossing, NoncrossingMatching};
use crate::diagram::{Bp, PlanarDiagram};
use crate::partition::{partition_map, PartitionError, PartitionMatrix};
use crate::ring::HalfLaurent;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Dense matrix over Z[q^{1/2}, q^{-1/2}] with explicit dimensions.
#[derive(Clone, PartialEq, Debug)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<HalfLaurent>,
}

impl RingMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            entries: vec![HalfLaurent::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = HalfLaurent::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<HalfLaurent>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols));
        RingMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &HalfLaurent {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut HalfLaurent {
        &mut self.entries[r * self.cols + c]
    }

    pub fn mul(&self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RingMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    *out.at_mut(r, c) += &prod;
                }
            }
        }
        out
    }

    pub fn scaled(&self, factor: &HalfLaurent) -> RingMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = &*e * factor;
        }
        out
    }

    /// Stack matrices vertically.
    pub fn stack(parts: &[&RingMatrix]) -> RingMatrix {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        assert!(parts.iter().all(|m| m.cols == cols));
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut entries = Vec::with_capacity(rows * cols);
        for m in parts {
            entries.extend(m.entries.iter().cloned());
        }
        RingMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[HalfLaurent]) -> Vec<HalfLaurent> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = HalfLaurent::zero();
                for c in 0..self.cols {
                    if !v[c].is_zero() && !self.at(r, c).is_zero() {
                        acc += &(self.at(r, c) * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Exact membership check M v = 0.
pub fn kernel_membership(m: &RingMatrix, v: &[HalfLaurent]) -> bool {
    m.apply(v).iter().all(|e| e.is_zero())
}

/// Rank over the fraction field Q(q^{1/2}) by fraction-free elimination with
/// full pivoting on entries of least exponent spread, cross-checked by
/// rational evaluation at q^{1/2} = 2, 3, 5.
pub fn rank(m: &RingMatrix) -> usize {
    let symbolic = bareiss_rank(m);
    let evals = [2i64, 3, 5]
        .iter()
        .map(|&s| rank_at(m, &BigRational::from_integer(s.into())))
        .max()
        .unwrap_or(0);
    assert_eq!(
        symbolic, evals,
        "substitution rank disagrees with elimination rank"
    );
    symbolic
}

fn bareiss_rank(m: &RingMatrix) -> usize {
    let mut work: Vec<Vec<HalfLaurent>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| m.at(r, c).clone()).collect())
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = HalfLaurent::one();
    let mut k = 0usize;
    while k < rows && k < cols {
        // pivot of least degree span in the remaining block
        let mut pivot: Option<(usize, usize, i64)> = None;
        for r in k..rows {
            for c in k..cols {
                if work[r][c].is_zero() {
                    continue;
                }
                let span = work[r][c].degree_span();
                if pivot.map(|(_, _, best)| span < best).unwrap_or(true) {
                    pivot = Some((r, c, span));
                }
            }
        }
        let (pr, pc, _) = match pivot {
            None => break,
            Some(p) => p,
        };
        work.swap(k, pr);
        for row in work.iter_mut() {
            row.swap(k, pc);
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let num = &(&work[k][k] * &work[i][j]) - &(&work[i][k] * &work[k][j]);
                work[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            work[i][k] = HalfLaurent::zero();
        }
        prev = work[k][k].clone();
        k += 1;
    }
    k
}

/// Rank of the rational specialization at q^{1/2} = s.
fn rank_at(m: &RingMatrix, s: &BigRational) -> usize {
    let mut work: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|r| {
            (0..m.cols)
                .map(|c| m.at(r, c).eval_at(s).expect("nonzero substitution"))
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0usize;
    for c in 0..cols {
        let pivot = (rank..rows).find(|&r| !work[r][c].is_zero());
        let pr = match pivot {
            None => continue,
            Some(r) => r,
        };
        work.swap(rank, pr);
        let inv = work[rank][c].recip();
        for j in c..cols {
            let v = &work[rank][j] * &inv;
            work[rank][j] = v;
        }
        for r in 0..rows {
            if r != rank && !work[r][c].is_zero() {
                let f = work[r][c].clone();
                for j in c..cols {
                    let v = &work[r][j] - &(&work[rank][j] * &f);
                    work[r][j] = v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn determinant(m: &RingMatrix) -> HalfLaurent {
    assert_eq!(m.rows, m.cols, "determinant needs a square matrix");
    let n = m.rows;
    if n == 0 {
        return HalfLaurent::one();
    }
    let mut work: Vec<Vec<HalfLaurent>> = (0..n)
        .map(|r| (0..n).map(|c| m.at(r, c).clone()).collect())
        .collect();
    let mut prev = HalfLaurent::one();
    let mut sign = 1i64;
    for k in 0..n - 1 {
        // pivot within the column block, preferring small exponent spread
        let pivot = (k..n)
            .filter(|&r| !work[r][k].is_zero())
            .min_by_key(|&r| work[r][k].degree_span());
        let pr = match pivot {
            None => return HalfLaurent::zero(),
            Some(r) => r,
        };
        if pr != k {
            work.swap(k, pr);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&work[k][k] * &work[i][j]) - &(&work[i][k] * &work[k][j]);
                work[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            work[i][k] = HalfLaurent::zero();
        }
        prev = work[k][k].clone();
    }
    let det = work[n - 1][n - 1].clone();
    if sign < 0 {
        &HalfLaurent::zero() - &det
    } else {
        det
    }
}

// ---------------------------------------------------------------------------
// the Temperley-Lieb planar algebra
// ---------------------------------------------------------------------------

/// The TL_{2n} basis: noncrossing matchings in canonical order.
pub fn tl_basis(n: u32) -> Vec<NoncrossingMatching> {
    enumerate_noncrossing(n)
}

/// The TL partition map of a planar diagram: glue basis matchings into the
/// inner boundaries, delete closed circles against q + q^{-1}, read off the
/// outer matching.
pub fn tl_partition(diagram: &PlanarDiagram) -> Result<RingMatrix, PartitionError> {
    diagram.validate(false)?;
    let hc = diagram.half_counts();
    let row_basis = tl_basis(hc[0]);
    let col_bases: Vec<Vec<NoncrossingMatching>> =
        hc[1..].iter().map(|&n| tl_basis(n)).collect();
    let row_index: BTreeMap<&NoncrossingMatching, usize> =
        row_basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let cols: usize = col_bases.iter().map(|b| b.len()).product();
    let mut out = RingMatrix::zero(row_basis.len(), cols);

    let mut arc_partner: BTreeMap<Bp, Bp> = BTreeMap::new();
    for &(a, b) in diagram.arcs() {
        arc_partner.insert(a, b);
        arc_partner.insert(b, a);
    }

    let mut choice = vec![0usize; col_bases.len()];
    loop {
        let fillings: Vec<&NoncrossingMatching> = choice
            .iter()
            .zip(&col_bases)
            .map(|(&c, basis)| &basis[c])
            .collect();
        let fill = |p: Bp| -> Option<Bp> {
            if p.boundary == 0 {
                None
            } else {
                Some(Bp::new(
                    p.boundary,
                    fillings[(p.boundary - 1) as usize].partner_of(p.point),
                ))
            }
        };

        // outer connectivity through arcs and inner fillings
        let mut outer_pairs = Vec::new();
        let mut seen: BTreeMap<Bp, ()> = BTreeMap::new();
        for pt in 1..=2 * hc[0] {
            let start = Bp::new(0, pt);
            if seen.contains_key(&start) {
                continue;
            }
            let mut e = arc_partner[&start];
            while let Some(filled) = fill(e) {
                seen.insert(e, ());
                seen.insert(filled, ());
                e = arc_partner[&filled];
            }
            seen.insert(start, ());
            seen.insert(e, ());
            outer_pairs.push((pt, e.point));
        }
        if !is_noncrossing(&outer_pairs) {
            return Err(PartitionError::NonPlanarTrace { boundary: 0 });
        }
        let outer = NoncrossingMatching::try_from_pairs(hc[0], &outer_pairs)
            .map_err(|_| PartitionError::NonPlanarTrace { boundary: 0 })?;

        // closed loops among the untouched inner points
        let mut circles = diagram.free_circles();
        for (b, &n) in hc.iter().enumerate().skip(1) {
            for pt in 1..=2 * n {
                let start = Bp::new(b as u32, pt);
                if seen.contains_key(&start) {
                    continue;
                }
                circles += 1;
                let mut p = start;
                loop {
                    seen.insert(p, ());
                    let q = arc_partner[&p];
                    seen.insert(q, ());
                    p = fill(q).expect("loop point is on an inner boundary");
                    if p == start {
                        break;
                    }
                }
            }
        }

        let col = choice
            .iter()
            .zip(&col_bases)
            .fold(0usize, |acc, (&c, basis)| acc * basis.len() + c);
        *out.at_mut(row_index[&outer], col) = HalfLaurent::circle().pow(circles);

        // advance
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < col_bases[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Re-index a single-factor partition matrix into the display basis order on
/// both sides.
pub fn display_matrix(z: &PartitionMatrix) -> RingMatrix {
    let row_links = display_basis(z.row_basis().n());
    assert_eq!(z.col_factors().len(), 1);
    let col_links = display_basis(z.col_factors()[0].n());
    let row_basis = z.row_basis();
    let col_basis = &z.col_factors()[0];
    let mut out = RingMatrix::zero(row_links.len(), col_links.len());
    for (r, row_link) in row_links.iter().enumerate() {
        let ri = row_basis.index_of(row_link).unwrap();
        for (c, col_link) in col_links.iter().enumerate() {
            let ci = col_basis.index_of(col_link).unwrap() as u64;
            *out.at_mut(r, c) = z.entry(ri, ci);
        }
    }
    out
}

/// The inclusion TL_{2n} -> I_{2n}: column for a matching m is the image of
/// 1 under the partition map of m drawn in a bare disc. Rows are in display
/// basis order.
pub fn tl_to_i(n: u32) -> RingMatrix {
    let matchings = tl_basis(n);
    let links = display_basis(n);
    let basis = CleavedBasis::shared(n);
    let mut out = RingMatrix::zero(links.len(), matchings.len());
    for (c, m) in matchings.iter().enumerate() {
        let z = partition_map(&PlanarDiagram::from_matching(m)).expect("matching diagram");
        for (r, link) in links.iter().enumerate() {
            *out.at_mut(r, c) = z.entry(basis.index_of(link).unwrap(), 0);
        }
    }
    out
}

/// Annular diagram applying a cup-cap at strand positions (i, i+1):
/// signature (n; n), the remaining strands radial.
pub fn annular_cupcap(n: u32, i: u32) -> PlanarDiagram {
    assert!(i >= 1 && i < 2 * n, "position out of range");
    let mut arcs = vec![
        (Bp::new(1, i), Bp::new(1, i + 1)),
        (Bp::new(0, i), Bp::new(0, i + 1)),
    ];
    for k in 1..=2 * n {
        if k != i && k != i + 1 {
            arcs.push((Bp::new(0, k), Bp::new(1, k)));
        }
    }
    PlanarDiagram::new(vec![n, n], arcs, 0)
}

/// The matrices of the Temperley-Lieb generators acting on I_{2n}, display
/// basis order, indexed by position 1..2n-1.
pub fn tl_generator_matrices(n: u32) -> Vec<RingMatrix> {
    (1..2 * n)
        .map(|i| display_matrix(&partition_map(&annular_cupcap(n, i)).expect("cup-cap diagram")))
        .collect()
}

/// Temperley-Lieb action of the generator at position i on TL_{2n}.
pub fn tl_generator_action(n: u32, i: u32) -> RingMatrix {
    tl_partition(&annular_cupcap(n, i)).expect("cup-cap diagram")
}

// ---------------------------------------------------------------------------
// verified kernel data for the generator matrices on I_4
// ---------------------------------------------------------------------------

/// A formal combination of named I_4 generators.
pub type LabelledVector = Vec<(&'static str, HalfLaurent)>;

/// Coefficient vector in display basis order from labelled terms.
pub fn i4_vector(terms: &LabelledVector) -> Vec<HalfLaurent> {
    let links = display_basis(2);
    let mut out = vec![HalfLaurent::zero(); links.len()];
    for (label, coeff) in terms {
        let link = named_generator(label).expect("known I_4 label");
        let idx = links.iter().position(|l| l == &link).unwrap();
        out[idx] = &out[idx] + coeff;
    }
    out
}

fn q_half() -> HalfLaurent {
    HalfLaurent::monomial(1, 1)
}

fn q_half_inv() -> HalfLaurent {
    HalfLaurent::monomial(-1, 1)
}

fn minus(p: HalfLaurent) -> HalfLaurent {
    &HalfLaurent::zero() - &p
}

/// Spanning set of the kernel of the generator matrix at position i
/// (1-based), as labelled combinations. Verified against the computed
/// matrices by `kernel_membership`.
pub fn i4_generator_kernel(position: u32) -> Vec<LabelledVector> {
    let one = HalfLaurent::one;
    match position {
        // cup-cap at (1,2): kills the B and D families
        1 => vec![
            vec![("C++", one()), ("A+", minus(q_half()))],
            vec![("C-+", one()), ("A+", minus(q_half_inv()))],
            vec![("C+-", one()), ("A-", minus(q_half()))],
            vec![("C--", one()), ("A-", minus(q_half_inv()))],
            vec![("D+", one())],
            vec![("D-", one())],
            vec![("B++", one())],
            vec![("B+-", one())],
            vec![("B-+", one())],
            vec![("B--", one())],
        ],
        // cup-cap at (2,3): kills the C and A families
        2 => vec![
            vec![("C++", one())],
            vec![("C-+", one())],
            vec![("C+-", one())],
            vec![("C--", one())],
            vec![("A+", one())],
            vec![("A-", one())],
            vec![("B++", one()), ("D+", minus(q_half()))],
            vec![("B+-", one()), ("D+", minus(q_half_inv()))],
            vec![("B-+", one()), ("D-", minus(q_half()))],
            vec![("B--", one()), ("D-", minus(q_half_inv()))],
        ],
        // cup-cap at (3,4): like position 1 with the mixed C subscripts swapped
        3 => vec![
            vec![("C++", one()), ("A+", minus(q_half()))],
            vec![("C+-", one()), ("A+", minus(q_half_inv()))],
            vec![("C-+", one()), ("A-", minus(q_half()))],
            vec![("C--", one()), ("A-", minus(q_half_inv()))],
            vec![("D+", one())],
            vec![("D-", one())],
            vec![("B++", one())],
            vec![("B+-", one())],
            vec![("B-+", one())],
            vec![("B--", one())],
        ],
        _ => panic!("I_4 has generators at positions 1..3"),
    }
}

/// Spanning set of the joint kernel of all three generator matrices on I_4.
pub fn i4_joint_kernel() -> Vec<LabelledVector> {
    let one = HalfLaurent::one;
    vec![
        vec![("B++", one()), ("D+", minus(q_half()))],
        vec![("B+-", one()), ("D+", minus(q_half_inv()))],
        vec![("B-+", one()), ("D-", minus(q_half()))],
        vec![("B--", one()), ("D-", minus(q_half_inv()))],
        vec![("C++", one()), ("A+", minus(q_half()))],
        vec![("C--", one()), ("A-", minus(q_half_inv()))],
        vec![
            ("C-+", one()),
            ("C+-", one()),
            ("A+", minus(q_half_inv())),
            ("A-", minus(q_half())),
        ],
    ]
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
