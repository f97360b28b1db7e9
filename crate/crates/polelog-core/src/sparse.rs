//! Sparse exact linear algebra: matrices, incremental column echelonization,
//! rank, kernel bases, and canonical solves.
//!
//! The echelon form drives every rank/kernel question in the crate. Kernel
//! vectors and solutions are normalized the way a reduced row echelon form
//! would produce them (free coordinates zero, each kernel vector carried by
//! one free column), so outputs are reproducible byte for byte.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Zero};

use crate::scalar::{ExactScalar, Scalar};

/// Sparse vector: strictly increasing indices, nonzero entries only.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparseVec<F: Scalar> {
    pub entries: Vec<(usize, F)>,
}

impl<F: Scalar> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(idx: usize) -> Self {
        SparseVec {
            entries: vec![(idx, F::one())],
        }
    }

    pub fn from_entries(mut entries: Vec<(usize, F)>) -> Self {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|(i, _)| *i);
        for w in entries.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate index in sparse vector");
        }
        SparseVec { entries }
    }

    pub fn from_dense(dense: &[F]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, idx: usize) -> Option<&F> {
        self.entries
            .binary_search_by_key(&idx, |(i, _)| *i)
            .ok()
            .map(|p| &self.entries[p].1)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, v.mul(c)))
                .collect(),
        }
    }

    /// self + c * other
    pub fn add_scaled(&self, c: &F, other: &Self) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let pick_a = match (self.entries.get(a), other.entries.get(b)) {
                (Some((ia, _)), Some((ib, _))) => {
                    if ia == ib {
                        let v = self.entries[a].1.add(&c.mul(&other.entries[b].1));
                        if !v.is_zero() {
                            out.push((*ia, v));
                        }
                        a += 1;
                        b += 1;
                        continue;
                    }
                    ia < ib
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_a {
                out.push(self.entries[a].clone());
                a += 1;
            } else {
                let (ib, vb) = &other.entries[b];
                out.push((*ib, c.mul(vb)));
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.neg())).collect(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }
}

/// Strip common content from an exact rational vector: clear denominators,
/// divide by the gcd of numerators, make the leading entry positive. Keeps
/// stored echelon columns small during long eliminations.
fn make_primitive(v: &mut SparseVec<ExactScalar>) {
    if v.entries.is_empty() {
        return;
    }
    let mut lcm = BigInt::one();
    for (_, c) in &v.entries {
        lcm = lcm.lcm(c.denom());
    }
    let mut gcd = BigInt::zero();
    for (_, c) in &v.entries {
        gcd = gcd.gcd(&(c.numer() * &lcm / c.denom()));
    }
    if v.entries[0].1.is_negative() {
        gcd = -gcd;
    }
    let scale = ExactScalar::new(lcm, gcd);
    for (_, c) in v.entries.iter_mut() {
        *c = c.mul(&scale);
    }
}

/// Sparse matrix in column-major form. No stored zeros; indices in bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<F: Scalar = ExactScalar> {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<F>>,
}

impl<F: Scalar> SparseMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.columns[i] = SparseVec::unit(i);
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, F)]) -> Self {
        let mut per_col: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(*r < rows && *c < cols, "index out of bounds");
            if v.is_zero() {
                continue;
            }
            let slot = per_col[*c].entry(*r).or_insert_with(F::zero);
            *slot = slot.add(v);
        }
        SparseMatrix {
            rows,
            cols,
            columns: per_col
                .into_iter()
                .map(|m| SparseVec {
                    entries: m.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<F>>) -> Self {
        for c in &columns {
            if let Some((i, _)) = c.entries.last() {
                assert!(*i < rows);
            }
        }
        SparseMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &SparseVec<F> {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec<F>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        self.columns[c].get(r).cloned().unwrap_or_else(F::zero)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (c, coeff) in &v.entries {
            for (r, m) in &self.columns[*c].entries {
                let slot = acc.entry(*r).or_insert_with(F::zero);
                *slot = slot.add(&m.mul(coeff));
            }
        }
        SparseVec {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> SparseMatrix<F> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|col| col.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMatrix<F>) -> SparseMatrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let one = F::one();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.add_scaled(&one, b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G) -> SparseMatrix<G> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self
                .columns
                .iter()
                .map(|c| SparseVec {
                    entries: c.entries.iter().map(|(i, v)| (*i, f(v))).collect(),
                })
                .collect(),
        }
    }
}

impl SparseMatrix<ExactScalar> {
    pub fn from_i64(rows: usize, cols: usize, data: &[&[i64]]) -> Self {
        assert_eq!(data.len(), rows);
        let mut t = Vec::new();
        for (r, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, v) in row.iter().enumerate() {
                if *v != 0 {
                    t.push((r, c, ExactScalar::from_int(*v)));
                }
            }
        }
        SparseMatrix::from_triplets(rows, cols, &t)
    }
}

/// Result of pushing a column into a [`ColumnSpace`].
pub enum Push<F: Scalar> {
    /// Column was independent of everything before it.
    Independent,
    /// Column lies in the span of earlier columns; the expression gives its
    /// coordinates over the earlier *source* columns (pivot sources only).
    Dependent(SparseVec<F>),
}

/// Incrementally echelonized column space with source tracking.
///
/// Sources are the original columns pushed in order; each retained echelon
/// column remembers its expression over sources, so `solve` can return
/// coordinates in the original column indexing.
#[derive(Clone)]
pub struct ColumnSpace<F: Scalar> {
    rows: usize,
    n_sources: usize,
    /// whether echelon columns carry expressions over sources
    track: bool,
    /// map leading row -> echelon column
    lead: BTreeMap<usize, EchelonCol<F>>,
}

#[derive(Clone)]
struct EchelonCol<F: Scalar> {
    vec: SparseVec<F>,
    expr: SparseVec<F>,
}

impl<F: Scalar> ColumnSpace<F> {
    pub fn new(rows: usize) -> Self {
        ColumnSpace {
            rows,
            n_sources: 0,
            track: true,
            lead: BTreeMap::new(),
        }
    }

    /// Rank-and-membership only: skips the source-expression bookkeeping.
    pub fn new_untracked(rows: usize) -> Self {
        ColumnSpace {
            rows,
            n_sources: 0,
            track: false,
            lead: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.lead.len()
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    /// Leading rows of the echelon columns. These coordinates parametrize the
    /// span: striking them from a complement yields canonical coset
    /// representatives modulo this space.
    pub fn leading_rows(&self) -> Vec<usize> {
        self.lead.keys().copied().collect()
    }

    /// Reduce v against the echelon columns, accumulating the expression of
    /// the removed part over sources.
    fn reduce(&self, v: &mut BTreeMap<usize, F>, expr: &mut BTreeMap<usize, F>) {
        let mut cursor = 0usize;
        while let Some((&row, _)) = v.range(cursor..).next() {
            cursor = row + 1;
            if let Some(col) = self.lead.get(&row) {
                let coeff = v[&row].mul(&col.vec.entries[0].1.inv());
                for (i, c) in &col.vec.entries {
                    let slot = v.entry(*i).or_insert_with(F::zero);
                    *slot = slot.sub(&coeff.mul(c));
                    if slot.is_zero() {
                        v.remove(i);
                    }
                }
                if self.track {
                    for (s, c) in &col.expr.entries {
                        let slot = expr.entry(*s).or_insert_with(F::zero);
                        *slot = slot.add(&coeff.mul(c));
                        if slot.is_zero() {
                            expr.remove(s);
                        }
                    }
                }
            }
        }
    }

    /// Push the next source column.
    pub fn push(&mut self, v: &SparseVec<F>) -> Push<F> {
        let id = self.n_sources;
        self.n_sources += 1;
        let mut work: BTreeMap<usize, F> = v.entries.iter().cloned().collect();
        let mut expr: BTreeMap<usize, F> = BTreeMap::new();
        self.reduce(&mut work, &mut expr);
        if work.is_empty() {
            return Push::Dependent(SparseVec {
                entries: expr.into_iter().collect(),
            });
        }
        // remainder = source_id - expr  =>  echelon col expressed over sources
        let mut vec = SparseVec {
            entries: work.into_iter().collect(),
        };
        let mut expr_vec = SparseVec::new();
        if self.track {
            let mut col_expr: BTreeMap<usize, F> =
                expr.into_iter().map(|(s, c)| (s, c.neg())).collect();
            col_expr.insert(id, F::one());
            expr_vec = SparseVec {
                entries: col_expr.into_iter().collect(),
            };
        }
        let scale = normalize_column(&mut vec);
        if self.track {
            if let Some(factor) = scale {
                expr_vec = expr_vec.scale(&factor);
            }
        }
        let lead_row = vec.entries[0].0;
        self.lead.insert(
            lead_row,
            EchelonCol {
                vec,
                expr: expr_vec,
            },
        );
        Push::Independent
    }

    /// Is v in the span of the pushed columns?
    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        let mut work: BTreeMap<usize, F> = v.entries.iter().cloned().collect();
        let mut expr = BTreeMap::new();
        self.reduce(&mut work, &mut expr);
        work.is_empty()
    }

    /// Canonical coset representative of v modulo the span: the reduction has
    /// no support on the leading rows of the echelon.
    pub fn reduce_vec(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut work: BTreeMap<usize, F> = v.entries.iter().cloned().collect();
        let mut expr = BTreeMap::new();
        self.reduce(&mut work, &mut expr);
        SparseVec {
            entries: work.into_iter().collect(),
        }
    }

    /// Solve span · x = rhs; returns x over source indices (pivot sources
    /// only, i.e. free coordinates zero). None if inconsistent.
    pub fn solve(&self, rhs: &SparseVec<F>) -> Option<SparseVec<F>> {
        let mut work: BTreeMap<usize, F> = rhs.entries.iter().cloned().collect();
        let mut expr = BTreeMap::new();
        self.reduce(&mut work, &mut expr);
        if work.is_empty() {
            Some(SparseVec {
                entries: expr.into_iter().collect(),
            })
        } else {
            None
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
}

/// Normalize a column for storage. For rationals: primitive integer vector
/// with positive leading entry (fraction-free storage). For other fields:
/// leading entry 1. Returns the multiplier to apply to expressions, if any.
fn normalize_column<F: Scalar>(v: &mut SparseVec<F>) -> Option<F> {
    // Specialization by TypeId: rationals get the primitive-vector treatment.
    if let Some(rat) = (v as &mut dyn std::any::Any).downcast_mut::<SparseVec<ExactScalar>>() {
        let before = rat.entries[0].1.clone();
        make_primitive(rat);
        let after = rat.entries[0].1.clone();
        // vec was scaled by after/before; expressions must scale the same way
        let factor = after.mul(&Scalar::inv(&before));
        let any_factor = (&factor as &dyn std::any::Any)
            .downcast_ref::<F>()
            .expect("type matches")
            .clone();
        return Some(any_factor);
    }
    let lead = v.entries[0].1.clone();
    let inv = lead.inv();
    for (_, c) in v.entries.iter_mut() {
        *c = c.mul(&inv);
    }
    Some(inv)
}

/// Rank over the scalar field.
pub fn rank<F: Scalar>(m: &SparseMatrix<F>) -> usize {
    let mut cs = ColumnSpace::new(m.rows());
    for c in m.columns() {
        cs.push(c);
    }
    cs.rank()
}

/// Exact basis of the right null space in echelon-determined canonical form:
/// one vector per free column, with coefficient 1 at the free column and the
/// unique expansion over earlier pivot columns negated.
pub fn kernel_basis<F: Scalar>(m: &SparseMatrix<F>) -> Vec<SparseVec<F>> {
    let mut cs = ColumnSpace::new(m.rows());
    let mut out = Vec::new();
    for (j, c) in m.columns().iter().enumerate() {
        if let Push::Dependent(expr) = cs.push(c) {
            let mut v = expr.neg();
            v.entries.push((j, F::one()));
            out.push(v);
        }
    }
    out
}

/// Solve m·x = b choosing the canonical solution (free coordinates zero in
/// echelon order). None when inconsistent.
pub fn solve<F: Scalar>(m: &SparseMatrix<F>, b: &SparseVec<F>) -> Option<SparseVec<F>> {
    if let Some((i, _)) = b.entries.last() {
        assert!(*i < m.rows(), "rhs length exceeds rows");
    }
    let mut cs = ColumnSpace::new(m.rows());
    for c in m.columns() {
        cs.push(c);
    }
    cs.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    #[test]
    fn rank_zero_matrix() {
        let m: SparseMatrix = SparseMatrix::zero(3, 3);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn rank_identity() {
        let m: SparseMatrix = SparseMatrix::identity(3);
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn rank_proportional_rows() {
        let m = SparseMatrix::from_i64(2, 2, &[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_identity_empty() {
        let m: SparseMatrix = SparseMatrix::identity(2);
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn kernel_symmetry() {
        let m = SparseMatrix::from_i64(1, 2, &[&[1, -1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].to_dense(2), vec![es(1), es(1)]);
    }

    #[test]
    fn kernel_proportional() {
        let m = SparseMatrix::from_i64(2, 2, &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // canonical: free column 1 carries 1, pivot expansion -2
        assert_eq!(k[0].to_dense(2), vec![es(-2), es(1)]);
        assert!(m.apply(&k[0]).is_zero());
    }

    #[test]
    fn solve_identity() {
        let m: SparseMatrix = SparseMatrix::identity(2);
        let b = SparseVec::from_entries(vec![(0, es(1)), (1, es(2))]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(x.to_dense(2), vec![es(1), es(2)]);
    }

    #[test]
    fn solve_free_coordinate_convention() {
        let m = SparseMatrix::from_i64(1, 2, &[&[1, 1]]);
        let b = SparseVec::from_entries(vec![(0, es(3))]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(x.to_dense(2), vec![es(3), es(0)]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = SparseMatrix::from_i64(2, 1, &[&[1], &[1]]);
        let b = SparseVec::from_entries(vec![(0, es(1)), (1, es(2))]);
        assert!(solve(&m, &b).is_none());
    }

    #[test]
    fn rank_nullity_random_like() {
        let m = SparseMatrix::from_i64(
            4,
            6,
            &[
                &[1, 0, 2, -1, 3, 0],
                &[0, 1, 1, 1, 0, 2],
                &[1, 1, 3, 0, 3, 2],
                &[2, -1, 3, -3, 6, -2],
            ],
        );
        let r = rank(&m);
        let k = kernel_basis(&m);
        assert_eq!(r + k.len(), m.cols());
        for v in &k {
            assert!(m.apply(&v).is_zero());
        }
    }
}
