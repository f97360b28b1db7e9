//! Finitely-graded modules presented degreewise: a basis in each degree of a
//! window plus the multiplication-by-variable maps between consecutive
//! degrees. Everything downstream (local cohomology, Tor, regularity) works
//! from this presentation alone.

use std::collections::BTreeMap;

use crate::derham::{basis_forms, check_reduced, wedge_df_matrix};
use crate::error::Result;
use crate::poly::{ExpVec, Poly, WeightVector};
use crate::scalar::{ExactScalar, Scalar};
use crate::sparse::{ColumnSpace, SparseMatrix, SparseVec};

/// A graded module given by dimensions and multiplication maps on a degree
/// window. Storage index k corresponds to true degree k + offset.
#[derive(Clone, Debug)]
pub struct GradedModuleSketch {
    pub weights: WeightVector,
    /// true degree of storage index 0
    pub offset: i64,
    /// dims[k] = dim of the piece in storage degree k, k = 0..=window
    pub dims: Vec<usize>,
    /// mult[i][k] : piece k → piece k + a_i, stored while k + a_i ≤ window
    pub mult: Vec<Vec<SparseMatrix<ExactScalar>>>,
}

impl GradedModuleSketch {
    pub fn window(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim_at(&self, true_degree: i64) -> usize {
        let k = true_degree - self.offset;
        if k < 0 {
            return 0;
        }
        self.dims.get(k as usize).copied().unwrap_or(0)
    }

    pub fn mult_map(&self, var: usize, storage_k: usize) -> Option<&SparseMatrix<ExactScalar>> {
        self.mult[var].get(storage_k)
    }

    /// x_i x_j = x_j x_i on the window; used by tests and debug assertions.
    pub fn mult_maps_commute(&self) -> bool {
        let n = self.weights.n();
        let w = self.window();
        for i in 0..n {
            for j in (i + 1)..n {
                let (ai, aj) = (self.weights.a[i] as usize, self.weights.a[j] as usize);
                for k in 0..=w {
                    if k + ai + aj > w {
                        continue;
                    }
                    let ij = self.mult[j][k + ai].matmul(&self.mult[i][k]);
                    let ji = self.mult[i][k + aj].matmul(&self.mult[j][k]);
                    if ij != ji {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Which module to sketch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SketchKind {
    /// M = Ω^n / df∧Ω^{n−1}, the top Koszul module.
    MilnorTop,
    /// A^j = ker(df∧ : Ω^j → Ω^{j+1}).
    KoszulKernel(usize),
    /// K^j = {ω ∈ Ω^j : df∧ω ∈ f·Ω^{j+1}}, graded so that a logarithmic form
    /// η = ω/f carries degree deg ω − e (offset −e).
    LogForms(usize),
    /// Θ(−log D) = {ξ = Σ c_i ∂_i : ξ(f) ∈ (f)}, graded so the Euler field
    /// has degree 1 (component i of the degree-k piece has c_i ∈ R_{k−1+a_i}).
    LogDerivations,
}

/// Degreewise sketch of the requested module with true degrees up to
/// `k_top`.
pub fn module_sketch(kind: SketchKind, f: &Poly, k_top: i64) -> Result<GradedModuleSketch> {
    check_reduced(f)?;
    Ok(match kind {
        SketchKind::MilnorTop => milnor_top(f, k_top),
        SketchKind::KoszulKernel(j) => kernel_like(f, j, k_top, false),
        SketchKind::LogForms(j) => kernel_like(f, j, k_top, true),
        SketchKind::LogDerivations => log_derivations(f, k_top),
    })
}

/// Quotient sketch M_k = Ω^n_k / im(df∧), with canonical free coordinates
/// (the non-leading rows of the image echelon).
fn milnor_top(f: &Poly, k_top: i64) -> GradedModuleSketch {
    let n = f.n();
    let e = f.e() as i64;
    let w = f.weights.clone();
    let window = k_top.max(0) as usize;

    struct QuotientPiece {
        /// ambient → canonical coset reduction
        space: ColumnSpace<ExactScalar>,
        /// ambient row index → quotient coordinate
        free: BTreeMap<usize, usize>,
        dim: usize,
        basis_items: Vec<(ExpVec, Vec<usize>)>,
    }

    let mut pieces: Vec<QuotientPiece> = Vec::new();
    for k in 0..=(window as i64) {
        let basis = basis_forms(&w, n, k);
        let s = wedge_df_matrix(f, n - 1, k - e);
        let mut space = ColumnSpace::new_untracked(basis.dim());
        for c in s.columns() {
            space.push(c);
        }
        let struck: std::collections::BTreeSet<usize> =
            space.leading_rows().into_iter().collect();
        let free: BTreeMap<usize, usize> = (0..basis.dim())
            .filter(|r| !struck.contains(r))
            .enumerate()
            .map(|(q, r)| (r, q))
            .collect();
        pieces.push(QuotientPiece {
            space,
            dim: free.len(),
            free,
            basis_items: basis.items,
        });
    }

    let mut mult: Vec<Vec<SparseMatrix<ExactScalar>>> = vec![Vec::new(); n];
    for (i, mm) in mult.iter_mut().enumerate() {
        let ai = f.weights.a[i] as usize;
        for k in 0..=window.saturating_sub(ai) {
            if k + ai > window {
                break;
            }
            let src = &pieces[k];
            let dst = &pieces[k + ai];
            let dst_basis = basis_forms(&w, n, (k + ai) as i64);
            let mut triplets = Vec::new();
            for (r_src, &q_src) in &src.free {
                let (beta, iset) = &src.basis_items[*r_src];
                let mut shifted = beta.clone();
                shifted[i] += 1;
                let ambient = dst_basis
                    .position(&shifted, iset)
                    .expect("shifted monomial in basis");
                let reduced = dst.space.reduce_vec(&SparseVec::unit(ambient));
                for (row, c) in reduced.entries {
                    triplets.push((dst.free[&row], q_src, c));
                }
            }
            mm.push(SparseMatrix::from_triplets(dst.dim, src.dim, &triplets));
        }
    }

    GradedModuleSketch {
        weights: f.weights.clone(),
        offset: 0,
        dims: pieces.iter().map(|p| p.dim).collect(),
        mult,
    }
}

/// Submodule sketch for A^j (log_forms = false) or K^j (log_forms = true,
/// reported with offset −e). Bases are echelon-canonical kernel bases inside
/// Ω^j; multiplication maps are solved against the next degree's basis.
fn kernel_like(f: &Poly, j: usize, k_top: i64, log_forms: bool) -> GradedModuleSketch {
    let n = f.n();
    let e = f.e() as i64;
    let w = f.weights.clone();
    let offset = if log_forms { -e } else { 0 };
    // storage k covers true degrees offset..=k_top
    let window = (k_top - offset).max(0) as usize;

    struct KernelPiece {
        basis: Vec<SparseVec<ExactScalar>>,
        /// tracked space of the basis vectors for coordinate solves
        space: ColumnSpace<ExactScalar>,
        ambient: Vec<(ExpVec, Vec<usize>)>,
    }

    let mut pieces: Vec<KernelPiece> = Vec::new();
    for k in 0..=(window as i64) {
        let amb_deg = k; // storage degree equals Ω-degree
        let basis_amb = basis_forms(&w, j, amb_deg);
        let s = wedge_df_matrix(f, j, amb_deg);
        let kernel: Vec<SparseVec<ExactScalar>> = if log_forms {
            // kernel of (df∧ mod f): reduce the df∧ columns modulo f·Ω^{j+1}
            let target = basis_forms(&w, j + 1, amb_deg + e);
            let upper = basis_forms(&w, j + 1, amb_deg);
            let mut fimg = ColumnSpace::new_untracked(target.dim());
            for (beta, iset) in &upper.items {
                let mut col = Vec::new();
                for (m, c) in &f.terms {
                    let mut shifted = beta.clone();
                    for (t, g) in shifted.iter_mut().zip(m) {
                        *t += g;
                    }
                    let row = target.position(&shifted, iset).expect("f·ω in basis");
                    col.push((row, c.clone()));
                }
                fimg.push(&SparseVec::from_entries(col));
            }
            let reduced_cols: Vec<SparseVec<ExactScalar>> = s
                .columns()
                .iter()
                .map(|c| fimg.reduce_vec(c))
                .collect();
            let reduced = SparseMatrix::from_columns(target.dim(), reduced_cols);
            crate::sparse::kernel_basis(&reduced)
        } else {
            crate::sparse::kernel_basis(&s)
        };
        let mut space = ColumnSpace::new(basis_amb.dim());
        for v in &kernel {
            space.push(v);
        }
        pieces.push(KernelPiece {
            basis: kernel,
            space,
            ambient: basis_amb.items,
        });
    }

    let mut mult: Vec<Vec<SparseMatrix<ExactScalar>>> = vec![Vec::new(); n];
    for (i, mm) in mult.iter_mut().enumerate() {
        let ai = f.weights.a[i] as usize;
        for k in 0..=window {
            if k + ai > window {
                break;
            }
            let src = &pieces[k];
            let dst = &pieces[k + ai];
            let dst_basis = basis_forms(&w, j, (k + ai) as i64);
            let mut triplets = Vec::new();
            for (col, v) in src.basis.iter().enumerate() {
                let mut shifted = Vec::new();
                for (idx, c) in &v.entries {
                    let (beta, iset) = &src.ambient[*idx];
                    let mut b = beta.clone();
                    b[i] += 1;
                    let pos = dst_basis.position(&b, iset).expect("shift in basis");
                    shifted.push((pos, c.clone()));
                }
                let shifted = SparseVec::from_entries(shifted);
                let expr = dst
                    .space
                    .solve(&shifted)
                    .expect("x_i·kernel stays in kernel");
                for (row, c) in expr.entries {
                    triplets.push((row, col, c));
                }
            }
            mm.push(SparseMatrix::from_triplets(
                dst.basis.len(),
                src.basis.len(),
                &triplets,
            ));
        }
    }

    GradedModuleSketch {
        weights: f.weights.clone(),
        offset,
        dims: pieces.iter().map(|p| p.basis.len()).collect(),
        mult,
    }
}

/// Θ(−log D): kernel of (c_1,…,c_n, c_0) ↦ Σ c_i ∂_i f − c_0 f, with c_i of
/// weighted degree k−1+a_i in the degree-k piece. The c_0 block rides along
/// (it is determined by the c_i) so products stay inside the kernel space.
fn log_derivations(f: &Poly, k_top: i64) -> GradedModuleSketch {
    let n = f.n();
    let w = f.weights.clone();
    let e = f.e() as i64;
    let a_max = *w.a.iter().max().unwrap() as i64;
    let offset = 1 - a_max; // lowest degree where some block is nonempty
    let window = (k_top - offset).max(0) as usize;

    struct Blocks {
        /// monomials per block: n coefficient blocks then the c_0 block
        monos: Vec<Vec<ExpVec>>,
        offsets: Vec<usize>,
        total: usize,
    }

    let block_layout = |true_k: i64| -> Blocks {
        let mut monos = Vec::new();
        for i in 0..n {
            monos.push(monomials_of(&w, true_k - 1 + w.a[i] as i64));
        }
        monos.push(monomials_of(&w, true_k - 1));
        let mut offsets = Vec::with_capacity(monos.len());
        let mut total = 0;
        for m in &monos {
            offsets.push(total);
            total += m.len();
        }
        Blocks {
            monos,
            offsets,
            total,
        }
    };

    struct DerPiece {
        basis: Vec<SparseVec<ExactScalar>>,
        space: ColumnSpace<ExactScalar>,
        blocks: Blocks,
    }

    let mut pieces: Vec<DerPiece> = Vec::new();
    for k in 0..=(window as i64) {
        let true_k = k + offset;
        let blocks = block_layout(true_k);
        let target = monomials_of(&w, true_k - 1 + e);
        let target_pos: BTreeMap<&ExpVec, usize> =
            target.iter().enumerate().map(|(p, m)| (m, p)).collect();
        let mut triplets = Vec::new();
        for i in 0..n {
            let part = f.partial(i);
            for (col_local, mono) in blocks.monos[i].iter().enumerate() {
                let col = blocks.offsets[i] + col_local;
                for (gamma, c) in &part {
                    let mut prod = mono.clone();
                    for (t, g) in prod.iter_mut().zip(gamma) {
                        *t += g;
                    }
                    triplets.push((target_pos[&prod], col, c.clone()));
                }
            }
        }
        for (col_local, mono) in blocks.monos[n].iter().enumerate() {
            let col = blocks.offsets[n] + col_local;
            for (m, c) in &f.terms {
                let mut prod = mono.clone();
                for (t, g) in prod.iter_mut().zip(m) {
                    *t += g;
                }
                triplets.push((target_pos[&prod], col, c.neg()));
            }
        }
        let mat = SparseMatrix::from_triplets(target.len(), blocks.total, &triplets);
        let basis = crate::sparse::kernel_basis(&mat);
        let mut space = ColumnSpace::new(blocks.total);
        for v in &basis {
            space.push(v);
        }
        pieces.push(DerPiece {
            basis,
            space,
            blocks,
        });
    }

    let mut mult: Vec<Vec<SparseMatrix<ExactScalar>>> = vec![Vec::new(); n];
    for (s_var, mm) in mult.iter_mut().enumerate() {
        let a_s = w.a[s_var] as usize;
        for k in 0..=window {
            if k + a_s > window {
                break;
            }
            let src = &pieces[k];
            let dst = &pieces[k + a_s];
            let mut triplets = Vec::new();
            for (col, v) in src.basis.iter().enumerate() {
                let mut shifted = Vec::new();
                for (idx, c) in &v.entries {
                    // locate the block this index sits in (offsets can repeat
                    // when a block is empty; take the last block starting at
                    // or before idx)
                    let b = src.blocks.offsets.partition_point(|&o| o <= *idx) - 1;
                    let local = idx - src.blocks.offsets[b];
                    let mut mono = src.blocks.monos[b][local].clone();
                    mono[s_var] += 1;
                    let dst_local = dst.blocks.monos[b]
                        .iter()
                        .position(|m| m == &mono)
                        .expect("shifted monomial present");
                    shifted.push((dst.blocks.offsets[b] + dst_local, c.clone()));
                }
                let shifted = SparseVec::from_entries(shifted);
                let expr = dst
                    .space
                    .solve(&shifted)
                    .expect("x_s·derivation stays logarithmic");
                for (row, c) in expr.entries {
                    triplets.push((row, col, c));
                }
            }
            mm.push(SparseMatrix::from_triplets(
                dst.basis.len(),
                src.basis.len(),
                &triplets,
            ));
        }
    }

    GradedModuleSketch {
        weights: f.weights.clone(),
        offset,
        dims: pieces.iter().map(|p| p.basis.len()).collect(),
        mult,
    }
}

fn monomials_of(w: &WeightVector, degree: i64) -> Vec<ExpVec> {
    basis_forms(w, 0, degree)
        .items
        .into_iter()
        .map(|(m, _)| m)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Poly {
        Poly::homogeneous(3, &[(1, &[1, 1, 1])]).unwrap()
    }

    #[test]
    fn milnor_smooth_quadric() {
        // f = x²+y²+z²: R/J is one-dimensional (degree 0 of R, i.e. k = n)
        let f = Poly::homogeneous(3, &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (1, &[0, 0, 2])]).unwrap();
        let m = module_sketch(SketchKind::MilnorTop, &f, 6).unwrap();
        assert_eq!(m.dim_at(3), 1);
        for k in [0i64, 1, 2, 4, 5, 6] {
            assert_eq!(m.dim_at(k), 0, "degree {k}");
        }
        assert!(m.mult_maps_commute());
    }

    #[test]
    fn milnor_xyz_dims() {
        // μ_k of xyz stabilizes at τ = 3 (three A_1 points of the projective
        // triangle)
        let m = module_sketch(SketchKind::MilnorTop, &xyz(), 9).unwrap();
        assert_eq!(m.dim_at(3), 1);
        for k in 6..=9 {
            assert_eq!(m.dim_at(k), 3, "degree {k}");
        }
        assert!(m.mult_maps_commute());
    }

    #[test]
    fn logders_xyz_free() {
        // free on x∂x, y∂y, z∂z: dim_k = 3·dim R_{k−1}
        let th = module_sketch(SketchKind::LogDerivations, &xyz(), 4).unwrap();
        for k in 0..=4i64 {
            let expect = if k >= 1 {
                3 * basis_forms(&xyz().weights, 0, k - 1).dim()
            } else {
                0
            };
            assert_eq!(th.dim_at(k), expect, "degree {k}");
        }
        assert!(th.mult_maps_commute());
    }

    #[test]
    fn koszul_kernel_is_principal() {
        // A¹ = R·df for reduced f: dims equal dim R_{k−e}
        let f = xyz();
        let a1 = module_sketch(SketchKind::KoszulKernel(1), &f, 7).unwrap();
        for k in 0..=7i64 {
            assert_eq!(
                a1.dim_at(k),
                basis_forms(&f.weights, 0, k - 3).dim(),
                "degree {k}"
            );
        }
    }

    #[test]
    fn logforms_xyz_low_degree() {
        // L¹ of the normal crossing xyz: degree 0 piece is spanned by the
        // three forms f·dx_i/x_i, matching Lemma 1.4: dim = dim A¹_3 + dim A²_3.
        let f = xyz();
        let l1 = module_sketch(SketchKind::LogForms(1), &f, 4).unwrap();
        assert_eq!(l1.offset, -3);
        assert_eq!(l1.dim_at(0), 3);
        let a1 = module_sketch(SketchKind::KoszulKernel(1), &f, 3).unwrap();
        let a2 = module_sketch(SketchKind::KoszulKernel(2), &f, 3).unwrap();
        assert_eq!(l1.dim_at(0), a1.dim_at(3) + a2.dim_at(3));
    }
}
