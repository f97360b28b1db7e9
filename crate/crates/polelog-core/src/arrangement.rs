//! Central hyperplane arrangements: intersection lattice, multiplicities,
//! dense edges, the δ_Z edge invariants, and the residue-based comparison
//! certificates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{default_names, Poly};
use crate::scalar::{ExactScalar, Scalar};
use crate::sparse::{kernel_basis, ColumnSpace, SparseMatrix, SparseVec};

/// A reduced central arrangement given by the covectors of its hyperplanes,
/// optionally with one residue per hyperplane.
#[derive(Clone, Debug)]
pub struct Arrangement {
    forms: Vec<Vec<ExactScalar>>,
    residues: Option<Vec<ExactScalar>>,
    n: usize,
}

/// JSON schema: {"forms": [[..], ..], "residues": ["p/q", ..]}; rationals as
/// strings "p/q" or plain integers.
#[derive(Serialize, Deserialize)]
pub struct ArrangementFile {
    pub forms: Vec<Vec<ExactScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residues: Option<Vec<ExactScalar>>,
}

impl Arrangement {
    pub fn new(forms: Vec<Vec<ExactScalar>>, residues: Option<Vec<ExactScalar>>) -> Result<Self> {
        assert!(!forms.is_empty(), "empty arrangement");
        let n = forms[0].len();
        for f in &forms {
            assert_eq!(f.len(), n, "covector arity mismatch");
            assert!(f.iter().any(|c| !c.is_zero()), "zero covector");
        }
        if let Some(res) = &residues {
            assert_eq!(res.len(), forms.len(), "one residue per hyperplane");
        }
        // pairwise non-proportional
        for i in 0..forms.len() {
            for j in (i + 1)..forms.len() {
                if proportional(&forms[i], &forms[j]) {
                    return Err(Error::NotReducedArrangement(i, j));
                }
            }
        }
        Ok(Arrangement { forms, residues, n })
    }

    pub fn from_file(file: ArrangementFile) -> Result<Self> {
        Arrangement::new(file.forms, file.residues)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[Vec<ExactScalar>] {
        &self.forms
    }

    pub fn residues(&self) -> Option<&[ExactScalar]> {
        self.residues.as_deref()
    }

    /// rank of the covector span
    pub fn rank(&self) -> usize {
        let mut cs = ColumnSpace::new_untracked(self.n);
        for f in &self.forms {
            cs.push(&SparseVec::from_dense(f));
        }
        cs.rank()
    }

    pub fn essential(&self) -> bool {
        self.rank() == self.n
    }

    /// Defining polynomial Π f_k.
    pub fn product_poly(&self) -> Result<Poly> {
        let n = self.n;
        let mut terms: BTreeMap<Vec<u32>, ExactScalar> = BTreeMap::new();
        terms.insert(vec![0; n], ExactScalar::one());
        for form in &self.forms {
            let mut next: BTreeMap<Vec<u32>, ExactScalar> = BTreeMap::new();
            for (m, c) in &terms {
                for (i, coef) in form.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut e = m.clone();
                    e[i] += 1;
                    let slot = next.entry(e).or_insert_with(ExactScalar::zero);
                    *slot = slot.add(&c.mul(coef));
                }
            }
            terms = next;
        }
        Poly::new(
            vec![1; n],
            default_names(n),
            terms.into_iter().map(|(m, c)| (c, m)).collect(),
        )
    }
}

fn proportional(a: &[ExactScalar], b: &[ExactScalar]) -> bool {
    let mut ratio: Option<ExactScalar> = None;
    for (x, y) in a.iter().zip(b) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => {}
            (true, false) | (false, true) => return false,
            (false, false) => {
                let r = x.mul(&Scalar::inv(y));
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) => {
                        if prev != &r {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// An edge Z: an intersection of hyperplanes, carried by the saturated set of
/// hyperplanes containing it.
#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    /// indices of all hyperplanes containing Z (saturated, sorted)
    pub hyperplanes: Vec<usize>,
    pub codim: usize,
    /// multiplicity m_Z = number of hyperplanes containing Z
    pub m: usize,
    /// basis of the subspace Z itself
    pub subspace: Vec<Vec<ExactScalar>>,
    pub dense: bool,
    /// α_Z = Σ α_k over containing hyperplanes, when residues are present
    pub alpha: Option<ExactScalar>,
    /// δ_Z and the per-j profile, filled for dense edges (0 by convention in
    /// codimension 1)
    pub delta: Option<i64>,
    pub delta_profile: Option<Vec<(usize, i64)>>,
}

fn span_of(arr: &Arrangement, idxs: &[usize]) -> ColumnSpace<ExactScalar> {
    let mut cs = ColumnSpace::new_untracked(arr.n);
    for &i in idxs {
        cs.push(&SparseVec::from_dense(&arr.forms[i]));
    }
    cs
}

/// Saturate: all hyperplanes whose covector lies in the span of the set.
fn saturate(arr: &Arrangement, idxs: &[usize]) -> Vec<usize> {
    let cs = span_of(arr, idxs);
    (0..arr.len())
        .filter(|&k| cs.contains(&SparseVec::from_dense(&arr.forms[k])))
        .collect()
}

/// All distinct intersections of subsets of hyperplanes, with codimension and
/// multiplicity. Deduplicated by the saturated hyperplane set, which
/// determines the subspace over the rationals.
pub fn build_lattice(arr: &Arrangement) -> Vec<Edge> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Vec<usize>> = Vec::new();
    for k in 0..arr.len() {
        let sat = saturate(arr, &[k]);
        if seen.insert(sat.clone()) {
            queue.push(sat);
        }
    }
    let mut idx = 0;
    while idx < queue.len() {
        let current = queue[idx].clone();
        idx += 1;
        for k in 0..arr.len() {
            if current.contains(&k) {
                continue;
            }
            let mut with = current.clone();
            with.push(k);
            let sat = saturate(arr, &with);
            if seen.insert(sat.clone()) {
                queue.push(sat);
            }
        }
    }
    let mut edges: Vec<Edge> = queue
        .into_iter()
        .map(|hyperplanes| {
            let cs = span_of(arr, &hyperplanes);
            let codim = cs.rank();
            // subspace basis: kernel of the covector matrix (rows = covectors)
            let triplets: Vec<(usize, usize, ExactScalar)> = hyperplanes
                .iter()
                .enumerate()
                .flat_map(|(r, &k)| {
                    arr.forms[k]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(move |(c_idx, c)| (r, c_idx, c.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
            let mat = SparseMatrix::from_triplets(hyperplanes.len(), arr.n, &triplets);
            let subspace = kernel_basis(&mat)
                .into_iter()
                .map(|v| v.to_dense(arr.n))
                .collect();
            let alpha = arr.residues.as_ref().map(|res| {
                hyperplanes
                    .iter()
                    .fold(ExactScalar::zero(), |acc, &k| acc.add(&res[k]))
            });
            let dense = is_dense(arr, &hyperplanes, codim);
            Edge {
                m: hyperplanes.len(),
                hyperplanes,
                codim,
                subspace,
                dense,
                alpha,
                delta: None,
                delta_profile: None,
            }
        })
        .collect();
    edges.sort_by(|a, b| (a.codim, &a.hyperplanes).cmp(&(b.codim, &b.hyperplanes)));
    edges
}

/// Edges whose essentialized subarrangement is indecomposable.
pub fn dense_edges(arr: &Arrangement) -> Vec<Edge> {
    build_lattice(arr)
        .into_iter()
        .filter(|e| e.dense)
        .collect()
}

/// Matroid connectivity of the covectors of A_Z via the fundamental-circuit
/// graph over one basis: the matroid is decomposable exactly when the graph
/// is disconnected (a coloop is its own component).
fn is_dense(arr: &Arrangement, hyperplanes: &[usize], codim: usize) -> bool {
    let m = hyperplanes.len();
    if m == 1 {
        return true;
    }
    let mut cs = ColumnSpace::new(arr.n);
    let mut comp: Vec<usize> = (0..m).collect(); // union-find
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let r = find(comp, comp[i]);
            comp[i] = r;
        }
        comp[i]
    }
    let mut basis_members: Vec<usize> = Vec::new();
    for (pos, &k) in hyperplanes.iter().enumerate() {
        match cs.push(&SparseVec::from_dense(&arr.forms[k])) {
            crate::sparse::Push::Independent => basis_members.push(pos),
            crate::sparse::Push::Dependent(expr) => {
                for (src, _) in &expr.entries {
                    // src indexes pushes, all of which are hyperplane pushes
                    let a = find(&mut comp, pos);
                    let b = find(&mut comp, *src);
                    if a != b {
                        comp[a] = b;
                    }
                }
            }
        }
    }
    let _ = codim;
    let root = find(&mut comp, 0);
    (0..m).all(|i| find(&mut comp, i) == root)
}

/// Essentialize A_Z: express the covectors of the hyperplanes through Z in
/// coordinates on the quotient by Z, i.e. over a row basis of their span.
fn essentialized_forms(arr: &Arrangement, hyperplanes: &[usize]) -> Vec<Vec<ExactScalar>> {
    let mut cs = ColumnSpace::new(arr.n);
    let mut pivot_rows: Vec<usize> = Vec::new();
    for &k in hyperplanes {
        if matches!(
            cs.push(&SparseVec::from_dense(&arr.forms[k])),
            crate::sparse::Push::Independent
        ) {
            pivot_rows.push(k);
        }
    }
    // coordinates of each covector over the independent ones
    let mut span = ColumnSpace::new(arr.n);
    for &k in &pivot_rows {
        span.push(&SparseVec::from_dense(&arr.forms[k]));
    }
    hyperplanes
        .iter()
        .map(|&k| {
            let expr = span
                .solve(&SparseVec::from_dense(&arr.forms[k]))
                .expect("covector lies in span");
            expr.to_dense(pivot_rows.len())
        })
        .collect()
}

/// δ_Z^{(j)} = m_Z − min{k : (A^j_{f_Z})_k ≠ 0} on the essentialized
/// subarrangement, δ_Z = max over j ∈ [1, codim]; δ_Z = 0 in codimension 1.
pub fn delta_profile(arr: &Arrangement, edge: &Edge) -> Result<(i64, Vec<(usize, i64)>)> {
    if edge.codim == 1 {
        return Ok((0, vec![(1, 0)]));
    }
    let forms = essentialized_forms(arr, &edge.hyperplanes);
    let sub = Arrangement::new(forms, None)?;
    let f = sub.product_poly()?;
    let m = edge.m as i64;
    let c = edge.codim;
    let mut profile = Vec::new();
    let mut delta = i64::MIN;
    for j in 1..=c {
        let mut min_k = None;
        for k in (j as i64)..=(m + j as i64) {
            let s = crate::derham::wedge_df_matrix(&f, j, k);
            if s.cols() - crate::sparse::rank(&s) > 0 {
                min_k = Some(k);
                break;
            }
        }
        let min_k = min_k.expect("A^j is nonzero by degree m + j - 1");
        let dj = m - min_k;
        profile.push((j, dj));
        delta = delta.max(dj);
    }
    Ok((delta, profile))
}

/// One hypothesis failure: the offending edge and its α_Z.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeWitness {
    pub hyperplanes: Vec<usize>,
    pub alpha: ExactScalar,
    pub threshold: String,
}

#[derive(Clone, Debug, Serialize)]
pub enum CertificateVerdict {
    Certified,
    HypothesisFails { witnesses: Vec<EdgeWitness> },
}

impl CertificateVerdict {
    pub fn certified(&self) -> bool {
        matches!(self, CertificateVerdict::Certified)
    }
}

/// The three residue certificates of the arrangement comparison theorems.
#[derive(Clone, Debug, Serialize)]
pub struct LctReport {
    /// (b): α_k ∉ Z_{≥1} for all k and α_Z ∉ Z_{≥2} for all dense edges ⟹
    /// the comparison morphism is a D-quasi-isomorphism.
    pub full_direct_image: CertificateVerdict,
    /// (c): α_Z ∉ Z_{≤δ_Z} for all dense edges ⟹ the zero-extension
    /// quasi-isomorphism (j_U)_! L ≅ the twisted logarithmic complex.
    pub zero_extension: CertificateVerdict,
    /// (d): for the uniform residue α, membership of α in
    /// C ∖ (Z_{≥1} ∪ ⋃_Z m_Z^{−1} Z_{≥2}) ⟹ Ann(f^{α−1}) is generated by
    /// the degree-≤1 operators Θ̃_{f,α−1}.
    pub annihilator: Option<CertificateVerdict>,
    pub uniform_alpha: Option<ExactScalar>,
    /// per dense edge: (hyperplanes, m_Z, α_Z, δ_Z, δ_Z^{(j)} profile)
    pub dense_edge_data: Vec<Edge>,
    pub essential: bool,
}

fn in_int_ge(alpha: &ExactScalar, bound: i64) -> bool {
    alpha.is_integer() && alpha >= &ExactScalar::from_int(bound)
}

fn in_int_le(alpha: &ExactScalar, bound: i64) -> bool {
    alpha.is_integer() && alpha <= &ExactScalar::from_int(bound)
}

/// Runs the three certificates. Residues are required; `uniform_alpha`
/// overrides the per-hyperplane residues for certificate (d) (defaults to the
/// common residue when all are equal).
pub fn lct_certificate(arr: &Arrangement, uniform_alpha: Option<ExactScalar>) -> Result<LctReport> {
    let residues = arr.residues().ok_or(Error::MissingResidues)?.to_vec();
    let mut edges = build_lattice(arr);
    for e in edges.iter_mut() {
        if e.dense {
            let (d, prof) = delta_profile(arr, e)?;
            e.delta = Some(d);
            e.delta_profile = Some(prof);
        }
    }

    // (b)
    let mut witnesses_b = Vec::new();
    for (k, alpha) in residues.iter().enumerate() {
        if in_int_ge(alpha, 1) {
            witnesses_b.push(EdgeWitness {
                hyperplanes: vec![k],
                alpha: alpha.clone(),
                threshold: "alpha_k in Z_{>=1}".into(),
            });
        }
    }
    for e in edges.iter().filter(|e| e.dense) {
        let alpha = e.alpha.clone().unwrap();
        if in_int_ge(&alpha, 2) {
            witnesses_b.push(EdgeWitness {
                hyperplanes: e.hyperplanes.clone(),
                alpha,
                threshold: "alpha_Z in Z_{>=2}".into(),
            });
        }
    }
    let full_direct_image = if witnesses_b.is_empty() {
        CertificateVerdict::Certified
    } else {
        CertificateVerdict::HypothesisFails {
            witnesses: witnesses_b,
        }
    };

    // (c)
    let mut witnesses_c = Vec::new();
    for e in edges.iter().filter(|e| e.dense) {
        let alpha = e.alpha.clone().unwrap();
        let delta = e.delta.unwrap_or(0);
        if in_int_le(&alpha, delta) {
            witnesses_c.push(EdgeWitness {
                hyperplanes: e.hyperplanes.clone(),
                alpha,
                threshold: format!("alpha_Z in Z_{{<={delta}}}"),
            });
        }
    }
    let zero_extension = if witnesses_c.is_empty() {
        CertificateVerdict::Certified
    } else {
        CertificateVerdict::HypothesisFails {
            witnesses: witnesses_c,
        }
    };

    // (d): uniform residue
    let alpha_d = uniform_alpha.or_else(|| {
        let first = &residues[0];
        residues.iter().all(|a| a == first).then(|| first.clone())
    });
    let annihilator = alpha_d.as_ref().map(|alpha| {
        let mut witnesses = Vec::new();
        if in_int_ge(alpha, 1) {
            witnesses.push(EdgeWitness {
                hyperplanes: Vec::new(),
                alpha: alpha.clone(),
                threshold: "alpha in Z_{>=1}".into(),
            });
        }
        for e in edges.iter().filter(|e| e.dense) {
            let scaled = alpha.mul(&ExactScalar::from_int(e.m as i64));
            if in_int_ge(&scaled, 2) {
                witnesses.push(EdgeWitness {
                    hyperplanes: e.hyperplanes.clone(),
                    alpha: scaled,
                    threshold: "m_Z * alpha in Z_{>=2}".into(),
                });
            }
        }
        if witnesses.is_empty() {
            CertificateVerdict::Certified
        } else {
            CertificateVerdict::HypothesisFails { witnesses }
        }
    });

    Ok(LctReport {
        full_direct_image,
        zero_extension,
        annihilator,
        uniform_alpha: alpha_d,
        dense_edge_data: edges.into_iter().filter(|e| e.dense).collect(),
        essential: arr.essential(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(v: i64) -> ExactScalar {
        ExactScalar::from_int(v)
    }

    fn ratio(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    fn boolean3() -> Arrangement {
        Arrangement::new(
            vec![
                vec![es(1), es(0), es(0)],
                vec![es(0), es(1), es(0)],
                vec![es(0), es(0), es(1)],
            ],
            None,
        )
        .unwrap()
    }

    fn three_lines(residues: Option<Vec<ExactScalar>>) -> Arrangement {
        Arrangement::new(
            vec![
                vec![es(1), es(0)],
                vec![es(0), es(1)],
                vec![es(1), es(1)],
            ],
            residues,
        )
        .unwrap()
    }

    #[test]
    fn boolean_lattice() {
        let edges = build_lattice(&boolean3());
        // 3 hyperplanes, 3 lines with m = 2, origin with m = 3
        assert_eq!(edges.len(), 7);
        let by_codim = |c: usize| edges.iter().filter(|e| e.codim == c).count();
        assert_eq!(by_codim(1), 3);
        assert_eq!(by_codim(2), 3);
        assert_eq!(by_codim(3), 1);
        for e in &edges {
            assert_eq!(e.subspace.len(), 3 - e.codim);
            match e.codim {
                1 => assert_eq!(e.m, 1),
                2 => assert_eq!(e.m, 2),
                3 => assert_eq!(e.m, 3),
                _ => unreachable!(),
            }
        }
        // only the hyperplanes are dense
        let dense = dense_edges(&boolean3());
        assert_eq!(dense.len(), 3);
        assert!(dense.iter().all(|e| e.codim == 1));
    }

    #[test]
    fn three_concurrent_lines() {
        let arr = three_lines(None);
        let edges = build_lattice(&arr);
        assert_eq!(edges.len(), 4);
        let origin = edges.iter().find(|e| e.codim == 2).unwrap();
        assert_eq!(origin.m, 3);
        assert!(origin.dense, "3 concurrent lines are indecomposable");
        let (delta, profile) = delta_profile(&arr, origin).unwrap();
        assert_eq!(delta, 1, "δ_origin = d − 2");
        assert!(profile.contains(&(1, 0)));
        assert!(profile.contains(&(2, 1)));
    }

    #[test]
    fn braid_non_essential() {
        let arr = Arrangement::new(
            vec![
                vec![es(1), es(-1), es(0)],
                vec![es(1), es(0), es(-1)],
                vec![es(0), es(1), es(-1)],
            ],
            None,
        )
        .unwrap();
        assert!(!arr.essential());
        let edges = build_lattice(&arr);
        let common = edges.iter().find(|e| e.m == 3).unwrap();
        assert_eq!(common.codim, 2, "common line of the braid");
    }

    #[test]
    fn non_reduced_rejected() {
        let err = Arrangement::new(
            vec![vec![es(1), es(0)], vec![es(2), es(0)]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotReducedArrangement(0, 1)));
    }

    #[test]
    fn generic_four_planes_origin_dense() {
        // 4 covectors in general position in rank 3 form a connected matroid
        // (U_{3,4}), so the origin is a dense edge.
        let arr = Arrangement::new(
            vec![
                vec![es(1), es(0), es(0)],
                vec![es(0), es(1), es(0)],
                vec![es(0), es(0), es(1)],
                vec![es(1), es(1), es(1)],
            ],
            None,
        )
        .unwrap();
        let dense = dense_edges(&arr);
        assert_eq!(dense.iter().filter(|e| e.codim == 3).count(), 1);
        // codim-2 edges of multiplicity 2 stay decomposable
        assert!(dense.iter().all(|e| e.codim != 2));
    }

    #[test]
    fn example_certificates() {
        // x, y, x+y with α = (1/3,1/3,1/3): α_origin = 1 ∉ Z_{≥2} → (b) holds
        let arr = three_lines(Some(vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]));
        let rep = lct_certificate(&arr, None).unwrap();
        assert!(rep.full_direct_image.certified());
        // (d): avoidance set is Z_{≥1} ∪ (1/3)Z_{≥2}; 1/3 is outside it
        assert!(rep.annihilator.as_ref().unwrap().certified());

        // α = (2/3,2/3,2/3): α_origin = 2 ∈ Z_{≥2} → (b) fails at the origin
        let arr = three_lines(Some(vec![ratio(2, 3), ratio(2, 3), ratio(2, 3)]));
        let rep = lct_certificate(&arr, None).unwrap();
        match &rep.full_direct_image {
            CertificateVerdict::HypothesisFails { witnesses } => {
                assert_eq!(witnesses.len(), 1);
                assert_eq!(witnesses[0].hyperplanes, vec![0, 1, 2]);
                assert_eq!(witnesses[0].alpha, es(2));
            }
            _ => panic!("expected failure at the origin"),
        }
    }

    #[test]
    fn certificate_monotone_under_positive_integer_shifts() {
        // adding positive integers to residues can break but never create (b)
        let base = vec![ratio(1, 3), ratio(1, 5), ratio(-2, 7)];
        let arr = three_lines(Some(base.clone()));
        let before = lct_certificate(&arr, None).unwrap();
        for k in 0..3 {
            for shift in 1..=3i64 {
                let mut res = base.clone();
                res[k] = res[k].add(&es(shift));
                let arr = three_lines(Some(res));
                let after = lct_certificate(&arr, None).unwrap();
                if !before.full_direct_image.certified() {
                    assert!(
                        !after.full_direct_image.certified(),
                        "positive shift repaired (b): k={k} shift={shift}"
                    );
                }
            }
        }
    }
}
