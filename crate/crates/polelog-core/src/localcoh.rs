//! Degreewise local cohomology H^0_m of the top Koszul module M: the split
//! M = M′ ⊕-wise into the finite-length part M′ = H^0_m(M) and M″ = M/M′,
//! the stabilized Tjurina number τ_Z, symmetry checks, and the decision
//! procedures built on them.

use serde::Serialize;

use crate::derham::mu_nu_unchecked;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::ExactScalar;
use crate::sketch::{module_sketch, SketchKind};
use crate::sparse::{kernel_basis, ColumnSpace, SparseMatrix, SparseVec};
use crate::spectral::{surjectivity_check_cor2, Cor2Report, Mode};

#[derive(Clone, Debug, Serialize)]
pub struct LocalCohomologyProfile {
    /// μ′_k = dim H^0_m(M)_k for k = 0..=bound
    pub mu_prime: Vec<usize>,
    /// μ″_k = μ_k − μ′_k
    pub mu_double: Vec<usize>,
    /// δ″_k = μ″_k − ν_{k+d}
    pub delta_double: Vec<i64>,
    /// μ_k for reference
    pub mu: Vec<usize>,
    /// stabilized value of μ_k (the global Tjurina number of Z)
    pub tau_z: usize,
    /// saturation degree bound B used by the downward recursion
    pub bound_used: usize,
}

/// Default saturation bound B = n·d.
pub fn default_bound(f: &Poly) -> usize {
    f.n() * f.e() as usize
}

/// μ′ by the downward recursion T_k = {v ∈ M_k : x_i·v ∈ T_{k+1} ∀i}, seeded
/// with T_k = 0 above B.
pub fn h0m_profile(f: &Poly, bound: usize) -> Result<LocalCohomologyProfile> {
    let n = f.n();
    let e = f.e() as usize;
    let sketch = module_sketch(SketchKind::MilnorTop, f, bound as i64 + 1)?;
    let mu: Vec<usize> = (0..=bound).map(|k| sketch.dims[k]).collect();

    // T as echelon bases of subspaces of the quotient coordinates.
    let mut t_above: Vec<SparseVec<ExactScalar>> = Vec::new(); // T_{k+1}
    let mut mu_prime = vec![0usize; bound + 1];
    let mut t_all: Vec<Vec<SparseVec<ExactScalar>>> = vec![Vec::new(); bound + 1];
    for k in (0..=bound).rev() {
        let dim_here = sketch.dims[k];
        if dim_here == 0 {
            t_above = Vec::new();
            continue;
        }
        let dim_next = sketch.dims.get(k + 1).copied().unwrap_or(0);
        // quotient by T_{k+1}: reduce multiplication images against its span
        let mut t_space = ColumnSpace::new_untracked(dim_next);
        for v in &t_above {
            t_space.push(v);
        }
        let mut triplets = Vec::new();
        for i in 0..n {
            let m = sketch.mult_map(i, k).expect("mult within window");
            for col in 0..dim_here {
                let image = t_space.reduce_vec(m.column(col));
                for (row, c) in image.entries {
                    triplets.push((i * dim_next + row, col, c));
                }
            }
        }
        let stacked = SparseMatrix::from_triplets(n * dim_next, dim_here, &triplets);
        let t_here = kernel_basis(&stacked);
        mu_prime[k] = t_here.len();
        t_all[k] = t_here.clone();
        t_above = t_here;
    }

    // sanity window: μ′ must vanish within n degrees of the bound
    for k in (bound.saturating_sub(n) + 1)..=bound {
        if mu_prime[k] != 0 {
            return Err(Error::BoundTooSmall {
                degree: k,
                margin: bound - k,
                bound,
            });
        }
    }
    // μ must have stabilized over the last n degrees
    let tail: Vec<usize> = mu[bound - n + 1..=bound].to_vec();
    if !tail.iter().all(|&v| v == tail[0]) {
        return Err(Error::MuNotStabilized { span: n, tail });
    }
    let tau_z = tail[0];

    let mu_double: Vec<usize> = mu
        .iter()
        .zip(&mu_prime)
        .map(|(m, p)| m - p)
        .collect();
    let delta_double: Vec<i64> = (0..=bound)
        .map(|k| {
            let (_, nu) = mu_nu_unchecked(f, (k + e) as i64);
            mu_double[k] as i64 - nu as i64
        })
        .collect();

    Ok(LocalCohomologyProfile {
        mu_prime,
        mu_double,
        delta_double,
        mu,
        tau_z,
        bound_used: bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// degrees k with μ′_k ≠ μ′_{nd−k}
    pub mu_prime_violations: Vec<usize>,
    /// degrees k with δ″_k ≠ δ″_{2d−k} (n = 3 only; empty otherwise)
    pub delta_double_violations: Vec<usize>,
    pub center_mu_prime: f64,
    pub center_delta: f64,
}

/// Checks μ′_k = μ′_{nd−k} and, for n = 3, δ″_k = δ″_{2d−k}.
pub fn symmetry_checks(f: &Poly, profile: &LocalCohomologyProfile) -> SymmetryReport {
    let n = f.n();
    let d = f.e() as usize;
    let get = |v: &[usize], k: i64| -> usize {
        if k < 0 {
            0
        } else {
            v.get(k as usize).copied().unwrap_or(0)
        }
    };
    let mut mu_prime_violations = Vec::new();
    for k in 0..=(n * d) {
        let mirror = (n * d) as i64 - k as i64;
        if get(&profile.mu_prime, k as i64) != get(&profile.mu_prime, mirror) {
            mu_prime_violations.push(k);
        }
    }
    let mut delta_double_violations = Vec::new();
    if n == 3 {
        let getd = |k: i64| -> i64 {
            if k < 0 {
                0
            } else {
                profile.delta_double.get(k as usize).copied().unwrap_or(0)
            }
        };
        for k in 0..=(2 * d) {
            let mirror = 2 * d as i64 - k as i64;
            if getd(k as i64) != getd(mirror) {
                delta_double_violations.push(k);
            }
        }
    }
    SymmetryReport {
        mu_prime_violations,
        delta_double_violations,
        center_mu_prime: n as f64 * d as f64 / 2.0,
        center_delta: d as f64,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Cor3Verdict {
    /// γ_d = C(d−1, n−1) > μ_Z: the comparison map is injective in every
    /// degree but not surjective in the top two.
    Triggered { gamma_d: u64, mu_z: usize },
    /// Z smooth (μ_Z = 0): nothing to test.
    NotApplicable,
    Inconclusive { gamma_d: u64, mu_z: usize },
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Corollary-3 test: compares γ_d = C(d−1, n−1) with μ_Z (= τ_Z under the
/// weighted-homogeneity flag).
pub fn cor3_check(f: &Poly, bound: Option<usize>) -> Result<Cor3Verdict> {
    let n = f.n() as u64;
    let d = f.e() as u64;
    let profile = h0m_profile(f, bound.unwrap_or_else(|| default_bound(f)))?;
    let gamma_d = binomial(d - 1, n - 1);
    Ok(if profile.tau_z == 0 {
        Cor3Verdict::NotApplicable
    } else if gamma_d > profile.tau_z as u64 {
        Cor3Verdict::Triggered {
            gamma_d,
            mu_z: profile.tau_z,
        }
    } else {
        Cor3Verdict::Inconclusive {
            gamma_d,
            mu_z: profile.tau_z,
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop1Report {
    /// condition (d): M′_d = 0
    pub m_prime_d_vanishes: bool,
    pub mu_prime_d: usize,
    /// condition (c) via the page-2 indicator
    pub cor2: Cor2Report,
    /// the joint verdict of the equivalent conditions (a)–(e)
    pub lct_holds: bool,
    /// M′ = 0 everywhere: the free-divisor indicator
    pub free_divisor: bool,
    pub tau_z: usize,
}

/// Evaluates conditions (c) and (d) independently for n = 3 and checks they
/// agree; a mismatch is a bug, never silently resolved.
pub fn prop1_report(f: &Poly, mode: Mode, wh_asserted: bool) -> Result<Prop1Report> {
    assert_eq!(f.n(), 3, "Proposition 1 applies to n = 3");
    let d = f.e() as usize;
    let profile = h0m_profile(f, default_bound(f))?;
    let mu_prime_d = profile.mu_prime[d];
    let cond_d = mu_prime_d == 0;
    let cor2 = surjectivity_check_cor2(f, mode, wh_asserted)?;
    if cor2.surjective != cond_d {
        return Err(Error::InternalInconsistency(format!(
            "Proposition 1 conditions disagree: (c) surjective = {}, (d) M'_d = 0 gives {} (μ'_{d} = {mu_prime_d})",
            cor2.surjective, cond_d
        )));
    }
    let free_divisor = profile.mu_prime.iter().all(|&v| v == 0);
    Ok(Prop1Report {
        m_prime_d_vanishes: cond_d,
        mu_prime_d,
        lct_holds: cond_d,
        cor2,
        free_divisor,
        tau_z: profile.tau_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat(n: usize, d: u32) -> Poly {
        let terms: Vec<(i64, Vec<u32>)> = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = d;
                (1i64, e)
            })
            .collect();
        let borrowed: Vec<(i64, &[u32])> = terms.iter().map(|(c, e)| (*c, e.as_slice())).collect();
        Poly::homogeneous(n, &borrowed).unwrap()
    }

    fn xyz() -> Poly {
        Poly::homogeneous(3, &[(1, &[1, 1, 1])]).unwrap()
    }

    #[test]
    fn smooth_cubic_all_torsion() {
        // finite-length M: H^0_m(M) = M, so μ′ = μ = γ and τ_Z = 0
        let f = fermat(3, 3);
        let p = h0m_profile(&f, default_bound(&f)).unwrap();
        assert_eq!(p.tau_z, 0);
        assert_eq!(p.mu_prime, p.mu);
        assert!(p.mu_double.iter().all(|&v| v == 0));
        let sym = symmetry_checks(&f, &p);
        assert!(sym.mu_prime_violations.is_empty());
    }

    #[test]
    fn xyz_saturated() {
        // (xy, yz, zx) is the saturated ideal of the three coordinate points:
        // μ′ ≡ 0 and τ_Z = 3
        let f = xyz();
        let p = h0m_profile(&f, default_bound(&f)).unwrap();
        assert!(p.mu_prime.iter().all(|&v| v == 0));
        assert_eq!(p.tau_z, 3);
    }

    #[test]
    fn cor3_family_and_edge_cases() {
        // one ordinary double point, d = 5, n = 3:
        // f = x²(x³+z³) + y²(y³+z³); C(4,2) = 6 > 1 = μ_Z
        let f = Poly::homogeneous(
            3,
            &[
                (1, &[5, 0, 0]),
                (1, &[2, 0, 3]),
                (1, &[0, 5, 0]),
                (1, &[0, 2, 3]),
            ],
        )
        .unwrap();
        match cor3_check(&f, None).unwrap() {
            Cor3Verdict::Triggered { gamma_d, mu_z } => {
                assert_eq!(gamma_d, 6);
                assert_eq!(mu_z, 1);
            }
            other => panic!("expected Triggered, got {other:?}"),
        }
        assert_eq!(cor3_check(&fermat(3, 3), None).unwrap(), Cor3Verdict::NotApplicable);
    }

    #[test]
    fn prop1_xyz_and_smooth_cones() {
        let rep = prop1_report(&xyz(), Mode::Exact, true).unwrap();
        assert!(rep.lct_holds);
        assert!(rep.free_divisor);

        // smooth cubic cone: M′_3 = γ_3 = 1 ≠ 0 → LCT fails
        let rep = prop1_report(&fermat(3, 3), Mode::Exact, true).unwrap();
        assert!(!rep.lct_holds);
        assert_eq!(rep.mu_prime_d, 1);

        // smooth quintic cone: M′_5 = γ_5 = 6 ≠ 0 → LCT fails
        let rep = prop1_report(&fermat(3, 5), Mode::Exact, true).unwrap();
        assert!(!rep.lct_holds);
        assert_eq!(rep.mu_prime_d, 6);
    }
}
