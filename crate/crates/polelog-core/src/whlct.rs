//! Weighted-homogeneous comparison-theorem utilities: the residue acyclicity
//! test, the spectrum product formula with the isolated-singularity verdict,
//! and graded (twisted) logarithmic de Rham dimensions through the graded
//! Brieskorn pieces.

use num::Integer;
use serde::Serialize;

use crate::derham::{ext_d_matrix, koszul_kernel};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{ExactScalar, Scalar};
use crate::sparse::{rank, SparseMatrix, SparseVec};

/// Residue data of one weighted-homogeneous divisor germ: factor degrees d_k
/// (weighted, Σ d_k = 1) with residues α_k.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueData {
    pub components: Vec<(ExactScalar, ExactScalar)>,
    /// α̃ = Σ d_k α_k
    pub alpha_tilde: ExactScalar,
    /// least positive integer clearing the weight denominators
    pub e: u64,
}

impl ResidueData {
    /// From factor degrees and residues; e is inferred from the degree
    /// denominators.
    pub fn new(components: Vec<(ExactScalar, ExactScalar)>) -> Result<Self> {
        let mut total = ExactScalar::zero();
        let mut e = 1u64;
        for (d, _) in &components {
            if !d.is_positive() {
                return Err(Error::BadWeight(d.to_string()));
            }
            total = total.add(d);
            let den = u64::try_from(d.denom().clone()).map_err(|_| Error::BadWeight(d.to_string()))?;
            e = e.lcm(&den);
        }
        if total != ExactScalar::one() {
            return Err(Error::BadWeight(format!(
                "factor degrees must sum to 1, got {total}"
            )));
        }
        let alpha_tilde = components
            .iter()
            .fold(ExactScalar::zero(), |acc, (d, a)| acc.add(&d.mul(a)));
        Ok(ResidueData {
            components,
            alpha_tilde,
            e,
        })
    }

    /// Hyperplane arrangement of degree d: every factor has degree 1/d.
    pub fn arrangement(residues: &[ExactScalar]) -> Result<Self> {
        let d = residues.len() as i64;
        ResidueData::new(
            residues
                .iter()
                .map(|a| (ExactScalar::ratio(1, d), a.clone()))
                .collect(),
        )
    }

    /// Explicit weights w_i determine e; factor degrees are still required.
    pub fn with_weights(
        weights: &[ExactScalar],
        components: Vec<(ExactScalar, ExactScalar)>,
    ) -> Result<Self> {
        let mut data = ResidueData::new(components)?;
        let mut e = 1u64;
        for w in weights {
            if !w.is_positive() {
                return Err(Error::BadWeight(w.to_string()));
            }
            let den = u64::try_from(w.denom().clone()).map_err(|_| Error::BadWeight(w.to_string()))?;
            e = e.lcm(&den);
        }
        data.e = e;
        Ok(data)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Thm1Verdict {
    /// e·α̃ ∉ Z: both stalk complexes are acyclic, so the comparison is a
    /// quasi-isomorphism at the point.
    AcyclicBothStalks,
    /// e·α̃ ∈ Z: the test is silent.
    NoConclusion,
}

/// The residue acyclicity test: acyclic iff e·α̃ ∉ Z.
pub fn thm1_acyclicity(res: &ResidueData) -> Thm1Verdict {
    let scaled = res
        .alpha_tilde
        .mul(&ExactScalar::from_int(res.e as i64));
    if scaled.is_integer() {
        Thm1Verdict::NoConclusion
    } else {
        Thm1Verdict::AcyclicBothStalks
    }
}

/// Spectrum of a weighted-homogeneous isolated singularity: a multiset of
/// rational exponents, stored as coefficients over m/e.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub e: u64,
    /// multiplicity of exponent m/e at index m
    pub coeffs: Vec<u64>,
}

impl Spectrum {
    pub fn exponents(&self) -> Vec<(ExactScalar, u64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(m, &c)| (ExactScalar::ratio(m as i64, self.e as i64), c))
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    /// Sp(t) = Sp(1/t)·t^n: coefficients symmetric about n·e/2.
    pub fn is_symmetric(&self, n: usize) -> bool {
        let top = n as u64 * self.e;
        if self.coeffs.len() as u64 > top + 1 {
            return false;
        }
        let get = |m: i64| -> u64 {
            if m < 0 {
                0
            } else {
                self.coeffs.get(m as usize).copied().unwrap_or(0)
            }
        };
        (0..=top as i64).all(|m| get(m) == get(top as i64 - m))
    }

    pub fn has_integral_exponent(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .any(|(m, &c)| c > 0 && m as u64 % self.e == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumLct {
    /// n ≥ 3: holds iff no integral spectral number.
    Holds,
    Fails { integral_exponents: Vec<i64> },
    /// n = 2: the comparison is always a quasi-isomorphism.
    AlwaysHoldsPlaneCurve,
    /// n ≤ 1: out of range.
    NotApplicable,
}

/// Expands Π (t − t^{w_i})/(t^{w_i} − 1) exactly and derives the LCT verdict
/// for an isolated weighted-homogeneous singularity.
pub fn spectrum_wh(weights: &[ExactScalar]) -> Result<(Spectrum, SpectrumLct)> {
    let n = weights.len();
    let mut e = 1u64;
    for w in weights {
        if !w.is_positive() || w > &ExactScalar::one() {
            return Err(Error::BadWeight(w.to_string()));
        }
        let den = u64::try_from(w.denom().clone()).map_err(|_| Error::BadWeight(w.to_string()))?;
        e = e.lcm(&den);
    }
    let a: Vec<u64> = weights
        .iter()
        .map(|w| {
            let scaled = w.mul(&ExactScalar::from_int(e as i64));
            u64::try_from(scaled.numer().clone()).expect("integer weight")
        })
        .collect();

    // numerator Π s^{a_i}(s^{e−a_i} − 1), denominator Π (s^{a_i} − 1), s = t^{1/e}
    let mut num = vec![ExactScalar::one()];
    for &ai in &a {
        num = poly_mul(&num, &monomial_minus(e - ai, ai));
    }
    let mut den = vec![ExactScalar::one()];
    for &ai in &a {
        den = poly_mul(&den, &monomial_minus(ai, 0));
    }
    let quot = poly_divide_exact(&num, &den).ok_or(Error::NotIsolatedWeights)?;
    let mut coeffs = Vec::with_capacity(quot.len());
    for c in &quot {
        if c.is_negative() || !c.is_integer() {
            return Err(Error::NotIsolatedWeights);
        }
        coeffs.push(u64::try_from(c.numer().clone()).expect("small count"));
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let spectrum = Spectrum { e, coeffs };

    let verdict = match n {
        0 | 1 => SpectrumLct::NotApplicable,
        2 => SpectrumLct::AlwaysHoldsPlaneCurve,
        _ => {
            let integral: Vec<i64> = spectrum
                .coeffs
                .iter()
                .enumerate()
                .filter(|(m, &c)| c > 0 && *m as u64 % e == 0)
                .map(|(m, _)| (m as u64 / e) as i64)
                .collect();
            if integral.is_empty() {
                SpectrumLct::Holds
            } else {
                SpectrumLct::Fails {
                    integral_exponents: integral,
                }
            }
        }
    };
    Ok((spectrum, verdict))
}

/// s^shift · (s^deg − 1) as a coefficient vector … here: s^{deg+shift} − s^{shift}
fn monomial_minus(deg: u64, shift: u64) -> Vec<ExactScalar> {
    let mut v = vec![ExactScalar::zero(); (deg + shift + 1) as usize];
    v[(deg + shift) as usize] = ExactScalar::one();
    v[shift as usize] = v[shift as usize].sub(&ExactScalar::one());
    v
}

fn poly_mul(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Exact division; None when a remainder is left.
fn poly_divide_exact(num: &[ExactScalar], den: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let mut num: Vec<ExactScalar> = num.to_vec();
    while num.last().map(|c| c.is_zero()).unwrap_or(false) {
        num.pop();
    }
    let mut den: Vec<ExactScalar> = den.to_vec();
    while den.last().map(|c| c.is_zero()).unwrap_or(false) {
        den.pop();
    }
    if den.is_empty() {
        return None;
    }
    if num.is_empty() {
        return Some(Vec::new());
    }
    if num.len() < den.len() {
        return None;
    }
    let lead = den.last().unwrap().clone();
    let mut quot = vec![ExactScalar::zero(); num.len() - den.len() + 1];
    for q_idx in (0..quot.len()).rev() {
        let c = num[q_idx + den.len() - 1].mul(&Scalar::inv(&lead));
        quot[q_idx] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (d_idx, d) in den.iter().enumerate() {
            num[q_idx + d_idx] = num[q_idx + d_idx].sub(&c.mul(d));
        }
    }
    if num.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

/// dim H^j of the complex (A•_f, d) in internal degree K, where
/// A^j = ker(df∧ : Ω^j → Ω^{j+1}).
pub fn brieskorn_at_internal(f: &Poly, j: usize, internal: i64) -> usize {
    let n = f.n();
    if internal < 0 || j > n {
        return 0;
    }
    let a_here = koszul_kernel(f, j, internal);
    if a_here.is_empty() {
        return 0;
    }
    let d_out_rank = restricted_d_rank(f, j, internal, &a_here);
    let rank_in = if j == 0 {
        0
    } else {
        let a_below = koszul_kernel(f, j - 1, internal);
        restricted_d_rank(f, j - 1, internal, &a_below)
    };
    a_here.len() - d_out_rank - rank_in
}

/// rank of d restricted to the span of the given kernel vectors in Ω^j_K
fn restricted_d_rank(f: &Poly, j: usize, internal: i64, basis: &[SparseVec<ExactScalar>]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let d = ext_d_matrix(f, j, internal);
    let cols: Vec<SparseVec<ExactScalar>> = basis.iter().map(|v| d.apply(v)).collect();
    rank(&SparseMatrix::from_columns(d.rows(), cols))
}

/// dim of the degree-m piece of H^j(A•_f, d), the graded Brieskorn piece at
/// L_ξ-eigenvalue m (internal degree m·e).
pub fn brieskorn_dims(f: &Poly, j: usize, m: i64) -> Result<usize> {
    crate::derham::check_reduced(f)?;
    Ok(brieskorn_at_internal(f, j, m * f.e() as i64))
}

/// dim H^j(Ω•(log D)·f^{−r}, d) = (H^j)_{r+1} ⊕ (H^{j+1})_{r+1}.
pub fn log_drham_dims(f: &Poly, r: i64, j: usize) -> Result<usize> {
    crate::derham::check_reduced(f)?;
    let internal = (r + 1) * f.e() as i64;
    Ok(brieskorn_at_internal(f, j, internal) + brieskorn_at_internal(f, j + 1, internal))
}

/// Twisted variant for equal residues α on all components: selects the
/// L_ξ-eigenvalue −α part of the mapping cone, i.e. internal degree
/// K = e(r + 1 − α); empty (dimension 0) when K is not a nonnegative integer.
pub fn twisted_log_dims(f: &Poly, alpha: &ExactScalar, r: i64, j: usize) -> Result<usize> {
    crate::derham::check_reduced(f)?;
    let e = ExactScalar::from_int(f.e() as i64);
    let target = e.mul(&ExactScalar::from_int(r + 1).sub(alpha));
    if !target.is_integer() {
        return Ok(0);
    }
    let Some(internal) = target.to_i64() else {
        return Ok(0);
    };
    if internal < 0 {
        return Ok(0);
    }
    Ok(brieskorn_at_internal(f, j, internal) + brieskorn_at_internal(f, j + 1, internal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn thm1_cases() {
        // all residues equal on d lines summing to 1: e·α̃ = Σα_k = 1 ∈ Z
        let res = ResidueData::arrangement(&[ratio(1, 3), ratio(1, 3), ratio(1, 3)]).unwrap();
        assert_eq!(thm1_acyclicity(&res), Thm1Verdict::NoConclusion);
        // all residues zero
        let res = ResidueData::arrangement(&[ratio(0, 1), ratio(0, 1)]).unwrap();
        assert_eq!(thm1_acyclicity(&res), Thm1Verdict::NoConclusion);
        // x²+y³ with w = (1/2, 1/3), e = 6, α = 1/5: 6·(1/5) ∉ Z
        let res = ResidueData::with_weights(
            &[ratio(1, 2), ratio(1, 3)],
            vec![(ExactScalar::one(), ratio(1, 5))],
        )
        .unwrap();
        assert_eq!(res.e, 6);
        assert_eq!(thm1_acyclicity(&res), Thm1Verdict::AcyclicBothStalks);
    }

    #[test]
    fn spectrum_hand_expansions() {
        // w = (1/2, 1/2): Sp = t
        let (sp, _) = spectrum_wh(&[ratio(1, 2), ratio(1, 2)]).unwrap();
        assert_eq!(sp.exponents(), vec![(ExactScalar::one(), 1)]);
        // w = (1/3, 1/3): Sp = t^{2/3} + 2t + t^{4/3}
        let (sp, _) = spectrum_wh(&[ratio(1, 3), ratio(1, 3)]).unwrap();
        assert_eq!(
            sp.exponents(),
            vec![
                (ratio(2, 3), 1),
                (ExactScalar::one(), 2),
                (ratio(4, 3), 1)
            ]
        );
        assert!(sp.is_symmetric(2));
        // w = (1/2, 1/2, 1/2): Sp = t^{3/2}, no integral exponent
        let (sp, verdict) = spectrum_wh(&vec![ratio(1, 2); 3]).unwrap();
        assert_eq!(sp.exponents(), vec![(ratio(3, 2), 1)]);
        assert_eq!(verdict, SpectrumLct::Holds);
        // w = (1/3, 1/3, 1/3): exponents 1, 4/3 ×3, 5/3 ×3, 2 → fails
        let (sp, verdict) = spectrum_wh(&vec![ratio(1, 3); 3]).unwrap();
        assert_eq!(sp.total(), 8);
        assert!(matches!(verdict, SpectrumLct::Fails { .. }));
        assert!(sp.is_symmetric(3));
    }

    #[test]
    fn spectrum_cardinality_is_milnor_number() {
        let weights = [ratio(1, 2), ratio(1, 3), ratio(1, 5)];
        let (sp, _) = spectrum_wh(&weights).unwrap();
        // Π (1/w_i − 1) = 1 · 2 · 4 = 8 for x² + y³ + z⁵
        assert_eq!(sp.total(), 8);
    }

    #[test]
    fn brieskorn_hand_values() {
        let xyz = Poly::homogeneous(3, &[(1, &[1, 1, 1])]).unwrap();
        // A¹ at internal degree 3 is spanned by df, and d(df) = 0
        assert_eq!(brieskorn_dims(&xyz, 1, 1).unwrap(), 1);
        // A⁰ = 0 always
        assert_eq!(brieskorn_dims(&xyz, 0, 2).unwrap(), 0);

        let quadric =
            Poly::homogeneous(3, &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (1, &[0, 0, 2])]).unwrap();
        // A¹ = R·df lives in degrees ≥ 2; internal degree 2 piece is ℚ·df,
        // killed by nothing and d(df) = 0 … but H¹ also quotients by d(A⁰)=0
        assert_eq!(brieskorn_at_internal(&quadric, 1, 2), 1);
    }

    #[test]
    fn log_drham_torus() {
        // xyz at r = 0, j = 1: stalk log H¹ of the normal crossing torus = 3
        let xyz = Poly::homogeneous(3, &[(1, &[1, 1, 1])]).unwrap();
        assert_eq!(log_drham_dims(&xyz, 0, 1).unwrap(), 3);
        // constants in degree 0: r = 0, j = 0 → 1
        assert_eq!(log_drham_dims(&xyz, 0, 0).unwrap(), 1);
    }

    #[test]
    fn twisted_three_lines() {
        // f = xy(x+y), α = 1/3 per line, r = 0: K = 2 and dim = d−1−dα = 1
        // for j = 1, 2
        let f = Poly::homogeneous(2, &[(1, &[2, 1]), (1, &[1, 2])]).unwrap();
        assert_eq!(twisted_log_dims(&f, &ratio(1, 3), 0, 1).unwrap(), 1);
        assert_eq!(twisted_log_dims(&f, &ratio(1, 3), 0, 2).unwrap(), 1);
        // eigenvalue selection empty for α with e·α̃ ∉ Z
        assert_eq!(twisted_log_dims(&f, &ratio(1, 7), 0, 1).unwrap(), 0);
    }
}
