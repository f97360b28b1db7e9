//! Weighted-homogeneous polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Scalar};

/// Exponent vector; one entry per variable.
pub type ExpVec = Vec<u32>;

/// Positive integer weights a_1..a_n together with the weighted degree e of
/// the polynomial they grade. The unweighted case is a_i = 1 with e = d.
/// The convention throughout is deg x_i = deg dx_i = a_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub a: Vec<u32>,
    pub e: u32,
}

impl WeightVector {
    pub fn unweighted(n: usize, d: u32) -> Self {
        WeightVector { a: vec![1; n], e: d }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn is_unweighted(&self) -> bool {
        self.a.iter().all(|&a| a == 1)
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u32 {
        exps.iter()
            .zip(&self.a)
            .map(|(b, a)| b * a)
            .sum()
    }
}

/// Sparse multivariate polynomial, weighted-homogeneous of degree e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub weights: WeightVector,
    pub terms: BTreeMap<ExpVec, ExactScalar>,
    /// Variable names, for display only.
    pub vars: Vec<String>,
}

impl Poly {
    /// Build from (coefficient, exponents) pairs with the given weights;
    /// validates weighted homogeneity and infers e.
    pub fn new(
        a: Vec<u32>,
        vars: Vec<String>,
        terms: Vec<(ExactScalar, ExpVec)>,
    ) -> Result<Poly> {
        assert_eq!(a.len(), vars.len());
        let mut map: BTreeMap<ExpVec, ExactScalar> = BTreeMap::new();
        for (c, exps) in terms {
            assert_eq!(exps.len(), a.len(), "exponent arity mismatch");
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(exps).or_insert_with(ExactScalar::zero);
            *slot = slot.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        let probe = WeightVector { a: a.clone(), e: 0 };
        let mut degrees: Vec<u32> = map.keys().map(|m| probe.weighted_degree(m)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        if degrees.len() != 1 {
            let weights = WeightVector {
                a,
                e: *degrees.last().unwrap_or(&0),
            };
            let p = Poly {
                weights,
                terms: map,
                vars,
            };
            let bad: Vec<String> = p
                .terms
                .keys()
                .map(|m| p.monomial_string(m))
                .collect();
            return Err(Error::NotWeightedHomogeneous(bad));
        }
        Ok(Poly {
            weights: WeightVector { a, e: degrees[0] },
            terms: map,
            vars,
        })
    }

    /// Convenience constructor from integer coefficients with default names.
    pub fn from_terms(a: &[u32], terms: &[(i64, &[u32])]) -> Result<Poly> {
        let names = default_names(a.len());
        Poly::new(
            a.to_vec(),
            names,
            terms
                .iter()
                .map(|(c, e)| (ExactScalar::from_int(*c), e.to_vec()))
                .collect(),
        )
    }

    /// Unweighted homogeneous polynomial from integer terms.
    pub fn homogeneous(n: usize, terms: &[(i64, &[u32])]) -> Result<Poly> {
        Poly::from_terms(&vec![1; n], terms)
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn e(&self) -> u32 {
        self.weights.e
    }

    /// Total degree d in the unweighted case (equals e).
    pub fn degree(&self) -> u32 {
        self.weights.e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Partial derivative with respect to variable i, as term list.
    pub fn partial(&self, i: usize) -> Vec<(ExpVec, ExactScalar)> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut e = m.clone();
            e[i] -= 1;
            out.push((e, c.mul(&ExactScalar::from_int(m[i] as i64))));
        }
        out
    }

    fn monomial_string(&self, m: &ExpVec) -> String {
        let mut parts = Vec::new();
        for (i, &p) in m.iter().enumerate() {
            match p {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], p)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Poly {
    /// Canonical form: terms in descending lexicographic exponent order,
    /// explicit rational coefficients, `*` between all factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&ExpVec> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.cmp(a));
        for (idx, m) in keys.iter().enumerate() {
            let c = &self.terms[*m];
            let mono = self.monomial_string(m);
            let abs = c.abs();
            let lead = if c.is_negative() {
                if idx == 0 { "-" } else { " - " }
            } else if idx == 0 {
                ""
            } else {
                " + "
            };
            write!(f, "{lead}")?;
            if mono == "1" {
                write!(f, "{abs}")?;
            } else if abs == ExactScalar::one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 8] = ["x", "y", "z", "w", "v", "u", "t", "s"];
    (0..n)
        .map(|i| {
            if i < NAMES.len() {
                NAMES[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneity_validation() {
        // x^2 + y^3 with weights (3,2): accepted with e = 6
        let p = Poly::from_terms(&[3, 2], &[(1, &[2, 0]), (1, &[0, 3])]).unwrap();
        assert_eq!(p.e(), 6);
        // same with weights (1,1): rejected
        let err = Poly::from_terms(&[1, 1], &[(1, &[2, 0]), (1, &[0, 3])]).unwrap_err();
        match err {
            Error::NotWeightedHomogeneous(monos) => {
                assert!(monos.contains(&"x^2".to_string()));
                assert!(monos.contains(&"y^3".to_string()));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn partials() {
        // f = x^2 y
        let p = Poly::from_terms(&[1, 1], &[(1, &[2, 1])]).unwrap();
        let px = p.partial(0);
        assert_eq!(px, vec![(vec![1, 1], ExactScalar::from_int(2))]);
    }

    #[test]
    fn display_canonical() {
        let p = Poly::from_terms(
            &[1, 1, 1, 1],
            &[(1, &[4, 0, 0, 0]), (1, &[0, 3, 1, 0]), (1, &[0, 0, 3, 1]), (1, &[1, 1, 1, 1])],
        )
        .unwrap();
        assert_eq!(p.to_string(), "x^4 + x*y*z*w + y^3*z + z^3*w");
    }
}
