//! Constant-coefficient partial differential operators.

use std::fmt;

use super::MultiIndex;
use crate::error::{Error, Result};

/// `P(d) = sum over alpha of c_alpha d^alpha` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PDOperator {
    dim: usize,
    terms: Vec<(MultiIndex, f64)>,
}

impl PDOperator {
    /// Builds an operator; merges duplicate indices, drops zero coefficients.
    pub fn new(dim: usize, terms: Vec<(MultiIndex, f64)>) -> Result<Self> {
        let mut merged: Vec<(MultiIndex, f64)> = Vec::new();
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: alpha.dim(),
                });
            }
            if let Some(existing) = merged.iter_mut().find(|(a, _)| *a == alpha) {
                existing.1 += c;
            } else {
                merged.push((alpha, c));
            }
        }
        merged.retain(|(_, c)| *c != 0.0);
        if merged.is_empty() {
            return Err(Error::InvalidArgument(
                "operator needs at least one nonzero coefficient".into(),
            ));
        }
        // deterministic term order
        merged.sort_by(|(a, _), (b, _)| a.entries().cmp(b.entries()));
        Ok(PDOperator {
            dim,
            terms: merged,
        })
    }

    /// Identity operator (single zero multi-index).
    pub fn identity(dim: usize) -> Self {
        PDOperator::new(dim, vec![(MultiIndex::zero(dim), 1.0)]).expect("identity is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest total derivative order among the terms.
    pub fn order(&self) -> u32 {
        self.terms
            .iter()
            .map(|(alpha, _)| alpha.order())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> &[(MultiIndex, f64)] {
        &self.terms
    }
}

impl fmt::Display for PDOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(alpha, c)| format!("{c}*d^{alpha}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The formal adjoint `P(-d)`: odd-order coefficients flip sign.
pub fn formal_adjoint(p: &PDOperator) -> PDOperator {
    let terms = p
        .terms
        .iter()
        .map(|(alpha, c)| {
            let sign = if alpha.order() % 2 == 0 { 1.0 } else { -1.0 };
            (alpha.clone(), sign * c)
        })
        .collect();
    PDOperator::new(p.dim, terms).expect("adjoint preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_flips_first_derivative() {
        let ddx = PDOperator::new(1, vec![(MultiIndex::new(vec![1]), 1.0)]).unwrap();
        let adj = formal_adjoint(&ddx);
        assert_eq!(adj.terms()[0].1, -1.0);
    }

    #[test]
    fn laplacian_is_self_adjoint() {
        let lap = PDOperator::new(
            2,
            vec![
                (MultiIndex::new(vec![2, 0]), 1.0),
                (MultiIndex::new(vec![0, 2]), 1.0),
            ],
        )
        .unwrap();
        assert_eq!(formal_adjoint(&lap), lap);
    }

    #[test]
    fn adjoint_is_involutive() {
        // heat-like operator d_t - d_x^2
        let p = PDOperator::new(
            2,
            vec![
                (MultiIndex::new(vec![1, 0]), 1.0),
                (MultiIndex::new(vec![0, 2]), -1.0),
            ],
        )
        .unwrap();
        assert_eq!(formal_adjoint(&formal_adjoint(&p)), p);
        assert_eq!(p.order(), 2);
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert!(PDOperator::new(1, vec![]).is_err());
        assert!(PDOperator::new(1, vec![(MultiIndex::new(vec![1]), 0.0)]).is_err());
        assert!(PDOperator::new(2, vec![(MultiIndex::new(vec![1]), 1.0)]).is_err());
    }

    #[test]
    fn merges_duplicate_terms() {
        let p = PDOperator::new(
            1,
            vec![
                (MultiIndex::new(vec![1]), 1.0),
                (MultiIndex::new(vec![1]), 2.0),
            ],
        )
        .unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].1, 3.0);
    }
}
