//! Multi-indices for mixed partial derivatives.

use std::fmt;

/// A tuple of per-axis derivative counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex { entries }
    }

    /// The zero multi-index in `dim` variables (identity operator).
    pub fn zero(dim: usize) -> Self {
        MultiIndex {
            entries: vec![0; dim],
        }
    }

    /// Unit multi-index: one derivative along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut entries = vec![0; dim];
        entries[axis] = 1;
        MultiIndex { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// Total order `|alpha|`.
    pub fn order(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn entry(&self, axis: usize) -> u32 {
        self.entries[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Component-wise sum (composition of derivative operators).
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Increment along one axis.
    pub fn bump(&self, axis: usize) -> MultiIndex {
        let mut entries = self.entries.clone();
        entries[axis] += 1;
        MultiIndex { entries }
    }

    /// Decrement along one axis; `None` if already zero there.
    pub fn lower(&self, axis: usize) -> Option<MultiIndex> {
        if self.entries[axis] == 0 {
            return None;
        }
        let mut entries = self.entries.clone();
        entries[axis] -= 1;
        Some(MultiIndex { entries })
    }

    /// All multi-indices in `dim` variables with `|alpha| <= max_order`,
    /// in a fixed deterministic order.
    pub fn all_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::zero(dim)];
        let mut frontier = vec![MultiIndex::zero(dim)];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for idx in &frontier {
                for axis in 0..dim {
                    let cand = idx.bump(axis);
                    if !next.contains(&cand) && !out.contains(&cand) {
                        next.push(cand);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_sum_of_entries() {
        let a = MultiIndex::new(vec![2, 0, 1]);
        assert_eq!(a.order(), 3);
        assert_eq!(a.dim(), 3);
    }

    #[test]
    fn zero_index_is_identity() {
        let z = MultiIndex::zero(2);
        assert!(z.is_zero());
        assert_eq!(z.order(), 0);
    }

    #[test]
    fn enumeration_counts() {
        // d=2, order <= 2: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2) -> 6
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
        // d=1, order <= 4: 5
        assert_eq!(MultiIndex::all_up_to(1, 4).len(), 5);
    }
}
