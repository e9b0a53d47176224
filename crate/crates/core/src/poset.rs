//! Finite posets and the chains of their nerves.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite poset on `0..len`, given by its strict order relation, together
/// with every strictly increasing chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    less: Vec<Vec<bool>>,
    chains: Vec<Vec<Vec<usize>>>,
}

impl FinitePoset {
    /// Builds a poset from a strict order; the relation must be irreflexive
    /// and transitive (antisymmetry then follows).
    pub fn from_strict_order(less: Vec<Vec<bool>>) -> Result<Self> {
        let n = less.len();
        if less.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPoset("relation matrix is not square".into()));
        }
        for a in 0..n {
            if less[a][a] {
                return Err(Error::InvalidPoset(format!("{a} < {a}")));
            }
            for b in 0..n {
                if !less[a][b] {
                    continue;
                }
                for c in 0..n {
                    if less[b][c] && !less[a][c] {
                        return Err(Error::InvalidPoset(format!("{a} < {b} < {c} but not {a} < {c}")));
                    }
                }
            }
        }
        let chains = enumerate_chains(&less);
        Ok(FinitePoset { less, chains })
    }

    /// Poset of the given sets under strict inclusion.
    pub fn from_subsets(sets: &[u32]) -> Self {
        let less = sets
            .iter()
            .map(|&a| sets.iter().map(|&b| a != b && a & b == a).collect())
            .collect();
        Self::from_strict_order(less).expect("inclusion is a partial order")
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    /// Strictly increasing chains with `degree + 1` objects, in lexicographic
    /// order of their index tuples. Empty beyond the longest chain.
    pub fn chains(&self, degree: usize) -> &[Vec<usize>] {
        self.chains.get(degree).map_or(&[], Vec::as_slice)
    }

    /// Length (number of steps) of the longest strict chain.
    pub fn height(&self) -> usize {
        self.chains.len().saturating_sub(1)
    }

    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        self.chains(1).iter().map(|c| (c[0], c[1])).collect()
    }

    /// Pairs `a < b` with nothing strictly between them.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        self.comparable_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.len()).any(|c| self.less[a][c] && self.less[c][b]))
            .collect()
    }

    /// Index of every chain of the given degree, for face lookups.
    pub(crate) fn chain_index(&self, degree: usize) -> HashMap<&[usize], usize> {
        self.chains(degree).iter().enumerate().map(|(k, c)| (c.as_slice(), k)).collect()
    }
}

fn enumerate_chains(less: &[Vec<bool>]) -> Vec<Vec<Vec<usize>>> {
    let n = less.len();
    let mut by_degree: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(less: &[Vec<bool>], stack: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let degree = stack.len() - 1;
        if out.len() <= degree {
            out.push(Vec::new());
        }
        out[degree].push(stack.clone());
        let top = *stack.last().expect("nonempty chain");
        for next in 0..less.len() {
            if less[top][next] {
                stack.push(next);
                extend(less, stack, out);
                stack.pop();
            }
        }
    }
    for start in 0..n {
        stack.push(start);
        extend(less, &mut stack, &mut by_degree);
        stack.pop();
    }
    for level in by_degree.iter_mut() {
        level.sort();
    }
    by_degree
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pullback_poset_chains() {
        // 0 < 1, 0 < 2
        let p = FinitePoset::from_subsets(&[0b00, 0b01, 0b10]);
        assert_eq!(p.chains(0).len(), 3);
        assert_eq!(p.chains(1), &[vec![0, 1], vec![0, 2]]);
        assert!(p.chains(2).is_empty());
        assert_eq!(p.height(), 1);
    }

    #[test]
    fn boolean_lattice_chain_counts() {
        let sets: Vec<u32> = (0..8).collect();
        let p = FinitePoset::from_subsets(&sets);
        let counts: Vec<usize> = (0..4).map(|d| p.chains(d).len()).collect();
        assert_eq!(counts, vec![8, 19, 18, 6]);
        assert_eq!(p.covering_pairs().len(), 12);
    }

    #[test]
    fn rejects_non_transitive_relation() {
        let less = vec![vec![false, true, false], vec![false, false, true], vec![false, false, false]];
        assert!(matches!(FinitePoset::from_strict_order(less), Err(Error::InvalidPoset(_))));
    }
}
