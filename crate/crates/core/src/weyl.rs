//! The Weyl group acting on the weight lattice: simple reflections, length
//! enumeration, descents and minimal coset representatives.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gcm::{GeneralizedCartanMatrix, IndexSet, Realization};
use crate::linalg::IntMatrix;

/// A Weyl group element with its action on the weight lattice and on the
/// root lattice (simple-root coordinates), plus the inverse root action used
/// for left descents.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    matrix: IntMatrix,
    roots: IntMatrix,
    inverse_roots: IntMatrix,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(real: &Realization) -> Self {
        WeylElement {
            matrix: IntMatrix::identity(real.rank()),
            roots: IntMatrix::identity(real.size()),
            inverse_roots: IntMatrix::identity(real.size()),
            word: Vec::new(),
        }
    }

    /// Weight-lattice matrix.
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Root-lattice matrix; column `j` is `w(α_j)` in simple-root coordinates.
    pub fn root_action(&self) -> &IntMatrix {
        &self.roots
    }

    /// Lexicographically smallest reduced word.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// `ℓ(w r_j) < ℓ(w)`, i.e. `w(α_j)` is a negative root.
    pub fn has_right_descent(&self, j: usize) -> bool {
        is_negative_column(&self.roots, j)
    }

    /// `ℓ(r_i w) < ℓ(w)`, i.e. `w⁻¹(α_i)` is a negative root.
    pub fn has_left_descent(&self, i: usize) -> bool {
        is_negative_column(&self.inverse_roots, i)
    }

    pub fn right_descents(&self) -> IndexSet {
        IndexSet::from_indices(&(0..self.roots.ncols()).filter(|&j| self.has_right_descent(j)).collect::<Vec<_>>())
    }

    /// `w r_i`, for `i` not a right descent.
    pub(crate) fn times_generator(&self, real: &Realization, i: usize) -> Result<Self> {
        debug_assert!(!self.has_right_descent(i));
        let mut word = self.word.clone();
        word.push(i);
        Ok(WeylElement {
            matrix: self.matrix.checked_mul(real.weight_reflection(i))?,
            roots: self.roots.checked_mul(real.root_reflection(i))?,
            inverse_roots: real.root_reflection(i).checked_mul(&self.inverse_roots)?,
            word,
        })
    }

    /// `r_i w`, for `i` not a left descent.
    pub(crate) fn generator_times(&self, real: &Realization, i: usize) -> Result<Self> {
        debug_assert!(!self.has_left_descent(i));
        let word = std::iter::once(i).chain(self.word.iter().copied()).collect();
        Ok(WeylElement {
            matrix: real.weight_reflection(i).checked_mul(&self.matrix)?,
            roots: real.root_reflection(i).checked_mul(&self.roots)?,
            inverse_roots: self.inverse_roots.checked_mul(real.root_reflection(i))?,
            word,
        })
    }
}

fn is_negative_column(m: &IntMatrix, j: usize) -> bool {
    (0..m.nrows()).any(|i| m[(i, j)] < 0)
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.word)
    }
}

/// Simple reflection `r_i` as a group element.
pub fn simple_reflection(real: &Realization, i: usize) -> Result<WeylElement> {
    if i >= real.size() {
        return Err(Error::IndexOutOfRange { index: i + 1, n: real.size() });
    }
    WeylElement::identity(real).times_generator(real, i)
}

/// Order of `r_i r_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoxeterOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for CoxeterOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterOrder::Finite(m) => write!(f, "{m}"),
            CoxeterOrder::Infinite => f.write_str("inf"),
        }
    }
}

pub fn coxeter_order(a: &GeneralizedCartanMatrix, i: usize, j: usize) -> CoxeterOrder {
    assert_ne!(i, j, "coxeter order needs distinct generators");
    match a.entry(i, j) * a.entry(j, i) {
        0 => CoxeterOrder::Finite(2),
        1 => CoxeterOrder::Finite(3),
        2 => CoxeterOrder::Finite(4),
        3 => CoxeterOrder::Finite(6),
        _ => CoxeterOrder::Infinite,
    }
}

/// Breadth-first search of `W_J` by right multiplication. Level `k` holds the
/// elements of length `k`, sorted by their lexicographically least reduced
/// word. Stops after `max_len` or when a level is empty.
fn bfs_levels(real: &Realization, gens: IndexSet, max_len: Option<usize>, cap: usize) -> Result<Vec<Vec<WeylElement>>> {
    let gens = gens.indices();
    let mut levels = vec![vec![WeylElement::identity(real)]];
    let mut total = 1usize;
    if total > cap {
        return Err(Error::CapExceeded { cap });
    }
    while max_len.map_or(true, |l| levels.len() <= l) {
        let last = levels.last().expect("nonempty");
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for w in last {
            for &i in &gens {
                if w.has_right_descent(i) {
                    continue;
                }
                let v = w.times_generator(real, i)?;
                if seen.insert(v.matrix.clone()) {
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        total += next.len();
        if total > cap {
            return Err(Error::CapExceeded { cap });
        }
        next.sort_by(|a, b| a.word.cmp(&b.word));
        levels.push(next);
    }
    Ok(levels)
}

/// All of `W_J`, in order of length then word.
pub fn enumerate_group(real: &Realization, subset: IndexSet, cap: usize) -> Result<Vec<WeylElement>> {
    Ok(bfs_levels(real, subset, None, cap)?.into_iter().flatten().collect())
}

/// Elements of `W_J` of length at most `max_len`, grouped by length.
pub fn elements_by_length(
    real: &Realization,
    subset: IndexSet,
    max_len: usize,
    cap: usize,
) -> Result<Vec<Vec<WeylElement>>> {
    let mut levels = bfs_levels(real, subset, Some(max_len), cap)?;
    levels.resize(max_len + 1, Vec::new());
    Ok(levels)
}

/// Minimal length representatives of `W / W_J` up to a length bound.
#[derive(Clone, Debug)]
pub struct CosetTable {
    subset: IndexSet,
    by_length: Vec<Vec<WeylElement>>,
}

impl CosetTable {
    pub fn subset(&self) -> IndexSet {
        self.subset
    }

    pub fn max_length(&self) -> usize {
        self.by_length.len() - 1
    }

    /// Representatives of length `k`, sorted by word; empty beyond the bound.
    pub fn of_length(&self, k: usize) -> &[WeylElement] {
        self.by_length.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_length.iter().map(Vec::len).collect()
    }
}

/// Elements without right descents in `J` grow from shorter ones by left
/// multiplication, since suffixes of such elements again have none.
pub fn min_coset_reps(real: &Realization, subset: IndexSet, max_len: usize) -> Result<CosetTable> {
    let n = real.size();
    let mut by_length = vec![vec![WeylElement::identity(real)]];
    while by_length.len() <= max_len {
        let last = by_length.last().expect("nonempty");
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        // generator outermost so the first hit carries the least word
        for i in 0..n {
            for v in last {
                if v.has_left_descent(i) {
                    continue;
                }
                let w = v.generator_times(real, i)?;
                if subset.iter().any(|j| w.has_right_descent(j)) {
                    continue;
                }
                if seen.insert(w.matrix.clone()) {
                    next.push(w);
                }
            }
        }
        next.sort_by(|a, b| a.word.cmp(&b.word));
        by_length.push(next);
    }
    Ok(CosetTable { subset, by_length })
}

/// What a length generating function counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesMode {
    /// Elements of `W_J`.
    Group,
    /// Minimal representatives of `W / W_J`.
    Cosets,
}

/// Coefficients `c_0..c_L` of the length generating function.
pub fn poincare_series(
    real: &Realization,
    subset: IndexSet,
    max_len: usize,
    mode: SeriesMode,
    cap: usize,
) -> Result<Vec<usize>> {
    match mode {
        SeriesMode::Group => Ok(elements_by_length(real, subset, max_len, cap)?.iter().map(Vec::len).collect()),
        SeriesMode::Cosets => Ok(min_coset_reps(real, subset, max_len)?.counts()),
    }
}
