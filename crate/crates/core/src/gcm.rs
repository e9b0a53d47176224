//! Generalized Cartan matrices, the spherical poset and the integral
//! realization of the maximal torus.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::linalg::{determinant, rank_bareiss, IntMatrix};
use crate::poset::FinitePoset;
use crate::weyl;

/// Default bound on the number of group elements enumerated for one finite
/// parabolic subgroup.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// Default bound on the size of the index set.
pub const DEFAULT_MAX_RANK: usize = 6;

/// A subset of the index set `I = {0, .., n-1}` as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u32) -> Self {
        IndexSet(bits)
    }

    pub fn full(n: usize) -> Self {
        assert!(n < 32);
        IndexSet((1u32 << n) - 1)
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        IndexSet(indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Lexicographic order on the sorted index tuples.
impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Displays 1-based indices, e.g. `{1,3}`.
impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A validated generalized Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralizedCartanMatrix {
    entries: IntMatrix,
}

impl GeneralizedCartanMatrix {
    /// Checks the axioms in row-major order and reports the first violation.
    pub fn validate(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n >= 32 {
            return Err(Error::IndexOutOfRange { index: n, n: 31 });
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row: row + 1, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let a = rows[i][j];
                if i == j {
                    if a != 2 {
                        return Err(Error::DiagonalNotTwo { index: i, value: a });
                    }
                } else if a > 0 {
                    return Err(Error::PositiveOffDiagonal { row: i, col: j, value: a });
                } else if (a == 0) != (rows[j][i] == 0) {
                    return Err(Error::ZeroAsymmetry { row: i, col: j });
                }
            }
        }
        Ok(GeneralizedCartanMatrix { entries: IntMatrix::from_rows(rows) })
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn full_set(&self) -> IndexSet {
        IndexSet::full(self.size())
    }

    /// Principal submatrix on `subset`.
    pub fn restrict(&self, subset: IndexSet) -> IntMatrix {
        let idx = subset.indices();
        self.entries.select(&idx, &idx)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_bareiss(&self.entries)
    }

    /// Simultaneous permutation of rows and columns: entry `(i, j)` of the
    /// result is `a[perm[i], perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.size();
        assert_eq!(perm.len(), n);
        GeneralizedCartanMatrix { entries: IntMatrix::from_fn(n, n, |i, j| self.entries[(perm[i], perm[j])]) }
    }
}

/// Outcome of the symmetrizability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetrization {
    pub symmetrizable: bool,
    /// Positive `d` with `d_i a_ij = d_j a_ji`, normalised to 1 on the first
    /// index of each connected component.
    pub witness: Option<Vec<Ratio<i64>>>,
}

/// Propagates `d_j = d_i a_ij / a_ji` along the Dynkin graph and checks every
/// edge.
pub fn is_symmetrizable(a: &GeneralizedCartanMatrix) -> Symmetrization {
    let n = a.size();
    let mut d: Vec<Option<Ratio<i64>>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Ratio::from_integer(1));
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].expect("visited");
            for j in 0..n {
                if i == j || a.entry(i, j) == 0 {
                    continue;
                }
                let dj = di * Ratio::new(a.entry(i, j), a.entry(j, i));
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != dj => {
                        return Symmetrization { symmetrizable: false, witness: None };
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let witness: Vec<Ratio<i64>> = d.into_iter().map(|x| x.expect("all visited")).collect();
    debug_assert!(witness.iter().all(|x| x.is_positive()));
    Symmetrization { symmetrizable: true, witness: Some(witness) }
}

/// `W_J` is finite iff every principal minor of `A_J` is positive.
pub fn is_finite_type(a: &GeneralizedCartanMatrix, subset: IndexSet) -> bool {
    let sub = a.restrict(subset);
    let k = sub.nrows();
    (1u32..(1 << k)).all(|mask| {
        let idx: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        determinant(&sub.select(&idx, &idx)).is_positive()
    })
}

/// The poset of spherical subsets (those `J` with `W_J` finite) under
/// inclusion, in lexicographic subset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalPoset {
    subsets: Vec<IndexSet>,
    poset: FinitePoset,
}

impl SphericalPoset {
    pub fn subsets(&self) -> &[IndexSet] {
        &self.subsets
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn index_of(&self, subset: IndexSet) -> Option<usize> {
        self.subsets.iter().position(|&s| s == subset)
    }

    pub fn contains(&self, subset: IndexSet) -> bool {
        self.index_of(subset).is_some()
    }

    /// Chains `J_0 < .. < J_degree`, as subset lists.
    pub fn chains(&self, degree: usize) -> Vec<Vec<IndexSet>> {
        self.poset.chains(degree).iter().map(|c| c.iter().map(|&k| self.subsets[k]).collect()).collect()
    }

    /// Longest strict chain length; equals the largest spherical subset size.
    pub fn column_bound(&self) -> usize {
        self.poset.height()
    }

    /// Spherical subsets not contained in a larger spherical subset.
    pub fn maximal(&self) -> Vec<IndexSet> {
        self.subsets
            .iter()
            .copied()
            .filter(|&s| !self.subsets.iter().any(|&t| t != s && s.is_subset_of(t)))
            .collect()
    }

    pub fn has_terminal_object(&self) -> bool {
        self.maximal().len() == 1
    }
}

pub fn spherical_poset(a: &GeneralizedCartanMatrix) -> SphericalPoset {
    let n = a.size();
    let mut subsets: Vec<IndexSet> = (0u32..(1 << n))
        .map(IndexSet::from_bits)
        .filter(|&s| is_finite_type(a, s))
        .collect();
    subsets.sort();
    let bits: Vec<u32> = subsets.iter().map(|s| s.bits()).collect();
    SphericalPoset { poset: FinitePoset::from_subsets(&bits), subsets }
}

/// Torus weight lattice of rank `2n - rk(A)` with simple roots and coroots.
///
/// Coroots are the first `n` standard basis vectors of the cocharacter
/// lattice `Z^r`. Weights are covectors on it, written in the dual basis, so
/// `<λ, α_i^∨> = λ_i` for `i < n`. Root `α_j` has coordinates `a_ij` in slot
/// `i < n`; the remaining `n - rk(A)` slots carry a 0/1 completion making the
/// roots independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    cartan: GeneralizedCartanMatrix,
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    weight_reflections: Vec<IntMatrix>,
    root_reflections: Vec<IntMatrix>,
}

impl Realization {
    pub fn new(a: &GeneralizedCartanMatrix) -> Self {
        let n = a.size();
        let rank = 2 * n - a.rank();
        // greedy leftmost column basis of A; the others get a completion slot
        let mut pivots: Vec<usize> = Vec::new();
        let mut free: Vec<usize> = Vec::new();
        for j in 0..n {
            let mut cols = pivots.clone();
            cols.push(j);
            let sub = a.matrix().select(&(0..n).collect::<Vec<_>>(), &cols);
            if rank_bareiss(&sub) == cols.len() {
                pivots.push(j);
            } else {
                free.push(j);
            }
        }
        let roots: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut v: Vec<i64> = (0..n).map(|i| a.entry(i, j)).collect();
                v.extend(free.iter().map(|&f| i64::from(f == j)));
                v
            })
            .collect();
        let coroots: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..rank).map(|k| i64::from(k == i)).collect())
            .collect();
        // r_i(λ) = λ - λ_i α_i: identity with column i replaced by e_i - α_i
        let weight_reflections = (0..n)
            .map(|i| {
                let mut m = IntMatrix::identity(rank);
                for k in 0..rank {
                    m[(k, i)] -= roots[i][k];
                }
                m
            })
            .collect();
        // on simple-root coordinates: r_i(α_j) = α_j - a_ij α_i
        let root_reflections = (0..n)
            .map(|i| {
                let mut m = IntMatrix::identity(n);
                for j in 0..n {
                    m[(i, j)] -= a.entry(i, j);
                }
                m
            })
            .collect();
        Realization { cartan: a.clone(), rank, roots, coroots, weight_reflections, root_reflections }
    }

    pub fn cartan(&self) -> &GeneralizedCartanMatrix {
        &self.cartan
    }

    /// Rank of the torus weight lattice.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.cartan.size()
    }

    /// Simple roots as weight vectors.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// Simple coroots as cocharacter vectors.
    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    /// `<α_j, α_i^∨>`.
    pub fn pairing(&self, j: usize, i: usize) -> i64 {
        self.roots[j].iter().zip(&self.coroots[i]).map(|(a, b)| a * b).sum()
    }

    /// Matrix of the simple reflection `r_i` on the weight lattice.
    pub fn weight_reflection(&self, i: usize) -> &IntMatrix {
        &self.weight_reflections[i]
    }

    /// Matrix of `r_i` on the root lattice in simple-root coordinates.
    pub fn root_reflection(&self, i: usize) -> &IntMatrix {
        &self.root_reflections[i]
    }
}

pub fn realization(a: &GeneralizedCartanMatrix) -> Realization {
    Realization::new(a)
}

/// Primes dividing `|W_J|` for some spherical `J`.
pub fn torsion_primes(real: &Realization, poset: &SphericalPoset, cap: usize) -> Result<BTreeSet<u64>> {
    let mut primes = BTreeSet::new();
    for j in poset.maximal() {
        let order = weyl::enumerate_group(real, j, cap)?.len() as u64;
        primes.extend(factorize(order).into_iter().map(|(p, _)| p));
    }
    Ok(primes)
}

/// The Cartan datum together with the structures every computation needs.
#[derive(Clone, Debug)]
pub struct KacMoody {
    cartan: GeneralizedCartanMatrix,
    realization: Realization,
    poset: SphericalPoset,
}

impl KacMoody {
    pub fn new(cartan: GeneralizedCartanMatrix) -> Self {
        let realization = Realization::new(&cartan);
        let poset = spherical_poset(&cartan);
        KacMoody { cartan, realization, poset }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Ok(Self::new(GeneralizedCartanMatrix::validate(rows)?))
    }

    pub fn cartan(&self) -> &GeneralizedCartanMatrix {
        &self.cartan
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn poset(&self) -> &SphericalPoset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.cartan.size()
    }

    pub fn torsion_primes(&self, cap: usize) -> Result<BTreeSet<u64>> {
        torsion_primes(&self.realization, &self.poset, cap)
    }

    pub fn is_finite_type(&self) -> bool {
        is_finite_type(&self.cartan, self.cartan.full_set())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(rows: &[&[i64]]) -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::validate(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn try_gcm(rows: &[&[i64]]) -> Result<GeneralizedCartanMatrix> {
        GeneralizedCartanMatrix::validate(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn validation_errors() {
        assert!(try_gcm(&[&[2, -1], &[-1, 2]]).is_ok());
        assert_eq!(try_gcm(&[&[2, -1], &[0, 2]]), Err(Error::ZeroAsymmetry { row: 0, col: 1 }));
        assert_eq!(try_gcm(&[&[1]]), Err(Error::DiagonalNotTwo { index: 0, value: 1 }));
        assert_eq!(
            try_gcm(&[&[2, 1], &[1, 2]]),
            Err(Error::PositiveOffDiagonal { row: 0, col: 1, value: 1 })
        );
        assert!(matches!(try_gcm(&[&[2, -1], &[-1]]), Err(Error::NotSquare { .. })));
        assert_eq!(
            Error::ZeroAsymmetry { row: 0, col: 1 }.to_string(),
            "a[1,2] and a[2,1] must vanish together"
        );
    }

    #[test]
    fn symmetrizability() {
        let sym = is_symmetrizable(&gcm(&[&[2, -1], &[-1, 2]]));
        assert_eq!(sym.witness, Some(vec![Ratio::from_integer(1); 2]));
        let b2 = is_symmetrizable(&gcm(&[&[2, -2], &[-1, 2]]));
        assert_eq!(b2.witness, Some(vec![Ratio::from_integer(1), Ratio::from_integer(2)]));
        let cyc = gcm(&[&[2, -1, -2], &[-2, 2, -1], &[-1, -1, 2]]);
        assert!(!is_symmetrizable(&cyc).symmetrizable);
        // disconnected components normalise independently
        let split = is_symmetrizable(&gcm(&[&[2, 0, 0], &[0, 2, -3], &[0, -1, 2]]));
        assert_eq!(
            split.witness,
            Some(vec![Ratio::from_integer(1), Ratio::from_integer(1), Ratio::from_integer(3)])
        );
    }

    #[test]
    fn finite_type_examples() {
        let a2 = gcm(&[&[2, -1], &[-1, 2]]);
        assert!(is_finite_type(&a2, a2.full_set()));
        let affine = gcm(&[&[2, -2], &[-2, 2]]);
        assert!(!is_finite_type(&affine, affine.full_set()));
        assert!(is_finite_type(&affine, IndexSet::EMPTY));
    }

    #[test]
    fn spherical_posets() {
        let affine = gcm(&[&[2, -2], &[-2, 2]]);
        let p = spherical_poset(&affine);
        assert_eq!(p.subsets(), &[IndexSet::EMPTY, IndexSet::singleton(0), IndexSet::singleton(1)]);
        assert_eq!(p.column_bound(), 1);
        let a2 = spherical_poset(&gcm(&[&[2, -1], &[-1, 2]]));
        assert_eq!(a2.len(), 4);
        assert!(a2.has_terminal_object());
        // lexicographic: {} < {1} < {1,2} < {2}
        assert_eq!(a2.subsets()[2], IndexSet::from_indices(&[0, 1]));
    }

    #[test]
    fn realization_ranks_and_pairing() {
        let a2 = gcm(&[&[2, -1], &[-1, 2]]);
        assert_eq!(Realization::new(&a2).rank(), 2);
        let affine = gcm(&[&[2, -2], &[-2, 2]]);
        let r = Realization::new(&affine);
        assert_eq!(r.rank(), 3);
        assert_eq!(r.roots(), &[vec![2, -2, 0], vec![-2, 2, 1]]);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(r.pairing(j, i), affine.entry(i, j));
            }
        }
        let one = Realization::new(&gcm(&[&[2]]));
        assert_eq!(one.rank(), 1);
        assert_eq!(one.weight_reflection(0), &IntMatrix::from_rows(&[[-1]]));
    }

    #[test]
    fn torsion_prime_examples() {
        let km = KacMoody::from_rows(&[vec![2, -2], vec![-2, 2]]).unwrap();
        assert_eq!(km.torsion_primes(DEFAULT_GROUP_CAP).unwrap(), BTreeSet::from([2]));
        let a2 = KacMoody::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(a2.torsion_primes(DEFAULT_GROUP_CAP).unwrap(), BTreeSet::from([2, 3]));
        let a1 = KacMoody::from_rows(&[vec![2]]).unwrap();
        assert_eq!(a1.torsion_primes(DEFAULT_GROUP_CAP).unwrap(), BTreeSet::from([2]));
        assert_eq!(a2.torsion_primes(5), Err(Error::CapExceeded { cap: 5 }));
    }
}
