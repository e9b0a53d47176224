//! Symmetric powers of the weight lattice and their parabolic invariants.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gcm::{IndexSet, Realization};
use crate::linalg::{IntMatrix, Lattice, Overflow};
use crate::weyl;

/// Degree-`m` monomials in `rank` variables, in descending degrevlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPower {
    rank: usize,
    degree: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SymPower {
    pub fn new(rank: usize, degree: usize) -> Self {
        let mut monomials = Vec::new();
        let mut current = vec![0u32; rank];
        compositions(rank, degree as u32, 0, &mut current, &mut monomials);
        monomials.sort_by(|a, b| degrevlex(b, a));
        let index = monomials.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        SymPower { rank, degree, monomials, index }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }

    /// Matrix of `Sym^m(w)` for `w` acting on `Z^rank`; column `b` holds the
    /// expansion of `∏_k (w x_k)^{b_k}`.
    pub fn action(&self, w: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!((w.nrows(), w.ncols()), (self.rank, self.rank), "action on the wrong lattice");
        let images: Vec<Vec<(usize, i64)>> = (0..self.rank)
            .map(|k| (0..self.rank).filter(|&l| w[(l, k)] != 0).map(|l| (l, w[(l, k)])).collect())
            .collect();
        let mut out = IntMatrix::zeros(self.dimension(), self.dimension());
        for (col, b) in self.monomials.iter().enumerate() {
            let mut poly: BTreeMap<Vec<u32>, i128> = BTreeMap::from([(vec![0; self.rank], 1)]);
            for (k, &e) in b.iter().enumerate() {
                for _ in 0..e {
                    poly = multiply_linear(&poly, &images[k])?;
                }
            }
            for (mono, c) in poly {
                let row = self.index[&mono];
                out[(row, col)] = i64::try_from(c).map_err(|_| Overflow)?;
            }
        }
        Ok(out)
    }
}

fn multiply_linear(poly: &BTreeMap<Vec<u32>, i128>, form: &[(usize, i64)]) -> Result<BTreeMap<Vec<u32>, i128>> {
    let mut out: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
    for (mono, &c) in poly {
        for &(l, a) in form {
            let mut m = mono.clone();
            m[l] += 1;
            let term = c.checked_mul(a as i128).ok_or(Error::Overflow)?;
            let slot = out.entry(m).or_insert(0);
            *slot = slot.checked_add(term).ok_or(Error::Overflow)?;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

fn compositions(rank: usize, left: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos + 1 >= rank {
        if rank > 0 {
            current[pos] = left;
            out.push(current.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in 0..=left {
        current[pos] = e;
        compositions(rank, left - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// Graded reverse lexicographic comparison of exponent vectors.
fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// `Sym^m` of a lattice automorphism.
pub fn sym_action(w: &IntMatrix, m: usize) -> Result<IntMatrix> {
    SymPower::new(w.nrows(), m).action(w)
}

/// Saturated sublattice of `Sym^m` fixed by `W_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLattice {
    subset: IndexSet,
    degree: usize,
    lattice: Lattice,
}

impl InvariantLattice {
    pub fn subset(&self) -> IndexSet {
        self.subset
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Basis vectors as matrix columns.
    pub fn basis(&self) -> IntMatrix {
        self.lattice.basis_matrix()
    }
}

/// Common fixed lattice of the given matrices acting on the same module.
pub fn fixed_lattice(generators: &[IntMatrix], dimension: usize) -> Result<Lattice> {
    if generators.is_empty() {
        return Ok(Lattice::full(dimension));
    }
    let blocks = generators
        .iter()
        .map(|g| g.checked_sub(&IntMatrix::identity(dimension)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Lattice::kernel(&IntMatrix::vstack(&blocks, dimension))?)
}

pub fn invariant_lattice(real: &Realization, subset: IndexSet, m: usize) -> Result<InvariantLattice> {
    let sym = SymPower::new(real.rank(), m);
    let generators = subset
        .iter()
        .map(|j| sym.action(real.weight_reflection(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantLattice { subset, degree: m, lattice: fixed_lattice(&generators, sym.dimension())? })
}

/// Invariants of the whole Weyl group, as the intersection of the lattices
/// fixed by each simple reflection.
pub fn weyl_invariants(real: &Realization, m: usize) -> Result<InvariantLattice> {
    let n = real.size();
    let mut lattice = Lattice::full(SymPower::new(real.rank(), m).dimension());
    for i in 0..n {
        let single = invariant_lattice(real, IndexSet::singleton(i), m)?;
        lattice = lattice.intersect(single.lattice())?;
    }
    Ok(InvariantLattice { subset: IndexSet::full(n), degree: m, lattice })
}

/// Coefficients of `det(I - t w)`, constant term first, via Faddeev–LeVerrier.
pub fn reversed_char_poly(w: &IntMatrix) -> Vec<BigInt> {
    let r = w.nrows();
    let big = |m: &IntMatrix| -> Vec<Vec<BigInt>> {
        (0..m.nrows()).map(|i| m.row(i).iter().map(|&v| BigInt::from(v)).collect()).collect()
    };
    let wb = big(w);
    let mut coeffs = vec![BigInt::one()];
    let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); r]; r];
    for k in 1..=r {
        // M_k = W M_{k-1} + c_{k-1} I
        let mut next = mat_mul(&wb, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[k - 1];
        }
        mk = next;
        let wm = mat_mul(&wb, &mk);
        let trace: BigInt = (0..r).map(|i| wm[i][i].clone()).sum();
        coeffs.push(-trace / BigInt::from(k));
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| a[i].iter().zip(b).map(|(x, row)| x * &row[j]).sum())
                .collect()
        })
        .collect()
}

/// Power series inverse of `p` (with `p_0 = 1`) truncated after `t^len`.
fn invert_series(p: &[BigInt], len: usize) -> Vec<BigInt> {
    debug_assert!(p[0].is_one());
    let mut inv = vec![BigInt::zero(); len + 1];
    inv[0] = BigInt::one();
    for k in 1..=len {
        let s: BigInt = (1..=k.min(p.len() - 1)).map(|i| &p[i] * &inv[k - i]).sum();
        inv[k] = -s;
    }
    inv
}

/// Molien series of `W_J` on the weight lattice, through degree `max_degree`.
pub fn molien_series(real: &Realization, subset: IndexSet, max_degree: usize, cap: usize) -> Result<Vec<BigRational>> {
    let group = weyl::enumerate_group(real, subset, cap)?;
    let mut classes: HashMap<Vec<BigInt>, usize> = HashMap::new();
    for w in &group {
        *classes.entry(reversed_char_poly(w.matrix())).or_insert(0) += 1;
    }
    let mut total = vec![BigInt::zero(); max_degree + 1];
    for (poly, count) in classes {
        for (acc, c) in total.iter_mut().zip(invert_series(&poly, max_degree)) {
            *acc += c * BigInt::from(count);
        }
    }
    let order = BigInt::from(group.len());
    Ok(total.into_iter().map(|c| BigRational::new(c, order.clone())).collect())
}
