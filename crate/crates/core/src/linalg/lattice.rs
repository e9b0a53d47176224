//! Sublattices of `Z^n` with canonical bases, plus the elimination routines
//! that produce them.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::scalar::{bigint_to_i64, with_fallback, Checked, Overflow, Scalar};
use super::snf::invariant_factors;

/// A sublattice of `Z^ambient`, stored by its row Hermite normal form.
///
/// The basis is canonical: two lattices are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Lattice { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Lattice spanned by arbitrary integer vectors of length `ambient`.
    pub fn span(ambient: usize, vectors: &[Vec<i64>]) -> Checked<Self> {
        let rows = hermite_rows(vectors, ambient)?;
        Ok(Self::from_hermite(ambient, rows))
    }

    fn from_hermite(ambient: usize, basis: Vec<Vec<i64>>) -> Self {
        let pivots = basis
            .iter()
            .map(|r| r.iter().position(|&v| v != 0).expect("hermite rows are nonzero"))
            .collect();
        Lattice { ambient, basis, pivots }
    }

    /// Integer kernel `{x : m x = 0}`; always saturated.
    pub fn kernel(m: &IntMatrix) -> Checked<Self> {
        let vectors = kernel_vectors(m)?;
        Self::span(m.ncols(), &vectors)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors (Hermite rows).
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Basis as the columns of an `ambient x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(v.len(), self.ambient);
        let mut rest: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[..p].iter().any(|&x| x != 0) {
                return None;
            }
            let pv = row[p] as i128;
            if rest[p] % pv != 0 {
                return None;
            }
            let c = rest[p] / pv;
            if c != 0 {
                for (r, &b) in rest.iter_mut().zip(row) {
                    *r = r.checked_sub(c.checked_mul(b as i128)?)?;
                }
            }
            coords.push(i64::try_from(c).ok()?);
        }
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|b| other.contains(b))
    }

    /// Matrix expressing this lattice's basis in `outer`'s basis
    /// (`outer.rank() x self.rank()`); `None` unless `self ⊆ outer`.
    pub fn inclusion_into(&self, outer: &Lattice) -> Option<IntMatrix> {
        let cols = self
            .basis
            .iter()
            .map(|b| outer.coordinates(b))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_columns(outer.rank(), &cols))
    }

    pub fn intersect(&self, other: &Lattice) -> Checked<Lattice> {
        assert_eq!(self.ambient, other.ambient);
        let (d1, d2) = (self.rank(), other.rank());
        if d1 == 0 || d2 == 0 {
            return Ok(Lattice::zero(self.ambient));
        }
        // solutions of x B1 = y B2 parametrise the intersection
        let m = IntMatrix::from_fn(self.ambient, d1 + d2, |i, j| {
            if j < d1 {
                self.basis[j][i]
            } else {
                -other.basis[j - d1][i]
            }
        });
        let sols = kernel_vectors(&m)?;
        let mut vectors = Vec::with_capacity(sols.len());
        for s in sols {
            let mut v = vec![0i128; self.ambient];
            for (k, &c) in s[..d1].iter().enumerate() {
                for (acc, &b) in v.iter_mut().zip(&self.basis[k]) {
                    *acc += c as i128 * b as i128;
                }
            }
            vectors.push(v.into_iter().map(|x| i64::try_from(x).map_err(|_| Overflow)).collect::<Checked<Vec<_>>>()?);
        }
        Lattice::span(self.ambient, &vectors)
    }

    /// True when `Z^ambient / self` is torsion-free.
    pub fn is_saturated(&self) -> bool {
        invariant_factors(&self.basis_matrix().to_sparse())
            .iter()
            .all(|d| d == &BigInt::from(1))
    }
}

/// Integer kernel basis of `m` by unimodular column operations on `[m; I]`.
pub fn kernel_vectors(m: &IntMatrix) -> Checked<Vec<Vec<i64>>> {
    let out = with_fallback(|| kernel_generic::<i128>(m), || kernel_generic::<BigInt>(m).expect("bigint"));
    out.iter().map(|v| v.iter().map(bigint_to_i64).collect()).collect()
}

fn kernel_generic<T: Scalar>(m: &IntMatrix) -> Checked<Vec<Vec<BigInt>>> {
    let (rows, n) = (m.nrows(), m.ncols());
    // column j holds (m e_j ; e_j)
    let mut cols: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut c: Vec<T> = (0..rows).map(|i| T::from_i64(m[(i, j)])).collect();
            c.extend((0..n).map(|k| if k == j { T::one() } else { T::zero() }));
            c
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    for r in 0..rows {
        loop {
            let nz: Vec<usize> = active.iter().copied().filter(|&j| !cols[j][r].vanishes()).collect();
            if nz.is_empty() {
                break;
            }
            let mut p = nz[0];
            let mut best = cols[p][r].magnitude()?;
            for &j in &nz[1..] {
                let a = cols[j][r].magnitude()?;
                if a < best {
                    best = a;
                    p = j;
                }
            }
            if nz.len() == 1 {
                active.retain(|&j| j != p);
                break;
            }
            let pivot = cols[p].clone();
            for &j in &nz {
                if j == p {
                    continue;
                }
                let q = cols[j][r].div_round(&pivot[r])?;
                for (x, y) in cols[j].iter_mut().zip(&pivot).skip(r) {
                    *x = x.sub_mul(y, &q)?;
                }
            }
        }
    }
    Ok(active.into_iter().map(|j| cols[j][rows..].iter().map(Scalar::to_bigint).collect()).collect())
}

/// Row Hermite normal form of the lattice spanned by `vectors`: nonzero rows
/// only, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(vectors: &[Vec<i64>], ambient: usize) -> Checked<Vec<Vec<i64>>> {
    let out = with_fallback(
        || hermite_generic::<i128>(vectors, ambient),
        || hermite_generic::<BigInt>(vectors, ambient).expect("bigint"),
    );
    out.iter().map(|v| v.iter().map(bigint_to_i64).collect()).collect()
}

fn hermite_generic<T: Scalar>(vectors: &[Vec<i64>], ambient: usize) -> Checked<Vec<Vec<BigInt>>> {
    let mut rows: Vec<Vec<T>> = vectors
        .iter()
        .inspect(|v| assert_eq!(v.len(), ambient, "vector length mismatch"))
        .filter(|v| v.iter().any(|&x| x != 0))
        .map(|v| v.iter().map(|&x| T::from_i64(x)).collect())
        .collect();
    let mut top = 0;
    for col in 0..ambient {
        if top == rows.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (top..rows.len()).filter(|&i| !rows[i][col].vanishes()).collect();
            if nz.is_empty() {
                break;
            }
            let mut p = nz[0];
            let mut best = rows[p][col].magnitude()?;
            for &i in &nz[1..] {
                let a = rows[i][col].magnitude()?;
                if a < best {
                    best = a;
                    p = i;
                }
            }
            rows.swap(top, p);
            if nz.len() == 1 {
                break;
            }
            let pivot = rows[top].clone();
            for i in top + 1..rows.len() {
                if rows[i][col].vanishes() {
                    continue;
                }
                let q = rows[i][col].div_round(&pivot[col])?;
                for (x, y) in rows[i].iter_mut().zip(&pivot).skip(col) {
                    *x = x.sub_mul(y, &q)?;
                }
            }
        }
        if rows.get(top).map_or(true, |r| r[col].vanishes()) {
            continue;
        }
        if rows[top][col].is_below_zero() {
            for x in rows[top].iter_mut() {
                *x = x.neg()?;
            }
        }
        let pivot = rows[top].clone();
        for i in 0..top {
            let q = rows[i][col].div_floor(&pivot[col]);
            if q.vanishes() {
                continue;
            }
            for (x, y) in rows[i].iter_mut().zip(&pivot).skip(col) {
                *x = x.sub_mul(y, &q)?;
            }
        }
        rows.retain(|r| r.iter().any(|x| !x.vanishes()));
        top += 1;
    }
    rows.truncate(top);
    Ok(rows.into_iter().map(|r| r.iter().map(Scalar::to_bigint).collect()).collect())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.nrows();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.to_rows().iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].vanishes() {
            match (k + 1..n).find(|&i| !a[i][k].vanishes()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return <BigInt as Zero>::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// Rank over the rationals by fraction-free Gaussian elimination; an
/// elimination route independent of the Smith normal form.
pub fn rank_bareiss(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.to_rows().iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].vanishes()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                a[i][j] = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
            }
            a[i][c] = <BigInt as Zero>::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank over `F_p`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    assert!(p >= 2);
    let pm = p as i128;
    let mut a: Vec<Vec<u64>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&v| (v as i128).rem_euclid(pm) as u64).collect())
        .collect();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = mod_inverse(a[r][c], p);
        for i in r + 1..rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = (a[i][c] as u128 * inv as u128 % p as u128) as u64;
            for j in c..cols {
                let sub = (f as u128 * a[r][j] as u128 % p as u128) as u64;
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime in every caller; Fermat
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

/// Rank over the rationals of a dense matrix via its invariant factors.
pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(&m.to_sparse()).len()
}

/// `BigInt` to `u64`, for reporting small invariants.
pub fn small(v: &BigInt) -> Option<u64> {
    if v.is_below_zero() {
        None
    } else {
        v.to_u64()
    }
}
