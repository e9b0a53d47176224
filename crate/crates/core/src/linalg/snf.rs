//! Invariant factors of integer matrices.
//!
//! Only the diagonal of the Smith normal form is produced; no transforms are
//! tracked. The matrices met in practice (nerve differentials) are sparse and
//! carry many unit entries, so elimination starts with a sparse phase that
//! pivots on units chosen by Markowitz cost. Whatever survives is densified
//! and diagonalised with Euclidean row and column steps.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::matrix::SparseMatrix;
use super::scalar::{with_fallback, Checked, Scalar};

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r` (all positive), where
/// `r` is the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let diagonal = with_fallback(
        || diagonalize::<i128>(m).map(|d| d.iter().map(Scalar::to_bigint).collect()),
        || diagonalize::<BigInt>(m).expect("bigint elimination cannot overflow"),
    );
    normalize_diagonal(diagonal)
}


/// Turns an arbitrary nonzero diagonal into the divisibility chain.
fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for v in d.iter_mut() {
        *v = v.abs();
    }
    // units commute past everything; only the nontrivial tail needs gcd/lcm
    d.sort();
    let first = d.iter().position(|v| !v.is_one()).unwrap_or(d.len());
    let tail = &mut d[first..];
    for i in 0..tail.len() {
        for j in i + 1..tail.len() {
            let g = tail[i].gcd(&tail[j]);
            if g != tail[i] {
                let l = &tail[i] / &g * &tail[j];
                tail[i] = g;
                tail[j] = l;
            }
        }
    }
    d.sort();
    d
}

fn diagonalize<T: Scalar>(m: &SparseMatrix) -> Checked<Vec<T>> {
    let mut elim = SparseElimination::<T>::new(m);
    let mut diagonal = Vec::new();
    while let Some((r, c)) = elim.unit_pivot() {
        elim.eliminate(r, c)?;
        diagonal.push(T::one());
    }
    let rest = elim.into_dense();
    diagonal.extend(dense_diagonal(rest)?);
    Ok(diagonal)
}

struct SparseElimination<T> {
    rows: Vec<Vec<(usize, T)>>,
    alive: Vec<bool>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl<T: Scalar> SparseElimination<T> {
    fn new(m: &SparseMatrix) -> Self {
        let mut col_rows = vec![BTreeSet::new(); m.ncols()];
        let rows: Vec<Vec<(usize, T)>> = m
            .rows()
            .iter()
            .map(|row| row.iter().map(|&(c, v)| (c, T::from_i64(v))).collect())
            .collect();
        for (i, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_rows[c].insert(i);
            }
        }
        let alive = rows.iter().map(|r| !r.is_empty()).collect();
        SparseElimination { rows, alive, col_rows }
    }

    /// Unit entry with the smallest Markowitz cost `(row nnz - 1)(col nnz - 1)`.
    fn unit_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.alive[r] {
                continue;
            }
            let rn = row.len() - 1;
            for (c, v) in row {
                if !v.is_unit() {
                    continue;
                }
                let cost = rn * (self.col_rows[*c].len() - 1);
                if best.map_or(true, |(b, _, _)| cost < b) {
                    best = Some((cost, r, *c));
                    if cost == 0 {
                        return Some((r, *c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    fn eliminate(&mut self, pr: usize, pc: usize) -> Checked<()> {
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        let pv = pivot_row
            .iter()
            .find(|(c, _)| *c == pc)
            .map(|(_, v)| v.clone())
            .expect("pivot entry present");
        let targets: Vec<usize> = self.col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
        for r in targets {
            let row = std::mem::take(&mut self.rows[r]);
            let a = row
                .iter()
                .find(|(c, _)| *c == pc)
                .map(|(_, v)| v.clone())
                .expect("column index consistent");
            // pv is a unit, so pv^-1 = pv
            let factor = a.mul(&pv)?;
            for (c, _) in &row {
                self.col_rows[*c].remove(&r);
            }
            let merged = axpy(&row, &pivot_row, &factor)?;
            for (c, _) in &merged {
                self.col_rows[*c].insert(r);
            }
            self.alive[r] = !merged.is_empty();
            self.rows[r] = merged;
        }
        for (c, _) in &pivot_row {
            self.col_rows[*c].remove(&pr);
        }
        self.alive[pr] = false;
        Ok(())
    }

    fn into_dense(self) -> Vec<Vec<T>> {
        let live: Vec<&Vec<(usize, T)>> =
            self.rows.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(r, _)| r).collect();
        let cols: Vec<usize> = self
            .col_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, _)| c)
            .collect();
        let mut index = vec![usize::MAX; self.col_rows.len()];
        for (k, &c) in cols.iter().enumerate() {
            index[c] = k;
        }
        live.iter()
            .map(|row| {
                let mut dense = vec![T::zero(); cols.len()];
                for (c, v) in row.iter() {
                    dense[index[*c]] = v.clone();
                }
                dense
            })
            .collect()
    }
}

/// `row - factor * pivot`, both sorted by column.
fn axpy<T: Scalar>(row: &[(usize, T)], pivot: &[(usize, T)], factor: &T) -> Checked<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_pivot {
            out.push((pivot[j].0, T::zero().sub_mul(&pivot[j].1, factor)?));
            j += 1;
        } else {
            let v = row[i].1.sub_mul(&pivot[j].1, factor)?;
            if !v.vanishes() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Euclidean diagonalisation of a dense matrix; returns the nonzero diagonal
/// entries (not yet in divisibility order).
pub(crate) fn dense_diagonal<T: Scalar>(mut a: Vec<Vec<T>>) -> Checked<Vec<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t)? else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut remainder = false;
            for i in t + 1..m {
                if a[i][t].vanishes() {
                    continue;
                }
                let q = a[i][t].div_round(&a[t][t])?;
                for j in t..n {
                    let v = a[i][j].sub_mul(&a[t][j], &q)?;
                    a[i][j] = v;
                }
                remainder |= !a[i][t].vanishes();
            }
            for j in t + 1..n {
                if a[t][j].vanishes() {
                    continue;
                }
                let q = a[t][j].div_round(&a[t][t])?;
                for row in a.iter_mut().skip(t) {
                    let v = row[j].sub_mul(&row[t], &q)?;
                    row[j] = v;
                }
                remainder |= !a[t][j].vanishes();
            }
            if !remainder {
                break;
            }
            // a remainder is strictly smaller than the pivot; promote the smallest
            let mut best: Option<(T, usize, usize)> = None;
            for i in t + 1..m {
                if !a[i][t].vanishes() {
                    let v = a[i][t].magnitude()?;
                    if best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                        best = Some((v, i, t));
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].vanishes() {
                    let v = a[t][j].magnitude()?;
                    if best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                        best = Some((v, t, j));
                    }
                }
            }
            let (_, bi, bj) = best.expect("remainder present");
            if bi != t {
                a.swap(t, bi);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
            }
        }
        out.push(a[t][t].magnitude()?);
    }
    Ok(out)
}

fn min_abs_entry<T: Scalar>(a: &[Vec<T>], t: usize) -> Checked<Option<(usize, usize)>> {
    let mut best: Option<(T, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.vanishes() {
                continue;
            }
            if v.is_unit() {
                return Ok(Some((i, j)));
            }
            let av = v.magnitude()?;
            if best.as_ref().map_or(true, |(b, _, _)| av < *b) {
                best = Some((av, i, j));
            }
        }
    }
    Ok(best.map(|(_, i, j)| (i, j)))
}

/// q-adic valuation of a nonzero integer.
pub fn valuation(v: &BigInt, q: u64) -> u32 {
    assert!(!v.vanishes(), "valuation of zero");
    let q = BigInt::from(q);
    let mut v = v.abs();
    let mut e = 0;
    loop {
        let (d, r) = v.div_rem(&q);
        if !r.vanishes() {
            return e;
        }
        v = d;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn factors(rows: &[&[i64]]) -> Vec<i64> {
        let m = IntMatrix::from_rows(rows);
        invariant_factors(&m.to_sparse())
            .iter()
            .map(|v| i64::try_from(v.clone()).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_matrices_are_normalized() {
        assert_eq!(factors(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 0]]), vec![2, 12]);
    }

    #[test]
    fn classic_example() {
        // SNF diag(2, 6, 12)
        let rows: &[&[i64]] = &[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]];
        assert_eq!(factors(rows), vec![2, 6, 12]);
    }

    #[test]
    fn difference_map_of_pullback() {
        // (a, b1, b2) -> (2 b1 - a, 2 b2 - a)
        let rows: &[&[i64]] = &[&[-1, 2, 0], &[-1, 0, 2]];
        assert_eq!(factors(rows), vec![1, 2]);
    }

    #[test]
    fn zero_and_empty() {
        assert!(factors(&[&[0, 0], &[0, 0]]).is_empty());
        assert!(invariant_factors(&SparseMatrix::zeros(0, 4)).is_empty());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX;
        let rows: &[&[i64]] = &[&[big, big - 1], &[big - 1, big - 2]];
        // det = big(big-2) - (big-1)^2 = -1, so the matrix is unimodular
        assert_eq!(factors(rows), vec![1, 1]);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(24), 3), 1);
        assert_eq!(valuation(&BigInt::from(80), 5), 1);
        assert_eq!(valuation(&BigInt::from(-72), 2), 3);
        assert_eq!(valuation(&BigInt::from(7), 2), 0);
    }
}
