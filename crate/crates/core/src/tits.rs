//! Acyclicity of the spectral sequence of the Tits building, checked one
//! length `k` at a time on the functor of length-`k` minimal coset
//! representatives.

use std::collections::HashMap;

use crate::error::Result;
use crate::gcm::{IndexSet, KacMoody};
use crate::holim::{build_complex, cohomology, CochainComplex, Coefficients, CohomologyResult, FunctorPresentation};
use crate::linalg::IntMatrix;
use crate::weyl::{min_coset_reps, WeylElement};

/// `J -> Z[length-k minimal representatives of W / W_J]` on the spherical
/// poset. For `J ⊆ L` every representative for `L` is one for `J`, which
/// gives the 0/1 structure maps.
#[derive(Clone, Debug)]
pub struct CosetFunctor {
    length: usize,
    subsets: Vec<IndexSet>,
    reps: Vec<Vec<WeylElement>>,
    functor: FunctorPresentation,
}

impl CosetFunctor {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn subsets(&self) -> &[IndexSet] {
        &self.subsets
    }

    /// Basis of the value at the `index`-th spherical subset.
    pub fn reps(&self, index: usize) -> &[WeylElement] {
        &self.reps[index]
    }

    pub fn functor(&self) -> &FunctorPresentation {
        &self.functor
    }
}

fn inclusion(inner: &[WeylElement], outer: &[WeylElement]) -> IntMatrix {
    let position: HashMap<&[usize], usize> = outer.iter().enumerate().map(|(k, w)| (w.word(), k)).collect();
    let mut m = IntMatrix::zeros(outer.len(), inner.len());
    for (col, w) in inner.iter().enumerate() {
        let row = *position.get(w.word()).expect("representative for a larger subset is one for a smaller subset");
        m[(row, col)] = 1;
    }
    m
}

fn functor_from_reps(km: &KacMoody, reps: &[Vec<WeylElement>]) -> Result<FunctorPresentation> {
    let poset = km.poset().poset();
    let maps = poset.comparable_pairs().into_iter().map(|(a, b)| ((a, b), inclusion(&reps[b], &reps[a])));
    FunctorPresentation::new(poset.clone(), reps.iter().map(Vec::len).collect(), maps)
}

pub fn coset_functor(km: &KacMoody, k: usize) -> Result<CosetFunctor> {
    let subsets = km.poset().subsets().to_vec();
    let reps = subsets
        .iter()
        .map(|&j| Ok(min_coset_reps(km.realization(), j, k)?.of_length(k).to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let functor = functor_from_reps(km, &reps)?;
    Ok(CosetFunctor { length: k, subsets, reps, functor })
}

/// Outcome for one length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TitsVerdict {
    pub length: usize,
    pub euler_characteristic: i64,
    pub cohomology: CohomologyResult,
    /// Degrees where the cohomology differs from the expected answer.
    pub violations: Vec<usize>,
}

impl TitsVerdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TitsReport {
    pub coefficients: Coefficients,
    pub verdicts: Vec<TitsVerdict>,
}

impl TitsReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(TitsVerdict::passed)
    }
}

/// Expected: rank one in degree 0 for `k = 0`, nothing otherwise.
fn check_length(k: usize, complex: &CochainComplex, coefficients: Coefficients) -> Result<TitsVerdict> {
    let euler = complex.euler_characteristic();
    let expected_euler = i64::from(k == 0);
    let h = cohomology(complex, coefficients)?;
    let mut violations: Vec<usize> = h
        .degrees
        .iter()
        .enumerate()
        .filter(|(i, d)| {
            let expected_rank = usize::from(k == 0 && *i == 0);
            d.free_rank != expected_rank || !d.torsion.is_empty()
        })
        .map(|(i, _)| i)
        .collect();
    if euler != expected_euler && violations.is_empty() {
        violations.push(0);
    }
    Ok(TitsVerdict { length: k, euler_characteristic: euler, cohomology: h, violations })
}

pub fn tits_acyclicity(km: &KacMoody, k_max: usize, coefficients: Coefficients) -> Result<TitsReport> {
    let verdicts = (0..=k_max)
        .map(|k| {
            let complex = build_complex(coset_functor(km, k)?.functor())?;
            check_length(k, &complex, coefficients)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TitsReport { coefficients, verdicts })
}

/// Builds the functor on all representatives of length at most `k_max` and
/// checks that no differential entry connects different lengths.
pub fn total_complex_splits(km: &KacMoody, k_max: usize) -> Result<bool> {
    let subsets = km.poset().subsets();
    let reps = subsets
        .iter()
        .map(|&j| {
            let table = min_coset_reps(km.realization(), j, k_max)?;
            Ok((0..=k_max).flat_map(|k| table.of_length(k).to_vec()).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let complex = build_complex(&functor_from_reps(km, &reps)?)?;
    let length_of = |degree: usize, index: usize| {
        let (chain, basis) = complex.terms()[degree].coordinate(index);
        reps[chain[0]][basis].length()
    };
    for degree in 0..complex.len().saturating_sub(1) {
        let d = complex.differential(degree);
        for (row, entries) in d.rows().iter().enumerate() {
            if entries.iter().any(|&(col, _)| length_of(degree + 1, row) != length_of(degree, col)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
