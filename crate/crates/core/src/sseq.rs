//! E₂ pages of the Bousfield–Kan spectral sequence over the spherical poset,
//! the arithmetic that kills differentials, collapse certificates and the
//! assembled cohomology.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::{is_prime, primes, valuation_of_power_minus_one};
use crate::error::{Error, Result};
use crate::gcm::KacMoody;
use crate::holim::{
    check_prime, cohomology_from_divisors, group_cohomology_weyl, lim_of_invariants_over, CochainComplex,
    Coefficients, DegreeCohomology,
};
use crate::invariants::{sym_action, weyl_invariants};

/// Default number of auxiliary primes sampled for torsion bounds.
pub const DEFAULT_SAMPLES: usize = 25;

/// `E₂^{i,j}` for `0 <= i <= c_max` and even `0 <= j <= j_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedPage {
    pub coefficients: Coefficients,
    pub column_bound: usize,
    pub max_degree: usize,
    entries: BTreeMap<(usize, usize), DegreeCohomology>,
}

impl BigradedPage {
    /// Entry `(i, j)`; zero off the stored range and for odd `j`.
    pub fn entry(&self, i: usize, j: usize) -> DegreeCohomology {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Stored entries in `(i, j)` order, zero ones included.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &DegreeCohomology)> {
        self.entries.iter().map(|(&(i, j), e)| (i, j, e))
    }

    pub fn concentrated_in_column_zero(&self) -> bool {
        self.entries.iter().all(|(&(i, _), e)| i == 0 || e.is_zero())
    }

    /// Sum of the entries with `i + j = k`.
    pub fn antidiagonal(&self, k: usize) -> DegreeCohomology {
        let mut total = DegreeCohomology::default();
        for i in 0..=self.column_bound.min(k) {
            let e = self.entry(i, k - i);
            total.free_rank += e.free_rank;
            total.torsion.extend(e.torsion);
        }
        total.torsion.sort();
        total
    }
}

pub fn e2_page_over(km: &KacMoody, coefficients: Coefficients, max_degree: usize, cap: usize) -> Result<BigradedPage> {
    let column_bound = km.poset().column_bound();
    let mut entries = BTreeMap::new();
    for j in (0..=max_degree).step_by(2) {
        let column = lim_of_invariants_over(km, j, coefficients, cap)?;
        for i in 0..=column_bound {
            entries.insert((i, j), column.degree(i));
        }
    }
    Ok(BigradedPage { coefficients, column_bound, max_degree, entries })
}

/// The page with coefficients in the integers localized at `q`.
pub fn e2_page(km: &KacMoody, q: u64, max_degree: usize, cap: usize) -> Result<BigradedPage> {
    e2_page_over(km, Coefficients::LocalAt(q), max_degree, cap)
}

/// `r >= 2` with `(q - 1) | (r - 1)` and `2r - 1 <= c_max`; the differential
/// in question is `d_{2r-1}`.
pub fn admissible_odd_differentials(q: u64, column_bound: usize) -> Vec<usize> {
    let step = (q - 1) as usize;
    (2..)
        .take_while(|&r| 2 * r - 1 <= column_bound)
        .filter(|&r| (r - 1) % step == 0)
        .collect()
}

/// Exponent bound `e` with `q^e · d_{2r-1} = 0`, with the sampled evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionBound {
    pub prime: u64,
    pub differential: usize,
    pub exponent: u32,
    /// `(p, v_q(p^{r-1} - 1))` for every sampled `p`.
    pub witnesses: Vec<(u64, u32)>,
}

/// Minimum of `v_q(p^{r-1} - 1)` over the first `samples` primes `p`
/// outside `torsion` and different from `q`. Exponent 0 when `(q - 1)` does
/// not divide `r - 1`.
pub fn exponent_bound(torsion: &BTreeSet<u64>, q: u64, r: usize, samples: usize) -> TorsionBound {
    assert!(r >= 2 && samples >= 1);
    let mut bound = TorsionBound { prime: q, differential: r, exponent: 0, witnesses: Vec::new() };
    if (r as u64 - 1) % (q - 1) != 0 {
        return bound;
    }
    bound.witnesses = primes()
        .filter(|p| *p != q && !torsion.contains(p))
        .take(samples)
        .map(|p| (p, valuation_of_power_minus_one(p, r as u32 - 1, q)))
        .collect();
    bound.exponent = bound.witnesses.iter().map(|w| w.1).min().expect("nonempty sample");
    bound
}

pub fn torsion_exponent_bound(km: &KacMoody, q: u64, r: usize, samples: usize, cap: usize) -> Result<TorsionBound> {
    if !is_prime(q) {
        return Err(Error::NotPrime { value: q });
    }
    Ok(exponent_bound(&km.torsion_primes(cap)?, q, r, samples))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollapseReason {
    PaperCriterion,
    WindowEmpty,
    NotCertified,
}

impl fmt::Display for CollapseReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapseReason::PaperCriterion => "PaperCriterion",
            CollapseReason::WindowEmpty => "WindowEmpty",
            CollapseReason::NotCertified => "NotCertified",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseCertificate {
    pub prime: u64,
    pub size: usize,
    pub column_bound: usize,
    pub collapsed: bool,
    pub reason: CollapseReason,
    pub admissible_differentials: Vec<usize>,
    /// Exponent bound per admissible `r`.
    pub torsion_bounds: BTreeMap<usize, u32>,
}

/// Certificate from the raw data: index set size `n`, column bound, prime and
/// the torsion primes of the Weyl group.
pub fn certify(n: usize, column_bound: usize, q: u64, torsion: &BTreeSet<u64>, samples: usize) -> CollapseCertificate {
    let admissible = admissible_odd_differentials(q, column_bound);
    let reason = if torsion.contains(&q) {
        CollapseReason::NotCertified
    } else if 2 * q as usize >= n + 1 {
        CollapseReason::PaperCriterion
    } else if admissible.is_empty() {
        CollapseReason::WindowEmpty
    } else {
        CollapseReason::NotCertified
    };
    let torsion_bounds = admissible.iter().map(|&r| (r, exponent_bound(torsion, q, r, samples).exponent)).collect();
    CollapseCertificate {
        prime: q,
        size: n,
        column_bound,
        collapsed: reason != CollapseReason::NotCertified,
        reason,
        admissible_differentials: admissible,
        torsion_bounds,
    }
}

pub fn collapse_certificate(km: &KacMoody, q: u64, samples: usize, cap: usize) -> Result<CollapseCertificate> {
    if !is_prime(q) {
        return Err(Error::NotPrime { value: q });
    }
    Ok(certify(km.size(), km.poset().column_bound(), q, &km.torsion_primes(cap)?, samples))
}

fn require_collapse(km: &KacMoody, q: u64, cap: usize) -> Result<CollapseCertificate> {
    let cert = collapse_certificate(km, q, DEFAULT_SAMPLES, cap)?;
    if !cert.collapsed {
        return Err(Error::NotCollapsed { prime: q });
    }
    Ok(cert)
}

/// `H^k(BK(A); Z_(q))` for `k <= k_max`, summed along antidiagonals of the
/// E₂ page.
pub fn poincare_series_bk(km: &KacMoody, q: u64, k_max: usize, cap: usize) -> Result<Vec<DegreeCohomology>> {
    require_collapse(km, q, cap)?;
    let page = e2_page(km, q, k_max, cap)?;
    Ok((0..=k_max).map(|k| page.antidiagonal(k)).collect())
}

/// Both universal-coefficient counts of `dim H^k(-; F_q)` in one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UctDegree {
    pub degree: usize,
    /// Computed directly over `F_q`.
    pub field_dimension: usize,
    /// Predicted from the `Z_(q)` data.
    pub predicted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UctReport {
    pub degrees: Vec<UctDegree>,
    pub consistent: bool,
}

/// Prediction `free_k + t_k + t_{k+1}`, where `t_k` counts torsion summands
/// in degree `k`.
fn uct_prediction(local: &[DegreeCohomology], k: usize) -> usize {
    let at = |i: usize| local.get(i).cloned().unwrap_or_default();
    at(k).free_rank + at(k).torsion.len() + at(k + 1).torsion.len()
}

/// Universal-coefficient check on a single complex.
pub fn uct_consistency_complex(complex: &CochainComplex, q: u64) -> UctReport {
    let dims: Vec<usize> = (0..complex.len()).map(|i| complex.dimension(i)).collect();
    let divisors = complex.elementary_divisors();
    let local = cohomology_from_divisors(&dims, &divisors, Coefficients::LocalAt(q)).degrees;
    let field = cohomology_from_divisors(&dims, &divisors, Coefficients::ModPrime(q)).degrees;
    let degrees: Vec<UctDegree> = (0..dims.len())
        .map(|k| UctDegree { degree: k, field_dimension: field[k].free_rank, predicted: uct_prediction(&local, k) })
        .collect();
    let consistent = degrees.iter().all(|d| d.field_dimension == d.predicted);
    UctReport { degrees, consistent }
}

/// Compares antidiagonal dimensions of the `F_q` page with the counts
/// predicted by the `Z_(q)` page, column by column.
pub fn uct_consistency(km: &KacMoody, q: u64, k_max: usize, cap: usize) -> Result<UctReport> {
    require_collapse(km, q, cap)?;
    let local = e2_page(km, q, k_max, cap)?;
    let field = e2_page_over(km, Coefficients::ModPrime(q), k_max, cap)?;
    Ok(compare_pages(&local, &field, k_max))
}

/// Universal-coefficient comparison of two pages from the same integral data.
pub fn compare_pages(local: &BigradedPage, field: &BigradedPage, k_max: usize) -> UctReport {
    let degrees: Vec<UctDegree> = (0..=k_max)
        .map(|k| {
            let mut field_dimension = 0;
            let mut predicted = 0;
            for i in 0..=local.column_bound.min(k) {
                let j = k - i;
                field_dimension += field.entry(i, j).free_rank;
                let column: Vec<DegreeCohomology> = (0..=local.column_bound + 1).map(|t| local.entry(t, j)).collect();
                predicted += uct_prediction(&column, i);
            }
            UctDegree { degree: k, field_dimension, predicted }
        })
        .collect();
    let consistent = degrees.iter().all(|d| d.field_dimension == d.predicted);
    UctReport { degrees, consistent }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RestrictionRow {
    /// Polynomial degree; cohomological degree is `2m`.
    pub m: usize,
    pub column_zero_rank: usize,
    pub weyl_invariant_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionReport {
    pub rows: Vec<RestrictionRow>,
    pub matches: bool,
    /// Products of this many classes from positive columns vanish.
    pub nilpotency_bound: usize,
}

/// Column zero of the page against the Weyl invariants, degree by degree.
pub fn restriction_analysis(km: &KacMoody, q: u64, j_max: usize, cap: usize) -> Result<RestrictionReport> {
    require_collapse(km, q, cap)?;
    let page = e2_page(km, q, j_max, cap)?;
    let rows = (0..=j_max / 2)
        .map(|m| {
            Ok(RestrictionRow {
                m,
                column_zero_rank: page.entry(0, 2 * m).free_rank,
                weyl_invariant_rank: weyl_invariants(km.realization(), m)?.rank(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let matches = rows.iter().all(|r| r.column_zero_rank == r.weyl_invariant_rank)
        && (0..=j_max).step_by(2).all(|j| page.entry(0, j).torsion.is_empty());
    Ok(RestrictionReport { rows, matches, nilpotency_bound: km.size() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreCell {
    pub i: usize,
    pub j: usize,
    pub limit: DegreeCohomology,
    pub group: DegreeCohomology,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreReport {
    pub cells: Vec<SerreCell>,
    pub all_equal: bool,
}

/// `lim^i` of invariants against `H^i(W; Sym^{j/2})` computed from explicit
/// generator matrices.
pub fn serre_comparison(km: &KacMoody, q: u64, i_max: usize, j_max: usize, cap: usize) -> Result<SerreReport> {
    check_prime(km, q, cap)?;
    let mut cells = Vec::new();
    for j in 0..=j_max {
        let limit = lim_of_invariants_over(km, j, Coefficients::LocalAt(q), cap)?.resized(i_max + 1);
        let group = if j % 2 == 1 {
            limit.clone()
        } else {
            let generators = (0..km.size())
                .map(|i| sym_action(km.realization().weight_reflection(i), j / 2))
                .collect::<Result<Vec<_>>>()?;
            group_cohomology_weyl(km, &generators, q, i_max, cap)?
        };
        for i in 0..=i_max {
            cells.push(SerreCell { i, j, limit: limit.degree(i), group: group.degree(i) });
        }
    }
    let all_equal = cells.iter().all(|c| c.limit == c.group);
    Ok(SerreReport { cells, all_equal })
}
