//! Helpers shared by the integration tests: fixtures, random functors and
//! oracles written without the library's own routines.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use kmss::gcm::KacMoody;
use kmss::holim::FunctorPresentation;
use kmss::linalg::{IntMatrix, Lattice};
use kmss::poset::FinitePoset;
use rand::Rng;

pub fn km(rows: &[&[i64]]) -> KacMoody {
    KacMoody::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub const AFFINE: &[&[i64]] = &[&[2, -2], &[-2, 2]];
/// Spherical poset: empty set, singletons and `{1,3}`.
pub const RANK3: &[&[i64]] = &[&[2, -2, 0], &[-2, 2, -2], &[0, -2, 2]];
pub const HYPERBOLIC: &[&[i64]] = &[&[2, -1, -2], &[-1, 2, -2], &[-2, -2, 2]];
pub const AFFINE_A2: &[&[i64]] = &[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]];

/// Finite types with their Weyl group orders.
pub fn finite_types() -> Vec<(&'static str, Vec<Vec<i64>>, usize)> {
    vec![
        ("A1", vec![vec![2]], 2),
        ("A1xA1", vec![vec![2, 0], vec![0, 2]], 4),
        ("A2", vec![vec![2, -1], vec![-1, 2]], 6),
        ("B2", vec![vec![2, -2], vec![-1, 2]], 8),
        ("G2", vec![vec![2, -3], vec![-1, 2]], 12),
        ("A3", vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], 24),
        ("B3", vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]], 48),
    ]
}

/// Weight-lattice reflections for an invertible Cartan matrix, where the
/// weight lattice has rank `n`: `r_i(λ) = λ - λ_i α_i` with `α_i` the `i`-th
/// column of `A`.
pub fn reflections_for_invertible(a: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|row| (0..n).map(|col| i64::from(row == col) - if col == i { a[row][i] } else { 0 }).collect())
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Closure of a set of matrices under multiplication, or `None` past `cap`.
pub fn matrix_group(gens: &[Vec<Vec<i64>>], cap: usize) -> Option<Vec<Vec<Vec<i64>>>> {
    let n = gens.first().map_or(0, Vec::len);
    let mut seen = HashSet::from([identity(n)]);
    let mut queue = VecDeque::from([identity(n)]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = mat_mul(&g, s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(h);
            }
        }
    }
    let mut all: Vec<_> = seen.into_iter().collect();
    all.sort();
    Some(all)
}

/// Molien coefficients by power sums: `h_m` of the eigenvalues satisfies
/// `m h_m = Σ_{k=1..m} tr(g^k) h_{m-k}`; averaging over the group gives the
/// invariant dimensions.
pub fn molien_by_traces(group: &[Vec<Vec<i64>>], max_degree: usize) -> Vec<i64> {
    use num_rational::Ratio;
    let mut total = vec![Ratio::from_integer(0i128); max_degree + 1];
    for g in group {
        let mut power = identity(g.len());
        let mut traces = vec![0i128];
        for _ in 1..=max_degree {
            power = mat_mul(&power, g);
            traces.push((0..g.len()).map(|i| power[i][i] as i128).sum());
        }
        let mut h = vec![Ratio::from_integer(1i128)];
        for m in 1..=max_degree {
            let s: Ratio<i128> = (1..=m).map(|k| h[m - k] * Ratio::from_integer(traces[k])).sum();
            h.push(s / Ratio::from_integer(m as i128));
        }
        for (t, v) in total.iter_mut().zip(h) {
            *t += v;
        }
    }
    total
        .into_iter()
        .map(|x| {
            let d = x / Ratio::from_integer(group.len() as i128);
            assert!(d.is_integer(), "non-integral Molien coefficient");
            d.to_integer() as i64
        })
        .collect()
}

/// A random poset: distinct random subsets of a small ground set under
/// inclusion.
pub fn random_poset(rng: &mut impl Rng) -> FinitePoset {
    let ground = rng.gen_range(2..=4);
    let count = rng.gen_range(1..=7);
    let mut sets: Vec<u32> = (0..count).map(|_| rng.gen_range(0..(1u32 << ground))).collect();
    sets.sort_unstable();
    sets.dedup();
    FinitePoset::from_subsets(&sets)
}

fn random_vectors(rng: &mut impl Rng, count: usize, dim: usize) -> Vec<Vec<i64>> {
    (0..count).map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect()).collect()
}

/// Three families of functors:
/// 0. `F(J)` spanned by generators attached to objects above `J`, with
///    inclusions;
/// 1. `F(J)` spanned by generators attached to objects below `J`, with
///    transposed inclusions (not injective in general);
/// 2. rank-one values with scalar maps `c_b / c_a` for a divisibility chain.
pub fn random_functor(rng: &mut impl Rng) -> FunctorPresentation {
    let poset = random_poset(rng);
    let n = poset.len();
    match rng.gen_range(0..3) {
        0 | 1 => {
            let dim = rng.gen_range(1..=3);
            let gens = random_vectors(rng, n, dim);
            let up = rng.gen_bool(0.5);
            let lattices: Vec<Lattice> = (0..n)
                .map(|j| {
                    let members: Vec<Vec<i64>> = (0..n)
                        .filter(|&m| m == j || if up { poset.less(j, m) } else { poset.less(m, j) })
                        .map(|m| gens[m].clone())
                        .collect();
                    Lattice::span(dim, &members).unwrap()
                })
                .collect();
            let mut maps = Vec::new();
            for (a, b) in poset.comparable_pairs() {
                let m = if up {
                    lattices[b].inclusion_into(&lattices[a]).unwrap()
                } else {
                    lattices[a].inclusion_into(&lattices[b]).unwrap().transpose()
                };
                maps.push(((a, b), m));
            }
            let ranks = lattices.iter().map(Lattice::rank).collect();
            FunctorPresentation::new(poset, ranks, maps).unwrap()
        }
        _ => {
            // c_J = product of primes attached to the elements below or at J
            let primes = [1i64, 2, 3];
            let weight: Vec<i64> = (0..n).map(|_| primes[rng.gen_range(0..3)]).collect();
            let c: Vec<i64> =
                (0..n).map(|j| (0..n).filter(|&m| m == j || poset.less(m, j)).map(|m| weight[m]).product()).collect();
            let maps: Vec<_> = poset
                .comparable_pairs()
                .into_iter()
                .map(|(a, b)| ((a, b), IntMatrix::from_rows(&[[c[b] / c[a]]])))
                .collect();
            FunctorPresentation::new(poset, vec![1; n], maps).unwrap()
        }
    }
}

/// `lim^0` as compatible families: kernel of `x ↦ (x_a - F(a<b) x_b)` over
/// covering pairs only.
pub fn equalizer(f: &FunctorPresentation) -> Lattice {
    let n = f.poset().len();
    let mut offsets = vec![0usize];
    for k in 0..n {
        offsets.push(offsets[k] + f.rank(k));
    }
    let total = offsets[n];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (a, b) in f.poset().covering_pairs() {
        let map = f.map(a, b).unwrap();
        for r in 0..f.rank(a) {
            let mut row = vec![0i64; total];
            row[offsets[a] + r] = 1;
            for c in 0..f.rank(b) {
                row[offsets[b] + c] -= map[(r, c)];
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Lattice::full(total);
    }
    Lattice::kernel(&IntMatrix::from_rows(&rows)).unwrap()
}

/// Rank of an integer matrix by Gaussian elimination over the rationals.
pub fn rational_rank(m: &IntMatrix) -> usize {
    use num_rational::BigRational;
    use num_traits::Zero;
    let mut a: Vec<Vec<BigRational>> =
        (0..m.nrows()).map(|i| m.row(i).iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    let mut rank = 0;
    for col in 0..m.ncols() {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[rank][col];
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `F_p` by elimination on residues.
pub fn rank_mod(m: &IntMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.nrows()).map(|i| m.row(i).iter().map(|v| v.rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for col in 0..m.ncols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][col] % p == 1).unwrap();
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col] * inv % p;
                for c in 0..a[r].len() {
                    a[r][c] = (a[r][c] - f * a[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `v_q(n)` for positive `n`.
pub fn valuation_u128(mut n: u128, q: u128) -> u32 {
    let mut e = 0;
    while n % q == 0 {
        n /= q;
        e += 1;
    }
    e
}

pub fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while out.len() < count {
        if (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Count of elements per length in a finite group, from words in the
/// generators (breadth-first over matrices).
pub fn length_profile(gens: &[Vec<Vec<i64>>]) -> Vec<usize> {
    let n = gens[0].len();
    let mut dist: HashMap<Vec<Vec<i64>>, usize> = HashMap::from([(identity(n), 0)]);
    let mut queue = VecDeque::from([identity(n)]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        for s in gens {
            let h = mat_mul(&g, s);
            if !dist.contains_key(&h) {
                dist.insert(h.clone(), d + 1);
                queue.push_back(h);
            }
        }
    }
    let max = dist.values().copied().max().unwrap_or(0);
    let mut counts = vec![0; max + 1];
    for d in dist.values() {
        counts[*d] += 1;
    }
    counts
}
