//! Higher derived limits of contravariant functors on finite posets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{factorize_big, is_prime};
use crate::error::{Error, Result};
use crate::gcm::{IndexSet, KacMoody};
use crate::invariants::{fixed_lattice, invariant_lattice};
use crate::linalg::{invariant_factors, valuation, IntMatrix, Lattice, SparseMatrix};
use crate::poset::FinitePoset;
use crate::weyl::{coxeter_order, CoxeterOrder};

/// A contravariant functor from a finite poset to free abelian groups of
/// finite rank. For `a < b` the structure map `F(b) -> F(a)` is a
/// `rank(a) x rank(b)` integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorPresentation {
    poset: FinitePoset,
    ranks: Vec<usize>,
    maps: HashMap<(usize, usize), IntMatrix>,
}

impl FunctorPresentation {
    /// Accepts maps on any set of comparable pairs that includes every
    /// covering pair; the rest are filled in by composition. Functoriality is
    /// then checked on every triple.
    pub fn new(
        poset: FinitePoset,
        ranks: Vec<usize>,
        given: impl IntoIterator<Item = ((usize, usize), IntMatrix)>,
    ) -> Result<Self> {
        if ranks.len() != poset.len() {
            return Err(Error::InvalidFunctor(format!("{} ranks for {} objects", ranks.len(), poset.len())));
        }
        let mut maps = HashMap::new();
        for ((a, b), m) in given {
            if a >= poset.len() || b >= poset.len() || !poset.less(a, b) {
                return Err(Error::InvalidFunctor(format!("map given for non-relation {a} -> {b}")));
            }
            if (m.nrows(), m.ncols()) != (ranks[a], ranks[b]) {
                return Err(Error::InvalidFunctor(format!(
                    "map {b} -> {a} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    ranks[a],
                    ranks[b]
                )));
            }
            maps.insert((a, b), m);
        }
        for &(a, b) in &poset.covering_pairs() {
            if !maps.contains_key(&(a, b)) {
                return Err(Error::InvalidFunctor(format!("no map for the covering relation {a} < {b}")));
            }
        }
        // fill by increasing chain distance so the factors already exist
        let mut pending: Vec<(usize, usize)> =
            poset.comparable_pairs().into_iter().filter(|p| !maps.contains_key(p)).collect();
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&(a, b)| {
                let mid = (0..poset.len())
                    .find(|&c| poset.less(a, c) && poset.less(c, b) && maps.contains_key(&(a, c)) && maps.contains_key(&(c, b)));
                match mid {
                    Some(c) => match maps[&(a, c)].checked_mul(&maps[&(c, b)]) {
                        Ok(m) => {
                            maps.insert((a, b), m);
                            false
                        }
                        Err(_) => true,
                    },
                    None => true,
                }
            });
            if pending.len() == before {
                return Err(Error::Overflow);
            }
        }
        let functor = FunctorPresentation { poset, ranks, maps };
        functor.check_functoriality()?;
        Ok(functor)
    }

    fn check_functoriality(&self) -> Result<()> {
        for chain in self.poset.chains(2) {
            let (a, b, c) = (chain[0], chain[1], chain[2]);
            let composite = self.maps[&(a, b)].checked_mul(&self.maps[&(b, c)])?;
            if composite != self.maps[&(a, c)] {
                return Err(Error::FunctorialityViolation { lower: a, middle: b, upper: c });
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn rank(&self, object: usize) -> usize {
        self.ranks[object]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Structure map `F(b) -> F(a)` for `a < b`, or the identity for `a = b`.
    pub fn map(&self, a: usize, b: usize) -> Option<IntMatrix> {
        if a == b {
            return Some(IntMatrix::identity(self.ranks[a]));
        }
        self.maps.get(&(a, b)).cloned()
    }
}

/// Functor of nested sublattices of one module, with inclusion maps; object
/// `k` of the poset goes to `lattices[k]`.
fn lattice_functor(poset: &FinitePoset, lattices: &[Lattice]) -> Result<FunctorPresentation> {
    let ranks = lattices.iter().map(Lattice::rank).collect();
    let mut maps = Vec::new();
    for (a, b) in poset.comparable_pairs() {
        let m = lattices[b]
            .inclusion_into(&lattices[a])
            .ok_or_else(|| Error::InvalidFunctor(format!("lattice {b} is not inside lattice {a}")))?;
        maps.push(((a, b), m));
    }
    FunctorPresentation::new(poset.clone(), ranks, maps)
}

/// One term of the nerve complex: the chains of a given degree and where each
/// chain's block starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    chains: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    rank: usize,
}

impl Term {
    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Which chain and which basis vector of `F(J_0)` a coordinate stands for.
    pub fn coordinate(&self, index: usize) -> (&[usize], usize) {
        let k = self.offsets.partition_point(|&o| o <= index) - 1;
        (&self.chains[k], index - self.offsets[k])
    }
}

/// The normalized nerve cochain complex `C^i = ⊕_{J_0 < .. < J_i} F(J_0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    terms: Vec<Term>,
    differentials: Vec<SparseMatrix>,
}

impl CochainComplex {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dimension(&self, degree: usize) -> usize {
        self.terms.get(degree).map_or(0, Term::rank)
    }

    /// `d_i : C^i -> C^{i+1}`; zero map past the top.
    pub fn differential(&self, degree: usize) -> SparseMatrix {
        self.differentials
            .get(degree)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dimension(degree + 1), self.dimension(degree)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.terms.iter().enumerate().map(|(i, t)| if i % 2 == 0 { t.rank as i64 } else { -(t.rank as i64) }).sum()
    }

    /// Invariant factors of every differential.
    pub fn elementary_divisors(&self) -> Vec<Vec<BigInt>> {
        self.differentials.iter().map(invariant_factors).collect()
    }
}

pub fn build_complex(functor: &FunctorPresentation) -> Result<CochainComplex> {
    let poset = functor.poset();
    let mut terms = Vec::new();
    for degree in 0..=poset.height() {
        let chains = poset.chains(degree).to_vec();
        if chains.is_empty() {
            break;
        }
        let mut offsets = Vec::with_capacity(chains.len());
        let mut rank = 0;
        for c in &chains {
            offsets.push(rank);
            rank += functor.rank(c[0]);
        }
        terms.push(Term { chains, offsets, rank });
    }
    let mut differentials = Vec::new();
    for degree in 0..terms.len().saturating_sub(1) {
        let (source, target) = (&terms[degree], &terms[degree + 1]);
        let index = poset.chain_index(degree);
        let mut d = SparseMatrix::zeros(target.rank, source.rank);
        for (row_chain, &row0) in target.chains.iter().zip(&target.offsets) {
            for t in 0..row_chain.len() {
                let mut face = row_chain.clone();
                face.remove(t);
                let col0 = source.offsets[index[face.as_slice()]];
                let sign = if t % 2 == 0 { 1 } else { -1 };
                let block = if t == 0 {
                    functor.map(row_chain[0], row_chain[1]).expect("comparable")
                } else {
                    IntMatrix::identity(functor.rank(row_chain[0]))
                };
                d.add_block(row0, col0, &block, sign)?;
            }
        }
        differentials.push(d);
    }
    for degree in 1..differentials.len() {
        if !differentials[degree].checked_mul(&differentials[degree - 1])?.is_zero() {
            return Err(Error::NonzeroSquare { degree });
        }
    }
    Ok(CochainComplex { terms, differentials })
}

/// Coefficient ring for cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integer,
    Rational,
    ModPrime(u64),
    /// Integers localized at a prime.
    LocalAt(u64),
}

impl Coefficients {
    pub fn prime(self) -> Option<u64> {
        match self {
            Coefficients::ModPrime(q) | Coefficients::LocalAt(q) => Some(q),
            _ => None,
        }
    }

    fn validate(self) -> Result<Self> {
        match self.prime() {
            Some(q) if !is_prime(q) => Err(Error::NotPrime { value: q }),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integer => f.write_str("integer"),
            Coefficients::Rational => f.write_str("rational"),
            Coefficients::ModPrime(q) => write!(f, "mod-{q}"),
            Coefficients::LocalAt(q) => write!(f, "local-{q}"),
        }
    }
}

/// Elementary divisor `prime^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(self) -> BigInt {
        BigInt::from(self.prime).pow(self.exponent)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exponent)
    }
}

/// One cohomology group: free rank plus torsion summands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DegreeCohomology {
    pub free_rank: usize,
    /// Sorted ascending.
    pub torsion: Vec<PrimePower>,
}

impl DegreeCohomology {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub coefficients: Coefficients,
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyResult {
    pub fn zero(coefficients: Coefficients, len: usize) -> Self {
        CohomologyResult { coefficients, degrees: vec![DegreeCohomology::default(); len] }
    }

    /// Degree `i`; zero beyond the computed range.
    pub fn degree(&self, i: usize) -> DegreeCohomology {
        self.degrees.get(i).cloned().unwrap_or_default()
    }

    /// Pads or truncates to degrees `0..len`.
    pub fn resized(mut self, len: usize) -> Self {
        self.degrees.resize(len, DegreeCohomology::default());
        self
    }

    pub fn vanishes_above_zero(&self) -> bool {
        self.degrees.iter().skip(1).all(DegreeCohomology::is_zero)
    }
}

pub fn cohomology(complex: &CochainComplex, coefficients: Coefficients) -> Result<CohomologyResult> {
    let coefficients = coefficients.validate()?;
    let dims: Vec<usize> = (0..complex.len()).map(|i| complex.dimension(i)).collect();
    Ok(cohomology_from_divisors(&dims, &complex.elementary_divisors(), coefficients))
}

/// Cohomology of a complex with term ranks `dims` whose `i`-th differential
/// has the invariant factors `divisors[i]`.
pub fn cohomology_from_divisors(dims: &[usize], divisors: &[Vec<BigInt>], coefficients: Coefficients) -> CohomologyResult {
    let empty = Vec::new();
    let factors = |i: Option<usize>| i.and_then(|i| divisors.get(i)).unwrap_or(&empty);
    let rank_of = |fs: &Vec<BigInt>| match coefficients {
        Coefficients::ModPrime(q) => fs.iter().filter(|d| valuation(d, q) == 0).count(),
        _ => fs.len(),
    };
    let degrees = dims
        .iter()
        .enumerate()
        .map(|(i, &dim)| {
            let outgoing = factors(Some(i));
            let incoming = factors(i.checked_sub(1));
            let free_rank = dim - rank_of(outgoing) - rank_of(incoming);
            let mut torsion: Vec<PrimePower> = match coefficients {
                Coefficients::Integer => incoming
                    .iter()
                    .filter(|d| !d.is_one())
                    .flat_map(factorize_big)
                    .map(|(prime, exponent)| PrimePower { prime, exponent })
                    .collect(),
                Coefficients::LocalAt(q) => incoming
                    .iter()
                    .map(|d| valuation(d, q))
                    .filter(|&e| e > 0)
                    .map(|exponent| PrimePower { prime: q, exponent })
                    .collect(),
                Coefficients::Rational | Coefficients::ModPrime(_) => Vec::new(),
            };
            torsion.sort();
            DegreeCohomology { free_rank, torsion }
        })
        .collect();
    CohomologyResult { coefficients, degrees }
}

/// Rejects composite `q` and primes dividing the order of a finite parabolic.
pub fn check_prime(km: &KacMoody, q: u64, cap: usize) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime { value: q });
    }
    if km.torsion_primes(cap)?.contains(&q) {
        return Err(Error::BadPrime { prime: q });
    }
    Ok(())
}

/// `J -> invariant lattice of W_J in Sym^m` on the spherical poset.
pub fn invariant_functor(km: &KacMoody, m: usize) -> Result<FunctorPresentation> {
    let lattices = km
        .poset()
        .subsets()
        .iter()
        .map(|&j| invariant_lattice(km.realization(), j, m).map(|l| l.lattice().clone()))
        .collect::<Result<Vec<_>>>()?;
    lattice_functor(km.poset().poset(), &lattices)
}

/// `lim^i` over the spherical poset of the degree-`j` cohomology of the
/// parabolic classifying spaces, modelled by invariant lattices in `Sym^{j/2}`.
/// Degrees run over `0..=c_max`.
pub fn lim_of_invariants_over(km: &KacMoody, j: usize, coefficients: Coefficients, cap: usize) -> Result<CohomologyResult> {
    if let Some(q) = coefficients.prime() {
        check_prime(km, q, cap)?;
    }
    let len = km.poset().column_bound() + 1;
    if j % 2 == 1 {
        return Ok(CohomologyResult::zero(coefficients, len));
    }
    let complex = build_complex(&invariant_functor(km, j / 2)?)?;
    Ok(cohomology(&complex, coefficients)?.resized(len))
}

/// The same over the integers localized at `q`.
pub fn lim_of_invariants(km: &KacMoody, q: u64, j: usize, cap: usize) -> Result<CohomologyResult> {
    lim_of_invariants_over(km, j, Coefficients::LocalAt(q), cap)
}

/// Checks that integer matrices, one per simple reflection, satisfy the
/// Coxeter relations of `W(A)`.
fn check_module(km: &KacMoody, generators: &[IntMatrix]) -> Result<usize> {
    let n = km.size();
    if generators.len() != n {
        return Err(Error::InvalidModule(format!("{} generator matrices for {n} reflections", generators.len())));
    }
    let dim = generators[0].nrows();
    if generators.iter().any(|g| g.nrows() != dim || g.ncols() != dim) {
        return Err(Error::InvalidModule("generator matrices must be square of one size".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if !g.checked_mul(g)?.is_identity() {
            return Err(Error::InvalidModule(format!("generator {} is not an involution", i + 1)));
        }
        for (j, h) in generators.iter().enumerate().skip(i + 1) {
            if let CoxeterOrder::Finite(m) = coxeter_order(km.cartan(), i, j) {
                let gh = g.checked_mul(h)?;
                let mut p = IntMatrix::identity(dim);
                for _ in 0..m {
                    p = p.checked_mul(&gh)?;
                }
                if !p.is_identity() {
                    return Err(Error::InvalidModule(format!("braid relation fails for {} and {}", i + 1, j + 1)));
                }
            }
        }
    }
    Ok(dim)
}

/// `H^i(W(A); M)` for `i <= i_max` through `lim^i` of the fixed lattices
/// `M^{W_J}` over the spherical poset, over the integers localized at `q`.
pub fn group_cohomology_weyl(
    km: &KacMoody,
    generators: &[IntMatrix],
    q: u64,
    i_max: usize,
    cap: usize,
) -> Result<CohomologyResult> {
    check_prime(km, q, cap)?;
    let dim = check_module(km, generators)?;
    let lattices = km
        .poset()
        .subsets()
        .iter()
        .map(|&j: &IndexSet| {
            let gens: Vec<IntMatrix> = j.iter().map(|i| generators[i].clone()).collect();
            fixed_lattice(&gens, dim)
        })
        .collect::<Result<Vec<_>>>()?;
    let complex = build_complex(&lattice_functor(km.poset().poset(), &lattices)?)?;
    Ok(cohomology(&complex, Coefficients::LocalAt(q))?.resized(i_max + 1))
}

/// Torsion summands grouped by prime, for reporting.
pub fn torsion_by_prime(torsion: &[PrimePower]) -> BTreeMap<u64, Vec<u32>> {
    let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for t in torsion {
        out.entry(t.prime).or_default().push(t.exponent);
    }
    out
}
