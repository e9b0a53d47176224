use std::collections::BTreeMap;

use kmss::arith::{is_prime, primitive_root};
use kmss::gcm::{is_finite_type, is_symmetrizable, GeneralizedCartanMatrix, IndexSet, KacMoody};
use kmss::holim::{group_cohomology_weyl, Coefficients};
use kmss::invariants::{invariant_lattice, molien_series, sym_action, weyl_invariants};
use kmss::sseq::{
    admissible_odd_differentials, collapse_certificate, e2_page_over, exponent_bound, poincare_series_bk,
    restriction_analysis, serre_comparison, uct_consistency,
};
use kmss::tits::{tits_acyclicity, total_complex_splits};
use kmss::weyl::{coxeter_order, poincare_series, SeriesMode};

use crate::report::{Certificate, Entry, Report, Series};
use crate::{parse_coefficients, Args, Command, Failure};

const DEFAULT_TOTAL_DEGREE: usize = 12;
const DEFAULT_POLY_DEGREE: usize = 6;
const DEFAULT_LENGTH: usize = 6;
const DEFAULT_TITS_LENGTH: usize = 4;
const DEFAULT_SERRE_DEGREE: usize = 8;

fn subset_names(subsets: &[IndexSet]) -> Vec<String> {
    subsets.iter().map(IndexSet::to_string).collect()
}

fn require_prime(args: &Args) -> Result<u64, Failure> {
    let q = args
        .prime
        .ok_or_else(|| Failure::input("MissingPrime", format!("{} needs --prime", args.command.name())))?;
    if !is_prime(q) {
        return Err(kmss::Error::NotPrime { value: q }.into());
    }
    Ok(q)
}

pub fn dispatch(args: &Args, rows: Vec<Vec<i64>>) -> Result<Report, Failure> {
    let mut report = Report::new(&args.command.name(), rows.clone());
    let cartan = GeneralizedCartanMatrix::validate(&rows)?;
    if cartan.size() > args.max_rank {
        return Err(Failure {
            code: 2,
            name: "RankCap".into(),
            detail: format!("matrix size {} exceeds --max-rank {}", cartan.size(), args.max_rank),
        });
    }
    let km = KacMoody::new(cartan);
    report.prime = args.prime;
    match args.command {
        Command::Validate => validate(&km, &mut report),
        Command::Poset => poset(args, &km, &mut report)?,
        Command::Weyl => weyl(args, &km, &mut report)?,
        Command::Invariants => invariants(args, &km, &mut report)?,
        Command::E2 => e2(args, &km, &mut report)?,
        Command::Collapse => collapse(args, &km, &mut report)?,
        Command::Poincare => poincare(args, &km, &mut report)?,
        Command::Arith => arith(args, &km, &mut report)?,
        Command::SerreCompare => serre(args, &km, &mut report)?,
        Command::GroupCohomology => group_cohomology(args, &km, &mut report)?,
        Command::TitsCheck => tits(args, &km, &mut report)?,
    }
    Ok(report)
}

fn validate(km: &KacMoody, report: &mut Report) {
    let a = km.cartan();
    report.verdict("generalized-cartan", true, format!("size {}", a.size()));
    let sym = is_symmetrizable(a);
    let witness = sym
        .witness
        .as_ref()
        .map(|w| w.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .unwrap_or_default();
    report.verdict("symmetrizable", sym.symmetrizable, witness);
    report.verdict("finite-type", is_finite_type(a, a.full_set()), "");
    report.detail("rank", a.rank());
    let mut orders = BTreeMap::new();
    for i in 0..a.size() {
        for j in i + 1..a.size() {
            orders.insert(format!("{},{}", i + 1, j + 1), coxeter_order(a, i, j).to_string());
        }
    }
    report.detail("coxeter_orders", orders);
}

fn poset(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let p = km.poset();
    report.detail("subsets", subset_names(p.subsets()));
    report.detail("maximal", subset_names(&p.maximal()));
    report.detail("column_bound", p.column_bound());
    report.detail("terminal_object", p.has_terminal_object());
    report.detail("torsion_primes", km.torsion_primes(args.cap)?);
    let chains = (0..=p.column_bound()).map(|d| p.chains(d).len());
    report.series.push(Series::counts("chains", chains));
    Ok(())
}

fn weyl(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let l = args.max_length.unwrap_or(DEFAULT_LENGTH);
    report.truncations.insert("max_length".into(), l);
    let real = km.realization();
    let full = km.cartan().full_set();
    report.series.push(Series::counts("W", poincare_series(real, full, l, SeriesMode::Group, args.cap)?));
    for &j in km.poset().subsets().iter().filter(|j| !j.is_empty()) {
        let counts = poincare_series(real, j, l, SeriesMode::Cosets, args.cap)?;
        report.series.push(Series::counts(format!("W^{j}"), counts));
    }
    report.detail("finite_type", km.is_finite_type());
    Ok(())
}

fn invariants(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let top = args.max_degree.unwrap_or(DEFAULT_POLY_DEGREE);
    report.truncations.insert("max_degree".into(), top);
    let real = km.realization();
    let mut mismatches = Vec::new();
    for &j in km.poset().subsets() {
        let ranks = (0..=top).map(|m| Ok(invariant_lattice(real, j, m)?.rank())).collect::<Result<Vec<_>, Failure>>()?;
        let molien = molien_series(real, j, top, args.cap)?;
        for (m, (r, d)) in ranks.iter().zip(&molien).enumerate() {
            if d.numer() != &(*r as i64).into() || !d.is_integer() {
                mismatches.push(format!("J={j} m={m}"));
            }
        }
        report.series.push(Series::counts(format!("invariants {j}"), ranks));
    }
    let weyl = (0..=top).map(|m| Ok(weyl_invariants(real, m)?.rank())).collect::<Result<Vec<_>, Failure>>()?;
    report.series.push(Series::counts("invariants W", weyl));
    report.verdict("molien", mismatches.is_empty(), mismatches.join(" "));
    Ok(())
}

fn e2(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let coeffs = match &args.coefficients {
        Some(text) => parse_coefficients(text, args.prime)?,
        None => Coefficients::LocalAt(require_prime(args)?),
    };
    if report.prime.is_none() {
        report.prime = coeffs.prime();
    }
    let top = args.max_degree.unwrap_or(DEFAULT_TOTAL_DEGREE);
    report.truncations.insert("max_degree".into(), top);
    let page = e2_page_over(km, coeffs, top, args.cap)?;
    report.entries = page.entries().map(|(i, j, h)| Entry::new(i, j, h)).collect();
    report.detail("coefficients", coeffs.to_string());
    report.verdict("concentrated-in-column-zero", page.concentrated_in_column_zero(), "");
    Ok(())
}

fn collapse(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let q = require_prime(args)?;
    let cert = collapse_certificate(km, q, args.samples, args.cap)?;
    report.truncations.insert("samples".into(), args.samples);
    report.detail("primitive_root", primitive_root(q)?);
    report.certificate = Some(Certificate::from(&cert));
    Ok(())
}

fn poincare(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let q = require_prime(args)?;
    let top = args.max_degree.unwrap_or(DEFAULT_TOTAL_DEGREE);
    report.truncations.insert("max_degree".into(), top);
    let series = poincare_series_bk(km, q, top, args.cap)?;
    report.series.push(Series::cohomology(format!("H*(BK; Z_({q}))"), &series));
    let cert = collapse_certificate(km, q, args.samples, args.cap)?;
    report.certificate = Some(Certificate::from(&cert));
    let uct = uct_consistency(km, q, top, args.cap)?;
    let bad: Vec<String> = uct
        .degrees
        .iter()
        .filter(|d| d.field_dimension != d.predicted)
        .map(|d| format!("k={} field={} predicted={}", d.degree, d.field_dimension, d.predicted))
        .collect();
    report.verdict("universal-coefficients", uct.consistent, bad.join("; "));
    let restriction = restriction_analysis(km, q, top, args.cap)?;
    report.verdict(
        "restriction-to-invariants",
        restriction.matches,
        format!("nilpotency bound {}", restriction.nilpotency_bound),
    );
    Ok(())
}

fn arith(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let q = require_prime(args)?;
    let torsion = km.torsion_primes(args.cap)?;
    let column_bound = km.poset().column_bound();
    let admissible = admissible_odd_differentials(q, column_bound);
    report.truncations.insert("samples".into(), args.samples);
    report.detail("primitive_root", primitive_root(q)?);
    report.detail("torsion_primes", &torsion);
    report.detail("column_bound", column_bound);
    report.detail("admissible_differentials", admissible.iter().map(|r| format!("d{}", 2 * r - 1)).collect::<Vec<_>>());
    let mut bounds = BTreeMap::new();
    for &r in &admissible {
        let b = exponent_bound(&torsion, q, r, args.samples);
        let witnesses: Vec<String> = b.witnesses.iter().map(|(p, v)| format!("{p}:{v}")).collect();
        bounds.insert(format!("d{}", 2 * r - 1), format!("{q}^{} from {}", b.exponent, witnesses.join(" ")));
    }
    report.detail("exponent_bounds", bounds);
    report.verdict("good-prime", !torsion.contains(&q), "");
    Ok(())
}

fn serre(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let q = require_prime(args)?;
    let top = args.max_degree.unwrap_or(DEFAULT_SERRE_DEGREE);
    report.truncations.insert("max_degree".into(), top);
    report.truncations.insert("max_column".into(), args.max_column);
    let serre = serre_comparison(km, q, args.max_column, top, args.cap)?;
    report.entries = serre.cells.iter().map(|c| Entry::new(c.i, c.j, &c.limit)).collect();
    let bad: Vec<String> = serre.cells.iter().filter(|c| c.limit != c.group).map(|c| format!("({},{})", c.i, c.j)).collect();
    report.verdict("limits-equal-group-cohomology", serre.all_equal, bad.join(" "));
    Ok(())
}

fn group_cohomology(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let q = require_prime(args)?;
    report.truncations.insert("max_column".into(), args.max_column);
    report.truncations.insert("sym_degree".into(), args.sym_degree);
    let generators = (0..km.size())
        .map(|i| sym_action(km.realization().weight_reflection(i), args.sym_degree))
        .collect::<kmss::Result<Vec<_>>>()?;
    let h = group_cohomology_weyl(km, &generators, q, args.max_column, args.cap)?;
    report.series.push(Series::cohomology(format!("H*(W; Sym^{})", args.sym_degree), &h.degrees));
    Ok(())
}

fn tits(args: &Args, km: &KacMoody, report: &mut Report) -> Result<(), Failure> {
    let k_max = args.max_length.unwrap_or(DEFAULT_TITS_LENGTH);
    let coeffs = match &args.coefficients {
        Some(text) => parse_coefficients(text, args.prime)?,
        None => Coefficients::Integer,
    };
    report.truncations.insert("max_length".into(), k_max);
    report.detail("coefficients", coeffs.to_string());
    let tits = tits_acyclicity(km, k_max, coeffs)?;
    for v in &tits.verdicts {
        let detail = if v.passed() {
            format!("euler {}", v.euler_characteristic)
        } else {
            format!("euler {} violations in degrees {:?}", v.euler_characteristic, v.violations)
        };
        report.verdict(format!("length {}", v.length), v.passed(), detail);
    }
    report.verdict("total-complex-splits", total_complex_splits(km, k_max)?, "");
    Ok(())
}
