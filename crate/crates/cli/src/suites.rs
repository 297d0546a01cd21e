//! The verification battery. Each function returns report records; the
//! commands and the acceptance tests share them.

use mellin_core::bgg::{check_bgg_equivalence, check_resolution, random_module, resolution_of_k, rhom_kk_check};
use mellin_core::commalg::{
    curated_duality_suite, ext_self_k, free_resolution, verify_duality_lemma, verify_resolution,
    GradedModulePresentation, PolyIdeal,
};
use mellin_core::corpus::{random_linearity_case, random_torsion_point};
use mellin_core::exactlin::Field;
use mellin_core::laurent::CharacterPoint;
use mellin_core::linearity::{corrupted_linearity_check, linearity_check, twist_invariance_check, CompletionRequest};
use mellin_core::mellin::{
    cohomology_modules, duality_checks, euler_check, fiber_dims, fm, generic_vanishing_at, verify_codim_bounds,
    CodimReport,
};
use mellin_core::purity::{
    curated_algebras, impure_counterexample, multiplicative_split_check, negative_ext_check, purity_check,
    random_pure_complex, split_pure, verify_split, WeightedComplex,
};
use mellin_core::sampling::{rng_for, sample_characters};
use mellin_core::toric::ToricObject;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::report::{character, dims, Record};

pub fn generic_vanishing(obj: &ToricObject, chis: &[CharacterPoint]) -> CliResult<Record> {
    let r = generic_vanishing_at(obj, chis)?;
    let unexplained: Vec<Value> =
        r.unexplained.iter().map(|w| json!({ "chi": character(&w.chi), "degree": w.degree, "dim": w.dim })).collect();
    Ok(Record::new(
        "generic vanishing",
        r.passed(),
        json!({ "samples": r.samples, "explained": r.explained.len(), "unexplained": unexplained }),
    ))
}

/// Scalar-Koszul fibres against the prediction from the cohomology modules.
pub fn base_change(obj: &ToricObject, chis: &[CharacterPoint]) -> CliResult<Record> {
    let c = fm(obj);
    let table = cohomology_modules(&c)?;
    let mut mismatches = Vec::new();
    for chi in chis {
        let (got, want) = (fiber_dims(&c, chi), table.derived_fiber_prediction(chi));
        if got != want {
            mismatches.push(json!({ "chi": character(chi), "fiber": dims(&got), "predicted": dims(&want) }));
        }
    }
    Ok(Record::new("base change", mismatches.is_empty(), json!({ "samples": chis.len(), "mismatches": mismatches })))
}

fn codim_witnesses(r: &CodimReport) -> Value {
    let fmt = |c: &mellin_core::mellin::CodimCheck| {
        json!({ "locus": c.name, "degree": c.degree, "codim": c.codim, "bound": c.bound })
    };
    json!({
        "violations": r.checks.iter().filter(|c| !c.holds()).map(fmt).collect::<Vec<_>>(),
        "equalities": r.equality_witnesses().map(fmt).collect::<Vec<_>>(),
        "negative_degrees": r.negative_degrees,
    })
}

/// Skipped for objects outside the curated perverse class.
pub fn codim_bounds(obj: &ToricObject) -> CliResult<(Record, Option<CodimReport>)> {
    if !obj.is_perverse() || !obj.all_curated() {
        return Ok((Record::skipped("codimension bounds", "needs a perverse object built from curated atoms"), None));
    }
    let r = verify_codim_bounds(obj)?;
    Ok((Record::new("codimension bounds", r.passed(), codim_witnesses(&r)), Some(r)))
}

pub fn duality(obj: &ToricObject, samples: usize, seed: u64) -> Record {
    let r = duality_checks(obj, samples, seed);
    let fibers: Vec<Value> = r
        .fiber_mismatches
        .iter()
        .map(|m| json!({ "chi": character(&m.chi), "degree": m.degree, "lhs": m.lhs, "rhs": m.rhs }))
        .collect();
    Record::new(
        "duality",
        r.passed(),
        json!({ "samples": r.samples, "locus_mismatches": r.locus_mismatches, "fiber_mismatches": fibers }),
    )
}

pub fn euler(obj: &ToricObject, samples: usize, seed: u64) -> Record {
    let r = euler_check(obj, samples, seed);
    let sampled: Vec<Value> = r.sampled.iter().map(|(chi, e)| json!({ "chi": character(chi), "euler": e })).collect();
    Record::new(
        "euler characteristic",
        r.passed(),
        json!({
            "closed_form": r.closed_form,
            "constant": r.constant(),
            "nonnegative": r.nonnegative(),
            "zero_iff_vanishing_fiber": r.zero_iff_vanishing(),
            "sampled": sampled,
        }),
    )
}

/// Linearity, the corrupted-pipeline control and twist invariance at `χ0`.
pub fn linearity(obj: &ToricObject, chi0: &CharacterPoint, order: usize, psi: &CharacterPoint) -> CliResult<Vec<Record>> {
    let req = CompletionRequest::new(obj.clone(), chi0.clone(), order)?;
    let r = linearity_check(&req)?;
    let atoms: Vec<Value> = r
        .atoms
        .iter()
        .map(|a| {
            json!({
                "atom": a.index,
                "on_support": a.on_support,
                "linear_parts_agree": a.linear_parts_agree,
                "completed": dims(&a.completed_dims),
                "bgg": dims(&a.bgg_dims),
            })
        })
        .collect();
    let mut out = vec![Record::new(
        "linearity",
        r.passed(),
        json!({ "chi0": character(chi0), "order": order, "atoms": atoms }),
    )];
    let on_support = r.atoms.iter().any(|a| a.on_support);
    if on_support {
        let bad = corrupted_linearity_check(&req)?;
        out.push(Record::new(
            "corrupted pipeline detected",
            !bad.dims_agree(),
            json!({ "completed": dims(&bad.completed_dims), "bgg": dims(&bad.bgg_dims) }),
        ));
    } else {
        out.push(Record::skipped("corrupted pipeline detected", "base point lies on no support"));
    }
    let t = twist_invariance_check(&req, psi)?;
    out.push(Record::new(
        "twist invariance",
        t.passed(),
        json!({ "psi": character(psi), "series_agree": t.series_agree, "twisted": dims(&t.twisted.completed_dims), "moved": dims(&t.moved.completed_dims) }),
    ));
    Ok(out)
}

/// One corpus case: a random curated object with torsion monodromy, a torsion
/// base point (usually on some support), and a truncation order `N ≤ 4`.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub index: usize,
    pub seed: u64,
    pub object: ToricObject,
    pub chi0: CharacterPoint,
    pub psi: CharacterPoint,
    pub order: usize,
}

pub fn corpus_case(field: Field, gmax: usize, seed: u64, index: usize) -> CorpusCase {
    let mut rng = rng_for(seed, index as u64);
    let (object, chi0) = random_linearity_case(field, gmax, &mut rng);
    let psi = random_torsion_point(field, object.torus().rank(), &mut rng);
    let order = rng.gen_range(1..=4);
    CorpusCase { index, seed: seed.wrapping_add(index as u64), object, chi0, psi, order }
}

/// Sampled characters plus the case's base point, so that nonvanishing
/// fibres in nonzero degrees actually occur.
pub fn case_characters(case: &CorpusCase, samples: usize) -> Vec<CharacterPoint> {
    let mut chis = sample_characters(case.object.field(), case.object.torus().rank(), samples, case.seed);
    chis.push(case.chi0.clone());
    chis
}

#[derive(Clone, Copy, Debug)]
pub struct Battery {
    pub samples: usize,
    pub duality_samples: usize,
    pub euler_samples: usize,
    pub linearity: bool,
}

pub fn run_case(case: &CorpusCase, battery: Battery) -> CliResult<(Vec<Record>, Option<CodimReport>)> {
    let obj = &case.object;
    let chis = case_characters(case, battery.samples);
    let mut records = vec![generic_vanishing(obj, &chis)?, base_change(obj, &chis)?];
    let (codim, codim_report) = codim_bounds(obj)?;
    records.push(codim);
    records.push(duality(obj, battery.duality_samples, case.seed));
    records.push(euler(obj, battery.euler_samples, case.seed));
    if battery.linearity {
        records.extend(linearity(obj, &case.chi0, case.order, &case.psi)?);
    }
    for r in &mut records {
        r.name = format!("case {}: {}", case.index, r.name);
    }
    Ok((records, codim_report))
}

/// Runs `count` cases in parallel; records come back in case order.
pub fn corpus(field: Field, count: usize, gmax: usize, seed: u64, battery: Battery) -> CliResult<Vec<Record>> {
    let results: Vec<CliResult<(Vec<Record>, Option<CodimReport>)>> =
        (0..count).into_par_iter().map(|i| run_case(&corpus_case(field, gmax, seed, i), battery)).collect();
    let mut records = Vec::new();
    let mut equality = false;
    let mut codim_checked = false;
    for r in results {
        let (recs, codim) = r?;
        records.extend(recs);
        if let Some(c) = codim {
            codim_checked = true;
            equality |= c.equality_witnesses().any(|w| w.name == "Supp H^i(FM)");
        }
    }
    if codim_checked {
        records.push(Record::new(
            "corpus: some codim Supp H^i(FM) = 2i",
            equality,
            json!({ "cases": count }),
        ));
    }
    Ok(records)
}

pub fn linearity_suite(field: Field, count: usize, gmax: usize, seed: u64) -> CliResult<Vec<Record>> {
    let results: Vec<CliResult<Vec<Record>>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let case = corpus_case(field, gmax, seed, i);
            let mut recs = linearity(&case.object, &case.chi0, case.order, &case.psi)?;
            for r in &mut recs {
                r.name = format!("case {}: {}", i, r.name);
            }
            Ok(recs)
        })
        .collect();
    let mut records = Vec::new();
    for r in results {
        records.extend(r?);
    }
    let controls = records.iter().filter(|r| r.name.ends_with("corrupted pipeline detected")).filter(|r| r.status == crate::report::Status::Pass).count();
    records.push(Record::new("corrupted pipeline detected at least once", controls > 0, json!({ "detections": controls })));
    Ok(records)
}

pub fn commalg_suite(field: Field) -> CliResult<Vec<Record>> {
    let mut records = Vec::new();
    let mut truth_values = std::collections::BTreeSet::new();
    for (name, c) in curated_duality_suite(field) {
        let r = verify_duality_lemma(&c)?;
        truth_values.insert(r.support_side);
        records.push(Record::new(
            format!("duality lemma: {name}"),
            r.passed(),
            json!({
                "support_codims": dims(&r.support_codims),
                "dual_degrees": r.dual_degrees,
                "support_side": r.support_side,
                "dual_side": r.dual_side,
                "dimensions_agree": r.dimensions_agree,
            }),
        ));
    }
    records.push(Record::new(
        "duality lemma: both truth values occur",
        truth_values.len() == 2,
        json!({ "values": truth_values }),
    ));
    for n in 1..=4 {
        let got = ext_self_k(field, n)?;
        let want: Vec<usize> = (0..=n).map(|i| binomial(n, i)).collect();
        records.push(Record::new(format!("Ext^*(k, k) over {n} variables"), got == want, json!({ "dims": got, "expected": want })));
    }
    let xyz = ["x", "y", "z"];
    let mut rng = rng_for(0, 0);
    for gens in [&["x", "y", "z"][..], &["x^2", "x*y"], &["x*y", "y*z", "x*z"]] {
        let m = GradedModulePresentation::cyclic(&PolyIdeal::parse(field, &xyz, gens)?)?;
        let res = free_resolution(&m, 4)?;
        let r = verify_resolution(&res, 3, &mut rng);
        records.push(Record::new(
            format!("resolution of S/({})", gens.join(", ")),
            r.passed(),
            json!({ "ranks": res.ranks(), "composites_vanish": r.composites_vanish, "syzygies_contained": r.syzygies_contained, "generic_ranks_match": r.generic_ranks_match }),
        ));
    }
    Ok(records)
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn resolution_records(field: Field, nmax: usize, len: usize) -> CliResult<Vec<Record>> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        let r = check_resolution(&resolution_of_k(field, n, len)?);
        out.push(Record::new(
            format!("resolution of k over Λ(k^{n}) through weight {len}"),
            r.passed(),
            json!({ "d_squared_zero": r.d_squared_zero, "weight_zero_is_k": r.weight_zero_is_k, "exact_weights": r.exact_weights }),
        ));
    }
    Ok(out)
}

pub fn rhom_kk(field: Field, n: usize, order: usize) -> CliResult<Record> {
    let r = rhom_kk_check(field, n, order)?;
    Ok(Record::new(
        format!("RHom(k, k) over Λ(k^{n}) mod m^{order}"),
        r.passed(),
        json!({ "graded_dims": r.graded_dims, "expected": r.expected, "concentrated": r.concentrated }),
    ))
}

/// Random modules with `n` cycling through `1..=nmax` and `N` through `1..=order`.
pub fn bgg_modules(field: Field, nmax: usize, order: usize, max_dim: usize, count: usize, seed: u64) -> CliResult<Vec<Record>> {
    (0..count)
        .map(|i| {
            let n = 1 + i % nmax;
            let big_n = 1 + i % order;
            let m = random_module(field, n, max_dim, &mut rng_for(seed, i as u64));
            let r = check_bgg_equivalence(&m, big_n)?;
            let key = |map: &std::collections::BTreeMap<(i32, i32), usize>| {
                Value::Object(map.iter().map(|((w, d), x)| (format!("{w},{d}"), json!(x))).collect())
            };
            Ok(Record::new(
                format!("BGG equivalence: module {i} (n = {n}, N = {big_n}, dim {})", m.total_dim()),
                r.passed(),
                json!({ "module": m.to_string(), "bgg": key(&r.bgg), "rhom": key(&r.rhom) }),
            ))
        })
        .collect()
}

fn split_record(name: String, k: &WeightedComplex) -> CliResult<Record> {
    let purity = purity_check(k);
    if !purity.pure() {
        let off: Vec<Value> = purity
            .offenders
            .iter()
            .map(|o| json!({ "eigenvalue": o.eigenvalue.to_string(), "weight": o.weight, "degree": o.degree, "dim": o.dim }))
            .collect();
        return Ok(Record::new(name, false, json!({ "impure": off })));
    }
    let s = split_pure(k)?;
    let r = verify_split(k, &s);
    Ok(Record::new(
        name,
        r.passed(),
        json!({
            "dims": k.complex().dims(),
            "cohomology": dims(&k.complex().nonzero_cohomology()),
            "inclusion_qis": r.inclusion_qis,
            "projection_qis": r.projection_qis,
            "equivariant": r.equivariant,
        }),
    ))
}

fn negative_ext_record(name: String, k: &WeightedComplex, l: &WeightedComplex, expect_vanishing: bool) -> Record {
    let r = negative_ext_check(k, l);
    Record::new(
        name,
        r.negative_vanishes() == expect_vanishing,
        json!({ "ext": dims(&r.ext_dims), "equivariant_hom": dims(&r.equivariant_hom_dims), "both_pure": r.both_pure }),
    )
}

/// Splittings of random pure complexes, negative Ext on all pairs among the
/// first `pairs` of them and the curated algebras, the impure counterexample,
/// and multiplicativity on the curated algebras.
pub fn purity_suite(count: usize, pairs: usize, seed: u64) -> CliResult<Vec<Record>> {
    let p = 3;
    let complexes: Vec<WeightedComplex> = (0..count).map(|i| random_pure_complex(p, 8, &mut rng_for(seed, i as u64))).collect();
    let mut records = complexes
        .iter()
        .enumerate()
        .map(|(i, k)| split_record(format!("split: random pure complex {i}"), k))
        .collect::<CliResult<Vec<_>>>()?;
    let algebras = curated_algebras(p);
    let mut pool: Vec<(String, WeightedComplex)> =
        complexes.iter().take(pairs).enumerate().map(|(i, k)| (format!("random {i}"), k.clone())).collect();
    pool.extend(algebras.iter().map(|(n, a)| (n.clone(), a.underlying().clone())));
    let pair_records: Vec<Record> = pool
        .par_iter()
        .flat_map_iter(|(na, a)| {
            pool.iter().map(move |(nb, b)| negative_ext_record(format!("negative Ext vanishes: {na} → {nb}"), a, b, true))
        })
        .collect();
    records.extend(pair_records);
    let bad = impure_counterexample();
    records.push(negative_ext_record("impure counterexample has negative Ext".to_string(), &bad, &bad, false));
    for (name, a) in &algebras {
        let r = multiplicative_split_check(a)?;
        records.push(Record::new(
            format!("multiplicative splitting: {name}"),
            r.passed() && r.checked_pairs > 0,
            json!({ "checked_pairs": r.checked_pairs, "not_closed": r.not_closed, "mismatches": r.mismatches }),
        ));
    }
    Ok(records)
}

/// Purity, splitting and negative Ext for one weighted complex from a file.
pub fn purity_file(k: &WeightedComplex) -> CliResult<Vec<Record>> {
    let pure = purity_check(k).pure();
    let mut records = vec![split_record("split".to_string(), k)?];
    let r = negative_ext_check(k, k);
    records.push(Record::new(
        "negative Ext of K with itself",
        !pure || r.negative_vanishes(),
        json!({ "pure": pure, "ext": dims(&r.ext_dims), "equivariant_hom": dims(&r.equivariant_hom_dims) }),
    ));
    Ok(records)
}
