use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mellin_core::bgg::check_bgg_equivalence;
use mellin_core::commalg::{ext_modules, free_resolution, verify_duality_lemma, verify_resolution, GradedModulePresentation, ShiftedModuleComplex};
use mellin_core::corpus::random_torsion_point;
use mellin_core::exactlin::Field;
use mellin_core::laurent::CharacterPoint;
use mellin_core::mellin::{fiber_dims, fm, support_loci};
use mellin_core::sampling::{rng_for, sample_characters};
use mellin_core::toric::ToricObject;
use rand::Rng;
use serde_json::json;

use crate::error::{input, CliResult};
use crate::files::{parse_field, read_json, ComplexFile, IdealFile, ModuleFile, ObjectFile};
use crate::report::{character, dims, Record, Report};
use crate::suites;

pub const DEFAULT_CORPUS_FIELD: &str = "fp:1000003";

#[derive(Debug, Parser)]
#[command(name = "mellin", version, about = "Exact verification of generic vanishing, support loci and linearity on toric models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report as JSON to this file.
    #[arg(long, value_name = "OUT")]
    pub json: Option<PathBuf>,
    /// Coefficient field: `rationals` or `fp:<prime>`. Overrides the input file.
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(Debug, Args)]
pub struct ObjectArgs {
    /// Object description (JSON).
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonvanishing fibre cohomology off degree 0 lies in the support loci.
    GvCheck {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Lists the cohomology support loci as translated subtori.
    SupportLoci {
        #[command(flatten)]
        obj: ObjectArgs,
    },
    /// Fibre cohomology at one character, against the base-change prediction.
    FmFiber {
        #[command(flatten)]
        obj: ObjectArgs,
        /// Character coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
    },
    /// Codimension bounds on the support loci and on the cohomology of the transform.
    CodimCheck {
        #[command(flatten)]
        obj: ObjectArgs,
    },
    /// Euler characteristic: closed form, sampled constancy, sign.
    Euler {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Support-locus and fibre duality against the Verdier dual.
    DualityCheck {
        #[command(flatten)]
        obj: ObjectArgs,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Completed transform at a torsion base point against the BGG complex of the cup-product module.
    Linearity {
        #[command(flatten)]
        obj: ObjectArgs,
        /// Base point; defaults to the trivial character.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long, default_value_t = 3)]
        order: usize,
        /// Twist for the invariance check; defaults to a random torsion point.
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
        /// Order of the random twist's coordinates.
        #[arg(long)]
        torsion_order: Option<u64>,
    },
    /// BGG equivalence on a module file, or the built-in suite.
    BggCheck {
        /// Module description (JSON); without it the random suite runs.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        /// Largest number of exterior generators in the suite.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long, default_value_t = 25)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Derived endomorphisms of the residue field of an exterior algebra.
    RhomKk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Resolutions, Ext and the duality criterion on an ideal file or the curated suite.
    CommalgVerify {
        /// Ideal description (JSON); without it the curated suite runs.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Splitting of pure complexes and vanishing of negative Ext.
    PuritySplit {
        /// Complex description (JSON); without it the random suite runs.
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Random curated perverse objects through the full battery.
    Corpus {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        gmax: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::GvCheck { obj, .. }
            | Command::SupportLoci { obj }
            | Command::FmFiber { obj, .. }
            | Command::CodimCheck { obj }
            | Command::Euler { obj, .. }
            | Command::DualityCheck { obj, .. }
            | Command::Linearity { obj, .. } => &obj.common,
            Command::BggCheck { common, .. }
            | Command::RhomKk { common, .. }
            | Command::CommalgVerify { common, .. }
            | Command::PuritySplit { common, .. }
            | Command::Corpus { common, .. } => common,
        }
    }
}

fn field_override(common: &Common) -> CliResult<Option<Field>> {
    common.field.as_deref().map(parse_field).transpose()
}

fn field_or(common: &Common, default: &str) -> CliResult<Field> {
    parse_field(common.field.as_deref().unwrap_or(default))
}

fn load_object(args: &ObjectArgs) -> CliResult<ToricObject> {
    let file: ObjectFile = read_json(&args.input)?;
    file.to_object(field_override(&args.common)?)
}

pub fn parse_character(field: Field, text: &str, n: usize) -> CliResult<CharacterPoint> {
    let coords = text
        .split(',')
        .map(|s| field.parse_elem(s.trim()).map_err(Into::into))
        .collect::<CliResult<Vec<_>>>()?;
    if coords.len() != n {
        return Err(input(format!("character needs {n} coordinates, {} given", coords.len())));
    }
    Ok(CharacterPoint::new(field, coords)?)
}

/// Smallest prime `p ≡ 1 (mod k)`.
pub fn suggest_prime(k: u64) -> u64 {
    let is_prime = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    (1..).map(|t| t * k + 1).find(|&p| is_prime(p)).expect("Dirichlet")
}

fn torsion_twist(field: Field, n: usize, order: u64, seed: u64) -> CliResult<CharacterPoint> {
    if order == 0 {
        return Err(input("torsion order must be positive"));
    }
    let group = match field {
        Field::Rationals => 2,
        Field::Prime(p) => p - 1,
    };
    if group % order != 0 {
        let hint = match field {
            Field::Rationals => "over Q only orders 1 and 2 exist".to_string(),
            Field::Prime(_) => format!("try --field fp:{}", suggest_prime(order)),
        };
        return Err(input(format!("{field} has no roots of unity of order {order}; {hint}")));
    }
    let mut rng = rng_for(seed, 0);
    let coords = (0..n).map(|_| field.root_of_unity(rng.gen_range(0..order as i64), order)).collect::<Result<Vec<_>, _>>()?;
    Ok(CharacterPoint::new(field, coords)?)
}

/// Runs one parsed command. `echo` is recorded verbatim in the report.
pub fn execute(cmd: &Command, echo: String) -> CliResult<Report> {
    let seed = cmd.common().seed;
    let records = match cmd {
        Command::GvCheck { obj, samples } => {
            let o = load_object(obj)?;
            let chis = sample_characters(o.field(), o.torus().rank(), *samples, seed);
            vec![suites::generic_vanishing(&o, &chis)?]
        }
        Command::SupportLoci { obj } => {
            let o = load_object(obj)?;
            let loci = support_loci(&o);
            let mut records: Vec<Record> = loci
                .degrees()
                .map(|i| {
                    let comps: Vec<String> = loci.components(i).iter().map(|z| z.to_string()).collect();
                    Record::new(format!("S^{i}"), true, json!({ "codim": loci.codim(i), "components": comps }))
                })
                .collect();
            records.push(suites::duality(&o, 0, seed));
            records
        }
        Command::FmFiber { obj, chi } => {
            let o = load_object(obj)?;
            let chi = parse_character(o.field(), chi, o.torus().rank())?;
            let h = fiber_dims(&fm(&o), &chi);
            let mut records = vec![
                Record::new("fiber cohomology", true, json!({ "chi": character(&chi), "dims": dims(&h) })),
                suites::base_change(&o, std::slice::from_ref(&chi))?,
            ];
            if o.is_perverse() {
                records.push(suites::generic_vanishing(&o, std::slice::from_ref(&chi))?);
            }
            records
        }
        Command::CodimCheck { obj } => {
            let o = load_object(obj)?;
            if !o.is_perverse() || !o.all_curated() {
                return Err(input("codim-check needs a perverse object built from curated atoms"));
            }
            vec![suites::codim_bounds(&o)?.0]
        }
        Command::Euler { obj, samples } => vec![suites::euler(&load_object(obj)?, *samples, seed)],
        Command::DualityCheck { obj, samples } => vec![suites::duality(&load_object(obj)?, *samples, seed)],
        Command::Linearity { obj, chi, order, psi, torsion_order } => {
            let o = load_object(obj)?;
            let (f, n) = (o.field(), o.torus().rank());
            let chi0 = match chi {
                Some(s) => parse_character(f, s, n)?,
                None => CharacterPoint::trivial(f, n),
            };
            let psi = match (psi, torsion_order) {
                (Some(s), None) => parse_character(f, s, n)?,
                (None, Some(k)) => torsion_twist(f, n, *k, seed)?,
                (None, None) => random_torsion_point(f, n, &mut rng_for(seed, 0)),
                (Some(_), Some(_)) => return Err(input("give either --psi or --torsion-order")),
            };
            suites::linearity(&o, &chi0, *order, &psi)?
        }
        Command::BggCheck { input: Some(path), order, common, .. } => {
            if common.field.is_some() {
                return Err(input("--field has no effect on a module file"));
            }
            let m = read_json::<ModuleFile>(path)?.to_module()?;
            (1..=*order)
                .map(|big_n| {
                    let r = check_bgg_equivalence(&m, big_n)?;
                    let key = |map: &std::collections::BTreeMap<(i32, i32), usize>| {
                        serde_json::Value::Object(map.iter().map(|((w, d), x)| (format!("{w},{d}"), json!(x))).collect())
                    };
                    Ok(Record::new(format!("BGG equivalence mod m^{big_n}"), r.passed(), json!({ "bgg": key(&r.bgg), "rhom": key(&r.rhom) })))
                })
                .collect::<CliResult<Vec<_>>>()?
        }
        Command::BggCheck { input: None, n, order, count, common } => {
            if *n == 0 || *order == 0 {
                return Err(input("--n and --order must be positive"));
            }
            let field = field_or(common, "rationals")?;
            let mut records = suites::resolution_records(field, *n, 4)?;
            for k in 1..=*n {
                for big_n in 1..=*order + 1 {
                    records.push(suites::rhom_kk(field, k, big_n)?);
                }
            }
            records.extend(suites::bgg_modules(field, *n, *order, 6, *count, seed)?);
            records
        }
        Command::RhomKk { n, order, common } => {
            if *order == 0 {
                return Err(input("--order must be positive"));
            }
            vec![suites::rhom_kk(field_or(common, "rationals")?, *n, *order)?]
        }
        Command::CommalgVerify { input: Some(path), common } => {
            if common.field.is_some() {
                return Err(input("--field has no effect on an ideal file"));
            }
            let ideal = read_json::<IdealFile>(path)?.to_ideal()?;
            let m = GradedModulePresentation::cyclic(&ideal)?;
            let nvars = ideal.nvars();
            let res = free_resolution(&m, nvars + 1)?;
            let r = verify_resolution(&res, 3, &mut rng_for(seed, 0));
            let ext = ext_modules(&m)?;
            let ext_dims: Vec<_> = ext.entries().iter().map(|(i, e)| json!({ "degree": i, "module": e.to_string() })).collect();
            let lemma = verify_duality_lemma(&ShiftedModuleComplex::new(nvars, vec![(m, 0)])?)?;
            vec![
                Record::new(
                    "free resolution",
                    r.passed(),
                    json!({ "ranks": res.ranks(), "composites_vanish": r.composites_vanish, "syzygies_contained": r.syzygies_contained, "generic_ranks_match": r.generic_ranks_match }),
                ),
                Record::new("Ext^i(M, S)", true, json!({ "nonzero": ext_dims })),
                Record::new(
                    "duality lemma",
                    lemma.passed(),
                    json!({ "support_codims": dims(&lemma.support_codims), "dual_degrees": lemma.dual_degrees, "support_side": lemma.support_side, "dual_side": lemma.dual_side }),
                ),
            ]
        }
        Command::CommalgVerify { input: None, common } => suites::commalg_suite(field_or(common, "rationals")?)?,
        Command::PuritySplit { input: Some(path), common, .. } => {
            if common.field.is_some() {
                return Err(input("--field has no effect on a complex file"));
            }
            suites::purity_file(&read_json::<ComplexFile>(path)?.to_weighted()?)?
        }
        Command::PuritySplit { input: None, count, common } => {
            if common.field.is_some() {
                return Err(input("the purity suite runs over a fixed field"));
            }
            suites::purity_suite(*count, (*count).min(10), seed)?
        }
        Command::Corpus { count, gmax, samples, common } => {
            if *gmax == 0 || *gmax > 3 {
                return Err(input("--gmax must be 1, 2 or 3"));
            }
            let field = field_or(common, DEFAULT_CORPUS_FIELD)?;
            let battery = suites::Battery { samples: *samples, duality_samples: 10, euler_samples: 10, linearity: true };
            suites::corpus(field, *count, *gmax, seed, battery)?
        }
    };
    Ok(Report::new(echo, seed, records))
}

/// The command line as recorded in reports: arguments after the program
/// name, without the `--json` destination.
pub fn echo(args: &[String]) -> String {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--json" {
            it.next();
        } else if !a.starts_with("--json=") {
            out.push(a.as_str());
        }
    }
    out.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_for_torsion_orders() {
        assert_eq!(suggest_prime(5), 11);
        assert_eq!(suggest_prime(4), 5);
        assert_eq!(suggest_prime(7), 29);
    }

    #[test]
    fn echo_drops_the_output_path() {
        let args: Vec<String> = ["mellin", "corpus", "--json", "/tmp/x", "--seed", "3", "--json=/y"].map(String::from).to_vec();
        assert_eq!(echo(&args), "corpus --seed 3");
    }

    #[test]
    fn characters_parse_with_rationals() {
        let chi = parse_character(Field::Rationals, "2, -1/3", 2).unwrap();
        assert_eq!(chi.coords()[1].to_string(), "-1/3");
        assert!(parse_character(Field::Rationals, "2", 2).is_err());
        assert!(parse_character(Field::Rationals, "0,1", 2).is_err());
    }
}
