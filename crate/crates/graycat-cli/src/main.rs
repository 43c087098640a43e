//! Command-line front end: parse inputs, dispatch library operations, emit
//! deterministic reports.
//!
//! Exit codes: 0 on success or a passing verification, 1 on a verification
//! failure, 2 on usage or parse errors.

mod dot;

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use graycat::acceptance::{run_all, run_criterion, AcceptanceConfig};
use graycat::adc::Adc;
use graycat::corpus;
use graycat::doublecat::{check_two_sided_fibration, FiniteDoubleCat};
use graycat::graymaps;
use graycat::json::{AdcDoc, CatDoc, DoubleDoc, FunctorDoc};
use graycat::nu::{nondegenerate_counts, nu_cells, NuConfig};
use graycat::squarecech::{
    cech_level, cech_segal_iso, cube_level, sq2, sq_pair, verify_sq_fully_faithful,
    verify_sq_image, Filtration2,
};
use graycat::strictcat::{
    enumerate_functors, factorize, is_n_fully_faithful, is_n_surjective, CatFunctor,
    FiniteStrictNCat,
};
use graycat::theta::{self, GlobularSum};

#[derive(Parser)]
#[command(
    name = "graycat",
    version,
    about = "Exact computations with Steiner complexes, Gray tensor products, and finite double categories"
)]
struct Cli {
    /// Node budget for bounded searches.
    #[arg(long, global = true, default_value_t = 5_000_000, env = "GRAYCAT_BUDGET")]
    budget: u64,
    /// Coefficient cap for cell enumeration.
    #[arg(long, global = true, default_value_t = 1, env = "GRAYCAT_CAP")]
    cap: i64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "GRAYCAT_FORMAT")]
    format: Format,
    /// Seed for randomized corpus sampling.
    #[arg(long, global = true, default_value_t = 1, env = "GRAYCAT_SEED")]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check ∂∂ = 0 and ε∂ = 0 on a complex.
    Validate { adc: String },
    /// Gray tensor product of two complexes.
    Tensor { left: String, right: String },
    /// Enumerate cells of ν(K) up to a dimension.
    Nu {
        adc: String,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Steiner basis conditions (unital, atomic, loop-free, strongly loop-free).
    BasisCheck { adc: String },
    /// Verify the section identity p ∘ s = id for the suspension comparison.
    #[command(name = "p-s-verify")]
    PSVerify {
        #[arg(long, alias = "A")]
        complex: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Verify a decomposition colimit and emit the witness.
    Decompose {
        #[arg(long, value_enum)]
        kind: DecomposeKind,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        #[arg(long)]
        complex: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Negate differentials in the given dimensions.
    Dualize {
        adc: String,
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Spine presentation of a globular sum.
    Spine { sum: String },
    /// Enumerate functors between finite categories.
    Functors { source: String, target: String },
    /// Evaluate n-surjectivity and n-fully-faithfulness of a functor.
    Ffsurj {
        source: String,
        target: String,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        n: usize,
    },
    /// Factor a functor as an n-surjection followed by an (n+1)-fully-faithful functor.
    Factorize {
        source: String,
        target: String,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        n: usize,
    },
    /// Companion triples of vertical cells in a double category.
    Companions {
        double: String,
        #[arg(long)]
        vcell: Option<String>,
    },
    /// Is a square a composite of companion lifts?
    Bicartesian {
        double: String,
        #[arg(long)]
        square: String,
    },
    /// Unique-lift conditions for the marked span D₁ → D₀ × D₀.
    FibrationCheck {
        double: String,
        /// Install the companionship marking before checking.
        #[arg(long)]
        companion_marking: bool,
    },
    /// The double category of lax squares of a 2-category.
    Sq2 { cat: String },
    /// The pair-square double category of a filtration.
    Sqpair {
        #[arg(long)]
        a0: String,
        #[arg(long)]
        a1: String,
        #[arg(long)]
        map: String,
    },
    /// A Čech-nerve level of a filtration.
    Cech {
        /// Use the canonical filtration truncate(c, 1) → c.
        #[arg(long)]
        canonical: Option<String>,
        #[arg(long)]
        a0: Option<String>,
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        level: usize,
        /// Also verify the Segal comparison at this level.
        #[arg(long)]
        segal: bool,
    },
    /// Level (k1, k2) of the cube functor.
    Cube {
        cat: String,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
    },
    /// Image characterization of the square functor.
    VerifyImage { cat: String },
    /// Fully-faithfulness of the square functor on a pair of 2-categories.
    VerifyFf { source: String, target: String },
    /// Run the verification suite.
    Acceptance {
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeKind {
    Tensor,
    Susp,
    Cosusp,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<graycat::Error> for Failure {
    fn from(e: graycat::Error) -> Failure {
        match e {
            graycat::Error::LabelSyntax(_) | graycat::Error::InvalidAdc(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::from(0),
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn nu_config(cli: &Cli) -> NuConfig {
    NuConfig { coeff_cap: cli.cap, node_budget: cli.budget }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("cannot parse {what}: {e}")))
}

fn load_adc(arg: &str) -> Result<Adc, Failure> {
    if let Some(adc) = corpus::named_adc(arg) {
        return Ok(adc);
    }
    let doc: AdcDoc = parse_json(&read_file(arg)?, "complex JSON")?;
    Ok(doc.into_adc()?)
}

fn load_sum(arg: &str) -> Result<GlobularSum, Failure> {
    if let Some(sum) = corpus::named_sum(arg) {
        return Ok(sum);
    }
    if arg.trim_start().starts_with('[') {
        return parse_json(arg, "globular sum");
    }
    parse_json(&read_file(arg)?, "globular sum")
}

fn load_cat(arg: &str, config: &NuConfig) -> Result<FiniteStrictNCat, Failure> {
    if let Some(cat) = corpus::named_2cat(arg, config)? {
        return Ok(cat);
    }
    let doc: CatDoc = parse_json(&read_file(arg)?, "category JSON")?;
    Ok(doc.into_cat()?)
}

fn load_double(arg: &str, config: &NuConfig) -> Result<FiniteDoubleCat, Failure> {
    if let Some(cat) = corpus::named_2cat(arg, config)? {
        return Ok(sq2(&cat)?);
    }
    let doc: DoubleDoc = parse_json(&read_file(arg)?, "double category JSON")?;
    Ok(doc.into_double()?)
}

fn load_functor(
    arg: &str,
    source: &FiniteStrictNCat,
    target: &FiniteStrictNCat,
) -> Result<CatFunctor, Failure> {
    let doc: FunctorDoc = parse_json(&read_file(arg)?, "functor JSON")?;
    Ok(doc.into_functor(source, target)?)
}

fn emit(value: serde_json::Value, text: String, cli: &Cli) {
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        _ => println!("{text}"),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config = nu_config(cli);
    match &cli.command {
        Command::Validate { adc } => {
            let complex = load_adc(adc)?;
            let report = complex.validate();
            emit(
                serde_json::json!({
                    "valid": report.is_valid(),
                    "violations": report.violations,
                }),
                if report.is_valid() {
                    "valid".to_string()
                } else {
                    report.violations.join("\n")
                },
                cli,
            );
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} violations", report.violations.len())))
            }
        }
        Command::Tensor { left, right } => {
            let t = load_adc(left)?.tensor(&load_adc(right)?);
            if cli.format == Format::Dot {
                print!("{}", dot::adc_dot(&t));
                return Ok(());
            }
            let doc = AdcDoc::from_adc(&t);
            emit(
                serde_json::to_value(&doc).unwrap(),
                format!("basis sizes by degree: {:?}", t.basis_sizes_by_degree()),
                cli,
            );
            Ok(())
        }
        Command::Nu { adc, max_dim } => {
            let complex = load_adc(adc)?;
            let cells = nu_cells(&complex, *max_dim, &config)?;
            let counts = nondegenerate_counts(&cells, *max_dim);
            let rendered: Vec<serde_json::Value> = cells
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "dim": c.dim(),
                        "degenerate": c.is_degenerate(),
                        "levels": c
                            .levels()
                            .iter()
                            .map(|(m, p)| vec![m.to_string(), p.to_string()])
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            emit(
                serde_json::json!({
                    "nondegenerate_by_dim": counts,
                    "total": cells.len(),
                    "cells": rendered,
                }),
                format!(
                    "non-degenerate cells by dimension: {counts:?} ({} cells total)",
                    cells.len()
                ),
                cli,
            );
            Ok(())
        }
        Command::BasisCheck { adc } => {
            let complex = load_adc(adc)?;
            let c = complex.check_basis_conditions();
            emit(
                serde_json::json!({
                    "unital": c.unital,
                    "atomic": c.atomic,
                    "loop_free": c.loop_free,
                    "strongly_loop_free": c.strongly_loop_free,
                }),
                format!(
                    "unital: {}  atomic: {}  loop-free: {}  strongly loop-free: {}",
                    c.unital, c.atomic, c.loop_free, c.strongly_loop_free
                ),
                cli,
            );
            if c.all_true() {
                Ok(())
            } else {
                Err(Failure::Verification("basis conditions fail".into()))
            }
        }
        Command::PSVerify { complex, n, m } => {
            let a = load_adc(complex)?;
            match graymaps::p_s_nm(&a, *n, *m) {
                Ok(_) => {
                    emit(
                        serde_json::json!({"section": "OK", "n": n, "m": m}),
                        "section: OK".into(),
                        cli,
                    );
                    Ok(())
                }
                Err(e) => Err(Failure::Verification(e.to_string())),
            }
        }
        Command::Decompose { kind, left, right, complex, n } => {
            let witness = match kind {
                DecomposeKind::Tensor => {
                    let (Some(l), Some(r)) = (left, right) else {
                        return Err(Failure::Usage(
                            "--kind tensor needs --left and --right".into(),
                        ));
                    };
                    graymaps::verify_susp_tensor_decomposition(&load_adc(l)?, &load_adc(r)?)?
                }
                DecomposeKind::Susp | DecomposeKind::Cosusp => {
                    let (Some(c), Some(n)) = (complex, n) else {
                        return Err(Failure::Usage(
                            "--kind susp/cosusp needs --complex and --n".into(),
                        ));
                    };
                    let c = load_adc(c)?;
                    match kind {
                        DecomposeKind::Susp => graymaps::verify_susp_colimit(&c, *n)?,
                        _ => graymaps::verify_cosuspension(&c, *n)?,
                    }
                }
            };
            if cli.format == Format::Dot {
                print!("{}", dot::witness_dot(&witness));
                return Ok(());
            }
            emit(
                serde_json::json!({
                    "verified": true,
                    "colimit": AdcDoc::from_adc(&witness.colimit),
                    "legs": witness.legs.len(),
                }),
                format!(
                    "isomorphism witness found; colimit has {} basis elements",
                    witness.colimit.len()
                ),
                cli,
            );
            Ok(())
        }
        Command::Dualize { adc, dims } => {
            let complex = load_adc(adc)?;
            let dims: BTreeSet<usize> = dims.iter().copied().collect();
            let doc = AdcDoc::from_adc(&complex.dualize(&dims));
            emit(
                serde_json::to_value(&doc).unwrap(),
                format!("dualized in dimensions {dims:?}"),
                cli,
            );
            Ok(())
        }
        Command::Spine { sum } => {
            let s = load_sum(sum)?;
            let spine = theta::spine(&s);
            emit(
                serde_json::json!({
                    "sum": s.render(),
                    "globes": spine.globes,
                    "gluings": spine.gluings,
                }),
                format!(
                    "Sp {} = globes {:?} glued along degrees {:?}",
                    s.render(),
                    spine.globes,
                    spine.gluings
                ),
                cli,
            );
            Ok(())
        }
        Command::Functors { source, target } => {
            let c = load_cat(source, &config)?;
            let d = load_cat(target, &config)?;
            let fs = enumerate_functors(&c, &d)?;
            let docs: Vec<FunctorDoc> =
                fs.iter().map(|f| FunctorDoc::from_functor(f, &c, &d)).collect();
            emit(
                serde_json::json!({"count": fs.len(), "functors": docs}),
                format!("{} functors", fs.len()),
                cli,
            );
            Ok(())
        }
        Command::Ffsurj { source, target, functor, n } => {
            let c = load_cat(source, &config)?;
            let d = load_cat(target, &config)?;
            let f = load_functor(functor, &c, &d)?;
            let surjective = is_n_surjective(&c, &d, &f, *n);
            let fully_faithful = is_n_fully_faithful(&c, &d, &f, *n);
            emit(
                serde_json::json!({
                    "n": n,
                    "n_surjective": surjective,
                    "n_fully_faithful": fully_faithful,
                }),
                format!("{n}-surjective: {surjective}  {n}-fully-faithful: {fully_faithful}"),
                cli,
            );
            Ok(())
        }
        Command::Factorize { source, target, functor, n } => {
            let c = load_cat(source, &config)?;
            let d = load_cat(target, &config)?;
            let f = load_functor(functor, &c, &d)?;
            let fac = factorize(&c, &d, &f, *n)?;
            emit(
                serde_json::json!({
                    "middle": CatDoc::from_cat(&fac.middle),
                    "first": FunctorDoc::from_functor(&fac.first, &c, &fac.middle),
                    "second": FunctorDoc::from_functor(&fac.second, &fac.middle, &d),
                }),
                format!(
                    "factored through a middle category with {} cells",
                    fac.middle.total_cells()
                ),
                cli,
            );
            Ok(())
        }
        Command::Companions { double, vcell } => {
            let d = load_double(double, &config)?;
            let selected: Vec<usize> = match vcell {
                Some(name) => vec![d
                    .vcells
                    .iter()
                    .position(|e| e.name == *name)
                    .ok_or_else(|| Failure::Usage(format!("unknown vertical cell {name}")))?],
                None => (0..d.num_vcells()).collect(),
            };
            let mut rows = Vec::new();
            for f in selected {
                let triples = d.find_companions(f);
                rows.push(serde_json::json!({
                    "vcell": d.vcells[f].name,
                    "companions": triples
                        .iter()
                        .map(|t| serde_json::json!({
                            "companion": d.hcells[t.companion].name,
                            "unit": d.squares[t.unit].name,
                            "counit": d.squares[t.counit].name,
                        }))
                        .collect::<Vec<_>>(),
                }));
            }
            let accompanied = d.is_accompanied();
            emit(
                serde_json::json!({"accompanied": accompanied, "vcells": rows}),
                format!("accompanied: {accompanied}"),
                cli,
            );
            Ok(())
        }
        Command::Bicartesian { double, square } => {
            let d = load_double(double, &config)?;
            let idx = d
                .squares
                .iter()
                .position(|s| s.name == *square)
                .ok_or_else(|| Failure::Usage(format!("unknown square {square}")))?;
            let bicartesian = d.bicartesian_set().contains(&idx);
            emit(
                serde_json::json!({"square": square, "bicartesian": bicartesian}),
                format!("bicartesian: {bicartesian}"),
                cli,
            );
            Ok(())
        }
        Command::FibrationCheck { double, companion_marking } => {
            let mut d = load_double(double, &config)?;
            if *companion_marking || d.marking.is_none() {
                d = d.companion_marking()?;
            }
            let report = check_two_sided_fibration(&d);
            emit(
                serde_json::json!({"passes": report.passes(), "failures": report.failures}),
                if report.passes() {
                    "two-sided fibration conditions hold".into()
                } else {
                    report.failures.join("\n")
                },
                cli,
            );
            if report.passes() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} failures", report.failures.len())))
            }
        }
        Command::Sq2 { cat } => {
            let c = load_cat(cat, &config)?;
            let d = sq2(&c)?;
            if cli.format == Format::Dot {
                print!("{}", dot::double_dot(&d));
                return Ok(());
            }
            emit(
                serde_json::to_value(DoubleDoc::from_double(&d)).unwrap(),
                format!(
                    "{} objects, {} vertical cells, {} horizontal cells, {} squares",
                    d.num_objects(),
                    d.num_vcells(),
                    d.num_hcells(),
                    d.num_squares()
                ),
                cli,
            );
            Ok(())
        }
        Command::Sqpair { a0, a1, map } => {
            let filt = load_filtration(a0, a1, map, &config)?;
            let d = sq_pair(&filt)?;
            if cli.format == Format::Dot {
                print!("{}", dot::double_dot(&d));
                return Ok(());
            }
            emit(
                serde_json::to_value(DoubleDoc::from_double(&d)).unwrap(),
                format!(
                    "{} objects, {} vertical cells, {} horizontal cells, {} squares",
                    d.num_objects(),
                    d.num_vcells(),
                    d.num_hcells(),
                    d.num_squares()
                ),
                cli,
            );
            Ok(())
        }
        Command::Cech { canonical, a0, a1, map, level, segal } => {
            let filt = match canonical {
                Some(cat) => Filtration2::canonical(&load_cat(cat, &config)?)?,
                None => {
                    let (Some(a0), Some(a1), Some(map)) = (a0, a1, map) else {
                        return Err(Failure::Usage(
                            "cech needs either --canonical or --a0/--a1/--map".into(),
                        ));
                    };
                    load_filtration(a0, a1, map, &config)?
                }
            };
            let lvl = cech_level(&filt, *level)?;
            let segal_ok = if *segal { Some(cech_segal_iso(&filt, *level)?) } else { None };
            emit(
                serde_json::json!({
                    "level": level,
                    "objects": lvl.objects.len(),
                    "morphisms": lvl.morphisms.len(),
                    "segal": segal_ok,
                    "category": CatDoc::from_cat(&lvl.cat),
                }),
                format!(
                    "level {level}: {} objects, {} morphisms{}",
                    lvl.objects.len(),
                    lvl.morphisms.len(),
                    match segal_ok {
                        Some(true) => "; Segal comparison holds",
                        Some(false) => "; Segal comparison FAILS",
                        None => "",
                    }
                ),
                cli,
            );
            if segal_ok == Some(false) {
                return Err(Failure::Verification("Segal comparison fails".into()));
            }
            Ok(())
        }
        Command::Cube { cat, k1, k2 } => {
            let c = load_cat(cat, &config)?;
            let level = cube_level(&c, *k1, *k2, &config)?;
            emit(
                serde_json::json!({"k1": k1, "k2": k2, "level": level}),
                format!("cube level ({k1}, {k2}) = {level}"),
                cli,
            );
            Ok(())
        }
        Command::VerifyImage { cat } => {
            let c = load_cat(cat, &config)?;
            let report = verify_sq_image(&c)?;
            emit(
                serde_json::json!({
                    "accompanied": report.accompanied,
                    "complete": report.complete,
                    "every_horizontal_is_companion": report.every_horizontal_companion,
                }),
                format!(
                    "accompanied: {}  complete: {}  every horizontal is a companion: {}",
                    report.accompanied, report.complete, report.every_horizontal_companion
                ),
                cli,
            );
            if report.passes() {
                Ok(())
            } else {
                Err(Failure::Verification("square-image characterization fails".into()))
            }
        }
        Command::VerifyFf { source, target } => {
            let c = load_cat(source, &config)?;
            let d = load_cat(target, &config)?;
            let report = verify_sq_fully_faithful(&c, &d, cli.budget)?;
            emit(
                serde_json::json!({
                    "functors": report.functor_count,
                    "double_functors": report.double_functor_count,
                    "bijective": report.bijective,
                }),
                format!(
                    "{} functors vs {} double functors; bijective: {}",
                    report.functor_count, report.double_functor_count, report.bijective
                ),
                cli,
            );
            if report.bijective {
                Ok(())
            } else {
                Err(Failure::Verification("square functor is not fully faithful here".into()))
            }
        }
        Command::Acceptance { only } => {
            let acceptance_config = AcceptanceConfig { nu: config, seed: cli.seed };
            let results = match only {
                Some(id) => vec![run_criterion(*id, &acceptance_config)],
                None => run_all(&acceptance_config),
            };
            if cli.format == Format::Json {
                let rows: Vec<serde_json::Value> = results
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "id": r.id,
                            "name": r.name,
                            "passed": r.passed,
                            "millis": r.millis,
                            "budget_millis": r.budget_millis,
                            "details": r.details,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).unwrap());
            } else {
                for r in &results {
                    println!("{}", r.line());
                }
            }
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Failure::Verification("acceptance criteria failed".into()))
            }
        }
    }
}

fn load_filtration(
    a0: &str,
    a1: &str,
    map: &str,
    config: &NuConfig,
) -> Result<Filtration2, Failure> {
    let a0_cat = if let Some(cat) = corpus::named_2cat(a0, config)? {
        cat.truncate(1)
    } else {
        let doc: CatDoc = parse_json(&read_file(a0)?, "category JSON")?;
        doc.into_cat()?
    };
    let a1_cat = load_cat(a1, config)?;
    let doc: FunctorDoc = parse_json(&read_file(map)?, "functor JSON")?;
    if doc.maps.len() != 2 {
        return Err(Failure::Usage("filtration map needs levels 0 and 1".into()));
    }
    let mut maps = Vec::new();
    for (d, level) in doc.maps.iter().enumerate() {
        let mut out = vec![0usize; a0_cat.num_cells(d)];
        for (name, image) in level {
            let x = a0_cat
                .find_by_name(d, name)
                .ok_or_else(|| Failure::Usage(format!("unknown cell {name}")))?;
            let y = a1_cat
                .find_by_name(d, image)
                .ok_or_else(|| Failure::Usage(format!("unknown image {image}")))?;
            out[x.idx] = y.idx;
        }
        maps.push(out);
    }
    Ok(Filtration2::new(a0_cat, a1_cat, CatFunctor { maps })?)
}
