//! `hck`: command-line access to the verification suites.
//!
//! Every subcommand produces a [`VerificationReport`] plus a data payload.
//! The exit code is 0 when nothing failed, 1 when a check failed, and 2
//! when the input could not be used at all.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hecke_core::apartment::{
    all_subsets, escalate_mismatch, heart_condition1_check, parse_rational, ApartmentPoint, HeartStatus, LeviComparison,
};
use hecke_core::clifford_lab::{builtin_catalog, evaluate, CatalogFile, FiniteGroupModel};
use hecke_core::iwahori_hecke::satake_check;
use hecke_core::padic_groups::{
    escalate_gl, gl3_counterexample, iwahori_factorization_sweep, ConjugacyObstruction, Partition, SignConvention,
    SpadeStatus, ValuationGroupScheme, DEFAULT_BRUTE_FORCE_CAP,
};
use hecke_core::report::{Check, VerificationReport};
use hecke_core::root_datum::{box_points, enumerate_weyl, DatumSpec, RootDatum};
use hecke_core::suites;
use hecke_core::torus_center::torus_center_report;
use hecke_core::{HeckeError, Result};

#[derive(Parser)]
#[command(name = "hck", version, about = "Exact verification of Hecke-algebra-of-types computations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for parallel sweeps.
    #[arg(long, env = "HCK_JOBS", global = true)]
    jobs: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Lower,
    Upper,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Roots, simple roots and Weyl group of a datum.
    Rootdatum {
        #[arg(long)]
        datum: String,
    },
    /// Condition (1) of the heart criterion for G_{x,r}, escalating mismatches.
    HeartCheck {
        #[arg(long)]
        datum: String,
        /// Comma-separated rationals, e.g. 1/2,0,0.
        #[arg(long)]
        x: String,
        #[arg(long)]
        r: String,
        /// Comma-separated simple-root indices; all subsets when omitted.
        #[arg(long)]
        theta: Option<String>,
    },
    /// The GL_3 counterexample end to end.
    Counterexample,
    /// Iwahori factorization of a bound-matrix group.
    SpadeCheck {
        /// Rows separated by ';', entries by ',', e.g. "1,1;2,1".
        #[arg(long, conflicts_with_all = ["datum", "x", "r"])]
        bounds: Option<String>,
        #[arg(long, requires_all = ["x", "r"])]
        datum: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        r: Option<String>,
        /// Block sizes, e.g. 1,2; every partition when omitted.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long, value_enum, default_value_t = Sign::Both)]
        sign: Sign,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        p: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        cap: u64,
    },
    /// Clifford theory and multiplicity checks on a finite-group catalog.
    Clifford {
        /// `builtin` or a path to a catalog JSON file.
        #[arg(long, default_value = "builtin")]
        catalog: String,
        /// `all` or an entry name.
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Orbit sums of (λ, χ) pairs at depth one.
    TorusCenter {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        radius: i64,
        /// `roc` adds the per-orbit block decomposition checks.
        #[arg(long)]
        check: Option<String>,
    },
    /// Central elements of the Iwahori–Hecke algebra in a truncation.
    IwahoriCenter {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        radius: i64,
    },
    /// Every suite at its standard size.
    VerifyAll {
        #[arg(long, default_value = "builtin")]
        catalog: String,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
        spade_cap: u64,
    },
}

/// A datum name, inline JSON, or a path to a JSON file.
fn load_datum(s: &str) -> Result<RootDatum> {
    let path = PathBuf::from(s);
    if path.is_file() {
        let text = std::fs::read_to_string(&path).map_err(|e| HeckeError::Parse(format!("{s}: {e}")))?;
        let spec = DatumSpec::parse(&text).map_err(|e| in_file(s, e))?;
        return RootDatum::from_spec(&spec);
    }
    RootDatum::named(s)
}

fn load_catalog(s: &str) -> Result<CatalogFile> {
    if s == "builtin" {
        return Ok(builtin_catalog());
    }
    let text = std::fs::read_to_string(s).map_err(|e| HeckeError::Parse(format!("{s}: {e}")))?;
    CatalogFile::from_json(&text).map_err(|e| in_file(s, e))
}

fn parse_point(s: &str, datum: &RootDatum) -> Result<ApartmentPoint> {
    let x: ApartmentPoint = s.parse()?;
    if x.offset.len() != datum.rank {
        return Err(HeckeError::Parse(format!(
            "point {s} has {} coordinates, datum rank is {}",
            x.offset.len(),
            datum.rank
        )));
    }
    Ok(x)
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| HeckeError::Parse(format!("bad index list {s}"))))
        .collect()
}

fn parse_bounds(s: &str) -> Result<ValuationGroupScheme> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| HeckeError::Parse(format!("bad bound {t:?} in {s}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ValuationGroupScheme::new(rows)
}

type Outcome = (VerificationReport, Value);

fn rootdatum(datum: &str) -> Result<Outcome> {
    let datum = load_datum(datum)?;
    let weyl = enumerate_weyl(&datum)?;
    let mut report = VerificationReport::new("rootdatum");
    let thetas = all_subsets(datum.semisimple_rank());
    let bad = weyl.iter().flat_map(|w| thetas.iter().map(move |t| (w, t))).find(|(w, t)| {
        let (w1, w2) = datum.coset_decompose(w, t);
        let inv = datum.inverse(&w2);
        w1.compose(&w2).action != w.action
            || t.iter().any(|&i| !datum.roots[datum.act_on_root(&inv, datum.simple[i])].is_positive())
    });
    report.push(Check::from_bool(
        "coset decompositions",
        bad.is_none(),
        format!("{} elements x {} parabolic subgroups", weyl.len(), thetas.len()),
        || json!({"w": bad.unwrap().0.word, "theta": bad.unwrap().1}),
    ));
    let orbit_bad = box_points(datum.rank, 1).into_iter().find(|l| {
        let stab = weyl.iter().filter(|w| w.act(l) == *l).count();
        datum.weyl_orbit(l).len() * stab != weyl.len()
    });
    report
        .push(Check::from_bool("orbit-stabilizer", orbit_bad.is_none(), "all λ with |λ| ≤ 1", || json!(orbit_bad)));
    let positive: Vec<usize> = datum.positive_roots().collect();
    let data = json!({
        "name": datum.name,
        "rank": datum.rank,
        "semisimple_rank": datum.semisimple_rank(),
        "roots": datum.roots,
        "simple": datum.simple,
        "positive": positive,
        "central_coords": datum.central_coords,
        "weyl_order": weyl.len(),
    });
    Ok((report, data))
}

fn heart_check(datum: &str, x: &str, r: &str, theta: Option<&str>) -> Result<Outcome> {
    let datum = load_datum(datum)?;
    let x = parse_point(x, &datum)?;
    let r = parse_rational(r)?;
    let weyl = enumerate_weyl(&datum)?;
    let thetas = match theta {
        Some(t) => vec![parse_list(t)?],
        None => all_subsets(datum.semisimple_rank()),
    };
    let mut report = VerificationReport::new("heart-check");
    let mut verdicts = Vec::new();
    for theta in &thetas {
        if let Some(&bad) = theta.iter().find(|&&i| i >= datum.semisimple_rank()) {
            return Err(HeckeError::Parse(format!("theta index {bad} out of range")));
        }
        let v = heart_condition1_check(&datum, &weyl, &x, r, theta);
        let name = format!("theta {theta:?}");
        if v.status == HeartStatus::ProvenCondition1 {
            report.push(Check::pass(name, "PROVEN_CONDITION_1"));
            verdicts.push(json!({"verdict": v, "escalation": []}));
            continue;
        }
        let mut words: Vec<&Vec<usize>> = v.witnesses.iter().map(|w| &w.w2_word).collect();
        words.dedup();
        let mut escalation = Vec::new();
        let mut distinct = false;
        for word in words {
            let w2 = datum.weyl_element(word);
            let levi = escalate_mismatch(&datum, &x, r, theta, &w2);
            let gl = if datum.is_gl() { Some(escalate_gl(&datum, &x, r, theta, &w2)?.4) } else { None };
            distinct |= matches!(levi, LeviComparison::DistinctVolume { .. })
                || matches!(gl, Some(ConjugacyObstruction::DistinctVolume { .. }));
            escalation.push(json!({"w2": word, "levi_comparison": levi, "gl_volume": gl}));
        }
        let detail = if distinct { "MISMATCH escalated to DISTINCT_VOLUME" } else { "MISMATCH" };
        report.push(Check::fail(name, detail, json!({"witnesses": v.witnesses, "escalation": escalation})));
        verdicts.push(json!({"verdict": v, "escalation": escalation}));
    }
    let data = json!({"datum": datum.name, "x": x, "r": r.to_string(), "verdicts": verdicts});
    Ok((report, data))
}

fn counterexample() -> Result<Outcome> {
    Ok((suites::counterexample_suite()?, serde_json::to_value(gl3_counterexample()?).expect("serializable")))
}

#[allow(clippy::too_many_arguments)]
fn spade_check(
    bounds: Option<&str>,
    datum: Option<&str>,
    x: Option<&str>,
    r: Option<&str>,
    partition: Option<&str>,
    sign: Sign,
    primes: &[u64],
    cap: u64,
) -> Result<Outcome> {
    let k = match (bounds, datum, x, r) {
        (Some(b), ..) => parse_bounds(b)?,
        (None, Some(d), Some(x), Some(r)) => {
            let datum = load_datum(d)?;
            let x = parse_point(x, &datum)?;
            let profile = hecke_core::apartment::filtration_profile(&datum, &x, parse_rational(r)?);
            ValuationGroupScheme::from_filtration(&profile, &datum)?
        }
        _ => return Err(HeckeError::Parse("give --bounds, or --datum with --x and --r".into())),
    };
    let partitions = match partition {
        Some(p) => vec![p.parse::<Partition>()?],
        None => Partition::all(k.n),
    };
    let signs: &[SignConvention] = match sign {
        Sign::Lower => &[SignConvention::LowerFirst],
        Sign::Upper => &[SignConvention::UpperFirst],
        Sign::Both => &[SignConvention::LowerFirst, SignConvention::UpperFirst],
    };
    let checks: Vec<(Partition, SignConvention)> =
        partitions.iter().flat_map(|p| signs.iter().map(move |s| (p.clone(), *s))).collect();
    let mut report = VerificationReport::new("spade-check");
    let mut all = Vec::new();
    for &p in primes {
        for rep in iwahori_factorization_sweep(&k, &checks, p, cap)? {
            let name = format!("p={p} partition {:?} {:?}", rep.partition.sizes, rep.sign);
            let check = if !rep.passes() {
                Check::fail(name, "no Iwahori factorization", json!(rep))
            } else if rep.status == SpadeStatus::UnverifiedExhaustively {
                Check::skipped(name, format!("analytic count holds; enumeration exceeds the cap of {cap} elements"))
            } else {
                Check::pass(name, format!("analytic and exhaustive ({} elements) agree", rep.elements))
            };
            report.push(check);
            all.push(rep);
        }
    }
    Ok((report, json!({"bounds": k.bounds, "reports": all})))
}

fn clifford(catalog: &str, check: &str) -> Result<Outcome> {
    let mut cat = load_catalog(catalog)?;
    if check != "all" {
        cat.entries.retain(|e| e.name == check);
        if cat.entries.is_empty() {
            return Err(HeckeError::Parse(format!("no catalog entry named {check}")));
        }
    }
    let report = if check == "all" {
        suites::clifford_suite(&cat)?
    } else {
        let mut r = suites::clifford_suite(&cat)?;
        r.checks.retain(|c| c.name != "catalog size");
        r
    };
    let entries = cat.entries.iter().map(|e| evaluate(&FiniteGroupModel::from_spec(e)?)).collect::<Result<Vec<_>>>()?;
    Ok((report, json!({"entries": entries})))
}

fn torus_center(datum: &str, q: u64, radius: i64, check: Option<&str>) -> Result<Outcome> {
    let datum = load_datum(datum)?;
    if radius < 0 {
        return Err(HeckeError::Parse("radius must be nonnegative".into()));
    }
    let rep = torus_center_report(&datum, q, radius)?;
    let mut report = VerificationReport::new("torus-center");
    let counts = rep.orbit_count == rep.burnside_count && rep.orbit_count == rep.kernel_dimension;
    report.push(Check::from_bool(
        "invariant dimension",
        counts,
        format!("orbits {} = Burnside {} = kernel {}", rep.orbit_count, rep.burnside_count, rep.kernel_dimension),
        || json!({"orbits": rep.orbit_count, "burnside": rep.burnside_count, "kernel": rep.kernel_dimension}),
    ));
    match check {
        Some("roc") => {
            for o in &rep.roc {
                report.push(Check::from_bool(
                    format!("orbit of (λ {:?}, χ {:?})", o.representative.lambda, o.representative.chi),
                    o.passes,
                    format!("{} pairs in {} character blocks", o.orbit_size, o.blocks.len()),
                    || json!(o),
                ));
            }
        }
        Some(other) => return Err(HeckeError::Parse(format!("unknown torus-center check {other}"))),
        None => {}
    }
    Ok((report, serde_json::to_value(&rep).expect("serializable")))
}

fn iwahori_center(datum: &str, radius: i64) -> Result<Outcome> {
    let datum = load_datum(datum)?;
    if radius < 0 {
        return Err(HeckeError::Parse("radius must be nonnegative".into()));
    }
    let rep = satake_check(&datum, radius)?;
    let mut report = VerificationReport::new("iwahori-center");
    let rel = &rep.relations;
    report.push(Check::from_bool(
        "relations",
        rel.passes(),
        format!("quadratic, braid, θ-additivity, unit; {} associativity triples", rel.triples_checked),
        || json!(rel),
    ));
    report.push(Check::from_bool("specialization", rep.specialization_coherent, "v = 2", || json!({"v": 2})));
    for b in &rep.basis {
        report.push(Check::from_bool(
            format!("z_{:?} central", b.mu),
            b.central,
            format!("{} terms", b.terms.len()),
            || json!(b),
        ));
    }
    report.push(Check::from_bool(
        "independence",
        rep.independent,
        format!("{} orbit sums", rep.basis.len()),
        || json!({"basis": rep.basis.len()}),
    ));
    report.push(Check::from_bool(
        "center is spanned by orbit sums",
        rep.kernel_is_span,
        format!(
            "kernel dimension {} ({}) over {} labels",
            rep.kernel_dimension, rep.kernel_method, rep.space_dimension
        ),
        || json!({"kernel_dimension": rep.kernel_dimension, "orbit_sums": rep.basis.len()}),
    ));
    Ok((report, serde_json::to_value(&rep).expect("serializable")))
}

fn verify_all(catalog: &str, cap: u64) -> Result<Outcome> {
    let cat = load_catalog(catalog)?;
    let mut report = VerificationReport::new("verify-all");
    for suite in suites::verify_all(&cat, cap)? {
        report.extend(suite);
    }
    Ok((report, Value::Null))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Rootdatum { datum } => rootdatum(datum),
        Command::HeartCheck { datum, x, r, theta } => heart_check(datum, x, r, theta.as_deref()),
        Command::Counterexample => counterexample(),
        Command::SpadeCheck { bounds, datum, x, r, partition, sign, p, cap } => spade_check(
            bounds.as_deref(),
            datum.as_deref(),
            x.as_deref(),
            r.as_deref(),
            partition.as_deref(),
            *sign,
            p,
            *cap,
        ),
        Command::Clifford { catalog, check } => clifford(catalog, check),
        Command::TorusCenter { datum, q, radius, check } => torus_center(datum, *q, *radius, check.as_deref()),
        Command::IwahoriCenter { datum, radius } => iwahori_center(datum, *radius),
        Command::VerifyAll { catalog, spade_cap } => verify_all(catalog, *spade_cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("hck: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (mut report, data) = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("hck: error: {e}");
            return ExitCode::from(2);
        }
    };
    report.wall_time_ms = None;
    if cli.timing {
        report = report.timed(start.elapsed());
    }
    // A closed pipe (`hck ... | head`) is not an error worth reporting.
    let mut out = std::io::stdout().lock();
    let _ = match cli.format {
        Format::Json => {
            let doc = json!({"report": report, "passed": report.passed(), "data": data});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        Format::Text => match report.wall_time_ms {
            Some(ms) => writeln!(out, "{report}\nwall time: {ms} ms"),
            None => writeln!(out, "{report}"),
        },
    };
    ExitCode::from(report.exit_code() as u8)
}

fn in_file(path: &str, e: HeckeError) -> HeckeError {
    match e {
        HeckeError::Parse(m) => HeckeError::Parse(format!("{path}: {m}")),
        other => HeckeError::Parse(format!("{path}: {other}")),
    }
}
