use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pmqkit_core::aq::{aq_basis, aq_structure_constants, hilbert_series};
use pmqkit_core::completion::{completion_classes, DEFAULT_WORD_BUDGET};
use pmqkit_core::crosscheck::{crosscheck, RunReport, DEFAULT_CROSSCHECK_BUDGET};
use pmqkit_core::enveloping::{enveloping_abelianization, inner_automorphism_group, DEFAULT_GROUP_BUDGET};
use pmqkit_core::group::{builtin_group, FiniteGroup, BUILTIN_GROUPS};
use pmqkit_core::hurwitz::{enumerate_orbits, HurwitzDomain, OrbitOptions, DEFAULT_STATE_BUDGET};
use pmqkit_core::io::{canonical_json, group_document, parse_group_document, parse_pmq_document, pmq_document, Parsed};
use pmqkit_core::pmq::conjugacy_classes;
use pmqkit_core::sullivan::stable_hurwitz_betti;
use pmqkit_core::{builtins, Error, ErrorKind};

#[derive(Parser)]
#[command(name = "pmqkit", version, about = "Computations with finite partially multiplicative quandles")]
struct Cli {
    /// Cap on enumerated states (words, tuples, group elements, monomials).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Include wall-clock time in the report; output is then no longer reproducible.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the PMQ axioms and, if present, the pair axioms.
    Validate {
        #[arg(long)]
        input: String,
    },
    /// Conjugacy classes, and the orbits of the pair's group if present.
    Classes {
        #[arg(long)]
        input: String,
    },
    /// Elements of the completion monoid in one norm.
    Completion {
        #[arg(long)]
        input: String,
        #[arg(long)]
        norm: u32,
        #[arg(long)]
        members: bool,
    },
    /// Inner-automorphism image of the enveloping group and its abelianization.
    Enveloping {
        #[arg(long)]
        input: String,
    },
    /// Braid orbits on tuples of elements of a conjugation-closed subset.
    Hurwitz {
        #[arg(long)]
        group: String,
        /// Comma-separated element indices, `class:N` or `nonidentity`.
        #[arg(long)]
        class: String,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        total: Option<usize>,
        #[arg(long)]
        members: bool,
    },
    /// Graded basis, structure constants and Hilbert series of the invariant ring.
    Aq {
        #[arg(long)]
        input: String,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Stable rational Betti numbers of Hurwitz spaces.
    Betti {
        #[arg(long)]
        group: String,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 6)]
        max_deg: u32,
    },
    /// Run every applicable consistency check.
    Crosscheck {
        #[arg(long)]
        input: String,
    },
    /// List built-in PMQs and groups, or print one as a document.
    Builtins {
        name: Option<String>,
        /// Print the built-in group NAME instead of a PMQ.
        #[arg(long)]
        group: bool,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    /// A report was printed but the checks it carries did not all pass.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_source(spec: &str) -> CliResult<Vec<u8>> {
    std::fs::read(Path::new(spec)).map_err(|e| Failure::Usage(format!("cannot read {spec}: {e}")))
}

fn load_pmq(spec: &str) -> CliResult<(Vec<u8>, Parsed)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let built = builtins::builtin(name)?;
        let pair = built.pair()?;
        let bytes = canonical_json(&pmq_document(&built.pmq, Some(&pair))).into_bytes();
        return Ok((bytes, Parsed { pmq: built.pmq, pair: Some(pair) }));
    }
    let bytes = read_source(spec)?;
    let parsed = parse_pmq_document(&bytes)?;
    Ok((bytes, parsed))
}

fn load_group(spec: &str) -> CliResult<(Vec<u8>, FiniteGroup)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let g = builtin_group(name).ok_or_else(|| Failure::Usage(format!("unknown built-in group {name}")))?;
        let bytes = canonical_json(&group_document(&g)).into_bytes();
        return Ok((bytes, g));
    }
    let bytes = read_source(spec)?;
    let g = parse_group_document(&bytes)?;
    Ok((bytes, g))
}

fn parse_class(g: &FiniteGroup, spec: &str) -> CliResult<Vec<usize>> {
    let classes = g.conjugacy_classes();
    let mut out = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if token == "nonidentity" {
            out.extend((0..g.order()).filter(|&x| x != g.identity()));
        } else if let Some(k) = token.strip_prefix("class:") {
            let k: usize = k.parse().map_err(|_| Failure::Usage(format!("bad class index in {token}")))?;
            let class = classes
                .get(k)
                .ok_or_else(|| Failure::Usage(format!("the group has {} classes", classes.len())))?;
            out.extend(class);
        } else {
            let x: usize = token.parse().map_err(|_| Failure::Usage(format!("bad element {token}")))?;
            if x >= g.order() {
                return Err(Failure::Usage(format!("{x} is not an element of a group of order {}", g.order())));
            }
            out.push(x);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(Failure::Usage("empty --class".into()));
    }
    Ok(out)
}

fn emit(report: RunReport) {
    print!("{}", canonical_json(&report));
}

fn run(cli: Cli) -> CliResult<()> {
    let started = Instant::now();
    let budget = cli.budget;
    let finish = |mut report: RunReport| {
        if cli.timing {
            report.elapsed_ms = Some(started.elapsed().as_millis() as u64);
        }
        emit(report);
    };
    match cli.command {
        Command::Validate { input } => {
            let bytes = match input.strip_prefix("builtin:") {
                Some(_) => load_pmq(&input)?.0,
                None => read_source(&input)?,
            };
            let params = json!({ "input": input });
            let results = match parse_pmq_document(&bytes) {
                Ok(p) => json!({
                    "valid": true,
                    "size": p.pmq.size(),
                    "unit": p.pmq.unit(),
                    "normed": p.pmq.is_normed(),
                    "augmented": p.pmq.is_augmented(),
                    "trivial_product": p.pmq.has_trivial_product(),
                    "complete": p.pmq.is_complete(),
                    "pair": p.pair.as_ref().map(|x| json!({ "group_order": x.group().order() })),
                }),
                Err(Error::PmqAxioms(v)) => {
                    finish(RunReport::new("validate", &bytes, params, json!({ "valid": false, "pmq_violations": v })));
                    return Err(Failure::Checks);
                }
                Err(Error::PairAxioms(v)) => {
                    finish(RunReport::new("validate", &bytes, params, json!({ "valid": false, "pair_violations": v })));
                    return Err(Failure::Checks);
                }
                Err(e) => return Err(e.into()),
            };
            finish(RunReport::new("validate", &bytes, params, results));
        }
        Command::Classes { input } => {
            let (bytes, p) = load_pmq(&input)?;
            let results = json!({
                "classes": conjugacy_classes(&p.pmq),
                "orbits": p.pair.as_ref().map(|x| x.orbits()),
            });
            finish(RunReport::new("classes", &bytes, json!({ "input": input }), results));
        }
        Command::Completion { input, norm, members } => {
            let (bytes, p) = load_pmq(&input)?;
            let classes = completion_classes(&p.pmq, norm, members, budget.unwrap_or(DEFAULT_WORD_BUDGET))?;
            let params = json!({ "input": input, "norm": norm, "members": members, "budget": budget });
            finish(RunReport::new("completion", &bytes, params, json!({ "classes": classes })));
        }
        Command::Enveloping { input } => {
            let (bytes, p) = load_pmq(&input)?;
            let inner = inner_automorphism_group(&p.pmq, budget.unwrap_or(DEFAULT_GROUP_BUDGET))?;
            let ab = enveloping_abelianization(&p.pmq)?;
            let results = json!({ "order": inner.order(), "abelianization": ab });
            finish(RunReport::new("enveloping", &bytes, json!({ "input": input, "budget": budget }), results));
        }
        Command::Hurwitz { group, class, length, total, members } => {
            let (bytes, g) = load_group(&group)?;
            let c = parse_class(&g, &class)?;
            let domain = HurwitzDomain::from_group(&g, &c)?;
            let options = OrbitOptions {
                fix_total: total,
                budget: budget.unwrap_or(DEFAULT_STATE_BUDGET),
                keep_members: members,
            };
            let orbits = enumerate_orbits(&domain, length, options)?;
            let params = json!({
                "group": group, "class": c, "length": length, "total": total,
                "members": members, "budget": budget,
            });
            finish(RunReport::new("hurwitz", &bytes, params, json!({ "orbits": orbits })));
        }
        Command::Aq { input, max_deg } => {
            let (bytes, p) = load_pmq(&input)?;
            let pair = p.pair.as_ref();
            let basis = aq_basis(&p.pmq, pair)?;
            let sc = aq_structure_constants(&p.pmq, pair)?;
            let top = basis.degrees().into_iter().max().unwrap_or(0) as usize;
            let hilbert = hilbert_series(&p.pmq, pair, max_deg.unwrap_or(top))?;
            let structure: Vec<Value> = (0..sc.len())
                .flat_map(|i| (0..sc.len()).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let terms: Vec<Value> = sc.terms(i, j).into_iter().map(|(t, c)| json!({ "T": t, "coeff": c })).collect();
                    json!({ "S": i, "S'": j, "terms": terms })
                })
                .collect();
            let results = json!({ "basis": basis.classes, "structure": structure, "hilbert": hilbert });
            finish(RunReport::new("aq", &bytes, json!({ "input": input, "max_deg": max_deg }), results));
        }
        Command::Betti { group, class, max_deg } => {
            let (bytes, g) = load_group(&group)?;
            let c = parse_class(&g, &class)?;
            let r = stable_hurwitz_betti(&g, &c, max_deg)?;
            let params = json!({ "group": group, "class": c, "max_deg": max_deg });
            finish(RunReport::new("betti", &bytes, params, serde_json::to_value(&r).expect("serializable")));
        }
        Command::Crosscheck { input } => {
            let (bytes, p) = load_pmq(&input)?;
            let b = budget.unwrap_or(DEFAULT_CROSSCHECK_BUDGET);
            let report = crosscheck(&p.pmq, p.pair.as_ref(), b)?;
            let ok = report.ok();
            let params = json!({ "input": input, "budget": b });
            finish(RunReport::new("crosscheck", &bytes, params, serde_json::to_value(&report).expect("serializable")));
            if !ok {
                return Err(Failure::Checks);
            }
        }
        Command::Builtins { name: None, .. } => {
            let results = json!({ "pmqs": builtins::names(), "groups": BUILTIN_GROUPS });
            finish(RunReport::new("builtins", b"", json!({}), results));
        }
        Command::Builtins { name: Some(name), group: true } => {
            let g = builtin_group(&name).ok_or_else(|| Failure::Usage(format!("unknown built-in group {name}")))?;
            print!("{}", canonical_json(&group_document(&g)));
        }
        Command::Builtins { name: Some(name), group: false } => {
            let built = builtins::builtin(&name)?;
            let pair = built.pair()?;
            print!("{}", canonical_json(&pmq_document(&built.pmq, Some(&pair))));
        }
    }
    Ok(())
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("PMQKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("PMQKIT_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn error_json(e: &Error) -> Value {
    let kind = match e.kind() {
        ErrorKind::Validation => "validation",
        ErrorKind::Budget => "budget",
        ErrorKind::MalformedInput => "malformed-input",
        ErrorKind::Internal => "internal",
    };
    let mut out = json!({ "kind": kind, "message": e.to_string() });
    match e {
        Error::PmqAxioms(v) => out["violations"] = json!(v),
        Error::PairAxioms(v) => out["violations"] = json!(v),
        _ => {}
    }
    json!({ "error": out })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprint!("{}", canonical_json(&json!({ "error": { "kind": "malformed-input", "message": msg } })));
            ExitCode::from(4)
        }
        Err(Failure::Core(e)) => {
            eprint!("{}", canonical_json(&error_json(&e)));
            ExitCode::from(match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Budget => 3,
                ErrorKind::MalformedInput => 4,
                ErrorKind::Internal => 1,
            })
        }
    }
}
