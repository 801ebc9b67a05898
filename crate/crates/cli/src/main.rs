use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use leftq_core::census::{self, Filter};
use leftq_core::extension::{self, ExtensionSpec};
use leftq_core::maltsev::{self, MaltsevStatus};
use leftq_core::verify::{self, SuiteReport, Verdict};
use leftq_core::{fixtures, report, Error, LeftQuasigroup};

const PASS: u8 = 0;
const LEMMA_FAILURE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const BUDGET_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "leftq", version, about = "Finite left quasigroups: structure, commutators and lemma checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Cap on distinct term vectors in the Mal'tsev search.
    #[arg(long, default_value_t = maltsev::DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Structure report for one table (a .lq/JSON file or a fixture name).
    Analyze {
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate or sample tables of one order and filter them.
    Census {
        order: usize,
        #[arg(long)]
        idempotent: bool,
        /// Comma-separated properties, `not-` negates (e.g. `quandle,not-latin`).
        #[arg(long)]
        filter: Option<String>,
        /// Reduce modulo isomorphism before filtering.
        #[arg(long)]
        iso: bool,
        /// Sample this many random tables instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print only the summary.
        #[arg(long)]
        count: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run lemma checks (`all`, a module, a lemma id, or `extension`) over a corpus.
    Verify {
        suite: String,
        /// Add every table of this order to the corpus.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        idempotent: bool,
        /// Sample this many tables of `--order` instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add a table file or fixture name to the corpus.
        #[arg(long = "table")]
        tables: Vec<String>,
        /// Add the whole fixture library (the default corpus).
        #[arg(long)]
        fixtures: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build a central extension from a JSON spec.
    Extend {
        spec: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for a Mal'tsev term.
    Maltsev {
        input: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } => BUDGET_EXHAUSTED,
                _ => INPUT_ERROR,
            })
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Analyze { input, common } => analyze(&input, &common),
        Command::Census { order, idempotent, filter, iso, sample, seed, count, common } => {
            census_cmd(order, idempotent, filter.as_deref(), iso, sample, seed, count, &common)
        }
        Command::Verify { suite, order, idempotent, sample, seed, tables, fixtures, common } => {
            verify_cmd(&suite, order, idempotent, sample, seed, &tables, fixtures, &common)
        }
        Command::Extend { spec, json } => extend(&spec, json),
        Command::Maltsev { input, common } => maltsev_cmd(&input, &common),
    }
}

/// A path to a table file, or failing that a fixture name.
fn load(input: &str) -> Result<LeftQuasigroup, Error> {
    if !Path::new(input).exists() {
        if let Some(q) = fixtures::get(input) {
            return Ok(q);
        }
    }
    let text = std::fs::read_to_string(input).map_err(|e| Error::MalformedInput(format!("{input}: {e}")))?;
    LeftQuasigroup::parse(&text)
}

fn analyze(input: &str, common: &Common) -> Result<u8, Error> {
    let q = load(input)?;
    let a = report::analyze(&q, common.budget)?;
    if common.json {
        println!("{}", a.to_json());
    } else {
        print!("{}", a.to_text());
    }
    Ok(if a.budget_exhausted() { BUDGET_EXHAUSTED } else { PASS })
}

#[allow(clippy::too_many_arguments)]
fn census_cmd(
    order: usize,
    idempotent: bool,
    filter: Option<&str>,
    iso: bool,
    sample: Option<usize>,
    seed: u64,
    count_only: bool,
    common: &Common,
) -> Result<u8, Error> {
    let filter = filter.map(Filter::parse).transpose()?.unwrap_or_default();
    let tables: Vec<LeftQuasigroup> = match sample {
        Some(k) => census::sample(order, k, idempotent, seed)?,
        None if idempotent => census::idempotent_tables(order)?.collect(),
        None => census::all_tables(order)?.collect(),
    };
    let total = tables.len();
    let candidates: Vec<(LeftQuasigroup, usize)> = if iso {
        census::iso_classes(tables).into_iter().map(|c| (c.representative, c.size)).collect()
    } else {
        tables.into_iter().map(|q| (q, 1)).collect()
    };
    let classes = candidates.len();
    let (mut matching, mut undecided) = (Vec::new(), 0);
    for (q, size) in candidates {
        match filter.matches(&q)? {
            Some(true) => matching.push((q, size)),
            Some(false) => {}
            None => undecided += 1,
        }
    }
    let covered: usize = matching.iter().map(|(_, s)| s).sum();
    if common.json {
        let instances: Vec<_> = matching.iter().map(|(q, s)| json!({"table": q.rows(), "class_size": s})).collect();
        let mut out = json!({
            "order": order,
            "idempotent": idempotent,
            "sampled": sample.is_some(),
            "seed": seed,
            "filter": filter.to_string(),
            "total": total,
            "matching": matching.len(),
            "undecided": undecided,
        });
        if iso {
            out["classes"] = json!(classes);
            out["tables_in_matching_classes"] = json!(covered);
        }
        if !count_only {
            out["instances"] = json!(instances);
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        if !count_only {
            for (q, size) in &matching {
                if iso {
                    println!("# class size {size}");
                }
                println!("{}", q.to_lq());
            }
        }
        let what = if iso { format!("{classes} classes of {total} tables") } else { format!("{total} tables") };
        println!("{} matching among {what}; {undecided} undecided", matching.len());
    }
    Ok(if undecided > 0 { BUDGET_EXHAUSTED } else { PASS })
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    suite: &str,
    order: Option<usize>,
    idempotent: bool,
    sample: Option<usize>,
    seed: u64,
    tables: &[String],
    add_fixtures: bool,
    common: &Common,
) -> Result<u8, Error> {
    let report = if suite == "extension" {
        verify::extension_suite(seed, sample.unwrap_or(100))?
    } else {
        let lemmas = verify::select(suite)?;
        let mut corpus: Vec<LeftQuasigroup> = Vec::new();
        if add_fixtures || (order.is_none() && tables.is_empty()) {
            corpus.extend(fixtures::all().into_iter().map(|(_, q)| q));
        }
        for t in tables {
            corpus.push(load(t)?);
        }
        if let Some(n) = order {
            match sample {
                Some(k) => corpus.extend(census::sample(n, k, idempotent, seed)?),
                None if idempotent => corpus.extend(census::idempotent_tables(n)?),
                None => corpus.extend(census::all_tables(n)?),
            }
        }
        verify::run_suite(&lemmas, &corpus, common.budget)
    };
    print_suite(&report, common.json);
    Ok(if report.failures() > 0 {
        LEMMA_FAILURE
    } else if report.unknowns() > 0 {
        BUDGET_EXHAUSTED
    } else {
        PASS
    })
}

fn print_suite(report: &SuiteReport, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report).expect("serializable"));
        return;
    }
    println!("instances: {}", report.instances);
    for t in &report.lemmas {
        println!(
            "{:<32} pass {:>6}  fail {:>4}  skipped {:>6}  unknown {:>4}",
            t.id, t.pass, t.fail, t.skipped, t.unknown
        );
    }
    for t in report.lemmas.iter().filter(|t| t.fail > 0) {
        if let Some(Verdict::Fail { table, witness }) = &t.first_failure {
            println!("\nFAIL {}: {witness}\n{}", t.id, table.trim_end());
        }
    }
    let verdict = if report.failures() > 0 {
        "fail"
    } else if report.unknowns() > 0 {
        "unknown"
    } else {
        "pass"
    };
    println!("\nresult: {verdict}");
}

fn extend(path: &str, as_json: bool) -> Result<u8, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::MalformedInput(format!("{path}: {e}")))?;
    let spec = ExtensionSpec::from_json(&text)?;
    let e = extension::central_extension(&spec)?;
    let idem = extension::idempotence_check(&spec)?;
    let latin = extension::latin_check(&spec)?;
    if as_json {
        let out = json!({
            "table": e.algebra.rows(),
            "kernel": e.kernel,
            "idempotent": idem,
            "latin": latin,
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        print!("{}", e.algebra.to_lq());
        println!("# kernel: [{}]", e.kernel);
        println!("# idempotent: predicted {}, observed {}", idem.predicted, idem.observed);
        println!("# latin: predicted {}, observed {}", latin.predicted, latin.observed);
    }
    Ok(PASS)
}

fn maltsev_cmd(input: &str, common: &Common) -> Result<u8, Error> {
    let q = load(input)?;
    let r = maltsev::maltsev_search(&q, common.budget);
    if common.json {
        println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
    } else {
        println!("status: {}", r.status.name());
        println!("explored: {}", r.explored);
        if let Some(w) = &r.witness {
            let n = q.order();
            println!("witness m(a,b,c), one block per a:");
            for block in w.chunks(n * n) {
                for row in block.chunks(n) {
                    println!("{}", row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                }
                println!();
            }
        }
    }
    Ok(if r.status == MaltsevStatus::Unknown { BUDGET_EXHAUSTED } else { PASS })
}
