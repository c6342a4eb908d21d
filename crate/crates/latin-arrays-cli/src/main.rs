//! Command-line front end: transversal checks, canonical forms,
//! catalogue construction, and the summary tables.
//!
//! Exit codes: 0 = success, 1 = the queried property is violated or no
//! witness exists (e.g. `check` on a transversal-free array), 2 = usage or
//! input error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use latin_arrays::catalogue::{
    compute_ell, enumerate_partial_catalogue, extend_catalogue, generate_order6_constructions,
    table1_report, table2_report, CatalogueRecord, CatalogueStore, EnumerateOptions,
    ExtendOptions,
};
use latin_arrays::certificates::{
    guarantee_transversal, verify_delta_certificate, ArrayKind, DeltaCertificate,
};
use latin_arrays::lll::{lll_condition, random_transversal_search};
use latin_arrays::sample::{random_latin_array, random_latin_square, random_row_latin_array};
use latin_arrays::transversal::{
    count_transversals, find_transversal, max_partial_transversal,
};
use latin_arrays::trisotopy::{canonical_form_limited, DEFAULT_ORDER_LIMIT};
use latin_arrays::{parse_array, render_array, GridArray};

#[derive(Parser)]
#[command(name = "latin-arrays", version, about = "Transversals in Latin arrays")]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker thread count for parallel commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search one array for a transversal.
    Check { file: PathBuf },
    /// Count all transversals of one array.
    Count { file: PathBuf },
    /// Maximum partial transversal length with a witness.
    Maxpt { file: PathBuf },
    /// Canonical trisotopy key of one array.
    Canon {
        file: PathBuf,
        /// Order cap for the canonicalization search.
        #[arg(long, default_value_t = DEFAULT_ORDER_LIMIT)]
        limit_order: usize,
    },
    /// Group arrays from several files into trisotopy classes.
    Dedupe {
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORDER_LIMIT)]
        limit_order: usize,
    },
    /// Enumerate the transversal-free partial catalogue of one order.
    Catalogue {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        max_holes_per_line: usize,
        #[arg(long)]
        max_total_holes: Option<usize>,
        /// Cap on distinct symbols; classes above the cap are omitted but
        /// counts at or below it remain exact.
        #[arg(long)]
        max_symbols: Option<usize>,
        /// Output JSON-lines file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend an order-(n-2) catalogue to order n.
    Extend {
        /// Seed catalogue (JSON-lines).
        #[arg(long)]
        from: PathBuf,
        /// Target order n.
        #[arg(long)]
        order: usize,
        /// Resumable per-seed results directory.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Process only shard A of B, formatted "A/B".
        #[arg(long)]
        shard: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold ell(n) from a complete hole-free catalogue.
    Ell {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        from: PathBuf,
    },
    /// Class-count summary across orders 2..=upto.
    Table1 {
        #[arg(long, default_value_t = 6)]
        upto: usize,
        /// Directory of c{n}.jsonl catalogue files.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Build missing catalogues (n <= 4 fast; 5-6 may take long).
        #[arg(long)]
        build: bool,
    },
    /// Hole/symbol class counts of a partial catalogue.
    Table2 {
        #[arg(long)]
        from: PathBuf,
        /// Show only rows with at most this many holes.
        #[arg(long)]
        holes: Option<usize>,
    },
    /// The nineteen order-6 seven-symbol transversal-free classes.
    Constructions {
        /// Also verify transversal-freeness and pairwise inequivalence.
        #[arg(long)]
        verify: bool,
    },
    /// Check the Z3-weighting certificate on an order-6 array.
    DeltaVerify { file: PathBuf },
    /// Exact symbol-count thresholds guaranteeing a transversal.
    Bounds {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        symbols: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Latin)]
        kind: KindArg,
    },
    /// Clique local-lemma condition for one array.
    Lll {
        file: PathBuf,
        /// Also run the seeded randomized search.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_restarts: usize,
    },
    /// Seeded random test arrays.
    Sample(SampleArgs),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    order: usize,
    /// Distinct symbol count (defaults to the order).
    #[arg(long)]
    symbols: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::Latin)]
    kind: KindArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Latin,
    RowLatin,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        configure_jobs(jobs);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_jobs(jobs: usize) {
    // ignore failure: the global pool can only be set once
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global();
}

#[cfg(not(feature = "parallel"))]
fn configure_jobs(_jobs: usize) {}

fn load_array(path: &Path) -> Result<GridArray, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_array(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_store(path: &Path) -> Result<CatalogueStore, String> {
    CatalogueStore::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit_store(store: &CatalogueStore, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => store.save(path).map_err(|e| e.to_string()),
        None => {
            for r in store.sorted_records() {
                println!("{}", serde_json::to_string(r).map_err(|e| e.to_string())?);
            }
            Ok(())
        }
    }
}

/// Hole-free transversal-free catalogue of order `n`: direct enumeration
/// for small orders, otherwise extension of the complete order-`n-2`
/// partial catalogue.
fn build_hole_free_catalogue(n: usize) -> Result<CatalogueStore, String> {
    if n <= 3 {
        let opts = EnumerateOptions {
            max_holes_per_line: 0,
            max_total_holes: Some(0),
            ..EnumerateOptions::default()
        };
        return enumerate_partial_catalogue(n, &opts).map_err(|e| e.to_string());
    }
    let seeds =
        enumerate_partial_catalogue(n - 2, &EnumerateOptions::default()).map_err(|e| e.to_string())?;
    extend_catalogue(&seeds, n, &ExtendOptions::default()).map_err(|e| e.to_string())
}

const OK: ExitCode = ExitCode::SUCCESS;
const NEGATIVE: ExitCode = ExitCode::FAILURE;

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Check { file } => {
            let a = load_array(file)?;
            match find_transversal(&a) {
                Some(t) => {
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({"transversal": t.to_labelled_json(&a)})
                        );
                    } else {
                        println!("transversal: {}", format_transversal(&a, &t));
                    }
                    Ok(OK)
                }
                None => {
                    if cli.json {
                        println!("{}", serde_json::json!({"transversal": null}));
                    } else {
                        println!("no transversal");
                    }
                    Ok(NEGATIVE)
                }
            }
        }
        Command::Count { file } => {
            let a = load_array(file)?;
            let count = count_transversals(&a);
            if cli.json {
                println!("{}", serde_json::json!({"count": count}));
            } else {
                println!("{count}");
            }
            Ok(OK)
        }
        Command::Maxpt { file } => {
            let a = load_array(file)?;
            let (len, witness) = max_partial_transversal(&a);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "length": len,
                        "witness": witness.to_labelled_json(&a),
                    })
                );
            } else {
                println!("{len}: {}", format_transversal(&a, &witness));
            }
            Ok(OK)
        }
        Command::Canon { file, limit_order } => {
            let a = load_array(file)?;
            let key = canonical_form_limited(&a, *limit_order).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", serde_json::json!({"key": key.to_string()}));
            } else {
                println!("{key}");
            }
            Ok(OK)
        }
        Command::Dedupe { files, limit_order } => {
            if files.is_empty() {
                return Err("dedupe needs at least one file".into());
            }
            let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
            for f in files {
                let a = load_array(f)?;
                let key = canonical_form_limited(&a, *limit_order).map_err(|e| e.to_string())?;
                classes
                    .entry(key.to_string())
                    .or_default()
                    .push(f.display().to_string());
            }
            if cli.json {
                println!("{}", serde_json::json!(classes));
            } else {
                for (key, members) in &classes {
                    println!("{key}");
                    for m in members {
                        println!("  {m}");
                    }
                }
            }
            println!("# {} classes", classes.len());
            Ok(OK)
        }
        Command::Catalogue {
            order,
            max_holes_per_line,
            max_total_holes,
            max_symbols,
            out,
        } => {
            let opts = EnumerateOptions {
                max_holes_per_line: *max_holes_per_line,
                max_total_holes: *max_total_holes,
                max_symbols: *max_symbols,
            };
            eprintln!("# enumerating order-{order} catalogue ...");
            let store =
                enumerate_partial_catalogue(*order, &opts).map_err(|e| e.to_string())?;
            eprintln!(
                "# done: {} classes ({})",
                store.len(),
                if store.complete { "complete" } else { "capped" }
            );
            emit_store(&store, out.as_ref())?;
            Ok(OK)
        }
        Command::Extend {
            from,
            order,
            checkpoint,
            shard,
            out,
        } => {
            let seeds = load_store(from)?;
            let shard = shard.as_deref().map(parse_shard).transpose()?;
            let opts = ExtendOptions {
                shard,
                checkpoint: checkpoint.clone(),
            };
            let store = extend_with_heartbeat(&seeds, *order, &opts)?;
            eprintln!(
                "# done: {} classes ({})",
                store.len(),
                if store.complete { "complete" } else { "partial" }
            );
            emit_store(&store, out.as_ref())?;
            Ok(OK)
        }
        Command::Ell { order, from } => {
            let store = load_store(from)?;
            let ell = compute_ell(*order, &store).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", serde_json::json!({"n": order, "ell": ell}));
            } else {
                println!("{ell}");
            }
            Ok(OK)
        }
        Command::Table1 { upto, from, build } => {
            let mut catalogues = BTreeMap::new();
            for n in 2..=*upto {
                if let Some(dir) = from {
                    let path = dir.join(format!("c{n}.jsonl"));
                    if path.exists() {
                        catalogues.insert(n, load_store(&path)?);
                        continue;
                    }
                }
                if *build {
                    eprintln!("# building order-{n} catalogue via extension ...");
                    catalogues.insert(n, build_hole_free_catalogue(n)?);
                }
            }
            let rows = table1_report(&catalogues, *upto);
            if cli.json {
                println!("{}", serde_json::to_string(&rows).map_err(|e| e.to_string())?);
            } else {
                println!("n  ell  n-syms  n+1-syms  n+2-syms  total");
                for r in &rows {
                    let ell = r
                        .ell
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "incomplete".into());
                    println!(
                        "{}  {}  {}  {}  {}  {}{}",
                        r.n,
                        ell,
                        r.classes_n,
                        r.classes_n_plus_1,
                        r.classes_n_plus_2,
                        r.total,
                        if r.complete { "" } else { "  (incomplete)" }
                    );
                }
            }
            Ok(OK)
        }
        Command::Table2 { from, holes } => {
            let store = load_store(from)?;
            let mut report = table2_report(&store);
            if let Some(h) = holes {
                report.counts.retain(|c| c.holes <= *h);
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&report).map_err(|e| e.to_string())?
                );
            } else {
                println!("holes  symbols  classes");
                for c in &report.counts {
                    println!("{}  {}  {}", c.holes, c.symbols, c.classes);
                }
                println!(
                    "# total {}{}",
                    report.total,
                    if report.complete { "" } else { " (incomplete)" }
                );
            }
            Ok(OK)
        }
        Command::Constructions { verify } => {
            let all = generate_order6_constructions();
            let mut ok = true;
            let mut keys = Vec::new();
            for (i, a) in all.iter().enumerate() {
                if *verify {
                    let tf = count_transversals(a) == 0;
                    let key = canonical_form_limited(a, 6).map_err(|e| e.to_string())?;
                    ok &= tf && a.is_latin() && a.num_symbols() == 7;
                    keys.push(key.to_string());
                }
                if cli.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "index": i + 1,
                            "rows": render_array(a).lines().collect::<Vec<_>>(),
                        })
                    );
                } else {
                    println!("# {}", i + 1);
                    print!("{}", render_array(a));
                    println!();
                }
            }
            if *verify {
                keys.sort();
                keys.dedup();
                ok &= keys.len() == all.len();
                eprintln!(
                    "# verification: {}",
                    if ok { "all pass" } else { "FAILED" }
                );
                return Ok(if ok { OK } else { NEGATIVE });
            }
            Ok(OK)
        }
        Command::DeltaVerify { file } => {
            let a = load_array(file)?;
            let cert = DeltaCertificate::order6_by_labels(&a)
                .or_else(|_| -> Result<_, String> { Ok(DeltaCertificate::order6_standard()) })?;
            let accepted = verify_delta_certificate(&a, &cert).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", serde_json::json!({"certified": accepted}));
            } else {
                println!(
                    "{}",
                    if accepted {
                        "certified transversal-free"
                    } else {
                        "not certified"
                    }
                );
            }
            Ok(if accepted { OK } else { NEGATIVE })
        }
        Command::Bounds {
            order,
            symbols,
            kind,
        } => {
            let kind = match kind {
                KindArg::Latin => ArrayKind::Latin,
                KindArg::RowLatin => ArrayKind::RowLatin,
            };
            let report =
                guarantee_transversal(*order, *symbols, kind).map_err(|e| e.to_string())?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&report).map_err(|e| e.to_string())?
                );
            } else {
                println!(
                    "thresholds at n={}: latin {}, row-latin {}, lll {}",
                    report.n, report.latin_threshold, report.row_latin_threshold,
                    report.lll_threshold
                );
                if report.fired.is_empty() {
                    println!("no guarantee fires at s={}", report.s);
                } else {
                    println!("guarantees at s={}: {}", report.s, report.fired.join(", "));
                }
            }
            Ok(if report.any_fired() { OK } else { NEGATIVE })
        }
        Command::Lll {
            file,
            search,
            seed,
            max_restarts,
        } => {
            let a = load_array(file)?;
            let report = lll_condition(&a).map_err(|e| e.to_string())?;
            let mut found = None;
            if *search {
                let (witness, stats) = random_transversal_search(&a, *seed, *max_restarts);
                eprintln!(
                    "# search: seed {} restarts {} proposals {}",
                    stats.seed, stats.restarts, stats.proposals
                );
                found = witness;
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "kappa": report.kappa,
                        "mu": report.mu,
                        "x": report.x,
                        "guaranteed": report.guaranteed,
                        "witness": found.as_ref().map(|t| t.to_labelled_json(&a)),
                    })
                );
            } else {
                println!(
                    "kappa={} mu={} x={} guaranteed={}",
                    report.kappa, report.mu, report.x, report.guaranteed
                );
                if let Some(t) = &found {
                    println!("witness: {}", format_transversal(&a, t));
                }
            }
            Ok(if report.guaranteed || found.is_some() {
                OK
            } else {
                NEGATIVE
            })
        }
        Command::Sample(args) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            let s = args.symbols.unwrap_or(args.order);
            for i in 0..args.count {
                let a = match args.kind {
                    KindArg::Latin if s == args.order => random_latin_square(args.order, &mut rng),
                    KindArg::Latin => random_latin_array(args.order, s, &mut rng),
                    KindArg::RowLatin => random_row_latin_array(args.order, s, &mut rng),
                }
                .map_err(|e| e.to_string())?;
                if cli.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "index": i,
                            "rows": render_array(&a).lines().collect::<Vec<_>>(),
                        })
                    );
                } else {
                    if i > 0 {
                        println!();
                    }
                    print!("{}", render_array(&a));
                }
            }
            Ok(OK)
        }
    }
}

fn format_transversal(a: &GridArray, t: &latin_arrays::Transversal) -> String {
    t.entries()
        .iter()
        .map(|e| format!("({},{},{})", e.row, e.col, a.label(e.sym)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_shard(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('/')
        .ok_or_else(|| format!("bad shard spec {s:?}, expected A/B"))?;
    let a: usize = a.parse().map_err(|_| format!("bad shard index in {s:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad shard count in {s:?}"))?;
    if b == 0 || a >= b {
        return Err(format!("shard index must satisfy A < B in {s:?}"));
    }
    Ok((a, b))
}

/// Runs the extension in chunks so a heartbeat can go to stderr between
/// them; results are identical to one flat call.
fn extend_with_heartbeat(
    seeds: &CatalogueStore,
    order: usize,
    opts: &ExtendOptions,
) -> Result<CatalogueStore, String> {
    const CHUNKS: usize = 64;
    if seeds.len() <= CHUNKS {
        return extend_catalogue(seeds, order, opts).map_err(|e| e.to_string());
    }
    // split by sub-sharding within any user shard
    let mut out = CatalogueStore::new();
    let keep_complete = seeds.complete && opts.shard.is_none();
    let sorted: Vec<&CatalogueRecord> = seeds.sorted_records();
    for chunk_index in 0..CHUNKS {
        let mut part = CatalogueStore::new();
        part.complete = seeds.complete;
        for (i, r) in sorted.iter().enumerate() {
            let in_shard = match opts.shard {
                Some((index_mod, count)) => i % count == index_mod,
                None => true,
            };
            if in_shard && i % CHUNKS == chunk_index {
                part.insert((*r).clone());
            }
        }
        let done = extend_catalogue(&part, order, &ExtendOptions {
            shard: None,
            checkpoint: opts.checkpoint.clone(),
        })
        .map_err(|e| e.to_string())?;
        out.merge(done);
        eprintln!(
            "# heartbeat: chunk {}/{CHUNKS}, {} classes so far",
            chunk_index + 1,
            out.len()
        );
    }
    out.complete = keep_complete;
    Ok(out)
}
