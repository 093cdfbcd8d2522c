//! `nct` — classify torus automorphisms and run the measurement
//! instruments from the command line.
//!
//! Global flags may also come from a `--config` file of `key = value`
//! lines (`#` comments); explicit flags win. Exit codes: 0 success,
//! 2 usage error, 3 numerical-invariant violation, 1 anything else.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nct_core::afl::{afl_profile, builtin_partition, AflProfile, BuiltinPartition};
use nct_core::depth::{DepthLab, MAX_PROGRAM_LEN};
use nct_core::dynamics::{
    lattice_orbit_word, symbolic_translate, GridPartition, TorusAction, TorusPoint,
};
use nct_core::entropy::{block_entropy_profile, brudno_rate, BlockEntropyProfile};
use nct_core::report::{classify_automorphism, ClassifyOptions};
use nct_core::rng::SplitMix64;
use nct_core::sl2z::{classify_matrix, sweep_classify, SL2Matrix, SpectralReport, TraceMode};
use nct_core::weyl::ThetaParam;
use nct_core::words::SymbolicWord;
use nct_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "nct", version, about = "Entropy and depth instruments for SL(2,Z) torus automorphisms")]
struct Cli {
    /// Report entropies in nats instead of bits where applicable.
    #[arg(long, global = true)]
    nats: bool,

    /// Seed for all randomness (echoed in outputs).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Fixed-point fractional bits for orbit arithmetic.
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Chaoticity criterion: paper (Tr > 2) or hyperbolic (|Tr| > 2).
    #[arg(long, global = true, value_name = "MODE")]
    trace_mode: Option<String>,

    /// Output format: json or tsv.
    #[arg(long, global = true, value_name = "FMT")]
    out: Option<String>,

    /// Config file of key = value lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EvidenceArgs {
    /// Partition family for the entropy-production profile.
    #[arg(long, default_value = "weyl8")]
    afl_partition: String,

    /// Profile depth for the entropy-production evidence.
    #[arg(long, default_value_t = 4)]
    afl_maxn: usize,

    /// Grid size for compression-rate evidence.
    #[arg(long, default_value_t = 4)]
    brudno_grid: u32,

    /// Word length for compression-rate evidence.
    #[arg(long, default_value_t = 65536)]
    brudno_length: usize,

    /// Ensemble size for compression-rate evidence.
    #[arg(long, default_value_t = 4)]
    brudno_seeds: u64,

    /// Binary prefix length fed to the depth machine.
    #[arg(long, default_value_t = 12)]
    depth_bits: usize,

    /// Significance level for the depth bracket.
    #[arg(long, default_value_t = 1)]
    depth_significance: u32,

    /// Program-length budget for the depth bracket.
    #[arg(long, default_value_t = 14)]
    depth_max_prog_len: u32,

    /// Step budget for the depth bracket.
    #[arg(long, default_value_t = 1024)]
    depth_budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one automorphism; empirical evidence only where no
    /// theorem decides (see `report` for the full panel).
    Classify {
        /// Matrix entries a,b,c,d (row-major, determinant 1).
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Deformation parameter: p/q or a decimal in [0, 1/2].
        #[arg(long, default_value = "1/5")]
        theta: String,
        /// Gather the empirical panel even when a theorem decides.
        #[arg(long)]
        evidence: bool,
        #[command(flatten)]
        ev: EvidenceArgs,
    },
    /// Classify every SL(2,Z) matrix with entries in [-N, N].
    Sweep {
        #[arg(long)]
        max_entry: i64,
    },
    /// Iterate the toral automorphism and emit the symbolic word.
    Simulate {
        /// Matrix entries a,b,c,d (row-major, determinant 1).
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Cells per side of the grid partition.
        #[arg(long, default_value_t = 2)]
        grid: u32,
        /// Word length.
        #[arg(long)]
        steps: usize,
        /// Start point "xn/xd,yn/yd" (exact rational orbit); random
        /// fixed-point seed when omitted.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Classical action variant.
        #[arg(long, default_value = "transpose")]
        action: String,
        /// Emit the exact lattice orbit of the quantized seed, skipping
        /// the real-orbit trustworthiness bound (for long words feeding
        /// the compression estimator).
        #[arg(long)]
        lattice: bool,
        /// Write the word to a binary file instead of inlining it.
        #[arg(long)]
        words_out: Option<PathBuf>,
    },
    /// Plug-in block-entropy profile over an orbit ensemble.
    Entropy {
        /// Matrix entries a,b,c,d (row-major, determinant 1).
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 2)]
        grid: u32,
        /// Number of independent orbit words.
        #[arg(long, default_value_t = 100000)]
        samples: u64,
        /// Longest block length.
        #[arg(long, default_value_t = 12)]
        maxn: usize,
        /// Apply the Miller-Madow bias correction.
        #[arg(long)]
        miller_madow: bool,
        #[arg(long, default_value = "transpose")]
        action: String,
    },
    /// Compression-rate proxy of a stored symbolic word.
    Brudno {
        /// Binary word file written by `simulate --words-out`.
        #[arg(long)]
        input: PathBuf,
        /// Convert the word to the binary alphabet before parsing (the
        /// trajectory-complexity composition); rate is then per binary
        /// symbol.
        #[arg(long)]
        binary: bool,
    },
    /// Entropy-production profile of an operational partition.
    Afl {
        /// Matrix entries a,b,c,d (row-major, determinant 1).
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value = "1/5")]
        theta: String,
        #[arg(long, default_value = "weyl2")]
        partition: String,
        #[arg(long, default_value_t = 6)]
        maxn: usize,
    },
    /// Canonical program, description length and depth bracket of a bit
    /// string on the toy prefix machine.
    Depth {
        /// Bit string, e.g. 0000.
        #[arg(long)]
        string: String,
        #[arg(long, default_value_t = 1)]
        significance: u32,
        #[arg(long, default_value_t = 14)]
        max_prog_len: u32,
        /// Step budget.
        #[arg(long, default_value_t = 4096)]
        budget: u64,
        /// Halting-table cache file (loaded when present, written after a
        /// fresh build).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Full classification report with every instrument attached.
    Report {
        /// Matrix entries a,b,c,d (row-major, determinant 1).
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value = "1/5")]
        theta: String,
        #[command(flatten)]
        ev: EvidenceArgs,
    },
}

/// Globals after merging flags with the config file.
struct Globals {
    nats: bool,
    seed: u64,
    precision: u32,
    trace_mode: TraceMode,
    out: OutputFormat,
}

#[derive(Clone, Copy, PartialEq)]
enum OutputFormat {
    Json,
    Tsv,
}

fn parse_config(path: &Path) -> Result<Vec<(String, String)>, CoreError> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CoreError::Parse(format!("config line {}: expected key = value, got '{raw}'", i + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn resolve_globals(cli: &Cli) -> Result<Globals, CoreError> {
    let mut cfg: Vec<(String, String)> = Vec::new();
    if let Some(path) = &cli.config {
        cfg = parse_config(path)?;
    }
    let lookup = |key: &str| -> Option<&str> {
        cfg.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    };

    let nats = cli.nats
        || lookup("nats")
            .map(|v| matches!(v, "true" | "1" | "yes"))
            .unwrap_or(false);
    let seed = match cli.seed {
        Some(s) => s,
        None => match lookup("seed") {
            Some(v) => v.parse().map_err(|_| CoreError::Parse(format!("bad seed '{v}' in config")))?,
            None => 0x5EED_0001,
        },
    };
    let precision = match cli.precision {
        Some(p) => p,
        None => match lookup("precision") {
            Some(v) => v
                .parse()
                .map_err(|_| CoreError::Parse(format!("bad precision '{v}' in config")))?,
            None => 512,
        },
    };
    let trace_mode = match &cli.trace_mode {
        Some(m) => TraceMode::parse(m)?,
        None => match lookup("trace-mode") {
            Some(v) => TraceMode::parse(v)?,
            None => TraceMode::Paper,
        },
    };
    let out = match cli.out.as_deref().or_else(|| lookup("out")) {
        None | Some("json") => OutputFormat::Json,
        Some("tsv") => OutputFormat::Tsv,
        Some(other) => return Err(CoreError::Parse(format!("unknown output format '{other}'"))),
    };
    Ok(Globals { nats, seed, precision, trace_mode, out })
}

fn warn_rational_theta(theta: &ThetaParam) {
    if theta.is_rational() {
        eprintln!(
            "warning: rational theta {} gives a non-factor algebra; proceeding anyway",
            theta.describe()
        );
    }
}

fn entropy_unit(nats: bool) -> &'static str {
    if nats {
        "nats"
    } else {
        "bits"
    }
}

fn scale_bits(nats: bool, bits: f64) -> f64 {
    if nats {
        bits * std::f64::consts::LN_2
    } else {
        bits
    }
}

fn emit_spectral(reports: &[SpectralReport], g: &Globals) {
    match g.out {
        OutputFormat::Json => {
            for r in reports {
                println!("{}", serde_json::to_string(r).unwrap());
            }
        }
        OutputFormat::Tsv => {
            println!("{}", SpectralReport::TSV_HEADER);
            for r in reports {
                println!("{}", r.tsv_row());
            }
        }
    }
}

fn emit_afl(profile: &AflProfile, g: &Globals) {
    match g.out {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(profile).unwrap();
            if g.nats {
                if let Some(rows) = v["rows"].as_array_mut() {
                    for row in rows {
                        for key in ["h_bits", "h_over_n", "slope"] {
                            let x = row[key].as_f64().unwrap_or(f64::NAN);
                            row[key] = serde_json::json!(scale_bits(true, x));
                        }
                    }
                    v["unit"] = serde_json::json!("nats");
                }
            } else {
                v["unit"] = serde_json::json!("bits");
            }
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        OutputFormat::Tsv => {
            let unit = entropy_unit(g.nats);
            println!("n\tdim\tH_{unit}\tH_over_n\tslope\troute");
            for r in &profile.rows {
                let route = match r.route {
                    nct_core::afl::EntropyRoute::Jacobi => "jacobi",
                    nct_core::afl::EntropyRoute::ExponentClass => "exponent-class",
                };
                println!(
                    "{}\t{}\t{:.9}\t{:.9}\t{:.9}\t{}",
                    r.n,
                    r.dim,
                    scale_bits(g.nats, r.h_bits),
                    scale_bits(g.nats, r.h_over_n),
                    scale_bits(g.nats, r.slope),
                    route
                );
            }
            if let Some(t) = &profile.truncated {
                println!("# truncated: {t}");
            }
            println!("# {}", profile.label);
        }
    }
}

fn emit_block(profile: &BlockEntropyProfile, g: &Globals) {
    match g.out {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(profile).unwrap();
            if g.nats {
                if let Some(rows) = v["rows"].as_array_mut() {
                    for row in rows {
                        for key in ["h_bits", "h_over_n", "slope", "miller_madow_bits"] {
                            let x = row[key].as_f64().unwrap_or(f64::NAN);
                            row[key] = serde_json::json!(scale_bits(true, x));
                        }
                    }
                }
                v["unit"] = serde_json::json!("nats");
            } else {
                v["unit"] = serde_json::json!("bits");
            }
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        OutputFormat::Tsv => {
            let unit = entropy_unit(g.nats);
            println!("n\tH_{unit}\tH_over_n\tslope\tmiller_madow\tdistinct_blocks");
            for r in &profile.rows {
                println!(
                    "{}\t{:.9}\t{:.9}\t{:.9}\t{:.9}\t{}",
                    r.n,
                    scale_bits(g.nats, r.h_bits),
                    scale_bits(g.nats, r.h_over_n),
                    scale_bits(g.nats, r.slope),
                    scale_bits(g.nats, r.miller_madow_bits),
                    r.distinct_blocks
                );
            }
            println!("# {}", profile.notes);
        }
    }
}

fn parse_point(text: &str) -> Result<TorusPoint, CoreError> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| CoreError::Parse(format!("expected x,y in point '{text}'")))?;
    let parse_rat = |t: &str| -> Result<(i64, i64), CoreError> {
        match t.split_once('/') {
            Some((n, d)) => Ok((
                n.trim().parse().map_err(|_| CoreError::Parse(format!("bad numerator '{n}'")))?,
                d.trim().parse().map_err(|_| CoreError::Parse(format!("bad denominator '{d}'")))?,
            )),
            None => Ok((
                t.trim().parse().map_err(|_| CoreError::Parse(format!("bad coordinate '{t}'")))?,
                1,
            )),
        }
    };
    let (xn, xd) = parse_rat(x)?;
    let (yn, yd) = parse_rat(y)?;
    Ok(TorusPoint::rational_i64(xn, xd, yn, yd))
}

fn evidence_options(g: &Globals, ev: &EvidenceArgs, force: bool) -> Result<ClassifyOptions, CoreError> {
    Ok(ClassifyOptions {
        trace_mode: g.trace_mode,
        seed: g.seed,
        precision_bits: g.precision,
        force_evidence: force,
        afl_partition: BuiltinPartition::parse(&ev.afl_partition)?,
        afl_n_max: ev.afl_maxn,
        brudno_grid_m: ev.brudno_grid,
        brudno_length: ev.brudno_length,
        brudno_seeds: ev.brudno_seeds,
        depth_prefix_bits: ev.depth_bits,
        depth_significance: ev.depth_significance,
        depth_l_max: ev.depth_max_prog_len,
        depth_t_max: ev.depth_budget,
        action: TorusAction::Transpose,
    })
}

fn run_command(cli: &Cli, g: &Globals) -> Result<(), CoreError> {
    match &cli.command {
        Command::Classify { matrix, theta, evidence, ev } => {
            let c = SL2Matrix::parse(matrix)?;
            let th = ThetaParam::parse(theta, 128)?;
            let opts = evidence_options(g, ev, *evidence)?;
            // warn only when the algebra will actually be touched
            let spectral = classify_matrix(&c, g.trace_mode);
            let gathers = opts.force_evidence
                || (!spectral.chaotic
                    && matches!(spectral.matrix_order, nct_core::sl2z::MatrixOrder::Infinite));
            if gathers {
                warn_rational_theta(&th);
            }
            let verdict = classify_automorphism(&c, &th, &opts)?;
            match g.out {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&verdict).unwrap())
                }
                OutputFormat::Tsv => {
                    println!("{}", SpectralReport::TSV_HEADER);
                    println!("{}", verdict.spectral.tsv_row());
                    println!("# verdict\t{}", verdict.verdict.as_str());
                    for r in &verdict.rationale {
                        println!("# cites\t{}\t{}", r.tag, r.statement);
                    }
                }
            }
            Ok(())
        }
        Command::Sweep { max_entry } => {
            let reports = sweep_classify(*max_entry, g.trace_mode)?;
            emit_spectral(&reports, g);
            Ok(())
        }
        Command::Simulate { matrix, grid, steps, point, action, lattice, words_out } => {
            let c = SL2Matrix::parse(matrix)?;
            let grid = GridPartition::new(*grid)?;
            let action = TorusAction::parse(action)?;
            let (word, start, mode) = match point {
                Some(text) => {
                    let p = parse_point(text)?;
                    let w = symbolic_translate(&c, action, &grid, &p, *steps)?;
                    (w, format!("{:?}", p.to_f64()), "exact-rational".to_string())
                }
                None => {
                    let mut rng = SplitMix64::stream(g.seed, 0);
                    let p = TorusPoint::random_fixed(&mut rng, g.precision);
                    let w = if *lattice {
                        lattice_orbit_word(&c, action, &grid, &p, *steps)
                    } else {
                        symbolic_translate(&c, action, &grid, &p, *steps)?
                    };
                    let mode = if *lattice {
                        format!("fixed-point-{}-lattice", g.precision)
                    } else {
                        format!("fixed-point-{}", g.precision)
                    };
                    (w, format!("{:?}", p.to_f64()), mode)
                }
            };
            let mut summary = serde_json::json!({
                "matrix": c,
                "grid_m": grid.m,
                "steps": steps,
                "seed": g.seed,
                "start_approx": start,
                "arithmetic": mode,
                "action": action,
                "alphabet": word.alphabet(),
            });
            if let Some(path) = words_out {
                let mut f = fs::File::create(path)?;
                word.write_binary(&mut f)?;
                f.flush()?;
                summary["words_out"] = serde_json::json!(path.display().to_string());
                println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            } else {
                match g.out {
                    OutputFormat::Json => {
                        summary["word"] = serde_json::json!(word.to_text());
                        println!("{}", serde_json::to_string_pretty(&summary).unwrap());
                    }
                    OutputFormat::Tsv => println!("{}", word.to_text()),
                }
            }
            Ok(())
        }
        Command::Entropy { matrix, grid, samples, maxn, miller_madow, action } => {
            let c = SL2Matrix::parse(matrix)?;
            let grid = GridPartition::new(*grid)?;
            let action = TorusAction::parse(action)?;
            let prof = block_entropy_profile(
                &c,
                &grid,
                *samples,
                *maxn,
                g.precision,
                g.seed,
                action,
                *miller_madow,
            )?;
            emit_block(&prof, g);
            Ok(())
        }
        Command::Brudno { input, binary } => {
            let mut f = fs::File::open(input)?;
            let word = SymbolicWord::read_binary(&mut f)?;
            let report = if *binary {
                nct_core::entropy::brudno_rate_binary(&word)?
            } else {
                brudno_rate(&word)?
            };
            match g.out {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&report).unwrap())
                }
                OutputFormat::Tsv => {
                    println!("length\talphabet\tphrases\trate_bits_per_symbol\tlabel");
                    println!(
                        "{}\t{}\t{}\t{:.9}\t{}",
                        report.length,
                        report.alphabet,
                        report.phrases,
                        report.rate_bits_per_symbol,
                        report.label
                    );
                }
            }
            Ok(())
        }
        Command::Afl { matrix, theta, partition, maxn } => {
            let c = SL2Matrix::parse(matrix)?;
            let th = ThetaParam::parse(theta, 128)?;
            warn_rational_theta(&th);
            let which = BuiltinPartition::parse(partition)?;
            let part = builtin_partition::<f64>(&th, which);
            let prof = afl_profile(&c, &part, *maxn, which.name())?;
            emit_afl(&prof, g);
            Ok(())
        }
        Command::Depth { string, significance, max_prog_len, budget, cache } => {
            if *max_prog_len > MAX_PROGRAM_LEN {
                return Err(CoreError::Budget(format!(
                    "max_prog_len {max_prog_len} exceeds {MAX_PROGRAM_LEN}"
                )));
            }
            let bits: Vec<u8> = string
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(CoreError::Parse(format!("bad bit '{ch}' in --string"))),
                })
                .collect::<Result<_, _>>()?;
            let lab = match cache {
                Some(path) if path.exists() => {
                    let mut f = fs::File::open(path)?;
                    DepthLab::load_cache(&mut f, *max_prog_len, *budget)?
                }
                _ => {
                    let lab = DepthLab::build(*max_prog_len, *budget)?;
                    if let Some(path) = cache {
                        let mut f = fs::File::create(path)?;
                        lab.save_cache(&mut f)?;
                    }
                    lab
                }
            };
            let bracket = lab.logical_depth(&bits, *significance);
            let k = lab.k_of(&bits);
            let canonical = lab.canonical_program(&bits).map(|(p, _)| p.to_string());
            let out = serde_json::json!({
                "string": string,
                "significance": significance,
                "k_upper_bound": k.value,
                "k_exact_within_budget": k.exact,
                "canonical_program": canonical,
                "bracket": bracket,
                "halting_programs": lab.halting_count(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(())
        }
        Command::Report { matrix, theta, ev } => {
            let c = SL2Matrix::parse(matrix)?;
            let th = ThetaParam::parse(theta, 128)?;
            warn_rational_theta(&th);
            let opts = evidence_options(g, ev, true)?;
            let verdict = classify_automorphism(&c, &th, &opts)?;
            println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            Ok(())
        }
    }
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::InvariantViolation(_)
        | CoreError::PsdViolation { .. }
        | CoreError::PartitionUnity { .. } => 3,
        CoreError::Parse(_) | CoreError::InvalidMatrix(_) | CoreError::InvalidTheta(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let globals = match resolve_globals(&cli) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    match run_command(&cli, &globals) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
