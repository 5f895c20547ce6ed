//! Command-line front end: thin wrappers over the library with structured
//! text reports and stable exit codes.
//!
//! Exit codes: 0 = all verifications pass, 1 = counterexample found (the
//! report contains it), 2 = usage or parse error, 3 = unsupported input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use loopchain::chain::ChainOfLoops;
use loopchain::coords::ClassCoords;
use loopchain::error::Error;
use loopchain::lifting::{
    build_ladder, check_proper_intersection, check_unique_containment,
    diagonal_restriction_check,
};
use loopchain::locus::{bn_locus, cross_validate_grid, sample_point, Torus};
use loopchain::oracle::rank_class;
use loopchain::partition::{brill_noether_number, Partition, SchubertIndex};
use loopchain::specfile::{parse_rational, sha256_hex};
use loopchain::tableaux::{
    castelnuovo_number, count_tableaux_closed_form, enumerate_tableaux,
};
use loopchain::Rat;

#[derive(Parser)]
#[command(
    name = "loopchain",
    about = "Divisor combinatorics on chains of loops",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the report bytes to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Chain spec operations.
    Chain {
        #[command(subcommand)]
        command: ChainCommand,
    },
    /// Enumerate displacement tableaux of a shape on a chain.
    Tableaux {
        #[arg(long)]
        spec: PathBuf,
        /// Partition rows, comma-separated, longest first (e.g. 2,2).
        #[arg(long)]
        shape: String,
        /// List every tableau, not just the counts.
        #[arg(long)]
        list: bool,
    },
    /// Assemble a Brill-Noether locus as a union of tori.
    Locus {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        shape: String,
    },
    /// Baker-Norine rank of a class via the chip-firing oracle.
    Rank {
        #[arg(long)]
        spec: PathBuf,
        /// Coordinates, comma-separated rationals (e.g. 0,-1 or 1/2,1/2).
        #[arg(long)]
        xi: String,
        #[arg(long)]
        degree: i64,
    },
    /// Cross-validation suites.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// The Castelnuovo count g! prod i! / (g-d+r+i)!.
    Castelnuovo {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: i64,
    },
}

#[derive(Subcommand)]
enum ChainCommand {
    /// Parse a chain spec and report its torsion profile and genericity.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Grid cross-validation: tableau membership against the rank oracle.
    Pflueger {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        shape: String,
        /// Grid step, a rational dividing every loop period (e.g. 1/2).
        #[arg(long)]
        step: String,
        /// Maximum number of grid points.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        /// Run even if the grid exceeds the cap.
        #[arg(long)]
        force: bool,
    },
    /// The rectangle-ladder checks: unique containment, proper
    /// intersection, and the diagonal induction, for every step j.
    Lifting {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: i64,
        /// Ramification sequence, comma-separated (e.g. 0,1,2).
        #[arg(long)]
        alpha: String,
    },
}

/// Report plus exit code; exit 1 means a counterexample is in the report.
struct Outcome {
    report: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli.command);
    let elapsed = start.elapsed();
    match outcome {
        Ok(Outcome { report, code }) => {
            print!("{report}");
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            eprintln!("elapsed: {}.{:03}s", elapsed.as_secs(), elapsed.subsec_millis());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Unsupported(_) | Error::Refused(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Chain { command: ChainCommand::Validate { spec } } => chain_validate(spec),
        Command::Tableaux { spec, shape, list } => tableaux(spec, shape, *list),
        Command::Locus { spec, shape } => locus(spec, shape),
        Command::Rank { spec, xi, degree } => rank(spec, xi, *degree),
        Command::Verify { command: VerifyCommand::Pflueger { spec, shape, step, cap, force } } => {
            verify_pflueger(spec, shape, step, *cap, *force)
        }
        Command::Verify { command: VerifyCommand::Lifting { spec, r, d, alpha } } => {
            verify_lifting(spec, *r, *d, alpha)
        }
        Command::Castelnuovo { g, r, d } => castelnuovo(*g, *r, *d),
    }
}

/// Loads a chain spec and returns it with the content digest for the report.
fn load_spec(path: &PathBuf) -> Result<(ChainOfLoops, String), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let chain = loopchain::specfile::parse_chain_spec(&text)?;
    Ok((chain, sha256_hex(text.as_bytes())))
}

fn parse_shape(text: &str) -> Result<Partition, Error> {
    let rows = parse_list::<usize>(text, "shape")?;
    Partition::new(rows)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("bad {what} entry {part:?}")))
        })
        .collect()
}

fn parse_xi(text: &str) -> Result<ClassCoords, Error> {
    let coords = text
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<Rat>, Error>>()?;
    Ok(ClassCoords::new(coords))
}

fn fmt_rat(x: &Rat) -> String {
    x.to_string()
}

/// Row-major integer matrix, bottom row first: `[[1,2],[3]]`.
fn fmt_tableau(t: &loopchain::DisplacementTableau) -> String {
    let rows: Vec<String> = (1..=t.shape().num_rows())
        .map(|y| {
            let row: Vec<String> = (1..=t.shape().row_len(y))
                .map(|x| t.get(x, y).to_string())
                .collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn fmt_torus(torus: &Torus) -> String {
    let parts: Vec<String> = torus
        .fixed()
        .iter()
        .enumerate()
        .map(|(i, slot)| match slot {
            None => format!("xi{} free", i + 1),
            Some(r) if r.modulus == 0 => format!("xi{} = {}", i + 1, r.value),
            Some(r) => format!("xi{} = {} (mod {})", i + 1, r.value, r.modulus),
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn header(out: &mut String, command: &str, digest: Option<&str>) {
    let _ = writeln!(out, "command: {command}");
    if let Some(digest) = digest {
        let _ = writeln!(out, "chain-digest: {digest}");
    }
}

fn chain_validate(spec: &PathBuf) -> Result<Outcome, Error> {
    let (chain, digest) = load_spec(spec)?;
    let mut out = String::new();
    header(&mut out, "chain validate", Some(&digest));
    let _ = writeln!(out, "g: {}", chain.g());
    let torsion: Vec<String> = chain.torsion().iter().map(u64::to_string).collect();
    let _ = writeln!(out, "torsion: ({})", torsion.join(","));
    let report = chain.genericity();
    for lg in &report.per_loop {
        let _ = writeln!(
            out,
            "loop {}: m = {}, generic-ok = {}",
            lg.index, lg.torsion, lg.ok
        );
    }
    let _ = writeln!(out, "generic: {}", report.generic);
    let _ = writeln!(out, "verdict: pass");
    Ok(Outcome { report: out, code: 0 })
}

fn tableaux(spec: &PathBuf, shape_text: &str, list: bool) -> Result<Outcome, Error> {
    let (chain, digest) = load_spec(spec)?;
    let shape = parse_shape(shape_text)?;
    let mut out = String::new();
    header(&mut out, "tableaux", Some(&digest));
    let _ = writeln!(out, "shape: {shape}");
    let found = enumerate_tableaux(&shape, &chain);
    let _ = writeln!(out, "count: {}", found.len());
    let mut code = 0;
    if chain.is_generic() {
        let expected = count_tableaux_closed_form(&shape, chain.g());
        let agree = expected == found.len().into();
        let _ = writeln!(out, "closed-form: {expected}");
        let _ = writeln!(out, "verdict: {}", if agree { "pass" } else { "fail" });
        if !agree {
            code = 1;
        }
    } else {
        let _ = writeln!(out, "closed-form: n/a (chain not generic)");
        let _ = writeln!(out, "verdict: advisory");
    }
    if list {
        for (i, t) in found.iter().enumerate() {
            let _ = writeln!(out, "tableau {}: {}", i + 1, fmt_tableau(t));
        }
    }
    Ok(Outcome { report: out, code })
}

fn locus(spec: &PathBuf, shape_text: &str) -> Result<Outcome, Error> {
    let (chain, digest) = load_spec(spec)?;
    let shape = parse_shape(shape_text)?;
    let locus = bn_locus(&shape, &chain);
    let mut out = String::new();
    header(&mut out, "locus", Some(&digest));
    let _ = writeln!(out, "shape: {shape}");
    let _ = writeln!(out, "tori: {}", locus.tori.len());
    for (i, torus) in locus.tori.iter().enumerate() {
        let sample = sample_point(torus, &chain)?;
        let coords: Vec<String> = sample.xi().iter().map(fmt_rat).collect();
        let _ = writeln!(
            out,
            "torus {}: dim {}, {}, sample ({})",
            i + 1,
            torus.dim(),
            fmt_torus(torus),
            coords.join(",")
        );
    }
    let _ = writeln!(out, "verdict: pass");
    Ok(Outcome { report: out, code: 0 })
}

fn rank(spec: &PathBuf, xi_text: &str, degree: i64) -> Result<Outcome, Error> {
    let (chain, digest) = load_spec(spec)?;
    let xi = parse_xi(xi_text)?;
    let value = rank_class(&xi, degree, &chain)?;
    let mut out = String::new();
    header(&mut out, "rank", Some(&digest));
    let _ = writeln!(out, "xi: {xi_text}");
    let _ = writeln!(out, "degree: {degree}");
    let _ = writeln!(out, "rank: {value}");
    let _ = writeln!(out, "verdict: pass");
    Ok(Outcome { report: out, code: 0 })
}

fn verify_pflueger(
    spec: &PathBuf,
    shape_text: &str,
    step_text: &str,
    cap: u64,
    force: bool,
) -> Result<Outcome, Error> {
    let (chain, digest) = load_spec(spec)?;
    let shape = parse_shape(shape_text)?;
    let step = parse_rational(step_text)?;
    let cap = if force { None } else { Some(cap) };
    let report = cross_validate_grid(&shape, &chain, &step, cap)?;
    let mut out = String::new();
    header(&mut out, "verify pflueger", Some(&digest));
    let _ = writeln!(out, "shape: {shape}");
    let _ = writeln!(out, "step: {step_text}");
    let _ = writeln!(out, "points: {}", report.points);
    let _ = writeln!(out, "members: {}", report.members);
    let _ = writeln!(out, "disagreements: {}", report.disagreements.len());
    for xi in &report.disagreements {
        let coords: Vec<String> = xi.xi().iter().map(fmt_rat).collect();
        let _ = writeln!(out, "disagreement: ({})", coords.join(","));
    }
    let pass = report.pass();
    let _ = writeln!(out, "verdict: {}", if pass { "pass" } else { "fail" });
    Ok(Outcome { report: out, code: u8::from(!pass) })
}

fn verify_lifting(spec: &PathBuf, r: usize, d: i64, alpha_text: &str) -> Result<Outcome, Error> {
    let (chain, digest) = load_spec(spec)?;
    let alpha = parse_list::<u64>(alpha_text, "alpha")?;
    let index = SchubertIndex::new(r, d, alpha)?;
    let g = chain.g();
    let ladder = build_ladder(g, &index)?;
    let advisory = !chain.is_generic();

    let mut out = String::new();
    header(&mut out, "verify lifting", Some(&digest));
    let _ = writeln!(out, "g: {g}  r: {r}  d: {d}  alpha: ({alpha_text})");
    let _ = writeln!(out, "lambda: {}", ladder.unions[r]);
    let mut failures = 0usize;
    for j in 0..r {
        let containment = check_unique_containment(&ladder, j, &chain)?;
        let intersection = check_proper_intersection(&ladder, j, &chain)?;
        // Replay the diagonal induction for every tableau against its own
        // restriction, the unique container found above.
        let mut diagonal_failures = 0usize;
        let mut diagonal_checked = 0usize;
        if !containment.vacuous {
            for t in enumerate_tableaux(&ladder.unions[j + 1], &chain) {
                let t_mu = t.restrict(&ladder.overlaps[j])?;
                let report = diagonal_restriction_check(&t, &t_mu, &ladder, j, &chain)?;
                diagonal_checked += 1;
                if !report.pass() {
                    diagonal_failures += 1;
                }
            }
        }
        let step_pass = containment.pass() && intersection.pass() && diagonal_failures == 0;
        let _ = writeln!(
            out,
            "step {j}: tableaux {}, containment {}, intersection {}, diagonals {}/{}",
            containment.checked,
            if containment.vacuous {
                "vacuous".to_string()
            } else if containment.pass() {
                "pass".to_string()
            } else {
                format!("fail ({} counterexamples)", containment.counterexamples.len())
            },
            if intersection.vacuous {
                "vacuous".to_string()
            } else if intersection.pass() {
                "pass".to_string()
            } else {
                "fail".to_string()
            },
            diagonal_checked - diagonal_failures,
            diagonal_checked
        );
        for c in &containment.counterexamples {
            let _ = writeln!(
                out,
                "counterexample: tableau {} torus {} containers {} expected {}",
                fmt_tableau(&c.tableau),
                fmt_torus(&c.tableau_torus),
                c.containers.len(),
                fmt_tableau(&c.expected_restriction)
            );
        }
        if !step_pass {
            failures += 1;
        }
    }
    let verdict = if failures > 0 {
        "fail"
    } else if advisory {
        "advisory"
    } else {
        "pass"
    };
    let _ = writeln!(out, "verdict: {verdict}");
    Ok(Outcome { report: out, code: u8::from(failures > 0) })
}

fn castelnuovo(g: usize, r: usize, d: i64) -> Result<Outcome, Error> {
    let value = castelnuovo_number(g, r, d)?;
    let rho = brill_noether_number(g, r, d);
    let mut out = String::new();
    header(&mut out, "castelnuovo", None);
    let _ = writeln!(out, "g: {g}  r: {r}  d: {d}");
    let _ = writeln!(out, "value: {value}");
    let _ = writeln!(out, "rho: {rho}");
    if rho != 0 {
        let _ = writeln!(out, "note: rho != 0, value is not an enumerative count");
    }
    let _ = writeln!(out, "verdict: pass");
    Ok(Outcome { report: out, code: 0 })
}
