use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use origami_core::closure::{export_points, format_float, generate, DEFAULT_BUDGET};
use origami_core::geometry::{Angle, OrigamiField};
use origami_core::numtheory::{decompose, ring_membership};
use origami_core::synth::{
    run, run_float, synth_element, synth_neg_one, synth_two, verify, FoldProgram,
};
use origami_core::{CycNum, OrigamiError};

mod svg;

#[derive(Parser)]
#[command(
    name = "origami",
    version,
    about = "Origami rings: closures, fold programs and membership"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the closure from 0 and 1 and export its points
    Closure {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Write a fold program constructing a target
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(
            long,
            conflicts_with = "builtin",
            required_unless_present = "builtin",
            allow_hyphen_values = true
        )]
        target: Option<String>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a fold program and compare its value with a literal
    Verify {
        #[arg(long)]
        prog: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        expect: String,
    },
    /// Classify a literal against Z[ζ_n], Z[1/n, ζ_n] and Q(ζ_n)
    Membership {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// Intersect L_u(p) with L_v(q)
    Intersect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    Two,
    NegOne,
    InvN,
}

enum Failure {
    /// verification or membership failed
    Domain(anyhow::Error),
    /// bad flags, unreadable files, parse errors
    Input(anyhow::Error),
}

type CmdResult = Result<(), Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn field_for(n: usize) -> Result<std::sync::Arc<OrigamiField>, Failure> {
    OrigamiField::checked(n).map_err(input)
}

fn parse_value(field: &OrigamiField, text: &str) -> Result<CycNum, Failure> {
    field
        .parse(text)
        .map_err(|e| Failure::Input(anyhow!("cannot parse {text:?}: {e}")))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::Input)
}

fn show(x: &CycNum) -> String {
    let z = x.to_complex();
    format!("{x}  ≈ {} + {}i", format_float(z.re), format_float(z.im))
}

fn closure(
    n: usize,
    depth: usize,
    budget: usize,
    out: &Path,
    svg_path: Option<&Path>,
) -> CmdResult {
    field_for(n)?;
    let set = generate(n, depth, budget).map_err(input)?;
    write_file(out, &export_points(&set))?;
    if let Some(path) = svg_path {
        let pts: Vec<_> = set.points().iter().map(CycNum::to_complex).collect();
        write_file(path, &svg::render(&pts, n, set.depth()))?;
    }
    println!(
        "n={n}: {} points through depth {} (per depth: {:?})",
        set.len(),
        set.depth(),
        set.depth_counts()
    );
    if !set.is_complete() {
        return Err(Failure::Domain(anyhow!(
            "budget of {budget} points exhausted at depth {}; output is partial",
            set.depth()
        )));
    }
    Ok(())
}

fn synth(n: usize, target: Option<&str>, builtin: Option<Builtin>, out: &Path) -> CmdResult {
    let field = field_for(n)?;
    let from_value = |x: CycNum| -> Result<(FoldProgram, CycNum), Failure> {
        let expr = decompose(&field, &x).map_err(|e| match e {
            OrigamiError::NotConstructible(_) => Failure::Domain(e.into()),
            other => Failure::Input(other.into()),
        })?;
        let prog = synth_element(&expr).map_err(|e| Failure::Domain(e.into()))?;
        Ok((prog, x))
    };
    let (prog, expected) = match (target, builtin) {
        (Some(text), _) => from_value(parse_value(&field, text)?)?,
        (None, Some(Builtin::Two)) => (synth_two(n).map_err(input)?, field.int(2)),
        (None, Some(Builtin::NegOne)) => (synth_neg_one(n).map_err(input)?, field.int(-1)),
        (None, Some(Builtin::InvN)) => from_value(field.int(n as i64).inv().map_err(input)?)?,
        (None, None) => return Err(input(anyhow!("one of --target or --builtin is required"))),
    };
    let check = verify(&prog, &expected, None);
    if !check.ok {
        return Err(Failure::Domain(anyhow!(
            "synthesized program failed verification: {}",
            check.diagnostic.unwrap_or_default()
        )));
    }
    write_file(out, &prog.to_json())?;
    let value = run(&prog).map_err(|e| Failure::Domain(e.into()))?;
    println!("program length: {}", prog.len());
    println!("value: {}", show(value.value()));
    Ok(())
}

fn verify_cmd(prog_path: &Path, expect: &str) -> CmdResult {
    let text = fs::read_to_string(prog_path)
        .with_context(|| format!("cannot read {}", prog_path.display()))
        .map_err(Failure::Input)?;
    let prog = FoldProgram::from_json(&text).map_err(input)?;
    let field = field_for(prog.n())?;
    let expected = parse_value(&field, expect)?;
    let trace = run(&prog).map_err(input)?;
    let floats = run_float(&prog).map_err(input)?;
    let check = verify(&prog, &expected, None);
    if check.ok {
        println!(
            "ok: {} instructions, value {}",
            prog.len(),
            show(trace.value())
        );
        return Ok(());
    }
    let last = trace.registers.len() - 1;
    eprintln!("trace:");
    for (i, (x, z)) in trace.registers.iter().zip(&floats).enumerate() {
        eprintln!(
            "  r{i} = {x}  ≈ {} + {}i",
            format_float(z.re),
            format_float(z.im)
        );
    }
    Err(Failure::Domain(anyhow!(
        "first divergence at register r{last} (program output): got {}, expected {}",
        trace.value(),
        expected
    )))
}

fn membership(n: usize, value: &str) -> CmdResult {
    let field = field_for(n)?;
    let x = parse_value(&field, value)?;
    let m = ring_membership(&field, &x);
    println!("{}", m.verdict(n));
    if let Some(coords) = m.coords() {
        let list: Vec<String> = coords.iter().map(ToString::to_string).collect();
        println!("coordinates on ζ_{n}^0..: [{}]", list.join(", "));
    }
    let profile: Vec<String> = m.profile().iter().map(ToString::to_string).collect();
    println!("denominator primes: {{{}}}", profile.join(", "));
    if m.is_constructible(n) {
        println!("constructible in R(U_{n})");
        Ok(())
    } else {
        Err(Failure::Domain(anyhow!(
            "{}, not constructible in R(U_{n})",
            m.verdict(n)
        )))
    }
}

fn intersect(n: usize, u: usize, v: usize, p: &str, q: &str) -> CmdResult {
    let field = field_for(n)?;
    let (u, v) = (
        Angle::new(n, u).map_err(input)?,
        Angle::new(n, v).map_err(input)?,
    );
    let (p, q) = (parse_value(&field, p)?, parse_value(&field, q)?);
    let z = field.intersect(u, v, &p, &q).map_err(input)?;
    println!("{}", show(&z));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Closure {
            n,
            depth,
            budget,
            out,
            svg,
        } => closure(*n, *depth, *budget, out, svg.as_deref()),
        Command::Synth {
            n,
            target,
            builtin,
            out,
        } => synth(*n, target.as_deref(), *builtin, out),
        Command::Verify { prog, expect } => verify_cmd(prog, expect),
        Command::Membership { n, value } => membership(*n, value),
        Command::Intersect { n, u, v, p, q } => intersect(*n, *u, *v, p, q),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
