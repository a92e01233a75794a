//! `idgroupoid`: pasting-diagram utilities, coherence synthesis and the
//! operad checks from the command line.
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on usage or parse
//! errors.

mod config;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use idgroupoid::globular::{FiniteGlobularSet, GlobularError};
use idgroupoid::kernel::{normalize, parse_telescope, parse_term, parse_type, Signature, Type};
use idgroupoid::operad::{
    check_contractible, closure, generators, parse_operation, Report, SweepOutcome,
};
use idgroupoid::par::{self, Parallelism};
use idgroupoid::pasting::{CellAssignment, PastingDiagram};
use idgroupoid::synth::{
    contract_with, named_coherence, system_of_compositions, NamedCoherence, Order,
};
use idgroupoid::tower::IdentityTower;

use config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "idgroupoid",
    version,
    about = "Coherence synthesis for identity types"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Optional key=value file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Highest level of the identity tower.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Canonical,
    Witness,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pasting-diagram operations.
    #[command(subcommand)]
    Paste(PasteCommand),
    /// Contract a pair of boundary operations into an operation of shape PI.
    Synth(SynthArgs),
    /// Synthesize a named coherence cell.
    Coherence {
        /// symmetry, leftUnit, rightUnit, assoc or eckmannHiltonProbe.
        name: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Check a file of judgements `ctx |- term :: type` and golden lines
    /// `pi ;; source ;; target ;; term`.
    Check {
        file: PathBuf,
        /// Read the file as a finite globular set instead.
        #[arg(long)]
        globular: bool,
        /// Declare a constant, as `NAME=TYPE`.
        #[arg(long = "const", value_name = "NAME=TYPE")]
        consts: Vec<String>,
    },
    /// Contractibility sweep over enumerated diagrams.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum PasteCommand {
    /// Print the boundary of a diagram.
    Boundary { pi: String },
    /// Print the cells of the shape as a globular set.
    Shape { pi: String },
    /// Substitute labels into the maximal cells of PI.
    Subst { pi: String, labels: Vec<String> },
    /// List diagrams of a dimension.
    Enum {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        leaves: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SynthArgs {
    pi: String,
    /// Source operation over the boundary; defaults to the identity.
    #[arg(long)]
    source: Option<String>,
    /// Target operation over the boundary; defaults to the identity.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
    #[arg(long)]
    base: Option<String>,
    /// Print the normal form of the synthesized cell as well.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
    /// Print every check line, not only failures.
    #[arg(long)]
    verbose: bool,
}

/// Exit status plus what to print.
enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Ctx {
    format: Format,
    cfg: Config,
    truncation: usize,
}

impl Ctx {
    fn base(&self, flag: Option<&str>) -> String {
        flag.or_else(|| self.cfg.get("base"))
            .unwrap_or("A")
            .to_string()
    }

    fn tower(&self, base: Option<&str>) -> Result<IdentityTower, Failure> {
        let base = self.base(base);
        let sig = Signature::with_base(&base);
        Ok(IdentityTower::build(Arc::new(sig), &base, self.truncation)?)
    }

    fn num(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize, Failure> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.cfg.usize(key)?.unwrap_or(default)),
        }
    }

    fn emit(&self, text: String, machine: Value) {
        match self.format {
            Format::Text => print!("{text}"),
            Format::Machine => println!("{machine}"),
        }
    }
}

fn diagram(src: &str) -> Result<PastingDiagram, Failure> {
    src.parse::<PastingDiagram>()
        .map_err(|e| Failure::Usage(format!("diagram {src:?}: {e}")))
}

fn main() -> ExitCode {
    par::init_from_env();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let format = match cli.format {
        Some(f) => f,
        None => match cfg.get("format") {
            None | Some("text") => Format::Text,
            Some("machine") => Format::Machine,
            Some(other) => return Err(Failure::Usage(format!("unknown format {other}"))),
        },
    };
    let truncation = match cli.truncation {
        Some(n) => n,
        None => cfg
            .usize("truncation")?
            .unwrap_or(idgroupoid::globular::DEFAULT_TRUNCATION),
    };
    let ctx = Ctx {
        format,
        cfg,
        truncation,
    };
    match cli.command {
        Command::Paste(p) => paste(&ctx, p),
        Command::Synth(args) => synth(&ctx, args),
        Command::Coherence { name, base } => coherence(&ctx, &name, base.as_deref()),
        Command::Check {
            file,
            globular,
            consts,
        } => check(&ctx, &file, globular, &consts),
        Command::Sweep(args) => sweep(&ctx, args),
    }
}

fn paste(ctx: &Ctx, cmd: PasteCommand) -> Result<(), Failure> {
    match cmd {
        PasteCommand::Boundary { pi } => {
            let b = diagram(&pi)?.boundary()?;
            ctx.emit(format!("{b}\n"), json!({ "boundary": b.to_string() }));
        }
        PasteCommand::Shape { pi } => {
            let d = diagram(&pi)?;
            let shape = d.shape();
            let mut text = String::new();
            let mut cells = Vec::new();
            for c in &shape.cells {
                let faces = match (c.source(), c.target()) {
                    (Some(s), Some(t)) => format!("{} {}", s.var_name(), t.var_name()),
                    _ => "- -".into(),
                };
                writeln!(text, "{} {} {faces}", c.dim(), c.var_name()).unwrap();
                cells.push(json!({
                    "dim": c.dim(),
                    "name": c.var_name(),
                    "source": c.source().map(|s| s.var_name()),
                    "target": c.target().map(|t| t.var_name()),
                }));
            }
            ctx.emit(text, json!({ "diagram": d.to_string(), "cells": cells }));
        }
        PasteCommand::Subst { pi, labels } => {
            let d = diagram(&pi)?;
            let labels = labels
                .iter()
                .map(|l| diagram(l))
                .collect::<Result<Vec<_>, _>>()?;
            let a = CellAssignment::from_maximal(&d, &labels)?;
            let out = d.substitute(&a)?;
            ctx.emit(format!("{out}\n"), json!({ "result": out.to_string() }));
        }
        PasteCommand::Enum { dim, leaves } => {
            let n = ctx.num(dim, "dim", 3)?;
            let l = ctx.num(leaves, "leaves", 5)?;
            let all = PastingDiagram::enumerate(n, l);
            let text: String = all.iter().map(|p| format!("{p}\n")).collect();
            let names: Vec<String> = all.iter().map(|p| p.to_string()).collect();
            ctx.emit(
                text,
                json!({ "dim": n, "leaves": l, "count": all.len(), "diagrams": names }),
            );
        }
    }
    Ok(())
}

fn synth(ctx: &Ctx, args: SynthArgs) -> Result<(), Failure> {
    let tower = ctx.tower(args.base.as_deref())?;
    let pi = diagram(&args.pi)?;
    let n = pi.dimension();
    if n == 0 {
        return Err(Failure::Usage("shape must have positive dimension".into()));
    }
    let default = if n == 1 {
        "point".to_string()
    } else {
        format!("id{}", n - 1)
    };
    let src_expr = args.source.unwrap_or_else(|| default.clone());
    let tgt_expr = args.target.unwrap_or(default);
    let source = parse_operation(&tower, &src_expr)?;
    let target = parse_operation(&tower, &tgt_expr)?;
    let order = match args.order {
        Some(OrderArg::Witness) => Order::Witness,
        Some(OrderArg::Canonical) => Order::Canonical,
        None => match ctx.cfg.get("order") {
            Some("witness") => Order::Witness,
            None | Some("canonical") => Order::Canonical,
            Some(other) => return Err(Failure::Usage(format!("unknown order {other}"))),
        },
    };
    let op = contract_with(&tower, &pi, &source, &target, &order)
        .map_err(|e| Failure::Check(format!("FAIL synth {pi}: {e}")))?;
    let tel = &op.top.source;
    let term = tel.print_term(op.cell());
    let ty = tel.print_type(&op.cell_type());
    let nf = tel.print_term(&normalize(op.cell()));
    let mut text = format!("shape: {pi}\nsource: {src_expr}\ntarget: {tgt_expr}\ncontext: {tel}\nterm: {term}\ntype: {ty}\n");
    if args.normalize {
        writeln!(text, "normal form: {nf}").unwrap();
    }
    ctx.emit(
        text,
        json!({
            "shape": pi.to_string(),
            "source": src_expr,
            "target": tgt_expr,
            "context": tel.to_string(),
            "term": term,
            "type": ty,
            "normal_form": nf,
        }),
    );
    Ok(())
}

fn coherence(ctx: &Ctx, name: &str, base: Option<&str>) -> Result<(), Failure> {
    let which: NamedCoherence = name.parse()?;
    let tower = ctx.tower(base)?;
    let cell = named_coherence(&tower, which)
        .map_err(|e| Failure::Check(format!("FAIL coherence {name}: {e}")))?;
    let tel = cell.context();
    let term = tel.print_term(cell.term());
    let ty = tel.print_type(&cell.ty());
    ctx.emit(
        format!(
            "name: {}\ncontext: {tel}\nterm: {term}\ntype: {ty}\n",
            which.name()
        ),
        json!({ "name": which.name(), "context": tel.to_string(), "term": term, "type": ty }),
    );
    Ok(())
}

fn check(ctx: &Ctx, file: &PathBuf, globular: bool, consts: &[String]) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let mut report = Report::default();
    if globular {
        match FiniteGlobularSet::parse(&text) {
            Ok(g) => {
                let counts: Vec<String> = (0..=g.truncation())
                    .map(|d| g.count(d).to_string())
                    .collect();
                report.push(
                    true,
                    "globular",
                    "-",
                    format!("cells per dimension {}", counts.join(",")),
                );
            }
            Err(GlobularError::NotGlobular(vs)) => {
                for v in vs {
                    report.push(
                        false,
                        "globular",
                        &v.label,
                        format!("dim {} {}", v.dim, v.equation),
                    );
                }
            }
            Err(e) => return Err(e.into()),
        }
        return finish_report(ctx, &report);
    }
    let base = ctx.base(None);
    let mut sig = Signature::with_base(&base);
    for c in consts {
        let (name, ty) = c
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--const {c}: expected NAME=TYPE")))?;
        let ty = parse_type(&sig, &[], ty.trim())?;
        sig.declare_const(name.trim(), ty)?;
    }
    let tower = IdentityTower::build(Arc::new(sig), &base, ctx.truncation)?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = format!("line{}", i + 1);
        let (check, outcome) = if line.contains(" ;; ") {
            ("golden", check_golden(&tower, line))
        } else {
            ("judgement", check_judgement(tower.signature(), line))
        };
        match outcome {
            Ok(detail) => report.push(true, check, &at, detail),
            Err(detail) => report.push(false, check, &at, detail),
        }
    }
    finish_report(ctx, &report)
}

fn check_judgement(sig: &Signature, line: &str) -> Result<String, String> {
    let (c, rest) = line
        .split_once(" |- ")
        .ok_or("expected `ctx |- term :: type`")?;
    let (t, ty) = rest
        .rsplit_once(" :: ")
        .ok_or("expected `ctx |- term :: type`")?;
    let tel = parse_telescope(sig, c).map_err(|e| e.to_string())?;
    tel.check(sig).map_err(|e| e.to_string())?;
    let term = parse_term(sig, tel.names(), t).map_err(|e| e.to_string())?;
    let ty: Type = parse_type(sig, tel.names(), ty).map_err(|e| e.to_string())?;
    sig.check(tel.types(), &term, &ty)
        .map_err(|e| e.to_string())?;
    Ok(t.to_string())
}

fn check_golden(tower: &IdentityTower, line: &str) -> Result<String, String> {
    let parts: Vec<&str> = line.split(" ;; ").map(str::trim).collect();
    let [pi, src, tgt, expected] = parts[..] else {
        return Err("expected `pi ;; source ;; target ;; term`".into());
    };
    let pi: PastingDiagram = pi
        .parse()
        .map_err(|e: idgroupoid::pasting::PasteError| e.to_string())?;
    let s = parse_operation(tower, src).map_err(|e| e.to_string())?;
    let t = parse_operation(tower, tgt).map_err(|e| e.to_string())?;
    let op = contract_with(tower, &pi, &s, &t, &Order::Canonical).map_err(|e| e.to_string())?;
    let nf = op.top.source.print_term(&normalize(op.cell()));
    if nf == expected {
        Ok(format!("{pi} {src} {tgt}"))
    } else {
        Err(format!("expected {expected}, got {nf}"))
    }
}

fn sweep(ctx: &Ctx, args: SweepArgs) -> Result<(), Failure> {
    let dim = ctx.num(args.dim, "dim", 3)?;
    let leaves = ctx.num(args.leaves, "leaves", 5)?;
    let depth = ctx.num(args.depth, "depth", 1)?;
    if dim == 0 || dim >= ctx.truncation {
        return Err(Failure::Usage(format!(
            "--dim must be between 1 and {}",
            ctx.truncation.saturating_sub(1)
        )));
    }
    let mode = if args.sequential {
        Parallelism::Sequential
    } else {
        Parallelism::available()
    };
    let tower = ctx.tower(None)?;
    let soc = system_of_compositions(&tower, dim).map_err(|e| Failure::Check(e.to_string()))?;
    let gens = generators(&tower, &soc, dim.saturating_sub(1), true)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let pool = closure(&tower, &gens, depth, dim, leaves, mode)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let out: SweepOutcome = check_contractible(&tower, &pool, dim, leaves, mode);
    let mut shown = Report::default();
    for l in &out.report.lines {
        if args.verbose || !l.pass {
            shown.lines.push(l.clone());
        }
    }
    let verdict = if out.report.passed() { "PASS" } else { "FAIL" };
    let summary = format!(
        "{verdict} sweep dim<={dim} leaves<={leaves} depth={depth} diagrams={} pool={} pairs={} witnesses={}",
        out.diagrams, out.pool, out.pairs, out.witnesses
    );
    let extra = json!({
        "dim": dim,
        "leaves": leaves,
        "depth": depth,
        "diagrams": out.diagrams,
        "pool": out.pool,
        "pairs": out.pairs,
        "witnesses": out.witnesses,
    });
    match ctx.format {
        Format::Text => {
            print!("{shown}");
            println!("{summary}");
        }
        Format::Machine => {
            let mut v = serde_json::to_value(out.report.summary())?;
            v = json!({ "sweep": extra, "checks": v, "failures": shown.lines });
            println!("{v}");
        }
    }
    if out.report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}

fn finish_report(ctx: &Ctx, report: &Report) -> Result<(), Failure> {
    let fails = report.failures();
    match ctx.format {
        Format::Text => {
            print!("{report}");
            println!(
                "{} {} checks, {fails} failed",
                if fails == 0 { "PASS" } else { "FAIL" },
                report.lines.len()
            );
        }
        Format::Machine => {
            let v = json!({ "lines": report.lines, "summary": report.summary() });
            println!("{v}");
        }
    }
    if fails == 0 {
        Ok(())
    } else {
        Err(Failure::Check(String::new()))
    }
}
