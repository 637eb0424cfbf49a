//! The `isx` command line.
//!
//! Exit codes: 0 success or valid input, 1 invalid input, failed precondition
//! or I/O error, 2 usage error.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::approximation::{all_vanish, check_approximation, default_approximation, obstructions_vanish, witt_approximation, Approximation, ObstructionRow};
use crate::error::{Error, Result};
use crate::fixtures::{emit_fixture, FIXTURE_NAMES};
use crate::gen::{generate_instance, GenProfile};
use crate::global::{intersection_space, validate_global};
use crate::instance::{write_approximation, ApproximationFile, Instance};
use crate::pairing::{default_sections, global_duality, signature_report, SignatureReport};
use crate::report::ValidationReport;
use crate::tube::{validate_tube, Perversity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "isx", version, about = "Exact algebraic intersection spaces")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Instance file, or `-` for standard input.
    file: String,
}

#[derive(Debug, Args)]
struct Choice {
    /// Use the Witt approximation instead of the supplied or default one.
    #[arg(long)]
    witt_approx: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate the tube datum, the complement and any supplied approximations.
    Validate(Input),
    /// Compute an approximation and check it.
    Approx {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        choice: Choice,
    },
    /// Local duality obstructions, by both methods.
    Obstructions {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        choice: Choice,
    },
    /// Dimensions of the intersection space homology and its duality partner.
    Homology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        choice: Choice,
    },
    /// Middle-degree signature against the Novikov signature.
    Signature(Input),
    /// Generate a random valid instance.
    Gen(GenArgs),
    /// Print a built-in instance.
    Fixture {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIXTURE_NAMES))]
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    dimension: i32,
    #[arg(long)]
    adversarial: bool,
    #[arg(long)]
    non_witt: bool,
    #[arg(long, value_delimiter = ',')]
    z_profile: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    z_profile_q: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    extra_profile: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    kernel_profile: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    novikov_profile: Option<Vec<usize>>,
    #[arg(long)]
    max_entry: Option<u32>,
    #[arg(long)]
    definite_middle: bool,
    #[arg(long)]
    out: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut buf = Vec::new();
    let code = match execute(&cli, &mut buf) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    };
    match out.write_all(&buf).and_then(|_| out.flush()) {
        Ok(()) => code,
        // A closed reader (`isx ... | head`) is not an error.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            1
        }
    }
}

fn read_instance(path: &str) -> Result<Instance> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))?
    };
    Instance::from_json(&text)
}

fn write_file(path: &str, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Invalid(format!("cannot write {path}: {e}")))
}

fn io(e: std::io::Error) -> Error {
    Error::Invalid(format!("cannot write output: {e}"))
}

fn emit<T: Serialize>(out: &mut dyn Write, fmt: Format, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    match fmt {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("report serializes")),
        Format::Text => write!(out, "{}", text()),
    }
    .map_err(io)
}

fn require_valid(inst: &Instance) -> Result<()> {
    let t = validate_tube(&inst.tube);
    let g = validate_global(&inst.tube, &inst.global);
    if t.is_valid() && g.is_valid() {
        Ok(())
    } else {
        let mut all = t;
        all.extend(g);
        Err(Error::Precondition(format!("instance is invalid; run `isx validate` for details ({} failures)", all.failures.len())))
    }
}

/// Approximations for both labels, with the method used.
fn choose(inst: &Instance, witt: bool) -> Result<(&'static str, Approximation, Approximation)> {
    let t = &inst.tube;
    if witt {
        let a = witt_approximation(t)?;
        return Ok(("witt", a.clone(), a));
    }
    let pick = |pv: Perversity| -> Result<(bool, Approximation)> {
        match inst.supplied(pv) {
            Some(a) => Ok((true, Approximation { perversity: pv, ..a.clone() })),
            None => Ok((false, default_approximation(t, pv)?)),
        }
    };
    let (sp, p) = pick(Perversity::P)?;
    let (sq, q) = if t.witt { (sp, Approximation { perversity: Perversity::Q, ..p.clone() }) } else { pick(Perversity::Q)? };
    Ok((if sp || sq { "supplied" } else { "default" }, p, q))
}

#[derive(Serialize)]
struct ValidateOutput {
    name: String,
    valid: bool,
    tube: ValidationReport,
    global: ValidationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    approximations: Option<ValidationReport>,
}

#[derive(Serialize)]
struct ApproxEntry {
    perversity: Perversity,
    valid: bool,
    report: ValidationReport,
    approximation: ApproximationFile,
}

#[derive(Serialize)]
struct ApproxOutput {
    name: String,
    method: &'static str,
    approximations: Vec<ApproxEntry>,
}

#[derive(Serialize)]
struct ObstructionOutput {
    name: String,
    method: &'static str,
    all_vanish: bool,
    rows: Vec<ObstructionRow>,
}

#[derive(Serialize)]
struct HomologyRow {
    degree: i32,
    h_ix: usize,
    partner: usize,
}

#[derive(Serialize)]
struct HomologyOutput {
    name: String,
    method: &'static str,
    dimension: i32,
    /// `verified`, or `obstructed` when the local obstructions do not vanish.
    duality: &'static str,
    rows: Vec<HomologyRow>,
}

#[derive(Serialize)]
struct SignatureOutput {
    name: String,
    method: &'static str,
    #[serde(flatten)]
    report: SignatureReport,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate(input) => {
            let inst = read_instance(&input.file)?;
            let tube = validate_tube(&inst.tube);
            let global = if tube.is_valid() { validate_global(&inst.tube, &inst.global) } else { ValidationReport::default() };
            let approximations = inst.approximations.as_ref().map(|_| {
                let mut rep = ValidationReport::default();
                for pv in [Perversity::P, Perversity::Q] {
                    if let Some(a) = inst.supplied(pv) {
                        if pv == Perversity::Q && inst.tube.witt {
                            continue;
                        }
                        rep.extend(check_approximation(&inst.tube, &Approximation { perversity: pv, ..a.clone() }));
                    }
                }
                rep
            });
            let valid = tube.is_valid() && global.is_valid() && approximations.as_ref().is_none_or(ValidationReport::is_valid);
            let o = ValidateOutput { name: inst.name.clone(), valid, tube, global, approximations };
            emit(out, fmt, &o, || {
                let mut s = format!("{}: {}\n", o.name, if o.valid { "valid" } else { "INVALID" });
                for (label, rep) in [("tube", Some(&o.tube)), ("global", Some(&o.global)), ("approximations", o.approximations.as_ref())] {
                    if let Some(r) = rep.filter(|r| !r.is_valid()) {
                        s.push_str(&format!("[{label}]\n{}", r.to_text()));
                    }
                }
                s
            })?;
            Ok(if valid { 0 } else { 1 })
        }
        Command::Approx { input, choice } => {
            let inst = read_instance(&input.file)?;
            require_valid(&inst)?;
            let (method, p, q) = choose(&inst, choice.witt_approx)?;
            let labels = if inst.tube.witt { vec![p] } else { vec![p, q] };
            let approximations: Vec<ApproxEntry> = labels
                .into_iter()
                .map(|a| {
                    let report = check_approximation(&inst.tube, &a);
                    ApproxEntry { perversity: a.perversity, valid: report.is_valid(), report, approximation: write_approximation(&a) }
                })
                .collect();
            let ok = approximations.iter().all(|a| a.valid);
            let o = ApproxOutput { name: inst.name.clone(), method, approximations };
            emit(out, fmt, &o, || {
                let mut s = format!("{} ({} approximation)\n", o.name, o.method);
                for a in &o.approximations {
                    s.push_str(&format!("  {}: dims {:?}, {}\n", a.perversity.label(), a.approximation.dims, if a.valid { "valid" } else { "INVALID" }));
                    s.push_str(&a.report.to_text());
                }
                s
            })?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Obstructions { input, choice } => {
            let inst = read_instance(&input.file)?;
            require_valid(&inst)?;
            let (method, p, q) = choose(&inst, choice.witt_approx)?;
            let rows = obstructions_vanish(&inst.tube, &p, &q)?;
            let o = ObstructionOutput { name: inst.name.clone(), method, all_vanish: all_vanish(&rows), rows };
            emit(out, fmt, &o, || {
                let mut s = format!("{} ({} approximation)\ndegree  diagram  pairing\n", o.name, o.method);
                let word = |b: bool| if b { "vanish" } else { "FAIL" };
                for r in &o.rows {
                    s.push_str(&format!("{:>6}  {:<7}  {}\n", r.degree, word(r.diagram_method), word(r.pairing_method)));
                }
                s.push_str(&format!("all vanish: {}\n", o.all_vanish));
                s
            })?;
            Ok(0)
        }
        Command::Homology { input, choice } => {
            let inst = read_instance(&input.file)?;
            require_valid(&inst)?;
            let (method, p, q) = choose(&inst, choice.witt_approx)?;
            let n = inst.tube.dimension;
            let ix_p = intersection_space(&inst.tube, &inst.global, &p)?;
            let ix_q = intersection_space(&inst.tube, &inst.global, &q)?;
            let duality = if all_vanish(&obstructions_vanish(&inst.tube, &p, &q)?) {
                global_duality(&ix_p, &ix_q, &default_sections(&ix_p)?, &default_sections(&ix_q)?)?;
                "verified"
            } else {
                "obstructed"
            };
            let rows: Vec<HomologyRow> = (inst.min_degree..=inst.max_degree)
                .map(|r| HomologyRow { degree: r, h_ix: ix_p.h_ix().dim(r), partner: ix_q.h_ix().dim(n - r) })
                .collect();
            let o = HomologyOutput { name: inst.name.clone(), method, dimension: n, duality, rows };
            emit(out, fmt, &o, || {
                let mut s = format!("{} ({} approximation, duality {})\ndegree  H_ix  partner(N-degree)\n", o.name, o.method, o.duality);
                for r in &o.rows {
                    s.push_str(&format!("{:>6}  {:>4}  {:>7}\n", r.degree, r.h_ix, r.partner));
                }
                s
            })?;
            Ok(0)
        }
        Command::Signature(input) => {
            let inst = read_instance(&input.file)?;
            require_valid(&inst)?;
            let (method, a) = match inst.supplied(Perversity::P) {
                Some(a) => ("supplied", a.clone()),
                None => ("witt", witt_approximation(&inst.tube)?),
            };
            let report = signature_report(&inst.tube, &inst.global, &a)?;
            let o = SignatureOutput { name: inst.name.clone(), method, report };
            emit(out, fmt, &o, || format!("{} ({} approximation)\n{}", o.name, o.method, o.report.to_text()))?;
            Ok(0)
        }
        Command::Gen(g) => {
            let mut p = GenProfile::random(g.dimension, g.seed, g.adversarial, !g.non_witt)?;
            if let Some(z) = &g.z_profile {
                p.z_profile = z.clone();
            }
            if g.z_profile_q.is_some() {
                p.z_profile_q = g.z_profile_q.clone();
            }
            if let Some(e) = &g.extra_profile {
                p.extra_profile = e.clone();
            }
            if let Some(k) = &g.kernel_profile {
                p.kernel_profile = k.clone();
            }
            if let Some(c) = &g.novikov_profile {
                p.novikov_profile = c.clone();
            }
            if let Some(m) = g.max_entry {
                p.max_entry = m;
            }
            p.definite_middle = g.definite_middle;
            let inst = generate_instance(&p)?;
            let json = inst.to_json();
            match &g.out {
                Some(path) => {
                    write_file(path, &format!("{json}\n"))?;
                    if fmt == Format::Text {
                        writeln!(out, "wrote {} to {path}", inst.name).map_err(io)?;
                    }
                }
                None => writeln!(out, "{json}").map_err(io)?,
            }
            Ok(0)
        }
        Command::Fixture { name, out: path } => {
            let json = emit_fixture(name)?.to_json();
            match path {
                Some(p) => write_file(p, &format!("{json}\n"))?,
                None => writeln!(out, "{json}").map_err(io)?,
            }
            Ok(0)
        }
    }
}
