use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use tropcount::io::{self as docs, Document};
use tropcount::multiplicity::{BranchCount, ComplexWeight, RealWeight};
use tropcount::path_count::{
    count_weighted, count_with, possible_subdivisions_with, subdivision_count, CountOptions, CountResult,
    PathEvaluator, DEFAULT_MEMO_LIMIT,
};
use tropcount::render::{render_curve, render_path, render_regular_subdivision, render_subdivision, RenderConfig};
use tropcount::trop_poly::{check_balancing, curve_of, regular_subdivision, TropicalCurve};

#[derive(Parser)]
#[command(name = "tropcount", version, about = "Enriched tropical counts of rational plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count rational degree-d curves through 3d-1 points
    Count {
        #[command(flatten)]
        degree: DegreeArgs,
        #[arg(long, value_enum, default_value_t = Flavor::All)]
        flavor: Flavor,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Recount with integer multiplicities and compare
        #[arg(long, hide = true)]
        cross_check: bool,
    },
    /// Per-path multiplicities
    Paths {
        #[command(flatten)]
        degree: DegreeArgs,
        /// Include paths of multiplicity zero
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write every possible subdivision of every path to a directory
    Subdivisions {
        #[command(flatten)]
        degree: DegreeArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG next to each file
        #[arg(long)]
        svg: bool,
    },
    /// Corner locus of a tropical polynomial
    Tropicalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write a drawing of the curve
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw a stored path, subdivision, polynomial or curve
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
    },
}

#[derive(Args)]
struct DegreeArgs {
    #[arg(long, short)]
    degree: u32,
    #[arg(long, env = "TROPCOUNT_WORKERS")]
    workers: Option<usize>,
    /// Refuse degrees above this
    #[arg(long, default_value_t = 7)]
    max_degree: u32,
}

impl DegreeArgs {
    fn checked(&self) -> Result<u32> {
        if self.degree == 0 {
            bail!("degree must be at least 1");
        }
        if self.degree > self.max_degree {
            bail!("degree {} exceeds --max-degree {}; raise it to proceed", self.degree, self.max_degree);
        }
        Ok(self.degree)
    }

    fn workers(&self) -> Result<usize> {
        match self.workers {
            Some(0) => bail!("--workers must be at least 1"),
            Some(n) => Ok(n),
            None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }
}

#[derive(Args)]
struct StyleArgs {
    #[arg(long, default_value = "40")]
    scale: BigRational,
    #[arg(long, default_value = "20")]
    margin: BigRational,
    #[arg(long, default_value = "2")]
    end_length: BigRational,
    #[arg(long)]
    no_labels: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Flavor {
    Complex,
    Real,
    Quadratic,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A result contradicting a proven identity; reported with its own exit code.
#[derive(Debug)]
struct InvariantBreach(String);

impl fmt::Display for InvariantBreach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "internal invariant violated: {}", self.0)
    }
}

impl std::error::Error for InvariantBreach {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvariantBreach>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match command {
        Command::Count { degree, flavor, format, cross_check } => {
            let d = degree.checked()?;
            let workers = degree.workers()?;
            let opts = CountOptions { workers, record_paths: false, keep_zero_paths: false, memo_limit: DEFAULT_MEMO_LIMIT };
            let r = count_with(d, &opts)?;
            if cross_check {
                cross_check_count(&r, workers)?;
            }
            write_count(&mut out, &r, flavor, format)?;
        }
        Command::Paths { degree, all, format } => {
            let d = degree.checked()?;
            let opts = CountOptions {
                workers: degree.workers()?,
                record_paths: true,
                keep_zero_paths: all,
                memo_limit: DEFAULT_MEMO_LIMIT,
            };
            let r = count_with(d, &opts)?;
            match format {
                Format::Json => out.write_all(docs::count_doc(&r).to_json().as_bytes())?,
                Format::Text => {
                    let mut eval = PathEvaluator::<BranchCount>::new(d)?;
                    writeln!(out, "path\tmu_plus\tmu_minus\tmu\tirreducible\tsubdivisions")?;
                    for rec in &r.per_path {
                        let m = &rec.multiplicity;
                        let subs = subdivision_count(&mut eval, &rec.path);
                        writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{subs}",
                            rec.path, m.mu_plus, m.mu_minus, m.mu, m.irreducible
                        )?;
                    }
                }
            }
        }
        Command::Subdivisions { degree, out: dir, svg } => {
            let d = degree.checked()?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let cfg = RenderConfig::default();
            let mut eval = PathEvaluator::<BranchCount>::new(d)?;
            let (mut written, mut paths) = (0usize, 0usize);
            for (k, path) in tropcount::path_count::enumerate_paths(d)?.enumerate() {
                let subs = possible_subdivisions_with(&mut eval, &path);
                if !subs.is_empty() {
                    paths += 1;
                }
                for (n, (s, m)) in subs.iter().enumerate() {
                    let stem = dir.join(format!("path{k:06}-sub{n:03}"));
                    write_file(&stem.with_extension("json"), &docs::subdivision_doc(s, Some(&path), Some(m)).to_json())?;
                    if svg {
                        write_file(&stem.with_extension("svg"), &render_subdivision(s, &cfg))?;
                    }
                    written += 1;
                }
            }
            writeln!(out, "wrote {written} subdivisions of {paths} paths to {}", dir.display())?;
        }
        Command::Tropicalize { input, format, svg } => {
            let poly = docs::parse_polynomial(&read_file(&input)?)?;
            let sub = regular_subdivision(&poly)?;
            let curve = curve_of(&sub);
            let report = check_balancing(&curve);
            if !report.is_balanced() {
                return Err(InvariantBreach(format!("corner locus unbalanced at {:?}", report.unbalanced_vertices())).into());
            }
            match format {
                Format::Json => out.write_all(Document::Curve(curve.clone()).to_json().as_bytes())?,
                Format::Text => write_curve(&mut out, &curve, sub.cells.len())?,
            }
            if let Some(path) = svg {
                write_file(&path, &render_curve(&curve, &RenderConfig::default())?)?;
            }
        }
        Command::Render { input, out: target, style } => {
            let cfg = RenderConfig::new(style.scale, style.margin, style.end_length, !style.no_labels)?;
            let text = read_file(&input)?;
            let svg = match docs::parse_document(&text)? {
                Document::Path(_) => render_path(&docs::parse_path(&text)?, &cfg),
                Document::Subdivision(_) => render_subdivision(&docs::parse_subdivision(&text)?, &cfg),
                Document::Curve(_) => render_curve(&docs::parse_curve(&text)?, &cfg)?,
                Document::Polynomial(_) => {
                    let sub = regular_subdivision(&docs::parse_polynomial(&text)?)?;
                    render_regular_subdivision(&sub, &cfg)
                }
                Document::Count(_) => bail!("count documents have no drawing"),
            };
            write_file(&target, &svg)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cross_check_count(r: &CountResult, workers: usize) -> Result<()> {
    let complex = count_weighted::<ComplexWeight>(r.degree, workers)?.0;
    let real = count_weighted::<RealWeight>(r.degree, workers)?.0;
    if complex != r.complex_count as u128 || real != r.real_count as i128 {
        return Err(InvariantBreach(format!(
            "integer recount gives {complex} / {real}, rank and signature give {} / {}",
            r.complex_count, r.real_count
        ))
        .into());
    }
    Ok(())
}

fn write_count(out: &mut impl Write, r: &CountResult, flavor: Flavor, format: Format) -> Result<()> {
    match (format, flavor) {
        (Format::Json, _) => out.write_all(docs::count_doc(r).to_json().as_bytes())?,
        (Format::Text, Flavor::All) => {
            writeln!(out, "{}  rank={}  signature={}", r.quadratic, r.complex_count, r.real_count)?
        }
        (Format::Text, Flavor::Quadratic) => writeln!(out, "{}", r.quadratic)?,
        (Format::Text, Flavor::Complex) => writeln!(out, "{}", r.complex_count)?,
        (Format::Text, Flavor::Real) => writeln!(out, "{}", r.real_count)?,
    }
    Ok(())
}

fn write_curve(out: &mut impl Write, curve: &TropicalCurve, cells: usize) -> Result<()> {
    writeln!(out, "cells: {cells}")?;
    for (k, v) in curve.vertices.iter().enumerate() {
        writeln!(out, "vertex {k}: {v}")?;
    }
    for e in &curve.bounded_edges {
        writeln!(out, "edge {} - {} weight {}", e.from, e.to, e.weight)?;
    }
    for e in &curve.ends {
        writeln!(out, "end at {} direction ({}, {}) weight {}", e.vertex, e.direction.0, e.direction.1, e.weight)?;
    }
    writeln!(out, "balancing: ok at all {} vertices", curve.vertices.len())?;
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
