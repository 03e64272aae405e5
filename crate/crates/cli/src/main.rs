use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use ctau_core::milnor::{grammar, BiDegree, MilnorAlgebra};
use ctau_core::modules::module_by_name;
use ctau_core::resolution::{minimal_resolution, ExtChart, ResolutionConfig};
use ctau_core::verify::{run_suite, Suite};
use ctau_core::Error;

mod svg;

#[derive(Parser)]
#[command(
    name = "ctau",
    version,
    about = "Steenrod algebra arithmetic, Ext charts and tower checks"
)]
struct Cli {
    /// Largest stem computed; nothing extends past it.
    #[arg(long, global = true, env = "CTAU_MAX_STEM", default_value_t = 24)]
    max_stem: i32,

    /// Largest Adams filtration resolved.
    #[arg(long, global = true, env = "CTAU_MAX_FILT", default_value_t = 16)]
    max_filt: i32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Milnor basis of a bidegree, one element per line.
    Basis {
        #[arg(long, allow_negative_numbers = true)]
        stem: i32,
        #[arg(long, allow_negative_numbers = true)]
        weight: i32,
        /// Print the dual monomials instead.
        #[arg(long)]
        dual: bool,
    },
    /// Product of two Steenrod algebra elements.
    Mul { left: String, right: String },
    /// Antipode of a dual element.
    Antipode { element: String },
    /// Conjugate of a Steenrod algebra element.
    Conjugate { element: String },
    /// The element P^s_t.
    Pst { s: u32, t: u32 },
    /// Pairing of a Steenrod algebra element with a dual element.
    Pair { element: String, dual: String },
    /// Minimal resolution of a named module, written as a chart file.
    Resolve {
        /// sphere, kw:n, wbp or wbp:n
        #[arg(long)]
        module: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Cap on new generators in a single bidegree.
        #[arg(long)]
        max_gens: Option<usize>,
    },
    /// Runs verification suites and prints their reports as JSON.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Renders a chart file as SVG or TSV.
    Chart {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "tsv", required_unless_present = "tsv")]
        svg: Option<PathBuf>,
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
}

fn algebra(cli: &Cli) -> Result<Arc<MilnorAlgebra>, Error> {
    if cli.max_stem < 0 {
        return Err(Error::Contract("--max-stem must be non-negative".into()));
    }
    Ok(Arc::new(MilnorAlgebra::new(cli.max_stem)))
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let err = |e: Error| e.to_string();
    match &cli.command {
        Command::Basis { stem, weight, dual } => {
            let alg = algebra(cli).map_err(err)?;
            let d = BiDegree::new(*stem, *weight);
            for m in alg.dual_basis(d).map_err(err)? {
                if *dual {
                    println!("{m}");
                } else {
                    println!("{}", grammar::steenrod_term_string(m));
                }
            }
        }
        Command::Mul { left, right } => {
            let alg = algebra(cli).map_err(err)?;
            let a = grammar::parse_steenrod(&alg, left).map_err(err)?;
            let b = grammar::parse_steenrod(&alg, right).map_err(err)?;
            let p = alg.multiply(&a, &b).map_err(err)?;
            println!("{}", grammar::format_steenrod(&alg, &p).map_err(err)?);
        }
        Command::Antipode { element } => {
            let alg = algebra(cli).map_err(err)?;
            let x = grammar::parse_dual(&alg, element).map_err(err)?;
            let y = alg.antipode_dual(&x).map_err(err)?;
            println!("{}", grammar::format_dual(&alg, &y).map_err(err)?);
        }
        Command::Conjugate { element } => {
            let alg = algebra(cli).map_err(err)?;
            let a = grammar::parse_steenrod(&alg, element).map_err(err)?;
            let c = alg.conjugate(&a).map_err(err)?;
            println!("{}", grammar::format_steenrod(&alg, &c).map_err(err)?);
        }
        Command::Pst { s, t } => {
            let alg = algebra(cli).map_err(err)?;
            let p = alg.pst(*s, *t).map_err(err)?;
            println!("{}", grammar::format_steenrod(&alg, &p).map_err(err)?);
        }
        Command::Pair { element, dual } => {
            let alg = algebra(cli).map_err(err)?;
            let a = grammar::parse_steenrod(&alg, element).map_err(err)?;
            let x = grammar::parse_dual(&alg, dual).map_err(err)?;
            println!("{}", u8::from(alg.pair(&a, &x).map_err(err)?));
        }
        Command::Resolve {
            module,
            out,
            threads,
            max_gens,
        } => {
            let mut cfg = ResolutionConfig::new(cli.max_stem, cli.max_filt);
            cfg.threads = *threads;
            if let Some(g) = max_gens {
                cfg.max_gens_per_bidegree = *g;
            }
            let alg = Arc::new(MilnorAlgebra::new(cfg.algebra_window()));
            let m = module_by_name(alg, module, cfg.module_window()).map_err(err)?;
            match minimal_resolution(m, cfg) {
                Ok(res) => write_output(out, &res.chart().to_json())?,
                Err(Error::ResourceBound {
                    completed_stem,
                    stopped_at,
                    partial,
                }) => {
                    write_output(out, &partial.to_json())?;
                    return Err(format!(
                        "resource bound exceeded at stem {stopped_at}; wrote a partial chart complete through stem {completed_stem}"
                    ));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(err)?;
            let reports = run_suite(suite).map_err(err)?;
            let failed: Vec<&str> = reports
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.check.as_str())
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            );
            if !failed.is_empty() {
                eprintln!("failed checks: {}", failed.join(", "));
                return Ok(false);
            }
        }
        Command::Chart { input, svg, tsv } => {
            let text = fs::read_to_string(input)
                .map_err(|e| format!("cannot read {}: {e}", input.display()))?;
            let chart = ExtChart::from_json(&text).map_err(err)?;
            if let Some(p) = svg {
                write_output(&Some(p.clone()), &svg::render(&chart))?;
            }
            if let Some(p) = tsv {
                write_output(&Some(p.clone()), &chart.to_tsv())?;
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
