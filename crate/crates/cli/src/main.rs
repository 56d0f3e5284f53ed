use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use falg::algebroid::{AlgebroidPresentation, Law, Section};
use falg::constructions::{fixture_names, load_fixture};
use falg::deformation::{check_n_deformation, obstruction, semiclassical_limit, FormalDeformation, MultiDer};
use falg::duality::{deform_by_nijenhuis, dubrovin_dual, pre_f_dual};
use falg::exprparse::{parse_bundle_map, parse_deformation, parse_expr, parse_presentation, write_presentation};
use falg::hierarchy::{flow_from_section, flows_commute, principal_hierarchy, Connection};
use falg::report::Report;
use falg::Error;

#[derive(Parser)]
#[command(name = "falg", version, about = "Exact checks for F-algebroids, pre-Lie algebroids and pre-F-algebroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Structure file (JSON).
    file: Option<PathBuf>,
    /// Built-in example instead of a file; see `falg fixtures`.
    #[arg(long)]
    fixture: Option<String>,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the defining identities of a presentation.
    Check {
        #[command(flatten)]
        input: Input,
        /// Law to check; repeatable. Defaults to every law the structure supports.
        #[arg(long = "law")]
        laws: Vec<String>,
    },
    /// Dual presentation at an eventual identity.
    Dual {
        #[command(flatten)]
        input: Input,
        /// Components of the eventual identity, comma separated.
        #[arg(long)]
        ev: String,
        /// Pre-F duality (keeps the pre-Lie product).
        #[arg(long)]
        pre_f: bool,
        /// Where to write the dual structure file; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deform by a Nijenhuis operator or check a pre-Lie deformation.
    Deform(DeformArgs),
    /// Same as `deform --nijenhuis`.
    Nijenhuis(DeformArgs),
    /// Flows of hydrodynamic type and the principal hierarchy.
    Hierarchy {
        #[command(flatten)]
        input: Input,
        /// Highest level of the principal hierarchy built from the frame.
        #[arg(long, conflicts_with = "flows")]
        alpha_max: Option<usize>,
        /// Sections generating flows, `;` between sections and `,` between components.
        #[arg(long)]
        flows: Option<String>,
    },
    /// List built-in fixtures.
    Fixtures,
}

#[derive(Args)]
struct DeformArgs {
    #[command(flatten)]
    input: Input,
    /// Bundle map file `{"matrix": [[..]]}`.
    #[arg(long, conflicts_with = "mu1")]
    nijenhuis: Option<PathBuf>,
    /// Deformation file `{"mus": [{"mu": .., "sigma": ..}, ..]}`.
    #[arg(long)]
    mu1: Option<PathBuf>,
    /// Order of the deformation; missing higher terms are zero.
    #[arg(long)]
    order: Option<usize>,
    /// Where to write the deformed structure file; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Verification(anyhow::Error),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let report = match &e {
            Error::NotFManifoldAlgebra(r)
            | Error::NotFAlgebroid(r)
            | Error::NotEventual(r)
            | Error::NotNijenhuis(r)
            | Error::NotADeformation(r) => Some(r.summary()),
            _ => None,
        };
        let verification = report.is_some()
            || matches!(
                e,
                Error::NotInvertible
                    | Error::NotClosed(_)
                    | Error::ObstructionNonzero(_)
                    | Error::NotEquivalent(_)
                    | Error::NotAHomomorphism(_)
            );
        let err = match report {
            Some(s) => anyhow!("{e}\n{s}"),
            None => anyhow!(e),
        };
        if verification {
            Failure::Verification(err)
        } else {
            Failure::Input(err)
        }
    }
}

type Outcome = Result<bool, Failure>;

fn load(input: &Input) -> anyhow::Result<AlgebroidPresentation> {
    match (&input.file, &input.fixture) {
        (Some(_), Some(_)) => bail!("give either a file or --fixture, not both"),
        (None, None) => bail!("no input: give a structure file or --fixture NAME"),
        (None, Some(name)) => Ok(load_fixture(name)?),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_presentation(&text).with_context(|| format!("in {}", path.display()))
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(report: &Report, json: &Option<PathBuf>) -> anyhow::Result<bool> {
    print!("{}", report.summary());
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report.to_json())?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.overall())
}

fn write_out(text: &str, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_section(text: &str, a: &AlgebroidPresentation) -> anyhow::Result<Section> {
    let comps = text
        .split(',')
        .map(|s| parse_expr(s.trim(), a.base_vars()))
        .collect::<Result<Vec<_>, _>>()?;
    if comps.len() != a.rank() {
        bail!("expected {} components, found {}", a.rank(), comps.len());
    }
    Ok(Section::new(comps))
}

fn cmd_check(input: &Input, laws: &[String]) -> Outcome {
    let a = load(input)?;
    let laws = if laws.is_empty() {
        Law::applicable(&a)
    } else {
        laws.iter()
            .map(|l| Law::parse(l).ok_or_else(|| anyhow!("unknown law `{l}`")))
            .collect::<anyhow::Result<Vec<_>>>()?
    };
    if laws.is_empty() {
        return Err(Failure::Input(anyhow!("no law applies to `{}`", a.name())));
    }
    let mut report = Report::new(a.name());
    for law in laws {
        report.absorb(law.check(&a)?);
    }
    Ok(emit(&report, &input.json)?)
}

fn cmd_dual(input: &Input, ev: &str, pre_f: bool, out: &Option<PathBuf>) -> Outcome {
    let a = load(input)?;
    let ev = parse_section(ev, &a)?;
    let cert = if pre_f { pre_f_dual(&a, &ev)? } else { dubrovin_dual(&a, &ev)? };
    write_out(&write_presentation(&cert.dual), out)?;
    Ok(emit(&cert.verify_involution()?, &input.json)?)
}

fn cmd_deform(args: &DeformArgs) -> Outcome {
    let a = load(&args.input)?;
    if let Some(path) = &args.nijenhuis {
        let n = parse_bundle_map(&read(path)?, a.base_vars(), a.rank())?;
        let deformed = deform_by_nijenhuis(&a, &n)?;
        write_out(&write_presentation(&deformed), &args.out)?;
        let mut report = Report::new(deformed.name());
        for law in Law::applicable(&deformed) {
            report.absorb(law.check(&deformed)?);
        }
        return Ok(emit(&report, &args.input.json)?);
    }
    let Some(path) = &args.mu1 else {
        return Err(Failure::Input(anyhow!("deform needs --nijenhuis FILE or --mu1 FILE")));
    };
    let mut mus = parse_deformation(&read(path)?, a.base_vars(), a.rank())?;
    let order = args.order.unwrap_or(mus.len());
    if order < mus.len() {
        return Err(Failure::Input(anyhow!("--order {order} is below the {} terms given", mus.len())));
    }
    mus.resize(order, MultiDer::zero(2, a.rank(), a.nvars()));
    let def = FormalDeformation::new(a, mus, false)?;
    let report = check_n_deformation(&def)?;
    if !report.overall() {
        emit(&report, &args.input.json)?;
        return Ok(false);
    }
    let limit = semiclassical_limit(&def)?;
    println!("semi-classical bracket:");
    let names = limit.base_vars().to_vec();
    let table = limit.bracket_table()?;
    for i in 0..limit.rank() {
        for j in i + 1..limit.rank() {
            let s = table.get(i, j);
            if !s.is_zero() {
                println!("  [E{}, E{}] = [{}]", i + 1, j + 1, s.format_with(&names).join(", "));
            }
        }
    }
    let theta = obstruction(&def)?;
    println!("Theta_{} = 0: {}", def.order(), theta.is_zero());
    for line in theta.format_with(&names) {
        println!("  {line}");
    }
    write_out(&write_presentation(&limit), &args.out)?;
    Ok(emit(&report, &args.input.json)?)
}

fn cmd_hierarchy(input: &Input, alpha_max: Option<usize>, flows: &Option<String>) -> Outcome {
    let a = load(input)?;
    if let Some(spec) = flows {
        let sections = spec
            .split(';')
            .map(|s| parse_section(s, &a))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let flows = sections.iter().map(|x| flow_from_section(&a, x)).collect::<Result<Vec<_>, _>>()?;
        let mut report = Report::new(format!("{} flows", a.name()));
        for i in 0..flows.len() {
            for j in i + 1..flows.len() {
                let r = flows_commute(&flows[i], &flows[j])?;
                for mut c in r.checks {
                    c.instance = format!("[X{}, X{}] {}", i + 1, j + 1, c.instance);
                    report.push(c);
                }
            }
        }
        return Ok(emit(&report, &input.json)?);
    }
    let alpha_max = alpha_max.unwrap_or(1);
    let basis: Vec<Section> = (0..a.rank()).map(|i| a.basis(i)).collect();
    let h = principal_hierarchy(&a, &Connection::zero(a.nvars()), &basis, alpha_max)?;
    for (p, levels) in h.table.iter().enumerate() {
        for (alpha, x) in levels.iter().enumerate() {
            println!("X({},{}) = [{}]", p + 1, alpha, x.format_with(a.base_vars()).join(", "));
        }
    }
    Ok(emit(&h.report, &input.json)?)
}

fn cmd_fixtures() -> Outcome {
    for (name, about) in fixture_names() {
        println!("{name:<14} {about}");
    }
    Ok(true)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("FALG_THREADS") {
        let n: usize = v.parse().with_context(|| format!("FALG_THREADS={v}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().map_err(Failure::Input).and_then(|()| match &cli.command {
        Command::Check { input, laws } => cmd_check(input, laws),
        Command::Dual { input, ev, pre_f, out } => cmd_dual(input, ev, *pre_f, out),
        Command::Deform(args) => cmd_deform(args),
        Command::Nijenhuis(args) => {
            if args.nijenhuis.is_none() {
                Err(Failure::Input(anyhow!("nijenhuis needs --nijenhuis FILE")))
            } else {
                cmd_deform(args)
            }
        }
        Command::Hierarchy { input, alpha_max, flows } => cmd_hierarchy(input, *alpha_max, flows),
        Command::Fixtures => cmd_fixtures(),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
