//! `pborel`: Betti tables, regularity and resolution checks for monomial ideals.
//!
//! Exit codes: 0 on success, 1 when a requested check fails, 2 on usage or
//! input errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use pborel_core::cellular::{
    build_glued, build_permutohedron, cellular_betti, is_minimal_cellular, supports_resolution, LabeledComplex, Support,
};
use pborel_core::mapcone::{all_orders_check, iterated_mapcone};
use pborel_core::oracle::{betti_table, multigraded_betti};
use pborel_core::pborel::{is_p_borel, p_borel_closure, p_borel_violation};
use pborel_core::special::{expand_spec, pardue_regularity, special_betti_table, ScaleBase};
use pborel_core::{FieldChar, GradedBettiTable, Monomial, MonomialIdeal, SpecialIdealSpec};

#[derive(Parser)]
#[command(name = "pborel", version, about = "Betti tables and regularity of monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Betti table of R/I from simplicial homology.
    Betti(BettiArgs),
    /// Betti table of a special ideal from the closed-form recursion.
    Special(SpecialArgs),
    /// Smallest p-Borel ideal containing the given monomials.
    Closure(ClosureArgs),
    /// Permutohedral and glued cell complexes and their resolutions.
    Cellular(CellularArgs),
    /// Iterated mapping cones over an ordering of generators.
    Mapcone(MapconeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Diagram,
    Tsv,
    /// Multigraded entries `i TAB b1,...,bn TAB m` (betti only).
    Multigraded,
}

#[derive(Args)]
struct IdealInput {
    /// Comma-separated monomials, e.g. "a^2*b,b^3" or "x1^2*x2,x2^3".
    #[arg(short, long)]
    ideal: String,
    /// Number of variables (default: largest variable that occurs).
    #[arg(short = 'n', long = "vars")]
    vars: Option<usize>,
}

#[derive(Args)]
struct BettiArgs {
    #[command(flatten)]
    input: IdealInput,
    /// Field characteristic: 0 or a prime.
    #[arg(short = 'p', long = "char", default_value = "0")]
    field: FieldChar,
    #[arg(long, value_enum, default_value = "diagram")]
    format: Format,
}

#[derive(Args)]
struct SpecialArgs {
    /// Parameters, e.g. "n=3; l=3,3; a=1,1; p=1,2".
    #[arg(long)]
    spec: SpecialIdealSpec,
    /// Characteristics for --compare-oracle (comma-separated).
    #[arg(short = 'p', long = "char", value_delimiter = ',', default_value = "0")]
    fields: Vec<FieldChar>,
    /// Also compute the table by homology and compare.
    #[arg(long)]
    compare_oracle: bool,
    #[arg(long, value_enum, default_value = "diagram")]
    format: Format,
}

#[derive(Args)]
struct ClosureArgs {
    /// Comma-separated seed monomials.
    #[arg(short, long)]
    monomials: String,
    /// The prime p.
    #[arg(short, long)]
    p: u64,
    /// Number of variables (default: largest variable that occurs).
    #[arg(short = 'n', long = "vars")]
    vars: Option<usize>,
}

#[derive(Args)]
struct CellularArgs {
    /// Build the permutohedron with vertex labels x_i^(d*p1) x_j^p2.
    #[arg(long, conflicts_with = "spec")]
    hexagon: bool,
    /// Glue the complex for a special ideal with a = 1,1 and l = n,n.
    #[arg(long)]
    spec: Option<SpecialIdealSpec>,
    /// Number of variables for --hexagon.
    #[arg(short = 'n', long = "vars", default_value_t = 3)]
    vars: usize,
    #[arg(short = 'd', default_value_t = 1)]
    d: u64,
    #[arg(long, default_value = "1")]
    p1: BigUint,
    #[arg(long, default_value = "2")]
    p2: BigUint,
    #[arg(short = 'p', long = "char", default_value = "0")]
    field: FieldChar,
    /// Print one `dim TAB vertices TAB label` line per face.
    #[arg(long)]
    dump: bool,
}

#[derive(Args)]
struct MapconeArgs {
    /// Generators in the order they are added.
    #[arg(short, long)]
    ideal: String,
    #[arg(short = 'n', long = "vars")]
    vars: Option<usize>,
    #[arg(short = 'p', long = "char", default_value = "0")]
    field: FieldChar,
    /// Try every ordering of the minimal generators instead.
    #[arg(long)]
    all_orders: bool,
}

/// Why a command stopped.
enum Failure {
    /// A check ran and came out negative (exit 1).
    Check(String),
    /// Bad input (exit 2).
    Input(String),
}

impl From<pborel_core::Error> for Failure {
    fn from(e: pborel_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Betti(a) => cmd_betti(a),
        Command::Special(a) => cmd_special(a),
        Command::Closure(a) => cmd_closure(a),
        Command::Cellular(a) => cmd_cellular(a),
        Command::Mapcone(a) => cmd_mapcone(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn render(table: &GradedBettiTable, format: Format) -> String {
    match format {
        Format::Tsv => table.to_tsv(),
        _ => table.to_diagram(),
    }
}

fn cmd_betti(args: BettiArgs) -> Outcome {
    let ideal = MonomialIdeal::parse(&args.input.ideal, args.input.vars)?;
    if let Format::Multigraded = args.format {
        print!("{}", multigraded_betti(&ideal, args.field)?.to_tsv());
    } else {
        print!("{}", render(&betti_table(&ideal, args.field)?, args.format));
    }
    Ok(())
}

fn cmd_special(args: SpecialArgs) -> Outcome {
    let spec = args.spec;
    let ideal = expand_spec(&spec)?;
    let table = special_betti_table(&spec)?;
    println!("spec: {spec}");
    println!("ideal: {ideal} ({} generators)", ideal.num_gens());
    print!("{}", render(&table, args.format));
    let reg = pardue_regularity(&spec);
    let note = match reg.scale_base {
        ScaleBase::AnyPrime => String::new(),
        ScaleBase::Prime(p) => format!(" ({p}-Borel)"),
        ScaleBase::NotPrimePower => " (scales are not powers of one prime)".to_string(),
    };
    println!("reg(I) = {}{note}", reg.value);
    if args.compare_oracle {
        let mut differ = Vec::new();
        for field in args.fields {
            let oracle = betti_table(&ideal, field)?;
            let verdict = if oracle == table { "EQUAL" } else { "DIFFER" };
            println!("oracle char {field}: {verdict}");
            if oracle != table {
                print!("{}", render(&oracle, args.format));
                differ.push(field.to_string());
            }
        }
        if !differ.is_empty() {
            return Err(Failure::Check(format!(
                "recursion differs from oracle in char {}",
                differ.join(", ")
            )));
        }
    }
    Ok(())
}

fn parse_list(text: &str, vars: Option<usize>) -> Result<Vec<Monomial>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.is_empty() {
        return Err(Failure::Input("no monomials given".into()));
    }
    // the ideal parser infers the ambient dimension from all parts at once
    let n = match vars {
        Some(n) => n,
        None => parts
            .iter()
            .map(|p| MonomialIdeal::parse(p, None).map(|i| i.nvars()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .max()
            .unwrap_or(1),
    };
    Ok(parts.iter().map(|p| Monomial::parse(p, n)).collect::<Result<_, _>>()?)
}

fn cmd_closure(args: ClosureArgs) -> Outcome {
    let seeds = parse_list(&args.monomials, args.vars)?;
    let n = seeds[0].nvars();
    let closure = p_borel_closure(&seeds, args.p, n)?;
    println!("{closure}");
    println!("{} generators", closure.num_gens());
    debug_assert!(is_p_borel(&closure, args.p).unwrap_or(false));
    if let Some(v) = p_borel_violation(&closure, args.p)? {
        return Err(Failure::Check(v.to_string()));
    }
    Ok(())
}

fn describe(c: &LabeledComplex) -> String {
    let counts: Vec<String> = c.face_counts().iter().map(ToString::to_string).collect();
    format!("faces by dimension: {}", counts.join(" "))
}

fn cmd_cellular(args: CellularArgs) -> Outcome {
    let complex = match (&args.spec, args.hexagon) {
        (Some(spec), _) => build_glued(spec)?,
        (None, true) => build_permutohedron(args.vars, args.d, &args.p1, &args.p2)?,
        (None, false) => return Err(Failure::Input("pass --hexagon or --spec".into())),
    };
    if args.dump {
        print!("{}", complex.dump());
        return Ok(());
    }
    println!("ideal: {}", complex.ideal()?);
    println!("{}", describe(&complex));
    let support = supports_resolution(&complex, args.field)?;
    let minimal = is_minimal_cellular(&complex);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    println!(
        "supports: {}, minimal: {}",
        yes_no(support.is_supported()),
        yes_no(minimal)
    );
    if let Support::Fails { b } = &support {
        return Err(Failure::Check(format!("subcomplex below {b} is not acyclic")));
    }
    if !minimal {
        return Err(Failure::Check("a face shares its label with a facet of it".into()));
    }
    print!("{}", cellular_betti(&complex, args.field)?.to_diagram());
    Ok(())
}

fn cmd_mapcone(args: MapconeArgs) -> Outcome {
    if args.all_orders {
        let ideal = MonomialIdeal::parse(&args.ideal, args.vars)?;
        print!("{}", all_orders_check(&ideal, args.field)?.render());
        return Ok(());
    }
    let gens = parse_list(&args.ideal, args.vars)?;
    for step in iterated_mapcone(&gens, args.field)? {
        let verdict = match &step.first_discrepancy {
            None => "minimal".to_string(),
            Some((i, d)) => format!(
                "NOT minimal: first discrepancy at ({i},{d}), predicted {} actual {}",
                step.predicted.get(*i, d),
                step.actual.get(*i, d)
            ),
        };
        println!(
            "step {}: add {}, colon ({}): {verdict}",
            step.step, step.added, step.colon
        );
    }
    Ok(())
}
