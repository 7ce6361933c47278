use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand};
use kinship::logic::{self, Formula};
use kinship::report::PaperExample;
use kinship::symfun::{random_symmetric, DEFAULT_BASIS_CAP};
use kinship::{
    enumerate_kinship, Decomposer, Error, Kinship, Polynomial, Signature, Structure, DEFAULT_ENUMERATION_CAP,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser, Debug)]
#[command(
    name = "kinship",
    version,
    about = "Symmetric polynomials over finite relational structures"
)]
struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest number of candidate relation assignments examined when enumerating a kinship class.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Class {
    /// Signature JSON file, or one of `unary`, `binary`, `domain-digraph`, `undirected-graph`.
    #[arg(long)]
    sig: String,

    /// Universe size.
    #[arg(short)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every structure of the kinship class, one per line.
    Enumerate(Class),
    /// Print the isomorphism classes manifest.
    Classes(Class),
    /// Print the elementary symmetric polynomial of every class.
    Elemsym(Class),
    /// Write a symmetric structural polynomial in the class variables.
    #[command(group(ArgGroup::new("input").required(true).args(["polynomial", "random"])))]
    Decompose {
        #[command(flatten)]
        class: Class,
        /// Polynomial text, or `@path` to read it from a file.
        polynomial: Option<String>,
        /// Decompose a seeded random symmetric polynomial of at most this degree instead.
        #[arg(long, value_name = "DEGREE")]
        random: Option<usize>,
    },
    /// Print a basis of the relations among the s_ψ up to a weight.
    Relations {
        #[command(flatten)]
        class: Class,
        /// Largest weight considered.
        #[arg(short, value_parser = clap::value_parser!(u64).range(1..))]
        w: u64,
    },
    /// Print the polynomial realization of a formula.
    Realize {
        #[command(flatten)]
        class: Class,
        /// Formula text, or `@path`.
        formula: String,
    },
    /// Decide whether a structure satisfies a formula.
    #[command(group(ArgGroup::new("method").args(["by_counting", "direct", "both"])))]
    Check {
        /// Signature JSON file or built-in name.
        #[arg(long)]
        sig: String,
        /// Structure JSON file, or the JSON text itself.
        #[arg(long)]
        structure: String,
        /// Formula text, or `@path`.
        formula: String,
        /// Evaluate the decomposed realization at substructure counts (default).
        #[arg(long)]
        by_counting: bool,
        /// Evaluate the formula directly.
        #[arg(long)]
        direct: bool,
        /// Run both methods and compare them.
        #[arg(long)]
        both: bool,
    },
    /// Reproduce the two-element domain digraph example.
    PaperExample,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Enumerate(c) => {
            let sig = load_signature(&c.sig)?;
            for a in enumerate_kinship(&sig, c.n, cli.cap)? {
                println!("{a}");
            }
        }
        Command::Classes(c) => {
            print!("{}", kinship_of(cli, c)?.manifest());
        }
        Command::Elemsym(c) => {
            let kin = kinship_of(cli, c)?;
            for class in kin.classes() {
                println!(
                    "s[{}] = {}",
                    class.id,
                    kin.elementary(class.id).to_text(kin.signature())
                );
            }
        }
        Command::Decompose {
            class,
            polynomial,
            random,
        } => {
            let sig = load_signature(&class.sig)?;
            let dec = Decomposer::with_caps(&sig, class.n, cli.cap, DEFAULT_BASIS_CAP)?;
            let f = match (polynomial, random) {
                (Some(text), _) => Polynomial::parse(&read_arg(text)?, &sig)?,
                (None, Some(degree)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    let f = random_symmetric(dec.kinship(), &mut rng, *degree, -9..=9);
                    println!("f = {}", f.to_text(&sig));
                    f
                }
                (None, None) => unreachable!("clap requires an input"),
            };
            let d = dec.decompose(&f)?;
            println!("{}", d.g);
            print!("{}", dec.kinship().manifest());
            println!("verified: true weight: {} degree: {}", d.weight, d.degree);
        }
        Command::Relations { class, w } => {
            let kin = kinship_of(cli, class)?;
            let relations = kin.find_dependencies(*w as usize)?;
            for r in &relations {
                println!("{r} = 0");
            }
            print!("{}", kin.manifest());
            println!("relations: {}", relations.len());
        }
        Command::Realize { class, formula } => {
            let sig = load_signature(&class.sig)?;
            let gamma = logic::parse(&read_arg(formula)?, &sig)?;
            let p = logic::realize(&gamma, &sig, class.n)?;
            println!("{}", p.to_text(&sig));
            println!(
                "degree: {} structural: {} invariant: {}",
                p.degree(),
                logic::is_structural_formula(&gamma, &sig, class.n)?,
                logic::is_isomorphism_invariant(&gamma, &sig, class.n)?
            );
        }
        Command::Check {
            sig,
            structure,
            formula,
            by_counting: _,
            direct,
            both,
        } => {
            let sig = load_signature(sig)?;
            let a = load_structure(&sig, structure)?;
            let gamma = logic::parse(&read_arg(formula)?, &sig)?;
            return check(cli, &gamma, &a, *direct, *both);
        }
        Command::PaperExample => {
            let ex = PaperExample::compute()?;
            println!("{}", ex.to_text());
            if !ex.verified() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check(cli: &Cli, gamma: &Formula, a: &Structure, direct: bool, both: bool) -> Result<ExitCode, Error> {
    if direct {
        println!("direct={}", logic::models(a, gamma)?);
        return Ok(ExitCode::SUCCESS);
    }
    let dec = Decomposer::with_caps(a.signature(), a.n(), cli.cap, DEFAULT_BASIS_CAP)?;
    let counting = logic::check_by_counting(gamma, a, &dec)?;
    let direct_holds = if both { Some(logic::models(a, gamma)?) } else { None };
    match direct_holds {
        Some(d) => println!("direct={d} counting={} agree={}", counting.holds, d == counting.holds),
        None => println!("counting={}", counting.holds),
    }
    println!("value: {} realized: {}", counting.value, counting.direct_value);
    println!(
        "weight: {} bound: {}",
        counting.decomposition.weight, counting.decomposition.degree
    );
    println!("g: {}", counting.decomposition.g);
    let nonzero: Vec<String> = counting
        .counts
        .0
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, c)| format!("z[{k}]={c}"))
        .collect();
    println!("counts: {}", nonzero.join(" "));
    if direct_holds.is_some_and(|d| d != counting.holds) {
        eprintln!("error: direct semantics and counting disagree");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn kinship_of(cli: &Cli, c: &Class) -> Result<Kinship, Error> {
    Kinship::with_caps(&load_signature(&c.sig)?, c.n, cli.cap, DEFAULT_BASIS_CAP)
}

fn load_signature(arg: &str) -> Result<Arc<Signature>, Error> {
    let sig = match arg {
        "unary" => Signature::unary(),
        "binary" => Signature::binary(),
        "domain-digraph" => Signature::domain_digraph(),
        "undirected-graph" => Signature::undirected_graph(),
        path => Signature::from_json(&fs::read_to_string(path)?)?,
    };
    Ok(Arc::new(sig))
}

fn load_structure(sig: &Arc<Signature>, arg: &str) -> Result<Structure, Error> {
    let a = if arg.trim_start().starts_with('{') {
        Structure::from_json(sig, arg)?
    } else {
        Structure::from_json(sig, &fs::read_to_string(arg)?)?
    };
    a.validate().map_err(Error::Invalid)?;
    Ok(a)
}

fn read_arg(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => Ok(arg.to_owned()),
    }
}
