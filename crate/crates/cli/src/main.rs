use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use toric_perv::algebra::{self, is_member, mu_delta_check, Membership, RandomElementConfig};
use toric_perv::demos;
use toric_perv::descent::ChartChoice;
use toric_perv::equivariant::EqStructure;
use toric_perv::fan::{fan_condition_witness, Fan};
use toric_perv::io;
use toric_perv::lattice::LatticeVector;
use toric_perv::pervmod::hom::hom;
use toric_perv::pervmod::relations::{check_relations, relation_report};
use toric_perv::pervmod::{rep_check, DiagramModule};
use toric_perv::report::Report;
use toric_perv::Error;

#[derive(Parser)]
#[command(name = "toricperv", version, about = "Algebras and modules for perverse sheaves on smooth toric varieties")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Verify::Fast)]
    verify: Verify,
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verify {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Fans.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Elements of the algebra.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Modules.
    #[command(subcommand)]
    Mod(ModCmd),
    /// Descent data.
    #[command(subcommand)]
    Desc(DescCmd),
    /// The equivariant algebra.
    #[command(subcommand)]
    Equi(EquiCmd),
    /// Worked examples.
    #[command(subcommand)]
    Demo(DemoCmd),
}

#[derive(Subcommand)]
enum FanCmd {
    /// Checks regularity and the fan axiom.
    Check { fan: PathBuf },
    /// Lists cones and covering pairs.
    Faces { fan: PathBuf },
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Membership of a matrix, with a failing entry when it is not.
    Member { fan: PathBuf, elem: PathBuf },
    /// Product of two elements.
    Mul { fan: PathBuf, a: PathBuf, b: PathBuf },
    /// Checks mu(delta(x)) = x over all pairs of maximal cones.
    Mudelta { fan: PathBuf },
}

#[derive(Subcommand)]
enum ModCmd {
    /// Checks the module axioms.
    Validate { module: PathBuf },
    /// Checks that evaluation is additive and multiplicative.
    Repcheck { module: PathBuf },
    /// Relations among the monodromy operators of a fan.
    Relations { fan: PathBuf },
    /// Space of module maps.
    Hom { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum DescCmd {
    /// Checks the cocycle conditions.
    Check { datum: PathBuf },
    /// Glues the charts to a module.
    Glue {
        datum: PathBuf,
        /// Take each cone's chart from the greatest containing maximal cone.
        #[arg(long)]
        greatest: bool,
    },
}

#[derive(Subcommand)]
enum EquiCmd {
    /// Smith presentation of a quotient torus.
    Present { quotient: PathBuf },
    /// Structure constants and associativity.
    Structure { fan: PathBuf, quotient: PathBuf },
    /// Checks an equivariant module.
    Validate { eqmodule: PathBuf },
    /// The plain module obtained by restriction along Q.
    Inflate { eqmodule: PathBuf },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Searches for a module breaking M12·M13 = id on the plane
    Dupont,
    /// Idempotents and u, v on the line
    C1,
    /// Shape of an element on the projective line
    P1,
}

enum Failure {
    Input(Error),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidModule(_) | Error::NotMember { .. } => Failure::Math(e.to_string()),
            other => Failure::Input(other),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn base(path: &Path) -> Option<&Path> {
    path.parent()
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(io::read_text(path)?)
}

fn load_fan(path: &Path) -> Result<Arc<Fan>, Failure> {
    Ok(Arc::new(io::read_fan(path)?))
}

fn load_module(path: &Path) -> Result<DiagramModule, Failure> {
    Ok(io::parse_module(&read(path)?, base(path))?)
}

fn emit(run: &RunConfig, text: &str) -> Result<(), Failure> {
    match &run.output {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| Failure::Input(Error::Parse(format!("{}: {e}", p.display())))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn summary(report: &Report, what: &str) -> bool {
    print!("{report}");
    let n = report.findings.len();
    if n == 0 {
        println!("{what}: PASS");
    } else {
        println!("{what}: FAIL ({n} finding{})", if n == 1 { "" } else { "s" });
    }
    report.is_ok()
}

fn fan_check(path: &Path) -> Outcome {
    let json: io::FanJson = io::from_str(&read(path)?)?;
    let fan = match io::fan_from_json(&json) {
        Ok(f) => f,
        Err(Error::InvalidFan(msg)) => {
            let mut report = Report::new();
            report.push("FAN", path.display().to_string(), msg);
            let rays: Vec<LatticeVector> = json.rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
            if let Some((a, b)) = fan_condition_witness(json.rank, &rays, &json.max_cones) {
                report.push("OVERLAP", format!("{a} {b}"), "maximal cones do not meet in a common face");
            }
            return Ok(summary(&report, "fan"));
        }
        Err(e) => return Err(e.into()),
    };
    let check = fan.is_fan();
    let mut report = Report::new();
    if let Some((a, b)) = check.witness {
        report.push("OVERLAP", format!("{{{}}} {{{}}}", fan.key(a), fan.key(b)), "maximal cones do not meet in a common face");
    }
    println!("{fan}");
    if !check.fully_verified {
        println!("fan axiom not verified at this size");
    }
    Ok(summary(&report, "fan"))
}

fn fan_faces(path: &Path) -> Outcome {
    let fan = load_fan(path)?;
    println!("{fan}");
    for c in fan.cone_ids() {
        let rays: Vec<String> = fan.ray_vectors(c).iter().map(ToString::to_string).collect();
        let tag = if fan.is_maximal(c) { "\tmaximal" } else { "" };
        println!("cone\t{{{}}}\t{}{tag}", fan.key(c), rays.join(" "));
    }
    for p in fan.covering_pairs() {
        println!("pair\t{{{}}}<{{{}}}\tray {}", fan.key(p.lower), fan.key(p.upper), p.ray);
    }
    Ok(true)
}

fn alg(cmd: &AlgCmd, run: &RunConfig) -> Outcome {
    match cmd {
        AlgCmd::Member { fan, elem } => {
            let f = load_fan(fan)?;
            let json: io::ElementJson = io::from_str(&read(elem)?)?;
            let entries = io::parse_entries(&json, &f)?;
            match is_member(&f, &entries)? {
                Membership::Member => {
                    println!("member: PASS");
                    Ok(true)
                }
                Membership::NotMember { row, col } => {
                    let need = f.binomial_product(row, col);
                    println!("NOTMEMBER\t{{{}}} {{{}}}\tnot divisible by {need}", f.key(row), f.key(col));
                    println!("member: FAIL");
                    Ok(false)
                }
            }
        }
        AlgCmd::Mul { fan, a, b } => {
            let f = load_fan(fan)?;
            let x = io::parse_element(&read(a)?, Some(&f), base(a))?;
            let y = io::parse_element(&read(b)?, Some(&f), base(b))?;
            let xy = x.mul(&y)?;
            emit(run, &io::to_pretty(&io::element_to_json(&xy)?))?;
            Ok(true)
        }
        AlgCmd::Mudelta { fan } => {
            let f = load_fan(fan)?;
            let report = mu_delta_check(&f, run.trials, run.seed, &RandomElementConfig::default())?;
            let n = f.maximal_cones().len();
            println!("{} ordered pairs of maximal cones, {} trials each", n * n, run.trials);
            Ok(summary(&report.sorted(), "mu(delta(x)) = x"))
        }
    }
}

fn module(cmd: &ModCmd, run: &RunConfig) -> Outcome {
    match cmd {
        ModCmd::Validate { module } => {
            let m = load_module(module)?;
            let mut report = m.validate();
            if run.verify == Verify::Full && report.is_ok() {
                report.extend(check_relations(&m)?);
            }
            Ok(summary(&report.sorted(), "module axioms"))
        }
        ModCmd::Repcheck { module } => {
            let m = load_module(module)?;
            let check = rep_check(&m, run.trials, run.seed)?;
            let mut report = Report::new();
            if let Some(f) = &check.failure {
                report.push("REP", format!("trial {}", f.trial), format!("{} fails", f.property));
            }
            println!("{} trials", check.trials);
            Ok(summary(&report, "representation"))
        }
        ModCmd::Relations { fan } => {
            let f = load_fan(fan)?;
            print!("{}", relation_report(&f));
            Ok(true)
        }
        ModCmd::Hom { a, b } => {
            let (ma, mb) = (load_module(a)?, load_module(b)?);
            let basis = hom(&ma, &mb)?;
            println!("dim Hom = {}", basis.len());
            let fan = ma.fan();
            for (k, f) in basis.iter().enumerate() {
                for c in fan.cone_ids() {
                    let block = f.block(c);
                    if block.rows() * block.cols() > 0 {
                        println!("f{k}\t{{{}}}\t{block}", fan.key(c));
                    }
                }
            }
            Ok(true)
        }
    }
}

fn descent(cmd: &DescCmd, run: &RunConfig) -> Outcome {
    match cmd {
        DescCmd::Check { datum } => {
            let d = io::parse_descent(&read(datum)?, base(datum))?;
            Ok(summary(&d.check_cocycle().sorted(), "cocycle"))
        }
        DescCmd::Glue { datum, greatest } => {
            let d = io::parse_descent(&read(datum)?, base(datum))?;
            let report = d.check_cocycle().sorted();
            if !report.is_ok() {
                return Ok(summary(&report, "cocycle"));
            }
            let choice = if *greatest { ChartChoice::GreatestContaining } else { ChartChoice::LeastContaining };
            let m = match d.glue_with(choice) {
                Ok(m) => m,
                Err(e @ Error::Descent(_)) => return Err(Failure::Math(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            if run.verify == Verify::Full {
                let check = m.validate().sorted();
                if !check.is_ok() {
                    return Ok(summary(&check, "glued module axioms"));
                }
            }
            emit(run, &io::to_pretty(&io::module_to_json(&m)?))?;
            Ok(true)
        }
    }
}

fn equi(cmd: &EquiCmd, run: &RunConfig) -> Outcome {
    match cmd {
        EquiCmd::Present { quotient } => {
            let q = io::parse_quotient(&read(quotient)?)?;
            println!("{q}");
            println!("quotient rank {}, torsion order {}", q.quotient_rank(), q.finite_order());
            Ok(true)
        }
        EquiCmd::Structure { fan, quotient } => {
            let f = load_fan(fan)?;
            let q = io::quotient_from_json(&io::from_str(&read(quotient)?)?, Some(f.rank()))?;
            let s = EqStructure::new(&f, &q)?;
            for (&(a, b, c), poly) in s.table() {
                println!("c\t{{{}}} {{{}}} {{{}}}\t{poly}", f.key(a), f.key(b), f.key(c));
            }
            let report = s.check_associativity(run.trials, run.seed).sorted();
            if !s.is_exhaustive() {
                println!("associativity sampled on {} quadruples", run.trials);
            }
            Ok(summary(&report, "associativity"))
        }
        EquiCmd::Validate { eqmodule } => {
            let m = io::parse_eq_module(&read(eqmodule)?, base(eqmodule))?;
            Ok(summary(&m.validate().sorted(), "equivariant module axioms"))
        }
        EquiCmd::Inflate { eqmodule } => {
            let m = io::parse_eq_module(&read(eqmodule)?, base(eqmodule))?;
            let report = m.validate().sorted();
            if !report.is_ok() {
                return Ok(summary(&report, "equivariant module axioms"));
            }
            let plain = m.inflate()?;
            if run.verify == Verify::Full {
                let check = plain.validate().sorted();
                if !check.is_ok() {
                    return Ok(summary(&check, "inflated module axioms"));
                }
            }
            emit(run, &io::to_pretty(&io::module_to_json(&plain)?))?;
            Ok(true)
        }
    }
}

fn demo(cmd: &DemoCmd, run: &RunConfig) -> Outcome {
    match cmd {
        DemoCmd::Dupont => {
            let d = demos::dupont_demo(run.seed)?;
            println!("{d}");
            Ok(d.valid && d.corrected_holds() && !d.dupont_holds())
        }
        DemoCmd::C1 => {
            let f = demos::line_fixture()?;
            print!("{f}");
            Ok(f.passed())
        }
        DemoCmd::P1 => {
            let p = demos::projective_line_pattern()?;
            print!("{p}");
            Ok(p.passed())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    algebra::set_validation(cli.run.verify == Verify::Full);
    match &cli.command {
        Command::Fan(FanCmd::Check { fan }) => fan_check(fan),
        Command::Fan(FanCmd::Faces { fan }) => fan_faces(fan),
        Command::Alg(c) => alg(c, &cli.run),
        Command::Mod(c) => module(c, &cli.run),
        Command::Desc(c) => descent(c, &cli.run),
        Command::Equi(c) => equi(c, &cli.run),
        Command::Demo(c) => demo(c, &cli.run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("ERROR\tmath\t{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("ERROR\tinput\t{e}");
            ExitCode::from(2)
        }
    }
}
