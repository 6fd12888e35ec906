use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use newtloj::boundary::build_boundary;
use newtloj::classify::{classify_all, hyperbolic_edges, HyperbolicEdge};
use newtloj::engine::{check_isolated, lojasiewicz_batch, ExponentReport, FaceEntry, IsolatedVerdict, STANDING_ASSUMPTION};
use newtloj::mixed_volume::face_mixed_volume;
use newtloj::oracle::{brute_force_boundary, sweep_lower_bound, MonomialPath, BRUTE_FORCE_CAP};
use newtloj::par::Execution;
use newtloj::parser::{parse_json_batch, parse_polynomial, serialize_support, support_to_json_value, Support};
use newtloj::sample::{sample, SampleBounds};
use newtloj::selftest::{self, SelftestConfig};
use newtloj::{Axis, Error, Rational};

mod export;
mod render;

#[derive(Parser, Debug)]
#[command(name = "newtloj", version, about = "Łojasiewicz exponents of isolated singularities from Newton polyhedra")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for generic coefficients and random instances.
    #[arg(long, global = true, env = "NEWTLOJ_SEED", default_value_t = 0)]
    seed: u64,
    /// Evaluate inputs sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the exponent.
    Compute {
        #[command(flatten)]
        input: InputArgs,
        /// Cross-check against the brute-force boundary and path lower bounds.
        #[arg(long)]
        oracle: bool,
    },
    /// List the compact facets with their classification.
    Classify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Mixed volume of the chart system of a 2-face.
    Mv {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        face: usize,
        #[arg(long)]
        axis: Axis,
    },
    /// Write the compact boundary as an OFF mesh.
    Export {
        #[command(flatten)]
        input: InputArgs,
        /// Output file (standard output if omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print a random support passing the isolatedness test.
    Random {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 12)]
        max_exp: u32,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Fixture criteria only.
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true)]
        corrupt: bool,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Number of variables (default 3 for text input; JSON input carries its own).
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    dim: Option<u8>,
    /// Polynomial expression.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    poly: Option<String>,
    /// File with one polynomial per line, or JSON (object or array); `-` reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<Vec<Support>, Error> {
        let dim = self.dim.map(usize::from);
        if let Some(p) = &self.poly {
            return Ok(vec![parse_text_or_json(p, dim)?]);
        }
        let path = self.input.as_ref().expect("clap enforces one source");
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Io(e.to_string()))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        };
        let t = text.trim_start();
        if t.starts_with('{') || t.starts_with('[') {
            return Ok(parse_json_batch(t, dim)?);
        }
        let supports = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| parse_polynomial(l, dim.unwrap_or(3)))
            .collect::<Result<Vec<_>, _>>()?;
        if supports.is_empty() {
            return Err(newtloj::parser::ParseError::EmptySupport.into());
        }
        Ok(supports)
    }

    fn load_one(&self) -> Result<Support, Error> {
        let mut all = self.load()?;
        if all.len() != 1 {
            return Err(Error::Precondition(format!("expected a single polynomial, got {}", all.len())));
        }
        Ok(all.remove(0))
    }
}

fn parse_text_or_json(text: &str, dim: Option<usize>) -> Result<Support, Error> {
    let t = text.trim_start();
    if t.starts_with('{') {
        let mut v = parse_json_batch(t, dim)?;
        return Ok(v.remove(0));
    }
    Ok(parse_polynomial(text, dim.unwrap_or(3))?)
}

#[derive(Debug, Serialize)]
struct OracleSummary {
    brute_force_checked: bool,
    bound: Rational,
    witness: MonomialPath,
    paths_tested: usize,
}

#[derive(Debug, Serialize)]
struct ComputeOutput {
    input: String,
    #[serde(flatten)]
    report: ExponentReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleSummary>,
}

#[derive(Debug, Serialize)]
struct ClassifyOutput {
    input: String,
    dimension: usize,
    isolated: IsolatedVerdict,
    faces: Vec<FaceEntry>,
    hyperbolic_edges: Vec<HyperbolicEdge>,
    assumption: &'static str,
}

fn oracle_check(s: &Support, report: &ExponentReport, seed: u64) -> Result<OracleSummary, Error> {
    let mut brute_force_checked = false;
    if s.len() <= BRUTE_FORCE_CAP {
        if !build_boundary(s).same_lattice(&brute_force_boundary(s)?) {
            return Err(Error::CrossCheck("boundary differs from the brute-force construction".into()));
        }
        brute_force_checked = true;
    }
    let sweep = sweep_lower_bound(s, seed)?;
    if sweep.bound > report.exponent {
        return Err(Error::CrossCheck(format!(
            "path {} gives ratio {} above the exponent {}",
            sweep.witness, sweep.bound, report.exponent
        )));
    }
    Ok(OracleSummary { brute_force_checked, bound: sweep.bound, witness: sweep.witness, paths_tested: sweep.paths_tested })
}

fn to_json<T: Serialize>(items: &[T]) -> String {
    let text = if items.len() == 1 {
        serde_json::to_string_pretty(&items[0])
    } else {
        serde_json::to_string_pretty(items)
    };
    text.expect("output serializes") + "\n"
}

fn run_compute(cli: &Cli, input: &InputArgs, oracle: bool) -> Result<String, Error> {
    let supports = input.load()?;
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let mut outputs = Vec::new();
    for (s, r) in supports.iter().zip(lojasiewicz_batch(&supports, exec)) {
        let report = r?;
        let oracle = if oracle { Some(oracle_check(s, &report, cli.seed)?) } else { None };
        outputs.push(ComputeOutput { input: serialize_support(s), report, oracle });
    }
    if cli.json {
        return Ok(to_json(&outputs));
    }
    let blocks: Vec<String> = outputs.iter().map(render::compute).collect();
    Ok(blocks.join("\n"))
}

fn run_classify(cli: &Cli, input: &InputArgs) -> Result<String, Error> {
    let mut outputs = Vec::new();
    for s in input.load()? {
        let b = build_boundary(&s);
        let table = classify_all(&b)?;
        let faces = b.facets().cloned().zip(table).map(|(face, classification)| FaceEntry { face, classification });
        outputs.push(ClassifyOutput {
            input: serialize_support(&s),
            dimension: s.dim(),
            isolated: check_isolated(&s),
            faces: faces.collect(),
            hyperbolic_edges: hyperbolic_edges(&b),
            assumption: STANDING_ASSUMPTION,
        });
    }
    if cli.json {
        return Ok(to_json(&outputs));
    }
    Ok(outputs.iter().map(render::classify).collect::<Vec<_>>().join("\n"))
}

fn run_mv(cli: &Cli, input: &InputArgs, face: usize, axis: Axis) -> Result<String, Error> {
    let s = input.load_one()?;
    if s.dim() != 3 {
        return Err(Error::Precondition("mixed volumes of face systems need a 3-variable polynomial".into()));
    }
    let mv = face_mixed_volume(&build_boundary(&s), face, axis)?;
    if cli.json {
        return Ok(to_json(&[mv]));
    }
    Ok(render::mixed_volume(&mv))
}

fn run_export(input: &InputArgs, output: Option<&PathBuf>) -> Result<String, Error> {
    let s = input.load_one()?;
    if s.dim() != 3 {
        return Err(Error::Precondition("OFF export needs a 3-variable polynomial".into()));
    }
    let off = export::to_off(&build_boundary(&s));
    match output {
        Some(path) => {
            std::fs::write(path, off).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(off),
    }
}

fn run_random(cli: &Cli, dim: u8, points: usize, max_exp: u32) -> Result<String, Error> {
    let s = sample(cli.seed, dim as usize, SampleBounds { points, max_exponent: max_exp })?;
    Ok(serde_json::to_string(&support_to_json_value(&s)).expect("support serializes") + "\n")
}

fn run_selftest(cli: &Cli, quick: bool, corrupt: bool) -> Result<String, Error> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let cfg = SelftestConfig { seed: cli.seed, quick, corrupt, exec };
    let mut failed = 0;
    for c in selftest::criteria().iter().filter(|c| c.fixture || !quick) {
        let o = selftest::run_criterion(c, &cfg);
        println!("{}", o.line());
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Error::CrossCheck(format!("{failed} criteria failed")));
    }
    Ok("all criteria passed\n".into())
}

fn dispatch(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Compute { input, oracle } => run_compute(cli, input, *oracle),
        Command::Classify { input } => run_classify(cli, input),
        Command::Mv { input, face, axis } => run_mv(cli, input, *face, *axis),
        Command::Export { input, output } => run_export(input, output.as_ref()),
        Command::Random { dim, points, max_exp } => run_random(cli, *dim, *points, *max_exp),
        Command::Selftest { quick, corrupt } => run_selftest(cli, *quick, *corrupt),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("newtloj: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
