use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ivhs_lab::run::{self, exit, Outcome};
use ivhs_lab::scenario::{Scenario, SearchConfig, SurveyConfig, Task, TEMPLATES};
use ivhs_lab::selftest;
use serde_json::json;

#[derive(Parser)]
#[command(name = "ivhs-lab", version, about = "Exact IVHS invariants of smooth plane curves")]
struct Cli {
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sample-level parallelism.
    #[arg(long, global = true, env = "IVHS_LAB_THREADS")]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML scenario.
    Run { scenario: PathBuf },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 101)]
        prime: u64,
    },
    /// Tabulate partitions and lengths per rank stratum.
    Survey {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 4)]
        per_rank_samples: usize,
        #[arg(long, default_value_t = 3)]
        max_secant: usize,
        #[arg(long, default_value_t = 3)]
        max_tail_order: usize,
        #[arg(long, default_value_t = 2)]
        max_u_dim: usize,
        /// Comma-separated annihilator template names.
        #[arg(long, value_delimiter = ',', default_values_t = TEMPLATES.map(String::from))]
        templates: Vec<String>,
    },
    /// Look for classes with filtrations of length at least two.
    Search {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 16)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        phi_samples: usize,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// `Fp:<p>` or `QQ`.
    #[arg(long, default_value = "Fp:101")]
    field: String,
    #[arg(long, default_value = "x^6+y^6+z^6")]
    curve: String,
}

fn scenario(curve: CurveArgs, task: Task, seed: Option<u64>) -> Scenario {
    Scenario {
        field: curve.field,
        curve: curve.curve,
        seed: seed.unwrap_or(0),
        tasks: vec![task],
        ks: vec![],
        phi: Default::default(),
        points: vec![],
        stratum_query: None,
        survey: SurveyConfig::default(),
        search: SearchConfig::default(),
        output: None,
    }
}

fn load(path: &PathBuf, seed: Option<u64>) -> Result<Scenario, Outcome> {
    let src = std::fs::read_to_string(path).map_err(|e| {
        let err = ivhs_core::Error::Precondition(format!("cannot read {}: {e}", path.display()));
        run::failed(None, &err, exit::SCENARIO)
    })?;
    let mut scn = Scenario::parse(&src).map_err(|msg| {
        let mut o = run::failed(None, &ivhs_core::Error::Precondition(String::new()), exit::SCENARIO);
        o.report["error"] = json!({"kind": "ScenarioError", "message": msg});
        o
    })?;
    if let Some(s) = seed {
        scn.seed = s;
    }
    Ok(scn)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut output = cli.output.clone();
    let outcome = match cli.command {
        Command::Run { scenario } => match load(&scenario, cli.seed) {
            Ok(scn) => {
                if output.is_none() {
                    output = scn.output.as_ref().map(PathBuf::from);
                }
                run::run(&scn)
            }
            Err(o) => o,
        },
        Command::Selftest { prime } => match selftest::full_selftest(prime, cli.seed.unwrap_or(0)) {
            Ok(r) => {
                for c in &r.criteria {
                    eprintln!("{}", c.line());
                }
                let code = if r.passed() { exit::OK } else { exit::INVARIANT };
                Outcome { report: r.to_json(), code }
            }
            Err(e) => run::failed(None, &e, run::setup_code(&e)),
        },
        Command::Survey { curve, per_rank_samples, max_secant, max_tail_order, max_u_dim, templates } => {
            let mut scn = scenario(curve, Task::Survey, cli.seed);
            scn.survey = SurveyConfig { per_rank_samples, max_secant, max_tail_order, max_u_dim, templates };
            run::run(&scn)
        }
        Command::Search { curve, budget, phi_samples } => {
            let mut scn = scenario(curve, Task::Search, cli.seed);
            scn.search = SearchConfig { budget, phi_samples };
            run::run(&scn)
        }
    };
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(exit::SCENARIO as u8);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(outcome.code as u8)
}
