//! `mpspe`: command-line front end.
//!
//! Exit codes: 0 yes or valid, 1 no or invalid, 2 indeterminate because a
//! cap was hit, 3 input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use mpspe::ext_rat::{format_rational, parse_rational};
use mpspe::graph::{karp_max_mean_cycle, WeightedDigraph};
use mpspe::io;
use mpspe::negotiation::{least_fixed_point, nego_oracle, NegotiationOracleConfig};
use mpspe::reductions::{build_g_phi, build_h_phi};
use mpspe::witness::{check_witness, find_play, search_witness, spe_exists, PlaySearch, SearchOutcome, ThresholdInstance};
use mpspe::{Error, ExtRat, Game, PayoffVector, Rational, Requirement, VertexId, VertexSet};

#[derive(Parser)]
#[command(name = "mpspe", version, about = "SPE threshold problems in multiplayer mean-payoff games")]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(flatten)]
    limits: Limits,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Limits {
    /// Largest game the negotiation oracle accepts.
    #[arg(long, global = true, value_name = "N")]
    max_vertices: Option<usize>,

    /// Iteration cap of the fixed-point computation.
    #[arg(long, global = true, value_name = "N")]
    max_iterations: Option<usize>,

    /// Cap on simple cycles enumerated inside one vertex set.
    #[arg(long, global = true, value_name = "N")]
    cycle_cap: Option<usize>,

    /// Cap on branch-and-bound nodes per oracle evaluation.
    #[arg(long, global = true, value_name = "N")]
    max_search_nodes: Option<usize>,
}

impl Limits {
    fn config(&self, epsilon: Rational) -> NegotiationOracleConfig {
        let d = NegotiationOracleConfig::default();
        NegotiationOracleConfig {
            max_vertices: self.max_vertices.unwrap_or(d.max_vertices),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            cycle_cap: self.cycle_cap.unwrap_or(d.cycle_cap),
            max_search_nodes: self.max_search_nodes.unwrap_or(d.max_search_nodes),
            epsilon,
            ..d
        }
    }
}

#[derive(Args)]
struct Thresholds {
    /// Lower threshold, one value per player in declaration order.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = ext_value)]
    lower: Option<Vec<ExtRat>>,

    /// Upper threshold, one value per player in declaration order.
    #[arg(long, num_args = 1.., value_delimiter = ',', value_parser = ext_value)]
    upper: Option<Vec<ExtRat>>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a game file is well formed.
    Validate {
        game: PathBuf,
        /// Also check a requirement file against the game.
        #[arg(long)]
        lambda: Option<PathBuf>,
        /// Also check a witness file against the game.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Best (or worst) mean payoff of a player over reachable cycles.
    MpCycle {
        game: PathBuf,
        #[arg(long)]
        player: String,
        /// Maximize the mean payoff (the default).
        #[arg(long, conflicts_with = "min")]
        max: bool,
        /// Minimize the mean payoff.
        #[arg(long)]
        min: bool,
        /// Start vertex; defaults to the initial vertex.
        #[arg(long)]
        from: Option<String>,
    },
    /// One application of the negotiation function.
    Nego {
        game: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
    },
    /// Least epsilon-fixed point of the negotiation function.
    Fixpoint {
        game: PathBuf,
        #[arg(long, default_value = "0", value_parser = rational_value)]
        epsilon: Rational,
    },
    /// Is there a play from the initial vertex consistent with a requirement
    /// and within the thresholds?
    ExistsPlay {
        game: PathBuf,
        #[arg(long)]
        lambda: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
    },
    /// Check a witness against a threshold instance.
    VerifyWitness {
        game: PathBuf,
        witness: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
        #[arg(long, default_value = "0", value_parser = rational_value)]
        epsilon: Rational,
    },
    /// Decide a threshold instance and produce a witness.
    Solve {
        game: PathBuf,
        #[command(flatten)]
        thresholds: Thresholds,
        #[arg(long, default_value = "0", value_parser = rational_value)]
        epsilon: Rational,
        /// Write the witness here when one is found.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Does the game have an epsilon-SPE from its initial vertex?
    SpeExists {
        game: PathBuf,
        #[arg(long, default_value = "0", value_parser = rational_value)]
        epsilon: Rational,
    },
    /// Build the hardness game of a DIMACS formula.
    GenSat {
        dimacs: PathBuf,
        /// Add the two-player wrapper.
        #[arg(long)]
        wrap: bool,
        /// Write the game here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Folds the values following `--lower` or `--upper` into one
/// `--lower=v1,v2` argument so that values such as `-inf` are not taken
/// for flags.
fn fold_thresholds(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut args = args.into_iter().peekable();
    while let Some(arg) = args.next() {
        if arg != "--lower" && arg != "--upper" {
            out.push(arg);
            continue;
        }
        let mut values = Vec::new();
        while let Some(next) = args.next_if(|a| a.parse::<ExtRat>().is_ok()) {
            values.push(next);
        }
        if values.is_empty() {
            out.push(arg);
        } else {
            out.push(format!("{arg}={}", values.join(",")));
        }
    }
    out
}

fn ext_value(s: &str) -> Result<ExtRat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn rational_value(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Verdict {
    Yes,
    No,
    Indeterminate,
    Error,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Indeterminate => 2,
            Verdict::Error => 3,
        }
    }
}

#[derive(Serialize)]
struct Report {
    verdict: Verdict,
    payoff: Option<Map<String, Value>>,
    diagnostics: Vec<String>,
    details: Map<String, Value>,
    /// Human-readable result lines.
    #[serde(skip)]
    lines: Vec<String>,
    /// False when standard output carries a payload that a verdict line
    /// would corrupt.
    #[serde(skip)]
    verdict_line: bool,
}

impl Report {
    fn new(verdict: Verdict) -> Self {
        Report {
            verdict,
            payoff: None,
            diagnostics: Vec::new(),
            details: Map::new(),
            lines: Vec::new(),
            verdict_line: true,
        }
    }

    fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    fn set_payoff(&mut self, game: &Game, payoff: &[Rational]) {
        let mut map = Map::new();
        let mut parts = Vec::new();
        for p in game.players() {
            let v = format_rational(&payoff[p.0]);
            parts.push(format!("{}:{v}", game.player_name(p)));
            map.insert(game.player_name(p).to_string(), Value::String(v));
        }
        self.line(format!("payoff {}", parts.join(" ")));
        self.payoff = Some(map);
    }

    fn emit(&self, json_mode: bool) {
        let mut out = std::io::stdout().lock();
        if json_mode {
            let text = serde_json::to_string_pretty(self).expect("report serializes");
            let _ = writeln!(out, "{text}");
            return;
        }
        for l in &self.lines {
            let _ = writeln!(out, "{l}");
        }
        for d in &self.diagnostics {
            eprintln!("note: {d}");
        }
        if self.verdict_line {
            let word = match self.verdict {
                Verdict::Yes => "yes",
                Verdict::No => "no",
                Verdict::Indeterminate => "indeterminate",
                Verdict::Error => "error",
            };
            let _ = writeln!(out, "verdict: {word}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(fold_thresholds(std::env::args())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Verdict::Error.code() } else { 0 });
        }
    };
    let report = run(&cli).unwrap_or_else(|e| {
        let cap = e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_cap));
        let mut r = Report::new(if cap { Verdict::Indeterminate } else { Verdict::Error });
        r.diagnostics.push(format!("{e:#}"));
        r
    });
    report.emit(cli.json);
    ExitCode::from(report.verdict.code())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_game(path: &Path) -> anyhow::Result<Game> {
    io::parse_game(&read(path)?).with_context(|| path.display().to_string())
}

fn load_requirement(game: &Game, path: &Path) -> anyhow::Result<Requirement> {
    io::parse_requirement(game, &read(path)?).with_context(|| path.display().to_string())
}

fn thresholds(game: &Game, t: &Thresholds) -> anyhow::Result<(PayoffVector, PayoffVector)> {
    let n = game.num_players();
    let pick = |given: &Option<Vec<ExtRat>>, default: ExtRat, flag: &str| match given {
        None => Ok(PayoffVector::uniform(n, default)),
        Some(v) if v.len() == n => Ok(PayoffVector(v.clone())),
        Some(v) => Err(anyhow!("--{flag} has {} values for {n} players", v.len())),
    };
    Ok((pick(&t.lower, ExtRat::NegInf, "lower")?, pick(&t.upper, ExtRat::PosInf, "upper")?))
}

fn requirement_text(game: &Game, lam: &Requirement) -> String {
    game.vertices()
        .map(|v| format!("{}:{}", game.vertex_name(v), lam.get(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn requirement_json(game: &Game, lam: &Requirement) -> Value {
    Value::Object(
        game.vertices()
            .map(|v| (game.vertex_name(v).to_string(), Value::String(lam.get(v).to_string())))
            .collect(),
    )
}

fn set_text(game: &Game, set: VertexSet) -> String {
    set.iter().map(|v| game.vertex_name(v)).collect::<Vec<_>>().join(",")
}

fn play_sets(r: &mut Report, game: &Game, w: VertexSet, wp: VertexSet) {
    r.line(format!("W {}", set_text(game, w)));
    r.line(format!("W' {}", set_text(game, wp)));
    r.detail("w", json!(set_text(game, w)));
    r.detail("w_prime", json!(set_text(game, wp)));
}

const CAVEAT: &str = "a negative answer is relative to the negotiation oracle and its enumeration caps";

fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Validate { game, lambda, witness } => {
            let text = read(game)?;
            let mut r = Report::new(Verdict::Yes);
            let g = match io::parse_game(&text) {
                Ok(g) => g,
                Err(e) => {
                    r.verdict = Verdict::No;
                    r.diagnostics.push(format!("{}: {e}", game.display()));
                    return Ok(r);
                }
            };
            r.line(format!(
                "players {} vertices {} edges {}",
                g.num_players(),
                g.num_vertices(),
                g.edges().len()
            ));
            r.detail("players", json!(g.num_players()));
            r.detail("vertices", json!(g.num_vertices()));
            r.detail("edges", json!(g.edges().len()));
            if let Some(path) = lambda {
                if let Err(e) = io::parse_requirement(&g, &read(path)?) {
                    r.verdict = Verdict::No;
                    r.diagnostics.push(format!("{}: {e}", path.display()));
                }
            }
            if let Some(path) = witness {
                let cap = cli.limits.config(Rational::default()).cycle_cap;
                if let Err(e) = io::parse_witness(&g, &read(path)?, cap) {
                    r.verdict = Verdict::No;
                    r.diagnostics.push(format!("{}: {e}", path.display()));
                }
            }
            Ok(r)
        }
        Command::MpCycle {
            game,
            player,
            max: _,
            min,
            from,
        } => {
            let g = load_game(game)?;
            let p = g
                .player_by_name(player)
                .ok_or_else(|| anyhow!("unknown player `{player}`"))?;
            let start = match from {
                Some(name) => g.vertex_by_name(name).ok_or_else(|| anyhow!("unknown vertex `{name}`"))?,
                None => g.init().ok_or_else(|| anyhow!("the game has no initial vertex; use --from"))?,
            };
            let mut wg = WeightedDigraph::from_game(&g, p);
            if *min {
                for a in &mut wg.arcs {
                    a.weight = -a.weight.clone();
                }
            }
            let Some(best) = karp_max_mean_cycle(&wg, start.0) else {
                return Ok(Report::new(Verdict::No));
            };
            let value = if *min { -best.value.clone() } else { best.value.clone() };
            let cycle: Vec<VertexId> = best.nodes(&wg).into_iter().map(VertexId).collect();
            let mut r = Report::new(Verdict::Yes);
            r.line(format!("value {}", format_rational(&value)));
            r.line(format!("cycle {}", g.format_vertices(&cycle)));
            r.detail("value", json!(format_rational(&value)));
            r.detail(
                "cycle",
                json!(cycle.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>()),
            );
            Ok(r)
        }
        Command::Nego { game, lambda } => {
            let g = load_game(game)?;
            let lam = load_requirement(&g, lambda)?;
            let out = nego_oracle(&g, &lam, &cli.limits.config(Rational::default()))?;
            let mut r = Report::new(Verdict::Yes);
            r.line(format!("nego {}", requirement_text(&g, &out)));
            r.detail("nego", requirement_json(&g, &out));
            Ok(r)
        }
        Command::Fixpoint { game, epsilon } => {
            let g = load_game(game)?;
            let fp = least_fixed_point(&g, &cli.limits.config(epsilon.clone()))?;
            let mut r = Report::new(if fp.converged { Verdict::Yes } else { Verdict::Indeterminate });
            for (k, lam) in fp.trace.iter().enumerate() {
                r.line(format!("lambda_{k} {}", requirement_text(&g, lam)));
            }
            r.line(format!("lambda* {}", requirement_text(&g, &fp.lambda)));
            r.detail("lambda", requirement_json(&g, &fp.lambda));
            r.detail("trace", Value::Array(fp.trace.iter().map(|l| requirement_json(&g, l)).collect()));
            r.detail("oracle_calls", json!(fp.oracle_calls));
            if !fp.converged {
                r.diagnostics
                    .push(format!("no fixed point within {} oracle calls", fp.oracle_calls));
            }
            Ok(r)
        }
        Command::ExistsPlay { game, lambda, thresholds: t } => {
            let g = load_game(game)?;
            let lam = load_requirement(&g, lambda)?;
            let (lower, upper) = thresholds(&g, t)?;
            let cap = cli.limits.config(Rational::default()).cycle_cap;
            let inst = ThresholdInstance::new(g.clone(), lower, upper, Rational::default())?;
            match find_play(&inst, &lam, cap)? {
                PlaySearch::Found { w, wp, payoff, .. } => {
                    let mut r = Report::new(Verdict::Yes);
                    play_sets(&mut r, &g, w, wp);
                    r.set_payoff(&g, &payoff);
                    Ok(r)
                }
                PlaySearch::NotFound { pairs } => {
                    let mut r = Report::new(Verdict::No);
                    r.detail("pairs_examined", json!(pairs));
                    Ok(r)
                }
            }
        }
        Command::VerifyWitness {
            game,
            witness,
            thresholds: t,
            epsilon,
        } => {
            let g = load_game(game)?;
            let cap = cli.limits.config(Rational::default()).cycle_cap;
            let w = io::parse_witness(&g, &read(witness)?, cap).with_context(|| witness.display().to_string())?;
            let (lower, upper) = thresholds(&g, t)?;
            let inst = ThresholdInstance::new(g.clone(), lower, upper, epsilon.clone())?;
            let report = check_witness(&inst, &w, cap)?;
            let mut r = Report::new(if report.valid { Verdict::Yes } else { Verdict::No });
            if let Some(p) = &report.payoff {
                r.set_payoff(&g, p);
            }
            r.diagnostics = report.diagnostics;
            Ok(r)
        }
        Command::Solve {
            game,
            thresholds: t,
            epsilon,
            witness_out,
        } => {
            let g = load_game(game)?;
            let (lower, upper) = thresholds(&g, t)?;
            let inst = ThresholdInstance::new(g.clone(), lower, upper, epsilon.clone())?;
            let cfg = cli.limits.config(epsilon.clone());
            search_report(&g, &inst, search_witness(&inst, &cfg)?, &cfg, witness_out.as_deref())
        }
        Command::SpeExists { game, epsilon } => {
            let g = load_game(game)?;
            let cfg = cli.limits.config(epsilon.clone());
            let inst = ThresholdInstance::unconstrained(g.clone(), epsilon.clone())?;
            search_report(&g, &inst, spe_exists(&g, epsilon.clone(), &cfg)?, &cfg, None)
        }
        Command::GenSat { dimacs, wrap, output } => {
            let phi = io::parse_dimacs(&read(dimacs)?).with_context(|| dimacs.display().to_string())?;
            let g = if *wrap { build_h_phi(&phi)? } else { build_g_phi(&phi)? };
            let text = io::print_game(&g);
            let mut r = Report::new(Verdict::Yes);
            r.detail("vertices", json!(g.num_vertices()));
            r.detail("players", json!(g.num_players()));
            match output {
                Some(path) => {
                    fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
                    r.line(format!("wrote {} ({} vertices)", path.display(), g.num_vertices()));
                }
                None if cli.json => r.detail("game", json!(text)),
                None => {
                    r.line(text.trim_end());
                    r.verdict_line = false;
                }
            }
            Ok(r)
        }
    }
}

fn search_report(
    game: &Game,
    inst: &ThresholdInstance,
    outcome: SearchOutcome,
    cfg: &NegotiationOracleConfig,
    witness_out: Option<&Path>,
) -> anyhow::Result<Report> {
    match outcome {
        SearchOutcome::Found(w) => {
            let check = check_witness(inst, &w, cfg.cycle_cap)?;
            if !check.valid {
                let mut r = Report::new(Verdict::Indeterminate);
                r.diagnostics.push("the witness found does not pass the check".into());
                r.diagnostics.extend(check.diagnostics);
                return Ok(r);
            }
            let mut r = Report::new(Verdict::Yes);
            play_sets(&mut r, game, w.w, w.wp);
            if let Some(p) = &check.payoff {
                r.set_payoff(game, p);
            }
            r.line(format!("lambda {}", requirement_text(game, &w.lambda)));
            r.detail("lambda", requirement_json(game, &w.lambda));
            if let Some(path) = witness_out {
                let text = io::print_witness(game, &w, cfg.cycle_cap)?;
                fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
                r.line(format!("witness written to {}", path.display()));
            }
            Ok(r)
        }
        SearchOutcome::NotFound { pairs } => {
            let mut r = Report::new(Verdict::No);
            r.detail("pairs_examined", json!(pairs));
            r.diagnostics.push(CAVEAT.into());
            Ok(r)
        }
        SearchOutcome::Indeterminate(reason) => {
            let mut r = Report::new(Verdict::Indeterminate);
            r.diagnostics.push(reason);
            Ok(r)
        }
    }
}
