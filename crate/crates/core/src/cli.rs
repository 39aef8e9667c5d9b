//! Command-line front end.
//!
//! Every command renders its whole output into a [`CmdOutput`] so the binary
//! only prints and exits. Exit codes: 0 controllable / success, 1 negative
//! verdict (or disconnected input for `plan`), 2 usage or input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::graph::{parse_network, to_dot, QDigraph};
use crate::kalman::{generic_rank_check, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::lin::{build_cactus_cover, lin_check};
use crate::matching::{drivers_for_matching, maximum_matching};
use crate::planner::{apply_plan, parse_plan, plan_augmentation, PlanError};

#[derive(Debug, Parser)]
#[command(
    name = "structctl",
    version,
    about = "Structural controllability of driven networks"
)]
pub struct Cli {
    /// Emit one JSON object instead of line-oriented text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matching, minimum drivers, Lin check and cactus summary.
    Analyze { file: PathBuf },
    /// Plan entanglement edges giving single-driver controllability.
    Plan {
        file: PathBuf,
        /// Write the augmented network here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Apply a stored plan to a network.
    Apply {
        file: PathBuf,
        plan: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Randomized Kalman rank test with the declared drivers.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Graphviz DOT export.
    ExportDot { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl CmdOutput {
    fn ok(stdout: String, code: u8) -> Self {
        CmdOutput {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn fail(stderr: String, code: u8) -> Self {
        CmdOutput {
            stdout: String::new(),
            stderr: stderr + "\n",
            code,
        }
    }
}

pub fn run(cli: &Cli) -> CmdOutput {
    match &cli.command {
        Command::Analyze { file } => cmd_analyze(file, cli.json),
        Command::Plan { file, out } => cmd_plan(file, out.as_deref(), cli.json),
        Command::Apply { file, plan, out } => cmd_apply(file, plan, out.as_deref(), cli.json),
        Command::Verify { file, trials, seed } => cmd_verify(file, *trials, *seed, cli.json),
        Command::ExportDot { file } => cmd_export_dot(file, cli.json),
    }
}

fn load(path: &Path) -> Result<QDigraph, CmdOutput> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdOutput::fail(format!("{}: {e}", path.display()), 2))?;
    parse_network(&text).map_err(|e| CmdOutput::fail(format!("{}: {e}", path.display()), 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub n_u: usize,
    pub m: usize,
    pub n_d: usize,
    pub unmatched: Vec<String>,
    pub drivers: Vec<String>,
    pub inaccessible: Vec<String>,
    pub dilation_s: Vec<String>,
    pub dilation_t: Vec<String>,
    pub controllable: bool,
    pub cactus_stems: usize,
    pub cactus_buds: usize,
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let list = |v: &[String]| v.iter().map(|x| format!(" {x}")).collect::<String>();
        format!(
            "n: {}\nn_u: {}\nm: {}\nn_d: {}\nunmatched:{}\ndrivers:{}\ninaccessible:{}\ndilation_s:{}\ndilation_t:{}\ncontrollable: {}\ncactus_stems: {}\ncactus_buds: {}\n",
            self.n,
            self.n_u,
            self.m,
            self.n_d,
            list(&self.unmatched),
            list(&self.drivers),
            list(&self.inaccessible),
            list(&self.dilation_s),
            list(&self.dilation_t),
            self.controllable,
            self.cactus_stems,
            self.cactus_buds,
        )
    }
}

/// Builds the report. The cactus counts describe the cover obtained after
/// attaching the minimum driver set, independent of the declared drivers.
pub fn analyze(g: &QDigraph) -> Result<AnalysisReport, String> {
    let m = maximum_matching(g);
    let d = drivers_for_matching(g, &m).map_err(|e| e.to_string())?;
    let report = lin_check(g);
    let cover = build_cactus_cover(g, &m, &d).map_err(|e| e.to_string())?;
    let names = |ids: &mut dyn Iterator<Item = &crate::graph::VertexId>| {
        ids.map(|&v| g.label(v).to_string()).collect::<Vec<_>>()
    };
    let (dilation_s, dilation_t) = match &report.dilation {
        Some(dil) => (names(&mut dil.s_set.iter()), names(&mut dil.t_set.iter())),
        None => (Vec::new(), Vec::new()),
    };
    Ok(AnalysisReport {
        n: g.n(),
        n_u: g.n_drivers(),
        m: m.size(),
        n_d: d.n_d,
        unmatched: names(&mut d.unmatched.iter()),
        drivers: names(&mut d.chosen_drivers.iter()),
        inaccessible: names(&mut report.inaccessible.iter()),
        dilation_s,
        dilation_t,
        controllable: report.controllable,
        cactus_stems: cover.cover.cacti.len(),
        cactus_buds: cover.cover.bud_count(),
    })
}

pub fn cmd_analyze(path: &Path, json: bool) -> CmdOutput {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let report = match analyze(&g) {
        Ok(r) => r,
        Err(e) => return CmdOutput::fail(format!("{}: {e}", path.display()), 2),
    };
    let code = if report.controllable { 0 } else { 1 };
    let stdout = if json {
        serde_json::to_string(&report).expect("plain struct") + "\n"
    } else {
        report.to_text()
    };
    CmdOutput::ok(stdout, code)
}

#[derive(Serialize)]
struct PlanJson<'a> {
    root: &'a str,
    drive_attachment: &'a str,
    added_edges: Vec<PlanEdgeJson<'a>>,
    added_count: usize,
    locc_cost_bound: u64,
}

#[derive(Serialize)]
struct PlanEdgeJson<'a> {
    src: &'a str,
    dst: &'a str,
    reason: &'a str,
}

pub fn cmd_plan(path: &Path, out: Option<&Path>, json: bool) -> CmdOutput {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let plan = match plan_augmentation(&g) {
        Ok(p) => p,
        Err(e @ (PlanError::Disconnected(_) | PlanError::Postcondition(_))) => {
            return CmdOutput::fail(format!("{}: {e}", path.display()), 1)
        }
        Err(e) => return CmdOutput::fail(format!("{}: {e}", path.display()), 2),
    };
    if let Some(out) = out {
        let post = apply_plan(&g, &plan).expect("plan was checked against this graph");
        if let Err(e) = fs::write(out, post.to_text()) {
            return CmdOutput::fail(format!("{}: {e}", out.display()), 2);
        }
    }
    let stdout = if json {
        let j = PlanJson {
            root: &plan.root,
            drive_attachment: &plan.drive_attachment,
            added_edges: plan
                .added_edges
                .iter()
                .map(|e| PlanEdgeJson {
                    src: &e.src,
                    dst: &e.dst,
                    reason: e.reason.as_str(),
                })
                .collect(),
            added_count: plan.added_edges.len(),
            locc_cost_bound: plan.locc_cost_bound(),
        };
        serde_json::to_string(&j).expect("plain struct") + "\n"
    } else {
        format!(
            "{}# added_edges: {}\n# locc_cost_bound: {}\n",
            plan.to_text(),
            plan.added_edges.len(),
            plan.locc_cost_bound()
        )
    };
    CmdOutput::ok(stdout, 0)
}

pub fn cmd_apply(path: &Path, plan_path: &Path, out: Option<&Path>, json: bool) -> CmdOutput {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let text = match fs::read_to_string(plan_path) {
        Ok(t) => t,
        Err(e) => return CmdOutput::fail(format!("{}: {e}", plan_path.display()), 2),
    };
    let plan = match parse_plan(&text) {
        Ok(p) => p,
        Err(e) => return CmdOutput::fail(format!("{}: {e}", plan_path.display()), 2),
    };
    let post = match apply_plan(&g, &plan) {
        Ok(p) => p,
        Err(e) => return CmdOutput::fail(format!("{}: {e}", plan_path.display()), 2),
    };
    let net = post.to_text();
    match out {
        Some(out) => match fs::write(out, &net) {
            Ok(()) => CmdOutput::ok(String::new(), 0),
            Err(e) => CmdOutput::fail(format!("{}: {e}", out.display()), 2),
        },
        None if json => CmdOutput::ok(
            serde_json::to_string(&serde_json::json!({ "network": net })).unwrap() + "\n",
            0,
        ),
        None => CmdOutput::ok(net, 0),
    }
}

#[derive(Serialize)]
struct VerifyJson {
    achieved_rank: usize,
    n: usize,
    full_rank: bool,
    trials: u32,
    seed: u64,
    field_prime: u64,
}

pub fn cmd_verify(path: &Path, trials: u32, seed: u64, json: bool) -> CmdOutput {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let cert = match generic_rank_check(&g, trials, seed) {
        Ok(c) => c,
        Err(e) => return CmdOutput::fail(format!("{}: {e}", path.display()), 2),
    };
    let code = if cert.full_rank { 0 } else { 1 };
    let stdout = if json {
        let j = VerifyJson {
            achieved_rank: cert.achieved_rank,
            n: cert.n,
            full_rank: cert.full_rank,
            trials: cert.trials,
            seed: cert.seed,
            field_prime: cert.field_prime,
        };
        serde_json::to_string(&j).expect("plain struct") + "\n"
    } else {
        format!(
            "rank: {}/{}\nfull_rank: {}\ntrials: {}\nseed: {}\nfield_prime: {}\n",
            cert.achieved_rank, cert.n, cert.full_rank, cert.trials, cert.seed, cert.field_prime
        )
    };
    CmdOutput::ok(stdout, code)
}

pub fn cmd_export_dot(path: &Path, json: bool) -> CmdOutput {
    let g = match load(path) {
        Ok(g) => g,
        Err(out) => return out,
    };
    let dot = to_dot(&g);
    if json {
        CmdOutput::ok(
            serde_json::to_string(&serde_json::json!({ "dot": dot })).unwrap() + "\n",
            0,
        )
    } else {
        CmdOutput::ok(dot, 0)
    }
}
