//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a negative answer (unsolvable, illegal step,
//! failed check), 2 resource exhaustion or a usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::cnf::{normalize_formula, CnfFormula};
use crate::fold::{FoldMode, FoldState};
use crate::io::{
    from_json, parse_dimacs, read_instance, read_layout, read_trace, render_svg, to_json, write_instance, write_trace,
    InstanceDocument, Layout, SvgOptions, TraceDocument,
};
use crate::reduce::{compile, ClauseHeight, LayoutParams};
use crate::solve::{replay, solve, SearchBudget, SearchOutcome};
use crate::verify::{
    clause_lemma, end_to_end, literal_landing, ordering_oracles, reset_lemma, variable_lemma, Check,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "segfold", version, about = "Fold segment sets flat, and compile 3SAT into them")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_mode(s: &str) -> Result<FoldMode, String> {
    match s {
        "restricted" => Ok(FoldMode::Restricted),
        "unrestricted" => Ok(FoldMode::Unrestricted),
        "strict" => Ok(FoldMode::Strict),
        _ => Err("expected restricted, unrestricted or strict".into()),
    }
}

fn parse_height(s: &str) -> Result<ClauseHeight, String> {
    match s {
        "short" => Ok(ClauseHeight::Short),
        "tall" => Ok(ClauseHeight::Tall),
        _ => Err("expected short or tall".into()),
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Compile a DIMACS CNF file into a segment instance.
    Compile {
        cnf: PathBuf,
        /// Gadget width in grid units; must be a positive multiple of 400.
        #[arg(long, default_value_t = 400)]
        w_g: i64,
        #[arg(long, default_value = "short", value_parser = parse_height)]
        h_c: ClauseHeight,
        /// Write the instance here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a folding sequence that clears an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "restricted", value_parser = parse_mode)]
        mode: FoldMode,
        /// Maximum number of folds; defaults to the number of segments.
        #[arg(long)]
        budget: Option<usize>,
        /// Deepen one fold at a time so the reported sequence is shortest.
        #[arg(long)]
        shortest: bool,
        /// Stop after expanding this many nodes.
        #[arg(long)]
        nodes: Option<u64>,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Replay a trace against an instance.
    Fold { instance: PathBuf, trace: PathBuf },
    /// Run the gadget checks against a formula (or a small built-in one).
    VerifyGadgets {
        /// DIMACS file, or `builtin`.
        #[arg(default_value = "builtin")]
        cnf: String,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Draw an instance, optionally after a trace, as SVG.
    Render {
        instance: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Draw clause zones and guide lines when the instance carries a layout.
        #[arg(long)]
        zones: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Drop sessions idle for this many seconds.
        #[arg(long, default_value_t = 3600)]
        idle_secs: u64,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

fn input<E: std::fmt::Display>(what: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure { code: EXIT_ERR, msg: format!("{}: {e}", what.display()) }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(input(path))
}

fn load_instance(path: &Path) -> Result<(crate::fold::Instance, Option<Layout>), Failure> {
    let doc: InstanceDocument = from_json(&read_text(path)?).map_err(input(path))?;
    let inst = read_instance(&doc).map_err(input(path))?;
    let layout = read_layout(&doc).map_err(input(path))?;
    Ok((inst, layout))
}

fn load_trace(path: &Path) -> Result<(Vec<crate::fold::FoldMove>, FoldMode), Failure> {
    let doc: TraceDocument = from_json(&read_text(path)?).map_err(input(path))?;
    Ok((read_trace(&doc).map_err(input(path))?, doc.mode))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(input(p)),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure { code: EXIT_ERR, msg: e.to_string() }),
    }
}

/// Parse `args` (program name first) and run, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Cmd::Compile { cnf, w_g, h_c, out: dest } => {
            let f = parse_dimacs(&read_text(&cnf)?).map_err(input(&cnf))?;
            let nf = normalize_formula(&f).map_err(input(&cnf))?;
            let params = LayoutParams::new(w_g, h_c).map_err(|e| Failure { code: EXIT_ERR, msg: e.to_string() })?;
            let (inst, gm) = compile(&nf, &params).map_err(|e| Failure { code: EXIT_ERR, msg: e.to_string() })?;
            let doc = write_instance(&inst, Some(&Layout::from(&gm)));
            emit(out, dest.as_deref(), &(to_json(&doc) + "\n"))?;
            let _ = writeln!(
                err,
                "{} segments, {} variables, {} clauses after normalizing",
                inst.len(),
                nf.num_vars(),
                nf.formula.clauses.len()
            );
            Ok(EXIT_OK)
        }
        Cmd::Solve { instance, mode, budget, shortest, nodes, trace_out } => {
            let (inst, _) = load_instance(&instance)?;
            let depth = budget.unwrap_or(inst.len());
            let mut b = if shortest { SearchBudget::depth(depth) } else { SearchBudget::decision(depth) };
            if let Some(n) = nodes {
                b.node_cap = n;
            }
            let res = solve(&inst, mode, b);
            let code = match res.outcome {
                SearchOutcome::Solved(moves) => {
                    let _ = writeln!(out, "solved in {} folds ({} nodes)", moves.len(), res.stats.nodes);
                    if let Some(p) = trace_out {
                        emit(out, Some(&p), &(to_json(&write_trace(&moves, mode)) + "\n"))?;
                    }
                    EXIT_OK
                }
                SearchOutcome::Unsolvable => {
                    let _ = writeln!(out, "unsolvable within {depth} folds ({} nodes)", res.stats.nodes);
                    EXIT_NO
                }
                SearchOutcome::ResourceExhausted => {
                    let _ = writeln!(out, "resources exhausted after {} nodes", res.stats.nodes);
                    EXIT_ERR
                }
            };
            Ok(code)
        }
        Cmd::Fold { instance, trace } => {
            let (inst, _) = load_instance(&instance)?;
            let (moves, mode) = load_trace(&trace)?;
            match replay(&inst, &moves, mode) {
                Ok(st) if st.is_empty() => {
                    let _ = writeln!(out, "{} folds applied, nothing left", moves.len());
                    Ok(EXIT_OK)
                }
                Ok(st) => {
                    let _ = writeln!(out, "{} folds applied, {} segments left", moves.len(), st.len());
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    let _ = writeln!(out, "illegal fold at step {}: {}", e.index + 1, e.illegality);
                    Ok(EXIT_NO)
                }
            }
        }
        Cmd::VerifyGadgets { cnf, threads } => {
            let f = if cnf == "builtin" {
                CnfFormula::new(2, vec![vec![-1, 2], vec![1, 2]]).expect("valid")
            } else {
                let p = PathBuf::from(&cnf);
                parse_dimacs(&read_text(&p)?).map_err(input(&p))?
            };
            let checks = run_checks(&f, threads).map_err(|msg| Failure { code: EXIT_ERR, msg })?;
            for c in &checks {
                let _ = writeln!(out, "{c}");
            }
            Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_NO })
        }
        Cmd::Render { instance, trace, zones, out: dest } => {
            let (inst, layout) = load_instance(&instance)?;
            let st = match trace {
                Some(t) => {
                    let (moves, mode) = load_trace(&t)?;
                    replay(&inst, &moves, mode).map_err(input(&t))?
                }
                None => FoldState::new(&inst),
            };
            let opts = SvgOptions {
                layout: if zones { layout } else { None },
                roles: inst.roles.clone(),
                ..SvgOptions::default()
            };
            emit(out, dest.as_deref(), &render_svg(&st, &opts))?;
            Ok(EXIT_OK)
        }
        Cmd::Serve { port, host, idle_secs } => {
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure { code: EXIT_ERR, msg: e.to_string() })?;
            rt.block_on(crate::serve::serve(addr, Duration::from_secs(idle_secs)))
                .map_err(|e| Failure { code: EXIT_ERR, msg: e.to_string() })?;
            Ok(EXIT_OK)
        }
    }
}

type Job = Box<dyn Fn() -> Vec<Check> + Send + Sync>;

fn run_checks(f: &CnfFormula, threads: Option<usize>) -> Result<Vec<Check>, String> {
    let nf = normalize_formula(f).map_err(|e| e.to_string())?;
    let p = LayoutParams::default();
    let model = f.brute_force_model();
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || vec![variable_lemma(&LayoutParams::default())]));
    for h_c in [ClauseHeight::Short, ClauseHeight::Tall] {
        jobs.push(Box::new(move || vec![clause_lemma(&LayoutParams { w_g: 400, h_c }, FoldMode::Strict)]));
    }
    {
        let (nf, p) = (nf.clone(), p.clone());
        jobs.push(Box::new(move || vec![literal_landing(&nf, &p)]));
    }
    if let Some(m) = &model {
        let full = nf.extend_assignment(m).expect("a model of the input extends");
        let (nf, p) = (nf.clone(), p.clone());
        jobs.push(Box::new(move || vec![reset_lemma(&nf, &p, &full)]));
    }
    {
        let (f, p) = (f.clone(), p.clone());
        jobs.push(Box::new(move || vec![end_to_end(&f, &p, FoldMode::Restricted)]));
    }
    if model.is_some() {
        let (nf, p) = (nf.clone(), p.clone());
        jobs.push(Box::new(move || ordering_oracles(&nf, &p, SearchBudget::decision(0))));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(|| jobs.par_iter().flat_map(|j| j()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("segfold").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn write(dir: &Path, name: &str, text: &str) -> String {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    #[test]
    fn usage() {
        assert_eq!(go(&["--help"]).0, EXIT_OK);
        assert_eq!(go(&[]).0, EXIT_ERR);
        assert_eq!(go(&["solve"]).0, EXIT_ERR);
        assert_eq!(go(&["solve", "x.json", "--mode", "sideways"]).0, EXIT_ERR);
        let (code, _, err) = go(&["solve", "/nonexistent/x.json"]);
        assert_eq!(code, EXIT_ERR);
        assert!(err.contains("/nonexistent/x.json"));
    }

    #[test]
    fn compile_solve_fold_render() {
        let dir = tempfile::tempdir().unwrap();
        let cnf = write(dir.path(), "f.cnf", "p cnf 1 1\n1 0\n");
        let inst = dir.path().join("i.json").to_string_lossy().into_owned();
        let trace = dir.path().join("t.json").to_string_lossy().into_owned();
        let (code, _, err) = go(&["compile", &cnf, "--out", &inst]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(err.starts_with("20 segments"));

        let (code, out, _) = go(&["solve", &inst, "--trace-out", &trace]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("solved in 20 folds"));
        let (code, out, _) = go(&["fold", &inst, &trace]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "20 folds applied, nothing left\n");
        let (code, out, _) = go(&["solve", &inst, "--budget", "19"]);
        assert_eq!(code, EXIT_NO, "{out}");
        let (code, _, _) = go(&["solve", &inst, "--nodes", "1"]);
        assert_eq!(code, EXIT_ERR);

        let (code, svg, _) = go(&["render", &inst, "--zones"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(svg.matches(r#"class="zone good""#).count(), 1);
        assert_eq!(svg.matches(r#"class="zone bad""#).count(), 1);
        assert_eq!(svg.matches(r#"class="segment""#).count(), 20);
        let (_, plain, _) = go(&["render", &inst]);
        assert!(!plain.contains("zone"));
    }

    #[test]
    fn illegal_step_names_index() {
        let dir = tempfile::tempdir().unwrap();
        let inst = write(
            dir.path(),
            "i.json",
            r#"{"version":1,"segments":[[0,0,1,0,1,0,1,1,1],[1,-1,1,5,1,1,1,5,1],[2,3,1,0,1,3,1,1,1]]}"#,
        );
        let trace = write(
            dir.path(),
            "t.json",
            r#"{"version":1,"mode":"restricted","moves":[[1,0,3,"Right"],[1,0,0,"Left"]]}"#,
        );
        let (code, out, _) = go(&["fold", &inst, &trace]);
        assert_eq!(code, EXIT_NO);
        assert!(out.starts_with("illegal fold at step 2:"), "{out}");
    }

    #[test]
    fn verify_builtin() {
        let (code, out, _) = go(&["verify-gadgets", "--threads", "2"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.lines().count() >= 10);
        assert!(out.lines().all(|l| l.starts_with("[PASS]")));
    }
}
