use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crystrep::classify::{classify, family_rep};
use crystrep::group::text::{format_group, parse_group};
use crystrep::group::{abelianization, IntermediateSubgroup, VaGroup};
use crystrep::linalg::AbelianInvariants;
use crystrep::numeric::{cis, CMat};
use crystrep::paths::{endpoints_equivalent, stably_trivialize, verify_path, DEFAULT_STEPS};
use crystrep::probe::local_moduli_dim;
use crystrep::rep::json::{matrix_from_json, RepJson};
use crystrep::rep::{decompose, induce, ToleranceConfig, UnitaryRep};
use crystrep::topology::{rational_cohomology_gamma_k, rdef_homotopy};
use crystrep::torus::{orbit, orbit_exact, parse_rational, ExactChar, TorusChar};
use crystrep::{acceptance, Error, Result};

#[derive(Parser)]
#[command(name = "crystrep", version, about = "Representations of virtually abelian groups and their moduli")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file with tolerance overrides; flags override the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Bound on ‖UU* − I‖ for each generator image
    #[arg(long, global = true)]
    unitarity_tol: Option<f64>,
    /// Bound on relation residuals
    #[arg(long, global = true)]
    relation_tol: Option<f64>,
    /// Relative singular value cutoff for numerical rank
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
    /// Tolerance for comparing eigenvalues and characters
    #[arg(long, global = true)]
    equality_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Group definitions.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Representations given as JSON files.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Orbits on the character torus.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Local dimension of the moduli space.
    #[command(subcommand)]
    Probe(ProbeCmd),
    /// Homology of the moduli models.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Explicit paths in representation spaces.
    #[command(subcommand)]
    Paths(PathsCmd),
    /// Run the acceptance suite.
    Accept {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Parse and validate a group file (`-` reads stdin).
    Validate { file: String },
    /// Print the definition of Γ_k.
    GammaK { k: usize },
}

#[derive(Subcommand)]
enum RepCmd {
    Verify { group: String, rep: String },
    /// Induce a representation of an intermediate subgroup.
    Induce {
        group: String,
        rep: String,
        /// Point group elements of the subgroup, comma separated.
        #[arg(long, default_value = "0")]
        subgroup: String,
    },
    Decompose { group: String, rep: String },
    Classify { group: String, rep: String },
    /// The 2-dimensional family on Γ_k; angles in turns.
    Family {
        k: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        z: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
}

#[derive(Subcommand)]
enum TorusCmd {
    /// Orbit of a character given by comma-separated angles in turns.
    Orbit { group: String, angles: String },
}

#[derive(Subcommand)]
enum ProbeCmd {
    Dim { group: String, rep: String },
}

#[derive(Subcommand)]
enum TopologyCmd {
    /// Low homotopy of the deformation representation ring of Γ_k.
    Rdef { k: usize },
    /// Rational cohomology of Γ_k.
    Hq { k: usize },
}

#[derive(Subcommand)]
enum PathsCmd {
    Trivialize {
        group: String,
        rep: String,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Write the path samples as JSON to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

struct RunConfig {
    seed: u64,
    tol: ToleranceConfig,
    json: bool,
}

impl RunConfig {
    fn from_args(a: &RunArgs) -> Result<Self> {
        let mut tol = match &a.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)?
            }
            None => ToleranceConfig::default(),
        };
        if let Some(x) = a.unitarity_tol {
            tol.unitarity_tol = x;
        }
        if let Some(x) = a.relation_tol {
            tol.relation_tol = x;
        }
        if let Some(x) = a.rank_tol {
            tol.rank_tol = x;
        }
        if let Some(x) = a.equality_tol {
            tol.equality_tol = x;
        }
        tol.validate()?;
        Ok(RunConfig {
            seed: a.seed,
            tol,
            json: a.json,
        })
    }
}

/// 12 significant digits.
fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.11e}")
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = format!("{x:.11e}").parse().expect("round trip");
            json!(r)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

fn to_string_rounded(v: Value) -> String {
    serde_json::to_string_pretty(&round_value(v)).expect("json")
}

fn abelian_json(a: &AbelianInvariants) -> Value {
    json!({
        "free_rank": a.free_rank,
        "torsion": a.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "display": a.to_string(),
    })
}

fn read_input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))
    }
}

/// A group file, `-` for stdin, or a builtin name (`gamma-k:<k>`, `z:<k>`, `p4`).
fn load_group(arg: &str) -> Result<Arc<VaGroup>> {
    if arg == "-" || Path::new(arg).is_file() {
        return Ok(Arc::new(parse_group(&read_input(arg)?)?));
    }
    Ok(Arc::new(VaGroup::builtin(arg)?))
}

fn rep_from_json(v: &RepJson, group: Arc<VaGroup>) -> Result<UnitaryRep> {
    if v.lattice_images.len() != group.rank() {
        return Err(Error::DimensionMismatch {
            expected: group.rank(),
            found: v.lattice_images.len(),
        });
    }
    let lattice = v
        .lattice_images
        .iter()
        .map(|m| matrix_from_json(m, v.n))
        .collect::<Result<Vec<CMat>>>()?;
    let mut lifts = Vec::new();
    for q in 1..group.q_order() {
        let m = v
            .lift_images
            .get(&q.to_string())
            .ok_or_else(|| Error::InvalidInput(format!("missing lift image for {q}")))?;
        lifts.push(matrix_from_json(m, v.n)?);
    }
    UnitaryRep::from_parts(group, v.n, lattice, lifts)
}

fn load_rep(group: Arc<VaGroup>, arg: &str, tol: ToleranceConfig) -> Result<UnitaryRep> {
    let v: RepJson = serde_json::from_str(&read_input(arg)?)?;
    rep_from_json(&v, group)?.verified(tol)
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidInput(format!("bad element index {t:?}"))))
        .collect()
}

struct Output {
    text: String,
    json: Value,
    passed: bool,
}

fn out(text: String, json: Value, passed: bool) -> Result<Output> {
    Ok(Output { text, json, passed })
}

fn run_group(cmd: GroupCmd) -> Result<Output> {
    match cmd {
        GroupCmd::Validate { file } => {
            let g = parse_group(&read_input(&file)?)?;
            let ab = abelianization(&g)?;
            let text = format!(
                "group {}: valid\nrank {}, point group order {}, faithful {}\nabelianization {ab}",
                g.name(),
                g.rank(),
                g.q_order(),
                g.is_faithful()
            );
            let j = json!({
                "name": g.name(), "valid": true, "rank": g.rank(), "q_order": g.q_order(),
                "faithful": g.is_faithful(), "abelianization": abelian_json(&ab),
            });
            out(text, j, true)
        }
        GroupCmd::GammaK { k } => {
            let g = VaGroup::gamma_k(k)?;
            let text = format_group(&g);
            out(text.trim_end().to_string(), json!({ "definition": text }), true)
        }
    }
}

fn decomposition_json(rho: &UnitaryRep, seed: u64) -> Result<(String, Value, bool)> {
    let d = decompose(rho, seed)?;
    let bound = rho.group().q_order();
    let lines: Vec<String> = d.dims().iter().map(|(dim, m)| format!("dimension {dim} with multiplicity {m}")).collect();
    let factors: Vec<Value> = d
        .factors
        .iter()
        .map(|(f, m)| json!({"dim": f.dim(), "multiplicity": m, "rep": f.to_json_value()}))
        .collect();
    let ok = d.max_factor_dim() <= bound;
    Ok((lines.join("\n"), json!({ "factors": factors, "index_bound": bound, "within_bound": ok }), ok))
}

fn run_rep(cmd: RepCmd, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        RepCmd::Verify { group, rep } => {
            let g = load_group(&group)?;
            let v: RepJson = serde_json::from_str(&read_input(&rep)?)?;
            let rho = rep_from_json(&v, g)?.with_tolerances(cfg.tol);
            let r = rho.verify();
            let text = format!(
                "{}: unitarity residual {}, relation residual {}{}",
                if r.passed { "verified" } else { "FAILED" },
                num(r.max_unitarity_residual),
                num(r.max_relation_residual),
                r.worst_relation.as_ref().map(|w| format!(", worst {w}")).unwrap_or_default()
            );
            let passed = r.passed;
            out(text, serde_json::to_value(r)?, passed)
        }
        RepCmd::Induce { group, rep, subgroup } => {
            let g = load_group(&group)?;
            let h = IntermediateSubgroup::new(&g, &parse_list(&subgroup)?)?;
            let rho = load_rep(Arc::new(h.group.clone()), &rep, cfg.tol)?;
            let ind = induce(&g, &h, &rho)?;
            let j = serde_json::to_value(ind.to_json_value())?;
            out(to_string_rounded(j.clone()), j, true)
        }
        RepCmd::Decompose { group, rep } => {
            let rho = load_rep(load_group(&group)?, &rep, cfg.tol)?;
            let (text, j, ok) = decomposition_json(&rho, cfg.seed)?;
            out(text, j, ok)
        }
        RepCmd::Classify { group, rep } => {
            let rho = load_rep(load_group(&group)?, &rep, cfg.tol)?;
            let c = classify(&rho, cfg.seed)?;
            let j = c.to_json_value();
            let text = match &c {
                crystrep::classify::Classification::Induced { subgroup, character, .. } => format!(
                    "Induced from the subgroup {:?} (index {}) with character ({})",
                    subgroup.elements,
                    subgroup.index,
                    character.angles.iter().map(|a| num(*a)).collect::<Vec<_>>().join(", ")
                ),
                crystrep::classify::Classification::ScalarOnA(d) => format!(
                    "ScalarOnA with central character ({})",
                    d.central_char.angles.iter().map(|a| num(*a)).collect::<Vec<_>>().join(", ")
                ),
            };
            out(text, j, true)
        }
        RepCmd::Family { k, z, alpha } => {
            let tau = std::f64::consts::TAU;
            let zs: Vec<_> = z.iter().map(|a| cis(tau * a)).collect();
            let rho = family_rep(k, &zs, cis(tau * alpha))?;
            let j = serde_json::to_value(rho.to_json_value())?;
            out(to_string_rounded(j.clone()), j, true)
        }
    }
}

fn run_torus(cmd: TorusCmd) -> Result<Output> {
    let TorusCmd::Orbit { group, angles } = cmd;
    let g = load_group(&group)?;
    let parts: Vec<&str> = angles.split(',').map(str::trim).collect();
    let exact: Option<Vec<_>> = parts.iter().map(|p| parse_rational(p).ok()).collect();
    let (points, stabilizer, free) = match exact {
        Some(a) => {
            let o = orbit_exact(&g, &ExactChar::new(a))?;
            let pts: Vec<Vec<String>> = o.points.iter().map(|p| p.angles.iter().map(|x| x.to_string()).collect()).collect();
            (pts, o.stabilizer, o.free)
        }
        None => {
            let a = parts
                .iter()
                .map(|p| p.parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad angle {p:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let o = orbit(&g, &TorusChar::new(a))?;
            let pts = o.points.iter().map(|p| p.angles.iter().map(|x| num(*x)).collect()).collect();
            (pts, o.stabilizer, o.free)
        }
    };
    let text = format!(
        "orbit of size {}, stabilizer {:?}, free {free}\n{}",
        points.len(),
        stabilizer,
        points.iter().map(|p| format!("({})", p.join(", "))).collect::<Vec<_>>().join("\n")
    );
    out(text, json!({"points": points, "stabilizer": stabilizer, "free": free}), true)
}

fn run_probe(cmd: ProbeCmd, cfg: &RunConfig) -> Result<Output> {
    let ProbeCmd::Dim { group, rep } = cmd;
    let rho = load_rep(load_group(&group)?, &rep, cfg.tol)?;
    let r = local_moduli_dim(&rho)?;
    let text = format!(
        "cocycle dimension {}, orbit dimension {}, local moduli dimension {} (bound {}){}",
        r.z1_dim,
        r.orbit_dim,
        r.local_moduli_dim,
        r.bound,
        if r.ambiguous { ", rank decision ambiguous" } else { "" }
    );
    let passed = r.pass;
    out(text, serde_json::to_value(r)?, passed)
}

fn run_topology(cmd: TopologyCmd) -> Result<Output> {
    match cmd {
        TopologyCmd::Rdef { k } => {
            let r = rdef_homotopy(k)?;
            let mut lines = vec![
                format!("π₀ = {}", r.pi0),
                format!(
                    "π₁ = {}{}",
                    r.pi(1),
                    if r.pi1.extension_ambiguous { " (extension of the torsion undetermined)" } else { "" }
                ),
                format!("π₂ = {}", r.pi2),
            ];
            for (d, a) in &r.higher {
                lines.push(format!("π_{d} = {a}"));
            }
            lines.push(format!("π_n = 0 for n > {}", k + 1));
            let higher: Vec<Value> = r.higher.iter().map(|(d, a)| json!({"degree": d, "group": abelian_json(a)})).collect();
            let j = json!({
                "k": k,
                "pi0": abelian_json(&r.pi0),
                "pi1": {
                    "rank": r.pi1.rank,
                    "coker_d2": abelian_json(&r.pi1.coker_d2),
                    "torsion": abelian_json(&r.pi1.torsion),
                    "extension_ambiguous": r.pi1.extension_ambiguous,
                },
                "pi2": abelian_json(&r.pi2),
                "higher": higher,
            });
            out(lines.join("\n"), j, true)
        }
        TopologyCmd::Hq { k } => {
            let r = rational_cohomology_gamma_k(k)?;
            let text = format!(
                "rank H^n(Γ_{k}; ℚ) for n = 0..{}: {:?}{}",
                k + 1,
                r.cw_quotient,
                if r.all_agree() { "" } else { " (models disagree)" }
            );
            let ok = r.all_agree();
            out(text, serde_json::to_value(r)?, ok)
        }
    }
}

fn run_paths(cmd: PathsCmd, cfg: &RunConfig) -> Result<Output> {
    let PathsCmd::Trivialize { group, rep, steps, export } = cmd;
    let rho = load_rep(load_group(&group)?, &rep, cfg.tol)?;
    let t = stably_trivialize(&rho, cfg.seed, steps)?;
    let mut m_rho = rho.clone();
    for _ in 1..t.multiplier {
        m_rho = m_rho.direct_sum(&rho)?;
    }
    let triv = UnitaryRep::trivial(rho.group_arc().clone(), m_rho.dim());
    let report = verify_path(&t.path, Some((&m_rho, &triv)));
    let equiv = endpoints_equivalent(&t, &rho, cfg.seed)?;
    if let Some(p) = export {
        let v = round_value(serde_json::to_value(t.path.to_json_value())?);
        std::fs::write(&p, serde_json::to_string(&v)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
    }
    let passed = report.passed && equiv;
    let text = format!(
        "m = {}, {} samples over {} segments, max residual {}, max step {}, endpoints equivalent {equiv}: {}",
        t.multiplier,
        report.samples,
        t.segments.len(),
        num(report.max_relation_residual),
        num(report.max_step_distance),
        if passed { "pass" } else { "FAIL" }
    );
    let segments: Vec<Value> = t.segments.iter().map(|(n, s)| json!({"name": n, "samples": s})).collect();
    out(
        text,
        json!({"multiplier": t.multiplier, "segments": segments, "report": report, "endpoints_equivalent": equiv}),
        passed,
    )
}

fn run_accept(only: Option<usize>, cfg: &RunConfig) -> Result<Output> {
    let outcomes = match only {
        Some(id) => vec![acceptance::criterion(id, cfg.seed)
            .ok_or_else(|| Error::InvalidInput(format!("no criterion {id}; criteria are 1..=10")))?],
        None => acceptance::run_all(cfg.seed),
    };
    let passed = outcomes.iter().all(|o| o.passed);
    let text = outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n");
    out(text, json!({"seed": cfg.seed, "criteria": outcomes, "passed": passed}), passed)
}

fn run(cli: Cli) -> Result<(Output, bool)> {
    let cfg = RunConfig::from_args(&cli.run)?;
    let o = match cli.command {
        Command::Group(c) => run_group(c),
        Command::Rep(c) => run_rep(c, &cfg),
        Command::Torus(c) => run_torus(c),
        Command::Probe(c) => run_probe(c, &cfg),
        Command::Topology(c) => run_topology(c),
        Command::Paths(c) => run_paths(c, &cfg),
        Command::Accept { only } => run_accept(only, &cfg),
    }?;
    Ok((o, cfg.json))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: bad arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((o, json)) => {
            let body = if json { to_string_rounded(o.json) } else { o.text };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{body}");
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
