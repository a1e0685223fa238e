use clap::{Args, Parser, Subcommand, ValueEnum};
use qpc::cluster::{lg_potential_chart, lg_potential_via_fpoly, DEFAULT_DEPTH_MAX};
use qpc::io;
use qpc::qp::mutate_qp;
use qpc::quiver::{b_matrix, mutate_quiver};
use qpc::rep::{build_injective, build_projective, is_isomorphic_with, mutate_rep, DEFAULT_D_MAX, DEFAULT_ISO_TRIALS, DEFAULT_SEED};
use qpc::typea::{self, Cone, ReducedWord};
use qpc::{Error, IceQuiver, LaurentExpr, Potential, QPInstance};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qpc", version, about = "Quivers with potential, cluster charts and string cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Breadth of the optimized-seed search.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_MAX)]
    depth_max: usize,
    /// Degree bound for QP reduction (default 2·deg S + 4).
    #[arg(long, global = true)]
    d_red: Option<usize>,
    /// Path-length bound when building projectives.
    #[arg(long, global = true, default_value_t = DEFAULT_D_MAX)]
    d_max: usize,
    /// RNG seed for isomorphism tests; QPC_SEED is read when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for per-vertex work.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LgMethod {
    Chart,
    Fpoly,
    Paths,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConeMethod {
    Gp,
    Fpoly,
    Sigma,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate an ice quiver along a word of mutable vertices.
    QuiverMutate {
        file: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Mutate a quiver with potential along a word.
    QpMutate {
        file: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Indecomposable projective (or injective) representation at a vertex.
    RepProjective {
        file: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        injective: bool,
    },
    /// Mutate a decorated representation along a word.
    RepMutate {
        qp: PathBuf,
        rep: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
        /// Also compare the result with the projective of the mutated QP.
        #[arg(long)]
        expect_projective: Option<usize>,
    },
    /// Landau-Ginzburg potential, one W per frozen vertex.
    Lg {
        #[arg(long, conflicts_with = "quiver")]
        word: Option<String>,
        /// Quiver or QP JSON file.
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = LgMethod::All)]
        method: LgMethod,
    },
    /// String cone of a reduced word.
    Stringcone {
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = ConeMethod::All)]
        method: ConeMethod,
    },
    /// Wiring diagram, Γ quiver and face potential of a reduced word.
    Wiring {
        #[arg(long)]
        word: String,
    },
}

enum Failure {
    Input(String),
    Disagree(String),
    Bound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ReductionDegreeExceeded(_)
            | Error::DimensionNotStabilized(_)
            | Error::NotFoundWithinDepth(_)
            | Error::NoBraidChainWithinBound(_) => Failure::Bound(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn parse_word(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Failure::Input(format!("bad letter {t:?}"))))
        .collect()
}

fn reduced_word(s: &str) -> Result<ReducedWord, Failure> {
    Ok(ReducedWord::parse(&parse_word(s)?)?)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Accepts either {"quiver":…, "potential":…} or a bare quiver.
fn read_qp(path: &Path) -> Result<QPInstance, Failure> {
    let v = read_json(path)?;
    if v.get("quiver").is_some() {
        Ok(io::qp_from_json(&v)?)
    } else {
        Ok(QPInstance::new(io::quiver_from_json(&v)?, Potential::zero())?)
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn render_b(b: &[Vec<i64>]) -> String {
    b.iter().map(|r| r.iter().map(|x| format!("{x:>3}")).collect::<String>()).collect::<Vec<_>>().join("\n")
}

fn render_quiver(q: &IceQuiver) -> String {
    let mut s = format!("m = {}, n = {}\n", q.m(), q.n());
    for a in q.arrows() {
        let _ = writeln!(s, "  {}: {} -> {}", a.id, a.t, a.h);
    }
    s
}

fn render_potential(p: &Potential) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .terms()
        .map(|(c, x)| format!("{} {}", qpc::linalg::fmt_q(x), c.iter().map(|a| format!("({a})")).collect::<String>()))
        .collect();
    terms.join(" + ")
}

fn check_mutable(q: &IceQuiver, word: &[usize]) -> Result<(), Failure> {
    match word.iter().find(|&&k| k == 0 || k > q.n()) {
        Some(k) => Err(Failure::Input(format!("vertex {k} is not mutable"))),
        None => Ok(()),
    }
}

fn quiver_mutate(cfg: &RunConfig, file: &Path, word: &str) -> Out {
    let mut q = io::quiver_from_json(&read_json(file)?)?;
    let word = parse_word(word)?;
    check_mutable(&q, &word)?;
    for &k in &word {
        q = mutate_quiver(&q, k)?;
    }
    let b = b_matrix(&q).entries();
    Ok(match cfg.format {
        Format::Json => pretty(&json!({"quiver": io::quiver_to_json(&q), "b_matrix": b})),
        Format::Text => format!("{}B =\n{}", render_quiver(&q), render_b(&b)),
    })
}

fn qp_mutate(cfg: &RunConfig, file: &Path, word: &str) -> Out {
    let mut qp = read_qp(file)?;
    let word = parse_word(word)?;
    check_mutable(&qp.quiver, &word)?;
    for &k in &word {
        qp = mutate_qp(&qp, k, cfg.d_red)?;
    }
    let b = b_matrix(&qp.quiver).entries();
    Ok(match cfg.format {
        Format::Json => pretty(&json!({"qp": io::qp_to_json(&qp), "b_matrix": b})),
        Format::Text => format!("{}S = {}\nB =\n{}", render_quiver(&qp.quiver), render_potential(&qp.potential), render_b(&b)),
    })
}

fn render_rep(r: &qpc::DecoratedRep) -> String {
    let mut s = format!("dims = {:?}, v = {:?}\n", r.dims, r.v);
    for (id, m) in &r.maps {
        let _ = writeln!(s, "  {id}: {m:?}");
    }
    s
}

fn rep_projective(cfg: &RunConfig, file: &Path, vertex: usize, injective: bool) -> Out {
    let qp = read_qp(file)?;
    if vertex == 0 || vertex > qp.quiver.m() {
        return Err(Failure::Input(format!("vertex {vertex} out of range")));
    }
    let r = if injective { build_injective(&qp, vertex, cfg.d_max)? } else { build_projective(&qp, vertex, cfg.d_max)? };
    Ok(match cfg.format {
        Format::Json => pretty(&io::rep_to_json(&r)),
        Format::Text => render_rep(&r),
    })
}

fn seed(cfg: &RunConfig) -> Result<u64, Failure> {
    match (cfg.seed, std::env::var("QPC_SEED")) {
        (Some(s), _) => Ok(s),
        (None, Ok(s)) => s.trim().parse().map_err(|_| Failure::Input(format!("bad QPC_SEED {s:?}"))),
        (None, Err(_)) => Ok(DEFAULT_SEED),
    }
}

fn rep_mutate(cfg: &RunConfig, qp_file: &Path, rep_file: &Path, word: &str, expect: Option<usize>) -> Out {
    let mut qp = read_qp(qp_file)?;
    let mut r = io::rep_from_json(&qp.quiver, &read_json(rep_file)?)?;
    if let Err(v) = qpc::rep::check_module(&qp, &r) {
        return Err(Failure::Input(v.join("; ")));
    }
    let word = parse_word(word)?;
    check_mutable(&qp.quiver, &word)?;
    for &k in &word {
        (qp, r) = mutate_rep(&qp, &r, k, cfg.d_red)?;
    }
    let verdict = match expect {
        Some(ell) => {
            let fresh = build_projective(&qp, ell, cfg.d_max)?;
            Some(is_isomorphic_with(&qp.quiver, &r, &fresh, DEFAULT_ISO_TRIALS, seed(cfg)?))
        }
        None => None,
    };
    let out = match cfg.format {
        Format::Json => {
            let mut v = json!({"qp": io::qp_to_json(&qp), "rep": io::rep_to_json(&r)});
            if let Some(iso) = verdict {
                v["isomorphic_to_projective"] = json!(iso);
            }
            pretty(&v)
        }
        Format::Text => {
            let mut s = format!("{}S = {}\n{}", render_quiver(&qp.quiver), render_potential(&qp.potential), render_rep(&r));
            if let Some(iso) = verdict {
                let _ = write!(s, "{}", if iso { "ISOMORPHIC" } else { "NOT ISOMORPHIC" });
            }
            s
        }
    };
    match verdict {
        Some(false) => Err(Failure::Disagree(out)),
        _ => Ok(out),
    }
}

struct LgRow {
    ell: usize,
    index: Option<usize>,
    results: Vec<(&'static str, Result<LaurentExpr, Error>)>,
}

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build().map_err(input)
}

fn lg(cfg: &RunConfig, word: Option<&str>, quiver: Option<&Path>, method: LgMethod) -> Out {
    let want = |m: LgMethod| method == m || method == LgMethod::All;
    let (qp, gamma) = match (word, quiver) {
        (Some(w), _) => {
            let w = reduced_word(w)?;
            let (g, qp) = typea::gamma_qp(&w)?;
            (qp, Some((w, g)))
        }
        (None, Some(f)) => (read_qp(f)?, None),
        (None, None) => return Err(Failure::Input("pass --word or --quiver".into())),
    };
    if want(LgMethod::Paths) && method == LgMethod::Paths && gamma.is_none() {
        return Err(Failure::Input("the paths method needs --word".into()));
    }
    let frozen: Vec<usize> = (qp.quiver.n() + 1..=qp.quiver.m()).collect();
    let rows: Vec<LgRow> = pool(cfg)?.install(|| {
        frozen
            .par_iter()
            .map(|&ell| {
                let index = gamma.as_ref().and_then(|(_, g)| g.ell.iter().position(|&l| l == ell).map(|i| i + 1));
                let mut results = Vec::new();
                if want(LgMethod::Chart) {
                    results.push(("chart", lg_potential_chart(&qp.quiver, ell, cfg.depth_max)));
                }
                if want(LgMethod::Fpoly) {
                    results.push(("fpoly", lg_potential_via_fpoly(&qp, ell, cfg.d_max)));
                }
                if let (true, Some((w, g)), Some(i)) = (want(LgMethod::Paths), gamma.as_ref(), index) {
                    results.push(("paths", typea::w_via_paths(w, i).map(|p| g.to_vertices(&p))));
                }
                LgRow { ell, index, results }
            })
            .collect()
    });
    let mut disagree = false;
    let mut text = String::new();
    let mut entries = Vec::new();
    for row in &rows {
        let mut values: Vec<&LaurentExpr> = Vec::new();
        let mut obj = serde_json::Map::new();
        obj.insert("ell".into(), json!(row.ell));
        if let Some(i) = row.index {
            obj.insert("index".into(), json!(i));
        }
        for (name, r) in &row.results {
            match r {
                Ok(p) => {
                    let _ = writeln!(text, "W_{} [{name}] = {}", row.ell, p.render("X"));
                    obj.insert((*name).into(), io::laurent_to_json(p));
                    values.push(p);
                }
                Err(e) => {
                    let _ = writeln!(text, "W_{} [{name}] failed: {e}", row.ell);
                    obj.insert((*name).into(), json!({"error": e.to_string()}));
                    if method != LgMethod::All {
                        return Err(e.clone().into());
                    }
                    if matches!(Failure::from(e.clone()), Failure::Input(_)) {
                        disagree = true;
                    }
                }
            }
        }
        if values.windows(2).any(|p| p[0] != p[1]) {
            disagree = true;
        }
        entries.push(Value::Object(obj));
    }
    let verdict = if disagree { "DISAGREE" } else { "AGREE" };
    let out = match cfg.format {
        Format::Json => {
            let mut v = json!({"potentials": entries});
            if method == LgMethod::All {
                v["verdict"] = json!(verdict);
            }
            pretty(&v)
        }
        Format::Text => {
            if method == LgMethod::All {
                text.push_str(verdict);
            }
            text.trim_end().to_string()
        }
    };
    if disagree {
        Err(Failure::Disagree(out))
    } else {
        Ok(out)
    }
}

fn render_cone(c: &Cone) -> String {
    c.normals
        .iter()
        .map(|v| format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("\n")
}

fn stringcone(cfg: &RunConfig, word: &str, method: ConeMethod) -> Out {
    let w = reduced_word(word)?;
    let want = |m: ConeMethod| method == m || method == ConeMethod::All;
    let mut cones: Vec<(&str, Cone)> = Vec::new();
    if want(ConeMethod::Gp) {
        cones.push(("gp", typea::string_cone_gp(&w)));
    }
    if want(ConeMethod::Fpoly) {
        cones.push(("fpoly", typea::string_cone_fpoly(&w, cfg.d_max)?));
    }
    if want(ConeMethod::Sigma) {
        cones.push(("sigma", typea::string_cone_sigma(&w)?));
    }
    let equal = cones.windows(2).all(|p| p[0].1 == p[1].1);
    let verdict = if equal { "EQUAL" } else { "DIFFERENT" };
    let out = match cfg.format {
        Format::Json => {
            let mut v = if method == ConeMethod::All {
                let mut m = serde_json::Map::new();
                for (name, c) in &cones {
                    m.insert((*name).into(), io::cone_to_json(c));
                }
                m.insert("verdict".into(), json!(verdict));
                Value::Object(m)
            } else {
                io::cone_to_json(&cones[0].1)
            };
            if method == ConeMethod::All && equal {
                v["normals"] = json!(cones[0].1.normals);
            }
            pretty(&v)
        }
        Format::Text => {
            let mut s = String::new();
            for (name, c) in &cones {
                let _ = writeln!(s, "[{name}]\n{}", render_cone(c));
            }
            if method == ConeMethod::All {
                s.push_str(verdict);
            }
            s.trim_end().to_string()
        }
    };
    if equal {
        Ok(out)
    } else {
        Err(Failure::Disagree(out))
    }
}

fn wiring(cfg: &RunConfig, word: &str) -> Out {
    let w = reduced_word(word)?;
    let d = typea::wiring(&w);
    let (g, qp) = typea::gamma_qp(&w)?;
    let crossings: Vec<Value> = d
        .crossings
        .iter()
        .map(|c| json!({"pos": c.pos, "level": c.level, "wires": [c.wires.0, c.wires.1]}))
        .collect();
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "crossings": crossings,
            "relabel": g.relabel,
            "ell": g.ell,
            "qp": io::qp_to_json(&qp),
            "ca_hat": typea::ca_hat(&w),
        })),
        Format::Text => {
            let mut s = format!("{}\n\n", d.ascii());
            for c in &d.crossings {
                let _ = writeln!(s, "crossing {} at level {}: [{},{}]", c.pos, c.level, c.wires.0, c.wires.1);
            }
            let _ = write!(s, "\nvertex -> position: {:?}\nell: {:?}\n", g.relabel, g.ell);
            let _ = write!(s, "{}S = {}", render_quiver(&qp.quiver), render_potential(&qp.potential));
            s
        }
    })
}

fn run(cli: &Cli) -> Out {
    let cfg = &cli.config;
    if cfg.depth_max == 0 || cfg.d_max == 0 || cfg.jobs == 0 || cfg.d_red == Some(0) {
        return Err(Failure::Input("bounds and --jobs must be positive".into()));
    }
    match &cli.command {
        Command::QuiverMutate { file, word } => quiver_mutate(cfg, file, word),
        Command::QpMutate { file, word } => qp_mutate(cfg, file, word),
        Command::RepProjective { file, vertex, injective } => rep_projective(cfg, file, *vertex, *injective),
        Command::RepMutate { qp, rep, word, expect_projective } => rep_mutate(cfg, qp, rep, word, *expect_projective),
        Command::Lg { word, quiver, method } => lg(cfg, word.as_deref(), quiver.as_deref(), *method),
        Command::Stringcone { word, method } => stringcone(cfg, word, *method),
        Command::Wiring { word } => wiring(cfg, word),
    }
}

fn emit(out: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{out}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagree(out)) => {
            emit(&out);
            ExitCode::from(3)
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
