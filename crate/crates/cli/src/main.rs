//! Unified command-line front end.
//!
//! Every invocation prints a human-readable body followed by one
//! machine-readable trailer line `RESULT: key=value ...`. Exit codes:
//! 0 when the operation's boolean verdict (if any) is true, 1 on domain
//! errors (with `RESULT: error=<code>`), 2 on usage errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use colombeau_core::ifuncs::{make_graph, parse_expr, zero_set_demo, Body, ExprFn, GraphFamily};
use colombeau_core::isets::{
    contains, equality_report, fatten, internal_union, max_norm, min_distance, parse_set,
    project, subset_report, InternalSet,
};
use colombeau_core::mollifier::{assemble_generalized, build_vanishing, tensorize};
use colombeau_core::nets::parse_net;
use colombeau_core::saturation::{
    cauchy_limit, nested_balls_witness, saturation_witness, BallChain, ChainEntry, ChainSpec,
};
use colombeau_core::{Config, Error, GenNumber, Net, Result, VecNet};

#[derive(Parser)]
#[command(name = "colombeau", version, about = "Calculus of generalized numbers")]
struct Cli {
    /// key=value configuration file overriding the defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized probes (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generalized-number operations on net literals.
    #[command(subcommand)]
    Gnum(GnumCmd),
    /// Internal-set operations on set literals.
    #[command(subcommand)]
    Iset(IsetCmd),
    /// Internal functions from expression bodies.
    #[command(subcommand)]
    Ifn(IfnCmd),
    /// Diagonal witness for a decreasing chain file (`n t_n SET` lines).
    Saturate(SaturateArgs),
    /// Nested-ball witness for a ball file (`n r_n NET` lines).
    Balls(BallsArgs),
    /// Sharp limit of a Cauchy sequence file (one NET per line).
    Cauchy(CauchyArgs),
    /// Vanishing-moment mollifier construction.
    #[command(subcommand)]
    Mollifier(MollifierCmd),
}

#[derive(Subcommand)]
enum GnumCmd {
    /// Valuation of a net.
    Val { net: String },
    /// Sharp norm exp(-valuation).
    Sharpnorm { net: String },
    /// Equality in the quotient (difference negligible).
    Eq { a: String, b: String },
    /// Sample a net on the geometric grid and write a CSV.
    Sample {
        net: String,
        #[arg(long)]
        kmin: Option<u32>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum IsetCmd {
    /// Membership of a point in an internal set.
    Contains { set: String, net: String },
    /// Inclusion via the directed sup-distance net.
    Subset { a: String, b: String },
    /// Equality via the Hausdorff net.
    Equal { a: String, b: String },
    /// Minimal distance with an attaining pair.
    Mindist { a: String, b: String },
    /// Maximal norm with an attaining member.
    Maxnorm { set: String },
    /// Union of two internal sets.
    Union {
        a: String,
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fatten a set by eps^m.
    Fatten {
        set: String,
        m: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coordinatewise projection (verified under sharp boundedness).
    Project {
        set: String,
        #[arg(long, value_delimiter = ',')]
        coords: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum IfnCmd {
    /// Evaluate an expression function at a generalized point.
    Eval {
        expr: String,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        at: String,
    },
    /// Continuity modulus table m(1..n).
    Modulus {
        expr: String,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        n: u32,
    },
    /// Built-in demonstrations.
    Demo { what: String },
}

#[derive(Args)]
struct SaturateArgs {
    chainfile: PathBuf,
    /// Keep only chain entries with label <= nmax.
    #[arg(long)]
    nmax: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BallsArgs {
    ballfile: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CauchyArgs {
    seqfile: PathBuf,
}

#[derive(Subcommand)]
enum MollifierCmd {
    /// Build the order-N bump and write samples/moments/schedule CSVs.
    Build {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build plus the diagonal threshold table and grid moment checks.
    Diagonal {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Collected output: body lines, trailer keys, and the boolean verdict that
/// drives the exit code (absent means plain success).
struct Report {
    body: String,
    trailer: Vec<(String, String)>,
    verdict: Option<bool>,
}

impl Report {
    fn new() -> Report {
        Report { body: String::new(), trailer: Vec::new(), verdict: None }
    }
    fn line(&mut self, s: impl AsRef<str>) {
        self.body.push_str(s.as_ref());
        self.body.push('\n');
    }
    fn kv(&mut self, k: &str, v: impl ToString) {
        self.trailer.push((k.to_string(), v.to_string()));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(cli.config.as_deref(), cli.seed) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(&cli.cmd, &cfg) {
        Ok(report) => {
            print!("{}", report.body);
            let trailer: Vec<String> = report
                .trailer
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!("RESULT: {}", trailer.join(" "));
            if report.verdict == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    println!("error: {e}");
    println!("RESULT: error={}", err_code(e));
    ExitCode::from(1)
}

fn err_code(e: &Error) -> &'static str {
    match e {
        Error::Syntax(_) => "syntax",
        Error::Overlap(_) => "overlap",
        Error::IndeterminateSign(_) => "indeterminate-sign",
        Error::IncompatiblePatterns(_) => "incompatible-patterns",
        Error::BackendMismatch => "backend-mismatch",
        Error::DimMismatch { .. } => "dim-mismatch",
        Error::NotSharplyBounded => "not-sharply-bounded",
        Error::EmptyClip => "empty-clip",
        Error::EmptyFamily => "empty-family",
        Error::NotAPartition(_) => "not-a-partition",
        Error::UnsupportedShapeCombo(_) => "unsupported-shape",
        Error::MissingBound(_) => "missing-bound",
        Error::ChainNotDecreasing(_) => "chain-not-decreasing",
        Error::EmptyEntry(_) => "empty-entry",
        Error::NotNested(_) => "not-nested",
        Error::NotCauchy => "not-cauchy",
        Error::SequenceTooShort(_) => "sequence-too-short",
        Error::OutsideDomain => "outside-domain",
        Error::NoModulusFound(_) => "no-modulus",
        Error::DomainEvaluation(_) => "domain-evaluation",
        Error::QuadratureFailure(_) => "quadrature-failure",
        Error::BudgetInfeasible => "budget-infeasible",
        Error::PreconditionMomentFailure { .. } => "moment-precondition",
        Error::DerivativeOverflow(_) => "derivative-overflow",
    }
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<Config> {
    let mut cfg = Config::default();
    if let Some(p) = path {
        let text = read_file(p)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Syntax(format!("config line {} needs key=value", lineno + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |what: &str| Error::Syntax(format!("bad {what} in config: {v}"));
            match k {
                "k_min" => cfg.k_min = v.parse().map_err(|_| bad("k_min"))?,
                "k_max" => cfg.k_max = v.parse().map_err(|_| bad("k_max"))?,
                "m_max" => cfg.m_max = v.parse().map_err(|_| bad("m_max"))?,
                "big_m_max" => cfg.big_m_max = v.parse().map_err(|_| bad("big_m_max"))?,
                "slope_window" => {
                    cfg.slope_window = v.parse().map_err(|_| bad("slope_window"))?
                }
                "quad_tol" => cfg.quad_tol = v.parse().map_err(|_| bad("quad_tol"))?,
                "m_mesh" => cfg.m_mesh = v.parse().map_err(|_| bad("m_mesh"))?,
                "n_max" => cfg.n_max = v.parse().map_err(|_| bad("n_max"))?,
                "modulus_cap" => cfg.modulus_cap = v.parse().map_err(|_| bad("modulus_cap"))?,
                "seed" => cfg.seed = v.parse().map_err(|_| bad("seed"))?,
                _ => return Err(Error::Syntax(format!("unknown config key: {k}"))),
            }
        }
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read_file(p: &Path) -> Result<String> {
    std::fs::read_to_string(p)
        .map_err(|e| Error::Syntax(format!("cannot read {}: {e}", p.display())))
}

fn write_file(p: &Path, contents: &str) -> Result<()> {
    std::fs::write(p, contents)
        .map_err(|e| Error::Syntax(format!("cannot write {}: {e}", p.display())))
}

/// Literal arguments may be inline text or a path to a file holding it.
fn read_arg(s: &str) -> Result<String> {
    let p = Path::new(s);
    if p.is_file() {
        Ok(read_file(p)?.trim().to_string())
    } else {
        Ok(s.trim().to_string())
    }
}

fn net_arg(s: &str) -> Result<Net> {
    let text = read_arg(s)?;
    let src = if text.starts_with('[') { text } else { format!("[tail] {text}") };
    Ok(Net::Symbolic(parse_net(&src)?))
}

fn set_arg(s: &str) -> Result<InternalSet> {
    Ok(InternalSet::new(parse_set(&read_arg(s)?)?))
}

/// A point argument: one net, or a comma-separated tuple at paren depth 0.
fn point_arg(s: &str, dim: usize) -> Result<VecNet> {
    let text = read_arg(s)?;
    if dim == 1 {
        return VecNet::new(vec![net_arg(&text)?]);
    }
    let mut comps = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                comps.push(net_arg(&text[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    comps.push(net_arg(&text[start..])?);
    VecNet::new(comps)
}

fn fmt_bool(v: bool) -> &'static str {
    if v { "true" } else { "false" }
}

fn run(cmd: &Cmd, cfg: &Config) -> Result<Report> {
    match cmd {
        Cmd::Gnum(c) => run_gnum(c, cfg),
        Cmd::Iset(c) => run_iset(c, cfg),
        Cmd::Ifn(c) => run_ifn(c, cfg),
        Cmd::Saturate(a) => run_saturate(a, cfg),
        Cmd::Balls(a) => run_balls(a, cfg),
        Cmd::Cauchy(a) => run_cauchy(a, cfg),
        Cmd::Mollifier(c) => run_mollifier(c, cfg),
    }
}

fn run_gnum(cmd: &GnumCmd, cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        GnumCmd::Val { net } => {
            let x = net_arg(net)?;
            let v = x.valuation(cfg);
            r.line(format!("valuation nu = {} ({})", v.value, tag(v.exact)));
            r.kv("val", v.value);
            r.kv("exact", fmt_bool(v.exact));
        }
        GnumCmd::Sharpnorm { net } => {
            let x = net_arg(net)?;
            let v = x.sharp_norm(cfg);
            r.line(format!("sharp norm = {} ({})", v.value, tag(v.exact)));
            r.kv("sharpnorm", v.value);
            r.kv("exact", fmt_bool(v.exact));
        }
        GnumCmd::Eq { a, b } => {
            let x = GenNumber::new(net_arg(a)?);
            let y = GenNumber::new(net_arg(b)?);
            let v = x.gen_eq(&y, cfg)?;
            r.line(format!("difference negligible: {} ({})", v.holds, tag(v.exact)));
            r.kv("equal", fmt_bool(v.holds));
            r.kv("exact", fmt_bool(v.exact));
            r.verdict = Some(v.holds);
        }
        GnumCmd::Sample { net, kmin, kmax, out } => {
            let x = net_arg(net)?;
            let (k_min, k_max) = (kmin.unwrap_or(cfg.k_min), kmax.unwrap_or(cfg.k_max));
            let s = x.sample(k_min, k_max)?;
            let mut csv = String::from("k,eps,sign,logmag\n");
            for k in k_min..=k_max {
                let smp = s.sample_at(k);
                let _ = writeln!(csv, "{k},{},{},{}", s.eps(k), smp.sign, smp.logmag);
            }
            write_file(out, &csv)?;
            r.line(format!("wrote {} rows to {}", k_max - k_min + 1, out.display()));
            r.kv("rows", k_max - k_min + 1);
            r.kv("out", out.display());
        }
    }
    Ok(r)
}

fn tag(exact: bool) -> &'static str {
    if exact { "exact" } else { "grid estimate" }
}

fn run_iset(cmd: &IsetCmd, cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        IsetCmd::Contains { set, net } => {
            let a = set_arg(set)?;
            let u = point_arg(net, a.family.dim)?;
            let (v, dist) = contains(&a, &u, cfg)?;
            let nu = dist.valuation(cfg);
            r.line(format!(
                "distance net valuation {} ({}); member: {}",
                nu.value,
                tag(v.exact),
                v.holds
            ));
            r.kv("contains", fmt_bool(v.holds));
            r.kv("dist_val", nu.value);
            r.kv("exact", fmt_bool(v.exact));
            r.verdict = Some(v.holds);
        }
        IsetCmd::Subset { a, b } => {
            let sa = set_arg(a)?;
            let sb = set_arg(b)?;
            let rep = subset_report(&sa, &sb, cfg)?;
            let nu = rep.delta.valuation(cfg);
            r.line(format!(
                "directed sup-distance valuation {} ({})",
                nu.value,
                tag(rep.verdict.exact)
            ));
            r.kv("subset", fmt_bool(rep.verdict.holds));
            r.kv("delta_val", nu.value);
            r.kv("exact", fmt_bool(rep.verdict.exact));
            r.verdict = Some(rep.verdict.holds);
        }
        IsetCmd::Equal { a, b } => {
            let sa = set_arg(a)?;
            let sb = set_arg(b)?;
            let rep = equality_report(&sa, &sb, cfg)?;
            let nu = rep.hausdorff.valuation(cfg);
            r.line(format!(
                "Hausdorff net valuation {} ({})",
                nu.value,
                tag(rep.verdict.exact)
            ));
            r.kv("equal", fmt_bool(rep.verdict.holds));
            r.kv("hausdorff_val", nu.value);
            r.kv("exact", fmt_bool(rep.verdict.exact));
            r.verdict = Some(rep.verdict.holds);
        }
        IsetCmd::Mindist { a, b } => {
            let sa = set_arg(a)?;
            let sb = set_arg(b)?;
            let md = min_distance(&sa, &sb, cfg)?;
            let nu = md.dist.rep.valuation(cfg);
            let sample = md.dist.rep.eval_f64(1e-6);
            r.line(format!(
                "minimal distance ~ {sample} (valuation {}, {})",
                nu.value,
                tag(md.exact)
            ));
            r.kv("mindist", sample);
            r.kv("nu", nu.value);
            r.kv("exact", fmt_bool(md.exact));
        }
        IsetCmd::Maxnorm { set } => {
            let a = set_arg(set)?;
            let mn = max_norm(&a, cfg)?;
            let nu = mn.value.rep.valuation(cfg);
            r.line(format!(
                "maximal norm valuation {} ({}), attained by a member",
                nu.value,
                tag(mn.exact)
            ));
            r.kv("nu", nu.value);
            r.kv("exact", fmt_bool(mn.exact));
        }
        IsetCmd::Union { a, b, out } => {
            let u = internal_union(&set_arg(a)?, &set_arg(b)?)?;
            let text = format!("{}", u.family);
            r.line(&text);
            if let Some(p) = out {
                write_file(p, &format!("{text}\n"))?;
                r.kv("out", p.display());
            }
            r.kv("shapes", u.family.shapes.len());
        }
        IsetCmd::Fatten { set, m, out } => {
            let a = set_arg(set)?;
            let fat = fatten(&a.family, *m)?;
            let text = format!("{fat}");
            r.line(&text);
            if let Some(p) = out {
                write_file(p, &format!("{text}\n"))?;
                r.kv("out", p.display());
            }
            r.kv("shapes", fat.shapes.len());
        }
        IsetCmd::Project { set, coords } => {
            let a = set_arg(set)?;
            let proj = project(&a, coords, cfg)?;
            let text = format!("{}", proj.set.family);
            r.line(&text);
            r.kv("dim", proj.set.family.dim);
            r.kv("verified", fmt_bool(proj.verified));
        }
    }
    Ok(r)
}

fn build_fn(expr: &str, domain: &str) -> Result<GraphFamily> {
    let body = Body::Expr(parse_expr(&read_arg(expr)?)?);
    let dom = parse_set(&read_arg(domain)?)?;
    make_graph(ExprFn::new(body, dom)?)
}

fn run_ifn(cmd: &IfnCmd, cfg: &Config) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        IfnCmd::Eval { expr, domain, at } => {
            let f = build_fn(expr, domain)?;
            let x = net_arg(at)?;
            let e = f.eval_at(&x, cfg)?;
            let nu = e.value.rep.valuation(cfg);
            let sample = e.value.rep.eval_f64(2f64.powi(-20));
            r.line(format!(
                "value ~ {sample} at eps = 2^-20 (valuation {}, guaranteed: {})",
                nu.value, e.guaranteed
            ));
            r.kv("value", sample);
            r.kv("nu", nu.value);
            r.kv("guaranteed", fmt_bool(e.guaranteed));
        }
        IfnCmd::Modulus { expr, domain, n } => {
            let f = build_fn(expr, domain)?;
            let table = f.modulus_table(*n, cfg)?;
            for &(i, m) in &table {
                r.line(format!("n = {i}: m = {m}"));
            }
            let last = table.last().map_or(0, |&(_, m)| m);
            r.kv("modulus", last);
            r.kv("n", n);
        }
        IfnCmd::Demo { what } => {
            if what != "zeroset" {
                return Err(Error::Syntax(format!("unknown demo: {what}")));
            }
            let demo = zero_set_demo(cfg)?;
            for case in &demo.cases {
                r.line(format!(
                    "{}: zero={} dominating zero={} strictly larger={} => {}",
                    case.label,
                    case.x_is_zero.holds,
                    case.y_is_zero.holds,
                    case.y_gt_x.holds,
                    if case.pass { "ok" } else { "FAIL" }
                ));
            }
            r.kv("cases", demo.cases.len());
            r.kv("zeroset-ok", fmt_bool(demo.all_pass));
            r.verdict = Some(demo.all_pass);
        }
    }
    Ok(r)
}

/// Chain file: `n t_n SET` per line; `-` for a derived bound.
fn parse_chain_file(path: &Path, nmax: Option<u32>) -> Result<ChainSpec> {
    let text = read_file(path)?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(3, char::is_whitespace);
        let bad = || Error::Syntax(format!("chain line {} needs `n t SET`", lineno + 1));
        let n: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let t_raw = parts.next().ok_or_else(bad)?;
        let t = if t_raw == "-" || t_raw == "none" {
            None
        } else {
            Some(t_raw.parse().map_err(|_| bad())?)
        };
        let family = parse_set(parts.next().ok_or_else(bad)?.trim())?;
        if nmax.is_none_or(|cap| n <= cap) {
            entries.push(ChainEntry { n, t, family });
        }
    }
    ChainSpec::new(entries)
}

fn run_saturate(args: &SaturateArgs, cfg: &Config) -> Result<Report> {
    let chain = parse_chain_file(&args.chainfile, args.nmax)?;
    let result = saturation_witness(&chain, cfg)?;
    let mut r = Report::new();
    for entry in &result.membership {
        r.line(format!(
            "n = {}: distance valuation {} => {}",
            entry.n,
            entry.dist_valuation,
            if entry.verdict.holds { "member" } else { "NOT a member" }
        ));
    }
    if let Some(p) = &args.out {
        let mut csv = String::from("record,a,b,c,d\n");
        for br in &result.witness.branches {
            let _ = writeln!(
                csv,
                "threshold,{},{},,",
                br.n,
                2f64.powi(-(br.start_k as i32))
            );
        }
        let coord = &result.witness.realized.components[0];
        let s = coord.sample(cfg.k_min, cfg.k_max)?;
        for k in cfg.k_min..=cfg.k_max {
            let smp = s.sample_at(k);
            let _ = writeln!(csv, "sample,{k},{},{},{}", s.eps(k), smp.sign, smp.logmag);
        }
        write_file(p, &csv)?;
        r.kv("out", p.display());
    }
    let depth = result.membership.len();
    r.kv("witness-ok", fmt_bool(result.all_hold));
    r.kv("depth", depth);
    r.verdict = Some(result.all_hold);
    Ok(r)
}

/// Ball file: `n r_n NET` per line.
fn parse_ball_file(path: &Path) -> Result<BallChain> {
    let text = read_file(path)?;
    let mut rows: Vec<(u32, f64, Net)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(3, char::is_whitespace);
        let bad = || Error::Syntax(format!("ball line {} needs `n r NET`", lineno + 1));
        let n: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let radius: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let center = net_arg(parts.next().ok_or_else(bad)?)?;
        rows.push((n, radius, center));
    }
    rows.sort_by_key(|r| r.0);
    Ok(BallChain {
        centers: rows.iter().map(|r| r.2.clone()).collect(),
        radii: rows.iter().map(|r| r.1).collect(),
    })
}

fn run_balls(args: &BallsArgs, cfg: &Config) -> Result<Report> {
    let chain = parse_ball_file(&args.ballfile)?;
    let result = nested_balls_witness(&chain, cfg)?;
    let mut r = Report::new();
    let mut csv = String::from("n,radius,exact_ok,grid_valuation,grid_ok\n");
    for check in &result.checks {
        let exact_ok = check.branch_exact.is_some_and(|v| v.holds);
        r.line(format!(
            "ball {} (radius {}): exact {} grid valuation {} => {}",
            check.n,
            check.radius,
            exact_ok,
            check.grid_valuation,
            if check.grid.holds { "ok" } else { "FAIL" }
        ));
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            check.n, check.radius, exact_ok, check.grid_valuation, check.grid.holds
        );
    }
    if let Some(p) = &args.out {
        write_file(p, &csv)?;
        r.kv("out", p.display());
    }
    r.kv("witness-ok", fmt_bool(result.all_hold));
    r.kv("depth", result.checks.len());
    r.verdict = Some(result.all_hold);
    Ok(r)
}

fn run_cauchy(args: &CauchyArgs, cfg: &Config) -> Result<Report> {
    let text = read_file(&args.seqfile)?;
    let seq: Vec<GenNumber> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| Ok(GenNumber::new(net_arg(l)?)))
        .collect::<Result<_>>()?;
    let result = cauchy_limit(&seq, cfg)?;
    let mut r = Report::new();
    for entry in &result.table {
        r.line(format!(
            "j = {}: [[u_j - L]] = {} (valuation {})",
            entry.j, entry.sharp_dist, entry.valuation
        ));
    }
    r.kv("cauchy-ok", "true");
    r.kv("depth", result.depth);
    r.kv("len", seq.len());
    r.verdict = Some(true);
    Ok(r)
}

fn run_mollifier(cmd: &MollifierCmd, cfg: &Config) -> Result<Report> {
    let (order, delta, dim, out, with_diagonal) = match cmd {
        MollifierCmd::Build { order, delta, dim, out } => (*order, *delta, *dim, out, false),
        MollifierCmd::Diagonal { order, delta, out } => (*order, *delta, 1, out, true),
    };
    let tree = build_vanishing(order, delta, cfg.quad_tol)?;
    let table = assemble_generalized(&tree, cfg.k_min, cfg.k_max)?;
    let prefix = out.to_string_lossy();
    let mut r = Report::new();

    // Samples on a fixed 4001-point mesh over the support.
    let mut samples = String::from("x,phi\n");
    for i in 0..4001 {
        let x = -1.0 + 2.0 * i as f64 / 4000.0;
        let _ = writeln!(samples, "{x},{}", tree.eval(x));
    }
    write_file(Path::new(&format!("{prefix}_samples.csv")), &samples)?;

    // Moments with route-disagreement error estimates.
    let report = tree.moment_report(order)?;
    let mut moments = String::from("k,moment,abs_error\n");
    for e in &report {
        let _ = writeln!(moments, "{},{},{}", e.k, e.value, e.error);
    }
    write_file(Path::new(&format!("{prefix}_moments.csv")), &moments)?;

    // Per-level schedule joined with the diagonal seminorms.
    let mut schedule = String::from("n,eta,a,b,l1,m_n,eps_n\n");
    for lvl in &tree.levels {
        let row = &table.rows[lvl.n as usize];
        let _ = writeln!(
            schedule,
            "{},{},{},{},{},{},{}",
            lvl.n, lvl.eta, lvl.a, lvl.b, lvl.l1, row.m_n, row.eps_n
        );
    }
    write_file(Path::new(&format!("{prefix}_schedule.csv")), &schedule)?;

    if with_diagonal {
        let mut thresholds = String::from("n,m_n,eps_n\n");
        for row in &table.rows {
            let _ = writeln!(thresholds, "{},{},{}", row.n, row.m_n, row.eps_n);
        }
        write_file(Path::new(&format!("{prefix}_thresholds.csv")), &thresholds)?;
        let mut checks = String::from("m,k,n_used,value,ok\n");
        for c in &table.checks {
            let _ = writeln!(checks, "{},{},{},{},{}", c.m, c.k, c.n_used, c.value, c.ok);
        }
        write_file(Path::new(&format!("{prefix}_checks.csv")), &checks)?;
        r.kv("checks", table.checks.len());
        r.kv("diagonal-ok", fmt_bool(table.all_ok));
    }

    let mass = report[0].value;
    let l1 = tree.levels.last().map_or(tree.l1_base, |l| l.l1);
    r.line(format!(
        "order {order} bump: mass {mass}, L1 {l1}, {} flattened scales",
        tree.terms(order).len()
    ));
    if dim > 1 {
        let psi = tensorize(&tree, dim)?;
        let tensor_mass = psi.mass()?;
        r.line(format!("tensor mass in dimension {dim}: {tensor_mass}"));
        r.kv("dim", dim);
        r.kv("tensor_mass", tensor_mass);
    }
    r.kv("mass", mass);
    r.kv("l1", l1);
    r.kv("out", &prefix);
    r.verdict = Some(table.all_ok);
    Ok(r)
}
