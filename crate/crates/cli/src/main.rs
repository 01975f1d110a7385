#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use wittkit::ih::triangulations;
use wittkit::ih::{witt_check, FilteredSimplicialComplex, Perversity};
use wittkit::indicial::{
    analytic, check_gap, check_middle_vanishing, indicial_roots, rescale_for_gap, IndicialParams, LinkSpectrum,
};
use wittkit::radial::mellin::presets;
use wittkit::radial::{eigenvalues, mode_reduce, parseval_check, Grid, InnerBc, LogSamples, PARSEVAL_CONSTANT};
use wittkit::resolution::{self, blowdown, check_ifs, iso_check, resolve, CornerComplex};
use wittkit::strata::{self, library, StratifiedSpace};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "wittkit", version, about = "Stratified spaces, intersection homology and model cone analysis")]
struct Cli {
    /// Directory that relative input and output paths are resolved against.
    #[arg(long, global = true, env = "WITTKIT_WORKDIR", default_value = ".")]
    workdir: PathBuf,
    /// Seed recorded in the report and used by any randomized stage.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a stratspace.v1, cornercx.v1 or fscx.v1 file.
    Validate { file: PathBuf },
    /// Resolve a stratified space into a manifold with corners.
    Resolve {
        space: PathBuf,
        #[arg(long, default_value = "cornercx.json")]
        out: PathBuf,
        /// Blow the result back down and compare with the input.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Collapse a corner complex back to a stratified space.
    Blowdown {
        corners: PathBuf,
        #[arg(long, default_value = "stratspace.json")]
        out: PathBuf,
    },
    /// Decide the Witt condition from link triangulations.
    WittCheck(WittArgs),
    /// Indicial roots of the weighted operator for a link spectrum.
    IndicialRoots {
        /// Weight `a`, rational (`3/2`) or decimal.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Dimension of the stratum.
        #[arg(long, default_value_t = 0)]
        b: usize,
        #[arg(long, default_value = "roots.csv")]
        out: PathBuf,
    },
    /// Eigenvalues of the mode-reduced model cone operators.
    ConeSpectrum(ConeArgs),
    /// Mellin-Parseval constancy over test-function pairs.
    MellinCheck(MellinArgs),
    /// Run validate, resolve, witt-check and optionally indicial-roots on one space.
    Report {
        #[arg(long)]
        space: PathBuf,
        #[command(flatten)]
        links: LinkArgs,
        /// Link spectrum CSV for the indicial stage.
        #[arg(long, requires = "a")]
        spectrum: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
    },
    /// Write a built-in space (or with --triangulation, a link triangulation).
    Library {
        /// Name such as `C_T2`; omit to list the names.
        name: Option<String>,
        #[arg(long)]
        triangulation: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LinkArgs {
    /// Triangulation of a link, as `STRATUM_ID=FILE`; repeatable.
    #[arg(long = "link", value_name = "STRATUM_ID=FILE")]
    links: Vec<String>,
    /// Do not fall back to built-in triangulations for links named S1, S2, T2,
    /// C(...) or Susp(...).
    #[arg(long)]
    no_builtin_links: bool,
    #[arg(long, default_value = "lower")]
    perversity: String,
}

#[derive(Args)]
struct WittArgs {
    space: PathBuf,
    #[command(flatten)]
    links: LinkArgs,
    /// Report simplices that meet a stratum only in a proper face.
    #[arg(long)]
    check_flaglike: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Link spectrum CSV with columns lambda,k,kind,mult.
    #[arg(long, conflicts_with = "analytic")]
    spectrum: Option<PathBuf>,
    /// Built-in spectrum S1, S2 or T2 instead of a file.
    #[arg(long)]
    analytic: Option<String>,
    /// Cut-off on λ² for built-in spectra.
    #[arg(long, default_value_t = 12)]
    max_lambda_sq: u64,
    /// Link dimension; required with --spectrum unless given by a space file.
    #[arg(long)]
    f0: Option<usize>,
}

#[derive(Args)]
struct ConeArgs {
    #[arg(long)]
    space: PathBuf,
    /// Singular stratum whose link carries the spectrum; defaults to the first.
    #[arg(long)]
    stratum: Option<String>,
    #[command(flatten)]
    spectrum: SpectrumArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    a: String,
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
    eps_seq: Vec<f64>,
    /// Inner boundary conditions: dirichlet, neumann, robin=<c>.
    #[arg(long, value_delimiter = ',', default_value = "dirichlet,neumann")]
    bc: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    #[arg(long, default_value_t = 4000)]
    points: usize,
    /// Eigenvalues per (mode, ε, bc).
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Only the first this many modes of the spectrum.
    #[arg(long, default_value_t = 8)]
    max_modes: usize,
    /// Dirichlet/Neumann discrepancy allowed at the smallest ε.
    #[arg(long, default_value_t = 1e-3)]
    bc_tol: f64,
    /// Run on the spectrum as given even without a spectral gap.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value = "cone_spectrum.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct MellinArgs {
    /// Pairs `f:g` of presets; defaults to five fixed pairs.
    #[arg(long, value_delimiter = ',')]
    pairs: Vec<String>,
    #[arg(long, default_value = "s_exp:s_exp")]
    reference: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = -0.5)]
    eta: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -50.0)]
    y_min: f64,
    #[arg(long, default_value_t = 50.0)]
    y_max: f64,
    #[arg(long, default_value_t = 5001)]
    samples: usize,
    #[arg(long, default_value_t = 80.0)]
    xi_max: f64,
    #[arg(long, default_value_t = 3201)]
    n_xi: usize,
}

#[derive(Serialize)]
struct Stage {
    name: String,
    passed: bool,
    details: Value,
}

#[derive(Serialize)]
struct Report {
    command: String,
    passed: bool,
    seed: u64,
    /// Input file -> schema it was read as.
    schemas: BTreeMap<String, String>,
    tolerances: BTreeMap<String, f64>,
    stages: Vec<Stage>,
    /// Wall-clock seconds per stage; the only non-deterministic block.
    timing: BTreeMap<String, f64>,
}

struct Ctx {
    workdir: PathBuf,
    report: Report,
}

impl Ctx {
    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.workdir.join(p)
        }
    }

    fn consumed(&mut self, p: &Path, schema: &str) {
        self.report.schemas.insert(p.display().to_string(), schema.to_string());
    }

    fn tolerance(&mut self, name: &str, value: f64) {
        self.report.tolerances.insert(name.to_string(), value);
    }

    /// Runs one stage, tagging any error with its name.
    fn stage<T>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<(bool, Value, T)>) -> Result<T> {
        let start = Instant::now();
        let (passed, details, out) = f(self).with_context(|| format!("stage `{name}`"))?;
        self.report.timing.insert(name.to_string(), start.elapsed().as_secs_f64());
        self.report.stages.push(Stage {
            name: name.to_string(),
            passed,
            details,
        });
        Ok(out)
    }

    fn write(&self, p: &Path, text: &str) -> Result<PathBuf> {
        let path = self.path(p);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    fn read_space(&mut self, p: &Path) -> Result<StratifiedSpace> {
        let space = StratifiedSpace::read(&self.path(p))?;
        self.consumed(p, strata::SCHEMA);
        Ok(space)
    }
}

fn schema_of(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text)?;
    Ok(v.get("schema").and_then(Value::as_str).unwrap_or(strata::SCHEMA).to_string())
}

fn cmd_validate(ctx: &mut Ctx, file: &Path) -> Result<()> {
    let path = ctx.path(file);
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let schema = schema_of(&text).with_context(|| format!("parsing {}", path.display()))?;
    ctx.consumed(file, &schema);
    ctx.stage("validate", |_| {
        let report = match schema.as_str() {
            s if s == strata::SCHEMA => strata::validate(&StratifiedSpace::read(&path)?),
            s if s == resolution::SCHEMA => check_ifs(&CornerComplex::read(&path)?),
            s if s == wittkit::ih::complex::SCHEMA => {
                let cx = FilteredSimplicialComplex::read(&path)?;
                let mut r = wittkit::ValidationReport::new(cx.name.clone());
                match cx.validate() {
                    Ok(()) => r.pass("filtered complex"),
                    Err(e) => r.fail("filtered complex", e.to_string()),
                }
                for w in cx.flaglike_warnings() {
                    r.note("flag-like", w);
                }
                r
            }
            other => bail!("unknown schema `{other}`"),
        };
        Ok((report.passed(), serde_json::to_value(&report)?, ()))
    })
}

fn cmd_resolve(ctx: &mut Ctx, space: &Path, out: &Path, roundtrip: bool) -> Result<()> {
    let x = ctx.read_space(space)?;
    let cc = ctx.stage("resolve", |ctx| {
        let cc = resolve(&x)?;
        let r = check_ifs(&cc);
        ctx.write(out, &cc.to_json()?)?;
        let details = json!({
            "output": out.display().to_string(),
            "hypersurfaces": cc.hypersurfaces.len(),
            "max_corner_codim": cc.max_corner_codim(),
            "check_ifs": r,
        });
        Ok((r.passed(), details, cc))
    })?;
    if roundtrip {
        ctx.stage("roundtrip", |_| {
            let back = blowdown(&cc)?;
            let iso = iso_check(&back, &x);
            Ok((iso, json!({ "iso_check": iso }), ()))
        })?;
    }
    Ok(())
}

fn cmd_blowdown(ctx: &mut Ctx, corners: &Path, out: &Path) -> Result<()> {
    let cc = CornerComplex::read(&ctx.path(corners))?;
    ctx.consumed(corners, resolution::SCHEMA);
    ctx.stage("blowdown", |ctx| {
        let x = blowdown(&cc)?;
        ctx.write(out, &x.to_json()?)?;
        let r = strata::validate(&x);
        Ok((r.passed(), json!({ "output": out.display().to_string(), "space": x.name, "validate": r }), ()))
    })
}

fn gather_links(
    ctx: &mut Ctx,
    x: &StratifiedSpace,
    args: &LinkArgs,
) -> Result<BTreeMap<String, FilteredSimplicialComplex>> {
    let mut links = if args.no_builtin_links {
        BTreeMap::new()
    } else {
        triangulations::link_triangulations(x)
    };
    for spec in &args.links {
        let (id, file) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("--link expects STRATUM_ID=FILE, got `{spec}`"))?;
        if x.stratum(id).is_none() {
            bail!("--link names unknown stratum `{id}`");
        }
        let file = Path::new(file);
        let cx = FilteredSimplicialComplex::read(&ctx.path(file))?;
        ctx.consumed(file, wittkit::ih::complex::SCHEMA);
        links.insert(id.to_string(), cx);
    }
    Ok(links)
}

fn witt_stage(ctx: &mut Ctx, x: &StratifiedSpace, args: &LinkArgs, flaglike: bool) -> Result<bool> {
    let p = Perversity::parse(&args.perversity)?;
    let links = gather_links(ctx, x, args)?;
    ctx.stage("witt-check", |_| {
        let mut v = witt_check(x, &links, &p)?;
        if !flaglike {
            v.warnings.clear();
        }
        let details = json!({ "space": x.name, "perversity": args.perversity, "verdict": v });
        Ok((v.is_witt, details, v.is_witt))
    })
}

fn load_spectrum(ctx: &mut Ctx, args: &SpectrumArgs, f0_hint: Option<usize>) -> Result<LinkSpectrum> {
    match (&args.spectrum, &args.analytic) {
        (Some(file), None) => {
            let f0 = args
                .f0
                .or(f0_hint)
                .ok_or_else(|| anyhow!("--f0 is required to read a spectrum file"))?;
            let s = LinkSpectrum::read_csv(&ctx.path(file), f0)?;
            ctx.consumed(file, "spectrum.csv");
            Ok(s)
        }
        (None, Some(name)) => {
            let s = analytic::by_name(name, args.max_lambda_sq)
                .ok_or_else(|| anyhow!("no built-in spectrum `{name}`; use S1, S2 or T2"))?;
            if let Some(f0) = args.f0.or(f0_hint) {
                if f0 != s.f0 {
                    bail!("built-in spectrum `{name}` has f0 = {}, not {f0}", s.f0);
                }
            }
            Ok(s)
        }
        _ => bail!("give exactly one of --spectrum or --analytic"),
    }
}

fn roots_stage(ctx: &mut Ctx, s: &LinkSpectrum, a: &str, b: usize, out: Option<&Path>) -> Result<()> {
    let p = IndicialParams::parse_weight(a, s.f0, b)?;
    ctx.tolerance("reflection", 1e-12);
    ctx.stage("indicial-roots", |ctx| {
        let r = indicial_roots(&p, s)?;
        let axis = r.reflection_sum();
        let mut values = r.sorted_values();
        values.sort_by(f64::total_cmp);
        let mut reflected: Vec<f64> = values.iter().map(|v| axis - v).collect();
        reflected.sort_by(f64::total_cmp);
        let symmetric = values.iter().zip(&reflected).all(|(x, y)| (x - y).abs() < 1e-12);
        if let Some(out) = out {
            ctx.write(out, &r.to_csv()?)?;
        }
        let details = json!({
            "spectrum": s.name,
            "f0": s.f0,
            "a": a,
            "roots": r.roots.len(),
            "exact": r.is_exact(),
            "reflection_axis": axis,
            "reflection_symmetric": symmetric,
            "spectral_gap": check_gap(s),
            "middle_degree_vanishing": check_middle_vanishing(s),
            "output": out.map(|p| p.display().to_string()),
        });
        Ok((symmetric, details, ()))
    })
}

fn parse_bc(text: &str) -> Result<InnerBc> {
    match text.trim() {
        "dirichlet" => Ok(InnerBc::Dirichlet),
        "neumann" => Ok(InnerBc::Neumann),
        other => match other.strip_prefix("robin=") {
            Some(c) => Ok(InnerBc::ScaledRobin {
                c: c.parse().with_context(|| format!("bad Robin constant `{c}`"))?,
            }),
            None => bail!("unknown boundary condition `{other}`; use dirichlet, neumann or robin=<c>"),
        },
    }
}

fn bc_label(bc: &InnerBc) -> String {
    match bc {
        InnerBc::ScaledRobin { c } => format!("robin={c}"),
        other => other.as_str().to_string(),
    }
}

fn cmd_cone_spectrum(ctx: &mut Ctx, args: &ConeArgs) -> Result<()> {
    let x = ctx.read_space(&args.space)?;
    let stratum = match &args.stratum {
        Some(id) => x.stratum(id).ok_or_else(|| anyhow!("no stratum `{id}` in {}", x.name))?,
        None => x
            .singular_strata()
            .next()
            .ok_or_else(|| anyhow!("{} has no singular stratum", x.name))?,
    };
    let link = stratum
        .link
        .as_ref()
        .ok_or_else(|| anyhow!("stratum `{}` is regular", stratum.id))?;
    let (f0, b, stratum_id) = (link.total_dim, stratum.dim, stratum.id.clone());
    let given = load_spectrum(ctx, &args.spectrum, Some(f0))?;
    if given.f0 != f0 {
        bail!("spectrum has f0 = {}, the link of `{stratum_id}` has dimension {f0}", given.f0);
    }
    if args.eps_seq.is_empty() || args.eps_seq.windows(2).any(|w| !(w[1] < w[0])) || args.eps_seq[0] <= 0.0 {
        bail!("--eps-seq must be positive and strictly decreasing");
    }
    if !(args.bc_tol > 0.0) {
        bail!("--bc-tol must be positive");
    }
    let bcs: Vec<InnerBc> = args.bc.iter().map(|b| parse_bc(b)).collect::<Result<_>>()?;
    let p = IndicialParams::parse_weight(&args.a, f0, b)?;
    ctx.tolerance("bc_discrepancy", args.bc_tol);

    let s = ctx.stage("gap", |_| {
        let gap = check_gap(&given);
        let (s, c) = if gap || args.force { (given.clone(), 1.0) } else { rescale_for_gap(&given) };
        let details = json!({ "spectral_gap": gap, "forced": args.force, "scaling": c });
        Ok((true, details, s))
    })?;

    ctx.stage("cone-spectrum", |ctx| {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["mode_id", "eps", "bc", "index", "eigenvalue"])?;
        let has_both = bcs.contains(&InnerBc::Dirichlet) && bcs.contains(&InnerBc::Neumann);
        let mut modes = Vec::new();
        let mut all_pass = true;
        for (i, m) in s.modes.iter().take(args.max_modes).enumerate() {
            let specs = mode_reduce(&p, m)?;
            for spec in &specs {
                let mode_id = if specs.len() == 1 {
                    i.to_string()
                } else {
                    format!("{i}.{}", serde_json::to_value(spec.branch)?.as_str().unwrap_or("?"))
                };
                let mut discrepancy = Vec::new();
                for &eps in &args.eps_seq {
                    let grid = Grid::log_uniform(eps, args.t_max, args.points)?;
                    let mut by_bc = BTreeMap::new();
                    for bc in &bcs {
                        let r = eigenvalues(spec, &grid, *bc, args.count)?;
                        for (j, e) in r.eigenvalues.iter().enumerate() {
                            w.write_record([mode_id.clone(), format!("{eps:e}"), bc_label(bc), j.to_string(), format!("{e:.12e}")])?;
                        }
                        by_bc.insert(bc_label(bc), r.eigenvalues);
                    }
                    if has_both {
                        let d = by_bc["dirichlet"]
                            .iter()
                            .zip(&by_bc["neumann"])
                            .map(|(a, b)| (a - b).abs() / a.abs())
                            .fold(0.0, f64::max);
                        discrepancy.push(d);
                    }
                }
                let passed = !has_both
                    || (discrepancy.windows(2).all(|w| w[1] < w[0]) && discrepancy.last().is_some_and(|d| *d < args.bc_tol));
                all_pass &= passed;
                modes.push(json!({
                    "mode_id": mode_id,
                    "orders": spec.orders(),
                    "branch": spec.branch,
                    "bc_discrepancy": discrepancy,
                    "passed": passed,
                }));
            }
        }
        let bytes = w.into_inner().map_err(|e| anyhow!("csv: {e}"))?;
        ctx.write(&args.out, &String::from_utf8(bytes)?)?;
        let details = json!({
            "stratum": stratum_id,
            "f0": f0,
            "a": args.a,
            "eps_seq": args.eps_seq,
            "bc": args.bc,
            "points": args.points,
            "t_max": args.t_max,
            "modes": modes,
            "output": args.out.display().to_string(),
        });
        Ok((all_pass, details, ()))
    })
}

fn preset(name: &str) -> Result<fn(f64) -> f64> {
    presets::by_name(name).ok_or_else(|| anyhow!("unknown preset `{name}`; available: {}", presets::NAMES.join(", ")))
}

fn split_pair(text: &str) -> Result<(String, String)> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("pairs are written `f:g`, got `{text}`"))?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

fn cmd_mellin_check(ctx: &mut Ctx, args: &MellinArgs) -> Result<()> {
    let pairs: Vec<(String, String)> = if args.pairs.is_empty() {
        [("s_exp", "s2_exp"), ("s_gauss", "s_gauss"), ("s_rational", "s_exp"), ("s2_exp", "s_exp2"), ("s_gauss", "s_rational")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    } else {
        args.pairs.iter().map(|p| split_pair(p)).collect::<Result<_>>()?
    };
    if !(args.tol > 0.0) {
        bail!("--tol must be positive");
    }
    ctx.tolerance("parseval_relative", args.tol);
    let sample = |name: &str| -> Result<LogSamples> { Ok(LogSamples::sample(preset(name)?, args.y_min, args.y_max, args.samples)?) };
    let (r1, r2) = split_pair(&args.reference)?;
    let c = ctx.stage("calibrate", |_| {
        let p = parseval_check(&sample(&r1)?, &sample(&r2)?, args.eta, args.xi_max, args.n_xi)?;
        let details = json!({ "reference": args.reference, "constant": p.ratio, "one_over_two_pi": PARSEVAL_CONSTANT });
        Ok((p.ratio.is_finite(), details, p.ratio))
    })?;
    ctx.stage("parseval", |_| {
        let mut rows = Vec::new();
        let mut worst = 0.0f64;
        for (a, b) in &pairs {
            let p = parseval_check(&sample(a)?, &sample(b)?, args.eta, args.xi_max, args.n_xi)?;
            let dev = (p.ratio / c - 1.0).abs();
            worst = worst.max(dev);
            rows.push(json!({ "pair": format!("{a}:{b}"), "lhs": p.lhs, "rhs": p.rhs, "ratio": p.ratio, "deviation": dev }));
        }
        Ok((worst < args.tol, json!({ "eta": args.eta, "pairs": rows, "max_deviation": worst }), ()))
    })
}

fn cmd_report(ctx: &mut Ctx, space: &Path, links: &LinkArgs, spectrum: Option<&Path>, a: Option<&str>) -> Result<()> {
    let x = ctx.read_space(space)?;
    let valid = ctx.stage("validate", |_| {
        let r = strata::validate(&x);
        Ok((r.passed(), serde_json::to_value(&r)?, r.passed()))
    })?;
    if !valid {
        return Ok(());
    }
    let cc = ctx.stage("resolve", |_| {
        let cc = resolve(&x)?;
        let r = check_ifs(&cc);
        Ok((r.passed(), json!({ "max_corner_codim": cc.max_corner_codim(), "check_ifs": r }), cc))
    })?;
    ctx.stage("roundtrip", |_| {
        let iso = iso_check(&blowdown(&cc)?, &x);
        Ok((iso, json!({ "iso_check": iso }), ()))
    })?;
    let is_witt = witt_stage(ctx, &x, links, true)?;
    if let (Some(file), Some(a)) = (spectrum, a) {
        let f0 = x.singular_strata().next().and_then(|s| s.link.as_ref()).map(|l| l.total_dim);
        let args = SpectrumArgs {
            spectrum: Some(file.to_path_buf()),
            analytic: None,
            max_lambda_sq: 0,
            f0: None,
        };
        let s = load_spectrum(ctx, &args, f0)?;
        roots_stage(ctx, &s, a, 0, None)?;
        ctx.stage("cheeger-consistency", |_| {
            let vanishing = check_middle_vanishing(&s);
            let agree = vanishing == is_witt;
            Ok((agree, json!({ "middle_degree_vanishing": vanishing, "witt": is_witt }), ()))
        })?;
    }
    Ok(())
}

fn cmd_library(ctx: &mut Ctx, name: Option<&str>, triangulation: bool, out: Option<&Path>) -> Result<()> {
    ctx.stage("library", |ctx| {
        let Some(name) = name else {
            let names: Vec<&str> = library::all().into_iter().map(|(n, _)| n).collect();
            return Ok((true, json!({ "spaces": names, "triangulations": ["S1", "S2", "T2", "C(...)", "Susp(...)"] }), ()));
        };
        let text = if triangulation {
            triangulations::for_space_name(name)
                .ok_or_else(|| anyhow!("no built-in triangulation `{name}`"))?
                .to_json()?
        } else {
            library::all()
                .into_iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| anyhow!("no built-in space `{name}`"))?
                .1
                .to_json()?
        };
        match out {
            Some(out) => {
                ctx.write(out, &text)?;
            }
            None => eprintln!("{text}"),
        }
        Ok((true, json!({ "name": name, "output": out.map(|p| p.display().to_string()) }), ()))
    })
}

fn run(cli: &Cli, ctx: &mut Ctx) -> Result<()> {
    match &cli.command {
        Command::Validate { file } => cmd_validate(ctx, file),
        Command::Resolve { space, out, roundtrip } => cmd_resolve(ctx, space, out, *roundtrip),
        Command::Blowdown { corners, out } => cmd_blowdown(ctx, corners, out),
        Command::WittCheck(args) => {
            let x = ctx.read_space(&args.space)?;
            witt_stage(ctx, &x, &args.links, args.check_flaglike).map(|_| ())
        }
        Command::IndicialRoots { a, spectrum, b, out } => {
            let s = load_spectrum(ctx, spectrum, None)?;
            roots_stage(ctx, &s, a, *b, Some(out))
        }
        Command::ConeSpectrum(args) => cmd_cone_spectrum(ctx, args),
        Command::MellinCheck(args) => cmd_mellin_check(ctx, args),
        Command::Report { space, links, spectrum, a } => cmd_report(ctx, space, links, spectrum.as_deref(), a.as_deref()),
        Command::Library { name, triangulation, out } => cmd_library(ctx, name.as_deref(), *triangulation, out.as_deref()),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Resolve { .. } => "resolve",
        Command::Blowdown { .. } => "blowdown",
        Command::WittCheck(_) => "witt-check",
        Command::IndicialRoots { .. } => "indicial-roots",
        Command::ConeSpectrum(_) => "cone-spectrum",
        Command::MellinCheck(_) => "mellin-check",
        Command::Report { .. } => "report",
        Command::Library { .. } => "library",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx {
        workdir: cli.workdir.clone(),
        report: Report {
            command: command_name(&cli.command).to_string(),
            passed: false,
            seed: cli.seed,
            schemas: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            stages: Vec::new(),
            timing: BTreeMap::new(),
        },
    };
    if let Err(e) = run(&cli, &mut ctx) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ctx.report.passed = ctx.report.stages.iter().all(|s| s.passed);
    let text = match serde_json::to_string_pretty(&ctx.report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(p) = &cli.report {
        if let Err(e) = ctx.write(p, &text) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    if ctx.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
