//! Command-line front end. Every subcommand is a thin composition of library
//! calls; output is a short table or, with `--json`, a JSON document.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::json;

use crate::chain::{filtered_codes, height_filtration, homological_code, toric_complex, ChainComplex, ComplexJson, GradeLabel, Threshold};
use crate::corpus::{self, Budgets, Status};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::gpoly::{affine_points, zeta_counts, zeta_counts_space, zeta_series, GradedPolynomial, Hypersurface};
use crate::io::{parse_json, read_json, to_json_string, write_json, CensusFile, CodeJson, CssJson, PointsFile};
use crate::lincode::{evaluation_code, macwilliams_dual, wprm_plane_report, InnerProduct};
use crate::orbifold::{bound_report, chi_orb, epsilon, parse_rational, EpsilonSource};
use crate::quantum::{css_from_pair, css_from_self_orthogonal, quantum_distance, upper_bound_from_witness, DistanceKind};
use crate::wgeom::{
    count_wp_points_formula, enumerate_wp_points, singular_census, weighted_height, HeightConvention, StabilizerConvention,
    WeightSystem,
};

pub const ENUM_BUDGET_ENV: &str = "GRADEDCODES_ENUM_BUDGET";
pub const DISTANCE_BUDGET_ENV: &str = "GRADEDCODES_DISTANCE_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "gradedcodes", version, about = "Weighted projective codes and their quantum lifts")]
pub struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on enumerated tuples (overrides GRADEDCODES_ENUM_BUDGET).
    #[arg(long, global = true, value_parser = parse_budget)]
    enum_budget: Option<u128>,
    /// Cap on enumerated codewords (overrides GRADEDCODES_DISTANCE_BUDGET).
    #[arg(long, global = true, value_parser = parse_budget)]
    distance_budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

fn parse_budget(s: &str) -> std::result::Result<u128, String> {
    let n: u128 = s.replace('_', "").parse().map_err(|e| format!("{e}"))?;
    if n == 0 {
        return Err("budget must be positive".into());
    }
    Ok(n)
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Comma-separated weights, e.g. 1,2,3.
    #[arg(long)]
    weights: String,
    /// Field spec: q=<order> or p=<p>,e=<e>,mod=<c0,...,ce>.
    #[arg(long)]
    field: String,
}

impl SpaceArgs {
    fn load(&self) -> Result<(WeightSystem, Field)> {
        Ok((WeightSystem::parse(&self.weights)?, Field::parse(&self.field)?))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of GF(q)-points of a weighted projective space.
    Count {
        #[command(flatten)]
        space: SpaceArgs,
        /// Also enumerate and compare.
        #[arg(long)]
        enumerate: bool,
    },
    /// List canonical point representatives.
    Points {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value = "index-lift")]
        height: HeightConvention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Points with nontrivial stabilizers.
    Census {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value = "geometric")]
        convention: StabilizerConvention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Points of a hypersurface.
    Surface {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        poly: String,
        #[arg(long, conflicts_with = "points")]
        count: bool,
        #[arg(long)]
        points: bool,
        /// Affine solutions instead of projective points.
        #[arg(long)]
        affine: bool,
        /// With --affine, fix this coordinate to 1.
        #[arg(long, requires = "affine")]
        chart: Option<usize>,
        /// Reject inhomogeneous polynomials.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point counts over extensions and the truncated zeta series.
    Zeta {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, required_unless_present = "space_only")]
        poly: Option<String>,
        /// Count the whole space.
        #[arg(long = "space", id = "space_only")]
        space_only: bool,
        #[arg(long)]
        depth: u32,
    },
    /// Classical codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// CSS quantum codes.
    #[command(subcommand)]
    Css(CssCmd),
    /// Chain complexes.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Singleton-type bounds with the orbifold correction.
    Bound {
        #[arg(long)]
        css: PathBuf,
        #[arg(long, conflicts_with = "epsilon")]
        census: Option<PathBuf>,
        /// Exact rational, e.g. 1/2.
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<i64>,
    },
    /// Replay the regression corpus.
    Fixtures {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Run only the named fixtures.
        #[arg(long)]
        only: Vec<String>,
        /// Overwrite the expected values with the computed ones.
        #[arg(long)]
        bless: bool,
    },
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Evaluation code of degree d on all points of a space or hypersurface.
    Build {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        surface: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance, weight distribution, dual and orthogonality.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "euclidean")]
        ip: InnerProduct,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form dimension estimate beside the true rank on WP(1,w1,w2).
    Plane {
        #[arg(long)]
        w1: u32,
        #[arg(long)]
        w2: u32,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        field: String,
    },
}

#[derive(Subcommand, Debug)]
enum CssCmd {
    /// CSS code of a self-orthogonal code.
    Lift {
        file: PathBuf,
        #[arg(long, default_value = "euclidean")]
        ip: InnerProduct,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSS code of a pair with C2^perp inside C1.
    Pair {
        c1: PathBuf,
        c2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantum distance, exact when within budget.
    Distance {
        file: PathBuf,
        #[arg(long, value_parser = parse_budget)]
        budget: Option<u128>,
        /// Comma-separated candidate logical operator for an upper bound.
        #[arg(long)]
        witness: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ChainCmd {
    Validate { file: PathBuf },
    Homology { file: PathBuf },
    /// CSS code of one degree; reads stdin when the file is `-` or absent.
    Code {
        file: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
    /// The L x L toric complex over GF(2).
    Toric {
        #[arg(long = "L", short = 'L')]
        l: usize,
    },
    /// Height filtration of a points file.
    Filter {
        file: PathBuf,
        /// Ascending, comma-separated; `inf` allowed.
        #[arg(long)]
        thresholds: String,
        /// Also build the evaluation codes of this degree on each level.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Keep bigrades (i, j) with j <= k.
    Bigraded {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
}

struct Ctx<'a> {
    json: bool,
    budgets: Budgets,
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, value: &T, table: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            self.out.write_all(to_json_string(value)?.as_bytes())?;
        } else {
            writeln!(self.out, "{}", table())?;
        }
        Ok(())
    }

    /// Artifacts go to `out` when given, otherwise to stdout as JSON.
    fn artifact<T: Serialize>(&mut self, value: &T, out: &Option<PathBuf>, summary: String) -> Result<()> {
        match out {
            Some(p) => {
                write_json(p, value)?;
                if self.json {
                    self.out.write_all(to_json_string(&json!({ "written": p, "summary": summary }))?.as_bytes())?;
                } else {
                    writeln!(self.out, "{summary} -> {}", p.display())?;
                }
            }
            None => self.out.write_all(to_json_string(value)?.as_bytes())?,
        }
        Ok(())
    }
}

fn env_budget(var: &str, default: u128) -> Result<u128> {
    match std::env::var(var) {
        Ok(v) => parse_budget(&v).map_err(|e| Error::Usage(format!("{var}: {e}"))),
        Err(_) => Ok(default),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = (|| {
        let defaults = Budgets::default();
        let budgets = Budgets {
            enumeration: cli.enum_budget.map_or_else(|| env_budget(ENUM_BUDGET_ENV, defaults.enumeration), Ok)?,
            distance: cli.distance_budget.map_or_else(|| env_budget(DISTANCE_BUDGET_ENV, defaults.distance), Ok)?,
        };
        let mut ctx = Ctx { json: cli.json, budgets, stdin, out };
        dispatch(cli.command, &mut ctx)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32> {
    match cmd {
        Command::Count { space, enumerate } => {
            let (ws, f) = space.load()?;
            let n = count_wp_points_formula(&ws, f.q() as u64);
            let enumerated = if enumerate { Some(enumerate_wp_points(&ws, &f, ctx.budgets.enumeration)?.len()) } else { None };
            if enumerated.is_some_and(|m| m as u128 != n) {
                return Err(Error::Invariant(format!("formula {n} vs enumeration {}", enumerated.unwrap())));
            }
            let v = json!({
                "weights": ws.weights(), "field": f.spec_string(), "well_formed": ws.well_formed(),
                "count": num(n), "enumerated": enumerated,
            });
            ctx.emit(&v, || n.to_string())?;
        }
        Command::Points { space, height, out } => {
            let (ws, f) = space.load()?;
            let pts = enumerate_wp_points(&ws, &f, ctx.budgets.enumeration)?;
            let file = PointsFile::new(&f, &ws, &pts, height);
            if out.is_some() || ctx.json {
                ctx.artifact(&file, &out, format!("{} points", pts.len()))?;
            } else {
                for r in &file.points {
                    writeln!(ctx.out, "{:?}  kS={} stab={} orbit={} height={}^(1/{})", r.rep, r.k_s, r.stab_arith, r.orbit, r.height.lift, r.height.w)?;
                }
                writeln!(ctx.out, "{} points", pts.len())?;
            }
        }
        Command::Census { space, convention, out } => {
            let (ws, f) = space.load()?;
            let pts = enumerate_wp_points(&ws, &f, ctx.budgets.enumeration)?;
            let data = singular_census(&pts, &ws, &f, convention);
            let eps = epsilon(&data)?;
            let file = CensusFile {
                field: Some(f.spec_string()),
                weights: Some(ws.weights().to_vec()),
                well_formed: Some(ws.well_formed()),
                data,
            };
            if out.is_some() || ctx.json {
                ctx.artifact(&file, &out, format!("{} singular points, epsilon {eps}", file.data.entries.len()))?;
            } else {
                for e in &file.data.entries {
                    writeln!(ctx.out, "{:?}  |G|={}  orbits={}", e.point, e.order, e.orbits)?;
                }
                writeln!(ctx.out, "epsilon = {eps}")?;
            }
        }
        Command::Surface { space, poly, count, points, affine, chart, strict, out } => {
            surface(ctx, space, &poly, count || !points, affine, chart, strict, out)?;
        }
        Command::Zeta { space, poly, space_only, depth } => {
            let (ws, f) = space.load()?;
            let counts = match (&poly, space_only) {
                (_, true) => zeta_counts_space(&ws, f.q() as u64, depth),
                (Some(p), false) => {
                    let g = GradedPolynomial::parse(p, &f, Some(ws.len()))?;
                    zeta_counts(&Hypersurface::new_lenient(ws.clone(), g)?, depth, ctx.budgets.enumeration)?
                }
                (None, false) => return Err(Error::Usage("need --poly or --space".into())),
            };
            let series: Vec<String> = zeta_series(&counts).iter().map(|c| c.to_string()).collect();
            let v = json!({
                "weights": ws.weights(), "field": f.spec_string(), "depth": depth,
                "counts": counts.iter().map(|&c| num(c)).collect::<Vec<_>>(), "series": series,
            });
            ctx.emit(&v, || {
                let c: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                format!("N = {}\nZ = {}", c.join(", "), series.join(", "))
            })?;
        }
        Command::Code(c) => code(ctx, c)?,
        Command::Css(c) => css(ctx, c)?,
        Command::Chain(c) => chain(ctx, c)?,
        Command::Bound { css, census, epsilon: eps, chi } => bound(ctx, &css, census, eps, chi)?,
        Command::Fixtures { dir, only, bless } => return fixtures(ctx, dir, &only, bless),
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn surface(
    ctx: &mut Ctx,
    space: SpaceArgs,
    poly: &str,
    count_only: bool,
    affine: bool,
    chart: Option<usize>,
    strict: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let (ws, f) = space.load()?;
    let g = GradedPolynomial::parse(poly, &f, Some(ws.len()))?;
    if affine {
        let pts = affine_points(&g, chart, ctx.budgets.enumeration)?;
        let v = json!({
            "mode": "affine", "chart": chart, "field": f.spec_string(), "polynomial": g.to_string(),
            "budget": num(ctx.budgets.enumeration), "count": pts.len(),
            "points": if count_only { None } else { Some(&pts) },
        });
        return ctx.emit(&v, || {
            let mut s: Vec<String> = if count_only { vec![] } else { pts.iter().map(|p| format!("{p:?}")).collect() };
            s.push(pts.len().to_string());
            s.join("\n")
        });
    }
    let h = if strict { Hypersurface::new(ws.clone(), g)? } else { Hypersurface::new_lenient(ws.clone(), g)? };
    let q = f.q() as u128;
    let serre = h.serre_bound().ok().map(num);
    if count_only {
        let n = h.count(ctx.budgets.enumeration)?;
        let v = json!({
            "mode": "projective", "weights": ws.weights(), "well_formed": ws.well_formed(), "field": f.spec_string(),
            "polynomial": h.polynomial().to_string(), "homogeneous": h.is_homogeneous(), "term_degrees": h.degrees(),
            "budget": num(ctx.budgets.enumeration), "count": num(n), "serre_bound": serre,
            "residues": { "mod_p": (n % f.p() as u128) as u64, "mod_q": (n % q) as u64 },
        });
        return ctx.emit(&v, || n.to_string());
    }
    let pts = h.points(ctx.budgets.enumeration)?;
    let mut file = PointsFile::new(&f, &ws, &pts, HeightConvention::IndexLift);
    file.surface = Some(h.polynomial().to_string());
    if out.is_some() || ctx.json {
        ctx.artifact(&file, &out, format!("{} points", pts.len()))
    } else {
        for p in &pts {
            writeln!(ctx.out, "{:?}", p.rep)?;
        }
        writeln!(ctx.out, "{} points", pts.len())?;
        Ok(())
    }
}

/// Counts in JSON; they fit in u64 whenever they were enumerated.
fn num(n: u128) -> u64 {
    u64::try_from(n).unwrap_or(u64::MAX)
}

fn distribution_json(d: &std::collections::BTreeMap<usize, impl ToString>) -> serde_json::Value {
    d.iter().map(|(w, c)| (w.to_string(), json!(c.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn code(ctx: &mut Ctx, cmd: CodeCmd) -> Result<()> {
    match cmd {
        CodeCmd::Build { space, degree, surface, out } => {
            let (ws, f) = space.load()?;
            let (pts, surf) = match &surface {
                Some(p) => {
                    let g = GradedPolynomial::parse(p, &f, Some(ws.len()))?;
                    let h = Hypersurface::new_lenient(ws.clone(), g)?;
                    (h.points(ctx.budgets.enumeration)?, Some(h.polynomial().to_string()))
                }
                None => (enumerate_wp_points(&ws, &f, ctx.budgets.enumeration)?, None),
            };
            let mut c = evaluation_code(&ws, degree, &pts, &f)?;
            if let Some(p) = c.provenance.as_mut() {
                p.surface = surf;
            }
            let summary = format!("[{}, {}]", c.length(), c.dimension());
            ctx.artifact(&CodeJson::from_code(&c), &out, summary)?;
        }
        CodeCmd::Analyze { file, ip, out } => {
            let mut c = read_json::<CodeJson>(&file)?.to_code()?;
            c.analyze(ctx.budgets.distance);
            let orth = c.is_self_orthogonal(ip)?;
            let dual = c.dual(ip)?;
            let dual_weights = match (&c.analysis.weight_distribution, ip) {
                (Some(wd), InnerProduct::Euclidean) => Some(distribution_json(&macwilliams_dual(wd, c.length(), c.field().q())?)),
                _ => None,
            };
            let d = c.analysis.distance.expect("analyzed");
            let v = json!({
                "n": c.length(), "k": c.dimension(), "distance": d,
                "weight_distribution": c.analysis.weight_distribution.as_ref().map(distribution_json),
                "inner_product": ip, "self_orthogonal": orth.self_orthogonal, "witness": orth.witness,
                "dual_dimension": dual.dimension(), "dual_weight_distribution": dual_weights,
            });
            if let Some(p) = &out {
                write_json(p, &CodeJson::from_code(&c))?;
            }
            ctx.emit(&v, || {
                let dv = d.value.map_or("-".into(), |x| x.to_string());
                format!(
                    "[{}, {}, {}{}]  self-orthogonal({}): {}",
                    c.length(),
                    c.dimension(),
                    if d.exact { "" } else { "<=" },
                    dv,
                    serde_json::to_value(ip).unwrap().as_str().unwrap_or(""),
                    orth.self_orthogonal
                )
            })?;
        }
        CodeCmd::Plane { w1, w2, degree, field } => {
            let f = Field::parse(&field)?;
            let r = wprm_plane_report(w1, w2, degree, &f, ctx.budgets.enumeration)?;
            ctx.emit(&r, || format!("closed form {}  rank {}  agrees {}", r.closed_form, r.rank, r.agrees))?;
        }
    }
    Ok(())
}

fn css_summary(j: &CssJson) -> String {
    match (j.distance.kind, j.distance.value) {
        (DistanceKind::Exact, Some(d)) => format!("[[{}, {}, {}]]", j.n, j.k, d),
        (DistanceKind::LowerBound, Some(d)) => format!("[[{}, {}, >={}]]", j.n, j.k, d),
        (DistanceKind::UpperBound, Some(d)) => format!("[[{}, {}, <={}]]", j.n, j.k, d),
        _ => format!("[[{}, {}]]", j.n, j.k),
    }
}

fn css(ctx: &mut Ctx, cmd: CssCmd) -> Result<()> {
    match cmd {
        CssCmd::Lift { file, ip, out } => {
            let c = read_json::<CodeJson>(&file)?.to_code()?;
            let mut q = css_from_self_orthogonal(&c, ip)?;
            q.distance = quantum_distance(&q, ctx.budgets.distance);
            let j = CssJson::from_code(&q);
            ctx.artifact(&j, &out, css_summary(&j))?;
        }
        CssCmd::Pair { c1, c2, out } => {
            let a = read_json::<CodeJson>(&c1)?.to_code()?;
            let b = read_json::<CodeJson>(&c2)?.to_code()?;
            let mut q = css_from_pair(&a, &b)?;
            q.distance = quantum_distance(&q, ctx.budgets.distance);
            let j = CssJson::from_code(&q);
            ctx.artifact(&j, &out, css_summary(&j))?;
        }
        CssCmd::Distance { file, budget, witness } => {
            let q = read_json::<CssJson>(&file)?.to_code()?;
            let d = quantum_distance(&q, budget.unwrap_or(ctx.budgets.distance));
            let w = match witness {
                Some(s) => {
                    let v = s
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad entry {x:?}"))))
                        .collect::<Result<Vec<u32>>>()?;
                    Some(upper_bound_from_witness(&q, &v)?)
                }
                None => None,
            };
            let mut j = CssJson::from_code(&q);
            j.distance = d;
            let summary = css_summary(&j);
            ctx.emit(&json!({ "n": q.n(), "k": q.k(), "distance": d, "witness_bound": w }), || match w {
                Some(u) => format!("{summary}  witness <= {}", u.value.unwrap_or(0)),
                None => summary,
            })?;
        }
    }
    Ok(())
}

fn load_complex(path: &Path) -> Result<ChainComplex> {
    ChainComplex::from_json(&read_json::<ComplexJson>(path)?)
}

fn chain(ctx: &mut Ctx, cmd: ChainCmd) -> Result<()> {
    match cmd {
        ChainCmd::Validate { file } => {
            let c = load_complex(&file)?;
            let (lo, hi) = c.degrees();
            let dims: Vec<usize> = (lo..=hi).map(|d| c.dim(d)).collect();
            ctx.emit(&json!({ "valid": true, "degrees": [lo, hi], "dims": dims }), || format!("valid, dims {dims:?}"))?;
        }
        ChainCmd::Homology { file } => {
            let h = load_complex(&file)?.homology()?;
            ctx.emit(&h, || h.betti.iter().map(|(d, b)| format!("H_{d} = {b}")).collect::<Vec<_>>().join("\n"))?;
        }
        ChainCmd::Code { file, degree } => {
            let c = match file {
                Some(p) if p.as_os_str() != "-" => load_complex(&p)?,
                _ => {
                    let mut text = String::new();
                    ctx.stdin.read_to_string(&mut text)?;
                    ChainComplex::from_json(&parse_json(&text)?)?
                }
            };
            let mut q = homological_code(&c, degree)?;
            q.distance = quantum_distance(&q, ctx.budgets.distance);
            let j = CssJson::from_code(&q);
            let summary = css_summary(&j);
            ctx.artifact(&j, &None, summary)?;
        }
        ChainCmd::Toric { l } => {
            let c = toric_complex(l)?;
            ctx.artifact(&c.to_json(), &None, String::new())?;
        }
        ChainCmd::Filter { file, thresholds, degree } => {
            let pf: PointsFile = read_json(&file)?;
            let (f, ws, pts) = pf.load()?;
            let th = thresholds.split(',').map(|t| t.parse()).collect::<Result<Vec<Threshold>>>()?;
            let items: Vec<(GradeLabel, _)> = pts
                .iter()
                .enumerate()
                .map(|(i, p)| (GradeLabel::Int(i as i64), weighted_height(p, &ws, pf.height_convention)))
                .collect();
            let levels = height_filtration(&items, &th)?;
            let codes = match degree {
                Some(d) => Some(filtered_codes(&ws, d, &pts, &levels, &f)?),
                None => None,
            };
            let rows: Vec<serde_json::Value> = levels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let code = codes.as_ref().and_then(|c| c[i].as_ref()).map(|c| json!({ "n": c.length(), "k": c.dimension() }));
                    json!({ "threshold": l.threshold, "dim": l.dim, "members": l.members, "code": code })
                })
                .collect();
            ctx.emit(&json!({ "levels": rows }), || {
                levels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        let code = codes.as_ref().and_then(|c| c[i].as_ref()).map(|c| format!("  code [{}, {}]", c.length(), c.dimension()));
                        format!("t = {}  dim {}{}", l.threshold, l.dim, code.unwrap_or_default())
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
        }
        ChainCmd::Bigraded { file, k } => {
            let c = load_complex(&file)?.filter_bigraded(k)?;
            ctx.artifact(&c.to_json(), &None, String::new())?;
        }
    }
    Ok(())
}

fn bound(ctx: &mut Ctx, css: &Path, census: Option<PathBuf>, eps: Option<String>, chi: Option<i64>) -> Result<()> {
    let mut q = read_json::<CssJson>(css)?.to_code()?;
    if q.distance.kind == DistanceKind::Unknown {
        q.distance = quantum_distance(&q, ctx.budgets.distance);
    }
    let (eps, source, well_formed) = match (census, eps) {
        (Some(p), _) => {
            let c: CensusFile = read_json(&p)?;
            (epsilon(&c.data)?, EpsilonSource::Census { data: c.data }, c.well_formed)
        }
        (None, Some(e)) => (parse_rational(&e)?, EpsilonSource::Manual, None),
        (None, None) => (Rational64::from_integer(0), EpsilonSource::None, None),
    };
    let mut r = bound_report(&q, eps, source)?;
    r.well_formed = well_formed;
    if let Some(chi) = chi {
        let v = match &r.epsilon_source {
            EpsilonSource::Census { data } => chi_orb(chi, data)?,
            _ => Rational64::from_integer(chi) + eps * 2,
        };
        r.chi_orb = Some(v.to_string());
    }
    let verdict = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
    ctx.emit(&r, || {
        format!(
            "n={} k={} d={}  plain {}  epsilon {}  refined {}  satisfies plain: {}  refined: {}",
            r.n,
            r.k,
            r.distance.value.map_or("-".into(), |d| d.to_string()),
            r.plain,
            r.epsilon,
            r.refined,
            verdict(r.satisfies_plain),
            verdict(r.satisfies_refined)
        )
    })
}

fn fixtures(ctx: &mut Ctx, dir: Option<PathBuf>, only: &[String], bless: bool) -> Result<i32> {
    let dir = dir.unwrap_or_else(corpus::default_dir);
    let outcomes = corpus::run(&dir, only, bless, ctx.budgets)?;
    if ctx.json {
        ctx.out.write_all(to_json_string(&outcomes)?.as_bytes())?;
    } else {
        for o in &outcomes {
            writeln!(ctx.out, "{:<8} {}", o.status.to_string(), o.name)?;
            for d in &o.differences {
                writeln!(ctx.out, "         differs at {d}")?;
            }
            for f in &o.findings {
                writeln!(ctx.out, "         {f}")?;
            }
        }
        let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
        writeln!(
            ctx.out,
            "{} passed, {} findings, {} failed",
            count(Status::Pass),
            count(Status::Finding),
            count(Status::Fail)
        )?;
    }
    let failed = outcomes.iter().any(|o| o.status == Status::Fail);
    Ok(if failed && !bless { 1 } else { 0 })
}
