//! Command dispatch, report emission and the `dirmin` argument parser.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify::{
    check_first_order_necessary, openness_falsifier, sample_directional_min, sample_set_min,
    tangent_sufficiency_sets, CertReport, Constraint, OpennessStatus, Sample, Verdict,
};
use crate::error::{Error, Result};
use crate::gallery;
use crate::geometry::Vector;
use crate::mintime::{calmness_ratio, minimal_time, subregularity_ratio, Norm};
use crate::multipliers::{
    fritz_john, fritz_john_problem, kkt_multipliers, stationarity_penalized,
    sufficiency_certificate, LinearizedConstraint, VectorMode,
};
use crate::problem::ProblemFile;
use crate::report::{self, Svg};
use crate::scalarize::{gerstewitz_subdiff, gerstewitz_value, ScalarizationContext};
use crate::sets::{SetOracle, SetSpec};
use crate::tangent::{
    derivative_image, tangent_membership_sampled, tangent_polyhedral, TSchedule, TangentStatus,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Certify,
    CertifySet,
    FirstOrder,
    Tangent,
    Kkt,
    FritzJohn,
    Gerstewitz,
    Mintime,
    Openness,
    Penalized,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Certify,
        Command::CertifySet,
        Command::FirstOrder,
        Command::Tangent,
        Command::Kkt,
        Command::FritzJohn,
        Command::Gerstewitz,
        Command::Mintime,
        Command::Openness,
        Command::Penalized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Certify => "certify",
            Command::CertifySet => "certify-set",
            Command::FirstOrder => "first-order",
            Command::Tangent => "tangent",
            Command::Kkt => "kkt",
            Command::FritzJohn => "fritz-john",
            Command::Gerstewitz => "gerstewitz",
            Command::Mintime => "mintime",
            Command::Openness => "openness",
            Command::Penalized => "penalized",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Exit status class of a finished command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitClass {
    /// Certificate or verdict produced.
    Produced,
    /// Refuted, no multipliers, nonmember, inconclusive.
    Negative,
    Failed,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Produced => 0,
            ExitClass::Negative => 2,
            ExitClass::Failed => 1,
        }
    }
}

/// Command-line overrides applied on top of a problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub weak: bool,
    pub radius: Option<f64>,
    pub levels: Option<usize>,
    pub rays: Option<usize>,
    pub seed: Option<u64>,
    pub norm: Norm,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            weak: false,
            radius: None,
            levels: None,
            rays: None,
            seed: None,
            norm: Norm::L2,
            tol: 1e-9,
        }
    }
}

impl Options {
    fn apply(&self, file: &ProblemFile) -> ProblemFile {
        let mut f = file.clone();
        let mut g = f.grid.unwrap_or_default();
        g.radius = self.radius.or(g.radius);
        g.levels = self.levels.or(g.levels);
        g.rays = self.rays.or(g.rays);
        if g != Default::default() {
            f.grid = Some(g);
        }
        f.seed = self.seed.or(f.seed);
        f
    }
}

/// Result of one command, ready to be written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: String,
    pub label: String,
    pub class: ExitClass,
    pub result: Value,
    pub points: Option<String>,
    pub svg: Option<String>,
}

impl Outcome {
    fn new(command: Command, label: &str, class: ExitClass, result: Value) -> Self {
        Outcome {
            command: command.name().to_string(),
            label: label.to_string(),
            class,
            result,
            points: None,
            svg: None,
        }
    }

    pub fn report_json(&self) -> Result<String> {
        report::to_json(&self.command, &self.label, &self.result)
    }

    /// Writes `<stem>.report.json` and the optional CSV/SVG companions.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        let mut out = vec![report::write_text(dir, &format!("{stem}.report.json"), &self.report_json()?)?];
        if let Some(p) = &self.points {
            out.push(report::write_text(dir, &format!("{stem}.points.csv"), p)?);
        }
        if let Some(s) = &self.svg {
            out.push(report::write_text(dir, &format!("{stem}.svg"), s)?);
        }
        Ok(out)
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn verdict_outcome(command: Command, report: &CertReport, extra: Value) -> Result<Outcome> {
    let (label, class) = match report.verdict {
        Verdict::CertifiedOnGrid => ("certified_on_grid", ExitClass::Produced),
        Verdict::Refuted => ("refuted", ExitClass::Negative),
    };
    let mut result = json!({ "report": report });
    if report.vacuous {
        result["note"] = json!("no grid point is feasible; the certificate is vacuous");
    }
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Ok(Outcome::new(command, label, class, result))
}

fn samples_csv(samples: &[Sample], out_dim: usize) -> String {
    let n = samples.first().map_or(0, |s| s.x.dim());
    let mut header: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    header.extend((0..out_dim).map(|i| format!("d{i}")));
    header.push("feasible".into());
    header.push("violation".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let mut r = s.x.as_slice().to_vec();
            match &s.difference {
                Some(d) => r.extend_from_slice(d.as_slice()),
                None => r.extend(std::iter::repeat_n(f64::NAN, out_dim)),
            }
            r.push(f64::from(u8::from(s.difference.is_some())));
            r.push(f64::from(u8::from(s.violation)));
            r
        })
        .collect();
    report::points_csv(&header, &rows)
}

fn polygons_svg(svg: &mut Svg, oracle: &SetOracle) {
    for p in oracle.polygons() {
        let mut pts = p.vertices().to_vec();
        pts.push(pts[0]);
        svg.polyline(pts, "black");
    }
}

fn samples_svg(samples: &[Sample], xbar: &Vector, oracle: Option<&SetOracle>) -> Option<String> {
    if xbar.dim() != 2 {
        return None;
    }
    let mut svg = Svg::default();
    if let Some(o) = oracle {
        polygons_svg(&mut svg, o);
    }
    for s in samples {
        let color = match (&s.difference, s.violation) {
            (_, true) => "red",
            (Some(_), false) => "green",
            (None, _) => "lightgray",
        };
        svg.point([s.x[0], s.x[1]], color);
    }
    svg.point([xbar[0], xbar[1]], "blue");
    Some(svg.render())
}

/// Runs `command` on `file` after applying `opts`.
pub fn execute(command: Command, file: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let file = opts.apply(file);
    match command {
        Command::Certify => {
            let p = file.problem()?;
            let (report, samples) = sample_directional_min(&p, opts.weak)?;
            let oracle = match &p.constraint {
                Constraint::Set { set } => Some(set.compile()?),
                _ => None,
            };
            let mut o = verdict_outcome(
                command,
                &report,
                json!({ "objective": p.f.describe(), "xbar": p.xbar }),
            )?;
            o.points = Some(samples_csv(&samples, p.f.output_dim()));
            o.svg = samples_svg(&samples, &p.xbar, oracle.as_ref());
            Ok(o)
        }
        Command::CertifySet => {
            let m = file.set_spec()?;
            let xbar = file.xbar()?;
            let k = file.k_cone(file.dim)?;
            let l = file.l_set()?;
            let grid = file.grid_spec();
            let (report, samples) = sample_set_min(&m, &xbar, &k, &l, opts.weak, &grid)?;
            let sufficiency = match m {
                SetSpec::Polyhedron(_) | SetSpec::WholeSpace { .. } => {
                    Some(tangent_sufficiency_sets(&m, &xbar, &k, &l, opts.weak)?)
                }
                _ => None,
            };
            let mut o = verdict_outcome(
                command,
                &report,
                json!({ "xbar": xbar, "tangent_sufficiency": sufficiency }),
            )?;
            o.points = Some(samples_csv(&samples, file.dim));
            o.svg = samples_svg(&samples, &xbar, Some(&m.compile()?));
            Ok(o)
        }
        Command::FirstOrder => {
            let p = file.problem()?;
            let r = check_first_order_necessary(&p, &file.directions()?)?;
            let (label, class) = if r.holds {
                ("holds", ExitClass::Produced)
            } else {
                ("violated", ExitClass::Negative)
            };
            Ok(Outcome::new(command, label, class, json!({ "report": r })))
        }
        Command::Tangent => tangent(&file, opts),
        Command::Kkt => {
            let p = file.problem()?;
            let e = file.e_vector(&p.k)?;
            match kkt_multipliers(&p, &e)? {
                Some(cert) => {
                    let suff = file
                        .convexity
                        .map(|a| sufficiency_certificate(&p, &cert, &a))
                        .transpose()?;
                    Ok(Outcome::new(
                        command,
                        "certificate",
                        ExitClass::Produced,
                        json!({ "certificate": cert, "e": e, "sufficiency": suff }),
                    ))
                }
                None => Ok(Outcome::new(
                    command,
                    "none",
                    ExitClass::Negative,
                    json!({
                        "certificate": null,
                        "e": e,
                        "note": "necessary condition violated under stated hypotheses",
                    }),
                )),
            }
        }
        Command::FritzJohn => {
            let p = file.problem()?;
            let cert = match file.g_map()? {
                Some((g, q)) => {
                    let lin = LinearizedConstraint::from_map(&g, &q, &p.xbar)?;
                    fritz_john(&p, Some(&lin))?
                }
                None => fritz_john_problem(&p)?,
            };
            let (label, class) = if cert.is_some() {
                ("certificate", ExitClass::Produced)
            } else {
                ("none", ExitClass::Negative)
            };
            Ok(Outcome::new(
                command,
                label,
                class,
                json!({
                    "certificate": cert,
                    "note": "a none answer refutes minimality only when a separation hypothesis holds",
                }),
            ))
        }
        Command::Gerstewitz => {
            let y = match &file.y {
                Some(_) => file.y_vector(file.dim)?,
                None => file.xbar()?,
            };
            let k = file.k_cone(y.dim())?;
            let e = file.e_vector(&k)?;
            let ctx = ScalarizationContext::new(k, e.clone())?;
            let value = gerstewitz_value(&ctx, &y)?;
            let sub = gerstewitz_subdiff(&ctx, &y)?;
            let verified = sub.contains(&sub.witness, opts.tol)?;
            Ok(Outcome::new(
                command,
                "value",
                ExitClass::Produced,
                json!({ "y": y, "e": e, "value": value, "subgradient": sub.witness, "verified": verified }),
            ))
        }
        Command::Mintime => {
            let l = file.l_set()?;
            let x = file.xbar()?;
            let target = file.target()?;
            let t = minimal_time(&l, &x, &target, opts.norm)?;
            let mut result = json!({ "x": x, "norm": opts.norm, "minimal_time": t });
            if file.objective.is_some() && file.m.is_some() {
                let f = file.objective()?;
                let m = file.m_set(f.output_dim())?.expect("m is present");
                let grid = file.grid_spec();
                result["calmness"] = to_value(&calmness_ratio(&f, &x, &l, &m, &grid)?)?;
                result["subregularity"] = to_value(&subregularity_ratio(&f, &x, &l, &m, &grid)?)?;
            }
            let label = if t.value.is_finite() { "value" } else { "unreachable" };
            Ok(Outcome::new(command, label, ExitClass::Produced, result))
        }
        Command::Openness => {
            let f = file.objective()?;
            let xbar = file.xbar()?;
            let l = file.l_set()?;
            let c = file.c_set(f.output_dim())?;
            let cfg = file.openness.clone().unwrap_or_default();
            let r = openness_falsifier(&f, &xbar, &l, &c, &cfg)?;
            let (label, class) = match r.status {
                OpennessStatus::Witness => ("witness", ExitClass::Produced),
                OpennessStatus::Inconclusive => ("inconclusive", ExitClass::Negative),
            };
            Ok(Outcome::new(command, label, class, json!({ "report": r })))
        }
        Command::Penalized => {
            let f = file.objective()?;
            let a = file.polyhedron()?;
            let xbar = file.xbar()?;
            let l = file.l_set()?;
            let vm = if f.output_dim() > 1 || file.ell.is_some() {
                let k = file.k_cone(f.output_dim())?;
                let e = file.e_vector(&k)?;
                let ell = file
                    .ell
                    .ok_or_else(|| Error::Invalid("vector penalization needs 'ell'".into()))?;
                Some(VectorMode { k, e, ell })
            } else {
                None
            };
            let r = stationarity_penalized(&f, &a, &xbar, &l, vm.as_ref())?;
            let (label, class) = if r.holds {
                ("holds", ExitClass::Produced)
            } else {
                ("none", ExitClass::Negative)
            };
            Ok(Outcome::new(command, label, class, json!({ "report": r })))
        }
    }
}

fn tangent(file: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let xbar = file.xbar()?;
    let l = file.l_set()?;
    let u = file.direction.as_ref().map(|_| file.direction()).transpose()?;
    let image = match (&file.objective, &u) {
        (Some(_), Some(u)) => derivative_image(&file.objective()?, &xbar, u, Some(&l))?,
        _ => None,
    };
    let set = match &file.set {
        Some(_) => file.set_spec()?,
        None => {
            // Derivative image only.
            let u = u.ok_or_else(|| Error::Invalid("tangent needs 'set' or 'direction'".into()))?;
            let f = file.objective()?;
            let label = if image.is_some() { "image" } else { "empty" };
            let class = if image.is_some() {
                ExitClass::Produced
            } else {
                ExitClass::Negative
            };
            return Ok(Outcome::new(
                Command::Tangent,
                label,
                class,
                json!({ "objective": f.describe(), "u": u, "derivative_image": image }),
            ));
        }
    };
    if let Some(poly) = set.as_polyhedron() {
        let cone = tangent_polyhedral(&poly, &xbar, &l)?;
        let member = u.as_ref().map(|u| cone.contains(u)).transpose()?;
        let (label, class) = match member {
            None => ("cone", ExitClass::Produced),
            Some(true) => ("member", ExitClass::Produced),
            Some(false) => ("nonmember", ExitClass::Negative),
        };
        return Ok(Outcome::new(
            Command::Tangent,
            label,
            class,
            json!({ "exact": true, "cone": cone, "u": u, "member": member, "derivative_image": image }),
        ));
    }
    let u = u.ok_or_else(|| Error::Invalid("sampled tangent queries need 'direction'".into()))?;
    let oracle = set.compile()?;
    let schedule = TSchedule {
        r: opts.radius.unwrap_or(TSchedule::default().r),
        ..TSchedule::default()
    };
    let v = tangent_membership_sampled(&oracle, &xbar, &l, &u, &schedule)?;
    let (label, class) = match v.status {
        TangentStatus::Member => ("member", ExitClass::Produced),
        TangentStatus::Nonmember => ("nonmember", ExitClass::Negative),
        TangentStatus::Inconclusive => ("inconclusive", ExitClass::Negative),
    };
    let points = {
        let rows: Vec<Vec<f64>> = v
            .evidence
            .iter()
            .map(|e| {
                let mut r = vec![e.level as f64, e.t, e.eps];
                match &e.u_k {
                    Some(uk) => r.extend(xbar.axpy(e.t, uk).into_vec()),
                    None => r.extend(std::iter::repeat_n(f64::NAN, xbar.dim())),
                }
                r
            })
            .collect();
        let mut header = vec!["level".to_string(), "t".into(), "eps".into()];
        header.extend((0..xbar.dim()).map(|i| format!("x{i}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        report::points_csv(&header, &rows)
    };
    let svg = (xbar.dim() == 2).then(|| {
        let mut svg = Svg::default();
        polygons_svg(&mut svg, &oracle);
        for e in &v.evidence {
            if let Some(uk) = &e.u_k {
                let p = xbar.axpy(e.t, uk);
                svg.point([p[0], p[1]], "green");
            }
        }
        svg.point([xbar[0], xbar[1]], "blue");
        svg.render()
    });
    let mut o = Outcome::new(
        Command::Tangent,
        label,
        class,
        json!({ "exact": false, "schedule": schedule, "u": u, "verdict": v, "derivative_image": image }),
    );
    o.points = Some(points);
    o.svg = svg;
    Ok(o)
}

#[derive(Debug, Parser)]
#[command(name = "dirmin", version, about = "Directional Pareto minimality toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Grid certification of directional minimality for a map.
    Certify(RunArgs),
    /// Grid certification of directional minimality for a set.
    CertifySet(RunArgs),
    /// First-order necessary condition on given directions.
    FirstOrder(RunArgs),
    /// Directional tangent cone membership.
    Tangent(RunArgs),
    /// KKT multiplier search.
    Kkt(RunArgs),
    /// Fritz John multiplier search.
    FritzJohn(RunArgs),
    /// Value and subgradient of the oriented scalarization.
    Gerstewitz(RunArgs),
    /// Directional minimal time, with calmness ratios when `m` is given.
    Mintime(RunArgs),
    /// Directional openness falsifier.
    Openness(RunArgs),
    /// Penalized stationarity condition.
    Penalized(RunArgs),
    /// Built-in example gallery.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesAction {
    List,
    Run {
        name: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L2,
    Linf,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Directory for report files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub weak: bool,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub rays: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "l2")]
    pub norm: NormArg,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

impl CommonArgs {
    pub fn options(&self) -> Options {
        Options {
            weak: self.weak,
            radius: self.radius,
            levels: self.levels,
            rays: self.rays,
            seed: self.seed,
            norm: match self.norm {
                NormArg::L2 => Norm::L2,
                NormArg::Linf => Norm::Linf,
            },
            tol: self.tol,
        }
    }
}

fn run_file(command: Command, args: &RunArgs) -> Result<ExitClass> {
    let text = fs::read_to_string(&args.problem)?;
    let file = ProblemFile::from_json(&text)?;
    let o = execute(command, &file, &args.common.options())?;
    o.write(&args.common.out, command.name())?;
    println!("{}: {}", command.name(), o.label);
    Ok(o.class)
}

fn dispatch(cli: Cli) -> Result<ExitClass> {
    let (command, args) = match cli.command {
        CliCommand::Examples { action } => {
            return match action {
                ExamplesAction::List => {
                    for e in gallery::entries() {
                        println!("{:<22} {}", e.name, e.summary);
                    }
                    Ok(ExitClass::Produced)
                }
                ExamplesAction::Run { name, common } => {
                    let o = gallery::run(&name, &common.options())?;
                    o.write(&common.out, &format!("example-{name}"))?;
                    println!("{name}: {}", o.label);
                    Ok(o.class)
                }
            }
        }
        CliCommand::Certify(a) => (Command::Certify, a),
        CliCommand::CertifySet(a) => (Command::CertifySet, a),
        CliCommand::FirstOrder(a) => (Command::FirstOrder, a),
        CliCommand::Tangent(a) => (Command::Tangent, a),
        CliCommand::Kkt(a) => (Command::Kkt, a),
        CliCommand::FritzJohn(a) => (Command::FritzJohn, a),
        CliCommand::Gerstewitz(a) => (Command::Gerstewitz, a),
        CliCommand::Mintime(a) => (Command::Mintime, a),
        CliCommand::Openness(a) => (Command::Openness, a),
        CliCommand::Penalized(a) => (Command::Penalized, a),
    };
    run_file(command, &args)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(class) => class.code(),
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
