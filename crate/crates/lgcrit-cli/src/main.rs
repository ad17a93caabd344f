//! `lgcrit` — command-line front end for the lgcrit-core library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numerical failure.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use lgcrit_core::catalog::{
    lg_family, make_model, reference_collection, LGFamily, ModelSpec, ReferenceCollection,
};
use lgcrit_core::emap::{self, CollectionComparison, EmapConfig};
use lgcrit_core::monodromy::{self, MonodromyCache, TrackConfig};
use lgcrit_core::solver::{self, SolverConfig};
use lgcrit_core::toric::{self, TDivisor, ToricModel};

#[derive(Parser)]
#[command(name = "lgcrit", version, about = "Critical schemes of toric Landau-Ginzburg potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Model spec, e.g. ps:s=2 | pb:s=3,a=1,2 | bp:n=4,r=2 | bb:n=5,b=0
    #[arg(short, long)]
    model: String,
    /// Parameter t (defaults to the family's standard value)
    #[arg(short, allow_negative_numbers = true)]
    t: Option<f64>,
    /// RNG seed for the multistart phase
    #[arg(long)]
    seed: Option<u64>,
    /// Newton convergence tolerance
    #[arg(long)]
    newton_tol: Option<f64>,
    /// Snapping tolerance for argument profiles
    #[arg(long)]
    snap_eps: Option<f64>,
    /// Deduplication tolerance for solution points
    #[arg(long)]
    dedup_tol: Option<f64>,
    /// Endpoint matching ratio for loop tracking
    #[arg(long)]
    match_ratio: Option<f64>,
    /// Output format
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the toric model: rays, facets, Picard data, reference collection
    Model(Common),
    /// Solve the Landau-Ginzburg system at a parameter value
    Solve {
        #[command(flatten)]
        common: Common,
        /// Coordinate index for SVG scatter output
        #[arg(long, default_value_t = 0)]
        coord: usize,
    },
    /// Compute the exceptional map (solution -> Pic class)
    Emap(Common),
    /// Verify the exceptional map against the reference collection
    Verify(Common),
    /// Track the monodromy permutation of a T-divisor
    Monodromy {
        #[command(flatten)]
        common: Common,
        /// Divisor coefficients in ray order, comma separated
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        divisor: Vec<i64>,
    },
    /// Check the M-aligned property over all solution pairs
    Aligned(Common),
    /// Frobenius pushforward image of the structure sheaf vs the collection
    Frobenius {
        #[command(flatten)]
        common: Common,
        /// Fixed Frobenius degree (stabilized search when omitted)
        #[arg(short)]
        l: Option<u64>,
    },
    /// Export the quiver of the reference collection
    Quiver(Common),
    /// Sweep t and track solution trajectories
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 120)]
        steps: usize,
        /// Coordinate index for SVG output
        #[arg(long, default_value_t = 0)]
        coord: usize,
    },
}

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn log_level() -> u8 {
    match std::env::var("LGCRIT_LOG").as_deref() {
        Ok("debug") => 4,
        Ok("info") => 3,
        Ok("warn") => 2,
        _ => 1,
    }
}

fn log(level: u8, msg: &str) {
    if level <= log_level() {
        let tag = match level {
            1 => "error",
            2 => "warn",
            3 => "info",
            _ => "debug",
        };
        eprintln!("lgcrit[{tag}]: {msg}");
    }
}

struct Context {
    spec: ModelSpec,
    model: ToricModel,
    family: LGFamily,
    reference: ReferenceCollection,
    t: f64,
    solver: SolverConfig,
    emap: EmapConfig,
    track: TrackConfig,
    format: String,
    output: Option<String>,
}

enum CliError {
    Usage(String),
    Verify(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verify(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

fn numeric_or_verify(e: impl std::fmt::Display, verify: bool) -> CliError {
    if verify {
        CliError::Verify(e.to_string())
    } else {
        CliError::Numeric(e.to_string())
    }
}

fn build_context(common: &Common) -> Result<Context, CliError> {
    let spec = ModelSpec::parse(&common.model).map_err(|e| CliError::Usage(e.to_string()))?;
    let model = make_model(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let family = lg_family(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let reference = reference_collection(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let t = common.t.unwrap_or(family.default_t);
    let mut solver = SolverConfig::default();
    if let Some(s) = common.seed {
        solver.rng_seed = s;
    }
    if let Some(x) = common.newton_tol {
        if x <= 0.0 {
            return Err(CliError::Usage("newton tolerance must be positive".into()));
        }
        solver.newton_tol = x;
    }
    if let Some(x) = common.dedup_tol {
        if x <= 0.0 {
            return Err(CliError::Usage("dedup tolerance must be positive".into()));
        }
        solver.dedup_tol = x;
    }
    let mut emap_cfg = EmapConfig {
        solver: solver.clone(),
        ..EmapConfig::default()
    };
    if let Some(x) = common.snap_eps {
        if x <= 0.0 {
            return Err(CliError::Usage("snap tolerance must be positive".into()));
        }
        emap_cfg.snap_eps = x;
    }
    let mut track = TrackConfig {
        solver: solver.clone(),
        ..TrackConfig::default()
    };
    if let Some(x) = common.match_ratio {
        if x <= 0.0 || x >= 1.0 {
            return Err(CliError::Usage("match ratio must lie in (0,1)".into()));
        }
        track.match_ratio = x;
    }
    let format = common.format.clone();
    match format.as_str() {
        "json" | "dot" | "csv" | "svg" => {}
        other => return Err(CliError::Usage(format!("unknown format '{other}'"))),
    }
    Ok(Context {
        spec,
        model,
        family,
        reference,
        t,
        solver,
        emap: emap_cfg,
        track,
        format,
        output: common.output.clone(),
    })
}

fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn divisor_label(model: &ToricModel, d: &TDivisor) -> String {
    let mut parts = Vec::new();
    for (ray, &c) in d.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let name = format!("V({})", model.ray_labels[ray]);
        match c {
            1 => parts.push(name),
            -1 => parts.push(format!("-{name}")),
            c => parts.push(format!("{c}{name}")),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn envelope(ctx: &Context, results: Value, diagnostics: Value) -> Value {
    json!({
        "model": {
            "spec": ctx.spec.to_string_spec(),
            "dimension": ctx.model.polytope.dim,
            "rays": ctx.model.polytope.vertices,
            "ray_labels": ctx.model.ray_labels,
            "euler": ctx.model.euler,
            "pic_rank": ctx.model.pic_rank,
            "basis_labels": ctx.model.basis_labels,
        },
        "params": {
            "t": ctx.t,
            "seed": ctx.solver.rng_seed,
            "newton_tol": ctx.solver.newton_tol,
            "dedup_tol": ctx.solver.dedup_tol,
            "snap_eps": ctx.emap.snap_eps,
            "match_ratio": ctx.track.match_ratio,
        },
        "results": results,
        "diagnostics": diagnostics,
    })
}

fn emit(ctx: &Context, body: &str) -> Result<(), CliError> {
    match &ctx.output {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(e.to_string())),
        None => {
            let stdout = std::io::stdout();
            let mut h = stdout.lock();
            h.write_all(body.as_bytes())
                .and_then(|_| h.write_all(b"\n"))
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn emit_json(ctx: &Context, v: &Value) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(v).expect("serialization");
    emit(ctx, &body)
}

fn cmd_model(ctx: &Context) -> Result<(), CliError> {
    let facets: Vec<Value> = ctx
        .model
        .polytope
        .facets
        .iter()
        .map(|f| json!({"vertices": f.vertex_indices, "inner_normal": f.inner_normal}))
        .collect();
    let collection: Vec<Value> = ctx
        .reference
        .entries
        .iter()
        .map(|(label, class)| json!({"label": label, "class": class}))
        .collect();
    let results = json!({
        "facets": facets,
        "class_matrix": ctx.model.class_matrix,
        "generator_rays": ctx.model.generators,
        "canonical_divisor": toric::canonical_divisor(&ctx.model),
        "reference_collection": collection,
    });
    emit_json(ctx, &envelope(ctx, results, json!({})))
}

fn solution_set_json(model: &ToricModel, set: &solver::SolutionSet) -> Value {
    let points: Vec<Value> = set
        .points
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "coords": p.coords.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
                "relative_residual": p.relative_residual,
                "argument_profile": solver::argument_profile(model, &p.coords),
            })
        })
        .collect();
    json!({
        "t": set.t,
        "complete": set.complete,
        "count": set.points.len(),
        "points": points,
    })
}

fn svg_scatter(points: &[(String, Complex64)], paths: &[Vec<Complex64>]) -> String {
    let all: Vec<Complex64> = points
        .iter()
        .map(|(_, z)| *z)
        .chain(paths.iter().flatten().copied())
        .collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in &all {
        xmin = xmin.min(z.re);
        xmax = xmax.max(z.re);
        ymin = ymin.min(z.im);
        ymax = ymax.max(z.im);
    }
    let pad = 0.05 * ((xmax - xmin).max(ymax - ymin).max(1e-9));
    xmin -= pad;
    xmax += pad;
    ymin -= pad;
    ymax += pad;
    let w = 640.0;
    let h = 640.0;
    let sx = |x: f64| (x - xmin) / (xmax - xmin) * w;
    let sy = |y: f64| h - (y - ymin) / (ymax - ymin) * h;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    for path in paths {
        let pts: Vec<String> = path
            .iter()
            .map(|z| format!("{:.3},{:.3}", sx(z.re), sy(z.im)))
            .collect();
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
    }
    for (label, z) in points {
        out.push_str(&format!(
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\"/>\n",
            sx(z.re),
            sy(z.im)
        ));
        out.push_str(&format!(
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"10\">{}</text>\n",
            sx(z.re) + 5.0,
            sy(z.im) - 5.0,
            label
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn cmd_solve(ctx: &Context, coord: usize) -> Result<(), CliError> {
    log(3, &format!("solving {} at t={}", ctx.spec.to_string_spec(), ctx.t));
    let set = solver::solve_all(&ctx.model, &ctx.family, ctx.t, &ctx.solver)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    if !set.complete {
        let v = envelope(
            ctx,
            solution_set_json(&ctx.model, &set),
            json!({"error": "incomplete solution set"}),
        );
        emit_json(ctx, &v)?;
        return Err(CliError::Numeric(format!(
            "found {} of {} solutions",
            set.points.len(),
            ctx.model.euler
        )));
    }
    match ctx.format.as_str() {
        "json" => emit_json(
            ctx,
            &envelope(ctx, solution_set_json(&ctx.model, &set), json!({})),
        ),
        "csv" => {
            let mut body = String::from("label,t,coord_index,re,im\n");
            for p in &set.points {
                for (i, z) in p.coords.iter().enumerate() {
                    body.push_str(&format!("{},{},{},{},{}\n", p.label, set.t, i, z.re, z.im));
                }
            }
            emit(ctx, &body)
        }
        "svg" => {
            if coord >= ctx.model.polytope.dim {
                return Err(CliError::Usage(format!(
                    "coordinate index {coord} out of range"
                )));
            }
            let pts: Vec<(String, Complex64)> = set
                .points
                .iter()
                .map(|p| (p.label.clone(), p.coords[coord]))
                .collect();
            emit(ctx, &svg_scatter(&pts, &[]))
        }
        other => Err(CliError::Usage(format!(
            "format '{other}' not supported for solve"
        ))),
    }
}

fn emap_json(res: &emap::ExceptionalMapResult) -> Value {
    let assignments: Vec<Value> = res
        .assignments
        .iter()
        .map(|a| {
            json!({
                "label": a.label,
                "profile": a.profile,
                "coords": a.coords,
                "class": a.class,
            })
        })
        .collect();
    json!({
        "t": res.t,
        "bijective": res.bijective,
        "stabilized": res.stabilized,
        "assignments": assignments,
    })
}

fn cmd_emap(ctx: &Context) -> Result<(), CliError> {
    let res = emap::exceptional_map(&ctx.model, &ctx.family, ctx.t, &ctx.emap)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    emit_json(ctx, &envelope(ctx, emap_json(&res), json!({})))
}

fn cmd_verify(ctx: &Context) -> Result<(), CliError> {
    let report = emap::verify_exceptional_map(&ctx.model, &ctx.family, &ctx.reference)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let results = json!({
        "bijection": if report.emap.bijective { "ok" } else { "fail" },
        "strong": if report.strong_on_image { "ok" } else { "fail" },
        "image_matches_reference": report.image_matches_reference,
        "mismatched_labels": report.mismatched_labels,
        "pass": report.pass,
        "emap": emap_json(&report.emap),
    });
    emit_json(ctx, &envelope(ctx, results, json!({})))?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Verify("exceptional map verification failed".into()))
    }
}

fn cmd_monodromy(ctx: &Context, divisor: &[i64]) -> Result<(), CliError> {
    if divisor.len() != ctx.model.ray_count {
        return Err(CliError::Usage(format!(
            "divisor needs {} coefficients, got {}",
            ctx.model.ray_count,
            divisor.len()
        )));
    }
    let start = solver::solve_all(&ctx.model, &ctx.family, ctx.t, &ctx.solver)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    if !start.complete {
        return Err(CliError::Numeric("incomplete solution set".into()));
    }
    let mut cache = MonodromyCache::default();
    let perm = monodromy::monodromy_of_divisor(
        &ctx.model,
        &ctx.family,
        ctx.t,
        &divisor.to_vec(),
        &start,
        &mut cache,
        &ctx.track,
        true,
    )
    .map_err(|e| CliError::Numeric(e.to_string()))?;
    let results = json!({
        "divisor": divisor,
        "divisor_label": divisor_label(&ctx.model, &divisor.to_vec()),
        "permutation": perm.map,
        "is_identity": perm.is_identity(),
        "cross_checked": true,
    });
    emit_json(ctx, &envelope(ctx, results, json!({})))
}

fn cmd_aligned(ctx: &Context) -> Result<(), CliError> {
    let report = monodromy::check_m_aligned(&ctx.model, &ctx.family, ctx.t)
        .map_err(|e| numeric_or_verify(e, false))?;
    let generators: Value = report
        .generators
        .iter()
        .map(|(ray, perm)| {
            (
                ctx.model.ray_labels[*ray].clone(),
                serde_json::to_value(&perm.map).unwrap(),
            )
        })
        .collect::<serde_json::Map<String, Value>>()
        .into();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|(a, b, d)| json!({"from": a, "to": b, "divisor": d, "divisor_label": divisor_label(&ctx.model, d)}))
        .collect();
    let dim_correspondence = report.dim_correspondence.as_ref().map(|c| {
        json!({
            "mismatched_pairs": c.mismatches,
            "additivity_violations": c.additivity_violations,
            "dimensions": c.dimensions.iter().map(|(a, b, hom, inc, strict)| {
                json!({"from": a, "to": b, "dim_hom": hom, "hom_mon_inclusive": inc, "hom_mon_strict": strict})
            }).collect::<Vec<_>>(),
        })
    });
    let results = json!({
        "pass": report.pass,
        "instances": report.instances,
        "violations": violations,
        "commuting_generators": report.commuting_generators,
        "generators": generators,
        "dim_correspondence": dim_correspondence,
    });
    emit_json(ctx, &envelope(ctx, results, json!({})))?;
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Verify(format!(
            "{} alignment violations",
            report.violations.len()
        )))
    }
}

fn cmd_frobenius(ctx: &Context, l: Option<u64>) -> Result<(), CliError> {
    let image = match l {
        Some(l) => {
            if l < 2 {
                return Err(CliError::Usage("degree l must be at least 2".into()));
            }
            emap::frobenius_image(&ctx.model, l)
        }
        None => emap::frobenius_stabilized(&ctx.model, 4096)
            .map_err(|e| CliError::Numeric(e.to_string()))?,
    };
    let reference = ctx.reference.classes();
    let comparison = emap::compare_collections(&image.classes(), &reference);
    let comparison_json = match &comparison {
        CollectionComparison::Equal => json!({"relation": "equal"}),
        CollectionComparison::ProperSubset { only_in_b } => {
            json!({"relation": "collection_proper_subset_of_frobenius", "only_in_frobenius": only_in_b})
        }
        CollectionComparison::ProperSuperset { only_in_a } => {
            json!({"relation": "frobenius_proper_subset_of_collection", "only_in_collection": only_in_a})
        }
        CollectionComparison::Incomparable {
            only_in_a,
            only_in_b,
        } => json!({
            "relation": "incomparable",
            "only_in_frobenius": only_in_a,
            "only_in_collection": only_in_b,
        }),
    };
    let multiplicities: Vec<Value> = image
        .multiplicities
        .iter()
        .map(|(class, count)| json!({"class": class, "count": count}))
        .collect();
    let results = json!({
        "l": image.l,
        "stabilized": image.stabilized,
        "total": image.total(),
        "classes": multiplicities,
        "class_count": image.multiplicities.len(),
        "comparison": comparison_json,
    });
    emit_json(ctx, &envelope(ctx, results, json!({})))
}

fn cmd_quiver(ctx: &Context) -> Result<(), CliError> {
    let classes = ctx.reference.classes();
    let labels = ctx.reference.labels();
    let quiver = toric::build_quiver(&ctx.model, &classes).map_err(|e| CliError::Verify(e.to_string()))?;
    match ctx.format.as_str() {
        "dot" => {
            let mut body = String::from("digraph quiver {\n");
            for label in &labels {
                body.push_str(&format!("  \"{label}\";\n"));
            }
            for (from, to, d) in &quiver.edges {
                body.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    labels[*from],
                    labels[*to],
                    divisor_label(&ctx.model, d)
                ));
            }
            body.push_str("}\n");
            emit(ctx, &body)
        }
        "json" => {
            let edges: Vec<Value> = quiver
                .edges
                .iter()
                .map(|(from, to, d)| {
                    json!({
                        "from": labels[*from],
                        "to": labels[*to],
                        "divisor": d,
                        "divisor_label": divisor_label(&ctx.model, d),
                    })
                })
                .collect();
            let results = json!({
                "vertices": labels,
                "classes": classes,
                "edges": edges,
                "edge_count": quiver.edges.len(),
            });
            emit_json(ctx, &envelope(ctx, results, json!({})))
        }
        other => Err(CliError::Usage(format!(
            "format '{other}' not supported for quiver"
        ))),
    }
}

fn cmd_sweep(ctx: &Context, from: f64, to: f64, steps: usize, coord: usize) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::Usage("steps must be positive".into()));
    }
    let sweep = solver::sweep_parameter(&ctx.model, &ctx.family, from, to, steps, &ctx.solver)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    match ctx.format.as_str() {
        "json" => {
            let trajectories: Vec<Value> = sweep
                .trajectories
                .iter()
                .map(|tr| {
                    json!({
                        "label": tr.label,
                        "ts": tr.ts,
                        "samples": tr.samples.iter().map(|s| s.iter().map(|&z| cx(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "start_profile": tr.start_profile,
                        "end_profile": tr.end_profile,
                    })
                })
                .collect();
            let results = json!({
                "t_start": sweep.t_start,
                "t_end": sweep.t_end,
                "trajectories": trajectories,
            });
            emit_json(ctx, &envelope(ctx, results, json!({})))
        }
        "csv" => {
            let mut body = String::from("label,t,coord_index,re,im\n");
            for tr in &sweep.trajectories {
                for (t, sample) in tr.ts.iter().zip(&tr.samples) {
                    for (i, z) in sample.iter().enumerate() {
                        body.push_str(&format!("{},{},{},{},{}\n", tr.label, t, i, z.re, z.im));
                    }
                }
            }
            emit(ctx, &body)
        }
        "svg" => {
            if coord >= ctx.model.polytope.dim {
                return Err(CliError::Usage(format!(
                    "coordinate index {coord} out of range"
                )));
            }
            let paths: Vec<Vec<Complex64>> = sweep
                .trajectories
                .iter()
                .map(|tr| tr.samples.iter().map(|s| s[coord]).collect())
                .collect();
            let pts: Vec<(String, Complex64)> = sweep
                .trajectories
                .iter()
                .map(|tr| (tr.label.clone(), *tr.samples.last().unwrap().get(coord).unwrap()))
                .collect();
            emit(ctx, &svg_scatter(&pts, &paths))
        }
        other => Err(CliError::Usage(format!(
            "format '{other}' not supported for sweep"
        ))),
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Model(c) => cmd_model(&build_context(c)?),
        Command::Solve { common, coord } => cmd_solve(&build_context(common)?, *coord),
        Command::Emap(c) => cmd_emap(&build_context(c)?),
        Command::Verify(c) => cmd_verify(&build_context(c)?),
        Command::Monodromy { common, divisor } => cmd_monodromy(&build_context(common)?, divisor),
        Command::Aligned(c) => cmd_aligned(&build_context(c)?),
        Command::Frobenius { common, l } => cmd_frobenius(&build_context(common)?, *l),
        Command::Quiver(c) => cmd_quiver(&build_context(c)?),
        Command::Sweep {
            common,
            from,
            to,
            steps,
            coord,
        } => cmd_sweep(&build_context(common)?, *from, *to, *steps, *coord),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log(1, e.message());
            ExitCode::from(e.code())
        }
    }
}
