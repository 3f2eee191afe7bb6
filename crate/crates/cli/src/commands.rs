use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use vfwalk::embedding::{is_circular, trace_faces, EmbeddedGraph, RotationSystem};
use vfwalk::format::{complex_matrix_json, fmt_g17, g17_pair, real_matrix_csv, real_matrix_json, G17};
use vfwalk::graph::{adjacency_matrix, laplacian, GraphInput, TorusSpec};
use vfwalk::linalg::{log_residual, ComplexMatrix, RealMatrix};
use vfwalk::spectra::{complex_eigenvalue_list, eigenvalue_list, sort_by_angle, symmetric_eigenvalues};
use vfwalk::walk::{coin_walk_matrix, face_overlap_matrix, grover_matrix, positive_support, vertex_face_transition, CoinSpec};
use vfwalk::zeta::claims::{run_checks, CheckConfig, CoinChoice, Instance, InstanceKind, Verdict};
use vfwalk::zeta::limits::{limit_trace, walk_limit_trace, LimitKind};
use vfwalk::zeta::{
    grover_routes, ihara_routes, positive_support_log, sample_points, vertex_face_zeta, walk_zeta, Model, Route,
    ZetaEvaluation, SAMPLE_COUNT,
};

use crate::args::{
    CheckArgs, CoinArgs, CoinKind, FacesArgs, Family, LimitArgs, LimitChoice, MatrixArgs, MatrixFormat,
    Operator, SourceArgs, SpectraArgs, ZetaArgs, ZetaModel,
};
use crate::CliError;

/// Eigenvalues closer than this are reported as one cluster.
const CLUSTER_TOL: f64 = 1e-8;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn read_json(path: &Path, what: &str) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed {what} {}: {e}", path.display())))
}

fn require<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--family {family} needs {flag}")))
}

pub fn instance(src: &SourceArgs) -> Result<Instance, CliError> {
    if let Some(path) = &src.graph {
        let input: GraphInput = serde_json::from_value(read_json(path, "graph file")?)
            .map_err(|e| usage(format!("malformed graph file {}: {e}", path.display())))?;
        let graph = input.to_graph()?;
        let label = format!("graph {}", path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default());
        return Ok(match &input.rotation {
            Some(lists) => {
                let rot = RotationSystem::from_neighbors(&graph, lists)?;
                Instance::embedded(label, trace_faces(&graph, &rot)?, false)
            }
            None => Instance::graph(label, graph, false),
        });
    }
    let family = match (src.family, src.side) {
        (Some(f), _) => f,
        (None, Some(_)) => Family::Torus,
        (None, None) => return Err(usage("no graph given: use --family or --graph")),
    };
    Ok(match family {
        Family::Cycle => Instance::cycle(require(src.n, "--n", "cycle")?)?,
        Family::Complete => Instance::complete(require(src.n, "--n", "complete")?)?,
        Family::Torus => Instance::torus(src.d.unwrap_or(2), require(src.side, "--N", "torus")?)?,
        Family::TorusEmbedded => {
            if src.d.is_some_and(|d| d != 2) {
                return Err(usage("--family torus-embedded is two-dimensional; drop --d or use --d 2"));
            }
            Instance::torus_embedded(require(src.side, "--N", "torus-embedded")?)?
        }
    })
}

fn parse_coin_file(path: &Path) -> Result<CoinSpec, CliError> {
    let bad = || usage(format!("coin file {} must hold rows of numbers or [re, im] pairs", path.display()));
    let Value::Array(rows) = read_json(path, "coin file")? else {
        return Err(bad());
    };
    let mut entries = Vec::new();
    let n = rows.len();
    for row in &rows {
        let Value::Array(row) = row else {
            return Err(bad());
        };
        if row.len() != n {
            return Err(usage(format!("coin file {} is not square", path.display())));
        }
        for x in row {
            let z = match x {
                Value::Number(_) => Complex64::new(x.as_f64().ok_or_else(bad)?, 0.0),
                Value::Array(pair) if pair.len() == 2 => Complex64::new(
                    pair[0].as_f64().ok_or_else(bad)?,
                    pair[1].as_f64().ok_or_else(bad)?,
                ),
                _ => return Err(bad()),
            };
            entries.push(z);
        }
    }
    Ok(CoinSpec::new(ComplexMatrix::from_row_slice(n, n, &entries))?)
}

fn coin_choice(args: &CoinArgs, seed: u64) -> Result<Option<CoinChoice>, CliError> {
    let kind = match (args.coin, &args.coin_file) {
        (Some(k), _) => k,
        (None, Some(_)) => CoinKind::File,
        (None, None) => return Ok(None),
    };
    Ok(Some(match kind {
        CoinKind::Grover => CoinChoice::Grover,
        CoinKind::Identity => CoinChoice::Identity,
        CoinKind::FlipFlop => CoinChoice::FlipFlop,
        CoinKind::RandomUnitary => CoinChoice::RandomUnitary(seed),
        CoinKind::File => {
            let path = args.coin_file.as_ref().ok_or_else(|| usage("--coin file needs --coin-file"))?;
            let name = format!("file {}", path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default());
            CoinChoice::Given(name, parse_coin_file(path)?)
        }
    }))
}

fn torus_spec(inst: &Instance, what: &str) -> Result<TorusSpec, CliError> {
    inst.torus
        .ok_or_else(|| usage(format!("{what} needs a torus: use --family torus with --d and --N")))
}

fn embedding<'a>(inst: &'a Instance, what: &str) -> Result<&'a EmbeddedGraph, CliError> {
    inst.embedding
        .as_ref()
        .ok_or_else(|| usage(format!("{what} needs an embedded graph (rotation system)")))
}

pub fn check(a: &CheckArgs) -> Result<u8, CliError> {
    let inst = instance(&a.source)?;
    let mut cfg = CheckConfig::new(a.seed);
    if let Some(tol) = a.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(usage(format!("--tol must be positive, got {tol}")));
        }
        cfg.tolerance = Some(tol);
    }
    if a.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    cfg.grid = a.grid;
    if let Some(coin) = coin_choice(&a.coin, a.seed)? {
        cfg.coins = vec![coin];
    }
    let run = run_checks(a.claims.as_deref(), &inst, &cfg)?;
    for r in &run.reports {
        let verdict = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Reported => "reported",
        };
        eprintln!("{:<11} {:<8} max_residual={}", r.claim, verdict, fmt_g17(r.max_residual));
    }
    emit(a.out.as_ref(), &pretty(&serde_json::to_value(&run).expect("report serializes")))?;
    Ok(if run.all_hard_pass { 0 } else { 1 })
}

fn parse_complex(raw: &str) -> Result<Complex64, CliError> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || usage(format!("cannot parse u = {raw:?}; expected e.g. 0.3, -0.2i or 0.1+0.2i"));
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is not an exponent sign or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let im_of = |t: &str| -> Result<f64, CliError> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            t => t.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => Ok(Complex64::new(body[..i].parse().map_err(|_| bad())?, im_of(&body[i..])?)),
        None => Ok(Complex64::new(0.0, im_of(body)?)),
    }
}

fn zeta_points(a: &ZetaArgs) -> Result<Vec<Complex64>, CliError> {
    match &a.u {
        Some(list) => list.iter().map(|s| parse_complex(s)).collect(),
        None => {
            let mut pts: Vec<Complex64> = [0.1, 0.2, 0.3].iter().map(|&x| Complex64::new(x, 0.0)).collect();
            pts.extend(sample_points(a.seed, SAMPLE_COUNT));
            Ok(pts)
        }
    }
}

fn positive_support_routes(inst: &Instance, u: Complex64) -> Result<Vec<ZetaEvaluation>, CliError> {
    let g = &inst.graph;
    if g.min_degree() < 2 {
        return Err(usage("positive-support model needs minimum degree at least 2"));
    }
    let ihara = ihara_routes(g, u)?;
    let mut out = vec![ZetaEvaluation {
        model: Model::PositiveSupport,
        route: Route::Determinant,
        u,
        log_det: positive_support_log(g, u)?,
        scale: 1.0,
    }];
    out.extend(ihara.into_iter().filter(|e| e.route == Route::ClosedForm).map(|e| ZetaEvaluation {
        model: Model::PositiveSupport,
        ..e
    }));
    Ok(out)
}

fn zeta_row(u: Complex64, routes: &[ZetaEvaluation]) -> Value {
    let mut by_route = serde_json::Map::new();
    for e in routes {
        by_route.insert(
            e.route.name().to_string(),
            json!({
                "log_value": g17_pair(e.log_value()),
                "value": g17_pair(e.value()),
            }),
        );
    }
    let mut residuals = serde_json::Map::new();
    for (i, a) in routes.iter().enumerate() {
        for b in &routes[i + 1..] {
            residuals.insert(
                format!("{}|{}", a.route.name(), b.route.name()),
                serde_json::to_value(G17(log_residual(a.log_det, b.log_det))).expect("number"),
            );
        }
    }
    json!({ "u": g17_pair(u), "routes": by_route, "residuals": residuals })
}

pub fn zeta(a: &ZetaArgs) -> Result<(), CliError> {
    let mut src = a.source.clone();
    if a.model == ZetaModel::Walk && src.family.is_none() && src.graph.is_none() && src.side.is_some() {
        src.family = Some(Family::Torus);
    }
    let inst = instance(&src)?;
    let points = zeta_points(a)?;
    let coin = match a.model {
        ZetaModel::Walk => {
            let spec = torus_spec(&inst, "the walk model")?;
            let choice = coin_choice(&a.coin, a.seed)?.unwrap_or(CoinChoice::Grover);
            Some((spec, choice.name(), choice.resolve(2 * spec.dim)?))
        }
        _ => None,
    };
    if a.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    let mut rows = Vec::with_capacity(points.len());
    for &u in &points {
        let routes = match a.model {
            ZetaModel::Ihara => ihara_routes(&inst.graph, u)?,
            ZetaModel::Grover => grover_routes(&inst.graph, u)?,
            ZetaModel::PositiveSupport => positive_support_routes(&inst, u)?,
            ZetaModel::Walk => {
                let (spec, _, coin) = coin.as_ref().expect("walk coin resolved");
                walk_zeta(*spec, coin, u, Some(a.grid))?
            }
            ZetaModel::VertexFace => {
                let emb = embedding(&inst, "the vertex-face model")?;
                if !is_circular(emb) {
                    return Err(usage("the vertex-face model needs a circular embedding"));
                }
                let side = (inst.kind == InstanceKind::TorusEmbedded).then(|| inst.torus.map(|t| t.side)).flatten();
                vertex_face_zeta(emb, side, u)?
            }
        };
        rows.push(zeta_row(u, &routes));
    }
    let model = match a.model {
        ZetaModel::Ihara => "ihara",
        ZetaModel::PositiveSupport => "positive-support",
        ZetaModel::Grover => "grover",
        ZetaModel::Walk => "walk",
        ZetaModel::VertexFace => "vertex-face",
    };
    let mut doc = json!({
        "model": model,
        "instance": inst.label,
        "params": inst.params(),
        "rows": rows,
    });
    if let Some((_, name, _)) = &coin {
        doc["coin"] = json!(name);
        doc["grid"] = json!(a.grid);
    }
    emit(a.out.as_ref(), &pretty(&doc))
}

enum OperatorMatrix {
    Real { matrix: RealMatrix, symmetric: bool },
    Complex(ComplexMatrix),
}

fn operator_matrix(inst: &Instance, op: Operator, coin: &CoinArgs, seed: u64) -> Result<OperatorMatrix, CliError> {
    let real = |matrix, symmetric| Ok(OperatorMatrix::Real { matrix, symmetric });
    let circular = |what: &str| -> Result<&EmbeddedGraph, CliError> {
        let emb = embedding(inst, what)?;
        if !is_circular(emb) {
            return Err(usage(format!("{what} needs a circular embedding")));
        }
        Ok(emb)
    };
    match op {
        Operator::Adjacency => real(adjacency_matrix(&inst.graph), true),
        Operator::Laplacian => real(laplacian(&inst.graph), true),
        Operator::Grover => real(grover_matrix(&inst.graph), false),
        Operator::PositiveSupport => real(positive_support(&grover_matrix(&inst.graph)), false),
        Operator::VertexFace => real(vertex_face_transition(circular("the vertex-face operator")?)?, false),
        Operator::FaceOverlap => real(face_overlap_matrix(circular("the face-overlap operator")?)?.incidence, true),
        Operator::Walk => {
            let spec = torus_spec(inst, "the walk operator")?;
            let choice = coin_choice(coin, seed)?.unwrap_or(CoinChoice::Grover);
            Ok(OperatorMatrix::Complex(coin_walk_matrix(spec, &choice.resolve(2 * spec.dim)?)?))
        }
    }
}

fn default_operator(inst: &Instance) -> Operator {
    match &inst.embedding {
        Some(emb) if is_circular(emb) => Operator::VertexFace,
        _ => Operator::Grover,
    }
}

pub fn spectra(a: &SpectraArgs) -> Result<(), CliError> {
    let inst = instance(&a.source)?;
    let op = a.operator.unwrap_or_else(|| default_operator(&inst));
    let mut values = match operator_matrix(&inst, op, &a.coin, a.seed)? {
        OperatorMatrix::Real { matrix, symmetric: true } => symmetric_eigenvalues(&matrix)
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect(),
        OperatorMatrix::Real { matrix, symmetric: false } => eigenvalue_list(&matrix)?,
        OperatorMatrix::Complex(m) => complex_eigenvalue_list(&m)?,
    };
    sort_by_angle(&mut values);
    let mut out = String::from("re,im,abs_minus_one,multiplicity\n");
    for z in &values {
        let mult = values.iter().filter(|w| (*w - z).norm() <= CLUSTER_TOL).count();
        let _ = writeln!(out, "{},{},{},{}", fmt_g17(z.re), fmt_g17(z.im), fmt_g17(z.norm() - 1.0), mult);
    }
    emit(a.out.as_ref(), &out)
}

pub fn limit(a: &LimitArgs) -> Result<(), CliError> {
    if a.grid < 8 {
        return Err(usage("--grid must be at least 8"));
    }
    let mut out = String::from("kind,u,G,value_re,value_im,gap\n");
    let kind = match a.kind {
        LimitChoice::Grover => Some(LimitKind::Grover),
        LimitChoice::Ihara => Some(LimitKind::Ihara),
        LimitChoice::VertexFace => Some(LimitKind::VertexFace),
        LimitChoice::Grover2d => Some(LimitKind::GroverSquare),
        LimitChoice::Ihara2d => Some(LimitKind::IharaSquare),
        LimitChoice::Walk => None,
    };
    let gap = |g: Option<f64>| g.map(fmt_g17).unwrap_or_default();
    match kind {
        Some(kind) => {
            for &u in &a.u {
                for p in limit_trace(kind, a.d, u, a.grid)? {
                    let _ = writeln!(out, "{},{},{},{},0,{}", kind.name(), fmt_g17(u), p.points, fmt_g17(p.value), gap(p.gap));
                }
            }
        }
        None => {
            let choice = coin_choice(&a.coin, a.seed)?.unwrap_or(CoinChoice::Grover);
            let coin = choice.resolve(2 * a.d)?;
            for &u in &a.u {
                if !(u.abs() < 1.0) {
                    return Err(usage(format!("u = {u} must lie in (-1, 1)")));
                }
                for p in walk_limit_trace(&coin, a.d, Complex64::new(u, 0.0), a.grid)? {
                    let _ = writeln!(
                        out,
                        "walk,{},{},{},{},{}",
                        fmt_g17(u),
                        p.points,
                        fmt_g17(p.value.re),
                        fmt_g17(p.value.im),
                        gap(p.gap)
                    );
                }
            }
        }
    }
    emit(a.out.as_ref(), &out)
}

pub fn faces(a: &FacesArgs) -> Result<(), CliError> {
    let inst = instance(&a.source)?;
    let emb = embedding(&inst, "faces")?;
    let g = emb.graph();
    let doc = json!({
        "n": g.vertex_count(),
        "m": g.edge_count(),
        "k": emb.face_count(),
        "genus": emb.genus(),
        "euler_characteristic": emb.euler_characteristic(),
        "circular": is_circular(emb),
        "faces": emb.face_report(),
    });
    emit(a.out.as_ref(), &pretty(&doc))
}

pub fn matrix(a: &MatrixArgs) -> Result<(), CliError> {
    let inst = instance(&a.source)?;
    let text = match (operator_matrix(&inst, a.operator, &a.coin, a.seed)?, a.format) {
        (OperatorMatrix::Real { matrix, .. }, MatrixFormat::Csv) => real_matrix_csv(&matrix),
        (OperatorMatrix::Real { matrix, .. }, MatrixFormat::Json) => pretty(&real_matrix_json(&matrix)),
        (OperatorMatrix::Complex(m), MatrixFormat::Json) => pretty(&complex_matrix_json(&m)),
        (OperatorMatrix::Complex(_), MatrixFormat::Csv) => {
            return Err(usage("the walk operator is complex; use --format json"))
        }
    };
    emit(a.out.as_ref(), &text)
}
