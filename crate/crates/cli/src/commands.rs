use std::collections::BTreeSet;
use std::io::{Read, Write};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tdpair::leonard::{
    affine_relation, detect_leonard, generate_split_form, orient_to, random_leonard,
    switching_from_sequences, switching_via_solve, Detection, LeonardError,
};
use tdpair::search::{merge_results, partition_seeds, search_shape, Mode, SearchSpec};
use tdpair::splitdecomp::{split_subspaces, verify_raising_lowering};
use tdpair::tdpair::{validate_pair, Side, TdPairError, TriDiagonalPair};
use tdpair::{Matrix, Scalar};

use crate::io;
use crate::{EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_USAGE};

const DEFAULT_MAX_DIM: usize = 24;
const SEARCH_BATCH: u64 = 4096;

struct Report {
    command: &'static str,
    digest: Option<String>,
    payload: Value,
    exit: u8,
}

impl Report {
    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputDigest": self.digest,
            "payload": self.payload,
            "exitCode": self.exit,
        })
    }

    fn emit(self) -> u8 {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable report");
        let _ = writeln!(std::io::stdout().lock(), "{text}");
        self.exit
    }

    fn usage(command: &'static str, digest: Option<String>, message: String) -> Report {
        eprintln!("tdp {command}: {message}");
        Report {
            command,
            digest,
            payload: json!({"error": message}),
            exit: EXIT_USAGE,
        }
    }
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn max_dim() -> usize {
    std::env::var("TDP_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

fn read_input(path: &str) -> Result<Vec<u8>, String> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn parse_json(bytes: &[u8], path: &str) -> Result<Value, String> {
    serde_json::from_slice(bytes).map_err(|e| format!("{path}: invalid JSON: {e}"))
}

fn check_candidate(a: &Matrix, astar: &Matrix) -> Result<(), String> {
    if a.field() != astar.field() {
        return Err(format!("A is over {} but A* is over {}", a.field(), astar.field()));
    }
    if !a.is_square() || !astar.is_square() || a.rows() != astar.rows() {
        return Err(format!(
            "A is {}x{} and A* is {}x{}; both must be square of the same size",
            a.rows(),
            a.cols(),
            astar.rows(),
            astar.cols()
        ));
    }
    if a.rows() == 0 {
        return Err("the space must have positive dimension".into());
    }
    if a.rows() > max_dim() {
        return Err(format!("dimension {} exceeds TDP_MAX_DIM = {}", a.rows(), max_dim()));
    }
    Ok(())
}

/// Reads a candidate file; on failure the usage report is returned instead.
fn load_candidate(command: &'static str, path: &str) -> Result<(Vec<u8>, Matrix, Matrix), Report> {
    let bytes = read_input(path).map_err(|e| Report::usage(command, None, e))?;
    let d = digest(&[&bytes]);
    let parsed = parse_json(&bytes, path)
        .and_then(|v| io::candidate_from_json(&v))
        .and_then(|(a, b)| check_candidate(&a, &b).map(|_| (a, b)));
    match parsed {
        Ok((a, b)) => Ok((bytes, a, b)),
        Err(e) => Err(Report::usage(command, Some(d), e)),
    }
}

fn side_json(side: Side) -> &'static str {
    match side {
        Side::A => "A",
        Side::AStar => "Astar",
    }
}

fn failure_json(e: &TdPairError) -> (Value, u8) {
    let message = e.to_string();
    match e {
        TdPairError::NotDiagonalizableOverField { side, .. } => (
            json!({"kind": "NotDiagonalizableOverField", "axiom": "i", "side": side_json(*side), "message": message}),
            EXIT_INVALID,
        ),
        TdPairError::NoTridiagonalOrdering { side } => {
            let axiom = if *side == Side::A { "ii" } else { "iii" };
            (
                json!({"kind": "NoTridiagonalOrdering", "axiom": axiom, "side": side_json(*side), "message": message}),
                EXIT_INVALID,
            )
        }
        TdPairError::DiameterMismatch { d, delta } => (
            json!({"kind": "DiameterMismatch", "axiom": null, "d": d, "delta": delta, "message": message}),
            EXIT_INVALID,
        ),
        TdPairError::NotIrreducible { witness } => (
            json!({"kind": "NotIrreducible", "axiom": "iv", "witness": io::subspace_to_json(witness), "message": message}),
            EXIT_INVALID,
        ),
        TdPairError::InconclusiveIrreducibility { .. } => (
            json!({"kind": "InconclusiveIrreducibility", "axiom": "iv", "message": message}),
            EXIT_INCONCLUSIVE,
        ),
        TdPairError::ShapeInvariant(_) => (
            json!({"kind": "ShapeInvariant", "axiom": null, "message": message}),
            EXIT_INVALID,
        ),
        TdPairError::Algebra(_) | TdPairError::EmptySpace => (
            json!({"kind": "Usage", "axiom": null, "message": message}),
            EXIT_USAGE,
        ),
    }
}

fn ordering_json(values: &[Scalar]) -> Value {
    io::scalars_to_json(values)
}

/// Loads and validates a candidate, or produces the failure report.
fn load_validated(command: &'static str, path: &str) -> Result<(Vec<u8>, TriDiagonalPair), Report> {
    let (bytes, a, astar) = load_candidate(command, path)?;
    match validate_pair(&a, &astar) {
        Ok(pair) => Ok((bytes, pair)),
        Err(e) => {
            let (failure, exit) = failure_json(&e);
            Err(Report {
                command,
                digest: Some(digest(&[&bytes])),
                payload: json!({"failure": failure}),
                exit,
            })
        }
    }
}

pub fn verify(path: &str) -> u8 {
    let (bytes, a, astar) = match load_candidate("verify", path) {
        Ok(x) => x,
        Err(r) => return r.emit(),
    };
    let (payload, exit) = match validate_pair(&a, &astar) {
        Ok(pair) => (
            json!({
                "valid": true,
                "diameter": pair.diameter(),
                "shape": pair.shape().rho(),
                "orderingA": ordering_json(pair.eig_a().eigenvalues()),
                "orderingAstar": ordering_json(pair.eig_astar().eigenvalues()),
                "alternativeOrderingA": pair.alternatives().ordering_a.as_deref().map(ordering_json),
                "alternativeOrderingAstar": pair.alternatives().ordering_astar.as_deref().map(ordering_json),
                "failure": null,
            }),
            EXIT_OK,
        ),
        Err(e) => {
            let (failure, exit) = failure_json(&e);
            (
                json!({
                    "valid": false,
                    "diameter": null,
                    "shape": null,
                    "orderingA": null,
                    "orderingAstar": null,
                    "failure": failure,
                }),
                exit,
            )
        }
    };
    Report {
        command: "verify",
        digest: Some(digest(&[&bytes])),
        payload,
        exit,
    }
    .emit()
}

pub fn decompose(path: &str) -> u8 {
    let (bytes, pair) = match load_validated("decompose", path) {
        Ok(x) => x,
        Err(r) => return r.emit(),
    };
    let sd = split_subspaces(&pair);
    let rl = verify_raising_lowering(&sd);
    let report = sd.report();
    let ok = report.all_hold() && rl.all_hold();
    Report {
        command: "decompose",
        digest: Some(digest(&[&bytes])),
        payload: json!({
            "orderingA": ordering_json(pair.eig_a().eigenvalues()),
            "orderingAstar": ordering_json(pair.eig_astar().eigenvalues()),
            "U": sd.components().iter().map(io::subspace_to_json).collect::<Vec<_>>(),
            "dims": sd.dims(),
            "eq4": report.direct_sum,
            "eq5": report.lower_partial_sums,
            "eq6": report.upper_partial_sums,
            "eq7": rl.raising,
            "eq8": rl.lowering,
            "eq10": report.tau_containments,
        }),
        exit: if ok { EXIT_OK } else { EXIT_INVALID },
    }
    .emit()
}

pub fn detect(path: &str) -> u8 {
    let (bytes, pair) = match load_validated("detect", path) {
        Ok(x) => x,
        Err(r) => return r.emit(),
    };
    let payload = match detect_leonard(&pair) {
        Detection::Leonard(cert) => json!({
            "leonard": true,
            "alpha": io::scalars_to_json(&cert.alpha),
            "solutionDim": cert.solution_dim,
            "shape": pair.shape().rho(),
        }),
        Detection::NotLeonard { shape } => json!({
            "leonard": false,
            "alpha": null,
            "solutionDim": 0,
            "shape": shape.rho(),
        }),
    };
    Report {
        command: "detect",
        digest: Some(digest(&[&bytes])),
        payload,
        exit: EXIT_OK,
    }
    .emit()
}

fn leonard_failure(command: &'static str, digest: String, e: &LeonardError) -> Report {
    let failure = match e {
        LeonardError::NotLeonard { shape } => {
            json!({"kind": "NotLeonard", "shape": shape.rho(), "message": e.to_string()})
        }
        LeonardError::EigenspaceMismatch { side, index } => json!({
            "kind": "EigenspaceMismatch",
            "side": side_json(*side),
            "index": index,
            "message": e.to_string(),
        }),
        other => json!({"kind": "Leonard", "message": other.to_string()}),
    };
    let exit = match e {
        LeonardError::InvalidParameters(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    };
    Report {
        command,
        digest: Some(digest),
        payload: json!({"failure": failure}),
        exit,
    }
}

pub fn switch(path: &str, sequences: Option<&str>) -> u8 {
    let (bytes, pair) = match load_validated("switch", path) {
        Ok(x) => x,
        Err(r) => return r.emit(),
    };
    let Some(seq_path) = sequences else {
        let d = digest(&[&bytes]);
        return match switching_via_solve(&pair) {
            Ok(s) => Report {
                command: "switch",
                digest: Some(d),
                payload: json!({
                    "orderingA": ordering_json(pair.eig_a().eigenvalues()),
                    "orderingAstar": ordering_json(pair.eig_astar().eigenvalues()),
                    "S": io::matrix_to_json(&s),
                    "normalization": "alpha_d=1",
                }),
                exit: EXIT_OK,
            }
            .emit(),
            Err(e) => leonard_failure("switch", d, &e).emit(),
        };
    };
    let seq_bytes = match read_input(seq_path) {
        Ok(b) => b,
        Err(e) => return Report::usage("switch", None, e).emit(),
    };
    let d = digest(&[&bytes, &seq_bytes]);
    let params = match parse_json(&seq_bytes, seq_path).and_then(|v| io::params_from_json(&v)) {
        Ok(p) => p,
        Err(e) => return Report::usage("switch", Some(d), e).emit(),
    };
    if params.field() != pair.field() {
        return Report::usage("switch", Some(d), "sequences and pair are over different fields".into()).emit();
    }
    let Some(oriented) = orient_to(&pair, &params) else {
        let e = LeonardError::HypothesisNotMet("θ and θ* do not match the eigenvalues of the pair".into());
        return leonard_failure("switch", d, &e).emit();
    };
    let solved = match switching_via_solve(&oriented) {
        Ok(s) => s,
        Err(e) => return leonard_failure("switch", d, &e).emit(),
    };
    let formula = match switching_from_sequences(&params, oriented.eig_a()) {
        Ok(s) => s,
        Err(e) => return leonard_failure("switch", d, &e).emit(),
    };
    let scalar = solved.proportionality(&formula);
    Report {
        command: "switch",
        digest: Some(d),
        payload: json!({
            "orderingA": ordering_json(oriented.eig_a().eigenvalues()),
            "orderingAstar": ordering_json(oriented.eig_astar().eigenvalues()),
            "S": io::matrix_to_json(&solved),
            "normalization": "alpha_d=1",
            "sequences": {
                "S": io::matrix_to_json(&formula),
                "proportional": scalar.is_some(),
                "scalar": scalar.as_ref().map(io::scalar_to_json),
            },
        }),
        exit: if scalar.is_some() { EXIT_OK } else { EXIT_INVALID },
    }
    .emit()
}

pub fn affine(path_p: &str, path_q: &str) -> u8 {
    let (bytes_p, p) = match load_validated("affine", path_p) {
        Ok(x) => x,
        Err(r) => return r.emit(),
    };
    let (bytes_q, q) = match load_validated("affine", path_q) {
        Ok(x) => x,
        Err(r) => return r.emit(),
    };
    let d = digest(&[&bytes_p, &bytes_q]);
    if p.field() != q.field() || p.dim() != q.dim() {
        return Report::usage("affine", Some(d), "pairs act on different spaces".into()).emit();
    }
    match affine_relation(&p, &q) {
        Ok(rel) => Report {
            command: "affine",
            digest: Some(d),
            payload: json!({
                "r": io::scalar_to_json(&rel.a.r),
                "s": io::scalar_to_json(&rel.a.s),
                "rstar": io::scalar_to_json(&rel.astar.r),
                "sstar": io::scalar_to_json(&rel.astar.s),
            }),
            exit: EXIT_OK,
        }
        .emit(),
        Err(e) => leonard_failure("affine", d, &e).emit(),
    }
}

pub fn generate(params_path: Option<&str>, random: Option<&[String]>) -> u8 {
    let (d, result) = if let Some(path) = params_path {
        let bytes = match read_input(path) {
            Ok(b) => b,
            Err(e) => return Report::usage("generate", None, e).emit(),
        };
        let d = digest(&[&bytes]);
        let params = match parse_json(&bytes, path).and_then(|v| io::params_from_json(&v)) {
            Ok(p) => p,
            Err(e) => return Report::usage("generate", Some(d), e).emit(),
        };
        if params.theta.len() > max_dim() {
            let msg = format!("dimension {} exceeds TDP_MAX_DIM = {}", params.theta.len(), max_dim());
            return Report::usage("generate", Some(d), msg).emit();
        }
        let pair = generate_split_form(&params);
        (d, pair.map(|pair| (params, pair)))
    } else {
        let args = random.expect("clap requires --params or --random");
        let d = digest(&[format!("random {} {} {}", args[0], args[1], args[2]).as_bytes()]);
        let parsed = io::field_from_flag(&args[0]).and_then(|f| {
            let diam: usize = args[1].parse().map_err(|_| format!("invalid diameter {:?}", args[1]))?;
            let seed: u64 = args[2].parse().map_err(|_| format!("invalid seed {:?}", args[2]))?;
            if diam + 1 > max_dim() {
                return Err(format!("dimension {} exceeds TDP_MAX_DIM = {}", diam + 1, max_dim()));
            }
            Ok((f, diam, seed))
        });
        let (field, diam, seed) = match parsed {
            Ok(x) => x,
            Err(e) => return Report::usage("generate", Some(d), e).emit(),
        };
        (d, random_leonard(field, diam, seed))
    };
    match result {
        Ok((params, pair)) => {
            let mut payload = io::candidate_to_json(pair.a(), pair.astar());
            payload["params"] = io::params_to_json(&params);
            Report {
                command: "generate",
                digest: Some(d),
                payload,
                exit: EXIT_OK,
            }
            .emit()
        }
        Err(e) => leonard_failure("generate", d, &e).emit(),
    }
}

pub struct SearchArgs {
    pub field: String,
    pub dim: usize,
    pub shape: String,
    pub budget: u64,
    pub seed: u64,
    pub mode: String,
    pub workers: usize,
}

fn parse_search(args: &SearchArgs) -> Result<SearchSpec, String> {
    let field = io::field_from_flag(&args.field)?;
    let shape = args
        .shape
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("invalid shape {:?}", args.shape)))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = match args.mode.as_str() {
        "exhaustive" => Mode::Exhaustive,
        "randomized" => Mode::Randomized,
        other => return Err(format!("unknown mode {other:?}")),
    };
    if args.workers == 0 {
        return Err("--workers must be at least 1".into());
    }
    if args.dim > max_dim() {
        return Err(format!("dimension {} exceeds TDP_MAX_DIM = {}", args.dim, max_dim()));
    }
    SearchSpec::new(field, args.dim, shape, args.budget, args.seed, mode).map_err(|e| e.to_string())
}

pub fn search(args: &SearchArgs) -> u8 {
    // worker count is deliberately not part of the digest
    let key = format!(
        "search field={} dim={} shape={} budget={} seed={} mode={}",
        args.field, args.dim, args.shape, args.budget, args.seed, args.mode
    );
    let d = digest(&[key.as_bytes()]);
    let spec = match parse_search(args) {
        Ok(s) => s,
        Err(e) => return Report::usage("search", Some(d), e).emit(),
    };
    let (start, end) = spec.range();
    let mut seen = BTreeSet::new();
    let mut tried = 0;
    let mut hits = 0;
    let started = std::time::Instant::now();
    let mut out = std::io::stdout().lock();
    let mut lo = start;
    while lo < end {
        let window = spec.window(lo, lo.saturating_add(SEARCH_BATCH));
        lo = window.range().1;
        let shards = partition_seeds(&window, args.workers);
        let parts = std::thread::scope(|scope| {
            let handles: Vec<_> = shards.iter().map(|s| scope.spawn(move || search_shape(s))).collect();
            handles.into_iter().map(|h| h.join().expect("search worker")).collect()
        });
        let merged = merge_results(parts);
        tried += merged.candidates_tried;
        for hit in merged.instances {
            if !seen.insert(hit.pair.astar().to_string()) {
                continue;
            }
            hits += 1;
            let mut payload = io::candidate_to_json(hit.pair.a(), hit.pair.astar());
            payload["counter"] = json!(hit.counter);
            payload["shape"] = json!(hit.pair.shape().rho());
            let line = Report {
                command: "search",
                digest: Some(d.clone()),
                payload,
                exit: EXIT_OK,
            };
            if writeln!(out, "{}", line.to_json()).is_err() {
                // reader went away
                return EXIT_OK;
            }
        }
        let _ = out.flush();
    }
    eprintln!(
        "tdp search: {tried} candidates, {hits} instances, {:.1}s",
        started.elapsed().as_secs_f64()
    );
    EXIT_OK
}
