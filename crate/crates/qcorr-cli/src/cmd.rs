//! The five subcommands: classify, gen, measure, decompose, batch.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qcorr_core::sampling::{random_gaussian, random_probability_vector, random_psd};
use qcorr_core::{
    classify, discord_a, extract_separable_ensemble, gmqd_a, gmqd_b, make_block_contraction,
    make_circulant, make_cq, make_diag_coherence, make_product, make_pure_schmidt, make_qc,
    min_a, min_b, operator_norm, random_density, random_ssppt_state, random_state,
    random_unitary, rng_from_seed, BipartiteState, Certificate, ClassificationReport,
    ClassifyOpts, ComplexMatrix, MeasureOpts, MeasureResult, SeparableEnsemble, Side,
    SpptError, TriState,
};
use serde_json::json;

use crate::error::CliError;
use crate::io;

/// Print one line to stdout, tolerating a closed pipe (`… | head` must not
/// panic the process).
fn emit(text: impl AsRef<str>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_ref().as_bytes());
    let _ = out.write_all(b"\n");
}

// ─── classify ──────────────────────────────────────────────────────

pub fn run_classify(
    file: &Path,
    json_out: bool,
    measures: bool,
    tol: f64,
) -> Result<(), CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::validation("--tol must be positive"));
    }
    let s = io::read_state(file)?;
    let opts = ClassifyOpts {
        tol,
        ppt_tol: tol / 10.0,
        include_measures: measures,
        ..ClassifyOpts::default()
    };
    let report = classify(&s, &opts)?;
    if json_out {
        emit(
            serde_json::to_string_pretty(&report_json(&report))
                .expect("report serialization cannot fail"),
        );
    } else {
        emit(report_text(&report));
    }
    Ok(())
}

/// Finite numbers pass through; non-finite residuals (a factorization that
/// refused outright) serialize as null.
fn json_num(x: f64) -> serde_json::Value {
    json!(x)
}

fn report_json(r: &ClassificationReport) -> serde_json::Value {
    let flag = |t: TriState| t.token();
    let evidence = |e: qcorr_core::FlagEvidence| {
        json!({"residual": json_num(e.residual), "tolerance": e.tolerance})
    };
    json!({
        "dim_a": r.dim_a,
        "dim_b": r.dim_b,
        "pure": r.pure,
        "product": flag(r.product),
        "zero_min_a": flag(r.zero_min_a),
        "zero_min_b": flag(r.zero_min_b),
        "cq": flag(r.cq),
        "qc": flag(r.qc),
        "ssppt_a": flag(r.ssppt_a),
        "ssppt_b": flag(r.ssppt_b),
        "ppt": flag(r.ppt),
        "evidence": {
            "product": evidence(r.evidence.product),
            "zero_min_a": evidence(r.evidence.zero_min_a),
            "zero_min_b": evidence(r.evidence.zero_min_b),
            "cq": evidence(r.evidence.cq),
            "qc": evidence(r.evidence.qc),
            "ssppt_a": evidence(r.evidence.ssppt_a),
            "ssppt_b": evidence(r.evidence.ssppt_b),
            "ppt": evidence(r.evidence.ppt),
        },
        "separability": {
            "verdict": r.separability.label(),
            "reason": match r.separability.reason_token() {
                "" => serde_json::Value::Null,
                token => json!(token),
            },
        },
        "downgrades": r.downgrades,
        "warnings": &r.warnings,
        "measures": r.measures.map(|m| json!({
            "min_a": m.min_a,
            "min_b": m.min_b,
            "gmqd_a": m.gmqd_a,
            "gmqd_b": m.gmqd_b,
            "discord_a": m.discord_a,
            "discord_b": m.discord_b,
        })),
        "ensemble": r.ensemble.as_ref().map(ensemble_json),
    })
}

fn matrix_json(m: &ComplexMatrix) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.rows())
        .map(|r| {
            let row: Vec<serde_json::Value> =
                (0..m.cols()).map(|c| json!([m[(r, c)].re, m[(r, c)].im])).collect();
            json!(row)
        })
        .collect();
    json!(rows)
}

fn ensemble_json(e: &SeparableEnsemble) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = e
        .terms
        .iter()
        .map(|t| json!({"p": t.p, "a": matrix_json(&t.a), "b": matrix_json(&t.b)}))
        .collect();
    json!({"dim_a": e.dim_a, "dim_b": e.dim_b, "residual": e.residual, "terms": terms})
}

fn report_text(r: &ClassificationReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "state {}x{}  pure={}",
        r.dim_a,
        r.dim_b,
        if r.pure { "yes" } else { "no" }
    );
    let rows = [
        ("product", r.product, r.evidence.product),
        ("zero_min_a", r.zero_min_a, r.evidence.zero_min_a),
        ("zero_min_b", r.zero_min_b, r.evidence.zero_min_b),
        ("cq", r.cq, r.evidence.cq),
        ("qc", r.qc, r.evidence.qc),
        ("ssppt_a", r.ssppt_a, r.evidence.ssppt_a),
        ("ssppt_b", r.ssppt_b, r.evidence.ssppt_b),
        ("ppt", r.ppt, r.evidence.ppt),
    ];
    for (name, state, evidence) in rows {
        let _ = writeln!(
            out,
            "  {name:<11} {:<9} residual {:<12.3e} tol {:.1e}",
            state.token(),
            evidence.residual,
            evidence.tolerance
        );
    }
    match r.separability.reason_token() {
        "" => {
            let _ = writeln!(out, "separability: {}", r.separability.label());
        }
        token => {
            let _ = writeln!(out, "separability: {} ({token})", r.separability.label());
        }
    }
    if r.downgrades > 0 {
        let _ = writeln!(out, "downgrades: {}", r.downgrades);
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if let Some(m) = r.measures {
        let _ = writeln!(out, "measures:");
        let _ = writeln!(out, "  min_a     = {:.12e}", m.min_a);
        let _ = writeln!(out, "  min_b     = {:.12e}", m.min_b);
        let _ = writeln!(out, "  gmqd_a    = {:.12e}", m.gmqd_a);
        let _ = writeln!(out, "  gmqd_b    = {:.12e}", m.gmqd_b);
        let _ = match m.discord_a {
            Some(v) => writeln!(out, "  discord_a = {v:.12e}"),
            None => writeln!(out, "  discord_a = (unsupported at this dimension)"),
        };
        let _ = match m.discord_b {
            Some(v) => writeln!(out, "  discord_b = {v:.12e}"),
            None => writeln!(out, "  discord_b = (unsupported at this dimension)"),
        };
    }
    out.truncate(out.trim_end().len());
    out
}

// ─── gen ───────────────────────────────────────────────────────────

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{p}` is not a number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err("expected `re` or `re,im`".into()),
    }
}

fn random_contraction(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<ComplexMatrix, CliError> {
    let g = random_gaussian(n, n, rng);
    let norm = operator_norm(&g)?;
    Ok(g.scale_re(0.95 / norm.max(1e-300)))
}

pub struct CqParams {
    pub da: usize,
    pub db: usize,
    pub terms: Option<usize>,
    pub seed: u64,
}

/// CQ when `classical_on_a`, QC otherwise (the classical register side).
fn gen_classical_quantum(p: &CqParams, classical_on_a: bool) -> Result<BipartiteState, CliError> {
    let (classical_dim, quantum_dim) = if classical_on_a {
        (p.da, p.db)
    } else {
        (p.db, p.da)
    };
    let m = p.terms.unwrap_or_else(|| classical_dim.min(2));
    if m == 0 || m > classical_dim {
        return Err(CliError::validation(format!(
            "--terms must be in 1..={classical_dim} for these dimensions"
        )));
    }
    let mut rng = rng_from_seed(p.seed);
    let weights = random_probability_vector(m, &mut rng);
    let kets = random_unitary(classical_dim, &mut rng).block(0, 0, classical_dim, m);
    let sigmas: Vec<ComplexMatrix> = (0..m)
        .map(|_| random_density(quantum_dim, quantum_dim, &mut rng))
        .collect();
    let state = if classical_on_a {
        make_cq(&weights, &kets, &sigmas)?
    } else {
        make_qc(&weights, &kets, &sigmas)?
    };
    Ok(state)
}

pub enum GenSpec {
    Product { da: usize, db: usize, seed: u64 },
    Cq(CqParams),
    Qc(CqParams),
    Circulant { a11: f64, a22: f64, b11: f64, b22: f64, a12: Complex64, b12: Complex64 },
    Example1 { n: usize, seed: u64 },
    Example3 { a: f64, b: f64, c: f64, d: f64, e: Complex64, f: Complex64, g: Complex64 },
    PureSchmidt { lambdas: Vec<f64> },
    Random { da: usize, db: usize, rank: Option<usize>, seed: u64 },
    SspptRandom { da: usize, db: usize, side: Side, seed: u64 },
}

pub fn run_gen(spec: &GenSpec, out: &Path) -> Result<(), CliError> {
    let s = build_state(spec)?;
    io::write_state(out, &s)?;
    emit(format!(
        "wrote {}x{} state to {}",
        s.dim_a(),
        s.dim_b(),
        out.display()
    ));
    Ok(())
}

fn build_state(spec: &GenSpec) -> Result<BipartiteState, CliError> {
    match *spec {
        GenSpec::Product { da, db, seed } => {
            let mut rng = rng_from_seed(seed);
            let a = random_density(da, da, &mut rng);
            let b = random_density(db, db, &mut rng);
            Ok(make_product(&a, &b)?)
        }
        GenSpec::Cq(ref p) => gen_classical_quantum(p, true),
        GenSpec::Qc(ref p) => gen_classical_quantum(p, false),
        GenSpec::Circulant { a11, a22, b11, b22, a12, b12 } => {
            Ok(make_circulant(a11, a22, b11, b22, a12, b12)?)
        }
        GenSpec::Example1 { n, seed } => {
            if n == 0 {
                return Err(CliError::validation("--n must be at least 1"));
            }
            let mut rng = rng_from_seed(seed);
            let rho11 = random_psd(n, n, &mut rng);
            let d = random_contraction(n, &mut rng)?;
            let t = random_contraction(n, &mut rng)?;
            Ok(make_block_contraction(&rho11, &d, &t)?)
        }
        GenSpec::Example3 { a, b, c, d, e, f, g } => Ok(make_diag_coherence(a, b, c, d, e, f, g)?),
        GenSpec::PureSchmidt { ref lambdas } => {
            if lambdas.is_empty() {
                return Err(CliError::validation("--l needs at least one coefficient"));
            }
            if lambdas.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
                return Err(CliError::validation(
                    "--l coefficients must be finite and positive",
                ));
            }
            let mut l = lambdas.clone();
            l.sort_by(|x, y| y.partial_cmp(x).expect("coefficients are finite"));
            let norm = l.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in l.iter_mut() {
                *x /= norm;
            }
            Ok(make_pure_schmidt(&l)?.to_density()?)
        }
        GenSpec::Random { da, db, rank, seed } => {
            let rank = rank.unwrap_or(da * db);
            Ok(random_state(da, db, rank, seed)?)
        }
        GenSpec::SspptRandom { da, db, side, seed } => {
            if da < 2 || db < 2 {
                return Err(CliError::validation("--da and --db must be at least 2"));
            }
            Ok(random_ssppt_state(da, db, side, seed))
        }
    }
}

// ─── measure ───────────────────────────────────────────────────────

#[derive(Clone, Copy)]
pub enum WhichMeasure {
    MinA,
    MinB,
    GmqdA,
    GmqdB,
    DiscordA,
}

pub fn run_measure(
    file: &Path,
    which: WhichMeasure,
    seed: Option<u64>,
    restarts: Option<usize>,
) -> Result<(), CliError> {
    let s = io::read_state(file)?;
    let defaults = MeasureOpts::default();
    let opts = MeasureOpts {
        seed: seed.unwrap_or(defaults.seed),
        restarts: restarts.unwrap_or(defaults.restarts),
        ..defaults
    };
    let result: MeasureResult = match which {
        WhichMeasure::MinA => min_a(&s, &opts)?,
        WhichMeasure::MinB => min_b(&s, &opts)?,
        WhichMeasure::GmqdA => gmqd_a(&s, &opts)?,
        WhichMeasure::GmqdB => gmqd_b(&s, &opts)?,
        WhichMeasure::DiscordA => discord_a(&s, &opts)?,
    };
    let certificate = match result.certificate {
        Certificate::Exact => "exact",
        Certificate::Bound => "bound",
    };
    eprintln!(
        "certificate={certificate} iterations={} restarts_agreeing={} seed={}",
        result.iterations, result.restarts_agreeing, result.seed
    );
    emit(format!("{}", result.value));
    Ok(())
}

// ─── decompose ─────────────────────────────────────────────────────

fn side_letter(side: Side) -> char {
    match side {
        Side::UpToA => 'a',
        Side::UpToB => 'b',
    }
}

pub fn run_decompose(file: &Path, side: Option<Side>, out: &Path) -> Result<(), CliError> {
    let s = io::read_state(file)?;
    let tol = 1e-8;
    let (used, ensemble) = match side {
        Some(side) => (side, extract_separable_ensemble(&s, side, tol)?),
        None => {
            // No side requested: certificate side first, mirror second.
            match extract_separable_ensemble(&s, Side::UpToB, tol) {
                Ok(e) => (Side::UpToB, e),
                Err(SpptError::NotSsppt { .. })
                | Err(SpptError::ReconstructionFailed { .. })
                | Err(SpptError::NotPsdResidual { .. }) => match extract_separable_ensemble(
                    &s,
                    Side::UpToA,
                    tol,
                ) {
                    Ok(e) => (Side::UpToA, e),
                    Err(SpptError::NotSsppt { residual }) => {
                        return Err(CliError::validation(format!(
                            "state is not SSPPT on either side (closest residual {residual:.3e})"
                        )))
                    }
                    Err(e) => return Err(e.into()),
                },
                Err(e) => return Err(e.into()),
            }
        }
    };
    io::write_ensemble(out, &ensemble)?;
    emit(format!(
        "side {}: {} terms, reconstruction residual {:.3e}",
        side_letter(used),
        ensemble.terms.len(),
        ensemble.residual
    ));
    Ok(())
}

// ─── batch ─────────────────────────────────────────────────────────

pub fn run_batch(dir: &Path, report_path: &Path) -> Result<(), CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::validation(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort_by_key(|p| p.file_name().map(|n| n.to_owned()));

    let mut writer = csv::Writer::from_path(report_path)
        .map_err(|e| CliError::validation(format!("{}: {e}", report_path.display())))?;
    writer
        .write_record([
            "file", "dim_a", "dim_b", "product", "zero_min_a", "zero_min_b", "cq", "qc",
            "ssppt_a", "ssppt_b", "ppt", "separability", "reason",
        ])
        .map_err(|e| CliError::validation(e.to_string()))?;

    let opts = ClassifyOpts::default();
    for path in &files {
        let s = io::read_state(path)?;
        let r = classify(&s, &opts).map_err(|e| {
            let mapped: CliError = e.into();
            CliError {
                code: mapped.code,
                message: format!("{}: {}", path.display(), mapped.message),
            }
        })?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        writer
            .write_record([
                name.as_str(),
                &r.dim_a.to_string(),
                &r.dim_b.to_string(),
                r.product.token(),
                r.zero_min_a.token(),
                r.zero_min_b.token(),
                r.cq.token(),
                r.qc.token(),
                r.ssppt_a.token(),
                r.ssppt_b.token(),
                r.ppt.token(),
                r.separability.label(),
                r.separability.reason_token(),
            ])
            .map_err(|e| CliError::validation(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::validation(e.to_string()))?;
    emit(format!(
        "classified {} states into {}",
        files.len(),
        report_path.display()
    ));
    Ok(())
}
