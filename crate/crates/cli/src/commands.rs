use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use fgcount::census::{
    burnside_class_table, class_slice_to_json, cumulative_counts, dp_count_by_homology, dp_table,
    fourier_count_by_homology, oracle_count_by_homology, oracle_table, orbit_class_table, restricted_count,
    slice_from_json, slice_to_csv, slice_to_json, ApproxClassCounts, ClassCountTable, CountTable, DenseRow,
    Guard, DEFAULT_FOURIER_TOLERANCE,
};
use fgcount::experiments::{
    coprime_experiment, identity_regression_suite, local_limit_error_curve, progression_experiment,
    ExperimentReport, Level, RegressionConfig,
};
use fgcount::limits::{
    ball_density_estimate, gaussian_local_limit_prediction, lattice_gaussian_sum, surface_predictor_sum,
    LatticeSet, QuadraticNorm, SumOptions, SumPath,
};
use fgcount::spectral::{ihara_identity_check, CharacterPoint, IharaCheck};
use fgcount::{Error, HomologyVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::args::{ClassMode, Command, Engine, Experiment, Format, Global, LevelArg};
use crate::cache::{Cache, CacheKey};
use crate::error::{CliError, EXIT_REFUSED, EXIT_VERDICT_FAILED};

/// What a command prints and the status it exits with.
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

pub const PREDICT_SCHEMA: &str = "fgcount.predict/1";
pub const DENSITY_SCHEMA: &str = "fgcount.density/1";
pub const IDENTITY_SCHEMA: &str = "fgcount.identity/1";
const IDENTITY_TOLERANCE: f64 = 1e-9;

fn require_m(g: &Global) -> Result<usize, CliError> {
    match g.m {
        Some(0) => Err(CliError::Usage("--m must be at least 1".into())),
        Some(m) => Ok(m),
        None => Err(CliError::Usage("--m is required".into())),
    }
}

fn guard(g: &Global) -> Guard {
    g.guard.map_or_else(|| Guard::default_for(g.k), Guard::new)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn to_json_line(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

pub fn run(g: &Global, command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Count { radius, cumulative } => count(g, *radius, *cumulative).map(Output::ok),
        Command::Classes { method } => classes(g, *method).map(Output::ok),
        Command::Predict { beta } => predict(g, beta).map(Output::ok),
        Command::Density {
            norm,
            dim,
            radius,
            t,
            sigma2,
            point_budget,
        } => density(g, norm.as_deref(), *dim, *radius, *t, *sigma2, *point_budget).map(Output::ok),
        Command::SurfacePredictor {
            genus,
            norm,
            t,
            point_budget,
        } => surface(g, *genus, norm.as_deref(), *t, *point_budget).map(Output::ok),
        Command::Experiment { which, out_dir } => experiment(g, which, out_dir.as_deref()),
        Command::IdentityCheck { eps, characters, seed } => identity_check(g, eps.as_deref(), *characters, *seed),
    }
}

fn engine_row(g: &Global, m: usize, radius: Option<usize>) -> Result<DenseRow, CliError> {
    let row = match g.engine {
        Engine::Oracle => oracle_count_by_homology(g.k, m, guard(g))?,
        Engine::Dp => return Ok(dp_count_by_homology(g.k, m, radius)?),
        Engine::Fourier => fourier_count_by_homology(g.k, m, DEFAULT_FOURIER_TOLERANCE)?.row,
    };
    Ok(match radius {
        Some(r) if r < row.half_width() => row.narrowed(r),
        _ => row,
    })
}

fn engine_table(g: &Global, m: usize, radius: Option<usize>) -> Result<CountTable, CliError> {
    match g.engine {
        Engine::Dp => Ok(dp_table::<u128>(g.k, m, radius)?),
        Engine::Oracle if radius.is_none() => Ok(oracle_table(g.k, m, guard(g))?),
        _ => {
            let rows = (1..=m).map(|n| engine_row(g, n, radius)).collect::<Result<Vec<_>, _>>()?;
            Ok(CountTable::from_rows(g.k, radius, rows)?)
        }
    }
}

/// Computes the slice, or reads it from the cache when one is configured.
fn count_slice(g: &Global, m: usize, radius: Option<usize>, cumulative: bool) -> Result<DenseRow, CliError> {
    let key = CacheKey {
        kind: if cumulative { "cumulative" } else { "count" },
        rank: g.k,
        length: m,
        engine: g.engine.name(),
        radius,
    };
    let cache = g.cache_dir.as_deref().map(Cache::new);
    if let Some(cache) = &cache {
        if let Some(text) = cache.get(&key)? {
            // An unreadable entry is recomputed and overwritten.
            if let Ok(row) = slice_from_json(&text) {
                return Ok(row);
            }
        }
    }
    let row = if cumulative {
        let table = cumulative_counts(&engine_table(g, m, radius)?)?;
        table.row(m).cloned().expect("table covers m")
    } else {
        engine_row(g, m, radius)?
    };
    if let Some(cache) = &cache {
        cache.put(&key, &slice_to_json(&row, m))?;
    }
    Ok(row)
}

fn restrict(row: &DenseRow, set: &LatticeSet) -> Result<DenseRow, CliError> {
    if matches!(set, LatticeSet::Full) {
        return Ok(row.clone());
    }
    let mut out = DenseRow::zeros(row.rank(), row.half_width());
    let mut err = None;
    row.for_each_nonzero(|b, c| {
        if set.contains(b) {
            if let Err(e) = out.set(b, c) {
                err = Some(e);
            }
        }
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(out),
    }
}

fn count(g: &Global, radius: Option<usize>, cumulative: bool) -> Result<String, CliError> {
    let m = require_m(g)?;
    let set = &g.set;
    let row = restrict(&count_slice(g, m, radius, cumulative)?, set)?;
    Ok(match g.format {
        Format::Json => slice_to_json(&row, m),
        Format::Csv => slice_to_csv(&row, m),
        Format::Text => {
            let mut out = String::new();
            row.for_each_nonzero(|b, c| {
                let b: Vec<String> = b.iter().map(i64::to_string).collect();
                writeln!(out, "({}) {c}", b.join(",")).unwrap();
            });
            writeln!(out, "total {}", row.total()?).unwrap();
            out
        }
    })
}

fn classes(g: &Global, method: ClassMode) -> Result<String, CliError> {
    let m = require_m(g)?;
    let set = &g.set;
    let table: ClassCountTable = match method {
        ClassMode::Orbit => orbit_class_table(g.k, m, guard(g))?,
        ClassMode::Burnside => burnside_class_table(&dp_table::<u128>(g.k, m, None)?)?,
        ClassMode::Approx => {
            let approx = ApproxClassCounts::from_words(&dp_table::<u128>(g.k, m, None)?)?;
            return Ok(match g.format {
                Format::Json => to_json_line(&json!({
                    "schema": "fgcount.classes-approx/1",
                    "rank": g.k,
                    "length": m,
                    "exact": false,
                    "total": approx.lengths[m - 1],
                    "cumulative": approx.pi(m),
                })),
                Format::Csv => {
                    let mut out = String::from("m,total,cumulative\n");
                    for n in 1..=m {
                        writeln!(out, "{n},{},{}", approx.lengths[n - 1], approx.pi(n)).unwrap();
                    }
                    out
                }
                Format::Text => format!(
                    "approximate classes (words / m), k={} m={m}\ntotal {:.6}\ncumulative {:.6}\n",
                    g.k,
                    approx.lengths[m - 1],
                    approx.pi(m)
                ),
            });
        }
    };
    let in_set = if matches!(set, LatticeSet::Full) {
        None
    } else {
        Some(restricted_count(&table, set, m)?)
    };
    Ok(match g.format {
        Format::Json => {
            let text = class_slice_to_json(&table, m)?;
            match in_set {
                None => text,
                Some(c) => {
                    let mut doc: serde_json::Value = serde_json::from_str(&text).expect("own output parses");
                    doc["set"] = json!(set.to_string());
                    doc["cumulative_in_set"] = json!(c.to_string());
                    to_json_line(&doc)
                }
            }
        }
        Format::Csv => slice_to_csv(table.row(m).expect("table covers m"), m),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "classes of length {m}: {}", table.length_count(m)?).unwrap();
            writeln!(out, "classes of length <= {m}: {}", table.pi(m)?).unwrap();
            if let Some(c) = in_set {
                writeln!(out, "classes of length <= {m} in {set}: {c}").unwrap();
            }
            out
        }
    })
}

#[derive(Serialize)]
struct Prediction {
    schema: &'static str,
    rank: usize,
    length: usize,
    beta: Vec<i64>,
    prediction: f64,
    /// Decimal string, absent when no engine can produce it.
    exact: Option<String>,
    exact_available: bool,
    ratio: Option<f64>,
    relative_error: Option<f64>,
    exact_match: bool,
    note: String,
}

fn predict(g: &Global, beta: &str) -> Result<String, CliError> {
    let m = require_m(g)?;
    let beta = HomologyVector::parse(beta)?;
    if beta.rank() != g.k {
        return Err(Error::RankMismatch {
            expected: g.k,
            actual: beta.rank(),
        }
        .into());
    }
    let prediction = gaussian_local_limit_prediction(g.k, beta.coords(), m);
    let radius = beta.max_abs().max(0) as usize;
    let (exact, note) = match dp_count_by_homology(g.k, m, Some(radius.min(m))) {
        Ok(row) => (Some(row.get(beta.coords())), String::new()),
        Err(e @ (Error::Overflow { .. } | Error::PointBudget { .. } | Error::GuardExceeded { .. })) => {
            (None, format!("exact count unavailable: {e}"))
        }
        Err(e) => return Err(e.into()),
    };
    let mut p = Prediction {
        schema: PREDICT_SCHEMA,
        rank: g.k,
        length: m,
        beta: beta.coords().to_vec(),
        prediction,
        exact: exact.map(|c| c.to_string()),
        exact_available: exact.is_some(),
        ratio: None,
        relative_error: None,
        exact_match: false,
        note,
    };
    if let Some(c) = exact {
        if c == 0 && prediction == 0.0 {
            p.ratio = Some(1.0);
            p.relative_error = Some(0.0);
            p.exact_match = true;
            p.note = "parity forbids this vector; both values vanish".into();
        } else if c > 0 {
            let c = c as f64;
            p.ratio = Some(prediction / c);
            p.relative_error = Some((prediction - c).abs() / c);
        }
    }
    Ok(match g.format {
        Format::Json => to_json_line(&p),
        Format::Csv => format!(
            "m,beta,prediction,exact,ratio\n{m},\"{}\",{},{},{}\n",
            beta,
            p.prediction,
            p.exact.as_deref().unwrap_or(""),
            p.ratio.map_or(String::new(), |r| r.to_string())
        ),
        Format::Text => {
            let mut out = format!("k={} m={m} beta={beta}\nprediction {:.6e}\n", g.k, p.prediction);
            match &p.exact {
                Some(c) => writeln!(out, "exact {c}").unwrap(),
                None => writeln!(out, "exact unavailable").unwrap(),
            }
            if let Some(r) = p.ratio {
                writeln!(out, "ratio {r:.6}").unwrap();
            }
            if !p.note.is_empty() {
                writeln!(out, "note {}", p.note).unwrap();
            }
            out
        }
    })
}

fn parse_norm(text: Option<&str>, dim: Option<usize>, default_dim: usize) -> Result<QuadraticNorm, CliError> {
    let norm = match text {
        Some(t) => QuadraticNorm::parse(t)?,
        None => QuadraticNorm::identity(dim.unwrap_or(default_dim))?,
    };
    if let Some(d) = dim {
        if d != norm.dim() {
            return Err(CliError::Usage(format!("--dim {d} disagrees with a {}-dimensional norm", norm.dim())));
        }
    }
    Ok(norm)
}

fn render_value(g: &Global, doc: serde_json::Value, text_lines: &[(&str, String)]) -> String {
    match g.format {
        Format::Json => to_json_line(&doc),
        Format::Csv => {
            let keys: Vec<&str> = text_lines.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = text_lines.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        Format::Text => text_lines.iter().map(|(k, v)| format!("{k} {v}\n")).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn density(
    g: &Global,
    norm: Option<&str>,
    dim: Option<usize>,
    radius: Option<f64>,
    t: Option<f64>,
    sigma2: f64,
    point_budget: u128,
) -> Result<String, CliError> {
    let set = &g.set;
    let norm = parse_norm(norm, dim, g.k)?;
    let known = set.known_density(norm.dim(), Some(&norm));
    let known_value = known.as_ref().map_or(String::new(), |d| d.value.to_string());
    match (radius, t) {
        (Some(r), None) => {
            let ball = ball_density_estimate(set, &norm, r, point_budget)?;
            let doc = json!({
                "schema": DENSITY_SCHEMA,
                "method": "ball",
                "set": set.to_string(),
                "dim": norm.dim(),
                "radius": ball.radius,
                "in_set": ball.in_set.to_string(),
                "in_ball": ball.in_ball.to_string(),
                "ratio": ball.ratio,
                "known_density": known,
            });
            Ok(render_value(
                g,
                doc,
                &[
                    ("radius", ball.radius.to_string()),
                    ("in_set", ball.in_set.to_string()),
                    ("in_ball", ball.in_ball.to_string()),
                    ("ratio", ball.ratio.to_string()),
                    ("known_density", known_value),
                ],
            ))
        }
        (None, Some(t)) => {
            let sum = lattice_gaussian_sum(
                &norm,
                t,
                set,
                sigma2,
                SumOptions {
                    path: SumPath::Auto,
                    point_budget,
                },
            )?;
            let doc = json!({
                "schema": DENSITY_SCHEMA,
                "method": "gaussian-sum",
                "set": set.to_string(),
                "dim": norm.dim(),
                "t": t,
                "sigma2": sigma2,
                "sum": sum,
                "known_density": known,
            });
            Ok(render_value(
                g,
                doc,
                &[
                    ("t", t.to_string()),
                    ("value", sum.value.to_string()),
                    ("half_width", sum.half_width.to_string()),
                    ("fixed", sum.fixed.map_or(String::new(), |f| f.to_string())),
                    ("known_density", known_value),
                ],
            ))
        }
        _ => Err(CliError::Usage("give exactly one of --radius or --t".into())),
    }
}

fn surface(g: &Global, genus: usize, norm: Option<&str>, t: f64, point_budget: u128) -> Result<String, CliError> {
    let set = &g.set;
    let norm = parse_norm(norm, None, 2 * genus)?;
    let sum = surface_predictor_sum(
        genus,
        &norm,
        set,
        t,
        SumOptions {
            path: SumPath::Auto,
            point_budget,
        },
    )?;
    let known = set.known_density(norm.dim(), Some(&norm));
    let known_value = known.as_ref().map_or(String::new(), |d| d.value.to_string());
    let doc = json!({
        "schema": DENSITY_SCHEMA,
        "method": "surface-predictor",
        "genus": genus,
        "set": set.to_string(),
        "t": t,
        "sum": sum,
        "known_density": known,
    });
    Ok(render_value(
        g,
        doc,
        &[
            ("genus", genus.to_string()),
            ("t", t.to_string()),
            ("value", sum.value.to_string()),
            ("known_density", known_value),
        ],
    ))
}

fn report_output(g: &Global, report: &ExperimentReport, out_dir: Option<&Path>) -> Result<Output, CliError> {
    report.validate()?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, body) in [("report.json", report.to_json()), ("series.csv", report.series_csv())] {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        }
    }
    let stdout = match g.format {
        Format::Json => report.to_json(),
        Format::Csv => report.series_csv(),
        Format::Text => report.to_text(),
    };
    let code = if report.has_failures() {
        EXIT_VERDICT_FAILED
    } else if report.has_refusals() {
        EXIT_REFUSED
    } else {
        0
    };
    Ok(Output { stdout, code })
}

fn experiment(g: &Global, which: &Experiment, out_dir: Option<&Path>) -> Result<Output, CliError> {
    let report = match which {
        Experiment::Coprime { level } => {
            let level = match level {
                LevelArg::Word => Level::Word,
                LevelArg::Class => Level::Class,
            };
            coprime_experiment(g.k, g.m_max.unwrap_or(30), level)?
        }
        Experiment::Progression { l, a } => {
            let moduli = parse_list(l, "--l")?;
            let residues = parse_list(a, "--a")?;
            progression_experiment(g.k, &moduli, &residues, g.m_max.unwrap_or(24))?
        }
        Experiment::LocalLimit { lengths } => {
            let lengths = parse_list(lengths, "--lengths")?
                .into_iter()
                .map(|m| usize::try_from(m).map_err(|_| CliError::Usage(format!("bad length {m}"))))
                .collect::<Result<Vec<_>, _>>()?;
            local_limit_error_curve(g.k, &lengths, &g.set)?
        }
        Experiment::Regression { reduced, seed } => {
            let mut config = if *reduced {
                RegressionConfig::reduced_for(g.k)
            } else {
                RegressionConfig::default_for(g.k)
            };
            if let Some(s) = seed {
                config.seed = *s;
            }
            if let Some(gl) = g.guard {
                config.guard = Guard::new(gl);
            }
            identity_regression_suite(g.k, config)?
        }
    };
    report_output(g, &report, out_dir)
}

fn identity_check(g: &Global, eps: Option<&str>, characters: usize, seed: u64) -> Result<Output, CliError> {
    let order = g.m.unwrap_or(8);
    let points: Vec<CharacterPoint> = match eps {
        Some(text) => {
            let coords = text
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("bad --eps entry {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != g.k {
                return Err(Error::RankMismatch {
                    expected: g.k,
                    actual: coords.len(),
                }
                .into());
            }
            vec![CharacterPoint::new(coords)]
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..characters)
                .map(|_| CharacterPoint::new((0..g.k).map(|_| rng.random::<f64>()).collect()))
                .collect()
        }
    };
    let checks = points
        .iter()
        .map(|p| ihara_identity_check(p, g.k, order, guard(g)))
        .collect::<Result<Vec<IharaCheck>, _>>()?;
    let worst = checks.iter().map(|c| c.max_discrepancy).fold(0.0f64, f64::max);
    let pass = worst <= IDENTITY_TOLERANCE;
    let stdout = match g.format {
        Format::Json => to_json_line(&json!({
            "schema": IDENTITY_SCHEMA,
            "rank": g.k,
            "order": order,
            "tolerance": IDENTITY_TOLERANCE,
            "checks": checks,
            "worst": worst,
            "pass": pass,
        })),
        Format::Csv => {
            let mut out = String::from("character,m,discrepancy\n");
            for (i, c) in checks.iter().enumerate() {
                for (j, d) in c.normalized_discrepancies.iter().enumerate() {
                    writeln!(out, "{i},{},{d}", j + 1).unwrap();
                }
            }
            out
        }
        Format::Text => format!(
            "{} characters, k={} m<={order}: worst normalized discrepancy {worst:.2e} [{}]\n",
            checks.len(),
            g.k,
            if pass { "PASS" } else { "FAIL" }
        ),
    };
    Ok(Output {
        stdout,
        code: if pass { 0 } else { EXIT_VERDICT_FAILED },
    })
}
