//! Command-line front end. `run` is the whole program minus process exit,
//! so tests can drive it directly.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::geometry::{self, Point2};
use crate::halfint::HalfInt;
use crate::invariant::{l_matrix, l_matrix_exact, BetaVector, LMethod, SpinPair};
use crate::oracle;
use crate::sep3n::{self, Classifier, ClassifierOptions, VerdictClass};
use crate::surd::SqrtRational;
use crate::wigner::{self, triangle_ok};

pub const SCHEMA_VERSION: u32 = 1;
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Methods must agree to this for `lmatrix` to exit 0.
pub const TOL_LMATRIX: f64 = 1e-10;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const STRICT_ZERO: i32 = 3;
    pub const NPT_ENTANGLED: i32 = 10;
    pub const PPT_ENTANGLED: i32 = 11;
    pub const UNKNOWN: i32 = 12;
    pub const NOT_A_STATE: i32 = 13;
}

#[derive(Parser, Debug)]
#[command(name = "rotinv", version, about = "Rotationally invariant two-spin states: symbols, geometry, separability")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum SymbolKind {
    #[value(name = "3j")]
    #[serde(rename = "3j")]
    ThreeJ,
    #[value(name = "6j")]
    #[serde(rename = "6j")]
    SixJ,
    #[value(name = "cg")]
    #[serde(rename = "cg")]
    Cg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Trace,
    SixJ,
    ClosedRows,
}

impl From<MethodArg> for LMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Trace => LMethod::Trace,
            MethodArg::SixJ => LMethod::SixJ,
            MethodArg::ClosedRows => LMethod::ClosedRows,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact 3-j, 6-j or Clebsch-Gordan value. Arguments are integers or
    /// fractions like 3/2. For cg the order is j1 m1 j2 m2 J M.
    Wigner {
        kind: SymbolKind,
        #[arg(allow_hyphen_values = true)]
        a1: String,
        #[arg(allow_hyphen_values = true)]
        a2: String,
        #[arg(allow_hyphen_values = true)]
        a3: String,
        #[arg(allow_hyphen_values = true)]
        a4: String,
        #[arg(allow_hyphen_values = true)]
        a5: String,
        #[arg(allow_hyphen_values = true)]
        a6: String,
        /// Exit 3 when a selection rule forces the value to zero.
        #[arg(long)]
        strict: bool,
    },
    /// The orthogonal matrix L taking alpha to beta coordinates.
    Lmatrix {
        j1: String,
        j2: String,
        #[arg(long, value_enum, default_value_t = MethodArg::SixJ)]
        method: MethodArg,
    },
    /// Vertices and regions of the 3 x N picture.
    Geometry {
        #[arg(short = 'N', long = "n")]
        n: usize,
        /// Product-state samples to include (requires --seed).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the point table as CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest eigenvalue of H(lambda) on a uniform grid.
    Epsilon {
        #[arg(short = 'N', long = "n")]
        n: usize,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a 3 x N invariant state given p_J or (beta1, beta2).
    Classify {
        #[arg(short = 'N', long = "n")]
        n: usize,
        /// "p_{j2-1},p_{j2},p_{j2+1}"
        #[arg(long, conflicts_with = "beta", allow_hyphen_values = true)]
        p: Option<String>,
        /// "beta1,beta2"
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Adds seeded product-state samples to the separable inner hull.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000, requires = "seed")]
        samples: usize,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: msg.into(),
            code: exit::USAGE,
        }
    }
}

#[derive(Serialize)]
struct Record {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    inputs: Value,
    seed: Option<u64>,
    tolerance: f64,
    results: Value,
}

/// CSV body: one header and rows of preformatted cells.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }
}

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

struct Produced {
    record: Record,
    table: Table,
    code: i32,
    stderr: String,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code: exit::OK,
                },
                _ => Outcome::usage(rendered),
            };
        }
    };
    let format = cli.format;
    let produced = match cli.command {
        Command::Wigner {
            kind,
            a1,
            a2,
            a3,
            a4,
            a5,
            a6,
            strict,
        } => cmd_wigner(kind, &[a1, a2, a3, a4, a5, a6], strict),
        Command::Lmatrix { j1, j2, method } => cmd_lmatrix(&j1, &j2, method),
        Command::Geometry { n, samples, seed, out } => cmd_geometry(n, samples, seed, out),
        Command::Epsilon { n, grid, out } => cmd_epsilon(n, grid, out),
        Command::Classify { n, p, beta, seed, samples } => cmd_classify(n, p, beta, seed, samples),
    };
    match produced {
        Ok(p) => {
            let stdout = match format {
                Format::Json => serde_json::to_string_pretty(&p.record).expect("serializable") + "\n",
                Format::Csv => p.table.render(),
            };
            Outcome {
                stdout,
                stderr: p.stderr,
                code: p.code,
            }
        }
        Err(Failure::Usage(m)) => Outcome::usage(format!("error: {m}\n")),
        Err(Failure::Runtime(m)) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
            code: exit::FAILURE,
        },
    }
}

fn record(command: &'static str, inputs: Value, seed: Option<u64>, tolerance: f64, results: Value) -> Record {
    Record {
        schema_version: SCHEMA_VERSION,
        tool: "rotinv",
        version: VERSION,
        command,
        inputs,
        seed,
        tolerance,
        results,
    }
}

fn parse_spins(args: &[String]) -> Result<Vec<HalfInt>, Failure> {
    args.iter().map(|a| a.parse::<HalfInt>().map_err(Failure::from)).collect()
}

fn surd_json(s: &SqrtRational) -> Value {
    json!({
        "exact": s.to_string(),
        "sign": s.sign(),
        "radicand": s.radicand().to_string(),
        "value": s.to_f64(),
    })
}

/// Which selection rule, if any, forces the symbol to vanish.
fn selection_rule(kind: SymbolKind, v: &[HalfInt]) -> Option<String> {
    match kind {
        SymbolKind::ThreeJ => {
            let (j, m) = (&v[..3], &v[3..]);
            if (m[0] + m[1] + m[2]).twice() != 0 {
                return Some("m1 + m2 + m3 != 0".into());
            }
            if !triangle_ok(j[0], j[1], j[2]) {
                return Some("triangle rule fails for (j1, j2, j3)".into());
            }
            if m.iter().all(|x| x.twice() == 0) && ((j[0] + j[1] + j[2]).twice() / 2) % 2 != 0 {
                return Some("all m = 0 with odd j1 + j2 + j3".into());
            }
            None
        }
        SymbolKind::Cg => {
            if (v[1] + v[3] - v[5]).twice() != 0 {
                return Some("m1 + m2 != M".into());
            }
            if !triangle_ok(v[0], v[2], v[4]) {
                return Some("triangle rule fails for (j1, j2, J)".into());
            }
            None
        }
        SymbolKind::SixJ => {
            let triads = [(0, 1, 2), (0, 4, 5), (3, 1, 5), (3, 4, 2)];
            triads
                .iter()
                .find(|&&(a, b, c)| !triangle_ok(v[a], v[b], v[c]))
                .map(|t| format!("triangle rule fails for arguments {:?}", (t.0 + 1, t.1 + 1, t.2 + 1)))
        }
    }
}

fn cmd_wigner(kind: SymbolKind, args: &[String], strict: bool) -> Result<Produced, Failure> {
    let v = parse_spins(args)?;
    let value = match kind {
        SymbolKind::ThreeJ => wigner::wigner_3j(v[0], v[1], v[2], v[3], v[4], v[5])?,
        SymbolKind::SixJ => wigner::wigner_6j(v[0], v[1], v[2], v[3], v[4], v[5])?,
        SymbolKind::Cg => wigner::clebsch_gordan(v[0], v[1], v[2], v[3], v[4], v[5])?,
    };
    let rule = selection_rule(kind, &v);
    let mut stderr = String::new();
    let code = match (&rule, strict) {
        (Some(r), true) => {
            stderr = format!("selection rule forces zero: {r}\n");
            exit::STRICT_ZERO
        }
        _ => exit::OK,
    };
    let echoed: Vec<String> = v.iter().map(|h| h.to_string()).collect();
    let mut results = surd_json(&value);
    results["selection_rule_zero"] = json!(rule);
    let mut table = Table::new(&["kind", "a1", "a2", "a3", "a4", "a5", "a6", "exact", "value"]);
    let mut row = vec![format!("{}", kind.to_possible_value().unwrap().get_name())];
    row.extend(echoed.iter().cloned());
    row.push(value.to_string());
    row.push(fmt17(value.to_f64()));
    table.push(row);
    Ok(Produced {
        record: record("wigner", json!({"kind": kind, "args": echoed, "strict": strict}), None, 0.0, results),
        table,
        code,
        stderr,
    })
}

fn cmd_lmatrix(j1: &str, j2: &str, method: MethodArg) -> Result<Produced, Failure> {
    let (a, b) = (j1.parse::<HalfInt>()?, j2.parse::<HalfInt>()?);
    let pair = SpinPair::new(a, b)?;
    let six = l_matrix(pair, LMethod::SixJ)?;
    let trace = l_matrix(pair, LMethod::Trace)?;
    let closed = l_matrix(pair, LMethod::ClosedRows)?;
    let chosen = match method {
        MethodArg::SixJ => &six,
        MethodArg::Trace => &trace,
        MethodArg::ClosedRows => &closed,
    };
    let dev_trace = trace.max_deviation(&six);
    let dev_closed = closed.max_deviation(&six);
    let orth = six.orthogonality_defect();
    let agree = dev_trace <= TOL_LMATRIX && dev_closed <= TOL_LMATRIX && orth <= TOL_LMATRIX;
    let n = pair.n1();
    let rows: Vec<Vec<Option<f64>>> = (0..n)
        .map(|r| (0..n).map(|c| chosen.defined_rows[r].then(|| chosen.values[(r, c)])).collect())
        .collect();
    let exact: Vec<Vec<String>> = l_matrix_exact(pair)?.iter().map(|row| row.iter().map(|s| s.to_string()).collect()).collect();
    let ranks = pair.ranks();
    let totals: Vec<String> = pair.total_spins().iter().map(|t| t.to_string()).collect();
    let results = json!({
        "rows_k": ranks,
        "columns_j": totals,
        "matrix": rows,
        "defined_rows": chosen.defined_rows,
        "exact_six_j": exact,
        "max_deviation": {"trace_vs_six_j": dev_trace, "closed_rows_vs_six_j": dev_closed},
        "orthogonality_defect": orth,
        "methods_agree": agree,
    });
    let mut header = vec!["K".to_string()];
    header.extend(totals.iter().map(|t| format!("J={t}")));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (r, k) in ranks.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(rows[r].iter().map(|v| v.map(fmt17).unwrap_or_default()));
        table.push(row);
    }
    let stderr = if agree {
        String::new()
    } else {
        format!("methods disagree: trace {dev_trace:e}, closed rows {dev_closed:e}, orthogonality {orth:e}\n")
    };
    Ok(Produced {
        record: record(
            "lmatrix",
            json!({"j1": a.to_string(), "j2": b.to_string(), "method": method}),
            None,
            TOL_LMATRIX,
            results,
        ),
        table,
        code: if agree { exit::OK } else { exit::FAILURE },
        stderr,
    })
}

fn pt_json(p: Point2) -> Value {
    json!([p.beta1, p.beta2])
}

fn poly_json(ps: &[Point2]) -> Value {
    Value::Array(ps.iter().map(|p| pt_json(*p)).collect())
}

fn point_rows(table: &mut Table, series: &str, pts: &[Point2], params: Option<&[f64]>) {
    for (i, p) in pts.iter().enumerate() {
        let param = params.map(|ps| fmt17(ps[i])).unwrap_or_default();
        table.push(vec![series.to_string(), i.to_string(), param, fmt17(p.beta1), fmt17(p.beta2)]);
    }
}

fn write_out(path: &Option<PathBuf>, table: &Table) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, table.render()).map_err(|e| Failure::Runtime(format!("writing {}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_geometry(n: usize, samples: usize, seed: Option<u64>, out: Option<PathBuf>) -> Result<Produced, Failure> {
    let pair = sep3n::pair_for(n)?;
    if samples > 0 && seed.is_none() {
        return Err(Failure::Usage("--samples needs an explicit --seed".into()));
    }
    let v = sep3n::vertices(n)?;
    let triangle = sep3n::state_triangle(n)?;
    let ppt = sep3n::ppt_polygon(n)?;
    let sep = sep3n::separable_region(n)?;
    let mut table = Table::new(&["series", "index", "param", "beta1", "beta2"]);
    let mut named = vec![("A", v.a), ("B", v.b), ("C", v.c), ("A'", v.a_prime), ("D", v.d), ("E", v.e)];
    if let Some(f) = v.f {
        named.push(("F", f));
    }
    for (name, p) in &named {
        point_rows(&mut table, &format!("vertex:{name}"), &[*p], None);
    }
    point_rows(&mut table, "triangle", &triangle.vertices, None);
    point_rows(&mut table, "ppt_polygon", &ppt.vertices, None);
    point_rows(&mut table, "separable_region", &sep.vertices, None);
    let mut results = json!({
        "vertices": named.iter().map(|(k, p)| (k.to_string(), pt_json(*p))).collect::<serde_json::Map<_, _>>(),
        "triangle": poly_json(&triangle.vertices),
        "ppt_polygon": poly_json(&ppt.vertices),
        "separable_region": {
            "kind": sep.kind,
            "exact": n % 2 == 1,
            "equals_ppt_polygon": n % 2 == 1,
            "vertices": poly_json(&sep.vertices),
            "area": sep.area(),
        },
        "areas": {"triangle": triangle.area(), "ppt_polygon": ppt.area()},
        "limits": {
            "distance_b_a_prime": v.b.distance(v.a_prime),
            "distance_c_d": v.c.distance(v.d),
        },
    });
    if let Some(f) = v.f {
        let eps = sep3n::epsilon0_closed(n);
        let mus: Vec<f64> = (0..=100).map(|i| -1.0 + i as f64 / 50.0).collect();
        let ellipse = mus.iter().map(|&m| sep3n::ellipse_curve(n, m)).collect::<crate::Result<Vec<_>>>()?;
        point_rows(&mut table, "ellipse", &ellipse, Some(&mus));
        if let Some(curve) = &sep.curve {
            let pts: Vec<Point2> = curve.iter().map(|c| c.point).collect();
            let params: Vec<f64> = curve.iter().map(|c| c.param).collect();
            point_rows(&mut table, "separable_arc", &pts, Some(&params));
        }
        results["line_h"] = json!({"beta2": eps});
        results["ellipse"] = json!({"mu": mus, "points": poly_json(&ellipse)});
        results["limits"]["distance_f_e"] = json!(f.distance(v.e));
    }
    if samples > 0 {
        let cloud = oracle::wbeta_cloud(pair, samples, seed.expect("checked"))?;
        let pts = cloud.points2()?;
        let hull = geometry::convex_hull(&pts);
        point_rows(&mut table, "cloud", &pts, None);
        results["cloud"] = json!({
            "count": pts.len(),
            "scheme": cloud.scheme,
            "hull": poly_json(&hull.vertices),
            "hull_area_over_ppt_area": geometry::area(&hull.vertices) / ppt.area(),
            "max_beta2": pts.iter().map(|p| p.beta2).fold(f64::NEG_INFINITY, f64::max),
        });
    }
    write_out(&out, &table)?;
    let inputs = json!({"n": n, "samples": samples, "seed": seed, "out": out.as_ref().map(|p| p.display().to_string())});
    Ok(Produced {
        record: record("geometry", inputs, seed, geometry::TOL_INSIDE, results),
        table,
        code: exit::OK,
        stderr: String::new(),
    })
}

fn cmd_epsilon(n: usize, grid: usize, out: Option<PathBuf>) -> Result<Produced, Failure> {
    let scan = sep3n::epsilon_scan(n, grid)?;
    let mut table = Table::new(&["lambda", "epsilon0"]);
    for (l, e) in scan.lambdas.iter().zip(&scan.values) {
        table.push(vec![fmt17(*l), fmt17(*e)]);
    }
    let even = n.is_multiple_of(2);
    let kramers = if even {
        let mut ok = true;
        for &l in &scan.lambdas {
            ok &= sep3n::has_even_multiplicity(&sep3n::h_lambda(n, l)?.eigenvalues(), 1e-9);
        }
        Some(ok)
    } else {
        None
    };
    let d = 1e-4;
    let e = |l: f64| sep3n::epsilon0(n, l);
    let slope0 = (-3.0 * e(0.0)? + 4.0 * e(d)? - e(2.0 * d)?) / (2.0 * d);
    let results = json!({
        "lambda": scan.lambdas,
        "epsilon0": scan.values,
        "monotone": scan.monotone,
        "convex": scan.convex,
        "min_first_difference": scan.min_first_difference,
        "min_second_difference": scan.min_second_difference,
        "slope_at_zero": slope0,
        "epsilon0_at_one_closed_form": even.then(|| sep3n::epsilon0_closed(n)),
        "even_multiplicity": kramers,
    });
    write_out(&out, &table)?;
    let inputs = json!({"n": n, "grid": grid, "out": out.as_ref().map(|p| p.display().to_string())});
    Ok(Produced {
        record: record("epsilon", inputs, None, sep3n::TOL_SCAN, results),
        table,
        code: exit::OK,
        stderr: String::new(),
    })
}

fn parse_floats(s: &str, expect: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("cannot parse `{t}` in --{what}"))))
        .collect::<Result<_, _>>()?;
    if v.len() != expect || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Usage(format!("--{what} needs {expect} finite comma-separated numbers")));
    }
    Ok(v)
}

fn cmd_classify(n: usize, p: Option<String>, beta: Option<String>, seed: Option<u64>, samples: usize) -> Result<Produced, Failure> {
    let pair = sep3n::pair_for(n)?;
    let options = ClassifierOptions {
        seed,
        samples: if seed.is_some() { samples } else { 0 },
        ..ClassifierOptions::default()
    };
    let cl = Classifier::with_options(n, options)?;
    let (beta_vec, probs) = match (&p, &beta) {
        (Some(ps), None) => {
            let probs = sep3n::check_probabilities(&parse_floats(ps, 3, "p")?)?;
            (cl.beta_from_probabilities(&probs)?, probs)
        }
        (None, Some(bs)) => {
            let b = parse_floats(bs, 2, "beta")?;
            let bv = BetaVector::new(pair, vec![1.0, b[0], b[1]])?;
            let probs = cl.probabilities_from_beta(&bv)?;
            (bv, probs)
        }
        _ => return Err(Failure::Usage("give exactly one of --p or --beta".into())),
    };
    let values = sep3n::protocol_values(&probs, n);
    let verdict = cl.classify(&beta_vec)?;
    let code = match verdict.class {
        VerdictClass::Separable => exit::OK,
        VerdictClass::NptEntangled => exit::NPT_ENTANGLED,
        VerdictClass::PptEntangled => exit::PPT_ENTANGLED,
        VerdictClass::Unknown => exit::UNKNOWN,
        VerdictClass::NotAState => exit::NOT_A_STATE,
    };
    let b = beta_vec.components();
    let results = json!({
        "beta": [b[1], b[2]],
        "p": probs,
        "witness": values.witness,
        "ppt_inequality_1": values.ppt_first,
        "ppt_inequality_2": values.ppt_second,
        "verdict": verdict.class,
        "certificate": verdict.certificate,
    });
    let mut table = Table::new(&[
        "n", "beta1", "beta2", "p0", "p1", "p2", "witness", "ppt_inequality_1", "ppt_inequality_2", "verdict", "certificate",
    ]);
    table.push(vec![
        n.to_string(),
        fmt17(b[1]),
        fmt17(b[2]),
        fmt17(probs[0]),
        fmt17(probs[1]),
        fmt17(probs[2]),
        fmt17(values.witness),
        fmt17(values.ppt_first),
        fmt17(values.ppt_second),
        serde_json::to_value(verdict.class).unwrap().as_str().unwrap().to_string(),
        verdict.certificate.clone(),
    ]);
    let inputs = json!({"n": n, "p": p, "beta": beta, "seed": seed, "samples": options.samples});
    Ok(Produced {
        record: record("classify", inputs, seed, geometry::TOL_INSIDE, results),
        table,
        code,
        stderr: String::new(),
    })
}
