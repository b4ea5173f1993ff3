//! Command-line front end for the two-parameter elliptic integrals:
//! single-point evaluation, grid cross-validation of independent
//! evaluation routes, and machine-readable sweeps.
//!
//! Exit codes: 0 success / verification pass, 1 verification deviation
//! above tolerance (or an unwritable output file), 2 domain violation or
//! usage error, 3 non-convergence.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellip2::{
    gen_e, gen_e_closed, gen_e_series, gen_e_symmetric, gen_k, oracle_e2, oracle_k2, Error,
    ModulusPair, SeriesConfig,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_DEVIATION: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "ellip2", version, about = "Two-parameter complete elliptic integrals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate E(k1,k2) (or K with --method product) at one point
    Eval(EvalArgs),
    /// Cross-check evaluation routes against each other on a grid
    Verify(VerifyArgs),
    /// Sweep a grid and write every result to CSV or JSON
    Export(ExportArgs),
}

/// Which evaluation route to run. `quad` and `product` integrate or
/// factorize K's/E's defining double integral; `series`, `f4`, and
/// `auto` are the E routes (`auto` lets the library dispatch and
/// records the route it chose).
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodTag {
    /// 2-D adaptive quadrature of the defining integral of E
    Quad,
    /// Legendre series in half-odd-integer degree
    Series,
    /// Appell F4 closed form (with --k-equal: the equal-modulus shortcut)
    F4,
    /// product formula for K, cross-checked against 2-D quadrature
    Product,
    /// library dispatch for E; the output records the chosen route
    Auto,
}

impl MethodTag {
    /// Row label used when a point is skipped before any route runs.
    fn label(self) -> &'static str {
        match self {
            MethodTag::Quad => "quadrature",
            MethodTag::Series => "legendre_series",
            MethodTag::F4 => "f4_closed",
            MethodTag::Product => "product_formula",
            MethodTag::Auto => "auto",
        }
    }
}

/// Inclusive grid axis: either a single value `V` or `LO:HI:N`.
#[derive(Clone, Debug)]
struct Range {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Range {
    fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + i as f64 * step).collect()
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let unit = |v: f64| {
        if !(0.0..1.0).contains(&v) {
            return Err(format!("modulus {v} outside [0, 1)"));
        }
        Ok(v)
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [one] => {
            let v = unit(one.parse().map_err(|e| format!("bad value {one:?}: {e}"))?)?;
            Ok(Range { lo: v, hi: v, n: 1 })
        }
        [lo, hi, n] => {
            let lo = unit(lo.parse().map_err(|e| format!("bad value {lo:?}: {e}"))?)?;
            let hi = unit(hi.parse().map_err(|e| format!("bad value {hi:?}: {e}"))?)?;
            let n: usize = n.parse().map_err(|e| format!("bad count {n:?}: {e}"))?;
            if lo > hi {
                return Err(format!("empty range: {lo} > {hi}"));
            }
            if n == 0 {
                return Err("a range needs at least one point".into());
            }
            Ok(Range { lo, hi, n })
        }
        _ => Err("expected a single value V or a range LO:HI:N".into()),
    }
}

#[derive(Args)]
struct EvalArgs {
    /// first modulus
    #[arg(long)]
    k1: f64,
    /// second modulus
    #[arg(long, required_unless_present = "k_equal", conflicts_with = "k_equal")]
    k2: Option<f64>,
    /// evaluate at k2 = k1 (with --method f4: the equal-modulus shortcut)
    #[arg(long)]
    k_equal: bool,
    #[arg(long, value_enum, default_value_t = MethodTag::Auto)]
    method: MethodTag,
    /// relative tolerance for quadrature and series truncation
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// series cutoff (also bounds the F4 double series)
    #[arg(long, default_value_t = 600)]
    max_terms: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// first-modulus axis, V or LO:HI:N
    #[arg(long, value_parser = parse_range)]
    k1: Range,
    /// second-modulus axis, V or LO:HI:N
    #[arg(long, value_parser = parse_range, required_unless_present = "k_equal", conflicts_with = "k_equal")]
    k2: Option<Range>,
    /// sweep the diagonal k2 = k1 instead of a second axis
    #[arg(long)]
    k_equal: bool,
    /// comma-separated routes; E routes are compared pairwise, product
    /// is compared against 2-D quadrature of K
    #[arg(long, value_delimiter = ',', default_value = "quad,series,f4")]
    method: Vec<MethodTag>,
    /// maximum allowed pairwise relative deviation
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 600)]
    max_terms: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    /// first-modulus axis, V or LO:HI:N
    #[arg(long, value_parser = parse_range)]
    k1: Range,
    /// second-modulus axis, V or LO:HI:N
    #[arg(long, value_parser = parse_range, required_unless_present = "k_equal", conflicts_with = "k_equal")]
    k2: Option<Range>,
    /// sweep the diagonal k2 = k1 instead of a second axis
    #[arg(long)]
    k_equal: bool,
    /// comma-separated routes, one output row per point and route
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    method: Vec<MethodTag>,
    /// relative tolerance for quadrature and series truncation
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 600)]
    max_terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// output file path
    #[arg(long)]
    out: PathBuf,
}

type Failure = (u8, String);

fn failure(e: &Error) -> Failure {
    let code = match e {
        Error::Domain(_) | Error::Divergence(_) => EXIT_DOMAIN,
        Error::NoConvergence { .. } | Error::QuadratureBudget { .. } => EXIT_NO_CONVERGENCE,
    };
    (code, e.to_string())
}

fn series_config(tol: f64, max_terms: usize) -> Result<SeriesConfig, Failure> {
    let cfg = SeriesConfig {
        rel_tol: tol,
        abs_tol: tol * 1e-2,
        max_terms,
    };
    cfg.validate().map_err(|e| failure(&e))?;
    Ok(cfg)
}

/// One evaluated route at one point, in output-row shape.
struct Computed {
    method: &'static str,
    value: f64,
    error_estimate: f64,
    work: u64,
}

fn run_route(
    tag: MethodTag,
    mp: &ModulusPair,
    k_equal: bool,
    cfg: &SeriesConfig,
    quad_tol: f64,
) -> ellip2::Result<Computed> {
    let from_eval = |r: ellip2::EvalResult| Computed {
        method: r.method.as_str(),
        value: r.value,
        error_estimate: r.error_estimate,
        work: r.terms_or_evals,
    };
    match tag {
        MethodTag::Quad => {
            let q = oracle_e2(mp, quad_tol)?;
            Ok(Computed {
                method: "quadrature",
                value: q.value,
                error_estimate: q.error_estimate,
                work: q.evals,
            })
        }
        MethodTag::Series => gen_e_series(mp, cfg).map(from_eval),
        MethodTag::F4 if k_equal => gen_e_symmetric(mp.k1()).map(from_eval),
        MethodTag::F4 => gen_e_closed(mp).map(from_eval),
        MethodTag::Product => gen_k(mp).map(from_eval),
        MethodTag::Auto => gen_e(mp, cfg).map(from_eval),
    }
}

fn cmd_eval(a: EvalArgs) -> Result<u8, Failure> {
    let k2 = if a.k_equal { a.k1 } else { a.k2.unwrap() };
    let cfg = series_config(a.tol, a.max_terms)?;
    let mp = ModulusPair::new(a.k1, k2).map_err(|e| failure(&e))?;
    let c = run_route(a.method, &mp, a.k_equal, &cfg, a.tol).map_err(|e| failure(&e))?;
    let which = if a.method == MethodTag::Product { 'K' } else { 'E' };
    println!("{which}({}, {}) = {}", a.k1, k2, c.value);
    println!("method          {}", c.method);
    println!("error_estimate  {:.2e}", c.error_estimate);
    println!("work            {}", c.work);
    Ok(0)
}

/// Grid points in deterministic row-major order, k2 varying fastest.
fn grid(k1: &Range, k2: Option<&Range>, k_equal: bool) -> Vec<(f64, f64)> {
    let k1s = k1.points();
    if k_equal {
        return k1s.into_iter().map(|k| (k, k)).collect();
    }
    let k2s = k2.unwrap().points();
    let mut pts = Vec::with_capacity(k1s.len() * k2s.len());
    for &a in &k1s {
        for &b in &k2s {
            pts.push((a, b));
        }
    }
    pts
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let mut methods = Vec::new();
    for &m in &a.method {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    let e_routes: Vec<MethodTag> = methods
        .iter()
        .copied()
        .filter(|m| *m != MethodTag::Product)
        .collect();
    if e_routes.len() == 1 {
        return Err((
            EXIT_DOMAIN,
            format!(
                "route {} has nothing to be compared against; pass at least two E routes, \
                 or product (which pairs with quadrature of K)",
                e_routes[0].label()
            ),
        ));
    }
    let inner_tol = (a.tol * 1e-2).clamp(1e-13, 1e-4);
    let cfg = series_config(inner_tol, a.max_terms)?;

    let pts = grid(&a.k1, a.k2.as_ref(), a.k_equal);
    let mut admissible = 0usize;
    let mut e_worst: Option<(f64, (f64, f64), &'static str, &'static str)> = None;
    let mut k_worst: Option<(f64, (f64, f64))> = None;
    let mut skips: Vec<(f64, f64, &'static str, String)> = Vec::new();

    for &(k1, k2) in &pts {
        let Ok(mp) = ModulusPair::new(k1, k2) else {
            continue;
        };
        admissible += 1;

        let mut e_vals: Vec<(&'static str, f64)> = Vec::new();
        for &tag in &e_routes {
            match run_route(tag, &mp, a.k_equal, &cfg, inner_tol) {
                Ok(c) => e_vals.push((c.method, c.value)),
                Err(e @ (Error::Domain(_) | Error::Divergence(_))) => {
                    skips.push((k1, k2, tag.label(), e.to_string()));
                }
                Err(e) => {
                    return Err((
                        EXIT_NO_CONVERGENCE,
                        format!("{} at (k1, k2) = ({k1}, {k2}): {e}", tag.label()),
                    ))
                }
            }
        }
        for i in 0..e_vals.len() {
            for j in i + 1..e_vals.len() {
                let (na, va) = e_vals[i];
                let (nb, vb) = e_vals[j];
                let d = (va - vb).abs() / va.abs().max(vb.abs()).max(f64::MIN_POSITIVE);
                if e_worst.map_or(true, |(w, ..)| d > w) {
                    e_worst = Some((d, (k1, k2), na, nb));
                }
            }
        }

        if methods.contains(&MethodTag::Product) {
            let got = gen_k(&mp).map_err(|e| failure(&e))?.value;
            let want = match oracle_k2(&mp, inner_tol) {
                Ok(q) => q.value,
                Err(e) => {
                    return Err((
                        EXIT_NO_CONVERGENCE,
                        format!("K quadrature at (k1, k2) = ({k1}, {k2}): {e}"),
                    ))
                }
            };
            let d = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
            if k_worst.map_or(true, |(w, _)| d > w) {
                k_worst = Some((d, (k1, k2)));
            }
        }
    }

    if admissible == 0 {
        return Err((
            EXIT_DOMAIN,
            "no admissible grid points: k1^2 + k2^2 < 1 holds nowhere on the grid".into(),
        ));
    }

    println!(
        "grid: {} points, {} admissible, {} skipped (k1^2 + k2^2 >= 1)",
        pts.len(),
        admissible,
        pts.len() - admissible
    );
    let names: Vec<&str> = methods.iter().map(|m| m.label()).collect();
    println!("methods: {}", names.join(", "));
    let mut max_dev = 0.0f64;
    if let Some((d, (k1, k2), na, nb)) = e_worst {
        println!(
            "E routes: max pairwise deviation {d:.2e} between {na} and {nb} at (k1, k2) = ({k1}, {k2})"
        );
        max_dev = max_dev.max(d);
    }
    if let Some((d, (k1, k2))) = k_worst {
        println!("K product formula vs quadrature: max deviation {d:.2e} at (k1, k2) = ({k1}, {k2})");
        max_dev = max_dev.max(d);
    }
    if skips.is_empty() {
        println!("method skips: none");
    } else {
        let (k1, k2, name, why) = &skips[0];
        println!(
            "method skips: {} (first: {name} at (k1, k2) = ({k1}, {k2}): {why})",
            skips.len()
        );
    }
    let pass = max_dev <= a.tol;
    println!(
        "tolerance {:e} -> {}",
        a.tol,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { 0 } else { EXIT_DEVIATION })
}

struct Row {
    k1: f64,
    k2: f64,
    method: &'static str,
    outcome: Option<Computed>,
    status: &'static str,
}

fn cmd_export(a: ExportArgs) -> Result<u8, Failure> {
    let cfg = series_config(a.tol, a.max_terms)?;
    let pts = grid(&a.k1, a.k2.as_ref(), a.k_equal);
    let mut rows = Vec::new();
    let mut admissible = 0usize;

    for &(k1, k2) in &pts {
        for &tag in &a.method {
            let mut row = Row {
                k1,
                k2,
                method: tag.label(),
                outcome: None,
                status: "domain_skip",
            };
            if let Ok(mp) = ModulusPair::new(k1, k2) {
                match run_route(tag, &mp, a.k_equal, &cfg, a.tol) {
                    Ok(c) => {
                        row.method = c.method;
                        row.outcome = Some(c);
                        row.status = "ok";
                    }
                    Err(Error::Domain(_) | Error::Divergence(_)) => {}
                    Err(_) => row.status = "no_convergence",
                }
            }
            rows.push(row);
        }
        if k1 * k1 + k2 * k2 < 1.0 {
            admissible += 1;
        }
    }
    if admissible == 0 {
        return Err((
            EXIT_DOMAIN,
            "no admissible grid points: k1^2 + k2^2 < 1 holds nowhere on the grid".into(),
        ));
    }

    let body = match a.format {
        Format::Csv => render_csv(&rows),
        Format::Json => render_json(&rows),
    };
    std::fs::write(&a.out, body)
        .map_err(|e| (EXIT_DEVIATION, format!("cannot write {}: {e}", a.out.display())))?;
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(0)
}

// 17 significant digits: round-trippable f64, byte-identical between
// the CSV and JSON writers.
fn render_csv(rows: &[Row]) -> String {
    let mut s = String::from("k1,k2,method,value,error_estimate,work,status\n");
    for r in rows {
        match &r.outcome {
            Some(c) => writeln!(
                s,
                "{:.16e},{:.16e},{},{:.16e},{:.16e},{},{}",
                r.k1, r.k2, r.method, c.value, c.error_estimate, c.work, r.status
            ),
            None => writeln!(s, "{:.16e},{:.16e},{},,,,{}", r.k1, r.k2, r.method, r.status),
        }
        .unwrap();
    }
    s
}

fn render_json(rows: &[Row]) -> String {
    let mut s = String::from("[\n");
    for (i, r) in rows.iter().enumerate() {
        let sep = if i + 1 == rows.len() { "" } else { "," };
        match &r.outcome {
            Some(c) => writeln!(
                s,
                "  {{\"k1\": {:.16e}, \"k2\": {:.16e}, \"method\": \"{}\", \"value\": {:.16e}, \
                 \"error_estimate\": {:.16e}, \"work\": {}, \"status\": \"{}\"}}{sep}",
                r.k1, r.k2, r.method, c.value, c.error_estimate, c.work, r.status
            ),
            None => writeln!(
                s,
                "  {{\"k1\": {:.16e}, \"k2\": {:.16e}, \"method\": \"{}\", \"value\": null, \
                 \"error_estimate\": null, \"work\": null, \"status\": \"{}\"}}{sep}",
                r.k1, r.k2, r.method, r.status
            ),
        }
        .unwrap();
    }
    s.push_str("]\n");
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Export(a) => cmd_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
