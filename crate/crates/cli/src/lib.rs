//! Command-line front end for `thetakit`. Every subcommand prints one JSON
//! document (or CSV for `tables --format csv`) on stdout.
//!
//! Exit codes: 0 on success, 1 on a numerical failure or a failed
//! verification, 2 on a usage error.

pub mod args;
pub mod output;

use std::io::Write;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thetakit::brownian::{self, DensityQuery, MethodKind, ProcessKind};
use thetakit::discrete_gaussian::{self as dg, CumulantRoute, Family, ThetaDistribution, VarianceRoute};
use thetakit::elliptic;
use thetakit::kolmogorov::{self, CdfRoute, PdfRoute};
use thetakit::theta::{theta_product, theta_series, ThetaKind};
use thetakit::verify::{self, tables, VerificationReport};
use thetakit::SeriesPolicy;

use args::*;
use output::{Provenance, Real, Record};

/// Environment variable overriding the default series tolerance.
pub const TOL_ENV: &str = "THETAKIT_TOL";

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(thetakit::Error),
    /// Some identities failed; the report is still printed.
    Verification {
        failed: usize,
        report: String,
    },
}

impl From<thetakit::Error> for Failure {
    fn from(e: thetakit::Error) -> Self {
        Failure::Numeric(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Runs the CLI on `argv` (including the program name), writing data to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, S>(argv: I, tol_env: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = policy(tol_env).and_then(|p| dispatch(cli.command, &p));
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Verification { failed, report }) => {
            let _ = out.write_all(report.as_bytes());
            let _ = writeln!(err, "{failed} identities exceeded their tolerance");
            1
        }
    }
}

fn policy(tol_env: Option<&str>) -> std::result::Result<SeriesPolicy, Failure> {
    let Some(raw) = tol_env else {
        return Ok(SeriesPolicy::default());
    };
    let tol: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{TOL_ENV} must be a decimal real, got {raw:?}")))?;
    SeriesPolicy::new(tol, thetakit::series::DEFAULT_MAX_TERMS).map_err(|e| Failure::Usage(format!("{TOL_ENV}: {e}")))
}

fn line(s: String) -> String {
    s + "\n"
}

fn need<T>(name: &str, v: Option<T>) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this operation")))
}

fn dispatch(cmd: Command, p: &SeriesPolicy) -> Outcome {
    match cmd {
        Command::Theta { op } => theta(op, p),
        Command::Elliptic { op } => elliptic_cmd(op, p),
        Command::Dist(a) => dist(a, p),
        Command::Bm(a) => bm(a, p),
        Command::Kolmogorov(a) => kolmogorov_cmd(a, p),
        Command::Verify(a) => verify_cmd(a, p),
        Command::Tables(a) => tables_cmd(a),
    }
}

fn theta(op: ThetaOp, p: &SeriesPolicy) -> Outcome {
    let ThetaOp::Eval { kind, z, q, method } = op;
    let k = ThetaKind::try_from(kind)?;
    let (v, prov, name) = match method {
        ThetaMethod::Series => (theta_series(k, z, q, p)?, Provenance::Series, "series"),
        ThetaMethod::Product => (theta_product(k, z, q, p)?, Provenance::Product, "product"),
    };
    let r = Record::new("theta eval", p.tol, prov)
        .input("kind", kind as i64)
        .input("z", z)
        .input("q", q)
        .input("method", name)
        .value(v);
    Ok(line(r.to_json()))
}

fn elliptic_cmd(op: EllipticOp, p: &SeriesPolicy) -> Outcome {
    let r = match op {
        EllipticOp::K { k } => Record::new("elliptic k", p.tol, Provenance::ClosedForm)
            .input("k", k)
            .value(elliptic::ellip_k(k)?),
        EllipticOp::E { k } => Record::new("elliptic e", p.tol, Provenance::ClosedForm)
            .input("k", k)
            .value(elliptic::ellip_e(k)?),
        EllipticOp::ModulusFromC { c } => Record::new("elliptic modulus-from-c", p.tol, Provenance::ClosedForm)
            .input("c", c)
            .value(elliptic::modulus_from_lattice(c)?.k),
        EllipticOp::Nome { k } => Record::new("elliptic nome", p.tol, Provenance::ClosedForm)
            .input("k", k)
            .value(elliptic::nome_from_modulus(k)?),
    };
    Ok(line(r.to_json()))
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::Theta2 => Family::Theta2,
        FamilyArg::Theta3 => Family::Theta3,
    }
}

fn dist(a: DistArgs, p: &SeriesPolicy) -> Outcome {
    let fam = family(a.family);
    let d = ThetaDistribution::new(fam, a.c)?;
    let base = |op: &str, prov| {
        Record::new(format!("dist {op}"), p.tol, prov)
            .input("family", fam.to_string().as_str())
            .input("c", a.c)
    };
    let r = match a.op {
        DistOp::Pmf => {
            let n = need("n", a.n)?;
            base("pmf", Provenance::ClosedForm).input("n", n).value(d.pmf(n))
        }
        DistOp::Mean => base("mean", Provenance::ClosedForm).value(d.mean()),
        DistOp::Var => {
            let route = a.route.as_deref().unwrap_or("elliptic");
            let (vr, prov) = match route {
                "elliptic" => (VarianceRoute::Elliptic, Provenance::ClosedForm),
                "lambert" => (VarianceRoute::Lambert, Provenance::Series),
                "direct" => (VarianceRoute::Direct, Provenance::Series),
                other => return Err(Failure::Usage(format!("unknown variance route {other:?}"))),
            };
            base("var", prov).input("route", route).value(d.variance(vr)?)
        }
        DistOp::Cumulant => {
            let order = need("order", a.order)?;
            let route = a.route.as_deref().unwrap_or("lambert");
            let cr = match route {
                "lambert" => CumulantRoute::Lambert,
                "eisenstein" => CumulantRoute::Eisenstein,
                other => return Err(Failure::Usage(format!("unknown cumulant route {other:?}"))),
            };
            let v = d.cumulant(order, cr).map_err(|e| match e {
                thetakit::Error::Domain { .. } => Failure::Usage(e.to_string()),
                other => Failure::Numeric(other),
            })?;
            base("cumulant", Provenance::Series)
                .input("order", order)
                .input("route", route)
                .value(v)
        }
        DistOp::Mgf => {
            let z = need("z", a.z)?;
            base("mgf", Provenance::Series).input("z", z).value(d.mgf(z)?)
        }
        DistOp::Entropy => base("entropy", Provenance::Series).value(d.entropy()),
        DistOp::Sample => {
            let n = a.n.unwrap_or(10);
            if n < 0 {
                return Err(Failure::Usage(format!("--n must be nonnegative for sample, got {n}")));
            }
            let seed = a.seed.unwrap_or(DEFAULT_SEED);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = (0..n)
                .map(|_| match a.sampler {
                    Sampler::Exact => Ok(dg::sample_exact(&d, &mut rng)),
                    Sampler::Bernoulli => dg::sample_bernoulli(&d, &mut rng, p),
                })
                .collect::<thetakit::Result<Vec<_>>>()?;
            let sampler = match a.sampler {
                Sampler::Exact => "exact",
                Sampler::Bernoulli => "bernoulli",
            };
            let mut r = base("sample", Provenance::MonteCarlo)
                .input("n", n)
                .input("seed", seed as i64)
                .input("sampler", sampler);
            r.values = Some(draws);
            r
        }
    };
    Ok(line(r.to_json()))
}

/// A law of a hitting time, evaluated at `t` by the given method.
type TimeLaw = fn(MethodKind, f64, &SeriesPolicy) -> thetakit::Result<f64>;

fn bm(a: BmArgs, p: &SeriesPolicy) -> Outcome {
    let method = match a.method {
        MethodArg::Images => MethodKind::Images,
        MethodArg::Spectral => MethodKind::Spectral,
    };
    let process = match a.process {
        ProcessArg::Reflected => ProcessKind::Reflected,
        ProcessArg::Killed => ProcessKind::Killed,
    };
    let prov = Provenance::Series;
    let r = match a.op {
        BmOp::Density => {
            let q = DensityQuery::new(need("t", a.t)?, need("x", a.x)?, need("y", a.y)?)?;
            Record::new("bm density", p.tol, prov)
                .input("process", process.to_string().as_str())
                .input("method", method.to_string().as_str())
                .input("t", q.t)
                .input("x", q.x)
                .input("y", q.y)
                .value(brownian::density(process, method, &q, p)?)
        }
        BmOp::Green => {
            let (alpha, x, y) = (need("alpha", a.alpha)?, need("x", a.x)?, need("y", a.y)?);
            let prov = match method {
                MethodKind::Images => Provenance::ClosedForm,
                MethodKind::Spectral => Provenance::Series,
            };
            Record::new("bm green", p.tol, prov)
                .input("process", process.to_string().as_str())
                .input("method", method.to_string().as_str())
                .input("alpha", alpha)
                .input("x", x)
                .input("y", y)
                .value(brownian::green(process, method, alpha, x, y, p)?)
        }
        BmOp::ExitSurvival => {
            let t = need("t", a.t)?;
            let v = match method {
                MethodKind::Spectral => brownian::exit_survival(t, p)?,
                MethodKind::Images => brownian::exit_survival_images(t, p)?,
            };
            Record::new("bm exit-survival", p.tol, prov)
                .input("method", method.to_string().as_str())
                .input("t", t)
                .value(v)
        }
        BmOp::ExitDensity | BmOp::Bessel3Pdf | BmOp::Bessel3Cdf => {
            let t = need("t", a.t)?;
            let (name, f): (_, TimeLaw) = match a.op {
                BmOp::ExitDensity => ("bm exit-density", brownian::exit_density),
                BmOp::Bessel3Pdf => ("bm bessel3-pdf", brownian::bessel3_hit_density),
                _ => ("bm bessel3-cdf", brownian::bessel3_hit_cdf),
            };
            Record::new(name, p.tol, prov)
                .input("method", method.to_string().as_str())
                .input("t", t)
                .value(f(method, t, p)?)
        }
        BmOp::Bessel3Laplace => {
            let alpha = need("alpha", a.alpha)?;
            Record::new("bm bessel3-laplace", p.tol, Provenance::ClosedForm)
                .input("alpha", alpha)
                .value(brownian::bessel3_hit_laplace(alpha)?)
        }
    };
    Ok(line(r.to_json()))
}

fn kolmogorov_cmd(a: KolmogorovArgs, p: &SeriesPolicy) -> Outcome {
    let route = a.route.as_str();
    let (name, v, prov) = match a.op {
        KolmogorovOp::Cdf => {
            let (r, prov) = match route {
                "series" => (CdfRoute::Series, Provenance::Series),
                "product" => (CdfRoute::Product, Provenance::Product),
                "elliptic" => (CdfRoute::Elliptic, Provenance::ClosedForm),
                other => return Err(Failure::Usage(format!("unknown cdf route {other:?}"))),
            };
            ("kolmogorov cdf", kolmogorov::kolmogorov_cdf(a.h, r, p)?, prov)
        }
        KolmogorovOp::Pdf => {
            let (r, prov) = match route {
                "series" => (PdfRoute::Series, Provenance::Series),
                "elliptic" => (PdfRoute::Elliptic, Provenance::ClosedForm),
                "signed-moment" => (PdfRoute::SignedMoment, Provenance::Series),
                other => return Err(Failure::Usage(format!("unknown pdf route {other:?}"))),
            };
            ("kolmogorov pdf", kolmogorov::kolmogorov_pdf(a.h, r, p)?, prov)
        }
    };
    let r = Record::new(name, p.tol, prov)
        .input("h", a.h)
        .input("route", route)
        .value(v);
    Ok(line(r.to_json()))
}

#[derive(Serialize)]
struct ReportOut<'a> {
    name: &'a str,
    grid: Vec<Vec<Real>>,
    max_defect: Real,
    tol: Real,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

impl<'a> From<&'a VerificationReport> for ReportOut<'a> {
    fn from(r: &'a VerificationReport) -> Self {
        ReportOut {
            name: &r.name,
            grid: r.grid.iter().map(|g| g.iter().copied().map(Real).collect()).collect(),
            max_defect: Real(r.max_defect),
            tol: Real(r.tol),
            passed: r.passed,
            error: r.error.as_deref(),
        }
    }
}

fn verify_cmd(a: VerifyArgs, p: &SeriesPolicy) -> Outcome {
    let names: Vec<String> = if a.suite.iter().any(|s| s == "all") {
        verify::registry().into_iter().map(String::from).collect()
    } else {
        a.suite.clone()
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let reports = verify::run_suite(&refs, a.tol, p).map_err(|e| match e {
        thetakit::Error::UnknownIdentity(_) | thetakit::Error::Domain { .. } => Failure::Usage(e.to_string()),
        other => Failure::Numeric(other),
    })?;
    let out: Vec<ReportOut> = reports.iter().map(ReportOut::from).collect();
    let mut r =
        Record::new("verify", a.tol.unwrap_or(p.tol), Provenance::Series).input("suite", a.suite.join(" ").as_str());
    r.rows = Some(serde_json::value::to_raw_value(&out).expect("reports serialise"));
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure::Verification {
            failed,
            report: line(r.to_json()),
        });
    }
    Ok(line(r.to_json()))
}

#[derive(Serialize)]
struct Table1Out {
    r: u32,
    quantity: &'static str,
    closed_form: Real,
    recomputed: Real,
    abs_diff: Real,
}

#[derive(Serialize)]
struct VarianceOut {
    r: u32,
    closed_form: Real,
    recomputed: Real,
    printed: Real,
    abs_diff: Real,
}

fn tables_cmd(a: TablesArgs) -> Outcome {
    let rows: Vec<u32> = if a.r.is_empty() {
        tables::ROWS.collect()
    } else {
        a.r.clone()
    };
    let mut csv = String::new();
    let raw = match a.id {
        1 => {
            let mut out = Vec::new();
            for &r in &rows {
                let s = tables::singular_row(r)?;
                let at_closed = elliptic::EllipticModulus::new(s.k_closed)?.lattice();
                for (quantity, closed, re) in [
                    ("k", s.k_closed, s.k),
                    ("K", s.big_k_closed, s.big_k),
                    ("alpha", s.alpha_closed, s.alpha),
                    ("lattice", (r as f64).sqrt(), at_closed),
                ] {
                    out.push(Table1Out {
                        r,
                        quantity,
                        closed_form: Real(closed),
                        recomputed: Real(re),
                        abs_diff: Real((closed - re).abs()),
                    });
                }
            }
            csv.push_str("r,quantity,closed_form,recomputed,abs_diff\n");
            for o in &out {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    o.r,
                    o.quantity,
                    o.closed_form.render(),
                    o.recomputed.render(),
                    o.abs_diff.render()
                ));
            }
            serde_json::value::to_raw_value(&out)
        }
        id => {
            let fam = if id == 2 { Family::Theta2 } else { Family::Theta3 };
            let out = rows
                .iter()
                .map(|&r| {
                    let v = tables::variance_row(fam, r)?;
                    Ok(VarianceOut {
                        r,
                        closed_form: Real(v.closed_form),
                        recomputed: Real(v.recomputed),
                        printed: Real(v.printed),
                        abs_diff: Real(v.abs_diff),
                    })
                })
                .collect::<thetakit::Result<Vec<_>>>()?;
            csv.push_str("r,closed_form,recomputed,abs_diff\n");
            for o in &out {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    o.r,
                    o.closed_form.render(),
                    o.recomputed.render(),
                    o.abs_diff.render()
                ));
            }
            serde_json::value::to_raw_value(&out)
        }
    }
    .expect("rows serialise");
    match a.format {
        Format::Csv => Ok(csv),
        Format::Json => {
            let mut r = Record::new(
                format!("tables {}", a.id),
                thetakit::series::DEFAULT_TOL,
                Provenance::ClosedForm,
            )
            .input("table", a.id as i64);
            r.rows = Some(raw);
            Ok(line(r.to_json()))
        }
    }
}
