use centralpath::instance::{self, Format, SdoInstance};
use centralpath::report::{self, ReportOptions};
use centralpath::{limits, polysys, rate, tracer, urs, CoreError};
use clap::{Parser, Subcommand, ValueEnum};
use exactalg::rat::{fmt_rat, rat};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "centralpath", version, about = "Exact and numerical analysis of SDP central paths")]
struct Cli {
    /// Directory for written artifacts (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Input format; guessed from the file name when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<InputFormat>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum InputFormat {
    Json,
    Sdpa,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print a generated instance as JSON.
    Gen {
        #[command(subcommand)]
        which: GenKind,
    },
    /// Check symmetry, constraint rank and the start point.
    Validate { file: String },
    /// Central-path and optimality systems, Q and the deformation degrees.
    BuildSystem { file: String },
    /// Univariate representations of the central-path system with branch tags.
    Eliminate { file: String },
    /// Exact limit point of the central path.
    LimitPoint { file: String },
    /// Follow the central path numerically and emit CSV.
    Trace {
        file: String,
        #[arg(long, default_value = "1")]
        mu_from: String,
        #[arg(long, default_value = "1e-14")]
        mu_to: String,
        #[arg(long, default_value = "1/10")]
        ratio: String,
        #[arg(long)]
        precision: Option<u32>,
        /// Skip the exact limit (no distance columns).
        #[arg(long)]
        no_limit: bool,
    },
    /// Convergence-rate exponents from Newton polygons.
    Rate {
        file: String,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Full pipeline report.
    Report {
        file: String,
        #[arg(long)]
        precision: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Elliptope3,
    Khachiyan {
        #[arg(long)]
        n: usize,
    },
    DiagLp,
}

fn default_precision() -> u32 {
    std::env::var("CENTRALPATH_PRECISION").ok().and_then(|v| v.parse().ok()).unwrap_or(tracer::DEFAULT_PRECISION)
}

fn read_input(file: &str, format: Option<InputFormat>) -> Result<SdoInstance, CoreError> {
    let src = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(file)?
    };
    let fmt = match format {
        Some(InputFormat::Json) => Format::Json,
        Some(InputFormat::Sdpa) => Format::Sdpa,
        None if file == "-" => {
            if src.trim_start().starts_with('{') {
                Format::Json
            } else {
                Format::Sdpa
            }
        }
        None => instance::format_for(file),
    };
    instance::load_str(&src, fmt)
}

struct Out {
    dir: Option<PathBuf>,
}

impl Out {
    fn write(&self, name: &str, content: &str) -> Result<(), CoreError> {
        if let Some(d) = &self.dir {
            std::fs::create_dir_all(d)?;
            std::fs::write(Path::new(d).join(name), content)?;
        }
        Ok(())
    }
    fn write_json(&self, name: &str, v: &Value) -> Result<(), CoreError> {
        self.write(name, &(serde_json::to_string_pretty(v).expect("json serializes") + "\n"))
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

// a closed pipe downstream is not an error
fn emit_raw(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn emit(s: &str) {
    emit_raw(&format!("{s}\n"));
}

fn run(cli: Cli) -> Result<u8, CoreError> {
    let out = Out { dir: cli.out.clone() };
    match cli.cmd {
        Cmd::Gen { which } => {
            let inst = match which {
                GenKind::Elliptope3 => instance::gen_elliptope3(),
                GenKind::Khachiyan { n } => instance::gen_khachiyan(n)?,
                GenKind::DiagLp => instance::gen_diag_lp(),
            };
            let v = instance::to_json(&inst);
            out.write_json("instance.json", &v)?;
            emit(&pretty(&v));
        }
        Cmd::Validate { file } => {
            let src = if file == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(&file)?
            };
            let inst = match cli.format.map(|f| matches!(f, InputFormat::Sdpa)).unwrap_or(instance::format_for(&file) == Format::Sdpa) {
                true => instance::parse_sdpa(&src)?,
                false => instance::parse_json_str(&src)?,
            };
            let rep = instance::validate(&inst);
            let v = serde_json::to_value(&rep).expect("report serializes");
            out.write_json("validation.json", &v)?;
            emit(&pretty(&v));
            if !rep.passed {
                return Ok(2);
            }
        }
        Cmd::BuildSystem { file } => {
            let inst = read_input(&file, cli.format)?;
            let cp = polysys::central_path_system(&inst);
            let opt = polysys::optimality_system(&inst);
            out.write("central_path_system.txt", &(cp.to_text() + "\n"))?;
            out.write("optimality_system.txt", &(opt.to_text() + "\n"))?;
            let mut v = json!({
                "variables": cp.vars,
                "central_path_polynomials": cp.polys.len(),
                "optimality_polynomials": opt.polys.len(),
                "q_total_degree": polysys::sos_q(&inst).total_degree(),
            });
            match polysys::epsilon_from_start(&inst).and_then(|e| polysys::q_tilde_and_deformation(&inst, &e)) {
                Ok(q) => {
                    v["epsilon"] = json!(fmt_rat(&q.eps));
                    v["tdeg_mu"] = json!(q.tdeg_mu);
                    v["deg_v"] = json!(q.deg_v);
                    v["d"] = json!(q.d);
                    v["dbar"] = json!(q.dbar);
                }
                Err(e) => v["deformation"] = json!({ "error": e.to_string() }),
            }
            out.write_json("system.json", &v)?;
            emit(&pretty(&v));
        }
        Cmd::Eliminate { file } => {
            let inst = read_input(&file, cli.format)?;
            let reps = urs::eliminate_to_urs(&inst)?;
            let tags = urs::classify_all(&inst, &reps, &rat(1))?;
            let v = json!({
                "representations": reps.iter().map(|u| u.to_json()).collect::<Vec<_>>(),
                "discriminants": reps.iter().map(|u| exactalg::bipoly::discriminant(&u.f).map(|d| d.to_string()).unwrap_or_default()).collect::<Vec<_>>(),
                "branches": tags,
                "separating_form_seed": urs::SEP_SEED,
            });
            out.write_json("urs.json", &v)?;
            emit(&pretty(&v));
        }
        Cmd::LimitPoint { file } => {
            let inst = read_input(&file, cli.format)?;
            let reps = urs::eliminate_to_urs(&inst)?;
            let cert = limits::limit_point(&inst, &reps, &rat(1))?;
            let v = cert.to_json();
            out.write_json("limit_point.json", &v)?;
            emit(&pretty(&v));
        }
        Cmd::Trace { file, mu_from, mu_to, ratio, precision, no_limit } => {
            let inst = read_input(&file, cli.format)?;
            let prec = precision.unwrap_or_else(default_precision);
            let (a, b, r) = (urs::parse_mu(&mu_from)?, urs::parse_mu(&mu_to)?, urs::parse_mu(&ratio)?);
            let log = tracer::trace(&inst, &a, &b, &r, None, prec)?;
            let limit = if no_limit {
                None
            } else {
                urs::eliminate_to_urs(&inst)
                    .and_then(|reps| limits::limit_point(&inst, &reps, &rat(1)))
                    .ok()
                    .and_then(|c| c.point.x_rat().zip(c.point.s_rat()))
            };
            let lim = limit.as_ref().map(|(x, s)| (x, s));
            let csv = tracer::to_csv(&log, lim);
            out.write("trace.csv", &csv)?;
            if let Some((x, s)) = lim {
                if let Ok(fit) = tracer::fit_rate(&log, x, s, 6) {
                    let v = json!(fit);
                    out.write_json("fit.json", &v)?;
                    eprintln!("fitted exponents: gamma_x = {:.4}, gamma_s = {:.4}", fit.gamma_x, fit.gamma_s);
                }
            }
            emit_raw(&csv);
        }
        Cmd::Rate { file, precision } => {
            let inst = read_input(&file, cli.format)?;
            let opts = rate::RateOptions { precision: precision.unwrap_or_else(default_precision), ..Default::default() };
            let r = rate::rate_report_with(&inst, &opts)?;
            out.write("newton_polygon_x.csv", &r.x.polygon.to_csv())?;
            out.write("newton_polygon_s.csv", &r.s.polygon.to_csv())?;
            let v = r.to_json();
            out.write_json("rate.json", &v)?;
            emit(&pretty(&v));
        }
        Cmd::Report { file, precision } => {
            let inst = read_input(&file, cli.format)?;
            let opts = ReportOptions { precision: precision.unwrap_or_else(default_precision), ..Default::default() };
            let rep = report::build_report(&inst, &opts);
            out.write_json("report.json", &rep.json)?;
            out.write("report.txt", &rep.to_text())?;
            out.write_json("timings.json", &rep.timings_json())?;
            if let Some(log) = &rep.trace {
                out.write("trace.csv", &tracer::to_csv(log, rep.limit.as_ref().map(|(x, s)| (x, s))))?;
            }
            emit_raw(&rep.to_text());
            return Ok(rep.status as u8);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
