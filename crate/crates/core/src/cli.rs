//! Command-line front end. Results go to stdout; domain errors go to stderr
//! as `{"error": code, "detail": text}` with exit code 1; usage errors exit 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use num_traits::Zero;
use serde_json::json;

use crate::arith::{fmt_rat, json as jint};
use crate::chambers::{
    box_scan_walls, enumerate_walls_rank2_elliptic, genericity_certificate, is_v_suitable, rank0_genericity,
    walls_meeting_segment, walls_through, WallCertificate,
};
use crate::error::Error;
use crate::fixtures::{render_table, run_fixtures};
use crate::lattice::LatticeVector;
use crate::mukai::{parse_class, MukaiVector, SurfaceKind, SurfaceModel};
use crate::ols::TripleInput;
use crate::perp::{algebraic_perp, full_perp_report, resolution_b2, resolution_b2_for, PerpReport};
use crate::reduction::{reduce, render_text, verify_trace, ReductionConfig, ReductionTrace};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "mukai", version, about = "Exact Mukai-lattice, wall and reduction computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct SurfaceArg {
    /// JSON file, inline JSON, or one of k3-elliptic, abelian-elliptic,
    /// k3-deg2, abelian-deg2.
    #[arg(long)]
    pub surface: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mukai pairing (v, u).
    Pair {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
        #[arg(long)]
        u: MukaiVector,
    },
    /// Product v·u in the cohomology ring.
    Product {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
        #[arg(long)]
        u: MukaiVector,
    },
    /// The wall bound |v|.
    Norm {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
    },
    /// Walls through H, the full list on an elliptic model, or a box scan.
    Walls {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
        /// Polarization, e.g. `1,3`. Without it the elliptic list is returned.
        #[arg(long = "h", value_parser = parse_class_arg)]
        h: Option<LatticeVector>,
        /// Uncertified scan of |coordinates| <= N.
        #[arg(long = "box", conflicts_with = "h")]
        box_bound: Option<u32>,
    },
    /// Walls meeting the segment from H to H'.
    Segment {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
        #[arg(long = "h", value_parser = parse_class_arg)]
        h: LatticeVector,
        #[arg(long = "h-prime", value_parser = parse_class_arg)]
        h_prime: LatticeVector,
    },
    /// Genericity certificate of H for v.
    Generic {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
        #[arg(long = "h", value_parser = parse_class_arg)]
        h: LatticeVector,
        /// Rank-0 sub-object candidates, e.g. `0,(1,0),1`; repeatable.
        #[arg(long = "candidate")]
        candidates: Vec<MukaiVector>,
    },
    /// Suitability of H = σ + lf on an elliptic model.
    Suitable {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
        #[arg(long = "h", value_parser = parse_class_arg)]
        h: LatticeVector,
    },
    /// Orthogonal complement: of the square-2 class in the full lattice of
    /// `--kind`, or of `--v` in the algebraic lattice of `--surface`.
    Perp {
        #[arg(long, value_parser = parse_kind, required_unless_present = "surface")]
        kind: Option<SurfaceKind>,
        #[arg(long, requires = "v", conflicts_with = "kind")]
        surface: Option<String>,
        #[arg(long)]
        v: Option<MukaiVector>,
    },
    /// Second Betti number of the symplectic resolution.
    B2 {
        #[arg(long, value_parser = parse_kind, required_unless_present = "surface")]
        kind: Option<SurfaceKind>,
        #[arg(long, requires = "v", conflicts_with = "kind")]
        surface: Option<String>,
        #[arg(long)]
        v: Option<MukaiVector>,
    },
    /// Numerical type of the moduli space.
    Classify {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        v: MukaiVector,
    },
    /// Reduce a triple to the canonical target.
    Reduce {
        /// JSON file or inline JSON: {"surface", "v", "H", "rank0_candidates"?}.
        #[arg(long)]
        triple: String,
        /// JSON file or inline JSON with threshold_a, threshold_n, cap_n, cap_c1.
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        threshold_a: Option<u64>,
        #[arg(long)]
        threshold_n: Option<u64>,
    },
    /// Re-check a reduction trace.
    Verify {
        #[arg(long)]
        trace: String,
    },
    /// Replay the built-in worked examples.
    Fixtures,
}

fn parse_class_arg(s: &str) -> Result<LatticeVector, String> {
    parse_class(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<SurfaceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure after argument parsing.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Io(String),
    Usage(String),
    /// Result printed, but it reports a failed check.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn document(&self) -> serde_json::Value {
        match self {
            Failure::Domain(e) => {
                let mut doc = json!({"error": e.code(), "detail": e.to_string()});
                if let Error::Ols(v) = e {
                    doc["violations"] = serde_json::to_value(v).unwrap_or_default();
                }
                doc
            }
            Failure::Io(d) => json!({"error": "io_error", "detail": d}),
            Failure::Usage(d) => json!({"error": "usage", "detail": d}),
            Failure::Rejected(d) => json!({"error": "verification_failed", "detail": d}),
        }
    }
}

fn read_source(text: &str) -> Result<String, Failure> {
    let t = text.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(text.to_string());
    }
    std::fs::read_to_string(Path::new(text)).map_err(|e| Failure::Io(format!("{text}: {e}")))
}

fn load_json<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    let body = read_source(text)?;
    serde_json::from_str(&body).map_err(|e| Failure::Domain(Error::Parse(e.to_string())))
}

fn load_surface(text: &str) -> Result<SurfaceModel, Failure> {
    match SurfaceModel::preset(text) {
        Some(s) => Ok(s),
        None => load_json(text),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn int_json(n: &num_bigint::BigInt) -> String {
    format!("{}\n", serde_json::to_string(&jint::JsonInt(n.clone())).expect("serializable"))
}

fn opt(n: Option<&num_bigint::BigInt>) -> String {
    n.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with header `a_coords,D_square,dot_H,dot_Hprime,t`; the coordinates of
/// `D` fill as many leading fields as the Picard rank.
pub fn export_walls_csv(walls: &[WallCertificate]) -> String {
    let mut out = String::from("a_coords,D_square,dot_H,dot_Hprime,t\n");
    for w in walls {
        let coords: Vec<String> = w.d.coords.iter().map(|x| x.to_string()).collect();
        let t = w.crossing_parameter.as_ref().map(fmt_rat).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            coords.join(","),
            w.d_square,
            opt(w.pairing("H")),
            opt(w.pairing("H'")),
            t
        ));
    }
    out
}

fn walls_text(walls: &[WallCertificate]) -> String {
    let mut out = String::new();
    for w in walls {
        out.push_str(&format!("D={} D^2={}", w.d, w.d_square));
        for (k, x) in &w.pairings {
            out.push_str(&format!(" D.{k}={x}"));
        }
        if let Some(t) = &w.crossing_parameter {
            out.push_str(&format!(" t={}", fmt_rat(t)));
        }
        out.push('\n');
    }
    out
}

fn no_csv(format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage("csv output is only available for walls and segment".into()));
    }
    Ok(())
}

fn walls_out(format: Format, walls: &[WallCertificate]) -> String {
    match format {
        Format::Text => walls_text(walls),
        Format::Json => to_json(&walls),
        Format::Csv => export_walls_csv(walls),
    }
}

fn perp_text(r: &PerpReport) -> String {
    let mut out = format!(
        "rank {}\nsignature ({},{},{})\ndiscriminant {}\n",
        r.rank, r.signature[0], r.signature[1], r.signature[2], r.discriminant
    );
    if let Some(b) = r.predicted_b2 {
        out.push_str(&format!("predicted b2 {b}\n"));
    }
    out
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let f = cli.format;
    match cli.command {
        Command::Pair { surface, v, u } => {
            no_csv(f)?;
            let x = load_surface(&surface.surface)?.mukai_pairing(&v, &u)?;
            Ok(if f == Format::Json { int_json(&x) } else { format!("{x}\n") })
        }
        Command::Product { surface, v, u } => {
            no_csv(f)?;
            let p = load_surface(&surface.surface)?.mukai_product(&v, &u)?;
            Ok(if f == Format::Json { to_json(&p) } else { format!("{p}\n") })
        }
        Command::Norm { surface, v } => {
            no_csv(f)?;
            let n = load_surface(&surface.surface)?.norm_bound(&v)?;
            Ok(if f == Format::Json { format!("\"{}\"\n", fmt_rat(&n)) } else { format!("{}\n", fmt_rat(&n)) })
        }
        Command::Walls { surface, v, h, box_bound } => {
            let s = load_surface(&surface.surface)?;
            if let Some(b) = box_bound {
                let scan = box_scan_walls(&s, &v, b)?;
                return Ok(match f {
                    Format::Json => to_json(&scan),
                    _ => walls_out(f, &scan.walls),
                });
            }
            let walls = match h {
                Some(h) => walls_through(&s, &h, &v)?,
                None => enumerate_walls_rank2_elliptic(&s, &v)?,
            };
            Ok(walls_out(f, &walls))
        }
        Command::Segment { surface, v, h, h_prime } => {
            let s = load_surface(&surface.surface)?;
            Ok(walls_out(f, &walls_meeting_segment(&s, &h, &h_prime, &v)?))
        }
        Command::Generic { surface, v, h, candidates } => {
            no_csv(f)?;
            let s = load_surface(&surface.surface)?;
            let cert = if v.r.is_zero() {
                rank0_genericity(&s, &h, &v, &candidates)?
            } else {
                genericity_certificate(&s, &h, &v)?
            };
            Ok(match f {
                Format::Json => to_json(&cert),
                _ => format!("{:?}\n{}", cert.verdict, walls_text(&cert.witnesses)),
            })
        }
        Command::Suitable { surface, v, h } => {
            no_csv(f)?;
            let r = is_v_suitable(&load_surface(&surface.surface)?, &h, &v)?;
            Ok(match f {
                Format::Json => to_json(&r),
                _ => format!(
                    "suitable {}\nby_bound {}\n{}",
                    r.suitable,
                    r.by_bound,
                    walls_text(&r.witnesses)
                ),
            })
        }
        Command::Perp { kind, surface, v } => {
            no_csv(f)?;
            let report = match (kind, surface, v) {
                (Some(k), None, _) => full_perp_report(k),
                (None, Some(s), Some(v)) => PerpReport::new(&algebraic_perp(&load_surface(&s)?, &v)?, None),
                _ => return Err(Failure::Usage("give --kind, or --surface with --v".into())),
            };
            Ok(if f == Format::Json { to_json(&report) } else { perp_text(&report) })
        }
        Command::B2 { kind, surface, v } => {
            no_csv(f)?;
            let b = match (kind, surface, v) {
                (Some(k), None, _) => resolution_b2(k),
                (None, Some(s), Some(v)) => resolution_b2_for(&load_surface(&s)?, &v)?,
                _ => return Err(Failure::Usage("give --kind, or --surface with --v".into())),
            };
            Ok(format!("{b}\n"))
        }
        Command::Classify { surface, v } => {
            no_csv(f)?;
            let c = load_surface(&surface.surface)?.classify_primitive_moduli(&v)?;
            Ok(match f {
                Format::Json => to_json(&c),
                _ => format!("{:?} {}\n", c.kind, c.dimension),
            })
        }
        Command::Reduce { triple, config, threshold_a, threshold_n } => {
            no_csv(f)?;
            let input: TripleInput = load_json(&triple)?;
            let mut cfg: ReductionConfig = match config {
                Some(c) => load_json(&c)?,
                None => ReductionConfig::default(),
            };
            cfg.threshold_a = threshold_a.or(cfg.threshold_a);
            cfg.threshold_n = threshold_n.or(cfg.threshold_n);
            let trace = reduce(&input.validate()?, &cfg)?;
            Ok(if f == Format::Json { to_json(&trace) } else { render_text(&trace) })
        }
        Command::Verify { trace } => {
            no_csv(f)?;
            let trace: ReductionTrace = load_json(&trace)?;
            let report = verify_trace(&trace);
            let body = match f {
                Format::Json => to_json(&report),
                _ => {
                    let mut s = String::new();
                    for m in &report.moves {
                        let tag = if m.pass { "ok" } else { "FAIL" };
                        s.push_str(&format!("move {:>2} {tag}", m.index + 1));
                        for x in &m.failures {
                            s.push_str(&format!(" {x:?}"));
                        }
                        s.push('\n');
                    }
                    for x in &report.end_failures {
                        s.push_str(&format!("end FAIL {x:?}\n"));
                    }
                    s.push_str(if report.pass { "pass\n" } else { "fail\n" });
                    s
                }
            };
            if report.pass {
                Ok(body)
            } else {
                Err(Failure::Rejected(body))
            }
        }
        Command::Fixtures => {
            no_csv(f)?;
            let results = run_fixtures();
            let table = render_table(&results);
            if results.iter().all(|r| r.pass) {
                Ok(table)
            } else {
                Err(Failure::Rejected(table))
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli) {
        Ok(body) => {
            let _ = out.write_all(body.as_bytes());
            0
        }
        Err(Failure::Rejected(body)) => {
            let _ = out.write_all(body.as_bytes());
            let _ = writeln!(err, "{}", Failure::Rejected("see output".into()).document());
            1
        }
        Err(Failure::Usage(d)) => {
            let _ = writeln!(err, "{}", Failure::Usage(d).document());
            2
        }
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.document());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("mukai").chain(args.iter().copied()).collect();
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn norm_of_the_elliptic_example() {
        let (code, out, _) = run_str(&["norm", "--surface", "k3-elliptic", "--v", "2,(1,2),1"]);
        assert_eq!((code, out.as_str()), (0, "6\n"));
    }

    #[test]
    fn walls_csv_row() {
        let (code, out, _) =
            run_str(&["--format", "csv", "walls", "--surface", "k3-elliptic", "--v", "2,(1,2),1", "--h", "1,3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "a_coords,D_square,dot_H,dot_Hprime,t\n1,-1,-4,0,,\n");
    }

    #[test]
    fn empty_wall_set_is_header_only() {
        let (_, out, _) =
            run_str(&["--format", "csv", "walls", "--surface", "k3-elliptic", "--v", "2,(1,2),1", "--h", "1,5"]);
        assert_eq!(out, "a_coords,D_square,dot_H,dot_Hprime,t\n");
    }

    #[test]
    fn segment_csv_has_exact_t() {
        let (_, out, _) = run_str(&[
            "--format", "csv", "segment", "--surface", "k3-elliptic", "--v", "2,(1,2),1", "--h", "1,3", "--h-prime",
            "1,10",
        ]);
        assert!(out.contains("1,-2,-6,-1,6,6/7\n"), "{out}");
    }

    #[test]
    fn b2() {
        assert_eq!(run_str(&["b2", "--kind", "k3"]).1, "24\n");
        assert_eq!(run_str(&["b2", "--kind", "abelian"]).1, "8\n");
    }

    #[test]
    fn domain_errors_are_structured() {
        let (code, out, err) = run_str(&["norm", "--surface", "k3-deg2", "--v", "1,(0),-1"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        let doc: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(doc["error"], "rank_too_small");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["norm", "--surface", "k3-deg2", "--v", "oops"]).0, 2);
        assert_eq!(run_str(&["--format", "csv", "b2", "--kind", "k3"]).0, 2);
    }

    #[test]
    fn reduce_step_one_inline() {
        let triple = r#"{"surface":{"kind":"K3","ns":{"rank":1,"gram":[[2]]},"ample":[1]},"v":{"r":0,"c":[2],"s":8},"H":[1]}"#;
        let (code, out, err) = run_str(&["--format", "json", "reduce", "--triple", triple]);
        assert_eq!(code, 0, "{err}");
        let trace: ReductionTrace = serde_json::from_str(&out).unwrap();
        assert_eq!(trace.moves.len(), 1);
        assert!(verify_trace(&trace).pass);
    }
}
