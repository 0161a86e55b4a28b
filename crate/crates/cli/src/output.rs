//! Output plumbing: JSON Lines by default, CSV on request, byte-for-byte
//! deterministic for a fixed configuration.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use num_bigint::BigUint;
use serde::Serialize;

use permgamma::{
    Decomposition, GammaReport, GrowthEstimate, Identity, IdentityCheck, OrbitType, PartitionPair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Buffered sink for stdout or a file.
pub struct OutputTarget {
    writer: Box<dyn Write>,
    header_done: bool,
}

impl OutputTarget {
    pub fn open(path: Option<&str>) -> io::Result<OutputTarget> {
        let writer: Box<dyn Write> = match path {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(OutputTarget {
            writer,
            header_done: false,
        })
    }

    pub fn finish(&mut self) -> io::Result<()> {
        self.writer.flush()
    }

    fn line(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.writer, "{text}")
    }

    fn header_once(&mut self, header: &str) -> io::Result<()> {
        if !self.header_done {
            self.header_done = true;
            writeln!(self.writer, "{header}")?;
        }
        Ok(())
    }
}

/// Twelve significant digits, scientific notation.
fn format_root(value: f64) -> String {
    format!("{value:.11e}")
}

pub fn emit_gamma_report(
    out: &mut OutputTarget,
    report: &GammaReport,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let json = serde_json::to_string(report).expect("report serializes");
            out.line(&json)
        }
        Format::Csv => {
            out.header_once(
                "agree,gamma_closed,gamma_oracle,gamma_structural,lambda1,lambda2,n,oracle_skipped,p,witness_block,witness_line",
            )?;
            let oracle = report
                .gamma_oracle
                .as_ref()
                .map(|v| v.to_string())
                .unwrap_or_default();
            let line = report
                .witness_line
                .as_ref()
                .map(|line| {
                    line.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            out.line(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.agree,
                report.gamma_closed,
                oracle,
                report.gamma_structural,
                report.lambda.0,
                report.lambda.1,
                report.n,
                report.oracle_skipped,
                report.p,
                report.witness_block,
                line,
            ))
        }
    }
}

#[derive(Serialize)]
struct DecompositionLine<'a> {
    signature: &'a [u32],
    d: u32,
    dim: u64,
    mult: &'a str,
    projective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    route: Option<&'a str>,
}

pub fn emit_decomposition(
    out: &mut OutputTarget,
    dec: &Decomposition,
    route: Option<&str>,
    format: Format,
) -> io::Result<()> {
    let rows = dec.rows();
    match format {
        Format::Json => {
            for row in &rows {
                let line = DecompositionLine {
                    signature: &row.signature,
                    d: row.d,
                    dim: row.dim,
                    mult: &row.mult,
                    projective: row.projective,
                    route,
                };
                out.line(&serde_json::to_string(&line).expect("row serializes"))?;
            }
        }
        Format::Csv => {
            out.header_once("signature,d,dim,mult,projective,route")?;
            for row in &rows {
                let signature = row
                    .signature
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                out.line(&format!(
                    "{},{},{},{},{},{}",
                    signature,
                    row.d,
                    row.dim,
                    row.mult,
                    row.projective,
                    route.unwrap_or(""),
                ))?;
            }
        }
    }
    Ok(())
}

pub fn emit_growth(
    out: &mut OutputTarget,
    estimate: &GrowthEstimate,
    format: Format,
) -> io::Result<()> {
    if format == Format::Csv {
        out.header_once("m,c,ratio,root")?;
    }
    for (i, c) in estimate.c_values.iter().enumerate() {
        let m = i + 1;
        // ratio_estimates[i-1] = c_i+1 / c_i, reported on the later power.
        let ratio = if i >= 1 {
            estimate
                .ratio_estimates
                .get(i - 1)
                .map(|r| format!("{}/{}", r.numer(), r.denom()))
        } else {
            None
        };
        let root = format_root(estimate.root_estimates[i]);
        match format {
            Format::Json => {
                let ratio_json = match &ratio {
                    Some(r) => format!("\"{r}\""),
                    None => "null".to_string(),
                };
                out.line(&format!(
                    "{{\"m\":{m},\"c\":\"{c}\",\"ratio\":{ratio_json},\"root\":{root}}}"
                ))?;
            }
            Format::Csv => {
                out.line(&format!("{m},{c},{},{root}", ratio.unwrap_or_default()))?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct IdentityLine<'a> {
    equal: bool,
    identity: &'a str,
    lhs: String,
    params: std::collections::BTreeMap<&'static str, u64>,
    rhs: String,
}

pub fn emit_identity_header(out: &mut OutputTarget, format: Format) -> io::Result<()> {
    if format == Format::Csv {
        out.header_once("identity,params,lhs,rhs,equal")?;
    }
    Ok(())
}

pub fn emit_identity_row(
    out: &mut OutputTarget,
    identity: &Identity,
    check: &IdentityCheck,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let line = IdentityLine {
                equal: check.equal(),
                identity: identity.name(),
                lhs: check.lhs.to_string(),
                params: identity.params(),
                rhs: check.rhs.to_string(),
            };
            out.line(&serde_json::to_string(&line).expect("row serializes"))
        }
        Format::Csv => {
            let params = identity
                .params()
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            out.line(&format!(
                "{},{},{},{},{}",
                identity.name(),
                params,
                check.lhs,
                check.rhs,
                check.equal(),
            ))
        }
    }
}

#[derive(Serialize)]
struct OracleLine<'a> {
    gamma: String,
    n: u64,
    orbit_type: &'a OrbitType,
    p: u64,
    r: u64,
    witness: &'a [u8],
}

pub fn emit_oracle_header(out: &mut OutputTarget, format: Format) -> io::Result<()> {
    if format == Format::Csv {
        out.header_once("gamma,n,orbit_type,p,r,witness")?;
    }
    Ok(())
}

pub fn emit_oracle_row(
    out: &mut OutputTarget,
    pp: &PartitionPair,
    orbit_type: &OrbitType,
    gamma: &BigUint,
    witness: &[u8],
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let line = OracleLine {
                gamma: gamma.to_string(),
                n: pp.n(),
                orbit_type,
                p: orbit_type.p,
                r: pp.r(),
                witness,
            };
            out.line(&serde_json::to_string(&line).expect("row serializes"))
        }
        Format::Csv => {
            let counts = orbit_type
                .counts
                .iter()
                .map(|(j, i)| format!("{j}:{i}"))
                .collect::<Vec<_>>()
                .join(" ");
            let witness = witness
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.line(&format!(
                "{},{},{},{},{},{}",
                gamma,
                pp.n(),
                counts,
                orbit_type.p,
                pp.r(),
                witness,
            ))
        }
    }
}
