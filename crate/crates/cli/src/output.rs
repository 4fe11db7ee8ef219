use std::fmt::Write as _;
use std::path::PathBuf;

use qso::casimir::CasimirElement;
use qso::gtrep::{dimension, enumerate_patterns, HighestWeight, RepMatrixSet};
use qso::pbw::NCPoly;
use qso::verify::{check_casimir_in, chi, VerificationReport, VerifyConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::{CliError, CliResult, Format};

pub struct Sink {
    path: Option<PathBuf>,
    format: Format,
    digits: usize,
}

/// One row per (weight, Casimir, q0).
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub weights: String,
    pub casimir: String,
    pub q0: f64,
    pub chi_exact: String,
    pub chi_numeric_re: f64,
    pub chi_numeric_im: f64,
    pub measured_re: f64,
    pub measured_im: f64,
    pub rel_err: f64,
}

#[derive(Serialize)]
struct IrrepRow {
    n: u32,
    weight: String,
    dimension: usize,
}

pub fn spectrum_rows(config: &VerifyConfig) -> qso::Result<Vec<SpectrumRow>> {
    let elements = config.kinds.iter().map(|&k| qso::casimir::build(config.n, k)).collect::<qso::Result<Vec<_>>>()?;
    let jobs: Vec<(&HighestWeight, f64)> =
        config.weights.iter().flat_map(|hw| config.q0.iter().map(move |&q| (hw, q))).collect();
    let chunks = jobs
        .par_iter()
        .map(|&(hw, q0)| {
            let set = RepMatrixSet::new(hw, q0)?;
            elements
                .iter()
                .map(|c| {
                    let (_, e) = check_casimir_in(&set, c)?;
                    Ok(SpectrumRow {
                        n: hw.n,
                        weights: hw.to_string(),
                        casimir: e.casimir,
                        q0,
                        chi_exact: chi(hw, c.kind)?.to_string(),
                        chi_numeric_re: e.chi_re,
                        chi_numeric_im: e.chi_im,
                        measured_re: e.measured_re,
                        measured_im: e.measured_im,
                        rel_err: e.rel_err,
                    })
                })
                .collect::<qso::Result<Vec<_>>>()
        })
        .collect::<qso::Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

impl Sink {
    pub fn new(path: Option<PathBuf>, format: Format, digits: usize) -> Self {
        Sink { path, format, digits }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.path {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn num(&self, x: f64) -> String {
        format!("{x:.*e}", self.digits.saturating_sub(1))
    }

    fn csv<T: Serialize>(&self, rows: &[T]) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Runtime(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
    }

    fn json<T: Serialize + ?Sized>(&self, v: &T) -> String {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn irreps(&self, n: u32, weights: &[HighestWeight], patterns: bool) -> CliResult<()> {
        let rows = weights
            .iter()
            .map(|w| Ok(IrrepRow { n, weight: w.to_string(), dimension: dimension(w)? }))
            .collect::<CliResult<Vec<_>>>()?;
        let text = match self.format {
            Format::Json => self.json(&rows),
            Format::Csv => self.csv(&rows)?,
            Format::Text => {
                let mut s = String::new();
                for (w, r) in weights.iter().zip(&rows) {
                    let _ = writeln!(s, "{}: {}", r.weight, r.dimension);
                    if patterns {
                        for p in enumerate_patterns(w)? {
                            for line in p.to_string().lines() {
                                let _ = writeln!(s, "    {line}");
                            }
                            let _ = writeln!(s);
                        }
                    }
                }
                s
            }
        };
        self.emit(&text)
    }

    pub fn casimir(&self, c: &CasimirElement, normal: Option<&NCPoly>) -> CliResult<()> {
        let label = c.kind.label(c.n);
        let text = match self.format {
            Format::Json => self.json(&serde_json::json!({
                "n": c.n,
                "casimir": label,
                "terms": c.body.len(),
                "body": c.body.to_string(),
                "normal_form": normal.map(|p| p.to_string()),
            })),
            Format::Csv => {
                let mut rows = vec![("body", c.body.to_string())];
                if let Some(p) = normal {
                    rows.push(("normal_form", p.to_string()));
                }
                self.csv(&rows.iter().map(|(k, v)| (c.n, &label, k, v)).collect::<Vec<_>>())?
            }
            Format::Text => {
                let mut s = format!("{}\n", c.body);
                if let Some(p) = normal {
                    let _ = writeln!(s, "normal form: {p}");
                }
                s
            }
        };
        self.emit(&text)
    }

    pub fn normal_form(&self, n: u32, p: &NCPoly) -> CliResult<()> {
        let text = match self.format {
            Format::Json => self.json(&serde_json::json!({ "n": n, "normal_form": p.to_string() })),
            Format::Csv => self.csv(&[(n, p.to_string())])?,
            Format::Text => format!("{p}\n"),
        };
        self.emit(&text)
    }

    pub fn spectrum(&self, rows: &[SpectrumRow]) -> CliResult<()> {
        let text = match self.format {
            Format::Json => self.json(rows),
            Format::Csv => self.spectrum_csv(rows)?,
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "{:<14} {:<8} {:<8} {:>24} {:>24} {:>10}  chi",
                    "weight", "casimir", "q0", "chi(q0)", "measured", "rel_err"
                );
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{:<14} {:<8} {:<8} {:>24} {:>24} {:>10.2e}  {}",
                        r.weights,
                        r.casimir,
                        r.q0,
                        self.complex(r.chi_numeric_re, r.chi_numeric_im),
                        self.complex(r.measured_re, r.measured_im),
                        r.rel_err,
                        r.chi_exact
                    );
                }
                s
            }
        };
        self.emit(&text)
    }

    fn complex(&self, re: f64, im: f64) -> String {
        qso::verify::fmt_complex(re, im, self.digits)
    }

    fn spectrum_csv(&self, rows: &[SpectrumRow]) -> CliResult<String> {
        let formatted: Vec<_> = rows
            .iter()
            .map(|r| {
                (
                    r.n,
                    &r.weights,
                    &r.casimir,
                    r.q0,
                    &r.chi_exact,
                    self.num(r.chi_numeric_re),
                    self.num(r.chi_numeric_im),
                    self.num(r.measured_re),
                    self.num(r.measured_im),
                    self.num(r.rel_err),
                )
            })
            .collect();
        let header = "n,weights,casimir,q0,chi_exact,chi_numeric_re,chi_numeric_im,measured_re,measured_im,rel_err\n";
        Ok(format!("{header}{}", self.csv(&formatted)?))
    }

    pub fn report(&self, r: &VerificationReport) -> CliResult<()> {
        let text = match self.format {
            Format::Json => self.json(r),
            Format::Text => r.to_text(self.digits),
            Format::Csv => {
                let rows: Vec<SpectrumRow> = r
                    .eigenvalues
                    .iter()
                    .map(|e| SpectrumRow {
                        n: r.job.n,
                        weights: e.weight.clone(),
                        casimir: e.casimir.clone(),
                        q0: e.q0,
                        chi_exact: e.chi_exact.clone(),
                        chi_numeric_re: e.chi_re,
                        chi_numeric_im: e.chi_im,
                        measured_re: e.measured_re,
                        measured_im: e.measured_im,
                        rel_err: e.rel_err,
                    })
                    .collect();
                self.spectrum_csv(&rows)?
            }
        };
        self.emit(&text)
    }
}
