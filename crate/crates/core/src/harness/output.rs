use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::run::{RunReport, SeriesRow};
use crate::error::{Error, Result};

pub const METRICS_HEADER: [&str; 7] = ["generation", "evaluations", "hv", "igd", "score", "invoked", "tokens"];

pub const METRICS_FILE: &str = "metrics.csv";
pub const FRONT_FILE: &str = "final_front.csv";
pub const LOG_FILE: &str = "run.jsonl";
pub const SVG_FILE: &str = "hv.svg";

/// Shortest round-trip text; infinities as `inf` / `-inf`.
pub fn format_real(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        v.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputPaths {
    pub metrics: PathBuf,
    pub front: PathBuf,
    pub log: PathBuf,
    pub svg: Option<PathBuf>,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_metrics_csv(path: &Path, rows: impl IntoIterator<Item = SeriesRow>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(METRICS_HEADER).map_err(|e| Error::csv(path, e))?;
    for r in rows {
        w.write_record([
            r.generation.to_string(),
            r.evaluations.to_string(),
            format_real(r.hv),
            format_real(r.igd),
            format_real(r.score),
            r.invoked.to_string(),
            r.tokens.to_string(),
        ])
        .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<SeriesRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let header = r.headers().map_err(|e| Error::csv(path, e))?.clone();
    if header.iter().ne(METRICS_HEADER) {
        return Err(Error::Data {
            path: path.into(),
            reason: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let bad = |line: usize, what: &str| Error::Data {
        path: path.into(),
        reason: format!("row {line}: bad {what}"),
    };
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        rows.push(SeriesRow {
            generation: field(0).parse().map_err(|_| bad(i + 1, "generation"))?,
            evaluations: field(1).parse().map_err(|_| bad(i + 1, "evaluations"))?,
            hv: field(2).parse().map_err(|_| bad(i + 1, "hv"))?,
            igd: field(3).parse().map_err(|_| bad(i + 1, "igd"))?,
            score: field(4).parse().map_err(|_| bad(i + 1, "score"))?,
            invoked: field(5).parse().map_err(|_| bad(i + 1, "invoked"))?,
            tokens: field(6).parse().map_err(|_| bad(i + 1, "tokens"))?,
        });
    }
    Ok(rows)
}

fn write_front_csv(path: &Path, front: &[Vec<f64>]) -> Result<()> {
    let m = front.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record((1..=m).map(|k| format!("f{k}")))
        .map_err(|e| Error::csv(path, e))?;
    for f in front {
        w.write_record(f.iter().map(|v| format_real(*v)))
            .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_log(path: &Path, report: &RunReport) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for g in &report.log {
        let line = serde_json::to_string(g).expect("log records serialize");
        writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Polyline of HV against evaluations with bare axes.
pub fn hv_svg(rows: &[SeriesRow]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    let max_eval = rows.iter().map(|r| r.evaluations).max().unwrap_or(1).max(1) as f64;
    let sx = |e: usize| PAD + (W - 2.0 * PAD) * e as f64 / max_eval;
    let sy = |hv: f64| H - PAD - (H - 2.0 * PAD) * hv.clamp(0.0, 1.0);
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", sx(r.evaluations), sy(r.hv)))
        .collect();
    let mut svg = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">\n");
    svg += &format!(
        "<line x1=\"{PAD}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n<line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        y0 = H - PAD,
        x1 = W - PAD
    );
    svg += &format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">evaluations (max {max_eval})</text>\n",
        W / 2.0,
        H - 15.0
    );
    svg += &format!(
        "<text x=\"15\" y=\"{}\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">HV</text>\n",
        H / 2.0,
        H / 2.0
    );
    svg += &format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">1</text>\n",
        PAD - 5.0,
        PAD + 4.0
    );
    svg += &format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">0</text>\n",
        PAD - 5.0,
        H - PAD + 4.0
    );
    svg += &format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n</svg>\n",
        points.join(" ")
    );
    svg
}

/// Writes the metrics CSV, the final-front CSV, the JSON-lines run log and
/// optionally the HV plot into `dir`, creating it if needed.
pub fn emit_outputs(report: &RunReport, dir: &Path, svg: bool) -> Result<OutputPaths> {
    create_dir(dir)?;
    let paths = OutputPaths {
        metrics: dir.join(METRICS_FILE),
        front: dir.join(FRONT_FILE),
        log: dir.join(LOG_FILE),
        svg: svg.then(|| dir.join(SVG_FILE)),
    };
    write_metrics_csv(&paths.metrics, report.series().copied())?;
    write_front_csv(&paths.front, &report.final_front())?;
    write_log(&paths.log, report)?;
    if let Some(p) = &paths.svg {
        let rows: Vec<SeriesRow> = report.series().copied().collect();
        fs::write(p, hv_svg(&rows)).map_err(|e| Error::io(p, e))?;
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::dominates;
    use crate::harness::{run, Algorithm, RunConfig};

    fn quick() -> RunReport {
        run(&RunConfig {
            algorithm: Algorithm::Nsga2Llm,
            pop_size: 12,
            max_evaluations: 240,
            pf_samples: 200,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn metrics_csv_round_trips_and_has_fixed_header() {
        let report = quick();
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_outputs(&report, dir.path(), true).unwrap();
        let text = fs::read_to_string(&paths.metrics).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "generation,evaluations,hv,igd,score,invoked,tokens"
        );
        let back = read_metrics_csv(&paths.metrics).unwrap();
        let orig: Vec<SeriesRow> = report.series().copied().collect();
        assert_eq!(back.len(), orig.len());
        for (a, b) in back.iter().zip(&orig) {
            assert_eq!(a.hv.to_bits(), b.hv.to_bits());
            assert_eq!(a.score.to_bits(), b.score.to_bits());
            assert_eq!(
                (a.generation, a.evaluations, a.invoked, a.tokens),
                (b.generation, b.evaluations, b.invoked, b.tokens)
            );
        }
        assert!(fs::read_to_string(paths.svg.unwrap()).unwrap().contains("<polyline"));
        assert_eq!(fs::read_to_string(&paths.log).unwrap().lines().count(), orig.len());
    }

    #[test]
    fn front_rows_are_mutually_nondominated() {
        let report = quick();
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_outputs(&report, dir.path(), false).unwrap();
        let mut r = csv::Reader::from_path(&paths.front).unwrap();
        let rows: Vec<Vec<f64>> = r
            .records()
            .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
            .collect();
        assert!(!rows.is_empty());
        for a in &rows {
            for b in &rows {
                assert!(!dominates(a, b));
            }
        }
    }

    #[test]
    fn unwritable_directory_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let err = emit_outputs(&quick(), &blocker.join("sub"), false).unwrap_err();
        assert!(err.to_string().contains("file"));
    }

    #[test]
    fn infinities_survive_text() {
        assert_eq!(format_real(f64::NEG_INFINITY), "-inf");
        assert_eq!("-inf".parse::<f64>().unwrap(), f64::NEG_INFINITY);
        assert_eq!(format_real(0.1), "0.1");
    }
}
