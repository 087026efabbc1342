//! On-disk formats: series documents, run manifests, the coefficient cache,
//! and CSV/SVG emitters. Decimals are always written as strings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::ProfilePoint;
use crate::error::{Error, Result};
use crate::numkernel::{Parity, ParityPolynomial, Scalar, Term};
use crate::series::{AnsatzSpec, BBSeries, OrderTerm, PotentialSpec};

/// Bumped whenever a change to the solver could alter stored coefficients.
pub const ALGORITHM_VERSION: u32 = 1;

/// Environment variable that supplies a default cache directory.
pub const CACHE_DIR_ENV: &str = "BBPERT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub power: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialDoc {
    pub coeffs: Vec<TermDoc>,
    pub s: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzDoc {
    pub p: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderDoc {
    pub j: usize,
    #[serde(rename = "E")]
    pub energy: String,
    pub f: Vec<TermDoc>,
    #[serde(rename = "W")]
    pub w: Vec<TermDoc>,
}

/// Wire form of a [`BBSeries`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub potential: PotentialDoc,
    pub ansatz: AnsatzDoc,
    pub precision: u32,
    pub terms: Vec<OrderDoc>,
}

fn term_docs(p: &ParityPolynomial) -> Vec<TermDoc> {
    p.nonzero_terms().iter().map(term_doc).collect()
}

fn term_doc(t: &Term) -> TermDoc {
    TermDoc {
        power: t.power,
        value: t.value.to_decimal(),
    }
}

fn parse_terms(docs: &[TermDoc], digits: u32) -> Result<Vec<Term>> {
    docs.iter()
        .map(|d| {
            Ok(Term {
                power: d.power,
                value: Scalar::parse(&d.value, digits)?,
            })
        })
        .collect()
}

pub fn potential_doc(potential: &PotentialSpec) -> PotentialDoc {
    PotentialDoc {
        coeffs: potential.terms().iter().map(term_doc).collect(),
        s: potential.s(),
    }
}

impl SeriesDoc {
    pub fn from_series(series: &BBSeries) -> Self {
        SeriesDoc {
            potential: potential_doc(&series.potential),
            ansatz: AnsatzDoc { p: series.ansatz.p },
            precision: series.precision,
            terms: series
                .terms
                .iter()
                .map(|t| OrderDoc {
                    j: t.j,
                    energy: t.energy.to_decimal(),
                    f: term_docs(&t.f),
                    w: term_docs(&t.w),
                })
                .collect(),
        }
    }

    pub fn to_series(&self) -> Result<BBSeries> {
        let d = self.precision;
        let potential = PotentialSpec::new(&parse_terms(&self.potential.coeffs, d)?, self.potential.s)?;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                if t.j != i {
                    return Err(Error::Parse(format!("term {i} is labelled j={}", t.j)));
                }
                Ok(OrderTerm {
                    j: t.j,
                    energy: Scalar::parse(&t.energy, d)?,
                    f: ParityPolynomial::from_terms(Parity::Odd, &parse_terms(&t.f, d)?, d)?,
                    w: ParityPolynomial::from_terms(Parity::Even, &parse_terms(&t.w, d)?, d)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BBSeries {
            potential,
            ansatz: AnsatzSpec::new(self.ansatz.p),
            precision: d,
            terms,
        })
    }
}

/// Canonical serialized bytes of a series: pretty JSON plus a final newline.
pub fn series_to_json(series: &BBSeries) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&SeriesDoc::from_series(series))?;
    s.push('\n');
    Ok(s)
}

pub fn series_from_json(text: &str) -> Result<BBSeries> {
    let doc: SeriesDoc = serde_json::from_str(text)?;
    doc.to_series()
}

pub fn read_series(path: &Path) -> Result<BBSeries> {
    series_from_json(&fs::read_to_string(path)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    std::io::Write::write_all(&mut tmp, bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Provenance record written next to every series file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub potential: PotentialDoc,
    pub p: u32,
    pub precision: u32,
    pub max_order: usize,
    pub version: String,
    pub algorithm_version: u32,
    pub timestamp: String,
    pub series_sha256: String,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, series: &BBSeries, series_bytes: &[u8]) -> Self {
        RunManifest {
            command_line,
            potential: potential_doc(&series.potential),
            p: series.ansatz.p,
            precision: series.precision,
            max_order: series.max_order().unwrap_or(0),
            version: env!("CARGO_PKG_VERSION").to_string(),
            algorithm_version: ALGORITHM_VERSION,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            series_sha256: sha256_hex(series_bytes),
        }
    }

    /// Sibling path `<series>.manifest.json`.
    pub fn path_for(series_path: &Path) -> PathBuf {
        let mut s = series_path.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        write_atomic(path, s.as_bytes())
    }

    /// Recomputes the hash of the series file at `series_path`.
    pub fn verify(&self, series_path: &Path) -> Result<()> {
        let computed = sha256_hex(&fs::read(series_path)?);
        if computed != self.series_sha256 {
            return Err(Error::HashMismatch {
                path: series_path.display().to_string(),
                stored: self.series_sha256.clone(),
                computed,
            });
        }
        Ok(())
    }
}

/// Content-addressed store of serialized series.
#[derive(Clone, Debug)]
pub struct SeriesCache {
    dir: PathBuf,
}

impl SeriesCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SeriesCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(potential: &PotentialSpec, ansatz: AnsatzSpec, max_order: usize, precision: u32) -> String {
        let coeffs: Vec<String> = potential
            .terms()
            .iter()
            .map(|t| format!("{}:{}", t.power, t.value.to_decimal()))
            .collect();
        let canonical = format!(
            "coeffs={};s={};p={};J={};precision={};algorithm={}",
            coeffs.join(","),
            potential.s(),
            ansatz.p,
            max_order,
            precision,
            ALGORITHM_VERSION
        );
        sha256_hex(canonical.as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Vec<u8>>> {
        match fs::read(self.path(key)) {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn store(&self, key: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.path(key), bytes)
    }
}

/// Value column text for a profile point.
fn profile_value(p: &ProfilePoint) -> String {
    p.log10_ratio
        .as_ref()
        .map_or_else(|| "terminated".to_string(), Scalar::to_decimal)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// `j,log10_abs_Ej_over_E0`.
pub fn profile_csv(points: &[ProfilePoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["j", "log10_abs_Ej_over_E0"])?;
    for p in points {
        w.write_record([p.j.to_string(), profile_value(p)])?;
    }
    finish(w)
}

/// `label,j,log10_abs_Ej_over_E0` for several series.
pub fn figure_csv(series: &[(String, Vec<ProfilePoint>)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "j", "log10_abs_Ej_over_E0"])?;
    for (label, points) in series {
        for p in points {
            w.write_record([label.clone(), p.j.to_string(), profile_value(p)])?;
        }
    }
    finish(w)
}

/// `N,value`, with an optional trailing `Exact` row.
pub fn pade_csv(rows: &[(usize, Scalar)], exact: Option<&Scalar>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["N", "value"])?;
    for (n, v) in rows {
        w.write_record([n.to_string(), v.to_decimal()])?;
    }
    if let Some(e) = exact {
        w.write_record(["Exact".to_string(), e.to_decimal()])?;
    }
    finish(w)
}

/// Parses rows written by [`pade_csv`].
pub fn read_pade_csv(text: &str, digits: u32) -> Result<Vec<(String, Scalar)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec?;
            let label = rec.get(0).unwrap_or_default().to_string();
            let value = Scalar::parse(rec.get(1).unwrap_or_default(), digits)?;
            Ok((label, value))
        })
        .collect()
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Static scatter of `log10 |E_j/E_0|` against `j`. Terminated points are
/// left out.
pub fn figure_svg(series: &[(String, Vec<ProfilePoint>)]) -> String {
    let (w, h, margin) = (640.0, 420.0, 60.0);
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, ps)| {
            ps.iter()
                .filter_map(|p| p.log10_ratio.as_ref().map(|v| (p.j as f64, v.to_f64())))
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let xmax = all.clone().map(|p| p.0).fold(1.0, f64::max);
    let ymin = all.clone().map(|p| p.1).fold(0.0, f64::min).floor();
    let ymax = all.map(|p| p.1).fold(0.0, f64::max).ceil();
    let yspan = (ymax - ymin).max(1.0);
    let sx = |x: f64| margin + x / xmax * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - ymin) / yspan * (h - 2.0 * margin);

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += &format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = margin,
        b = h - margin,
        r = w - margin,
        t = margin
    );
    for tick in [0.0, xmax / 2.0, xmax] {
        out += &format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"middle\">{:.0}</text>\n",
            sx(tick),
            h - margin + 16.0,
            tick
        );
    }
    for tick in [ymin, (ymin + ymax) / 2.0, ymax] {
        out += &format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{:.1}</text>\n",
            margin - 6.0,
            sy(tick) + 4.0,
            tick
        );
    }
    out += &format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">j</text>\n",
        w / 2.0,
        h - 15.0
    );
    out += &format!(
        "<text x=\"16\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">log10|E_j/E0|</text>\n",
        h / 2.0,
        h / 2.0
    );
    for (i, ((label, _), ps)) in series.iter().zip(&pts).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for (x, y) in ps {
            out += &format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                sx(*x),
                sy(*y)
            );
        }
        let ly = margin + 16.0 * i as f64;
        out += &format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/><text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\">{}</text>\n",
            w - margin - 110.0,
            ly,
            w - margin - 100.0,
            ly + 4.0,
            xml_escape(label)
        );
    }
    out += "</svg>\n";
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::convergence_profile;
    use crate::series::run_series;

    const D: u32 = 40;

    fn quartic() -> BBSeries {
        run_series(&PotentialSpec::pure_power(2, D).unwrap(), AnsatzSpec::new(1), 4, D).unwrap()
    }

    #[test]
    fn series_round_trip() {
        let s = quartic();
        let text = series_to_json(&s).unwrap();
        let back = series_from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(series_to_json(&back).unwrap(), text);
    }

    #[test]
    fn schema_keys() {
        let v: serde_json::Value = serde_json::from_str(&series_to_json(&quartic()).unwrap()).unwrap();
        assert_eq!(v["potential"]["coeffs"][0]["power"], 4);
        assert_eq!(v["potential"]["s"], 0);
        assert_eq!(v["ansatz"]["p"], 1);
        assert_eq!(v["precision"], D);
        assert!(v["terms"][1]["E"].is_string());
        assert_eq!(v["terms"][0]["W"][0]["power"], 6);
    }

    #[test]
    fn mislabelled_term_rejected() {
        let mut doc = SeriesDoc::from_series(&quartic());
        doc.terms[2].j = 7;
        assert!(matches!(doc.to_series(), Err(Error::Parse(_))));
    }

    #[test]
    fn cache_key_tracks_every_parameter() {
        let v = PotentialSpec::pure_power(2, D).unwrap();
        let a = SeriesCache::key(&v, AnsatzSpec::new(1), 10, 80);
        assert_ne!(a, SeriesCache::key(&v, AnsatzSpec::new(2), 10, 80));
        assert_ne!(a, SeriesCache::key(&v, AnsatzSpec::new(1), 11, 80));
        assert_ne!(a, SeriesCache::key(&v, AnsatzSpec::new(1), 10, 60));
        assert_ne!(a, SeriesCache::key(&v.clone().with_angular_factor(1), AnsatzSpec::new(1), 10, 80));
        assert_eq!(a, SeriesCache::key(&v, AnsatzSpec::new(1), 10, 80));
    }

    #[test]
    fn pade_csv_round_trip() {
        let rows = vec![(1, Scalar::from_ratio(1, 3, D)), (2, Scalar::from_int(-2, D))];
        let text = pade_csv(&rows, Some(&Scalar::one(D))).unwrap();
        assert!(text.starts_with("N,value\n1,"));
        let back = read_pade_csv(&text, D).unwrap();
        assert_eq!(back[0].1, rows[0].1);
        assert_eq!(back[2].0, "Exact");
    }

    #[test]
    fn harmonic_profile_flags_terminated_points() {
        let s = run_series(&PotentialSpec::pure_power(1, D).unwrap(), AnsatzSpec::new(0), 3, D).unwrap();
        let text = profile_csv(&convergence_profile(&s).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "0,0");
        assert_eq!(lines[2], "1,terminated");
    }

    #[test]
    fn svg_mentions_axes_and_labels() {
        let s = quartic();
        let svg = figure_svg(&[("K=2 <a>".into(), convergence_profile(&s).unwrap())]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(">j</text>") && svg.contains("log10|E_j/E0|"));
        assert!(svg.contains("K=2 &lt;a&gt;"));
        assert_eq!(svg.matches("r=\"2.5\"").count(), 5);
    }
}
