//! Plain-text spectrum tables.
//!
//! ```text
//! # weyl-spectrum 1
//! # name: unit disc
//! index L3 L4 L5 predicted ratio trusted
//! 1 5.7871 5.7841 5.7834 5.7832 0.25 yes
//! ```
//!
//! Level columns hold the raw eigenvalues of each refinement level, `-`
//! where a coarse level has fewer eigenvalues. Oracle spectra have no level
//! columns, ratio 0 and every row trusted. Floats use the shortest text that
//! reads back to the same value.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::eigensolve::{ExtrapolatedSpectrum, SpectrumSlice};
use crate::exact::OracleSpectrum;
use crate::{Error, Result};

const MAGIC: &str = "# weyl-spectrum 1";

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub level_values: Vec<Option<f64>>,
    pub predicted: f64,
    pub ratio: f64,
    pub trusted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFile {
    pub name: Option<String>,
    pub levels: Vec<usize>,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumFile {
    /// Table of every solved level followed by the extrapolated column.
    pub fn from_run(name: Option<String>, levels: &[SpectrumSlice], ext: &ExtrapolatedSpectrum) -> SpectrumFile {
        let rows = (0..ext.len())
            .map(|i| SpectrumRow {
                level_values: levels.iter().map(|s| s.eigenvalues.get(i).copied()).collect(),
                predicted: ext.predicted[i],
                ratio: ext.convergence_ratio[i],
                trusted: ext.trusted[i],
            })
            .collect();
        SpectrumFile {
            name,
            levels: levels.iter().map(|s| s.level).collect(),
            rows,
        }
    }

    pub fn from_oracle(spectrum: &OracleSpectrum) -> SpectrumFile {
        SpectrumFile {
            name: Some(spectrum.case.name().to_string()),
            levels: Vec::new(),
            rows: spectrum
                .eigenvalues
                .iter()
                .map(|&v| SpectrumRow {
                    level_values: Vec::new(),
                    predicted: v,
                    ratio: 0.0,
                    trusted: true,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn predicted(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.predicted).collect()
    }

    pub fn trust_count(&self) -> usize {
        self.rows.iter().take_while(|r| r.trusted).count()
    }

    pub fn trusted_prefix(&self) -> Vec<f64> {
        self.rows[..self.trust_count()].iter().map(|r| r.predicted).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(MAGIC);
        s.push('\n');
        if let Some(name) = &self.name {
            s.push_str(&format!("# name: {}\n", name.replace('\n', " ")));
        }
        s.push_str("index");
        for l in &self.levels {
            s.push_str(&format!(" L{l}"));
        }
        s.push_str(" predicted ratio trusted\n");
        for (i, r) in self.rows.iter().enumerate() {
            s.push_str(&(i + 1).to_string());
            for v in &r.level_values {
                match v {
                    Some(v) => s.push_str(&format!(" {v}")),
                    None => s.push_str(" -"),
                }
            }
            s.push_str(&format!(
                " {} {} {}\n",
                r.predicted,
                r.ratio,
                if r.trusted { "yes" } else { "no" }
            ));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<SpectrumFile> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        match lines.next() {
            Some((_, l)) if l == MAGIC => {}
            _ => return Err(Error::parse(1, format!("expected `{MAGIC}`"))),
        }
        let mut name = None;
        let mut header = None;
        for (no, line) in lines.by_ref() {
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                if let Some(n) = c.trim().strip_prefix("name:") {
                    name = Some(n.trim().to_string());
                }
                continue;
            }
            header = Some((no, line));
            break;
        }
        let (hno, header) = header.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing column header"))?;
        let cols: Vec<&str> = header.split_whitespace().collect();
        let n = cols.len();
        if n < 4 || cols[0] != "index" || cols[n - 3..] != ["predicted", "ratio", "trusted"] {
            return Err(Error::parse(
                hno,
                "header must be `index [L<level> ...] predicted ratio trusted`",
            ));
        }
        let levels = cols[1..n - 3]
            .iter()
            .map(|c| {
                c.strip_prefix('L')
                    .and_then(|l| l.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(hno, format!("bad level column `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;

        let number = |no: usize, what: &str, s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::parse(no, format!("bad {what} `{s}`")))?;
            if !v.is_finite() {
                return Err(Error::parse(no, format!("{what} is not finite")));
            }
            Ok(v)
        };
        let mut rows = Vec::new();
        for (no, line) in lines {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != n {
                return Err(Error::parse(no, format!("expected {n} fields, found {}", f.len())));
            }
            if f[0].parse::<usize>().ok() != Some(rows.len() + 1) {
                return Err(Error::parse(no, format!("expected index {}", rows.len() + 1)));
            }
            let level_values = f[1..n - 3]
                .iter()
                .map(|s| {
                    if *s == "-" {
                        Ok(None)
                    } else {
                        number(no, "eigenvalue", s).map(Some)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let predicted = number(no, "prediction", f[n - 3])?;
            let ratio = number(no, "ratio", f[n - 2])?;
            let trusted = match f[n - 1] {
                "yes" => true,
                "no" => false,
                other => {
                    return Err(Error::parse(
                        no,
                        format!("trusted flag must be yes or no, found `{other}`"),
                    ))
                }
            };
            if let Some(prev) = rows.last().map(|r: &SpectrumRow| r.predicted) {
                if predicted < prev {
                    return Err(Error::parse(no, "predictions must be ascending"));
                }
            }
            rows.push(SpectrumRow {
                level_values,
                predicted,
                ratio,
                trusted,
            });
        }
        Ok(SpectrumFile { name, levels, rows })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.to_text().as_bytes())?;
        f.flush()?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<SpectrumFile> {
        let mut text = String::new();
        for line in std::io::BufReader::new(std::fs::File::open(path)?).lines() {
            text.push_str(&line?);
            text.push('\n');
        }
        Self::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::extrapolate_spectrum;
    use crate::exact::hemisphere_spectrum;

    fn slice(level: usize, v: &[f64]) -> SpectrumSlice {
        SpectrumSlice {
            eigenvalues: v.to_vec(),
            level,
            residual_norms: vec![0.0; v.len()],
        }
    }

    fn sample() -> SpectrumFile {
        let levels = vec![
            slice(0, &[9.0]),
            slice(1, &[6.0, 11.0]),
            slice(2, &[5.25, 10.5]),
            slice(3, &[5.0625, 10.0]),
        ];
        let ext = extrapolate_spectrum(&levels).unwrap();
        SpectrumFile::from_run(Some("toy".into()), &levels, &ext)
    }

    #[test]
    fn run_table_layout() {
        let f = sample();
        let text = f.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], MAGIC);
        assert_eq!(lines[1], "# name: toy");
        assert_eq!(lines[2], "index L0 L1 L2 L3 predicted ratio trusted");
        assert_eq!(lines[3], "1 9 6 5.25 5.0625 5 0.25 yes");
        assert_eq!(lines[4], "2 - 11 10.5 10 10 1 no");
        assert_eq!(f.trust_count(), 1);
    }

    #[test]
    fn round_trips_exactly() {
        let f = sample();
        let back = SpectrumFile::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        let o = SpectrumFile::from_oracle(&hemisphere_spectrum(550));
        let back = SpectrumFile::from_text(&o.to_text()).unwrap();
        assert_eq!(back.len(), 550);
        assert!(back.levels.is_empty());
        assert_eq!(back, o);
        assert_eq!(back.trust_count(), 550);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let good = sample().to_text();
        let line_of = |text: &str| match SpectrumFile::from_text(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of("hello"), 1);
        assert_eq!(line_of(&good.replace(" 10.5 10 ", " 10.5 ten ")), 5);
        assert_eq!(line_of(&good.replace(" yes", " maybe")), 4);
        assert_eq!(line_of(&good.replace("index L0", "idx L0")), 3);
        assert_eq!(line_of(&good.replacen("2 -", "3 -", 1)), 5);
        let mut short = good.clone();
        short.push_str("3 1 2\n");
        assert_eq!(line_of(&short), 6);
        assert_eq!(line_of(&format!("{MAGIC}\n# only comments\n")), 2);
    }
}
