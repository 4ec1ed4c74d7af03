//! Refinement tables in the layout of the classical reference tables.

use std::fmt::Write;

use weyl_core::spectrum_file::SpectrumFile;

/// Column per level, then predicted, optional true value and ratio, all
/// divided by `unit`.
pub fn format_table(file: &SpectrumFile, unit: f64, unit_name: &str, truth: Option<&[f64]>, rows: usize) -> String {
    let mut s = String::new();
    if unit != 1.0 {
        let _ = writeln!(s, "eigenvalues divided by {unit_name}");
    }
    let mut head = vec![format!("{:>5}", "j")];
    for (i, l) in file.levels.iter().enumerate() {
        let name = if i == 0 {
            "Initial".to_string()
        } else {
            format!("Ref {l}")
        };
        head.push(format!("{name:>12}"));
    }
    head.push(format!("{:>12}", "Predicted"));
    if truth.is_some() {
        head.push(format!("{:>12}", "True"));
    }
    head.push(format!("{:>8}", "ratio"));
    head.push(" trusted".to_string());
    let _ = writeln!(s, "{}", head.join(" "));
    for (i, r) in file.rows.iter().take(rows).enumerate() {
        let mut line = vec![format!("{:>5}", i + 1)];
        for v in &r.level_values {
            line.push(match v {
                Some(v) => format!("{:>12.5}", v / unit),
                None => format!("{:>12}", "-"),
            });
        }
        line.push(format!("{:>12.5}", r.predicted / unit));
        if let Some(t) = truth {
            line.push(match t.get(i) {
                Some(v) => format!("{:>12.5}", v / unit),
                None => format!("{:>12}", "-"),
            });
        }
        line.push(format!("{:>8.4}", r.ratio));
        line.push(format!(" {}", if r.trusted { "yes" } else { "no" }));
        let _ = writeln!(s, "{}", line.join(" "));
    }
    let _ = writeln!(
        s,
        "trusted prefix: {} of {} eigenvalues",
        file.trust_count(),
        file.len()
    );
    s
}
