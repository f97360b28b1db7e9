//! Table rendering: the paper-shaped text layout (blank cells for zeros
//! outside support) and the JSON form with explicit zeros.

use polelog_core::spectral::SpectralTable;
use serde::Serialize;

/// Text table with rows k, gamma, mu, mu(2..r), nu, nu(2..r). Zeros render
/// as blanks; columns start at the first degree where any row is nonzero.
pub fn render_table(table: &SpectralTable) -> String {
    let r_max = table.r_max;
    let mut rows: Vec<(String, Vec<Option<usize>>)> = Vec::new();
    let ks: Vec<usize> = (0..=table.k_max).collect();

    let cell = |v: usize| if v == 0 { None } else { Some(v) };
    if let Some(gamma) = &table.gamma {
        rows.push((
            "gamma_k:".into(),
            ks.iter()
                .map(|&k| cell(gamma.get(k).copied().unwrap_or(0) as usize))
                .collect(),
        ));
    }
    rows.push((
        "mu_k:".into(),
        ks.iter().map(|&k| cell(table.mu(1, k))).collect(),
    ));
    for r in 2..=r_max {
        rows.push((
            format!("mu({r})_k:"),
            ks.iter().map(|&k| cell(table.mu(r, k))).collect(),
        ));
    }
    rows.push((
        "nu_k:".into(),
        ks.iter().map(|&k| cell(table.nu(1, k))).collect(),
    ));
    for r in 2..=r_max {
        rows.push((
            format!("nu({r})_k:"),
            ks.iter().map(|&k| cell(table.nu(r, k))).collect(),
        ));
    }

    // first degree where anything is nonzero
    let k_min = ks
        .iter()
        .position(|&k| rows.iter().any(|(_, row)| row[k].is_some()))
        .unwrap_or(ks.len());
    let visible: Vec<usize> = ks[k_min..].to_vec();

    let label_width = rows
        .iter()
        .map(|(l, _)| l.len())
        .chain(std::iter::once("k:".len()))
        .max()
        .unwrap()
        + 1;
    let mut col_widths: Vec<usize> = visible.iter().map(|k| k.to_string().len()).collect();
    for (_, row) in &rows {
        for (ci, &k) in visible.iter().enumerate() {
            if let Some(v) = row[k] {
                col_widths[ci] = col_widths[ci].max(v.to_string().len());
            }
        }
    }

    let mut out = String::new();
    let mut line = format!("{:<label_width$}", "k:");
    for (ci, &k) in visible.iter().enumerate() {
        line.push_str(&format!("  {:>width$}", k, width = col_widths[ci]));
    }
    out.push_str(line.trim_end());
    out.push('\n');
    for (label, row) in &rows {
        let mut line = format!("{:<label_width$}", label);
        for (ci, &k) in visible.iter().enumerate() {
            match row[k] {
                Some(v) => line.push_str(&format!("  {:>width$}", v, width = col_widths[ci])),
                None => line.push_str(&format!("  {:>width$}", "", width = col_widths[ci])),
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct TableJson<'a> {
    pub f: String,
    #[serde(flatten)]
    pub table: &'a SpectralTable,
}

pub fn render_json(f: &str, table: &SpectralTable) -> String {
    serde_json::to_string_pretty(&TableJson {
        f: f.to_string(),
        table,
    })
    .expect("serializable")
}
