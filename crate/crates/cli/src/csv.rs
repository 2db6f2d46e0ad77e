//! Sweep and trace serialization.
//!
//! The on-disk dialect is plain comma-separated text with `\n` line
//! endings: a block of `# key = value` metadata lines, one header row, then
//! data rows.  Every float is printed as scientific notation with 12
//! significant digits, which both diffs byte-identically across platforms
//! and survives a parse → re-emit round trip unchanged, so emitted files
//! can be compared and re-read exactly.  Nothing time- or host-dependent is
//! ever written.

use fdsic_core::link::SweepResult;
use std::fmt::Write as _;

/// Fixed cell format: 12 significant digits, scientific.
pub fn format_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Render a sweep with its metadata block.
pub fn sweep_to_csv(r: &SweepResult) -> String {
    let mut s = String::new();
    for (k, v) in &r.metadata {
        let _ = writeln!(s, "# {k} = {v}");
    }
    let mut header = Vec::with_capacity(1 + 2 * r.columns.len());
    header.push(r.x_name.clone());
    for c in &r.columns {
        header.push(format!("{c}_mean_db"));
        header.push(format!("{c}_ci95_db"));
    }
    let _ = writeln!(s, "{}", header.join(","));
    for (i, &x) in r.x_values.iter().enumerate() {
        let mut row = Vec::with_capacity(header.len());
        row.push(format_float(x));
        for &(mean, ci) in &r.cells[i] {
            row.push(format_float(mean));
            row.push(format_float(ci));
        }
        let _ = writeln!(s, "{}", row.join(","));
    }
    s
}

/// Parse text produced by [`sweep_to_csv`] back into a [`SweepResult`].
///
/// Inverse of the writer at printed precision: re-emitting the parsed value
/// reproduces the input byte for byte.
pub fn parse_sweep_csv(text: &str) -> Result<SweepResult, String> {
    let mut metadata = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut x_values = Vec::new();
    let mut cells = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim_start();
            let (k, v) = rest
                .split_once(" = ")
                .ok_or_else(|| format!("line {lineno}: metadata line without ` = `"))?;
            metadata.push((k.to_string(), v.to_string()));
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if header.is_none() {
            if fields.len() < 3 || (fields.len() - 1) % 2 != 0 {
                return Err(format!(
                    "line {lineno}: header must be an x column plus (mean, ci) pairs, got {} fields",
                    fields.len()
                ));
            }
            header = Some(fields.iter().map(|f| f.to_string()).collect());
            continue;
        }
        let head = header.as_ref().expect("header was just checked");
        if fields.len() != head.len() {
            return Err(format!(
                "line {lineno}: expected {} fields, got {}",
                head.len(),
                fields.len()
            ));
        }
        let nums: Vec<f64> = fields
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| format!("line {lineno}: `{f}` is not a number"))
            })
            .collect::<Result<_, _>>()?;
        x_values.push(nums[0]);
        cells.push(nums[1..].chunks(2).map(|p| (p[0], p[1])).collect());
    }

    let header = header.ok_or("missing header row")?;
    let mut columns = Vec::with_capacity((header.len() - 1) / 2);
    for pair in header[1..].chunks(2) {
        let stem_mean = pair[0]
            .strip_suffix("_mean_db")
            .ok_or_else(|| format!("header column `{}` does not end in `_mean_db`", pair[0]))?;
        let stem_ci = pair[1]
            .strip_suffix("_ci95_db")
            .ok_or_else(|| format!("header column `{}` does not end in `_ci95_db`", pair[1]))?;
        if stem_mean != stem_ci {
            return Err(format!(
                "header pair `{}`/`{}` does not name one column",
                pair[0], pair[1]
            ));
        }
        columns.push(stem_mean.to_string());
    }

    Ok(SweepResult {
        x_name: header[0].clone(),
        x_values,
        columns,
        cells,
        metadata,
    })
}

/// Render a per-sample trial trace: sample index, the phase the channel
/// actually applied, the estimate, and the canceller output power.
pub fn trace_to_csv(
    metadata: &[(String, String)],
    rows: &[(usize, f64, f64, f64)],
) -> String {
    let mut s = String::new();
    for (k, v) in metadata {
        let _ = writeln!(s, "# {k} = {v}");
    }
    let _ = writeln!(s, "n,true_phase_rad,phi_hat_rad,residual_sq");
    for &(n, true_phase, phi_hat, residual_sq) in rows {
        let _ = writeln!(
            s,
            "{n},{},{},{}",
            format_float(true_phase),
            format_float(phi_hat),
            format_float(residual_sq)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_result() -> SweepResult {
        SweepResult {
            x_name: "beta_hz".into(),
            x_values: vec![1.0, 10.0],
            columns: vec!["wf_m35".into(), "only_cpe".into()],
            cells: vec![
                vec![(40.123456789012, 0.25), (34.5, 0.125)],
                vec![(37.0, 0.5), (25.375, 1.0 / 3.0)],
            ],
            metadata: vec![
                ("tool".into(), "fdsic".into()),
                ("link.sir_linkage".into(), "a = b + c".into()),
            ],
        }
    }

    #[test]
    fn writer_layout_is_metadata_header_rows() {
        let text = sweep_to_csv(&sample_result());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# tool = fdsic");
        assert_eq!(lines[1], "# link.sir_linkage = a = b + c");
        assert_eq!(
            lines[2],
            "beta_hz,wf_m35_mean_db,wf_m35_ci95_db,only_cpe_mean_db,only_cpe_ci95_db"
        );
        assert_eq!(lines.len(), 5);
        assert!(lines[3].starts_with("1.00000000000e0,"));
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(1.0), "1.00000000000e0");
        assert_eq!(format_float(-0.0371), "-3.71000000000e-2");
        assert_eq!(format_float(300.0), "3.00000000000e2");
    }

    #[test]
    fn parse_inverts_write_byte_for_byte() {
        let text = sweep_to_csv(&sample_result());
        let parsed = parse_sweep_csv(&text).unwrap();
        assert_eq!(parsed.x_name, "beta_hz");
        assert_eq!(parsed.columns, vec!["wf_m35", "only_cpe"]);
        assert_eq!(parsed.x_values, vec![1.0, 10.0]);
        assert_eq!(parsed.metadata, sample_result().metadata);
        // Values that are exact in 12 digits come back exactly.
        assert_eq!(parsed.cells[0][0].1, 0.25);
        assert_eq!(parsed.cells[1][1].0, 25.375);
        let re_emitted = sweep_to_csv(&parsed);
        assert_eq!(re_emitted, text);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(parse_sweep_csv("").is_err());
        assert!(parse_sweep_csv("# only = metadata\n").is_err());
        assert!(parse_sweep_csv("x,a_mean_db\n").is_err());
        assert!(parse_sweep_csv("x,a_mean_db,a_ci95_db\n1.0,2.0\n").is_err());
        assert!(parse_sweep_csv("x,a_mean_db,b_ci95_db\n1.0,2.0,3.0\n").is_err());
        assert!(parse_sweep_csv("x,a_mean_db,a_ci95_db\n1.0,two,3.0\n").is_err());
    }

    #[test]
    fn trace_rows_are_index_plus_three_floats() {
        let md = vec![("command".to_string(), "single".to_string())];
        let text = trace_to_csv(&md, &[(0, 0.5, 0.25, 1e-3), (1, -0.5, -0.25, 2e-3)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command = single");
        assert_eq!(lines[1], "n,true_phase_rad,phi_hat_rad,residual_sq");
        assert_eq!(
            lines[2],
            "0,5.00000000000e-1,2.50000000000e-1,1.00000000000e-3"
        );
        assert_eq!(lines.len(), 4);
    }
}
