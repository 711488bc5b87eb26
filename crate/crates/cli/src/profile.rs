//! Ingestion of measured velocity profiles.
//!
//! Two layouts are accepted, chosen by the header:
//! `y_over_M,velocity` (already normalized) or `y,M,velocity,velocity_max`.
//! Lines starting with `#` are comments.

use std::io::Read;

use fde_core::fitting::{Profile, ProfileSample};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Normalized,
    Raw,
}

fn layout(header: &csv::StringRecord) -> Option<Layout> {
    let cols: Vec<String> = header.iter().map(|s| s.trim().to_ascii_lowercase()).collect();
    match cols.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["y_over_m", "velocity"] => Some(Layout::Normalized),
        ["y", "m", "velocity", "velocity_max"] => Some(Layout::Raw),
        _ => None,
    }
}

/// Parse and validate a profile. `name` labels error messages.
pub fn read_profile<R: Read>(source: R, name: &str) -> Result<Profile> {
    let err = |line: u64, detail: String| CliError::Profile { path: name.to_string(), line, detail };
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).flexible(true).from_reader(source);
    let header = rdr.headers().map_err(|e| err(line_of(&e), e.to_string()))?.clone();
    let layout = layout(&header).ok_or_else(|| {
        err(
            1,
            format!(
                "unrecognized header `{}`; expected `y_over_M,velocity` or `y,M,velocity,velocity_max`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        )
    })?;
    let width = match layout {
        Layout::Normalized => 2,
        Layout::Raw => 4,
    };
    let mut samples = Vec::new();
    let mut lines = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| err(line_of(&e), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(err(line, format!("expected {width} fields, found {}", rec.len())));
        }
        let mut vals = [0.0; 4];
        for (i, field) in rec.iter().enumerate() {
            vals[i] = field.parse::<f64>().map_err(|_| err(line, format!("`{field}` is not a number")))?;
            if !vals[i].is_finite() {
                return Err(err(line, format!("`{field}` is not finite")));
            }
        }
        let (y, v) = match layout {
            Layout::Normalized => (vals[0], vals[1]),
            Layout::Raw => {
                if vals[1].is_nan() || vals[1] <= 0.0 || vals[3].is_nan() || vals[3] <= 0.0 {
                    return Err(err(line, "M and velocity_max must be positive".into()));
                }
                (vals[0] / vals[1], vals[2] / vals[3])
            }
        };
        if !(0.0..=1.0).contains(&y) {
            return Err(err(line, format!("y/M = {y} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(err(line, format!("normalized velocity {v} outside [0, 1]")));
        }
        samples.push(ProfileSample { y_over_m: y, nu_hat: v });
        lines.push(line);
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| samples[i].y_over_m.total_cmp(&samples[j].y_over_m));
    for w in order.windows(2) {
        if samples[w[0]].y_over_m == samples[w[1]].y_over_m {
            let (a, b) = (lines[w[0]].min(lines[w[1]]), lines[w[0]].max(lines[w[1]]));
            return Err(err(b, format!("duplicate height y/M = {} (first at line {a})", samples[w[0]].y_over_m)));
        }
    }
    Profile::new(samples).map_err(|e| err(0, e.to_string()))
}

fn line_of(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.line())
}
