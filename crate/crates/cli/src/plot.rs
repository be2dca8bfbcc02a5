//! Minimal SVG charts from CSV columns.

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Mean of `y` per distinct `x`, joined by a line.
    Line,
    /// Histogram of `y`.
    Histogram,
    /// One path of `y` against `x` per value of the `sample` column.
    Paths,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn of(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let lo = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::INFINITY, f64::min);
        let hi = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::NEG_INFINITY, f64::max);
        let (mut x0, mut x1) = (lo(&mut xs.clone()), hi(&mut xs.clone()));
        let (mut y0, mut y1) = (lo(&mut ys.clone()), hi(&mut ys.clone()));
        if x1 <= x0 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 <= y0 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn header(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/>
<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>
<text x="{PAD}" y="{t}">{x0:.4}</text><text x="{r}" y="{t}" text-anchor="end">{x1:.4}</text>
<text x="4" y="{b}">{y0:.4}</text><text x="4" y="{PAD}">{y1:.4}</text>
<text x="{cx}" y="{l}" text-anchor="middle">{xlabel}</text>
<text x="{PAD}" y="{yl}">{ylabel}</text>
"#,
        b = H - PAD,
        r = W - PAD,
        t = H - PAD + 16.0,
        l = H - 8.0,
        cx = W / 2.0,
        yl = PAD - 10.0,
        x0 = f.x0,
        x1 = f.x1,
        y0 = f.y0,
        y1 = f.y1,
    );
}

fn polyline(out: &mut String, f: &Frame, pts: &[(f64, f64)], colour: &str) {
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y))).collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
        coords.join(" ")
    );
}

fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .with_context(|| format!("column `{n}` not in {}", path.display()))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for rec in rdr.records() {
        let rec = rec?;
        let parsed: Option<Vec<f64>> = idx.iter().map(|&i| rec.get(i)?.parse().ok()).collect();
        // rows with an empty cell in any requested column are skipped
        if let Some(vals) = parsed {
            for (c, v) in cols.iter_mut().zip(vals) {
                c.push(v);
            }
        }
    }
    if cols[0].is_empty() {
        bail!("no numeric rows in {}", path.display());
    }
    Ok(cols)
}

pub fn render(input: &Path, kind: Kind, x: &str, y: &str, bins: usize) -> Result<String> {
    let mut out = String::new();
    match kind {
        Kind::Line => {
            let cols = read_columns(input, &[x, y])?;
            let mut groups: BTreeMap<i64, (f64, f64, usize)> = BTreeMap::new();
            for (&a, &b) in cols[0].iter().zip(&cols[1]) {
                let e = groups.entry((a * 1e6).round() as i64).or_insert((a, 0.0, 0));
                e.1 += b;
                e.2 += 1;
            }
            let pts: Vec<(f64, f64)> = groups.values().map(|&(a, s, c)| (a, s / c as f64)).collect();
            let f = Frame::of(pts.iter().map(|p| p.0), pts.iter().map(|p| p.1));
            header(&mut out, &f, x, &format!("mean {y}"));
            polyline(&mut out, &f, &pts, "steelblue");
            for &(a, b) in &pts {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, f.px(a), f.py(b));
            }
        }
        Kind::Histogram => {
            let v = read_columns(input, &[y])?.remove(0);
            let bins = bins.max(1);
            let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
            let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
            let mut counts = vec![0usize; bins];
            for &x in &v {
                counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
            }
            let top = *counts.iter().max().unwrap_or(&1) as f64;
            let f = Frame {
                x0: lo,
                x1: lo + width * bins as f64,
                y0: 0.0,
                y1: top,
            };
            header(&mut out, &f, y, "count");
            for (i, &c) in counts.iter().enumerate() {
                let a = lo + i as f64 * width;
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue" stroke="white"/>"#,
                    f.px(a),
                    f.py(c as f64),
                    f.px(a + width) - f.px(a),
                    f.py(0.0) - f.py(c as f64)
                );
            }
        }
        Kind::Paths => {
            let cols = read_columns(input, &["sample", x, y])?;
            let mut paths: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
            for ((&s, &a), &b) in cols[0].iter().zip(&cols[1]).zip(&cols[2]) {
                paths.entry(s as i64).or_default().push((a, b));
            }
            let f = Frame::of(cols[1].iter().copied(), cols[2].iter().copied());
            header(&mut out, &f, x, y);
            for pts in paths.values().take(50) {
                polyline(&mut out, &f, pts, "rgba(70,130,180,0.5)");
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_groups_by_x() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(&p, "n,log_z\n4,1.0\n4,3.0\n8,5.0\n8,\n").unwrap();
        let svg = render(&p, Kind::Line, "n", "log_z", 10).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(render(&p, Kind::Line, "n", "missing", 10).is_err());
    }
}
