//! Native SVG line plots of sweep CSVs: axes, ticks, one polyline per
//! requested column, optional zoom panel near a chosen center. No
//! rendering dependency; output bytes are a pure function of the input.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::ConfigError;

pub struct Dataset {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

/// Read a sweep CSV: `#` comment lines, one header row, numeric rows.
pub fn read_csv(path: &Path) -> Result<Dataset, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let mut headers: Vec<String> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if headers.is_empty() {
            headers = line.split(',').map(|s| s.trim().to_string()).collect();
            columns = vec![Vec::new(); headers.len()];
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != headers.len() {
            return Err(ConfigError(format!(
                "row has {} fields, header has {}",
                fields.len(),
                headers.len()
            )));
        }
        for (col, f) in columns.iter_mut().zip(fields) {
            col.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| ConfigError(format!("bad number `{f}`")))?,
            );
        }
    }
    if headers.is_empty() || columns.first().is_none_or(|c| c.is_empty()) {
        return Err(ConfigError("CSV contains no data rows".into()));
    }
    Ok(Dataset { headers, columns })
}

impl Dataset {
    pub fn column(&self, name: &str) -> Result<&[f64], ConfigError> {
        let idx = self
            .headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ConfigError(format!("missing column `{name}`")))?;
        Ok(&self.columns[idx])
    }
}

pub struct PlotOptions {
    pub inset: bool,
    pub inset_center: f64,
    pub inset_halfwidth: f64,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        self.x0 + (x - self.xmin) / (self.xmax - self.xmin) * self.w
    }

    fn sy(&self, y: f64) -> f64 {
        self.y0 + self.h - (y - self.ymin) / (self.ymax - self.ymin) * self.h
    }
}

fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if span.is_nan() || span <= 0.0 {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = mag
        * if norm < 1.5 {
            1.0
        } else if norm < 3.5 {
            2.0
        } else if norm < 7.5 {
            5.0
        } else {
            10.0
        };
    let first = (lo / step).ceil() * step;
    let mut t = first;
    let mut out = Vec::new();
    while t <= hi + 1e-12 * span {
        out.push(t);
        t += step;
    }
    out
}

fn draw_panel(
    out: &mut String,
    frame: &Frame,
    xs: &[f64],
    series: &[(&str, &[f64])],
    title: &str,
) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        frame.x0, frame.y0, frame.w, frame.h
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        frame.x0 + frame.w / 2.0,
        frame.y0 - 8.0,
        title
    );
    for t in nice_ticks(frame.xmin, frame.xmax, 6) {
        let x = frame.sx(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="0.5"/>"#,
            frame.y0 + frame.h,
            frame.y0 + frame.h + 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" font-size="9" text-anchor="middle">{t:.4}</text>"#,
            frame.y0 + frame.h + 14.0
        );
    }
    for t in nice_ticks(frame.ymin, frame.ymax, 6) {
        let y = frame.sy(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-width="0.5"/>"#,
            frame.x0 - 4.0,
            frame.x0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="9" text-anchor="end">{t:.4}</text>"#,
            frame.x0 - 6.0,
            y + 3.0
        );
    }
    for (k, (_, ys)) in series.iter().enumerate() {
        let mut points = String::new();
        for (&x, &y) in xs.iter().zip(ys.iter()) {
            if x < frame.xmin || x > frame.xmax {
                continue;
            }
            let _ = write!(points, "{:.2},{:.2} ", frame.sx(x), frame.sy(y.clamp(frame.ymin, frame.ymax)));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.4" points="{}"/>"#,
            PALETTE[k % PALETTE.len()],
            points.trim_end()
        );
    }
}

/// Render the named columns of a sweep CSV against its first column.
pub fn render(data: &Dataset, cols: &[&str], opts: &PlotOptions) -> Result<String, ConfigError> {
    let xs = data.columns[0].as_slice();
    let mut series = Vec::new();
    for name in cols {
        series.push((*name, data.column(name)?));
    }
    if series.is_empty() {
        return Err(ConfigError("no columns requested".into()));
    }

    let (xmin, xmax) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, ys) in &series {
        for &y in ys.iter() {
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    if ymin == ymax {
        ymin -= 0.5;
        ymax += 0.5;
    }
    let pad = 0.05 * (ymax - ymin);
    let (ymin, ymax) = (ymin - pad, ymax + pad);

    let (width, height) = if opts.inset { (980.0, 420.0) } else { (640.0, 420.0) };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        "<!-- specsqueeze plot; x-range [{xmin:.6e}, {xmax:.6e}]; y-range [{ymin:.6e}, {ymax:.6e}]; curves {} -->",
        series.len()
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let main = Frame {
        x0: 60.0,
        y0: 30.0,
        w: 540.0,
        h: 340.0,
        xmin,
        xmax,
        ymin,
        ymax,
    };
    draw_panel(&mut out, &main, xs, &series, "sweep");

    for (k, (name, _)) in series.iter().enumerate() {
        let y = 40.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="70" y1="{y:.2}" x2="95" y2="{y:.2}" stroke="{}" stroke-width="2"/>"#,
            PALETTE[k % PALETTE.len()]
        );
        let _ = writeln!(
            out,
            r#"<text x="100" y="{:.2}" font-size="11">{}</text>"#,
            y + 4.0,
            name
        );
    }

    if opts.inset {
        let ixmin = opts.inset_center - opts.inset_halfwidth;
        let ixmax = opts.inset_center + opts.inset_halfwidth;
        let mut iymin = f64::INFINITY;
        let mut iymax = f64::NEG_INFINITY;
        for (_, ys) in &series {
            for (&x, &y) in xs.iter().zip(ys.iter()) {
                if x >= ixmin && x <= ixmax {
                    iymin = iymin.min(y);
                    iymax = iymax.max(y);
                }
            }
        }
        if iymin.is_finite() && iymax.is_finite() {
            if iymin == iymax {
                iymin -= 0.5;
                iymax += 0.5;
            }
            let ipad = 0.05 * (iymax - iymin);
            let inset = Frame {
                x0: 700.0,
                y0: 30.0,
                w: 240.0,
                h: 340.0,
                xmin: ixmin,
                xmax: ixmax,
                ymin: iymin - ipad,
                ymax: iymax + ipad,
            };
            draw_panel(&mut out, &inset, xs, &series, "inset");
        }
    }

    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        Dataset {
            headers: vec!["omega".into(), "S".into(), "nu".into()],
            columns: vec![
                (0..100).map(|i| i as f64 / 50.0).collect(),
                (0..100).map(|i| 1.0 + (i as f64 / 10.0).sin()).collect(),
                (0..100).map(|i| 0.8 + (i as f64 / 10.0).cos() * 0.1).collect(),
            ],
        }
    }

    #[test]
    fn renders_requested_curves() {
        let opts = PlotOptions {
            inset: false,
            inset_center: 1.0,
            inset_halfwidth: 0.1,
        };
        let svg = render(&sample(), &["S", "nu"], &opts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("x-range [0.000000e0, 1.980000e0]"));
        assert!(render(&sample(), &["bogus"], &opts).is_err());
    }

    #[test]
    fn inset_adds_second_panel() {
        let opts = PlotOptions {
            inset: true,
            inset_center: 1.0,
            inset_halfwidth: 0.2,
        };
        let svg = render(&sample(), &["S"], &opts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">inset<"));
    }

    #[test]
    fn deterministic_output() {
        let opts = PlotOptions {
            inset: false,
            inset_center: 1.0,
            inset_halfwidth: 0.1,
        };
        let a = render(&sample(), &["S", "nu"], &opts).unwrap();
        let b = render(&sample(), &["S", "nu"], &opts).unwrap();
        assert_eq!(a, b);
    }
}
