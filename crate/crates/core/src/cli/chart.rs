//! Static SVG line charts with error bars.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evaluation::SweepResult;

pub const ACCURACY_COLOR: &str = "#2ca02c";
pub const ASTUTENESS_COLOR: &str = "#7b3294";

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 56.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub x: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub y_range: (f64, f64),
    pub series: Vec<Series>,
}

impl ChartSpec {
    /// Accuracy (green) and astuteness (purple) against training size.
    pub fn from_sweep(res: &SweepResult, title: &str) -> ChartSpec {
        let x: Vec<f64> = res.rows.iter().map(|r| r.n as f64).collect();
        ChartSpec {
            title: title.to_string(),
            x_label: "training set size".into(),
            y_label: "fraction of test set".into(),
            log_x: true,
            y_range: (0.0, 1.0),
            series: vec![
                Series {
                    label: "accuracy".into(),
                    color: ACCURACY_COLOR.into(),
                    x: x.clone(),
                    mean: res.rows.iter().map(|r| r.accuracy_mean).collect(),
                    std: res.rows.iter().map(|r| r.accuracy_std).collect(),
                },
                Series {
                    label: "astuteness".into(),
                    color: ASTUTENESS_COLOR.into(),
                    x,
                    mean: res.rows.iter().map(|r| r.astuteness_mean).collect(),
                    std: res.rows.iter().map(|r| r.astuteness_std).collect(),
                },
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(Error::param("series", "chart needs at least one series"));
        }
        for s in &self.series {
            let n = s.x.len();
            if n == 0 || s.mean.len() != n || s.std.len() != n {
                return Err(Error::param(
                    "series",
                    format!("`{}` has inconsistent lengths", s.label),
                ));
            }
            let finite = s.x.iter().chain(&s.mean).chain(&s.std).all(|v| v.is_finite());
            if !finite || (self.log_x && s.x.iter().any(|&v| v <= 0.0)) {
                return Err(Error::param("series", format!("`{}` has values that cannot be plotted", s.label)));
            }
        }
        if !(self.y_range.0 < self.y_range.1) {
            return Err(Error::param("y_range", "needs lo < hi"));
        }
        Ok(())
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Render to an SVG document. Output depends only on the spec.
pub fn render(spec: &ChartSpec) -> Result<String> {
    spec.validate()?;
    let tx = |v: f64| if spec.log_x { v.log10() } else { v };
    let xs = spec.series.iter().flat_map(|s| s.x.iter().map(|&v| tx(v)));
    let (mut x0, mut x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let pad = (x1 - x0) * 0.04;
    let (x0, x1) = (x0 - pad, x1 + pad);
    let (y0, y1) = spec.y_range;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (tx(v) - x0) / (x1 - x0) * plot_w;
    let py = |v: f64| TOP + (1.0 - (v.clamp(y0, y1) - y0) / (y1 - y0)) * plot_h;

    let mut o = String::new();
    writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(o, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        o,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        esc(&spec.title)
    )
    .unwrap();

    // y grid
    for i in 0..=5 {
        let v = y0 + (y1 - y0) * i as f64 / 5.0;
        let y = py(v);
        writeln!(
            o,
            "<line x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>",
            WIDTH - RIGHT
        )
        .unwrap();
        writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            LEFT - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    // x ticks at the data positions of the first series
    for &v in &spec.series[0].x {
        let x = px(v);
        writeln!(
            o,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#444444\"/>",
            HEIGHT - BOTTOM,
            HEIGHT - BOTTOM + 5.0
        )
        .unwrap();
        writeln!(
            o,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            HEIGHT - BOTTOM + 18.0,
            fmt_tick(v)
        )
        .unwrap();
    }
    writeln!(
        o,
        "<rect x=\"{LEFT:.2}\" y=\"{TOP:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#444444\"/>"
    )
    .unwrap();
    writeln!(
        o,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        esc(&spec.x_label)
    )
    .unwrap();
    writeln!(
        o,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        esc(&spec.y_label)
    )
    .unwrap();

    for s in &spec.series {
        let color = esc(&s.color);
        writeln!(o, r#"<g class="series" data-label="{}">"#, esc(&s.label)).unwrap();
        let pts: Vec<String> = s.x.iter().zip(&s.mean).map(|(&x, &m)| format!("{:.2},{:.2}", px(x), py(m))).collect();
        writeln!(
            o,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        )
        .unwrap();
        for ((&x, &m), &sd) in s.x.iter().zip(&s.mean).zip(&s.std) {
            let (cx, lo, hi) = (px(x), py(m - sd), py(m + sd));
            if sd > 0.0 {
                writeln!(
                    o,
                    r#"<path d="M{:.2} {lo:.2}H{:.2}M{cx:.2} {lo:.2}V{hi:.2}M{:.2} {hi:.2}H{:.2}" stroke="{color}" fill="none"/>"#,
                    cx - 4.0,
                    cx + 4.0,
                    cx - 4.0,
                    cx + 4.0
                )
                .unwrap();
            }
            writeln!(o, r#"<circle cx="{cx:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#, py(m)).unwrap();
        }
        writeln!(o, "</g>").unwrap();
    }

    // legend
    for (i, s) in spec.series.iter().enumerate() {
        let y = TOP + 16.0 + 18.0 * i as f64;
        let x = WIDTH - RIGHT - 120.0;
        writeln!(
            o,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/>"#,
            x + 20.0,
            esc(&s.color)
        )
        .unwrap();
        writeln!(o, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 26.0, y + 4.0, esc(&s.label)).unwrap();
    }
    o.push_str("</svg>\n");
    Ok(o)
}

fn fmt_tick(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.3}")
    }
}

pub fn emit_chart(spec: &ChartSpec, path: &Path) -> Result<()> {
    let svg = render(spec)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
