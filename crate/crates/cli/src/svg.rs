//! Minimal static SVG plots: lines, step histograms, heatmaps and polylines.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        Self {
            x: padded_range(xs),
            y: padded_range(ys),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn padded_range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn open(out: &mut String, title: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>
"#,
        (LEFT + W - RIGHT) / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let xv = f.x.0 + t * (f.x.1 - f.x.0);
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{y1}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y1 + 5.0,
            y1 + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        H - 15.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn legend(out: &mut String, labels: &[(&str, &str, bool)]) {
    for (i, (label, col, dashed)) in labels.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = W - RIGHT + 10.0;
        let dash = if *dashed { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{col}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            x + 20.0,
            x + 25.0,
            y + 4.0,
            escape(label)
        );
    }
}

fn polyline(out: &mut String, f: &Frame, pts: &[(f64, f64)], col: &str, dashed: bool) {
    let coords: Vec<String> = pts
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
        .collect();
    let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="{col}" stroke-width="1.5"{dash}/>"#,
        coords.join(" ")
    );
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series<'_>]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter().copied());
    let f = Frame::new(all.clone().map(|p| p.0), all.map(|p| p.1));
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &f, xlabel, ylabel);
    for (i, s) in series.iter().enumerate() {
        polyline(&mut out, &f, &s.points, color(i), s.dashed);
        for &(x, y) in &s.points {
            if s.points.len() <= 40 && x.is_finite() && y.is_finite() {
                let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"/>"#, f.px(x), f.py(y), color(i));
            }
        }
    }
    let labels: Vec<(&str, &str, bool)> = series.iter().enumerate().map(|(i, s)| (s.label, color(i), s.dashed)).collect();
    legend(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

/// Step outlines of histograms sharing one grid.
pub fn histogram_overlay(title: &str, xlabel: &str, edges: &[f64], series: &[(&str, &[f64])]) -> String {
    let lines: Vec<Series<'_>> = series
        .iter()
        .enumerate()
        .map(|(i, (label, masses))| {
            let mut pts = vec![(edges[0], 0.0)];
            for (b, m) in masses.iter().enumerate() {
                pts.push((edges[b], *m));
                pts.push((edges[b + 1], *m));
            }
            pts.push((edges[edges.len() - 1], 0.0));
            Series {
                label,
                points: pts,
                dashed: i > 0,
            }
        })
        .collect();
    line_plot(title, xlabel, "probability", &lines)
}

fn heat_color(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let s = t * (STOPS.len() - 1) as f64;
    let i = (s.floor() as usize).min(STOPS.len() - 2);
    let u = s - i as f64;
    let mix = |a: f64, b: f64| (a + (b - a) * u).round() as u8;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// `values[i][j]` drawn at `(xs[i], ys[j])`, with optional paths on top.
pub fn heatmap(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<f64>],
    paths: &[Vec<(f64, f64)>],
) -> String {
    let half = |v: &[f64]| if v.len() > 1 { (v[1] - v[0]).abs() / 2.0 } else { 0.5 };
    let (hx, hy) = (half(xs), half(ys));
    let f = Frame {
        x: padded_range(xs.iter().map(|x| x - hx).chain(xs.iter().map(|x| x + hx))),
        y: padded_range(ys.iter().map(|y| y - hy).chain(ys.iter().map(|y| y + hy))),
    };
    let (lo, hi) = padded_range(values.iter().flatten().copied());
    let mut out = String::new();
    open(&mut out, title);
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let (x0, x1) = (f.px(xs[i] - hx), f.px(xs[i] + hx));
            let (y0, y1) = (f.py(ys[j] + hy), f.py(ys[j] - hy));
            let _ = writeln!(
                out,
                r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                x1 - x0 + 0.3,
                y1 - y0 + 0.3,
                heat_color((v - lo) / (hi - lo))
            );
        }
    }
    axes(&mut out, &f, xlabel, ylabel);
    for (k, p) in paths.iter().enumerate() {
        polyline(&mut out, &f, p, "white", false);
        if let Some(&(x, y)) = p.last() {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#, f.px(x), f.py(y), color(k));
        }
    }
    // Color bar.
    let bx = W - RIGHT + 30.0;
    for k in 0..50 {
        let t = k as f64 / 49.0;
        let y = H - BOTTOM - t * (H - TOP - BOTTOM);
        let _ = writeln!(out, r#"<rect x="{bx}" y="{:.2}" width="20" height="{:.2}" fill="{}"/>"#, y - (H - TOP - BOTTOM) / 50.0, (H - TOP - BOTTOM) / 49.0, heat_color(t));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bx + 25.0, H - BOTTOM, tick(lo));
    let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, bx + 25.0, TOP + 10.0, tick(hi));
    out.push_str("</svg>\n");
    out
}

/// Embedded training paths, one colour per restart, final point marked.
pub fn paths(title: &str, polylines: &[Vec<(f64, f64)>]) -> String {
    let all = polylines.iter().flatten().copied();
    let f = Frame::new(all.clone().map(|p| p.0), all.map(|p| p.1));
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &f, "component 1", "component 2");
    let mut labels = Vec::new();
    let names: Vec<String> = (0..polylines.len()).map(|k| format!("restart {k}")).collect();
    for (k, p) in polylines.iter().enumerate() {
        polyline(&mut out, &f, p, color(k), false);
        if let Some(&(x, y)) = p.last() {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#, f.px(x), f.py(y), color(k));
        }
        labels.push((names[k].as_str(), color(k), false));
    }
    legend(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_is_well_formed() {
        let s = line_plot(
            "a < b",
            "x",
            "y",
            &[Series {
                label: "s",
                points: vec![(0.0, 1.0), (1.0, 2.0)],
                dashed: false,
            }],
        );
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert!(s.contains("<polyline"));
    }

    #[test]
    fn heatmap_has_one_cell_per_value() {
        let v = vec![vec![0.0, 1.0], vec![2.0, 3.0]];
        let s = heatmap("h", "x", "y", &[0.0, 1.0], &[0.0, 1.0], &v, &[]);
        assert_eq!(s.matches("<rect").count(), 1 + 1 + 4 + 50);
    }

    #[test]
    fn colors_span_the_map() {
        assert_eq!(heat_color(0.0), "#440154");
        assert_eq!(heat_color(1.0), "#fde725");
        assert_eq!(heat_color(f64::NAN), "#440154");
    }

    #[test]
    fn degenerate_ranges_are_padded() {
        assert_eq!(padded_range([2.0, 2.0].into_iter()), (1.5, 2.5));
        assert_eq!(padded_range(std::iter::empty()), (0.0, 1.0));
    }
}
