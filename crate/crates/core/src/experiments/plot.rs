use std::fmt::Write;

use super::{emit, Cell, MetricsReport, SweepVariable};

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
const MARKERS: [&str; 4] = ["circle", "square", "diamond", "triangle"];
const PANEL_W: f64 = 460.0;
const PANEL_H: f64 = 340.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom

fn log_x(report: &MetricsReport) -> bool {
    report.sweep_variable == SweepVariable::RequestedBw
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        return (
            lo - 0.5_f64.max(lo.abs() * 0.1),
            hi + 0.5_f64.max(hi.abs() * 0.1),
        );
    }
    (lo, hi)
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e5).contains(&a) {
        format!("{v:.2e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn marker(out: &mut String, kind: &str, x: f64, y: f64, color: &str) {
    let _ = match kind {
        "circle" => write!(
            out,
            r#"<circle cx="{x:.1}" cy="{y:.1}" r="3.5" fill="{color}"/>"#
        ),
        "square" => write!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="7" height="7" fill="{color}"/>"#,
            x - 3.5,
            y - 3.5
        ),
        "diamond" => write!(
            out,
            r#"<polygon points="{x:.1},{:.1} {:.1},{y:.1} {x:.1},{:.1} {:.1},{y:.1}" fill="{color}"/>"#,
            y - 4.5,
            x + 4.5,
            y + 4.5,
            x - 4.5
        ),
        _ => write!(
            out,
            r#"<polygon points="{x:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{color}"/>"#,
            y - 4.5,
            x + 4.0,
            y + 3.5,
            x - 4.0,
            y + 3.5
        ),
    };
}

fn panel(out: &mut String, report: &MetricsReport, x0: f64, title: &str, value: fn(&Cell) -> f64) {
    let (ml, mr, mt, mb) = MARGIN;
    let (w, h) = (PANEL_W - ml - mr, PANEL_H - mt - mb);
    let tx = |v: f64| if log_x(report) { v.log10() } else { v };
    let xs: Vec<f64> = report.sweep_points.iter().map(|&v| tx(v)).collect();
    let ys: Vec<f64> = report.cells.iter().flatten().map(value).collect();
    let (xlo, xhi) = nice_range(
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let (ylo, yhi) = nice_range(
        ys.iter().copied().fold(0.0, f64::min),
        ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let px = |v: f64| x0 + ml + (v - xlo) / (xhi - xlo) * w;
    let py = |v: f64| mt + h - (v - ylo) / (yhi - ylo) * h;

    let _ = writeln!(
        out,
        r#"<rect x="{:.1}" y="{mt}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
        x0 + ml
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="18" text-anchor="middle" font-size="14">{title}</text>"#,
        x0 + ml + w / 2.0
    );
    for i in 0..=4 {
        let v = ylo + (yhi - ylo) * i as f64 / 4.0;
        let y = py(v);
        let _ = writeln!(
            out,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"##,
            x0 + ml,
            x0 + ml + w,
            x0 + ml - 4.0,
            y + 3.0,
            fmt_tick(v)
        );
    }
    for (&v, &x) in report.sweep_points.iter().zip(&xs) {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
            px(x),
            mt + h + 14.0,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
        x0 + ml + w / 2.0,
        PANEL_H - 12.0,
        report.sweep_variable.label()
    );
    for (a, row) in report.cells.iter().enumerate() {
        let color = COLORS[a % COLORS.len()];
        let pts: Vec<String> = row
            .iter()
            .zip(&xs)
            .map(|(c, &x)| format!("{:.1},{:.1}", px(x), py(value(c))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        for (c, &x) in row.iter().zip(&xs) {
            marker(out, MARKERS[a % MARKERS.len()], px(x), py(value(c)), color);
        }
        out.push('\n');
    }
}

/// Two side-by-side panels, ADR and NUS against the sweep variable.
pub fn render_svg(report: &MetricsReport) -> String {
    let width = 2.0 * PANEL_W;
    let legend_h = 20.0 * report.algorithms.len() as f64 + 10.0;
    let height = PANEL_H + legend_h;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    panel(&mut out, report, 0.0, "ADR (bits/s)", |c| c.adr);
    panel(&mut out, report, PANEL_W, "NUS (count)", |c| c.nus);
    for (a, name) in report.algorithms.iter().enumerate() {
        let y = PANEL_H + 15.0 + 20.0 * a as f64;
        let color = COLORS[a % COLORS.len()];
        let _ = writeln!(
            out,
            r#"<line x1="80" y1="{y}" x2="110" y2="{y}" stroke="{color}" stroke-width="1.5"/>"#
        );
        marker(&mut out, MARKERS[a % MARKERS.len()], 95.0, y, color);
        let _ = writeln!(
            out,
            r#"<text x="118" y="{:.1}" font-size="12">{name}</text>"#,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// A gnuplot script that reads the emitted CSVs from its own directory.
pub fn gnuplot_script(report: &MetricsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal svg size 920,380 dynamic");
    let _ = writeln!(s, "set output 'metrics_gnuplot.svg'");
    let _ = writeln!(s, "set key outside bottom center horizontal");
    let _ = writeln!(s, "set xlabel '{}'", report.sweep_variable.label());
    if log_x(report) {
        let _ = writeln!(s, "set logscale x");
    }
    let _ = writeln!(s, "set multiplot layout 1,2");
    for (file, title, stride) in [
        (emit::ADR_FILE, "ADR (bits/s)", 2),
        (emit::NUS_FILE, "NUS (count)", 2),
    ] {
        let _ = writeln!(s, "set title '{title}'");
        let series: Vec<String> = report
            .algorithms
            .iter()
            .enumerate()
            .map(|(a, name)| {
                format!(
                    "'{file}' using 1:{} skip 1 with linespoints title '{name}'",
                    2 + stride * a
                )
            })
            .collect();
        if series.is_empty() {
            let _ = writeln!(s, "plot 0 notitle");
        } else {
            let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
        }
    }
    let _ = writeln!(s, "unset multiplot");
    s
}
