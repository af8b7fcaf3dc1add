//! Minimal, dependency-free SVG scatter and line plots.
//!
//! The output is deterministic: coordinates are formatted with fixed
//! precision, and every visual constant lives in this file, so re-running
//! a command on the same data reproduces the file byte for byte.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 54.0;

/// Cycled series palette.
pub const PALETTE: [&str; 6] =
    ["#1f6f8b", "#c94c4c", "#3a7d44", "#8a5fbf", "#c98a1a", "#4c6ef5"];

enum Shape {
    Dots { radius: f64 },
    Line,
}

struct Series {
    points: Vec<(f64, f64)>,
    color: String,
    shape: Shape,
}

/// A single-panel plot.
pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
    hlines: Vec<(f64, String)>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series: Vec::new(),
            hlines: Vec::new(),
        }
    }

    pub fn dots(&mut self, points: Vec<(f64, f64)>, color: &str, radius: f64) {
        self.series.push(Series {
            points,
            color: color.to_string(),
            shape: Shape::Dots { radius },
        });
    }

    pub fn line(&mut self, points: Vec<(f64, f64)>, color: &str) {
        self.series.push(Series { points, color: color.to_string(), shape: Shape::Line });
    }

    /// Dashed horizontal reference line.
    pub fn hline(&mut self, y: f64, color: &str) {
        self.hlines.push((y, color.to_string()));
    }

    fn data_range(&self) -> ((f64, f64), (f64, f64)) {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for series in &self.series {
            for &(px, py) in &series.points {
                if px.is_finite() && py.is_finite() {
                    x = (x.0.min(px), x.1.max(px));
                    y = (y.0.min(py), y.1.max(py));
                }
            }
        }
        for &(hy, _) in &self.hlines {
            y = (y.0.min(hy), y.1.max(hy));
        }
        (pad_range(x), pad_range(y))
    }

    /// Render the complete SVG document.
    pub fn render(&self) -> String {
        let ((x_lo, x_hi), (y_lo, y_hi)) = self.data_range();
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_x = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
        let to_y = |v: f64| MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"26\" font-family=\"sans-serif\" font-size=\"15\" \
             text-anchor=\"middle\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));

        // Frame.
        svg.push_str(&format!(
            "<rect x=\"{MARGIN_LEFT:.1}\" y=\"{MARGIN_TOP:.1}\" width=\"{plot_w:.1}\" \
             height=\"{plot_h:.1}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
        ));

        // Ticks and grid.
        for tick in ticks(x_lo, x_hi) {
            let x = to_x(tick);
            svg.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{:.1}\" x2=\"{x:.2}\" y2=\"{:.1}\" \
                 stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
                MARGIN_TOP,
                MARGIN_TOP + plot_h
            ));
            svg.push_str(&format!(
                "<text x=\"{x:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
                 text-anchor=\"middle\">{}</text>\n",
                MARGIN_TOP + plot_h + 16.0,
                format_tick(tick)
            ));
        }
        for tick in ticks(y_lo, y_hi) {
            let y = to_y(tick);
            svg.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{:.1}\" y2=\"{y:.2}\" \
                 stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
                MARGIN_LEFT,
                MARGIN_LEFT + plot_w
            ));
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
                 text-anchor=\"end\">{}</text>\n",
                MARGIN_LEFT - 6.0,
                y + 4.0,
                format_tick(tick)
            ));
        }

        // Axis labels.
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        ));

        // Reference lines.
        for (y_value, color) in &self.hlines {
            let y = to_y(*y_value);
            svg.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{y:.2}\" x2=\"{:.1}\" y2=\"{y:.2}\" \
                 stroke=\"{color}\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
                MARGIN_LEFT,
                MARGIN_LEFT + plot_w
            ));
        }

        // Data.
        for series in &self.series {
            match series.shape {
                Shape::Dots { radius } => {
                    for &(px, py) in &series.points {
                        if px.is_finite() && py.is_finite() {
                            svg.push_str(&format!(
                                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{radius:.1}\" \
                                 fill=\"{}\"/>\n",
                                to_x(px),
                                to_y(py),
                                series.color
                            ));
                        }
                    }
                }
                Shape::Line => {
                    let path: Vec<String> = series
                        .points
                        .iter()
                        .filter(|(px, py)| px.is_finite() && py.is_finite())
                        .map(|&(px, py)| format!("{:.2},{:.2}", to_x(px), to_y(py)))
                        .collect();
                    if path.len() > 1 {
                        svg.push_str(&format!(
                            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" \
                             stroke-width=\"1.5\"/>\n",
                            path.join(" "),
                            series.color
                        ));
                    }
                }
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn pad_range((lo, hi): (f64, f64)) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = lo.abs().max(1.0) * 0.05;
        (lo - pad, lo + pad)
    }
}

/// Round ticks at a 1/2/5 step covering the range.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let power = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|s| s * power)
        .find(|s| (hi - lo) / s <= 6.0)
        .unwrap_or(raw);
    let mut ticks = Vec::new();
    let mut v = (lo / step).ceil() * step;
    while v <= hi + 1e-9 * step {
        // Snap exact zeros (avoids "-0").
        ticks.push(if v.abs() < 1e-12 * step { 0.0 } else { v });
        v += step;
    }
    ticks
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs();
    if !(1e-4..1e5).contains(&magnitude) {
        return format!("{v:.1e}");
    }
    let text = format!("{v:.4}");
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
