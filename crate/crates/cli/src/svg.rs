//! Minimal static SVG line plots. CSVs are the data contract; these are a
//! convenience rendering with deterministic output.

use std::fmt::Write as _;

pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 80.0;

impl Plot {
    pub fn render(&self) -> String {
        let map_x = |v: f64| if self.log_x { v.log10() } else { v };
        let map_y = |v: f64| if self.log_y { v.log10() } else { v };
        let usable = |x: f64, y: f64| -> bool {
            (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0) && x.is_finite() && y.is_finite()
        };

        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for s in &self.series {
            for &(x, y) in &s.points {
                if usable(x, y) {
                    x_min = x_min.min(map_x(x));
                    x_max = x_max.max(map_x(x));
                    y_min = y_min.min(map_y(y));
                    y_max = y_max.max(map_y(y));
                }
            }
        }
        if !x_min.is_finite() || !y_min.is_finite() {
            x_min = 0.0;
            x_max = 1.0;
            y_min = 0.0;
            y_max = 1.0;
        }
        if (x_max - x_min).abs() < 1e-300 {
            x_max = x_min + 1.0;
        }
        if (y_max - y_min).abs() < 1e-300 {
            y_max = y_min + 1.0;
        }

        let to_px = |x: f64, y: f64| -> (f64, f64) {
            let px = MARGIN + (map_x(x) - x_min) / (x_max - x_min) * (WIDTH - 2.0 * MARGIN);
            let py = HEIGHT - MARGIN - (map_y(y) - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);
            (px, py)
        };

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"30\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            xml_escape(&self.title)
        );

        // frame
        let _ = writeln!(
            out,
            "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"black\"/>",
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );

        // ticks and labels (5 per axis, uniform in the mapped coordinate)
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let xv = x_min + t * (x_max - x_min);
            let yv = y_min + t * (y_max - y_min);
            let px = MARGIN + t * (WIDTH - 2.0 * MARGIN);
            let py = HEIGHT - MARGIN - t * (HEIGHT - 2.0 * MARGIN);
            let x_shown = if self.log_x { 10f64.powf(xv) } else { xv };
            let y_shown = if self.log_y { 10f64.powf(yv) } else { yv };
            let _ = writeln!(
                out,
                "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
                HEIGHT - MARGIN,
                HEIGHT - MARGIN + 6.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{px:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{:.3e}</text>",
                HEIGHT - MARGIN + 22.0,
                x_shown
            );
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{MARGIN}\" y2=\"{py:.1}\" stroke=\"black\"/>",
                MARGIN - 6.0
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{:.3e}</text>",
                MARGIN - 10.0,
                py + 4.0,
                y_shown
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            HEIGHT - 20.0,
            xml_escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"24\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 24 {:.1})\">{}</text>",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            xml_escape(&self.y_label)
        );

        for s in &self.series {
            let mut path = String::new();
            let mut pen_down = false;
            for &(x, y) in &s.points {
                if !usable(x, y) {
                    pen_down = false;
                    continue;
                }
                let (px, py) = to_px(x, y);
                let _ = write!(path, "{}{px:.2},{py:.2} ", if pen_down { "L" } else { "M" });
                pen_down = true;
            }
            let _ = writeln!(
                out,
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
                path.trim_end(),
                s.color
            );
        }

        // legend
        for (i, s) in self.series.iter().enumerate() {
            if s.label.is_empty() {
                continue;
            }
            let y = MARGIN + 18.0 + 18.0 * i as f64;
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"{}\" stroke-width=\"2\"/>",
                WIDTH - MARGIN - 150.0,
                WIDTH - MARGIN - 120.0,
                s.color
            );
            let _ = writeln!(
                out,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
                WIDTH - MARGIN - 112.0,
                y + 4.0,
                xml_escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
