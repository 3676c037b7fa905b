//! Self-contained SVG plots. The plotted data is embedded verbatim as CSV in
//! the `<metadata>` element.

use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

pub enum Series {
    /// Piecewise-constant density over bin edges.
    Steps { edges: Vec<f64>, heights: Vec<f64>, color: &'static str, label: String },
    Line { points: Vec<(f64, f64)>, color: &'static str, label: String },
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Vertical marker lines with labels.
    pub markers: Vec<(f64, String)>,
    pub log_y: bool,
    /// CSV text embedded as metadata.
    pub data: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    fn y_value(&self, y: f64) -> Option<f64> {
        if self.log_y {
            (y > 0.0).then(|| y.log10())
        } else {
            y.is_finite().then_some(y)
        }
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for s in &self.series {
            match s {
                Series::Steps { edges, heights, .. } => {
                    xs.extend(edges.iter().copied());
                    ys.extend(heights.iter().filter_map(|&h| self.y_value(h)));
                }
                Series::Line { points, .. } => {
                    xs.extend(points.iter().map(|p| p.0));
                    ys.extend(points.iter().filter_map(|p| self.y_value(p.1)));
                }
            }
        }
        let range = |v: &[f64], floor: Option<f64>| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = floor.map_or(lo, |f| lo.min(f));
            if !(lo.is_finite() && hi.is_finite()) {
                (0.0, 1.0)
            } else if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let x = range(&xs, None);
        let (y0, y1) = range(&ys, (!self.log_y).then_some(0.0));
        (x, (y0, y1 + 0.05 * (y1 - y0)))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.bounds();
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, "<metadata><![CDATA[\n{}]]></metadata>", self.data.replace("]]>", "]]]]><![CDATA[>"));
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        for i in 0..=TICKS {
            let t = i as f64 / TICKS as f64;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let ylabel = if self.log_y { format!("1e{yv:.1}") } else { format!("{yv:.3}") };
            let _ = writeln!(
                svg,
                r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4:.4}</text>"#,
                sx(xv),
                MARGIN_TOP + ph,
                MARGIN_TOP + ph + 5.0,
                MARGIN_TOP + ph + 20.0,
                xv
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5}</text>"#,
                MARGIN_LEFT - 5.0,
                sy(yv),
                MARGIN_LEFT,
                MARGIN_LEFT - 8.0,
                sy(yv) + 4.0,
                ylabel
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            MARGIN_TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let floor = if self.log_y { y0 } else { 0.0 };
        for (k, s) in self.series.iter().enumerate() {
            let (path, color, label) = match s {
                Series::Steps { edges, heights, color, label } => {
                    let mut d = format!("M{:.2},{:.2}", sx(edges[0]), sy(floor));
                    for (i, &h) in heights.iter().enumerate() {
                        let y = self.y_value(h).unwrap_or(floor);
                        let _ = write!(d, " L{:.2},{:.2} L{:.2},{:.2}", sx(edges[i]), sy(y), sx(edges[i + 1]), sy(y));
                    }
                    let _ = write!(d, " L{:.2},{:.2}", sx(edges[edges.len() - 1]), sy(floor));
                    (d, *color, label)
                }
                Series::Line { points, color, label } => {
                    let mut d = String::new();
                    let mut pen_down = false;
                    for &(x, y) in points {
                        match self.y_value(y) {
                            Some(v) => {
                                let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, sx(x), sy(v));
                                pen_down = true;
                            }
                            None => pen_down = false,
                        }
                    }
                    (d, *color, label)
                }
            };
            let _ = writeln!(svg, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.trim_end());
            let ly = MARGIN_TOP + 15.0 + 18.0 * k as f64;
            let lx = MARGIN_LEFT + pw - 180.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape(label)
            );
        }
        for (x, label) in &self.markers {
            if *x < x0 || *x > x1 {
                continue;
            }
            let _ = writeln!(
                svg,
                r##"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="#888" stroke-dasharray="4 3"/><text x="{3:.2}" y="{4}" fill="#555">{5}</text>"##,
                sx(*x),
                MARGIN_TOP,
                MARGIN_TOP + ph,
                sx(*x) + 4.0,
                MARGIN_TOP + 12.0,
                escape(label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embeds_data_and_is_well_formed() {
        let plot = Plot {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "P".into(),
            series: vec![
                Series::Steps { edges: vec![0.0, 0.5, 1.0], heights: vec![1.0, 2.0], color: "steelblue", label: "h".into() },
                Series::Line { points: vec![(0.0, 1.0), (1.0, 2.0)], color: "crimson", label: "exact".into() },
            ],
            markers: vec![(0.5, "n_c".into())],
            log_y: false,
            data: "x,y\r\n1,2\r\n".into(),
        };
        let s = plot.render();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("x,y\r\n1,2\r\n"));
        assert!(s.contains("a &lt; b"));
        assert_eq!(s.matches("<path").count(), 2);
    }
}
