//! Static SVG histogram of the splitting-pair count with a Poisson overlay.

use std::fmt::Write as _;

use landscape::theory::poisson_pmf;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Bars for the empirical `P(Y = j)`, circles for Poisson(`lambda`).
pub fn histogram(y_histogram: &[u64], lambda: f64, title: &str) -> String {
    let total: u64 = y_histogram.iter().sum();
    let bins = y_histogram.len().max(5);
    let empirical: Vec<f64> = (0..bins)
        .map(|j| {
            let c = y_histogram.get(j).copied().unwrap_or(0);
            if total == 0 {
                0.0
            } else {
                c as f64 / total as f64
            }
        })
        .collect();
    let predicted: Vec<f64> = (0..bins).map(|j| poisson_pmf(j, lambda)).collect();
    let peak = empirical
        .iter()
        .chain(&predicted)
        .fold(0.0f64, |a, &b| a.max(b))
        .max(1e-9);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let slot = plot_w / bins as f64;
    let y_of = |v: f64| TOP + plot_h * (1.0 - v / peak);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.1}" stroke="black"/>"#,
        TOP + plot_h
    );
    for t in 0..=4 {
        let v = peak * t as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for j in 0..bins {
        let x = LEFT + slot * j as f64;
        let y = y_of(empirical[j]);
        let _ = writeln!(
            s,
            r##"<rect x="{:.1}" y="{y:.1}" width="{:.1}" height="{:.1}" fill="#6b8fc7"><title>P(Y={j}) = {:.5}</title></rect>"##,
            x + slot * 0.15,
            slot * 0.7,
            TOP + plot_h - y,
            empirical[j]
        );
        let _ = writeln!(
            s,
            r##"<circle cx="{:.1}" cy="{:.1}" r="4" fill="#c0392b"><title>Poisson({lambda:.5}) at {j} = {:.5}</title></circle>"##,
            x + slot / 2.0,
            y_of(predicted[j]),
            predicted[j]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{j}</text>"#,
            x + slot / 2.0,
            TOP + plot_h + 16.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">splitting pairs Y (bars: empirical, dots: Poisson {lambda:.4})</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_bars_and_markers() {
        let svg = histogram(&[900, 90, 10], 0.1, "n = 10 <c>");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 5);
        assert_eq!(svg.matches("fill=\"#6b8fc7\"").count(), 5);
        assert!(svg.contains("&lt;c&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
