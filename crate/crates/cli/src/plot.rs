//! Self-contained SVG plots of empirical spectral CDFs.

use std::fmt::Write as _;

use spectral_sketch::SpectralDistribution;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 2] = ["#1f4e9c", "#c0392b"];

/// Vertices of the CDF staircase on `[lo, hi]`: a horizontal run to each
/// support point followed by a vertical rise of its mass.
pub fn cdf_path(d: &SpectralDistribution, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![(lo, 0.0)];
    let mut level = 0.0;
    for (x, w) in d.points() {
        pts.push((x, level));
        level += w;
        pts.push((x, level));
    }
    pts.push((hi, level));
    pts
}

/// Renders one or two CDFs (estimate first, then the optional truth in red).
pub fn render_cdf_svg(curves: &[(&str, &SpectralDistribution)]) -> String {
    let lo = curves
        .iter()
        .flat_map(|(_, d)| d.support().first().copied())
        .fold(0.0f64, f64::min);
    let hi = curves
        .iter()
        .flat_map(|(_, d)| d.support().last().copied())
        .fold(2.0f64, f64::max);
    let sx = |x: f64| MARGIN + (x - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"#,
        x0 = sx(lo),
        x1 = sx(hi),
        y0 = sy(0.0),
        y1 = sy(1.0)
    )
    .unwrap();
    writeln!(svg, r#"<g class="ticks" font-family="sans-serif" font-size="11" text-anchor="middle">"#).unwrap();
    for k in 0..=4 {
        let x = lo + (hi - lo) * k as f64 / 4.0;
        writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{x:.2}</text>"#, sx(x), sy(0.0) + 16.0).unwrap();
        let y = k as f64 / 4.0;
        writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{y:.2}</text>"#, sx(lo) - 20.0, sy(y) + 4.0).unwrap();
    }
    writeln!(svg, "</g>").unwrap();
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">eigenvalue</text>"#,
        WIDTH / 2.0,
        HEIGHT - 8.0
    )
    .unwrap();

    for (i, (label, d)) in curves.iter().enumerate() {
        let points: Vec<String> = cdf_path(d, lo, hi)
            .into_iter()
            .map(|(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        writeln!(
            svg,
            r#"<polyline class="cdf" data-label="{}" data-steps="{}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            escape(label),
            d.len(),
            COLORS[i % COLORS.len()],
            points.join(" ")
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
