//! Static SVG rendering of a layout frame.

use std::collections::HashMap;
use std::fmt::Write;

use super::frame::LayoutFrame;

const WIDTH: f64 = 1000.0;
const LAYER_HEIGHT: f64 = 60.0;
const MARGIN: f64 = 60.0;
const RADIUS: f64 = 6.0;
const GROUP_COLORS: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Marked publications are squares, selected ones get a red border, and
/// groups set the fill color. Year labels run down the left margin.
pub fn render_svg(frame: &LayoutFrame) -> String {
    let height = 2.0 * MARGIN + LAYER_HEIGHT * frame.layers.len().saturating_sub(1) as f64;
    let total_width = WIDTH + 2.0 * MARGIN;
    let pos = |x: f64, layer: u32| (MARGIN + 20.0 + x * (WIDTH - 40.0), MARGIN + LAYER_HEIGHT * layer as f64);
    let at: HashMap<&str, (f64, f64)> = frame.nodes.iter().map(|n| (n.id.as_str(), pos(n.x, n.layer))).collect();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_width}" height="{height}" viewBox="0 0 {total_width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let mut last_year = None;
    for layer in &frame.layers {
        if last_year != Some(layer.year) {
            let y = MARGIN + LAYER_HEIGHT * layer.index as f64;
            let _ = writeln!(svg, r#"<text x="4" y="{y:.1}" dominant-baseline="middle">{}</text>"#, layer.year);
            last_year = Some(layer.year);
        }
    }
    for e in &frame.edges {
        if let (Some(&(x1, y1)), Some(&(x2, y2))) = (at.get(e.citing.as_str()), at.get(e.cited.as_str())) {
            let dash = if e.essential { "" } else { r#" stroke-dasharray="3,3""# };
            let _ = writeln!(
                svg,
                r##"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="#999"{dash}/>"##
            );
        }
    }
    for n in &frame.nodes {
        let (x, y) = at[n.id.as_str()];
        let fill = n.group.map_or("#4a6fa5", |g| GROUP_COLORS[(g as usize - 1) % GROUP_COLORS.len()]);
        let stroke = if n.selected { "#e00000" } else { "#333" };
        let width = if n.selected { 2.5 } else { 1.0 };
        if n.marked {
            let _ = writeln!(
                svg,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"><title>{}</title></rect>"#,
                x - RADIUS,
                y - RADIUS,
                2.0 * RADIUS,
                2.0 * RADIUS,
                escape(&n.id)
            );
        } else {
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.1}" cy="{y:.1}" r="{RADIUS}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"><title>{}</title></circle>"#,
                escape(&n.id)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x,
            y + RADIUS + 11.0,
            escape(&format!("{} ({})", n.label, n.year))
        );
    }
    svg.push_str("</svg>\n");
    svg
}
