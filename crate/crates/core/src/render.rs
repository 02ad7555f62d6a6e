//! SVG drawings of Klein polygons.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::cf1d::{KleinPolygon, QuadraticSurd};

const COLORS: [&str; 4] = ["#c0392b", "#2471a3", "#1e8449", "#b9770e"];

/// Lattice points, the two eigenlines and the Klein polygons inside the
/// window `|x|, |y| ≤ extent`.
pub fn klein_svg(alpha: &QuadraticSurd, beta: &QuadraticSurd, polygons: &[KleinPolygon], extent: i64) -> String {
    let px = 480.0;
    let e = extent as f64;
    let scale = px / (2.0 * e);
    let tx = |x: f64| (x + e) * scale;
    let ty = |y: f64| (e - y) * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {px} {px}" width="{px}" height="{px}">"#
    );
    let _ = writeln!(s, r#"<rect width="{px}" height="{px}" fill="white"/>"#);
    if extent <= 40 {
        let _ = writeln!(s, r##"<g fill="#999">"##);
        for x in -extent..=extent {
            for y in -extent..=extent {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, tx(x as f64), ty(y as f64));
            }
        }
        let _ = writeln!(s, "</g>");
    }
    for slope in [alpha.to_f64(), beta.to_f64()] {
        // clip the line y = slope·x to the window
        let t = if slope.abs() > 1.0 { e / slope.abs() } else { e };
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#444" stroke-dasharray="4 3"/>"##,
            tx(-t),
            ty(-t * slope),
            tx(t),
            ty(t * slope)
        );
    }
    for (k, p) in polygons.iter().enumerate() {
        let pts: Vec<(f64, f64)> = p
            .vertices
            .iter()
            .filter_map(|v| Some((v[0].to_f64()?, v[1].to_f64()?)))
            .filter(|(x, y)| x.abs() <= e && y.abs() <= e)
            .collect();
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", tx(x), ty(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="cone" data-cone="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            p.cone,
            coords.join(" ")
        );
        for (x, y) in pts {
            let _ = writeln!(
                s,
                r#"<circle class="vertex" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"><title>({x}, {y})</title></circle>"#,
                tx(x),
                ty(y)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
