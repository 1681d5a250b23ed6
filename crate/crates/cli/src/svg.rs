use std::fmt::Write;

use num_complex::Complex64;

const WINDOW: f64 = 6.0;
const MARGIN: f64 = 0.25;

/// One circle per point inside a y-flipped group. The view box is the
/// bounding box of the points, clamped to `[-6, 6]²`.
pub fn render(points: &[Complex64], n: usize, depth: usize) -> String {
    let clamp = |x: f64| x.clamp(-WINDOW, WINDOW);
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 1.0f64, 0.0f64, 0.0f64);
    for z in points {
        x0 = x0.min(clamp(z.re));
        x1 = x1.max(clamp(z.re));
        y0 = y0.min(clamp(z.im));
        y1 = y1.max(clamp(z.im));
    }
    let (x0, x1, y0, y1) = (x0 - MARGIN, x1 + MARGIN, y0 - MARGIN, y1 + MARGIN);
    let radius = ((x1 - x0).max(y1 - y0) / 200.0).max(0.01);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        x0,
        -y1,
        x1 - x0,
        y1 - y0,
        (800.0 * (y1 - y0) / (x1 - x0)).round()
    );
    let _ = writeln!(
        out,
        "<title>R(U_{n}), depth {depth}: {} points</title>",
        points.len()
    );
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{}" width="{}" height="{}" fill="white"/>"#,
        -y1,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(out, r##"<g transform="scale(1,-1)" fill="#1f4e79">"##);
    for z in points {
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{radius}"/>"#, z.re, z.im);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
