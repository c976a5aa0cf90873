//! Newton polygon as a standalone SVG picture.

use std::fmt::Write;

use crate::classify::NewtonPolygon;

const CELL: i64 = 60;
const MARGIN: i64 = 40;

pub fn newton_svg(np: &NewtonPolygon) -> String {
    let xs = np.points.iter().map(|p| p.0);
    let ys = np.points.iter().map(|p| p.1);
    let (x0, x1) = (xs.clone().min().unwrap_or(0).min(0), xs.max().unwrap_or(0).max(1));
    let (y0, y1) = (ys.clone().min().unwrap_or(0).min(0), ys.max().unwrap_or(0).max(1));
    let w = (x1 - x0) * CELL + 2 * MARGIN;
    let h = (y1 - y0) * CELL + 2 * MARGIN;
    let px = |x: i64| MARGIN + (x - x0) * CELL;
    let py = |y: i64| h - MARGIN - (y - y0) * CELL;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<g stroke="#bbb" stroke-width="1"><line x1="{}" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}"/></g>"##,
        px(x0),
        py(0),
        px(x1),
        py(0),
        px(0),
        py(y0),
        px(0),
        py(y1)
    );
    let hull_attr: Vec<String> = np.hull.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let pts: Vec<String> = np.hull.iter().map(|&(x, y)| format!("{},{}", px(x), py(y))).collect();
    let _ = writeln!(
        s,
        r#"<polyline class="hull" data-vertices="{}" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        hull_attr.join(" "),
        pts.join(" ")
    );
    for &(x, y) in &np.points {
        let on_hull = np.hull.contains(&(x, y));
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="5" fill="{}"/>"#,
            px(x),
            py(y),
            if on_hull { "black" } else { "gray" }
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="12">({x},{y})</text>"#,
            px(x) + 7,
            py(y) - 7
        );
    }
    let slopes: Vec<String> = np.slopes.iter().map(|sl| sl.to_string()).collect();
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12">slopes: {}</text>"#,
        MARGIN,
        MARGIN / 2,
        slopes.join(", ")
    );
    s.push_str("</svg>\n");
    s
}
