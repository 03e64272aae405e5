//! Adams chart rendering. A class at `(stem, s)` is drawn at
//! `x = MARGIN + CELL·(stem − stem_lo)`, `y = MARGIN + CELL·(s_hi − s)`, where
//! `[stem_lo, stem_hi]` spans `0..=max_stem` and every class stem, and
//! `[s_lo, s_hi]` spans 0 and every class filtration.

use std::fmt::Write;

use ctau_core::resolution::ExtChart;

const CELL: i32 = 24;
const MARGIN: i32 = 32;
const RADIUS: i32 = 3;

pub fn render(chart: &ExtChart) -> String {
    let classes: Vec<_> = chart.classes().collect();
    let stem_lo = classes
        .iter()
        .map(|(k, _)| k.stem)
        .min()
        .unwrap_or(0)
        .min(0);
    let stem_hi = classes
        .iter()
        .map(|(k, _)| k.stem)
        .max()
        .unwrap_or(0)
        .max(chart.max_stem)
        .max(0);
    let s_lo = classes.iter().map(|(k, _)| k.s).min().unwrap_or(0).min(0);
    let s_hi = classes.iter().map(|(k, _)| k.s).max().unwrap_or(0).max(0);
    let x = |stem: i32| MARGIN + CELL * (stem - stem_lo);
    let y = |s: i32| MARGIN + CELL * (s_hi - s);
    let width = 2 * MARGIN + CELL * (stem_hi - stem_lo);
    let height = 2 * MARGIN + CELL * (s_hi - s_lo);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<title>{}</title>"#, escape(&chart.module)).unwrap();
    writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
    writeln!(out, r##"<g stroke="#ddd" stroke-width="1">"##).unwrap();
    for stem in stem_lo..=stem_hi {
        writeln!(
            out,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
            x(stem),
            y(s_hi),
            y(s_lo)
        )
        .unwrap();
    }
    for s in s_lo..=s_hi {
        writeln!(
            out,
            r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#,
            y(s),
            x(stem_lo),
            x(stem_hi)
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(
        out,
        r#"<g font-family="monospace" font-size="8" text-anchor="middle">"#
    )
    .unwrap();
    for stem in stem_lo..=stem_hi {
        writeln!(
            out,
            r#"<text x="{}" y="{}">{stem}</text>"#,
            x(stem),
            y(s_lo) + 14
        )
        .unwrap();
    }
    for s in s_lo..=s_hi {
        writeln!(
            out,
            r#"<text x="{}" y="{}">{s}</text>"#,
            x(stem_lo) - 14,
            y(s) + 3
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    // several weights can share (stem, s); spread them horizontally
    writeln!(
        out,
        r#"<g font-family="monospace" font-size="6" text-anchor="middle">"#
    )
    .unwrap();
    let mut k = 0;
    while k < classes.len() {
        let (key, _) = classes[k];
        let group: Vec<_> = classes[k..]
            .iter()
            .take_while(|(o, _)| o.stem == key.stem && o.s == key.s)
            .collect();
        let dots: i32 = group.iter().map(|(_, m)| *m as i32).sum();
        let mut slot = 0;
        for (c, mult) in &group {
            for _ in 0..*mult {
                let cx = x(c.stem) + (2 * slot - (dots - 1)) * (RADIUS + 1);
                let cy = y(c.s);
                writeln!(
                    out,
                    r#"<circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="black"/>"#
                )
                .unwrap();
                writeln!(
                    out,
                    r#"<text x="{cx}" y="{}">{}</text>"#,
                    cy - RADIUS - 2,
                    c.weight
                )
                .unwrap();
                slot += 1;
            }
        }
        k += group.len();
    }
    writeln!(out, "</g>").unwrap();
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chart_is_valid() {
        let svg = render(&ExtChart::new("empty", 0));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn negative_coordinates_stay_on_canvas() {
        let mut c = ExtChart::new("laurent", 2);
        c.add(-2, -2, -2, 1);
        c.add(2, 2, 2, 1);
        let svg = render(&c);
        assert!(svg.contains(r#"<circle cx="32" cy="128""#));
        assert!(svg.contains(r#"<circle cx="128" cy="32""#));
    }

    #[test]
    fn diagonal_line() {
        let mut c = ExtChart::new("kw", 3);
        for s in 0..=3 {
            c.add(s, s, s, 1);
        }
        let svg = render(&c);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg, render(&c));
    }
}
