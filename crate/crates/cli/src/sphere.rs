//! Equirectangular heatmaps of a measure over the view sphere.
//!
//! Each map cell takes the value of the sampled viewpoint nearest to its
//! center. Best and worst selections are drawn on top as markers.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use vantage::model::Polarity;
use vantage::Vec3;

pub const WIDTH: usize = 720;
pub const HEIGHT: usize = 360;
/// Cell edge in pixels; 4 degrees of longitude and latitude.
pub const CELL: usize = 8;
const LEGEND: usize = 40;

/// Longitude and latitude in radians of a unit vector, z up.
pub fn lon_lat(v: &Vec3) -> (f64, f64) {
    (v.y.atan2(v.x), v.z.clamp(-1.0, 1.0).asin())
}

fn unit_at(lon: f64, lat: f64) -> Vec3 {
    Vec3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin())
}

fn pixel(lon: f64, lat: f64) -> (f64, f64) {
    ((lon + PI) / (2.0 * PI) * WIDTH as f64, (FRAC_PI_2 - lat) / PI * HEIGHT as f64)
}

/// Index of the sample with the largest dot product; ties keep the first.
pub fn nearest(samples: &[Vec3], v: &Vec3) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.dot(v) > samples[best].dot(v) {
            best = i;
        }
    }
    best
}

/// Viridis stops at 0, 0.25, 0.5, 0.75 and 1.
const RAMP: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

pub fn color(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * (RAMP.len() - 1) as f64;
    let i = (x.floor() as usize).min(RAMP.len() - 2);
    let f = x - i as f64;
    let c: Vec<u8> = (0..3).map(|k| (RAMP[i][k] + f * (RAMP[i + 1][k] - RAMP[i][k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Renders normalized `scores` at `samples` as an SVG 1.1 document.
pub fn render(samples: &[Vec3], scores: &[f64], markers: &[(Vec3, Polarity)], title: &str, provenance: &str) -> String {
    let (cols, rows) = (WIDTH / CELL, HEIGHT / CELL);
    let mut svg = String::new();
    let total_height = HEIGHT + LEGEND;
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{total_height}" viewBox="0 0 {WIDTH} {total_height}">"#
    );
    let _ = writeln!(svg, "<!-- {} -->", escape(provenance));
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(svg, r#"<g shape-rendering="crispEdges">"#);
    for r in 0..rows {
        let lat = FRAC_PI_2 - (r as f64 + 0.5) * PI / rows as f64;
        for c in 0..cols {
            let lon = -PI + (c as f64 + 0.5) * 2.0 * PI / cols as f64;
            let k = nearest(samples, &unit_at(lon, lat));
            let _ = writeln!(
                svg,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                c * CELL,
                r * CELL,
                color(scores[k])
            );
        }
    }
    let _ = writeln!(svg, "</g>");
    for (v, polarity) in markers {
        let (lon, lat) = lon_lat(v);
        let (x, y) = pixel(lon, lat);
        match polarity {
            Polarity::Best => {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##
                );
            }
            Polarity::Worst => {
                let _ = writeln!(
                    svg,
                    r##"<rect x="{:.2}" y="{:.2}" width="7" height="7" fill="#000000" stroke="#ffffff" stroke-width="1"/>"##,
                    x - 3.5,
                    y - 3.5
                );
            }
        }
    }
    // color bar from score 0 to 1 with its end labels
    let bar_y = HEIGHT + 10;
    for i in 0..100 {
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{bar_y}" width="4" height="12" fill="{}"/>"#,
            160 + 4 * i,
            color(i as f64 / 99.0)
        );
    }
    let text_y = bar_y + 11;
    let _ = writeln!(svg, r#"<text x="150" y="{text_y}" font-size="11" text-anchor="end">0</text>"#);
    let _ = writeln!(svg, r#"<text x="570" y="{text_y}" font-size="11">1</text>"#);
    let _ = writeln!(svg, r#"<text x="600" y="{text_y}" font-size="11">best ○ worst ■</text>"#);
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace("--", "- -")
}
