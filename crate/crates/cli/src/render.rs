//! ASCII and SVG pictures of lattice polygons.

use std::fmt::Write;

use num_rational::Rational64;

use isoslope::NewtonPolygon;

/// A polygon with a one-character marker and a name.
pub struct Plot<'a> {
    pub name: &'a str,
    pub marker: char,
    pub polygon: &'a NewtonPolygon,
}

const COLS_PER_UNIT: usize = 4;

fn y_range(plots: &[Plot<'_>]) -> (i64, i64) {
    let ys = plots.iter().flat_map(|p| p.polygon.vertices.iter().map(|v| v.1));
    let lo = ys.clone().min().unwrap_or(0).min(0);
    let hi = ys.max().unwrap_or(0).max(0);
    (lo, hi)
}

fn width(plots: &[Plot<'_>]) -> usize {
    plots.iter().map(|p| p.polygon.width()).max().unwrap_or(0)
}

pub fn ascii(plots: &[Plot<'_>]) -> String {
    let n = width(plots);
    let (lo, hi) = y_range(plots);
    let cols = n * COLS_PER_UNIT + 1;
    let rows = (hi - lo + 1) as usize;
    let mut grid = vec![vec![' '; cols]; rows];
    for (r, row) in grid.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            if c % COLS_PER_UNIT == 0 {
                *cell = if hi - r as i64 == 0 { '+' } else { '.' };
            } else if hi - r as i64 == 0 {
                *cell = '-';
            }
        }
    }
    for plot in plots {
        for c in 0..=plot.polygon.width() * COLS_PER_UNIT {
            let x = Rational64::new(c as i64, COLS_PER_UNIT as i64);
            let Some(y) = height(plot.polygon, x) else { continue };
            let r = (hi - y.round().to_integer()) as usize;
            let cell = &mut grid[r][c];
            *cell = if *cell == plot.marker || !cell_is_mark(*cell, plots) {
                plot.marker
            } else {
                '#'
            };
        }
    }
    let mut out = String::new();
    for (r, row) in grid.iter().enumerate() {
        let line: String = row.iter().collect();
        let _ = writeln!(out, "{:>4} |{}", hi - r as i64, line.trim_end());
    }
    let _ = writeln!(out, "     +{}", "-".repeat(cols));
    let mut axis = String::new();
    for x in 0..=n {
        let _ = write!(axis, "{:<width$}", x, width = COLS_PER_UNIT);
    }
    let _ = writeln!(out, "      {}", axis.trim_end());
    for plot in plots {
        let segs: Vec<String> = plot
            .polygon
            .slopes
            .iter()
            .map(|&(s, m)| format!("{s} x{m}"))
            .collect();
        let _ = writeln!(out, "  {} {}: {}", plot.marker, plot.name, segs.join(", "));
    }
    out
}

fn cell_is_mark(c: char, plots: &[Plot<'_>]) -> bool {
    c == '#' || plots.iter().any(|p| p.marker == c)
}

fn height(np: &NewtonPolygon, x: Rational64) -> Option<Rational64> {
    np.vertices.windows(2).find_map(|w| {
        let (x0, x1) = (Rational64::from(w[0].0 as i64), Rational64::from(w[1].0 as i64));
        if x0 <= x && x <= x1 {
            let t = (x - x0) / (x1 - x0);
            Some(Rational64::from(w[0].1) + t * Rational64::from(w[1].1 - w[0].1))
        } else {
            None
        }
    })
}

const UNIT: i64 = 48;
const MARGIN: i64 = 40;
const COLORS: [&str; 3] = ["#1f4e9c", "#b5301f", "#2c7a2c"];

pub fn svg(plots: &[Plot<'_>]) -> String {
    let n = width(plots).max(1) as i64;
    let (lo, hi) = y_range(plots);
    let (w, h) = (n * UNIT + 2 * MARGIN, (hi - lo).max(1) * UNIT + 2 * MARGIN + 20 * plots.len() as i64);
    let px = |x: i64| MARGIN + x * UNIT;
    let py = |y: i64| MARGIN + (hi - y) * UNIT;
    let mut out = String::new();
    let _ = writeln!(out, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##
    );
    let _ = writeln!(out, r##"<g stroke="#cccccc" stroke-width="1">"##);
    for x in 0..=n {
        let _ = writeln!(out, r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"##, px(x), py(hi), py(lo));
    }
    for y in lo..=hi {
        let _ = writeln!(out, r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"##, py(y), px(0), px(n));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g font-family="monospace" font-size="11" fill="#555555">"##);
    for x in 0..=n {
        let _ = writeln!(out, r##"<text x="{}" y="{}" text-anchor="middle">{x}</text>"##, px(x), py(lo) + 14);
    }
    for y in lo..=hi {
        let _ = writeln!(out, r##"<text x="{}" y="{}" text-anchor="end">{y}</text>"##, px(0) - 6, py(y) + 4);
    }
    let _ = writeln!(out, "</g>");
    for (i, plot) in plots.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = plot
            .polygon
            .vertices
            .iter()
            .map(|&(x, y)| format!("{},{}", px(x as i64), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"##,
            points.join(" ")
        );
        for &(x, y) in &plot.polygon.vertices {
            let _ = writeln!(out, r##"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"##, px(x as i64), py(y));
        }
        for (wv, &(s, _)) in plot.polygon.vertices.windows(2).zip(&plot.polygon.slopes) {
            // label at the segment midpoint, offset to the side of the polygon owner
            let mx = (px(wv[0].0 as i64) + px(wv[1].0 as i64)) / 2;
            let my = (py(wv[0].1) + py(wv[1].1)) / 2 + if i % 2 == 0 { -6 } else { 14 };
            let _ = writeln!(
                out,
                r##"<text x="{mx}" y="{my}" font-family="monospace" font-size="12" fill="{color}" text-anchor="middle">{s}</text>"##
            );
        }
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" font-family="monospace" font-size="12" fill="{color}">{}</text>"##,
            MARGIN,
            py(lo) + 34 + 20 * i as i64,
            plot.name
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}
