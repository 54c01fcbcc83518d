//! SVG rendering of a dynamic signal: one panel per period, one horizontal
//! bar per state spanning `[0,1)`, each cell drawn in its own color and
//! labeled with its id. A cell identical to a cell of the previous period
//! keeps that cell's color.

use std::fmt::Write;

use crate::dynamic::DynamicSignal;
use crate::rational::Rational;
use crate::signal::Cell;

const PALETTE: [&str; 10] = [
    "#1f3a93", "#e8552d", "#f4b183", "#2e9e6a", "#8e44ad", "#c0392b", "#16a085", "#d4ac0d", "#5d6d7e", "#e84393",
];

const BAR_WIDTH: f64 = 360.0;
const ROW_HEIGHT: f64 = 36.0;
const ROW_GAP: f64 = 14.0;
const LEFT: f64 = 50.0;
const TOP: f64 = 40.0;
const PANEL_GAP: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn x_of(v: &Rational) -> f64 {
    v.to_f64() * BAR_WIDTH
}

/// Palette index per period and cell.
fn colors(ds: &DynamicSignal) -> Vec<Vec<usize>> {
    let mut next = 0;
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(ds.horizon());
    for (t, period) in ds.periods().iter().enumerate() {
        let row = period
            .cells()
            .iter()
            .map(|cell| {
                let inherited = t.checked_sub(1).and_then(|p| {
                    let prev: &[Cell] = ds.period(p).cells();
                    prev.iter().position(|c| c.sections() == cell.sections()).map(|i| out[p][i])
                });
                inherited.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        out.push(row);
    }
    out
}

/// Deterministic SVG markup for `ds`.
pub fn render_svg(ds: &DynamicSignal) -> String {
    let states = ds.states();
    let panel_width = LEFT + BAR_WIDTH;
    let width = PANEL_GAP / 2.0 + ds.horizon() as f64 * (panel_width + PANEL_GAP);
    let height = TOP + states.len() as f64 * (ROW_HEIGHT + ROW_GAP) + 30.0;
    let colors = colors(ds);

    let mut svg = String::new();
    let w = &mut svg;
    // writing to a String cannot fail
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (t, period) in ds.periods().iter().enumerate() {
        let x0 = PANEL_GAP / 2.0 + t as f64 * (panel_width + PANEL_GAP);
        let bx = x0 + LEFT;
        let _ = writeln!(w, r#"<g class="period" data-period="{}">"#, t + 1);
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">period {}</text>"#,
            bx + BAR_WIDTH / 2.0,
            TOP - 18.0,
            t + 1
        );
        for s in 0..states.len() {
            let y = TOP + s as f64 * (ROW_HEIGHT + ROW_GAP);
            let _ = writeln!(
                w,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                bx - 8.0,
                y + ROW_HEIGHT / 2.0,
                escape(states.label(s))
            );
            for (c, cell) in period.cells().iter().enumerate() {
                let fill = PALETTE[colors[t][c] % PALETTE.len()];
                for (lo, hi) in cell.section(s).intervals() {
                    let (xa, xb) = (bx + x_of(lo), bx + x_of(hi));
                    let _ = writeln!(
                        w,
                        r#"<rect x="{xa:.2}" y="{y:.1}" width="{:.2}" height="{ROW_HEIGHT:.1}" fill="{fill}" fill-opacity="0.85" stroke="black" stroke-width="0.5"><title>{} : {} [{}, {})</title></rect>"#,
                        xb - xa,
                        escape(cell.id()),
                        escape(states.label(s)),
                        lo,
                        hi
                    );
                    let _ = writeln!(
                        w,
                        r#"<text x="{:.2}" y="{:.1}" text-anchor="middle" dominant-baseline="middle" fill="white">{}</text>"#,
                        (xa + xb) / 2.0,
                        y + ROW_HEIGHT / 2.0,
                        escape(cell.id())
                    );
                }
            }
        }
        let axis_y = TOP + states.len() as f64 * (ROW_HEIGHT + ROW_GAP);
        let _ = writeln!(
            w,
            r#"<line x1="{bx:.1}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
            bx + BAR_WIDTH
        );
        let _ = writeln!(w, r#"<text x="{bx:.1}" y="{:.1}" text-anchor="middle">0</text>"#, axis_y + 14.0);
        let _ = writeln!(
            w,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">1</text>"#,
            bx + BAR_WIDTH,
            axis_y + 14.0
        );
        let _ = writeln!(w, "</g>");
    }
    let _ = writeln!(w, "</svg>");
    svg
}
