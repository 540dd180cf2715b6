//! Static SVG plots written by hand.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::report::{DOUBLING_BOUND, LAMBDA1_DIAM2_RANGE};
use crate::sweep::StoredPoint;

const W: f64 = 640.0;
const H: f64 = 440.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 60.0); // left, right, top, bottom

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = write!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = write!(
            body,
            r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
        );
        let _ = write!(
            body,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            escape(title)
        );
        Self { body }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        let _ = write!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = write!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        );
    }

    fn polyline(&mut self, pts: &[(f64, f64)], style: &str) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = write!(
            self.body,
            r#"<polyline points="{}" fill="none" {style}/>"#,
            coords.join(" ")
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = write!(
            self.body,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{fill}"/>"#
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = write!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}" stroke="white"/>"#
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Maps data ranges to the plot area; logarithmic axes take `log10` first.
struct Axes {
    x: (f64, f64),
    y: (f64, f64),
    log_x: bool,
    log_y: bool,
}

impl Axes {
    fn tx(&self, v: f64) -> f64 {
        let v = if self.log_x { v.log10() } else { v };
        MARGIN.0 + (v - self.x.0) / (self.x.1 - self.x.0) * (W - MARGIN.0 - MARGIN.1)
    }

    fn ty(&self, v: f64) -> f64 {
        let v = if self.log_y { v.log10() } else { v };
        H - MARGIN.3 - (v - self.y.0) / (self.y.1 - self.y.0) * (H - MARGIN.2 - MARGIN.3)
    }

    fn draw(&self, svg: &mut Svg, xlabel: &str, ylabel: &str) {
        let (x0, x1) = (MARGIN.0, W - MARGIN.1);
        let (y0, y1) = (H - MARGIN.3, MARGIN.2);
        svg.line(x0, y0, x1, y0, r#"stroke="black""#);
        svg.line(x0, y0, x0, y1, r#"stroke="black""#);
        for (lo, hi, log, horizontal) in [
            (self.x.0, self.x.1, self.log_x, true),
            (self.y.0, self.y.1, self.log_y, false),
        ] {
            let ticks: Vec<f64> = if log {
                (lo.ceil() as i64..=hi.floor() as i64).map(|e| e as f64).collect()
            } else {
                (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
            };
            for t in ticks {
                let lbl = if log {
                    format!("1e{}", t as i64)
                } else {
                    format!("{t:.3}")
                };
                let value = if log { 10f64.powf(t) } else { t };
                if horizontal {
                    let x = self.tx(value);
                    svg.line(x, y0, x, y0 + 5.0, r#"stroke="black""#);
                    svg.text(x, y0 + 18.0, "middle", &lbl);
                } else {
                    let y = self.ty(value);
                    svg.line(x0 - 5.0, y, x0, y, r#"stroke="black""#);
                    svg.text(x0 - 8.0, y + 4.0, "end", &lbl);
                }
            }
        }
        svg.text((x0 + x1) / 2.0, H - 15.0, "middle", xlabel);
        svg.text(16.0, (y0 + y1) / 2.0, "start", ylabel);
    }
}

fn range(vals: impl Iterator<Item = f64>, log: bool) -> Option<(f64, f64)> {
    let v: Vec<f64> = vals
        .filter(|v| v.is_finite() && (!log || *v > 0.0))
        .map(|v| if log { v.log10() } else { v })
        .collect();
    let lo = v.iter().copied().reduce(f64::min)?;
    let hi = v.iter().copied().reduce(f64::max)?;
    if log {
        Some((lo.floor(), hi.ceil().max(lo.floor() + 1.0)))
    } else {
        let pad = ((hi - lo) * 0.05).max(1e-9);
        Some((lo - pad, hi + pad))
    }
}

fn param_label(p: &StoredPoint) -> String {
    match p.params.a3 {
        Some(a3) => format!("({}, {}, {})", p.params.a1, p.params.a2, a3),
        None => format!("({}, {}, inf)", p.params.a1, p.params.a2),
    }
}

/// Log-log `v̂(r)` with the model `V̄(r)` overlaid.
pub fn volume_plot(p: &StoredPoint) -> Option<String> {
    let rows = p.curve.as_ref()?;
    let x = range(rows.iter().map(|r| r.r), true)?;
    let y = range(rows.iter().flat_map(|r| [r.v_hat, r.v_model]), true)?;
    let ax = Axes {
        x,
        y,
        log_x: true,
        log_y: true,
    };
    let mut svg = Svg::new(&format!("ball volume for {}", param_label(p)));
    ax.draw(&mut svg, "r", "volume");
    let model: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.v_model > 0.0)
        .map(|r| (ax.tx(r.r), ax.ty(r.v_model)))
        .collect();
    svg.polyline(&model, r#"stroke="firebrick" stroke-width="2""#);
    for r in rows.iter().filter(|r| r.v_hat > 0.0) {
        svg.circle(ax.tx(r.r), ax.ty(r.v_hat), 2.5, "steelblue");
    }
    svg.circle(W - 170.0, 50.0, 3.0, "steelblue");
    svg.text(W - 160.0, 54.0, "start", "Monte Carlo estimate");
    svg.line(
        W - 176.0,
        68.0,
        W - 164.0,
        68.0,
        r#"stroke="firebrick" stroke-width="2""#,
    );
    svg.text(W - 160.0, 72.0, "start", "model V̄(r)");
    Some(svg.finish())
}

/// Heat map of the doubling estimate over the `(a1, a3)` grid.
pub fn doubling_heatmap(points: &[StoredPoint]) -> Option<String> {
    let grid: Vec<(&StoredPoint, (usize, usize))> = points
        .iter()
        .filter_map(|p| p.grid_index.map(|g| (p, g)))
        .collect();
    if grid.is_empty() {
        return None;
    }
    let rows = grid.iter().map(|g| g.1 .0).max()? + 1;
    let cols = grid.iter().map(|g| g.1 .1).max()? + 1;
    let values: Vec<f64> = grid.iter().filter_map(|g| g.0.d_hat).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut svg = Svg::new("empirical doubling estimate over (a1, a3), a2 = 1");
    let (x0, y0) = (MARGIN.0 + 30.0, MARGIN.2 + 20.0);
    let cw = (W - x0 - MARGIN.1 - 20.0) / cols as f64;
    let ch = (H - y0 - MARGIN.3 - 40.0) / rows as f64;
    for (p, (i, j)) in &grid {
        let (x, y) = (x0 + *j as f64 * cw, y0 + *i as f64 * ch);
        let fill = match p.d_hat {
            Some(d) if hi > lo => {
                let s = (d - lo) / (hi - lo);
                format!(
                    "rgb({},{},{})",
                    (255.0 * s) as u8,
                    (80.0 + 100.0 * (1.0 - s)) as u8,
                    (255.0 * (1.0 - s)) as u8
                )
            }
            Some(_) => "rgb(0,180,255)".to_string(),
            None => "lightgray".to_string(),
        };
        svg.rect(x, y, cw, ch, &fill);
        let text = p.d_hat.map_or("n/a".to_string(), |d| format!("{d:.1}"));
        svg.text(x + cw / 2.0, y + ch / 2.0 + 4.0, "middle", &text);
        if *i == 0 {
            let a3 = p.params.a3.map_or("inf".to_string(), |a| a.to_string());
            svg.text(x + cw / 2.0, y0 - 6.0, "middle", &format!("a3 = {a3}"));
        }
        if *j == 0 {
            svg.text(
                x0 - 6.0,
                y + ch / 2.0 + 4.0,
                "end",
                &format!("a1 = {}", p.params.a1),
            );
        }
    }
    let foot = H - MARGIN.3 + 10.0;
    if lo.is_finite() {
        svg.text(
            x0,
            foot,
            "start",
            &format!("color scale: {lo:.2} (blue) to {hi:.2} (red); bound {DOUBLING_BOUND}"),
        );
    }
    svg.text(
        x0,
        foot + 18.0,
        "start",
        "uniform doubling: one finite constant bounds every left-invariant metric on SU(2)",
    );
    Some(svg.finish())
}

/// `λ₁·diam²` per metric against the recorded range.
pub fn lambda_diam_scatter(points: &[StoredPoint]) -> Option<String> {
    let vals: Vec<(usize, f64, String)> = points
        .iter()
        .filter_map(|p| Some((p.lambda1? * p.diameter?.powi(2), param_label(p))))
        .enumerate()
        .map(|(i, (v, l))| (i, v, l))
        .collect();
    if vals.is_empty() {
        return None;
    }
    let y = range(
        vals.iter()
            .map(|v| v.1)
            .chain([LAMBDA1_DIAM2_RANGE.0, LAMBDA1_DIAM2_RANGE.1]),
        true,
    )?;
    let ax = Axes {
        x: (-0.5, vals.len() as f64 - 0.5),
        y,
        log_x: false,
        log_y: true,
    };
    let mut svg = Svg::new("λ₁·diam² per metric");
    ax.draw(&mut svg, "grid point (row-major over a1, a3)", "λ₁·diam²");
    for bound in [LAMBDA1_DIAM2_RANGE.0, LAMBDA1_DIAM2_RANGE.1] {
        let yb = ax.ty(bound);
        svg.line(
            MARGIN.0,
            yb,
            W - MARGIN.1,
            yb,
            r#"stroke="gray" stroke-dasharray="4 3""#,
        );
        svg.text(W - MARGIN.1 - 4.0, yb - 4.0, "end", &format!("{bound}"));
    }
    for (i, v, _) in &vals {
        svg.circle(ax.tx(*i as f64), ax.ty(*v), 3.5, "darkgreen");
    }
    Some(svg.finish())
}

/// Writes `volume_<label>.svg`, `doubling_heatmap.svg` and
/// `lambda1_diam2.svg` into `dir`; skipped plots have no data.
pub fn emit_plots(points: &[StoredPoint], dir: &Path) -> io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, svg: Option<String>| -> io::Result<()> {
        if let Some(s) = svg {
            fs::write(dir.join(&name), s)?;
            written.push(name);
        }
        Ok(())
    };
    for p in points {
        put(format!("volume_{}.svg", p.label), volume_plot(p))?;
    }
    put("doubling_heatmap.svg".into(), doubling_heatmap(points))?;
    put("lambda1_diam2.svg".into(), lambda_diam_scatter(points))?;
    Ok(written)
}

/// Minimal XML check: one root element, every tag closed in order.
pub fn check_well_formed(svg: &str) -> Result<(), String> {
    let mut stack: Vec<&str> = Vec::new();
    let mut roots = 0;
    let mut rest = svg.trim();
    while let Some(start) = rest.find('<') {
        if stack.is_empty() && !rest[..start].trim().is_empty() {
            return Err("text outside the root element".into());
        }
        let end = rest[start..].find('>').ok_or("unterminated tag")? + start;
        let tag = &rest[start + 1..end];
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some(open) if open == name.trim() => {}
                other => return Err(format!("closing </{name}> does not match {other:?}")),
            }
        } else if !tag.starts_with('?') && !tag.starts_with('!') {
            let name = tag.split_whitespace().next().unwrap_or("").trim_end_matches('/');
            if stack.is_empty() {
                roots += 1;
            }
            if !tag.ends_with('/') {
                stack.push(name);
            }
        }
        rest = &rest[end + 1..];
    }
    if !rest.trim().is_empty() {
        return Err("trailing text".into());
    }
    if !stack.is_empty() {
        return Err(format!("unclosed tags {stack:?}"));
    }
    if roots != 1 {
        return Err(format!("{roots} root elements"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Params;
    use crate::sweep::CurveRow;
    use su2geom::volume::{model_volume, round_ball_volume, VolumeModel};

    fn round_point() -> StoredPoint {
        let model = VolumeModel::new(1.0, 1.0, Some(1.0)).unwrap();
        let rows = su2geom::volume::log_grid(0.05, 8.0, 40)
            .into_iter()
            .map(|r| {
                let v = round_ball_volume(r);
                let vm = model_volume(&model, &r);
                CurveRow {
                    r,
                    v_hat: v,
                    stderr: 0.0,
                    v_model: vm,
                    ratio: v / vm,
                }
            })
            .collect();
        StoredPoint {
            params: Params::from_array([1.0, 1.0, 1.0]),
            label: "p0_0".into(),
            d_hat: Some(7.5),
            diameter: Some(6.2),
            lambda1: Some(0.75),
            grid_index: Some((0, 0)),
            curve: Some(rows),
        }
    }

    #[test]
    fn plots_are_well_formed() {
        let p = round_point();
        let mut q = round_point();
        q.grid_index = Some((0, 1));
        q.d_hat = None;
        let pts = [p, q];
        for svg in [
            volume_plot(&pts[0]).unwrap(),
            doubling_heatmap(&pts).unwrap(),
            lambda_diam_scatter(&pts).unwrap(),
        ] {
            check_well_formed(&svg).unwrap();
        }
    }

    #[test]
    fn model_branches_meet_at_one() {
        // The branches r³ and 1 of the g(1,1,1) model meet at r = 1.
        let p = round_point();
        let rows = p.curve.unwrap();
        let bend = rows.iter().find(|r| r.v_model >= 1.0).unwrap();
        assert!(bend.r >= 1.0 && bend.r < 1.2);
    }

    #[test]
    fn checker_rejects_broken_svg() {
        assert!(check_well_formed("<svg><g></svg>").is_err());
        assert!(check_well_formed("<svg/><svg/>").is_err());
        assert!(check_well_formed("<svg><line/></svg>").is_ok());
    }
}
