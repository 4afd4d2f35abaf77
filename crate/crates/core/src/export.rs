//! SVG and CSV renderings of bodies and width functions.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::bodies::{BodyReport, WidthFunction};
use crate::error::{Error, Result};
use crate::polytope::{Point, RationalPolytope};
use crate::rat::{display_12, rat, Rat};

/// Vertices of a 2-D polytope in counter-clockwise order, starting from the lex-smallest.
pub fn polygon_order(p: &RationalPolytope) -> Result<Vec<Point>> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    let mut vs: Vec<Point> = p.vertices().to_vec();
    if vs.len() < 3 {
        return Ok(vs);
    }
    vs.sort();
    let pivot = vs[0].clone();
    let mut rest: Vec<Point> = vs[1..].to_vec();
    // every other vertex lies in the closed half-plane x >= pivot_x, so a cross-product
    // comparison is a total order by angle
    rest.sort_by(|a, b| {
        let ax = &a[0] - &pivot[0];
        let ay = &a[1] - &pivot[1];
        let bx = &b[0] - &pivot[0];
        let by = &b[1] - &pivot[1];
        let cross = &ax * &by - &ay * &bx;
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            (&ax * &ax + &ay * &ay).cmp(&(&bx * &bx + &by * &by))
        }
    });
    let mut out = vec![pivot];
    out.extend(rest);
    Ok(out)
}

fn points_attr(vs: &[Point]) -> String {
    vs.iter()
        .map(|v| format!("{},{}", display_12(&v[0]), display_12(&v[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

fn bounds(polys: &[(Rat, Vec<Point>)]) -> (f64, f64, f64, f64) {
    let mut lo = (0.0f64, 0.0f64);
    let mut hi = (1.0f64, 1.0f64);
    for (_, vs) in polys {
        for v in vs {
            let (x, y) = (v[0].to_f64(), v[1].to_f64());
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
    }
    (lo.0, lo.1, hi.0, hi.1)
}

fn shape(vs: &[Point], extra: &str) -> String {
    match vs.len() {
        0 => String::new(),
        1 | 2 => format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.02\"{extra}/>",
            points_attr(vs)
        ),
        _ => format!(
            "<polygon points=\"{}\" fill=\"#9ecae1\" stroke=\"black\" stroke-width=\"0.02\"{extra}/>",
            points_attr(vs)
        ),
    }
}

/// Panels laid side by side; the y axis points up inside each panel.
fn render(panels: &[(Rat, Vec<Point>)], label: Option<&str>) -> String {
    let (x0, y0, x1, y1) = bounds(panels);
    let w = x1 - x0;
    let h = y1 - y0;
    let pad = 0.1 * w.max(h);
    let step = w + 2.0 * pad;
    let total_w = step * panels.len().max(1) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
        x0 - pad,
        -(y1 + pad),
        total_w,
        h + 2.0 * pad
    );
    for (k, (t, vs)) in panels.iter().enumerate() {
        let dx = step * k as f64;
        let extra = match label {
            Some(l) => format!(" data-{l}=\"{t}\""),
            None => String::new(),
        };
        let _ = writeln!(
            s,
            "  <g transform=\"translate({dx},0) scale(1,-1)\">{}</g>",
            shape(vs, &extra)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn polygon_svg(p: &RationalPolytope) -> Result<String> {
    let vs = polygon_order(p)?;
    Ok(render(&[(Rat::zero(), vs)], None))
}

/// Slices `nu_1 = t` of a 3-D body, one panel per `t`.
pub fn slices_svg(p: &RationalPolytope, ts: &[Rat]) -> Result<String> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: p.dim(),
        });
    }
    let mut panels = Vec::with_capacity(ts.len());
    for t in ts {
        let slice = p.slice(0, t)?;
        panels.push((t.clone(), polygon_order(&slice)?));
    }
    Ok(render(&panels, Some("t")))
}

/// Tilted body of a report: the polygon itself in dimension 2, quarter slices in dimension 3.
pub fn report_svg(report: &BodyReport) -> Result<String> {
    let body = report
        .tilted
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("report carries no body to draw".into()))?;
    match body.dim() {
        2 => polygon_svg(body),
        3 => {
            let ts: Vec<Rat> = (0..4).map(|k| &report.mu * rat(k, 4)).collect();
            slices_svg(body, &ts)
        }
        d => Err(Error::InvalidArgument(format!(
            "no SVG rendering in dimension {d}"
        ))),
    }
}

/// `index,t,width` rows with exact values.
pub fn widths_csv(fns: &[WidthFunction]) -> String {
    let mut s = String::from("index,t,width\n");
    for wf in fns {
        for (t, w) in &wf.samples {
            let _ = writeln!(s, "{},{},{}", wf.index, t, w);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| Rat::from(x)).collect()
    }

    #[test]
    fn ccw_order() {
        let p =
            RationalPolytope::hull(&[pt(&[0, 0]), pt(&[7, 0]), pt(&[3, 2]), pt(&[1, 1])]).unwrap();
        assert_eq!(
            polygon_order(&p).unwrap(),
            vec![pt(&[0, 0]), pt(&[7, 0]), pt(&[3, 2]), pt(&[1, 1])]
        );
        let svg = polygon_svg(&p).unwrap();
        assert!(svg.contains("points=\"0,0 7,0 3,2 1,1\""), "{svg}");
    }

    #[test]
    fn slices_of_simplex() {
        let p = RationalPolytope::simplex(&[Rat::one(), Rat::one(), Rat::one()]).unwrap();
        let svg = slices_svg(&p, &[Rat::zero(), rat(1, 2), Rat::one()]).unwrap();
        assert_eq!(svg.matches("<g ").count(), 3);
        assert!(svg.contains("points=\"0,0 0.5,0 0,0.5\""), "{svg}");
        assert!(svg.contains("data-t=\"1\""));
    }
}
