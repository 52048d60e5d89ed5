//! SVG figures of the inputs (black) and the real tangent circles (red).

use std::fmt::Write;

use apollonius_core::solver::{ApolloniusSolution, Configuration, InputObject};
use apollonius_core::Error;

use crate::CliError;

/// (cx, cy, r) in the plane.
pub type Disk = (f64, f64, f64);

fn approx(x: &apollonius_core::FieldElement) -> Result<f64, CliError> {
    x.approx().map_err(CliError::from)
}

/// Distinct tangent circles that are real under the standard embedding.
pub fn real_circles(sols: &[ApolloniusSolution]) -> Result<Vec<Disk>, CliError> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for s in sols.iter().filter(|s| s.is_real()) {
        let c = s.circle.descended();
        if seen.contains(&c) {
            continue;
        }
        seen.push(c);
        out.push((approx(&s.alpha)?, approx(&s.beta)?, approx(&s.rho)?.abs()));
    }
    Ok(out)
}

fn input_disks(cfg: &Configuration) -> Result<Vec<(Disk, bool)>, CliError> {
    cfg.objects
        .iter()
        .map(|o| {
            let (a, b) = o.center();
            let r = match o {
                InputObject::Point(_) => 0.0,
                InputObject::Circle(_) => approx(&o.r2())?.sqrt(),
            };
            Ok(((approx(&a)?, approx(&b)?, r), o.is_point()))
        })
        .collect()
}

/// Six decimals, with −0 printed as 0.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000000".into()
    } else {
        s
    }
}

pub fn svg(cfg: &Configuration, sols: &[ApolloniusSolution], width: u32) -> Result<String, CliError> {
    if cfg.field().embedding().is_none() {
        return Err(Error::NoEmbedding.into());
    }
    let inputs = input_disks(cfg)?;
    let reds = real_circles(sols)?;
    let all: Vec<Disk> = inputs.iter().map(|(d, _)| *d).chain(reds.iter().copied()).collect();
    let xmin = all.iter().map(|d| d.0 - d.2).fold(f64::INFINITY, f64::min);
    let xmax = all.iter().map(|d| d.0 + d.2).fold(f64::NEG_INFINITY, f64::max);
    // y is flipped so that the figure reads with the usual orientation
    let ymin = all.iter().map(|d| -d.1 - d.2).fold(f64::INFINITY, f64::min);
    let ymax = all.iter().map(|d| -d.1 + d.2).fold(f64::NEG_INFINITY, f64::max);
    let (w, h) = ((xmax - xmin).max(1e-9), (ymax - ymin).max(1e-9));
    let (mx, my) = (0.1 * w, 0.1 * h);
    let (vw, vh) = (w + 2.0 * mx, h + 2.0 * my);
    let height = ((width as f64) * vh / vw).round().max(1.0) as u32;
    let stroke = vw.max(vh) / 300.0;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="{} {} {} {}">"#,
        num(xmin - mx),
        num(ymin - my),
        num(vw),
        num(vh)
    )
    .unwrap();
    writeln!(out, r#"<g fill="none" stroke-width="{}">"#, num(stroke)).unwrap();
    for ((x, y, r), is_point) in &inputs {
        if *is_point {
            writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black" stroke="none"/>"#, num(*x), num(-y), num(2.0 * stroke)).unwrap();
        } else {
            writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" stroke="black"/>"#, num(*x), num(-y), num(*r)).unwrap();
        }
    }
    for (x, y, r) in &reds {
        writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" stroke="red"/>"#, num(*x), num(-y), num(*r)).unwrap();
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use apollonius_core::solver::{choose_radii, solve_all};
    use apollonius_core::FieldDescriptor;

    #[test]
    fn figure_with_four_real_circles() {
        let q = FieldDescriptor::rationals();
        let cfg = Configuration::circles(&q, [("0", "1/8", "49/64"), ("5/4", "0", "1"), ("1", "2", "1/4")]).unwrap();
        let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
        let a = svg(&cfg, &sols, 400).unwrap();
        assert_eq!(a, svg(&cfg, &sols, 400).unwrap());
        assert_eq!(a.matches("stroke=\"black\"").count(), 3);
        assert_eq!(a.matches("stroke=\"red\"").count(), 4);
        assert!(a.contains(r#"cx="0.000000" cy="-0.125000" r="0.875000""#));
    }

    #[test]
    fn negative_zero_prints_plainly() {
        assert_eq!(num(-0.0000001), "0.000000");
        assert_eq!(num(-1.5), "-1.500000");
    }
}
