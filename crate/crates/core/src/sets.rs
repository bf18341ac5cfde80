//! Compact sets `K` in the punctured plane with connected complement, built
//! parametrically, and their deterministic discretizations.
//!
//! Point layouts are fixed functions of the shape and the density, so a run
//! repeated on the same inputs sees bit-identical grids.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pairing;

/// Relative slack used by the membership predicate for points placed on the
/// boundary by floating-point arithmetic.
const MEMBERSHIP_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum CompactSetSpec {
    /// Closed segment `[z1, z2]`, which must avoid the origin.
    Segment { z1: Complex64, z2: Complex64 },
    /// Closed disk; requires `|center| > radius > 0`.
    Disk { center: Complex64, radius: f64 },
    /// `{r_in <= |z| <= r_out}` minus the open wedge of half-width
    /// `gap_half_width` centred on the direction `gap_angle + pi`, i.e. the
    /// points where the circular distance between `arg(z e^{-i gap_angle})`
    /// and `pi` is below `gap_half_width`.
    SlitAnnulus {
        r_in: f64,
        r_out: f64,
        gap_angle: f64,
        gap_half_width: f64,
    },
    /// Filled simple polygon, vertices in order (closing edge implied); the
    /// origin must lie strictly outside.
    Polygon { vertices: Vec<Complex64> },
}

impl fmt::Display for CompactSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactSetSpec::Segment { z1, z2 } => write!(f, "segment({z1}, {z2})"),
            CompactSetSpec::Disk { center, radius } => write!(f, "disk({center}, {radius})"),
            CompactSetSpec::SlitAnnulus { r_in, r_out, gap_angle, gap_half_width } => {
                write!(f, "slitAnnulus({r_in}, {r_out}, {gap_angle}, {gap_half_width})")
            }
            CompactSetSpec::Polygon { vertices } => write!(f, "polygon({} vertices)", vertices.len()),
        }
    }
}

/// A discretized compact set.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    /// Fitting nodes.
    pub samples: Vec<Complex64>,
    /// Error-measurement nodes: the same layout at twice the density.
    pub validation: Vec<Complex64>,
    pub min_modulus: f64,
    pub max_modulus: f64,
}

impl CompactSetSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSet(format!("{self}: {msg}")));
        match self {
            CompactSetSpec::Segment { z1, z2 } => {
                if !(finite(*z1) && finite(*z2)) {
                    return bad("non-finite endpoint".into());
                }
                if distance_to_segment(Complex64::new(0.0, 0.0), *z1, *z2) <= 0.0 {
                    return bad("segment passes through 0".into());
                }
            }
            CompactSetSpec::Disk { center, radius } => {
                if !(finite(*center) && radius.is_finite() && *radius > 0.0) {
                    return bad("radius must be positive and finite".into());
                }
                if center.norm() <= *radius {
                    return bad(format!("|center| = {} must exceed the radius", center.norm()));
                }
            }
            CompactSetSpec::SlitAnnulus { r_in, r_out, gap_angle, gap_half_width } => {
                if !(r_in.is_finite() && r_out.is_finite() && gap_angle.is_finite()) {
                    return bad("non-finite parameter".into());
                }
                if !(*r_in > 0.0 && r_in <= r_out) {
                    return bad("requires 0 < r_in <= r_out".into());
                }
                if !(*gap_half_width > 0.0 && *gap_half_width < PI) {
                    return bad("requires 0 < gap_half_width < pi".into());
                }
            }
            CompactSetSpec::Polygon { vertices } => {
                if vertices.len() < 3 || !vertices.iter().all(|v| finite(*v)) {
                    return bad("needs at least three finite vertices".into());
                }
                if signed_area(vertices).abs() <= 0.0 {
                    return bad("polygon is degenerate".into());
                }
                if !is_simple(vertices) {
                    return bad("polygon edges intersect".into());
                }
                let origin = Complex64::new(0.0, 0.0);
                if point_in_polygon(origin, vertices) || boundary_distance(origin, vertices) <= 0.0 {
                    return bad("0 is not strictly outside the polygon".into());
                }
            }
        }
        Ok(())
    }

    /// Membership in `K`, with a relative slack of `1e-12` for boundary points.
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            CompactSetSpec::Segment { z1, z2 } => {
                let scale = z1.norm().max(z2.norm()).max(1.0);
                distance_to_segment(z, *z1, *z2) <= MEMBERSHIP_SLACK * scale
            }
            CompactSetSpec::Disk { center, radius } => (z - center).norm() <= radius * (1.0 + MEMBERSHIP_SLACK),
            CompactSetSpec::SlitAnnulus { r_in, r_out, gap_angle, gap_half_width } => {
                let r = z.norm();
                if r < r_in * (1.0 - MEMBERSHIP_SLACK) || r > r_out * (1.0 + MEMBERSHIP_SLACK) {
                    return false;
                }
                // circular distance between arg(z e^{-i gap}) and pi
                let rel = (z * Complex64::from_polar(1.0, -gap_angle)).arg();
                PI - rel.abs() >= gap_half_width - MEMBERSHIP_SLACK
            }
            CompactSetSpec::Polygon { vertices } => {
                let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
                point_in_polygon(z, vertices) || boundary_distance(z, vertices) <= MEMBERSHIP_SLACK * scale
            }
        }
    }

    /// Deterministic point layout at the given density.
    fn layout(&self, density: f64) -> Vec<Complex64> {
        match self {
            CompactSetSpec::Segment { z1, z2 } => {
                let n = intervals(density * (z2 - z1).norm());
                if n == 0 {
                    return vec![*z1];
                }
                (0..=n).map(|k| z1 + (z2 - z1) * (k as f64 / n as f64)).collect()
            }
            CompactSetSpec::Disk { center, radius } => {
                let nb = intervals(density * 2.0 * PI * radius).max(3);
                let mut pts: Vec<Complex64> = (0..nb)
                    .map(|k| center + Complex64::from_polar(*radius, 2.0 * PI * k as f64 / nb as f64))
                    .collect();
                let h = 1.0 / density;
                let m = (radius / h).floor() as i64;
                for i in -m..=m {
                    for k in -m..=m {
                        let off = Complex64::new(i as f64 * h, k as f64 * h);
                        if off.norm() < *radius {
                            pts.push(center + off);
                        }
                    }
                }
                pts
            }
            CompactSetSpec::SlitAnnulus { r_in, r_out, gap_angle, gap_half_width } => {
                let nr = intervals(density * (r_out - r_in));
                let span = 2.0 * PI - 2.0 * gap_half_width;
                let na = intervals(density * r_in * span);
                let start = gap_angle - PI + gap_half_width;
                let radii: Vec<f64> = if nr == 0 {
                    vec![*r_in]
                } else {
                    (0..=nr).map(|i| r_in + (r_out - r_in) * (i as f64 / nr as f64)).collect()
                };
                let angles: Vec<f64> = if na == 0 {
                    vec![start]
                } else {
                    (0..=na).map(|l| start + span * (l as f64 / na as f64)).collect()
                };
                radii
                    .iter()
                    .flat_map(|&r| angles.iter().map(move |&t| Complex64::from_polar(r, t)))
                    .collect()
            }
            CompactSetSpec::Polygon { vertices } => {
                let mut pts = Vec::new();
                for (i, &a) in vertices.iter().enumerate() {
                    let b = vertices[(i + 1) % vertices.len()];
                    let n = intervals(density * (b - a).norm()).max(1);
                    pts.extend((0..n).map(|k| a + (b - a) * (k as f64 / n as f64)));
                }
                // interior grid anchored at the origin so that doubling the density nests grids
                let h = 1.0 / density;
                let (lo, hi) = bounding_box(vertices);
                let (i0, i1) = ((lo.re / h).ceil() as i64, (hi.re / h).floor() as i64);
                let (k0, k1) = ((lo.im / h).ceil() as i64, (hi.im / h).floor() as i64);
                for i in i0..=i1 {
                    for k in k0..=k1 {
                        let z = Complex64::new(i as f64 * h, k as f64 * h);
                        if point_in_polygon(z, vertices) && boundary_distance(z, vertices) > 0.0 {
                            pts.push(z);
                        }
                    }
                }
                pts
            }
        }
    }
}

/// Discretizes `spec`: samples at `density`, validation at `2 * density`.
pub fn build_cloud(spec: &CompactSetSpec, density: f64) -> Result<PointCloud> {
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::Precondition(format!("density must be positive, got {density}")));
    }
    spec.validate()?;
    let samples = spec.layout(density);
    let validation = spec.layout(2.0 * density);
    let (mut min_modulus, mut max_modulus) = (f64::INFINITY, 0.0f64);
    for z in samples.iter().chain(&validation) {
        min_modulus = min_modulus.min(z.norm());
        max_modulus = max_modulus.max(z.norm());
    }
    if !(min_modulus > 0.0) {
        return Err(Error::InvalidSet(format!("{spec}: discretization touches 0")));
    }
    Ok(PointCloud { samples, validation, min_modulus, max_modulus })
}

/// Surrogate exhaustion member `K_m`, `m >= 1`.
///
/// `m - 1` is Cantor-unpaired into `(r - 1, g)`; the member is
/// `slitAnnulus(1/(r+1), r+1, 2 pi g/(g+1) - pi, 1/(g+2))`. Radii grow with `r`
/// and the gap directions sweep a dense set of angles with shrinking widths.
pub fn exhaustion_member(m: u64) -> Result<CompactSetSpec> {
    if m < 1 {
        return Err(Error::Precondition("exhaustion index starts at 1".into()));
    }
    let (r_minus_one, g) = pairing::unpair(m - 1);
    let r = (r_minus_one + 1) as f64;
    let g = g as f64;
    Ok(CompactSetSpec::SlitAnnulus {
        r_in: 1.0 / (r + 1.0),
        r_out: r + 1.0,
        gap_angle: 2.0 * PI * g / (g + 1.0) - PI,
        gap_half_width: 1.0 / (g + 2.0),
    })
}

/// `max_i |values[i] - reference[i]|`; 0 for empty input.
pub fn sup_gap(values: &[Complex64], reference: &[Complex64]) -> Result<f64> {
    sup_gap_with(values, reference, Exec::default())
}

pub fn sup_gap_with(values: &[Complex64], reference: &[Complex64], exec: Exec) -> Result<f64> {
    if values.len() != reference.len() {
        return Err(Error::Precondition(format!(
            "sup_gap length mismatch: {} vs {}",
            values.len(),
            reference.len()
        )));
    }
    Ok(exec.max_range(values.len(), |i| (values[i] - reference[i]).norm()))
}

fn intervals(x: f64) -> usize {
    x.ceil().max(0.0) as usize
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    (p - (a + d * t.clamp(0.0, 1.0))).norm()
}

fn signed_area(v: &[Complex64]) -> f64 {
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
        / 2.0
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Complex64, b: Complex64, p: Complex64, d: f64| d == 0.0 && distance_to_segment(p, a, b) == 0.0;
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn is_simple(v: &[Complex64]) -> bool {
    let n = v.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return false;
            }
        }
    }
    // adjacent edges may only share their common vertex
    (0..n).all(|i| v[i] != v[(i + 1) % n])
}

/// Crossing-number test; boundary points may land on either side.
fn point_in_polygon(p: Complex64, v: &[Complex64]) -> bool {
    let mut inside = false;
    let n = v.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = (b.re - a.re) * (p.im - a.im) / (b.im - a.im) + a.re;
            if p.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn boundary_distance(p: Complex64, v: &[Complex64]) -> f64 {
    (0..v.len())
        .map(|i| distance_to_segment(p, v[i], v[(i + 1) % v.len()]))
        .fold(f64::INFINITY, f64::min)
}

fn bounding_box(v: &[Complex64]) -> (Complex64, Complex64) {
    let mut lo = v[0];
    let mut hi = v[0];
    for z in v {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seg(a: f64, b: f64) -> CompactSetSpec {
        CompactSetSpec::Segment { z1: c(a, 0.0), z2: c(b, 0.0) }
    }

    #[test]
    fn segment_layout_example() {
        let cloud = build_cloud(&seg(1.0, 2.0), 4.0).unwrap();
        assert_eq!(cloud.samples, vec![c(1.0, 0.0), c(1.25, 0.0), c(1.5, 0.0), c(1.75, 0.0), c(2.0, 0.0)]);
        assert_eq!(cloud.min_modulus, 1.0);
        assert_eq!(cloud.max_modulus, 2.0);
        assert_eq!(cloud.validation.len(), 9);
    }

    #[test]
    fn disk_around_origin_is_rejected() {
        let d = CompactSetSpec::Disk { center: c(0.5, 0.0), radius: 1.0 };
        assert!(matches!(build_cloud(&d, 4.0), Err(Error::InvalidSet(_))));
    }

    #[test]
    fn slit_annulus_moduli() {
        let s = CompactSetSpec::SlitAnnulus { r_in: 0.5, r_out: 2.0, gap_angle: PI, gap_half_width: 0.5 };
        let cloud = build_cloud(&s, 8.0).unwrap();
        assert!((cloud.min_modulus - 0.5).abs() < 1e-15);
        assert!((cloud.max_modulus - 2.0).abs() < 1e-15);
        // gap_angle = pi puts the wedge around the positive real axis
        assert!(!s.contains(c(1.0, 0.0)));
        assert!(s.contains(c(-1.0, 0.0)));
        assert!(!s.contains(Complex64::from_polar(1.0, 0.49)));
        assert!(s.contains(Complex64::from_polar(1.0, 0.51)));
        assert!(s.contains(Complex64::from_polar(1.0, -0.51)));
    }

    #[test]
    fn invalid_parameters() {
        assert!(seg(-1.0, 1.0).validate().is_err());
        assert!(seg(0.0, 1.0).validate().is_err());
        assert!(CompactSetSpec::SlitAnnulus { r_in: 0.0, r_out: 1.0, gap_angle: 0.0, gap_half_width: 0.5 }
            .validate()
            .is_err());
        assert!(CompactSetSpec::SlitAnnulus { r_in: 0.5, r_out: 1.0, gap_angle: 0.0, gap_half_width: PI }
            .validate()
            .is_err());
        let around_origin = CompactSetSpec::Polygon { vertices: vec![c(-1.0, -1.0), c(1.0, -1.0), c(0.0, 1.0)] };
        assert!(around_origin.validate().is_err());
        let bowtie = CompactSetSpec::Polygon { vertices: vec![c(1.0, 1.0), c(2.0, 2.0), c(2.0, 1.0), c(1.0, 2.0)] };
        assert!(bowtie.validate().is_err());
        assert!(build_cloud(&seg(1.0, 2.0), 0.0).is_err());
    }

    #[test]
    fn every_point_is_a_member() {
        let specs = [
            seg(1.0, 2.0),
            CompactSetSpec::Segment { z1: c(0.3, -1.0), z2: c(-2.0, 0.7) },
            CompactSetSpec::Disk { center: c(-1.5, 0.5), radius: 0.75 },
            CompactSetSpec::SlitAnnulus { r_in: 0.5, r_out: 2.0, gap_angle: PI, gap_half_width: 0.5 },
            exhaustion_member(7).unwrap(),
            CompactSetSpec::Polygon { vertices: vec![c(1.0, 0.0), c(3.0, 0.5), c(2.5, 2.0), c(1.2, 1.1)] },
        ];
        for spec in &specs {
            for density in [1.0, 3.5, 8.0] {
                let cloud = build_cloud(spec, density).unwrap();
                assert!(cloud.min_modulus > 0.0);
                for z in cloud.samples.iter().chain(&cloud.validation) {
                    assert!(spec.contains(*z), "{spec}: {z} not a member");
                }
                assert!(cloud.validation.len() > cloud.samples.len());
            }
        }
    }

    #[test]
    fn exhaustion_first_member() {
        assert_eq!(
            exhaustion_member(1).unwrap(),
            CompactSetSpec::SlitAnnulus { r_in: 0.5, r_out: 2.0, gap_angle: -PI, gap_half_width: 0.5 }
        );
        assert!(exhaustion_member(0).is_err());
    }

    #[test]
    fn exhaustion_is_increasing_in_radius() {
        // m - 1 = pair(r - 1, g): for g = 0 these are m = 1, 2, 4 (r = 1, 2, 3)
        let radii = |m| match exhaustion_member(m).unwrap() {
            CompactSetSpec::SlitAnnulus { r_in, r_out, gap_half_width, .. } => (r_in, r_out, gap_half_width),
            _ => unreachable!(),
        };
        let (a, b, c) = (radii(1), radii(2), radii(4));
        assert_eq!((a.0, a.1), (0.5, 2.0));
        assert_eq!((b.0, b.1), (1.0 / 3.0, 3.0));
        assert_eq!((c.0, c.1), (0.25, 4.0));
        assert!(b.0 < a.0 && a.1 < b.1 && c.0 < b.0 && b.1 < c.1);
        assert_eq!(a.2, b.2);
    }

    #[test]
    fn exhaustion_is_total() {
        for m in (1..=1_000_000u64).step_by(997).chain([1_000_000]) {
            let s = exhaustion_member(m).unwrap();
            s.validate().unwrap();
        }
    }

    #[test]
    fn sup_gap_examples() {
        assert_eq!(sup_gap(&[c(1.0, 0.0), c(2.0, 0.0)], &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap(), 0.0);
        let g = sup_gap(&[c(1.0, 1.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((g - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sup_gap(&[], &[]).unwrap(), 0.0);
        assert!(sup_gap(&[c(1.0, 0.0)], &[]).is_err());
    }

    #[test]
    fn doubling_density_nests_grids() {
        // integral density * length keeps the segment grids nested; interior grids always are
        let s = seg(1.0, 2.0);
        let d = build_cloud(&s, 4.0).unwrap();
        let dd = build_cloud(&s, 8.0).unwrap();
        assert!(d.validation.iter().all(|z| dd.validation.contains(z)));
        assert!(d.samples.iter().all(|z| d.validation.contains(z)));
    }
}
