//! Cut system and cut-avoiding integration paths.

use super::{CurveError, CurveSpec, Tolerances};
use num_complex::Complex64;

/// A branch cut joining two branch points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub e1: Complex64,
    pub e2: Complex64,
}

impl Cut {
    pub fn midpoint(&self) -> Complex64 {
        0.5 * (self.e1 + self.e2)
    }

    pub fn half_width(&self) -> Complex64 {
        0.5 * (self.e2 - self.e1)
    }
}

fn lex_key(z: &Complex64) -> (f64, f64) {
    (z.re, z.im)
}

/// Pair the branch points into `n + 1` cuts: sort by real part with the
/// imaginary part as tie-break, pair consecutively. Degenerate geometries
/// (cuts approaching each other) are rejected.
pub fn build_homology(spec: &CurveSpec, tol: &Tolerances) -> Result<Vec<Cut>, CurveError> {
    let mut pts = spec.branch_points().to_vec();
    pts.sort_by(|a, b| lex_key(a).partial_cmp(&lex_key(b)).unwrap());
    let cuts: Vec<Cut> = pts
        .chunks(2)
        .map(|pair| Cut {
            e1: pair[0],
            e2: pair[1],
        })
        .collect();
    let margin = 0.25 * tol.path_margin_rel * spec.scale();
    for i in 0..cuts.len() {
        for j in (i + 1)..cuts.len() {
            let d = segment_distance(cuts[i].e1, cuts[i].e2, cuts[j].e1, cuts[j].e2);
            if d < margin {
                return Err(CurveError::CutsIntersect(format!(
                    "cuts {i} and {j} are {d:.3e} apart"
                )));
            }
        }
    }
    Ok(cuts)
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance between two closed segments.
pub fn segment_distance(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> f64 {
    if segments_intersect(a1, a2, b1, b2) {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

fn segments_intersect(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// A leg is usable when it does not properly cross the (slightly shrunk)
/// cut and keeps `margin` clearance except within `slack` of its own
/// endpoints, which may legitimately sit at a branch point or right next
/// to a cut.
fn leg_ok(a: Complex64, b: Complex64, cut: &Cut, margin: f64, slack: f64) -> bool {
    // shrink the cut where it touches a leg endpoint
    let pull = |e: Complex64, toward: Complex64| -> Complex64 {
        if (e - a).norm() < slack || (e - b).norm() < slack {
            e + (toward - e) * Complex64::new(1e-3, 0.0)
        } else {
            e
        }
    };
    let c1 = pull(cut.e1, cut.e2);
    let c2 = pull(cut.e2, cut.e1);
    if segments_intersect(a, b, c1, c2) {
        return false;
    }
    if margin <= 0.0 {
        return true;
    }
    let samples = 64;
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let p = a + (b - a) * Complex64::new(t, 0.0);
        if (p - a).norm() < slack || (p - b).norm() < slack {
            continue;
        }
        if point_segment_distance(p, c1, c2) < margin {
            return false;
        }
    }
    true
}

/// A polyline integration path in the λ-plane.
#[derive(Debug, Clone)]
pub struct PathPlan {
    pub waypoints: Vec<Complex64>,
}

impl PathPlan {
    pub fn legs(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Plan a path from `a` to `b` that does not cross any cut: try the
/// straight segment, then rectangular detours over and under the cut
/// system at increasing heights.
pub fn plan_path(
    a: Complex64,
    b: Complex64,
    cuts: &[Cut],
    spec: &CurveSpec,
    tol: &Tolerances,
) -> Result<PathPlan, CurveError> {
    let scale = spec.scale();
    let margin = tol.path_margin_rel * scale;
    let slack = 2.0 * margin;
    let clear = |p: Complex64, q: Complex64| -> bool {
        cuts.iter().all(|c| leg_ok(p, q, c, 0.5 * margin, slack))
    };
    if clear(a, b) {
        return Ok(PathPlan {
            waypoints: vec![a, b],
        });
    }
    let top = cuts
        .iter()
        .flat_map(|c| [c.e1.im, c.e2.im])
        .fold(f64::NEG_INFINITY, f64::max);
    let bottom = cuts
        .iter()
        .flat_map(|c| [c.e1.im, c.e2.im])
        .fold(f64::INFINITY, f64::min);
    for lift in [1.0, 2.0, 4.0] {
        for (base, dir) in [(top, 1.0), (bottom, -1.0)] {
            let h = base + dir * lift * (4.0 * margin + 0.25 * scale);
            let p1 = Complex64::new(a.re, h);
            let p2 = Complex64::new(b.re, h);
            let plan = PathPlan {
                waypoints: vec![a, p1, p2, b],
            };
            if plan
                .legs()
                .all(|(p, q)| clear(p, q))
            {
                return Ok(plan);
            }
        }
    }
    Err(CurveError::PathBlocked { from: a, to: b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pairing_is_consecutive() {
        let spec =
            CurveSpec::new(vec![c(1.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let cuts = build_homology(&spec, &Default::default()).unwrap();
        assert_eq!(cuts.len(), 2);
        assert_eq!(cuts[0].e1, c(-2.0, 0.0));
        assert_eq!(cuts[0].e2, c(-1.0, 0.0));
        assert_eq!(cuts[1].e1, c(1.0, 0.0));
        assert_eq!(cuts[1].e2, c(2.0, 0.0));
    }

    #[test]
    fn genus_two_has_three_cuts() {
        let spec = CurveSpec::new(vec![
            c(-3.0, 0.0),
            c(-2.0, 0.0),
            c(-0.5, 0.0),
            c(0.5, 0.0),
            c(2.0, 0.0),
            c(3.0, 0.0),
        ])
        .unwrap();
        let cuts = build_homology(&spec, &Default::default()).unwrap();
        assert_eq!(cuts.len(), 3);
    }

    #[test]
    fn straight_path_when_clear() {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let cuts = build_homology(&spec, &Default::default()).unwrap();
        let plan = plan_path(c(0.0, 0.5), c(0.0, 2.0), &cuts, &spec, &Default::default()).unwrap();
        assert_eq!(plan.waypoints.len(), 2);
    }

    #[test]
    fn detour_over_blocking_cut() {
        let spec =
            CurveSpec::new(vec![c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let cuts = build_homology(&spec, &Default::default()).unwrap();
        // straight from left of cut 1 to right of cut 2 crosses both
        let plan = plan_path(c(-3.0, 0.0), c(3.0, 0.0), &cuts, &spec, &Default::default()).unwrap();
        assert!(plan.waypoints.len() > 2);
    }

    #[test]
    fn degenerate_cuts_rejected() {
        // consecutive pairing puts the two middle points on different cuts;
        // here they nearly touch, which the margin check must refuse
        let spec = CurveSpec::new(vec![
            c(-2.0, 0.0),
            c(0.0, 3.0),
            c(0.001, 2.999),
            c(2.0, 0.0),
        ])
        .unwrap();
        assert!(build_homology(&spec, &Default::default()).is_err());
    }
}
