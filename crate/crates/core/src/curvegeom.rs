//! Rationality of exceptional components.
//!
//! A component missing one variable is a cone over a curve in a weighted
//! projective plane, so it is rational iff the curve has genus 0. The
//! genus is read off the Newton polygon of an affine chart (interior
//! lattice points), which is valid when the chart equation is
//! non-degenerate for its polygon; that is re-checked every time.

use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::blowup::Weight;
use crate::newton::{check_face, NondegVerdict};
use crate::normalform::SingularityType;
use crate::polyring::{NVARS, VAR_NAMES};
use crate::Poly;

pub type Point2 = [i64; 2];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("no base variable of weight 1 among {0:?}; the chart is out of scope")]
    NoUnitWeight([u64; 3]),
}

fn ser_var<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_char(VAR_NAMES[*v])
}

fn ser_vars<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&i| VAR_NAMES[i]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeStructure {
    #[serde(serialize_with = "ser_var")]
    pub missing_variable: usize,
    #[serde(serialize_with = "ser_vars")]
    pub base_variables: [usize; 3],
    pub base_weights: [u64; 3],
    pub base_equation: Poly,
}

/// `None` when every variable occurs; otherwise the cone with vertex at
/// the absent variable of largest weight (earliest on ties).
pub fn detect_cone(component: &Poly, w: &Weight) -> Option<ConeStructure> {
    let ws = w.get();
    let missing = (0..NVARS)
        .filter(|&v| component.degree_in(v) == 0)
        .max_by(|&a, &b| ws[a].cmp(&ws[b]).then(b.cmp(&a)))?;
    let mut base = [0usize; 3];
    for (slot, v) in (0..NVARS).filter(|&v| v != missing).enumerate() {
        base[slot] = v;
    }
    Some(ConeStructure {
        missing_variable: missing,
        base_variables: base,
        base_weights: base.map(|v| ws[v]),
        base_equation: component.clone(),
    })
}

/// Affine chart of the base curve: a weight-1 variable set to 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chart {
    #[serde(serialize_with = "ser_var")]
    pub specialized: usize,
    /// the chart coordinates `(u, v)`; polygon points are `(deg_v, deg_u)`
    #[serde(serialize_with = "ser_vars")]
    pub coordinates: [usize; 2],
    pub polynomial: Poly,
}

pub fn chart_polynomial(c: &ConeStructure) -> Result<Chart, CurveError> {
    let slot = (0..3).rev().find(|&i| c.base_weights[i] == 1).ok_or(CurveError::NoUnitWeight(c.base_weights))?;
    let specialized = c.base_variables[slot];
    let others: Vec<usize> = c.base_variables.iter().copied().filter(|&v| v != specialized).collect();
    let polynomial = c.base_equation.specialize(specialized, &One::one()).primitive();
    Ok(Chart { specialized, coordinates: [others[0], others[1]], polynomial })
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolygon {
    /// convex position, counterclockwise
    pub vertices: Vec<Point2>,
    pub interior_points: Vec<Point2>,
    pub boundary_points: u64,
    pub doubled_area: u64,
}

impl LatticePolygon {
    /// Convex hull of a point set (monotone chain).
    pub fn hull(points: &[Point2]) -> Self {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Self::degenerate(pts);
        }
        let mut lower: Vec<Point2> = vec![];
        for p in &pts {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(*p);
        }
        let mut upper: Vec<Point2> = vec![];
        for p in pts.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(*p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            let (lo, hi) = (pts[0], pts[pts.len() - 1]);
            return Self::degenerate(vec![lo, hi]);
        }
        let verts = lower;
        let n = verts.len();
        let doubled_area = (0..n).map(|i| cross(&[0, 0], &verts[i], &verts[(i + 1) % n])).sum::<i64>() as u64;
        let boundary_points = (0..n)
            .map(|i| {
                let (a, b) = (verts[i], verts[(i + 1) % n]);
                (b[0] - a[0]).abs().gcd(&(b[1] - a[1]).abs()) as u64
            })
            .sum();
        let (x0, x1) = (verts.iter().map(|p| p[0]).min().unwrap(), verts.iter().map(|p| p[0]).max().unwrap());
        let (y0, y1) = (verts.iter().map(|p| p[1]).min().unwrap(), verts.iter().map(|p| p[1]).max().unwrap());
        let mut interior_points = vec![];
        for x in x0..=x1 {
            for y in y0..=y1 {
                let q = [x, y];
                if (0..n).all(|i| cross(&verts[i], &verts[(i + 1) % n], &q) > 0) {
                    interior_points.push(q);
                }
            }
        }
        LatticePolygon { vertices: verts, interior_points, boundary_points, doubled_area }
    }

    fn degenerate(pts: Vec<Point2>) -> Self {
        let boundary_points = match pts.as_slice() {
            [] => 0,
            [_] => 1,
            [a, b, ..] => (b[0] - a[0]).abs().gcd(&(b[1] - a[1]).abs()) as u64 + 1,
        };
        LatticePolygon { vertices: pts, interior_points: vec![], boundary_points, doubled_area: 0 }
    }

    /// `2I = 2A - B + 2` for genuine polygons.
    pub fn pick_consistent(&self) -> bool {
        if self.doubled_area == 0 {
            return self.interior_points.is_empty();
        }
        2 * self.interior_points.len() as i64 == self.doubled_area as i64 - self.boundary_points as i64 + 2
    }

    /// Edges as vertex pairs (counterclockwise).
    pub fn edges(&self) -> Vec<(Point2, Point2)> {
        let n = self.vertices.len();
        if n < 3 {
            return vec![];
        }
        (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect()
    }
}

/// Newton polygon of `g` in the coordinates `(u, v)`, as points `(deg_v, deg_u)`.
pub fn polygon_in(g: &Poly, u: usize, v: usize) -> LatticePolygon {
    let pts: Vec<Point2> = g.support().iter().map(|e| [e.get(v) as i64, e.get(u) as i64]).collect();
    LatticePolygon::hull(&pts)
}

/// The two variables of a plane-curve equation (padded in order).
fn plane_variables(g: &Poly) -> (usize, usize) {
    let mut vs = g.variables();
    for v in 0..NVARS {
        if vs.len() >= 2 {
            break;
        }
        if !vs.contains(&v) {
            vs.push(v);
        }
    }
    vs.sort();
    (vs[0], vs[1])
}

/// Genus of a curve non-degenerate for its Newton polygon.
pub fn polygon_genus(g2: &Poly) -> (u32, LatticePolygon) {
    let (u, v) = plane_variables(g2);
    let poly = polygon_in(g2, u, v);
    (poly.interior_points.len() as u32, poly)
}

/// Interior points collinear (always true with at most two of them).
pub fn is_hyperelliptic(p: &LatticePolygon) -> bool {
    let pts = &p.interior_points;
    if pts.len() <= 2 {
        return true;
    }
    pts.iter().all(|q| cross(&pts[0], &pts[1], q) == 0)
}

/// Non-degeneracy of a plane curve for every face of its polygon.
pub fn chart_nondegeneracy(g2: &Poly, u: usize, v: usize, seed: u64) -> (NondegVerdict, String) {
    let poly = polygon_in(g2, u, v);
    let mut verdicts = vec![check_face(g2, seed)];
    for (i, (a, b)) in poly.edges().iter().enumerate() {
        let on_edge = g2.filter(|e| cross(a, b, &[e.get(v) as i64, e.get(u) as i64]) == 0);
        verdicts.push(check_face(&on_edge, seed.wrapping_add(1 + i as u64)));
    }
    let worst = NondegVerdict::worst(verdicts.iter().map(|(v, _)| v));
    let reason = verdicts
        .iter()
        .find(|(v, _)| *v == worst)
        .map(|(_, r)| r.clone())
        .unwrap_or_default();
    (worst, reason)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationality {
    Rational,
    NonRational,
    RationalByPlt,
    Undecided,
}

impl std::fmt::Display for Rationality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rationality::Rational => "rational",
            Rationality::NonRational => "non_rational",
            Rationality::RationalByPlt => "rational_by_plt",
            Rationality::Undecided => "undecided",
        })
    }
}

/// Weights whose blowup is plt for the type (exceptional divisor rational).
pub fn is_plt_weight(kind: SingularityType, w: &Weight) -> bool {
    let g = w.get();
    match kind {
        SingularityType::CD(n) => {
            let k = g[0];
            k >= 2 && k < n as u64 && g == [k, k - 1, 2, 1]
        }
        SingularityType::CE6 => g == [6, 4, 3, 1],
        SingularityType::CE8 => g == [15, 10, 6, 1],
        _ => false,
    }
}

pub struct RationalityInput<'a> {
    pub face_dimension: usize,
    pub component: &'a Poly,
    pub weight: &'a Weight,
    pub kind: SingularityType,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalityDecision {
    pub verdict: Rationality,
    pub rule: String,
    pub cone: Option<ConeStructure>,
    pub chart: Option<Chart>,
    pub chart_nondegeneracy: Option<NondegVerdict>,
    pub genus: Option<u32>,
    pub polygon: Option<LatticePolygon>,
    pub hyperelliptic: Option<bool>,
    /// hyperelliptic by the genus <= 1 convention
    pub hyperelliptic_by_convention: bool,
    pub warnings: Vec<String>,
}

impl RationalityDecision {
    fn bare(verdict: Rationality, rule: impl Into<String>) -> Self {
        RationalityDecision {
            verdict,
            rule: rule.into(),
            cone: None,
            chart: None,
            chart_nondegeneracy: None,
            genus: None,
            polygon: None,
            hyperelliptic: None,
            hyperelliptic_by_convention: false,
            warnings: vec![],
        }
    }
}

/// The rule cascade: small face, linear variable, plt table, cone genus.
pub fn classify_rationality(input: &RationalityInput<'_>) -> RationalityDecision {
    let g = input.component;
    if input.face_dimension <= 1 {
        return RationalityDecision::bare(Rationality::Rational, format!("face of dimension {}", input.face_dimension));
    }
    if let Some(v) = g.variables().into_iter().find(|&v| g.degree_in(v) == 1) {
        return RationalityDecision::bare(Rationality::Rational, format!("linear in {}", VAR_NAMES[v]));
    }
    if is_plt_weight(input.kind, input.weight) {
        return RationalityDecision::bare(Rationality::RationalByPlt, format!("plt weight {} for {}", input.weight, input.kind));
    }
    let mut out = RationalityDecision::bare(Rationality::Undecided, "no rule applies");
    if let Some(cone) = detect_cone(g, input.weight) {
        out.cone = Some(cone.clone());
        match chart_polynomial(&cone) {
            Err(e) => out.warnings.push(e.to_string()),
            Ok(chart) => {
                let [u, v] = chart.coordinates;
                let (nd, why) = chart_nondegeneracy(&chart.polynomial, u, v, input.seed);
                let poly = polygon_in(&chart.polynomial, u, v);
                let genus = poly.interior_points.len() as u32;
                out.genus = Some(genus);
                out.hyperelliptic = Some(is_hyperelliptic(&poly));
                out.hyperelliptic_by_convention = genus <= 1;
                out.polygon = Some(poly);
                out.chart = Some(chart);
                if nd.is_degenerate() {
                    out.warnings.push(format!("chart equation degenerate ({why}); genus count not valid"));
                    out.rule = "cone over a degenerate chart".into();
                } else if genus == 0 {
                    out.verdict = Rationality::Rational;
                    out.rule = "cone over a rational curve".into();
                } else {
                    out.verdict = Rationality::NonRational;
                    out.rule = format!("cone over a curve of genus {genus}");
                }
                out.chart_nondegeneracy = Some(nd);
                if out.verdict != Rationality::Undecided {
                    return out;
                }
            }
        }
    }
    if matches!(input.kind, SingularityType::CA(_)) {
        out.verdict = Rationality::Rational;
        out.rule = "type cA".into();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn p(s: &str) -> Poly {
        parse_polynomial(s).unwrap()
    }

    fn w(a: [u64; 4]) -> Weight {
        Weight::new(a).unwrap()
    }

    #[test]
    fn cones() {
        let c = detect_cone(&p("y^3 + z^5 + t^15"), &w([8, 5, 3, 1])).unwrap();
        assert_eq!(c.missing_variable, 0);
        assert_eq!(c.base_weights, [5, 3, 1]);
        let c = detect_cone(&p("y^2*z + z^3 + t^3"), &w([2, 1, 1, 1])).unwrap();
        assert_eq!(c.base_weights, [1, 1, 1]);
        assert!(detect_cone(&p("x^2 + y^2 + z^2 + t^2"), &w([1, 1, 1, 1])).is_none());
        // two absent variables: the heavier one is the vertex
        let c = detect_cone(&p("z^2 + t^4"), &w([3, 5, 2, 1])).unwrap();
        assert_eq!(c.missing_variable, 1);
    }

    #[test]
    fn charts() {
        let chart = |s: &str, wt| chart_polynomial(&detect_cone(&p(s), &w(wt)).unwrap()).unwrap().polynomial;
        assert_eq!(chart("y^3 + y*z^3 + t^9", [5, 3, 2, 1]), p("y^3 + y*z^3 + 1"));
        assert_eq!(chart("y^3 + z^5 + t^15", [8, 5, 3, 1]), p("y^3 + z^5 + 1"));
        assert_eq!(chart("y^2*z + z^3 + t^3", [2, 1, 1, 1]), p("y^2*z + z^3 + 1"));
        let c = detect_cone(&p("x^2 + y^2*z + z^4"), &w([4, 3, 2, 5])).unwrap();
        assert!(chart_polynomial(&c).is_err());
    }

    #[test]
    fn genera() {
        let (g, poly) = polygon_genus(&p("y^3 + y*z^3 + 1"));
        assert_eq!(g, 3);
        let mut ip = poly.interior_points.clone();
        ip.sort();
        assert_eq!(ip, vec![[1, 1], [1, 2], [2, 1]]);
        assert!(!is_hyperelliptic(&poly));
        assert_eq!(polygon_genus(&p("y^3 + z^5 + 1")).0, 4);
        let (g, poly) = polygon_genus(&p("y^2*z + z^3 + 1"));
        assert_eq!(g, 1);
        assert!(is_hyperelliptic(&poly));
        let (g, poly) = polygon_genus(&p("y^2 + z^5 + 1"));
        assert_eq!((g, poly.interior_points.clone()), (2, vec![[1, 1], [2, 1]]));
        assert!(is_hyperelliptic(&poly));
        assert!(poly.pick_consistent());
        assert_eq!(polygon_genus(&p("z + t^3")).0, 0);
    }

    #[test]
    fn cascade() {
        let decide = |s: &str, dim, wt, kind| {
            let g = p(s);
            classify_rationality(&RationalityInput { face_dimension: dim, component: &g, weight: &w(wt), kind, seed: 0 })
        };
        assert_eq!(decide("x^2", 0, [1, 1, 1, 1], SingularityType::CD(4)).verdict, Rationality::Rational);
        let d = decide("y^2*z + z^3 + t^3", 2, [2, 1, 1, 1], SingularityType::CD(4));
        assert_eq!((d.verdict, d.genus, d.hyperelliptic), (Rationality::NonRational, Some(1), Some(true)));
        assert!(d.hyperelliptic_by_convention);
        assert_eq!(decide("2*y*t^3 + z^4 + t^4", 2, [4, 1, 1, 1], SingularityType::CD(5)).verdict, Rationality::Rational);
        assert_eq!(decide("x^2 + y^2*z + z^3", 2, [3, 2, 2, 1], SingularityType::CD(5)).verdict, Rationality::RationalByPlt);
        assert_eq!(
            decide("x^2 + y^2*z + z^4", 2, [4, 3, 2, 1], SingularityType::CD(5)).verdict,
            Rationality::RationalByPlt
        );
        let d = decide("y^3 + z^5 + t^15", 2, [8, 5, 3, 1], SingularityType::CE8);
        assert_eq!((d.verdict, d.genus, d.hyperelliptic), (Rationality::NonRational, Some(4), Some(false)));
        // conic: genus 0
        assert_eq!(decide("y^2 + z^2 + t^2", 2, [2, 1, 1, 1], SingularityType::CD(4)).verdict, Rationality::Rational);
        // degenerate chart: a nodal cubic is not counted
        let d = decide("y^2*t - z^3 - z^2*t", 2, [2, 1, 1, 1], SingularityType::CD(4));
        assert_eq!(d.verdict, Rationality::Rational, "{d:?}");
        let d = decide("y^2*t^2 - z^4 - z^2*t^2 + y^3*z", 2, [3, 1, 1, 1], SingularityType::CD(4));
        assert_eq!(d.verdict, Rationality::Undecided, "{d:?}");
    }
}
