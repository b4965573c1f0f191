//! Weighted blowups with discrepancy one and their exceptional divisors.

mod weight;

use serde::Serialize;

use crate::factor::{self, Factorization};
use crate::newton::{face_polynomial, support_value, NewtonDiagram};
use crate::polyring::{ExponentVector, NVARS};
use crate::scalar::Rational;
use crate::Poly;

pub use weight::{Weight, WeightError};

/// Box bound making [`enumerate_weights`] complete for cDV diagrams.
pub fn default_max_coord(d: &NewtonDiagram) -> u64 {
    2 * d.max_vertex_degree() as u64 + 2
}

/// All primitive `w` in `[1, max_coord]^4` with `|w| - 1 - w(f) = 1`, sorted.
///
/// The scan is pruned exactly: for a vertex `v` supported on the first `i`
/// coordinates, `w(f) <= <w, v>` bounds the sum of the remaining weights.
pub fn enumerate_weights(d: &NewtonDiagram, max_coord: u64) -> Vec<Weight> {
    let verts: Vec<[u64; NVARS]> = d.vertices.iter().map(|v| v.0.map(u64::from)).collect();
    let mut out = vec![];
    let mut w = [0u64; NVARS];
    scan(&verts, max_coord, 0, &mut w, &mut out);
    out.sort();
    out
}

fn scan(verts: &[[u64; NVARS]], max: u64, i: usize, w: &mut [u64; NVARS], out: &mut Vec<Weight>) {
    if i == NVARS {
        let wf = verts.iter().map(|v| (0..NVARS).map(|j| v[j] * w[j]).sum::<u64>()).min().unwrap_or(0);
        if w.iter().sum::<u64>() == wf + 2 {
            if let Ok(wt) = Weight::new(*w) {
                out.push(wt);
            }
        }
        return;
    }
    let prefix: u64 = w[..i].iter().sum();
    let rest = (NVARS - i - 1) as u64;
    let mut hi = max;
    for v in verts.iter().filter(|v| v[i..].iter().all(|&a| a == 0)) {
        let val: u64 = (0..i).map(|j| v[j] * w[j]).sum();
        // sum_{j >= i} w_j <= val - prefix + 2, and the later ones are >= 1
        let room = (val + 2).saturating_sub(prefix + rest);
        hi = hi.min(room);
    }
    for a in 1..=hi {
        w[i] = a;
        scan(verts, max, i + 1, w, out);
    }
    w[i] = 0;
}

/// True when some weight of the list has a coordinate equal to the bound.
pub fn touches_boundary(ws: &[Weight], max_coord: u64) -> bool {
    ws.iter().any(|w| w.get().iter().any(|&a| a == max_coord))
}

/// `m * (|w| - 1 - w(f))`.
pub fn discrepancy(d: &NewtonDiagram, w: &Weight, m: u32) -> i64 {
    m as i64 * (w.sum() as i64 - 1 - support_value(d, w) as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    pub factor: Poly,
    pub multiplicity: u32,
}

/// Irreducible decomposition of an exceptional divisor equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    #[serde(serialize_with = "ser_rational")]
    pub unit: Rational,
    /// coordinate-hyperplane part, kept out of the components
    pub toric_content: ExponentVector,
    pub components: Vec<Component>,
    /// false when some factor could not be proved irreducible
    pub certified: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

impl Decomposition {
    /// `unit * toric_content * prod factor^m`.
    pub fn expand(&self) -> Poly {
        Factorization {
            unit: self.unit.clone(),
            monomial: self.toric_content,
            factors: self.components.iter().map(|c| (c.factor.clone(), c.multiplicity)).collect(),
            certified: self.certified,
        }
        .expand()
    }
}

pub fn decompose_components(g: &Poly, seed: u64) -> Decomposition {
    let fz = factor::factorize(g, seed);
    let mut components: Vec<Component> =
        fz.factors.into_iter().map(|(factor, multiplicity)| Component { factor, multiplicity }).collect();
    let mut toric = fz.monomial;
    let unit = fz.unit;
    // a pure monomial equation is its own single component
    if components.is_empty() && toric.degree() > 0 {
        for v in 0..NVARS {
            let k = toric.get(v);
            if k > 0 {
                components.push(Component { factor: Poly::var(v), multiplicity: k });
            }
        }
        toric = ExponentVector::ZERO;
    }
    Decomposition { unit, toric_content: toric, components, certified: fz.certified }
}

/// The exceptional divisor `{f_w = 0}` of the weighted blowup, in `P(w)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalSurface {
    pub ambient_weights: Weight,
    pub equation: Poly,
    pub decomposition: Decomposition,
}

pub fn exceptional_surface(f: &Poly, w: &Weight, seed: u64) -> ExceptionalSurface {
    let equation = face_polynomial(f, w);
    let decomposition = decompose_components(&equation, seed);
    ExceptionalSurface { ambient_weights: *w, equation, decomposition }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::build_diagram;
    use crate::polyring::parse_polynomial;

    fn p(s: &str) -> Poly {
        parse_polynomial(s).unwrap()
    }

    fn w(a: [u64; 4]) -> Weight {
        Weight::new(a).unwrap()
    }

    /// Unpruned scan of the box.
    fn brute(d: &NewtonDiagram, max: u64) -> Vec<Weight> {
        let mut out = vec![];
        for a in 1..=max {
            for b in 1..=max {
                for c in 1..=max {
                    for e in 1..=max {
                        if let Ok(wt) = Weight::new([a, b, c, e]) {
                            if discrepancy(d, &wt, 1) == 1 {
                                out.push(wt);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn example_one_weights() {
        let d = build_diagram(&p("x^2 + y^2*z + z^3 + t^3")).unwrap();
        let ws = enumerate_weights(&d, 8);
        assert_eq!(ws, vec![w([1, 1, 1, 1]), w([2, 1, 1, 1])]);
        assert_eq!(ws, brute(&d, 8));
        assert!(!touches_boundary(&ws, default_max_coord(&d)));
    }

    #[test]
    fn pruning_matches_brute_force() {
        for s in ["x^2 + y^3 + y*z^3 + t^9", "y^2*z + z^4 + t^5 + x^3", "x*y + z^2 + t^7", "x^2 + y^3 + z^5 + t^7"] {
            let d = build_diagram(&p(s)).unwrap();
            assert_eq!(enumerate_weights(&d, 12), brute(&d, 12), "{s}");
        }
    }

    #[test]
    fn smooth_and_example_three() {
        let d = build_diagram(&p("x")).unwrap();
        assert!(enumerate_weights(&d, 10).is_empty());
        let d = build_diagram(&p("x^2 + y^3 + z^5 + t^15")).unwrap();
        assert!(enumerate_weights(&d, default_max_coord(&d)).contains(&w([8, 5, 3, 1])));
    }

    #[test]
    fn discrepancies() {
        let d = build_diagram(&p("x^2 + y^2*z + z^3 + t^3")).unwrap();
        assert_eq!(discrepancy(&d, &w([2, 1, 1, 1]), 1), 1);
        assert_eq!(discrepancy(&d, &w([1, 1, 1, 1]), 1), 1);
        assert_eq!(discrepancy(&d, &w([1, 1, 1, 1]), 2), 2);
    }

    #[test]
    fn surfaces_and_components() {
        let s = exceptional_surface(&p("x^2 + y^2*z + z^3 + t^3"), &w([2, 1, 1, 1]), 0);
        assert_eq!(s.equation, p("y^2*z + z^3 + t^3"));
        assert_eq!(s.decomposition.components.len(), 1);
        assert_eq!(s.decomposition.components[0].multiplicity, 1);
        let s = exceptional_surface(&p("x^2 + y^3 + z^5 + t^15"), &w([8, 5, 3, 1]), 0);
        assert_eq!(s.equation, p("y^3 + z^5 + t^15"));
        let q = p("x^2 + y^2 + z^2 + t^2");
        let s = exceptional_surface(&q, &w([1, 1, 1, 1]), 0);
        assert_eq!(s.equation, q);
        assert_eq!(s.decomposition.components.len(), 1);

        let g = p("z^3 + z^2*t");
        let dc = decompose_components(&g, 0);
        assert_eq!(dc.toric_content, ExponentVector([0, 0, 2, 0]));
        assert_eq!(dc.components, vec![Component { factor: p("z + t"), multiplicity: 1 }]);
        assert_eq!(dc.expand(), g);
        let dc = decompose_components(&p("x^2 - z^2*t^4"), 0);
        let mut fs: Vec<Poly> = dc.components.iter().map(|c| c.factor.clone()).collect();
        fs.sort_by_key(|f| f.to_string());
        // factors are normalized to a positive grlex-leading coefficient
        assert_eq!(fs, vec![p("x + z*t^2"), p("z*t^2 - x")]);
    }
}
