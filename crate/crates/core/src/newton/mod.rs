//! Newton polyhedron `conv(supp f) + R^4_{>=0}` and its compact faces.
//!
//! Facets are found by brute force: every hyperplane through a support
//! point spanned by three vectors among point differences and coordinate
//! directions is tested. Faces are the closure of the facets under
//! intersection, each face tracked by its vertex set and the coordinate
//! directions it recedes along.

mod nondegen;

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::blowup::Weight;
use crate::lattice::{self, IVec};
use crate::polyring::{ExponentVector, NVARS};
use crate::Poly;

pub use nondegen::{check_face, check_nondegeneracy, check_polynomial, DegeneracyWitness, FaceVerdict, NondegVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polyhedron")]
    ZeroPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Facet {
    normal: IVec,
    value: i64,
}

/// A compact face of the Newton polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub dimension: usize,
    pub vertices: Vec<ExponentVector>,
    /// support points of the source polynomial lying on the face
    pub lattice_points: Vec<ExponentVector>,
    /// weights whose minimizing set is exactly this face (one canonical entry)
    pub witnesses: Vec<Weight>,
}

#[derive(Clone, Debug)]
pub struct NewtonDiagram {
    pub source: Poly,
    pub vertices: Vec<ExponentVector>,
    pub faces: Vec<Face>,
    facets: Vec<Facet>,
}

fn minimal_points(points: &[ExponentVector]) -> Vec<ExponentVector> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| q != *p && q.divides(p)))
        .copied()
        .collect()
}

fn find_facets(pts: &[IVec]) -> Vec<Facet> {
    let units: Vec<IVec> = (0..NVARS).map(|i| std::array::from_fn(|j| (i == j) as i64)).collect();
    let mut seen: HashSet<IVec> = HashSet::new();
    let mut out = vec![];
    for (i0, p0) in pts.iter().enumerate() {
        // later points (plus coordinate directions) span the hyperplane; the
        // smallest-index tight point serves as the base, so earlier points are skipped
        let mut dirs: Vec<IVec> = pts[i0 + 1..].iter().map(|p| lattice::sub(p, p0)).collect();
        dirs.extend(units.iter().copied());
        let n = dirs.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut nv = lattice::normal_of(&dirs[a], &dirs[b], &dirs[c]);
                    if nv.iter().all(|&x| x == 0) {
                        continue;
                    }
                    if nv.iter().all(|&x| x <= 0) {
                        nv = nv.map(|x| -x);
                    }
                    if nv.iter().any(|&x| x < 0) {
                        continue;
                    }
                    let nv = lattice::primitive(&nv);
                    if !seen.insert(nv) {
                        continue;
                    }
                    let value = pts.iter().map(|p| lattice::dot(&nv, p)).min().unwrap();
                    out.push(Facet { normal: nv, value });
                }
            }
        }
    }
    // a normal found from some base may not support the polyhedron at that
    // base; keep only those whose tight set spans a 3-dimensional face
    out.retain(|f| {
        let tight: Vec<&IVec> = pts.iter().filter(|p| lattice::dot(&f.normal, p) == f.value).collect();
        let mut rows: Vec<IVec> = tight.iter().map(|p| lattice::sub(p, tight[0])).collect();
        rows.extend(units.iter().filter(|u| lattice::dot(&f.normal, u) == 0).copied());
        lattice::rank(&rows) == 3
    });
    out.sort();
    out
}

impl PartialOrd for Facet {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Facet {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.normal, self.value).cmp(&(o.normal, o.value))
    }
}

/// A face as (vertex indices, receding coordinate directions).
type FaceKey = (BTreeSet<usize>, BTreeSet<usize>);

pub fn build_diagram(f: &Poly) -> Result<NewtonDiagram, NewtonError> {
    if f.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    let support = f.support();
    let cand = minimal_points(&support);
    let pts: Vec<IVec> = cand.iter().map(|e| e.as_i64()).collect();
    let facets = find_facets(&pts);

    let tight = |fc: &Facet, p: &IVec| lattice::dot(&fc.normal, p) == fc.value;
    let vertex_idx: Vec<usize> = (0..pts.len())
        .filter(|&i| {
            let normals: Vec<IVec> = facets.iter().filter(|fc| tight(fc, &pts[i])).map(|fc| fc.normal).collect();
            lattice::rank(&normals) == NVARS
        })
        .collect();
    let vertices: Vec<ExponentVector> = vertex_idx.iter().map(|&i| cand[i]).collect();

    let facet_keys: Vec<FaceKey> = facets
        .iter()
        .map(|fc| {
            let vs = (0..vertices.len()).filter(|&k| tight(fc, &pts[vertex_idx[k]])).collect();
            let ds = (0..NVARS).filter(|&i| fc.normal[i] == 0).collect();
            (vs, ds)
        })
        .collect();

    let mut all: BTreeSet<FaceKey> = facet_keys.iter().cloned().collect();
    let mut queue: Vec<FaceKey> = all.iter().cloned().collect();
    while let Some(g) = queue.pop() {
        for fk in &facet_keys {
            let vs: BTreeSet<usize> = g.0.intersection(&fk.0).copied().collect();
            if vs.is_empty() {
                continue;
            }
            let ds: BTreeSet<usize> = g.1.intersection(&fk.1).copied().collect();
            let key = (vs, ds);
            if all.insert(key.clone()) {
                queue.push(key);
            }
        }
    }
    // a point of the polyhedron is always a face: single-point keys arise
    // from intersections, but a lone vertex (one support point) needs adding
    for k in 0..vertices.len() {
        all.insert((BTreeSet::from([k]), BTreeSet::new()));
    }

    let mut faces = vec![];
    for (vs, ds) in &all {
        if !ds.is_empty() {
            continue;
        }
        let containing: Vec<&Facet> = facets
            .iter()
            .zip(&facet_keys)
            .filter(|(_, fk)| vs.is_subset(&fk.0) && ds.is_subset(&fk.1))
            .map(|(fc, _)| fc)
            .collect();
        let mut sum = [0i64; NVARS];
        for fc in &containing {
            for i in 0..NVARS {
                sum[i] += fc.normal[i];
            }
        }
        if sum.iter().any(|&x| x <= 0) {
            continue;
        }
        let witness = Weight::primitive_of(sum.map(|x| x as u64)).expect("positive");
        let fv: Vec<ExponentVector> = vs.iter().map(|&k| vertices[k]).collect();
        let base = fv[0].as_i64();
        let rows: Vec<IVec> = fv.iter().map(|v| lattice::sub(&v.as_i64(), &base)).collect();
        let dimension = lattice::rank(&rows);
        let m = support.iter().map(|e| witness.eval(e)).min().unwrap();
        let lattice_points: Vec<ExponentVector> = support.iter().filter(|e| witness.eval(e) == m).copied().collect();
        faces.push(Face { dimension, vertices: fv, lattice_points, witnesses: vec![witness] });
    }
    faces.sort_by(|a, b| (a.dimension, &a.lattice_points).cmp(&(b.dimension, &b.lattice_points)));
    faces.dedup();

    Ok(NewtonDiagram { source: f.clone(), vertices, faces, facets })
}

impl Face {
    pub fn witness(&self) -> &Weight {
        &self.witnesses[0]
    }
}

impl NewtonDiagram {
    /// Number of facets (including non-compact ones).
    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn max_vertex_degree(&self) -> u32 {
        self.vertices.iter().map(|v| v.degree()).max().unwrap_or(0)
    }
}

/// `w(f) = min <w, v>` over the diagram; computed from vertices.
pub fn support_value(d: &NewtonDiagram, w: &Weight) -> u64 {
    d.vertices.iter().map(|v| w.eval(v)).min().expect("nonempty diagram")
}

/// Terms of `f` whose exponents minimize `<w, .>`.
pub fn face_polynomial(f: &Poly, w: &Weight) -> Poly {
    let Some(m) = f.terms().map(|(e, _)| w.eval(e)).min() else {
        return Poly::zero();
    };
    f.filter(|e| w.eval(e) == m)
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
    fn example_one_diagram() {
        let d = build_diagram(&p("x^2 + y^2*z + z^3 + t^3")).unwrap();
        assert_eq!(d.vertices.len(), 4);
        let tri: Vec<ExponentVector> =
            [[0, 0, 0, 3], [0, 2, 1, 0], [0, 0, 3, 0]].iter().map(|&e| ExponentVector(e)).collect();
        let two_faces: Vec<&Face> = d.faces.iter().filter(|f| f.dimension == 2).collect();
        assert!(two_faces.iter().any(|f| {
            let mut a = f.lattice_points.clone();
            a.sort();
            let mut b = tri.clone();
            b.sort();
            a == b
        }));
        assert_eq!(support_value(&d, &w([2, 1, 1, 1])), 3);
        assert_eq!(support_value(&d, &w([1, 1, 1, 1])), 2);
    }

    #[test]
    fn single_monomial_and_domination() {
        let d = build_diagram(&p("x^2")).unwrap();
        assert_eq!(d.vertices, vec![ExponentVector([2, 0, 0, 0])]);
        assert_eq!(d.faces.len(), 1);
        assert_eq!(d.faces[0].dimension, 0);
        let d = build_diagram(&p("x^2 + x^2*y")).unwrap();
        assert_eq!(d.vertices, vec![ExponentVector([2, 0, 0, 0])]);
        assert!(build_diagram(&Poly::zero()).is_err());
    }

    #[test]
    fn face_polynomials() {
        let f = p("x^2 + y^2*z + z^3 + t^3");
        assert_eq!(face_polynomial(&f, &w([2, 1, 1, 1])), p("y^2*z + z^3 + t^3"));
        assert_eq!(face_polynomial(&f, &w([1, 1, 1, 1])), p("x^2"));
        let g = p("x^2 + y^3 + z^5 + t^15");
        assert_eq!(face_polynomial(&g, &w([8, 5, 3, 1])), p("y^3 + z^5 + t^15"));
        let d = build_diagram(&g).unwrap();
        assert_eq!(support_value(&d, &w([8, 5, 3, 1])), 15);
    }

    #[test]
    fn faces_are_witnessed() {
        let f = p("x^2 + y^3 + y*z^3 + t^9 + z^2*t^4 + y*t^5");
        let d = build_diagram(&f).unwrap();
        for face in &d.faces {
            let fp = face_polynomial(&f, &face.witnesses[0]);
            let mut a = fp.support();
            a.sort();
            let mut b = face.lattice_points.clone();
            b.sort();
            assert_eq!(a, b);
            assert!(face.lattice_points.len() > face.dimension);
        }
    }
}
