//! Non-degeneracy of face polynomials.
//!
//! A face polynomial `f_ρ` is non-degenerate when `{f_ρ = 0}` is smooth on
//! the torus. Writing `f_ρ = u^m · h(u^{b_1}, ..., u^{b_d})` for a lattice
//! basis `b_j` of the face, the monomial map is a submersion of tori, so it
//! is enough to look at `h` on `(C*)^d`.
//!
//! Order of tests:
//! 1. symbolic shortcuts (monomial, binomial, a partial that is a monomial);
//! 2. exact over Q: a common factor of `h` and all its partials is a
//!    singular component; for `d = 1` this is the whole story;
//! 3. `d = 2`: every F_p-rational singular torus point, found through
//!    `Res_{s1}(h, ∂h/∂s1)`, over five primes;
//! 4. `d = 3`: the same search on random slices `s3 = c`.
//!
//! No witness after 3–4 gives "probable", never "certified".

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{face_polynomial, NewtonDiagram};
use crate::factor::{gcd, rational_roots};
use crate::lattice::{AffineLattice, IVec};
use crate::polyring::{ExponentVector, Polynomial, NVARS};
use crate::scalar::{Field, Rational, Zp, P1, P2, P3, P4, P5};
use crate::unipoly::UniPoly;
use crate::Poly;

const SLICES_PER_PRIME: usize = 12;

/// A point (or component) where a face polynomial and its partials vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegeneracyWitness {
    /// a torus point in (x, y, z, t); `prime: None` means over Q
    Point { prime: Option<u64>, coords: [String; NVARS] },
    /// a point in lattice coordinates `s_j = u^{b_j}` (mod `prime`)
    LatticePoint { prime: u64, basis: Vec<IVec>, values: Vec<u64> },
    /// a factor dividing the face polynomial and all of its partials
    RepeatedFactor { factor: String },
}

impl fmt::Display for DegeneracyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegeneracyWitness::Point { prime, coords } => {
                write!(f, "x={}, y={}, z={}, t={}", coords[0], coords[1], coords[2], coords[3])?;
                if let Some(p) = prime {
                    write!(f, " (mod {p})")?;
                }
                Ok(())
            }
            DegeneracyWitness::LatticePoint { prime, basis, values } => {
                let parts: Vec<String> =
                    basis.iter().zip(values).map(|(b, v)| format!("u^{b:?}={v}")).collect();
                write!(f, "{} (mod {prime})", parts.join(", "))
            }
            DegeneracyWitness::RepeatedFactor { factor } => write!(f, "singular along {{{factor} = 0}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NondegVerdict {
    NondegenerateCertified,
    NondegenerateProbable,
    Degenerate { witness: DegeneracyWitness },
}

impl NondegVerdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, NondegVerdict::Degenerate { .. })
    }

    fn rank(&self) -> u8 {
        match self {
            NondegVerdict::NondegenerateCertified => 0,
            NondegenerateProbable => 1,
            NondegVerdict::Degenerate { .. } => 2,
        }
    }

    /// The weakest of a list of verdicts (certified < probable < degenerate).
    pub fn worst<'a, I: IntoIterator<Item = &'a NondegVerdict>>(it: I) -> NondegVerdict {
        it.into_iter()
            .max_by_key(|v| v.rank())
            .cloned()
            .unwrap_or(NondegVerdict::NondegenerateCertified)
    }
}

use NondegVerdict::NondegenerateProbable;

impl fmt::Display for NondegVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NondegVerdict::NondegenerateCertified => write!(f, "nondegenerate (certified)"),
            NondegenerateProbable => write!(f, "nondegenerate (probable)"),
            NondegVerdict::Degenerate { witness } => write!(f, "degenerate: {witness}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceVerdict {
    pub face: usize,
    pub dimension: usize,
    pub face_polynomial: Poly,
    #[serde(flatten)]
    pub verdict: NondegVerdict,
    pub reason: String,
}

pub fn check_nondegeneracy(d: &NewtonDiagram, seed: u64) -> Vec<FaceVerdict> {
    d.faces
        .iter()
        .enumerate()
        .map(|(i, face)| {
            let fp = face_polynomial(&d.source, face.witness());
            let (verdict, reason) = check_face(&fp, seed.wrapping_add(i as u64));
            FaceVerdict { face: i, dimension: face.dimension, face_polynomial: fp, verdict, reason }
        })
        .collect()
}

/// Check every compact face of `f`; returns the overall verdict and the per-face list.
pub fn check_polynomial(f: &Poly, seed: u64) -> Result<(NondegVerdict, Vec<FaceVerdict>), super::NewtonError> {
    let d = super::build_diagram(f)?;
    let v = check_nondegeneracy(&d, seed);
    Ok((NondegVerdict::worst(v.iter().map(|fv| &fv.verdict)), v))
}

/// Verdict for a single face polynomial, with a short reason.
pub fn check_face(fp: &Poly, seed: u64) -> (NondegVerdict, String) {
    use NondegVerdict::*;
    if fp.len() <= 1 {
        return (NondegenerateCertified, "monomial".into());
    }
    if fp.len() == 2 {
        return (NondegenerateCertified, "binomial".into());
    }
    for v in 0..NVARS {
        let dv = fp.derivative(v);
        if dv.len() == 1 {
            return (NondegenerateCertified, format!("d/d{} is a monomial", crate::polyring::VAR_NAMES[v]));
        }
    }

    let lat = AffineLattice::of_points(&fp.support());
    let (h, shift) = lat.reduce(fp);
    let dim = lat.dim();

    // exact: common factor of h and all partials
    let mut g = h.clone();
    for v in 0..dim {
        g = gcd(&g, &h.derivative(v));
        if g.is_constant() {
            break;
        }
    }
    let g = g.div_monomial(&g.monomial_gcd());
    if !g.is_constant() {
        let witness = rational_point_on(&g, dim)
            .and_then(|s| lift_point(&lat, &shift, &s))
            .map(|coords| DegeneracyWitness::Point { prime: None, coords: coords.map(|c| c.to_string()) })
            .unwrap_or_else(|| DegeneracyWitness::RepeatedFactor { factor: unreduce(&lat, &shift, &g).to_string() });
        return (Degenerate { witness }, "common factor with all partials".into());
    }
    if dim <= 1 {
        return (NondegenerateCertified, "squarefree along a 1-dimensional face".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    macro_rules! search {
        ($p:expr) => {
            if let Some(w) = search_mod::<$p, _>(&h, &lat, dim, &mut rng) {
                return (Degenerate { witness: w }, format!("singular torus point mod {}", $p));
            }
        };
    }
    search!(P1);
    search!(P2);
    search!(P3);
    search!(P4);
    search!(P5);
    let how = if dim == 2 { "no F_p-rational singular point for 5 primes" } else { "no singular point on random slices" };
    (NondegenerateProbable, how.into())
}

/// A rational torus point on `{g = 0}`: all but one coordinate set to 1.
fn rational_point_on(g: &Poly, dim: usize) -> Option<Vec<Rational>> {
    for v in 0..dim {
        let mut u = g.clone();
        for w in 0..dim {
            if w != v {
                u = u.specialize(w, &Rational::one());
            }
        }
        let uni = UniPoly::new((0..=u.degree_in(v)).map(|k| u.coeff(&ExponentVector::unit(v).scaled(k))).collect());
        if uni.degree().unwrap_or(0) == 0 {
            continue;
        }
        if let Some(r) = rational_roots(&uni).into_iter().find(|r| !r.is_zero()) {
            let mut s = vec![Rational::one(); dim];
            s[v] = r;
            return Some(s);
        }
    }
    None
}

/// Solve `u^{b_j} = s_j` with non-pivot coordinates set to 1; needs pivots ±1.
fn lift_point<C: Field>(lat: &AffineLattice, _shift: &[i64], s: &[C]) -> Option<[C; NVARS]> {
    let mut u: [C; NVARS] = std::array::from_fn(|_| C::one());
    for (j, b) in lat.basis.iter().enumerate().rev() {
        let col = b.iter().position(|&x| x != 0)?;
        let mut rest = C::one();
        for k in col + 1..NVARS {
            rest = rest * int_pow(&u[k], b[k]);
        }
        let target = s[j].clone() / rest;
        u[col] = match b[col] {
            1 => target,
            -1 => target.inv(),
            _ => return None,
        };
    }
    Some(u)
}

fn int_pow<C: Field>(a: &C, e: i64) -> C {
    if e >= 0 {
        a.pow_u32(e as u32)
    } else {
        a.inv().pow_u32((-e) as u32)
    }
}

/// Map a polynomial in lattice coordinates back to (x, y, z, t), times the
/// smallest monomial making it a polynomial.
fn unreduce(lat: &AffineLattice, _shift: &[i64], g: &Poly) -> Poly {
    let terms: Vec<(IVec, Rational)> = g
        .terms()
        .map(|(e, c)| {
            let mut v = [0i64; NVARS];
            for (j, b) in lat.basis.iter().enumerate() {
                for k in 0..NVARS {
                    v[k] += e.get(j) as i64 * b[k];
                }
            }
            (v, c.clone())
        })
        .collect();
    let mut lo = [0i64; NVARS];
    for (v, _) in &terms {
        for k in 0..NVARS {
            lo[k] = lo[k].min(v[k]);
        }
    }
    Polynomial::from_terms(
        terms.into_iter().map(|(v, c)| (ExponentVector(std::array::from_fn(|k| (v[k] - lo[k]) as u32)), c)),
    )
}

fn to_uni<C: Field>(p: &Polynomial<C>, v: usize) -> UniPoly<C> {
    let mut c = vec![C::zero(); p.degree_in(v) as usize + 1];
    for (e, a) in p.terms() {
        c[e.get(v) as usize] = a.clone();
    }
    UniPoly::new(c)
}

fn search_mod<const P: u64, R: Rng>(
    h: &Poly,
    lat: &AffineLattice,
    dim: usize,
    rng: &mut R,
) -> Option<DegeneracyWitness> {
    let hp: Polynomial<Zp<P>> = reduce_mod(h)?;
    let witness = |s: Vec<Zp<P>>| match lift_point(lat, &[], &s) {
        Some(u) => DegeneracyWitness::Point { prime: Some(P), coords: u.map(|c| c.value().to_string()) },
        None => DegeneracyWitness::LatticePoint {
            prime: P,
            basis: lat.basis.clone(),
            values: s.iter().map(|c| c.value()).collect(),
        },
    };
    match dim {
        2 => {
            let pts = bivariate_singular_points(&hp, &[], rng)?;
            pts.into_iter().next().map(|[a, b]| witness(vec![a, b]))
        }
        3 => {
            let d2 = hp.derivative(2);
            for _ in 0..SLICES_PER_PRIME {
                let c = Zp::<P>::new(rng.gen_range(1..P));
                let slice = hp.specialize(2, &c);
                let extra = d2.specialize(2, &c);
                if let Some(pts) = bivariate_singular_points(&slice, &[extra], rng) {
                    if let Some([a, b]) = pts.into_iter().next() {
                        return Some(witness(vec![a, b, c]));
                    }
                }
            }
            None
        }
        _ => None,
    }
}

fn reduce_mod<const P: u64>(h: &Poly) -> Option<Polynomial<Zp<P>>> {
    let mut out = Polynomial::zero();
    for (e, c) in h.terms() {
        out.add_term(*e, Zp::<P>::from_rational(c)?);
    }
    Some(out)
}

/// All torus points with `h = ∂h/∂s1 = ∂h/∂s2 = 0` and every `extra` zero.
/// `h` lives in slots 0 and 1. `None` when the elimination degenerates
/// (the resultant vanishes identically in both directions).
pub(crate) fn bivariate_singular_points<const P: u64, R: Rng>(
    h: &Polynomial<Zp<P>>,
    extra: &[Polynomial<Zp<P>>],
    rng: &mut R,
) -> Option<Vec<[Zp<P>; 2]>> {
    if h.is_zero() {
        return None;
    }
    let (a, b) = if let Some(r) = eliminate(h, 0, 1) {
        (0, r)
    } else {
        (1, eliminate(h, 1, 0)?)
    };
    // a: eliminated variable; o: the one the resultant lives in
    let o = 1 - a;
    let (lc_roots, r) = b;
    let mut cands = r.nonzero_roots(rng);
    cands.extend(lc_roots.nonzero_roots(rng));
    cands.sort();
    cands.dedup();

    let d0 = h.derivative(0);
    let d1 = h.derivative(1);
    let mut out = vec![];
    for c in cands {
        let mut g = to_uni(&h.specialize(o, &c), a);
        for q in [&d0, &d1].into_iter().chain(extra.iter()) {
            g = g.gcd(&to_uni(&q.specialize(o, &c), a));
        }
        let roots = if g.is_zero() {
            vec![Zp::one()]
        } else {
            g.nonzero_roots(rng)
        };
        for s in roots {
            let mut pt = [Zp::zero(); 2];
            pt[a] = s;
            pt[o] = c;
            out.push(pt);
        }
    }
    Some(out)
}

/// `(lc_a(h), Res_a(h, ∂h/∂a))` as polynomials in variable `o`, by
/// evaluation and interpolation. `None` if the resultant is identically zero.
fn eliminate<const P: u64>(h: &Polynomial<Zp<P>>, a: usize, o: usize) -> Option<(UniPoly<Zp<P>>, UniPoly<Zp<P>>)> {
    let n = h.degree_in(a) as usize;
    if n == 0 {
        return None;
    }
    let ha = h.derivative(a);
    let lc = to_uni(&h.lc_in(a), o);
    let bound = (2 * n - 1) * h.degree_in(o) as usize;
    let mut xs = vec![];
    let mut ys = vec![];
    let mut x = 1u64;
    while xs.len() <= bound {
        let c = Zp::<P>::new(x);
        x += 1;
        if lc.eval(&c).is_zero() {
            continue;
        }
        let f = to_uni(&h.specialize(o, &c), a);
        let fa = to_uni(&ha.specialize(o, &c), a);
        xs.push(c);
        ys.push(f.resultant(&fa));
    }
    let r = UniPoly::interpolate(&xs, &ys);
    if r.is_zero() {
        None
    } else {
        Some((lc, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;
    use crate::scalar::F1;

    fn p(s: &str) -> Poly {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn shortcut_examples() {
        let (v, why) = check_face(&p("y^2*z + z^3 + t^3"), 0);
        assert_eq!(v, NondegVerdict::NondegenerateCertified, "{why}");
        assert_eq!(check_face(&p("x^2"), 0).0, NondegVerdict::NondegenerateCertified);
        assert_eq!(check_face(&p("z^3 - t^3"), 0).0, NondegVerdict::NondegenerateCertified);
    }

    #[test]
    fn square_is_degenerate() {
        let (v, _) = check_face(&p("z^2 - 2*z*t + t^2"), 0);
        match v {
            NondegVerdict::Degenerate { witness } => assert_eq!(witness.to_string(), "x=1, y=1, z=1, t=1"),
            other => panic!("{other:?}"),
        }
        assert_eq!(check_face(&p("z^3 + z^2*t + z*t^2 + t^3"), 0).0, NondegVerdict::NondegenerateCertified);
    }

    #[test]
    fn two_dimensional_faces() {
        // smooth cubic-ish face, no monomial partial
        let (v, _) = check_face(&p("y^3 + y*z^2 + z^3 + y^2*t + z^2*t + t^3"), 3);
        assert_eq!(v, NondegVerdict::NondegenerateProbable);
        // (y - z)(y + z - 2t): two lines meeting at y = z = t
        let (v, _) = check_face(&p("y^2 - z^2 - 2*y*t + 2*z*t"), 3);
        match v {
            NondegVerdict::Degenerate { witness: DegeneracyWitness::Point { coords, .. } } => {
                // y = z = t after scaling
                assert_eq!(coords[1], coords[2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bivariate_search_finds_node() {
        // (s1 - 2)^2 - (s2 - 3)^2 * s2 has a node at (2, 3)
        let h: Polynomial<F1> = p("x^2 - 4*x + 4 - y^3 + 6*y^2 - 9*y").map_coeffs(|c| F1::from_rational(c).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = bivariate_singular_points(&h, &[], &mut rng).unwrap();
        assert_eq!(pts, vec![[F1::from_i64(2), F1::from_i64(3)]]);
    }
}
