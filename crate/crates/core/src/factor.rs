//! Multivariate gcd, square-free decomposition and factorization over Q.
//!
//! gcd is the recursive primitive PRS. Factorization is deliberately
//! modest: exact splitting is done where it is cheap (monomial content,
//! square-free decomposition, linear or quadratic in some variable,
//! collinear support with rational roots), and irreducibility of whatever
//! remains is certified by degree patterns of random specializations over
//! several primes. Anything left undecided is returned as-is and flagged.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lattice::AffineLattice;
use crate::polyring::{ExponentVector, Polynomial, NVARS};
use crate::scalar::{rational_sqrt, Rational, Zp, P1, P2, P3, P4, P5};
use crate::unipoly::UniPoly;

pub type Poly = Polynomial<Rational>;

fn primitive_normalize(p: &Poly) -> Poly {
    p.primitive()
}

/// Content of `p` with respect to `v` (a polynomial free of `v`).
pub fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.coefficients_in(v).values() {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = b.lc_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.lc_in(v);
        let shift = ExponentVector::unit(v);
        let mut xs = ExponentVector::ZERO;
        for _ in 0..(dr - db) {
            xs = xs.add(&shift);
        }
        r = &(&lb * &r) - &(&lr * &b.mul_monomial(&xs, &Rational::one()));
        r = primitive_normalize(&r);
    }
    r
}

/// gcd over Q, normalized to integer coefficients with gcd 1 and positive
/// leading coefficient (so gcd of constants is 1).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return primitive_normalize(b);
    }
    if b.is_zero() {
        return primitive_normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // monomial parts first: cheap and keeps the recursion small
    let ma = a.monomial_gcd();
    let mb = b.monomial_gcd();
    let mut m = [0u32; NVARS];
    for v in 0..NVARS {
        m[v] = ma.get(v).min(mb.get(v));
    }
    let m = ExponentVector(m);
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let g = gcd_rec(&a1, &b1);
    primitive_normalize(&g.mul_monomial(&m, &Rational::one()))
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return primitive_normalize(b);
    }
    if b.is_zero() {
        return primitive_normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if let Some(q) = a.div_exact(b) {
        let _ = q;
        return primitive_normalize(b);
    }
    if let Some(q) = b.div_exact(a) {
        let _ = q;
        return primitive_normalize(a);
    }
    let Some(v) = (0..NVARS).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0) else {
        return Poly::one();
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd(b, &content_in(a, v));
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v) == 0 {
            break Poly::one();
        }
        p = q;
        let cr = content_in(&r, v);
        q = r.div_exact(&cr).expect("content divides");
    };
    let g = if g.degree_in(v) > 0 {
        let cg = content_in(&g, v);
        g.div_exact(&cg).expect("content divides")
    } else {
        Poly::one()
    };
    primitive_normalize(&(&c * &g))
}

/// Square-free decomposition of a polynomial without monomial content:
/// pairs `(s_i, i)` with `p = unit * prod s_i^i`, each `s_i` square-free,
/// pairwise coprime, primitive.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out: Vec<(Poly, u32)> = vec![];
    sqf_rec(&primitive_normalize(p), &mut out);
    merge_multiplicities(out)
}

fn merge_multiplicities(items: Vec<(Poly, u32)>) -> Vec<(Poly, u32)> {
    let mut by_mult: std::collections::BTreeMap<u32, Poly> = Default::default();
    for (f, i) in items {
        if f.is_constant() {
            continue;
        }
        let e = by_mult.entry(i).or_insert_with(Poly::one);
        *e = primitive_normalize(&(&*e * &f));
    }
    by_mult.into_iter().map(|(i, f)| (f, i)).collect()
}

fn sqf_rec(p: &Poly, out: &mut Vec<(Poly, u32)>) {
    if p.is_constant() {
        return;
    }
    let v = (0..NVARS).rev().find(|&v| p.degree_in(v) > 0).unwrap();
    let c = content_in(p, v);
    let f = p.div_exact(&c).expect("content divides");
    sqf_rec(&c, out);
    // Yun's algorithm in v on the v-primitive part
    let df = f.derivative(v);
    let a0 = gcd(&f, &df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c1 = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c1 - &b.derivative(v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        let nb = b.div_exact(&a).expect("gcd divides");
        let nc = d.div_exact(&a).expect("gcd divides");
        d = &nc - &nb.derivative(v);
        if !a.is_constant() {
            out.push((a, i));
        }
        b = nb;
        i += 1;
    }
}

/// A factorization `g = unit * monomial * prod f_j^{m_j}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Factorization {
    #[serde(serialize_with = "ser_rational")]
    pub unit: Rational,
    pub monomial: ExponentVector,
    pub factors: Vec<(Poly, u32)>,
    /// false when some factor could not be proved irreducible
    pub certified: bool,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::monomial(self.monomial, self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

/// Factor `g` over Q as far as the certified methods allow.
pub fn factorize(g: &Poly, seed: u64) -> Factorization {
    assert!(!g.is_zero(), "factorize: zero polynomial");
    let mono = g.monomial_gcd();
    let rest = g.div_monomial(&mono);
    let (_, rest) = rest.primitive_part();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = vec![];
    let mut certified = true;
    for (s, mult) in squarefree_decomposition(&rest) {
        let (parts, ok) = split_squarefree(&s, &mut rng, 0);
        certified &= ok;
        for f in parts {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| a.0.leading().map(|x| *x.0).cmp(&b.0.leading().map(|x| *x.0)).then(a.1.cmp(&b.1)));
    // fix the unit so that the product is exact
    let mut out = Factorization { unit: Rational::one(), monomial: mono, factors, certified };
    let prod = out.expand();
    let (lg, cg) = g.leading().unwrap();
    out.unit = cg.clone() / prod.coeff(lg);
    out
}

/// Split a primitive square-free polynomial into irreducible factors.
fn split_squarefree(s: &Poly, rng: &mut ChaCha8Rng, depth: u32) -> (Vec<Poly>, bool) {
    if s.is_constant() {
        return (vec![], true);
    }
    if s.len() <= 1 {
        return (vec![s.clone()], true);
    }
    if depth > 12 {
        return (vec![s.clone()], false);
    }
    // content with respect to any variable splits off first
    for v in s.variables() {
        let c = content_in(s, v);
        if !c.is_constant() {
            let q = s.div_exact(&c).unwrap();
            return join(split_squarefree(&c, rng, depth + 1), split_squarefree(&q, rng, depth + 1));
        }
    }
    // collinear support: a univariate polynomial in one monomial
    let lat = AffineLattice::of_points(&s.support());
    if lat.dim() == 1 {
        return split_collinear(s, &lat.saturated(), rng);
    }
    // linear in some variable and primitive there: irreducible
    if s.variables().iter().any(|&v| s.degree_in(v) == 1) {
        return (vec![s.clone()], true);
    }
    // quadratic in some variable: discriminant decides
    if let Some(v) = s.variables().into_iter().find(|&v| s.degree_in(v) == 2) {
        return split_quadratic(s, v);
    }
    if certify_irreducible(s, rng) {
        return (vec![s.clone()], true);
    }
    (vec![s.clone()], false)
}

fn join(a: (Vec<Poly>, bool), b: (Vec<Poly>, bool)) -> (Vec<Poly>, bool) {
    let mut v = a.0;
    v.extend(b.0);
    (v, a.1 && b.1)
}

fn split_quadratic(s: &Poly, v: usize) -> (Vec<Poly>, bool) {
    let co = s.coefficients_in(v);
    let get = |k: u32| co.get(&k).cloned().unwrap_or_else(Poly::zero);
    let (a, b, c) = (get(2), get(1), get(0));
    let disc = &(&b * &b) - &(&(&a * &c).scale(&Rational::from_integer(4.into())));
    match poly_sqrt(&disc) {
        Some(r) => {
            // s = a (v - r1)(v - r2); factor 2a v + b - r
            let lin = &(&a.scale(&Rational::from_integer(2.into())).mul_monomial(&ExponentVector::unit(v), &Rational::one()) + &b) - &r;
            let f1 = primitive_normalize(&lin);
            let f1 = primitive_normalize(&f1.div_exact(&content_in(&f1, v)).unwrap());
            let f2 = s.div_exact(&f1).expect("quadratic splitting");
            (vec![f1, primitive_normalize(&f2)], true)
        }
        None => (vec![s.clone()], true),
    }
}

/// Exact square root of a polynomial over Q, if any.
pub fn poly_sqrt(d: &Poly) -> Option<Poly> {
    if d.is_zero() {
        return Some(Poly::zero());
    }
    let (ld, cd) = d.leading()?;
    let mut half = [0u32; NVARS];
    for v in 0..NVARS {
        if ld.get(v) % 2 == 1 {
            return None;
        }
        half[v] = ld.get(v) / 2;
    }
    let lead = Poly::monomial(ExponentVector(half), rational_sqrt(cd)?);
    let (lm, lc) = {
        let (e, c) = lead.leading().unwrap();
        (*e, c.clone())
    };
    let mut r = lead;
    for _ in 0..=d.len() * 4 + 8 {
        let rem = d - &(&r * &r);
        let Some((le, lcoef)) = rem.leading() else {
            return Some(r);
        };
        let m = le.checked_sub(&lm)?;
        if m >= lm {
            return None;
        }
        let c = lcoef.clone() / (lc.clone() * Rational::from_integer(2.into()));
        r.add_term(m, c);
    }
    None
}

fn split_collinear(s: &Poly, lat: &AffineLattice, rng: &mut ChaCha8Rng) -> (Vec<Poly>, bool) {
    // s = x^m * h(x^dir) with h(0) != 0
    let h = lat.to_univariate(s);
    let dir = lat.direction(0);
    let (_, hz) = h.primitive_integer();
    let polys = crate::zassenhaus::factor_squarefree(&hz, rng)
        .into_iter()
        .map(|u| {
            let uq = UniPoly::new(u.into_iter().map(Rational::from_integer).collect());
            primitive_normalize(&lat.from_univariate(&uq, &dir))
        })
        .collect();
    (polys, true)
}

/// Rational roots of a univariate polynomial with rational coefficients.
pub fn rational_roots(h: &UniPoly<Rational>) -> Vec<Rational> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    if h.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    // integer coefficients
    let mut den = BigInt::one();
    for c in h.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = h.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let mut roots = BTreeSet::new();
    let (k, _) = h.strip_s();
    if k > 0 {
        roots.insert(Rational::zero());
    }
    let a0 = ints[k].abs();
    let an = ints.last().unwrap().abs();
    // candidate p/q with p | a0, q | an; small enough in practice
    let divs = |n: &BigInt| -> Option<Vec<BigInt>> {
        let n = n.clone();
        let mut out = vec![];
        let mut i = BigInt::one();
        let lim = BigInt::from(2_000_000u64);
        while &i * &i <= n {
            if i > lim {
                return None;
            }
            if (&n % &i).is_zero() {
                out.push(i.clone());
                out.push(&n / &i);
            }
            i += 1;
        }
        Some(out)
    };
    if let (Some(ps), Some(qs)) = (divs(&a0), divs(&an)) {
        for p in &ps {
            for q in &qs {
                for sign in [1, -1] {
                    let r = Rational::new(p * BigInt::from(sign), q.clone());
                    if h.eval(&r).is_zero() {
                        roots.insert(r);
                    }
                }
            }
        }
    }
    roots.into_iter().collect()
}

fn to_zp<const P: u64>(h: &UniPoly<Rational>) -> Option<UniPoly<Zp<P>>> {
    let c: Option<Vec<Zp<P>>> = h.coeffs().iter().map(Zp::<P>::from_rational).collect();
    c.map(UniPoly::new)
}

fn allowed_degrees(degs: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &d in degs {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

fn pattern_update<const P: u64>(h: &UniPoly<Rational>, n: usize, allowed: &mut BTreeSet<usize>) {
    let Some(hp) = to_zp::<P>(h) else { return };
    if hp.degree() != Some(n) || !hp.is_squarefree() {
        return;
    }
    let sums = allowed_degrees(&hp.factor_degrees());
    allowed.retain(|d| sums.contains(d));
}

/// Multivariate irreducibility via specializations: for the variable `v`
/// chosen, substitute random values for the others and intersect the
/// possible factor degrees in `v`. A factor of `s` of `v`-degree `d` would
/// survive every specialization that keeps the leading coefficient and
/// square-freeness, so an empty intersection proves irreducibility
/// (content in `v` has been removed beforehand).
fn certify_irreducible(s: &Poly, rng: &mut ChaCha8Rng) -> bool {
    let vars = s.variables();
    for &v in &vars {
        let n = s.degree_in(v) as usize;
        let mut allowed: BTreeSet<usize> = (1..n).collect();
        for trial in 0..40 {
            if allowed.is_empty() {
                return true;
            }
            let mut point = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
            for &u in &vars {
                if u != v {
                    point[u] = Rational::from_integer(rng.gen_range(1..1000i64).into());
                }
            }
            let mut spec = s.clone();
            for &u in &vars {
                if u != v {
                    spec = spec.specialize(u, &point[u]);
                }
            }
            let h = UniPoly::new((0..=n as u32).map(|k| spec.coeff(&ExponentVector::unit(v).scaled(k))).collect());
            match trial % 5 {
                0 => pattern_update::<P1>(&h, n, &mut allowed),
                1 => pattern_update::<P2>(&h, n, &mut allowed),
                2 => pattern_update::<P3>(&h, n, &mut allowed),
                3 => pattern_update::<P4>(&h, n, &mut allowed),
                _ => pattern_update::<P5>(&h, n, &mut allowed),
            }
        }
        if allowed.is_empty() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn p(s: &str) -> Poly {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn gcd_basic() {
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x^2 + 2*x*y + y^2")), p("x + y"));
        assert_eq!(gcd(&p("z^2*t + z*t^2"), &p("z^3 + z^2*t")), p("z^2 + z*t"));
        assert_eq!(gcd(&p("x + 1"), &p("y + 1")), p("1"));
        assert_eq!(gcd(&p("2*x*y + 4*y"), &p("3*x*z + 6*z")), p("x + 2"));
    }

    #[test]
    fn squarefree() {
        let g = &p("z - t").pow(2) * &p("z + t");
        let d = squarefree_decomposition(&g);
        assert_eq!(d, vec![(p("z + t"), 1), (p("z - t"), 2)]);
    }

    #[test]
    fn factor_examples() {
        let f = factorize(&p("z^3 + z^2*t"), 0);
        assert_eq!(f.monomial, ExponentVector([0, 0, 2, 0]));
        assert_eq!(f.factors, vec![(p("z + t"), 1)]);
        assert_eq!(f.expand(), p("z^3 + z^2*t"));

        let f = factorize(&p("y^2*z + z^3 + t^3"), 0);
        assert_eq!(f.factors, vec![(p("y^2*z + z^3 + t^3"), 1)]);
        assert!(f.certified);

        let f = factorize(&p("x^2 - z^2*t^4"), 0);
        assert_eq!(f.factors.len(), 2);
        // normalized with positive grlex-leading coefficient
        assert!(f.factors.contains(&(p("z*t^2 - x"), 1)));
        assert!(f.factors.contains(&(p("z*t^2 + x"), 1)));
        assert_eq!(f.expand(), p("x^2 - z^2*t^4"));
    }

    #[test]
    fn factor_cones() {
        for s in ["y^3 + z^5 + t^15", "y^3 + y*z^3 + t^9", "x^2 + y^2 + z^2 + t^2"] {
            let f = factorize(&p(s), 7);
            assert_eq!(f.factors, vec![(p(s), 1)], "{s}");
            assert!(f.certified, "{s}");
        }
    }

    #[test]
    fn factor_collinear() {
        let g = p("z^6 - t^6");
        let f = factorize(&g, 0);
        assert_eq!(f.expand(), g);
        // (z-t)(z+t)(z^2+zt+t^2)(z^2-zt+t^2)
        assert_eq!(f.factors.len(), 4);
        assert!(f.certified);
    }

    #[test]
    fn sqrt_poly() {
        assert_eq!(poly_sqrt(&p("x^2 + 2*x*y + y^2")), Some(p("x + y")));
        assert_eq!(poly_sqrt(&p("x^2 + y^2")), None);
        assert_eq!(poly_sqrt(&p("4*z^2*t^8")), Some(p("2*z*t^4")));
    }
}
