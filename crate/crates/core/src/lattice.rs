//! Integer linear algebra on exponent vectors: the affine lattice spanned by
//! a support, and coordinates in an echelon basis.

use num_integer::Integer;
use num_traits::Zero;

use crate::polyring::{ExponentVector, Polynomial, NVARS};
use crate::scalar::{Field, Rational};
use crate::unipoly::UniPoly;

pub type IVec = [i64; NVARS];

pub fn sub(a: &IVec, b: &IVec) -> IVec {
    std::array::from_fn(|i| a[i] - b[i])
}

pub fn dot(a: &IVec, b: &IVec) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Echelon basis (row-style Hermite reduction) of the lattice spanned by `rows`.
pub fn echelon_basis(rows: &[IVec]) -> Vec<IVec> {
    let mut m: Vec<IVec> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).copied().collect();
    let mut basis = vec![];
    for col in 0..NVARS {
        loop {
            // pick the row with the smallest nonzero |entry| in this column
            let Some(piv) = (0..m.len()).filter(|&i| m[i][col] != 0).min_by_key(|&i| m[i][col].abs()) else {
                break;
            };
            let p = m[piv];
            let mut done = true;
            for (i, r) in m.iter_mut().enumerate() {
                if i != piv && r[col] != 0 {
                    let q = Integer::div_floor(&r[col], &p[col]);
                    for k in 0..NVARS {
                        r[k] -= q * p[k];
                    }
                    if r[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut p = m.swap_remove(piv);
                if p[col] < 0 {
                    p = p.map(|x| -x);
                }
                basis.push(p);
                m.retain(|r| r.iter().any(|&x| x != 0));
                break;
            }
        }
    }
    basis
}

/// `origin + span_Z(basis)` containing a point set.
#[derive(Clone, Debug)]
pub struct AffineLattice {
    pub origin: IVec,
    pub basis: Vec<IVec>,
}

impl AffineLattice {
    pub fn of_points(points: &[ExponentVector]) -> Self {
        let origin = points.first().map(|p| p.as_i64()).unwrap_or([0; NVARS]);
        let diffs: Vec<IVec> = points.iter().map(|p| sub(&p.as_i64(), &origin)).collect();
        AffineLattice { origin, basis: echelon_basis(&diffs) }
    }

    /// Same affine hull, basis made primitive (only for dimension <= 1,
    /// which is all the callers need).
    pub fn saturated(&self) -> Self {
        assert!(self.dim() <= 1);
        AffineLattice { origin: self.origin, basis: self.basis.iter().map(primitive).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn direction(&self, i: usize) -> IVec {
        self.basis[i]
    }

    /// Coordinates of `p - origin` in the basis; `None` if not in the lattice.
    pub fn coords(&self, p: &IVec) -> Option<Vec<i64>> {
        let mut r = sub(p, &self.origin);
        let mut out = vec![];
        for b in &self.basis {
            let col = b.iter().position(|&x| x != 0).unwrap();
            if r[col] % b[col] != 0 {
                return None;
            }
            let c = r[col] / b[col];
            for k in 0..NVARS {
                r[k] -= c * b[k];
            }
            out.push(c);
        }
        r.iter().all(|&x| x == 0).then_some(out)
    }

    /// Rewrite `f` (supported in the lattice) as a polynomial in `dim()`
    /// new variables (slots 0..dim), shifted so all exponents are >= 0.
    /// Returns the polynomial and the shift.
    pub fn reduce<C: Field>(&self, f: &Polynomial<C>) -> (Polynomial<C>, Vec<i64>) {
        let d = self.dim();
        let pts: Vec<(Vec<i64>, C)> = f
            .terms()
            .map(|(e, c)| (self.coords(&e.as_i64()).expect("point in lattice"), c.clone()))
            .collect();
        let mut shift = vec![0i64; d];
        for (c, _) in &pts {
            for i in 0..d {
                shift[i] = shift[i].min(c[i]);
            }
        }
        let out = Polynomial::from_terms(pts.into_iter().map(|(c, a)| {
            let mut e = [0u32; NVARS];
            for i in 0..d {
                e[i] = (c[i] - shift[i]) as u32;
            }
            (ExponentVector(e), a)
        }));
        (out, shift)
    }

    /// For a 1-dimensional lattice: `f = x^base * h(x^dir)` with `h(0) != 0`.
    pub fn to_univariate(&self, f: &Polynomial<Rational>) -> UniPoly<Rational> {
        assert_eq!(self.dim(), 1);
        let (r, _) = self.reduce(f);
        let n = r.degree_in(0);
        UniPoly::new((0..=n).map(|k| r.coeff(&ExponentVector::unit(0).scaled(k))).collect())
    }

    /// Inverse of [`to_univariate`] up to a monomial: `x^m * h(x^dir)` with
    /// the smallest `m` making it a polynomial.
    pub fn from_univariate(&self, h: &UniPoly<Rational>, dir: &IVec) -> Polynomial<Rational> {
        let terms: Vec<(IVec, Rational)> = h
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (dir.map(|d| d * k as i64), c.clone()))
            .collect();
        let mut lo = [0i64; NVARS];
        for (e, _) in &terms {
            for v in 0..NVARS {
                lo[v] = lo[v].min(e[v]);
            }
        }
        Polynomial::from_terms(
            terms.into_iter().map(|(e, c)| (ExponentVector(std::array::from_fn(|v| (e[v] - lo[v]) as u32)), c)),
        )
    }
}

/// Rank of a list of integer vectors.
pub fn rank(rows: &[IVec]) -> usize {
    echelon_basis(rows).len()
}

/// Normal vector (up to sign) of the hyperplane spanned by three vectors in
/// Z^4 via 3x3 minors; zero when they are dependent.
pub fn normal_of(a: &IVec, b: &IVec, c: &IVec) -> IVec {
    let det3 = |i: usize, j: usize, k: usize| -> i64 {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2)]
}

pub fn primitive(v: &IVec) -> IVec {
    let g = gcd_vec(v);
    if g == 0 {
        *v
    } else {
        v.map(|x| x / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_of_dependent_rows() {
        let b = echelon_basis(&[[2, 0, 0, 0], [0, 2, 0, 0], [2, 2, 0, 0], [1, 1, 0, 0]]);
        assert_eq!(b.len(), 2);
        // lattice generated is {(a,b): a+b even}
        let lat = AffineLattice { origin: [0; 4], basis: b };
        assert!(lat.coords(&[1, 1, 0, 0]).is_some());
        assert!(lat.coords(&[1, 0, 0, 0]).is_none());
    }

    #[test]
    fn normal_is_orthogonal() {
        let a = [1, 2, 0, 3];
        let b = [0, 1, 1, 1];
        let c = [2, 0, 5, 1];
        let n = normal_of(&a, &b, &c);
        assert_eq!(dot(&n, &a), 0);
        assert_eq!(dot(&n, &b), 0);
        assert_eq!(dot(&n, &c), 0);
        assert_ne!(n, [0; 4]);
    }

    #[test]
    fn univariate_roundtrip() {
        let f: Polynomial<Rational> = "z^6 - t^6".parse().unwrap();
        let lat = AffineLattice::of_points(&f.support()).saturated();
        assert_eq!(lat.dim(), 1);
        let h = lat.to_univariate(&f);
        assert_eq!(h.degree(), Some(6));
        let back = lat.from_univariate(&h, &lat.direction(0));
        assert_eq!(back.primitive(), f.primitive());
    }
}
