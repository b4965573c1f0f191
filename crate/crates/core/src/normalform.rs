//! Reduction of a cDV germ to the normal forms of type cD_n, cE6, cE7, cE8.
//!
//! The reducer follows the classical scheme: pick the grlex-smallest
//! monomial that is not allowed in the target shape and kill it with a
//! coordinate change that leaves all smaller monomials alone. Shifts
//! `v <- v - c*M` handle monomials linear in the pivot variable, truncated
//! binomial series `(1+u)^(-1/k)` handle the rest. Every change is recorded
//! and can be replayed with the same truncation.
//!
//! The type is decided from invariant orders (rank of the quadratic part,
//! multiplicity structure of the cubic part, orders of the y-linear and
//! y-free parts), not from the literal shape; the certificate carries a
//! separate flag telling whether the reduced equation matches the shape.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::factor;
use crate::polyring::{ExponentVector, Substitution, NVARS};
use crate::scalar::{binomial, int, rat, Field, Rational};
use crate::Poly;

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const T: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingularityType {
    Smooth,
    CA(u32),
    CD(u32),
    CE6,
    CE7,
    CE8,
    Other,
}

impl SingularityType {
    /// Checks the parameter range of the kind.
    pub fn is_valid(&self) -> bool {
        match self {
            SingularityType::CA(n) => *n >= 1,
            SingularityType::CD(n) => *n >= 4,
            _ => true,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, SingularityType::CE6 | SingularityType::CE7 | SingularityType::CE8)
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::Smooth => f.write_str("smooth"),
            SingularityType::CA(n) => write!(f, "cA({n})"),
            SingularityType::CD(n) => write!(f, "cD({n})"),
            SingularityType::CE6 => f.write_str("cE6"),
            SingularityType::CE7 => f.write_str("cE7"),
            SingularityType::CE8 => f.write_str("cE8"),
            SingularityType::Other => f.write_str("other"),
        }
    }
}

impl Serialize for SingularityType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("the zero polynomial does not define a hypersurface germ")]
    ZeroPolynomial,
    #[error("nonzero constant term {0}: the origin is not on the hypersurface")]
    ConstantTerm(String),
    #[error("no termination after {budget} coordinate changes; offending monomial {monomial}")]
    NoTermination { monomial: String, budget: usize },
    #[error("truncation degree {truncation} is below the degree {required} needed to certify the equation")]
    TruncationTooSmall { truncation: u32, required: u32 },
}

/// One checked inequality on the exponents of the reduced equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub description: String,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormCertificate {
    #[serde(rename = "type")]
    pub kind: SingularityType,
    pub reduced: Poly,
    pub applied_changes: Vec<Substitution<Rational>>,
    pub satisfied_constraints: Vec<Constraint>,
    /// the reduced equation has exactly the monomial pattern of its normal form
    pub shape_matched: bool,
    pub truncation: u32,
    pub notes: Vec<String>,
}

impl NormalFormCertificate {
    pub fn constraints_hold(&self) -> bool {
        self.satisfied_constraints.iter().all(|c| c.satisfied)
    }
}

pub fn default_truncation(f: &Poly) -> u32 {
    2 * f.total_degree() + 4
}

pub fn classify_type(f: &Poly) -> Result<SingularityType, NormalFormError> {
    Ok(reduce_to_normal_form(f, default_truncation(f))?.kind)
}

fn ev(e: [u32; NVARS]) -> ExponentVector {
    ExponentVector(e)
}

fn mono(e: ExponentVector, c: Rational) -> Poly {
    Poly::monomial(e, c)
}

/// `v * (1+u)^r` truncated at total degree `t`; `u` has no constant term.
fn series_replacement(v: usize, u: &Poly, r: &Rational, t: u32) -> Poly {
    let du = u.order().expect("nonzero u").max(1);
    let mut acc = Poly::one();
    let mut upow = Poly::one();
    let mut j = 1;
    while j * du < t {
        upow = upow.mul_truncated(u, t);
        if upow.is_zero() {
            break;
        }
        acc = &acc + &upow.scale(&binomial(r, j));
        j += 1;
    }
    (&Poly::var(v) * &acc).truncate(t)
}

/// What a rule does to a removable monomial.
enum Step {
    /// `v <- v - coeff * M`
    Shift(usize, Poly),
    /// `v <- v * (1+u)^(-1/k)`
    Series(usize, Poly, u32),
}

struct Reducer {
    f: Poly,
    trunc: u32,
    changes: Vec<Substitution<Rational>>,
    budget: usize,
    steps: usize,
}

impl Reducer {
    fn apply(&mut self, s: Substitution<Rational>) {
        if s.is_identity() {
            return;
        }
        self.f = s.apply(&self.f);
        self.changes.push(s);
    }

    /// Linear change `old_i = sum_j m[i][j] new_j`.
    fn linear(&mut self, m: [[Rational; NVARS]; NVARS]) {
        let r: [Poly; NVARS] = std::array::from_fn(|i| {
            let mut p = Poly::zero();
            for (j, c) in m[i].iter().enumerate() {
                p.add_term(ExponentVector::unit(j), c.clone());
            }
            p
        });
        self.apply(Substitution::new(r, self.trunc).expect("invertible change"));
    }

    /// Remove the monomials flagged by `rule`, one batch per round: the
    /// batch is every flagged monomial of the smallest degree handled by
    /// the same kind of change as the grlex-smallest one. Monomials
    /// divisible by a key monomial (other than the key itself) lie inside
    /// the Newton polyhedron and are left in the tail.
    fn run<F>(&mut self, keys: &[ExponentVector], rule: F) -> Result<(), NormalFormError>
    where
        F: Fn(&ExponentVector, &Rational) -> Option<Step>,
    {
        loop {
            let flagged: Vec<(ExponentVector, Step)> = self
                .f
                .terms()
                .filter(|(e, _)| !keys.iter().any(|k| k != *e && k.divides(e)))
                .filter_map(|(e, c)| rule(e, c).map(|s| (*e, s)))
                .collect();
            let Some((first, step0)) = flagged.first() else {
                return Ok(());
            };
            self.steps += 1;
            if self.steps > self.budget {
                return Err(NormalFormError::NoTermination { monomial: first.to_string(), budget: self.budget });
            }
            let d = first.degree();
            let same = |s: &Step| match (s, step0) {
                (Step::Shift(v, _), Step::Shift(w, _)) => v == w,
                (Step::Series(v, _, k), Step::Series(w, _, l)) => v == w && k == l,
                _ => false,
            };
            let mut acc = Poly::zero();
            for (e, s) in &flagged {
                if e.degree() == d && same(s) {
                    let (Step::Shift(_, m) | Step::Series(_, m, _)) = s;
                    acc = &acc + m;
                }
            }
            let t = self.trunc;
            let sub = match *step0 {
                Step::Shift(v, _) => Substitution::single(v, &Poly::var(v) - &acc, t),
                Step::Series(v, _, k) => Substitution::single(v, series_replacement(v, &acc, &rat(-1, k as i64), t), t),
            }
            .expect("nonzero replacement");
            self.apply(sub);
        }
    }
}

fn coeff(f: &Poly, e: [u32; NVARS]) -> Rational {
    f.coeff(&ev(e))
}

/// Quadratic form matrix of the degree-2 part.
fn quadratic_matrix(f: &Poly) -> [[Rational; NVARS]; NVARS] {
    let mut q: [[Rational; NVARS]; NVARS] = std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
    for (e, c) in f.homogeneous_part(2).terms() {
        let vars: Vec<usize> = (0..NVARS).filter(|&v| e.get(v) > 0).collect();
        if vars.len() == 1 {
            q[vars[0]][vars[0]] = c.clone();
        } else {
            let half = c / int(2);
            q[vars[0]][vars[1]] = half.clone();
            q[vars[1]][vars[0]] = half;
        }
    }
    q
}

/// Congruence diagonalization: returns `(P, d)` with `P^T Q P = diag(d)`.
fn diagonalize(q: &[[Rational; NVARS]; NVARS]) -> ([[Rational; NVARS]; NVARS], [Rational; NVARS]) {
    let mut a = q.clone();
    let mut p: [[Rational; NVARS]; NVARS] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() }));
    // column op col_j += c*col_k applied to P, and congruently to A
    fn add_col(a: &mut [[Rational; NVARS]; NVARS], p: &mut [[Rational; NVARS]; NVARS], j: usize, k: usize, c: &Rational) {
        for r in 0..NVARS {
            let v = a[r][k].clone() * c.clone();
            a[r][j] = a[r][j].clone() + v;
            let v = p[r][k].clone() * c.clone();
            p[r][j] = p[r][j].clone() + v;
        }
        for col in 0..NVARS {
            let v = a[k][col].clone() * c.clone();
            a[j][col] = a[j][col].clone() + v;
        }
    }
    for k in 0..NVARS {
        if a[k][k].is_zero() {
            let Some(j) = (k + 1..NVARS).find(|&j| !a[j][j].is_zero() || !a[k][j].is_zero()) else {
                continue;
            };
            // a_kk + 2c a_kj + c^2 a_jj is nonzero for c = 1 or c = 2
            let v1 = int(2) * a[k][j].clone() + a[j][j].clone();
            let c = if v1.is_zero() { int(2) } else { int(1) };
            add_col(&mut a, &mut p, k, j, &c);
        }
        for j in k + 1..NVARS {
            if !a[k][j].is_zero() {
                let c = -(a[k][j].clone() / a[k][k].clone());
                add_col(&mut a, &mut p, j, k, &c);
            }
        }
    }
    let d = std::array::from_fn(|i| a[i][i].clone());
    (p, d)
}

fn identity() -> [[Rational; NVARS]; NVARS] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() }))
}

/// Inverse of a 3x3 rational matrix, if invertible.
fn inverse3(m: [[Rational; 3]; 3]) -> Option<[[Rational; 3]; 3]> {
    let mut a = m;
    let mut inv: [[Rational; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() }));
    for col in 0..3 {
        let piv = (col..3).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = a[col][col].inv();
        for j in 0..3 {
            a[col][j] = a[col][j].clone() * s.clone();
            inv[col][j] = inv[col][j].clone() * s.clone();
        }
        for r in 0..3 {
            if r != col && !a[r][col].is_zero() {
                let c = a[r][col].clone();
                for j in 0..3 {
                    a[r][j] = a[r][j].clone() - c.clone() * a[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - c.clone() * inv[col][j].clone();
                }
            }
        }
    }
    Some(inv)
}

/// Coefficients of a linear form in (y, z, t).
fn linear_coeffs(l: &Poly) -> [Rational; 3] {
    std::array::from_fn(|i| l.coeff(&ExponentVector::unit(i + 1)))
}

/// Change of (y,z,t) making the given independent linear forms the new
/// leading coordinates, completed by unit vectors (later ones preferred).
fn adapt_coordinates(r: &mut Reducer, forms: &[[Rational; 3]]) {
    let unit = |k: usize| -> [Rational; 3] { std::array::from_fn(|j| if j == k { Rational::one() } else { Rational::zero() }) };
    let completions: Vec<Vec<usize>> = match forms.len() {
        1 => vec![vec![1, 2], vec![0, 2], vec![0, 1]],
        _ => vec![vec![2], vec![1], vec![0]],
    };
    let rows = completions
        .into_iter()
        .map(|ks| {
            let mut rows = forms.to_vec();
            rows.extend(ks.into_iter().map(unit));
            rows
        })
        .find(|rows| rank3(rows) == 3)
        .expect("independent forms");
    let m: [[Rational; 3]; 3] = [rows[0].clone(), rows[1].clone(), rows[2].clone()];
    let inv = inverse3(m).expect("independent forms");
    let mut full = identity();
    for i in 0..3 {
        for j in 0..3 {
            full[i + 1][j + 1] = inv[i][j].clone();
        }
    }
    r.linear(full);
}

fn rank3(rows: &[[Rational; 3]]) -> usize {
    let mut a: Vec<[Rational; 3]> = rows.to_vec();
    let mut rank = 0;
    for col in 0..3 {
        let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let c = a[r][col].clone() / a[rank][col].clone();
                for j in 0..3 {
                    a[r][j] = a[r][j].clone() - c.clone() * a[rank][j].clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Terms with the given y-exponent and no x, divided by that power of y.
fn y_slice(f: &Poly, ey: u32) -> Poly {
    f.filter(|e| e.get(X) == 0 && e.get(Y) == ey).div_monomial(&ev([0, ey, 0, 0]))
}

/// Order of a polynomial, `None` for zero.
fn ord(p: &Poly) -> Option<u32> {
    p.order()
}

/// The rule removing x from every monomial except `x^2`.
fn x_rule(c: Rational) -> impl Fn(&ExponentVector, &Rational) -> Option<Step> {
    move |e, a| {
        let ex = e.get(X);
        if ex == 0 || *e == ev([2, 0, 0, 0]) {
            return None;
        }
        let m = e.with(X, 0);
        if ex == 1 {
            Some(Step::Shift(X, mono(m, a / (int(2) * c.clone()))))
        } else {
            Some(Step::Series(X, mono(e.with(X, ex - 2), a / c.clone()), 2))
        }
    }
}

/// Removes `y^b M` (b >= 2, other than `y^3`) against `c*y^3`.
fn y_cube_rule(c: Rational) -> impl Fn(&ExponentVector, &Rational) -> Option<Step> {
    move |e, a| {
        let ey = e.get(Y);
        if e.get(X) > 0 || ey < 2 || *e == ev([0, 3, 0, 0]) {
            return None;
        }
        if ey == 2 {
            Some(Step::Shift(Y, mono(e.with(Y, 0), a / (int(3) * c.clone()))))
        } else {
            Some(Step::Series(Y, mono(e.with(Y, ey - 3), a / c.clone()), 3))
        }
    }
}

/// Removes everything against `c*z^p` among monomials with `y`-degree at
/// most one and z-degree at least `p - 1`.
fn z_power_rule(c: Rational, p: u32) -> impl Fn(&ExponentVector, &Rational) -> Option<Step> {
    move |e, a| {
        let ez = e.get(Z);
        if e.get(X) > 0 || e.get(Y) > 1 || ez + 1 < p || *e == ev([0, 0, p, 0]) {
            return None;
        }
        if ez + 1 == p {
            Some(Step::Shift(Z, mono(e.with(Z, 0), a / (int(p as i64) * c.clone()))))
        } else {
            Some(Step::Series(Z, mono(e.with(Z, ez - p), a / c.clone()), p))
        }
    }
}

/// cE7: removes `y z^g t^d` (g >= 2, other than `y z^3`) against `c*y*z^3`.
fn yz3_rule(c: Rational) -> impl Fn(&ExponentVector, &Rational) -> Option<Step> {
    move |e, a| {
        let ez = e.get(Z);
        if e.get(X) > 0 || e.get(Y) != 1 || ez < 2 || *e == ev([0, 1, 3, 0]) {
            return None;
        }
        if ez == 2 {
            Some(Step::Shift(Z, mono(e.with(Y, 0).with(Z, 0), a / (int(3) * c.clone()))))
        } else {
            Some(Step::Series(Z, mono(e.with(Y, 0).with(Z, ez - 3), a / c.clone()), 3))
        }
    }
}

/// cD: `c*y^2*z` absorbs `y^b M` (b >= 2) through z and `y z^j t^l` (j >= 1) through y.
fn cd_rule(c: Rational) -> impl Fn(&ExponentVector, &Rational) -> Option<Step> {
    move |e, a| {
        if e.get(X) > 0 || e.degree() < 4 {
            return None;
        }
        let ey = e.get(Y);
        if ey >= 2 {
            return Some(Step::Shift(Z, mono(e.with(Y, ey - 2), a / c.clone())));
        }
        if ey == 1 && e.get(Z) >= 1 {
            return Some(Step::Shift(Y, mono(e.with(Y, 0).with(Z, e.get(Z) - 1), a / (int(2) * c.clone()))));
        }
        None
    }
}

fn combine<A, B>(a: A, b: B) -> impl Fn(&ExponentVector, &Rational) -> Option<Step>
where
    A: Fn(&ExponentVector, &Rational) -> Option<Step>,
    B: Fn(&ExponentVector, &Rational) -> Option<Step>,
{
    move |e, c| a(e, c).or_else(|| b(e, c))
}

/// Makes `f` contain `target` by a shear `t <- t + lambda*z` if needed.
fn ensure_monomial(r: &mut Reducer, target: ExponentVector) {
    if r.f.contains(&target) {
        return;
    }
    let g = r.f.homogeneous_part(target.degree());
    for lambda in 1..=(target.degree() as i64 + 1) {
        let s = Substitution::single(T, &Poly::var(T) + &Poly::var(Z).scale(&int(lambda)), r.trunc).unwrap();
        if s.apply(&g).contains(&target) {
            r.apply(s);
            return;
        }
    }
}

fn tail_constraints(f: &Poly, jmax: u32, bound: u32) -> Vec<Constraint> {
    y_slice(f, 0)
        .terms()
        .filter(|(e, _)| e.get(Z) <= jmax && e.get(X) == 0)
        .map(|(e, _)| {
            let (j, b) = (e.get(Z), e.get(T));
            Constraint { description: format!("{e}: {j} + {b} >= {bound}"), satisfied: j + b >= bound }
        })
        .collect()
}

/// Every monomial is allowed or dominated by a key monomial.
fn only_allowed(f: &Poly, keys: &[ExponentVector], allowed: impl Fn(&ExponentVector) -> bool) -> bool {
    f.terms().all(|(e, _)| allowed(e) || keys.iter().any(|k| k.divides(e)))
}

pub fn reduce_to_normal_form(f: &Poly, truncation: u32) -> Result<NormalFormCertificate, NormalFormError> {
    if f.is_zero() {
        return Err(NormalFormError::ZeroPolynomial);
    }
    let c0 = f.constant_term();
    if !c0.is_zero() {
        return Err(NormalFormError::ConstantTerm(c0.to_string()));
    }
    let required = f.total_degree();
    if truncation < required {
        return Err(NormalFormError::TruncationTooSmall { truncation, required });
    }
    let mut r = Reducer { f: f.clone(), trunc: truncation, changes: vec![], budget: 10 * f.len(), steps: 0 };
    let mut notes = vec![];

    let done = |r: Reducer, kind, constraints, shape, notes| {
        Ok(NormalFormCertificate {
            kind,
            reduced: r.f,
            applied_changes: r.changes,
            satisfied_constraints: constraints,
            shape_matched: shape,
            truncation,
            notes,
        })
    };

    if !f.homogeneous_part(1).is_zero() {
        return done(r, SingularityType::Smooth, vec![], false, vec!["nonzero linear part".into()]);
    }

    let q = quadratic_matrix(&r.f);
    let (p, d) = diagonalize(&q);
    let rank = d.iter().filter(|v| !v.is_zero()).count();
    if rank == 0 {
        notes.push("multiplicity at least 3".into());
        return done(r, SingularityType::Other, vec![], false, notes);
    }
    if rank >= 3 {
        return done(r, SingularityType::CA(1), vec![], false, notes);
    }
    if rank == 2 {
        // move the two nondegenerate directions to x and y
        let nz: Vec<usize> = (0..NVARS).filter(|&i| !d[i].is_zero()).collect();
        let mut order: Vec<usize> = nz.clone();
        order.extend((0..NVARS).filter(|i| !nz.contains(i)));
        let m: [[Rational; NVARS]; NVARS] = std::array::from_fn(|i| std::array::from_fn(|j| p[i][order[j]].clone()));
        r.linear(m);
        let cx = coeff(&r.f, [2, 0, 0, 0]);
        let cy = coeff(&r.f, [0, 2, 0, 0]);
        let y_rule = move |e: &ExponentVector, a: &Rational| {
            let ey = e.get(Y);
            if e.get(X) > 0 || ey == 0 || *e == ev([0, 2, 0, 0]) {
                return None;
            }
            if ey == 1 {
                Some(Step::Shift(Y, mono(e.with(Y, 0), a / (int(2) * cy.clone()))))
            } else {
                Some(Step::Series(Y, mono(e.with(Y, ey - 2), a / cy.clone()), 2))
            }
        };
        r.run(&[], combine(x_rule(cx), y_rule))?;
        let h = r.f.filter(|e| e.get(X) == 0 && e.get(Y) == 0);
        return match ord(&h) {
            Some(o) => done(r, SingularityType::CA(o - 1), vec![], false, notes),
            None => {
                notes.push(format!("no term free of x and y up to degree {truncation}"));
                done(r, SingularityType::Other, vec![], false, notes)
            }
        };
    }

    // rank one: Q = c * L^2; bring L to x
    let i = (0..NVARS).find(|&i| !q[i][i].is_zero()).expect("rank one form has a nonzero diagonal");
    let l: [Rational; NVARS] = std::array::from_fn(|j| q[i][j].clone() / q[i][i].clone());
    let mut m = identity();
    if !l[X].is_zero() {
        if (1..NVARS).any(|j| !l[j].is_zero()) {
            for j in 0..NVARS {
                m[X][j] = if j == X { l[X].inv() } else { -(l[j].clone() / l[X].clone()) };
            }
        }
    } else {
        let i = (1..NVARS).find(|&j| !l[j].is_zero()).unwrap();
        m[X] = std::array::from_fn(|j| if j == i { Rational::one() } else { Rational::zero() });
        m[i] = std::array::from_fn(|j| {
            if j == X {
                l[i].inv()
            } else if j == i {
                Rational::zero()
            } else {
                -(l[j].clone() / l[i].clone())
            }
        });
    }
    r.linear(m);
    let cx = coeff(&r.f, [2, 0, 0, 0]);
    r.run(&[], x_rule(cx.clone()))?;

    let g3 = r.f.homogeneous_part(3);
    if g3.is_zero() {
        notes.push("no cubic term after removing x".into());
        return done(r, SingularityType::Other, vec![], false, notes);
    }
    let mut g = g3.clone();
    for v in [Y, Z, T] {
        g = factor::gcd(&g, &g3.derivative(v));
    }
    match g.total_degree() {
        0 => reduce_cd(r, 4, notes, truncation),
        1 => {
            let lp = linear_coeffs(&g);
            let mp = linear_coeffs(&g3.div_exact(&(&g * &g)).expect("l^2 divides the cubic"));
            adapt_coordinates(&mut r, &[lp, mp]);
            reduce_cd(r, 0, notes, truncation)
        }
        _ => {
            let l = g3.div_exact(&g).expect("l^3 cubic");
            adapt_coordinates(&mut r, &[linear_coeffs(&l)]);
            reduce_ce(r, notes, truncation)
        }
    }
}

/// `fixed_n` is 4 for a reduced cubic, 0 when n is read off the orders.
fn reduce_cd(
    mut r: Reducer,
    fixed_n: u32,
    mut notes: Vec<String>,
    truncation: u32,
) -> Result<NormalFormCertificate, NormalFormError> {
    let c = coeff(&r.f, [0, 2, 1, 0]);
    if !c.is_zero() {
        r.run(&[ev([0, 2, 1, 0])], cd_rule(c.clone()))?;
    } else {
        notes.push("no y^2*z term; cubic left as is".into());
    }
    let n_of = |f: &Poly| -> Option<u32> {
        let h = y_slice(f, 0).filter(|e| e.degree() > 0);
        let k = y_slice(f, 1);
        let a = ord(&h);
        let b = ord(&k).map(|o| 2 * o - 1);
        match (a, b) {
            (None, None) => None,
            (Some(a), None) => Some(a + 1),
            (None, Some(b)) => Some(b + 1),
            (Some(a), Some(b)) => Some(a.min(b) + 1),
        }
    };
    let n = if fixed_n > 0 { Some(fixed_n) } else { n_of(&r.f) };
    let Some(n) = n else {
        notes.push(format!("y-free and y-linear parts vanish up to degree {truncation}"));
        return Ok(NormalFormCertificate {
            kind: SingularityType::Other,
            reduced: r.f,
            applied_changes: r.changes,
            satisfied_constraints: vec![],
            shape_matched: false,
            truncation,
            notes,
        });
    };
    if fixed_n == 0 && !c.is_zero() {
        let h = y_slice(&r.f, 0).filter(|e| e.degree() > 0);
        if ord(&h) == Some(n - 1) && !r.f.contains(&ev([0, 0, n - 1, 0])) {
            ensure_monomial(&mut r, ev([0, 0, n - 1, 0]));
            r.run(&[ev([0, 2, 1, 0])], cd_rule(c.clone()))?;
        }
    }
    let zp = ev([0, 0, n - 1, 0]);
    let shape = !c.is_zero()
        && r.f.contains(&zp)
        && only_allowed(&r.f, &[ev([0, 2, 1, 0]), zp], |e| {
            *e == ev([2, 0, 0, 0])
                || *e == ev([0, 2, 1, 0])
                || (e.get(X) == 0 && e.get(Y) == 0)
                || (e.get(X) == 0 && e.get(Y) == 1 && e.get(Z) == 0)
        });
    let constraints = tail_constraints(&r.f, n.saturating_sub(2), n - 1);
    Ok(NormalFormCertificate {
        kind: SingularityType::CD(n),
        reduced: r.f,
        applied_changes: r.changes,
        satisfied_constraints: constraints,
        shape_matched: shape,
        truncation,
        notes,
    })
}

fn reduce_ce(mut r: Reducer, mut notes: Vec<String>, truncation: u32) -> Result<NormalFormCertificate, NormalFormError> {
    let cy = coeff(&r.f, [0, 3, 0, 0]);
    // removing y^2*M (deg M >= 2) only adds order >= 4 to the y-linear part
    // and order >= 6 to the y-free part, so the orders can be read now
    let a = ord(&y_slice(&r.f, 1));
    let b = ord(&y_slice(&r.f, 0).filter(|e| e.degree() > 0));
    let kind = match (a, b) {
        (_, Some(4)) => SingularityType::CE6,
        (Some(3), Some(b)) if b >= 5 => SingularityType::CE7,
        (Some(3), None) => SingularityType::CE7,
        (a, Some(5)) if a.map_or(true, |a| a >= 4) => SingularityType::CE8,
        _ => SingularityType::Other,
    };
    let fin = |r: Reducer, kind, constraints, shape, notes| {
        Ok(NormalFormCertificate {
            kind,
            reduced: r.f,
            applied_changes: r.changes,
            satisfied_constraints: constraints,
            shape_matched: shape,
            truncation,
            notes,
        })
    };
    let xy = |e: &ExponentVector| *e == ev([2, 0, 0, 0]) || *e == ev([0, 3, 0, 0]);
    match kind {
        SingularityType::CE6 => {
            ensure_monomial(&mut r, ev([0, 0, 4, 0]));
            let c4 = coeff(&r.f, [0, 0, 4, 0]);
            r.run(&[ev([0, 3, 0, 0]), ev([0, 0, 4, 0])], combine(y_cube_rule(cy), z_power_rule(c4, 4)))?;
            let shape = r.f.contains(&ev([0, 0, 4, 0]))
                && only_allowed(&r.f, &[ev([0, 3, 0, 0]), ev([0, 0, 4, 0])], |e| xy(e) || *e == ev([0, 0, 4, 0]) || (e.get(X) == 0 && e.get(Y) <= 1 && e.get(Z) <= 2));
            let cons = tail_constraints(&r.f, 2, 4);
            fin(r, kind, cons, shape, notes)
        }
        SingularityType::CE8 => {
            ensure_monomial(&mut r, ev([0, 0, 5, 0]));
            let c5 = coeff(&r.f, [0, 0, 5, 0]);
            r.run(&[ev([0, 3, 0, 0]), ev([0, 0, 5, 0])], combine(y_cube_rule(cy), z_power_rule(c5, 5)))?;
            let shape = r.f.contains(&ev([0, 0, 5, 0]))
                && only_allowed(&r.f, &[ev([0, 3, 0, 0]), ev([0, 0, 5, 0])], |e| xy(e) || *e == ev([0, 0, 5, 0]) || (e.get(X) == 0 && e.get(Y) <= 1 && e.get(Z) <= 3));
            let cons = tail_constraints(&r.f, 3, 5);
            fin(r, kind, cons, shape, notes)
        }
        SingularityType::CE7 => {
            ensure_monomial(&mut r, ev([0, 1, 3, 0]));
            let c7 = coeff(&r.f, [0, 1, 3, 0]);
            r.run(&[ev([0, 3, 0, 0]), ev([0, 1, 3, 0])], combine(y_cube_rule(cy), yz3_rule(c7)))?;
            let shape = r.f.contains(&ev([0, 1, 3, 0]))
                && only_allowed(&r.f, &[ev([0, 3, 0, 0]), ev([0, 1, 3, 0])], |e| {
                    xy(e) || *e == ev([0, 1, 3, 0]) || (e.get(X) == 0 && (e.get(Y) == 0 || (e.get(Y) == 1 && e.get(Z) <= 1)))
                });
            let k = y_slice(&r.f, 0).terms().filter(|(e, _)| e.get(T) == 0).map(|(e, _)| e.get(Z)).min();
            let cons = vec![match k {
                Some(k) => Constraint { description: format!("k = {k} >= 5"), satisfied: k >= 5 },
                None => Constraint {
                    description: format!("no pure power of z up to degree {truncation}"),
                    satisfied: true,
                },
            }];
            fin(r, kind, cons, shape, notes)
        }
        _ => {
            r.run(&[ev([0, 3, 0, 0])], y_cube_rule(cy))?;
            notes.push(format!(
                "orders of the y-linear and y-free parts: {}, {}",
                a.map_or("none".into(), |v| v.to_string()),
                b.map_or("none".into(), |v| v.to_string())
            ));
            fin(r, kind, vec![], false, notes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn p(s: &str) -> Poly {
        parse_polynomial(s).unwrap()
    }

    fn kind(s: &str) -> SingularityType {
        classify_type(&p(s)).unwrap()
    }

    #[test]
    fn examples_classify() {
        assert_eq!(kind("x^2 + y^2*z + z^3 + t^3"), SingularityType::CD(4));
        assert_eq!(kind("x^2 + y^3 + y*z^3 + t^9"), SingularityType::CE7);
        assert_eq!(kind("x^2 + y^3 + z^4 + t^4"), SingularityType::CE6);
        assert_eq!(kind("x^2 + y^3 + z^5 + t^15"), SingularityType::CE8);
        assert_eq!(kind("x^2 + y^2*z + z^5 + t^6"), SingularityType::CD(6));
        assert_eq!(kind("x^2 + y^2*z + z^5 + y*t^2"), SingularityType::CD(4));
        assert_eq!(kind("x + y^2"), SingularityType::Smooth);
        assert_eq!(kind("x^2 + y^2 + z^2 + t^2"), SingularityType::CA(1));
        assert_eq!(kind("x*y + z^3 + t^5"), SingularityType::CA(2));
        assert_eq!(kind("x^3 + y^3 + z^3 + t^3"), SingularityType::Other);
        assert!(matches!(classify_type(&p("1 + x^2")), Err(NormalFormError::ConstantTerm(_))));
    }

    #[test]
    fn completes_the_square() {
        let c = reduce_to_normal_form(&p("x^2 + 2*x*t^3 + y^3 + z^4"), 12).unwrap();
        assert_eq!(c.reduced, p("x^2 + y^3 + z^4 - t^6"));
        assert_eq!(c.applied_changes.len(), 1);
        assert_eq!(c.applied_changes[0].replacement(0), &p("x - t^3"));
        assert_eq!(c.kind, SingularityType::CE6);
    }

    #[test]
    fn removes_y_squared() {
        let c = reduce_to_normal_form(&p("x^2 + y^3 + 3*y^2*t^2 + z^4"), 12).unwrap();
        assert_eq!(c.reduced, p("x^2 + y^3 - 3*y*t^4 + 2*t^6 + z^4"));
        assert_eq!(c.applied_changes[0].replacement(1), &p("y - t^2"));
        assert!(c.shape_matched);
    }

    #[test]
    fn normal_form_is_fixed() {
        let f = p("x^2 + y^3 + z^4 + t^5 + y*z*t^3");
        let c = reduce_to_normal_form(&f, default_truncation(&f)).unwrap();
        assert_eq!(c.reduced, f);
        assert!(c.applied_changes.is_empty());
        assert!(c.shape_matched && c.constraints_hold());
    }

    #[test]
    fn replay_and_idempotence() {
        for s in [
            "x^2 + x*y*z + y^3 + y^2*z^2 + z^4 + t^7",
            "x^2 + 3*x^3*t + y^2*z + y*z^2*t + z^5 + t^8",
            "x^2 + y^3 + y*z^3 + y*z^2*t^2 + t^9 + z^6",
            "x^2 + 2*x*y + y^2 + z^3 + t^5 + y^2*z",
            "x^2 + y^3 + z^5 + y*z^4 + t^11",
        ] {
            let f = p(s);
            let tr = default_truncation(&f);
            let c = reduce_to_normal_form(&f, tr).unwrap();
            let mut g = f.clone();
            for sub in &c.applied_changes {
                g = sub.apply(&g);
            }
            assert_eq!(g.truncate(tr), c.reduced, "{s}");
            assert!(c.reduced.terms().all(|(e, _)| e.get(0) == 0 || *e == ev([2, 0, 0, 0])), "{s}");
            let again = reduce_to_normal_form(&c.reduced, tr).unwrap();
            assert!(again.applied_changes.is_empty(), "{s}: {:?}", again.applied_changes);
            assert_eq!(again.kind, c.kind);
        }
    }

    #[test]
    fn linear_normalizations() {
        // l^2 m cubic in skew coordinates: (y+z)^2 * (z - t)
        let yz = p("y + z");
        let f = &(&p("x^2 + t^5") + &(&(&yz * &yz) * &p("z - t")));
        let c = reduce_to_normal_form(f, 20).unwrap();
        assert!(matches!(c.kind, SingularityType::CD(_)), "{:?}", c.kind);
        // y^3 hidden as (y + t)^3
        let yt = p("y + t");
        let f = &p("x^2 + z^4") + &(&(&yt * &yt) * &yt);
        assert_eq!(classify_type(&f).unwrap(), SingularityType::CE6);
        // cE6 with z^4 missing from the quartic tail until t is sheared
        let c = reduce_to_normal_form(&p("x^2 + y^3 + z^3*t + t^4"), 16).unwrap();
        assert_eq!(c.kind, SingularityType::CE6);
        assert!(c.shape_matched, "{}", c.reduced);
    }

    #[test]
    fn symmetric_and_rescaled() {
        let cases = ["x^2 + y^2*z + z^3 + t^3", "x^2 + y^3 + y*z^3 + t^9", "x^2 + y^3 + z^5 + t^7", "x^2 + y^2*z + z^6 + t^7"];
        for s in cases {
            let f = p(s);
            let swapped = f.map_exponents(|e| ExponentVector([e.get(0), e.get(1), e.get(3), e.get(2)]));
            let scaled = Substitution::single(2, Poly::var(2).scale(&rat(3, 2)), 40).unwrap().apply(&f);
            assert_eq!(classify_type(&swapped).unwrap(), classify_type(&f).unwrap(), "{s}");
            assert_eq!(classify_type(&scaled).unwrap(), classify_type(&f).unwrap(), "{s}");
        }
    }
}
