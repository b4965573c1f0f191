//! Univariate factorization over Z: factor modulo a small prime, Hensel-lift
//! to a power exceeding the coefficient bound, recombine.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Field, Rational, Zp};
use crate::unipoly::UniPoly;

type ZPoly = Vec<BigInt>;

fn trim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect())
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn to_zp<const P: u64>(a: &ZPoly) -> UniPoly<Zp<P>> {
    UniPoly::new(a.iter().map(Zp::<P>::from_bigint).collect())
}

fn from_zp<const P: u64>(a: &UniPoly<Zp<P>>) -> ZPoly {
    a.coeffs().iter().map(|c| BigInt::from(c.value())).collect()
}

fn to_rat(a: &ZPoly) -> UniPoly<Rational> {
    UniPoly::new(a.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

fn pow_mod_big<const P: u64>(base: &UniPoly<Zp<P>>, e: &BigUint, m: &UniPoly<Zp<P>>) -> UniPoly<Zp<P>> {
    let mut acc = UniPoly::one().rem(m);
    for i in (0..e.bits()).rev() {
        acc = acc.mul_mod(&acc, m);
        if e.bit(i) {
            acc = acc.mul_mod(base, m);
        }
    }
    acc
}

/// Extended Euclid: (s, t) with s*a + t*b = 1.
fn bezout<const P: u64>(a: &UniPoly<Zp<P>>, b: &UniPoly<Zp<P>>) -> (UniPoly<Zp<P>>, UniPoly<Zp<P>>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = r1;
        r1 = r;
        let s = s0.sub(&q.mul(&s1));
        s0 = s1;
        s1 = s;
        let t = t0.sub(&q.mul(&t1));
        t0 = t1;
        t1 = t;
    }
    let inv = r0.lc().inv();
    (s0.scale(&inv), t0.scale(&inv))
}

/// Complete factorization of a monic square-free polynomial mod P.
fn factor_mod_p<const P: u64>(f: &UniPoly<Zp<P>>, rng: &mut ChaCha8Rng) -> Vec<UniPoly<Zp<P>>> {
    let mut f = f.monic();
    let mut out = vec![];
    let x = UniPoly::<Zp<P>>::s();
    let mut h = x.clone();
    let mut d = 1;
    while f.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(P, &f);
        let g = h.sub(&x).gcd(&f);
        if g.degree().unwrap_or(0) > 0 {
            equal_degree(&g, d, rng, &mut out);
            f = f.div_rem(&g).0;
            h = h.rem(&f);
        }
        d += 1;
    }
    if f.degree().unwrap_or(0) > 0 {
        out.push(f);
    }
    out
}

fn equal_degree<const P: u64>(g: &UniPoly<Zp<P>>, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly<Zp<P>>>) {
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.monic());
        return;
    }
    let e: BigUint = (BigUint::from(P).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = UniPoly::new((0..n).map(|_| Zp::<P>::new(rng.gen_range(0..P))).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let w = pow_mod_big(&a, &e, g).sub(&UniPoly::one());
        let h = w.gcd(g);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            equal_degree(&h, d, rng, out);
            equal_degree(&g.div_rem(&h).0, d, rng, out);
            return;
        }
    }
}

/// `a + m*b`
fn add_scaled(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() + m * b.get(i).cloned().unwrap_or_default()).collect())
}

struct Lifter {
    p: BigInt,
    pk: BigInt,
    k: u32,
}

impl Lifter {
    /// Lift `f ≡ a*b (mod p)` (f, a, b monic) to modulus p^k.
    fn lift_pair<const P: u64>(&self, f: &ZPoly, a0: &UniPoly<Zp<P>>, b0: &UniPoly<Zp<P>>) -> (ZPoly, ZPoly) {
        let (_, t) = bezout(a0, b0);
        let mut a = from_zp(a0);
        let mut b = from_zp(b0);
        let mut m = self.p.clone();
        for _ in 1..self.k {
            let next = &m * &self.p;
            let diff = zmod(&zsub(&zmod(f, &next), &zmul(&a, &b)), &next);
            let e: ZPoly = diff.iter().map(|c| c / &m).collect();
            let e = to_zp::<P>(&e);
            let ap = to_zp::<P>(&a);
            let bp = to_zp::<P>(&b);
            let da = e.mul(&t).rem(&ap);
            let db = e.sub(&da.mul(&bp)).div_rem(&ap).0;
            a = zmod(&add_scaled(&a, &from_zp(&da), &m), &next);
            b = zmod(&add_scaled(&b, &from_zp(&db), &m), &next);
            m = next;
        }
        (a, b)
    }

    fn lift_all<const P: u64>(&self, f: &ZPoly, factors: &[UniPoly<Zp<P>>]) -> Vec<ZPoly> {
        if factors.len() == 1 {
            return vec![zmod(f, &self.pk)];
        }
        let (l, r) = factors.split_at(factors.len() / 2);
        let prod = |fs: &[UniPoly<Zp<P>>]| fs.iter().fold(UniPoly::one(), |acc, g| acc.mul(g));
        let (a, b) = self.lift_pair::<P>(f, &prod(l), &prod(r));
        let mut out = self.lift_all::<P>(&a, l);
        out.extend(self.lift_all::<P>(&b, r));
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

fn content(p: &ZPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &ZPoly) -> ZPoly {
    let mut c = content(p);
    if p.last().is_some_and(|l| l.is_negative()) {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

fn try_prime<const P: u64>(f: &ZPoly, rng: &mut ChaCha8Rng) -> Option<Vec<UniPoly<Zp<P>>>> {
    let lc = f.last()?;
    if (lc % BigInt::from(P)).is_zero() {
        return None;
    }
    let fp = to_zp::<P>(f);
    if !fp.is_squarefree() {
        return None;
    }
    Some(factor_mod_p(&fp, rng))
}

/// Irreducible factors over Z of a primitive square-free integer
/// polynomial of positive degree (positive leading coefficients).
pub fn factor_squarefree(f: &[BigInt], rng: &mut ChaCha8Rng) -> Vec<Vec<BigInt>> {
    let f = primitive(&trim(f.to_vec()));
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    macro_rules! attempt {
        ($($p:literal),*) => {{
            let mut best: Option<(u64, usize)> = None;
            $(
                if let Some(fs) = try_prime::<$p>(&f, rng) {
                    if best.map_or(true, |(_, c)| fs.len() < c) {
                        best = Some(($p, fs.len()));
                    }
                }
            )*
            best
        }};
    }
    let Some((p, _)) = attempt!(10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079, 10091, 10093) else {
        return vec![f];
    };
    macro_rules! run {
        ($($q:literal),*) => {
            match p {
                $($q => zassenhaus::<$q>(&f, rng),)*
                _ => unreachable!(),
            }
        };
    }
    run!(10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079, 10091, 10093)
}

fn zassenhaus<const P: u64>(f: &ZPoly, rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
    let factors = try_prime::<P>(f, rng).expect("prime was checked");
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    let n = f.len() - 1;
    let lc = f.last().unwrap().clone();
    // Mignotte-style bound on the coefficients of any factor, times lc
    let norm: BigInt = f.iter().map(|c| c.abs()).max().unwrap() * BigInt::from(n as u64 + 1);
    let bound = (BigInt::one() << n) * norm * lc.abs() * 2;
    let p = BigInt::from(P);
    let mut k = 1;
    let mut pk = p.clone();
    while pk <= bound {
        pk *= &p;
        k += 1;
    }
    let lc_inv = lc.modinv(&pk).expect("lc is a unit mod p");
    let monic_f = zmod(&f.iter().map(|c| c * &lc_inv).collect(), &pk);
    let lifter = Lifter { p: p.clone(), pk: pk.clone(), k };
    let mut lifted = lifter.lift_all::<P>(&monic_f, &factors);

    let mut rest = f.clone();
    let mut out = vec![];
    let mut d = 1;
    while 2 * d <= lifted.len() {
        let mut found = false;
        for combo in combinations(lifted.len(), d) {
            let lcr = rest.last().unwrap().clone();
            let mut g = vec![lcr];
            for &i in &combo {
                g = zmod(&zmul(&g, &lifted[i]), &pk);
            }
            let g = primitive(&symmetric(&g, &pk));
            let (q, r) = to_rat(&rest).div_rem(&to_rat(&g));
            if r.is_zero() {
                out.push(g);
                rest = primitive(&q.coeffs().iter().map(|c| c.to_integer()).collect());
                let keep: Vec<ZPoly> =
                    lifted.iter().enumerate().filter(|(i, _)| !combo.contains(i)).map(|(_, x)| x.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            d += 1;
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cyclotomic_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // u^4 + u^2 + 1 = (u^2+u+1)(u^2-u+1)
        let mut fs = factor_squarefree(&z(&[1, 0, 1, 0, 1]), &mut rng);
        fs.sort();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&z(&[1, 1, 1])));
        assert!(fs.contains(&z(&[1, -1, 1])));
    }

    #[test]
    fn irreducible_stays() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(factor_squarefree(&z(&[1, 0, 0, 0, 1]), &mut rng).len(), 1);
        assert_eq!(factor_squarefree(&z(&[-2, 0, 0, 1]), &mut rng).len(), 1);
    }

    #[test]
    fn non_monic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // (2u+3)(3u^2-5)(u^3+u+7)
        let f = zmul(&zmul(&z(&[3, 2]), &z(&[-5, 0, 3])), &z(&[7, 1, 0, 1]));
        let fs = factor_squarefree(&f, &mut rng);
        assert_eq!(fs.len(), 3);
        let prod = fs.iter().fold(z(&[1]), |a, b| zmul(&a, b));
        assert_eq!(primitive(&prod), primitive(&f));
    }
}
