//! Discrepancy-one hyperplanes for each normal form.
//!
//! A weight `w` with `|w| = m + 2` cuts the hyperplane `sum w_i e_i = m`,
//! written `α/a + β/b + γ/c + δ/d = 1` with `a = m / w_1` and so on. The
//! enumeration scans integer weights (finite and exact) and keeps the
//! quadruples whose hyperplane can carry a two-dimensional face of some
//! equation in the normal form.

use std::collections::BTreeSet;

use num_traits::One;
use serde::{Serialize, Serializer};

use crate::blowup::Weight;
use crate::lattice::{self, IVec};
use crate::normalform::SingularityType;
use crate::scalar::{int, rat, Rational};

/// Largest `m` scanned by default (the largest value in the lists is 30).
pub const DEFAULT_BOUND: u64 = 32;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Quadruple {
    #[serde(serialize_with = "ser_rats")]
    pub values: [Rational; 4],
    pub m: u64,
    pub derived_weight: Weight,
}

fn ser_rats<S: Serializer>(v: &[Rational; 4], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl std::fmt::Display for Quadruple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.values.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

impl Quadruple {
    pub fn from_weight(w: Weight) -> Self {
        let m = w.sum() - 2;
        let values = w.get().map(|wi| rat(m as i64, wi as i64));
        Quadruple { values, m, derived_weight: w }
    }
}

/// Exponents of the monomials an equation of the given normal form may
/// contain, up to total degree `max_deg`.
pub fn admissible_exponents(kind: SingularityType, max_deg: u32) -> Vec<[u32; 4]> {
    let mut out: Vec<[u32; 4]> = vec![[2, 0, 0, 0]];
    let r = max_deg;
    match kind {
        SingularityType::CD(n) => {
            out.push([0, 2, 1, 0]);
            out.push([0, 0, n - 1, 0]);
            for j in 0..=n.saturating_sub(2) {
                for b in 1..=r {
                    if j + b >= n - 1 {
                        out.push([0, 0, j, b]);
                    }
                }
            }
            for b in 1..=r {
                if 2 * b >= n {
                    out.push([0, 1, 0, b]);
                }
            }
        }
        SingularityType::CE6 => {
            out.extend([[0, 3, 0, 0], [0, 0, 4, 0]]);
            for j in 0..=2 {
                for b in 1..=r {
                    if j + b >= 4 {
                        out.push([0, 0, j, b]);
                    }
                    if j + b >= 3 {
                        out.push([0, 1, j, b]);
                    }
                }
            }
        }
        SingularityType::CE7 => {
            out.extend([[0, 3, 0, 0], [0, 1, 3, 0]]);
            for j in 0..=r {
                for b in 0..=r {
                    if j + b >= 5 && j + b <= r {
                        out.push([0, 0, j, b]);
                    }
                }
            }
            for b in 1..=r {
                if b >= 3 {
                    out.push([0, 1, 0, b]);
                }
                if b >= 2 {
                    out.push([0, 1, 1, b]);
                }
            }
        }
        SingularityType::CE8 => {
            out.extend([[0, 3, 0, 0], [0, 0, 5, 0]]);
            for j in 0..=3 {
                for b in 1..=r {
                    if j + b >= 5 {
                        out.push([0, 0, j, b]);
                    }
                    if j + b >= 4 {
                        out.push([0, 1, j, b]);
                    }
                }
            }
        }
        _ => {}
    }
    out.retain(|e| e.iter().sum::<u32>() <= r);
    out.sort();
    out.dedup();
    out
}

/// Condition (i): how the hyperplane meets the leading monomials.
fn leading_conditions(kind: SingularityType, q: &[Rational; 4]) -> bool {
    let two = int(2);
    let one = Rational::one();
    let [a, b, c, _] = q;
    match kind {
        SingularityType::CD(n) => {
            let s = &two / b + &one / c;
            let c_ok = *c <= int(n as i64 - 1);
            (*a == two && s >= one && c_ok) || (*a < two && s == one && c_ok)
        }
        SingularityType::CE6 => {
            (*a == two && *b <= int(3) && *c <= int(4))
                || (*a < two && *b == int(3) && *c <= int(4))
                || (*a < two && *b < int(3) && *c == int(4))
        }
        SingularityType::CE7 => {
            (*a == two && *b <= int(3) && &one / b + &int(3) / c >= one) || (*a < two && *b == int(3) && *c <= rat(9, 2))
        }
        SingularityType::CE8 => {
            (*a == two && *b <= int(3) && *c <= int(5))
                || (*a < two && *b == int(3) && *c <= int(5))
                || (*a < two && *b < int(3) && *c == int(5))
        }
        _ => false,
    }
}

/// The hyperplane carries three affinely independent admissible monomials.
fn spans_plane(on: &[IVec]) -> bool {
    if on.len() < 3 {
        return false;
    }
    let rows: Vec<IVec> = on.iter().map(|p| lattice::sub(p, &on[0])).collect();
    lattice::rank(&rows) >= 2
}

/// All quadruples for the type with `m <= bound`, sorted by value.
pub fn lemma_quadruples(kind: SingularityType, bound: u64) -> Vec<Quadruple> {
    let bound = match kind {
        SingularityType::CD(n) => bound.max(2 * n as u64 + 2),
        _ => bound,
    };
    let admissible = admissible_exponents(kind, bound as u32 + 2);
    let mut out = BTreeSet::new();
    for m in 1..=bound {
        let total = m + 2;
        // a <= 2 forces w_1 >= m / 2
        for w1 in m.div_ceil(2)..=total - 3 {
            for w2 in 1..=total - w1 - 2 {
                for w3 in 1..=total - w1 - w2 - 1 {
                    let w4 = total - w1 - w2 - w3;
                    let Ok(w) = Weight::new([w1, w2, w3, w4]) else { continue };
                    let q = Quadruple::from_weight(w);
                    if !leading_conditions(kind, &q.values) {
                        continue;
                    }
                    let on: Vec<IVec> = admissible
                        .iter()
                        .filter(|e| (0..4).map(|i| e[i] as u64 * w.get()[i]).sum::<u64>() == m)
                        .map(|e| e.map(i64::from))
                        .collect();
                    if spans_plane(&on) {
                        out.insert(q);
                    }
                }
            }
        }
    }
    let mut v: Vec<Quadruple> = out.into_iter().collect();
    v.sort_by(|x, y| x.values.cmp(&y.values));
    v
}

/// The three families of quadruples for `cD(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CdFamily {
    /// `((2k-1)/k, (2k-1)/(k-1), 2k-1, 2k-1)`, weight `(k,k-1,1,1)`, `n = 2k`
    EvenParity,
    /// `(2, 2, 2k, 2k)`, weight `(k,k,1,1)`, `n = 2k+1`
    OddParity,
    /// `(2, 2k/(k-1), k, 2k)`, weight `(k,k-1,2,1)`, `k <= n-1`
    Plt,
}

/// Which family a `cD(n)` quadruple belongs to, checking its side condition.
pub fn cd_family(n: u32, q: &Quadruple) -> Option<CdFamily> {
    let [a, b, c, d] = q.derived_weight.get();
    let n = n as u64;
    if c == 1 && d == 1 && a >= 2 && b + 1 == a && n == 2 * a {
        return Some(CdFamily::EvenParity);
    }
    if c == 1 && d == 1 && a == b && n == 2 * a + 1 {
        return Some(CdFamily::OddParity);
    }
    if c == 2 && d == 1 && a >= 2 && b + 1 == a && a <= n - 1 {
        return Some(CdFamily::Plt);
    }
    None
}

/// Weights listed as candidates for a non-rational divisor of the type.
pub fn candidate_weights(kind: SingularityType) -> Vec<Weight> {
    let ws: Vec<[u64; 4]> = match kind {
        SingularityType::CD(n) if n >= 4 => {
            let k = (n / 2) as u64;
            if n % 2 == 0 {
                vec![[k, k - 1, 1, 1]]
            } else {
                vec![[k, k, 1, 1]]
            }
        }
        SingularityType::CE6 => vec![[2, 2, 1, 1], [3, 2, 2, 1], [4, 3, 2, 1]],
        SingularityType::CE7 => vec![[3, 2, 1, 1], [4, 3, 2, 1], [5, 3, 2, 1], [6, 4, 3, 1]],
        SingularityType::CE8 => vec![
            [3, 2, 2, 1],
            [4, 3, 2, 1],
            [5, 3, 2, 1],
            [6, 4, 3, 1],
            [7, 5, 3, 1],
            [8, 5, 3, 1],
            [9, 6, 4, 1],
            [12, 8, 5, 1],
        ],
        _ => vec![],
    };
    ws.into_iter().map(|w| Weight::new(w).expect("catalog weights are primitive")).collect()
}

/// Weights of quadruples whose divisor is rational for a reason independent
/// of the equation (plt blowups, or a face linear in some variable).
pub fn excluded_weights(kind: SingularityType) -> Vec<Weight> {
    let ws: Vec<[u64; 4]> = match kind {
        SingularityType::CD(n) => (2..n as u64).map(|k| [k, k - 1, 2, 1]).collect(),
        SingularityType::CE6 => vec![[6, 4, 3, 1]],
        SingularityType::CE7 => vec![[3, 2, 2, 1], [5, 4, 2, 1], [7, 5, 3, 1], [9, 6, 4, 1]],
        SingularityType::CE8 => vec![[15, 10, 6, 1]],
        _ => vec![],
    };
    ws.into_iter().filter_map(|w| Weight::new(w).ok()).collect()
}

/// Lemma quadruples against the catalog.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogComparison {
    pub derived: Vec<Weight>,
    pub excluded: Vec<Weight>,
    pub catalog: Vec<Weight>,
    /// derived, not excluded, missing from the catalog
    pub unlisted: Vec<Weight>,
    /// in the catalog, not derived from any quadruple
    pub underived: Vec<Weight>,
}

impl CatalogComparison {
    pub fn exact(&self) -> bool {
        self.unlisted.is_empty() && self.underived.is_empty()
    }
}

pub fn compare_with_catalog(kind: SingularityType, bound: u64) -> CatalogComparison {
    let derived: Vec<Weight> = lemma_quadruples(kind, bound).iter().map(|q| q.derived_weight).collect();
    let excluded = excluded_weights(kind);
    let catalog = candidate_weights(kind);
    let unlisted =
        derived.iter().filter(|w| !excluded.contains(w) && !catalog.contains(w)).copied().collect();
    let underived = catalog.iter().filter(|w| !derived.contains(w)).copied().collect();
    CatalogComparison { derived, excluded, catalog, unlisted, underived }
}
