//! Random non-degenerate normal-form equations and the uniqueness suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blowup::Weight;
use crate::curvegeom::Rationality;
use crate::newton::check_polynomial;
use crate::normalform::SingularityType;
use crate::polyring::ExponentVector;
use crate::scalar::rat;
use crate::Poly;

use super::analysis::{analyze, AnalyzeOptions};

const DRAWS: u64 = 3;
const ATTEMPTS: u64 = 10;

/// Exponent pattern of one corpus family (coefficients are drawn later).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape {
    #[serde(rename = "type")]
    pub kind: SingularityType,
    /// added to every free exponent of the minimal shape
    pub offset: u32,
    pub exponents: Vec<[u32; 4]>,
}

pub fn shapes() -> Vec<Shape> {
    let mut out = vec![];
    for o in 0..3u32 {
        for n in 4..=12u32 {
            let mut e = vec![[2, 0, 0, 0], [0, 2, 1, 0], [0, 0, n - 1, 0]];
            for i in 1..n {
                e.push([0, 0, i - 1, n - i + o]);
            }
            e.push([0, 1, 0, n.div_ceil(2) + o]);
            out.push(Shape { kind: SingularityType::CD(n), offset: o, exponents: e });
        }
    }
    for o in 0..3u32 {
        let mut e = vec![[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 4, 0]];
        for (j, b) in [(0, 4), (1, 3), (2, 2)] {
            e.push([0, 0, j, b + o]);
        }
        for (j, b) in [(0, 3), (1, 2), (2, 1)] {
            e.push([0, 1, j, b + o]);
        }
        out.push(Shape { kind: SingularityType::CE6, offset: o, exponents: e });
    }
    for o in 0..3u32 {
        let k = 5 + o;
        let mut e = vec![[2, 0, 0, 0], [0, 3, 0, 0], [0, 1, 3, 0], [0, 0, k, 0]];
        for i in 1..=k {
            e.push([0, 0, i - 1, 6u32.saturating_sub(i).max(1) + o]);
        }
        e.push([0, 1, 0, 3 + o]);
        e.push([0, 1, 1, 2 + o]);
        out.push(Shape { kind: SingularityType::CE7, offset: o, exponents: e });
    }
    for o in 0..3u32 {
        let mut e = vec![[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 5, 0]];
        for (j, b) in [(0, 5), (1, 4), (2, 3), (3, 2)] {
            e.push([0, 0, j, b + o]);
        }
        for (j, b) in [(0, 4), (1, 3), (2, 2), (3, 1)] {
            e.push([0, 1, j, b + o]);
        }
        out.push(Shape { kind: SingularityType::CE8, offset: o, exponents: e });
    }
    out
}

/// Random nonzero `p/q`, `|p| <= 9`, `1 <= q <= 5`; `x^2` keeps coefficient 1.
fn draw(shape: &Shape, rng: &mut ChaCha8Rng) -> Poly {
    Poly::from_terms(shape.exponents.iter().map(|&e| {
        let c = if e == [2, 0, 0, 0] {
            rat(1, 1)
        } else {
            let p = loop {
                let p: i64 = rng.gen_range(-9..=9);
                if p != 0 {
                    break p;
                }
            };
            rat(p, rng.gen_range(1..=5))
        };
        (ExponentVector(e), c)
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusInstance {
    #[serde(rename = "type")]
    pub kind: SingularityType,
    pub offset: u32,
    pub draw: u64,
    pub equation: Poly,
    /// draws rejected as degenerate before this one
    pub redraws: u64,
    /// no non-degenerate draw was found within the attempt limit
    pub degenerate: bool,
}

/// The corpus for a seed: three accepted draws per shape.
pub fn generate_corpus(seed: u64) -> Vec<CorpusInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    for shape in shapes() {
        for i in 0..DRAWS {
            let mut redraws = 0;
            let (equation, degenerate) = loop {
                let f = draw(&shape, &mut rng);
                let check_seed = rng.gen();
                let degenerate = check_polynomial(&f, check_seed).map(|(v, _)| v.is_degenerate()).unwrap_or(true);
                if !degenerate || redraws + 1 >= ATTEMPTS {
                    break (f, degenerate);
                }
                redraws += 1;
            };
            out.push(CorpusInstance { kind: shape.kind, offset: shape.offset, draw: i, equation, redraws, degenerate });
        }
    }
    out
}

/// Genus bound for a non-rational divisor at `w`, when one is stated.
pub fn genus_bound(kind: SingularityType, w: &Weight) -> Option<(u32, bool)> {
    let g = w.get();
    match kind {
        SingularityType::CD(n) => {
            let k = n / 2;
            Some((k - 1, true))
        }
        SingularityType::CE6 => Some((1, true)),
        SingularityType::CE7 if g == [5, 3, 2, 1] => Some((3, false)),
        SingularityType::CE8 if g == [8, 5, 3, 1] => Some((4, false)),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub instance: CorpusInstance,
    pub detected_type: SingularityType,
    pub non_rational_weights: Vec<Weight>,
    pub genera: Vec<u32>,
    pub undecided: usize,
    pub theorem_violation: bool,
    pub genus_bound_violations: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub instances: usize,
    pub degenerate_instances: usize,
    pub max_non_rational: usize,
    pub theorem_violations: usize,
    pub genus_bound_violations: usize,
    pub type_mismatches: usize,
    pub outcomes: Vec<InstanceOutcome>,
}

pub fn run_corpus(seed: u64) -> CorpusReport {
    let outcomes: Vec<InstanceOutcome> = generate_corpus(seed)
        .into_iter()
        .enumerate()
        .map(|(i, inst)| run_instance(inst, seed.wrapping_add(i as u64)))
        .collect();
    CorpusReport {
        seed,
        instances: outcomes.len(),
        degenerate_instances: outcomes.iter().filter(|o| o.instance.degenerate).count(),
        max_non_rational: outcomes.iter().map(|o| o.non_rational_weights.len()).max().unwrap_or(0),
        theorem_violations: outcomes.iter().filter(|o| o.theorem_violation).count(),
        genus_bound_violations: outcomes.iter().map(|o| o.genus_bound_violations.len()).sum(),
        type_mismatches: outcomes.iter().filter(|o| o.detected_type != o.instance.kind).count(),
        outcomes,
    }
}

fn run_instance(instance: CorpusInstance, seed: u64) -> InstanceOutcome {
    let opts = AnalyzeOptions { seed, ..Default::default() };
    let a = match analyze(&instance.equation, &opts) {
        Ok(a) => a,
        Err(e) => {
            return InstanceOutcome {
                detected_type: SingularityType::Other,
                non_rational_weights: vec![],
                genera: vec![],
                undecided: 0,
                theorem_violation: false,
                genus_bound_violations: vec![],
                warnings: vec![e.to_string()],
                instance,
            }
        }
    };
    let mut genera = vec![];
    let mut bound_violations = vec![];
    for r in a.divisors.iter().filter(|r| r.is_non_rational_discrepancy_one()) {
        let Some(g) = r.genus else { continue };
        genera.push(g);
        if let Some((bound, hyper)) = genus_bound(instance.kind, &r.weight) {
            if g > bound {
                bound_violations.push(format!("{}: genus {g} exceeds {bound}", r.weight));
            }
            if hyper && r.hyperelliptic != Some(true) {
                bound_violations.push(format!("{}: curve is not hyperelliptic", r.weight));
            }
        }
    }
    InstanceOutcome {
        detected_type: a.kind,
        non_rational_weights: a.summary.non_rational_weights.clone(),
        genera,
        undecided: a.divisors.iter().filter(|r| r.discrepancy == 1 && r.verdict == Rationality::Undecided).count(),
        theorem_violation: a.summary.theorem_violation,
        genus_bound_violations: bound_violations,
        warnings: a.warnings,
        instance,
    }
}
