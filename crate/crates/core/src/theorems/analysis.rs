//! The full pipeline for one equation.

use serde::Serialize;

use crate::blowup::{self, discrepancy, enumerate_weights, exceptional_surface, touches_boundary, Weight};
use crate::curvegeom::{classify_rationality, ConeStructure, LatticePolygon, Rationality, RationalityInput};
use crate::lattice::{self, IVec};
use crate::newton::{build_diagram, check_nondegeneracy, support_value, Face, FaceVerdict, NewtonError, NondegVerdict};
use crate::normalform::{default_truncation, reduce_to_normal_form, NormalFormCertificate, SingularityType};
use crate::polyring::{ExponentVector, NVARS};
use crate::Poly;

use super::quadruples::candidate_weights;

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub truncation: Option<u32>,
    pub max_coord: Option<u64>,
    pub seed: u64,
}

/// One irreducible component of the exceptional divisor of a weighted blowup.
#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub weight: Weight,
    pub face_dimension: usize,
    pub face_polynomial: Poly,
    pub component: Poly,
    pub multiplicity: u32,
    pub discrepancy: i64,
    pub cone: Option<ConeStructure>,
    pub chart: Option<Poly>,
    pub genus: Option<u32>,
    pub hyperelliptic: Option<bool>,
    pub hyperelliptic_by_convention: bool,
    pub polygon: Option<LatticePolygon>,
    pub verdict: Rationality,
    pub rule: String,
    pub in_catalog: bool,
    pub warnings: Vec<String>,
}

impl DivisorReport {
    pub fn is_non_rational_discrepancy_one(&self) -> bool {
        self.discrepancy == 1 && self.verdict == Rationality::NonRational
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramSummary {
    pub vertices: Vec<ExponentVector>,
    pub faces: Vec<Face>,
    pub nondegeneracy: NondegVerdict,
    pub face_verdicts: Vec<FaceVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightScan {
    pub max_coord: u64,
    pub boundary_touched: bool,
    pub list: Vec<Weight>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub discrepancy_one_components: usize,
    pub non_rational: usize,
    pub non_rational_weights: Vec<Weight>,
    pub undecided: usize,
    /// the uniqueness statement covers the type (cA, cD or cE)
    pub theorem_applies: bool,
    /// more than one non-rational discrepancy-one divisor where at most one is expected
    pub theorem_violation: bool,
    /// catalog weights of the type that no divisor of this equation uses
    pub catalog_not_realized: Vec<Weight>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Analysis {
    pub input: Poly,
    #[serde(rename = "type")]
    pub kind: SingularityType,
    pub normal_form: Option<NormalFormCertificate>,
    /// the equation whose diagram is used (the reduced form when available)
    pub analyzed: Poly,
    pub diagram: DiagramSummary,
    pub weights: WeightScan,
    pub divisors: Vec<DivisorReport>,
    pub summary: Summary,
    pub warnings: Vec<String>,
}

fn affine_dimension(points: &[ExponentVector]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let base = first.as_i64();
    let rows: Vec<IVec> = points.iter().map(|p| lattice::sub(&p.as_i64(), &base)).collect();
    lattice::rank(&rows)
}

pub fn analyze(f: &Poly, opts: &AnalyzeOptions) -> Result<Analysis, NewtonError> {
    let mut warnings = vec![];
    let truncation = opts.truncation.unwrap_or_else(|| default_truncation(f));
    let (kind, normal_form) = match reduce_to_normal_form(f, truncation) {
        Ok(cert) => {
            if !cert.shape_matched {
                warnings.push(format!("reduced equation does not have the exact {} normal-form shape", cert.kind));
            }
            for c in cert.satisfied_constraints.iter().filter(|c| !c.satisfied) {
                warnings.push(format!("normal-form constraint fails: {}", c.description));
            }
            (cert.kind, Some(cert))
        }
        Err(e) => {
            warnings.push(format!("normal-form reduction failed ({e}); analyzing the input as given"));
            (SingularityType::Other, None)
        }
    };
    let analyzed = normal_form.as_ref().map_or_else(|| f.clone(), |c| c.reduced.clone());

    let d = build_diagram(&analyzed)?;
    let face_verdicts = check_nondegeneracy(&d, opts.seed);
    let nondegeneracy = NondegVerdict::worst(face_verdicts.iter().map(|v| &v.verdict));
    if nondegeneracy.is_degenerate() {
        warnings.push(format!("equation is degenerate for its Newton diagram: {nondegeneracy}"));
    }

    let max_coord = opts.max_coord.unwrap_or_else(|| blowup::default_max_coord(&d));
    let list = enumerate_weights(&d, max_coord);
    let boundary_touched = touches_boundary(&list, max_coord);
    if boundary_touched {
        warnings.push(format!("a weight reaches the search bound {max_coord}; the list may be incomplete"));
    }

    let catalog = candidate_weights(kind);
    let mut divisors = vec![];
    for (i, w) in list.iter().enumerate() {
        let seed = opts.seed.wrapping_add(1000 + i as u64);
        let surf = exceptional_surface(&analyzed, w, seed);
        let face_dimension = affine_dimension(&surf.equation.support());
        let mut comps: Vec<(Poly, u32)> =
            surf.decomposition.components.iter().map(|c| (c.factor.clone(), c.multiplicity)).collect();
        for v in 0..NVARS {
            let k = surf.decomposition.toric_content.get(v);
            if k > 0 {
                comps.push((Poly::var(v), k));
            }
        }
        let base_warning = (!surf.decomposition.certified).then(|| "factorization not certified irreducible".to_string());
        for (component, multiplicity) in comps {
            let decision = classify_rationality(&RationalityInput {
                face_dimension,
                component: &component,
                weight: w,
                kind,
                seed,
            });
            let mut dw: Vec<String> = base_warning.iter().cloned().collect();
            dw.extend(decision.warnings.iter().cloned());
            divisors.push(DivisorReport {
                weight: *w,
                face_dimension,
                face_polynomial: surf.equation.clone(),
                discrepancy: discrepancy(&d, w, multiplicity),
                component,
                multiplicity,
                cone: decision.cone,
                chart: decision.chart.map(|c| c.polynomial),
                genus: decision.genus,
                hyperelliptic: decision.hyperelliptic,
                hyperelliptic_by_convention: decision.hyperelliptic_by_convention,
                polygon: decision.polygon,
                verdict: decision.verdict,
                rule: decision.rule,
                in_catalog: catalog.contains(w),
                warnings: dw,
            });
        }
        debug_assert_eq!(w.sum() as i64 - 1 - support_value(&d, w) as i64, 1);
    }

    let hits: Vec<&DivisorReport> = divisors.iter().filter(|r| r.is_non_rational_discrepancy_one()).collect();
    for r in &hits {
        if !catalog.is_empty() && !r.in_catalog {
            warnings.push(format!("non-rational divisor at {} is not in the {} catalog", r.weight, kind));
        }
    }
    let theorem_applies = matches!(
        kind,
        SingularityType::CA(_) | SingularityType::CD(_) | SingularityType::CE6 | SingularityType::CE7 | SingularityType::CE8
    );
    let summary = Summary {
        discrepancy_one_components: divisors.iter().filter(|r| r.discrepancy == 1).count(),
        non_rational: hits.len(),
        non_rational_weights: hits.iter().map(|r| r.weight).collect(),
        undecided: divisors.iter().filter(|r| r.discrepancy == 1 && r.verdict == Rationality::Undecided).count(),
        theorem_applies,
        theorem_violation: theorem_applies && hits.len() > 1,
        catalog_not_realized: catalog
            .iter()
            .filter(|c| !hits.iter().any(|r| r.weight == **c))
            .copied()
            .collect(),
    };
    if !theorem_applies && hits.len() > 1 {
        warnings.push(format!("type {kind} is outside the uniqueness statement; {} non-rational divisors", hits.len()));
    }
    if summary.theorem_violation {
        warnings.push(format!(
            "{} non-rational discrepancy-one divisors; at most one is expected for a non-degenerate equation",
            summary.non_rational
        ));
    }
    Ok(Analysis {
        input: f.clone(),
        kind,
        normal_form,
        analyzed,
        diagram: DiagramSummary { vertices: d.vertices.clone(), faces: d.faces.clone(), nondegeneracy, face_verdicts },
        weights: WeightScan { max_coord, boundary_touched, list },
        divisors,
        summary,
        warnings,
    })
}
