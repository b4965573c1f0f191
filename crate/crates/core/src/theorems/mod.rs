//! End-to-end pipelines: lemma quadruples, the weight catalog, the
//! per-equation analysis and the generated corpus.

mod analysis;
mod corpus;
mod quadruples;

pub use analysis::{analyze, Analysis, AnalyzeOptions, DiagramSummary, DivisorReport, Summary, WeightScan};
pub use corpus::{
    generate_corpus, genus_bound, run_corpus, shapes, CorpusInstance, CorpusReport, InstanceOutcome, Shape,
};
pub use quadruples::{
    admissible_exponents, candidate_weights, cd_family, compare_with_catalog, excluded_weights, lemma_quadruples,
    CatalogComparison, CdFamily, Quadruple, DEFAULT_BOUND,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvegeom::Rationality;
    use crate::normalform::SingularityType;
    use crate::polyring::parse_polynomial;

    fn w(a: [u64; 4]) -> crate::Weight {
        crate::Weight::new(a).unwrap()
    }

    fn run(s: &str) -> Analysis {
        analyze(&parse_polynomial(s).unwrap(), &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn e6_quadruples_and_catalog() {
        let qs: Vec<String> = lemma_quadruples(SingularityType::CE6, DEFAULT_BOUND).iter().map(|q| q.to_string()).collect();
        assert_eq!(qs, ["(2,2,4,4)", "(2,8/3,4,8)", "(2,3,3,6)", "(2,3,4,12)"]);
        let cmp = compare_with_catalog(SingularityType::CE6, DEFAULT_BOUND);
        assert!(cmp.exact());
    }

    #[test]
    fn cd_quadruples_fall_into_families() {
        for n in 4..=12 {
            let qs = lemma_quadruples(SingularityType::CD(n), DEFAULT_BOUND);
            assert!(qs.iter().all(|q| cd_family(n, q).is_some()), "cD({n})");
            let parity = if n % 2 == 0 { CdFamily::EvenParity } else { CdFamily::OddParity };
            assert!(qs.iter().any(|q| cd_family(n, q) == Some(parity)), "cD({n})");
            assert!(compare_with_catalog(SingularityType::CD(n), DEFAULT_BOUND).exact());
        }
        assert_eq!(candidate_weights(SingularityType::CD(4)), vec![w([2, 1, 1, 1])]);
        assert_eq!(candidate_weights(SingularityType::CD(7)), vec![w([3, 3, 1, 1])]);
    }

    #[test]
    fn e7_e8_comparison() {
        let e7 = compare_with_catalog(SingularityType::CE7, DEFAULT_BOUND);
        assert_eq!(e7.derived.len(), 8);
        assert_eq!((e7.unlisted.clone(), e7.underived.clone()), (vec![w([3, 3, 1, 1])], vec![w([3, 2, 1, 1])]));
        let e8 = compare_with_catalog(SingularityType::CE8, DEFAULT_BOUND);
        assert_eq!(e8.derived.len(), 11);
        assert_eq!(e8.unlisted, vec![w([5, 4, 2, 1]), w([10, 7, 4, 1])]);
        assert!(e8.underived.is_empty());
    }

    #[test]
    fn example_analyses() {
        let a = run("x^2 + y^2*z + z^3 + t^3");
        assert_eq!(a.summary.non_rational_weights, vec![w([2, 1, 1, 1])]);
        let r = a.divisors.iter().find(|r| r.is_non_rational_discrepancy_one()).unwrap();
        assert_eq!((r.genus, r.hyperelliptic), (Some(1), Some(true)));
        let a = run("x^2 + y^3 + z^5 + t^15");
        assert_eq!(a.summary.non_rational_weights, vec![w([8, 5, 3, 1])]);
        let a = run("x^2 + y^2 + z^2 + t^2");
        assert_eq!(a.summary.non_rational, 0);
        assert_eq!(a.weights.list, vec![w([1, 1, 1, 1])]);
        assert!(a.divisors.iter().all(|r| r.verdict != Rationality::NonRational));
        for r in &run("x^2 + y^3 + y*z^3 + t^9").divisors {
            assert!(r.discrepancy >= 1);
        }
    }

    #[test]
    fn corpus_shapes_are_normal_forms() {
        let shapes = shapes();
        assert_eq!(shapes.len(), 36);
        let corpus = generate_corpus(7);
        assert_eq!(corpus.len(), 108);
        assert_eq!(generate_corpus(7)[50].equation, corpus[50].equation);
        for inst in corpus.iter().step_by(11) {
            let t = crate::normalform::classify_type(&inst.equation).unwrap();
            assert_eq!(t, inst.kind, "{}", inst.equation);
        }
    }
}
