//! Every solver's output for small n appears in the exhaustive enumeration.

use unitfrac::harness::{replay, Pipeline, PipelineConfig, Stage};
use unitfrac::identities::{apply_family, classify};
use unitfrac::oracle::enumerate_all;
use unitfrac::parametric::parametric_search;
use unitfrac::splitsearch::SplitSearch;
use unitfrac::Decomposition;

fn check(d: &Decomposition, all: &[unitfrac::UnitTriple]) {
    assert!(
        all.contains(&d.triple().canonical()),
        "{d} missing from enumeration"
    );
    replay(d).unwrap();
}

#[test]
fn solver_outputs_are_enumerated() {
    let split = SplitSearch::default();
    for n in 2..=300u128 {
        let all = enumerate_all(n, None).solutions;
        for m in classify(n).unwrap().matches {
            check(&apply_family(m.family, n, &m.params).unwrap(), &all);
        }
        if n % 4 == 1 {
            let m = n / 4;
            for w in split.witnesses_m(m, 4).unwrap() {
                let t = w.triple(n, m).unwrap();
                assert!(all.contains(&t.canonical()), "split {w:?} for n={n}");
            }
            for w in parametric_search(n, 50, 300).unwrap() {
                check(&w.decomposition().unwrap(), &all);
            }
        }
    }
}

#[test]
fn every_stage_alone_agrees_with_the_oracle() {
    let p = Pipeline::new(PipelineConfig::default()).unwrap();
    for n in 2..=300u128 {
        let all = enumerate_all(n, None).solutions;
        for st in Stage::ALL {
            if let Some(d) = p.solve_with(n, &[st]).unwrap().decomposition {
                check(&d, &all);
            }
        }
    }
}
