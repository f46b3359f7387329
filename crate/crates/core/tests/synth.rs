use ezr::evalstats::reference_optimal;
use ezr::synth::{gen_sparse, SynthManifest, SynthSpec};
use proptest::prelude::*;

fn spec() -> impl Strategy<Value = SynthSpec> {
    (16usize..200, 1usize..8, 1usize..4, any::<u64>()).prop_flat_map(|(rows, attrs, objectives, seed)| {
        (1..=attrs).prop_map(move |keys| SynthSpec { rows, attrs, keys, objectives, noise: 0.0, seed })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_optimum_is_reference(s in spec()) {
        let syn = gen_sparse(&s).unwrap();
        prop_assert_eq!(reference_optimal(&syn.data).unwrap().0, syn.optimum);
    }

    #[test]
    fn non_keys_are_inert(s in spec(), x in proptest::collection::vec(0.0..1.0f64, 8), y in proptest::collection::vec(0.0..1.0f64, 8)) {
        let syn = gen_sparse(&s).unwrap();
        let keys = &syn.surface.keys;
        let mixed: Vec<f64> = (0..s.attrs).map(|i| if keys.contains(&i) { x[i] } else { y[i] }).collect();
        prop_assert_eq!(syn.surface.evaluate(&x[..s.attrs]), syn.surface.evaluate(&mixed));
    }
}

#[test]
fn objectives_follow_surface_without_noise() {
    let syn = gen_sparse(&SynthSpec { rows: 64, attrs: 6, keys: 2, objectives: 2, ..Default::default() }).unwrap();
    for r in syn.data.rows() {
        let xs: Vec<f64> = syn.data.decision_cols().iter().map(|&c| r.cells[c].as_num().unwrap()).collect();
        assert_eq!(syn.surface.evaluate(&xs), syn.data.objectives(r.id).unwrap());
        assert!(xs.iter().all(|x| (0.0..1.0).contains(x)));
    }
}

#[test]
fn saved_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let s = SynthSpec { rows: 120, noise: 0.2, seed: 8, ..Default::default() };
    let a = gen_sparse(&s).unwrap();
    let ja = a.save(dir.path().join("a.csv")).unwrap();
    let jb = gen_sparse(&s).unwrap().save(dir.path().join("b.csv")).unwrap();
    assert_eq!(std::fs::read(dir.path().join("a.csv")).unwrap(), std::fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(std::fs::read(&ja).unwrap(), std::fs::read(&jb).unwrap());
    let m: SynthManifest = serde_json::from_slice(&std::fs::read(&ja).unwrap()).unwrap();
    assert_eq!(m, a.manifest());
    let back = ezr::Dataset::load_csv(dir.path().join("a.csv")).unwrap();
    assert_eq!(back.decision_cols().len(), 20);
    assert_eq!(back.objective_cols().len(), 1);
}
