use std::path::PathBuf;

use rinclose::bench::{SweepParameter, SweepSource, SweepSpec};
use rinclose::Algorithm;

fn recipes() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../recipes");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
}

#[test]
fn every_recipe_parses() {
    let paths = recipes();
    assert_eq!(paths.len(), 5);
    for path in paths {
        let spec = SweepSpec::from_file(&path).unwrap();
        assert_eq!(spec.algorithms, [Algorithm::Cvc, Algorithm::Cvc2]);
        assert_eq!(spec.min_col, 3);
        let vary = spec.vary.as_ref().unwrap();
        assert_eq!(vary.parameter, SweepParameter::Epsilon);
        assert!(vary.values.windows(2).all(|w| w[0] < w[1]));
        let SweepSource::Matrix { path: data, preprocess } = &spec.source else {
            panic!("{} does not read a matrix", path.display());
        };
        assert!(data.ends_with(format!("{}.tsv", spec.name)));
        assert!(preprocess.scale_columns);
        preprocess.validate().unwrap();
    }
}

#[test]
fn only_gds2267_is_shifted() {
    for path in recipes() {
        let spec = SweepSpec::from_file(&path).unwrap();
        let SweepSource::Matrix { preprocess, .. } = spec.source else { unreachable!() };
        assert_eq!(preprocess.shift_constant > 0.0, spec.name == "GDS2267", "{}", spec.name);
        assert_eq!(preprocess.log_transform, spec.name != "GDS759", "{}", spec.name);
    }
}
