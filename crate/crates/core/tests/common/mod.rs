#![allow(dead_code)]

use std::path::PathBuf;

use freeknot::{load_csv_auto, DataSet, SearchOptions};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(format!("{name}.csv"))
}

pub fn fixture(name: &str) -> DataSet {
    load_csv_auto(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// f = x^2 sampled at x_i = -1 + i/10, i = 0..=20.
pub fn parabola() -> DataSet {
    let xs = (0..=20).map(|i| -1.0 + f64::from(i) / 10.0).collect();
    DataSet::from_fn(xs, |x| x * x).unwrap()
}

pub fn threads(n: usize) -> SearchOptions {
    SearchOptions::default().with_threads(n)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
