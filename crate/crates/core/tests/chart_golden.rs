use std::path::PathBuf;

use astute_np::cli::{render_chart, ChartSpec, ACCURACY_COLOR, ASTUTENESS_COLOR};
use astute_np::evaluation::SweepResult;

const SWEEP: &str = "n,accuracy_mean,accuracy_std,astuteness_mean,astuteness_std
20,0.7,0.08,0.62,0.1
100,0.91,0.03,0.55,0.04
1000,0.99,0.01,0.51,0
";

fn golden() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/sweep_chart.svg")
}

#[test]
fn chart_matches_golden_file() {
    let res = SweepResult::parse_csv(SWEEP).unwrap();
    let svg = render_chart(&ChartSpec::from_sweep(&res, "histogram, noiseless moons")).unwrap();
    assert!(svg.contains(ACCURACY_COLOR) && svg.contains(ASTUTENESS_COLOR));
    assert_eq!(svg.matches("<circle").count(), 6);
    // zero std gets no error bar
    assert_eq!(svg.matches("<path").count(), 5);

    let path = golden();
    if !path.exists() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &svg).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg, expected, "rendered chart differs from {}", path.display());
}
