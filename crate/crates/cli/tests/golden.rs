//! Pins the first 10 CSV rows of each shipped scenario at dt = 1e-3.
//! Regenerate with `ROLLSIM_UPDATE_GOLDEN=1 cargo test --test golden`.

use std::path::PathBuf;

use rollsim_cli::output::{csv_string, CSV_HEADER};
use rollsim_cli::run::execute;
use rollsim_cli::scenario::Scenario;

const ROWS: usize = 10;

fn head(scenario: &Scenario) -> String {
    let mut s = scenario.clone();
    s.sim.dt = 1e-3;
    s.sim.record_every = 1;
    s.sim.t_end = ROWS as f64 * 1e-3;
    let csv = csv_string(&execute(&s).unwrap().trajectory);
    csv.lines().take(ROWS + 1).map(|l| format!("{l}\n")).collect()
}

#[test]
fn shipped_scenarios_match_golden_rows() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("ROLLSIM_UPDATE_GOLDEN").is_some();
    for s in Scenario::shipped() {
        let got = head(&s);
        assert_eq!(got.lines().count(), ROWS + 1);
        assert_eq!(got.lines().next(), Some(CSV_HEADER));
        let path = dir.join(format!("{}.csv", s.name));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(got, want, "{} drifted from its golden rows", s.name);
    }
}

#[test]
fn first_row_is_the_initial_state() {
    let s = Scenario::shipped_named("free_swing").unwrap();
    let csv = head(&s);
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row.len(), 12);
    assert_eq!(&row[..5], &[0.0, 0.0, 0.0, 2.0, 0.0]);
    for cell in csv.lines().nth(1).unwrap().split(',') {
        // 17 significant digits: d.dddddddddddddddde±x
        assert_eq!(cell.split('e').next().unwrap().trim_start_matches('-').len(), 18, "{cell}");
    }
}
