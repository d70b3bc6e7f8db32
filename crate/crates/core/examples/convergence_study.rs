//! The full refinement study with fitted rates.

use pxlap_dg::solver::SolverConfig;
use pxlap_dg::study::{fit_rate, run_study, write_study_csv, STUDY_B, STUDY_NX};

fn main() -> pxlap_dg::Result<()> {
    let rows = run_study(&STUDY_B, &STUDY_NX, 1.0, &SolverConfig::default())?;
    write_study_csv(&rows, std::io::stdout().lock())?;
    for b in STUDY_B {
        let col: Vec<_> = rows.iter().filter(|r| r.b == b).cloned().collect();
        println!("b = {b}: rate {:.3}", fit_rate(&col)?);
    }
    Ok(())
}
