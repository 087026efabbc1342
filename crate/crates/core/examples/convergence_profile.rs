//! log10|E_j/E_0| for K = 1..4, written as CSV and SVG into a temp directory.

use bbpert::analysis::convergence_profile;
use bbpert::io::{figure_csv, figure_svg, write_atomic};
use bbpert::{run_series, AnsatzSpec, PotentialSpec};

fn main() -> bbpert::Result<()> {
    let digits = 60;
    let mut curves = Vec::new();
    for (k, j) in [(1, 10), (2, 40), (3, 30), (4, 20)] {
        let v = PotentialSpec::pure_power(k, digits)?;
        let series = run_series(&v, AnsatzSpec::canonical(&v), j, digits)?;
        curves.push((format!("x^{}", 2 * k), convergence_profile(&series)?));
    }
    let dir = std::env::temp_dir().join("bbpert-profile");
    std::fs::create_dir_all(&dir)?;
    write_atomic(&dir.join("profile.csv"), figure_csv(&curves)?.as_bytes())?;
    write_atomic(&dir.join("profile.svg"), figure_svg(&curves).as_bytes())?;
    println!("wrote {}", dir.display());
    Ok(())
}
