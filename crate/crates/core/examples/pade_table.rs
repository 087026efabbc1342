//! Diagonal Pade table for the quartic series next to the reference value.

use bbpert::analysis::pade_table;
use bbpert::oracle::{reference_eigenvalue, OracleConfig};
use bbpert::{run_series, AnsatzSpec, PotentialSpec};

fn main() -> bbpert::Result<()> {
    let digits = 80;
    let v = PotentialSpec::pure_power(2, digits)?;
    let series = run_series(&v, AnsatzSpec::canonical(&v), 46, digits)?;
    let table = pade_table(&series, 23)?;
    for n in 1..=23 {
        println!("[{n:>2},{n:>2}]  {}", table.get(n).unwrap().to_sig_string(16));
    }
    let exact = reference_eigenvalue(2, &OracleConfig::for_power(2, digits))?;
    println!("exact    {}", exact.eigenvalue.to_sig_string(16));
    Ok(())
}
