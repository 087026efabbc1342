//! x^2 + lambda x^4: Pade-summed series against direct diagonalization.

use bbpert::cli::best_pade;
use bbpert::oracle::{converged_ground_state, OracleConfig};
use bbpert::{run_series, AnsatzSpec, PotentialSpec, Scalar};

fn main() -> bbpert::Result<()> {
    let digits = 60;
    for lambda in ["0.1", "1", "10"] {
        let v = PotentialSpec::anharmonic(2, Scalar::parse(lambda, digits)?)?;
        let series = run_series(&v, AnsatzSpec::canonical(&v), 30, digits)?;
        let (n, pade) = best_pade(&series)?;
        let exact = converged_ground_state(&v, &OracleConfig::for_power(2, digits))?;
        println!(
            "lambda={lambda:<4} [{n},{n}]={}  oracle={}",
            pade.to_sig_string(18),
            exact.to_sig_string(18)
        );
    }
    Ok(())
}
