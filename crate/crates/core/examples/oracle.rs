//! Independent ground-state energies from a Rayleigh-Ritz diagonalization,
//! plus the coupling scaling law.

use bbpert::oracle::{reference_eigenvalue, scaled_eigenvalue, OracleConfig};
use bbpert::Scalar;

fn main() -> bbpert::Result<()> {
    let digits = 40;
    for k in 1..=4 {
        let config = OracleConfig::for_power(k, digits);
        let e = reference_eigenvalue(k, &config)?;
        let e8 = scaled_eigenvalue(k, &Scalar::from_int(8, digits), &config)?;
        println!(
            "K={k} n={:<3} E={}  E(8 x^{})={}",
            e.basis_size,
            e.eigenvalue.to_sig_string(22),
            2 * k,
            e8.to_sig_string(22)
        );
    }
    Ok(())
}
