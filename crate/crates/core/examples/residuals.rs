//! Per-order and global residual diagnostics, plus the truncated wavefunction.

use bbpert::analysis::{global_riccati_residual, wavefunction_profile};
use bbpert::series::order_residual_with_scale;
use bbpert::{run_series, AnsatzSpec, PotentialSpec, Scalar};

fn main() -> bbpert::Result<()> {
    let digits = 50;
    let v = PotentialSpec::pure_power(2, digits)?;
    let series = run_series(&v, AnsatzSpec::canonical(&v), 10, digits)?;
    for j in 0..=10 {
        let (r, scale) = order_residual_with_scale(&series, j)?;
        println!("order {j:>2}: max|residual|={}  scale={}", r.max_abs_coeff().to_sig_string(3), scale.to_sig_string(3));
    }
    let xs: Vec<Scalar> = (0..=4).map(|i| Scalar::from_ratio(i, 2, digits)).collect();
    let global = global_riccati_residual(&series, 10, &xs)?;
    let psi = wavefunction_profile(&series, &xs)?;
    for ((x, g), p) in xs.iter().zip(&global).zip(&psi) {
        println!("x={}  R(x)={}  psi={}", x.to_sig_string(3), g.to_sig_string(3), p.to_sig_string(10));
    }
    Ok(())
}
