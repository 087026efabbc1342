//! First orders of the quartic hierarchy: energies, the odd polynomials f_j
//! and the absorbed even remainders W_j.

use bbpert::{run_series, AnsatzSpec, PotentialSpec};

fn main() -> bbpert::Result<()> {
    let digits = 40;
    let v = PotentialSpec::pure_power(2, digits)?;
    let series = run_series(&v, AnsatzSpec::canonical(&v), 4, digits)?;
    for t in &series.terms {
        println!("E_{} = {}", t.j, t.energy.to_sig_string(25));
        for (e, c) in t.f.iter().filter(|(_, c)| !c.is_zero()) {
            println!("    f: x^{e:<2} {}", c.to_sig_string(20));
        }
        for (e, c) in t.w.iter().filter(|(_, c)| !c.is_zero()) {
            println!("    W: x^{e:<2} {}", c.to_sig_string(20));
        }
    }
    Ok(())
}
