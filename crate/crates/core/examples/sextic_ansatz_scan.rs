//! Scan of the ansatz offset p for x^6. Only p=2 yields a usable series;
//! the other offsets either have no admissible root or diverge at once.

use bbpert::analysis::partial_sums;
use bbpert::series::closure_roots;
use bbpert::{run_series, AnsatzSpec, PotentialSpec};

fn main() -> bbpert::Result<()> {
    let digits = 60;
    let v = PotentialSpec::pure_power(3, digits)?;
    for p in 2..=4 {
        let ansatz = AnsatzSpec::new(p);
        let roots = closure_roots(&v, ansatz, digits)?;
        let real: Vec<String> = roots.real.iter().map(|r| r.to_sig_string(8)).collect();
        println!("p={p}: positive roots {real:?}, admissible {}", roots.admissible.len());
        match run_series(&v, ansatz, 15, digits) {
            Ok(s) => {
                let sums = partial_sums(&s);
                println!("    E_15={}  E^[14]={}", s.terms[15].energy.to_sig_string(10), sums[14].to_sig_string(10));
            }
            Err(e) => println!("    {e}"),
        }
    }
    Ok(())
}
