//! Optimal truncation of the asymptotic energy series for x^4, x^6 and x^8.

use bbpert::analysis::optimal_truncation;
use bbpert::{run_series, AnsatzSpec, PotentialSpec};

fn main() -> bbpert::Result<()> {
    let digits = 80;
    for (k, p, j, bound) in [(2, 1, 40, 40), (3, 2, 30, 20), (4, 3, 20, 13)] {
        let v = PotentialSpec::pure_power(k, digits)?;
        let series = run_series(&v, AnsatzSpec::new(p), j, digits)?;
        let r = optimal_truncation(&series, Some(bound))?;
        println!(
            "K={k} p={p} bound={bound}: j*={} E_j*={} estimate={}",
            r.argmin_index,
            r.min_term.to_sig_string(10),
            r.best_estimate.to_sig_string(12)
        );
    }
    Ok(())
}
