//! Monte-Carlo estimate of the dynamic ranging rate at the default setup,
//! next to the closed form.

use std::time::Instant;

use drv_isac::drr::dynamic_ranging_rate_with_area;
use drv_isac::montecarlo::{estimate, Fidelity, SimConfig};
use drv_isac::NetworkParams;

fn main() -> drv_isac::Result<()> {
    let replications = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let net = NetworkParams::defaults();
    for fidelity in [Fidelity::AssumptionMatched, Fidelity::Full] {
        let cfg = SimConfig::new(net, replications, 10, 42, fidelity)?;
        let started = Instant::now();
        let report = estimate(&cfg)?;
        let analytic = dynamic_ranging_rate_with_area(&net, cfg.window.area())?;
        println!("{fidelity} ({} replications, {:.1} s)", replications, started.elapsed().as_secs_f64());
        println!("  xi     sim {:.4e} ± {:.1e}   closed form {:.4e}", report.xi.value, report.xi.half_width, analytic.xi);
        println!("  xi_r   sim {:.4e} ± {:.1e}   closed form {:.4e}", report.xi_r.value, report.xi_r.half_width, analytic.xi_r);
        if let Some(p) = report.p_dwell {
            println!("  P(k>=tau) sim {:.5} ± {:.1e}   closed form {:.5}", p.value, p.half_width, analytic.p_dwell);
        }
        println!("  events {}", report.event_count);
    }
    Ok(())
}
