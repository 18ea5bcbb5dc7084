//! Closed-form dynamic ranging rate against DRV intensity and PRI.

use drv_isac::drr::dynamic_ranging_rate;
use drv_isac::units::per_km2_to_per_m2;
use drv_isac::NetworkParams;

fn main() -> drv_isac::Result<()> {
    let base = NetworkParams::defaults();
    let a = dynamic_ranging_rate(&base)?;
    println!("defaults: P_r {:.4e}  xi_r {:.4e} /s  P(dwell >= tau) {:.6}  xi {:.4e} /s", a.p_r, a.xi_r, a.p_dwell, a.xi);

    println!("\n{:>12} {:>12}", "lambda_v/km2", "xi (1/s)");
    for lv in [0.1, 0.3, 1.0, 3.0, 10.0] {
        let net = NetworkParams { drv_intensity: per_km2_to_per_m2(lv), ..base };
        println!("{lv:>12} {:>12.4e}", dynamic_ranging_rate(&net)?.xi);
    }

    println!("\n{:>8} {:>12} {:>12}", "pri (s)", "P_dwell", "xi (1/s)");
    for pri in [0.0, 1.0, 10.0, 30.0, 100.0] {
        let net = NetworkParams { pri, ..base };
        let a = dynamic_ranging_rate(&net)?;
        println!("{pri:>8} {:>12.6} {:>12.4e}", a.p_dwell, a.xi);
    }
    Ok(())
}
