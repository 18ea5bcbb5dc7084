//! Coefficient-by-coefficient comparison of the closed-form conic against a
//! direct second-order expansion, near alpha_hat = 1.

use drv_isac::coverage::conic_divergence;
use drv_isac::Point2;

fn main() -> drv_isac::Result<()> {
    let (w, d_v) = (0.25, 500.0);
    for alpha_hat in [1.0 - 1e-9, 0.8, 0.6] {
        let report = conic_divergence(w, alpha_hat, d_v, Point2::new(d_v, 0.0))?;
        println!("alpha_hat = {alpha_hat}");
        println!("  {:<4} {:>14} {:>14} {:>14} {:>14}", "coef", "printed", "expansion", "difference", "predicted");
        for r in &report.rows {
            println!(
                "  {:<4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
                r.name, r.paper, r.expansion, r.difference, r.predicted
            );
        }
    }
    Ok(())
}
