//! Exact sensing region of one DRV against its circle and ellipse
//! approximations, for equal and unequal path-loss exponents.

use drv_isac::coverage::{sensing_coverage, Approximation, BoundaryModel, ConicMode};
use drv_isac::{derive_params, NetworkParams};

fn main() -> drv_isac::Result<()> {
    let d_v = 500.0;
    for (alpha_b, alpha_v) in [(4.0, 4.0), (3.0, 5.0)] {
        let net = NetworkParams::defaults().with_path_loss(alpha_b, alpha_v);
        let p = derive_params(&net, d_v)?;
        let model = BoundaryModel { w: p.w, alpha_hat: p.alpha_hat, d_v };
        println!("alpha_b = {alpha_b}, alpha_v = {alpha_v}: W = {:.5}, alpha_hat = {:.3}", p.w, p.alpha_hat);
        let mut methods = vec![("circle", Approximation::Circle)];
        if p.alpha_hat < 1.0 {
            methods.push(("conic_expansion", Approximation::Conic(ConicMode::Expansion)));
            methods.push(("conic_paper", Approximation::Conic(ConicMode::Paper)));
        }
        for (name, approx) in methods {
            let r = sensing_coverage(&model, approx, None, 720)?;
            println!(
                "  {name:<16} exact {:>11.4e} m2  approx {:>11.4e} m2  IoU {:.4}  max residual {:.2e}",
                r.exact_area(),
                r.approx_area(),
                r.iou,
                r.max_boundary_residual
            );
        }
    }
    Ok(())
}
