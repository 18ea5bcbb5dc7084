//! Echo power from the BS and a DRV at a few target positions, and the
//! sign of the equal-power residual.

use drv_isac::channel::{equal_rsp_residual, received_sensing_power, sample_rcs};
use drv_isac::{NetworkParams, Point2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> drv_isac::Result<()> {
    let net = NetworkParams::defaults();
    let drv = Point2::new(500.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("{:>18} {:>12} {:>12} {:>12} {:>8}", "target (m)", "BS (W)", "DRV (W)", "residual", "served");
    for target in [Point2::new(450.0, 0.0), Point2::new(500.0, 150.0), Point2::new(700.0, 0.0), Point2::new(250.0, 0.0)] {
        let sigma = sample_rcs(net.mean_rcs, &mut rng)?.sigma_t;
        let pb = received_sensing_power(&net.bs, target.norm(), sigma, net.clutter_rcs, net.wavelength)?;
        let pv = received_sensing_power(&net.drv, target.distance(drv), sigma, net.clutter_rcs, net.wavelength)?;
        let residual = equal_rsp_residual(&net, target, drv)?;
        let who = if residual > 0.0 { "DRV" } else { "BS" };
        println!(
            "{:>18} {pb:>12.3e} {pv:>12.3e} {residual:>12.3e} {who:>8}",
            format!("({:.0}, {:.0})", target.x, target.y)
        );
    }
    Ok(())
}
