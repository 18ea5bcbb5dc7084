//! Random-waypoint walk: transition lengths and periods against their means.

use drv_isac::mobility::{build_trajectory, expected_period, MobilityParams};
use drv_isac::NetworkParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> drv_isac::Result<()> {
    let net = NetworkParams::defaults();
    let params = MobilityParams::new(net.drv_intensity, net.speed, net.pause_mean)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let horizon = 2000.0 * expected_period(&params);
    let traj = build_trajectory(drv_isac::Point2::ORIGIN, horizon, &params, &mut rng)?;
    // the final transition is truncated at the horizon
    let full = &traj.transitions[..traj.transitions.len() - 1];
    let mean_len = full.iter().map(|t| t.length).sum::<f64>() / full.len() as f64;
    let mean_period = full.iter().map(|t| t.period()).sum::<f64>() / full.len() as f64;
    println!("{} transitions over {:.0} s", traj.transitions.len(), traj.total_time);
    println!("mean length {mean_len:.1} m, expected {:.1} m", params.mean_length());
    println!("mean period {mean_period:.1} s, expected {:.1} s", expected_period(&params));
    let last = traj.transitions.last().unwrap();
    println!("final position ({:.0}, {:.0}) m", last.end.x, last.end.y);
    Ok(())
}
