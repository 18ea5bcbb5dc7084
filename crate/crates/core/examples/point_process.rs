//! Poisson BS layer: empirical nearest-BS distance and sensing radius
//! against their laws.

use drv_isac::ppp::{expected_rc, mean_nearest_distance, nearest_distance_cdf, rc_scale, sample_ppp, NearestIndex, Window};
use drv_isac::NetworkParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> drv_isac::Result<()> {
    let net = NetworkParams::defaults();
    let lb = net.bs_intensity;
    let w = net.w()?;
    let window = Window::default_for(lb, net.drv_intensity)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let n = 20_000;
    let (mut sum_d, mut below_median) = (0.0, 0);
    let median = (2f64.ln() / (std::f64::consts::PI * lb)).sqrt();
    for _ in 0..n / 100 {
        let bs = sample_ppp(lb, window, &mut rng)?;
        let index = NearestIndex::new(&bs)?;
        for _ in 0..100 {
            let p = drv_isac::Point2::new(rng.random::<f64>() * window.width, rng.random::<f64>() * window.height);
            let d = index.nearest_distance(p);
            sum_d += d;
            below_median += usize::from(d <= median);
        }
    }
    let mean_d = sum_d / n as f64;
    println!("window {:.0} m square, {} probes", window.width, n);
    println!("mean nearest distance {mean_d:.2} m, law {:.2} m", mean_nearest_distance(lb));
    println!("fraction below median {:.4}, law {:.4}", below_median as f64 / n as f64, nearest_distance_cdf(median, lb));
    println!("mean sensing radius {:.2} m, law {:.2} m", rc_scale(w) * mean_d, expected_rc(w, lb)?);
    Ok(())
}
