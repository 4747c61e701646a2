//! Scratch: static gerade/ungerade splitting, STO-3G vs analytic exact-1s.

use qcollide_core::collision::{channel_matrices_with, ChannelOptions};
use qcollide_core::*;

/// Exact-1s H2+ two-state electronic splitting (E_u - E_g)/2 at distance R.
fn exact_1s_half_splitting(r: f64) -> f64 {
    let s = (-r).exp() * (1.0 + r + r * r / 3.0);
    let j = -1.0 / r + (-2.0 * r).exp() * (1.0 + 1.0 / r);
    let k = -(-r).exp() * (1.0 + r);
    let h11 = -0.5 + j;
    let h12 = -0.5 * s + k;
    let e_g = (h11 + h12) / (1.0 + s);
    let e_u = (h11 - h12) / (1.0 - s);
    0.5 * (e_u - e_g)
}

fn main() {
    // Static STO-3G splitting from the channel machinery: ETF off and a tiny
    // velocity so the moving-center term is negligible; evaluate at t = 0
    // with b = R.
    let opts = ChannelOptions { etf_enabled: false, ..ChannelOptions::default() };
    println!("  R    exact1s      sto3g     ratio");
    for &r in &[1.0, 1.6, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0] {
        let ctx = TrajectoryContext::new(0.001, r, 30.0, 11).unwrap(); // v ~ 0.0063
        let cm = channel_matrices_with(&ctx, 0.0, &opts).unwrap();
        let d = 0.5 * (cm.h_eff[0][0].re - cm.h_eff[1][1].re);
        let split = (d * d + cm.h_eff[0][1].norm_sqr()).sqrt();
        let ex = exact_1s_half_splitting(r);
        println!("{r:5.2} {ex:10.6} {split:10.6} {:9.3}", ex / split);
    }
}
