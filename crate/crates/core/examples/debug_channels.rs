//! Scratch diagnostics for the channel construction (not part of the build).

use num_complex::Complex64;
use qcollide_core::collision::{channel_matrices_with, raw_matrices, ChannelOptions};
use qcollide_core::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn mat2_solve(a: [[Complex64; 2]; 2], b: [Complex64; 2]) -> [Complex64; 2] {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [
        (b[0] * a[1][1] - b[1] * a[0][1]) / det,
        (a[0][0] * b[1] - a[1][0] * b[0]) / det,
    ]
}

/// Propagate i S adot = (H - kind-dependent T) a with RK4; returns |a_P|^2.
fn run_variant(ctx: &TrajectoryContext, opts: &ChannelOptions, kind: u32) -> f64 {
    let eps = opts.epsilon.value(&opts.basis);
    let n_rk = 100_000usize;
    let t0 = ctx.t_start();
    let t1 = ctx.t_end();
    let dt = (t1 - t0) / n_rk as f64;
    let minus_i = Complex64::new(0.0, -1.0);
    let v = ctx.v;
    let rhs = |t: f64, a: &[Complex64; 2]| -> [Complex64; 2] {
        let (s, h, tm_full) = raw_matrices(ctx, t, opts).unwrap();
        let mut tm = tm_full;
        match kind {
            0 => {} // full
            1 => {
                // T = eps S only
                for i in 0..2 {
                    for j in 0..2 {
                        tm[i][j] = c(eps) * s[i][j];
                    }
                }
            }
            2 => {
                // T = (eps - gamma_dot_q) S: keep the ETF v^2/2 phase rate,
                // drop the moving-center term.
                for i in 0..2 {
                    for j in 0..2 {
                        let gq = if j == 1 { -0.5 * v * v } else { 0.0 };
                        tm[i][j] = c(eps - gq) * s[i][j];
                    }
                }
            }
            _ => unreachable!(),
        }
        let m = [
            [h[0][0] - tm[0][0], h[0][1] - tm[0][1]],
            [h[1][0] - tm[1][0], h[1][1] - tm[1][1]],
        ];
        let ma = [
            m[0][0] * a[0] + m[0][1] * a[1],
            m[1][0] * a[0] + m[1][1] * a[1],
        ];
        let x = mat2_solve(s, ma);
        [minus_i * x[0], minus_i * x[1]]
    };
    let mut a = [c(1.0), c(0.0)];
    let mut t = t0;
    for _ in 0..n_rk {
        let k1 = rhs(t, &a);
        let a2 = [a[0] + c(dt / 2.0) * k1[0], a[1] + c(dt / 2.0) * k1[1]];
        let k2 = rhs(t + dt / 2.0, &a2);
        let a3 = [a[0] + c(dt / 2.0) * k2[0], a[1] + c(dt / 2.0) * k2[1]];
        let k3 = rhs(t + dt / 2.0, &a3);
        let a4 = [a[0] + c(dt) * k3[0], a[1] + c(dt) * k3[1]];
        let k4 = rhs(t + dt, &a4);
        for i in 0..2 {
            a[i] += c(dt / 6.0) * (k1[i] + c(2.0) * k2[i] + c(2.0) * k3[i] + k4[i]);
        }
        t += dt;
    }
    a[1].norm_sqr()
}

fn main() {
    let opts = ChannelOptions::default();
    let opts_noetf = ChannelOptions { etf_enabled: false, ..ChannelOptions::default() };
    println!("eps_sto = {}", opts.basis.orbital_energy());

    for &(e_kev, b) in &[(10.0, 1.6), (10.0, 6.0), (1.0, 1.6), (25.0, 1.6)] {
        let ctx = TrajectoryContext::new(e_kev, b, 30.0, 2001).unwrap();
        let p_full = run_variant(&ctx, &opts, 0);
        let p_no_moment_keep_v2 = run_variant(&ctx, &opts, 2);
        let p_eps_only = run_variant(&ctx, &opts, 1);
        let p_noetf = run_variant(&ctx, &opts_noetf, 0);
        println!(
            "E={e_kev:5.1} b={b:3.1}: P_full={p_full:.4}  P_nomoment={p_no_moment_keep_v2:.4}  P_epsS={p_eps_only:.4}  P_noETF={p_noetf:.4}"
        );
    }

    // Effective Rabi angle from the instantaneous h_eff splitting.
    let ctx = TrajectoryContext::new(10.0, 1.6, 30.0, 2001).unwrap();
    let mut zeta = 0.0;
    let mut prev: Option<f64> = None;
    for &t in &ctx.t_grid {
        let cm = channel_matrices_with(&ctx, t, &opts).unwrap();
        let d = 0.5 * (cm.h_eff[0][0].re - cm.h_eff[1][1].re);
        let split = (d * d + cm.h_eff[0][1].norm_sqr()).sqrt();
        if let Some(p) = prev {
            zeta += 0.5 * (split + p) * (ctx.t_grid[1] - ctx.t_grid[0]);
        }
        prev = Some(split);
    }
    println!("half-splitting integral zeta = {zeta:.4}, sin^2 = {:.4}", zeta.sin().powi(2));
}
