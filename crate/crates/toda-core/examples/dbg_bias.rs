use toda_core::exact::{fateev_litvinov, ThreePointInput};
use toda_core::gmc::{mc_three_point, GridSpec};
use toda_core::root_system::{omega, pairing, TodaParams, E1, E2};

fn main() {
    let p = TodaParams::new(1.1, [1.0, 1.0]);
    // <s,omega1> = -0.02, <s,omega2> = 0.08, kappa = 2.5
    // e1 depths 0.06 each, e2 depths (2.5 - 0.02 - 0.16)/2 = 1.16 each
    let d1 = 0.06f64;
    let d2 = (2.5 - 0.02 - 0.16) / 2.0;
    let x = (2.0 * d1 + d2) / 3.0;
    let y = (d1 + 2.0 * d2) / 3.0;
    let v = E1 * x + E2 * y;
    let input = ThreePointInput::new(p.q_vec() - v, 2.5, p.q_vec() - v, p);
    println!("s1 = {:.4}, s2 = {:.4}", input.s_exponent(1), input.s_exponent(2));
    println!(
        "depths e1 {:.3} e2 {:.3} kappa {:.3}",
        pairing(p.q_vec() - input.alpha0, E1),
        pairing(p.q_vec() - input.alpha0, E2),
        pairing(p.q_vec() - omega(2) * input.kappa, E2)
    );
    let exact = fateev_litvinov(&input).unwrap().expect_finite("fali").to_f64();
    println!("exact F = {exact:.6}");
    let grid = GridSpec { levels: 3, r_cut: 10.0, points_per_level: vec![1024, 2048, 4096] };
    let run = mc_three_point(&input, &grid, 12000, 0xf417).unwrap();
    for lv in &run.levels {
        println!(
            "level {}: {:.5} +- {:.5} (bias {:+.2}%, z = {:+.1})",
            lv.level, lv.estimate_f64, lv.stderr_f64,
            (lv.estimate_f64 / exact - 1.0) * 100.0,
            (lv.estimate_f64 - exact) / lv.stderr_f64
        );
    }
    for w in &run.warnings {
        println!("warning: {w}");
    }
}
