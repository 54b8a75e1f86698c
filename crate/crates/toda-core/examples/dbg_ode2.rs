use num_complex::Complex64;
use toda_core::blocks::{ode_residual, BlockFn, BlockParams};
use toda_core::testutil::Lcg;

fn main() {
    let mut rng = Lcg::new(0xc0ffee ^ 0xb10c);
    let params: Vec<BlockParams> = (0..4)
        .map(|_| loop {
            let p = BlockParams::new(
                [rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85), rng.uniform(-0.85, 0.85)],
                [1.0 + rng.uniform(-0.5, 0.5), 1.0 + rng.uniform(-0.5, 0.5)],
            );
            if p.non_generic().is_none() {
                break p;
            }
        })
        .collect();
    let mut worst = (0.0f64, String::new());
    for (pi, p) in params.iter().take(2).enumerate() {
        for _ in 0..10 {
            let zin = Complex64::from_polar(rng.uniform(0.15, 0.6), rng.uniform(0.3, 2.8));
            let zout = Complex64::from_polar(rng.uniform(1.6, 4.0), rng.uniform(0.4, 2.7));
            for i in 0..=2 {
                let r = ode_residual(p, BlockFn::H(i), zin).unwrap();
                if r > worst.0 {
                    worst = (r, format!("params{pi} {p:?} H{i} z={zin}"));
                }
            }
            for i in 1..=3 {
                let r = ode_residual(p, BlockFn::G(i), zout).unwrap();
                if r > worst.0 {
                    worst = (r, format!("params{pi} {p:?} G{i} z={zout}"));
                }
            }
        }
    }
    println!("worst {:.3e}: {}", worst.0, worst.1);
}
