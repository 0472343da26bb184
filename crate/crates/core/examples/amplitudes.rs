use twinfock::detector::{transition_amplitudes, DetectorParams};
use twinfock::numerics::QuadratureConfig;
fn main() {
    let cfg = QuadratureConfig::default();
    for om in [0.5, 5.0] {
        for a in [0.02, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0] {
            let t0 = std::time::Instant::now();
            let p = DetectorParams::new(1.0, 0.4, om, a, 1.0).unwrap();
            let t = transition_amplitudes(&p, &cfg).unwrap();
            println!("{om} {a} {:.8e} {:.8e} err {:.1e} {:?}", t.eta0_sq, t.eta1_sq, t.err, t0.elapsed());
        }
    }
}
