use specperturb::numkernel::{gaussian_matrix, sym_eig, SeededRng};
use std::time::Instant;

fn main() {
    for &n in &[200usize, 500, 1000] {
        let mut rng = SeededRng::new(1);
        let g = gaussian_matrix(n, n, &mut rng).unwrap();
        let s = g.add(&g.transpose()).unwrap().scaled(0.5);
        let t = Instant::now();
        let r = sym_eig(&s).unwrap();
        println!("n={n}: {:?}, residual_rel={:.2e}", t.elapsed(), r.residual(&s) / s.frobenius_norm());
    }
}
