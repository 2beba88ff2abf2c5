use nonint::exactalg::rat;
use nonint::fuchsian::residue_matrices;
use nonint::model::MassParameters;
use nonint::monodromy::{integrate_along, loop_path, Pole};
use nonint::numeric::multiset_match_max_distance;
use num_complex::Complex64 as C64;

fn main() {
    let m = MassParameters::new(rat(1), rat(1)).unwrap();
    let sys = residue_matrices(&m);
    let t1a = integrate_along(&sys, &loop_path(&sys, Pole::T1, sys.points.t0_c() - 1.0), 1e-12).unwrap();
    let t1b = integrate_along(&sys, &loop_path(&sys, Pole::T1, sys.points.t0_c() + C64::new(0.8, 0.9)), 1e-12).unwrap();
    println!("norm a {:.3e}  norm b {:.3e}", t1a.matrix.norm(), t1b.matrix.norm());
    let ea = t1a.matrix.eigenvalues_polished(1e-3);
    let eb = t1b.matrix.eigenvalues_polished(1e-3);
    println!("ea {:?}", ea.iter().map(|z| format!("{:.2e},{:.2e}", z.re - 1.0, z.im)).collect::<Vec<_>>());
    println!("eb {:?}", eb.iter().map(|z| format!("{:.2e},{:.2e}", z.re - 1.0, z.im)).collect::<Vec<_>>());
    println!("match {:.3e}", multiset_match_max_distance(&ea, &eb));
}
