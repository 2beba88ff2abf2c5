use nonint::exactalg::ratio;
use nonint::fuchsian::{crosscheck_sample_points, derivation_crosscheck, residue_matrices};
use nonint::model::MassParameters;

#[test]
fn exact_residues_match_derived_system() {
    for (a, b) in [((1i64, 1i64), (1i64, 1i64)), ((1, 2), (1, 1)), ((1, 10), (1, 5))] {
        let m = MassParameters::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap();
        let sys = residue_matrices(&m);
        let samples = crosscheck_sample_points(&sys, 20);
        let report = derivation_crosscheck(&sys, &samples, 1e-6).unwrap();
        println!("masses {a:?},{b:?}: max deviation {:.3e}", report.max_relative_deviation);
        assert!(report.pass, "crosscheck failed at {a:?},{b:?}: {report:?}");
    }
}
