//! The certification layer: the symbolic invariant-theory identity suite
//! (the case analysis that forces a unipotent product with a contradictory
//! spectrum at infinity) and the aggregated per-mass certificate.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::exactalg::derivation::LinearField;
use crate::exactalg::field::FieldElement;
use crate::exactalg::matrix::{FieldMatrix, PolyMatrix};
use crate::exactalg::poly::{varset, MultiPoly, VarSet};
use crate::exactalg::{rational_string, Rational};
use crate::model::MassParameters;
use crate::numeric::cmatrix::CMat;
use crate::Error;

type C64 = Complex64;

/// Outcome of one verification step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// a numerical rank decision fell inside its tolerance band
    Indeterminate,
}

/// One named verification step with its measured values.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub value: Value,
    /// "exact" for number-field identities, a number otherwise
    pub tolerance: String,
    /// stable slug naming the verified statement
    pub paper_anchor: String,
}

impl CheckResult {
    fn exact(name: &str, anchor: &str, pass: bool, value: Value) -> Self {
        Self {
            name: name.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            value,
            tolerance: "exact".into(),
            paper_anchor: anchor.into(),
        }
    }

    fn numeric(name: &str, anchor: &str, pass: bool, tol: f64, value: Value) -> Self {
        Self {
            name: name.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            value,
            tolerance: format!("{tol:e}"),
            paper_anchor: anchor.into(),
        }
    }
}

/// The aggregated verification record for one mass pair.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Certificate {
    pub alpha: String,
    pub beta: String,
    pub checks: Vec<CheckResult>,
    pub verdict: CheckStatus,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

/// Tunable knobs of the certification pipeline.
#[derive(Clone, Debug)]
pub struct CertifyConfig {
    /// integration tolerance for the continuation runs
    pub integration_tol: f64,
    /// gate for the closed-form vs derived-coefficient comparison
    pub crosscheck_tol: f64,
    /// truncation order of the local series
    pub series_order: usize,
    /// test hook: exact perturbation of one residue entry `(row, col, eps)`
    pub fault: Option<(usize, usize, Rational)>,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            integration_tol: 1e-12,
            crosscheck_tol: 1e-6,
            series_order: 30,
            fault: None,
        }
    }
}

// ---------------------------------------------------------------------------
// symbolic identity suite
// ---------------------------------------------------------------------------

fn suite_vars() -> VarSet {
    varset(&[
        "x1", "x2", "x3", "x4", "a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "c1", "c2",
        "c3", "c4", "d1", "d2", "d3", "d4", "rho", "eps1", "zeta1", "zeta2", "eta1",
    ])
}

fn shift_field(vs: &VarSet) -> LinearField {
    // x2 d/dx1 + x4 d/dx3
    let z = MultiPoly::zero(vs);
    let one = MultiPoly::one(vs);
    LinearField::new(
        vs,
        &["x1", "x2", "x3", "x4"],
        vec![
            vec![z.clone(), one.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), one],
            vec![z.clone(), z.clone(), z.clone(), z.clone()],
        ],
    )
}

fn generic_field(vs: &VarSet) -> LinearField {
    // rows of symbols a, b, c, d
    let row = |names: [&str; 4]| -> Vec<MultiPoly> {
        names.iter().map(|n| MultiPoly::var(vs, n)).collect()
    };
    LinearField::new(
        vs,
        &["x1", "x2", "x3", "x4"],
        vec![
            row(["a1", "a2", "a3", "a4"]),
            row(["b1", "b2", "b3", "b4"]),
            row(["c1", "c2", "c3", "c4"]),
            row(["d1", "d2", "d3", "d4"]),
        ],
    )
}

fn kernel_generators(vs: &VarSet) -> (MultiPoly, MultiPoly, MultiPoly) {
    let x = |n: &str| MultiPoly::var(vs, n);
    (
        x("x2"),
        x("x4"),
        x("x4").mul(&x("x1")).sub(&x("x2").mul(&x("x3"))),
    )
}

/// The kernel of the shift operator: generators, their annihilation, and
/// functional independence.
pub fn kernel_generators_check() -> CheckResult {
    let vs = suite_vars();
    let delta = shift_field(&vs);
    let (y1, y2, y3) = kernel_generators(&vs);
    let mut pass = true;
    for y in [&y1, &y2, &y3] {
        pass &= delta.apply(y).map(|p| p.is_zero()).unwrap_or(false);
    }
    let product = y1.mul(&y2).mul(&y3);
    pass &= delta.apply(&product).map(|p| p.is_zero()).unwrap_or(false);
    // Jacobian of (Y1, Y2, Y3) at x = (1, 2, 3, 4) has rank 3
    let point = [1i64, 2, 3, 4];
    let eval_grad = |p: &MultiPoly| -> Vec<FieldElement> {
        ["x1", "x2", "x3", "x4"]
            .iter()
            .map(|name| {
                let d = p.partial(name);
                let mut full = vec![FieldElement::zero(); vs.len()];
                for (k, &v) in point.iter().enumerate() {
                    full[k] = FieldElement::from_int(v);
                }
                d.eval(&full)
            })
            .collect()
    };
    let jac = FieldMatrix::from_rows(vec![eval_grad(&y1), eval_grad(&y2), eval_grad(&y3)]);
    let rank = jac.rank();
    pass &= rank == 3;
    CheckResult::exact(
        "kernel_generators",
        "shift-operator kernel generators and independence",
        pass,
        json!({"jacobian_rank": rank}),
    )
}

/// Case analysis (1): invariants depending on the shift-invariant momenta
/// alone force a rank-two upper structure whose unipotent product has full
/// unit spectrum.
pub fn case1_charpoly_check() -> CheckResult {
    let vs = suite_vars();
    let z = MultiPoly::zero(&vs);
    let v = |n: &str| MultiPoly::var(&vs, n);
    let one = MultiPoly::one(&vs);
    let half = FieldElement::from_ratio(1, 2);
    let quarter = FieldElement::from_ratio(1, 4);
    let mut pass = true;

    // R with vanishing second and fourth rows
    let r = PolyMatrix::from_rows(vec![
        vec![v("a1"), v("a2"), v("a3"), v("a4")],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
        vec![v("c1"), v("c2"), v("c3"), v("c4")],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
    ]);
    let cp = r.charpoly("l").expect("4x4");
    let ext = cp.vars.clone();
    let l = MultiPoly::var(&ext, "l");
    let a1 = MultiPoly::var(&ext, "a1");
    let c3 = MultiPoly::var(&ext, "c3");
    let c1 = MultiPoly::var(&ext, "c1");
    let a3 = MultiPoly::var(&ext, "a3");
    // l^4 - (a1 + c3) l^3 + (a1 c3 - c1 a3) l^2
    let expected = l
        .pow(4)
        .sub(&a1.add(&c3).mul(&l.pow(3)))
        .add(&a1.mul(&c3).sub(&c1.mul(&a3)).mul(&l.pow(2)));
    pass &= cp.sub(&expected).is_zero();

    // T1 T2 = (I + D)(I + R) equals the displayed matrix
    let eye = |k: i64| MultiPoly::constant(&vs, FieldElement::from_int(k));
    let d_mat = PolyMatrix::from_rows(vec![
        vec![z.clone(), one.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), one.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
    ]);
    let mut t1 = d_mat.clone();
    let mut t2 = r.clone();
    for i in 0..4 {
        t1[(i, i)] = t1[(i, i)].add(&eye(1));
        t2[(i, i)] = t2[(i, i)].add(&eye(1));
    }
    let prod = t1.matmul(&t2);
    let displayed = PolyMatrix::from_rows(vec![
        vec![
            v("a1").add(&one),
            v("a2").add(&one),
            v("a3"),
            v("a4"),
        ],
        vec![z.clone(), one.clone(), z.clone(), z.clone()],
        vec![
            v("c1"),
            v("c2"),
            v("c3").add(&one),
            v("c4").add(&one),
        ],
        vec![z.clone(), z.clone(), z.clone(), one.clone()],
    ]);
    pass &= prod == displayed;

    // charpoly of the product equals (l-1)^2 ((l-s)^2 - f^2) with
    // s = 1 + (a1+c3)/2 and f^2 = (a1^2 + c3^2 + 4 c1 a3 - 2 a1 c3)/4
    let cp_prod = prod.charpoly("l").expect("4x4");
    let s_poly = MultiPoly::one(&ext).add(&a1.add(&c3).scale(&half));
    let fsq = a1
        .pow(2)
        .add(&c3.pow(2))
        .add(&c1.mul(&a3).scale(&FieldElement::from_int(4)))
        .sub(&a1.mul(&c3).scale(&FieldElement::from_int(2)))
        .scale(&quarter);
    let lm1 = l.sub(&MultiPoly::one(&ext));
    let factored = lm1
        .pow(2)
        .mul(&l.sub(&s_poly).pow(2).sub(&fsq));
    pass &= cp_prod.sub(&factored).is_zero();

    // the zero-eigenvalue constraints collapse s to 1 and f^2 to 0:
    // substitute c3 -> -a1, then reduce c1 a3 -> -a1^2
    let minus_a1 = a1.neg();
    let reduce = |p: &MultiPoly| -> MultiPoly {
        p.substitute("c3", &minus_a1)
            .reduce_product("c1", "a3", &a1.pow(2).neg())
    };
    pass &= reduce(&s_poly.sub(&MultiPoly::one(&ext))).is_zero();
    pass &= reduce(&fsq).is_zero();
    let quartic_one = lm1.pow(4);
    pass &= reduce(&cp_prod).sub(&quartic_one).is_zero();

    // numeric instantiation satisfying the constraints
    let c = |x: f64| C64::new(x, 0.0);
    let num = CMat::from_rows(vec![
        vec![c(2.0 + 1.0), c(0.7 + 1.0), c(1.0), c(-0.4)],
        vec![c(0.0), c(1.0), c(0.0), c(0.0)],
        vec![c(-4.0), c(0.9), c(-2.0 + 1.0), c(1.3 + 1.0)],
        vec![c(0.0), c(0.0), c(0.0), c(1.0)],
    ]);
    let eigs = num.eigenvalues_polished(1e-2);
    let worst = eigs
        .iter()
        .map(|e| (e - c(1.0)).norm())
        .fold(0.0, f64::max);
    pass &= worst < 1e-10;

    CheckResult::exact(
        "case1_momentum_invariants",
        "momentum-only invariants force unit product spectrum",
        pass,
        json!({"numeric_eigenvalue_deviation": worst}),
    )
}

/// Case analysis (2): an invariant depending on the positions forces, via
/// the bracket operators, the final unipotent form with unit spectrum.
pub fn case2_conditions_check() -> CheckResult {
    let vs = suite_vars();
    let v = |n: &str| MultiPoly::var(&vs, n);
    let delta = shift_field(&vs);
    let big_delta = generic_field(&vs);
    let mut pass = true;

    // delta1 = [delta, Delta] has the printed linear components
    let delta1 = delta.commutator(&big_delta);
    let f1 = v("b1")
        .neg()
        .mul(&v("x1"))
        .add(&v("a1").sub(&v("b2")).mul(&v("x2")))
        .sub(&v("b3").mul(&v("x3")))
        .add(&v("a3").sub(&v("b4")).mul(&v("x4")));
    let f2 = v("b1").mul(&v("x2")).add(&v("b3").mul(&v("x4")));
    let f3 = v("d1")
        .neg()
        .mul(&v("x1"))
        .add(&v("c1").sub(&v("d2")).mul(&v("x2")))
        .sub(&v("d3").mul(&v("x3")))
        .add(&v("c3").sub(&v("d4")).mul(&v("x4")));
    let f4 = v("d1").mul(&v("x2")).add(&v("d3").mul(&v("x4")));
    for (j, expected) in [&f1, &f2, &f3, &f4].iter().enumerate() {
        pass &= delta1.component(j).sub(expected).is_zero();
    }

    // delta2 = -1/2 [delta, delta1] = (b1 x2 + b3 x4) d/dx1 + (d1 x2 + d3 x4) d/dx3
    let delta2 = delta.commutator(&delta1).scale_rational(-1, 2);
    let z = MultiPoly::zero(&vs);
    let exp_components = [f2.clone(), z.clone(), f4.clone(), z.clone()];
    for (j, expected) in exp_components.iter().enumerate() {
        pass &= delta2.component(j).sub(expected).is_zero();
    }

    // delta2 Y3 expands to b1 x2 x4 + b3 x4^2 - d1 x2^2 - d3 x2 x4
    let (y1, y2, y3) = kernel_generators(&vs);
    let d2y3 = delta2.apply(&y3).expect("same ring");
    let expected_d2y3 = v("b1")
        .mul(&v("x2"))
        .mul(&v("x4"))
        .add(&v("b3").mul(&v("x4")).mul(&v("x4")))
        .sub(&v("d1").mul(&v("x2")).mul(&v("x2")))
        .sub(&v("d3").mul(&v("x2")).mul(&v("x4")));
    pass &= d2y3.sub(&expected_d2y3).is_zero();
    // it vanishes exactly under b3 = d1 = 0, b1 = d3 = rho
    let rho = v("rho");
    let sub_613 = |p: &MultiPoly| -> MultiPoly {
        p.substitute("b3", &z)
            .substitute("d1", &z)
            .substitute("b1", &rho)
            .substitute("d3", &rho)
    };
    pass &= sub_613(&d2y3).is_zero();
    // and the vanishing forces exactly those relations: the three quadratic
    // monomial coefficients are b3, -d1, b1 - d3
    let coeff_of = |p: &MultiPoly, x2_pow: u8, x4_pow: u8| -> MultiPoly {
        p.coeff_of_power("x2", x2_pow).coeff_of_power("x4", x4_pow)
    };
    pass &= coeff_of(&d2y3, 0, 2).sub(&v("b3")).is_zero();
    pass &= coeff_of(&d2y3, 2, 0).add(&v("d1")).is_zero();
    pass &= coeff_of(&d2y3, 1, 1).sub(&v("b1").sub(&v("d3"))).is_zero();

    // with those relations, delta1 scales Y1, Y2 and maps Y3 into the
    // quadratic span with the printed coefficients
    let d1y1 = sub_613(&delta1.apply(&y1).expect("ring"));
    let d1y2 = sub_613(&delta1.apply(&y2).expect("ring"));
    let d1y3 = sub_613(&delta1.apply(&y3).expect("ring"));
    pass &= d1y1.sub(&rho.mul(&y1)).is_zero();
    pass &= d1y2.sub(&rho.mul(&y2)).is_zero();
    let v1 = v("d2").sub(&v("c1"));
    let v2 = v("a3").sub(&v("b4"));
    let v3 = v("a1").sub(&v("b2")).sub(&v("c3")).add(&v("d4"));
    let expected_d1y3 = v1
        .mul(&y1.pow(2))
        .add(&v2.mul(&y2.pow(2)))
        .add(&v3.mul(&y1).mul(&y2));
    pass &= d1y3.sub(&expected_d1y3).is_zero();

    // with rho = v1 = v2 = v3 = 0 the matrix takes the constrained form;
    // its characteristic polynomial has the printed coefficients
    let constrained = |p: &MultiPoly| -> MultiPoly {
        p.substitute("b1", &z)
            .substitute("b3", &z)
            .substitute("d1", &z)
            .substitute("d3", &z)
            .substitute("a1", &v("eps1").add(&v("b2")))
            .substitute("c3", &v("eps1").add(&v("d4")))
            .substitute("c1", &v("zeta1"))
            .substitute("d2", &v("zeta1"))
            .substitute("a3", &v("zeta2"))
            .substitute("b4", &v("zeta2"))
    };
    let r_rows: Vec<Vec<MultiPoly>> = [
        ["a1", "a2", "a3", "a4"],
        ["b1", "b2", "b3", "b4"],
        ["c1", "c2", "c3", "c4"],
        ["d1", "d2", "d3", "d4"],
    ]
    .iter()
    .map(|row| row.iter().map(|n| constrained(&v(n))).collect())
    .collect();
    let r_final = PolyMatrix::from_rows(r_rows);
    let coeffs = r_final.charpoly_coeffs().expect("4x4");
    let b2 = v("b2");
    let d4 = v("d4");
    let eps1 = v("eps1");
    let zz = v("zeta1").mul(&v("zeta2"));
    let sigma = b2.add(&d4).add(&eps1);
    let two = FieldElement::from_int(2);
    let three = FieldElement::from_int(3);
    let p1 = sigma.scale(&two).neg();
    let p2 = b2
        .mul(&eps1)
        .scale(&three)
        .sub(&zz.scale(&two))
        .add(&eps1.mul(&d4).scale(&three))
        .add(&b2.mul(&d4).scale(&FieldElement::from_int(4)))
        .add(&b2.pow(2))
        .add(&eps1.pow(2))
        .add(&d4.pow(2));
    let inner = b2
        .mul(&d4)
        .scale(&two)
        .add(&b2.mul(&eps1))
        .add(&d4.mul(&eps1))
        .sub(&zz.scale(&two));
    let p3 = sigma.mul(&inner).neg();
    let p4 = b2.mul(&d4).sub(&zz).mul(
        &b2.mul(&d4)
            .add(&b2.mul(&eps1))
            .add(&d4.mul(&eps1))
            .sub(&zz)
            .add(&eps1.pow(2)),
    );
    pass &= coeffs[1].sub(&p1).is_zero();
    pass &= coeffs[2].sub(&p2).is_zero();
    pass &= coeffs[3].sub(&p3).is_zero();
    pass &= coeffs[4].sub(&p4).is_zero();

    // forcing chain for P_i = 0: P1 gives sigma = 0; P3 is a multiple of
    // sigma; modulo sigma, P2 and P4 collapse; together they force
    // eps1 = 0, d4 = -b2 and zeta1 zeta2 = -b2^2.
    let minus_b2d4 = b2.add(&d4).neg();
    let mod_sigma = |p: &MultiPoly| p.substitute("eps1", &minus_b2d4);
    pass &= mod_sigma(&p2)
        .add(&b2.pow(2).add(&d4.pow(2)).add(&zz.scale(&two)))
        .is_zero();
    pass &= mod_sigma(&p4).sub(&b2.mul(&d4).sub(&zz).pow(2)).is_zero();
    // P4 = 0 mod sigma forces zeta1 zeta2 = b2 d4; then -P2 becomes (b2+d4)^2
    let after_p4 = mod_sigma(&p2).neg().reduce_product("zeta1", "zeta2", &b2.mul(&d4));
    pass &= after_p4.sub(&b2.add(&d4).pow(2)).is_zero();

    // final product: T2 with eta1 = b2, d4 = -eta1, eps1 = 0 and the
    // surviving symbols; its product with I + D has unit spectrum exactly,
    // modulo the relation eta1^2 + zeta1 zeta2 = 0
    let eta = v("eta1");
    let final_sub = |p: &MultiPoly| -> MultiPoly {
        constrained(p)
            .substitute("eps1", &z)
            .substitute("b2", &eta)
            .substitute("d4", &eta.neg())
    };
    let one = MultiPoly::one(&vs);
    let mut t2_final_rows = Vec::new();
    for (i, row) in [
        ["a1", "a2", "a3", "a4"],
        ["b1", "b2", "b3", "b4"],
        ["c1", "c2", "c3", "c4"],
        ["d1", "d2", "d3", "d4"],
    ]
    .iter()
    .enumerate()
    {
        let mut out_row = Vec::new();
        for (j, n) in row.iter().enumerate() {
            let mut e = final_sub(&v(n));
            if i == j {
                e = e.add(&one);
            }
            out_row.push(e);
        }
        t2_final_rows.push(out_row);
    }
    let t2_final = PolyMatrix::from_rows(t2_final_rows);
    // matches the displayed matrix
    let displayed = PolyMatrix::from_rows(vec![
        vec![eta.add(&one), v("a2"), v("zeta2"), v("a4")],
        vec![z.clone(), eta.add(&one), z.clone(), v("zeta2")],
        vec![v("zeta1"), v("c2"), one.sub(&eta), v("c4")],
        vec![z.clone(), v("zeta1"), z.clone(), one.sub(&eta)],
    ]);
    pass &= t2_final == displayed;
    let mut t1 = PolyMatrix::from_rows(vec![
        vec![one.clone(), one.clone(), z.clone(), z.clone()],
        vec![z.clone(), one.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), one.clone(), one.clone()],
        vec![z.clone(), z.clone(), z.clone(), one.clone()],
    ]);
    t1[(0, 1)] = one.clone();
    let prod = t1.matmul(&t2_final);
    let cp = prod.charpoly("l").expect("4x4");
    let ext = cp.vars.clone();
    let l = MultiPoly::var(&ext, "l");
    let quartic_one = l.sub(&MultiPoly::one(&ext)).pow(4);
    let reduced = cp.reduce_square(
        "eta1",
        &MultiPoly::var(&ext, "zeta1")
            .mul(&MultiPoly::var(&ext, "zeta2"))
            .neg(),
    );
    pass &= reduced.sub(&quartic_one).is_zero();

    // numeric instantiation: eta1 = 1, zeta1 = 1, zeta2 = -1
    let c = |x: f64| C64::new(x, 0.0);
    let t2_num = CMat::from_rows(vec![
        vec![c(2.0), c(0.3), c(-1.0), c(0.8)],
        vec![c(0.0), c(2.0), c(0.0), c(-1.0)],
        vec![c(1.0), c(-0.5), c(0.0), c(0.4)],
        vec![c(0.0), c(1.0), c(0.0), c(0.0)],
    ]);
    let mut t1_num = CMat::identity(4);
    t1_num[(0, 1)] = c(1.0);
    t1_num[(2, 3)] = c(1.0);
    let eigs = t1_num.matmul(&t2_num).eigenvalues_polished(1e-2);
    let worst = eigs
        .iter()
        .map(|e| (e - c(1.0)).norm())
        .fold(0.0, f64::max);
    pass &= worst < 1e-12;

    CheckResult::exact(
        "case2_position_invariants",
        "position-dependent invariants force unit product spectrum",
        pass,
        json!({"numeric_eigenvalue_deviation": worst}),
    )
}

/// Run the mass-independent symbolic suite.
pub fn symbolic_suite() -> Vec<CheckResult> {
    vec![
        kernel_generators_check(),
        case1_charpoly_check(),
        case2_conditions_check(),
    ]
}

// ---------------------------------------------------------------------------
// the per-mass certificate
// ---------------------------------------------------------------------------

fn status_all(checks: &[CheckResult]) -> CheckStatus {
    if checks.iter().any(|c| c.status == CheckStatus::Fail) {
        CheckStatus::Fail
    } else if checks.iter().any(|c| c.status == CheckStatus::Indeterminate) {
        CheckStatus::Indeterminate
    } else {
        CheckStatus::Pass
    }
}

/// Run the full verification pipeline for one mass pair.
pub fn certify(m: &MassParameters, config: &CertifyConfig) -> Result<Certificate, Error> {
    let mut checks = Vec::new();
    let mut sys = crate::fuchsian::residue_matrices(m);
    if let Some((row, col, eps)) = &config.fault {
        sys.perturb_res_a(*row, *col, eps.clone());
    }

    // exact residue structure
    let report = crate::fuchsian::structural_checks(&sys);
    checks.push(CheckResult::exact(
        "residue_structure",
        "residue eigenvalue structure at the three finite poles",
        report.all_ok(),
        json!({
            "charpoly_t0": report.charpoly_a,
            "charpoly_t1": report.charpoly_b,
            "conjugate_pair": report.conjugacy_ok,
            "infinity_matches_printed": report.a_inf_matches_printed,
            "trace_at_infinity_is_six": report.a_inf_trace_six,
        }),
    ));

    // numeric spectrum of the residue at infinity
    let spec_err = crate::fuchsian::a_infinity_spectrum_error(&sys);
    checks.push(CheckResult::numeric(
        "a_infinity_spectrum",
        "exponents at infinity",
        spec_err < 1e-10,
        1e-10,
        json!({"max_eigenvalue_deviation": spec_err}),
    ));

    // transcription cross-check against the independently derived system
    let samples = crate::fuchsian::crosscheck_sample_points(&sys, 20);
    let cross = crate::fuchsian::derivation_crosscheck(&sys, &samples, config.crosscheck_tol)?;
    checks.push(CheckResult::numeric(
        "derivation_crosscheck",
        "closed-form coefficients equal the derived variational system",
        cross.pass,
        cross.tolerance,
        json!({"max_relative_deviation": cross.max_relative_deviation, "samples": cross.samples}),
    ));

    // orbit parametrization: residual, exact zero energy, energy relation
    let ctx = crate::dynamics::OrbitContext::new(m.clone(), crate::exactalg::rat(1))?;
    let mut max_residual: f64 = 0.0;
    let mut counted = 0;
    for j in 0..100 {
        let ang = 2.0 * std::f64::consts::PI * j as f64 / 100.0;
        let rad = 0.15 + 1.8 * (j as f64 / 100.0);
        let w = C64::new(rad * ang.cos(), rad * ang.sin());
        if !ctx.is_regular(w) {
            continue;
        }
        max_residual = max_residual.max(ctx.orbit_residual(w)?);
        counted += 1;
    }
    let mut exact_h_zero = true;
    for w in [
        crate::exactalg::rat(0),
        crate::exactalg::ratio(1, 3),
        crate::exactalg::ratio(-7, 5),
        crate::exactalg::rat(2),
    ] {
        if let Ok(pt) = crate::dynamics::lagrange_orbit_exact(&ctx, &w) {
            exact_h_zero &= crate::dynamics::hamiltonian_on_orbit_exact(&ctx, &pt).is_zero();
        }
    }
    let energy_identity = crate::dynamics::energy_relation_identity(&ctx);
    checks.push(CheckResult::numeric(
        "orbit_parametrization",
        "parabolic orbit solves the reduced system at zero energy",
        max_residual < 1e-10 && exact_h_zero && energy_identity && counted >= 90,
        1e-10,
        json!({
            "max_residual": max_residual,
            "sampled_points": counted,
            "exact_zero_energy": exact_h_zero,
            "energy_relation_identity": energy_identity,
        }),
    ));

    // canonicity of the two reductions
    let rel_defect = crate::dynamics::hamiltonians::relative_symplectic_defect();
    let rot_defect = crate::dynamics::hamiltonians::rotating_symplectic_defect();
    checks.push(CheckResult::numeric(
        "symplectic_reductions",
        "generating-function reductions are canonical",
        rel_defect < 1e-12 && rot_defect < 1e-12,
        1e-12,
        json!({"relative_defect": rel_defect, "rotating_defect": rot_defect}),
    ));

    // monodromy data
    let rep = crate::monodromy::monodromy_rep(&sys, config.integration_tol)?;
    let eye = CMat::identity(4);
    let t0_dev = rep.t0.sub(&eye).norm();
    checks.push(CheckResult::numeric(
        "monodromy_identity_at_t0",
        "loop around the real pole acts trivially",
        t0_dev < 1e-8,
        1e-8,
        json!({"norm_t0_minus_identity": t0_dev}),
    ));
    let relation_123 = rep.t1.matmul(&rep.t2).matmul(&rep.tinf).sub(&eye).norm();
    checks.push(CheckResult::numeric(
        "monodromy_relation",
        "loop product around all singular points is trivial",
        relation_123 < 1e-6 && rep.relation_residual < 1e-6,
        1e-6,
        json!({
            "norm_t1_t2_tinf_minus_identity": relation_123,
            "full_product_residual": rep.relation_residual,
            "composition_order": rep.relation_order,
        }),
    ));
    let det_dev = rep
        .dets
        .iter()
        .map(|d| (d - C64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    checks.push(CheckResult::numeric(
        "monodromy_determinants",
        "unimodular loop matrices",
        det_dev < 1e-8,
        1e-8,
        json!({"max_det_deviation": det_dev}),
    ));

    for (name, t) in [("jordan_t1", &rep.t1), ("jordan_t2", &rep.t2)] {
        let profile = crate::monodromy::unipotent_structure(t, 1e-6);
        let status = if profile.indeterminate {
            CheckStatus::Indeterminate
        } else if profile.block_sizes == vec![2, 2] {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        checks.push(CheckResult {
            name: name.into(),
            status,
            value: json!({"block_sizes": profile.block_sizes, "ranks": profile.ranks}),
            tolerance: "1e-6".into(),
            paper_anchor: "unipotent block structure of the complex-pole loops".into(),
        });
    }

    let sd = crate::model::spectral_data(m);
    let sm = crate::monodromy::spectrum_match(&rep.tinf, &sd);
    checks.push(CheckResult::numeric(
        "spectrum_at_infinity",
        "loop at infinity realizes the exponent spectrum",
        sm.max_distance < 1e-6 && sm.distance_from_ones > 0.1,
        1e-6,
        json!({
            "max_match_distance": sm.max_distance,
            "distance_from_unit_spectrum": sm.distance_from_ones,
        }),
    ));

    // exact local series structure
    let exp0 = crate::frobenius::frobenius_basis(&sys, 0, 12)?;
    checks.push(CheckResult::exact(
        "series_t0_meromorphic",
        "all local solutions at the real pole are meromorphic",
        exp0.is_log_free() && exp0.verify_recurrence(&sys),
        json!({"log_solutions": exp0.log_solution_count()}),
    ));
    let exp1 = crate::frobenius::frobenius_basis(&sys, 1, config.series_order)?;
    let logs_ok = exp1.log_solution_count() == 2 && exp1.verify_recurrence(&sys);
    let lc = exp1.log_coefficients(&sys)?;
    let half = FieldElement::from_ratio(1, 2);
    let c_structure = lc.c2_over_ic1.is_one() && !lc.c1.is_zero() && lc.pattern_ok;
    checks.push(CheckResult::exact(
        "series_t1_logarithms",
        "two logarithmic solutions with the printed coefficient relations",
        logs_ok && c_structure && lc.c1_closed_form_ratio == half,
        json!({
            "log_solutions": exp1.log_solution_count(),
            "c1": lc.c1.to_string(),
            "c2_over_i_c1": lc.c2_over_ic1.to_string(),
            "c3": lc.c3.to_string(),
            "c1_closed_form_ratio": lc.c1_closed_form_ratio.to_string(),
        }),
    ));

    // local-global consistency at the upper pole
    let local_m = exp1.local_monodromy();
    let local_profile = crate::monodromy::unipotent_structure(&local_m, 1e-6);
    let global_profile = crate::monodromy::unipotent_structure(&rep.t1, 1e-6);
    let spec_dist = crate::numeric::multiset_match_max_distance(
        &local_m.eigenvalues_polished(1e-2),
        &rep.t1.eigenvalues_polished(1e-2),
    );
    let lg_status = if local_profile.indeterminate || global_profile.indeterminate {
        CheckStatus::Indeterminate
    } else if local_profile.block_sizes == global_profile.block_sizes && spec_dist < 1e-6 {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    checks.push(CheckResult {
        name: "local_global_consistency".into(),
        status: lg_status,
        value: json!({
            "local_blocks": local_profile.block_sizes,
            "global_blocks": global_profile.block_sizes,
            "spectrum_distance": spec_dist,
        }),
        tolerance: "1e-6".into(),
        paper_anchor: "series-built local loop matches the continued one".into(),
    });

    // series vs continuation: constant basis change between fundamental
    // matrices, fitted at one point and tested at another
    let gap = sys.points.min_gap();
    let t1c = sys.points.t1_c();
    let base = crate::monodromy::rep_base_point(&sys);
    // approach the pole radially from the base so the straight transport
    // segments never undercut their endpoint clearance
    let toward_base = (base - t1c) / (base - t1c).norm();
    let p1 = t1c + 0.10 * gap * toward_base;
    let p2 = t1c + 0.14 * gap * toward_base;
    let sigma1 =
        crate::monodromy::transport_segment(&sys, base, p1, 0.05 * gap, config.integration_tol)?;
    let sigma2 =
        crate::monodromy::transport_segment(&sys, base, p2, 0.05 * gap, config.integration_tol)?;
    let x1 = exp1.eval_fundamental(p1);
    let x2 = exp1.eval_fundamental(p2);
    let fit = sigma1
        .solve(&x1)
        .ok_or_else(|| Error::Singular("fundamental matrix is singular at the fit point".into()))?;
    let series_dev = sigma2.matmul(&fit).sub(&x2).norm() / x2.norm();
    checks.push(CheckResult::numeric(
        "series_ode_consistency",
        "local series and continued matrix agree up to a constant factor",
        series_dev < 1e-7,
        1e-7,
        json!({"relative_deviation": series_dev}),
    ));

    // integer resonance scan and the exponent bound
    let (rows, no_resonance) = crate::model::resonance_scan();
    let theta_rat = sd.theta.as_rational().cloned().unwrap_or_else(|| crate::exactalg::rat(0));
    checks.push(CheckResult::exact(
        "resonance_scan",
        "no integer pair realizes a unit spectrum at infinity",
        no_resonance && sd.bound_ok,
        json!({
            "rows": rows.len(),
            "no_resonance": no_resonance,
            "theta": rational_string(&theta_rat),
            "theta_in_range": sd.bound_ok,
        }),
    ));

    // mass-independent symbolic suite
    checks.extend(symbolic_suite());

    let verdict = status_all(&checks);
    Ok(Certificate {
        alpha: rational_string(m.alpha()),
        beta: rational_string(m.beta()),
        checks,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    #[test]
    fn symbolic_suite_passes() {
        for check in symbolic_suite() {
            assert_eq!(check.status, CheckStatus::Pass, "{check:?}");
        }
    }

    #[test]
    fn certificate_passes_at_equal_masses() {
        let m = MassParameters::new(ratio(1, 1), ratio(1, 1)).unwrap();
        let cert = certify(&m, &CertifyConfig::default()).unwrap();
        for check in &cert.checks {
            assert_eq!(check.status, CheckStatus::Pass, "failed: {check:?}");
        }
        assert_eq!(cert.verdict, CheckStatus::Pass);
    }

    #[test]
    fn certificate_passes_at_asymmetric_masses() {
        let m = MassParameters::new(ratio(1, 10), ratio(1, 5)).unwrap();
        let cert = certify(&m, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, CheckStatus::Pass, "{:?}", cert.checks);
    }

    #[test]
    fn fault_injection_flips_the_verdict() {
        let m = MassParameters::new(ratio(1, 1), ratio(1, 1)).unwrap();
        let config = CertifyConfig {
            fault: Some((0, 0, ratio(1, 1000))),
            ..CertifyConfig::default()
        };
        let cert = certify(&m, &config).unwrap();
        assert_eq!(cert.verdict, CheckStatus::Fail);
        // specifically the structure and crosscheck catch it
        let failing: Vec<&str> = cert
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect();
        assert!(failing.contains(&"residue_structure"));
        assert!(failing.contains(&"derivation_crosscheck"));
    }

    #[test]
    fn certificates_are_deterministic() {
        let m = MassParameters::new(ratio(1, 2), ratio(1, 1)).unwrap();
        let a = certify(&m, &CertifyConfig::default()).unwrap();
        let b = certify(&m, &CertifyConfig::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a.to_json()).unwrap(),
            serde_json::to_string(&b.to_json()).unwrap()
        );
    }
}
