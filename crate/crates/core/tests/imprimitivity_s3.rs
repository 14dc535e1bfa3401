use std::time::Instant;

use fell_core::catalog::s3_scalar_example;
use fell_core::Imprimitivity;

const TOL: f64 = 1e-9;

#[test]
fn s3_over_a3_checklist_and_morita() {
    let start = Instant::now();
    let (action, d) = s3_scalar_example::<f64>(TOL).unwrap();
    let imp = Imprimitivity::new(action.quotient().clone(), d.bundle.clone(), TOL).unwrap();
    let report = imp.verify(1e-8);
    for item in &report.items {
        assert!(item.passed, "{item:?}");
    }
    let eq = imp.equivariance();
    assert!(eq.left_inner <= 1e-10 && eq.right_action <= 1e-10, "{eq:?}");
    let m = imp.morita_report(TOL).unwrap();
    assert_eq!((m.dim_c, m.dim_b, m.dim_x), (4, 36, 12));
    assert_eq!(m.blocks_b, m.blocks_c);
    assert!(m.equivalent);
    eprintln!("s3 imprimitivity: {:?}", start.elapsed());
}
