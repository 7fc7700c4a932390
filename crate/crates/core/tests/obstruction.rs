use lsjulia_core::boundary::{default_base_point, preimage_tree, CloudDistance, CloudMode, DistanceOracle};
use lsjulia_core::dyncore::{EscapeParams, Polynomial};
use lsjulia_core::grid::GridSpec;
use lsjulia_core::lsgate::{min_guard, monotone_oc_check, scan_oc, slow_growth_check, JuliaGreen};
use lsjulia_core::Complex64;

#[test]
fn basilica_flagged_points_grow_slowly() {
    let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
    let params = EscapeParams::for_poly(&p);
    let cloud = preimage_tree(&p, default_base_point(&p), 14, CloudMode::FullTree, 0).unwrap();
    let oracle = CloudDistance::new(&p, params, &cloud);
    let src = JuliaGreen::new(&p);
    let g = GridSpec::covering(-2.0, 2.0, -1.2, 1.2, 0.02).unwrap();
    let guard = min_guard(g.spacing, oracle.resolution());
    let lo = scan_oc(&src, &oracle, &g, 0.6, guard).unwrap();
    let hi = scan_oc(&src, &oracle, &g, 0.8, guard).unwrap();
    assert!(monotone_oc_check(&lo, &hi).unwrap());
    assert!(!hi.is_empty());
    let flagged: Vec<Complex64> = hi.flagged.iter().map(|f| f.z).collect();
    let rep = slow_growth_check(&p, &src, &oracle, &flagged, 0.8, guard, 8).unwrap();
    assert!(!rep.vacuous);
    assert_eq!(
        rep.violations, 0,
        "{} of {} steps violated",
        rep.violations, rep.applicable
    );
}
