//! A detailed-balance semigroup with a faithful absorbing state, and the
//! compression of a unital CP map to the support corner of its invariant
//! state.

use eigenlab::cpsemigroup::{
    compress_unital_cp, verify_absorbing, CpSemigroup, GeneratorSpec, KrausMap,
};
use eigenlab::densop::DensityOperator;
use eigenlab::linalg::CMat;
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Jump rates gamma_ij = omega_i satisfy gamma_ij omega_j = gamma_ji
    // omega_i, so omega is stationary by construction.
    let spec = GeneratorSpec {
        dim: 3,
        omega: vec![0.5, 0.3, 0.2],
        rate_scale: 1.0,
        dephasing: 0.4,
    };
    let sg = CpSemigroup::new(spec.build()?);
    let omega = DensityOperator::diagonal(&spec.omega)?;

    println!(
        "unitality deviation : {:.3e}",
        sg.generator().unitality_deviation()
    );
    println!(
        "invariance deviation: {:.3e}",
        sg.generator().invariance_deviation(&omega)
    );
    println!(
        "semigroup deviation : {:.3e}",
        sg.semigroup_property_deviation(&[(0.3, 0.9), (1.0, 2.0)])?
    );
    println!("choi min eigenvalue : {:.3e}", sg.choi_min_eigenvalue(0.7)?);
    println!();

    // Every initial state is pulled into omega.
    let t_grid = [0.5, 1.0, 2.0, 5.0, 10.0, 25.0];
    let report = verify_absorbing(&sg, &omega, 4, &t_grid, 7)?;
    println!(
        "ergodic: {}  all absorbed: {}",
        report.ergodic, report.all_absorbed
    );
    println!("trial  distance to omega along t = {t_grid:?}");
    for (i, row) in report.trials.iter().enumerate() {
        let cells: Vec<String> = row.distances.iter().map(|d| format!("{d:.2e}")).collect();
        println!("{i:>5}  {}", cells.join("  "));
    }
    assert!(report.ergodic && report.all_absorbed);
    println!();

    // A unital CP map averaging a block unitary: its invariant state has
    // support on the first two coordinates, and compressing to that corner
    // keeps the map unital and the state invariant.
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let u = CMat::from_row_slice(3, 3, &[z, o, z, o, z, z, z, z, o]);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let phi = KrausMap::new(vec![
        CMat::identity(3, 3) * Complex64::new(r, 0.0),
        u * Complex64::new(r, 0.0),
    ])?;
    let invariant = DensityOperator::diagonal(&[0.5, 0.5, 0.0])?;

    let comp = compress_unital_cp(&phi, &invariant)?;
    println!("corner dim           : {}", comp.compressed.dim());
    println!("phi(P) - P min eig   : {:.3e}", comp.monotone_min_eig);
    println!(
        "corner identity dev  : {:.3e}",
        comp.corner_identity_deviation
    );
    println!(
        "corner unitality dev : {:.3e}",
        comp.corner_unitality_deviation
    );
    println!(
        "corner invariance dev: {:.3e}",
        comp.corner_invariance_deviation
    );
    assert!(comp.monotone);
    assert!(comp.corner_unitality_deviation < 1e-9);
    assert!(comp.corner_invariance_deviation < 1e-9);
    Ok(())
}
