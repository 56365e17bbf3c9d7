//! Spectral stability under perturbation: the l1 distance between sorted
//! eigenvalue lists never exceeds the trace norm of the difference.

use eigenlab::densop::{check_weyl, eigenlist_of, fidelity, random_density, DensityOperator};
use eigenlab::linalg::random_psd;
use eigenlab::HermitianMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    println!("trial  dim  l1(lists)        trace norm       slack");
    let mut worst_slack = f64::INFINITY;
    for trial in 0..10 {
        let dim = 2 + trial % 5;
        let a = HermitianMatrix::new(random_psd(&mut rng, dim))?;
        let b = HermitianMatrix::new(random_psd(&mut rng, dim))?;
        let report = check_weyl(&a, &b)?;
        let slack = report.rhs - report.lhs;
        worst_slack = worst_slack.min(slack);
        println!(
            "{trial:>5}  {dim:>3}  {:<15.12}  {:<15.12}  {slack:.3e}",
            report.lhs, report.rhs
        );
        assert!(report.holds);
    }
    println!("smallest slack seen: {worst_slack:.3e}");
    println!();

    // States sharing an eigenbasis attain equality.
    let p = DensityOperator::diagonal(&[0.7, 0.3])?;
    let q = DensityOperator::diagonal(&[0.5, 0.5])?;
    let tight = check_weyl(p.hermitian(), q.hermitian())?;
    println!(
        "commuting pair: lhs {} rhs {} (tight)",
        tight.lhs, tight.rhs
    );

    // The fidelity bound runs the other way: trace distance of states
    // is at least 2 (1 - F).
    let rho = random_density(4, None, 21)?;
    let sigma = random_density(4, None, 22)?;
    let f = fidelity(&rho, &sigma)?;
    let dist = rho.distance(&sigma)?;
    println!();
    println!("fidelity        = {f:.12}");
    println!("trace distance  = {dist:.12}");
    println!("2 (1 - F)       = {:.12}", 2.0 * (1.0 - f));
    assert!(dist >= 2.0 * (1.0 - f) - 1e-9);

    // Sorted lists of the two states floor the same distance.
    let floor =
        eigenlist_of(rho.hermitian(), true)?.l1_distance(&eigenlist_of(sigma.hermitian(), true)?);
    println!("list floor      = {floor:.12}");
    assert!(dist >= floor - 1e-9);
    Ok(())
}
