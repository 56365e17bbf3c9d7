//! The sandwich map `T -> A T B` on Hilbert-Schmidt space has spectrum
//! `Lambda(A) (x) Lambda(B)`, and weak convergence of positive trace-matched
//! families upgrades to trace-norm convergence.

use eigenlab::densop::random_density;
use eigenlab::intertwiner::{
    sandwich_operator, verify_sandwich_spectrum, weak_to_trace_convergence_check,
};
use eigenlab::linalg::{random_psd, CVec};
use eigenlab::HermitianMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = HermitianMatrix::new(random_psd(&mut rng, 3))?;
    let b = HermitianMatrix::new(random_psd(&mut rng, 3))?;

    let sandwich = sandwich_operator(&a, &b)?;
    println!("sandwich operator dim: {}", sandwich.dim());

    let report = verify_sandwich_spectrum(&a, &b)?;
    println!(
        "Lambda(sandwich)       = {:?}",
        report.lambda_sandwich.values()
    );
    println!(
        "Lambda(A) (x) Lambda(B) = {:?}",
        report.lambda_tensor.values()
    );
    println!("l1 gap = {:.3e}", report.distance);
    assert!(report.ok);
    println!();

    // A family of states drifting toward a target at rate 2^-t. Weak
    // deviations against a spanning set dominate a fixed fraction of the
    // trace-norm deviations, so both columns must fall together.
    let dim = 3;
    let target = random_density(dim, None, 5)?;
    let start = random_density(dim, None, 6)?;
    let family: Vec<HermitianMatrix> = (0..8)
        .map(|t| {
            let w = 0.5f64.powi(t);
            HermitianMatrix::new(
                start.matrix() * Complex64::new(w, 0.0)
                    + target.matrix() * Complex64::new(1.0 - w, 0.0),
            )
        })
        .collect::<Result<_, _>>()?;

    let mut span = Vec::new();
    for i in 0..dim {
        let mut e = CVec::zeros(dim);
        e[i] = Complex64::new(1.0, 0.0);
        span.push(e);
    }

    let conv = weak_to_trace_convergence_check(&family, target.hermitian(), &span)?;
    println!("t   weak            trace");
    for (t, row) in conv.rows.iter().enumerate() {
        println!("{t}   {:<14.3e}  {:<14.3e}", row.weak, row.trace);
    }
    let last = conv.rows.last().unwrap();
    assert!(last.trace < 1e-1);
    assert!(
        conv.rows
            .windows(2)
            .all(|w| w[1].trace <= w[0].trace + 1e-12),
        "trace column must fall monotonically for this family"
    );
    Ok(())
}
