//! The correlation operator of a state on an ambient factor `E (x) B(H0)`,
//! its spectrum, and the defect operator whose Gram matrix reproduces it.

use eigenlab::densop::random_density;
use eigenlab::intertwiner::{
    correlation_operator, defect_operator, verify_defect_bilinear, verify_defect_gram,
    verify_restriction_spectrum, IntertwinerModel,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // k copies of a d-dimensional base space; the isometries v_i = e_i (x) 1
    // intertwine the base action with the ambient one.
    let model = IntertwinerModel::new(3, 2)?;
    println!(
        "model: multiplicity {} over base dim {} (ambient {})",
        model.multiplicity(),
        model.base_dim(),
        model.ambient_dim()
    );
    println!(
        "isometry relations deviation: {:.3e}",
        model.isometry_relations_deviation()
    );

    let rho = random_density(model.ambient_dim(), None, 42)?;

    // A_ij = trace(v_i^* R v_j) is positive with unit trace.
    let a = correlation_operator(&model, &rho)?;
    println!("correlation operator trace: {:.12}", a.trace());

    // Its eigenvalue list equals the list of the restriction to E.
    let spectrum = verify_restriction_spectrum(&model, &rho)?;
    println!();
    println!(
        "Lambda(A)           = {:?}",
        spectrum.lambda_correlation.values()
    );
    println!(
        "Lambda(restriction) = {:?}",
        spectrum.lambda_restriction.values()
    );
    println!("l1 gap              = {:.3e}", spectrum.distance);
    assert!(spectrum.ok);

    // The defect operator L has columns R^{1/2} v_j; its Gram matrix is A,
    // so L L^* and L^* L share a nonzero spectrum with A.
    let l = defect_operator(&model, &rho)?;
    println!();
    println!("defect operator shape: {} x {}", l.nrows(), l.ncols());
    let gram = verify_defect_gram(&model, &rho)?;
    println!("gram deviation      = {:.3e}", gram.max_deviation);
    assert!(gram.ok);

    // Bilinear pairing check on random vector quadruples.
    let bilinear = verify_defect_bilinear(&model, &rho, 50, 7)?;
    println!(
        "bilinear deviation  = {:.3e} over 50 quadruples",
        bilinear.max_deviation
    );
    assert!(bilinear.ok);
    Ok(())
}
