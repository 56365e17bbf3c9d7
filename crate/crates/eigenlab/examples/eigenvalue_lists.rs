//! List arithmetic on spectra: direct sums, tensor products, certified
//! top-k prefixes, and moment fingerprints.

use eigenlab::eigenlist::{l1_distance_certified, tensor_square_report};
use eigenlab::EigenvalueList;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = EigenvalueList::from_values(&[0.75, 0.25])?;
    let b = EigenvalueList::from_values(&[0.6, 0.2, 0.2])?;

    println!("a           = {:?}", a.values());
    println!("b           = {:?}", b.values());
    println!("a (+) b     = {:?}", a.direct_sum(&b).values());
    println!("a (x) b     = {:?}", a.tensor(&b)?.values());
    println!("l1(a, b)    = {}", a.l1_distance(&b));
    println!();

    // Moments are multiplicative under (x): sum_i (s t)_i^n splits.
    let product = a.tensor(&b)?;
    for n in 1..=4 {
        let split = a.moment(n) * b.moment(n);
        let joint = product.moment(n);
        println!(
            "moment {n}: product {joint:.12}  factors {split:.12}  gap {:.2e}",
            (joint - split).abs()
        );
    }
    println!();

    // For long lists the full product is wasteful; a heap walk yields the
    // largest k entries plus a certified bound on the mass left behind.
    let geo =
        EigenvalueList::from_values(&(0..24).map(|i| 0.5f64.powi(i + 1)).collect::<Vec<_>>())?;
    let prefix = geo.tensor_top_k(&geo, 8);
    println!("top 8 of geo (x) geo   = {:?}", prefix.prefix.values());
    println!("certified tail mass   <= {:.3e}", prefix.tail_mass_bound);

    let full = geo.tensor(&geo)?;
    let exact_tail: f64 = full.values().iter().skip(8).sum();
    println!("exact tail mass        = {:.3e}", exact_tail);

    // Prefix distances come with a certified error width.
    let pa = a.tensor_top_k(&a, 3);
    let pb = b.tensor_top_k(&b, 3);
    let (estimate, width) = l1_distance_certified(&pa, &pb);
    let exact = a.tensor(&a)?.l1_distance(&b.tensor(&b)?);
    println!();
    println!("l1 of tensor squares: exact {exact:.12}");
    println!("  prefix estimate {estimate:.12} +/- {width:.3e}");
    assert!((exact - estimate).abs() <= width);

    // Tensor squares separate states: equal squares force equal lists.
    let report = tensor_square_report(&a, &b)?;
    println!();
    println!(
        "squares equal: {}  lists equal: {}",
        report.squares_equal, report.lists_equal
    );
    assert_eq!(report.squares_equal, report.lists_equal);
    Ok(())
}
