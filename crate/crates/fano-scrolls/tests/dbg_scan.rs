use std::time::Instant;
use fano_scrolls::poly::Polynomial;
use fano_scrolls::resultant::{poly_gcd, sylvester_resultant};

#[test]
fn profile_parts() {
    let f = Polynomial::parse(
        "x^3+x^2*y+x^2*z+x^2+x*y^2+x*y*z+x*y+x*z^2+x*z+y^3+y^2*z+y*z^2+z^3",
        &["x", "y", "z"],
    )
    .unwrap();
    let p = f.partials();
    for var in ["x", "y", "z"] {
        let t = Instant::now();
        let r01 = sylvester_resultant(&p[0], &p[1], var).unwrap();
        let r02 = sylvester_resultant(&p[0], &p[2], var).unwrap();
        let r12 = sylvester_resultant(&p[1], &p[2], var).unwrap();
        eprintln!(
            "res {var}: {:?} (deg {:?} {:?} {:?}, terms {} {} {})",
            t.elapsed(),
            r01.total_degree(),
            r02.total_degree(),
            r12.total_degree(),
            r01.num_terms(),
            r02.num_terms(),
            r12.num_terms()
        );
        let t = Instant::now();
        let g = poly_gcd(&r01, &r02);
        let g2 = poly_gcd(&g, &r12);
        eprintln!("gcd {var}: {:?} -> deg {:?}, {:?}", t.elapsed(), g2.total_degree(), g2.render());
    }
}
