//! Input builders shared by the benchmark targets.

use metacomm::fq::{Field, Poly};
use metacomm::fqmat::{hypercompanion, MatFq};
use metacomm::hurwitz::Quaternion;
use metacomm::intmat::MatZ;

/// The worked 2x2 pair: `P` of determinant 3 and a coprime `omega`.
pub fn worked_pair() -> (MatZ, MatZ) {
    (
        MatZ::from_ints(&[vec![1, 1], vec![0, 3]]).unwrap(),
        MatZ::from_ints(&[vec![5, 0], vec![0, 1]]).unwrap(),
    )
}

/// A 3x3 pair at p = 7 with entries wide enough to make the HNF work.
pub fn wide_pair() -> (MatZ, MatZ) {
    (
        MatZ::from_ints(&[vec![1, 3, 5], vec![0, 7, 2], vec![0, 0, 1]]).unwrap(),
        MatZ::from_ints(&[vec![9, -4, 3], vec![2, 8, -7], vec![-5, 1, 6]]).unwrap(),
    )
}

/// The largest single block the acceptance sweep exercises: the
/// hypercompanion of an irreducible quartic over F_4, acting on the 85
/// points of projective 3-space.
pub fn big_block() -> MatFq {
    let f4 = Field::new(2, 2).unwrap();
    let phi = metacomm::fq::monic_irreducibles(&f4, 4)
        .into_iter()
        .find(|f| !f.coeff(0).is_zero())
        .unwrap();
    hypercompanion(&phi, 1).unwrap()
}

pub fn quadratic_over_f4() -> Poly {
    let f4 = Field::new(2, 2).unwrap();
    metacomm::fq::monic_irreducibles(&f4, 2)
        .into_iter()
        .find(|f| !f.coeff(0).is_zero())
        .unwrap()
}

/// A norm-13 element and a coprime multiplier for the quaternion path.
pub fn hurwitz_pair() -> (Quaternion, Quaternion) {
    let pi = Quaternion::new([2, 3, 0, 0]); // nrd 13
    assert_eq!(pi.nrd(), 13);
    let w = Quaternion::new([1, 2, 3, 4]); // nrd 46
    assert_ne!(w.nrd() % 13, 0);
    (pi, w)
}
