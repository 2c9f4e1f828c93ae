//! Built-in example systems over Z4 used by the self-test suite, the
//! integration tests and the CLI examples.
//!
//! * `scalar_system`: A = B = C = D = 1, one state. Window (4, 1) gives
//!   d1 = 2 and a zero weight budget; useful for identities and clean-path
//!   checks.
//! * `delta2_system`: two states with a unipotent A. Window (4, 2) also has
//!   d1 = 2 and budget zero.
//! * `delta3_system`: three states; A acts like multiplication by x on
//!   F_2[x]/(x^3 + x + 1), so the depth-7 reachability matrix mod 2 has all
//!   seven distinct nonzero columns and Ker(Φ_7) mod 2 has distance 3.
//!   Window (7, 3) gives budget lambda = 1, i.e. genuine error correction.

use crate::iso::IsoSystem;
use crate::linalg::{RingMatrix, RingVector};
use crate::poly::{PolyEncoder, PolyVector};
use crate::ring::RingParams;

pub fn z4() -> RingParams {
    RingParams::new(2, 2).unwrap()
}

pub fn scalar_system() -> IsoSystem {
    let one = RingMatrix::from_rows_i64(z4(), &[&[1]]);
    IsoSystem::new(one.clone(), one.clone(), one.clone(), one).unwrap()
}

/// Polynomial encoder spanning the scalar system's code: column (z, z + 3).
pub fn scalar_encoder() -> PolyEncoder {
    PolyEncoder::new(vec![PolyVector::from_i64(z4(), 2, &[&[0, 3], &[1, 1]])]).unwrap()
}

pub fn delta2_system() -> IsoSystem {
    IsoSystem::new(
        RingMatrix::from_rows_i64(z4(), &[&[1, 1], &[0, 1]]),
        RingMatrix::from_rows_i64(z4(), &[&[0], &[1]]),
        RingMatrix::from_rows_i64(z4(), &[&[1, 0]]),
        RingMatrix::from_rows_i64(z4(), &[&[1]]),
    )
    .unwrap()
}

/// Encoder for the two-state system: column
/// (z^2 + 2z + 2, z^2 + 2z + 1), derived from its transfer function.
pub fn delta2_encoder() -> PolyEncoder {
    PolyEncoder::new(vec![PolyVector::from_i64(
        z4(),
        2,
        &[&[2, 1], &[2, 2], &[1, 1]],
    )])
    .unwrap()
}

pub fn delta3_system() -> IsoSystem {
    IsoSystem::new(
        RingMatrix::from_rows_i64(z4(), &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]),
        RingMatrix::from_rows_i64(z4(), &[&[1], &[0], &[0]]),
        RingMatrix::from_rows_i64(z4(), &[&[1, 0, 0]]),
        RingMatrix::from_rows_i64(z4(), &[&[1]]),
    )
    .unwrap()
}

/// Encoder for the three-state system: column
/// (z^3 + z^2 + 3z + 2, z^3 + 3z + 3), derived from its transfer function.
pub fn delta3_encoder() -> PolyEncoder {
    PolyEncoder::new(vec![PolyVector::from_i64(
        z4(),
        2,
        &[&[2, 3], &[3, 3], &[1, 0], &[1, 1]],
    )])
    .unwrap()
}

/// The bundled systems paired with window parameters passing `analyze`.
pub fn all_systems() -> Vec<(IsoSystem, usize, usize)> {
    vec![
        (scalar_system(), 4, 1),
        (delta2_system(), 4, 2),
        (delta3_system(), 7, 3),
    ]
}

/// A deterministic non-trivial message of the given length.
pub fn ramp_message(sys: &IsoSystem, len: usize) -> Vec<RingVector> {
    let params = sys.params();
    let k = sys.input_dim();
    (0..len)
        .map(|t| {
            RingVector::from_i64(
                params,
                &(0..k)
                    .map(|j| ((t * 31 + j * 17 + 1) % params.modulus() as usize) as i64)
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoders_match_systems() {
        assert!(scalar_encoder().is_pdp());
        assert_eq!(scalar_encoder().complexity(), 1);
        assert!(scalar_system()
            .consistent_with_encoder(&scalar_encoder(), 3)
            .unwrap());

        assert!(delta2_encoder().is_pdp());
        assert_eq!(delta2_encoder().complexity(), 2);
        assert!(delta2_system()
            .consistent_with_encoder(&delta2_encoder(), 2)
            .unwrap());

        assert!(delta3_encoder().is_pdp());
        assert_eq!(delta3_encoder().complexity(), 3);
        assert!(delta3_system()
            .consistent_with_encoder(&delta3_encoder(), 2)
            .unwrap());
    }

    #[test]
    fn all_systems_pass_their_certificates() {
        for (sys, t, theta) in all_systems() {
            assert!(sys.reachability(sys.state_dim()).is_surjective());
            assert!(sys.observability(sys.state_dim()).is_injective());
            assert!(sys.reachability(t).is_surjective());
            assert!(sys.observability(theta).is_injective());
            assert!(sys.first_order_rep().is_ok());
        }
    }
}
