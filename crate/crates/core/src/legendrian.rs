//! Classical invariants of Legendrian knots from front-projection counts.
//!
//! A front is summarised by its writhe, its four cusp counts (left/right,
//! oriented up/down), the number of passes through 1-handles and the signed
//! number of top-to-bottom wraps in a periodic square diagram.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error("left cusps ({left}) and right cusps ({right}) must be equal in number")]
    InconsistentCusps { left: u64, right: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrontData {
    writhe: i64,
    lambda_plus: u64,
    lambda_minus: u64,
    rho_plus: u64,
    rho_minus: u64,
    handle_crossings: u64,
    top_bottom: i64,
}

impl FrontData {
    pub fn new(
        writhe: i64,
        (lambda_plus, lambda_minus): (u64, u64),
        (rho_plus, rho_minus): (u64, u64),
        handle_crossings: u64,
        top_bottom: i64,
    ) -> Result<Self, FrontError> {
        let (left, right) = (lambda_plus + lambda_minus, rho_plus + rho_minus);
        if left != right {
            return Err(FrontError::InconsistentCusps { left, right });
        }
        Ok(FrontData {
            writhe,
            lambda_plus,
            lambda_minus,
            rho_plus,
            rho_minus,
            handle_crossings,
            top_bottom,
        })
    }

    /// The flat unknot with one cusp on each side.
    pub fn standard_unknot() -> Self {
        FrontData::new(0, (1, 0), (0, 1), 0, 0).expect("balanced cusps")
    }

    pub fn writhe(&self) -> i64 {
        self.writhe
    }

    pub fn left_cusps(&self) -> u64 {
        self.lambda_plus + self.lambda_minus
    }

    pub fn handle_crossings(&self) -> u64 {
        self.handle_crossings
    }

    pub fn top_bottom(&self) -> i64 {
        self.top_bottom
    }

    pub fn cusps(&self) -> [u64; 4] {
        [self.lambda_plus, self.lambda_minus, self.rho_plus, self.rho_minus]
    }
}

/// Thurston-Bennequin number: writhe minus the number of left cusps.
pub fn tb(front: &FrontData) -> i64 {
    front.writhe - front.left_cusps() as i64
}

/// Rotation number: down-left minus up-right cusps, plus the wrap correction.
pub fn rot(front: &FrontData) -> i64 {
    front.lambda_minus as i64 - front.rho_plus as i64 + front.top_bottom
}

/// The same count read off the other pair of cusps; agrees with [`rot`].
pub fn rot_alt(front: &FrontData) -> i64 {
    front.rho_minus as i64 - front.lambda_plus as i64 + front.top_bottom
}

/// Framing of the Stein 2-handle attached along the knot.
pub fn stein_framing(front: &FrontData) -> i64 {
    tb(front) - 1
}

/// `tb + rot + 1 ≡ h (mod 2)`.
pub fn parity_ok(front: &FrontData) -> bool {
    (tb(front) + rot(front) + 1 - front.handle_crossings as i64).rem_euclid(2) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k2(n: i64) -> FrontData {
        FrontData::new(-(n - 1), (0, 1), (0, 1), n as u64, 0).unwrap()
    }

    fn w1(n: u64) -> FrontData {
        FrontData::new(0, (n + 1, 0), (n, 1), 0, 0).unwrap()
    }

    #[test]
    fn k2_n3() {
        let k = k2(3);
        assert_eq!(tb(&k), -3);
        assert_eq!(rot(&k), 1);
        assert_eq!(stein_framing(&k), -4);
        assert!(parity_ok(&k));
    }

    #[test]
    fn standard_unknot() {
        let u = FrontData::standard_unknot();
        assert_eq!(tb(&u), -1);
        assert_eq!(rot(&u), 0);
        assert_eq!(stein_framing(&u), -2);
        assert!(parity_ok(&u));
    }

    #[test]
    fn w1_n3() {
        let w = w1(3);
        assert_eq!(tb(&w), -4);
        assert_eq!(rot(&w), -3);
        assert_eq!(stein_framing(&w), -5);
    }

    #[test]
    fn unbalanced_cusps_rejected() {
        assert_eq!(
            FrontData::new(0, (2, 0), (0, 1), 0, 0),
            Err(FrontError::InconsistentCusps { left: 2, right: 1 })
        );
    }

    #[test]
    fn wrap_correction_shifts_rot() {
        let f = FrontData::new(0, (1, 0), (0, 1), 0, 2).unwrap();
        assert_eq!(rot(&f), 2);
        assert_eq!(tb(&f), -1);
    }

    proptest! {
        #[test]
        fn both_rot_formulas_agree(w in -20i64..20, lp in 0u64..10, lm in 0u64..10, rp in 0u64..10, b in -3i64..3) {
            let total = lp + lm;
            prop_assume!(rp <= total);
            let f = FrontData::new(w, (lp, lm), (rp, total - rp), 0, b).unwrap();
            prop_assert_eq!(rot(&f), rot_alt(&f));
        }
    }
}
