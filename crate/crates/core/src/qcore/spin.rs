//! Spin-1/2 components with hbar = 1 (eigenvalues +-1/2).

use super::{Amplitude, HermitianOperator};

pub fn s_x() -> HermitianOperator {
    HermitianOperator::from_real(2, &[0.0, 0.5, 0.5, 0.0]).expect("hermitian")
}

pub fn s_y() -> HermitianOperator {
    let z = Amplitude::new(0.0, 0.0);
    HermitianOperator::new(2, vec![z, Amplitude::new(0.0, -0.5), Amplitude::new(0.0, 0.5), z]).expect("hermitian")
}

pub fn s_z() -> HermitianOperator {
    HermitianOperator::diagonal(&[0.5, -0.5]).expect("hermitian")
}

/// `(s_x + s_y + s_z)/sqrt(3)`.
pub fn s_xi() -> HermitianOperator {
    s_x()
        .add(&s_y())
        .and_then(|op| op.add(&s_z()))
        .expect("same dims")
        .scale(1.0 / 3f64.sqrt())
}

/// Component along x, y or z, by axis index 0..3.
pub fn along(axis: usize) -> HermitianOperator {
    match axis {
        0 => s_x(),
        1 => s_y(),
        _ => s_z(),
    }
}
