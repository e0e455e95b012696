//! Small named matrices used throughout the tests and documentation.

use crate::matrix::DataMatrix;

/// 5×3 matrix whose candidate `{2,3}` at column 3 can be generated from two
/// different parents when ε = 1.
pub fn m2() -> DataMatrix {
    DataMatrix::from_columns(&[
        vec![0.0, 0.5, 1.0, 1.5, 10.0],
        vec![3.0, 3.1, 3.3, 3.2, 0.0],
        vec![9.0, 7.0, 7.5, 20.0, 0.0],
    ])
    .expect("valid fixture")
}

/// `[[1,1],[1,2],[2,2]]`.
pub fn small_3x2() -> DataMatrix {
    DataMatrix::from_rows(&[[1.0, 1.0], [1.0, 2.0], [2.0, 2.0]]).expect("valid fixture")
}

/// Binary 3×3 context `[[1,1,0],[1,1,1],[0,1,1]]`.
pub fn b1() -> DataMatrix {
    DataMatrix::from_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0]])
        .expect("valid fixture")
}
