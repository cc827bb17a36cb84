//! Small named codes with fixed labellings, used by tests and the command line.

use crate::classical::ClassicalCode;
use crate::f2core::BitMatrix;
use crate::graphs::SimpleGraph;

/// K4 with edges `{1,4}, {1,2}, {2,3}, {2,4}, {1,3}, {3,4}` (1-indexed) as bits.
pub fn k4_graph() -> SimpleGraph {
    SimpleGraph::with_edge_order(4, &[(0, 3), (0, 1), (1, 2), (1, 3), (0, 2), (2, 3)])
        .expect("valid edges")
}

/// Cycle code of [`k4_graph`] with the triangle basis as generator.
pub fn k4() -> ClassicalCode {
    let h = BitMatrix::from_strs(&["110010", "011100", "001011", "100101"]).expect("valid rows");
    let g = BitMatrix::from_strs(&["110100", "011010", "001101"]).expect("valid rows");
    debug_assert_eq!(h, k4_graph().incidence_matrix());
    ClassicalCode::with_generator(h, g).expect("triangles are cycles")
}

/// An alternative K4 check matrix whose kernel differs from the triangle basis.
pub fn k4_alternate() -> ClassicalCode {
    let h = BitMatrix::from_strs(&["110010", "011001", "001110", "100101"]).expect("valid rows");
    ClassicalCode::from_parity_check(h)
}

pub fn by_name(name: &str) -> Option<ClassicalCode> {
    match name {
        "k4" => Some(k4()),
        "k4-alt" => Some(k4_alternate()),
        _ => None,
    }
}
