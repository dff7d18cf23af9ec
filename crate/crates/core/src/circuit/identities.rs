//! Named circuit pairs for `verify`: each should be equivalent up to global
//! phase, except the `x_vs_z` negative control.

use super::{Circuit, CircuitOp, GateName};
use crate::gates;

pub const BUILTIN_IDENTITIES: [&str; 10] = [
    "h_squared",
    "hxh",
    "hzh",
    "hadamard_cnot",
    "cz_symmetry",
    "cnot_via_cz",
    "swap_cnot",
    "exchange_paulis",
    "exchange_hermitian",
    "x_vs_z",
];

/// `(lhs, rhs)` for a built-in name. `fig4` and `fig7` are accepted as
/// short aliases of `hadamard_cnot` and `swap_cnot`.
pub fn builtin_identity(name: &str) -> Option<(Circuit, Circuit)> {
    use CircuitOp as Op;
    let (width, lhs, rhs) = match name {
        "h_squared" => (1, vec![Op::h(0), Op::h(0)], vec![]),
        "hxh" => (1, vec![Op::h(0), Op::x(0), Op::h(0)], vec![Op::z(0)]),
        "hzh" => (1, vec![Op::h(0), Op::z(0), Op::h(0)], vec![Op::x(0)]),
        "hadamard_cnot" | "fig4" => (
            2,
            vec![Op::h(0), Op::h(1), Op::cnot(0, 1), Op::h(0), Op::h(1)],
            vec![Op::cnot(1, 0)],
        ),
        "cz_symmetry" => (2, vec![Op::cz(0, 1)], vec![Op::cz(1, 0)]),
        "cnot_via_cz" => (2, vec![Op::h(1), Op::cz(0, 1), Op::h(1)], vec![Op::cnot(0, 1)]),
        "swap_cnot" | "fig7" => (
            2,
            vec![Op::swap(0, 1), Op::cnot(0, 1), Op::swap(0, 1)],
            vec![Op::cnot(1, 0)],
        ),
        "exchange_paulis" => (2, vec![Op::unitary(gates::swap_via_paulis(), vec![0, 1])], vec![Op::swap(0, 1)]),
        "exchange_hermitian" => (
            2,
            vec![Op::unitary(gates::swap_via_hermitian_paulis(), vec![0, 1])],
            vec![Op::swap(0, 1)],
        ),
        "x_vs_z" => (1, vec![Op::gate(GateName::X, vec![0])], vec![Op::z(0)]),
        _ => return None,
    };
    Some((
        Circuit::new(width, lhs).expect("built-in circuit"),
        Circuit::new(width, rhs).expect("built-in circuit"),
    ))
}
