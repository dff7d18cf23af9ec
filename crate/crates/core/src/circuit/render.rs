use super::{Circuit, CircuitOp, GateName};

/// Plain-text circuit drawing: one row per qubit, highest qubit on top,
/// time running left to right.
///
/// ```text
/// q2: --H-----------*--
///                   |
/// q1: ------H-------|--
///                   |
/// q0: ----------H---+--
/// ```
pub fn render_ascii(c: &Circuit) -> String {
    let w = c.width();
    if w == 0 {
        return String::new();
    }
    // wire rows at even indices, gaps between wires at odd ones
    let rows = 2 * w - 1;
    let row_of = |q: usize| 2 * (w - 1 - q);
    let mut grid: Vec<String> = (0..rows)
        .map(|r| if r % 2 == 0 { "-".to_string() } else { " ".to_string() })
        .collect();

    for op in c.ops() {
        let mut labels: Vec<(usize, String)> = Vec::new();
        match op {
            CircuitOp::Gate(g) => match g.name {
                GateName::Cnot => {
                    labels.push((g.qubits[0], "*".into()));
                    labels.push((g.qubits[1], "+".into()));
                }
                GateName::Cz => {
                    labels.push((g.qubits[0], "*".into()));
                    labels.push((g.qubits[1], "*".into()));
                }
                GateName::Swap => {
                    labels.push((g.qubits[0], "x".into()));
                    labels.push((g.qubits[1], "x".into()));
                }
                name => {
                    for &q in &g.qubits {
                        labels.push((q, name.as_str().into()));
                    }
                }
            },
            CircuitOp::Oracle(m) => {
                for &q in &m.inputs {
                    labels.push((q, "Ua".into()));
                }
                labels.push((m.output, "Ua".into()));
            }
            CircuitOp::Measure { qubits } => {
                for &q in qubits {
                    labels.push((q, "M".into()));
                }
            }
        }
        let cell = labels.iter().map(|(_, l)| l.len()).max().unwrap_or(1);
        let rows_used: Vec<usize> = labels.iter().map(|(q, _)| row_of(*q)).collect();
        let top = *rows_used.iter().min().unwrap_or(&0);
        let bottom = *rows_used.iter().max().unwrap_or(&0);
        let linked = !matches!(op, CircuitOp::Measure { .. }) && labels.len() > 1;
        for (r, line) in grid.iter_mut().enumerate() {
            let fill = if r % 2 == 0 { '-' } else { ' ' };
            let text = match labels.iter().find(|(q, _)| row_of(*q) == r) {
                Some((_, l)) => l.clone(),
                None if linked && r > top && r < bottom => "|".to_string(),
                None => String::new(),
            };
            line.push(fill);
            line.push_str(&text);
            line.extend(std::iter::repeat(fill).take(cell - text.chars().count() + 2));
        }
    }

    let label_width = format!("q{}", w - 1).len();
    grid.into_iter()
        .enumerate()
        .map(|(r, line)| {
            let prefix = if r % 2 == 0 {
                format!("{:>label_width$}: ", format!("q{}", w - 1 - r / 2))
            } else {
                " ".repeat(label_width + 2)
            };
            format!("{prefix}{line}").trim_end().to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}
