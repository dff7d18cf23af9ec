//! JSON circuit files.
//!
//! ```text
//! {"width":6,"ops":[
//!   {"gate":"H","q":[0]},
//!   {"gate":"CNOT","q":[2,0]},
//!   {"gate":"U","q":[0],"matrix":[[[0,0],[1,0]],[[1,0],[0,0]]]},
//!   {"a":"11010","in":[5,4,3,2,1],"oracle":"BV","out":0},
//!   {"measure":true,"q":[5,4,3,2,1]}
//! ]}
//! ```
//!
//! `a` may be omitted on an oracle, leaving it to be bound at run time.

use serde_json::{json, Map, Value};

use super::{Circuit, CircuitOp, GateName, GateOp, OracleMarker};
use crate::error::{Error, Result};
use crate::matrix::GateMatrix;
use crate::state::parse_bitstring;
use num_complex::Complex64;

pub fn parse(text: &str) -> Result<Circuit> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = doc.as_object().ok_or_else(|| top("document must be an object"))?;
    for key in obj.keys() {
        if key != "width" && key != "ops" {
            return Err(top(&format!("unexpected key {key:?}")));
        }
    }
    let width = obj
        .get("width")
        .and_then(Value::as_u64)
        .ok_or_else(|| top("\"width\" must be a non-negative integer"))? as usize;
    let ops = obj
        .get("ops")
        .and_then(Value::as_array)
        .ok_or_else(|| top("\"ops\" must be an array"))?;
    let ops = ops
        .iter()
        .enumerate()
        .map(|(i, v)| parse_op(i, v))
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(width, ops)
}

fn top(message: &str) -> Error {
    Error::Syntax {
        line: 1,
        column: 1,
        message: message.to_string(),
    }
}

fn parse_op(index: usize, v: &Value) -> Result<CircuitOp> {
    let invalid = |message: String| Error::InvalidOp { index, message };
    let obj = v.as_object().ok_or_else(|| invalid("op must be an object".into()))?;
    let allow = |keys: &[&str]| -> Result<()> {
        match obj.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(invalid(format!("unexpected key {k:?}"))),
            None => Ok(()),
        }
    };
    let qubit_list = |key: &str| -> Result<Vec<usize>> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| invalid(format!("{key:?} must be an array of qubit ids")))?
            .iter()
            .map(|q| {
                q.as_u64()
                    .map(|q| q as usize)
                    .ok_or_else(|| invalid(format!("{key:?} entries must be non-negative integers")))
            })
            .collect()
    };

    if let Some(name) = obj.get("gate") {
        allow(&["gate", "q", "matrix"])?;
        let name = name.as_str().ok_or_else(|| invalid("\"gate\" must be a string".into()))?;
        let name = GateName::from_name(name)?;
        let qubits = qubit_list("q")?;
        let matrix = match (name, obj.get("matrix")) {
            (GateName::U, Some(m)) => Some(parse_matrix(m).map_err(|e| invalid(e.to_string()))?),
            (GateName::U, None) => return Err(invalid("U requires \"matrix\"".into())),
            (_, Some(_)) => return Err(invalid(format!("{name} does not take a matrix"))),
            (_, None) => None,
        };
        return Ok(CircuitOp::Gate(GateOp { name, qubits, matrix }));
    }
    if let Some(kind) = obj.get("oracle") {
        allow(&["oracle", "a", "in", "out"])?;
        if kind.as_str() != Some("BV") {
            return Err(invalid(format!("unsupported oracle kind {kind}")));
        }
        let inputs = qubit_list("in")?;
        let output = obj
            .get("out")
            .and_then(Value::as_u64)
            .ok_or_else(|| invalid("\"out\" must be a qubit id".into()))? as usize;
        let hidden = match obj.get("a") {
            None => None,
            Some(a) => {
                let bits = a.as_str().ok_or_else(|| invalid("\"a\" must be a bitstring".into()))?;
                if bits.len() != inputs.len() {
                    return Err(invalid(format!(
                        "\"a\" has {} bits but \"in\" lists {} qubits",
                        bits.len(),
                        inputs.len()
                    )));
                }
                Some(parse_bitstring(bits)?)
            }
        };
        return Ok(CircuitOp::Oracle(OracleMarker { hidden, inputs, output }));
    }
    if let Some(flag) = obj.get("measure") {
        allow(&["measure", "q"])?;
        if flag != &Value::Bool(true) {
            return Err(invalid("\"measure\" must be true".into()));
        }
        return Ok(CircuitOp::Measure {
            qubits: qubit_list("q")?,
        });
    }
    Err(invalid("op needs one of \"gate\", \"oracle\" or \"measure\"".into()))
}

fn parse_matrix(v: &Value) -> Result<GateMatrix> {
    let bad = || Error::InvalidOp {
        index: 0,
        message: "matrix must be rows of [re, im] pairs".into(),
    };
    let rows = v.as_array().ok_or_else(bad)?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|entry| match entry.as_array().map(Vec::as_slice) {
                    Some([re, im]) => Ok(Complex64::new(
                        re.as_f64().ok_or_else(bad)?,
                        im.as_f64().ok_or_else(bad)?,
                    )),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GateMatrix::from_rows(rows)
}

fn op_value(op: &CircuitOp) -> Value {
    match op {
        CircuitOp::Gate(g) => {
            let mut m = Map::new();
            m.insert("gate".into(), json!(g.name.as_str()));
            m.insert("q".into(), json!(g.qubits));
            if let Some(matrix) = &g.matrix {
                let rows: Vec<Vec<[f64; 2]>> = matrix
                    .rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|c| [c.re, c.im]).collect())
                    .collect();
                m.insert("matrix".into(), json!(rows));
            }
            Value::Object(m)
        }
        CircuitOp::Oracle(o) => {
            let mut m = Map::new();
            m.insert("oracle".into(), json!("BV"));
            if let Some(bits) = o.hidden_bits() {
                m.insert("a".into(), json!(bits));
            }
            m.insert("in".into(), json!(o.inputs));
            m.insert("out".into(), json!(o.output));
            Value::Object(m)
        }
        CircuitOp::Measure { qubits } => json!({"measure": true, "q": qubits}),
    }
}

/// Canonical text: one op per line.
pub fn serialize(c: &Circuit) -> String {
    let mut out = format!("{{\"width\":{},\"ops\":[", c.width());
    for (i, op) in c.ops().iter().enumerate() {
        out.push_str(if i == 0 { "\n  " } else { ",\n  " });
        out.push_str(&op_value(op).to_string());
    }
    if !c.is_empty() {
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}
