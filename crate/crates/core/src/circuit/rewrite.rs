//! Peephole rewriting over contiguous op windows.
//!
//! Every rule is a unitary identity and only fires inside the
//! measurement-free prefix of a circuit. [`certify_rule`] checks a rule by
//! comparing full unitaries of each matched window and its replacement.

use std::fmt;

use serde_json::json;

use super::{equivalence_check, Circuit, CircuitOp, GateName, OracleMarker, EQUIVALENCE_TOLERANCE};
use crate::error::{Error, Result};

/// How a conjugation rule touches the qubits it conjugates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalityClass {
    /// Conjugating gates act on one qubit each.
    LocalConjugation,
    /// Conjugating gates couple two qubits.
    EntanglingConjugation,
    /// Not a conjugation.
    Peephole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteRule {
    /// `H q; H q` → nothing.
    HhCancel,
    /// nothing → `H q; H q`.
    HhInsert { qubit: usize },
    /// `H q; X q; H q` → `Z q`.
    HxhToZ,
    /// `H q; Z q; H q` → `X q`.
    HzhToX,
    /// `H c; H t; CNOT c t; H c; H t` (each H pair in either order) → `CNOT t c`.
    ConjugateCnot,
    /// `CZ a b` → `CZ b a`.
    CzSymmetry,
    /// `SWAP a b; CNOT a b; SWAP a b` → `CNOT b a`.
    SwapConjugation,
    /// `H t; CZ c t; H t` → `CNOT c t`.
    CnotViaCz,
    /// Two adjacent ops on disjoint qubits trade places.
    CommuteDisjoint,
    /// BV oracle marker with known string → one CNOT per set bit.
    ExpandOracle,
}

impl RewriteRule {
    /// Every rule, with `HhInsert` on qubit 0 as its representative.
    pub const ALL: [RewriteRule; 10] = [
        RewriteRule::HhCancel,
        RewriteRule::HhInsert { qubit: 0 },
        RewriteRule::HxhToZ,
        RewriteRule::HzhToX,
        RewriteRule::ConjugateCnot,
        RewriteRule::CzSymmetry,
        RewriteRule::SwapConjugation,
        RewriteRule::CnotViaCz,
        RewriteRule::CommuteDisjoint,
        RewriteRule::ExpandOracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RewriteRule::HhCancel => "hh_cancel",
            RewriteRule::HhInsert { .. } => "hh_insert",
            RewriteRule::HxhToZ => "hxh_to_z",
            RewriteRule::HzhToX => "hzh_to_x",
            RewriteRule::ConjugateCnot => "conjugate_cnot",
            RewriteRule::CzSymmetry => "cz_symmetry",
            RewriteRule::SwapConjugation => "swap_conjugation",
            RewriteRule::CnotViaCz => "cnot_via_cz",
            RewriteRule::CommuteDisjoint => "commute_disjoint",
            RewriteRule::ExpandOracle => "expand_oracle",
        }
    }

    /// Looks a rule up by name; `hh_insert` needs `qubit`.
    pub fn from_name(name: &str, qubit: Option<usize>) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name).map(|r| match r {
            RewriteRule::HhInsert { .. } => RewriteRule::HhInsert {
                qubit: qubit.unwrap_or(0),
            },
            other => other,
        })
    }

    pub fn locality(&self) -> LocalityClass {
        match self {
            RewriteRule::ConjugateCnot => LocalityClass::LocalConjugation,
            RewriteRule::SwapConjugation => LocalityClass::EntanglingConjugation,
            _ => LocalityClass::Peephole,
        }
    }

    /// Tries the rule on the ops starting at the head of `window`. Returns
    /// the number of ops consumed and their replacement.
    pub fn try_match(&self, window: &[CircuitOp]) -> Option<(usize, Vec<CircuitOp>)> {
        let h = |i: usize| window.get(i).and_then(|op| op.single(GateName::H));
        match self {
            RewriteRule::HhCancel => {
                let q = h(0)?;
                (h(1)? == q).then(|| (2, vec![]))
            }
            RewriteRule::HhInsert { qubit } => Some((0, vec![CircuitOp::h(*qubit), CircuitOp::h(*qubit)])),
            RewriteRule::HxhToZ | RewriteRule::HzhToX => {
                let (middle, result) = if *self == RewriteRule::HxhToZ {
                    (GateName::X, GateName::Z)
                } else {
                    (GateName::Z, GateName::X)
                };
                let q = h(0)?;
                (window.get(1)?.single(middle)? == q && h(2)? == q)
                    .then(|| (3, vec![CircuitOp::gate(result, vec![q])]))
            }
            RewriteRule::ConjugateCnot => {
                let (c, t) = window.get(2)?.pair(GateName::Cnot)?;
                let pair_ok = |a: usize, b: usize| (a == c && b == t) || (a == t && b == c);
                (pair_ok(h(0)?, h(1)?) && pair_ok(h(3)?, h(4)?)).then(|| (5, vec![CircuitOp::cnot(t, c)]))
            }
            RewriteRule::CzSymmetry => {
                let (a, b) = window.first()?.pair(GateName::Cz)?;
                Some((1, vec![CircuitOp::cz(b, a)]))
            }
            RewriteRule::SwapConjugation => {
                let (s0, s1) = window.first()?.pair(GateName::Swap)?;
                let (c, t) = window.get(1)?.pair(GateName::Cnot)?;
                let (e0, e1) = window.get(2)?.pair(GateName::Swap)?;
                let same = |a: usize, b: usize| (a == c && b == t) || (a == t && b == c);
                (same(s0, s1) && same(e0, e1)).then(|| (3, vec![CircuitOp::cnot(t, c)]))
            }
            RewriteRule::CnotViaCz => {
                let t = h(0)?;
                let (a, b) = window.get(1)?.pair(GateName::Cz)?;
                let c = if b == t {
                    a
                } else if a == t {
                    b
                } else {
                    return None;
                };
                (h(2)? == t).then(|| (3, vec![CircuitOp::cnot(c, t)]))
            }
            RewriteRule::CommuteDisjoint => {
                let (first, second) = (window.first()?, window.get(1)?);
                if first.is_measurement() || second.is_measurement() {
                    return None;
                }
                let q1 = first.qubits();
                (!second.qubits().iter().any(|q| q1.contains(q)))
                    .then(|| (2, vec![second.clone(), first.clone()]))
            }
            RewriteRule::ExpandOracle => match window.first()? {
                CircuitOp::Oracle(m) => Some((1, cnot_bank(m, m.hidden?))),
                _ => None,
            },
        }
    }

    /// Representative windows at `width`, covering every qubit assignment
    /// the rule's pattern admits. Used for soundness certificates.
    pub fn sample_windows(&self, width: usize) -> Vec<Vec<CircuitOp>> {
        let qubits = 0..width;
        let pairs: Vec<(usize, usize)> = qubits
            .clone()
            .flat_map(|a| (0..width).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        match self {
            RewriteRule::HhCancel => qubits.map(|q| vec![CircuitOp::h(q), CircuitOp::h(q)]).collect(),
            RewriteRule::HhInsert { .. } => vec![vec![]],
            RewriteRule::HxhToZ => qubits.map(|q| vec![CircuitOp::h(q), CircuitOp::x(q), CircuitOp::h(q)]).collect(),
            RewriteRule::HzhToX => qubits.map(|q| vec![CircuitOp::h(q), CircuitOp::z(q), CircuitOp::h(q)]).collect(),
            RewriteRule::ConjugateCnot => pairs
                .iter()
                .flat_map(|&(c, t)| {
                    let orders = [(c, t), (t, c)];
                    orders.into_iter().flat_map(move |(p, q)| {
                        orders.into_iter().map(move |(r, s)| {
                            vec![CircuitOp::h(p), CircuitOp::h(q), CircuitOp::cnot(c, t), CircuitOp::h(r), CircuitOp::h(s)]
                        })
                    })
                })
                .collect(),
            RewriteRule::CzSymmetry => pairs.iter().map(|&(a, b)| vec![CircuitOp::cz(a, b)]).collect(),
            RewriteRule::SwapConjugation => pairs
                .iter()
                .flat_map(|&(c, t)| {
                    [(c, t), (t, c)].into_iter().map(move |(a, b)| {
                        vec![CircuitOp::swap(a, b), CircuitOp::cnot(c, t), CircuitOp::swap(b, a)]
                    })
                })
                .collect(),
            RewriteRule::CnotViaCz => pairs
                .iter()
                .flat_map(|&(c, t)| {
                    [vec![CircuitOp::h(t), CircuitOp::cz(c, t), CircuitOp::h(t)], vec![
                        CircuitOp::h(t),
                        CircuitOp::cz(t, c),
                        CircuitOp::h(t),
                    ]]
                })
                .collect(),
            RewriteRule::CommuteDisjoint => {
                let mut windows = Vec::new();
                for &(a, b) in &pairs {
                    windows.push(vec![CircuitOp::h(a), CircuitOp::x(b)]);
                    windows.push(vec![CircuitOp::gate(GateName::Y, vec![a]), CircuitOp::h(b)]);
                    for c in (0..width).filter(|&c| c != a && c != b) {
                        windows.push(vec![CircuitOp::cnot(a, b), CircuitOp::h(c)]);
                        windows.push(vec![CircuitOp::gate(GateName::YH, vec![c]), CircuitOp::cz(a, b)]);
                        for d in (0..width).filter(|&d| d != a && d != b && d != c) {
                            windows.push(vec![CircuitOp::cnot(a, b), CircuitOp::swap(c, d)]);
                        }
                    }
                }
                windows
            }
            RewriteRule::ExpandOracle => {
                let mut windows = Vec::new();
                for n in 1..width {
                    // inputs on the high qubits, output on 0; and reversed
                    let layouts = [
                        ((1..=n).rev().collect::<Vec<_>>(), 0),
                        ((0..n).collect::<Vec<_>>(), n),
                    ];
                    for (inputs, output) in layouts {
                        for a in 0..1u64 << n {
                            windows.push(vec![CircuitOp::Oracle(OracleMarker {
                                hidden: Some(a),
                                inputs: inputs.clone(),
                                output,
                            })]);
                        }
                    }
                }
                windows
            }
        }
    }

    /// Gates the rule places around the conjugated core, taken from a
    /// representative match. Empty for non-conjugation rules.
    pub fn conjugating_gates(&self) -> Vec<CircuitOp> {
        let Some(window) = self.sample_windows(2).into_iter().next() else {
            return vec![];
        };
        match self.locality() {
            LocalityClass::Peephole => vec![],
            _ => {
                let core = window.len() / 2;
                window
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| *i != core)
                    .map(|(_, op)| op)
                    .collect()
            }
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One CNOT per set bit of `a`, most significant first, each controlled by
/// the matching input qubit and targeting the output.
fn cnot_bank(m: &OracleMarker, a: u64) -> Vec<CircuitOp> {
    let n = m.inputs.len();
    m.inputs
        .iter()
        .enumerate()
        .filter(|(k, _)| (a >> (n - 1 - k)) & 1 == 1)
        .map(|(_, &q)| CircuitOp::cnot(q, m.output))
        .collect()
}

/// Applies `rule` at `position`, which must lie in the unitary prefix.
pub fn rewrite_step(c: &Circuit, rule: RewriteRule, position: usize) -> Result<Circuit> {
    let prefix = c.unitary_prefix_len();
    let no_match = || Error::NoMatch {
        rule: rule.name().to_string(),
        position,
    };
    if position > prefix {
        return Err(no_match());
    }
    let (consumed, replacement) = rule.try_match(&c.ops()[position..prefix]).ok_or_else(no_match)?;
    let mut ops = c.ops()[..position].to_vec();
    ops.extend(replacement);
    ops.extend_from_slice(&c.ops()[position + consumed..]);
    Circuit::new(c.width(), ops)
}

/// Replaces the first oracle marker with its CNOT bank for string `a`. A
/// marker that already carries a different string is rejected.
pub fn expand_oracle(c: &Circuit, a: u64) -> Result<Circuit> {
    let index = c
        .ops()
        .iter()
        .position(|op| matches!(op, CircuitOp::Oracle(_)))
        .ok_or(Error::OracleAbsent)?;
    let CircuitOp::Oracle(m) = &c.ops()[index] else {
        unreachable!()
    };
    if m.hidden.is_some_and(|h| h != a) {
        return Err(Error::UnexpectedShape(format!(
            "oracle marker hides {} but expansion asked for a different string",
            m.hidden_bits().unwrap_or_default()
        )));
    }
    let mut ops = c.ops()[..index].to_vec();
    ops.extend(cnot_bank(m, a));
    ops.extend_from_slice(&c.ops()[index + 1..]);
    Circuit::new(c.width(), ops)
}

/// One applied rule instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub rule: RewriteRule,
    pub position: usize,
    /// Circuit length before and after the step.
    pub before_len: usize,
    pub after_len: usize,
}

impl TraceEntry {
    /// `{"rule":…,"position":…,"before_len":…,"after_len":…}`
    pub fn to_json_line(&self) -> String {
        json!({
            "rule": self.rule.name(),
            "position": self.position,
            "before_len": self.before_len,
            "after_len": self.after_len,
        })
        .to_string()
    }
}

/// Applies rules while recording a trace.
#[derive(Debug, Clone)]
pub struct Rewriter {
    circuit: Circuit,
    trace: Vec<TraceEntry>,
}

impl Rewriter {
    pub fn new(circuit: Circuit) -> Self {
        Self { circuit, trace: Vec::new() }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn finish(self) -> (Circuit, Vec<TraceEntry>) {
        (self.circuit, self.trace)
    }

    pub fn apply(&mut self, rule: RewriteRule, position: usize) -> Result<()> {
        let before_len = self.circuit.len();
        self.circuit = rewrite_step(&self.circuit, rule, position)?;
        self.trace.push(TraceEntry {
            rule,
            position,
            before_len,
            after_len: self.circuit.len(),
        });
        Ok(())
    }

    /// Moves the op at `from` to index `to` by commuting it past its
    /// neighbours one step at a time.
    pub fn move_op(&mut self, mut from: usize, to: usize) -> Result<()> {
        while from < to {
            self.apply(RewriteRule::CommuteDisjoint, from)
                .map_err(|_| blocked(from, from + 1))?;
            from += 1;
        }
        while from > to {
            self.apply(RewriteRule::CommuteDisjoint, from - 1)
                .map_err(|_| blocked(from - 1, from))?;
            from -= 1;
        }
        Ok(())
    }

    fn find(&self, range: std::ops::Range<usize>, pred: impl Fn(&CircuitOp) -> bool) -> Option<usize> {
        range.clone().find(|&i| pred(&self.circuit.ops()[i]))
    }

    fn rfind(&self, range: std::ops::Range<usize>, pred: impl Fn(&CircuitOp) -> bool) -> Option<usize> {
        range.rev().find(|&i| pred(&self.circuit.ops()[i]))
    }
}

fn blocked(a: usize, b: usize) -> Error {
    Error::UnexpectedShape(format!("ops {a} and {b} share a qubit and cannot be reordered"))
}

fn is_h_on(q: usize) -> impl Fn(&CircuitOp) -> bool {
    move |op| op.single(GateName::H) == Some(q)
}

/// Start of the first run of `width` Hadamards covering every qubit.
fn find_h_layer(c: &Circuit, from: usize) -> Option<usize> {
    let w = c.width();
    let ops = c.ops();
    if w == 0 || ops.len() < from + w {
        return None;
    }
    (from..=ops.len() - w).find(|&s| {
        let mut seen = vec![false; w];
        ops[s..s + w].iter().all(|op| match op.single(GateName::H) {
            Some(q) if !seen[q] => {
                seen[q] = true;
                true
            }
            _ => false,
        })
    })
}

/// Reduces `H-layer; oracle; H-layer` to the bare reversed CNOT bank.
///
/// Accepted input: any prefix, a layer of `H` on every qubit, either a BV
/// oracle marker with known string or its expanded CNOT bank (all CNOTs
/// sharing one target), a second full `H` layer, then only measurements.
///
/// Pipeline, recorded step by step in the trace:
/// 1. expand the oracle marker if present;
/// 2. insert an `H; H` pair on the output qubit between consecutive CNOTs;
/// 3. for each CNOT left to right, commute the nearest `H` on its control
///    and target from each side into place and apply `conjugate_cnot`;
/// 4. bring each remaining `H` next to its partner and cancel the pair.
///
/// The result holds one CNOT per set bit of the string, controlled by the
/// output qubit and targeting the matching input qubit.
pub fn bv_simplify(c: &Circuit) -> Result<(Circuit, Vec<TraceEntry>)> {
    let shape = |m: &str| Error::UnexpectedShape(m.to_string());
    let w = c.width();
    let start = find_h_layer(c, 0).ok_or_else(|| shape("no Hadamard layer on every qubit"))?;
    let mut rw = Rewriter::new(c.clone());

    let block = start + w;
    if let Some(CircuitOp::Oracle(m)) = c.ops().get(block) {
        if m.hidden.is_none() {
            return Err(shape("oracle marker has no known string to expand"));
        }
        rw.apply(RewriteRule::ExpandOracle, block)?;
    }

    let cur = rw.circuit().clone();
    let block_len = cur.ops()[block..]
        .iter()
        .position(|op| op.pair(GateName::Cnot).is_none())
        .unwrap_or(cur.len() - block);
    let cnots: Vec<(usize, usize)> = cur.ops()[block..block + block_len]
        .iter()
        .map(|op| op.pair(GateName::Cnot).expect("counted above"))
        .collect();
    let end = block + block_len;
    if find_h_layer(&cur, end) != Some(end) {
        return Err(shape("oracle block must be followed by a Hadamard layer on every qubit"));
    }
    if cur.ops()[end + w..].iter().any(|op| !op.is_measurement()) {
        return Err(shape("only measurements may follow the second Hadamard layer"));
    }
    let output = cnots.first().map(|&(_, t)| t);
    if let Some(t) = output {
        let mut controls: Vec<usize> = cnots.iter().map(|&(c, _)| c).collect();
        controls.sort_unstable();
        controls.dedup();
        if cnots.iter().any(|&(_, tt)| tt != t) || controls.len() != cnots.len() {
            return Err(shape("CNOT bank must share one target and use distinct controls"));
        }
    }

    // 2: output-qubit H pairs between consecutive CNOTs
    if let Some(t) = output {
        for i in (1..cnots.len()).rev() {
            rw.apply(RewriteRule::HhInsert { qubit: t }, block + i)?;
        }
    }

    // 3: conjugate each CNOT in turn
    let mut cursor = start;
    for &(ctl, tgt) in &cnots {
        let limit = rw.circuit().unitary_prefix_len();
        let at = rw
            .find(cursor..limit, |op| op.pair(GateName::Cnot) == Some((ctl, tgt)))
            .ok_or_else(|| shape("lost track of a CNOT"))?;
        // left flank: [H tgt, H ctl, CNOT]; the CNOT index does not move
        for (q, slot) in [(ctl, at - 1), (tgt, at - 2)] {
            let left = rw
                .rfind(start..slot + 1, is_h_on(q))
                .ok_or_else(|| shape("missing Hadamard before CNOT"))?;
            rw.move_op(left, slot)?;
        }
        // right flank: [CNOT, H ctl, H tgt]
        for (q, slot) in [(ctl, at + 1), (tgt, at + 2)] {
            let limit = rw.circuit().unitary_prefix_len();
            let right = rw
                .find(slot..limit, is_h_on(q))
                .ok_or_else(|| shape("missing Hadamard after CNOT"))?;
            rw.move_op(right, slot)?;
        }
        rw.apply(RewriteRule::ConjugateCnot, at - 2)?;
        cursor = at - 2;
    }

    // 4: cancel what is left
    loop {
        let limit = rw.circuit().unitary_prefix_len();
        let Some(first) = rw.find(start..limit, |op| op.single(GateName::H).is_some()) else {
            break;
        };
        let q = rw.circuit().ops()[first].single(GateName::H).expect("found above");
        let partner = rw
            .find(first + 1..limit, is_h_on(q))
            .ok_or_else(|| shape("unpaired Hadamard"))?;
        rw.move_op(first, partner - 1)?;
        rw.apply(RewriteRule::HhCancel, partner - 1)?;
    }

    Ok(rw.finish())
}

/// Checks `rule` on every sample window at `width`: the window and its
/// rewrite must have equal unitaries up to global phase.
pub fn certify_rule(rule: RewriteRule, width: usize) -> Result<bool> {
    for window in rule.sample_windows(width) {
        let before = Circuit::new(width, window)?;
        let after = rewrite_step(&before, rule, 0)?;
        if !equivalence_check(&before, &after, EQUIVALENCE_TOLERANCE)? {
            return Ok(false);
        }
    }
    Ok(true)
}
