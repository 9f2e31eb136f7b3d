//! Reversible arithmetic from QuAND, CNOT and X gates.
//!
//! Registers are little-endian: bit `i` of `a` lives on wire `i` (wire 0 is
//! the least significant bit). Note that simulator basis labels read wire 0
//! as the most significant digit, so use [`encode`] / [`decode`] to move
//! between integers and digit strings.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateKind, Op};
use crate::scalar::Real;
use crate::sim::{run, StateVector};
use crate::synth::{quand, reverse_quand};

/// Multi-wire gate count per bit bounding every circuit built here.
pub const LINEAR_SIZE_CONSTANT: usize = 12;

fn cnot(control: usize, target: usize) -> Op {
    Op::new(GateKind::Cnot, [control, target])
}

fn x(wire: usize) -> Op {
    Op::new(GateKind::X, [wire])
}

fn build(dims: Vec<usize>, ops: Vec<Op>) -> Result<Circuit> {
    let mut c = Circuit::new(&dims)?;
    c.extend_ops(ops)?;
    Ok(c)
}

/// `|a> -> |a + 1 mod 2^n>` on wires `0..n`.
pub fn synth_incrementer(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut ops = Vec::new();
    if n >= 2 {
        // carry chain: wire i+1 collects a_0 & ... & a_{i+1}
        for i in 0..n - 2 {
            ops.extend(quand(i, i + 1, 0.0));
        }
        ops.push(cnot(n - 2, n - 1));
        for i in (0..n - 2).rev() {
            ops.extend(reverse_quand(i, i + 1, 0.0));
            ops.push(cnot(i, i + 1));
        }
    }
    ops.push(x(0));
    let dims = (0..n).map(|i| if i + 2 < n { 3 } else { 2 }).collect();
    build(dims, ops)
}

/// `G_0` (plain QuAND) or `G_1` (QuAND with both bits negated on entry and
/// the carry negated on exit).
fn g_block(bit: bool, top: usize, bottom: usize) -> Vec<Op> {
    if bit {
        let mut ops = vec![x(top), x(bottom)];
        ops.extend(quand(top, bottom, 0.0));
        ops.push(x(bottom));
        ops
    } else {
        quand(top, bottom, 0.0)
    }
}

fn g_block_reverse(bit: bool, top: usize, bottom: usize) -> Vec<Op> {
    if bit {
        let mut ops = vec![x(bottom)];
        ops.extend(reverse_quand(top, bottom, 0.0));
        ops.extend([x(top), x(bottom)]);
        ops
    } else {
        reverse_quand(top, bottom, 0.0)
    }
}

/// `|a> -> |a + b mod 2^n>` for odd `b` with `1 <= b < 2^n`.
pub fn synth_const_adder(n: usize, b: u64) -> Result<Circuit> {
    if n == 0 || n >= 64 {
        return Err(Error::InvalidArgument(format!("n = {n} outside 1..64")));
    }
    if b.is_multiple_of(2) {
        return Err(Error::EvenConstant(b));
    }
    if b >= 1u64 << n {
        return Err(Error::InvalidArgument(format!(
            "constant {b} does not fit in {n} bits"
        )));
    }
    let bit = |i: usize| (b >> i) & 1 == 1;
    let mut ops = Vec::new();
    if n >= 2 {
        for i in 0..n - 2 {
            ops.extend(g_block(bit(i + 1), i, i + 1));
        }
        ops.push(cnot(n - 2, n - 1));
        for i in (0..n - 2).rev() {
            ops.extend(g_block_reverse(bit(i + 1), i, i + 1));
            ops.push(cnot(i, i + 1));
        }
    }
    ops.extend((0..n).filter(|&i| bit(i)).map(x));
    let dims = (0..n).map(|i| if i + 2 < n { 3 } else { 2 }).collect();
    build(dims, ops)
}

/// Wire of bit `i` of `a` in the interleaved adder layout `a0 b0 a1 b1 ...`.
pub fn adder_a_wire(i: usize) -> usize {
    2 * i
}

/// Wire of bit `i` of `b` in the interleaved adder layout.
pub fn adder_b_wire(i: usize) -> usize {
    2 * i + 1
}

/// Majority block: leaves the incoming carry AND-folded on `mid`.
fn m_block(top: usize, mid: usize, bot: usize) -> Vec<Op> {
    let mut ops = vec![cnot(mid, top), cnot(bot, mid), cnot(mid, top)];
    ops.extend(quand(top, mid, 0.0));
    ops.push(cnot(mid, bot));
    ops
}

/// Undoes [`m_block`] and writes the sum bit.
fn u_block(top: usize, mid: usize, bot: usize) -> Vec<Op> {
    let mut ops = vec![cnot(mid, bot)];
    ops.extend(reverse_quand(top, mid, 0.0));
    ops.extend([
        cnot(top, mid),
        cnot(mid, top),
        cnot(bot, mid),
        cnot(mid, top),
    ]);
    ops
}

/// `|a>|b> -> |a + b mod 2^n>|b>` over `2n` interleaved wires.
pub fn synth_adder(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let (a, b) = (adder_a_wire, adder_b_wire);
    let mut ops = Vec::new();
    if n == 1 {
        ops.push(cnot(b(0), a(0)));
    } else {
        ops.extend(quand(a(0), b(0), 0.0));
        for i in 1..n - 1 {
            ops.extend(m_block(b(i - 1), a(i), b(i)));
        }
        ops.push(cnot(b(n - 2), a(n - 1)));
        ops.push(cnot(b(n - 1), a(n - 1)));
        for i in (1..n - 1).rev() {
            ops.extend(u_block(b(i - 1), a(i), b(i)));
        }
        ops.extend(reverse_quand(a(0), b(0), 0.0));
        ops.push(cnot(b(0), a(0)));
    }
    let mut dims = vec![2; 2 * n];
    if n >= 2 {
        dims[a(0)] = 3;
        for i in 0..n - 2 {
            dims[b(i)] = 3;
        }
    }
    build(dims, ops)
}

/// Binary digits of an integer placed on `wires` (bit `k` on `wires[k]`),
/// in a register of `num_wires` wires.
pub fn encode(values: &[(u64, &[usize])], num_wires: usize) -> Vec<usize> {
    let mut digits = vec![0; num_wires];
    for (value, wires) in values {
        for (k, &w) in wires.iter().enumerate() {
            digits[w] = ((value >> k) & 1) as usize;
        }
    }
    digits
}

/// Integer read from `wires` (bit `k` on `wires[k]`), or `None` if any of the
/// wires is not a single binary digit in `state`.
pub fn decode<T: Real>(state: &StateVector<T>, wires: &[usize]) -> Option<u64> {
    let probs = state.probabilities();
    let (idx, p) = probs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))?;
    if (T::one() - *p).abs() > T::of(1e-9) {
        return None;
    }
    let digits = state.digits_of(idx);
    wires
        .iter()
        .enumerate()
        .try_fold(0u64, |acc, (k, &w)| match digits[w] {
            0 => Some(acc),
            1 => Some(acc | 1 << k),
            _ => None,
        })
}

/// One exhaustive check row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRow {
    pub input: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

/// Outcome of an exhaustive arithmetic check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithReport {
    pub rows: Vec<CheckRow>,
}

impl ArithReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("input\texpected\tgot\tpass\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", r.input, r.expected, r.got, r.pass);
        }
        out
    }
}

fn show(v: Option<u64>) -> String {
    v.map_or_else(|| "leaked".to_string(), |v| v.to_string())
}

/// Checks a single-register map `a -> f(a)` on wires `0..n` for every `a`.
pub fn verify_unary(
    circuit: &Circuit,
    n: usize,
    f: impl Fn(u64) -> u64 + Sync,
) -> Result<ArithReport> {
    let wires: Vec<usize> = (0..n).collect();
    let rows = (0..1u64 << n)
        .into_par_iter()
        .map(|a| {
            let state = run::<f64>(circuit, &encode(&[(a, &wires)], circuit.num_wires()))?;
            let got = decode(&state, &wires);
            let expected = f(a);
            Ok(CheckRow {
                input: a.to_string(),
                expected: expected.to_string(),
                got: show(got),
                pass: got == Some(expected) && state.leakage() < 1e-12,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ArithReport { rows })
}

/// Checks the adder on every `(a, b)` pair: `a` must become `a + b mod 2^n`
/// and `b` must be preserved.
pub fn verify_adder(circuit: &Circuit, n: usize) -> Result<ArithReport> {
    let aw: Vec<usize> = (0..n).map(adder_a_wire).collect();
    let bw: Vec<usize> = (0..n).map(adder_b_wire).collect();
    let mask = (1u64 << n) - 1;
    let rows = (0..1u64 << (2 * n))
        .into_par_iter()
        .map(|pair| {
            let (a, b) = (pair >> n, pair & mask);
            let digits = encode(&[(a, &aw), (b, &bw)], circuit.num_wires());
            let state = run::<f64>(circuit, &digits)?;
            let got = decode(&state, &aw).zip(decode(&state, &bw));
            let expected = ((a + b) & mask, b);
            Ok(CheckRow {
                input: format!("{a},{b}"),
                expected: format!("{},{}", expected.0, expected.1),
                got: got.map_or_else(|| "leaked".into(), |(x, y)| format!("{x},{y}")),
                pass: got == Some(expected) && state.leakage() < 1e-12,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ArithReport { rows })
}

/// Sidecar text for an arithmetic circuit: sizes and the linear constant.
pub fn size_report(circuit: &Circuit, n: usize) -> String {
    let counts = circuit.gate_count();
    let mut out = String::new();
    let _ = writeln!(out, "bits\t{n}");
    let _ = writeln!(out, "multi_wire_gates\t{}", counts.multi_wire);
    let _ = writeln!(out, "single_wire_gates\t{}", counts.single_wire);
    let _ = writeln!(out, "linear_constant\t{LINEAR_SIZE_CONSTANT}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply_unary(c: &Circuit, n: usize, a: u64) -> u64 {
        let wires: Vec<usize> = (0..n).collect();
        let s = run::<f64>(c, &encode(&[(a, &wires)], c.num_wires())).unwrap();
        decode(&s, &wires).unwrap()
    }

    #[test]
    fn incrementer_examples() {
        let c = synth_incrementer(3).unwrap();
        assert_eq!(apply_unary(&c, 3, 0), 1);
        assert_eq!(apply_unary(&c, 3, 5), 6);
        assert_eq!(apply_unary(&c, 3, 7), 0);
        assert!(synth_incrementer(0).is_err());
    }

    #[test]
    fn const_adder_examples() {
        let c = synth_const_adder(3, 1).unwrap();
        assert_eq!(apply_unary(&c, 3, 4), 5);
        let c = synth_const_adder(4, 3).unwrap();
        assert_eq!(apply_unary(&c, 4, 5), 8);
        let err = synth_const_adder(3, 2).unwrap_err();
        assert!(err.to_string().contains("b must be odd"));
        assert!(synth_const_adder(3, 9).is_err());
    }

    #[test]
    fn adder_examples() {
        let c = synth_adder(3).unwrap();
        let aw: Vec<usize> = (0..3).map(adder_a_wire).collect();
        let bw: Vec<usize> = (0..3).map(adder_b_wire).collect();
        let s = run::<f64>(&c, &encode(&[(0, &aw), (6, &bw)], 6)).unwrap();
        assert_eq!((decode(&s, &aw), decode(&s, &bw)), (Some(6), Some(6)));
    }

    #[test]
    fn encode_decode_round_trip() {
        let w = [2usize, 0, 1];
        let digits = encode(&[(0b110, &w)], 3);
        assert_eq!(digits, vec![1, 1, 0]);
        let s = StateVector::<f64>::basis(&[2, 2, 2], &digits).unwrap();
        assert_eq!(decode(&s, &w), Some(6));
    }

    #[test]
    fn report_tsv() {
        let r = verify_unary(&synth_incrementer(2).unwrap(), 2, |a| (a + 1) % 4).unwrap();
        assert!(r.passed());
        assert_eq!(r.to_tsv().lines().count(), 5);
    }
}
