mod common;

use proptest::prelude::*;

use quand_core::analysis::{
    nc_ancilla_decomposition, probe_overlap, spam_correct, t1_fidelity, truth_table_fidelity,
    unitary_equiv, ConfusionMatrix, NcArrangement, T1Segment,
};
use quand_core::synth::{synth_fredkin, synth_mcz_tree, synth_toffoli};
use quand_core::{Circuit, ConnectivityGraph, GateKind, TruthTable64};

use common::*;

#[test]
fn synthesized_gates_have_unit_truth_table_fidelity() {
    let g = ConnectivityGraph::path(4);
    let t = synth_toffoli(&g, 3).unwrap();
    let ideal = TruthTable64::from_permutation(4, toffoli_map(4, 3)).unwrap();
    let f = truth_table_fidelity(&TruthTable64::of(&t.circuit).unwrap(), &ideal).unwrap();
    assert!((f - 1.0).abs() < 1e-12);

    let fr = synth_fredkin(&g, (1, 2)).unwrap();
    let ideal = TruthTable64::from_permutation(4, fredkin_map(4, 1, 2)).unwrap();
    let f = truth_table_fidelity(&TruthTable64::of(&fr.circuit).unwrap(), &ideal).unwrap();
    assert!((f - 1.0).abs() < 1e-12);

    // a truth table that never matches scores zero
    let mut x = Circuit::new(&[2; 4]).unwrap();
    x.push(GateKind::X, &[0]).unwrap();
    let f =
        truth_table_fidelity(&TruthTable64::of(&x).unwrap(), &TruthTable64::identity(4)).unwrap();
    assert_eq!(f, 0.0);
}

#[test]
fn equivalence_sees_phases_truth_tables_miss() {
    let s = synth_mcz_tree(&ConnectivityGraph::cycle(4).unwrap()).unwrap();
    let id = Circuit::new(&[2; 4]).unwrap();
    // same truth table as the identity, different unitary
    assert_eq!(
        TruthTable64::of(&s.circuit).unwrap(),
        TruthTable64::of(&id).unwrap()
    );
    let eq = unitary_equiv::<f64>(&s.circuit, &id, 1e-9).unwrap();
    assert!(!eq.equivalent);
    assert!((eq.overlap - 14.0 / 16.0).abs() < 1e-12);
    let p: f64 = probe_overlap(&s.circuit, &id).unwrap();
    assert!((p - 14.0 / 16.0).abs() < 1e-12);
    let mut reference = Circuit::reference(&[2; 4]).unwrap();
    reference.push(GateKind::RefMcz, &[0, 1, 2, 3]).unwrap();
    assert!(
        unitary_equiv::<f64>(&s.circuit, &reference, 1e-9)
            .unwrap()
            .equivalent
    );
    assert!((probe_overlap::<f64>(&s.circuit, &reference).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn nc_decomposition_is_clean() {
    for c in 2..=5 {
        for arr in [NcArrangement::Tree, NcArrangement::Ladder] {
            let d = nc_ancilla_decomposition(c, arr).unwrap();
            let w = 2 * c - 1;
            let t = TruthTable64::of(&d.circuit).unwrap();
            for input in 0..1usize << w {
                let ancillas_zero = d.ancillas.iter().all(|&a| bit(input, w, a) == 0);
                if !ancillas_zero {
                    continue;
                }
                let on = d.controls.iter().all(|&q| bit(input, w, q) == 1);
                let want = if on { flip(input, w, d.target) } else { input };
                assert!(
                    (t.columns[input][want] - 1.0).abs() < 1e-12,
                    "c={c} input={input}"
                );
            }
        }
    }
}

#[test]
fn t1_examples() {
    let seg = |d: f64, ex: Vec<bool>| T1Segment {
        duration: d,
        t1: vec![50e-6; ex.len()],
        excited: ex,
    };
    assert_eq!(t1_fidelity(&[]).unwrap(), 1.0);
    let f = t1_fidelity(&[seg(1e-6, vec![true, false])]).unwrap();
    assert!((f - (-0.02f64).exp()).abs() < 1e-15);
    assert!(t1_fidelity(&[T1Segment {
        duration: 1.0,
        excited: vec![true],
        t1: vec![0.0]
    }])
    .is_err());
    assert!(t1_fidelity(&[seg(-1.0, vec![true])]).is_err());
}

fn stochastic(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    // diagonally dominant columns stay well conditioned
    prop::collection::vec(prop::collection::vec(0.0f64..1.0, d), d).prop_map(move |raw| {
        let mut m = vec![vec![0.0; d]; d];
        for col in 0..d {
            let off: f64 = (0..d).filter(|&r| r != col).map(|r| raw[col][r]).sum();
            let scale = 0.3 / off.max(1e-9);
            for r in 0..d {
                m[r][col] = if r == col { 0.0 } else { raw[col][r] * scale };
            }
            m[col][col] = 1.0 - (0..d).map(|r| m[r][col]).sum::<f64>();
        }
        m
    })
}

proptest! {
    #[test]
    fn spam_correction_inverts_readout(
        m in stochastic(4),
        weights in prop::collection::vec(0.01f64..1.0, 4),
    ) {
        let total: f64 = weights.iter().sum();
        let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let r = ConfusionMatrix::new(m).unwrap();
        let c = spam_correct(&r, &r.apply(&p)).unwrap();
        for (a, b) in c.corrected.iter().zip(&p) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        prop_assert!(c.negative_mass < 1e-12);
        prop_assert!(c.condition_number >= 1.0 - 1e-12);
    }

    #[test]
    fn t1_fidelity_falls_with_time(
        t1 in prop::collection::vec(1e-6f64..1e-3, 1..5),
        d1 in 0.0f64..1e-4,
        extra in 0.0f64..1e-4,
        mask in any::<u8>(),
    ) {
        let excited: Vec<bool> = (0..t1.len()).map(|i| mask >> i & 1 == 1).collect();
        let seg = |d| T1Segment { duration: d, excited: excited.clone(), t1: t1.clone() };
        let short = t1_fidelity(&[seg(d1)]).unwrap();
        let long = t1_fidelity(&[seg(d1 + extra)]).unwrap();
        prop_assert!(long <= short + 1e-15);
        prop_assert!((0.0..=1.0).contains(&long));
        let split = t1_fidelity(&[seg(d1), seg(extra)]).unwrap();
        prop_assert!((split - long).abs() < 1e-12);
    }
}
