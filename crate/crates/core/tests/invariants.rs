use magicdist::clifford::{single_qubit_cliffords, to_dynamic};
use magicdist::measures::{coherence_l1, incompatibility};
use magicdist::pauli::{pauli_spectrum_fast, pauli_spectrum_naive, spectrum, weyl_spectrum};
use magicdist::statevec::haar_sample;
use magicdist::{MagicReport, PureState, Register, SeededRng};
use proptest::prelude::*;

fn haar(register: Register, seed: u64) -> PureState {
    haar_sample(register, &mut SeededRng::new(seed, 0).generator()).unwrap()
}

fn m2(state: &PureState) -> f64 {
    MagicReport::for_state(state, 2.0).unwrap().m_alpha
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_spectrum_equals_naive(seed in any::<u64>(), n in 1usize..=4) {
        let s = haar(Register::qubits(n).unwrap(), seed);
        let fast = pauli_spectrum_fast(&s).unwrap();
        let naive = pauli_spectrum_naive(&s).unwrap();
        for (a, b) in fast.values().iter().zip(naive.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_sums_to_dimension(seed in any::<u64>(), q in 2usize..=7) {
        let register = if q == 2 { Register::qubits(3).unwrap() } else { Register::qudit(q).unwrap() };
        let s = haar(register, seed);
        let spec = spectrum(&s).unwrap();
        prop_assert!((spec.total() - (s.dim() as f64 - 1.0)).abs() < 1e-10);
        prop_assert!(spec.values().iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
    }

    #[test]
    fn haar_states_are_normalized(seed in any::<u64>(), n in 1usize..=6) {
        let s = haar(Register::qubits(n).unwrap(), seed);
        let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_additive(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = haar(Register::qubits(1).unwrap(), s1);
        let b = haar(Register::qubits(2).unwrap(), s2);
        let joint = a.tensor(&b).unwrap();
        prop_assert!((m2(&joint) - m2(&a) - m2(&b)).abs() < 1e-10);
    }

    #[test]
    fn clifford_invariance(seed in any::<u64>()) {
        let s = haar(Register::qubits(1).unwrap(), seed);
        let base = m2(&s);
        for u in single_qubit_cliffords() {
            let rotated = s.apply(&to_dynamic(&u)).unwrap();
            prop_assert!((m2(&rotated) - base).abs() < 1e-12);
        }
    }

    #[test]
    fn incompatibility_identities(seed in any::<u64>()) {
        let s = haar(Register::qubits(1).unwrap(), seed);
        prop_assert!((incompatibility(&s, 1).unwrap() - 4.0).abs() < 1e-12);
        let xi = MagicReport::for_state(&s, 2.0).unwrap().xi_alpha;
        prop_assert!((incompatibility(&s, 2).unwrap() - 4.0 * xi).abs() < 1e-12);
    }

    #[test]
    fn measure_ranges(seed in any::<u64>(), alpha in 1.05f64..6.0) {
        let s = haar(Register::qubits(1).unwrap(), seed);
        let r = MagicReport::for_state(&s, alpha).unwrap();
        prop_assert!(r.n_alpha >= 3f64.powf(1.0 - alpha) - 1e-12 && r.n_alpha <= 1.0 + 1e-12);
        prop_assert!(r.m_alpha >= -1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&coherence_l1(&s)));
    }

    #[test]
    fn weyl_and_pauli_moduli_agree_for_a_qubit(seed in any::<u64>()) {
        let s = haar(Register::qubits(1).unwrap(), seed);
        let mut p = pauli_spectrum_fast(&s).unwrap().values().to_vec();
        let mut w = weyl_spectrum(&s).unwrap().values().to_vec();
        p.sort_by(f64::total_cmp);
        w.sort_by(f64::total_cmp);
        for (a, b) in p.iter().zip(&w) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
