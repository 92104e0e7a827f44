//! Parameterised building blocks: Leach interferometer, OAM exchangers,
//! binary-tree sorters and swap operators.
//!
//! The exchanger of order `k` routes an OAM eigenstate by the parity bit
//! `t = ⌊m/k⌋ mod 2` of its OAM value `m`:
//!
//! ```text
//! E_k(|m⟩_O |p⟩_P) = |m - t·k + p·k⟩_O |t⟩_P      (inputs with k | m)
//! ```
//!
//! with no residual phase. The internal phase shifters below are calibrated
//! so this holds exactly; the sorter contract of the binary tree built from
//! the exchangers is the oracle that pins the calibration down.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::elements::{Element, Netlist};
use crate::error::{Error, Result};
use crate::modes::{required_window, ModeWindow};

/// Phase shifter on the non-Dove input port. (σ₀ in the calibration.)
pub const CAL_IN_PHASE: f64 = FRAC_PI_2;
/// Phase shifter inside the Dove arm. (α₁ in the calibration.)
pub const CAL_ARM_PHASE: f64 = PI;
/// Phase shifter on the non-Dove output port. (ω₀ in the calibration.)
pub const CAL_OUT_PHASE_A: f64 = -FRAC_PI_2;
/// Phase shifter on the Dove-side output port. (ω₁ in the calibration.)
pub const CAL_OUT_PHASE_B: f64 = PI;

fn require_pow2(name: &'static str, value: usize) -> Result<usize> {
    if value == 0 || !value.is_power_of_two() {
        return Err(Error::NotPowerOfTwo {
            name,
            value: value as i64,
        });
    }
    Ok(value)
}

/// Two-path Mach-Zehnder with a Dove prism (plus compensating mirror) in one
/// arm and a tuning phase `alpha`: the parity-sorter workhorse.
pub fn leach(alpha: f64, dove_alpha: f64) -> Netlist {
    let elements = vec![
        Element::BeamSplitter {
            path_a: 0,
            path_b: 1,
            theta: FRAC_PI_4,
            phi: 0.0,
        },
        Element::DovePrism {
            path: 1,
            alpha: dove_alpha,
        },
        Element::Mirror { path: 1 },
        Element::PhaseShifter {
            path: 1,
            phi: alpha,
        },
        Element::BeamSplitter {
            path_a: 0,
            path_b: 1,
            theta: FRAC_PI_4,
            phi: 0.0,
        },
    ];
    let hint = ModeWindow::new(-4, 4, 2);
    Netlist::from_elements("leach", hint, elements)
        .annotate("construction", "leach")
        .annotate("alpha", format!("{alpha}"))
        .annotate("dove_alpha", format!("{dove_alpha}"))
}

/// Elements of the OAM exchanger `E_k` on physical paths `(p0, p1)`.
///
/// Layout: input hologram `+k` on `p1`; Mach-Zehnder with the Dove prism at
/// `π/(2k)` in the `p1` arm; output hologram `-k` on `p1`; phase shifters at
/// the calibrated constants so the block contract carries no phase.
pub fn exchanger_elements(k: usize, p0: usize, p1: usize) -> Vec<Element> {
    let charge = k as i64;
    let delta = FRAC_PI_2 / k as f64;
    vec![
        Element::Hologram { path: p1, charge },
        Element::PhaseShifter {
            path: p0,
            phi: CAL_IN_PHASE,
        },
        Element::BeamSplitter {
            path_a: p0,
            path_b: p1,
            theta: FRAC_PI_4,
            phi: 0.0,
        },
        Element::PhaseShifter {
            path: p1,
            phi: CAL_ARM_PHASE,
        },
        Element::DovePrism {
            path: p1,
            alpha: delta,
        },
        Element::Mirror { path: p1 },
        Element::BeamSplitter {
            path_a: p0,
            path_b: p1,
            theta: FRAC_PI_4,
            phi: 0.0,
        },
        Element::PhaseShifter {
            path: p0,
            phi: CAL_OUT_PHASE_A,
        },
        Element::PhaseShifter {
            path: p1,
            phi: CAL_OUT_PHASE_B,
        },
        Element::Hologram {
            path: p1,
            charge: -charge,
        },
    ]
}

/// Elements of the inverse exchanger `E_k⁻¹` on `(p0, p1)`: the reversed,
/// element-inverted sequence, with the Dove prism at `-π/(2k)`.
pub fn exchanger_inv_elements(k: usize, p0: usize, p1: usize) -> Vec<Element> {
    let fw = Netlist::from_elements(
        "exchanger_fw",
        ModeWindow::new(0, 1, p1.max(p0) + 1),
        exchanger_elements(k, p0, p1),
    );
    fw.reversed_inverse().elements
}

fn exchanger_netlist(k: usize, inverse: bool) -> Result<Netlist> {
    require_pow2("k", k)?;
    let elements = if inverse {
        exchanger_inv_elements(k, 0, 1)
    } else {
        exchanger_elements(k, 0, 1)
    };
    let span = 4 * k as i64;
    let base = ModeWindow::new(-span, span, 2);
    let name = if inverse { "exchanger_inv" } else { "exchanger" };
    let mut nl = Netlist::from_elements(name, base, elements)
        .annotate("construction", name)
        .annotate("k", k.to_string());
    nl.window_hint = required_window(&nl, &base);
    Ok(nl)
}

/// OAM exchanger of order `k` (a power of two) on paths `(0, 1)`.
pub fn exchanger(k: usize) -> Result<Netlist> {
    exchanger_netlist(k, false)
}

/// Inverse OAM exchanger of order `k` on paths `(0, 1)`.
pub fn exchanger_inv(k: usize) -> Result<Netlist> {
    exchanger_netlist(k, true)
}

/// Binary-tree sorter elements over `dim` logical ports mapped onto
/// `paths[0..dim]`, with every exchanger order scaled by `spacing`.
///
/// Contract (spacing `s`): `|s·x⟩` at port 0 maps to `|s·dim·⌊x/dim⌋⟩` on
/// port `x mod dim`, for every integer `x`.
pub fn spaced_sorter_elements(dim: usize, spacing: usize, paths: &[usize]) -> Vec<Element> {
    debug_assert!(dim.is_power_of_two() && spacing.is_power_of_two());
    debug_assert_eq!(paths.len(), dim);
    let mut elements = Vec::new();
    let mut stride = 1usize;
    while stride < dim {
        for beta in 0..stride {
            elements.extend(exchanger_elements(
                spacing * stride,
                paths[beta],
                paths[beta + stride],
            ));
        }
        stride *= 2;
    }
    elements
}

fn sorter_netlist(d: usize, inverse: bool) -> Result<Netlist> {
    require_pow2("d", d)?;
    if d < 2 {
        return Err(Error::Regime("sorter dimension must be at least 2".into()));
    }
    let paths: Vec<usize> = (0..d).collect();
    let forward = Netlist::from_elements(
        "sorter",
        ModeWindow::new(0, d as i64 - 1, d),
        spaced_sorter_elements(d, 1, &paths),
    );
    let mut nl = if inverse {
        forward.reversed_inverse()
    } else {
        forward
    };
    nl.name = if inverse { "sorter_inv" } else { "sorter" }.into();
    nl.annotations.insert(
        "construction".into(),
        if inverse { "sorter_inv" } else { "sorter" }.into(),
    );
    nl.annotations.insert("d".into(), d.to_string());
    let base = ModeWindow::new(0, d as i64 - 1, d);
    nl.window_hint = required_window(&nl, &base);
    Ok(nl)
}

/// `d`-dimensional OAM sorter: `S_d(|m⟩_O|0⟩_P) = |d·⌊m/d⌋⟩_O |m mod d⟩_P`
/// for every integer `m`. Uses `d - 1` exchangers, hence `2(d-1)` beam
/// splitters.
pub fn sorter(d: usize) -> Result<Netlist> {
    sorter_netlist(d, false)
}

/// Inverse of [`sorter`].
pub fn sorter_inv(d: usize) -> Result<Netlist> {
    sorter_netlist(d, true)
}

/// Swap operator as a single semantic block with the modulo-form action
/// (`n` input paths, `d` output paths, both powers of two):
///
/// * `n > d`: `|m·n/d⟩_O |p⟩_P → |n·⌊m/d⌋ + p⟩_O |m mod d⟩_P`
/// * `n ≤ d`: `|m⟩_O |p⟩_P → |(d/n)(n·⌊m/d⌋ + p)⟩_O |m mod d⟩_P`
pub fn swap_ideal(n: usize, d: usize) -> Result<Netlist> {
    require_pow2("n", n)?;
    require_pow2("d", d)?;
    let paths = n.max(d);
    let hi = if n > d {
        (n - 1) as i64
    } else {
        (d - 1) as i64
    };
    let nl = Netlist::from_elements(
        "swap_ideal",
        ModeWindow::new(0, hi, paths),
        vec![Element::IdealSwap { n_in: n, d_out: d }],
    )
    .annotate("construction", "swap_ideal")
    .annotate("n", n.to_string())
    .annotate("d", d.to_string());
    Ok(nl)
}

/// Element-level swap realisation: one sorter per input path onto an
/// `n × d` path grid, then one inverse sorter per output block, then a
/// relabelling permutation. Matches [`swap_ideal`] on its valid inputs; its
/// element counts are not meant to match the closed-form swap counts.
pub fn swap_expanded(n: usize, d: usize) -> Result<Netlist> {
    require_pow2("n", n)?;
    require_pow2("d", d)?;
    let grid = n * d;
    let mut elements = Vec::new();

    // Stage 1: sort each input path's OAM onto its strided column of the
    // grid. Input spacing n/d (at least 1).
    let in_spacing = (n / d).max(1);
    for p in 0..n {
        let paths: Vec<usize> = (0..d).map(|r| p + r * n).collect();
        elements.extend(spaced_sorter_elements(d, in_spacing, &paths));
    }

    // Stage 2: each contiguous block r = {r·n .. r·n + n - 1} recombines the
    // path label into OAM via an inverse sorter with spacing d/n (at least 1).
    let out_spacing = (d / n).max(1);
    for r in 0..d {
        let paths: Vec<usize> = (0..n).map(|p| r * n + p).collect();
        let fragment = Netlist::from_elements(
            "block",
            ModeWindow::new(0, 1, grid),
            spaced_sorter_elements(n, out_spacing, &paths),
        );
        elements.extend(fragment.reversed_inverse().elements);
    }

    // Stage 3: block bases r·n become the output ports 0..d.
    let mut map = vec![usize::MAX; grid];
    for r in 0..d {
        map[r * n] = r;
    }
    let mut next = d;
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    elements.push(Element::PathPermutation { map });

    let hi = if n > d { (n - 1) as i64 } else { (d - 1) as i64 };
    let base = ModeWindow::new(0, hi, grid);
    let mut nl = Netlist::from_elements("swap_expanded", base, elements)
        .annotate("construction", "swap_expanded")
        .annotate("n", n.to_string())
        .annotate("d", d.to_string());
    nl.window_hint = required_window(&nl, &base);
    Ok(nl)
}

/// Block descriptor mirroring the generators above; handy for serialisation
/// layers and the CLI.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockSpec {
    Exchanger { k: usize },
    ExchangerInv { k: usize },
    Leach { alpha: f64, dove_alpha: f64 },
    Sorter { d: usize },
    SorterInv { d: usize },
    SwapIdeal { n: usize, d: usize },
    SwapExpanded { n: usize, d: usize },
}

impl BlockSpec {
    pub fn build(&self) -> Result<Netlist> {
        match *self {
            BlockSpec::Exchanger { k } => exchanger(k),
            BlockSpec::ExchangerInv { k } => exchanger_inv(k),
            BlockSpec::Leach { alpha, dove_alpha } => Ok(leach(alpha, dove_alpha)),
            BlockSpec::Sorter { d } => sorter(d),
            BlockSpec::SorterInv { d } => sorter_inv(d),
            BlockSpec::SwapIdeal { n, d } => swap_ideal(n, d),
            BlockSpec::SwapExpanded { n, d } => swap_expanded(n, d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{apply_netlist, transfer_matrix};
    use crate::modes::{Mode, StateVector};
    use num_complex::Complex64;

    /// Apply a netlist to a basis mode and insist the output is one basis
    /// mode up to floating-point interference residue; returns it with its
    /// amplitude.
    fn route(nl: &Netlist, window: ModeWindow, input: Mode) -> (Mode, Complex64) {
        let psi = StateVector::basis_state(window, input).unwrap();
        let out = apply_netlist(nl, &psi).unwrap();
        let (mode, amp) = out
            .iter()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        let residual: f64 = out
            .iter()
            .filter(|(m, _)| *m != mode)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(
            residual < 1e-9,
            "{}: input {input} leaves residual {residual:.2e} beside {mode}",
            nl.name
        );
        (*mode, *amp)
    }

    fn sim_window(nl: &Netlist, lo: i64, hi: i64, paths: usize) -> ModeWindow {
        required_window(nl, &ModeWindow::new(lo, hi, paths))
    }

    #[test]
    fn exchanger_contract_holds_exactly() {
        for k in [1usize, 2, 4] {
            let nl = exchanger(k).unwrap();
            let ki = k as i64;
            let w = sim_window(&nl, -6 * ki, 6 * ki, 2);
            for q in -5i64..=5 {
                let m = ki * q;
                for p in [0usize, 1] {
                    let t = q.rem_euclid(2);
                    let expected = Mode::new(m - t * ki + p as i64 * ki, t as usize);
                    let (mode, amp) = route(&nl, w, Mode::new(m, p));
                    assert_eq!(mode, expected, "E_{k}(|{m}⟩, port {p})");
                    assert!(
                        (amp - Complex64::new(1.0, 0.0)).norm() < 1e-12,
                        "E_{k}(|{m}⟩, port {p}): amplitude {amp}"
                    );
                }
            }
        }
    }

    #[test]
    fn exchanger_followed_by_inverse_is_identity() {
        for k in [1usize, 2, 4] {
            let nl = exchanger(k).unwrap().concat(exchanger_inv(k).unwrap());
            let w = sim_window(&nl, -(4 * k as i64), 4 * k as i64, 2);
            let t = transfer_matrix(&nl, &w).unwrap();
            let err = t
                .sub(&crate::numerics::CMatrix::identity(w.size()))
                .unwrap()
                .max_abs();
            assert!(err < 1e-10, "E_{k}·E_{k}⁻¹ deviates by {err:.2e}");
        }
    }

    #[test]
    fn exchanger_requires_power_of_two() {
        assert!(matches!(
            exchanger(3),
            Err(Error::NotPowerOfTwo { .. })
        ));
    }

    #[test]
    fn leach_parity_sorter_routes_even_and_odd_apart() {
        let nl = leach(0.0, FRAC_PI_2);
        let w = sim_window(&nl, -5, 5, 2);
        for m in -4i64..=4 {
            let (mode, amp) = route(&nl, w, Mode::new(m, 0));
            let expected_port = if m.rem_euclid(2) == 0 { 1 } else { 0 };
            assert_eq!(mode, Mode::new(m, expected_port), "parity routing of {m}");
            assert!((amp.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn leach_with_flat_dove_is_oam_independent() {
        let nl = leach(0.3, 0.0);
        let w = sim_window(&nl, -3, 3, 2);
        let t = transfer_matrix(&nl, &w).unwrap();
        // The 2x2 path block must be the same for every OAM value.
        let idx = |m: i64, p: usize| w.index_of(&Mode::new(m, p)).unwrap();
        for m in -3i64..=3 {
            for (pi, po) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let a = t.get(idx(m, po), idx(m, pi));
                let b = t.get(idx(0, po), idx(0, pi));
                assert!((a - b).norm() < 1e-12);
            }
        }
        assert!(t.unitarity_deviation().unwrap() < 1e-12);
    }

    #[test]
    fn leach_transfer_is_unitary_on_sign_symmetric_window() {
        let nl = leach(1.234, FRAC_PI_2);
        let w = sim_window(&nl, -4, 4, 2);
        let t = transfer_matrix(&nl, &w).unwrap();
        assert!(t.unitarity_deviation().unwrap() < 1e-12);
    }

    #[test]
    fn sorter_matches_modulo_contract_small() {
        for d in [2usize, 4] {
            let nl = sorter(d).unwrap();
            let di = d as i64;
            let w = sim_window(&nl, -2 * di, 4 * di, d);
            for m in -2 * di..4 * di {
                let (mode, amp) = route(&nl, w, Mode::new(m, 0));
                let expected = Mode::new(di * m.div_euclid(di), m.rem_euclid(di) as usize);
                assert_eq!(mode, expected, "S_{d}(|{m}⟩)");
                assert!((amp - Complex64::new(1.0, 0.0)).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn exchanger_transfer_on_small_window_is_the_contract_permutation() {
        // Brute force over the four basis modes of (oam 0..1, 2 paths): the
        // transfer equals the contract map exactly.
        let nl = exchanger(1).unwrap();
        let w = ModeWindow::new(0, 1, 2);
        let t = transfer_matrix(&nl, &w).unwrap();
        let mut expected = crate::numerics::CMatrix::zeros(4, 4);
        for m in 0..2i64 {
            for p in 0..2usize {
                let tbit = m.rem_euclid(2);
                let image = Mode::new(m - tbit + p as i64, tbit as usize);
                let col = w.index_of(&Mode::new(m, p)).unwrap();
                let row = w.index_of(&image).unwrap();
                expected.set(row, col, Complex64::new(1.0, 0.0));
            }
        }
        assert!(t.sub(&expected).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn sorter_keeps_all_amplitude_inside_its_required_window() {
        let nl = sorter(8).unwrap();
        let w = sim_window(&nl, 0, 7, 8);
        for m in 0..8i64 {
            let out = apply_netlist(
                &nl,
                &StateVector::basis_state(w, Mode::new(m, 0)).unwrap(),
            )
            .unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-9, "column norm for m={m}");
        }
    }

    #[test]
    fn sorter_beam_splitter_count() {
        for d in [2usize, 4, 8, 16] {
            let nl = sorter(d).unwrap();
            let bs = nl
                .elements
                .iter()
                .filter(|e| matches!(e, Element::BeamSplitter { .. }))
                .count();
            assert_eq!(bs, 2 * (d - 1));
        }
    }

    #[test]
    fn sorter_inverse_undoes_sorter() {
        for d in [2usize, 4, 8] {
            let nl = sorter(d).unwrap().concat(sorter_inv(d).unwrap());
            let di = d as i64;
            let w = sim_window(&nl, -2 * di, 2 * di, d);
            let t = transfer_matrix(&nl, &w).unwrap();
            let err = t
                .sub(&crate::numerics::CMatrix::identity(w.size()))
                .unwrap()
                .max_abs();
            assert!(err < 1e-10, "sorter_inv∘sorter d={d}: {err:.2e}");
        }
    }

    #[test]
    fn swap_ideal_worked_examples() {
        // n = d = 4: (m=3, p=1) → (oam 1, path 3).
        let nl = swap_ideal(4, 4).unwrap();
        let w = ModeWindow::new(0, 3, 4);
        let (mode, _) = route(&nl, w, Mode::new(3, 1));
        assert_eq!(mode, Mode::new(1, 3));

        // n = 8, d = 4: oam 6 = 2·3, p = 5 → (oam 5, path 3).
        let nl = swap_ideal(8, 4).unwrap();
        let w = ModeWindow::new(0, 7, 8);
        let (mode, _) = route(&nl, w, Mode::new(6, 5));
        assert_eq!(mode, Mode::new(5, 3));

        // n = 2, d = 4: (m=5, p=1) → (oam 6, path 1).
        let nl = swap_ideal(2, 4).unwrap();
        let w = ModeWindow::new(0, 6, 4);
        let (mode, _) = route(&nl, w, Mode::new(5, 1));
        assert_eq!(mode, Mode::new(6, 1));
    }

    #[test]
    fn square_swap_is_self_inverse() {
        for n in [2usize, 4, 8] {
            let nl = swap_ideal(n, n).unwrap().concat(swap_ideal(n, n).unwrap());
            let w = ModeWindow::new(0, n as i64 - 1, n);
            let t = transfer_matrix(&nl, &w).unwrap();
            let err = t
                .sub(&crate::numerics::CMatrix::identity(w.size()))
                .unwrap()
                .max_abs();
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn expanded_swap_matches_ideal_on_square_case() {
        for n in [2usize, 4] {
            let ideal = swap_ideal(n, n).unwrap();
            let expanded = swap_expanded(n, n).unwrap();
            let wi = ModeWindow::new(0, n as i64 - 1, n);
            let we = required_window(&expanded, &ModeWindow::new(0, n as i64 - 1, n * n));
            for m in 0..n as i64 {
                for p in 0..n {
                    let (mi, ai) = route(&ideal, wi, Mode::new(m, p));
                    let (me, ae) = route(&expanded, we, Mode::new(m, p));
                    assert_eq!(mi, me, "n={n} input (|{m}⟩, path {p})");
                    assert!((ai - ae).norm() < 1e-11);
                }
            }
        }
    }
}
