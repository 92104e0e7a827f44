//! Gate-level synthesis: lowering gate specifications to element netlists,
//! plus the redundancy-elimination pass.
//!
//! The universal construction sandwiches a path-encoded unitary between an
//! OAM sorter and its inverse. Pauli `X^k` gates are generated exactly that
//! way, with a path permutation as the core, and then simplified: the
//! peephole pass cancels adjacent exchanger/inverse pairs element by
//! element, which reproduces the closed-form element counts.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::blocks::{sorter, sorter_inv, swap_expanded, swap_ideal};
use crate::elements::{Element, Netlist};
use crate::error::{Error, Result};
use crate::modes::{required_window, Mode, ModeWindow, StateVector};
use crate::numerics::{
    cyclic_shift_matrix, eig_unitary, matrix_power, phase_aligned_distance, CMatrix, UNITARY_TOL,
};

/// Which swap realisation a construction should embed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapMode {
    Ideal,
    Expanded,
}

fn swap_netlist(n: usize, d: usize, mode: SwapMode) -> Result<Netlist> {
    match mode {
        SwapMode::Ideal => swap_ideal(n, d),
        SwapMode::Expanded => swap_expanded(n, d),
    }
}

fn require_pow2(name: &'static str, value: usize) -> Result<()> {
    if value == 0 || !value.is_power_of_two() {
        return Err(Error::NotPowerOfTwo {
            name,
            value: value as i64,
        });
    }
    Ok(())
}

fn require_unitary(u: &CMatrix) -> Result<()> {
    let dev = u.unitarity_deviation().ok_or(Error::NonSquare {
        rows: u.rows(),
        cols: u.cols(),
    })?;
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary {
            deviation: dev,
            tol: UNITARY_TOL,
        });
    }
    Ok(())
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn is_null_angle(x: f64) -> bool {
    wrap_angle(x).abs() <= 1e-12
}

/// Detect a permutation-with-phases matrix: one unit-modulus entry per
/// column. Returns `(map, phase_of_destination)`.
fn permutation_with_phases(u: &CMatrix) -> Option<(Vec<usize>, Vec<f64>)> {
    let d = u.rows();
    let mut map = vec![0usize; d];
    let mut phases = vec![0.0f64; d];
    let mut used = vec![false; d];
    for (j, slot) in map.iter_mut().enumerate() {
        let mut found = None;
        for i in 0..d {
            let v = u.get(i, j);
            if v.norm() > 1e-12 {
                if found.is_some() || (v.norm() - 1.0).abs() > 1e-12 {
                    return None;
                }
                found = Some((i, v.arg()));
            }
        }
        let (i, phase) = found?;
        if used[i] {
            return None;
        }
        used[i] = true;
        *slot = i;
        phases[i] = phase;
    }
    Some((map, phases))
}

/// Express a 2×2 unitary on paths `(p, q)` as phase shifters around a single
/// beam splitter in the crate's convention.
fn two_mode_elements(
    p: usize,
    q: usize,
    v00: num_complex::Complex64,
    v01: num_complex::Complex64,
    v10: num_complex::Complex64,
    v11: num_complex::Complex64,
) -> Vec<Element> {
    let mut out = Vec::new();
    let cos_t = (v00.norm() + v11.norm()) / 2.0;
    let sin_t = (v01.norm() + v10.norm()) / 2.0;
    let theta = sin_t.atan2(cos_t);

    // V = diag(e^{iμ0}, e^{iμ1}) · B(θ, 0) · diag(1, e^{iν1}).
    let (mu0, mu1, nu1) = if sin_t <= 1e-13 {
        (v00.arg(), v11.arg(), 0.0)
    } else if cos_t <= 1e-13 {
        (v01.arg() - PI / 2.0, v10.arg() - PI / 2.0, 0.0)
    } else {
        let mu0 = v00.arg();
        let mu1 = v10.arg() - PI / 2.0;
        let nu1 = v01.arg() - PI / 2.0 - mu0;
        (mu0, mu1, nu1)
    };

    if !is_null_angle(nu1) {
        out.push(Element::PhaseShifter {
            path: q,
            phi: wrap_angle(nu1),
        });
    }
    if !is_null_angle(theta) {
        out.push(Element::BeamSplitter {
            path_a: p,
            path_b: q,
            theta,
            phi: 0.0,
        });
    }
    if !is_null_angle(mu0) {
        out.push(Element::PhaseShifter {
            path: p,
            phi: wrap_angle(mu0),
        });
    }
    if !is_null_angle(mu1) {
        out.push(Element::PhaseShifter {
            path: q,
            phi: wrap_angle(mu1),
        });
    }
    out
}

/// Triangular decomposition of a path-encoded unitary into beam splitters
/// and phase shifters on nearest-neighbour path pairs. Null rotations are
/// pruned, so permutation matrices lower to a single [`Element::PathPermutation`]
/// with no beam splitters.
pub fn reck_decompose(u: &CMatrix) -> Result<Netlist> {
    require_unitary(u)?;
    let d = u.rows();
    let window = ModeWindow::new(0, 0, d.max(1));

    if let Some((map, phases)) = permutation_with_phases(u) {
        let mut elements = Vec::new();
        if map.iter().enumerate().any(|(i, &m)| i != m) {
            elements.push(Element::PathPermutation { map });
        }
        for (path, &phi) in phases.iter().enumerate() {
            if !is_null_angle(phi) {
                elements.push(Element::PhaseShifter {
                    path,
                    phi: wrap_angle(phi),
                });
            }
        }
        return Ok(
            Netlist::from_elements("reck", window, elements).annotate("construction", "reck")
        );
    }

    // Givens sweep: null below-diagonal entries column by column, bottom up.
    let mut a = u.clone();
    let mut rotations: Vec<(usize, [num_complex::Complex64; 4])> = Vec::new();
    for j in 0..d {
        for i in (j + 1..d).rev() {
            let below = a.get(i, j);
            if below.norm() <= 1e-14 {
                continue;
            }
            let above = a.get(i - 1, j);
            let r = (above.norm_sqr() + below.norm_sqr()).sqrt();
            let g = [
                above.conj() / r,
                below.conj() / r,
                -below / r,
                above / r,
            ];
            for col in 0..d {
                let x = a.get(i - 1, col);
                let y = a.get(i, col);
                a.set(i - 1, col, g[0] * x + g[1] * y);
                a.set(i, col, g[2] * x + g[3] * y);
            }
            rotations.push((i, g));
        }
    }

    let mut elements = Vec::new();
    for p in 0..d {
        let gamma = a.get(p, p).arg();
        if !is_null_angle(gamma) {
            elements.push(Element::PhaseShifter {
                path: p,
                phi: wrap_angle(gamma),
            });
        }
    }
    for (i, g) in rotations.iter().rev() {
        // G† on paths (i-1, i).
        elements.extend(two_mode_elements(
            i - 1,
            *i,
            g[0].conj(),
            g[2].conj(),
            g[1].conj(),
            g[3].conj(),
        ));
    }

    Ok(Netlist::from_elements("reck", window, elements).annotate("construction", "reck"))
}

/// Universal OAM unitary: sorter, path-encoded core, inverse sorter.
pub fn universal_oam(u: &CMatrix) -> Result<Netlist> {
    let d = u.rows();
    require_pow2("d", d)?;
    require_unitary(u)?;
    let core = reck_decompose(u)?;
    let mut nl = sorter(d)?.concat(core).concat(sorter_inv(d)?);
    nl.name = "universal".into();
    nl.annotations = BTreeMap::new();
    nl = nl
        .annotate("construction", "universal")
        .annotate("d", d.to_string());
    nl.window_hint = required_window(&nl, &ModeWindow::new(0, d as i64 - 1, d));
    Ok(nl)
}

/// `X_d^k` netlist: the universal scheme with a cyclic path permutation as
/// the core, simplified so redundant exchangers disappear. Powers above
/// `d/2` compile as the reverse of the complementary power.
pub fn xk_gate(d: usize, k: usize) -> Result<Netlist> {
    require_pow2("d", d)?;
    if d < 2 || k == 0 || k >= d {
        return Err(Error::Regime(format!(
            "xk gate requires a power 1 <= k <= d-1, got d={d}, k={k}"
        )));
    }
    let mut nl = if k > d / 2 {
        xk_gate(d, d - k)?.reversed_inverse()
    } else {
        simplify(&universal_oam(&cyclic_shift_matrix(d, k))?)
    };
    nl.name = format!("x{k}_d{d}");
    nl.annotations = BTreeMap::new();
    nl = nl
        .annotate("construction", "xk")
        .annotate("d", d.to_string())
        .annotate("k", k.to_string());
    nl.window_hint = required_window(&nl, &ModeWindow::new(0, d as i64 - 1, d));
    Ok(nl)
}

/// `Z_d^k` netlist: a single Dove prism at `-kπ/d` with a compensating
/// mirror. `k ≡ 0 (mod d)` degenerates to a double mirror.
pub fn z_gate(d: usize, k: usize) -> Result<Netlist> {
    if d < 2 {
        return Err(Error::Regime("z gate requires d >= 2".into()));
    }
    let elements = if k % d == 0 {
        vec![Element::Mirror { path: 0 }, Element::Mirror { path: 0 }]
    } else {
        vec![
            Element::DovePrism {
                path: 0,
                alpha: -(k as f64) * PI / d as f64,
            },
            Element::Mirror { path: 0 },
        ]
    };
    let base = ModeWindow::new(0, d as i64 - 1, 1);
    let mut nl = Netlist::from_elements(format!("z{k}_d{d}"), base, elements)
        .annotate("construction", "z")
        .annotate("d", d.to_string())
        .annotate("k", k.to_string());
    nl.window_hint = required_window(&nl, &base);
    Ok(nl)
}

/// High-dimensional controlled-Z: one Dove prism (at `-πp/n`) plus mirror in
/// every path, including the zero-angle prism in path 0.
pub fn cz_gate(n: usize, d: usize) -> Result<Netlist> {
    if n < 2 || d < 2 {
        return Err(Error::Regime("cz gate requires n >= 2 and d >= 2".into()));
    }
    let mut elements = Vec::new();
    for p in 0..n {
        elements.push(Element::DovePrism {
            path: p,
            alpha: -(p as f64) * PI / n as f64,
        });
        elements.push(Element::Mirror { path: p });
    }
    let base = ModeWindow::new(0, d as i64 - 1, n);
    let mut nl = Netlist::from_elements(format!("cz_n{n}_d{d}"), base, elements)
        .annotate("construction", "cz")
        .annotate("n", n.to_string())
        .annotate("d", d.to_string());
    nl.window_hint = required_window(&nl, &base);
    Ok(nl)
}

/// Controlled unitary with OAM as the control: eigenbasis rotation on the
/// paths, one Dove prism (angle `φ_j/2`) per path, inverse rotation.
pub fn controlled_u(u_path: &CMatrix, d: usize) -> Result<Netlist> {
    controlled_u_spaced(u_path, d, 1)
}

/// [`controlled_u`] for controls encoded on OAM multiples of `spacing`:
/// Dove prisms rotate through `φ_j / (2·spacing)`.
pub fn controlled_u_spaced(u_path: &CMatrix, d: usize, spacing: i64) -> Result<Netlist> {
    if spacing < 1 {
        return Err(Error::Regime("spacing must be at least 1".into()));
    }
    require_unitary(u_path)?;
    let n = u_path.rows();
    let dec = eig_unitary(u_path)?;
    let basis = reck_decompose(&dec.m)?;
    let basis_inv = basis.reversed_inverse();

    let mut doves = Vec::new();
    for (j, &phi) in dec.phases.iter().enumerate() {
        if is_null_angle(phi) {
            continue;
        }
        doves.push(Element::DovePrism {
            path: j,
            alpha: phi / (2.0 * spacing as f64),
        });
        doves.push(Element::Mirror { path: j });
    }
    let base = ModeWindow::new(0, (d as i64 - 1) * spacing, n);
    let dove_stage = Netlist::from_elements("doves", base, doves);

    let mut nl = basis.concat(dove_stage).concat(basis_inv);
    nl.name = format!("cu_n{n}_d{d}");
    nl.annotations = BTreeMap::new();
    nl = nl
        .annotate("construction", "controlled_u")
        .annotate("n", n.to_string())
        .annotate("d", d.to_string())
        .annotate("spacing", spacing.to_string());
    nl.window_hint = required_window(&nl, &base);
    Ok(nl)
}

/// Controlled unitary with the path as the control: the OAM-controlled
/// setup sandwiched between two swaps.
pub fn path_controlled(u_oam: &CMatrix, n: usize, mode: SwapMode) -> Result<Netlist> {
    let d = u_oam.rows();
    require_pow2("n", n)?;
    require_pow2("d", d)?;
    let cu_spacing = ((d / n).max(1)) as i64;
    let core = controlled_u_spaced(u_oam, n, cu_spacing)?;
    let mut nl = swap_netlist(n, d, mode)?
        .concat(core)
        .concat(swap_netlist(d, n, mode)?);
    nl.name = format!("path_cu_n{n}_d{d}");
    nl.annotations = BTreeMap::new();
    nl = nl
        .annotate("construction", "path_controlled")
        .annotate("n", n.to_string())
        .annotate("d", d.to_string());
    Ok(nl)
}

/// Parallelised scheme: the path-encoded core between a swap and its
/// inverse applies `u` to the OAM content of every path at once.
pub fn parallelize(u: &CMatrix, n: usize, mode: SwapMode) -> Result<Netlist> {
    let d = u.rows();
    require_pow2("n", n)?;
    require_pow2("d", d)?;
    require_unitary(u)?;
    let core = reck_decompose(u)?;
    let mut nl = swap_netlist(n, d, mode)?
        .concat(core)
        .concat(swap_netlist(d, n, mode)?);
    nl.name = format!("par_n{n}_d{d}");
    nl.annotations = BTreeMap::new();
    nl = nl
        .annotate("construction", "parallelized")
        .annotate("n", n.to_string())
        .annotate("d", d.to_string());
    Ok(nl)
}

// ---------------------------------------------------------------------------
// Peephole simplification
// ---------------------------------------------------------------------------

fn shares_path(a: &Element, b: &Element) -> bool {
    let pa = a.paths();
    b.paths().iter().any(|p| pa.contains(p))
}

fn extended_inverse(map: &[usize], len: usize) -> Vec<usize> {
    let mut inv: Vec<usize> = (0..len.max(map.len())).collect();
    for (src, &dst) in map.iter().enumerate() {
        inv[dst] = src;
    }
    inv
}

fn rewrite_paths(e: &Element, inv: &[usize]) -> Element {
    let lookup = |p: usize| -> usize { inv.get(p).copied().unwrap_or(p) };
    match e {
        Element::BeamSplitter {
            path_a,
            path_b,
            theta,
            phi,
        } => Element::BeamSplitter {
            path_a: lookup(*path_a),
            path_b: lookup(*path_b),
            theta: *theta,
            phi: *phi,
        },
        Element::PhaseShifter { path, phi } => Element::PhaseShifter {
            path: lookup(*path),
            phi: *phi,
        },
        Element::DovePrism { path, alpha } => Element::DovePrism {
            path: lookup(*path),
            alpha: *alpha,
        },
        Element::Hologram { path, charge } => Element::Hologram {
            path: lookup(*path),
            charge: *charge,
        },
        Element::Mirror { path } => Element::Mirror { path: lookup(*path) },
        Element::PolSplitter { path_a, path_b } => Element::PolSplitter {
            path_a: lookup(*path_a),
            path_b: lookup(*path_b),
        },
        Element::HalfWavePlate { path } => Element::HalfWavePlate { path: lookup(*path) },
        Element::PathPermutation { .. } | Element::IdealSwap { .. } => {
            unreachable!("not path-rewritable")
        }
    }
}

fn is_identity_perm(map: &[usize]) -> bool {
    map.iter().enumerate().all(|(i, &m)| i == m)
}

/// Push path permutations to the right (composing adjacent ones) so that
/// block/inverse pairs separated only by a relabelling become adjacent.
/// Ideal swaps act as barriers.
fn slide_permutations(elements: &mut Vec<Element>) -> bool {
    let mut changed = false;
    let mut i = 0;
    while i < elements.len() {
        let map = match &elements[i] {
            Element::PathPermutation { map } => map.clone(),
            _ => {
                i += 1;
                continue;
            }
        };
        if is_identity_perm(&map) {
            elements.remove(i);
            changed = true;
            continue;
        }
        if i + 1 >= elements.len() {
            break;
        }
        match &elements[i + 1] {
            Element::PathPermutation { map: second } => {
                let len = map.len().max(second.len());
                let merged: Vec<usize> = (0..len)
                    .map(|p| {
                        let mid = map.get(p).copied().unwrap_or(p);
                        second.get(mid).copied().unwrap_or(mid)
                    })
                    .collect();
                elements.remove(i + 1);
                if is_identity_perm(&merged) {
                    elements.remove(i);
                } else {
                    elements[i] = Element::PathPermutation { map: merged };
                }
                changed = true;
            }
            Element::IdealSwap { .. } => {
                i += 1;
            }
            other => {
                let needed = other.min_paths();
                let inv = extended_inverse(&map, needed);
                elements[i] = rewrite_paths(other, &inv);
                elements[i + 1] = Element::PathPermutation { map };
                changed = true;
                i += 1;
            }
        }
    }
    changed
}

enum Rule {
    /// Replace the pair with one element.
    Merge(Element),
    /// Remove both elements.
    Annihilate,
    /// Replace the pair in place (normalisation).
    Rewrite(Element, Element),
}

fn pair_rule(first: &Element, second: &Element) -> Option<Rule> {
    use Element::*;
    match (first, second) {
        (Hologram { path: p, charge: a }, Hologram { path: q, charge: b }) if p == q => {
            let sum = a + b;
            if sum == 0 {
                Some(Rule::Annihilate)
            } else {
                Some(Rule::Merge(Hologram {
                    path: *p,
                    charge: sum,
                }))
            }
        }
        (PhaseShifter { path: p, phi: a }, PhaseShifter { path: q, phi: b }) if p == q => {
            let sum = wrap_angle(a + b);
            if sum.abs() <= 1e-12 {
                Some(Rule::Annihilate)
            } else {
                Some(Rule::Merge(PhaseShifter { path: *p, phi: sum }))
            }
        }
        (Mirror { path: p }, Mirror { path: q }) if p == q => Some(Rule::Annihilate),
        (DovePrism { path: p, alpha: a }, DovePrism { path: q, alpha: b })
            if p == q && (a - b).abs() <= 1e-12 =>
        {
            Some(Rule::Annihilate)
        }
        // Mirror·Dove(α) ≡ Dove(-α)·Mirror: move Dove prisms left so that
        // Dove·Dove annihilation can fire.
        (Mirror { path: p }, DovePrism { path: q, alpha }) if p == q => Some(Rule::Rewrite(
            DovePrism {
                path: *p,
                alpha: -alpha,
            },
            Mirror { path: *p },
        )),
        (
            BeamSplitter {
                path_a: a1,
                path_b: b1,
                theta: t1,
                phi: f1,
            },
            BeamSplitter {
                path_a: a2,
                path_b: b2,
                theta: t2,
                phi: f2,
            },
        ) => {
            // Orient the second splitter like the first; a swapped port
            // order negates φ.
            let (t2, f2) = if a1 == a2 && b1 == b2 {
                (*t2, *f2)
            } else if a1 == b2 && b1 == a2 {
                (*t2, -*f2)
            } else {
                return None;
            };
            if wrap_angle(f1 - f2).abs() > 1e-12 {
                return None;
            }
            let theta = t1 + t2;
            if is_null_angle(theta) {
                Some(Rule::Annihilate)
            } else {
                Some(Rule::Merge(BeamSplitter {
                    path_a: *a1,
                    path_b: *b1,
                    theta,
                    phi: *f1,
                }))
            }
        }
        _ => None,
    }
}

fn is_null_element(e: &Element) -> bool {
    match e {
        Element::Hologram { charge, .. } => *charge == 0,
        Element::PhaseShifter { phi, .. } => is_null_angle(*phi),
        Element::BeamSplitter { theta, .. } => is_null_angle(*theta),
        Element::PathPermutation { map } => is_identity_perm(map),
        _ => false,
    }
}

fn peephole_pass(elements: &mut Vec<Element>) -> bool {
    let mut changed = false;
    elements.retain(|e| {
        if is_null_element(e) {
            changed = true;
            false
        } else {
            true
        }
    });

    let mut i = 0;
    while i < elements.len() {
        // The first later element sharing a path is the peephole partner;
        // anything in between acts on disjoint paths and commutes past.
        let mut partner = None;
        for j in i + 1..elements.len() {
            if shares_path(&elements[i], &elements[j]) {
                partner = Some(j);
                break;
            }
        }
        let Some(j) = partner else {
            i += 1;
            continue;
        };
        match pair_rule(&elements[i], &elements[j]) {
            Some(Rule::Annihilate) => {
                elements.remove(j);
                elements.remove(i);
                changed = true;
                i = 0;
            }
            Some(Rule::Merge(e)) => {
                elements[i] = e;
                elements.remove(j);
                changed = true;
                i = 0;
            }
            Some(Rule::Rewrite(a, b)) => {
                elements[i] = a;
                elements[j] = b;
                changed = true;
                // A rewrite may enable a cancellation further left.
                i = 0;
            }
            None => {
                i += 1;
            }
        }
    }
    changed
}

/// Transfer-preserving peephole simplification: cancels adjacent inverse
/// pairs (holograms, mirrors, Dove prisms, beam splitters, whole exchanger
/// blocks element by element), merges phases, prunes null rotations and
/// pushes path permutations to the tail. Idempotent, and the element count
/// never increases.
pub fn simplify(netlist: &Netlist) -> Netlist {
    let mut elements = netlist.elements.clone();
    loop {
        let slid = slide_permutations(&mut elements);
        let peeped = peephole_pass(&mut elements);
        if !slid && !peeped {
            break;
        }
    }
    Netlist {
        name: netlist.name.clone(),
        window_hint: netlist.window_hint,
        elements,
        annotations: netlist.annotations.clone(),
    }
}

// ---------------------------------------------------------------------------
// Gate specifications and verification targets
// ---------------------------------------------------------------------------

/// A gate specification: what to synthesize and what transfer to expect.
#[derive(Clone, Debug)]
pub enum GateSpec {
    Universal { u: CMatrix },
    Xk { d: usize, k: usize },
    Z { d: usize, k: usize },
    Cz { n: usize, d: usize },
    ControlledU { u: CMatrix, d: usize, spacing: i64 },
    PathControlled { u: CMatrix, n: usize, swap: SwapMode },
    Parallelized { u: CMatrix, n: usize, swap: SwapMode },
}

impl GateSpec {
    pub fn synthesize(&self) -> Result<Netlist> {
        match self {
            GateSpec::Universal { u } => universal_oam(u),
            GateSpec::Xk { d, k } => xk_gate(*d, *k),
            GateSpec::Z { d, k } => z_gate(*d, *k),
            GateSpec::Cz { n, d } => cz_gate(*n, *d),
            GateSpec::ControlledU { u, d, spacing } => controlled_u_spaced(u, *d, *spacing),
            GateSpec::PathControlled { u, n, swap } => path_controlled(u, *n, *swap),
            GateSpec::Parallelized { u, n, swap } => parallelize(u, *n, *swap),
        }
    }

    /// The computational-subspace modes, in window enumeration order, on
    /// which the gate is defined.
    pub fn computational_modes(&self) -> Vec<Mode> {
        match self {
            GateSpec::Universal { u } => (0..u.rows() as i64).map(|m| Mode::new(m, 0)).collect(),
            GateSpec::Xk { d, .. } | GateSpec::Z { d, .. } => {
                (0..*d as i64).map(|m| Mode::new(m, 0)).collect()
            }
            GateSpec::Cz { n, d } => {
                let mut modes = Vec::new();
                for p in 0..*n {
                    for m in 0..*d as i64 {
                        modes.push(Mode::new(m, p));
                    }
                }
                modes
            }
            GateSpec::ControlledU { u, d, spacing } => {
                let n = u.rows();
                let mut modes = Vec::new();
                for p in 0..n {
                    for i in 0..*d as i64 {
                        modes.push(Mode::new(i * spacing, p));
                    }
                }
                modes
            }
            GateSpec::PathControlled { u, n, .. } | GateSpec::Parallelized { u, n, .. } => {
                let d = u.rows();
                let spacing = ((*n / d).max(1)) as i64;
                let mut modes = Vec::new();
                for p in 0..*n {
                    for i in 0..d as i64 {
                        modes.push(Mode::new(i * spacing, p));
                    }
                }
                modes
            }
        }
    }

    /// Target transfer on [`GateSpec::computational_modes`].
    pub fn target(&self) -> Result<CMatrix> {
        match self {
            GateSpec::Universal { u } => Ok(u.clone()),
            GateSpec::Xk { d, k } => Ok(cyclic_shift_matrix(*d, *k)),
            GateSpec::Z { d, k } => Ok(crate::numerics::pauli_z_matrix(*d, *k)),
            GateSpec::Cz { n, d } => {
                let z = crate::numerics::pauli_z_matrix(*n, 1);
                controlled_target(&z, *d)
            }
            GateSpec::ControlledU { u, d, .. } => controlled_target(u, *d),
            GateSpec::PathControlled { u, n, .. } => {
                let d = u.rows();
                let size = n * d;
                let mut t = CMatrix::zeros(size, size);
                for q in 0..*n {
                    let uq = matrix_power(u, q as u32)?;
                    for i in 0..d {
                        for j in 0..d {
                            t.set(q * d + j, q * d + i, uq.get(j, i));
                        }
                    }
                }
                Ok(t)
            }
            GateSpec::Parallelized { u, n, .. } => {
                let d = u.rows();
                let size = n * d;
                let mut t = CMatrix::zeros(size, size);
                for p in 0..*n {
                    for i in 0..d {
                        for j in 0..d {
                            t.set(p * d + j, p * d + i, u.get(j, i));
                        }
                    }
                }
                Ok(t)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GateSpec::Universal { u } => format!("universal d={}", u.rows()),
            GateSpec::Xk { d, k } => format!("x^{k} d={d}"),
            GateSpec::Z { d, k } => format!("z^{k} d={d}"),
            GateSpec::Cz { n, d } => format!("cz n={n} d={d}"),
            GateSpec::ControlledU { u, d, spacing } => {
                format!("controlled-u n={} d={d} spacing={spacing}", u.rows())
            }
            GateSpec::PathControlled { u, n, .. } => {
                format!("path-controlled-u n={n} d={}", u.rows())
            }
            GateSpec::Parallelized { u, n, .. } => {
                format!("parallelized d={} n={n}", u.rows())
            }
        }
    }
}

/// Block target `⊕_k u^k` on (path ⊗ OAM-index) modes in window order:
/// column `(q, i)` maps to `Σ_p (u^i)_{pq}` on rows `(p, i)`.
fn controlled_target(u: &CMatrix, d: usize) -> Result<CMatrix> {
    let n = u.rows();
    let size = n * d;
    let mut t = CMatrix::zeros(size, size);
    let mut power = CMatrix::identity(n);
    for i in 0..d {
        for p in 0..n {
            for q in 0..n {
                t.set(p * d + i, q * d + i, power.get(p, q));
            }
        }
        if i + 1 < d {
            power = power.mul(u)?;
        }
    }
    Ok(t)
}

/// Transfer of a netlist restricted to an explicit mode list: column `j` is
/// the image of `modes[j]`, rows are read off at the same list.
pub fn restricted_transfer(netlist: &Netlist, modes: &[Mode]) -> Result<CMatrix> {
    let lo = modes.iter().map(|m| m.oam).min().unwrap_or(0);
    let hi = modes.iter().map(|m| m.oam).max().unwrap_or(0);
    let paths = modes
        .iter()
        .map(|m| m.path + 1)
        .max()
        .unwrap_or(1)
        .max(netlist.window_hint.n_paths);
    let base = ModeWindow {
        oam_lo: lo,
        oam_hi: hi,
        n_paths: paths,
        with_pol: modes.iter().any(|m| m.pol.is_some()),
    };
    let window = required_window(netlist, &base);

    let mut t = CMatrix::zeros(modes.len(), modes.len());
    for (col, mode) in modes.iter().enumerate() {
        let out = crate::elements::apply_netlist(
            netlist,
            &StateVector::basis_state(window, *mode)?,
        )?;
        for (row, target) in modes.iter().enumerate() {
            t.set(row, col, out.amplitude(target));
        }
    }
    Ok(t)
}

/// Phase-aligned distance between a netlist's restricted transfer and the
/// target of a gate specification.
pub fn verify_against(netlist: &Netlist, spec: &GateSpec) -> Result<f64> {
    let modes = spec.computational_modes();
    let actual = restricted_transfer(netlist, &modes)?;
    let target = spec.target()?;
    phase_aligned_distance(&actual, &target)
}
