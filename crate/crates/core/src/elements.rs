//! Optical-element semantics, the netlist IR and the transfer-matrix oracle.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * Beam splitter on paths `(a, b)`: `[[cosθ, i·sinθ·e^{iφ}], [i·sinθ·e^{-iφ}, cosθ]]`,
//!   50:50 at `θ = π/4, φ = 0`. Beam splitters act identically on every OAM
//!   value (the physical device is assumed reflection-compensated).
//! * Dove prism rotated by `α`: `|k⟩ → e^{-i 2 k α} |-k⟩`, for every `α`
//!   including `α = 0`.
//! * Hologram of charge `q`: `|k⟩ → |k + q⟩`.
//! * Mirror: `|k⟩ → |-k⟩` with unit phase.
//! * `IdealSwap` evaluates the swap operator's modulo-form semantics
//!   directly, without an internal element realisation.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::modes::{required_window, Mode, ModeWindow, Pol, StateVector};
use crate::numerics::CMatrix;

/// A single optical element of the netlist IR.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    BeamSplitter {
        path_a: usize,
        path_b: usize,
        theta: f64,
        phi: f64,
    },
    PhaseShifter {
        path: usize,
        phi: f64,
    },
    DovePrism {
        path: usize,
        alpha: f64,
    },
    Hologram {
        path: usize,
        charge: i64,
    },
    Mirror {
        path: usize,
    },
    PathPermutation {
        map: Vec<usize>,
    },
    IdealSwap {
        n_in: usize,
        d_out: usize,
    },
    PolSplitter {
        path_a: usize,
        path_b: usize,
    },
    HalfWavePlate {
        path: usize,
    },
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::BeamSplitter {
                path_a,
                path_b,
                theta,
                phi,
            } => write!(f, "bs({path_a},{path_b}; θ={theta:.4}, φ={phi:.4})"),
            Element::PhaseShifter { path, phi } => write!(f, "phase({path}; {phi:.4})"),
            Element::DovePrism { path, alpha } => write!(f, "dove({path}; α={alpha:.4})"),
            Element::Hologram { path, charge } => write!(f, "holo({path}; {charge:+})"),
            Element::Mirror { path } => write!(f, "mirror({path})"),
            Element::PathPermutation { map } => write!(f, "perm({map:?})"),
            Element::IdealSwap { n_in, d_out } => write!(f, "ideal_swap({n_in}→{d_out})"),
            Element::PolSplitter { path_a, path_b } => write!(f, "pbs({path_a},{path_b})"),
            Element::HalfWavePlate { path } => write!(f, "hwp({path})"),
        }
    }
}

impl Element {
    /// Paths that the element addresses.
    pub fn paths(&self) -> Vec<usize> {
        match self {
            Element::BeamSplitter { path_a, path_b, .. }
            | Element::PolSplitter { path_a, path_b } => vec![*path_a, *path_b],
            Element::PhaseShifter { path, .. }
            | Element::DovePrism { path, .. }
            | Element::Hologram { path, .. }
            | Element::Mirror { path }
            | Element::HalfWavePlate { path } => vec![*path],
            Element::PathPermutation { map } => (0..map.len()).collect(),
            Element::IdealSwap { n_in, d_out } => (0..(*n_in).max(*d_out)).collect(),
        }
    }

    /// Smallest path count a window must have to host this element.
    pub fn min_paths(&self) -> usize {
        self.paths().iter().map(|p| p + 1).max().unwrap_or(1)
    }

    pub fn needs_pol(&self) -> bool {
        matches!(
            self,
            Element::PolSplitter { .. } | Element::HalfWavePlate { .. }
        )
    }

    /// Image of an OAM interval under this element. The image covers every
    /// OAM value reachable from an input in `[lo, hi]` on any path; for
    /// path-mixing elements the input interval is part of the image too.
    pub fn oam_interval_image(&self, lo: i64, hi: i64) -> (i64, i64) {
        match self {
            // Only one path flips, so the image spans both signs.
            Element::DovePrism { .. } | Element::Mirror { .. } => {
                (lo.min(-hi), hi.max(-lo))
            }
            // One path shifts, the others keep their value.
            Element::Hologram { charge, .. } => (lo.min(lo + charge), hi.max(hi + charge)),
            Element::IdealSwap { n_in, d_out } => {
                let n = *n_in as i64;
                let d = *d_out as i64;
                if n > d {
                    let s = n / d;
                    // Valid inputs are multiples of s; indices m with s·m in [lo, hi].
                    let m_lo = lo.div_euclid(s) + if lo.rem_euclid(s) != 0 { 1 } else { 0 };
                    let m_hi = hi.div_euclid(s);
                    if m_lo > m_hi {
                        return (lo, hi);
                    }
                    let a_lo = m_lo.div_euclid(d);
                    let a_hi = m_hi.div_euclid(d);
                    (n * a_lo, n * a_hi + (n - 1))
                } else {
                    let s = d / n;
                    let a_lo = lo.div_euclid(d);
                    let a_hi = hi.div_euclid(d);
                    (d * a_lo, d * a_hi + d - s)
                }
            }
            _ => (lo, hi),
        }
    }

    /// Element inverse (same element kind family).
    pub fn inverse(&self) -> Element {
        match self {
            Element::BeamSplitter {
                path_a,
                path_b,
                theta,
                phi,
            } => Element::BeamSplitter {
                path_a: *path_a,
                path_b: *path_b,
                theta: -theta,
                phi: *phi,
            },
            Element::PhaseShifter { path, phi } => Element::PhaseShifter {
                path: *path,
                phi: -phi,
            },
            Element::DovePrism { .. }
            | Element::Mirror { .. }
            | Element::PolSplitter { .. }
            | Element::HalfWavePlate { .. } => self.clone(),
            Element::Hologram { path, charge } => Element::Hologram {
                path: *path,
                charge: -charge,
            },
            Element::PathPermutation { map } => {
                let mut inv = vec![0; map.len()];
                for (src, &dst) in map.iter().enumerate() {
                    inv[dst] = src;
                }
                Element::PathPermutation { map: inv }
            }
            Element::IdealSwap { n_in, d_out } => Element::IdealSwap {
                n_in: *d_out,
                d_out: *n_in,
            },
        }
    }

    fn validate(&self, n_paths: usize) -> Result<()> {
        if self.min_paths() > n_paths {
            return Err(Error::Regime(format!(
                "element `{self}` addresses paths beyond the window ({n_paths} paths)"
            )));
        }
        match self {
            Element::PathPermutation { map } => {
                let mut seen = vec![false; map.len()];
                for &dst in map {
                    if dst >= map.len() || seen[dst] {
                        return Err(Error::NotBijection(map.clone()));
                    }
                    seen[dst] = true;
                }
                Ok(())
            }
            Element::IdealSwap { n_in, d_out } => {
                for (name, v) in [("n_in", *n_in), ("d_out", *d_out)] {
                    if !v.is_power_of_two() {
                        return Err(Error::NotPowerOfTwo {
                            name,
                            value: v as i64,
                        });
                    }
                }
                Ok(())
            }
            Element::BeamSplitter { path_a, path_b, .. }
            | Element::PolSplitter { path_a, path_b } => {
                if path_a == path_b {
                    return Err(Error::Regime(format!(
                        "element `{self}` uses the same path twice"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// An ordered element sequence with a window hint and free-form annotations:
/// the compiler IR.
#[derive(Clone, Debug, PartialEq)]
pub struct Netlist {
    pub name: String,
    pub window_hint: ModeWindow,
    pub elements: Vec<Element>,
    pub annotations: BTreeMap<String, String>,
}

impl Netlist {
    pub fn from_elements(
        name: impl Into<String>,
        window_hint: ModeWindow,
        elements: Vec<Element>,
    ) -> Self {
        Self {
            name: name.into(),
            window_hint,
            elements,
            annotations: BTreeMap::new(),
        }
    }

    pub fn annotate(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.annotations.insert(key.into(), value.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.elements {
            e.validate(self.window_hint.n_paths)?;
        }
        Ok(())
    }

    /// Concatenate two netlists (this one applied first). The window hint is
    /// widened to cover both.
    pub fn concat(mut self, other: Netlist) -> Netlist {
        self.elements.extend(other.elements);
        self.window_hint = ModeWindow {
            oam_lo: self.window_hint.oam_lo.min(other.window_hint.oam_lo),
            oam_hi: self.window_hint.oam_hi.max(other.window_hint.oam_hi),
            n_paths: self.window_hint.n_paths.max(other.window_hint.n_paths),
            with_pol: self.window_hint.with_pol || other.window_hint.with_pol,
        };
        self
    }

    /// The inverse netlist: elements reversed, each inverted. Adjacent
    /// `Dove·Mirror` runs are re-normalised so the inverse of an arm reads
    /// `Dove(-α)·Mirror` rather than `Mirror·Dove(α)`.
    pub fn reversed_inverse(&self) -> Netlist {
        let mut elements: Vec<Element> =
            self.elements.iter().rev().map(|e| e.inverse()).collect();
        // Mirror·Dove(α) ≡ Dove(-α)·Mirror on the same path.
        let mut i = 0;
        while i + 1 < elements.len() {
            let swap = matches!(
                (&elements[i], &elements[i + 1]),
                (Element::Mirror { path: p }, Element::DovePrism { path: q, .. }) if p == q
            );
            if swap {
                if let (Element::Mirror { path }, Element::DovePrism { alpha, .. }) =
                    (elements[i].clone(), elements[i + 1].clone())
                {
                    elements[i] = Element::DovePrism {
                        path,
                        alpha: -alpha,
                    };
                    elements[i + 1] = Element::Mirror { path };
                }
            }
            i += 1;
        }
        Netlist {
            name: format!("{}_inv", self.name),
            window_hint: self.window_hint,
            elements,
            annotations: self.annotations.clone(),
        }
    }
}

fn escape_err(element: &Element, mode: &Mode, window: &ModeWindow) -> Error {
    Error::ImageEscapesWindow {
        element: element.to_string(),
        mode: mode.to_string(),
        window: window.to_string(),
    }
}

/// Apply one element to a state. Linear and norm-preserving; errors when the
/// image leaves the state's window or a swap sees an invalid input.
pub fn apply_element(element: &Element, psi: &StateVector) -> Result<StateVector> {
    let window = *psi.window();
    let mut out = StateVector::zero(window);
    let i = Complex64::new(0.0, 1.0);

    for (&mode, &amp) in psi.iter() {
        match element {
            Element::BeamSplitter {
                path_a,
                path_b,
                theta,
                phi,
            } => {
                if mode.path == *path_a || mode.path == *path_b {
                    let (c, s) = (theta.cos(), theta.sin());
                    let (stay, cross, other) = if mode.path == *path_a {
                        (
                            Complex64::new(c, 0.0),
                            i * s * Complex64::from_polar(1.0, -phi),
                            *path_b,
                        )
                    } else {
                        (
                            Complex64::new(c, 0.0),
                            i * s * Complex64::from_polar(1.0, *phi),
                            *path_a,
                        )
                    };
                    out.accumulate(mode, amp * stay)?;
                    out.accumulate(Mode { path: other, ..mode }, amp * cross)?;
                } else {
                    out.accumulate(mode, amp)?;
                }
            }
            Element::PhaseShifter { path, phi } => {
                let factor = if mode.path == *path {
                    Complex64::from_polar(1.0, *phi)
                } else {
                    Complex64::new(1.0, 0.0)
                };
                out.accumulate(mode, amp * factor)?;
            }
            Element::DovePrism { path, alpha } => {
                if mode.path == *path {
                    let phase = Complex64::from_polar(1.0, -2.0 * mode.oam as f64 * alpha);
                    let image = Mode {
                        oam: -mode.oam,
                        ..mode
                    };
                    out.accumulate(image, amp * phase)
                        .map_err(|_| escape_err(element, &mode, &window))?;
                } else {
                    out.accumulate(mode, amp)?;
                }
            }
            Element::Hologram { path, charge } => {
                if mode.path == *path {
                    let image = Mode {
                        oam: mode.oam + charge,
                        ..mode
                    };
                    out.accumulate(image, amp)
                        .map_err(|_| escape_err(element, &mode, &window))?;
                } else {
                    out.accumulate(mode, amp)?;
                }
            }
            Element::Mirror { path } => {
                if mode.path == *path {
                    let image = Mode {
                        oam: -mode.oam,
                        ..mode
                    };
                    out.accumulate(image, amp)
                        .map_err(|_| escape_err(element, &mode, &window))?;
                } else {
                    out.accumulate(mode, amp)?;
                }
            }
            Element::PathPermutation { map } => {
                let new_path = map.get(mode.path).copied().unwrap_or(mode.path);
                out.accumulate(
                    Mode {
                        path: new_path,
                        ..mode
                    },
                    amp,
                )?;
            }
            Element::IdealSwap { n_in, d_out } => {
                let n = *n_in as i64;
                let d = *d_out as i64;
                if mode.path >= *n_in {
                    return Err(Error::SwapInvalidInput(format!(
                        "mode {mode} enters a swap with {n_in} input paths"
                    )));
                }
                let p = mode.path as i64;
                let (oam, path) = if n > d {
                    let s = n / d;
                    if mode.oam.rem_euclid(s) != 0 {
                        return Err(Error::SwapInvalidInput(format!(
                            "mode {mode}: swap with n={n_in} > d={d_out} accepts OAM multiples of {s} only"
                        )));
                    }
                    let m = mode.oam.div_euclid(s);
                    (n * m.div_euclid(d) + p, m.rem_euclid(d))
                } else {
                    let s = d / n;
                    let m = mode.oam;
                    (s * (n * m.div_euclid(d) + p), m.rem_euclid(d))
                };
                let image = Mode {
                    oam,
                    path: path as usize,
                    ..mode
                };
                out.accumulate(image, amp)
                    .map_err(|_| escape_err(element, &mode, &window))?;
            }
            Element::PolSplitter { path_a, path_b } => {
                if !window.with_pol {
                    return Err(Error::PolarizationRequired("pbs"));
                }
                if mode.path == *path_a || mode.path == *path_b {
                    match mode.pol {
                        Some(Pol::H) => out.accumulate(mode, amp)?,
                        Some(Pol::V) => {
                            let other = if mode.path == *path_a {
                                *path_b
                            } else {
                                *path_a
                            };
                            out.accumulate(Mode { path: other, ..mode }, amp)?;
                        }
                        None => unreachable!("pol window holds pol-labelled modes"),
                    }
                } else {
                    out.accumulate(mode, amp)?;
                }
            }
            Element::HalfWavePlate { path } => {
                if !window.with_pol {
                    return Err(Error::PolarizationRequired("hwp"));
                }
                if mode.path == *path {
                    let flipped = match mode.pol {
                        Some(Pol::H) => Some(Pol::V),
                        Some(Pol::V) => Some(Pol::H),
                        None => unreachable!("pol window holds pol-labelled modes"),
                    };
                    out.accumulate(Mode { pol: flipped, ..mode }, amp)?;
                } else {
                    out.accumulate(mode, amp)?;
                }
            }
        }
    }
    Ok(out)
}

/// Sequential application of a netlist, element order left to right.
pub fn apply_netlist(netlist: &Netlist, psi: &StateVector) -> Result<StateVector> {
    let mut state = psi.clone();
    for element in &netlist.elements {
        state = apply_element(element, &state)?;
    }
    Ok(state)
}

/// Transfer matrix of a netlist on an enumerated window: column `j` is the
/// image of the `j`-th basis mode.
///
/// Each column is simulated inside the enlarged window from
/// [`required_window`], so intermediate stages never truncate, and the final
/// state is projected back onto `window`. A column whose final amplitude
/// leaks out of the window (projected norm below `1 - 1e-9`) is an error
/// naming the offending input mode; on the subspace the netlist maps into
/// the window, the matrix is exact and unitary.
pub fn transfer_matrix(netlist: &Netlist, window: &ModeWindow) -> Result<CMatrix> {
    let sim = required_window(netlist, window);
    let size = window.size();
    let mut matrix = CMatrix::zeros(size, size);
    for j in 0..size {
        let input = window.mode_at(j);
        let out = apply_netlist(netlist, &StateVector::basis_state(sim, input)?)?;
        let mut captured = 0.0f64;
        for (mode, amp) in out.iter() {
            if let Some(i) = window.index_of(mode) {
                matrix.set(i, j, *amp);
                captured += amp.norm_sqr();
            }
        }
        if captured.sqrt() < 1.0 - 1e-9 {
            return Err(Error::Leakage {
                mode: input.to_string(),
                norm: captured.sqrt(),
            });
        }
    }
    Ok(matrix)
}

// ---------------------------------------------------------------------------
// Canonical JSON (schema version "1")
// ---------------------------------------------------------------------------

const SCHEMA_VERSION: &str = "1";

fn element_to_value(e: &Element) -> Value {
    match e {
        Element::BeamSplitter {
            path_a,
            path_b,
            theta,
            phi,
        } => json!({"type": "bs", "paths": [path_a, path_b], "theta": theta, "phi": phi}),
        Element::PhaseShifter { path, phi } => json!({"type": "phase", "path": path, "phi": phi}),
        Element::DovePrism { path, alpha } => json!({"type": "dove", "path": path, "alpha": alpha}),
        Element::Hologram { path, charge } => {
            json!({"type": "holo", "path": path, "charge": charge})
        }
        Element::Mirror { path } => json!({"type": "mirror", "path": path}),
        Element::PathPermutation { map } => json!({"type": "perm", "map": map}),
        Element::IdealSwap { n_in, d_out } => json!({"type": "ideal_swap", "n": n_in, "d": d_out}),
        Element::PolSplitter { path_a, path_b } => json!({"type": "pbs", "paths": [path_a, path_b]}),
        Element::HalfWavePlate { path } => json!({"type": "hwp", "path": path}),
    }
}

/// Canonical JSON document for a netlist: sorted keys, shortest round-trip
/// float encoding, schema version "1".
pub fn to_json(netlist: &Netlist) -> String {
    let annotations: Map<String, Value> = netlist
        .annotations
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let doc = json!({
        "version": SCHEMA_VERSION,
        "name": netlist.name,
        "window": {
            "oam_lo": netlist.window_hint.oam_lo,
            "oam_hi": netlist.window_hint.oam_hi,
            "n_paths": netlist.window_hint.n_paths,
            "pol": netlist.window_hint.with_pol,
        },
        "annotations": annotations,
        "elements": netlist.elements.iter().map(element_to_value).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

/// Serialize to bytes (canonical JSON text).
pub fn serialize(netlist: &Netlist) -> Vec<u8> {
    to_json(netlist).into_bytes()
}

struct Ctx<'a> {
    at: &'a str,
}

impl<'a> Ctx<'a> {
    fn field<'v>(&self, obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value> {
        obj.get(key)
            .ok_or_else(|| Error::schema(format!("{}.{key}", self.at), "missing field"))
    }

    fn usize(&self, obj: &Map<String, Value>, key: &str) -> Result<usize> {
        self.field(obj, key)?
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| Error::schema(format!("{}.{key}", self.at), "expected unsigned integer"))
    }

    fn i64(&self, obj: &Map<String, Value>, key: &str) -> Result<i64> {
        self.field(obj, key)?
            .as_i64()
            .ok_or_else(|| Error::schema(format!("{}.{key}", self.at), "expected integer"))
    }

    fn f64(&self, obj: &Map<String, Value>, key: &str) -> Result<f64> {
        self.field(obj, key)?
            .as_f64()
            .ok_or_else(|| Error::schema(format!("{}.{key}", self.at), "expected number"))
    }

    fn path_pair(&self, obj: &Map<String, Value>) -> Result<(usize, usize)> {
        let arr = self
            .field(obj, "paths")?
            .as_array()
            .ok_or_else(|| Error::schema(format!("{}.paths", self.at), "expected array"))?;
        if arr.len() != 2 {
            return Err(Error::schema(
                format!("{}.paths", self.at),
                "expected exactly two paths",
            ));
        }
        let a = arr[0].as_u64().ok_or_else(|| {
            Error::schema(format!("{}.paths[0]", self.at), "expected unsigned integer")
        })?;
        let b = arr[1].as_u64().ok_or_else(|| {
            Error::schema(format!("{}.paths[1]", self.at), "expected unsigned integer")
        })?;
        Ok((a as usize, b as usize))
    }
}

fn element_from_value(v: &Value, at: &str) -> Result<Element> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema(at, "expected object"))?;
    let ctx = Ctx { at };
    let tag = ctx
        .field(obj, "type")?
        .as_str()
        .ok_or_else(|| Error::schema(format!("{at}.type"), "expected string"))?;
    let element = match tag {
        "bs" => {
            let (path_a, path_b) = ctx.path_pair(obj)?;
            Element::BeamSplitter {
                path_a,
                path_b,
                theta: ctx.f64(obj, "theta")?,
                phi: ctx.f64(obj, "phi")?,
            }
        }
        "phase" => Element::PhaseShifter {
            path: ctx.usize(obj, "path")?,
            phi: ctx.f64(obj, "phi")?,
        },
        "dove" => Element::DovePrism {
            path: ctx.usize(obj, "path")?,
            alpha: ctx.f64(obj, "alpha")?,
        },
        "holo" => Element::Hologram {
            path: ctx.usize(obj, "path")?,
            charge: ctx.i64(obj, "charge")?,
        },
        "mirror" => Element::Mirror {
            path: ctx.usize(obj, "path")?,
        },
        "perm" => {
            let arr = ctx
                .field(obj, "map")?
                .as_array()
                .ok_or_else(|| Error::schema(format!("{at}.map"), "expected array"))?;
            let map = arr
                .iter()
                .map(|x| {
                    x.as_u64().map(|v| v as usize).ok_or_else(|| {
                        Error::schema(format!("{at}.map"), "expected unsigned integers")
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            Element::PathPermutation { map }
        }
        "ideal_swap" => Element::IdealSwap {
            n_in: ctx.usize(obj, "n")?,
            d_out: ctx.usize(obj, "d")?,
        },
        "pbs" => {
            let (path_a, path_b) = ctx.path_pair(obj)?;
            Element::PolSplitter { path_a, path_b }
        }
        "hwp" => Element::HalfWavePlate {
            path: ctx.usize(obj, "path")?,
        },
        other => {
            return Err(Error::schema(
                format!("{at}.type"),
                format!("unknown element tag `{other}`"),
            ))
        }
    };
    Ok(element)
}

/// Parse a netlist document; validates the schema and the IR invariants.
pub fn from_json(text: &str) -> Result<Netlist> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::schema("$", "expected object"))?;
    let ctx = Ctx { at: "$" };
    let version = ctx
        .field(obj, "version")?
        .as_str()
        .ok_or_else(|| Error::schema("$.version", "expected string"))?;
    if version != SCHEMA_VERSION {
        return Err(Error::schema(
            "$.version",
            format!("unsupported version `{version}`"),
        ));
    }
    let name = ctx
        .field(obj, "name")?
        .as_str()
        .ok_or_else(|| Error::schema("$.name", "expected string"))?
        .to_string();
    let wobj = ctx
        .field(obj, "window")?
        .as_object()
        .ok_or_else(|| Error::schema("$.window", "expected object"))?;
    let wctx = Ctx { at: "$.window" };
    let window_hint = ModeWindow {
        oam_lo: wctx.i64(wobj, "oam_lo")?,
        oam_hi: wctx.i64(wobj, "oam_hi")?,
        n_paths: wctx.usize(wobj, "n_paths")?,
        with_pol: wctx
            .field(wobj, "pol")?
            .as_bool()
            .ok_or_else(|| Error::schema("$.window.pol", "expected boolean"))?,
    };
    if window_hint.oam_lo > window_hint.oam_hi || window_hint.n_paths == 0 {
        return Err(Error::schema("$.window", "empty window"));
    }
    let mut annotations = BTreeMap::new();
    if let Some(v) = obj.get("annotations") {
        let aobj = v
            .as_object()
            .ok_or_else(|| Error::schema("$.annotations", "expected object"))?;
        for (k, v) in aobj {
            let s = v.as_str().ok_or_else(|| {
                Error::schema(format!("$.annotations.{k}"), "expected string")
            })?;
            annotations.insert(k.clone(), s.to_string());
        }
    }
    let elems = ctx
        .field(obj, "elements")?
        .as_array()
        .ok_or_else(|| Error::schema("$.elements", "expected array"))?;
    let elements = elems
        .iter()
        .enumerate()
        .map(|(i, v)| element_from_value(v, &format!("$.elements[{i}]")))
        .collect::<Result<Vec<Element>>>()?;

    let netlist = Netlist {
        name,
        window_hint,
        elements,
        annotations,
    };
    netlist.validate()?;
    Ok(netlist)
}

/// Parse from bytes.
pub fn deserialize(bytes: &[u8]) -> Result<Netlist> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::schema("$", format!("invalid utf-8: {e}")))?;
    from_json(text)
}
