//! The OAM ⊗ path basis, finite simulation windows and sparse photon states.
//!
//! The OAM ladder is infinite, so simulation runs inside an explicit
//! [`ModeWindow`]. Holograms shift OAM and mirrors/Dove prisms negate it;
//! [`required_window`] propagates an interval bound through a netlist so the
//! truncation is auditable instead of implicit.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

use crate::elements::Netlist;
use crate::error::{Error, Result};

/// Photon polarization label. Carried by the basis but inert for every
/// element except the polarization splitters and wave plates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pol {
    H,
    V,
}

/// A single basis label: OAM quanta, propagation path, optional polarization.
///
/// The derived ordering is lexicographic in `(path, oam, pol)` and matches
/// the enumeration order of [`ModeWindow`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub path: usize,
    pub oam: i64,
    pub pol: Option<Pol>,
}

impl Mode {
    pub fn new(oam: i64, path: usize) -> Self {
        Self {
            path,
            oam,
            pol: None,
        }
    }

    pub fn with_pol(oam: i64, path: usize, pol: Pol) -> Self {
        Self {
            path,
            oam,
            pol: Some(pol),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pol {
            Some(Pol::H) => write!(f, "|{}, path {}, H⟩", self.oam, self.path),
            Some(Pol::V) => write!(f, "|{}, path {}, V⟩", self.oam, self.path),
            None => write!(f, "|{}, path {}⟩", self.oam, self.path),
        }
    }
}

/// Finite enumeration window: an inclusive OAM interval, a path count and an
/// optional polarization doubling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeWindow {
    pub oam_lo: i64,
    pub oam_hi: i64,
    pub n_paths: usize,
    pub with_pol: bool,
}

impl fmt::Display for ModeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[oam {}..={}, {} paths{}]",
            self.oam_lo,
            self.oam_hi,
            self.n_paths,
            if self.with_pol { ", pol" } else { "" }
        )
    }
}

impl ModeWindow {
    pub fn new(oam_lo: i64, oam_hi: i64, n_paths: usize) -> Self {
        assert!(oam_lo <= oam_hi && n_paths >= 1);
        Self {
            oam_lo,
            oam_hi,
            n_paths,
            with_pol: false,
        }
    }

    pub fn with_pol(mut self) -> Self {
        self.with_pol = true;
        self
    }

    fn n_oam(&self) -> usize {
        (self.oam_hi - self.oam_lo + 1) as usize
    }

    fn n_pol(&self) -> usize {
        if self.with_pol {
            2
        } else {
            1
        }
    }

    /// Number of enumerated basis modes.
    pub fn size(&self) -> usize {
        self.n_paths * self.n_oam() * self.n_pol()
    }

    pub fn contains(&self, mode: &Mode) -> bool {
        mode.path < self.n_paths
            && mode.oam >= self.oam_lo
            && mode.oam <= self.oam_hi
            && mode.pol.is_some() == self.with_pol
    }

    /// Enumeration index of a mode, lexicographic in `(path, oam, pol)`.
    pub fn index_of(&self, mode: &Mode) -> Option<usize> {
        if !self.contains(mode) {
            return None;
        }
        let oam_idx = (mode.oam - self.oam_lo) as usize;
        let pol_idx = match mode.pol {
            None | Some(Pol::H) => 0,
            Some(Pol::V) => 1,
        };
        Some((mode.path * self.n_oam() + oam_idx) * self.n_pol() + pol_idx)
    }

    /// Inverse of [`ModeWindow::index_of`].
    pub fn mode_at(&self, index: usize) -> Mode {
        assert!(index < self.size());
        let pol_idx = index % self.n_pol();
        let rest = index / self.n_pol();
        let oam_idx = rest % self.n_oam();
        let path = rest / self.n_oam();
        Mode {
            path,
            oam: self.oam_lo + oam_idx as i64,
            pol: if self.with_pol {
                Some(if pol_idx == 0 { Pol::H } else { Pol::V })
            } else {
                None
            },
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.size()).map(|i| self.mode_at(i))
    }
}

/// Sparse photon state over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    window: ModeWindow,
    amps: BTreeMap<Mode, Complex64>,
}

impl StateVector {
    /// Empty (zero) state, for accumulation.
    pub fn zero(window: ModeWindow) -> Self {
        Self {
            window,
            amps: BTreeMap::new(),
        }
    }

    /// Unit amplitude on a single mode.
    pub fn basis_state(window: ModeWindow, mode: Mode) -> Result<Self> {
        if !window.contains(&mode) {
            return Err(Error::ModeOutsideWindow {
                mode: mode.to_string(),
                window: window.to_string(),
            });
        }
        let mut amps = BTreeMap::new();
        amps.insert(mode, Complex64::new(1.0, 0.0));
        Ok(Self { window, amps })
    }

    pub fn window(&self) -> &ModeWindow {
        &self.window
    }

    pub fn amplitude(&self, mode: &Mode) -> Complex64 {
        self.amps
            .get(mode)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Add an amplitude, dropping entries that cancel below noise level.
    pub fn accumulate(&mut self, mode: Mode, amp: Complex64) -> Result<()> {
        if !self.window.contains(&mode) {
            return Err(Error::ModeOutsideWindow {
                mode: mode.to_string(),
                window: self.window.to_string(),
            });
        }
        let entry = self.amps.entry(mode).or_insert(Complex64::new(0.0, 0.0));
        *entry += amp;
        if entry.norm() <= 1e-15 {
            self.amps.remove(&mode);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Complex64)> {
        self.amps.iter()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .values()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for v in self.amps.values_mut() {
            *v *= factor;
        }
    }
}

/// `⟨a|b⟩` over the sparse supports. Errors when the windows differ.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.window != b.window {
        return Err(Error::WindowMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (mode, amp_a) in a.iter() {
        if let Some(amp_b) = b.amps.get(mode) {
            acc += amp_a.conj() * amp_b;
        }
    }
    Ok(acc)
}

/// Interval-analysis bound on the window a netlist needs.
///
/// The OAM interval is propagated element by element (holograms shift it,
/// mirrors and Dove prisms negate it, swaps map it to the aligned hull) and
/// the union over all intermediate stages is returned, so no amplitude can
/// escape mid-netlist. Path count and polarization flags are widened to
/// whatever the elements address.
pub fn required_window(netlist: &Netlist, input: &ModeWindow) -> ModeWindow {
    let mut lo = input.oam_lo;
    let mut hi = input.oam_hi;
    let mut cur = (input.oam_lo, input.oam_hi);
    let mut n_paths = input.n_paths;
    let mut with_pol = input.with_pol;

    for element in &netlist.elements {
        cur = element.oam_interval_image(cur.0, cur.1);
        lo = lo.min(cur.0);
        hi = hi.max(cur.1);
        n_paths = n_paths.max(element.min_paths());
        with_pol |= element.needs_pol();
    }

    ModeWindow {
        oam_lo: lo,
        oam_hi: hi,
        n_paths,
        with_pol,
    }
}
