//! Orbits, residue degrees and the two cover predicates.
//!
//! A point of a G-set is an orbit, its residue field is modeled by the
//! stabilizer of a base point, and the residue degree of `x′` over `y` is the
//! index `[Stab(y) : Stab(x′)]`. That index equals the number of points of the
//! orbit of `x′` lying over `y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::object::{FinMorphism, FinObject};

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Which cover notion a hypercover is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverMode {
    /// Some point above every point with residue degree 1.
    Cdh,
    /// Some point above every point with residue degree prime to `l`.
    Ldh(u64),
}

impl CoverMode {
    pub fn ldh(l: u64) -> Result<Self> {
        if is_prime(l) {
            Ok(CoverMode::Ldh(l))
        } else {
            Err(Error::InvalidInput(format!("ldh mode needs a prime, got {l}")))
        }
    }

    pub fn accepts_degree(&self, degree: usize) -> bool {
        match *self {
            CoverMode::Cdh => degree == 1,
            CoverMode::Ldh(l) => degree > 0 && !(degree as u64).is_multiple_of(l),
        }
    }
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverMode::Cdh => write!(f, "cdh"),
            CoverMode::Ldh(l) => write!(f, "ldh:{l}"),
        }
    }
}

impl FromStr for CoverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "cdh" => Ok(CoverMode::Cdh),
            Some(("ldh", l)) => {
                let l = l.parse().map_err(|_| Error::InvalidInput(format!("bad prime in mode {s:?}")))?;
                CoverMode::ldh(l)
            }
            _ => Err(Error::InvalidInput(format!("unknown cover mode {s:?}; expected cdh or ldh:<l>"))),
        }
    }
}

impl Serialize for CoverMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoverMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One orbit with the stabilizer of its least point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub points: Vec<usize>,
    pub stabilizer: Vec<usize>,
}

impl Orbit {
    pub fn base_point(&self) -> usize {
        self.points[0]
    }
}

/// Orbits ordered by least point. Plain sets have singleton orbits.
pub fn orbit_data(x: &FinObject) -> Vec<Orbit> {
    let order = x.group_order();
    let mut seen = vec![false; x.size()];
    let mut out = Vec::new();
    for p in 0..x.size() {
        if seen[p] {
            continue;
        }
        let mut points: Vec<usize> = (0..order).map(|g| x.act(g, p)).collect();
        points.sort_unstable();
        points.dedup();
        for &q in &points {
            seen[q] = true;
        }
        let stabilizer = (0..order).filter(|&g| x.act(g, p) == p).collect();
        out.push(Orbit { points, stabilizer });
    }
    out
}

/// `orbit_of[x]` is the position of the orbit containing `x` in [`orbit_data`].
pub fn orbit_index(x: &FinObject, orbits: &[Orbit]) -> Vec<usize> {
    let mut idx = vec![0; x.size()];
    for (k, o) in orbits.iter().enumerate() {
        for &p in &o.points {
            idx[p] = k;
        }
    }
    idx
}

/// Cover status of one target orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverEntry {
    pub target_orbit: usize,
    pub base_point: usize,
    /// `(source orbit, residue degree)` of the first acceptable orbit above.
    pub witness: Option<(usize, usize)>,
    /// Residue degrees of every source orbit above, in orbit order.
    pub degrees: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub mode: CoverMode,
    pub is_cover: bool,
    pub entries: Vec<CoverEntry>,
}

impl CoverReport {
    pub fn first_failure(&self) -> Option<&CoverEntry> {
        self.entries.iter().find(|e| e.witness.is_none())
    }
}

pub fn is_cover(f: &FinMorphism, mode: CoverMode) -> CoverReport {
    let src_orbits = orbit_data(f.source());
    let tgt_orbits = orbit_data(f.target());
    let mut entries = Vec::with_capacity(tgt_orbits.len());
    let fibers = f.fibers();
    let src_idx = orbit_index(f.source(), &src_orbits);
    for (k, o) in tgt_orbits.iter().enumerate() {
        let y = o.base_point();
        let mut counts: Vec<(usize, usize)> = Vec::new();
        for &x in &fibers[y] {
            let orb = src_idx[x];
            match counts.iter_mut().find(|(c, _)| *c == orb) {
                Some(entry) => entry.1 += 1,
                None => counts.push((orb, 1)),
            }
        }
        counts.sort_unstable();
        let witness = counts.iter().copied().find(|&(_, d)| mode.accepts_degree(d));
        entries.push(CoverEntry { target_orbit: k, base_point: y, witness, degrees: counts });
    }
    let is_cover = entries.iter().all(|e| e.witness.is_some());
    CoverReport { mode, is_cover, entries }
}

/// `Some(d)` if every fiber of `f` has exactly `d ≥ 1` points.
pub fn finite_free_degree(f: &FinMorphism) -> Option<usize> {
    let fibers = f.fibers();
    let d = fibers.first()?.len();
    (d > 0 && fibers.iter().all(|fib| fib.len() == d)).then_some(d)
}
