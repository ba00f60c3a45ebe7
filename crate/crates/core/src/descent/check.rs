//! Descent verdicts, the descent spectral sequence and the coskeletal tower.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::CoverMode;
use crate::homalg::{field_dimensions, is_quasi_iso, spectral_sequence, HomologyRow, QuasiIsoReport, RingSpec, SpectralSequence, Verdict};
use crate::simplicial::{is_hypercover, tower, AugmentedSimplicialObject};

use super::apply::{apply_functor, functor_on_morphism, Applied};
use super::functor::HomologyFunctor;

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub functor: String,
    pub ring: RingSpec,
    pub mode: CoverMode,
    pub truncation: usize,
    /// Highest degree compared: `N − 1`.
    pub window: usize,
    pub hypercover: bool,
    /// `-1` for `X_0 → base`, `n` for `X_{n+1} → (cosk_n)_{n+1}`.
    pub first_cover_failure: Option<isize>,
    /// For `ldh:l`, whether `l` is the only prime left uninverted (or the ring is a field of
    /// characteristic other than `l`). Always true for `cdh`.
    pub ring_compatible: bool,
    pub theorem_applies: bool,
    /// `H_k(Tot F(X_•))` against `H_k(F(base))`, with the cone.
    pub table: Vec<HomologyRow>,
    pub verdict: Verdict,
}

impl DescentReport {
    /// The hypotheses hold but descent fails.
    pub fn contradicts_theorem(&self) -> bool {
        self.theorem_applies && !self.verdict.is_quasi_iso()
    }
}

pub fn ring_compatible(mode: CoverMode, ring: RingSpec) -> bool {
    match (mode, ring) {
        (CoverMode::Cdh, _) => true,
        (CoverMode::Ldh(l), RingSpec::Localized(m)) => l == m,
        (CoverMode::Ldh(l), RingSpec::Rationals) => l != 0,
        (CoverMode::Ldh(l), RingSpec::PrimeField(p)) => p != l,
        (CoverMode::Ldh(_), RingSpec::Integers) => false,
    }
}

/// Runs even when `X` is not a hypercover; the report says so.
pub fn descent_check(f: &dyn HomologyFunctor, x: &AugmentedSimplicialObject, mode: CoverMode, n: usize) -> Result<DescentReport> {
    let (report, _) = descent_check_applied(f, x, mode, n)?;
    Ok(report)
}

pub(crate) fn descent_check_applied(
    f: &dyn HomologyFunctor,
    x: &AugmentedSimplicialObject,
    mode: CoverMode,
    n: usize,
) -> Result<(DescentReport, Applied)> {
    let window = n.checked_sub(1).ok_or(Error::OutsideWindow { degree: 0, window: None })?;
    let cover = is_hypercover(x, mode, n)?;
    let applied = apply_functor(f, x, n)?;
    let QuasiIsoReport { table, verdict, .. } = is_quasi_iso(&applied.augmentation, window, f.ring())?;
    let ring_ok = ring_compatible(mode, f.ring());
    let report = DescentReport {
        functor: f.name(),
        ring: f.ring(),
        mode,
        truncation: n,
        window,
        hypercover: cover.is_hypercover,
        first_cover_failure: cover.first_failure(),
        ring_compatible: ring_ok,
        theorem_applies: cover.is_hypercover && ring_ok,
        table,
        verdict,
    };
    Ok((report, applied))
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentSpectralReport {
    pub functor: String,
    pub truncation: usize,
    pub spectral_sequence: SpectralSequence,
    /// `E^1_{p,q} = dim H_q(F(X_p))` for every column.
    pub e1_matches_columns: bool,
    pub descends: bool,
    /// `dim H_n(F(base))` for `n ≤ N − 1`, compared only when the augmentation is a
    /// quasi-isomorphism over the field.
    pub base_dimensions: Vec<usize>,
    pub matches_base: Option<bool>,
}

/// Uses the full truncation of `X`.
pub fn descent_spectral_sequence(
    f: &dyn HomologyFunctor,
    x: &AugmentedSimplicialObject,
    field: RingSpec,
    r_max: usize,
) -> Result<DescentSpectralReport> {
    if !field.is_field() {
        return Err(Error::Unsupported(format!("spectral sequence over {field}, which is not a field")));
    }
    let n = x.truncation();
    let window = n.checked_sub(1).ok_or(Error::OutsideWindow { degree: 0, window: None })?;
    let applied = apply_functor(f, x, n)?;
    let ss = spectral_sequence(&applied.double, field, r_max)?;
    let e1 = &ss.pages[1];
    let mut e1_matches_columns = true;
    for p in 0..applied.double.columns() {
        let column = applied.double.column(p);
        let dims = field_dimensions(&column, field, column.top())?;
        for (q, &d) in dims.iter().enumerate() {
            e1_matches_columns &= e1.dim(p, q) == d;
        }
    }
    let descends = is_quasi_iso(&applied.augmentation, window, field)?.verdict.is_quasi_iso();
    let base_dimensions = field_dimensions(&applied.base, field, window)?;
    let matches_base = descends.then(|| {
        (0..=window).all(|k| {
            let total: usize = ss.e_infinity.entries.iter().filter(|e| e[0] + e[1] == k).map(|e| e[2]).sum();
            total == base_dimensions[k]
        })
    });
    Ok(DescentSpectralReport { functor: f.name(), truncation: n, spectral_sequence: ss, e1_matches_columns, descends, base_dimensions, matches_base })
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerStageReport {
    pub n: usize,
    pub level_sizes: Vec<usize>,
    /// `F(v_n)` is a quasi-isomorphism through `N − 1`.
    pub quasi_iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub functor: String,
    pub truncation: usize,
    pub unit_quasi_iso: bool,
    /// Stages `n = N, …, 0`.
    pub stages: Vec<TowerStageReport>,
    /// `ε_base ∘ F(v_0) ∘ ⋯ ∘ F(v_N) ∘ F(u_N) = ε` as chain maps.
    pub composite_is_augmentation: bool,
    pub descends: bool,
    /// The composite identity holds, and the stage verdicts imply the descent verdict.
    pub consistent: bool,
}

/// Compares the factorisation `X → X^N → ⋯ → X^0 → base` with the direct verdict.
pub fn tower_consistency(f: &dyn HomologyFunctor, x: &AugmentedSimplicialObject, n: usize) -> Result<TowerReport> {
    let window = n.checked_sub(1).ok_or(Error::OutsideWindow { degree: 0, window: None })?;
    let ring = f.ring();
    let direct = apply_functor(f, x, n)?;
    let descends = is_quasi_iso(&direct.augmentation, window, ring)?.verdict.is_quasi_iso();
    let t = tower(x, n)?;
    let top_stage = apply_functor(f, &t.stages[0].coskeleton.object, n)?;
    let unit = functor_on_morphism(f, &t.unit, &direct, &top_stage)?;
    let unit_quasi_iso = is_quasi_iso(&unit, window, ring)?.verdict.is_quasi_iso();
    let mut composite = unit;
    let mut current = top_stage;
    let mut stages = Vec::with_capacity(t.stages.len());
    for stage in &t.stages {
        let next = apply_functor(f, &stage.v.target, n)?;
        let map = functor_on_morphism(f, &stage.v, &current, &next)?;
        let quasi_iso = is_quasi_iso(&map, window, ring)?.verdict.is_quasi_iso();
        stages.push(TowerStageReport { n: stage.n, level_sizes: stage.coskeleton.object.body().level_sizes(), quasi_iso });
        composite = map.after(&composite)?;
        current = next;
    }
    let composite = current.augmentation.after(&composite)?;
    let composite_is_augmentation = composite == direct.augmentation;
    let all = unit_quasi_iso && stages.iter().all(|s| s.quasi_iso);
    let consistent = composite_is_augmentation && (!all || descends);
    Ok(TowerReport { functor: f.name(), truncation: n, unit_quasi_iso, stages, composite_is_augmentation, descends, consistent })
}
