use serde::Serialize;

use super::limits::fiber_product;
use super::object::FinMorphism;

/// A commuting square
///
/// ```text
///   Z′ ──top──▶ X′
///   │           │
///  left       right
///   ▼           ▼
///   Z ──bottom─▶ X
/// ```
///
/// with `bottom` injective, `Z′ = Z ×_X X′` and `X′ ∖ Z′ → X ∖ Z` bijective.
#[derive(Clone, Debug)]
pub struct BlowupSquare {
    pub top: FinMorphism,
    pub left: FinMorphism,
    pub bottom: FinMorphism,
    pub right: FinMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupCheck {
    pub valid: bool,
    pub reason: Option<String>,
}

impl BlowupCheck {
    fn fail(reason: impl Into<String>) -> Self {
        BlowupCheck { valid: false, reason: Some(reason.into()) }
    }
}

pub fn validate_blowup_square(sq: &BlowupSquare) -> BlowupCheck {
    let BlowupSquare { top, left, bottom, right } = sq;
    if top.source() != left.source() || top.target() != right.source() || left.target() != bottom.source() || bottom.target() != right.target() {
        return BlowupCheck::fail("maps do not form a square");
    }
    if (0..top.source().size()).any(|z| right.apply(top.apply(z)) != bottom.apply(left.apply(z))) {
        return BlowupCheck::fail("square does not commute");
    }
    if !bottom.is_injective() {
        return BlowupCheck::fail("closed embedding violated");
    }
    let pb = match fiber_product(bottom, right) {
        Ok(pb) => pb,
        Err(e) => return BlowupCheck::fail(e.to_string()),
    };
    // The comparison Z′ → Z ×_X X′ must be a bijection.
    let mut hit = vec![false; pb.pairs.len()];
    for zp in 0..top.source().size() {
        match pb.index_of(left.apply(zp), top.apply(zp)) {
            Some(k) if !hit[k] => hit[k] = true,
            _ => return BlowupCheck::fail("Z′ is not the fiber product Z ×_X X′"),
        }
    }
    if hit.iter().any(|h| !h) {
        return BlowupCheck::fail("Z′ is not the fiber product Z ×_X X′");
    }
    let in_z: Vec<bool> = {
        let mut v = vec![false; bottom.target().size()];
        for &x in bottom.values() {
            v[x] = true;
        }
        v
    };
    let in_zp: Vec<bool> = {
        let mut v = vec![false; right.source().size()];
        for &x in top.values() {
            v[x] = true;
        }
        v
    };
    let mut covered = vec![false; right.target().size()];
    for xp in (0..right.source().size()).filter(|&xp| !in_zp[xp]) {
        let x = right.apply(xp);
        if in_z[x] || covered[x] {
            return BlowupCheck::fail("complement map X′∖Z′ → X∖Z is not a bijection");
        }
        covered[x] = true;
    }
    if (0..covered.len()).any(|x| !in_z[x] && !covered[x]) {
        return BlowupCheck::fail("complement map X′∖Z′ → X∖Z is not a bijection");
    }
    BlowupCheck { valid: true, reason: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::object::FinObject;

    fn map(src: usize, tgt: usize, values: &[usize]) -> FinMorphism {
        FinMorphism::new(FinObject::plain(src), FinObject::plain(tgt), values.to_vec()).unwrap()
    }

    pub(crate) fn example_square() -> BlowupSquare {
        // X = {1,2}, Z = {1}, X′ = {1′,2′}, Z′ = {1′}.
        BlowupSquare { top: map(1, 2, &[0]), left: map(1, 1, &[0]), bottom: map(1, 2, &[0]), right: map(2, 2, &[0, 1]) }
    }

    #[test]
    fn valid_example() {
        assert!(validate_blowup_square(&example_square()).valid);
    }

    #[test]
    fn nil_thickening() {
        let sq = BlowupSquare { top: map(0, 0, &[]), left: map(0, 2, &[]), bottom: map(2, 2, &[0, 1]), right: map(0, 2, &[]) };
        assert!(validate_blowup_square(&sq).valid);
    }

    #[test]
    fn non_injective_embedding() {
        let sq = BlowupSquare { top: map(0, 0, &[]), left: map(0, 2, &[]), bottom: map(2, 1, &[0, 0]), right: map(0, 1, &[]) };
        let check = validate_blowup_square(&sq);
        assert!(!check.valid);
        assert_eq!(check.reason.as_deref(), Some("closed embedding violated"));
    }

    #[test]
    fn complement_not_bijective() {
        // X′ = {a, b} both over the point 2 outside Z.
        let sq = BlowupSquare { top: map(1, 3, &[0]), left: map(1, 1, &[0]), bottom: map(1, 2, &[0]), right: map(3, 2, &[0, 1, 1]) };
        let check = validate_blowup_square(&sq);
        assert!(!check.valid);
        assert!(check.reason.unwrap().contains("complement"));
    }
}
