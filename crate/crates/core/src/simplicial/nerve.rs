//! Čech nerves: level `n` is the `(n+1)`-fold fiber power of `f : X → Y`.

use std::collections::HashMap;

use crate::fincat::{FinMorphism, FinObject};

use super::object::{AugmentedSimplicialObject, TruncatedSimplicialObject};

/// The `k`-fold fiber power `X ×_Y ⋯ ×_Y X` as lexicographically ordered tuples.
#[derive(Clone, Debug)]
pub struct FiberPower {
    pub object: FinObject,
    pub tuples: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl FiberPower {
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.lookup.get(tuple).copied()
    }
}

pub fn fiber_power(f: &FinMorphism, k: usize) -> FiberPower {
    let fibers = f.fibers();
    let mut tuples = Vec::new();
    for x0 in 0..f.source().size() {
        let fib = &fibers[f.apply(x0)];
        let mut stack = vec![vec![x0]];
        // Depth-first in increasing order keeps the output lexicographic.
        while let Some(t) = stack.pop() {
            if t.len() >= k {
                tuples.push(t);
                continue;
            }
            for &x in fib.iter().rev() {
                let mut next = t.clone();
                next.push(x);
                stack.push(next);
            }
        }
    }
    if k == 0 {
        // The empty fiber power is Y itself; callers only use k ≥ 1.
        tuples.clear();
    }
    let lookup: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let src = f.source();
    let object = FinObject::from_fn(&src.context(), tuples.len(), |g, i| {
        let moved: Vec<usize> = tuples[i].iter().map(|&x| src.act(g, x)).collect();
        lookup[&moved]
    });
    FiberPower { object, tuples, lookup }
}

/// The augmented Čech nerve of `f`, truncated at `n`, augmented by `f` over its target.
pub fn cech_nerve(f: &FinMorphism, n: usize) -> AugmentedSimplicialObject {
    let powers: Vec<FiberPower> = (0..=n).map(|m| fiber_power(f, m + 1)).collect();
    let faces = (0..=n)
        .map(|m| {
            if m == 0 {
                return Vec::new();
            }
            (0..=m)
                .map(|i| {
                    powers[m]
                        .tuples
                        .iter()
                        .map(|t| {
                            let mut d = t.clone();
                            d.remove(i);
                            powers[m - 1].index_of(&d).expect("faces stay in the fiber power")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..n)
        .map(|m| {
            (0..=m)
                .map(|i| {
                    powers[m]
                        .tuples
                        .iter()
                        .map(|t| {
                            let mut s = t.clone();
                            s.insert(i, t[i]);
                            powers[m + 1].index_of(&s).expect("degeneracies stay in the fiber power")
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let levels = powers.iter().map(|p| p.object.clone()).collect();
    let body = TruncatedSimplicialObject::from_tables_unchecked(levels, faces, degeneracies);
    AugmentedSimplicialObject::new_unchecked(body, f.target().clone(), f.values().to_vec())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::Group;

    #[test]
    fn pair_over_a_point() {
        let f = FinMorphism::to_point(&FinObject::plain(2));
        let x = cech_nerve(&f, 3);
        assert_eq!(x.body().level_sizes(), vec![2, 4, 8, 16]);
        assert!(x.validate().valid);
        let p = fiber_power(&f, 2);
        assert_eq!(p.tuples, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn identity_nerve_is_constant() {
        let f = FinMorphism::identity(&FinObject::plain(3));
        let x = cech_nerve(&f, 3);
        assert_eq!(x.body().level_sizes(), vec![3, 3, 3, 3]);
    }

    #[test]
    fn equivariant_nerve() {
        let g = Arc::new(Group::cyclic(2).unwrap());
        let free = FinObject::cosets(g, &[0]).unwrap();
        let x = cech_nerve(&FinMorphism::to_point(&free), 2);
        assert!(x.validate().valid);
        assert_eq!(x.level(1).act(1, 0), 3);
    }

    #[test]
    fn nerve_over_two_fibers() {
        let f = FinMorphism::new(FinObject::plain(3), FinObject::plain(2), vec![0, 1, 1]).unwrap();
        let x = cech_nerve(&f, 2);
        assert_eq!(x.body().level_sizes(), vec![3, 5, 9]);
        assert_eq!(x.level_augmentation(1), vec![0, 1, 1, 1, 1]);
    }
}
