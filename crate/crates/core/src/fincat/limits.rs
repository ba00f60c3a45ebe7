//! Finite limits of finite (G-)sets.
//!
//! A limit is the set of tuples `(x_k)` in the product of the diagram
//! objects that are compatible with every arrow; the product is never
//! materialized. Tuples are enumerated depth-first in object order, so the
//! result is in lexicographic order of tuples.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::object::{check_context, same_group, FinMorphism, FinObject, GroupContext};

/// Fiber product `A ×_C B` with its projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: FinObject,
    /// The pairs `(a, b)`, in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    pub proj1: FinMorphism,
    pub proj2: FinMorphism,
}

impl Pullback {
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }
}

pub fn fiber_product(f: &FinMorphism, g: &FinMorphism) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::InvalidMorphism("fiber product of maps with different targets".into()));
    }
    check_context(f.source(), g.source())?;
    let g_fibers = g.fibers();
    let pairs: Vec<(usize, usize)> = (0..f.source().size()).flat_map(|a| g_fibers[f.apply(a)].iter().map(move |&b| (a, b))).collect();
    let (a_obj, b_obj) = (f.source(), g.source());
    let object = FinObject::from_fn(&a_obj.context(), pairs.len(), |h, k| {
        let (a, b) = pairs[k];
        pairs.binary_search(&(a_obj.act(h, a), b_obj.act(h, b))).expect("pullback is stable")
    });
    let proj1 = FinMorphism::new_unchecked(object.clone(), a_obj.clone(), pairs.iter().map(|p| p.0).collect());
    let proj2 = FinMorphism::new_unchecked(object.clone(), b_obj.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(Pullback { object, pairs, proj1, proj2 })
}

/// An arrow `objects[source] → objects[target]` of a [`Diagram`].
#[derive(Clone, Debug)]
pub struct DiagramArrow {
    pub source: usize,
    pub target: usize,
    pub values: Vec<usize>,
}

/// A finite diagram in one group context.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub context: GroupContext,
    pub objects: Vec<FinObject>,
    pub arrows: Vec<DiagramArrow>,
}

impl Diagram {
    pub fn new(context: GroupContext) -> Self {
        Diagram { context, objects: Vec::new(), arrows: Vec::new() }
    }

    pub fn add_object(&mut self, x: FinObject) -> usize {
        self.objects.push(x);
        self.objects.len() - 1
    }

    pub fn add_arrow(&mut self, source: usize, target: usize, values: Vec<usize>) {
        self.arrows.push(DiagramArrow { source, target, values });
    }

    fn validate(&self) -> Result<()> {
        for x in &self.objects {
            if !same_group(&x.context(), &self.context) {
                return Err(Error::GroupMismatch("diagram object outside the diagram's group context".into()));
            }
        }
        for a in &self.arrows {
            let (Some(s), Some(t)) = (self.objects.get(a.source), self.objects.get(a.target)) else {
                return Err(Error::InvalidMorphism("diagram arrow refers to a missing object".into()));
            };
            FinMorphism::new(s.clone(), t.clone(), a.values.clone())?;
        }
        Ok(())
    }
}

/// Limit of a diagram: the compatible tuples, the limit object and its projections.
#[derive(Clone, Debug)]
pub struct Limit {
    pub object: FinObject,
    pub tuples: Vec<Vec<usize>>,
    pub projections: Vec<FinMorphism>,
}

impl Limit {
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }
}

/// Computes the limit; an empty diagram yields the terminal object.
pub fn finite_limit(diagram: &Diagram) -> Result<Limit> {
    diagram.validate()?;
    let k = diagram.objects.len();

    // For each object, the arrows whose later endpoint is that object.
    let mut forcing: Vec<Vec<&DiagramArrow>> = vec![Vec::new(); k];
    let mut checks: Vec<Vec<&DiagramArrow>> = vec![Vec::new(); k];
    for a in &diagram.arrows {
        if a.source < a.target {
            forcing[a.target].push(a);
        } else {
            checks[a.source].push(a);
        }
    }

    let mut tuples = Vec::new();
    let mut current = Vec::with_capacity(k);
    search(diagram, &forcing, &checks, &mut current, &mut tuples);

    let objects = &diagram.objects;
    let lookup: HashMap<&[usize], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let object = FinObject::from_fn(&diagram.context, tuples.len(), |g, idx| {
        let moved: Vec<usize> = tuples[idx].iter().zip(objects).map(|(&x, o)| o.act(g, x)).collect();
        lookup[moved.as_slice()]
    });
    let projections = objects
        .iter()
        .enumerate()
        .map(|(c, o)| FinMorphism::new_unchecked(object.clone(), o.clone(), tuples.iter().map(|t| t[c]).collect()))
        .collect();
    Ok(Limit { object, tuples, projections })
}

fn search(diagram: &Diagram, forcing: &[Vec<&DiagramArrow>], checks: &[Vec<&DiagramArrow>], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let pos = current.len();
    if pos == diagram.objects.len() {
        out.push(current.clone());
        return;
    }
    let admissible = |x: usize, current: &[usize]| {
        checks[pos].iter().all(|a| {
            let image = a.values[x];
            if a.target == pos {
                image == x
            } else {
                image == current[a.target]
            }
        }) && forcing[pos].iter().all(|a| a.values[current[a.source]] == x)
    };
    let candidates: Box<dyn Iterator<Item = usize>> = match forcing[pos].first() {
        Some(a) => Box::new(std::iter::once(a.values[current[a.source]])),
        None => Box::new(0..diagram.objects[pos].size()),
    };
    for x in candidates {
        if admissible(x, current) {
            current.push(x);
            search(diagram, forcing, checks, current, out);
            current.pop();
        }
    }
}

/// Equalizer `{x : s(x) = t(x)}` with its inclusion.
pub fn equalizer(s: &FinMorphism, t: &FinMorphism) -> Result<(FinObject, FinMorphism)> {
    if s.source() != t.source() || s.target() != t.target() {
        return Err(Error::InvalidMorphism("equalizer of maps with different source or target".into()));
    }
    let points: Vec<usize> = (0..s.source().size()).filter(|&x| s.apply(x) == t.apply(x)).collect();
    let src = s.source();
    let object = FinObject::from_fn(&src.context(), points.len(), |g, k| points.binary_search(&src.act(g, points[k])).expect("equalizer is stable"));
    let inclusion = FinMorphism::new_unchecked(object.clone(), src.clone(), points);
    Ok((object, inclusion))
}

/// Product of a list of objects.
pub fn product(context: &GroupContext, objects: &[FinObject]) -> Result<Limit> {
    let mut d = Diagram::new(context.clone());
    for o in objects {
        d.add_object(o.clone());
    }
    finite_limit(&d)
}

/// Factors `u : T → X` through the inclusion of a subobject, if it lands inside.
pub fn factor_through(inclusion: &FinMorphism, u: &FinMorphism) -> Option<FinMorphism> {
    let values: Option<Vec<usize>> = u.values().iter().map(|&y| inclusion.values().iter().position(|&z| z == y)).collect();
    values.map(|v| FinMorphism::new_unchecked(u.source().clone(), inclusion.source().clone(), v))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::group::Group;

    fn map(src: usize, tgt: usize, values: &[usize]) -> FinMorphism {
        FinMorphism::new(FinObject::plain(src), FinObject::plain(tgt), values.to_vec()).unwrap()
    }

    #[test]
    fn fiber_product_over_a_point() {
        let pb = fiber_product(&map(2, 1, &[0, 0]), &map(2, 1, &[0, 0])).unwrap();
        assert_eq!(pb.object.size(), 4);
        assert_eq!(pb.pairs, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn fiber_product_of_identities_is_the_diagonal() {
        let id = FinMorphism::identity(&FinObject::plain(3));
        let pb = fiber_product(&id, &id).unwrap();
        assert_eq!(pb.pairs, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn fiber_product_of_free_orbit_with_itself() {
        // G = Z/2, H = G, so G/H is a point and G ×_{pt} G has two free orbits.
        let g = Arc::new(Group::cyclic(2).unwrap());
        let free = FinObject::cosets(g.clone(), &[0]).unwrap();
        let pt = FinObject::cosets(g.clone(), &[0, 1]).unwrap();
        let p = FinMorphism::new(free.clone(), pt, vec![0, 0]).unwrap();
        let pb = fiber_product(&p, &p).unwrap();
        assert_eq!(pb.object.size(), 4);
        // Orbits by brute force: {(0,0),(1,1)} and {(0,1),(1,0)}.
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for x in 0..4 {
            let mut o: Vec<usize> = (0..2).map(|h| pb.object.act(h, x)).collect();
            o.sort_unstable();
            o.dedup();
            if !orbits.contains(&o) {
                orbits.push(o);
            }
        }
        assert_eq!(orbits.len(), 2);
        assert!(orbits.iter().all(|o| o.len() == 2));
    }

    #[test]
    fn fiber_product_context_mismatch() {
        let g = Arc::new(Group::cyclic(2).unwrap());
        let pt_g = FinObject::point(&Some(g));
        let f = FinMorphism::identity(&pt_g);
        let h = FinMorphism::identity(&FinObject::plain(1));
        assert!(fiber_product(&f, &h).is_err());
    }

    #[test]
    fn limit_examples() {
        let mut d = Diagram::new(None);
        d.add_object(FinObject::plain(3));
        let l = finite_limit(&d).unwrap();
        assert_eq!(l.object.size(), 3);

        d.add_object(FinObject::plain(2));
        assert_eq!(finite_limit(&d).unwrap().object.size(), 6);

        let empty = finite_limit(&Diagram::new(None)).unwrap();
        assert_eq!(empty.object.size(), 1);
    }

    #[test]
    fn cospan_limit_matches_fiber_product() {
        let f = map(3, 2, &[0, 1, 1]);
        let g = map(4, 2, &[1, 0, 1, 1]);
        let mut d = Diagram::new(None);
        let a = d.add_object(FinObject::plain(3));
        let b = d.add_object(FinObject::plain(4));
        let c = d.add_object(FinObject::plain(2));
        d.add_arrow(a, c, f.values().to_vec());
        d.add_arrow(b, c, g.values().to_vec());
        let l = finite_limit(&d).unwrap();
        let pb = fiber_product(&f, &g).unwrap();
        let pairs: Vec<(usize, usize)> = l.tuples.iter().map(|t| (t[0], t[1])).collect();
        assert_eq!(pairs, pb.pairs);
    }

    #[test]
    fn equalizer_examples() {
        let s = FinMorphism::identity(&FinObject::plain(3));
        let t = map(3, 3, &[1, 0, 2]);
        let (e, inc) = equalizer(&s, &t).unwrap();
        assert_eq!(e.size(), 1);
        assert_eq!(inc.values(), &[2]);
        let (all, _) = equalizer(&t, &t).unwrap();
        assert_eq!(all.size(), 3);
        assert!(equalizer(&s, &map(3, 1, &[0, 0, 0])).is_err());
    }
}
