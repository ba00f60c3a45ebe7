use std::sync::Arc;

use crate::error::{Error, Result};

use super::group::Group;

/// The group an object lives over; `None` for plain finite sets.
pub type GroupContext = Option<Arc<Group>>;

/// A left action `G × X → X` stored as a `|G| × |X|` table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    group: Arc<Group>,
    size: usize,
    table: Vec<usize>,
}

impl Action {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.size + x]
    }

    /// Rows `g ↦ (x ↦ g·x)`.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        if self.size == 0 {
            return vec![Vec::new(); self.group.order()];
        }
        self.table.chunks(self.size).map(<[usize]>::to_vec).collect()
    }
}

/// An object of the computable category: a finite set, possibly with a group action.
///
/// Cloning is cheap; labels and action tables are shared. Equality ignores labels.
#[derive(Clone, Debug)]
pub struct FinObject {
    size: usize,
    labels: Option<Arc<[String]>>,
    action: Option<Arc<Action>>,
}

impl PartialEq for FinObject {
    fn eq(&self, other: &Self) -> bool {
        if self.size != other.size {
            return false;
        }
        match (&self.action, &other.action) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for FinObject {}

pub(crate) fn same_group(a: &GroupContext, b: &GroupContext) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(g), Some(h)) => Arc::ptr_eq(g, h) || g == h,
        _ => false,
    }
}

impl FinObject {
    pub fn plain(size: usize) -> Self {
        FinObject { size, labels: None, action: None }
    }

    /// An object of `context` with the trivial action.
    pub fn trivial(size: usize, context: &GroupContext) -> Self {
        match context {
            None => FinObject::plain(size),
            Some(g) => {
                let table = (0..g.order()).flat_map(|_| 0..size).collect();
                FinObject::from_action_table(g.clone(), size, table)
            }
        }
    }

    /// The terminal object of `context`.
    pub fn point(context: &GroupContext) -> Self {
        FinObject::trivial(1, context)
    }

    /// Validates `rows[g][x] = g·x` as an action.
    pub fn with_action(group: Arc<Group>, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != group.order() {
            return Err(Error::InvalidObject(format!("action has {} rows for a group of order {}", rows.len(), group.order())));
        }
        let size = rows[0].len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidObject("action rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|&y| y >= size) {
            return Err(Error::InvalidObject("action maps a point out of range".into()));
        }
        if rows[0].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::InvalidObject("the identity does not act trivially".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                for x in 0..size {
                    if rows[a][rows[b][x]] != rows[ab][x] {
                        return Err(Error::InvalidObject(format!("action does not respect the product {a}·{b} at point {x}")));
                    }
                }
            }
        }
        let table = rows.into_iter().flatten().collect();
        Ok(FinObject::from_action_table(group, size, table))
    }

    pub(crate) fn from_action_table(group: Arc<Group>, size: usize, table: Vec<usize>) -> Self {
        FinObject { size, labels: None, action: Some(Arc::new(Action { group, size, table })) }
    }

    /// Builds the object of `context` whose action is `act(g, x)`.
    pub(crate) fn from_fn(context: &GroupContext, size: usize, act: impl Fn(usize, usize) -> usize) -> Self {
        match context {
            None => FinObject::plain(size),
            Some(g) => {
                let table = g.elements().flat_map(|a| (0..size).map(move |x| (a, x))).map(|(a, x)| act(a, x)).collect();
                FinObject::from_action_table(g.clone(), size, table)
            }
        }
    }

    /// The coset space `G/H` with `G` acting by left multiplication.
    ///
    /// Cosets are numbered in order of their least element.
    pub fn cosets(group: Arc<Group>, subgroup: &[usize]) -> Result<Self> {
        if !group.is_subgroup(subgroup) {
            return Err(Error::InvalidObject(format!("{subgroup:?} is not a subgroup")));
        }
        let coset_of = coset_numbering(&group, subgroup);
        let size = coset_of.iter().max().map_or(0, |m| m + 1);
        let mut reps = vec![usize::MAX; size];
        for g in group.elements() {
            let c = coset_of[g];
            if reps[c] == usize::MAX {
                reps[c] = g;
            }
        }
        let table = group.elements().flat_map(|a| reps.iter().map(move |&r| (a, r))).map(|(a, r)| coset_of[group.mul(a, r)]).collect();
        Ok(FinObject::from_action_table(group, size, table))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::InvalidObject(format!("{} labels for an object of size {}", labels.len(), self.size)));
        }
        self.labels = Some(labels.into());
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn action(&self) -> Option<&Action> {
        self.action.as_deref()
    }

    pub fn context(&self) -> GroupContext {
        self.action.as_ref().map(|a| a.group.clone())
    }

    pub fn same_context(&self, other: &FinObject) -> bool {
        same_group(&self.context(), &other.context())
    }

    /// `g·x`; plain sets act trivially.
    pub fn act(&self, g: usize, x: usize) -> usize {
        match &self.action {
            None => x,
            Some(a) => a.act(g, x),
        }
    }

    /// Group elements fixing `x`; all of `{0}` for plain sets.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group_order()).filter(|&g| self.act(g, x) == x).collect()
    }

    pub fn group_order(&self) -> usize {
        self.action.as_ref().map_or(1, |a| a.group.order())
    }

    /// Coproduct `self ⊔ other`; points of `other` are shifted by `self.size()`.
    pub fn coproduct(&self, other: &FinObject) -> Result<Self> {
        check_context(self, other)?;
        let n = self.size;
        let size = n + other.size;
        Ok(FinObject::from_fn(&self.context(), size, |g, x| if x < n { self.act(g, x) } else { n + other.act(g, x - n) }))
    }
}

fn coset_numbering(group: &Group, subgroup: &[usize]) -> Vec<usize> {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut next = 0;
    for g in group.elements() {
        if coset_of[g] == usize::MAX {
            for &h in subgroup {
                coset_of[group.mul(g, h)] = next;
            }
            next += 1;
        }
    }
    coset_of
}

pub(crate) fn check_context(a: &FinObject, b: &FinObject) -> Result<()> {
    if a.same_context(b) {
        Ok(())
    } else {
        Err(Error::GroupMismatch("objects live over different groups".into()))
    }
}

/// A map of finite sets, equivariant when the objects carry actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMorphism {
    source: FinObject,
    target: FinObject,
    values: Vec<usize>,
}

impl FinMorphism {
    pub fn new(source: FinObject, target: FinObject, values: Vec<usize>) -> Result<Self> {
        check_context(&source, &target)?;
        if values.len() != source.size() {
            return Err(Error::InvalidMorphism(format!("{} values for a source of size {}", values.len(), source.size())));
        }
        if let Some(v) = values.iter().find(|&&v| v >= target.size()) {
            return Err(Error::InvalidMorphism(format!("value {v} outside target of size {}", target.size())));
        }
        let f = FinMorphism { source, target, values };
        if let Some((g, x)) = f.equivariance_failure() {
            return Err(Error::InvalidMorphism(format!("not equivariant: g = {g}, x = {x}")));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: FinObject, target: FinObject, values: Vec<usize>) -> Self {
        debug_assert_eq!(values.len(), source.size());
        FinMorphism { source, target, values }
    }

    fn equivariance_failure(&self) -> Option<(usize, usize)> {
        let order = self.source.group_order();
        self.source.action()?;
        for g in 1..order {
            for x in 0..self.source.size() {
                if self.values[self.source.act(g, x)] != self.target.act(g, self.values[x]) {
                    return Some((g, x));
                }
            }
        }
        None
    }

    pub fn identity(x: &FinObject) -> Self {
        FinMorphism { source: x.clone(), target: x.clone(), values: (0..x.size()).collect() }
    }

    /// The unique map to the terminal object.
    pub fn to_point(x: &FinObject) -> Self {
        FinMorphism { source: x.clone(), target: FinObject::point(&x.context()), values: vec![0; x.size()] }
    }

    pub fn source(&self) -> &FinObject {
        &self.source
    }

    pub fn target(&self) -> &FinObject {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinMorphism) -> Result<FinMorphism> {
        if f.target != self.source {
            return Err(Error::Composition("target of the first map is not the source of the second".into()));
        }
        let values = f.values.iter().map(|&x| self.values[x]).collect();
        Ok(FinMorphism { source: f.source.clone(), target: self.target.clone(), values })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.values.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.values {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// Preimages of each target point, ascending.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.target.size()];
        for (x, &y) in self.values.iter().enumerate() {
            fibers[y].push(x);
        }
        fibers
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<FinMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut values = vec![0; self.target.size()];
        for (x, &y) in self.values.iter().enumerate() {
            values[y] = x;
        }
        Some(FinMorphism { source: self.target.clone(), target: self.source.clone(), values })
    }

    /// `f ⊔ g : A ⊔ B → C ⊔ D`.
    pub fn coproduct(&self, other: &FinMorphism) -> Result<FinMorphism> {
        let source = self.source.coproduct(&other.source)?;
        let target = self.target.coproduct(&other.target)?;
        let shift = self.target.size();
        let values = self.values.iter().copied().chain(other.values.iter().map(|&y| y + shift)).collect();
        Ok(FinMorphism { source, target, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Arc<Group> {
        Arc::new(Group::cyclic(2).unwrap())
    }

    #[test]
    fn swap_action_validates() {
        let x = FinObject::with_action(z2(), vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert_eq!(x.act(1, 0), 1);
        assert_eq!(x.act(1, 2), 2);
        assert!(FinObject::with_action(z2(), vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn cosets_of_trivial_subgroup_are_free() {
        let g = Arc::new(Group::cyclic(3).unwrap());
        let x = FinObject::cosets(g.clone(), &[0]).unwrap();
        assert_eq!(x.size(), 3);
        assert_eq!(x.act(1, 0), 1);
        let pt = FinObject::cosets(g.clone(), &[0, 1, 2]).unwrap();
        assert_eq!(pt, FinObject::point(&Some(g)));
    }

    #[test]
    fn morphisms_must_be_equivariant() {
        let g = z2();
        let free = FinObject::cosets(g.clone(), &[0]).unwrap();
        let pt = FinObject::point(&Some(g.clone()));
        assert!(FinMorphism::new(free.clone(), pt.clone(), vec![0, 0]).is_ok());
        assert!(FinMorphism::new(pt, free.clone(), vec![0]).is_err());
        assert!(FinMorphism::new(free.clone(), FinObject::plain(1), vec![0, 0]).is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let a = FinObject::plain(3);
        let f = FinMorphism::new(a.clone(), a.clone(), vec![1, 2, 0]).unwrap();
        let inv = f.inverse().unwrap();
        assert_eq!(f.after(&inv).unwrap(), FinMorphism::identity(&a));
        assert!(FinMorphism::new(a.clone(), FinObject::plain(1), vec![0, 0, 0]).unwrap().inverse().is_none());
    }
}
