use std::fmt;

use crate::error::{Error, Result};

/// Largest group order accepted by [`Group::new`].
pub const MAX_GROUP_ORDER: usize = 64;

/// A finite group given by its multiplication table. Element `0` is the identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Group {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(order {})", self.order)
    }
}

impl Group {
    /// Validates `table[a][b] = a·b` as a group law with identity `0`.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("a group has at least one element".into()));
        }
        if order > MAX_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!("order {order} exceeds {MAX_GROUP_ORDER}")));
        }
        if table.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&v| v >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * order + b];
        for a in 0..order {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(Error::InvalidGroup(format!("0 is not an identity for element {a}")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            match (0..order).find(|&b| mul(a, b) == 0 && mul(b, a) == 0) {
                Some(b) => inverses.push(b),
                None => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(Group { order, table: flat, inverses })
    }

    /// The cyclic group `Z/n` with `k ↦ k mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("Z/0 is not finite".into()));
        }
        Group::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect())
    }

    /// The symmetric group on `k` letters, elements in lexicographic order of permutations.
    pub fn symmetric(k: usize) -> Result<Self> {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(k, &mut Vec::new(), &mut vec![false; k], &mut perms);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..k).map(|x| a[b[x]]).collect();
                        index(&ab)
                    })
                    .collect()
            })
            .collect();
        Group::new(table)
    }

    pub fn trivial() -> Self {
        Group::cyclic(1).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Multiplication table as rows, the inverse of [`Group::new`].
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Subgroup generated by `g`, sorted.
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = g;
        while x != 0 {
            out.push(x);
            x = self.mul(x, g);
        }
        out.sort_unstable();
        out
    }

    /// Distinct cyclic subgroups, including the trivial one.
    pub fn cyclic_subgroups(&self) -> Vec<Vec<usize>> {
        let mut subs: Vec<Vec<usize>> = self.elements().map(|g| self.cyclic_subgroup(g)).collect();
        subs.sort();
        subs.dedup();
        subs
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut out = vec![0];
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !out.contains(&y) {
                    out.push(y);
                    frontier.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Distinct subgroups generated by at most two elements; for groups of
    /// small order this is every subgroup.
    pub fn small_subgroups(&self) -> Vec<Vec<usize>> {
        let mut subs: Vec<Vec<usize>> =
            self.elements().flat_map(|a| self.elements().map(move |b| (a, b))).map(|(a, b)| self.generated_subgroup(&[a, b])).collect();
        subs.sort();
        subs.dedup();
        subs
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        set.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, self.inverse(b)))))
    }
}

fn permutations(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for x in 0..k {
        if !used[x] {
            used[x] = true;
            cur.push(x);
            permutations(k, cur, used, out);
            cur.pop();
            used[x] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_validate() {
        let g = Group::cyclic(6).unwrap();
        assert_eq!(g.mul(4, 5), 3);
        assert_eq!(g.inverse(2), 4);
        assert_eq!(g.cyclic_subgroup(2), vec![0, 2, 4]);
        assert_eq!(g.cyclic_subgroups().len(), 4);
    }

    #[test]
    fn symmetric_group_is_nonabelian() {
        let s3 = Group::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        let commutes = s3.elements().all(|a| s3.elements().all(|b| s3.mul(a, b) == s3.mul(b, a)));
        assert!(!commutes);
    }

    #[test]
    fn subgroups_of_s3() {
        // Trivial, three of order 2, one of order 3, and the whole group.
        let s3 = Group::symmetric(3).unwrap();
        let subs = s3.small_subgroups();
        assert_eq!(subs.len(), 6);
        assert!(subs.iter().all(|h| s3.is_subgroup(h)));
        let mut orders: Vec<usize> = subs.iter().map(Vec::len).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(Group::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(Group::new(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(Group::new(vec![]).is_err());
        let big = (0..65).map(|a| (0..65).map(|b| (a + b) % 65).collect()).collect();
        assert!(Group::new(big).is_err());
    }
}
