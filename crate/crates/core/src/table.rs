//! Fully enumerated permutation groups.

use std::collections::VecDeque;
use std::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};

/// Default bound on the number of elements [`GroupTable::enumerate`] will
/// produce.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Points are stored as bytes, so enumerated actions have degree ≤ 256.
pub const MAX_DEGREE: usize = 256;

/// Every element of a permutation group, stored flat, with a hash index from
/// image arrays to element ids.
///
/// Element ids are the breadth-first insertion order of the closure under
/// the generators, starting from the identity at id 0, so they are stable
/// across runs.
#[derive(Clone)]
pub struct GroupTable {
    degree: usize,
    data: Vec<u8>,
    index: HashTable<u32>,
    hasher: DefaultHashBuilder,
    generators: Vec<u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl GroupTable {
    fn empty(degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                max: MAX_DEGREE,
            });
        }
        Ok(Self {
            degree,
            data: Vec::new(),
            index: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
            generators: Vec::new(),
        })
    }

    /// Inserts an element if new; returns its id and whether it was new.
    fn insert(&mut self, images: &[u8]) -> (u32, bool) {
        let hash = self.hasher.hash_one(images);
        let degree = self.degree;
        let data = &self.data;
        if let Some(&id) = self
            .index
            .find(hash, |&id| &data[id as usize * degree..][..degree] == images)
        {
            return (id, false);
        }
        let id = (self.data.len() / degree.max(1)) as u32;
        self.data.extend_from_slice(images);
        let data = &self.data;
        let hasher = &self.hasher;
        self.index.insert_unique(hash, id, |&other| {
            hasher.hash_one(&data[other as usize * degree..][..degree])
        });
        (id, true)
    }

    /// Breadth-first closure of the generators, failing once more than `cap`
    /// elements have been produced.
    pub fn enumerate(gens: &GeneratorSet, cap: usize) -> Result<Self> {
        let n = gens.degree;
        let mut table = Self::empty(n)?;
        let identity: Vec<u8> = (0..n).map(|i| i as u8).collect();
        table.insert(&identity);
        // Degree zero: the trivial group on no points.
        if n == 0 {
            return Ok(table);
        }
        let gen_images: Vec<Vec<u8>> = gens
            .generators
            .iter()
            .map(|g| g.images().iter().map(|&x| x as u8).collect())
            .collect();
        let mut generator_ids = Vec::with_capacity(gen_images.len());
        for g in &gen_images {
            let (id, _) = table.insert(g);
            if table.order() > cap {
                return Err(Error::TooLarge { cap });
            }
            generator_ids.push(id);
        }
        let mut next = 0usize;
        let mut buf = vec![0u8; n];
        while next < table.order() {
            for g in &gen_images {
                {
                    let elem = &table.data[next * n..][..n];
                    for (b, &x) in buf.iter_mut().zip(elem) {
                        *b = g[x as usize];
                    }
                }
                let (_, fresh) = table.insert(&buf);
                if fresh && table.order() > cap {
                    return Err(Error::TooLarge { cap });
                }
            }
            next += 1;
        }
        generator_ids.sort_unstable();
        generator_ids.dedup();
        generator_ids.retain(|&id| id != 0);
        table.generators = generator_ids;
        Ok(table)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        if self.degree == 0 {
            1
        } else {
            self.data.len() / self.degree
        }
    }

    /// Ids of the (non-identity) generators the table was built from.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub fn element(&self, id: u32) -> &[u8] {
        &self.data[id as usize * self.degree..][..self.degree]
    }

    pub fn permutation(&self, id: u32) -> Permutation {
        Permutation::from_images_unchecked(self.element(id).iter().map(|&x| x as u32).collect())
    }

    pub fn id_of(&self, images: &[u8]) -> Option<u32> {
        if images.len() != self.degree {
            return None;
        }
        if self.degree == 0 {
            return Some(0);
        }
        let hash = self.hasher.hash_one(images);
        let degree = self.degree;
        self.index
            .find(hash, |&id| &self.data[id as usize * degree..][..degree] == images)
            .copied()
    }

    pub fn id_of_permutation(&self, p: &Permutation) -> Option<u32> {
        if p.degree() != self.degree {
            return None;
        }
        let images: Vec<u8> = p.images().iter().map(|&x| x as u8).collect();
        self.id_of(&images)
    }

    /// Id of `a·b` (apply `a`, then `b`).
    pub fn multiply(&self, a: u32, b: u32) -> u32 {
        let mut buf = [0u8; MAX_DEGREE];
        let buf = &mut buf[..self.degree];
        let (ea, eb) = (self.element(a), self.element(b));
        for (o, &x) in buf.iter_mut().zip(ea) {
            *o = eb[x as usize];
        }
        self.id_of(buf).expect("group is closed under multiplication")
    }

    /// Id of `a⁻¹·b`.
    pub fn left_divide(&self, a: u32, b: u32) -> u32 {
        let mut buf = [0u8; MAX_DEGREE];
        let buf = &mut buf[..self.degree];
        let (ea, eb) = (self.element(a), self.element(b));
        // (a⁻¹ b)[a[i]] = b[i]
        for (i, &x) in ea.iter().enumerate() {
            buf[x as usize] = eb[i];
        }
        self.id_of(buf).expect("group is closed under multiplication")
    }

    pub fn inverse(&self, a: u32) -> u32 {
        let mut buf = [0u8; MAX_DEGREE];
        let buf = &mut buf[..self.degree];
        for (i, &x) in self.element(a).iter().enumerate() {
            buf[x as usize] = i as u8;
        }
        self.id_of(buf).expect("group is closed under inversion")
    }

    /// Id of `g⁻¹·x·g`.
    pub fn conjugate(&self, x: u32, g: u32) -> u32 {
        let mut buf = [0u8; MAX_DEGREE];
        let buf = &mut buf[..self.degree];
        let (ex, eg) = (self.element(x), self.element(g));
        // g⁻¹ x g maps g[i] to g[x[i]]
        for i in 0..self.degree {
            buf[eg[i] as usize] = eg[ex[i] as usize];
        }
        self.id_of(buf).expect("group is closed under conjugation")
    }

    pub fn fixed_points(&self, id: u32) -> usize {
        self.element(id)
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x as usize)
            .count()
    }

    /// Element order, computed from the cycle type.
    pub fn element_order(&self, id: u32) -> u64 {
        self.permutation(id).order()
    }

    /// Point orbits of the group, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for &g in &self.generators {
                    let img = self.element(g)[p] as usize;
                    if !seen[img] {
                        seen[img] = true;
                        orbit.push(img);
                        queue.push_back(img);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Whether the group acts transitively on ordered `k`-tuples of distinct
    /// points, for `k ∈ {1, 2}`.
    pub fn is_k_transitive(&self, k: usize) -> Result<bool> {
        let n = self.degree;
        match k {
            1 => Ok(n <= 1 || self.orbits().len() == 1),
            2 => {
                if n < 2 {
                    return Ok(true);
                }
                if self.order() < n * (n - 1) {
                    return Ok(false);
                }
                let mut seen = vec![false; n * n];
                seen[1] = true;
                let mut count = 1usize;
                let mut queue = VecDeque::from([(0usize, 1usize)]);
                while let Some((a, b)) = queue.pop_front() {
                    for &g in &self.generators {
                        let e = self.element(g);
                        let (x, y) = (e[a] as usize, e[b] as usize);
                        if !seen[x * n + y] {
                            seen[x * n + y] = true;
                            count += 1;
                            queue.push_back((x, y));
                        }
                    }
                }
                Ok(count == n * (n - 1))
            }
            _ => Err(Error::InvalidParameters(format!(
                "transitivity test supports k in {{1, 2}}, got {k}"
            ))),
        }
    }

    /// Ids of the elements fixing `point`.
    pub fn point_stabilizer(&self, point: usize) -> Result<Vec<u32>> {
        if point >= self.degree {
            return Err(Error::InvalidParameters(format!(
                "point {point} out of range for degree {}",
                self.degree
            )));
        }
        Ok((0..self.order() as u32)
            .filter(|&id| self.element(id)[point] as usize == point)
            .collect())
    }

    /// Ids of the elements mapping `alpha` to `beta`.
    pub fn coset(&self, alpha: usize, beta: usize) -> Vec<u32> {
        (0..self.order() as u32)
            .filter(|&id| self.element(id)[alpha] as usize == beta)
            .collect()
    }

    /// The same abstract group acting on a subset of the points (which must
    /// be a union of orbits). Element ids and generator ids are preserved, so
    /// class tables computed on `self` remain valid.
    pub fn restrict(&self, points: &[usize]) -> Result<GroupTable> {
        let n = self.degree;
        let mut position = vec![usize::MAX; n];
        for (i, &p) in points.iter().enumerate() {
            if p >= n || position[p] != usize::MAX {
                return Err(Error::InvalidParameters(
                    "restriction points must be distinct and in range".into(),
                ));
            }
            position[p] = i;
        }
        let mut out = Self::empty(points.len())?;
        let mut buf = vec![0u8; points.len()];
        for id in 0..self.order() as u32 {
            let e = self.element(id);
            for (b, &p) in buf.iter_mut().zip(points) {
                let img = position[e[p] as usize];
                if img == usize::MAX {
                    return Err(Error::InvalidParameters(
                        "restriction points are not invariant under the group".into(),
                    ));
                }
                *b = img as u8;
            }
            let (_, fresh) = out.insert(&buf);
            if !fresh {
                return Err(Error::Precondition(
                    "the group does not act faithfully on the chosen points".into(),
                ));
            }
        }
        out.generators = self.generators.clone();
        Ok(out)
    }

    /// Re-enumerates the subgroup formed by `ids` (which must be closed under
    /// multiplication) as a table of its own, from a greedily chosen
    /// generating set.
    pub fn subgroup(&self, ids: &[u32]) -> Result<GroupTable> {
        let mut member = vec![false; self.order()];
        for &id in ids {
            member[id as usize] = true;
        }
        for &a in ids {
            for &b in ids {
                if !member[self.multiply(a, b) as usize] {
                    return Err(Error::Precondition(
                        "element set is not closed under multiplication".into(),
                    ));
                }
            }
        }
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut generated = vec![false; self.order()];
        generated[0] = true;
        let mut elems = vec![0u32];
        let mut gens = Vec::new();
        for &id in &sorted {
            if generated[id as usize] {
                continue;
            }
            gens.push(id);
            // closure of the current generating set
            let mut i = 0;
            while i < elems.len() {
                for &g in &gens {
                    let p = self.multiply(elems[i], g);
                    if !generated[p as usize] {
                        generated[p as usize] = true;
                        elems.push(p);
                    }
                }
                i += 1;
            }
        }
        let set = GeneratorSet::new(
            self.degree,
            gens.iter().map(|&g| self.permutation(g)).collect(),
        )?;
        GroupTable::enumerate(&set, self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> GroupTable {
        let gens = gens
            .iter()
            .map(|g| Permutation::parse_cycles(degree, g).unwrap())
            .collect();
        GroupTable::enumerate(&GeneratorSet::new(degree, gens).unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn s3_has_order_six() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        assert_eq!(g.order(), 6);
        assert!(g.is_k_transitive(2).unwrap());
        assert_eq!(g.point_stabilizer(0).unwrap().len(), 2);
        assert!(g.element(0).iter().enumerate().all(|(i, &x)| i == x as usize));
    }

    #[test]
    fn cyclic_group_is_not_two_transitive() {
        let g = group(4, &["(1,2,3,4)"]);
        assert_eq!(g.order(), 4);
        assert!(g.is_k_transitive(1).unwrap());
        assert!(!g.is_k_transitive(2).unwrap());
        assert!(g.is_k_transitive(3).is_err());
    }

    #[test]
    fn empty_generator_list_gives_trivial_group() {
        let g = GroupTable::enumerate(&GeneratorSet::new(5, vec![]).unwrap(), 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let gens = GeneratorSet::new(
            5,
            vec![
                Permutation::parse_cycles(5, "(1,2)").unwrap(),
                Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            GroupTable::enumerate(&gens, 100),
            Err(Error::TooLarge { cap: 100 })
        ));
        assert_eq!(GroupTable::enumerate(&gens, 120).unwrap().order(), 120);
    }

    #[test]
    fn arithmetic_is_consistent() {
        let g = group(5, &["(1,2)", "(1,2,3,4,5)"]);
        for a in 0..g.order() as u32 {
            let ai = g.inverse(a);
            assert_eq!(g.multiply(a, ai), 0);
            for b in [0u32, 3, 17, 101] {
                assert_eq!(g.left_divide(a, b), g.multiply(ai, b));
                assert_eq!(g.conjugate(a, b), g.multiply(g.multiply(g.inverse(b), a), b));
            }
        }
    }

    #[test]
    fn restriction_preserves_ids() {
        // S3 acting on two copies of {1,2,3}
        let g = group(6, &["(1,2)(4,5)", "(1,2,3)(4,5,6)"]);
        assert_eq!(g.orbits(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let r = g.restrict(&[3, 4, 5]).unwrap();
        assert_eq!(r.order(), 6);
        for id in 0..6u32 {
            assert_eq!(r.fixed_points(id) * 2, g.fixed_points(id));
        }
        assert!(g.restrict(&[0, 3]).is_err());
    }

    #[test]
    fn subgroup_tables_are_rebuilt() {
        let s4 = group(4, &["(1,2)", "(1,2,3,4)"]);
        let evens: Vec<u32> = (0..24u32)
            .filter(|&id| {
                let p = s4.permutation(id);
                p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
            })
            .collect();
        let a4 = s4.subgroup(&evens).unwrap();
        assert_eq!(a4.order(), 12);
        let odd_only: Vec<u32> = (0..24u32).filter(|id| !evens.contains(id)).collect();
        assert!(s4.subgroup(&odd_only).is_err());
    }
}
