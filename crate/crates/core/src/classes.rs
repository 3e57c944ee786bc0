//! Conjugacy classes and permutation-character data of an enumerated group.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::table::GroupTable;

#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    /// Label such as `3A`: element order followed by a letter in class order.
    pub label: String,
    /// Smallest element id in the class.
    pub representative: u32,
    pub size: u64,
    /// Fixed points of the representative on the action's points.
    pub fixed_points: usize,
    pub element_order: u64,
    /// Index of the class containing the inverses.
    pub inverse: usize,
}

/// Partition of a group into conjugacy classes, ordered by
/// `(size, smallest member id)`. Class 0 is always the identity.
#[derive(Clone, Debug)]
pub struct ConjugacyClassTable {
    classes: Vec<ClassInfo>,
    class_of: Vec<u32>,
    members: Vec<Vec<u32>>,
    order: u64,
}

impl ConjugacyClassTable {
    pub fn compute(table: &GroupTable) -> Self {
        Self::compute_with(table, Exec::default())
    }

    pub fn compute_with(table: &GroupTable, exec: Exec) -> Self {
        let n = table.order();
        let gens = table.generators();
        // conjugates of every element by every generator, in parallel chunks
        const CHUNK: usize = 4096;
        let k = gens.len();
        let conj: Vec<u32> = exec
            .map_range(0..n.div_ceil(CHUNK), |c| {
                let mut out = Vec::with_capacity(CHUNK * k);
                for x in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    out.extend(gens.iter().map(|&g| table.conjugate(x as u32, g)));
                }
                out
            })
            .concat();
        const UNSEEN: u32 = u32::MAX;
        let mut raw = vec![UNSEEN; n];
        let mut members: Vec<Vec<u32>> = Vec::new();
        for start in 0..n {
            if raw[start] != UNSEEN {
                continue;
            }
            let label = members.len() as u32;
            raw[start] = label;
            let mut orbit = vec![start as u32];
            let mut i = 0;
            while i < orbit.len() {
                for &y in &conj[orbit[i] as usize * k..][..k] {
                    if raw[y as usize] == UNSEEN {
                        raw[y as usize] = label;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            members.push(orbit);
        }
        drop(conj);
        // Orbits were discovered in order of their least member, so sorting
        // stably by size gives the (size, least member) order.
        let mut perm: Vec<usize> = (0..members.len()).collect();
        perm.sort_by_key(|&c| members[c].len());
        let mut rank = vec![0u32; members.len()];
        for (new, &old) in perm.iter().enumerate() {
            rank[old] = new as u32;
        }
        let class_of: Vec<u32> = raw.iter().map(|&c| rank[c as usize]).collect();
        let mut members: Vec<Vec<u32>> = {
            let mut slots: Vec<Option<Vec<u32>>> = members.into_iter().map(Some).collect();
            perm.iter().map(|&old| slots[old].take().unwrap()).collect()
        };
        members.shrink_to_fit();

        let mut classes: Vec<ClassInfo> = members
            .iter()
            .map(|m| {
                let rep = m[0];
                ClassInfo {
                    label: String::new(),
                    representative: rep,
                    size: m.len() as u64,
                    fixed_points: table.fixed_points(rep),
                    element_order: table.element_order(rep),
                    inverse: class_of[table.inverse(rep) as usize] as usize,
                }
            })
            .collect();
        assign_labels(&mut classes);
        Self {
            classes,
            class_of,
            members,
            order: n as u64,
        }
    }

    /// The same partition with fixed-point counts taken from another action
    /// of the same abstract group (a table sharing element ids, such as one
    /// produced by [`GroupTable::restrict`]).
    pub fn for_action(&self, table: &GroupTable) -> Result<Self> {
        if table.order() as u64 != self.order {
            return Err(Error::Precondition(
                "action table has a different order from the class table".into(),
            ));
        }
        let mut out = self.clone();
        for c in &mut out.classes {
            c.fixed_points = table.fixed_points(c.representative);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        self.order
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &ClassInfo {
        &self.classes[i]
    }

    pub fn class_of(&self, element: u32) -> usize {
        self.class_of[element as usize] as usize
    }

    /// Element ids in class `i`, ascending.
    pub fn members(&self, i: usize) -> &[u32] {
        &self.members[i]
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.size).collect()
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }
}

fn assign_labels(classes: &mut [ClassInfo]) {
    let mut seen: std::collections::BTreeMap<u64, usize> = Default::default();
    for c in classes.iter_mut() {
        let k = seen.entry(c.element_order).or_insert(0);
        c.label = format!("{}{}", c.element_order, letters(*k));
        *k += 1;
    }
}

/// 0 → A, 25 → Z, 26 → AA, …
fn letters(mut k: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

/// Transitivity level: 0 intransitive, 1 transitive, 2 for 2-transitive or
/// better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transitivity {
    Intransitive,
    Transitive,
    TwoTransitive,
}

/// Permutation-character data of a transitive action.
#[derive(Clone, Debug, Serialize)]
pub struct ActionStats {
    pub degree: usize,
    pub order: u64,
    pub transitivity: Transitivity,
    pub derangement_count: u64,
    /// Classes whose elements fix no point, in class order.
    pub derangement_classes: Vec<usize>,
    /// Permutation character π per class.
    pub pi: Vec<i64>,
    /// ψ = π − 1 per class.
    pub psi: Vec<i64>,
}

impl ActionStats {
    /// Position of class `c` among the derangement classes.
    pub fn derangement_index(&self, c: usize) -> Option<usize> {
        self.derangement_classes.iter().position(|&d| d == c)
    }
}

pub fn action_stats(table: &GroupTable, classes: &ConjugacyClassTable) -> Result<ActionStats> {
    let transitivity = if !table.is_k_transitive(1)? {
        return Err(Error::Intransitive);
    } else if table.is_k_transitive(2)? {
        Transitivity::TwoTransitive
    } else {
        Transitivity::Transitive
    };
    let pi: Vec<i64> = classes
        .classes()
        .iter()
        .map(|c| c.fixed_points as i64)
        .collect();
    let derangement_classes: Vec<usize> = (0..classes.len()).filter(|&i| pi[i] == 0).collect();
    let derangement_count = derangement_classes
        .iter()
        .map(|&i| classes.class(i).size)
        .sum();
    Ok(ActionStats {
        degree: table.degree(),
        order: table.order() as u64,
        transitivity,
        derangement_count,
        derangement_classes,
        psi: pi.iter().map(|&x| x - 1).collect(),
        pi,
    })
}

/// `|G| ≥ 2|𝒟|`: at most half of the elements are derangements.
pub fn derangement_fraction_check(stats: &ActionStats) -> bool {
    stats.order >= 2 * stats.derangement_count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{GeneratorSet, Permutation};
    use crate::table::DEFAULT_CAP;

    fn group(degree: usize, gens: &[&str]) -> GroupTable {
        let gens = gens
            .iter()
            .map(|g| Permutation::parse_cycles(degree, g).unwrap())
            .collect();
        GroupTable::enumerate(&GeneratorSet::new(degree, gens).unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn s3_classes() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let c = ConjugacyClassTable::compute(&g);
        assert_eq!(c.sizes(), vec![1, 2, 3]);
        let labels: Vec<_> = c.classes().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["1A", "3A", "2A"]);
        let s = action_stats(&g, &c).unwrap();
        assert_eq!(s.derangement_classes, vec![1]);
        assert_eq!(s.derangement_count, 2);
        assert!(derangement_fraction_check(&s));
    }

    #[test]
    fn intransitive_actions_are_flagged() {
        let g = group(4, &["(1,2)"]);
        let c = ConjugacyClassTable::compute(&g);
        assert!(matches!(action_stats(&g, &c), Err(Error::Intransitive)));
    }

    #[test]
    fn labels_roll_over() {
        assert_eq!(letters(0), "A");
        assert_eq!(letters(25), "Z");
        assert_eq!(letters(26), "AA");
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = group(6, &["(1,2)", "(1,2,3,4,5,6)"]);
        let a = ConjugacyClassTable::compute_with(&g, Exec::Sequential);
        let b = ConjugacyClassTable::compute_with(&g, Exec::Parallel);
        assert_eq!(a.class_of, b.class_of);
        assert_eq!(a.len(), 11);
    }
}
