//! Finite groups as multiplication tables, with the constructors needed by
//! the shipped scenarios: cyclic groups, direct and semidirect products,
//! explicit tables, and pullbacks (fiber products) of group homomorphisms.
//!
//! The ambient (usually infinite) groups acting in the scenarios are never
//! materialized; only cell stabilizers and the control group are, and those
//! are small. Element indices are `u16`, the identity of every constructed
//! group sits at index 0 (explicit user tables may put it elsewhere).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("multiplication table is not square (row {row} has length {len}, expected {order})")]
    RaggedTable { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({i},{j}) is out of range for order {order}")]
    EntryOutOfRange { i: usize, j: usize, value: usize, order: usize },
    #[error("no two-sided identity element found")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("associativity fails at ({g}*{h})*{k} != {g}*({h}*{k})")]
    NotAssociative { g: usize, h: usize, k: usize },
    #[error("semidirect action: permutation for acting element {b} is not an automorphism")]
    ActionNotAutomorphism { b: usize },
    #[error("semidirect action: b -> phi_b is not a homomorphism (fails at {b1}*{b2})")]
    ActionNotHomomorphism { b1: usize, b2: usize },
    #[error("semidirect action table has {given} permutations, acting group has order {order}")]
    ActionSizeMismatch { given: usize, order: usize },
    #[error("homomorphism images have length {given}, source group has order {order}")]
    HomSizeMismatch { given: usize, order: usize },
    #[error("map is not a homomorphism: images[{g}*{h}] != images[{g}]*images[{h}]")]
    NotHomomorphism { g: usize, h: usize },
    #[error("homomorphism image {value} out of range for target of order {order}")]
    HomImageOutOfRange { value: usize, order: usize },
    #[error("pullback requires both homomorphisms to share a target group")]
    PullbackTargetMismatch,
    #[error("cyclic group order must be at least 1")]
    EmptyCyclic,
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `mul[g * order + h]` is the index of g*h.
    mul: Vec<u16>,
    identity: u16,
    inv: Vec<u16>,
    labels: Vec<String>,
    name: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validate a raw table and derive identity and inverses.
    ///
    /// Associativity is checked on all triples up to order 64 and on a fixed
    /// deterministic sample of 65536 triples above that.
    pub fn from_table(
        mul: Vec<u16>,
        labels: Vec<String>,
        name: String,
    ) -> Result<FiniteGroup, GroupError> {
        let order = labels.len();
        if mul.len() != order * order {
            return Err(GroupError::RaggedTable { row: 0, len: mul.len(), order });
        }
        for (pos, &v) in mul.iter().enumerate() {
            if v as usize >= order {
                return Err(GroupError::EntryOutOfRange {
                    i: pos / order,
                    j: pos % order,
                    value: v as usize,
                    order,
                });
            }
        }
        let at = |g: usize, h: usize| mul[g * order + h] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or(GroupError::NoIdentity)? as u16;
        let mut inv = vec![0u16; order];
        for g in 0..order {
            let gi = (0..order)
                .find(|&h| at(g, h) == identity as usize && at(h, g) == identity as usize)
                .ok_or(GroupError::NoInverse { element: g })?;
            inv[g] = gi as u16;
        }
        let check = |g: usize, h: usize, k: usize| -> Result<(), GroupError> {
            if at(at(g, h), k) != at(g, at(h, k)) {
                Err(GroupError::NotAssociative { g, h, k })
            } else {
                Ok(())
            }
        };
        if order <= 64 {
            for g in 0..order {
                for h in 0..order {
                    for k in 0..order {
                        check(g, h, k)?;
                    }
                }
            }
        } else {
            // Deterministic xorshift sampling keeps validation O(1)-ish for
            // the rare large extension groups while staying reproducible.
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            for _ in 0..65536 {
                let g = (next() % order as u64) as usize;
                let h = (next() % order as u64) as usize;
                let k = (next() % order as u64) as usize;
                check(g, h, k)?;
            }
        }
        Ok(FiniteGroup { order, mul, identity, inv, labels, name })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    pub fn mul(&self, g: u16, h: u16) -> u16 {
        self.mul[g as usize * self.order + h as usize]
    }

    pub fn inv(&self, g: u16) -> u16 {
        self.inv[g as usize]
    }

    pub fn label(&self, g: u16) -> &str {
        &self.labels[g as usize]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pow(&self, g: u16, mut n: usize) -> u16 {
        let mut acc = self.identity;
        let mut base = g;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: u16) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order as u16).fold(1usize, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u16)
            .all(|g| (0..self.order as u16).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// A small generating set, chosen greedily over element indices; the
    /// result is deterministic for a fixed table.
    pub fn generating_set(&self) -> Vec<u16> {
        let mut gens = Vec::new();
        let mut closure = vec![false; self.order];
        closure[self.identity as usize] = true;
        let mut size = 1;
        while size < self.order {
            let next = (0..self.order as u16).find(|&g| !closure[g as usize]).unwrap();
            gens.push(next);
            // regenerate closure
            closure.iter_mut().for_each(|c| *c = false);
            closure[self.identity as usize] = true;
            let mut frontier = vec![self.identity];
            size = 1;
            while let Some(x) = frontier.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !closure[y as usize] {
                        closure[y as usize] = true;
                        size += 1;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }
}

/// Partition of a group into conjugacy classes, ordered by minimal element
/// index (the identity's singleton class comes first for canonically built
/// groups since the identity is element 0).
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<u16>>,
    pub reps: Vec<u16>,
    /// class index per element
    pub class_of: Vec<usize>,
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes: Vec<Vec<u16>> = Vec::new();
    for x in 0..n as u16 {
        if seen[x as usize] {
            continue;
        }
        let mut class: Vec<u16> = (0..n as u16)
            .map(|t| g.mul(g.mul(t, x), g.inv(t)))
            .collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            seen[y as usize] = true;
        }
        classes.push(class);
    }
    classes.sort_by_key(|c| c[0]);
    let reps: Vec<u16> = classes.iter().map(|c| c[0]).collect();
    let mut class_of = vec![0usize; n];
    for (i, c) in classes.iter().enumerate() {
        for &y in c {
            class_of[y as usize] = i;
        }
    }
    ConjugacyClasses { classes, reps, class_of }
}

/// Constructor description for a finite group; this is the form groups take
/// in scenario files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    Semidirect {
        normal: Box<GroupSpec>,
        acting: Box<GroupSpec>,
        /// one permutation of the normal subgroup's elements per element of
        /// the acting group, each an automorphism, b -> phi_b a homomorphism
        action: Vec<Vec<u16>>,
    },
    Explicit {
        table: Vec<Vec<u16>>,
    },
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> GroupSpec {
        GroupSpec::Cyclic(n)
    }

    pub fn klein() -> GroupSpec {
        GroupSpec::DirectProduct(Box::new(GroupSpec::Cyclic(2)), Box::new(GroupSpec::Cyclic(2)))
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<Arc<FiniteGroup>, GroupError> {
    match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 0 {
                return Err(GroupError::EmptyCyclic);
            }
            let n = *n;
            let mut mul = vec![0u16; n * n];
            for i in 0..n {
                for j in 0..n {
                    mul[i * n + j] = ((i + j) % n) as u16;
                }
            }
            let labels = (0..n)
                .map(|i| if i == 0 { "e".to_string() } else { format!("g{}", i) })
                .collect();
            Ok(Arc::new(FiniteGroup::from_table(mul, labels, format!("C{}", n))?))
        }
        GroupSpec::DirectProduct(a, b) => {
            let ga = build_group(a)?;
            let gb = build_group(b)?;
            let (na, nb) = (ga.order(), gb.order());
            let n = na * nb;
            let idx = |x: usize, y: usize| x * nb + y;
            let mut mul = vec![0u16; n * n];
            for x1 in 0..na {
                for y1 in 0..nb {
                    for x2 in 0..na {
                        for y2 in 0..nb {
                            let p = ga.mul(x1 as u16, x2 as u16) as usize;
                            let q = gb.mul(y1 as u16, y2 as u16) as usize;
                            mul[idx(x1, y1) * n + idx(x2, y2)] = idx(p, q) as u16;
                        }
                    }
                }
            }
            let labels = (0..na)
                .flat_map(|x| {
                    let ga = Arc::clone(&ga);
                    let gb = Arc::clone(&gb);
                    (0..nb).map(move |y| {
                        format!("({},{})", ga.label(x as u16), gb.label(y as u16))
                    })
                })
                .collect();
            let name = format!("{}x{}", ga.name(), gb.name());
            Ok(Arc::new(FiniteGroup::from_table(mul, labels, name)?))
        }
        GroupSpec::Semidirect { normal, acting, action } => {
            let ga = build_group(normal)?;
            let gb = build_group(acting)?;
            let (na, nb) = (ga.order(), gb.order());
            if action.len() != nb {
                return Err(GroupError::ActionSizeMismatch { given: action.len(), order: nb });
            }
            // each phi_b must be an automorphism of the normal part
            for (b, phi) in action.iter().enumerate() {
                let ok = phi.len() == na
                    && phi.iter().all(|&v| (v as usize) < na)
                    && {
                        let mut seen = vec![false; na];
                        phi.iter().all(|&v| {
                            let fresh = !seen[v as usize];
                            seen[v as usize] = true;
                            fresh
                        })
                    }
                    && (0..na as u16).all(|x| {
                        (0..na as u16).all(|y| {
                            phi[ga.mul(x, y) as usize] == ga.mul(phi[x as usize], phi[y as usize])
                        })
                    })
                    && phi[ga.identity() as usize] == ga.identity();
                if !ok {
                    return Err(GroupError::ActionNotAutomorphism { b });
                }
            }
            for b1 in 0..nb {
                for b2 in 0..nb {
                    let b12 = gb.mul(b1 as u16, b2 as u16) as usize;
                    let ok = (0..na).all(|x| {
                        action[b12][x] == action[b1][action[b2][x] as usize]
                    });
                    if !ok {
                        return Err(GroupError::ActionNotHomomorphism { b1, b2 });
                    }
                }
            }
            let n = na * nb;
            let idx = |a: usize, b: usize| a * nb + b;
            let mut mul = vec![0u16; n * n];
            for a1 in 0..na {
                for b1 in 0..nb {
                    for a2 in 0..na {
                        for b2 in 0..nb {
                            // (a1, b1)(a2, b2) = (a1 * phi_{b1}(a2), b1 b2)
                            let a = ga.mul(a1 as u16, action[b1][a2]) as usize;
                            let b = gb.mul(b1 as u16, b2 as u16) as usize;
                            mul[idx(a1, b1) * n + idx(a2, b2)] = idx(a, b) as u16;
                        }
                    }
                }
            }
            let labels = (0..na)
                .flat_map(|a| {
                    let ga = Arc::clone(&ga);
                    let gb = Arc::clone(&gb);
                    (0..nb).map(move |b| {
                        format!("({},{})", ga.label(a as u16), gb.label(b as u16))
                    })
                })
                .collect();
            let name = format!("{}:{}", ga.name(), gb.name());
            Ok(Arc::new(FiniteGroup::from_table(mul, labels, name)?))
        }
        GroupSpec::Explicit { table } => {
            let order = table.len();
            for (row, r) in table.iter().enumerate() {
                if r.len() != order {
                    return Err(GroupError::RaggedTable { row, len: r.len(), order });
                }
            }
            let mul = table.iter().flatten().copied().collect();
            let labels = (0..order).map(|i| format!("x{}", i)).collect();
            Ok(Arc::new(FiniteGroup::from_table(mul, labels, format!("G{}", order))?))
        }
    }
}

/// Dihedral group of order 2n as a semidirect product C_n : C_2 with the
/// inversion action.
pub fn dihedral_spec(n: usize) -> GroupSpec {
    let invert: Vec<u16> = (0..n).map(|i| ((n - i) % n) as u16).collect();
    let id: Vec<u16> = (0..n as u16).collect();
    GroupSpec::Semidirect {
        normal: Box::new(GroupSpec::Cyclic(n)),
        acting: Box::new(GroupSpec::Cyclic(2)),
        action: vec![id, invert],
    }
}

/// A homomorphism between multiplication-table groups, stored as the image
/// of every source element.
#[derive(Clone)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub images: Vec<u16>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupHom({} -> {}, {:?})",
            self.source.name(),
            self.target.name(),
            self.images
        )
    }
}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: Vec<u16>,
    ) -> Result<GroupHom, GroupError> {
        if images.len() != source.order() {
            return Err(GroupError::HomSizeMismatch {
                given: images.len(),
                order: source.order(),
            });
        }
        for &v in &images {
            if v as usize >= target.order() {
                return Err(GroupError::HomImageOutOfRange {
                    value: v as usize,
                    order: target.order(),
                });
            }
        }
        for g in 0..source.order() as u16 {
            for h in 0..source.order() as u16 {
                let lhs = images[source.mul(g, h) as usize];
                let rhs = target.mul(images[g as usize], images[h as usize]);
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism { g: g as usize, h: h as usize });
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom {
            source: Arc::clone(g),
            target: Arc::clone(g),
            images: (0..g.order() as u16).collect(),
        }
    }

    pub fn trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images: vec![target.identity(); source.order()],
        }
    }

    pub fn apply(&self, g: u16) -> u16 {
        self.images[g as usize]
    }

    /// other follows self: (other . self)(g) = other(self(g)).
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        debug_assert_eq!(self.target.order(), other.source.order());
        GroupHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            images: self.images.iter().map(|&g| other.apply(g)).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.images.iter().all(|&v| {
            let fresh = !seen[v as usize];
            seen[v as usize] = true;
            fresh
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &v in &self.images {
            seen[v as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }
}

/// The pullback (fiber product) of `f1: P -> S` and `f2: Q -> S`:
/// the subgroup of P x Q of pairs with equal images, together with the two
/// coordinate projections. Elements are ordered lexicographically by
/// (p, q), which puts the identity pair first.
pub fn pullback_subgroup(
    f1: &GroupHom,
    f2: &GroupHom,
) -> Result<(Arc<FiniteGroup>, GroupHom, GroupHom), GroupError> {
    if f1.target != f2.target {
        return Err(GroupError::PullbackTargetMismatch);
    }
    let p = &f1.source;
    let q = &f2.source;
    let mut pairs: Vec<(u16, u16)> = Vec::new();
    for a in 0..p.order() as u16 {
        for b in 0..q.order() as u16 {
            if f1.apply(a) == f2.apply(b) {
                pairs.push((a, b));
            }
        }
    }
    let n = pairs.len();
    let index_of = |pair: (u16, u16)| pairs.binary_search(&pair).expect("closed under product");
    let mut mul = vec![0u16; n * n];
    for (i, &(a1, b1)) in pairs.iter().enumerate() {
        for (j, &(a2, b2)) in pairs.iter().enumerate() {
            let prod = (p.mul(a1, a2), q.mul(b1, b2));
            mul[i * n + j] = index_of(prod) as u16;
        }
    }
    let labels = pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", p.label(a), q.label(b)))
        .collect();
    let name = format!("{}x_{{{}}}{}", p.name(), f1.target.name(), q.name());
    let lambda = Arc::new(FiniteGroup::from_table(mul, labels, name)?);
    let pr1 = GroupHom {
        source: Arc::clone(&lambda),
        target: Arc::clone(p),
        images: pairs.iter().map(|&(a, _)| a).collect(),
    };
    let pr2 = GroupHom {
        source: Arc::clone(&lambda),
        target: Arc::clone(q),
        images: pairs.iter().map(|&(_, b)| b).collect(),
    };
    Ok((lambda, pr1, pr2))
}

/// Enumerate every homomorphism from `source` to `target`, deterministically
/// ordered. Feasible because sources in this crate are tiny; the search
/// assigns images to a greedy generating set and rejects inconsistent
/// assignments while extending along the Cayley closure.
pub fn all_homs(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens = source.generating_set();
    if gens.is_empty() {
        return vec![GroupHom::trivial(source, target)];
    }
    // Express every element as (previous element) * (generator).
    // BFS from the identity records one derivation per element.
    let n = source.order();
    let mut parent: Vec<Option<(u16, u16)>> = vec![None; n]; // (elt, gen)
    let mut order_visited: Vec<u16> = vec![source.identity()];
    let mut seen = vec![false; n];
    seen[source.identity() as usize] = true;
    let mut head = 0;
    while head < order_visited.len() {
        let x = order_visited[head];
        head += 1;
        for &g in &gens {
            let y = source.mul(x, g);
            if !seen[y as usize] {
                seen[y as usize] = true;
                parent[y as usize] = Some((x, g));
                order_visited.push(y);
            }
        }
    }
    let mut out = Vec::new();
    let t_order = target.order() as u16;
    let mut assignment = vec![0u16; gens.len()];
    loop {
        // Build candidate images from the generator assignment.
        let mut images = vec![0u16; n];
        images[source.identity() as usize] = target.identity();
        let gen_image = |g: u16, asg: &[u16]| -> u16 {
            let pos = gens.iter().position(|&x| x == g).unwrap();
            asg[pos]
        };
        for &y in order_visited.iter().skip(1) {
            let (x, g) = parent[y as usize].unwrap();
            images[y as usize] = target.mul(images[x as usize], gen_image(g, &assignment));
        }
        if let Ok(hom) = GroupHom::new(Arc::clone(source), Arc::clone(target), images) {
            out.push(hom);
        }
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return out;
            }
            assignment[pos] += 1;
            if assignment[pos] < t_order {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// All automorphisms of a group (bijective self-homs).
pub fn automorphisms(g: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    all_homs(g, g).into_iter().filter(|h| h.is_bijective()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_basics() {
        let c4 = build_group(&GroupSpec::Cyclic(4)).unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.identity(), 0);
        assert_eq!(c4.mul(1, 3), 0);
        assert_eq!(c4.inv(1), 3);
        assert_eq!(c4.element_order(1), 4);
        assert_eq!(c4.exponent(), 4);
        let classes = conjugacy_classes(&c4);
        assert_eq!(classes.classes.len(), 4);
    }

    #[test]
    fn klein_four() {
        let v4 = build_group(&GroupSpec::klein()).unwrap();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.exponent(), 2);
        assert_eq!(conjugacy_classes(&v4).classes.len(), 4);
    }

    #[test]
    fn dihedral_eight_classes() {
        // Oracle: D8 has 5 conjugacy classes of sizes 1,1,2,2,2
        // (identity; r^2 central; {r, r^3}; two reflection classes).
        let d8 = build_group(&dihedral_spec(4)).unwrap();
        assert_eq!(d8.order(), 8);
        assert!(!d8.is_abelian());
        let classes = conjugacy_classes(&d8);
        let mut sizes: Vec<usize> = classes.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn pullback_examples() {
        // identity pullback: C2 x_{C2} C2 along identities = diagonal C2
        let c2 = build_group(&GroupSpec::Cyclic(2)).unwrap();
        let id = GroupHom::identity(&c2);
        let (lambda, _, _) = pullback_subgroup(&id, &id).unwrap();
        assert_eq!(lambda.order(), 2);

        // C4 x_{C2} C4 along the reduction maps: order 8, abelian
        let c4 = build_group(&GroupSpec::Cyclic(4)).unwrap();
        let red = GroupHom::new(
            Arc::clone(&c4),
            Arc::clone(&c2),
            vec![0, 1, 0, 1],
        )
        .unwrap();
        let (lambda, pr1, pr2) = pullback_subgroup(&red, &red).unwrap();
        assert_eq!(lambda.order(), 8);
        assert!(lambda.is_abelian());
        assert!(GroupHom::new(Arc::clone(&lambda), c4.clone(), pr1.images.clone()).is_ok());
        assert!(GroupHom::new(Arc::clone(&lambda), c4, pr2.images.clone()).is_ok());

        // pullback over the trivial group = direct product
        let c1 = build_group(&GroupSpec::Cyclic(1)).unwrap();
        let t = GroupHom::trivial(&c2, &c1);
        let (prod, _, _) = pullback_subgroup(&t, &t).unwrap();
        assert_eq!(prod.order(), 4);
        assert_eq!(prod.exponent(), 2);
    }

    #[test]
    fn pullback_to_trivial_matches_direct_product_invariants() {
        let specs =
            [GroupSpec::Cyclic(3), GroupSpec::Cyclic(4), GroupSpec::klein(), dihedral_spec(4)];
        let c1 = build_group(&GroupSpec::Cyclic(1)).unwrap();
        for a in &specs {
            for b in &specs {
                let ga = build_group(a).unwrap();
                let gb = build_group(b).unwrap();
                let (pb, _, _) = pullback_subgroup(
                    &GroupHom::trivial(&ga, &c1),
                    &GroupHom::trivial(&gb, &c1),
                )
                .unwrap();
                let direct = build_group(&GroupSpec::DirectProduct(
                    Box::new(a.clone()),
                    Box::new(b.clone()),
                ))
                .unwrap();
                assert_eq!(pb.order(), direct.order());
                let mut s1: Vec<usize> =
                    conjugacy_classes(&pb).classes.iter().map(|c| c.len()).collect();
                let mut s2: Vec<usize> =
                    conjugacy_classes(&direct).classes.iter().map(|c| c.len()).collect();
                s1.sort_unstable();
                s2.sort_unstable();
                assert_eq!(s1, s2);
            }
        }
    }

    #[test]
    fn hom_enumeration() {
        let c4 = build_group(&GroupSpec::Cyclic(4)).unwrap();
        let c2 = build_group(&GroupSpec::Cyclic(2)).unwrap();
        // exactly two homs C4 -> C2 (generator to 0 or 1)
        assert_eq!(all_homs(&c4, &c2).len(), 2);
        // four homs C2 -> C4? no: generator must map to an element of order
        // dividing 2: {0, 2}, so two homs.
        assert_eq!(all_homs(&c2, &c4).len(), 2);
        // Aut(C4) has order 2
        assert_eq!(automorphisms(&c4).len(), 2);
        // Aut((Z/2)^2) = S3
        let v4 = build_group(&GroupSpec::klein()).unwrap();
        assert_eq!(automorphisms(&v4).len(), 6);
    }

    #[test]
    fn bad_tables_rejected() {
        // left-identity only is not a group table
        let bad = vec![vec![0u16, 1], vec![0, 1]];
        assert!(build_group(&GroupSpec::Explicit { table: bad }).is_err());
        // non-associative magma
        let bad = vec![vec![0u16, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        assert!(build_group(&GroupSpec::Explicit { table: bad }).is_err());
    }

    #[test]
    fn semidirect_validation() {
        // inversion on C4 by C2 -> D8
        let d8 = build_group(&dihedral_spec(4)).unwrap();
        assert_eq!(d8.order(), 8);
        // a non-automorphism action is rejected
        let bad = GroupSpec::Semidirect {
            normal: Box::new(GroupSpec::Cyclic(4)),
            acting: Box::new(GroupSpec::Cyclic(2)),
            action: vec![(0..4).collect(), vec![0, 2, 1, 3]],
        };
        assert!(build_group(&bad).is_err());
    }
}
