//! Cayley-table finite groups and the analysis the lambda dispatcher needs:
//! Sylow 2-subgroups, cyclic/metacyclic/Klein-four detection, commutator
//! subgroups, 2-ranks of abelianizations, coset-permutation sign characters
//! and the transfer map.
//!
//! Everything here works by exhaustive enumeration; the supported range is
//! `|G| ≤ 64`, which covers every group the closed-form lambda theory
//! distinguishes.

mod catalog;

pub use catalog::{dichotomy_corpus, from_json as group_from_json, named as catalog};

use crate::{Error, Result};

/// Largest group order the exhaustive analyses accept.
pub const MAX_ANALYZED_ORDER: usize = 64;

/// A finite group as a full multiplication table; element 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order())
    }
}

/// A subgroup, stored as the sorted list of its elements in the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// The Sylow-2 case split that drives the closed-form lambda dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sylow2Class {
    Trivial,
    NontrivialCyclic,
    MetacyclicNotCyclic { contains_klein: bool },
    NotMetacyclic,
}

/// Elementary divisors `m_1 | m_2 | … | m_s` of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    divisors: Vec<u64>,
}

impl AbelianInvariants {
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// 2-rank: the number of even elementary divisors.
    pub fn rk2(&self) -> usize {
        self.divisors.iter().filter(|d| *d % 2 == 0).count()
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }
}

impl FiniteGroup {
    /// Validate and wrap a raw Cayley table. Checks the identity at index 0,
    /// the Latin-square property, inverses, and associativity (fully for
    /// `|G| ≤ 64`, on a deterministic sample of triples above that).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {i} has an out-of-range entry")));
            }
        }
        for i in 0..n {
            if table[0][i] != i || table[i][0] != i {
                return Err(Error::InvalidGroup("element 0 is not an identity".into()));
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if seen_row[table[i][j]] || seen_col[table[j][i]] {
                    return Err(Error::InvalidGroup(format!(
                        "row or column {i} is not a permutation"
                    )));
                }
                seen_row[table[i][j]] = true;
                seen_col[table[j][i]] = true;
            }
        }
        let mut inverses = vec![0; n];
        for i in 0..n {
            match (0..n).find(|&j| table[i][j] == 0) {
                Some(j) => {
                    if table[j][i] != 0 {
                        return Err(Error::InvalidGroup(format!(
                            "element {i} has only a one-sided inverse"
                        )));
                    }
                    inverses[i] = j;
                }
                None => return Err(Error::InvalidGroup(format!("element {i} has no inverse"))),
            }
        }
        if n <= MAX_ANALYZED_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // Deterministic spot check.
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..8192 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 17) as usize % n;
                let c = state as usize % n;
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
        Ok(FiniteGroup { table, inverses })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let (mut base, mut k) = if k < 0 { (self.inv(a), (-k) as u64) } else { (a, k as u64) };
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    fn ensure_analyzable(&self) -> Result<()> {
        if self.order() > MAX_ANALYZED_ORDER {
            Err(Error::GroupTooLarge(MAX_ANALYZED_ORDER))
        } else {
            Ok(())
        }
    }

    // ----- subgroup machinery -------------------------------------------

    /// Wrap a sorted element list after checking it really is a subgroup.
    pub fn subgroup(&self, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        let sg = Subgroup { elements };
        if !self.is_subgroup(&sg) {
            return Err(Error::NotASubgroup);
        }
        Ok(sg)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup { elements: (0..self.order()).collect() }
    }

    fn is_subgroup(&self, s: &Subgroup) -> bool {
        if s.elements.is_empty() || !s.contains(0) || s.elements.iter().any(|&x| x >= self.order())
        {
            return false;
        }
        s.elements.iter().all(|&a| {
            s.contains(self.inv(a)) && s.elements.iter().all(|&b| s.contains(self.mul(a, b)))
        })
    }

    /// Subgroup generated by a set of elements.
    pub fn closure(&self, generators: &[usize]) -> Subgroup {
        let mut in_set = vec![false; self.order()];
        let mut members = vec![0];
        in_set[0] = true;
        for &g in generators {
            if !in_set[g] {
                in_set[g] = true;
                members.push(g);
            }
        }
        // Worklist: each member gets multiplied against everything present
        // when its turn comes, so every pair is covered by the later of the
        // two.
        let mut processed = 0;
        while processed < members.len() {
            let x = members[processed];
            processed += 1;
            let xi = self.inv(x);
            if !in_set[xi] {
                in_set[xi] = true;
                members.push(xi);
            }
            let mut k = 0;
            while k < members.len() {
                let y = members[k];
                k += 1;
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if !in_set[p] {
                        in_set[p] = true;
                        members.push(p);
                    }
                }
            }
        }
        members.sort_unstable();
        Subgroup { elements: members }
    }

    /// Every subgroup, by closure-BFS over generator extensions.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.ensure_analyzable()?;
        use std::collections::BTreeSet;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![self.trivial_subgroup()];
        seen.insert(queue[0].elements.clone());
        while let Some(s) = queue.pop() {
            for g in 1..self.order() {
                if s.contains(g) {
                    continue;
                }
                let mut gens = s.elements.clone();
                gens.push(g);
                let t = self.closure(&gens);
                if seen.insert(t.elements.clone()) {
                    queue.push(t);
                }
            }
        }
        Ok(seen.into_iter().map(|elements| Subgroup { elements }).collect())
    }

    /// `|{x : x^2 = 1}|`.
    pub fn two_torsion_count(&self) -> usize {
        (0..self.order()).filter(|&x| self.mul(x, x) == 0).count()
    }

    pub fn conjugate_subgroup(&self, s: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut elements: Vec<usize> =
            s.elements.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn normalizer(&self, s: &Subgroup) -> Subgroup {
        let elements: Vec<usize> = (0..self.order())
            .filter(|&g| self.conjugate_subgroup(s, g).elements == s.elements)
            .collect();
        Subgroup { elements }
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        self.normalizer(s).order() == self.order()
    }

    /// `[G, G]`, generated by all commutators.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let n = self.order();
        let mut gens = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if c != 0 {
                    gens.push(c);
                }
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.closure(&gens)
    }

    /// Quotient by a normal subgroup. Cosets are indexed in first-seen order
    /// scanning elements ascending, so the identity coset is element 0 and
    /// the labelling is deterministic.
    pub fn quotient(&self, n: &Subgroup) -> Result<FiniteGroup> {
        if !self.is_subgroup(n) {
            return Err(Error::NotASubgroup);
        }
        if !self.is_normal(n) {
            return Err(Error::InvalidGroup("quotient by a non-normal subgroup".into()));
        }
        let (coset_of, reps) = self.coset_partition(n);
        let k = reps.len();
        let mut table = vec![vec![0; k]; k];
        for (i, &ri) in reps.iter().enumerate() {
            for (j, &rj) in reps.iter().enumerate() {
                table[i][j] = coset_of[self.mul(ri, rj)];
            }
        }
        FiniteGroup::from_table(table)
    }

    /// Left-coset partition of `G/H`: `(coset index per element, reps)`,
    /// with cosets numbered in first-seen order scanning ascending, so each
    /// rep is the least element of its coset.
    fn coset_partition(&self, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for &x in &h.elements {
                coset_of[self.mul(g, x)] = id;
            }
        }
        (coset_of, reps)
    }

    // ----- constructors ---------------------------------------------------

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_table(vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(table).expect("cyclic group")
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let idx = |a: usize, b: usize| a * m + b;
        let mut table = vec![vec![0; n * m]; n * m];
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        table[idx(a1, b1)][idx(a2, b2)] = idx(self.mul(a1, a2), other.mul(b1, b2));
                    }
                }
            }
        }
        FiniteGroup::from_table(table).expect("direct product")
    }

    /// `⟨a, b | a^n = 1, b^m = a^s, b·a·b⁻¹ = a^r⟩` as the element set
    /// `a^i b^j` with `0 ≤ i < n`, `0 ≤ j < m`. Needs `r^m ≡ 1` and
    /// `s·(r-1) ≡ 0 (mod n)` for the presentation to define a group of
    /// order `n·m`.
    pub fn metacyclic(n: usize, m: usize, r: usize, s: usize) -> Result<FiniteGroup> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidGroup("metacyclic parameters must be positive".into()));
        }
        let modn = |x: usize| x % n;
        let pow_r = |j: usize| -> usize {
            let mut acc = 1usize;
            for _ in 0..j {
                acc = acc * r % n;
            }
            acc
        };
        if pow_r(m) != 1 % n || s * (r + n - 1) % n != 0 {
            return Err(Error::InvalidGroup(format!(
                "inconsistent metacyclic data (n={n}, m={m}, r={r}, s={s})"
            )));
        }
        let idx = |i: usize, j: usize| j * n + i;
        let mut table = vec![vec![0; n * m]; n * m];
        for i1 in 0..n {
            for j1 in 0..m {
                for i2 in 0..n {
                    for j2 in 0..m {
                        let mut i = modn(i1 + i2 * pow_r(j1));
                        let mut j = j1 + j2;
                        if j >= m {
                            j -= m;
                            i = modn(i + s);
                        }
                        table[idx(i1, j1)][idx(i2, j2)] = idx(i, j);
                    }
                }
            }
        }
        FiniteGroup::from_table(table)
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> FiniteGroup {
        FiniteGroup::metacyclic(n, 2, n - 1, 0).expect("dihedral group")
    }

    /// Dicyclic group of order `4n`; `n = 2` gives the quaternion group Q8
    /// and `n = 4` the generalized quaternion group Q16.
    pub fn dicyclic(n: usize) -> FiniteGroup {
        FiniteGroup::metacyclic(2 * n, 2, 2 * n - 1, n).expect("dicyclic group")
    }

    pub fn klein_four() -> FiniteGroup {
        FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))
    }

    /// `(Z/2)^k`.
    pub fn elementary_abelian_2(k: u32) -> FiniteGroup {
        (0..k).fold(FiniteGroup::trivial(), |acc, _| acc.direct_product(&FiniteGroup::cyclic(2)))
    }

    /// Closure of permutation generators on `points` letters; elements are
    /// sorted lexicographically (the identity comes first).
    pub fn from_permutations(points: usize, generators: &[Vec<usize>]) -> Result<FiniteGroup> {
        use std::collections::BTreeSet;
        for g in generators {
            let mut seen = vec![false; points];
            if g.len() != points || g.iter().any(|&x| x >= points) {
                return Err(Error::InvalidGroup("bad permutation generator".into()));
            }
            for &x in g {
                if seen[x] {
                    return Err(Error::InvalidGroup("generator is not a permutation".into()));
                }
                seen[x] = true;
            }
        }
        let identity: Vec<usize> = (0..points).collect();
        let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
        elements.insert(identity.clone());
        let mut frontier = vec![identity];
        while let Some(p) = frontier.pop() {
            for g in generators {
                let q: Vec<usize> = (0..points).map(|x| g[p[x]]).collect();
                if elements.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: std::collections::HashMap<&[usize], usize> =
            elems.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c: Vec<usize> = (0..points).map(|x| a[b[x]]).collect();
                table[i][j] = index[c.as_slice()];
            }
        }
        FiniteGroup::from_table(table)
    }

    pub fn symmetric_3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    pub fn alternating_4() -> FiniteGroup {
        FiniteGroup::from_permutations(4, &[vec![1, 0, 3, 2], vec![0, 2, 3, 1]]).expect("A4")
    }

    /// Semidirect product `A ⋊ H` with `act(h, a)` the action of `h ∈ H` on
    /// `a ∈ A` by automorphisms; elements are pairs `(a, h)` indexed as
    /// `h·|A| + a`.
    pub fn semidirect(
        a: &FiniteGroup,
        h: &FiniteGroup,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<FiniteGroup> {
        let (na, nh) = (a.order(), h.order());
        let idx = |x: usize, y: usize| y * na + x;
        let mut table = vec![vec![0; na * nh]; na * nh];
        for x1 in 0..na {
            for y1 in 0..nh {
                for x2 in 0..na {
                    for y2 in 0..nh {
                        let twisted = act(y1, x2);
                        if twisted >= na {
                            return Err(Error::InvalidGroup("action out of range".into()));
                        }
                        table[idx(x1, y1)][idx(x2, y2)] = idx(a.mul(x1, twisted), h.mul(y1, y2));
                    }
                }
            }
        }
        FiniteGroup::from_table(table)
    }

    // ----- Sylow and classification ---------------------------------------

    /// A Sylow 2-subgroup, grown through normalizers one index-2 step at a
    /// time; among all its conjugates the one with the lexicographically
    /// least element list is returned, so the result is deterministic.
    pub fn sylow2(&self) -> Result<Subgroup> {
        self.ensure_analyzable()?;
        let n = self.order();
        let target = {
            let mut t = 1;
            let mut m = n;
            while m % 2 == 0 {
                t *= 2;
                m /= 2;
            }
            t
        };
        let mut p = self.trivial_subgroup();
        while p.order() < target {
            let nz = self.normalizer(&p);
            let x = nz
                .elements
                .iter()
                .copied()
                .find(|&x| !p.contains(x) && p.contains(self.mul(x, x)))
                .expect("a 2-subgroup below Sylow grows inside its normalizer");
            let mut elements = p.elements.clone();
            elements.extend(p.elements.iter().map(|&y| self.mul(x, y)));
            elements.sort_unstable();
            p = Subgroup { elements };
            debug_assert!(self.is_subgroup(&p));
        }
        let best = (0..n)
            .map(|g| self.conjugate_subgroup(&p, g).elements)
            .min()
            .expect("group is nonempty");
        Ok(Subgroup { elements: best })
    }

    /// The subgroup as a standalone group (elements relabelled `0..|S|` in
    /// sorted order), plus the relabelling back into the parent.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(s) {
            return Err(Error::NotASubgroup);
        }
        let lookup: std::collections::HashMap<usize, usize> =
            s.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = s.order();
        let mut table = vec![vec![0; k]; k];
        for i in 0..k {
            for j in 0..k {
                table[i][j] = lookup[&self.mul(s.elements[i], s.elements[j])];
            }
        }
        Ok((FiniteGroup::from_table(table)?, s.elements.clone()))
    }

    /// Case split for a 2-group `S`: trivial, nontrivial cyclic, metacyclic
    /// but not cyclic (with a Klein-four flag), or not metacyclic. The
    /// metacyclic test enumerates all cyclic normal subgroups `N ⊴ S` and
    /// asks whether some quotient `S/N` is cyclic.
    pub fn classify_sylow2(&self, s: &Subgroup) -> Result<Sylow2Class> {
        self.ensure_analyzable()?;
        if !s.order().is_power_of_two() {
            return Err(Error::Not2Group);
        }
        if s.order() == 1 {
            return Ok(Sylow2Class::Trivial);
        }
        let (sg, _) = self.subgroup_as_group(s)?;
        let k = sg.order();
        if (0..k).any(|x| sg.element_order(x) == k) {
            return Ok(Sylow2Class::NontrivialCyclic);
        }
        let metacyclic = (0..k).any(|x| {
            let n = sg.closure(&[x]);
            if !sg.is_normal(&n) {
                return false;
            }
            let q = sg.quotient(&n).expect("normal subgroup");
            let qo = q.order();
            (0..qo).any(|y| q.element_order(y) == qo)
        });
        if !metacyclic {
            return Ok(Sylow2Class::NotMetacyclic);
        }
        // Two distinct commuting involutions span a Klein four group.
        let involutions: Vec<usize> = (1..k).filter(|&x| sg.mul(x, x) == 0).collect();
        let contains_klein = involutions.iter().enumerate().any(|(i, &u)| {
            involutions[i + 1..].iter().any(|&v| sg.mul(u, v) == sg.mul(v, u))
        });
        Ok(Sylow2Class::MetacyclicNotCyclic { contains_klein })
    }

    /// Elementary divisors of an abelian group, from the counts of solutions
    /// of `x^{p^k} = 1` for each prime `p` dividing the order.
    pub fn abelian_invariants(&self) -> Result<AbelianInvariants> {
        self.ensure_analyzable()?;
        if !self.is_abelian() {
            return Err(Error::InvalidGroup("abelian invariants of a nonabelian group".into()));
        }
        let n = self.order() as u64;
        if n == 1 {
            return Ok(AbelianInvariants { divisors: vec![] });
        }
        // For each prime p: c_k := log_p #{x : x^{p^k} = 1} - log_p #{x :
        // x^{p^{k-1}} = 1} counts the cyclic p-factors of exponent >= k, so
        // the staircase (c_k) transposes into the factor exponents.
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, _) in crate::arith::factorize(n) {
            let count_killed_by = |e: u32| -> u64 {
                let pk = p.pow(e) as i64;
                (0..self.order()).filter(|&x| self.pow(x, pk) == 0).count() as u64
            };
            let log_p = |mut c: u64| -> u32 {
                let mut l = 0;
                while c > 1 {
                    debug_assert_eq!(c % p, 0);
                    c /= p;
                    l += 1;
                }
                l
            };
            let mut cs: Vec<u32> = Vec::new();
            let mut prev = 0u32;
            for k in 1.. {
                let logp = log_p(count_killed_by(k));
                if logp == prev {
                    break;
                }
                cs.push(logp - prev);
                prev = logp;
            }
            let mut factors: Vec<u32> = Vec::new();
            for k in 1..=cs.len() {
                let here = cs[k - 1];
                let next = cs.get(k).copied().unwrap_or(0);
                for _ in 0..(here - next) {
                    factors.push(k as u32);
                }
            }
            factors.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push((p, factors));
        }
        let rank = per_prime.iter().map(|(_, f)| f.len()).max().unwrap_or(0);
        let mut divisors = vec![1u64; rank];
        for (p, factors) in &per_prime {
            for (slot, &e) in factors.iter().enumerate() {
                divisors[rank - 1 - slot] *= p.pow(e);
            }
        }
        divisors.retain(|&d| d > 1);
        debug_assert_eq!(divisors.iter().product::<u64>(), n);
        debug_assert!(divisors.windows(2).all(|w| w[1] % w[0] == 0));
        Ok(AbelianInvariants { divisors })
    }

    /// Sign of the permutation each group element induces on the left
    /// cosets `G/H`; one `±1` per element.
    pub fn delta_sign_character(&self, h: &Subgroup) -> Result<Vec<i8>> {
        if !self.is_subgroup(h) {
            return Err(Error::NotASubgroup);
        }
        let (coset_of, reps) = self.coset_partition(h);
        let k = reps.len();
        let n = self.order();
        let mut out = Vec::with_capacity(n);
        for s in 0..n {
            // Permutation on cosets: coset(r) -> coset(s·r).
            let perm: Vec<usize> = reps.iter().map(|&r| coset_of[self.mul(s, r)]).collect();
            out.push(permutation_sign(&perm, k));
        }
        Ok(out)
    }

    /// Transfer `T_{G/H}(g)` as the canonical representative (least element)
    /// of its class in `H/[H,H]`.
    pub fn transfer_map(&self, h: &Subgroup, g: usize) -> Result<usize> {
        if !self.is_subgroup(h) {
            return Err(Error::NotASubgroup);
        }
        let (coset_of, reps) = self.coset_partition(h);
        let mut product = 0usize;
        for &r in &reps {
            let gr = self.mul(g, r);
            let target_rep = reps[coset_of[gr]];
            let hi = self.mul(self.inv(target_rep), gr);
            debug_assert!(h.contains(hi));
            product = self.mul(product, hi);
        }
        // Reduce modulo [H, H].
        let (hg, back) = self.subgroup_as_group(h)?;
        let lookup: std::collections::HashMap<usize, usize> =
            back.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let hderived = hg.commutator_subgroup();
        let p_local = lookup[&product];
        let class_min = hderived
            .elements
            .iter()
            .map(|&x| back[hg.mul(p_local, x)])
            .min()
            .expect("derived subgroup is nonempty");
        Ok(class_min)
    }

    /// Cross-checks tying the sign character to the Sylow-2 shape:
    /// (a) the sign character of the regular action equals the `|G'|`-th
    /// power of the sign character on `G/G'` cosets, pointwise, and
    /// (b) that character is nontrivial exactly when the Sylow 2-subgroup is
    /// nontrivial cyclic, exactly when `rk2(G/G') = 1` with `|G'|` odd.
    pub fn delta_consistency_check(&self) -> Result<bool> {
        self.ensure_analyzable()?;
        let delta1 = self.delta_sign_character(&self.trivial_subgroup())?;
        let derived = self.commutator_subgroup();
        let delta_derived = self.delta_sign_character(&derived)?;
        let exp = derived.order() as u32;
        let powered: Vec<i8> = delta_derived
            .iter()
            .map(|&s| if exp % 2 == 0 { 1 } else { s })
            .collect();
        let part_a = delta1 == powered;

        let nontrivial = delta1.iter().any(|&s| s == -1);
        let sylow = self.sylow2()?;
        let class = self.classify_sylow2(&sylow)?;
        let is_cyclic_case = class == Sylow2Class::NontrivialCyclic;
        let ab = self.quotient(&derived)?.abelian_invariants()?;
        let rank_condition = ab.rk2() == 1 && derived.order() % 2 == 1;
        let part_b = nontrivial == is_cyclic_case && is_cyclic_case == rank_condition;
        Ok(part_a && part_b)
    }
}

fn permutation_sign(perm: &[usize], k: usize) -> i8 {
    let mut seen = vec![false; k];
    let mut sign = 1i8;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_sylow() {
        let z12 = FiniteGroup::cyclic(12);
        let s = z12.sylow2().unwrap();
        assert_eq!(s.order(), 4);
        assert_eq!(s.elements(), &[0, 3, 6, 9]);

        let s3 = FiniteGroup::symmetric_3();
        assert_eq!(s3.sylow2().unwrap().order(), 2);

        let q8 = FiniteGroup::dicyclic(2);
        assert_eq!(q8.sylow2().unwrap().order(), 8);
    }

    #[test]
    fn classify_examples() {
        let z8 = FiniteGroup::cyclic(8);
        let s = z8.sylow2().unwrap();
        assert_eq!(z8.classify_sylow2(&s).unwrap(), Sylow2Class::NontrivialCyclic);

        let q8 = FiniteGroup::dicyclic(2);
        let s = q8.sylow2().unwrap();
        assert_eq!(
            q8.classify_sylow2(&s).unwrap(),
            Sylow2Class::MetacyclicNotCyclic { contains_klein: false }
        );

        let e8 = FiniteGroup::elementary_abelian_2(3);
        let s = e8.sylow2().unwrap();
        assert_eq!(e8.classify_sylow2(&s).unwrap(), Sylow2Class::NotMetacyclic);

        let z3 = FiniteGroup::cyclic(3);
        let s = z3.sylow2().unwrap();
        assert_eq!(z3.classify_sylow2(&s).unwrap(), Sylow2Class::Trivial);

        let v = FiniteGroup::klein_four();
        let s = v.sylow2().unwrap();
        assert_eq!(
            v.classify_sylow2(&s).unwrap(),
            Sylow2Class::MetacyclicNotCyclic { contains_klein: true }
        );
    }

    #[test]
    fn commutators_and_invariants() {
        let s3 = FiniteGroup::symmetric_3();
        let derived = s3.commutator_subgroup();
        assert_eq!(derived.order(), 3);
        let ab = s3.quotient(&derived).unwrap().abelian_invariants().unwrap();
        assert_eq!(ab.divisors(), &[2]);
        assert_eq!(ab.rk2(), 1);

        let q8 = FiniteGroup::dicyclic(2);
        let derived = q8.commutator_subgroup();
        assert_eq!(derived.order(), 2);
        let ab = q8.quotient(&derived).unwrap().abelian_invariants().unwrap();
        assert_eq!(ab.divisors(), &[2, 2]);
        assert_eq!(ab.rk2(), 2);

        let z6 = FiniteGroup::cyclic(6);
        assert!(z6.commutator_subgroup().is_trivial());
        let ab = z6.abelian_invariants().unwrap();
        assert_eq!(ab.divisors(), &[6]);
        assert_eq!(ab.rk2(), 1);

        let g = FiniteGroup::cyclic(4).direct_product(&FiniteGroup::cyclic(2));
        assert_eq!(g.abelian_invariants().unwrap().divisors(), &[2, 4]);
        let g = FiniteGroup::cyclic(12).direct_product(&FiniteGroup::cyclic(2));
        assert_eq!(g.abelian_invariants().unwrap().divisors(), &[2, 12]);
    }

    #[test]
    fn delta_sign_examples() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.delta_sign_character(&z2.trivial_subgroup()).unwrap(), vec![1, -1]);

        let z3 = FiniteGroup::cyclic(3);
        assert_eq!(z3.delta_sign_character(&z3.trivial_subgroup()).unwrap(), vec![1, 1, 1]);

        // Q8 regular action: every non-identity element acts evenly.
        let q8 = FiniteGroup::dicyclic(2);
        let d = q8.delta_sign_character(&q8.trivial_subgroup()).unwrap();
        assert!(d.iter().all(|&s| s == 1));

        // S3 on cosets of the trivial subgroup: sign of the regular action.
        let s3 = FiniteGroup::symmetric_3();
        let d = s3.delta_sign_character(&s3.trivial_subgroup()).unwrap();
        assert!(d.iter().any(|&s| s == -1));
    }

    #[test]
    fn delta_is_homomorphism() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::symmetric_3(),
            FiniteGroup::dicyclic(2),
            FiniteGroup::dihedral(4),
            FiniteGroup::alternating_4(),
        ] {
            for h in [g.trivial_subgroup(), g.commutator_subgroup()] {
                let d = g.delta_sign_character(&h).unwrap();
                for a in 0..g.order() {
                    for b in 0..g.order() {
                        assert_eq!(d[g.mul(a, b)], d[a] * d[b]);
                    }
                }
            }
        }
    }

    #[test]
    fn transfer_examples() {
        // Abelian: transfer is g^[G:H].
        let z4 = FiniteGroup::cyclic(4);
        let h = z4.subgroup(vec![0, 2]).unwrap();
        for g in 0..4 {
            assert_eq!(z4.transfer_map(&h, g).unwrap(), z4.pow(g, 2));
        }

        // S3 to A3: the two coset factors of a 3-cycle are g and its
        // conjugate by a transposition, i.e. g^{-1}, so the transfer is
        // trivial — A3 is the derived subgroup.
        let s3 = FiniteGroup::symmetric_3();
        let a3 = s3.commutator_subgroup();
        assert_eq!(a3.order(), 3);
        for g in 0..s3.order() {
            assert_eq!(s3.transfer_map(&a3, g).unwrap(), 0);
        }

        // A nontrivial nonabelian transfer: S3 to a non-normal order-2
        // subgroup; the result lands in H and is multiplicative into H/[H,H].
        let tau = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let h = s3.subgroup(vec![0, tau]).unwrap();
        for g in 0..6 {
            let t = s3.transfer_map(&h, g).unwrap();
            assert!(h.contains(t));
        }

        // Transfer to the derived subgroup is trivial.
        for g in [FiniteGroup::symmetric_3(), FiniteGroup::dicyclic(2), FiniteGroup::dihedral(4)] {
            let derived = g.commutator_subgroup();
            for x in 0..g.order() {
                assert_eq!(g.transfer_map(&derived, x).unwrap(), 0, "transfer to G'");
            }
        }
    }

    #[test]
    fn delta_consistency_spot() {
        for g in [
            FiniteGroup::cyclic(2),
            FiniteGroup::symmetric_3(),
            FiniteGroup::dicyclic(2),
            FiniteGroup::cyclic(12),
            FiniteGroup::alternating_4(),
        ] {
            assert!(g.delta_consistency_check().unwrap(), "{g:?}");
        }
    }

    #[test]
    fn quotient_and_metacyclic_validation() {
        let s3 = FiniteGroup::symmetric_3();
        let a3 = s3.commutator_subgroup();
        let q = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        // Non-normal subgroup is rejected.
        let two = s3
            .subgroup((0..6).filter(|&x| s3.pow(x, 2) == 0).take(2).collect())
            .unwrap();
        assert!(s3.quotient(&two).is_err());
        // Bad metacyclic data is rejected.
        assert!(FiniteGroup::metacyclic(8, 2, 2, 0).is_err());
    }

    #[test]
    fn table_validation() {
        // Identity not at zero.
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        // Not a Latin square.
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        // Z5 is fine.
        assert!(FiniteGroup::from_table(
            (0..5).map(|i| (0..5).map(|j| (i + j) % 5).collect()).collect()
        )
        .is_ok());
    }

    #[test]
    fn element_orders_and_pow() {
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(z6.element_order(1), 6);
        assert_eq!(z6.element_order(2), 3);
        assert_eq!(z6.element_order(3), 2);
        assert_eq!(z6.pow(1, -1), 5);
        assert_eq!(z6.pow(5, 0), 0);
    }

    #[test]
    fn subgroup_enumeration() {
        // Z6 has subgroups of orders 1, 2, 3, 6; Q8 has 1, 1, 3, 1 of
        // orders 1, 2, 4, 8.
        let z6 = FiniteGroup::cyclic(6);
        let mut orders: Vec<usize> =
            z6.all_subgroups().unwrap().iter().map(Subgroup::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3, 6]);

        let q8 = FiniteGroup::dicyclic(2);
        let mut orders: Vec<usize> =
            q8.all_subgroups().unwrap().iter().map(Subgroup::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 4, 4, 4, 8]);
    }

    #[test]
    fn gallagher_dichotomy_over_normal_subgroups() {
        // The coset sign character is a homomorphism for every subgroup of
        // every corpus group; for normal H it is trivial unless the Sylow
        // 2-subgroup of G/H is nontrivial cyclic, in which case it is the
        // unique order-2 character.
        for (name, g) in super::catalog::dichotomy_corpus() {
            for h in g.all_subgroups().unwrap() {
                let delta = g.delta_sign_character(&h).unwrap();
                for a in 0..g.order() {
                    for b in 0..g.order() {
                        assert_eq!(
                            delta[g.mul(a, b)],
                            delta[a] * delta[b],
                            "{name}, |H| = {}",
                            h.order()
                        );
                    }
                }
                if !g.is_normal(&h) {
                    continue;
                }
                let nontrivial = delta.iter().any(|&s| s == -1);
                let quotient = g.quotient(&h).unwrap();
                let sylow = quotient.sylow2().unwrap();
                let cyclic_case = quotient.classify_sylow2(&sylow).unwrap()
                    == Sylow2Class::NontrivialCyclic;
                assert_eq!(nontrivial, cyclic_case, "{name}, |H| = {}", h.order());
            }
        }
    }

    #[test]
    fn transfer_to_derived_subgroup_is_trivial_over_corpus() {
        for (name, g) in super::catalog::dichotomy_corpus() {
            let derived = g.commutator_subgroup();
            for x in 0..g.order() {
                assert_eq!(g.transfer_map(&derived, x).unwrap(), 0, "{name} at {x}");
            }
        }
    }

    #[test]
    fn two_torsion_is_multiplicative_over_products() {
        for a in 1..=8usize {
            for b in 1..=8usize {
                if a * b > 64 {
                    continue;
                }
                let ga = FiniteGroup::cyclic(a);
                let gb = FiniteGroup::cyclic(b);
                let prod = ga.direct_product(&gb);
                assert_eq!(
                    prod.two_torsion_count(),
                    ga.two_torsion_count() * gb.two_torsion_count(),
                    "Z{a} x Z{b}"
                );
            }
        }
    }
}
