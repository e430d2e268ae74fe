//! Built-in group catalog and the corpus the sign-character dichotomy is
//! checked over.
//!
//! Naming convention: the number in a name is the group order. `Z<n>` is
//! cyclic, `D8`/`D16` dihedral, `Q8`/`Q16` (generalized) quaternion, `SD16`
//! semidihedral, `M16` the modular group of order 16, `V` the Klein four
//! group, `E8` elementary abelian of order 8. Direct products join names
//! with `x`, as in `Z4xZ2`.

use super::FiniteGroup;
use crate::{Error, Result};

/// Look up a group by catalog name (see the module docs for the grammar).
pub fn named(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if let Some((left, right)) = name.split_once('x') {
        return Ok(named(left)?.direct_product(&named(right)?));
    }
    if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
        if n == 0 || n > super::MAX_ANALYZED_ORDER {
            return Err(Error::BadInput(format!("cyclic order out of range: {n}")));
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    match name {
        "1" => Ok(FiniteGroup::trivial()),
        "V" | "V4" => Ok(FiniteGroup::klein_four()),
        "E8" => Ok(FiniteGroup::elementary_abelian_2(3)),
        "E16" => Ok(FiniteGroup::elementary_abelian_2(4)),
        "S3" => Ok(FiniteGroup::symmetric_3()),
        "A4" => Ok(FiniteGroup::alternating_4()),
        "D8" => Ok(FiniteGroup::dihedral(4)),
        "D10" => Ok(FiniteGroup::dihedral(5)),
        "D12" => Ok(FiniteGroup::dihedral(6)),
        "D14" => Ok(FiniteGroup::dihedral(7)),
        "D16" => Ok(FiniteGroup::dihedral(8)),
        "Q8" => Ok(FiniteGroup::dicyclic(2)),
        "Q12" | "Dic3" => Ok(FiniteGroup::dicyclic(3)),
        "Q16" => Ok(FiniteGroup::dicyclic(4)),
        "SD16" => FiniteGroup::metacyclic(8, 2, 3, 0),
        "M16" => FiniteGroup::metacyclic(8, 2, 5, 0),
        "Z4sZ4" => FiniteGroup::metacyclic(4, 4, 3, 0),
        "Pauli16" => pauli_16(),
        "VsZ4" => v_semidirect_z4(),
        other => Err(Error::BadInput(format!("unknown catalog group {other:?}"))),
    }
}

/// Central product of the order-8 dihedral group with Z4 over their shared
/// central involution (the Pauli group).
fn pauli_16() -> Result<FiniteGroup> {
    let d8 = FiniteGroup::dihedral(4); // elements a^i b^j at index j*4 + i
    let z4 = FiniteGroup::cyclic(4);
    let prod = d8.direct_product(&z4); // index d*4 + c
    let center_a2_w2 = prod.subgroup(vec![0, 2 * 4 + 2])?;
    prod.quotient(&center_a2_w2)
}

/// `(Z/2)² ⋊ Z/4` with the order-4 generator swapping the two coordinates.
fn v_semidirect_z4() -> Result<FiniteGroup> {
    let v = FiniteGroup::klein_four(); // index y*2 + x
    let z4 = FiniteGroup::cyclic(4);
    let swap = [0usize, 2, 1, 3];
    FiniteGroup::semidirect(&v, &z4, |t, a| if t % 2 == 1 { swap[a] } else { a })
}

/// Every isomorphism type of order at most 16, plus the larger 2-groups the
/// dichotomy checks also sweep.
pub fn dichotomy_corpus() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    let mut push = |name: &str, g: Result<FiniteGroup>| {
        out.push((name.to_string(), g.expect("catalog construction")));
    };
    // Orders 1..15.
    for n in [1usize, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 16] {
        push(&format!("Z{n}"), Ok(FiniteGroup::cyclic(n)));
    }
    push("Z8", Ok(FiniteGroup::cyclic(8)));
    push("V", Ok(FiniteGroup::klein_four()));
    push("S3", Ok(FiniteGroup::symmetric_3()));
    push("Z4xZ2", named("Z4xZ2"));
    push("E8", named("E8"));
    push("D8", Ok(FiniteGroup::dihedral(4)));
    push("Q8", Ok(FiniteGroup::dicyclic(2)));
    push("Z3xZ3", named("Z3xZ3"));
    push("D10", Ok(FiniteGroup::dihedral(5)));
    push("Z6xZ2", named("Z6xZ2"));
    push("D12", Ok(FiniteGroup::dihedral(6)));
    push("A4", Ok(FiniteGroup::alternating_4()));
    push("Q12", Ok(FiniteGroup::dicyclic(3)));
    push("D14", Ok(FiniteGroup::dihedral(7)));
    // The fourteen groups of order 16.
    push("Z4xZ4", named("Z4xZ4"));
    push("Z2xZ2xZ4", named("Z2xZ2xZ4"));
    push("Z8xZ2", named("Z8xZ2"));
    push("E16", named("E16"));
    push("D16", Ok(FiniteGroup::dihedral(8)));
    push("SD16", named("SD16"));
    push("M16", named("M16"));
    push("Q16", Ok(FiniteGroup::dicyclic(4)));
    push("D8xZ2", named("D8xZ2"));
    push("Q8xZ2", named("Q8xZ2"));
    push("Z4sZ4", named("Z4sZ4"));
    push("Pauli16", named("Pauli16"));
    push("VsZ4", named("VsZ4"));
    // Larger sweep members.
    push("Z32", Ok(FiniteGroup::cyclic(32)));
    out
}

/// Parse the external JSON form: either `{"catalog": "Q8"}` or
/// `{"order": n, "table": [[...]]}`.
pub fn from_json(v: &serde_json::Value) -> Result<FiniteGroup> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::BadInput("group JSON must be an object".into()))?;
    if let Some(name) = obj.get("catalog") {
        let name = name
            .as_str()
            .ok_or_else(|| Error::BadInput("catalog name must be a string".into()))?;
        return named(name);
    }
    let order = obj
        .get("order")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::BadInput("group JSON needs \"order\" or \"catalog\"".into()))?;
    let table_json = obj
        .get("table")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::BadInput("group JSON needs a \"table\" array".into()))?;
    let mut table = Vec::with_capacity(table_json.len());
    for row in table_json {
        let row = row
            .as_array()
            .ok_or_else(|| Error::BadInput("table rows must be arrays".into()))?;
        let mut r = Vec::with_capacity(row.len());
        for x in row {
            let x = x
                .as_u64()
                .ok_or_else(|| Error::BadInput("table entries must be integers".into()))?;
            r.push(x as usize);
        }
        table.push(r);
    }
    if table.len() as u64 != order {
        return Err(Error::BadInput(format!(
            "declared order {order} does not match table size {}",
            table.len()
        )));
    }
    FiniteGroup::from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Sylow2Class;

    #[test]
    fn corpus_is_constructible_and_sized() {
        let corpus = dichotomy_corpus();
        assert_eq!(corpus.len(), 43);
        // 42 isomorphism types of order <= 16 (plus Z32): spot the counts
        // per order.
        let mut by_order = std::collections::BTreeMap::new();
        for (_, g) in &corpus {
            *by_order.entry(g.order()).or_insert(0usize) += 1;
        }
        assert_eq!(by_order[&16], 14);
        assert_eq!(by_order[&8], 5);
        assert_eq!(by_order[&12], 5);
        assert_eq!(by_order[&4], 2);
        assert_eq!(by_order[&32], 1);
    }

    #[test]
    fn order_16_types_are_pairwise_distinct() {
        // Compare coarse invariants: (abelian, #involutions, #order-4
        // elements, center size, commutator size).
        let fingerprint = |g: &FiniteGroup| {
            let inv2 = (1..g.order()).filter(|&x| g.element_order(x) == 2).count();
            let ord4 = (1..g.order()).filter(|&x| g.element_order(x) == 4).count();
            let center = (0..g.order())
                .filter(|&x| (0..g.order()).all(|y| g.mul(x, y) == g.mul(y, x)))
                .count();
            let derived = g.commutator_subgroup();
            let abelianization = g
                .quotient(&derived)
                .unwrap()
                .abelian_invariants()
                .unwrap()
                .divisors()
                .to_vec();
            (g.is_abelian(), inv2, ord4, center, derived.order(), abelianization)
        };
        let corpus = dichotomy_corpus();
        let sixteens: Vec<_> = corpus.iter().filter(|(_, g)| g.order() == 16).collect();
        for (i, (na, a)) in sixteens.iter().enumerate() {
            for (nb, b) in sixteens.iter().skip(i + 1) {
                assert_ne!(fingerprint(a), fingerprint(b), "{na} vs {nb} look isomorphic");
            }
        }
    }

    #[test]
    fn named_lookup_and_products() {
        assert_eq!(named("Q8").unwrap().order(), 8);
        assert_eq!(named("Z4xZ4").unwrap().order(), 16);
        assert_eq!(named("Z2xZ2xZ2").unwrap().order(), 8);
        assert!(named("Zx").is_err());
        assert!(named("foo").is_err());
    }

    #[test]
    fn pauli_and_swap_products_have_expected_shape() {
        let pauli = named("Pauli16").unwrap();
        assert_eq!(pauli.order(), 16);
        let s = pauli.sylow2().unwrap();
        assert!(matches!(
            pauli.classify_sylow2(&s).unwrap(),
            Sylow2Class::MetacyclicNotCyclic { contains_klein: true } | Sylow2Class::NotMetacyclic
        ));

        let vs = named("VsZ4").unwrap();
        assert_eq!(vs.order(), 16);
        // Its center is a Klein four group.
        let center: Vec<usize> = (0..16)
            .filter(|&x| (0..16).all(|y| vs.mul(x, y) == vs.mul(y, x)))
            .collect();
        assert_eq!(center.len(), 4);
        assert!(center.iter().all(|&x| vs.pow(x, 2) == 0));
    }

    #[test]
    fn two_group_classifications() {
        // Among the order-16 two-groups: the generalized quaternion group is
        // the only metacyclic one without a Klein four subgroup, elementary
        // abelian groups are not metacyclic, and Z4 x Z4 is metacyclic with
        // Klein four inside.
        let expect = [
            ("Z16", Sylow2Class::NontrivialCyclic),
            ("Q16", Sylow2Class::MetacyclicNotCyclic { contains_klein: false }),
            ("D16", Sylow2Class::MetacyclicNotCyclic { contains_klein: true }),
            ("SD16", Sylow2Class::MetacyclicNotCyclic { contains_klein: true }),
            ("M16", Sylow2Class::MetacyclicNotCyclic { contains_klein: true }),
            ("Z4xZ4", Sylow2Class::MetacyclicNotCyclic { contains_klein: true }),
            ("Z4sZ4", Sylow2Class::MetacyclicNotCyclic { contains_klein: true }),
            ("E16", Sylow2Class::NotMetacyclic),
            ("Q8xZ2", Sylow2Class::NotMetacyclic),
        ];
        for (name, class) in expect {
            let g = named(name).unwrap();
            let s = g.sylow2().unwrap();
            assert_eq!(g.classify_sylow2(&s).unwrap(), class, "{name}");
        }
    }

    #[test]
    fn json_round_trip() {
        let q8 = named("Q8").unwrap();
        let v = serde_json::json!({"catalog": "Q8"});
        assert_eq!(from_json(&v).unwrap(), q8);

        let z3 = FiniteGroup::cyclic(3);
        let v = serde_json::json!({"order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]});
        assert_eq!(from_json(&v).unwrap(), z3);

        let bad = serde_json::json!({"order": 2, "table": [[0,1],[1,1]]});
        assert!(from_json(&bad).is_err());
    }
}
