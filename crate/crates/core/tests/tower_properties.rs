//! Randomized tower properties: the conductor-after-trace rule composes
//! stepwise over arbitrary tame towers, and unramified steps preserve the
//! conductor.

use lambda_local::groups::FiniteGroup;
use lambda_local::padic::{conductor_after_trace, ExtensionDescriptor, LocalField, TowerStep};
use proptest::prelude::*;

fn step_e(s: &TowerStep) -> u64 {
    match s {
        TowerStep::Unramified(_) => 1,
        TowerStep::TotallyTame(e) | TowerStep::WildMarker(e) => *e,
    }
}

fn step_f(s: &TowerStep) -> u64 {
    match s {
        TowerStep::Unramified(f) => *f,
        _ => 1,
    }
}

fn one_step(base: &LocalField, s: &TowerStep) -> ExtensionDescriptor {
    match s {
        TowerStep::Unramified(f) => ExtensionDescriptor::unramified(base.clone(), *f).unwrap(),
        TowerStep::TotallyTame(e) => {
            ExtensionDescriptor::tame_totally_ramified(base.clone(), *e).unwrap()
        }
        TowerStep::WildMarker(_) => unreachable!(),
    }
}

proptest! {
    #[test]
    fn stepwise_equals_composed(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        n in -3i64..=3,
        raw_steps in prop::collection::vec((0u8..2, 1u64..=9), 1..4),
    ) {
        // Materialize steps, keeping the aggregate within the tame sweep
        // bounds (e <= 9, f <= 4) so the composed degree stays tiny.
        let mut steps = Vec::new();
        let mut e_total = 1u64;
        let mut f_total = 1u64;
        for (kind, size) in raw_steps {
            let step = if kind == 0 {
                TowerStep::Unramified(1 + size % 4)
            } else {
                let mut e = 1 + size % 9;
                while e % p == 0 {
                    e = e % 9 + 1;
                }
                TowerStep::TotallyTame(e)
            };
            if e_total * step_e(&step) > 9 || f_total * step_f(&step) > 4 {
                continue;
            }
            e_total *= step_e(&step);
            f_total *= step_f(&step);
            steps.push(step);
        }
        prop_assume!(!steps.is_empty());

        let base = LocalField::qp(p).unwrap();
        // Stepwise: feed the conductor through one extension at a time.
        let mut field = base.clone();
        let mut conductor = n;
        for s in &steps {
            let ext = one_step(&field, s);
            conductor = conductor_after_trace(&ext, conductor).unwrap();
            field = ext.top().unwrap();
            if matches!(s, TowerStep::Unramified(_)) {
                // An unramified step alone never moves the conductor.
                let again = one_step(&field, &TowerStep::Unramified(2));
                prop_assert_eq!(
                    conductor_after_trace(&again, conductor).unwrap(),
                    conductor
                );
            }
        }

        let degree = (e_total * f_total) as usize;
        let composed = ExtensionDescriptor::galois(
            base,
            steps.clone(),
            FiniteGroup::cyclic(degree),
        )
        .unwrap();
        prop_assert_eq!(conductor_after_trace(&composed, n).unwrap(), conductor);
    }
}
