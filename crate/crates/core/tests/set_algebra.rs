mod common;

use common::{entropy, evset, point_ref, space, has_points, Entropy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn boolean_laws(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        let u = x.universe();
        let (a, b) = (evset(&x, &mut e), evset(&x, &mut e));
        prop_assert_eq!(a.complement(u).unwrap().complement(u).unwrap(), a.clone());
        let left = a.union(&b, u).unwrap().complement(u).unwrap();
        let right = a.complement(u).unwrap().intersect(&b.complement(u).unwrap(), u).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.intersect(&b, u).unwrap().is_subset(&a, u).unwrap());
        prop_assert!(a.is_subset(&a.union(&b, u).unwrap(), u).unwrap());
        prop_assert!(a.difference(&a, u).unwrap().is_empty());
    }

    #[test]
    fn operations_are_pointwise(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        prop_assume!(has_points(&x));
        let u = x.universe();
        let (a, b) = (evset(&x, &mut e), evset(&x, &mut e));
        let (i, un, d) = (a.intersect(&b, u).unwrap(), a.union(&b, u).unwrap(), a.difference(&b, u).unwrap());
        for _ in 0..40 {
            let p = point_ref(&x, &mut e);
            let p = match p {
                extseq_core::PointRef::Tail { tail, index } => extseq_core::PointRef::Tail { tail, index: index * 3 },
                p => p,
            };
            prop_assert_eq!(i.contains(&p), a.contains(&p) && b.contains(&p));
            prop_assert_eq!(un.contains(&p), a.contains(&p) || b.contains(&p));
            prop_assert_eq!(d.contains(&p), a.contains(&p) && !b.contains(&p));
        }
    }

    #[test]
    fn insert_and_remove(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        prop_assume!(has_points(&x));
        let mut a = evset(&x, &mut e);
        let p = point_ref(&x, &mut e);
        a.insert(&p);
        prop_assert!(a.contains(&p));
        a.remove(&p);
        prop_assert!(!a.contains(&p));
        prop_assert!(a.check(x.universe()).is_ok());
    }
}
