//! Restriction and gluing over covering ideals, and functoriality of Σ.
mod common;

use common::*;
use extseq_core::exteriority::{ExtSpace, Externology};
use extseq_core::maps::compose;
use extseq_core::sheaves::*;
use extseq_core::{AffineInj, FPSeq, PointRef, Thread};
use proptest::prelude::*;

/// A covering ideal: residues modulo `L` each get a progression, plus noise.
fn covering_ideal(e: &mut Entropy) -> Ideal {
    let l = 1 + e.next(6);
    let mut gens: Vec<(u64, u64)> = (0..l).map(|r| (l, r + l * e.next(3))).collect();
    for _ in 0..e.next(3) {
        gens.push((1 + e.next(8), e.next(10)));
    }
    Ideal::affine(Monoid::M, &gens)
}

fn ext_space(e: &mut Entropy) -> ExtSpace {
    loop {
        let x = space(e);
        let l = x.points().iter().filter(|_| e.next(3) == 0).cloned().collect();
        let d = x.tails().iter().filter(|_| e.flip()).cloned().collect();
        let ext = ExtSpace::new(x, Externology { l, d }).unwrap();
        if !ext.generic_exterior_sequences().is_empty() {
            return ext;
        }
    }
}

fn exterior_seq(x: &ExtSpace, e: &mut Entropy) -> FPSeq {
    let base = x.generic_exterior_sequences();
    let threads = (0..1 + e.next(3))
        .map(|_| {
            let th = base[e.next(base.len() as u64) as usize].threads[0].clone();
            match th {
                Thread::Walk { tail, .. } => Thread::Walk { tail, a: 1 + e.next(3), b: e.next(5) },
                c => c,
            }
        })
        .collect();
    FPSeq { prefix: (0..e.next(4)).map(|_| point_ref(x.space(), e)).collect(), threads }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn restriction_then_glue_recovers_the_sequence(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = ext_space(&mut e);
        let f = build_sigma(&x);
        let ideal = covering_ideal(&mut e);
        prop_assert!(matches!(is_cover(&ideal, Topology::Je, 8).unwrap(), Cover::Yes(_)));
        let s = exterior_seq(&x, &mut e);
        prop_assert!(f.is_ext(&s));
        let family = restrict(&s, &ideal, &YonedaN.sample_conv(6)).unwrap();
        prop_assert_eq!(glue(&f, &ideal, &family).unwrap(), Glue::Amalgamation(s.clone()));
        // another candidate glues only if it agrees with s on every generator
        let other = exterior_seq(&x, &mut e);
        let mut forged = family.clone();
        forged.point_values = other.clone();
        forged.conv_values.clear();
        let agrees = family.on_generators.iter().all(|(u, h)| other.subseq(u).same_as(h));
        let glued = glue(&f, &ideal, &forged).unwrap();
        if agrees {
            prop_assert_eq!(glued, Glue::Amalgamation(other));
        } else {
            prop_assert!(matches!(glued, Glue::Incompatible { .. }), "{:?}", glued);
        }
    }

    #[test]
    fn sigma_is_functorial(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = ext_space(&mut e);
        let y = ext_space(&mut e);
        let z = ext_space(&mut e);
        let f = map(x.space(), y.space(), &mut e);
        let g = map(y.space(), z.space(), &mut e);
        let gf = compose(&f, &g);
        let (sf, sg, sgf) = (CMap::sigma(&f), CMap::sigma(&g), CMap::sigma(&gf));
        let sx = build_sigma(&x);
        for s in sx.sample_ext(10) {
            prop_assert!((sgf.f_e)(&s).same_as(&(sg.f_e)(&(sf.f_e)(&s))));
        }
        for c in sx.sample_conv(10) {
            prop_assert!((sgf.f_c)(&c).same_as(&(sg.f_c)(&(sf.f_c)(&c))));
        }
        for p in sx.sample_points(10) {
            prop_assert_eq!((sgf.f)(&p), (sg.f)(&(sf.f)(&p)));
        }
    }

    #[test]
    fn sigma_of_exterior_maps_is_a_cmap(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = ext_space(&mut e);
        let y = ext_space(&mut e);
        let f = map(x.space(), y.space(), &mut e);
        prop_assume!(extseq_core::exteriority::is_exterior_map(&f, &x, &y));
        prop_assert_eq!(cmap_check(&CMap::sigma(&f), &build_sigma(&x), &build_sigma(&y), 12), CMapCheck::Pass);
    }

    #[test]
    fn action_laws(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = ext_space(&mut e);
        let s = exterior_seq(&x, &mut e);
        let ms = sample_m(1 + e.next(20) as usize);
        let (u, v) = (&ms[e.next(ms.len() as u64) as usize], &ms[e.next(ms.len() as u64) as usize]);
        let left = compose_e(&compose_e(&s, u).unwrap(), v).unwrap();
        let right = compose_e(&s, &compose_e(u, v).unwrap()).unwrap();
        for n in 0..100 {
            prop_assert_eq!(left.at(n), right.at(n));
        }
        prop_assert!(compose_e(&s, &FPSeq::walk(NAT_TAIL, 1, 0)).unwrap().same_as(&s));
        // ev_n(s ∘ u) = ev_{u(n)}(s)
        for n in 0..20 {
            let un = match u.at(n) { PointRef::Tail { index, .. } => index, _ => unreachable!() };
            prop_assert_eq!(compose_e(&s, u).unwrap().at(n), s.at(un));
        }
        let affine = AffineInj { a: 1 + e.next(3), b: e.next(4) };
        prop_assert!(compose_e(&s, &FPSeq::walk(NAT_TAIL, affine.a, affine.b)).unwrap().same_as(&s.subseq(&affine)));
    }
}
