use proptest::prelude::*;

use pmod_core::coxeter::CoxeterSystem;
use pmod_core::garside;
use pmod_core::linrep;
use pmod_core::mcg::{full_twist, ComputableGroup, GroupExpr};
use pmod_core::word::{Letter, Word};

fn word_from(sys: &CoxeterSystem, raw: &[(usize, bool)]) -> Word {
    Word::from_letters(raw.iter().map(|&(a, inv)| Letter::new(sys.atoms()[a % sys.rank()].clone(), inv)).collect())
}

fn arb_raw(max: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..4, any::<bool>()), 0..max)
}

/// Replaces one occurrence of a relator side by the other.
fn rewrite_once(sys: &CoxeterSystem, w: &Word, pick: usize) -> Word {
    let letters = w.letters();
    let m = sys.coxeter_matrix();
    for off in 0..letters.len() {
        let i = (off + pick) % letters.len();
        for s in 0..sys.rank() {
            for t in 0..sys.rank() {
                if s == t {
                    continue;
                }
                let k = m[s][t] as usize;
                if i + k > letters.len() {
                    continue;
                }
                let at = |p: usize| if p % 2 == 0 { s } else { t };
                let matches = (0..k).all(|p| {
                    let l = &letters[i + p];
                    !l.inverse && sys.atom_index(&l.generator) == Some(at(p))
                });
                if matches {
                    let mut out = letters[..i].to_vec();
                    out.extend((0..k).map(|p| Letter::new(sys.atoms()[at(p + 1)].clone(), false)));
                    out.extend_from_slice(&letters[i + k..]);
                    return Word::from_letters(out);
                }
            }
        }
    }
    w.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_survives_relation_rewrites(raw in arb_raw(24), picks in prop::collection::vec(0usize..64, 1..6)) {
        for sys in [CoxeterSystem::b4(), CoxeterSystem::d4()] {
            let u = word_from(&sys, &raw);
            let mut v = u.clone();
            for &p in &picks {
                v = rewrite_once(&sys, &v, p);
            }
            prop_assert_eq!(garside::normal_form(&sys, &u).unwrap(), garside::normal_form(&sys, &v).unwrap());
        }
    }

    #[test]
    fn normal_form_word_is_equal_to_input(raw in arb_raw(20)) {
        for sys in [CoxeterSystem::b4(), CoxeterSystem::d4()] {
            let u = word_from(&sys, &raw);
            let nf = garside::normal_form(&sys, &u).unwrap();
            let back = nf.to_word(&sys);
            prop_assert_eq!(garside::normal_form(&sys, &back).unwrap(), nf);
        }
    }

    #[test]
    fn garside_and_matrices_agree(a in arb_raw(10), b in arb_raw(10)) {
        let b4 = CoxeterSystem::b4();
        let lk = linrep::lk_representation_on(&b4).unwrap();
        let d4 = CoxeterSystem::d4();
        let cw = linrep::cw_representation_on(&d4).unwrap();
        for (sys, rep) in [(&b4, &lk), (&d4, &cw)] {
            let (u, v) = (word_from(sys, &a), word_from(sys, &b));
            let c = Word::commutator(&u, &v);
            prop_assert_eq!(garside::is_trivial(sys, &c).unwrap(), rep.evaluate(&c).unwrap().is_identity());
            let central = garside::is_central(sys, &u).unwrap();
            let m = rep.evaluate(&u).unwrap();
            prop_assert_eq!(central, m.monomial_scalar_of().is_some());
        }
    }

    #[test]
    fn central_quotient_oracles_agree(raw in arb_raw(16), k in 0i64..3) {
        let b4 = CoxeterSystem::b4();
        let q = ComputableGroup::new(GroupExpr::quotient_text(GroupExpr::b4(), "(a1 b a2)^4").unwrap()).unwrap();
        let model = q.matrix_model().unwrap();
        let u = word_from(&b4, &raw);
        let twisted = u.concat(&garside::delta_word(&b4).pow(2 * k));
        prop_assert!(q.equal(&u, &twisted).unwrap());
        let c = Word::commutator(&u, &Word::generator(&b4.atoms()[0]));
        prop_assert_eq!(q.is_trivial(&c).unwrap(), model.is_trivial(&c).unwrap());
    }
}

#[test]
fn full_twist_is_central_and_nontrivial() {
    for k in 2..=5 {
        let pb = ComputableGroup::new(GroupExpr::PureBraid { k }).unwrap();
        let ft = full_twist(k);
        assert!(pb.is_central(&ft).unwrap());
        assert!(!pb.is_trivial(&ft).unwrap());
        assert!(pb.matrix_model().unwrap().evaluate(&ft).unwrap().monomial_scalar_of().is_some());
    }
}
