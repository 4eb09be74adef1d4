use maxclass::homology::{b0_oracle, b0_oracle_with, literal_invariants, schur_multiplier, FiniteGroupTable, OracleOptions};
use maxclass::verify::shuffled;
use maxclass::zlinalg::AbelianInvariants;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(f: &[u64]) -> AbelianInvariants {
    AbelianInvariants::from_torsion(f.iter().copied())
}

fn perms(gens: &[&[usize]]) -> FiniteGroupTable {
    FiniteGroupTable::from_permutations(&gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn s3() -> FiniteGroupTable {
    perms(&[&[1, 0, 2], &[1, 2, 0]])
}

fn a4() -> FiniteGroupTable {
    perms(&[&[1, 2, 0, 3], &[1, 0, 3, 2]])
}

fn s4() -> FiniteGroupTable {
    perms(&[&[1, 0, 2, 3], &[1, 2, 3, 0]])
}

#[test]
fn schur_multipliers_of_small_groups() {
    let cases = [
        (s3(), c(&[])),
        (a4(), c(&[2])),
        (s4(), c(&[2])),
        (FiniteGroupTable::abelian(&[2, 4]), c(&[2])),
        (FiniteGroupTable::abelian(&[2, 2, 2]), c(&[2, 2, 2])),
        (FiniteGroupTable::abelian(&[3, 9]), c(&[3])),
    ];
    for (t, want) in cases {
        assert_eq!(schur_multiplier(&t).unwrap(), want, "order {}", t.order());
    }
}

#[test]
fn bogomolov_multipliers_vanish_below_order_p5() {
    for t in [s3(), a4(), s4(), FiniteGroupTable::abelian(&[2, 4])] {
        assert!(b0_oracle(&t).unwrap().is_trivial(), "order {}", t.order());
    }
}

#[test]
fn literal_quotients_match_the_fast_route() {
    for t in [s3(), a4(), FiniteGroupTable::abelian(&[2, 2, 2]), FiniteGroupTable::abelian(&[4, 4])] {
        let (h2, b0) = literal_invariants(&t).unwrap();
        let report = b0_oracle_with(&t, &OracleOptions::default()).unwrap();
        assert_eq!(h2, report.schur);
        assert_eq!(b0, report.b0);
    }
}

#[test]
fn relabelling_changes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in [s4(), FiniteGroupTable::abelian(&[2, 2, 4])] {
        let base = b0_oracle_with(&t, &OracleOptions::default()).unwrap();
        for _ in 0..3 {
            let r = b0_oracle_with(&shuffled(&t, &mut rng), &OracleOptions::default()).unwrap();
            assert_eq!((r.schur, r.b0), (base.schur.clone(), base.b0.clone()));
        }
    }
}

#[test]
fn orders_above_the_cap_are_refused() {
    let t = FiniteGroupTable::cyclic(40);
    let opts = OracleOptions {
        cap: 32,
        ..OracleOptions::default()
    };
    assert!(b0_oracle_with(&t, &opts).is_err());
}

#[test]
fn modular_and_integer_elimination_agree_on_p_groups() {
    use maxclass::group::{classical_2group, maximal_class_order_81, ClassicalKind};
    let mut tables = vec![
        FiniteGroupTable::abelian(&[4, 4]),
        FiniteGroupTable::abelian(&[3, 9]),
        classical_2group(ClassicalKind::Quaternion, 4).unwrap(),
        classical_2group(ClassicalKind::Semidihedral, 5).unwrap(),
    ];
    tables.extend(maximal_class_order_81());
    for t in &tables {
        let run = |modular| {
            let opts = OracleOptions {
                modular: Some(modular),
                full_pass: Some(false),
                literal_check: Some(false),
                ..OracleOptions::default()
            };
            b0_oracle_with(t, &opts).unwrap()
        };
        let (m, z) = (run(true), run(false));
        assert_eq!(m.modulus, Some((t.order() as u64) * maxclass::homology::prime_power(t.order()).unwrap().0 as u64));
        assert_eq!(z.modulus, None);
        assert_eq!((m.schur, m.b0), (z.schur, z.b0), "order {}", t.order());
    }
    assert!(b0_oracle_with(&s3(), &OracleOptions { modular: Some(true), ..OracleOptions::default() }).is_err());
}
