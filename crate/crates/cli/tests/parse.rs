use idealforge::random::{random_certified, random_set, random_sum_set, rng_for};
use idealforge::{FamilyId, Pred, SymbolicSet};
use idealforge_cli::parse::{parse, parse_level, print, Parsed};
use proptest::prelude::*;
use rand::Rng;

fn generated(seed: u64) -> Parsed {
    let mut rng = rng_for(seed, "roundtrip", 0);
    match rng.gen_range(0..3) {
        0 => {
            let level = rng.gen_range(1..=4);
            Parsed::Level(random_set(&mut rng, level))
        }
        1 => Parsed::Sum(random_sum_set(&mut rng)),
        _ => {
            let fam = if rng.gen_bool(0.5) { FamilyId::A } else { FamilyId::B };
            Parsed::Certified(random_certified(&mut rng, fam, 2, 0.5))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parse_inverts_print(seed in any::<u64>()) {
        let e = generated(seed);
        let text = print(&e);
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(&back.parsed, &e, "{}", text);
        prop_assert_eq!(print(&back.parsed), text);
    }
}

#[test]
fn spec_style_examples() {
    let f2 = parse_level("level 2: x0 notin {0}").unwrap();
    assert_eq!(f2, SymbolicSet::atom(2, 0, Pred::not_in([0])).unwrap());
    let two = parse_level("level 2: (x0 in {1,2} & x1 notin {3}) | x0 in {5}").unwrap();
    assert_eq!(two.conjuncts().len(), 2);
    assert!(two.contains(&[5, 3]).unwrap());
    assert!(two.contains(&[2, 4]).unwrap());
    assert!(!two.contains(&[2, 3]).unwrap());

    let err = parse_level("level 2: x2 in {1}").unwrap_err();
    assert_eq!((err.line, err.col), (1, 10));
    assert!(err.msg.contains("out of range"), "{err}");
}

#[test]
fn errors_point_at_the_offending_text() {
    let err = parse("sum:\nsummand 1: x0 in {1}\nsummand 2: x0 in {1 2}\n").unwrap_err();
    assert_eq!(err.line, 3);
    assert!(err.col > 10, "{err}");
    let err = parse("certified family C:\n").unwrap_err();
    assert!(err.msg.contains("family"), "{err}");
    assert!(parse("").is_err());
    assert!(parse("level 2: x0 in {1}\nlevel 2: all\n").is_err());
    assert!(parse("level 1: !(x0 in {3}").is_err());
}
