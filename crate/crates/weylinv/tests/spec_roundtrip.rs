use proptest::prelude::*;

use weylinv::cli::{parse_spec, print_spec};
use weylinv::root_data::{GroupSpec, SimpleFactor};

fn factor() -> impl Strategy<Value = SimpleFactor> {
    prop_oneof![
        (1usize..=8).prop_map(SimpleFactor::a),
        (2usize..=6).prop_map(SimpleFactor::b),
        (1usize..=6).prop_map(SimpleFactor::c),
        (4usize..=7).prop_map(SimpleFactor::d),
        Just(SimpleFactor::e6()),
        Just(SimpleFactor::e7()),
    ]
}

/// A spec with up to two random kernel generators of order > 1.
fn spec() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(factor(), 1..=3)
        .prop_flat_map(|factors| {
            let moduli: Vec<Vec<i64>> = factors.iter().map(|f| f.center_moduli()).collect();
            let residue = moduli
                .iter()
                .map(|ms| ms.iter().map(|&m| 0..m).collect::<Vec<_>>())
                .collect::<Vec<_>>();
            (Just(factors), prop::collection::vec(residue, 0..=2))
        })
        .prop_filter_map("trivial generator", |(factors, kernel)| {
            let spec = GroupSpec::new(factors, kernel).ok()?;
            spec.kernel.iter().all(|g| spec.generator_order(g) > 1).then_some(spec)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(s in spec()) {
        let text = print_spec(&s);
        let back = parse_spec(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, s);
    }
}

#[test]
fn aliases_expand() {
    let cases = [
        ("PGL(4)", "SL(4) / mu(4)[1]"),
        ("PGSp(6)", "Sp(6) / mu(2)[1]"),
        ("SO(7)", "Spin(7) / mu(2)[1]"),
        ("(SL(8) x SL(8)) / mu(2)", "(SL(8) x SL(8)) / mu(2)[1,1]"),
    ];
    for (alias, full) in cases {
        assert_eq!(parse_spec(alias).unwrap(), parse_spec(full).unwrap(), "{alias}");
    }
    let pgo8 = parse_spec("PGO(8)").unwrap();
    assert_eq!(pgo8.factors, vec![SimpleFactor::d(4)]);
    assert_eq!(pgo8.kernel.len(), 2);
}
