use lbfe_core::rs_scheme::SchemeParams;
use lbfe_core::sim::{Cluster, SchemeSpec};
use lbfe_core::{Elem, Field, Rational, RsCode};
use proptest::prelude::*;

fn elems(order: u32, len: usize) -> impl Strategy<Value = Vec<Elem>> {
    prop::collection::vec((0..order).prop_map(Elem), len)
}

fn params() -> SchemeParams {
    SchemeParams::new(Rational::new(3, 4), Rational::new(1, 4), Rational::new(1, 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scheme_agrees_with_naive(
        x in elems(16, 4),
        p in elems(16, 4),
        failed in prop::collection::btree_set(0usize..16, 0..=3),
    ) {
        let code = RsCode::full_length(Field::new(4, 2).unwrap(), 4).unwrap();
        let mut cluster = Cluster::deploy(code, &[x]).unwrap();
        let failed: Vec<usize> = failed.into_iter().collect();
        cluster.fail_nodes(&failed).unwrap();
        let fast = cluster.evaluate(0, &p, SchemeSpec::Main(params())).unwrap();
        let slow = cluster.evaluate_naive(0, &p).unwrap();
        prop_assert_eq!(&fast.values, &slow.values);
        prop_assert_eq!(fast.bits_downloaded, (16 - failed.len() as u64) * 3 * 2);
        prop_assert_eq!(slow.bits_downloaded, 4 * 4);
        for &j in &failed {
            prop_assert_eq!(cluster.node_ledger()[j], 0);
        }
    }

    #[test]
    fn shorter_codes_work_through_the_cluster(x in elems(16, 2), p in elems(16, 2), drop in 0usize..3) {
        let field = Field::new(4, 2).unwrap();
        let points: Vec<Elem> = (drop as u32..16).map(Elem).collect();
        let code = RsCode::new(field, 2, points).unwrap();
        let n = code.n();
        let mut cluster = Cluster::deploy(code, &[x]).unwrap();
        let fast = cluster.evaluate(0, &p, SchemeSpec::Main(params())).unwrap();
        let slow = cluster.evaluate_naive(0, &p).unwrap();
        prop_assert_eq!(fast.values, slow.values);
        prop_assert_eq!(fast.nodes_contacted.len(), n);
    }
}

#[test]
fn ledger_accumulates_across_calls() {
    let code = RsCode::full_length(Field::new(2, 3).unwrap(), 2).unwrap();
    let mut cluster = Cluster::deploy(code, &[vec![Elem(1), Elem(2)], vec![Elem(7), Elem(0)]]).unwrap();
    cluster.evaluate(0, &[Elem(1), Elem(1)], SchemeSpec::RateHalf).unwrap();
    cluster.evaluate(1, &[Elem(1), Elem(1)], SchemeSpec::RateHalf).unwrap();
    cluster.evaluate_naive(1, &[Elem(1), Elem(1)]).unwrap();
    assert_eq!(cluster.ledger(), 8 + 8 + 6);
    assert_eq!(cluster.cached_schemes(), 1);
}
