mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compiler_invariants(seed in any::<u64>()) {
        let r = common::compiler_soundness_case(seed);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }
}
