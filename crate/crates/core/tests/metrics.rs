mod support;

use linkgen_core::eval::{bleu2, levenshtein, ter, ter_edits, wer};
use proptest::prelude::*;
use support::metric_oracle;

fn tokens(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 0..=max)
}

fn nonempty(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn identities(x in nonempty(8)) {
        prop_assert_eq!(bleu2(&x, &x), Ok(1.0));
        prop_assert_eq!(wer(&x, &x), Ok(0.0));
        prop_assert_eq!(ter(&x, &x), Ok(0.0));
    }

    #[test]
    fn edit_distance_matches_oracles(a in tokens(8), b in tokens(8)) {
        let d = levenshtein(&a, &b);
        prop_assert_eq!(d, metric_oracle::edit_distance_table(&a, &b));
        if a.len() <= 6 && b.len() <= 6 {
            prop_assert_eq!(d, metric_oracle::edit_distance_brute(&a, &b));
        }
        prop_assert_eq!(d, levenshtein(&b, &a));
    }

    #[test]
    fn triangle(a in tokens(6), b in tokens(6), c in tokens(6)) {
        prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
    }

    #[test]
    fn bounds(a in nonempty(8), b in nonempty(8)) {
        let w = wer(&a, &b).unwrap();
        let t = ter(&a, &b).unwrap();
        let bl = bleu2(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&bl));
        prop_assert!(w >= 0.0 && w <= a.len().max(b.len()) as f64 / b.len() as f64);
        prop_assert!(t >= 0.0);
        prop_assert!(ter_edits(&a, &b) <= levenshtein(&a, &b));
        // wer symmetry through the shared distance
        let n = b.len() as f64;
        let m = a.len() as f64;
        prop_assert!((n * w - m * wer(&b, &a).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn bleu_matches_oracle(a in nonempty(8), b in nonempty(8)) {
        let got = bleu2(&a, &b).unwrap();
        let want = metric_oracle::bleu2(&a, &b);
        prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    }
}
