use multiplihedra::export::{export_polymake, parse_polymake, ExportBundle, Format};
use multiplihedra::rational::ratio;
use multiplihedra::realization::Weights;

const J4_GOLDEN: &str = include_str!("data/j4_q_half.polymake");

fn j4_export() -> String {
    let bundle = ExportBundle::build(4, &ratio(1, 2), &Weights::unit(4), Format::Polymake, false).unwrap();
    export_polymake(&bundle)
}

#[test]
fn j4_rows_match_golden_file() {
    let text = j4_export();
    let mut got: Vec<&str> = text.lines().collect();
    let mut want: Vec<&str> = J4_GOLDEN.lines().collect();
    assert_eq!(got[0], "POINTS");
    assert_eq!(got.len(), 22);
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn j4_values_match_golden_file() {
    let mut got = parse_polymake(&j4_export()).unwrap();
    let mut want = parse_polymake(J4_GOLDEN).unwrap();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn golden_rows_are_canonical() {
    for line in J4_GOLDEN.lines().skip(1) {
        assert!(line.starts_with("1 "), "{line}");
        assert!(!line.contains("2/2") && !line.contains("4/2"), "{line}");
    }
}
