//! Fibre counts against an unpruned enumeration of every flag of the right type.

use econe_core::bipartitions::enumerate_bipartitions;
use econe_core::enhanced_cone::{representative, EnhancedPoint};
use econe_core::ff_linalg::{enumerate_between, SubspaceBasis};
use econe_core::resolution::{fibre_points, resolution_datum, ResolutionDatum, DEFAULT_NODE_BUDGET};
use econe_core::Field;

fn all_flags(dims: &[usize], n: usize, f: &Field) -> Vec<Vec<SubspaceBasis>> {
    let mut flags = vec![vec![SubspaceBasis::zero(n)]];
    for &d in &dims[1..] {
        let mut next = Vec::new();
        for flag in flags {
            let last = flag.last().unwrap();
            for w in enumerate_between(last, &SubspaceBasis::full(n), d, f).unwrap() {
                let mut extended = flag.clone();
                extended.push(w);
                next.push(extended);
            }
        }
        flags = next;
    }
    flags
}

fn brute_force(d: &ResolutionDatum, pt: &EnhancedPoint) -> u64 {
    let f = &pt.field;
    all_flags(&d.dims, pt.n(), f)
        .into_iter()
        .filter(|flag| {
            flag[d.v_step].contains_vector(&pt.v, f)
                && flag.windows(2).all(|w| {
                    w[1].vectors().iter().all(|u| w[0].contains_vector(&pt.x.mul_vec(u, f).unwrap(), f))
                })
        })
        .count() as u64
}

#[test]
fn pruned_search_matches_unpruned_enumeration() {
    for (n, q) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        let f = Field::of_order(q).unwrap();
        let all = enumerate_bipartitions(n);
        for src in &all {
            let d = resolution_datum(src);
            for tgt in &all {
                let (pt, _) = representative(tgt, &f);
                let fast = fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count;
                assert_eq!(fast, brute_force(&d, &pt), "{src} over {tgt}, q={q}");
            }
        }
    }
}

#[test]
fn fibre_counts_over_open_orbit_source() {
    let f2 = Field::of_order(2).unwrap();
    let d = resolution_datum(&"2|".parse().unwrap());
    let counts: Vec<u64> = ["2|", "1|1", "1,1|", "|2", "|1,1"]
        .iter()
        .map(|t| {
            let (pt, _) = representative(&t.parse().unwrap(), &f2);
            fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count
        })
        .collect();
    assert_eq!(counts, vec![1, 1, 3, 1, 3]);
}
