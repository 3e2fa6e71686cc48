//! Orbit sizes are polynomials in q whose degree is the orbit dimension.

use econe_core::bipartitions::enumerate_bipartitions;
use econe_core::enhanced_cone::{classify_all_by_jordan_type, classify_all_exhaustive, orbit_dimension, DEFAULT_CENSUS_BUDGET};
use econe_core::pi::interpolate;
use econe_core::Field;

const PRIMES: [u64; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

fn census(n: usize, q: u64) -> econe_core::enhanced_cone::OrbitCensus {
    classify_all_by_jordan_type(n, &Field::of_order(q).unwrap(), DEFAULT_CENSUS_BUDGET).unwrap()
}

#[test]
fn orbit_counts_have_orbit_dimension_as_degree() {
    for n in 1..=3 {
        let needed = n * n + 1;
        let tables: Vec<_> = PRIMES[..needed].iter().map(|&q| census(n, q)).collect();
        let holdout: Vec<_> = [4u64, 8, 9].iter().map(|&q| (q, census(n, q))).collect();
        for b in enumerate_bipartitions(n) {
            let samples: Vec<(u64, u64)> = PRIMES[..needed].iter().zip(&tables).map(|(&q, c)| (q, c.count(&b))).collect();
            let poly = interpolate(&samples).unwrap();
            assert_eq!(poly.degree(), Some(orbit_dimension(&b)), "{b}: {poly}");
            assert_eq!(*poly.coeffs().last().unwrap(), 1, "{b}: {poly}");
            for (q, c) in &holdout {
                assert_eq!(poly.eval(*q as i64), c.count(&b) as i128, "{b} at q={q}");
            }
        }
    }
}

#[test]
fn census_totals_and_methods_agree() {
    for (n, q) in [(1, 2), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let f = Field::of_order(q).unwrap();
        let a = classify_all_exhaustive(n, &f, DEFAULT_CENSUS_BUDGET).unwrap();
        let b = classify_all_by_jordan_type(n, &f, DEFAULT_CENSUS_BUDGET).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.total(), q.pow((n * n) as u32));
    }
    let mut sizes: Vec<u64> = census(2, 2).counts.values().copied().collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 3, 3, 3, 6]);
}
