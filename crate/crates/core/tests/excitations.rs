use std::f64::consts::PI;

use bogospec::bogoliubov::dispersion;
use bogospec::excitations::{enumerate_below, oracle_enumerate};
use bogospec::{LatticeSpec, Momentum, Potential};
use proptest::prelude::*;

fn lattice(dim: usize, scale: f64) -> LatticeSpec {
    LatticeSpec::new(2.0 * PI * scale, dim).unwrap()
}

fn potential(amplitude: f64, width: f64, dim: usize) -> Potential {
    Potential::gaussian(amplitude, width, dim).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn records_are_canonical(amp in 0.0..2.0f64, width in 0.5..6.0f64, kappa in 0.5..6.0f64, dim in 1usize..=2) {
        let lat = lattice(dim, 1.0);
        let pot = potential(amp, width, dim);
        let table = enumerate_below(&lat, &pot, kappa, 2.0).unwrap();
        for (p, records) in &table.sectors {
            let mut last = f64::NEG_INFINITY;
            for (i, r) in records.iter().enumerate() {
                prop_assert_eq!(r.rank, i + 1);
                prop_assert_eq!(&r.total_momentum, p);
                prop_assert!(r.energy <= kappa);
                prop_assert!(r.energy >= last - 1e-12);
                last = r.energy;
                prop_assert!(r.constituents.windows(2).all(|w| w[0] <= w[1]));
                prop_assert!(r.constituents.iter().all(|k| !k.is_zero()));
                let total = r.constituents.iter().fold(Momentum::zero(dim), |a, k| a + *k);
                prop_assert_eq!(&total, p);
                let sum: f64 = r.constituents.iter().map(|k| dispersion(&lat, &pot, k).unwrap()).sum();
                prop_assert!((sum - r.energy).abs() <= 1e-12 * sum.max(1.0));
            }
        }
    }

    #[test]
    fn removing_a_constituent_stays_in_the_table(amp in 0.0..2.0f64, kappa in 0.5..5.0f64) {
        let lat = lattice(1, 1.0);
        let pot = potential(amp, 3.0, 1);
        let table = enumerate_below(&lat, &pot, kappa, 4.0).unwrap();
        for (p, records) in &table.sectors {
            for r in records.iter().filter(|r| r.n_quasi() >= 2) {
                for i in 0..r.constituents.len() {
                    let mut rest = r.constituents.clone();
                    let k = rest.remove(i);
                    let q = *p - k;
                    if let Some(sub) = table.sectors.get(&q) {
                        prop_assert!(sub.iter().any(|s| s.constituents == rest), "{:?} minus {} missing", r.constituents, k);
                    }
                }
            }
        }
    }

    #[test]
    fn lower_cutoff_is_a_prefix(amp in 0.0..2.0f64, k1 in 0.5..4.0f64, dk in 0.0..3.0f64) {
        let lat = lattice(1, 1.0);
        let pot = potential(amp, 2.0, 1);
        let small = enumerate_below(&lat, &pot, k1, 3.0).unwrap();
        let large = enumerate_below(&lat, &pot, k1 + dk, 3.0).unwrap();
        for (p, records) in &small.sectors {
            let big = &large.sectors[p];
            prop_assert!(big.len() >= records.len());
            for (a, b) in records.iter().zip(big) {
                prop_assert_eq!(&a.constituents, &b.constituents);
                prop_assert_eq!(a.energy, b.energy);
            }
        }
    }

    #[test]
    fn agrees_with_oracle(amp in 0.0..1.5f64, width in 0.5..5.0f64, kappa in 0.5..4.0f64, dim in 1usize..=2) {
        let lat = lattice(dim, 1.0);
        let pot = potential(amp, width, dim);
        let table = enumerate_below(&lat, &pot, kappa, 1.5).unwrap();
        for (p, records) in &table.sectors {
            let oracle = oracle_enumerate(&lat, &pot, kappa, p).unwrap();
            prop_assert_eq!(oracle.len(), records.len());
            for (r, (e, ks)) in records.iter().zip(&oracle) {
                prop_assert_eq!(&r.constituents, ks);
                prop_assert!((r.energy - e).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn free_energies_are_integer_sums(kappa in 1.0..12.0f64) {
        let lat = lattice(1, 1.0);
        let table = enumerate_below(&lat, &Potential::free(1), kappa, 3.0).unwrap();
        for records in table.sectors.values() {
            for r in records {
                let exact: i64 = r.constituents.iter().map(|k| k.norm_sq()).sum();
                prop_assert_eq!(r.energy, exact as f64);
            }
        }
    }
}

#[test]
fn free_sector_one_prefix() {
    let table = enumerate_below(&lattice(1, 1.0), &Potential::free(1), 7.5, 1.0).unwrap();
    let got = table.energies(&Momentum::new(&[1])).unwrap();
    assert_eq!(&got[..7], &[1.0, 3.0, 5.0, 5.0, 7.0, 7.0, 7.0]);
}

#[test]
fn larger_box_has_more_levels() {
    let pot = potential(0.1, 5.0, 1);
    let a = enumerate_below(&lattice(1, 1.0), &pot, 2.0, 0.0).unwrap();
    let b = enumerate_below(&lattice(1, 3.0), &pot, 2.0, 0.0).unwrap();
    assert!(b.len() > a.len());
}
