//! End-to-end acceptance suite. Every check is exact: rational equality
//! with tolerance zero. Each test prints a single summary line on
//! success; a panic message is the failure line.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gvx_core::io::{self, GvFile};
use gvx_core::kernels::{decompose_in_genus_basis, sin_square};
use gvx_core::localcurves::{g_series, local_bps};
use gvx_core::{
    fano, gv, int, rat, structure, Error, FanoSeries, GSeriesCache, KernelCache, LatticeClass,
    LatticeConfig, Rat, TPoly,
};

/// Alternating rank-1/rank-2 configurations, mass cap at most 8,
/// t-order 14 (window covers genus 8, input genus at most 6).
fn seeded_config(seed: u64) -> LatticeConfig {
    if seed % 2 == 0 {
        LatticeConfig::rank1(4 + (seed % 5) as u32, 14).unwrap()
    } else {
        LatticeConfig::new(
            vec![int(1), rat(3, 2)],
            int(4 + (seed % 4) as i64),
            14,
        )
        .unwrap()
    }
}

#[test]
fn gv_roundtrip_on_random_bps_tables() {
    let cache = KernelCache::new();
    for seed in 0..200u64 {
        let config = seeded_config(seed);
        let table = io::gen_bps_table(seed, &config, 0.4, 6).unwrap();
        let series = gv::gw_from_bps(&cache, &table).unwrap();
        let recovered = gv::bps_from_gw(&cache, &series).unwrap();
        assert_eq!(
            recovered.entries, table.entries,
            "BPS -> GW -> BPS mismatch at seed {seed}"
        );
        assert!(recovered.integrality_ok, "integer input, integer output");
    }
    println!("acceptance: GV roundtrip exact on 200 random tables: pass");
}

#[test]
fn local_genus0_series_and_bps() {
    let cache = KernelCache::new();
    let t_order = 12i64;
    let d_max = 6u32;

    // the series itself against a directly expanded multi-cover sum
    let series = g_series(&cache, 0, d_max, t_order).unwrap();
    for k in 1..=d_max {
        let oracle = sin_square(k, t_order + 4)
            .invert_unit()
            .unwrap()
            .scale(&rat(1, k as i64))
            .truncate(t_order);
        let got = series.get(&LatticeClass::degree(k)).unwrap();
        let mut e = -2;
        while e <= t_order {
            assert_eq!(
                got.coeff(e),
                oracle.coeff(e),
                "genus-0 series q^{k} t^{e} mismatch"
            );
            e += 2;
        }
    }

    // BPS side: the single entry (d=1, g=0) = 1
    let local = local_bps(&cache, 0, d_max, t_order).unwrap();
    let mut expected = BTreeMap::new();
    expected.insert((LatticeClass::degree(1), 0u32), Rat::one());
    assert_eq!(local.table.entries, expected);
    println!("acceptance: local genus-0 identity exact: pass");
}

#[test]
fn local_genus1_series_and_bps() {
    let cache = KernelCache::new();
    let t_order = 10i64;
    let d_max = 8u32;

    // q^d coefficient of -sum_k log(1 - q^k) is sum_{m | d} 1/m, constant in t
    let series = g_series(&cache, 1, d_max, t_order).unwrap();
    for d in 1..=d_max {
        let mut expect = Rat::zero();
        for m in 1..=d {
            if d % m == 0 {
                expect += rat(1, m as i64);
            }
        }
        let got = series.get(&LatticeClass::degree(d)).unwrap();
        assert_eq!(got.coeff(0), expect, "genus-1 series q^{d} constant term");
        let mut e = -2;
        while e <= t_order {
            if e != 0 {
                assert!(got.coeff(e).is_zero(), "genus-1 series q^{d} t^{e} nonzero");
            }
            e += 2;
        }
    }

    let local = local_bps(&cache, 1, d_max, t_order).unwrap();
    let mut expected = BTreeMap::new();
    for d in 1..=d_max {
        expected.insert((LatticeClass::degree(d), 1u32), Rat::one());
    }
    assert_eq!(local.table.entries, expected);
    println!("acceptance: local genus-1 identity exact: pass");
}

#[test]
fn local_curve_integrality_and_finiteness_audit() {
    let cache = KernelCache::new();
    let d_max = 6u32;
    // t-orders chosen so that the observed vanishing cutoff of every
    // degree lies strictly inside the genus window
    let t_orders: [(u32, i64); 5] = [(0, 12), (1, 12), (2, 46), (3, 90), (4, 132)];
    for (h, t_order) in t_orders {
        let local = local_bps(&cache, h, d_max, t_order).unwrap();
        assert!(
            local.table.integrality_ok,
            "non-integer BPS entry for h={h}"
        );
        let window = local.table.genus_window();
        for d in 1..=d_max {
            let class = LatticeClass::degree(d);
            let cutoff = local
                .table
                .observed_genus_cutoffs
                .get(&class)
                .copied()
                .unwrap_or(0);
            assert!(
                cutoff < window,
                "h={h} d={d}: cutoff {cutoff} not strictly inside window {window}"
            );
            println!("  h={h} d={d}: integer entries, vanish for g >= {cutoff} (window {window})");
        }
    }
    println!("acceptance: integrality and in-window finiteness for h<=4, d<=6: pass");
}

#[test]
fn structure_coefficients_roundtrip() {
    let cache = KernelCache::new();
    let gcache = GSeriesCache::new();
    for seed in 0..100u64 {
        let config = seeded_config(seed);
        let table = io::gen_e_table(seed, &config, 0.4, 6).unwrap();
        let series = structure::series_from_e(&cache, &gcache, &table).unwrap();
        let recovered = structure::extract_e(&cache, &gcache, &series).unwrap();
        assert_eq!(
            recovered.entries, table.entries,
            "e-table -> series -> e-table mismatch at seed {seed}"
        );
    }
    println!("acceptance: structure-coefficient extraction exact on 100 tables: pass");
}

#[test]
fn bps_of_synthesized_series_is_integral() {
    let cache = KernelCache::new();
    let gcache = GSeriesCache::new();
    for seed in 0..100u64 {
        let config = seeded_config(seed);
        let table = io::gen_e_table(seed, &config, 0.4, 6).unwrap();
        let series = structure::series_from_e(&cache, &gcache, &table).unwrap();
        let bps = gv::bps_from_gw(&cache, &series).unwrap();
        assert!(
            bps.integrality_ok,
            "non-integer BPS from integer e-table at seed {seed}"
        );
    }
    println!("acceptance: BPS of synthesized series integral on 100 tables: pass");
}

#[test]
fn fano_roundtrip_and_index_zero_agreement() {
    let cache = KernelCache::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for c1 in 1..=3u32 {
        for trial in 0..100u32 {
            let mut bps = BTreeMap::new();
            for g in 0..=8u32 {
                let v: i64 = rng.gen_range(-9..=9);
                if v != 0 {
                    bps.insert(g, int(v));
                }
            }
            let t_order = 2 * (8 + c1 as i64) - 2;
            let gw = fano::fano_gw_from_bps(&cache, c1, &bps, t_order).unwrap();
            let window = ((t_order + 2) / 2) as u32;
            let f = FanoSeries::new(c1, gw, window).unwrap();
            let recovered = fano::fano_bps_from_gw(&cache, &f).unwrap();
            assert_eq!(recovered, bps, "Fano roundtrip c1={c1} trial {trial}");
        }
    }

    // degenerate c1 = 0 agrees with the plain genus-basis peel
    for trial in 0..100u32 {
        let mut bps = BTreeMap::new();
        for g in 0..=8u32 {
            let v: i64 = rng.gen_range(-9..=9);
            if v != 0 {
                bps.insert(g, int(v));
            }
        }
        let t_order = 14i64;
        let gw = fano::fano_gw_from_bps(&cache, 0, &bps, t_order).unwrap();
        let f = FanoSeries::new(0, gw.clone(), 8).unwrap();
        let via_fano = fano::fano_bps_from_gw(&cache, &f).unwrap();

        let poly = TPoly::from_terms(
            gw.iter().map(|(&g, c)| (2 * g as i64 - 2, c.clone())),
            -2,
            t_order,
        );
        let (via_decompose, residual) = decompose_in_genus_basis(&cache, &poly).unwrap();
        assert!(residual.is_zero(), "nonzero residual at trial {trial}");
        assert_eq!(via_fano, via_decompose, "c1=0 disagreement at trial {trial}");
        assert_eq!(via_fano, bps, "c1=0 roundtrip at trial {trial}");
    }
    println!("acceptance: Fano roundtrip (c1 in 1..3) and c1=0 peel agreement: pass");
}

/// Taylor series of 2 sin(t/2) through odd exponent `n_max`.
fn two_sine_taylor(n_max: i64) -> Vec<(i64, Rat)> {
    let mut out = Vec::new();
    let mut coeff = Rat::one(); // 2 * (1/2)^1 / 1!
    let mut e = 1i64;
    loop {
        if e > n_max {
            break;
        }
        out.push((e, coeff.clone()));
        // next odd term of 2 sin(t/2): multiply by -1 / (4 * (e+1) * (e+2))
        coeff = -coeff / int(4 * (e + 1) * (e + 2));
        e += 2;
    }
    out
}

#[test]
fn kernel_closed_forms_and_scaling() {
    let cache = KernelCache::new();

    let s12 = cache.sin_kernel(1, 2, 6).unwrap();
    assert_eq!(s12.coeff(2), int(1));
    assert_eq!(s12.coeff(4), rat(-1, 12));
    assert_eq!(s12.coeff(6), rat(1, 360));

    // oracle: square the Taylor series of 2 sin(t/2) by direct convolution
    let taylor = two_sine_taylor(11);
    let mut squared: BTreeMap<i64, Rat> = BTreeMap::new();
    for (ea, ca) in &taylor {
        for (eb, cb) in &taylor {
            if ea + eb <= 12 {
                *squared.entry(ea + eb).or_insert_with(Rat::zero) += ca * cb;
            }
        }
    }
    let direct = sin_square(1, 12);
    let mut e = 2;
    while e <= 12 {
        assert_eq!(
            direct.coeff(e),
            squared.get(&e).cloned().unwrap_or_else(Rat::zero),
            "sin_square coefficient at t^{e}"
        );
        e += 2;
    }

    let s10 = cache.sin_kernel(1, 0, 2).unwrap();
    assert_eq!(s10.coeff(-2), int(1));
    assert_eq!(s10.coeff(0), rat(1, 12));
    assert_eq!(s10.coeff(2), rat(1, 240));
    // oracle: multiplying back by (2 sin(t/2))^2 returns 1
    let product = s10.mul(&sin_square(1, 6)).unwrap();
    assert_eq!(product.coeff(0), int(1));
    assert!(product.coeff(2).is_zero());

    // s(k,g)(t) = s(1,g)(kt): coefficients scale by k^e
    for k in 1..=5u32 {
        for g in 0..=4u32 {
            let sk = cache.sin_kernel(k, g, 12).unwrap();
            let s1 = cache.sin_kernel(1, g, 12).unwrap();
            let mut e = sk.min_exp();
            while e <= 12 {
                let factor = if e >= 0 {
                    int((k as i64).pow(e as u32))
                } else {
                    rat(1, (k as i64).pow((-e) as u32))
                };
                assert_eq!(
                    sk.coeff(e),
                    s1.coeff(e) * factor,
                    "scaling law k={k} g={g} t^{e}"
                );
                e += 2;
            }
        }
    }
    println!("acceptance: kernel closed forms and k-scaling exact: pass");
}

#[test]
fn serialization_roundtrip_and_error_positions() {
    let cache = KernelCache::new();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for seed in 0..100u64 {
        let config = seeded_config(seed);
        let file = match seed % 4 {
            0 => GvFile::Bps(io::gen_bps_table(seed, &config, 0.5, 5).unwrap()),
            1 => GvFile::E(io::gen_e_table(seed, &config, 0.5, 5).unwrap()),
            2 => {
                let table = io::gen_bps_table(seed, &config, 0.5, 5).unwrap();
                GvFile::Gw(gv::gw_from_bps(&cache, &table).unwrap())
            }
            _ => {
                let mut coeffs = BTreeMap::new();
                for g in 0..=6u32 {
                    let v: i64 = rng.gen_range(-9..=9);
                    if v != 0 {
                        coeffs.insert(g, int(v));
                    }
                }
                coeffs.entry(0).or_insert_with(Rat::one);
                GvFile::Fano(FanoSeries::new(1 + (seed % 3) as u32, coeffs, 8).unwrap())
            }
        };
        let text = io::print(&file);
        let parsed = io::parse(&text).unwrap();
        let text2 = io::print(&parsed);
        assert_eq!(text, text2, "print/parse not idempotent at seed {seed}");
    }

    // corrupted rows report the right line
    let table = io::gen_bps_table(3, &seeded_config(0), 1.0, 3).unwrap();
    let text = io::print_bps(&table);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 8, "need body rows to corrupt");
    for corrupt_line in [7usize, lines.len()] {
        let mut bad: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        bad[corrupt_line - 1] = bad[corrupt_line - 1].replace(" : ", " ?? ");
        match io::parse(&bad.join("\n")) {
            Err(Error::Parse { line, .. }) => assert_eq!(
                line, corrupt_line,
                "wrong line reported for corrupted row"
            ),
            other => panic!("corrupted row accepted: {other:?}"),
        }
    }
    // wrong arity in the mass header is located as well
    let mut bad: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    bad[2] = "mass 1/1 1/1".to_string();
    match io::parse(&bad.join("\n")) {
        Err(Error::DimensionMismatch { line, expected, got }) => {
            assert_eq!((line, expected, got), (3, 1, 2));
        }
        other => panic!("bad mass header accepted: {other:?}"),
    }
    println!("acceptance: serialization roundtrip and parse-error positions: pass");
}
