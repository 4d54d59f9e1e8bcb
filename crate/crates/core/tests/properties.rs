use dnacap::blahut_arimoto::{maximize, BaOptions, CenteredChannel};
use dnacap::{
    ba_optimize, base_matrix_power, bounds_check, capacity_nc, codon_matrix, deterministic_rate,
    steganographic_rate, uniform_conditional_rate, AminoAcid, AminoPmf, ChannelParams,
    ConditionalCodonPmf, GeneticCode, Method, TransitionMatrix,
};
use proptest::prelude::*;

fn params(q: f64, gamma: f64, m: u64) -> ChannelParams {
    ChannelParams::new(q, gamma, m).unwrap()
}

fn host() -> impl Strategy<Value = AminoPmf> {
    prop::collection::vec(0.0f64..1.0, 21).prop_filter_map("all zero", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3)
            .then(|| AminoPmf::new(w.iter().map(|x| x / s).collect()).ok())
            .flatten()
    })
}

fn usage() -> impl Strategy<Value = ConditionalCodonPmf> {
    prop::collection::vec(0.01f64..1.0, 64).prop_map(|w| {
        let code = GeneticCode::standard();
        let rows = AminoAcid::ALL
            .iter()
            .map(|&a| {
                let r: Vec<f64> = code.synonyms(a).iter().map(|c| w[c.index()]).collect();
                let s: f64 = r.iter().sum();
                r.into_iter().map(|x| x / s).collect()
            })
            .collect();
        ConditionalCodonPmf::new(rows).unwrap()
    })
}

fn max_diff(a: &TransitionMatrix, b: &TransitionMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_is_symmetric_stochastic(q in 0.0f64..=1.0, g in 0.0f64..=1.5, m in 0u64..1_000_000) {
        let pm = base_matrix_power(&params(q, g, m)).unwrap();
        prop_assert!(pm.is_symmetric(1e-15));
        for i in 0..4 {
            prop_assert!((pm.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(pm.row(i).iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
        let cm = codon_matrix(&pm).unwrap();
        prop_assert!(cm.is_symmetric(1e-15));
        // every row of the codon channel is a permutation of the first
        let mut first = cm.row(0).to_vec();
        first.sort_by(f64::total_cmp);
        for i in 1..64 {
            let mut r = cm.row(i).to_vec();
            r.sort_by(f64::total_cmp);
            prop_assert!(first.iter().zip(&r).all(|(a, b)| (a - b).abs() < 1e-15));
        }
    }

    #[test]
    fn powers_compose(q in 0.0f64..=0.5, g in 0.0f64..=1.5, a in 0u64..=25, b in 0u64..=25) {
        let p = params(q, g, a);
        let prod = base_matrix_power(&p).unwrap()
            .matmul(&base_matrix_power(&p.with_m(b)).unwrap()).unwrap();
        prop_assert!(max_diff(&prod, &base_matrix_power(&p.with_m(a + b)).unwrap()) < 1e-12);
    }

    #[test]
    fn ncdna_capacity_decreases(q in 0.0f64..=0.5, g in 0.001f64..=1.0, m in 0u64..10_000, step in 1u64..100) {
        let c0 = capacity_nc(&params(q, g, m)).unwrap().value;
        let c1 = capacity_nc(&params(q, g, m + step)).unwrap().value;
        prop_assert!(c1 <= c0 + 1e-12);
        prop_assert!((0.0..=2.0).contains(&c0));
    }

    #[test]
    fn ncdna_bounds(q in 0.0f64..=0.5, g in 0.0f64..=1.0, m in 0u64..10_000) {
        let (lo, c, hi) = bounds_check(&params(q, g, m)).unwrap();
        prop_assert!(lo <= c + 1e-12 && c <= hi + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ba_objective_never_decreases(h in host(), q in 0.001f64..0.5, g in 0.0f64..=1.5, m in 1u64..50) {
        let channel = CenteredChannel::kimura_codon(&params(q, g, m)).unwrap();
        let blocks = GeneticCode::standard().partitions();
        let out = maximize(&channel, &blocks, h.as_slice(), None, &BaOptions::default()).unwrap();
        for w in out.trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12, "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn rate_ordering(h in host(), u in usage(), q in 0.0f64..0.5, g in 0.0f64..=1.0, m in 1u64..200) {
        let p = params(q, g, m);
        let ba = ba_optimize(&h, &p, &BaOptions::default()).unwrap();
        let flat = uniform_conditional_rate(&h, &p).unwrap();
        let steg = steganographic_rate(&u, &h, &p).unwrap();
        let cap = capacity_nc(&p).unwrap().value;
        prop_assert!(ba.rate >= 0.0);
        prop_assert!(ba.rate <= 3.0 * cap + 1e-9);
        prop_assert!(ba.rate >= flat.rate - 1e-9);
        prop_assert!(ba.rate >= steg.rate - 1e-9);
        prop_assert!((ba.rate - (ba.mutual_information - ba.host_entropy).max(0.0)).abs() < 1e-15);
    }

    #[test]
    fn uniform_host_matches_closed_form(q in 0.0f64..=1.0, g in 0.0f64..=1.5, m in 0u64..1000) {
        let p = params(q, g, m);
        let host = AminoPmf::uniform_codons();
        let ba = ba_optimize(&host, &p, &BaOptions::default()).unwrap();
        let closed = (3.0 * capacity_nc(&p).unwrap().value - host.entropy()).max(0.0);
        prop_assert!((ba.rate - closed).abs() < 1e-6);
    }

    #[test]
    fn deterministic_rate_decreases(q in 0.001f64..0.5, g in 0.01f64..=1.0, m in 1u64..200, idx in 0usize..21) {
        let a = AminoAcid::ALL[idx];
        let p = params(q, g, m);
        let opts = BaOptions::default();
        let r0 = deterministic_rate(a, &p, Method::Ba, &opts).unwrap().rate;
        let r1 = deterministic_rate(a, &p.with_m(2 * m), Method::Ba, &opts).unwrap().rate;
        prop_assert!(r1 <= r0 + 1e-8);
        prop_assert!(r0 <= (a.multiplicity() as f64).log2() + 1e-12);
    }
}

#[test]
fn leu_droops_below_its_multiplicity_peers() {
    let opts = BaOptions::default();
    for m in [30, 100, 300] {
        let p = params(1e-2, 0.1, m);
        let r = |a| deterministic_rate(a, &p, Method::Ba, &opts).unwrap().rate;
        assert!(
            r(AminoAcid::Leu) < r(AminoAcid::Ser).min(r(AminoAcid::Arg)),
            "m = {m}"
        );
    }
}
