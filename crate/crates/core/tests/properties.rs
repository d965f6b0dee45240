use axlab::approx::rounding::{dyfxu_masks, multiply_axfxu, multiply_dyfxu};
use axlab::approx::{ApproxOptions, AxConfig, Multiplier, Placement, TruncationPlacement};
use axlab::dlsb::{dlsb_multiply, dlsb_multiply_straightforward, split_operand, DlsbOperand};
use axlab::fixed::{encode_radix4, max_value, min_value, multiply_accurate, oracle_multiply, FixedOperand};
use axlab::float::{fp_multiply_accurate, FpDatum, FpFormat, FpMultiplier, Verdict};
use axlab::kernels::{cer, fir, sobel, GrayImage};
use axlab::metrics::pareto::{dominated, pareto_front};
use axlab::metrics::sampling::sample_uniform_fixed;
use axlab::metrics::sweep::mred_rad_closed_form;
use axlab::metrics::{metrics, red, ErrorSample, MetricsAccumulator};
use axlab::net::{bundled_energy_table, bundled_network, estimate_energy, AssignmentScheme, Granularity};
use proptest::prelude::*;

fn fixed(n: u32) -> impl Strategy<Value = i64> {
    (min_value(n) as i64)..=(max_value(n) as i64)
}

fn op(n: u32, v: i64) -> FixedOperand {
    FixedOperand::new(n, v).unwrap()
}

#[test]
fn recomposition_exhaustive() {
    for n in [8u32, 10, 12] {
        for v in min_value(n) as i64..=max_value(n) as i64 {
            let digits = encode_radix4(&op(n, v));
            let sum: i64 = digits.iter().enumerate().map(|(j, d)| d.value() << (2 * j)).sum();
            assert_eq!(sum, v);
            assert!(digits.iter().all(|d| !(d.one == 1 && d.two == 1)));
        }
    }
}

#[test]
fn partition_split_reproduces_operand() {
    let w = 12;
    for v in min_value(w) as i64..=max_value(w) as i64 {
        let (hi, lo) = split_operand(&op(w, v)).unwrap();
        assert_eq!(hi.value() * (1 << (w / 2)) + lo.value(), v);
    }
}

#[test]
fn dlsb_range_is_symmetric() {
    let n = 8;
    let mut seen = (i64::MAX, i64::MIN);
    for raw in 0..1u64 << n {
        for e in 0..2 {
            let v = DlsbOperand::from_bits(n, raw, e).unwrap().value();
            seen = (seen.0.min(v), seen.1.max(v));
        }
    }
    assert_eq!(seen, (-128, 128));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn accurate_matches_oracle(n in prop::sample::select(vec![16u32, 24, 32]), a in any::<i64>(), b in any::<i64>()) {
        let sh = 64 - n;
        let (a, b) = ((a << sh) >> sh, (b << sh) >> sh);
        prop_assert_eq!(multiply_accurate(&op(n, a), &op(n, b)).unwrap(), oracle_multiply(&op(n, a), &op(n, b)).unwrap());
    }

    #[test]
    fn dlsb_multipliers_agree(a in fixed(12), b in fixed(12), ea in 0u8..2, eb in 0u8..2) {
        let x = DlsbOperand::new(op(12, a), ea).unwrap();
        let y = DlsbOperand::new(op(12, b), eb).unwrap();
        let want = x.value() as i128 * y.value() as i128;
        prop_assert_eq!(dlsb_multiply(&x, &y).unwrap(), want);
        prop_assert_eq!(dlsb_multiply_straightforward(&x, &y).unwrap(), want);
        prop_assert_eq!(x.negate().value(), -x.value());
    }

    #[test]
    fn rad_red_is_independent_of_a(k in prop::sample::select(vec![4u32, 6, 8, 10]), b in fixed(16), a1 in fixed(16), a2 in fixed(16)) {
        prop_assume!(b != 0 && a1 != 0 && a2 != 0);
        let m = Multiplier::new(&AxConfig::Rad { k }, 16).unwrap();
        let (e1, e2) = (a1 as i128 * b as i128 - m.mul(a1, b), a2 as i128 * b as i128 - m.mul(a2, b));
        let (p1, p2) = (a1 as i128 * b as i128, a2 as i128 * b as i128);
        // |e1|/|p1| == |e2|/|p2| exactly
        prop_assert_eq!(e1.abs() * p2.abs(), e2.abs() * p1.abs());
    }

    #[test]
    fn perforation_equals_axfxu_without_rounding(p in 0u32..7, a in fixed(16), b in fixed(16)) {
        let perf = Multiplier::new(&AxConfig::Perf { p }, 16).unwrap();
        let ax = Multiplier::new(&AxConfig::AxFxu { p, r: 0 }, 16).unwrap();
        prop_assert_eq!(perf.mul(a, b), ax.mul(a, b));
    }

    #[test]
    fn approximate_products_fit_double_width(cfg in prop::sample::select(vec![
        "rad:k=6", "rad:k=10", "rad:k=14", "perf:p=6", "axfxu:p=4,r=14", "roup1:p=4,r=20",
        "roup2:p=3,r=10", "radr:k=8,r=12", "drad:k=10,m=10", "dradp:k=14,m=14",
    ]), a in fixed(16), b in fixed(16)) {
        let m = Multiplier::new(&cfg.parse().unwrap(), 16).unwrap();
        let v = m.mul(a, b);
        prop_assert!(v >= min_value(32) && v <= max_value(32), "{} {} {} -> {}", cfg, a, b, v);
    }

    #[test]
    fn fp_sign_and_exponent_bookkeeping(
        fmt in prop::sample::select(vec![FpFormat::HALF, FpFormat::SINGLE]),
        cfg in prop::sample::select(vec!["acc", "axfxu:p=2,r=4", "axfxu:p=4,r=6", "rad:k=8"]),
        sa in 0u8..2, sb in 0u8..2, ea in 1u32..254, eb in 1u32..254, ma in any::<u64>(), mb in any::<u64>(),
    ) {
        let top = fmt.max_exponent() - 1;
        let (ea, eb) = (1 + ea % top, 1 + eb % top);
        let mask = (1u64 << fmt.mant_bits) - 1;
        let a = FpDatum::new(fmt, sa, ea, ma & mask).unwrap();
        let b = FpDatum::new(fmt, sb, eb, mb & mask).unwrap();
        let mul = FpMultiplier::new(&cfg.parse().unwrap(), fmt).unwrap();
        let p = mul.multiply(&a, &b).unwrap();
        prop_assert_eq!(p.sign, sa ^ sb);
        let e0 = ea as i64 + eb as i64 - fmt.bias;
        prop_assert!(p.exponent == e0 || p.exponent == e0 + 1);
        prop_assert_eq!(p.exponent - e0, p.normalized as i64);
        if let Some(d) = p.datum {
            prop_assert_eq!(d.sign, sa ^ sb);
            prop_assert_eq!(d.exponent as i64, p.exponent);
        }
        let exact = fp_multiply_accurate(&a, &b, fmt).unwrap();
        let s = ErrorSample::float(&exact, &p);
        prop_assert!(s.is_feasible());
        if exact.verdict == Verdict::Normal && p.verdict == Verdict::Normal && exact.normalized == p.normalized {
            // unrounded values share the scale 2^(e0 - bias - 2(m-1)), which cancels
            let scale = 2f64.powi((e0 - fmt.bias) as i32 - 2 * (fmt.significand_bits() as i32 - 1));
            let by_value = red(exact.significand_product as f64 * scale, p.significand_product as f64 * scale);
            let by_mantissa = red(exact.significand_product as f64, p.significand_product as f64);
            prop_assert_eq!(by_value, by_mantissa);
            prop_assert_eq!(red(s.accurate, s.approximate), by_mantissa);
        }
    }

    #[test]
    fn metrics_are_order_invariant(mut pairs in prop::collection::vec((-5000i128..5000, -5000i128..5000), 1..200), seed in any::<u64>()) {
        prop_assume!(pairs.iter().any(|&(a, _)| a != 0));
        let forward: Vec<_> = pairs.iter().map(|&(a, b)| ErrorSample::fixed(a, b)).collect();
        let r1 = metrics(&forward, &[2.0, 5.0, 10.0]).unwrap();
        // deterministic shuffle
        let mut s = seed | 1;
        for i in (1..pairs.len()).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            pairs.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let shuffled: Vec<_> = pairs.iter().map(|&(a, b)| ErrorSample::fixed(a, b)).collect();
        prop_assert_eq!(r1, metrics(&shuffled, &[2.0, 5.0, 10.0]).unwrap());
    }

    #[test]
    fn pred_is_monotone_in_threshold(pairs in prop::collection::vec((1i128..5000, -5000i128..5000), 1..200), m1 in 0.0f64..50.0, dm in 0.0f64..50.0) {
        let stream: Vec<_> = pairs.iter().map(|&(a, b)| ErrorSample::fixed(a, b)).collect();
        let r = metrics(&stream, &[m1, m1 + dm]).unwrap();
        prop_assert!(r.pred[0].1 >= r.pred[1].1);
    }

    #[test]
    fn pgm_round_trip(w in 1usize..40, h in 1usize..40, seed in any::<u8>()) {
        let px: Vec<u8> = (0..w * h).map(|i| (i as u8).wrapping_mul(31).wrapping_add(seed)).collect();
        let img = GrayImage::new(w, h, px).unwrap();
        prop_assert_eq!(&GrayImage::from_pgm(&img.to_pgm_binary()).unwrap(), &img);
        prop_assert_eq!(&GrayImage::from_pgm(&img.to_pgm_ascii()).unwrap(), &img);
    }

    #[test]
    fn fir_is_linear_under_accurate(x in prop::collection::vec(-10000i64..10000, 1..64), y in prop::collection::vec(-10000i64..10000, 64)) {
        let taps = axlab::kernels::default_taps();
        let mul = Multiplier::new(&AxConfig::Accurate, 16).unwrap();
        let y = &y[..x.len()];
        let sum: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        let (fx, fy, fs) = (fir(&x, &taps, &mul).unwrap(), fir(y, &taps, &mul).unwrap(), fir(&sum, &taps, &mul).unwrap());
        for i in 0..fs.len() {
            prop_assert_eq!(fs[i], fx[i] + fy[i]);
        }
    }

    #[test]
    fn sobel_cer_against_itself_is_one(cfg in prop::sample::select(vec!["acc", "rad:k=6", "rad:k=10", "axfxu:p=3,r=6", "roup2:p=2,r=8"]), seed in any::<u8>()) {
        let px: Vec<u8> = (0..32 * 32).map(|i: usize| ((i * 7 + seed as usize) % 251) as u8).collect();
        let img = GrayImage::new(32, 32, px).unwrap();
        let e = sobel(&img, &Multiplier::new(&cfg.parse().unwrap(), 16).unwrap(), 40.0).unwrap();
        prop_assert_eq!(cer(&e, &e).unwrap(), 1.0);
    }

    #[test]
    fn energy_is_linear_and_data_independent(cfgs in prop::collection::vec(prop::sample::select(vec!["acc", "rad:k=6", "rad:k=10", "axfxu:p=2,r=4"]), 3)) {
        let net = bundled_network();
        let table = bundled_energy_table();
        let cfg: Vec<AxConfig> = cfgs.iter().map(|c| c.parse().unwrap()).collect();
        let scheme = AssignmentScheme { granularity: Granularity::KernelRow, layers: vec![cfg.clone(), cfg.clone()] };
        let r = estimate_energy(&net, &scheme, &table).unwrap();
        // rows split each layer's multiplications evenly
        let mut want = 0.0;
        for l in &r.layers {
            for c in &cfg {
                want += (l.multiplications / 3) as f64 * table.cost(c).unwrap();
            }
        }
        prop_assert_eq!(r.total, want);
    }
}

#[test]
fn dyfxu_equals_axfxu_exhaustive() {
    let n = 8;
    for p in 0..n / 2 - 1 {
        for r in 0..n - 1 {
            let Ok((ma, mb)) = dyfxu_masks(p, r, n) else { continue };
            for a in -128..128 {
                for b in -128..128 {
                    assert_eq!(multiply_dyfxu(&op(n, a), &op(n, b), ma, mb).unwrap(), multiply_axfxu(&op(n, a), &op(n, b), p, r).unwrap());
                }
            }
        }
    }
}

#[test]
fn axfxu_error_grows_with_perforation() {
    let pairs = sample_uniform_fixed(16, 100_000, 77).unwrap();
    for r in [0, 2, 4, 6] {
        let mut last = -1.0;
        for p in 0..6 {
            let m = Multiplier::new(&AxConfig::AxFxu { p, r }, 16).unwrap();
            let mut acc = MetricsAccumulator::new(&[2.0]);
            for &(a, b) in &pairs {
                acc.push_fixed(a as i128 * b as i128, m.mul(a, b));
            }
            let mred = acc.report().unwrap().mred;
            assert!(mred >= last, "R={r} P={p}: {mred} < {last}");
            last = mred;
        }
    }
}

#[test]
fn rad_closed_form_agrees_with_sampling() {
    for k in [6, 8, 10] {
        let exact = mred_rad_closed_form(16, k, &[2.0]).unwrap();
        let m = Multiplier::new(&AxConfig::Rad { k }, 16).unwrap();
        let pairs = sample_uniform_fixed(16, 1_000_000, 31).unwrap();
        let reds: Vec<f64> = pairs.iter().filter(|&&(_, b)| b != 0).map(|&(_, b)| red(b as f64, m.mul(1, b) as f64).unwrap()).collect();
        let mean = reds.iter().sum::<f64>() / reds.len() as f64;
        let var = reds.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (reds.len() - 1) as f64;
        let se = (var / reds.len() as f64).sqrt();
        assert!((mean - exact.mred).abs() <= 5.0 * se, "k={k}: {mean} vs {}", exact.mred);
    }
}

#[test]
fn pareto_front_matches_dominance_oracle() {
    let pairs = sample_uniform_fixed(16, 1000, 12).unwrap();
    let pts: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| ((a & 0xFF) as f64, (b & 0xFF) as f64)).collect();
    let mut front = pareto_front(&pts);
    front.sort_unstable();
    let oracle: Vec<usize> = (0..pts.len()).filter(|&i| !pts.iter().any(|&q| dominated(pts[i], q))).collect();
    assert_eq!(front, oracle);
}

#[test]
fn below_boundary_placement_has_smaller_bias() {
    let pairs = sample_uniform_fixed(16, 200_000, 31).unwrap();
    let bias = |place: Placement| {
        let opts = ApproxOptions { placement: TruncationPlacement { row_correction: place, constant_one: place }, ..Default::default() };
        let m = Multiplier::with_options(&AxConfig::Roup1 { p: 4, r: 18 }, 16, opts).unwrap();
        let s: f64 = pairs.iter().map(|&(a, b)| (m.mul(a, b) - a as i128 * b as i128) as f64).sum();
        (s / pairs.len() as f64).abs()
    };
    let (below, at) = (bias(Placement::BelowBoundary), bias(Placement::AtBoundary));
    assert!(below < at, "{below} {at}");
}
