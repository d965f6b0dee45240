//! Cross-checks against independent reference computations. Values marked
//! "frozen" were produced by an explicit bit-matrix model written separately
//! from the library.

use axlab::approx::rounding::{dyfxu_masks, multiply_axfxu};
use axlab::approx::{multiply_drad, multiply_radr, multiply_roup, AxConfig, Multiplier};
use axlab::dlsb::{dlsb_sub, DlsbOperand};
use axlab::fixed::FixedOperand;
use axlab::float::{fp_multiply_accurate, fp_multiply_axfpu, fp_multiply_dyfpu, from_f32, to_f32, FpDatum, FpFormat, Verdict};
use axlab::kernels::{bundled_image, conv2d, ssim, winograd_conv3x3, GrayImage, Kernel2D};
use axlab::metrics::sampling::{rng_from_seed, sample_uniform_fixed, sample_uniform_fp_normal};
use axlab::metrics::{red, MetricsAccumulator};
use rand::{Rng, RngCore};

fn op16(v: i64) -> FixedOperand {
    FixedOperand::new(16, v).unwrap()
}

#[test]
fn roup2_matches_matrix_oracle() {
    // frozen
    assert_eq!(multiply_roup(&op16(255), &op16(255), 2, 3, 10).unwrap(), 65536);
    let cases = [
        (-27183, -4906, 134021120i128),
        (23846, 10626, 253362176),
        (20580, 26131, 537526272),
        (25134, 27578, 693305344),
        (26090, 15872, 414121984),
    ];
    for (a, b, want) in cases {
        assert_eq!(multiply_roup(&op16(a), &op16(b), 2, 3, 10).unwrap(), want, "{a} {b}");
    }
}

#[test]
fn roup1_matches_matrix_oracle() {
    // frozen, P = 4, R = 17
    let cases = [
        (-27183, -4906, 132251648i128),
        (23846, 10626, 256442368),
        (20580, 26131, 537460736),
        (25134, 27578, 694943744),
        (26090, 15872, 414253056),
    ];
    for (a, b, want) in cases {
        assert_eq!(multiply_roup(&op16(a), &op16(b), 1, 4, 17).unwrap(), want, "{a} {b}");
    }
}

#[test]
fn radr_matches_matrix_oracle() {
    // frozen; the cut rows of 2^10 are zero but still receive the constant
    assert_eq!(multiply_radr(&op16(1), &op16(1 << 10), 6, 8).unwrap(), 1152);
    let cases = [
        (-27183, -4906, 133522960i128),
        (23846, 10626, 253435288),
        (20580, 26131, 537714368),
        (25134, 27578, 693195848),
        (26090, 15872, 414100608),
    ];
    for (a, b, want) in cases {
        assert_eq!(multiply_radr(&op16(a), &op16(b), 6, 8).unwrap(), want, "{a} {b}");
    }
}

#[test]
fn drad_matches_term_oracle() {
    // low bytes of 0x00FF are -1, which both approximate to 0: A1·B1 = 256·256
    assert_eq!(multiply_drad(&op16(0xFF), &op16(0xFF), 8, 8, false).unwrap(), 65536);
    assert_eq!(multiply_drad(&op16(0xFF), &op16(0xFF), 8, 8, true).unwrap(), 65536);
}

#[test]
fn rad_hand_example_and_red() {
    let m = Multiplier::new(&AxConfig::Rad { k: 6 }, 16).unwrap();
    assert_eq!(m.mul(100, 5), 400);
    assert_eq!(red(500.0, 400.0), Some(0.2));
    assert_eq!(red(5.0, 4.0), Some(0.2));
}

#[test]
fn axfxu_hand_examples() {
    let op = |v| FixedOperand::new(8, v).unwrap();
    assert_eq!(multiply_axfxu(&op(1), &op(3), 1, 0).unwrap(), 4);
    assert_eq!(multiply_axfxu(&op(7), &op(1), 0, 2).unwrap(), 8);
    assert_eq!(multiply_axfxu(&op(5), &op(1), 0, 2).unwrap(), 4);
}

fn mred(cfg: &str, pairs: &[(i64, i64)]) -> f64 {
    let m = Multiplier::new(&cfg.parse().unwrap(), 16).unwrap();
    let mut acc = MetricsAccumulator::new(&[2.0]);
    for &(a, b) in pairs {
        acc.push_fixed(a as i128 * b as i128, m.mul(a, b));
    }
    acc.report().unwrap().mred_pct()
}

#[test]
fn radr_between_its_high_radix_bounds() {
    let pairs = sample_uniform_fixed(16, 200_000, 2024).unwrap();
    let (lo, mid, hi) = (mred("rad:k=6", &pairs), mred("radr:k=6,r=8", &pairs), mred("rad:k=8", &pairs));
    assert!(lo < mid && mid < hi, "{lo} {mid} {hi}");
}

#[test]
fn perforated_drad_is_less_accurate() {
    let pairs = sample_uniform_fixed(16, 200_000, 2024).unwrap();
    let (d, dp) = (mred("drad:k=8,m=8", &pairs), mred("dradp:k=8,m=8", &pairs));
    assert!(dp >= d, "{d} {dp}");
}

#[test]
fn dlsb_negation_and_subtraction_exhaustive() {
    for n in [6u32, 8] {
        for raw in 0..1u64 << n {
            for e in 0..2u8 {
                let x = DlsbOperand::from_bits(n, raw, e).unwrap();
                assert_eq!(x.negate().value(), -x.value());
            }
        }
    }
    let n = 6;
    for ra in 0..1u64 << n {
        for rb in 0..1u64 << n {
            for ea in 0..2u8 {
                for eb in 0..2u8 {
                    let a = DlsbOperand::from_bits(n, ra, ea).unwrap();
                    let b = DlsbOperand::from_bits(n, rb, eb).unwrap();
                    let s = dlsb_sub(&a, &b).unwrap();
                    if !s.wrapped {
                        assert_eq!(s.result.value(), a.value() - b.value());
                    }
                }
            }
        }
    }
}

#[test]
fn dlsb_value_level_addition() {
    let a = DlsbOperand::from_bits(4, 0b0011, 1).unwrap();
    let b = DlsbOperand::from_bits(4, 0b0001, 0).unwrap();
    let s = axlab::dlsb::dlsb_add(&a, &b).unwrap();
    assert_eq!(s.result.value(), 5);
    assert!(!s.wrapped);
}

#[test]
fn single_precision_matches_native_multiply() {
    let fmt = FpFormat::SINGLE;
    let mut checked = 0;
    for (a, b) in sample_uniform_fp_normal(fmt, 1_000_000, 99) {
        let native = to_f32(&a) * to_f32(&b);
        if !native.is_normal() {
            continue;
        }
        let p = fp_multiply_accurate(&a, &b, fmt).unwrap();
        assert_eq!(p.verdict, Verdict::Normal);
        assert_eq!(p.datum.unwrap().to_bits() as u32, native.to_bits(), "{a} {b}");
        checked += 1;
    }
    assert!(checked > 400_000);
    assert_eq!(from_f32(1.5).to_bits(), 1.5f32.to_bits() as u64);
}

#[test]
fn dyfpu_equals_axfpu_over_half_mantissas() {
    let fmt = FpFormat::HALF;
    for (p, r) in [(0, 0), (2, 4), (4, 6)] {
        let (ma, mb) = dyfxu_masks(p, r, fmt.engine_width()).unwrap();
        for ea in [15u32, 3] {
            for xa in 0..1u64 << fmt.mant_bits {
                for xb in (0..1u64 << fmt.mant_bits).step_by(3) {
                    let a = FpDatum::new(fmt, 0, ea, xa).unwrap();
                    let b = FpDatum::new(fmt, 1, 15, xb).unwrap();
                    assert_eq!(fp_multiply_dyfpu(&a, &b, fmt, ma, mb).unwrap(), fp_multiply_axfpu(&a, &b, fmt, p, r).unwrap());
                }
            }
        }
    }
}

#[test]
fn fixed_draws_have_zero_mean() {
    let n = 16;
    let pairs = sample_uniform_fixed(n, 500_000, 5).unwrap();
    let values: Vec<f64> = pairs.iter().flat_map(|&(a, b)| [a as f64, b as f64]).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    // uniform over [-2^15, 2^15): σ ≈ 2^16/√12
    let sigma = 65536.0 / 12f64.sqrt() / (values.len() as f64).sqrt();
    assert!((mean + 0.5).abs() < 4.0 * sigma, "{mean}");
}

#[test]
fn fp_exponent_histogram_is_flat() {
    let fmt = FpFormat::HALF;
    let draws = sample_uniform_fp_normal(fmt, 300_000, 8);
    let bins = (fmt.max_exponent() - 1) as usize;
    let mut hist = vec![0f64; bins];
    for (a, b) in &draws {
        assert!(a.exponent >= 1 && (a.exponent as usize) <= bins);
        hist[a.exponent as usize - 1] += 1.0;
        hist[b.exponent as usize - 1] += 1.0;
    }
    let total = 2.0 * draws.len() as f64;
    let p = 1.0 / bins as f64;
    let expect = total * p;
    let sigma = (total * p * (1.0 - p)).sqrt();
    for (e, &c) in hist.iter().enumerate() {
        assert!((c - expect).abs() < 5.0 * sigma, "exponent {} count {c}", e + 1);
    }
}

fn random_image(w: usize, h: usize, seed: u64) -> GrayImage {
    let mut rng = rng_from_seed(seed);
    let mut px = vec![0u8; w * h];
    rng.fill_bytes(&mut px);
    GrayImage::new(w, h, px).unwrap()
}

#[test]
fn conv2d_matches_naive_loop() {
    let img = random_image(32, 32, 3);
    let mut rng = rng_from_seed(4);
    let coeffs: Vec<i64> = (0..9).map(|_| rng.random_range(-300..300)).collect();
    let k = Kernel2D::new(3, coeffs.clone(), 0).unwrap();
    let out = conv2d(&img, &k, &Multiplier::new(&AxConfig::Accurate, 16).unwrap()).unwrap();
    for y in 0..32i64 {
        for x in 0..32i64 {
            let mut s = 0i64;
            for u in 0..3i64 {
                for v in 0..3i64 {
                    let (yy, xx) = (y + u - 1, x + v - 1);
                    if (0..32).contains(&yy) && (0..32).contains(&xx) {
                        s += coeffs[(u * 3 + v) as usize] * img.get(xx as usize, yy as usize) as i64;
                    }
                }
            }
            assert_eq!(out.get(x as usize, y as usize), s);
        }
    }
}

#[test]
fn winograd_matches_direct_on_random_image() {
    let img = random_image(64, 64, 6);
    let mut rng = rng_from_seed(7);
    let coeffs: Vec<i64> = (0..9).map(|_| rng.random_range(-128..128)).collect();
    let k = Kernel2D::new(3, coeffs, 4).unwrap();
    let direct = conv2d(&img, &k, &Multiplier::new(&AxConfig::Accurate, 16).unwrap()).unwrap();
    let wino = winograd_conv3x3(&img, &k).unwrap();
    let scale = 16.0;
    for y in 0..62 {
        for x in 0..62 {
            let d = direct.get(x + 1, y + 1) as f64 / scale;
            assert!((wino.get(x, y) - d).abs() <= 1e-9);
        }
    }
}

#[test]
fn ssim_matches_reference_implementation() {
    // frozen from a reference implementation (Gaussian σ = 1.5, population
    // covariance, data range 255) on the bundled image
    let img = bundled_image();
    let inverted = GrayImage::new(256, 256, img.pixels().iter().map(|p| 255 - p).collect()).unwrap();
    let halved = GrayImage::new(256, 256, img.pixels().iter().map(|p| p / 2).collect()).unwrap();
    assert!((ssim(&img, &inverted).unwrap() - -0.10508113252336931).abs() < 1e-9);
    assert!((ssim(&img, &halved).unwrap() - 0.7277211045128298).abs() < 1e-9);
}
