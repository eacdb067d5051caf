use levy_tail::closed_forms::{cauchy_tail, gamma_tail};
use levy_tail::levy_model::{cauchy, gamma_process, power_law};
use levy_tail::simulate::{
    estimate, ks_two_sample, CiMethod, IncrementSampler, McConfig, Rng, SeededStream, SmallJumpScheme, Tail,
};

#[test]
fn estimates_are_identical_across_shards_and_repeats() {
    let model = power_law(1.0, 0.5, 2.0).unwrap();
    let (eps, t) = (0.5, 0.05);
    let scheme = SmallJumpScheme::calibrate(&model, eps, t, 1e-4, eps / 2.0, false, 100.0).unwrap();
    let sampler = IncrementSampler::new(&model, t, Some(&scheme)).unwrap();
    let run = |shards| {
        let cfg = McConfig::new(20_000, 42).shards(shards);
        estimate(|r: &mut Rng| sampler.sample(r), eps, Tail::Both, Some(&scheme), &cfg).unwrap()
    };
    let reference = run(1);
    for shards in [4, 16, 1] {
        let again = run(shards);
        assert_eq!(again.count, reference.count);
        assert_eq!(again.ci_low.to_bits(), reference.ci_low.to_bits());
        assert_eq!(again.ci_high.to_bits(), reference.ci_high.to_bits());
    }
}

#[test]
fn scheme_estimates_carry_their_bias() {
    let model = power_law(1.0, 1.5, 2.0).unwrap();
    let (eps, t) = (1.0, 1e-3);
    let scheme = SmallJumpScheme::calibrate(&model, eps, t, 1e-4, eps / 2.0, false, 100.0).unwrap();
    let sampler = IncrementSampler::new(&model, t, Some(&scheme)).unwrap();
    let cfg = McConfig::new(20_000, 3);
    let est = estimate(|r: &mut Rng| sampler.sample(r), eps, Tail::Both, Some(&scheme), &cfg).unwrap();
    let bias = est.bias.expect("bias bracket");
    assert!(bias.certified > 0.0 && bias.certified <= 1e-4);
    assert!(bias.inner_count >= est.count && est.count >= bias.outer_count);
    assert!(est.ci_low <= est.sampling_ci.0 && est.ci_high >= est.sampling_ci.1);
}

#[test]
fn symmetric_tails_agree() {
    let model = cauchy();
    let sampler = IncrementSampler::new(&model, 0.1, None).unwrap();
    let cfg = McConfig::new(200_000, 5).method(CiMethod::Wilson).confidence(0.999);
    let up = estimate(|r: &mut Rng| sampler.sample(r), 0.5, Tail::Upper, None, &cfg).unwrap();
    let cfg = cfg.stream(SeededStream::new(5, 1));
    let down = estimate(|r: &mut Rng| -sampler.sample(r), 0.5, Tail::Upper, None, &cfg).unwrap();
    assert!(up.ci_low <= down.ci_high && down.ci_low <= up.ci_high, "{up:?} {down:?}");
    let half = cauchy_tail(0.5, 0.1).unwrap().prob / 2.0;
    assert!(up.ci_low <= half && half <= up.ci_high);
}

#[test]
fn cauchy_is_infinitely_divisible() {
    let model = cauchy();
    let n = 100_000;
    let one = IncrementSampler::new(&model, 0.1, None).unwrap();
    let two = IncrementSampler::new(&model, 0.2, None).unwrap();
    let (a, b) = (SeededStream::new(17, 0), SeededStream::new(17, 1));
    let direct: Vec<f64> = (0..n).map(|i| two.sample(&mut a.rng(i))).collect();
    let summed: Vec<f64> = (0..n)
        .map(|i| {
            let mut r = b.rng(i);
            one.sample(&mut r) + one.sample(&mut r)
        })
        .collect();
    let ks = ks_two_sample(&direct, &summed).unwrap();
    assert!(ks.p_value > 0.01, "{ks:?}");
}

#[test]
fn gamma_simulation_matches_closed_form() {
    let model = gamma_process();
    let sampler = IncrementSampler::new(&model, 0.1, None).unwrap();
    let cfg = McConfig::new(200_000, 9).method(CiMethod::ClopperPearson).confidence(0.999);
    let est = estimate(|r: &mut Rng| sampler.sample(r), 1.0, Tail::Both, None, &cfg).unwrap();
    let exact = gamma_tail(1.0, 0.1).unwrap().prob;
    assert!(est.ci_low <= exact && exact <= est.ci_high, "{exact} not in [{}, {}]", est.ci_low, est.ci_high);
}
