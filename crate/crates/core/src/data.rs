//! Bags, datasets, and generative sources of labeled instances.
//!
//! Instances keep their true label around for evaluation, but the label
//! sits behind an accessor that counts every read. Training paths that are
//! supposed to be label-blind can therefore be checked with
//! [`reset_label_reads`] / [`label_reads`].

use std::cell::Cell;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::derive_seed;

thread_local! {
    static LABEL_READS: Cell<u64> = const { Cell::new(0) };
}

/// Number of `true_label` reads on this thread since the last reset.
pub fn label_reads() -> u64 {
    LABEL_READS.with(Cell::get)
}

pub fn reset_label_reads() {
    LABEL_READS.with(|c| c.set(0));
}

/// One feature vector, with an optional hidden ground-truth label.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    features: Vec<f64>,
    true_label: Option<u8>,
}

impl Instance {
    pub fn new(features: Vec<f64>, true_label: Option<u8>) -> Instance {
        Instance { features, true_label }
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    /// Ground-truth label, if known. Every call is counted so tests can
    /// prove that bag-label-only training never looks at it.
    pub fn true_label(&self) -> Option<u8> {
        if self.true_label.is_some() {
            LABEL_READS.with(|c| c.set(c.get() + 1));
        }
        self.true_label
    }

    /// Label presence without counting as a read.
    pub fn has_true_label(&self) -> bool {
        self.true_label.is_some()
    }
}

/// A non-empty multiset of instances that shares one binary label.
#[derive(Debug, Clone, PartialEq)]
pub struct Bag {
    instances: Vec<Instance>,
    label: u8,
}

impl Bag {
    pub fn new(instances: Vec<Instance>, label: u8) -> Result<Bag> {
        if instances.is_empty() {
            return Err(Error::Contract("bags must contain at least one instance".into()));
        }
        if label > 1 {
            return Err(Error::Contract(format!("bag label must be 0 or 1, got {label}")));
        }
        Ok(Bag { instances, label })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn label(&self) -> u8 {
        self.label
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// A set of bags with cached instance counts.
///
/// `n` is the instance count over positive bags, `m` over negative bags.
#[derive(Debug, Clone, PartialEq)]
pub struct BagDataset {
    bags: Vec<Bag>,
    n_pos_instances: usize,
    n_neg_instances: usize,
}

impl BagDataset {
    pub fn new(bags: Vec<Bag>) -> Result<BagDataset> {
        let mut dim = None;
        let mut n_pos = 0;
        let mut n_neg = 0;
        for bag in &bags {
            for inst in bag.instances() {
                match dim {
                    None => dim = Some(inst.dim()),
                    Some(d) if d != inst.dim() => {
                        return Err(Error::Contract(format!(
                            "instance dim {} differs from dataset dim {d}",
                            inst.dim()
                        )))
                    }
                    _ => {}
                }
            }
            if bag.label() == 1 {
                n_pos += bag.len();
            } else {
                n_neg += bag.len();
            }
        }
        Ok(BagDataset { bags, n_pos_instances: n_pos, n_neg_instances: n_neg })
    }

    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    pub fn n_bags(&self) -> usize {
        self.bags.len()
    }

    /// Instance count over positive bags.
    pub fn n_pos_instances(&self) -> usize {
        self.n_pos_instances
    }

    /// Instance count over negative bags.
    pub fn n_neg_instances(&self) -> usize {
        self.n_neg_instances
    }

    pub fn total_instances(&self) -> usize {
        self.n_pos_instances + self.n_neg_instances
    }

    pub fn n_negative_bags(&self) -> usize {
        self.bags.iter().filter(|b| b.label() == 0).count()
    }

    pub fn feature_dim(&self) -> Option<usize> {
        self.bags.first().map(|b| b.instances()[0].dim())
    }

    /// True for datasets where every instance carries a ground-truth label.
    pub fn fully_labeled(&self) -> bool {
        self.bags.iter().all(|b| b.instances().iter().all(Instance::has_true_label))
    }

    /// Fraction of instances whose true label is 0.
    pub fn true_pi0(&self) -> Result<f64> {
        let mut negatives = 0usize;
        let mut total = 0usize;
        for bag in &self.bags {
            for inst in bag.instances() {
                match inst.true_label() {
                    Some(0) => negatives += 1,
                    Some(_) => {}
                    None => {
                        return Err(Error::Contract(
                            "true_pi0 needs a fully labeled dataset".into(),
                        ))
                    }
                }
                total += 1;
            }
        }
        if total == 0 {
            return Err(Error::Contract("true_pi0 of an empty dataset".into()));
        }
        Ok(negatives as f64 / total as f64)
    }

    /// Checks the bag-label consistency rule on labeled data: negative bags
    /// hold only negatives, positive bags hold at least one positive.
    pub fn check_mil_assumption(&self) -> Result<()> {
        for (i, bag) in self.bags.iter().enumerate() {
            let labels: Vec<Option<u8>> = bag.instances().iter().map(Instance::true_label).collect();
            if labels.iter().any(Option::is_none) {
                return Err(Error::Contract(format!("bag {i} has unlabeled instances")));
            }
            if bag.label() == 0 && labels.iter().any(|&l| l == Some(1)) {
                return Err(Error::Contract(format!("negative bag {i} contains a positive instance")));
            }
            if bag.label() == 1 && !labels.iter().any(|&l| l == Some(1)) {
                return Err(Error::Contract(format!("positive bag {i} contains no positive instance")));
            }
        }
        Ok(())
    }
}

/// Two isotropic Gaussian blobs acting as the positive/negative pools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianPoolConfig {
    pub dim: usize,
    pub pos_mean: Vec<f64>,
    pub neg_mean: Vec<f64>,
    /// Standard deviation of every coordinate. Zero gives point masses.
    pub covariance_scale: f64,
    pub pos_pool_size: usize,
    pub neg_pool_size: usize,
    pub seed: u64,
}

impl GaussianPoolConfig {
    /// Two unit-variance blobs at `(+c, 0, ..)` and `(-c, 0, ..)`.
    pub fn symmetric(dim: usize, separation: f64, pool_size: usize, seed: u64) -> Self {
        let mut pos_mean = vec![0.0; dim];
        let mut neg_mean = vec![0.0; dim];
        pos_mean[0] = separation;
        neg_mean[0] = -separation;
        GaussianPoolConfig {
            dim,
            pos_mean,
            neg_mean,
            covariance_scale: 1.0,
            pos_pool_size: pool_size,
            neg_pool_size: pool_size,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("pool dim must be at least 1".into()));
        }
        if self.pos_mean.len() != self.dim || self.neg_mean.len() != self.dim {
            return Err(Error::Config("pool means must match dim".into()));
        }
        if self.pos_mean == self.neg_mean {
            return Err(Error::Config("pool means must be distinct".into()));
        }
        if !(self.covariance_scale >= 0.0 && self.covariance_scale.is_finite()) {
            return Err(Error::Config("covariance_scale must be finite and non-negative".into()));
        }
        if self.pos_pool_size == 0 || self.neg_pool_size == 0 {
            return Err(Error::Config("pool sizes must be at least 1".into()));
        }
        Ok(())
    }
}

fn sample_blob(
    mean: &[f64],
    scale: f64,
    count: usize,
    label: u8,
    rng: &mut ChaCha8Rng,
) -> Vec<Instance> {
    (0..count)
        .map(|_| {
            let features = mean
                .iter()
                .map(|&mu| {
                    let z: f64 = rng.sample(StandardNormal);
                    mu + scale * z
                })
                .collect();
            Instance::new(features, Some(label))
        })
        .collect()
}

/// Draws the positive and negative instance pools. Deterministic in the seed.
pub fn make_gaussian_pools(config: &GaussianPoolConfig) -> Result<(Vec<Instance>, Vec<Instance>)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pos = sample_blob(&config.pos_mean, config.covariance_scale, config.pos_pool_size, 1, &mut rng);
    let neg = sample_blob(&config.neg_mean, config.covariance_scale, config.neg_pool_size, 0, &mut rng);
    Ok((pos, neg))
}

/// Largest bag size drawn by the generation procedure (sizes are uniform on
/// `1..=MAX_BAG_SIZE`).
pub const MAX_BAG_SIZE: u64 = 9;

/// Samples a negative bag: size uniform on `{1..9}`, instances drawn with
/// replacement from the negative pool.
pub fn sample_negative_bag(neg_pool: &[Instance], rng: &mut ChaCha8Rng) -> Result<Bag> {
    if neg_pool.is_empty() {
        return Err(Error::Contract("negative pool is empty".into()));
    }
    let size = rng.random_range(1..=MAX_BAG_SIZE) as usize;
    let instances = (0..size)
        .map(|_| neg_pool[rng.random_range(0..neg_pool.len())].clone())
        .collect();
    Bag::new(instances, 0)
}

/// Samples a positive bag: size `n` uniform on `{1..9}`, positive count
/// uniform on `{1..n}`, instances drawn with replacement and shuffled so the
/// positives do not sit in a fixed position.
pub fn sample_positive_bag(
    pos_pool: &[Instance],
    neg_pool: &[Instance],
    rng: &mut ChaCha8Rng,
) -> Result<Bag> {
    if pos_pool.is_empty() {
        return Err(Error::Contract("positive pool is empty".into()));
    }
    if neg_pool.is_empty() {
        return Err(Error::Contract("negative pool is empty".into()));
    }
    let size = rng.random_range(1..=MAX_BAG_SIZE) as usize;
    let positives = rng.random_range(1..=size as u64) as usize;
    let mut instances: Vec<Instance> = (0..positives)
        .map(|_| pos_pool[rng.random_range(0..pos_pool.len())].clone())
        .collect();
    instances.extend((0..size - positives).map(|_| neg_pool[rng.random_range(0..neg_pool.len())].clone()));
    instances.shuffle(rng);
    Bag::new(instances, 1)
}

/// Builds a bag dataset with the requested bag counts. Positive bags come
/// first, then negative bags; order inside the set is deterministic in the
/// seed.
pub fn generate_bag_set(
    pos_pool: &[Instance],
    neg_pool: &[Instance],
    n_pos_bags: usize,
    n_neg_bags: usize,
    seed: u64,
) -> Result<BagDataset> {
    if n_pos_bags == 0 && n_neg_bags == 0 {
        return Err(Error::Contract("requested an empty bag set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bags = Vec::with_capacity(n_pos_bags + n_neg_bags);
    for _ in 0..n_pos_bags {
        bags.push(sample_positive_bag(pos_pool, neg_pool, &mut rng)?);
    }
    for _ in 0..n_neg_bags {
        bags.push(sample_negative_bag(neg_pool, &mut rng)?);
    }
    BagDataset::new(bags)
}

/// Splits a pool into two disjoint parts (for train/test separation), with
/// `fraction` of the instances going to the first part.
pub fn split_pool(pool: &[Instance], fraction: f64, seed: u64) -> Result<(Vec<Instance>, Vec<Instance>)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::Config("split fraction must be in [0, 1]".into()));
    }
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1));
    indices.shuffle(&mut rng);
    let cut = (pool.len() as f64 * fraction).round() as usize;
    let first = indices[..cut].iter().map(|&i| pool[i].clone()).collect();
    let second = indices[cut..].iter().map(|&i| pool[i].clone()).collect();
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> GaussianPoolConfig {
        GaussianPoolConfig::symmetric(2, 2.0, 500, 7)
    }

    #[test]
    fn degenerate_scale_collapses_to_the_mean() {
        let mut config = small_config();
        config.covariance_scale = 0.0;
        let (pos, neg) = make_gaussian_pools(&config).unwrap();
        assert!(pos.iter().all(|i| i.features() == [2.0, 0.0]));
        assert!(neg.iter().all(|i| i.features() == [-2.0, 0.0]));
    }

    #[test]
    fn pools_are_deterministic_in_the_seed() {
        let (a_pos, a_neg) = make_gaussian_pools(&small_config()).unwrap();
        let (b_pos, b_neg) = make_gaussian_pools(&small_config()).unwrap();
        assert_eq!(a_pos, b_pos);
        assert_eq!(a_neg, b_neg);
    }

    #[test]
    fn pool_overlap_matches_the_gaussian_tail() {
        // optimal separator for unit blobs at (+/-2, 0) is the x=0 plane;
        // the error rate on each side is the normal tail beyond 2 sigma.
        let config = GaussianPoolConfig::symmetric(2, 2.0, 10_000, 11);
        let (pos, neg) = make_gaussian_pools(&config).unwrap();
        let mistakes = pos.iter().filter(|i| i.features()[0] <= 0.0).count()
            + neg.iter().filter(|i| i.features()[0] > 0.0).count();
        let rate = mistakes as f64 / 20_000.0;
        assert!((rate - 0.0228).abs() < 0.005, "empirical overlap {rate}");
    }

    #[test]
    fn invalid_pool_configs_are_rejected() {
        let mut c = small_config();
        c.neg_mean = c.pos_mean.clone();
        assert!(make_gaussian_pools(&c).is_err());
        let mut c = small_config();
        c.covariance_scale = -1.0;
        assert!(make_gaussian_pools(&c).is_err());
    }

    #[test]
    fn negative_bags_have_valid_sizes_and_pure_labels() {
        let (_, neg) = make_gaussian_pools(&small_config()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let bag = sample_negative_bag(&neg, &mut rng).unwrap();
            assert!((1..=9).contains(&bag.len()));
            assert_eq!(bag.label(), 0);
            assert!(bag.instances().iter().all(|i| i.true_label() == Some(0)));
        }
    }

    #[test]
    fn negative_bag_mean_size_is_five() {
        let (_, neg) = make_gaussian_pools(&small_config()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let total: usize = (0..100_000)
            .map(|_| sample_negative_bag(&neg, &mut rng).unwrap().len())
            .sum();
        let mean = total as f64 / 100_000.0;
        assert!((mean - 5.0).abs() < 0.03, "mean bag size {mean}");
    }

    #[test]
    fn positive_bags_contain_a_positive() {
        let (pos, neg) = make_gaussian_pools(&small_config()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let bag = sample_positive_bag(&pos, &neg, &mut rng).unwrap();
            assert!((1..=9).contains(&bag.len()));
            assert_eq!(bag.label(), 1);
            assert!(bag.instances().iter().any(|i| i.true_label() == Some(1)));
        }
    }

    #[test]
    fn positive_bag_mean_positive_count_is_three() {
        let (pos, neg) = make_gaussian_pools(&small_config()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let total: usize = (0..100_000)
            .map(|_| {
                sample_positive_bag(&pos, &neg, &mut rng)
                    .unwrap()
                    .instances()
                    .iter()
                    .filter(|i| i.true_label() == Some(1))
                    .count()
            })
            .sum();
        let mean = total as f64 / 100_000.0;
        assert!((mean - 3.0).abs() < 0.03, "mean positive count {mean}");
    }

    #[test]
    fn generated_sets_have_requested_counts_and_are_deterministic() {
        let (pos, neg) = make_gaussian_pools(&small_config()).unwrap();
        let a = generate_bag_set(&pos, &neg, 300, 300, 17).unwrap();
        assert_eq!(a.n_bags(), 600);
        let b = generate_bag_set(&pos, &neg, 300, 300, 17).unwrap();
        assert_eq!(a, b);
        a.check_mil_assumption().unwrap();
    }

    #[test]
    fn all_negative_set_has_no_positive_instances() {
        let (pos, neg) = make_gaussian_pools(&small_config()).unwrap();
        let ds = generate_bag_set(&pos, &neg, 0, 50, 1).unwrap();
        assert_eq!(ds.n_pos_instances(), 0);
        assert!(ds.n_neg_instances() > 0);
        assert_eq!(ds.true_pi0().unwrap(), 1.0);
    }

    #[test]
    fn true_pi0_matches_the_generation_procedure() {
        let config = GaussianPoolConfig::symmetric(2, 2.0, 20_000, 23);
        let (pos, neg) = make_gaussian_pools(&config).unwrap();
        let ds = generate_bag_set(&pos, &neg, 20_000, 20_000, 29).unwrap();
        let pi0 = ds.true_pi0().unwrap();
        assert!((pi0 - 0.70).abs() < 0.01, "measured pi0 {pi0}");
        assert!((0.5..=0.9).contains(&pi0));
    }

    #[test]
    fn true_pi0_requires_labels() {
        let bag = Bag::new(vec![Instance::new(vec![0.0], None)], 0).unwrap();
        let ds = BagDataset::new(vec![bag]).unwrap();
        assert!(ds.true_pi0().is_err());
    }

    #[test]
    fn dataset_rejects_mixed_dims() {
        let bags = vec![
            Bag::new(vec![Instance::new(vec![0.0, 1.0], Some(0))], 0).unwrap(),
            Bag::new(vec![Instance::new(vec![0.0], Some(0))], 0).unwrap(),
        ];
        assert!(BagDataset::new(bags).is_err());
    }

    #[test]
    fn bag_size_histogram_is_uniform() {
        let (_, neg) = make_gaussian_pools(&small_config()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut counts = [0usize; 9];
        let n = 100_000;
        for _ in 0..n {
            counts[sample_negative_bag(&neg, &mut rng).unwrap().len() - 1] += 1;
        }
        let expected = n as f64 / 9.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 0.01 upper quantile of chi-square with 8 degrees of freedom
        assert!(chi2 < 20.09, "chi2 statistic {chi2}");
    }

    #[test]
    fn split_pools_are_disjoint_and_cover() {
        let (pos, _) = make_gaussian_pools(&small_config()).unwrap();
        let (a, b) = split_pool(&pos, 0.8, 9).unwrap();
        assert_eq!(a.len() + b.len(), pos.len());
        assert_eq!(a.len(), 400);
        for inst in &a {
            assert!(!b.contains(inst));
        }
    }

    #[test]
    fn label_reads_are_counted() {
        let inst = Instance::new(vec![1.0], Some(1));
        reset_label_reads();
        assert_eq!(label_reads(), 0);
        let _ = inst.true_label();
        let _ = inst.true_label();
        assert_eq!(label_reads(), 2);
        reset_label_reads();
    }
}
