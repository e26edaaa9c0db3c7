use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ResampleMethod {
    CrossValidation { k: usize },
    Bootstrap { k: usize },
    /// First `split_index` samples train, the rest test. No shuffling.
    Chronological { split_index: usize },
}

/// k (training, testing) pairs drawn from one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldSet {
    pub pairs: Vec<(Dataset, Dataset)>,
}

impl FoldSet {
    pub fn single(train: Dataset, test: Dataset) -> Self {
        Self {
            pairs: vec![(train, test)],
        }
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }
}

pub fn resample(data: &Dataset, method: ResampleMethod, seed: u64) -> Result<FoldSet> {
    let n = data.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    match method {
        ResampleMethod::CrossValidation { k } => {
            if k == 0 {
                return Err(Error::InvalidResampling("k must be at least 1".into()));
            }
            if k > n {
                return Err(Error::TooManyFolds {
                    folds: k,
                    samples: n,
                });
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng_from_seed(seed));
            let base = n / k;
            let extra = n % k;
            let mut start = 0;
            let mut pairs = Vec::with_capacity(k);
            for fold in 0..k {
                let size = base + usize::from(fold < extra);
                let mut test_idx = order[start..start + size].to_vec();
                test_idx.sort_unstable();
                start += size;
                let mut in_test = vec![false; n];
                for &i in &test_idx {
                    in_test[i] = true;
                }
                let train_idx: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
                pairs.push((data.select(&train_idx), data.select(&test_idx)));
            }
            Ok(FoldSet { pairs })
        }
        ResampleMethod::Bootstrap { k } => {
            if k == 0 {
                return Err(Error::InvalidResampling("k must be at least 1".into()));
            }
            let mut rng = rng_from_seed(seed);
            let mut pairs = Vec::with_capacity(k);
            for _ in 0..k {
                let mut drawn = vec![false; n];
                let train_idx: Vec<usize> = (0..n)
                    .map(|_| {
                        let i = rng.random_range(0..n as u64) as usize;
                        drawn[i] = true;
                        i
                    })
                    .collect();
                let test_idx: Vec<usize> = (0..n).filter(|&i| !drawn[i]).collect();
                pairs.push((data.select(&train_idx), data.select(&test_idx)));
            }
            Ok(FoldSet { pairs })
        }
        ResampleMethod::Chronological { split_index } => {
            if split_index >= n {
                return Err(Error::InvalidResampling(format!(
                    "split index {split_index} must be below {n}"
                )));
            }
            let train: Vec<usize> = (0..split_index).collect();
            let test: Vec<usize> = (split_index..n).collect();
            Ok(FoldSet::single(data.select(&train), data.select(&test)))
        }
    }
}
