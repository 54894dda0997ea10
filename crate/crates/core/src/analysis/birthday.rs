use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{invalid, AnalysisError};
use crate::seed::derive;

/// Number of bins holding at least two of `m` uniform balls in `n` bins,
/// one value per trial. Trial `i` draws its balls from the stream
/// `derive(seed, i)`. The first `m` balls of a trial do not depend on `m`,
/// and the counts are nondecreasing in `m` trial by trial.
pub fn k_birthday_counts(
    m: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<usize>, AnalysisError> {
    for (name, value) in [("m", m), ("n", n), ("trials", trials)] {
        if value == 0 {
            return Err(invalid(name, "must be at least 1"));
        }
    }
    Ok((0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, trial as u64));
            let mut bins: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
            bins.sort_unstable();
            bins.chunk_by(|a, b| a == b).filter(|run| run.len() >= 2).count()
        })
        .collect())
}

/// Empirical probability that at least `k` bins receive two or more balls.
pub fn k_birthday_sim(
    m: usize,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<f64, AnalysisError> {
    let counts = k_birthday_counts(m, n, trials, seed)?;
    Ok(counts.iter().filter(|&&c| c >= k).count() as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_cases() {
        for k in 1..5 {
            assert_eq!(k_birthday_sim(1, 100, k, 50, 0), Ok(0.0));
        }
        assert_eq!(k_birthday_sim(2, 1, 1, 50, 0), Ok(1.0));
        assert!(k_birthday_sim(0, 1, 1, 50, 0).is_err());
        assert!(k_birthday_sim(3, 1, 1, 0, 0).is_err());
    }

    #[test]
    fn counts_match_brute_force() {
        let counts = k_birthday_counts(30, 40, 20, 5).unwrap();
        for (trial, &c) in counts.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(5, trial as u64));
            let mut load = vec![0usize; 40];
            for _ in 0..30 {
                load[rng.random_range(0..40)] += 1;
            }
            assert_eq!(c, load.iter().filter(|&&l| l >= 2).count());
        }
    }

    #[test]
    fn monotone_in_m_per_trial() {
        let small = k_birthday_counts(50, 500, 200, 9).unwrap();
        let large = k_birthday_counts(80, 500, 200, 9).unwrap();
        assert!(small.iter().zip(&large).all(|(a, b)| a <= b));
    }
}
