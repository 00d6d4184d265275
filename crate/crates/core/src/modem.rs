//! Symbol mapping for BPSK and Gray-coded 2^M-PAM, the Gray/natural bit
//! transforms, and the AWGN channel.
//!
//! Constellations live on the real axis and are normalized to unit average
//! energy. `M = 1` is BPSK. The SNR convention is symbol SNR `Es/N0` with
//! `Es = 1`, so the per-sample real noise variance is
//! `sigma2 = 10^(-snr_db/10) / 2`.

use crate::bits::Bits;
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Power-normalization scale `A = (4^M - 1)/3`, so that the levels
/// `{±1, ±3, ...}/sqrt(A)` of 2^M-PAM have unit mean energy.
pub fn scaling_factor(m: usize) -> Result<f64> {
    if !(1..=31).contains(&m) {
        return Err(Error::invalid_parameter(format!(
            "bits per symbol must be in 1..=31, got {m}"
        )));
    }
    Ok(((1u64 << (2 * m)) - 1) as f64 / 3.0)
}

/// A real-axis constellation: `M` bits per symbol and its normalization scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationScheme {
    bits_per_symbol: usize,
    scale: f64,
}

impl ModulationScheme {
    /// Gray-coded 2^M-PAM; `M = 1` is BPSK.
    pub fn pam(bits_per_symbol: usize) -> Result<Self> {
        Ok(Self {
            bits_per_symbol,
            scale: scaling_factor(bits_per_symbol)?,
        })
    }

    pub fn bpsk() -> Self {
        Self::pam(1).unwrap()
    }

    /// Bits per symbol `M`.
    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Normalization scale `A`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Parses `bpsk` or `pam<2^M>` (e.g. `pam4`, `pam16`).
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if lower == "bpsk" {
            return Ok(Self::bpsk());
        }
        let order: usize = lower
            .strip_prefix("pam")
            .and_then(|digits| digits.parse().ok())
            .ok_or_else(|| Error::invalid_parameter(format!("unknown modulation {name:?}")))?;
        if !order.is_power_of_two() || order < 2 {
            return Err(Error::invalid_parameter(format!(
                "PAM order must be a power of two >= 2, got {order}"
            )));
        }
        Self::pam(order.trailing_zeros() as usize)
    }

    /// Canonical name (`bpsk` or `pam<order>`).
    pub fn name(&self) -> String {
        if self.bits_per_symbol == 1 {
            "bpsk".to_string()
        } else {
            format!("pam{}", 1usize << self.bits_per_symbol)
        }
    }

    /// Gray-labeled symbol coordinate:
    /// `S_G(z) = (1/sqrt(A)) * sum_j 2^(M-j-1) (-1)^j prod_{k<=j} (1 - 2 z_k)`.
    pub fn map_gray(&self, z: &[bool]) -> Result<f64> {
        self.check_label_len(z)?;
        let mut sum = 0.0;
        let mut prefix = 1.0;
        for (j, &bit) in z.iter().enumerate() {
            prefix *= 1.0 - 2.0 * (bit as u8 as f64);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += (1u64 << (self.bits_per_symbol - j - 1)) as f64 * sign * prefix;
        }
        Ok(sum / self.scale.sqrt())
    }

    /// Natural-labeled symbol coordinate, each term first order in one bit:
    /// `S_N(z') = (1/sqrt(A)) * sum_j 2^(M-j-1) (-1)^j (1 - 2 z'_j)`.
    pub fn map_natural(&self, z: &[bool]) -> Result<f64> {
        self.check_label_len(z)?;
        let mut sum = 0.0;
        for (j, &bit) in z.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += (1u64 << (self.bits_per_symbol - j - 1)) as f64
                * sign
                * (1.0 - 2.0 * (bit as u8 as f64));
        }
        Ok(sum / self.scale.sqrt())
    }

    fn check_label_len(&self, z: &[bool]) -> Result<()> {
        if z.len() != self.bits_per_symbol {
            return Err(Error::invalid_input(format!(
                "expected {} label bits, got {}",
                self.bits_per_symbol,
                z.len()
            )));
        }
        Ok(())
    }
}

/// Gray label to natural label: cumulative XOR, `z'_s = z_0 ^ ... ^ z_s`.
///
/// Satisfies `S_N(gray_to_binary(z)) = S_G(z)` for every label.
pub fn gray_to_binary(z: &[bool]) -> Bits {
    let mut acc = false;
    z.iter()
        .map(|&bit| {
            acc ^= bit;
            acc
        })
        .collect()
}

/// Natural label to Gray label: adjacent XOR, inverse of [`gray_to_binary`].
pub fn binary_to_gray(z: &[bool]) -> Bits {
    (0..z.len())
        .map(|s| if s == 0 { z[0] } else { z[s - 1] ^ z[s] })
        .collect()
}

/// AWGN channel at a fixed symbol SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    snr_db: f64,
    sigma2: f64,
}

impl ChannelModel {
    /// Symbol SNR `Es/N0` in dB with `Es = 1`; `sigma2 = 10^(-snr_db/10)/2`.
    pub fn from_snr_db(snr_db: f64) -> Self {
        Self {
            snr_db,
            sigma2: 10f64.powf(-snr_db / 10.0) / 2.0,
        }
    }

    /// Exactly noiseless channel.
    pub fn noiseless() -> Self {
        Self {
            snr_db: f64::INFINITY,
            sigma2: 0.0,
        }
    }

    pub fn snr_db(&self) -> f64 {
        self.snr_db
    }

    /// Per-sample real noise variance `N0/2`.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Adds independent zero-mean Gaussian noise of variance `sigma2` to each
    /// symbol. Deterministic for a given rng state.
    pub fn transmit<R: Rng + ?Sized>(&self, symbols: &[f64], rng: &mut R) -> Vec<f64> {
        if self.sigma2 == 0.0 {
            return symbols.to_vec();
        }
        let sigma = self.sigma2.sqrt();
        symbols
            .iter()
            .map(|&s| {
                let noise: f64 = StandardNormal.sample(rng);
                s + sigma * noise
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_labels(m: usize) -> Vec<Bits> {
        (0..(1usize << m))
            .map(|i| (0..m).map(|j| (i >> (m - 1 - j)) & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn scaling_factor_matches_mean_square_of_raw_levels() {
        // Oracle: average of the squared unnormalized levels {±1, ±3, ...}.
        for m in 1..=6 {
            let levels = 1usize << m;
            let mean_square: f64 = (0..levels)
                .map(|i| {
                    let level = (2 * i as i64 + 1 - levels as i64) as f64;
                    level * level
                })
                .sum::<f64>()
                / levels as f64;
            assert_abs_diff_eq!(scaling_factor(m).unwrap(), mean_square, epsilon = 1e-9);
        }
        assert_eq!(scaling_factor(1).unwrap(), 1.0);
        assert_eq!(scaling_factor(2).unwrap(), 5.0);
        assert_eq!(scaling_factor(4).unwrap(), 85.0);
        assert!(scaling_factor(0).is_err());
        assert!(scaling_factor(32).is_err());
    }

    #[test]
    fn gray_map_matches_hand_evaluated_levels() {
        let bpsk = ModulationScheme::bpsk();
        assert_abs_diff_eq!(bpsk.map_gray(&[false]).unwrap(), 1.0);
        assert_abs_diff_eq!(bpsk.map_gray(&[true]).unwrap(), -1.0);

        let pam4 = ModulationScheme::pam(2).unwrap();
        let s5 = 5f64.sqrt();
        assert_abs_diff_eq!(
            pam4.map_gray(&[false, false]).unwrap(),
            1.0 / s5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pam4.map_gray(&[false, true]).unwrap(),
            3.0 / s5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pam4.map_gray(&[true, true]).unwrap(),
            -3.0 / s5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pam4.map_gray(&[true, false]).unwrap(),
            -1.0 / s5,
            epsilon = 1e-12
        );

        let pam8 = ModulationScheme::pam(3).unwrap();
        assert_abs_diff_eq!(
            pam8.map_gray(&[true, false, false]).unwrap(),
            -3.0 / 21f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn natural_map_matches_hand_evaluated_levels() {
        let pam4 = ModulationScheme::pam(2).unwrap();
        let s5 = 5f64.sqrt();
        assert_abs_diff_eq!(
            pam4.map_natural(&[false, false]).unwrap(),
            1.0 / s5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pam4.map_natural(&[false, true]).unwrap(),
            3.0 / s5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pam4.map_natural(&[true, false]).unwrap(),
            -3.0 / s5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pam4.map_natural(&[true, true]).unwrap(),
            -1.0 / s5,
            epsilon = 1e-12
        );

        let bpsk = ModulationScheme::bpsk();
        assert_abs_diff_eq!(bpsk.map_natural(&[true]).unwrap(), -1.0);

        let pam8 = ModulationScheme::pam(3).unwrap();
        assert_abs_diff_eq!(
            pam8.map_natural(&[true, true, true]).unwrap(),
            -3.0 / 21f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn label_length_is_checked() {
        let pam4 = ModulationScheme::pam(2).unwrap();
        assert!(pam4.map_gray(&[false]).is_err());
        assert!(pam4.map_natural(&[false, true, true]).is_err());
    }

    #[test]
    fn gray_to_binary_matches_examples_and_level_identity() {
        assert_eq!(gray_to_binary(&[true, true]), vec![true, false]);
        assert_eq!(gray_to_binary(&[false, false, false]), vec![false; 3]);
        assert_eq!(gray_to_binary(&[true, false, false]), vec![true; 3]);

        for m in 1..=6 {
            let scheme = ModulationScheme::pam(m).unwrap();
            for z in all_labels(m) {
                let natural = gray_to_binary(&z);
                assert_abs_diff_eq!(
                    scheme.map_natural(&natural).unwrap(),
                    scheme.map_gray(&z).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn binary_to_gray_inverts_gray_to_binary() {
        assert_eq!(binary_to_gray(&[true, false]), vec![true, true]);
        assert_eq!(
            binary_to_gray(&[true, true, true]),
            vec![true, false, false]
        );
        for m in 1..=6 {
            for z in all_labels(m) {
                assert_eq!(binary_to_gray(&gray_to_binary(&z)), z);
                assert_eq!(gray_to_binary(&binary_to_gray(&z)), z);
            }
        }
    }

    #[test]
    fn gray_labeling_has_unit_hamming_steps() {
        for m in 1..=6 {
            let scheme = ModulationScheme::pam(m).unwrap();
            let mut labeled: Vec<(f64, Bits)> = all_labels(m)
                .into_iter()
                .map(|z| (scheme.map_gray(&z).unwrap(), z))
                .collect();
            labeled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for pair in labeled.windows(2) {
                let distance: usize = pair[0]
                    .1
                    .iter()
                    .zip(&pair[1].1)
                    .filter(|(a, b)| a != b)
                    .count();
                assert_eq!(distance, 1, "adjacent levels differ in one bit (M={m})");
            }
        }
    }

    #[test]
    fn constellation_has_unit_mean_energy() {
        for m in 1..=6 {
            let scheme = ModulationScheme::pam(m).unwrap();
            let mean: f64 = all_labels(m)
                .iter()
                .map(|z| scheme.map_gray(z).unwrap().powi(2))
                .sum::<f64>()
                / (1usize << m) as f64;
            assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn modulation_names_parse_and_roundtrip() {
        assert_eq!(
            ModulationScheme::parse("bpsk").unwrap().bits_per_symbol(),
            1
        );
        assert_eq!(
            ModulationScheme::parse("pam4").unwrap().bits_per_symbol(),
            2
        );
        assert_eq!(
            ModulationScheme::parse("pam16").unwrap().bits_per_symbol(),
            4
        );
        assert_eq!(ModulationScheme::parse("pam16").unwrap().name(), "pam16");
        assert!(ModulationScheme::parse("qam16").is_err());
        assert!(ModulationScheme::parse("pam3").is_err());
    }

    #[test]
    fn noiseless_channel_is_exact() {
        let channel = ChannelModel::noiseless();
        let symbols = [0.25, -1.5, 3.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(channel.transmit(&symbols, &mut rng), symbols.to_vec());
    }

    #[test]
    fn noise_moments_match_channel_variance() {
        let channel = ChannelModel::from_snr_db(3.0);
        let sigma2 = channel.sigma2();
        let n = 1_000_000usize;
        let symbols = vec![0.5; n];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let received = channel.transmit(&symbols, &mut rng);
        let mean: f64 = received.iter().map(|y| y - 0.5).sum::<f64>() / n as f64;
        let var: f64 = received
            .iter()
            .map(|y| (y - 0.5 - mean).powi(2))
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 5e-3, "sample mean {mean} too far from zero");
        assert!(
            (var - sigma2).abs() < 0.01 * sigma2,
            "sample variance {var} vs sigma2 {sigma2}"
        );
    }

    #[test]
    fn transmission_is_deterministic_per_seed() {
        let channel = ChannelModel::from_snr_db(4.0);
        let symbols = [1.0, -1.0, 1.0];
        let mut a = ChaCha8Rng::seed_from_u64(17);
        let mut b = ChaCha8Rng::seed_from_u64(17);
        assert_eq!(
            channel.transmit(&symbols, &mut a),
            channel.transmit(&symbols, &mut b)
        );
    }

    #[test]
    fn snr_convention_pins_sigma2() {
        let channel = ChannelModel::from_snr_db(0.0);
        assert_abs_diff_eq!(channel.sigma2(), 0.5);
        let channel = ChannelModel::from_snr_db(10.0);
        assert_abs_diff_eq!(channel.sigma2(), 0.05, epsilon = 1e-12);
    }
}
