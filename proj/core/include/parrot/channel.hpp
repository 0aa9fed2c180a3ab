#pragma once

#include <random>

namespace parrot::channel {

enum class Model { rural, urban };

/// Log-distance link budget anchored at the free-space loss of d0.
struct LinkBudget {
  double tx_power_dbm = 20.0;
  double frequency_hz = 2.4e9;
  double path_loss_exponent = 2.75;
  double d0 = 1.0;
  double sensitivity_dbm = -79.89;
  double nakagami_m = 2.0;

  void validate() const;

  /// Default budget with the sensitivity solved so that compute_r_tx() == range.
  static LinkBudget for_range(double range_m);
};

/// Free-space path loss in dB at distance d for the budget's carrier.
double free_space_loss_db(double frequency_hz, double d);

double mean_rx_power(const LinkBudget& budget, double distance);

/// Distance at which the mean received power equals the sensitivity.
/// Throws ConfigError when the sensitivity is not reachable even at d0.
double compute_r_tx(const LinkBudget& budget);

/// Nakagami-m power gain: Gamma(shape m, scale 1/m), unit mean.
double sample_nakagami_gain(double m, std::mt19937_64& rng);

/// Rural: deterministic disk of radius r_tx. Urban: per-frame Nakagami fading
/// on top of the mean received power. `r_tx` is passed in so callers can cache it.
bool receive(const LinkBudget& budget, Model model, double distance, double r_tx,
             std::mt19937_64& rng);
bool receive(const LinkBudget& budget, Model model, double distance, std::mt19937_64& rng);

}  // namespace parrot::channel
