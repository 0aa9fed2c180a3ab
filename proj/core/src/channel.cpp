#include "parrot/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parrot/errors.hpp"

namespace parrot::channel {
namespace {
constexpr double kSpeedOfLight = 299'792'458.0;
}

void LinkBudget::validate() const {
  if (!(path_loss_exponent > 0.0)) throw ConfigError("path_loss_exponent must be > 0");
  if (!(d0 > 0.0)) throw ConfigError("d0 must be > 0");
  if (!(frequency_hz > 0.0)) throw ConfigError("frequency must be > 0");
  if (!(nakagami_m >= 0.5)) throw ConfigError("nakagami_m must be >= 0.5");
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(sensitivity_dbm)) {
    throw ConfigError("tx_power and sensitivity must be finite");
  }
}

LinkBudget LinkBudget::for_range(double range_m) {
  LinkBudget b;
  b.sensitivity_dbm = mean_rx_power(b, range_m);
  return b;
}

double free_space_loss_db(double frequency_hz, double d) {
  return 20.0 * std::log10(4.0 * std::numbers::pi * d * frequency_hz / kSpeedOfLight);
}

double mean_rx_power(const LinkBudget& budget, double distance) {
  const double d = std::max(distance, budget.d0);
  return budget.tx_power_dbm - free_space_loss_db(budget.frequency_hz, budget.d0) -
         10.0 * budget.path_loss_exponent * std::log10(d / budget.d0);
}

double compute_r_tx(const LinkBudget& budget) {
  budget.validate();
  const double margin = budget.tx_power_dbm -
                        free_space_loss_db(budget.frequency_hz, budget.d0) -
                        budget.sensitivity_dbm;
  if (!(margin > 0.0)) {
    throw ConfigError("sensitivity is not reachable: mean power at d0 is below it");
  }
  return budget.d0 * std::pow(10.0, margin / (10.0 * budget.path_loss_exponent));
}

double sample_nakagami_gain(double m, std::mt19937_64& rng) {
  std::gamma_distribution<double> gain(m, 1.0 / m);
  return gain(rng);
}

bool receive(const LinkBudget& budget, Model model, double distance, double r_tx,
             std::mt19937_64& rng) {
  if (model == Model::rural) return distance <= r_tx;
  const double g = sample_nakagami_gain(budget.nakagami_m, rng);
  return mean_rx_power(budget, distance) + 10.0 * std::log10(g) >= budget.sensitivity_dbm;
}

bool receive(const LinkBudget& budget, Model model, double distance, std::mt19937_64& rng) {
  return receive(budget, model, distance, compute_r_tx(budget), rng);
}

}  // namespace parrot::channel
