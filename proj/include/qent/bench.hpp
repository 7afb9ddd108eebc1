#pragma once

// Parameter sweeps over the example systems and their CSV encoding.
//
// CSV: one header row, comma separated, '\n' line endings, reals as %.12e,
// verdicts as 0/1. A verdict column is 1 when the matching value is below
// -1e-10 * max(1, |scale|) (witnesses, DGCZ) or above 1e-10 * max(1, rhs)
// (HZ). Output depends only on the configuration, never on the thread count.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qent/states.hpp"

namespace qent {

enum class Experiment { bell, werner, region, kerr, scaling };

Experiment parse_experiment(const std::string& name);
const char* experiment_name(Experiment e);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

/// Parses "start:stop:count".
GridSpec parse_grid(const std::string& text);

struct SweepConfig {
  Experiment experiment = Experiment::werner;
  std::map<std::string, GridSpec> grids;
  std::optional<int> cutoff;  // empty: auto
  double tail_tolerance = kDefaultTailTolerance;
  int theta_points = 64;
  int threads = 1;
  std::optional<double> alpha;
  std::optional<double> beta;
  int werner_family = 1;
  std::vector<double> alpha_list{2.0, 3.0, 4.0, 5.0};
};

/// Default grids and truncation for an experiment.
///   werner:  p = 0:1:101
///   region:  p = 0:1:21, r = 0.05:1.5:21, cutoff 30, tail tolerance 1e-2
///   kerr:    t = 0:2pi:128 (alpha, beta required)
///   scaling: t = 0.005:pi/2:160 (TW minimum search),
///            dgcz_t = 0.001:1:400 (first DGCZ zero crossing)
SweepConfig default_config(Experiment e);

/// Throws invalid_argument on an unusable configuration.
void validate(const SweepConfig& config);

struct BellRecord {
  int which = 0;
  double tw_minus_minus = 0.0;  // witness_product(sigma-, sigma-)
  double tw_minus_plus = 0.0;   // witness_product(sigma-, sigma+)
  double tw_general = 0.0;      // general product form, sigma_A = 1, sigma_B = 0, optimal phase
  double phase_value = 0.0;     // witness_phase(sigma-, sigma-), optimal phase
  double hz1 = 0.0;
  double hz2 = 0.0;
  double negativity = 0.0;
  double entropy = 0.0;
};

struct WernerRecord {
  double p = 0.0;
  double tw_value = 0.0;
  double hz1 = 0.0;
  double hz2 = 0.0;
  double negativity = 0.0;
  bool verdict_tw = false;
  bool verdict_hz = false;
};

struct WernerThresholds {
  double tw = 0.0;
  std::optional<double> hz;  // absent when HZ never fires on the family
  double ppt = 0.0;
};

struct WernerStudy {
  int family = 1;
  std::vector<WernerRecord> records;
  WernerThresholds thresholds;
};

/// TW uses (sigma-, sigma-) on family 2 and (sigma-, sigma+) on family 1;
/// HZ always uses (sigma-, sigma-). Zero crossings are bisected to 1e-12.
WernerStudy run_werner_study(int family, const std::vector<double>& p_grid);

struct RegionRecord {
  double p = 0.0;
  double r = 0.0;
  double tw_value = 0.0;
  double tw_scale = 0.0;  // <n_a><n_b>
  double twe_value = 0.0;
  bool twe_valid = false;
  double hz1 = 0.0;
  double hz2 = 0.0;
  double negativity = 0.0;
  bool verdict_tw = false;
  bool verdict_twe = false;
  bool verdict_hz = false;
  int cutoff = 0;
  double discarded_weight = 0.0;
};

std::vector<RegionRecord> run_region_sweep(const SweepConfig& config);

struct KerrRecord {
  double t = 0.0;
  double tw_value = 0.0;
  double theta = 0.0;
  double tw_scale = 0.0;
  double dgcz_margin = 0.0;
  double dgcz_lhs = 0.0;
  double tau = 0.0;
  double tau_prime = 0.0;
  double entropy = 0.0;
  bool verdict_tw = false;
  bool verdict_dgcz = false;
  int cutoff_a = 0;
  int cutoff_b = 0;
  double discarded_weight = 0.0;
};

std::vector<KerrRecord> run_kerr_time_sweep(const SweepConfig& config);

struct ScalingRecord {
  double alpha = 0.0;
  double t_tw_min = 0.0;
  double tw_min_value = 0.0;
  std::optional<double> t_dgcz_zero;
  int cutoff = 0;
  double discarded_weight = 0.0;
};

struct ScalingStudy {
  std::vector<ScalingRecord> records;
  double tw_slope = 0.0;
  std::optional<double> dgcz_slope;
};

ScalingStudy run_scaling_sweep(const SweepConfig& config);

std::vector<BellRecord> run_bell_study();

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string to_csv(const std::vector<BellRecord>& records);
std::string to_csv(const std::vector<WernerRecord>& records);
std::string to_csv(const std::vector<RegionRecord>& records);
std::string to_csv(const std::vector<KerrRecord>& records);
std::string to_csv(const std::vector<ScalingRecord>& records);

struct SweepOutput {
  std::string csv;
  std::string summary;  // "key=value" lines
};

SweepOutput run_sweep(const SweepConfig& config);

}  // namespace qent
