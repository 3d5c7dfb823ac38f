#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qsl/atoms.hpp"
#include "qsl/krotov.hpp"
#include "qsl/transmons.hpp"

namespace qsl {

// Replaces the values of every live (non-frozen) field with a smooth random
// guess: bounded fields get center + scale*(hi-lo)/2 * f(t) clamped into the
// open interval, unbounded fields get scale * f(t). Masked samples and frozen
// fields keep their configured values.
std::vector<ControlField> random_guess_fields(const std::vector<ControlField>& prototypes,
                                              int m_min, int m_max, double scale,
                                              std::uint64_t seed);

struct ScanModel {
  std::variant<AtomArrayConfig, TransmonPlaquetteConfig> config;
  FieldConfiguration configuration = FieldConfiguration::atoms_phase;
  double dt_ns = 1.0;  // grid step; defaults: atoms 1 ns, transmons 0.02 ns

  std::pair<HamiltonianModel, std::vector<ControlField>> build(double duration_ns) const;
};

struct ScanSpec {
  GateTarget gate;
  ScanModel model;
  std::vector<double> t_values_ns;  // strictly decreasing ladder
  int restarts_per_t = 10;
  std::uint64_t seed = 0;
  double epsilon_max = 1e-3;
  KrotovOptions krotov;
  int guess_m_min = 1;
  int guess_m_max = 20;
  double guess_scale = 1.0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct ScanCell {
  double t_ns = 0.0;
  int restart = 0;
  std::uint64_t seed = 0;
  double final_error = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct QslScanResult {
  std::vector<double> t_values_ns;
  int restarts_per_t = 0;
  double epsilon_max = 0.0;
  std::vector<ScanCell> cells;  // ordered by (t index, restart index)
  std::vector<double> best_eps_per_t;
  std::optional<double> t_qsl_ns;

  double best_eps(double t_ns) const;
  double success_fraction(double t_ns) const;
};

// Runs restarts_per_t independent optimizations from fresh random guesses for
// every ladder duration. The QSL verdict is the shortest duration that
// succeeded with no fully failed duration above it; a ladder whose top rung
// fails yields "not found". Deterministic for a fixed seed, independent of
// the number of worker threads.
QslScanResult run_scan(const ScanSpec& spec);

struct HistogramRow {
  double lo = 0.0;
  double hi = 0.0;
  long count = 0;
};

// Log-spaced histogram of all final errors; under/overflow is clamped into
// the edge bins so the counts always add up to restarts * |T_values|.
std::vector<HistogramRow> density_histogram(const QslScanResult& result, int n_bins);

}  // namespace qsl
