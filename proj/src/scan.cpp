#include "qsl/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qsl/rng.hpp"

namespace qsl {

std::vector<ControlField> random_guess_fields(const std::vector<ControlField>& prototypes,
                                              int m_min, int m_max, double scale,
                                              std::uint64_t seed) {
  std::vector<ControlField> fields = prototypes;
  std::uint64_t salt = 0;
  for (auto& f : fields) {
    if (f.frozen) continue;
    RandomFieldSpec spec;
    spec.m_min = m_min;
    spec.m_max = m_max;
    spec.seed = derive_seed(seed, ++salt);
    spec.scale = scale * (f.bounds ? 0.5 * (f.bounds->hi - f.bounds->lo) : 1.0);
    const ControlField noise = generate_random_field(spec, f.grid);
    const double center = f.bounds ? 0.5 * (f.bounds->hi + f.bounds->lo) : 0.0;
    for (int k = 0; k < f.grid.n_steps; ++k) {
      if (!f.sample_updatable(k)) continue;
      double v = center + noise.values[k];
      if (f.bounds) {
        // keep strictly inside; the optimizer re-parametrizes through tanh
        const double half = 0.5 * (f.bounds->hi - f.bounds->lo);
        v = center + std::clamp((v - center) / half, -0.99, 0.99) * half;
      }
      f.values[k] = v;
    }
  }
  return fields;
}

std::pair<HamiltonianModel, std::vector<ControlField>> ScanModel::build(
    double duration_ns) const {
  if (!(dt_ns > 0.0)) throw ConfigError("ScanModel: dt must be positive");
  const int n_steps = std::max(1, static_cast<int>(std::lround(duration_ns / dt_ns)));
  const TimeGrid grid = TimeGrid::over(0.0, duration_ns, n_steps);
  if (std::holds_alternative<AtomArrayConfig>(config))
    return build_atom_model(std::get<AtomArrayConfig>(config), configuration, grid);
  return build_transmon_model(std::get<TransmonPlaquetteConfig>(config), configuration, grid);
}

void ScanSpec::validate() const {
  if (t_values_ns.empty()) throw ConfigError("ScanSpec: t_values must not be empty");
  for (std::size_t i = 0; i < t_values_ns.size(); ++i) {
    if (!(t_values_ns[i] > 0.0)) throw ConfigError("ScanSpec: t_values must be positive");
    if (i > 0 && !(t_values_ns[i] < t_values_ns[i - 1]))
      throw ConfigError("ScanSpec: t_values must be strictly decreasing");
  }
  if (restarts_per_t < 1) throw ConfigError("ScanSpec: restarts_per_t must be >= 1");
  if (!(epsilon_max > 0.0 && epsilon_max < 1.0))
    throw ConfigError("ScanSpec: epsilon_max must lie in (0, 1)");
  if (guess_m_min < 1 || guess_m_max < guess_m_min)
    throw ConfigError("ScanSpec: guess m range must be nonempty with m >= 1");
  krotov.validate();
}

double QslScanResult::best_eps(double t_ns) const {
  for (std::size_t i = 0; i < t_values_ns.size(); ++i)
    if (t_values_ns[i] == t_ns) return best_eps_per_t[i];
  throw ConfigError("best_eps: duration not in the scan ladder");
}

double QslScanResult::success_fraction(double t_ns) const {
  int total = 0, good = 0;
  for (const auto& c : cells) {
    if (c.t_ns != t_ns) continue;
    ++total;
    if (c.final_error <= epsilon_max) ++good;
  }
  if (total == 0) throw ConfigError("success_fraction: duration not in the scan ladder");
  return static_cast<double>(good) / total;
}

QslScanResult run_scan(const ScanSpec& spec) {
  spec.validate();

  const int n_t = static_cast<int>(spec.t_values_ns.size());
  const int n_r = spec.restarts_per_t;

  QslScanResult result;
  result.t_values_ns = spec.t_values_ns;
  result.restarts_per_t = n_r;
  result.epsilon_max = spec.epsilon_max;
  result.cells.resize(static_cast<std::size_t>(n_t) * n_r);

  // One shared immutable model + target set per ladder duration.
  struct PerT {
    HamiltonianModel model;
    std::vector<ControlField> prototypes;
    TargetStateSet targets;
  };
  std::vector<PerT> per_t(n_t);
  for (int ti = 0; ti < n_t; ++ti) {
    auto [model, fields] = spec.model.build(spec.t_values_ns[ti]);
    per_t[ti].targets = embed_targets(spec.gate, model);
    per_t[ti].model = std::move(model);
    per_t[ti].prototypes = std::move(fields);
  }

  const KrotovOptions base_options = [&] {
    KrotovOptions o = spec.krotov;
    o.epsilon_max = spec.epsilon_max;
    return o;
  }();

  auto run_cell = [&](int flat) {
    const int ti = flat / n_r;
    const int ri = flat % n_r;
    const std::uint64_t cell_seed =
        derive_seed(spec.seed, static_cast<std::uint64_t>(ti), static_cast<std::uint64_t>(ri));
    auto guess = random_guess_fields(per_t[ti].prototypes, spec.guess_m_min, spec.guess_m_max,
                                     spec.guess_scale, cell_seed);
    OptimizationResult opt =
        krotov_optimize(per_t[ti].model, std::move(guess), per_t[ti].targets, base_options);
    ScanCell cell;
    cell.t_ns = spec.t_values_ns[ti];
    cell.restart = ri;
    cell.seed = cell_seed;
    cell.final_error = opt.final_error();
    cell.converged = opt.converged;
    cell.iterations = opt.iterations_used;
    result.cells[static_cast<std::size_t>(flat)] = cell;
  };

  const int total = n_t * n_r;
  int n_workers = spec.threads > 0 ? spec.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, total);
  if (n_workers == 1) {
    for (int flat = 0; flat < total; ++flat) run_cell(flat);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        for (int flat = next.fetch_add(1); flat < total; flat = next.fetch_add(1)) run_cell(flat);
      });
    }
    for (auto& t : workers) t.join();
  }

  result.best_eps_per_t.resize(n_t);
  for (int ti = 0; ti < n_t; ++ti) {
    double best = 2.0;
    for (int ri = 0; ri < n_r; ++ri)
      best = std::min(best, result.cells[static_cast<std::size_t>(ti) * n_r + ri].final_error);
    result.best_eps_per_t[ti] = best;
  }

  // Walk the ladder downward: the verdict is the last success before the
  // first duration where every restart failed. A failed duration is never
  // followed by a smaller reported QSL.
  std::optional<double> qsl;
  for (int ti = 0; ti < n_t; ++ti) {
    if (result.best_eps_per_t[ti] <= spec.epsilon_max)
      qsl = spec.t_values_ns[ti];
    else
      break;
  }
  result.t_qsl_ns = qsl;
  return result;
}

std::vector<HistogramRow> density_histogram(const QslScanResult& result, int n_bins) {
  if (result.cells.empty()) throw ConfigError("density_histogram: empty scan result");
  if (n_bins < 1) throw ConfigError("density_histogram: need at least one bin");

  // Fixed log-spaced range covering everything a gate error can reach.
  const double lo = 1e-6, hi = 2.0;
  const double step = std::log(hi / lo) / n_bins;
  std::vector<HistogramRow> rows(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    rows[b].lo = lo * std::exp(b * step);
    rows[b].hi = lo * std::exp((b + 1) * step);
  }
  for (const auto& cell : result.cells) {
    int b = cell.final_error <= lo
                ? 0
                : static_cast<int>(std::floor(std::log(cell.final_error / lo) / step));
    b = std::clamp(b, 0, n_bins - 1);
    ++rows[static_cast<std::size_t>(b)].count;
  }
  return rows;
}

}  // namespace qsl
