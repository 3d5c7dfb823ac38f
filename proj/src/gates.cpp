#include "qsl/gates.hpp"

#include <cmath>

#include "qsl/rng.hpp"

namespace qsl {

const char* to_string(GateName name) {
  switch (name) {
    case GateName::CZ: return "CZ";
    case GateName::CNOT: return "CNOT";
    case GateName::SWAP: return "SWAP";
    case GateName::ZZZ: return "ZZZ";
    case GateName::ZZZZ: return "ZZZZ";
  }
  return "?";
}

GateName gate_name_from_string(const std::string& s) {
  for (auto g : {GateName::CZ, GateName::CNOT, GateName::SWAP, GateName::ZZZ, GateName::ZZZZ})
    if (s == to_string(g)) return g;
  throw ConfigError("unknown gate '" + s + "'");
}

GateTarget make_gate(GateName name, std::optional<double> gamma, bool phase_shifted) {
  const bool constraint = name == GateName::ZZZ || name == GateName::ZZZZ;
  if (constraint && !gamma) throw ConfigError("make_gate: ZZZ/ZZZZ require gamma");

  GateTarget gate;
  gate.name = to_string(name);
  gate.gamma = constraint ? gamma : std::nullopt;
  gate.phase_shifted = constraint && phase_shifted;

  switch (name) {
    case GateName::CZ:
      gate.n_qubits = 2;
      gate.matrix = MatXc::Identity(4, 4);
      gate.matrix(3, 3) = -1.0;
      break;
    case GateName::CNOT:
      gate.n_qubits = 2;
      gate.matrix = MatXc::Zero(4, 4);
      gate.matrix(0, 0) = gate.matrix(1, 1) = 1.0;
      gate.matrix(2, 3) = gate.matrix(3, 2) = 1.0;
      break;
    case GateName::SWAP:
      gate.n_qubits = 2;
      gate.matrix = MatXc::Zero(4, 4);
      gate.matrix(0, 0) = gate.matrix(3, 3) = 1.0;
      gate.matrix(1, 2) = gate.matrix(2, 1) = 1.0;
      break;
    case GateName::ZZZ:
    case GateName::ZZZZ: {
      const int q = name == GateName::ZZZ ? 3 : 4;
      const int dim = 1 << q;
      gate.n_qubits = q;
      gate.matrix = MatXc::Zero(dim, dim);
      for (int b = 0; b < dim; ++b) {
        // Z eigenvalue product: +1 for |0>, -1 for |1> on each qubit.
        const int ones = __builtin_popcount(static_cast<unsigned>(b));
        const double parity = (ones % 2 == 0) ? 1.0 : -1.0;
        // exp(-i gamma parity), shifted by exp(+i gamma) when requested so the
        // all-|0> entry is exactly one.
        const double arg = phase_shifted ? (1.0 - parity) * *gamma : -parity * *gamma;
        gate.matrix(b, b) = Complex(std::cos(arg), std::sin(arg));
      }
      break;
    }
  }
  return gate;
}

TargetStateSet embed_targets(const GateTarget& gate, const HamiltonianModel& model) {
  if (gate.n_qubits != model.n_qubits)
    throw ConfigError("embed_targets: gate acts on " + std::to_string(gate.n_qubits) +
                      " qubits but the model has " + std::to_string(model.n_qubits));
  const int n_trgt = 1 << gate.n_qubits;
  if (static_cast<int>(model.logical_states.size()) != n_trgt)
    throw ConfigError("embed_targets: model logical subspace map is incomplete");

  TargetStateSet set;
  set.initial.reserve(n_trgt);
  set.target.reserve(n_trgt);
  for (int b = 0; b < n_trgt; ++b) {
    VecXc init = VecXc::Zero(model.dim);
    init[model.logical_states[b]] = 1.0;
    VecXc trgt = VecXc::Zero(model.dim);
    for (int a = 0; a < n_trgt; ++a) {
      const Complex amp = gate.matrix(a, b);
      if (amp != Complex(0.0, 0.0)) trgt[model.logical_states[a]] += amp;
    }
    set.initial.push_back(std::move(init));
    set.target.push_back(std::move(trgt));
  }
  return set;
}

EntanglingPowerEstimate entangling_power_stats(const GateTarget& gate, int n_samples,
                                               std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("entangling_power: need at least one sample");
  const int q = gate.n_qubits;
  const int dim = 1 << q;

  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  VecXc product(dim), out(dim);
  std::vector<Eigen::Vector2cd> locals(q);

  for (int s = 0; s < n_samples; ++s) {
    for (int i = 0; i < q; ++i) {
      Eigen::Vector2cd v(Complex(rng.normal(), rng.normal()),
                         Complex(rng.normal(), rng.normal()));
      locals[i] = v / v.norm();
    }
    for (int b = 0; b < dim; ++b) {
      Complex amp = 1.0;
      for (int i = 0; i < q; ++i) amp *= locals[i][(b >> (q - 1 - i)) & 1];
      product[b] = amp;
    }
    out.noalias() = gate.matrix * product;

    // Mean linear entropy of the single-qubit marginals. For qubit i the
    // reduced density matrix is A A^+ with A the 2 x (dim/2) reshaping of the
    // state that isolates qubit i.
    double entropy = 0.0;
    for (int i = 0; i < q; ++i) {
      const int shift = q - 1 - i;
      Complex r00 = 0.0, r01 = 0.0, r11 = 0.0;
      for (int b = 0; b < dim; ++b) {
        if ((b >> shift) & 1) continue;
        const Complex a0 = out[b];
        const Complex a1 = out[b | (1 << shift)];
        r00 += a0 * std::conj(a0);
        r01 += a0 * std::conj(a1);
        r11 += a1 * std::conj(a1);
      }
      const double purity = std::norm(r00) + 2.0 * std::norm(r01) + std::norm(r11);
      entropy += 1.0 - purity;
    }
    entropy /= q;
    sum += entropy;
    sum_sq += entropy * entropy;
  }

  EntanglingPowerEstimate est;
  est.mean = sum / n_samples;
  if (n_samples > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n_samples) / (n_samples - 1));
    est.std_error = std::sqrt(var / n_samples);
  }
  return est;
}

double entangling_power(const GateTarget& gate, int n_samples, std::uint64_t seed) {
  return entangling_power_stats(gate, n_samples, seed).mean;
}

}  // namespace qsl
