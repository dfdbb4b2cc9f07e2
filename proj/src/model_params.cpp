#include "asep/model_params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef ASEP_DEFAULT_DATA_DIR
#define ASEP_DEFAULT_DATA_DIR "data"
#endif

namespace asep {

void validate(const ModelParams& p) {
  if (!(p.q > 0.0 && p.q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
  if (!(p.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(p.alpha > p.gamma)) throw std::invalid_argument("alpha must exceed gamma");
  if (p.N < 1) throw std::invalid_argument("N must be at least 1");
}

ModelParams make_params(double q, double alpha, double gamma, int N) {
  ModelParams p{q, alpha, gamma, N, std::nullopt};
  validate(p);
  return p;
}

ModelParams make_exact_params(const Rational& q, const Rational& alpha,
                              const Rational& gamma, int N) {
  ModelParams p{to_double(q), to_double(alpha), to_double(gamma), N,
                ExactRates{q, alpha, gamma}};
  if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0,1)");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  if (!(alpha > gamma)) throw std::invalid_argument("alpha must exceed gamma");
  validate(p);
  return p;
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::gauss: return "gauss";
    case Phase::goe: return "goe";
    case Phase::gse: return "gse";
  }
  return "?";
}

PhaseInfo effective_density(const ModelParams& params) {
  validate(params);
  const double a = params.alpha;
  const double g = params.gamma;
  const double b = 1.0 - params.q + g - a;
  const double disc = std::sqrt(b * b + 4.0 * a * g);
  // avoid cancellation in b + disc when b < 0
  const double kappa = b >= 0.0 ? (b + disc) / (2.0 * a) : (2.0 * g) / (disc - b);

  PhaseInfo info;
  info.kappa_plus = kappa;
  info.rho = 1.0 / (1.0 + kappa);

  // rho vs 1/2 <=> f(1) = 2(alpha - gamma) - (1 - q) vs 0, f convex with f(0) < 0
  int sign = 0;
  if (params.exact) {
    const ExactRates& e = *params.exact;
    Rational f1 = 2 * (e.alpha - e.gamma) - (1 - e.q);
    sign = sgn(f1);
  } else {
    const double f1 = 2.0 * (a - g) - (1.0 - params.q);
    sign = (f1 > 0.0) - (f1 < 0.0);
  }
  info.phase = sign > 0 ? Phase::gse : (sign == 0 ? Phase::goe : Phase::gauss);
  if (sign == 0) info.rho = 0.5;
  return info;
}

DriftStats drift_stats(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
  return {rho * (1.0 - rho), rho * (1.0 - rho) * (1.0 - 2.0 * rho)};
}

double phase_time(const PhaseInfo& info, const ModelParams& params, double c,
                  const TimeFunctionConstants& k) {
  const double n = params.N;
  const double prefactor = 1.0 / (1.0 - params.q);
  switch (info.phase) {
    case Phase::gse:
      return prefactor * (k.gse_speed * n + c * k.gse_window * std::cbrt(n));
    case Phase::goe:
      return prefactor * (k.goe_speed * n + c * k.goe_window * std::cbrt(n));
    case Phase::gauss: {
      const DriftStats d = drift_stats(info.rho);
      if (!(d.sigma_sq > 0.0)) throw std::invalid_argument("sigma^2 must be positive below rho = 1/2");
      return prefactor * (n / d.mu + c / (std::sqrt(d.mu) * std::sqrt(d.sigma_sq)) * std::sqrt(n));
    }
  }
  return 0.0;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ReferenceCdf ReferenceCdf::gaussian() { return ReferenceCdf{}; }

ReferenceCdf ReferenceCdf::from_table(std::vector<std::pair<double, double>> table,
                                      std::string name) {
  if (table.size() < 2) throw std::invalid_argument("reference table needs at least two rows");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [s, f] = table[i];
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("reference CDF value outside [0,1]");
    if (i > 0) {
      if (!(s > table[i - 1].first)) throw std::invalid_argument("reference table s-values must increase strictly");
      if (f < table[i - 1].second) throw std::invalid_argument("reference CDF must be nondecreasing");
    }
  }
  ReferenceCdf out;
  out.kind_ = Kind::table;
  out.name_ = std::move(name);
  out.table_ = std::move(table);
  return out;
}

ReferenceCdf ReferenceCdf::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double s = 0.0;
    double f = 0.0;
    if (!(ss >> s)) continue;
    if (!(ss >> f)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected two columns");
    }
    rows.emplace_back(s, f);
  }
  return from_table(std::move(rows), path);
}

double ReferenceCdf::lower() const {
  return kind_ == Kind::table ? table_.front().first : -INFINITY;
}

double ReferenceCdf::upper() const {
  return kind_ == Kind::table ? table_.back().first : INFINITY;
}

double ReferenceCdf::operator()(double c) const {
  if (kind_ == Kind::gaussian) return standard_normal_cdf(c);
  if (!(c >= lower() && c <= upper())) {
    throw std::out_of_range("reference table '" + name_ + "' does not cover s = " + std::to_string(c));
  }
  auto it = std::lower_bound(table_.begin(), table_.end(), c,
                             [](const auto& row, double v) { return row.first < v; });
  if (it == table_.begin()) return it->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (c - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

double ReferenceCdf::clamped(double c) const {
  if (kind_ == Kind::table) {
    if (c < lower()) return 0.0;
    if (c > upper()) return 1.0;
  }
  return (*this)(c);
}

std::string reference_data_dir(const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("ASEP_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return ASEP_DEFAULT_DATA_DIR;
}

ReferenceCdf load_tracy_widom(Phase phase, const std::string& dir) {
  if (phase == Phase::gauss) return ReferenceCdf::gaussian();
  const std::string file = phase == Phase::gse ? "tw_gse.txt" : "tw_goe.txt";
  return ReferenceCdf::load(reference_data_dir(dir) + "/" + file);
}

}  // namespace asep
