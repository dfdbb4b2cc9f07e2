#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asep/rational.hpp"

namespace asep {

/// Exact copies of the rates, used when the caller supplied rationals.
struct ExactRates {
  Rational q;
  Rational alpha;
  Rational gamma;
};

/// Bulk drift ratio q, boundary entry rate alpha, exit rate gamma, segment
/// length N. Right jumps happen at rate 1, left jumps at rate q.
struct ModelParams {
  double q = 0.5;
  double alpha = 1.0;
  double gamma = 0.25;
  int N = 1;
  std::optional<ExactRates> exact;

  /// Boundary ratio gamma / alpha used as the s0 Hecke parameter.
  double r() const { return gamma / alpha; }
};

/// Validates 0 < q < 1, alpha > gamma > 0 and N >= 1; throws
/// std::invalid_argument otherwise.
void validate(const ModelParams& params);

ModelParams make_params(double q, double alpha, double gamma, int N);
ModelParams make_exact_params(const Rational& q, const Rational& alpha,
                              const Rational& gamma, int N);

enum class Phase { gauss, goe, gse };

std::string to_string(Phase phase);

struct PhaseInfo {
  double kappa_plus = 0.0;
  double rho = 0.0;
  Phase phase = Phase::gauss;
};

struct DriftStats {
  double mu = 0.0;        // rho (1 - rho)
  double sigma_sq = 0.0;  // rho (1 - rho) (1 - 2 rho)
};

/// Effective boundary density. kappa_plus is the positive root of
/// alpha k^2 - (1 - q + gamma - alpha) k - gamma = 0 and rho = 1/(1+kappa_plus).
/// The phase is decided from the sign of 2(alpha - gamma) - (1 - q), exactly
/// when `params.exact` is set.
PhaseInfo effective_density(const ModelParams& params);

DriftStats drift_stats(double rho);

/// Constants of the KPZ branch g(c) = (4N + c * 2^{-2/3} N^{1/3}) / (1-q).
/// Separate values for rho > 1/2 and rho = 1/2 so the two branches can be
/// varied independently.
struct TimeFunctionConstants {
  double gse_speed = 4.0;
  double gse_window = 0.6299605249474366;  // 2^{-2/3}
  double goe_speed = 4.0;
  double goe_window = 0.6299605249474366;
};

/// Cutoff-window time g_rho^N(c).
double phase_time(const PhaseInfo& info, const ModelParams& params, double c,
                  const TimeFunctionConstants& constants = {});

/// Limit CDF: either the closed-form standard normal or a tabulated CDF with
/// linear interpolation.
class ReferenceCdf {
 public:
  enum class Kind { gaussian, table };

  static ReferenceCdf gaussian();
  /// Throws std::invalid_argument unless s is strictly increasing and F is a
  /// nondecreasing sequence inside [0, 1].
  static ReferenceCdf from_table(std::vector<std::pair<double, double>> table,
                                 std::string name = "table");
  /// Reads "s F" lines, '#' starts a comment.
  static ReferenceCdf load(const std::string& path);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double lower() const;
  double upper() const;

  /// Throws std::out_of_range for a table lookup outside [lower, upper].
  double operator()(double c) const;

  /// Like operator() but clamps to 0 / 1 outside the table range.
  double clamped(double c) const;

 private:
  Kind kind_ = Kind::gaussian;
  std::string name_ = "gaussian";
  std::vector<std::pair<double, double>> table_;
};

double standard_normal_cdf(double x);

/// Directory holding tw_goe.txt / tw_gse.txt: `override_dir` if non-empty,
/// else $ASEP_DATA_DIR, else the compiled-in default.
std::string reference_data_dir(const std::string& override_dir = {});

/// Loads the Tracy-Widom table for a KPZ phase (GOE or GSE).
ReferenceCdf load_tracy_widom(Phase phase, const std::string& dir = {});

}  // namespace asep
