#include "asep/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

namespace asep {

namespace {

// Poissonised power series sum_k Pois(k; lt) x_k with x_{k+1} = step(x_k).
// Returns the mass of the truncated tail.
template <class Mat, class Step>
double uniformize(Mat& x, double lt, double tol, Step step, std::size_t* terms) {
  if (lt <= 0.0) {
    if (terms != nullptr) *terms = 1;
    return 0.0;
  }
  Mat acc = Mat::Zero(x.rows(), x.cols());
  const double log_lt = std::log(lt);
  const double far = lt + 12.0 * std::sqrt(lt) + 60.0;
  double cum = 0.0;
  std::size_t k = 0;
  while (true) {
    const double w = std::exp(-lt + static_cast<double>(k) * log_lt - std::lgamma(static_cast<double>(k) + 1.0));
    if (w > 0.0) acc += w * x;
    cum += w;
    ++k;
    if (cum >= 1.0 - tol && static_cast<double>(k) > lt) break;
    if (static_cast<double>(k) > far && w < 1e-3 * tol) break;
    x = step(x);
  }
  x = std::move(acc);
  if (terms != nullptr) *terms = k;
  // rounding of the running sum is bounded by k ulps
  return std::max(0.0, 1.0 - cum) + static_cast<double>(k) * 1e-16;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

HeckeParams<double> float_params(const ModelParams& params, int n) { return {n, params.q, params.r()}; }

Config config_of(const std::vector<int>& labels) {
  Config c;
  c.sites.reserve(labels.size());
  for (int v : labels) c.sites.push_back(static_cast<std::uint8_t>(v));
  return c;
}

}  // namespace

GeneratorMatrix build_generator(const ModelParams& params, int N) {
  validate(params);
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (N > kMaxGeneratorSites) throw std::length_error("generator size above 2^14 states");
  const std::uint64_t dim = std::uint64_t{1} << N;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(dim * static_cast<std::uint64_t>(N + 1));
  double max_exit = 0.0;
  for (std::uint64_t s = 0; s < dim; ++s) {
    double out = 0.0;
    auto add = [&](std::uint64_t target, double rate) {
      trips.emplace_back(static_cast<int>(s), static_cast<int>(target), rate);
      out += rate;
    };
    if (s & 1U) add(s ^ 1U, params.gamma);
    else add(s | 1U, params.alpha);
    for (int x = 1; x < N; ++x) {
      const bool a = (s >> (x - 1)) & 1U;
      const bool b = (s >> x) & 1U;
      const std::uint64_t flip = (std::uint64_t{1} << (x - 1)) | (std::uint64_t{1} << x);
      if (a && !b) add(s ^ flip, 1.0);
      else if (!a && b) add(s ^ flip, params.q);
    }
    trips.emplace_back(static_cast<int>(s), static_cast<int>(s), -out);
    max_exit = std::max(max_exit, out);
  }
  GeneratorMatrix gen;
  gen.N = N;
  gen.Q.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  gen.Q.setFromTriplets(trips.begin(), trips.end());
  gen.Q.makeCompressed();
  gen.max_exit_rate = max_exit;
  return gen;
}

TransientResult transient_distribution(const GeneratorMatrix& gen, const std::vector<double>& initial, double t,
                                       double tol) {
  return transient_path(gen, initial, {t}, tol).front();
}

std::vector<TransientResult> transient_path(const GeneratorMatrix& gen, const std::vector<double>& initial,
                                            const std::vector<double>& times, double tol) {
  if (initial.size() != gen.dimension()) throw std::invalid_argument("initial law has the wrong dimension");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const double lambda = gen.max_exit_rate;
  const Eigen::SparseMatrix<double> Qt = gen.Q.transpose();
  auto step = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x + (Qt * x) / lambda; };

  std::vector<TransientResult> out;
  Eigen::VectorXd x = to_vector(initial);
  double prev = 0.0;
  double bound = 0.0;
  for (double t : times) {
    if (!(t >= prev)) throw std::invalid_argument("times must be nonnegative and nondecreasing");
    std::size_t terms = 0;
    bound += uniformize(x, lambda * (t - prev), tol, step, &terms);
    prev = t;
    TransientResult r;
    r.raw_mass = x.sum();
    r.error_bound = bound;
    r.poisson_terms = terms;
    x /= r.raw_mass;
    r.distribution = to_std(x);
    out.push_back(std::move(r));
  }
  return out;
}

Distribution stationary_nullspace(const GeneratorMatrix& gen) {
  const auto dim = static_cast<Eigen::Index>(gen.dimension());
  const Eigen::Index last = dim - 1;
  // Q^T with the last equation replaced by sum(pi) = 1
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index row = 0; row < gen.Q.outerSize(); ++row) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(gen.Q, row); it; ++it) {
      if (it.col() != last) trips.emplace_back(static_cast<int>(it.col()), static_cast<int>(row), it.value());
    }
  }
  for (Eigen::Index j = 0; j < dim; ++j) trips.emplace_back(static_cast<int>(last), static_cast<int>(j), 1.0);
  Eigen::SparseMatrix<double> A(dim, dim);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("stationary solve: factorisation failed");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  b[last] = 1.0;
  Eigen::VectorXd pi = lu.solve(b);
  const Eigen::SparseMatrix<double> Qt = gen.Q.transpose();
  double residual = 0.0;
  for (int it = 0; it < 8; ++it) {
    const Eigen::VectorXd r = b - A * pi;
    residual = std::max((Qt * pi).cwiseAbs().maxCoeff(), std::abs(pi.sum() - 1.0));
    if (residual <= 1e-14) break;
    pi += lu.solve(r);
  }
  residual = std::max((Qt * pi).cwiseAbs().maxCoeff(), std::abs(pi.sum() - 1.0));
  if (!(residual <= 1e-12)) throw std::runtime_error("stationary solve did not converge");
  return Distribution::from_dense(gen.N, to_std(pi));
}

Distribution stationary_mallows(const ModelParams& params, int N) {
  validate(params);
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (N > kMaxMallowsSites) throw std::length_error("Mallows enumeration limited to N <= 6");
  const FloatHecke M = mallows_element(Interval{0, N}, float_params(params, N));
  return project_particle_hole(M);
}

double stationary_site_density(const ModelParams& params, int j) {
  return 1.0 / (1.0 + params.r() * std::pow(params.q, j - 1));
}

Distribution stationary_product(const ModelParams& params, int N) {
  validate(params);
  if (N > Distribution::kDenseLimit) throw std::length_error("dense product law limited to 20 sites");
  const std::size_t dim = std::size_t{1} << N;
  std::vector<double> p(dim, 1.0);
  for (int j = 1; j <= N; ++j) {
    const double d = stationary_site_density(params, j);
    for (std::size_t s = 0; s < dim; ++s) p[s] *= ((s >> (j - 1)) & 1U) ? d : 1.0 - d;
  }
  return Distribution::from_dense(N, std::move(p));
}

double stationary_mass_of_A(const ModelParams& params, int N, int m) {
  validate(params);
  if (m <= 0) throw std::invalid_argument("threshold m must be positive");
  // R < m iff sites m..N are all occupied
  double full = 1.0;
  for (int j = std::max(m, 1); j <= N; ++j) full *= stationary_site_density(params, j);
  return 1.0 - full;
}

double reversibility_residual(const GeneratorMatrix& gen, const std::vector<double>& mu) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < gen.Q.outerSize(); ++x) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(gen.Q, x); it; ++it) {
      const Eigen::Index y = it.col();
      if (y == x) continue;
      const double back = gen.Q.coeff(y, x);
      worst = std::max(worst, std::abs(mu[static_cast<std::size_t>(x)] * it.value() -
                                       mu[static_cast<std::size_t>(y)] * back));
    }
  }
  return worst;
}

TvProfile exact_tv_profile(const ModelParams& params, int N, const std::vector<double>& times, StartSet starts,
                           double tol) {
  if (starts == StartSet::all && N > kMaxAllStartsSites) throw std::length_error("all-starts profile limited to N <= 10");
  const GeneratorMatrix gen = build_generator(params, N);
  const std::vector<double> mu = stationary_nullspace(gen).values();
  const auto dim = static_cast<Eigen::Index>(gen.dimension());

  std::vector<std::uint64_t> codes;
  if (starts == StartSet::all) {
    for (Eigen::Index s = 0; s < dim; ++s) codes.push_back(static_cast<std::uint64_t>(s));
  } else {
    codes = {0, static_cast<std::uint64_t>(dim - 1)};
  }
  // rows are starting states
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(codes.size()), dim);
  for (std::size_t i = 0; i < codes.size(); ++i) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(codes[i])) = 1.0;
  const double lambda = gen.max_exit_rate;
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& Q = gen.Q;
  auto step = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd { return x + (x * Q) / lambda; };
  const Eigen::Map<const Eigen::RowVectorXd> mu_row(mu.data(), dim);

  TvProfile out;
  double prev = 0.0;
  double bound = 0.0;
  for (double t : times) {
    if (!(t >= prev)) throw std::invalid_argument("times must be nonnegative and nondecreasing");
    bound += uniformize(X, lambda * (t - prev), tol, step, nullptr);
    prev = t;
    double best = -1.0;
    std::uint64_t arg = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double mass = X.row(i).sum();
      const double d = 0.5 * (X.row(i) / mass - mu_row).cwiseAbs().sum();
      if (d > best) {
        best = d;
        arg = codes[static_cast<std::size_t>(i)];
      }
    }
    out.times.push_back(t);
    out.distance.push_back(best);
    out.argmax_start.push_back(arg);
    out.error_bound.push_back(bound);
  }
  return out;
}

HeckeModule build_hecke_module(const ModelParams& params, int n) {
  validate(params);
  if (n < 1 || n > kMaxHeckeModuleRank) throw std::length_error("Hecke module limited to n <= 4");
  HeckeModule mod;
  mod.n = n;
  mod.basis = all_signed_permutations(n);
  std::map<SignedPermutation, int> index;
  for (std::size_t i = 0; i < mod.basis.size(); ++i) index.emplace(mod.basis[i], static_cast<int>(i));
  const double r = params.r();
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t j = 0; j < mod.basis.size(); ++j) {
    const SignedPermutation& w = mod.basis[j];
    const int col = static_cast<int>(j);
    for (int k = 0; k < n; ++k) {
      const double rate = k == 0 ? params.alpha : 1.0;
      const double qk = k == 0 ? r : params.q;
      // T_k T_w - T_w: the (1 - q_k) T_w part of a descent cancels
      const double move = w.has_left_descent(k) ? rate * qk : rate;
      trips.emplace_back(index.at(w.left_generator(k)), col, move);
      trips.emplace_back(col, col, -move);
    }
  }
  const auto dim = static_cast<Eigen::Index>(mod.basis.size());
  mod.L.resize(dim, dim);
  mod.L.setFromTriplets(trips.begin(), trips.end());
  mod.L.makeCompressed();
  mod.max_exit_rate = params.alpha + (n - 1);
  return mod;
}

HeckeExpectation hecke_expectation(const ModelParams& params, int n, double t, double tol) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be nonnegative");
  const HeckeModule mod = build_hecke_module(params, n);
  const double lambda = mod.max_exit_rate;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mod.basis.size()));
  const auto id = std::lower_bound(mod.basis.begin(), mod.basis.end(), SignedPermutation::identity(n));
  x[id - mod.basis.begin()] = 1.0;
  auto step = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v + (mod.L * v) / lambda; };
  HeckeExpectation out{FloatHecke(float_params(params, n)), 0.0};
  out.error_bound = uniformize(x, lambda * t, tol, step, nullptr);
  x /= x.sum();
  for (std::size_t i = 0; i < mod.basis.size(); ++i) out.value.add_term(mod.basis[i], x[static_cast<Eigen::Index>(i)]);
  return out;
}

Distribution project_particle_hole(const FloatHecke& x) {
  const ColorMap cmap = ColorMap::particle_hole(x.n());
  Distribution out(x.n());
  for (const auto& [w, c] : x.terms()) out.add(config_of(project(w, cmap)), c);
  return out;
}

bool c_side_event(const SignedPermutation& pi, int m) {
  for (int x = std::max(m, 1); x <= pi.size(); ++x) {
    if (pi(x) > 0) return false;
  }
  return true;
}

bool d_side_event(const SignedPermutation& pi, int m) {
  const std::vector<int> labels = project(pi, ColorMap::four_species(pi.size(), m));
  return std::find(labels.begin(), labels.end(), 4) == labels.end();
}

DualityResult duality_check(const ModelParams& params, int N, int S, int m, double t, double tol) {
  const int n = S + N;
  if (N < 1 || S < 1) throw std::invalid_argument("duality needs N >= 1 and S >= 1");
  if (n > kMaxHeckeModuleRank) throw std::length_error("exact duality limited to S + N <= 4");
  if (m < 1 || m > n + 1) throw std::invalid_argument("threshold m must lie in [1, S+N+1]");
  const HeckeExpectation W = hecke_expectation(params, n, t, tol);
  const HeckeParams<double> hp = float_params(params, n);
  const FloatHecke M1 = mallows_element(Interval{1, n}, hp);
  const FloatHecke M0 = mallows_element(Interval{0, S}, hp);
  const FloatHecke C = W.value * M1 * M0;
  const FloatHecke D = M0 * M1 * W.value;
  DualityResult out;
  for (const auto& [w, c] : C.terms()) out.p_left += c_side_event(w, m) ? c : 0.0;
  for (const auto& [w, c] : D.terms()) out.p_right += d_side_event(w, m) ? c : 0.0;
  out.error_bound = W.error_bound;
  return out;
}

std::string distribution_csv(const Distribution& dist) {
  std::string out = "config,probability\n";
  char buf[64];
  dist.for_each([&](const Config& eta, double p) {
    std::snprintf(buf, sizeof buf, ",%.17g\n", p);
    out += eta.to_string();
    out += buf;
  });
  return out;
}

std::string profile_csv(const TvProfile& profile) {
  std::string out = "t,d,argmax_start,error_bound\n";
  char buf[160];
  for (std::size_t i = 0; i < profile.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%llu,%.3g\n", profile.times[i], profile.distance[i],
                  static_cast<unsigned long long>(profile.argmax_start[i]), profile.error_bound[i]);
    out += buf;
  }
  return out;
}

}  // namespace asep
