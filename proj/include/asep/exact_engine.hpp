#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "asep/configurations.hpp"
#include "asep/hecke.hpp"
#include "asep/model_params.hpp"

namespace asep {

inline constexpr int kMaxGeneratorSites = 14;
inline constexpr int kMaxAllStartsSites = 10;
inline constexpr int kMaxMallowsSites = 6;
inline constexpr int kMaxHeckeModuleRank = 4;

/// CTMC generator on {0,1}^N, states indexed by Config::code() (bit x-1 is
/// site x). Q(x, y) is the jump rate x -> y, diagonal = minus the row sum.
struct GeneratorMatrix {
  int N = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> Q;
  double max_exit_rate = 0.0;

  std::size_t dimension() const { return static_cast<std::size_t>(Q.rows()); }
};

/// Throws std::length_error for N > kMaxGeneratorSites.
GeneratorMatrix build_generator(const ModelParams& params, int N);

struct TransientResult {
  std::vector<double> distribution;  // renormalised
  double error_bound = 0.0;          // certified L1 truncation bound
  double raw_mass = 0.0;             // mass before renormalisation
  std::size_t poisson_terms = 0;
};

/// Law at time t from `initial` by uniformization at rate max_exit_rate.
/// The Poisson series is truncated once the missing mass is <= tol.
TransientResult transient_distribution(const GeneratorMatrix& gen, const std::vector<double>& initial,
                                       double t, double tol = 1e-12);

/// Same, for a nondecreasing time grid, propagating incrementally. Error
/// bounds accumulate along the grid.
std::vector<TransientResult> transient_path(const GeneratorMatrix& gen, const std::vector<double>& initial,
                                            const std::vector<double>& times, double tol = 1e-12);

/// Stationary law from the null space of Q^T (sparse LU with iterative
/// refinement). Throws std::runtime_error if the residual stays above 1e-12.
Distribution stationary_nullspace(const GeneratorMatrix& gen);

/// Stationary law as the particle/hole image of the Mallows element
/// M_{[0,N]} (negative colors are particles). Enumerates B_N, so
/// N <= kMaxMallowsSites.
Distribution stationary_mallows(const ModelParams& params, int N);

/// Closed form of the same measure: independent sites with
/// P(site j occupied) = 1 / (1 + r q^{j-1}). Any N.
double stationary_site_density(const ModelParams& params, int j);
Distribution stationary_product(const ModelParams& params, int N);

/// mu(R >= m) under the stationary law, any N (product formula).
double stationary_mass_of_A(const ModelParams& params, int N, int m);

/// mu(x) Q(x,y) - mu(y) Q(y,x), maximised over transitions.
double reversibility_residual(const GeneratorMatrix& gen, const std::vector<double>& mu);

enum class StartSet { all, extremal };

struct TvProfile {
  std::vector<double> times;
  std::vector<double> distance;
  std::vector<std::uint64_t> argmax_start;  // code of the maximising start
  std::vector<double> error_bound;
};

/// d_N(t) = max over starts of TV(law at t, stationary). `all` covers every
/// start (N <= kMaxAllStartsSites), `extremal` the empty and full
/// configurations (N <= kMaxGeneratorSites). Times must be nondecreasing.
TvProfile exact_tv_profile(const ModelParams& params, int N, const std::vector<double>& times,
                           StartSet starts, double tol = 1e-12);

/// Dense matrix of the generator X -> alpha (T_0 X - X) + sum_k (T_k X - X)
/// acting on coefficient vectors indexed by all_signed_permutations(n).
struct HeckeModule {
  int n = 0;
  std::vector<SignedPermutation> basis;
  Eigen::SparseMatrix<double> L;  // column-oriented: coefficients are column vectors
  double max_exit_rate = 0.0;
};

HeckeModule build_hecke_module(const ModelParams& params, int n);

struct HeckeExpectation {
  FloatHecke value;
  double error_bound = 0.0;
};

/// E[W_t] for W_0 = T_id, n <= kMaxHeckeModuleRank.
HeckeExpectation hecke_expectation(const ModelParams& params, int n, double t, double tol = 1e-12);

/// Particle/hole image of a distribution in the Hecke algebra.
Distribution project_particle_hole(const FloatHecke& x);

struct DualityResult {
  double p_left = 0.0;   // C-side: pi(x) < 0 for all x in [m, S+N]
  double p_right = 0.0;  // D-side: no label-4 site in the four-species image with K = m
  double error_bound = 0.0;
};

/// Both sides of the duality at time t with n = S + N <= kMaxHeckeModuleRank.
DualityResult duality_check(const ModelParams& params, int N, int S, int m, double t, double tol = 1e-12);

/// Event values used by duality_check, exposed for the sampling pipelines.
bool c_side_event(const SignedPermutation& pi, int m);
bool d_side_event(const SignedPermutation& pi, int m);

/// "bits,probability" lines with a header, bit string written site 1 first.
std::string distribution_csv(const Distribution& dist);
std::string profile_csv(const TvProfile& profile);

}  // namespace asep
