#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace asep {

/// Occupation vector on [1, M]; sites[x-1] is 1 for a particle, 0 if vacant.
struct Config {
  std::vector<std::uint8_t> sites;

  static Config empty(int M) { return {std::vector<std::uint8_t>(static_cast<std::size_t>(M), 0)}; }
  static Config full(int M) { return {std::vector<std::uint8_t>(static_cast<std::size_t>(M), 1)}; }
  /// Bit string "101...", site 1 first.
  static Config parse(std::string_view bits);
  /// Bit x-1 of `code` is site x.
  static Config from_code(std::uint64_t code, int M);

  int size() const { return static_cast<int>(sites.size()); }
  int operator()(int x) const { return sites[static_cast<std::size_t>(x - 1)]; }
  std::uint64_t code() const;
  std::string to_string() const;

  friend auto operator<=>(const Config&, const Config&) = default;
};

/// Species ordered by priority 1 >_p 2 >_p 3 >_p infinity.
enum class Species : std::uint8_t { first = 1, second = 2, third = 3, hole = 4 };

struct ColoredConfig {
  std::vector<Species> sites;

  /// Comma-separated labels, "inf" for a hole: "1,2,3,inf".
  static ColoredConfig parse(std::string_view text);
  static ColoredConfig from_labels(const std::vector<int>& labels);

  int size() const { return static_cast<int>(sites.size()); }
  std::string to_string() const;
  friend bool operator==(const ColoredConfig&, const ColoredConfig&) = default;
};

/// Rightmost vacant site, 0 when there is none.
int rightmost_empty(const Config& eta);

/// R(eta) >= m.
bool in_A(const Config& eta, double m);

/// (ln N)^{1/16}.
double default_threshold(int N);

/// max(1, ceil((ln N)^{1/16})), the integer threshold used by experiments.
int default_integer_threshold(int N);

/// zeta >= eta: for every x, the number of vacant sites of zeta in [x, M] is
/// at least that of eta in [x, N]. Lengths may differ.
bool partial_order_geq(const Config& zeta, const Config& eta);

/// Number of particles; equals entries minus exits for a run started empty.
int current_from_empty(const Config& eta);

/// Species 1, 2 -> particle; 3, hole -> vacant.
Config project_multispecies(const ColoredConfig& zeta);

/// Finite distribution on {0,1}^M. Dense storage indexed by Config::code()
/// for M <= 20, an ordered sparse map above that.
class Distribution {
 public:
  explicit Distribution(int M);
  static Distribution point_mass(const Config& eta);
  static Distribution from_dense(int M, std::vector<double> probabilities);

  int sites() const { return M_; }
  bool dense() const { return M_ <= kDenseLimit; }
  double probability(const Config& eta) const;
  void add(const Config& eta, double p);
  double total() const;
  /// Visits (config, probability) for every stored nonzero entry in
  /// increasing code order.
  template <class F>
  void for_each(F&& fn) const {
    if (dense()) {
      for (std::size_t c = 0; c < dense_.size(); ++c) {
        if (dense_[c] != 0.0) fn(Config::from_code(c, M_), dense_[c]);
      }
    } else {
      for (const auto& [eta, p] : sparse_) fn(eta, p);
    }
  }
  /// Dense vector (requires dense()).
  const std::vector<double>& values() const;

  static constexpr int kDenseLimit = 20;

 private:
  int M_;
  std::vector<double> dense_;
  std::map<Config, double> sparse_;
};

struct TvResult {
  double distance = 0.0;
  /// Event A* = {p > p'} attaining max_A p(A) - p'(A).
  std::vector<Config> maximizing_event;
};

/// Half the L1 distance; throws std::invalid_argument for different M.
TvResult tv_distance(const Distribution& p, const Distribution& p_prime);

/// Half-L1 distance of two dense probability vectors of equal length.
double tv_distance(const std::vector<double>& p, const std::vector<double>& p_prime);

}  // namespace asep
