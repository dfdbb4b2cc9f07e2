#include "asep/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace asep {

Config Config::parse(std::string_view bits) {
  Config c;
  for (char ch : bits) {
    if (ch == '0' || ch == '1') {
      c.sites.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else {
      throw std::invalid_argument("configuration must be a bit string, got '" + std::string(bits) + "'");
    }
  }
  if (c.sites.empty()) throw std::invalid_argument("empty configuration");
  return c;
}

Config Config::from_code(std::uint64_t code, int M) {
  Config c;
  c.sites.resize(static_cast<std::size_t>(M));
  for (int x = 0; x < M; ++x) c.sites[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>((code >> x) & 1u);
  return c;
}

std::uint64_t Config::code() const {
  if (sites.size() > 64) throw std::length_error("configuration too long for a 64-bit code");
  std::uint64_t code = 0;
  for (std::size_t x = 0; x < sites.size(); ++x) code |= static_cast<std::uint64_t>(sites[x] & 1u) << x;
  return code;
}

std::string Config::to_string() const {
  std::string s;
  s.reserve(sites.size());
  for (auto v : sites) s += static_cast<char>('0' + v);
  return s;
}

ColoredConfig ColoredConfig::parse(std::string_view text) {
  ColoredConfig c;
  std::string s(text);
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok == "1") c.sites.push_back(Species::first);
    else if (tok == "2") c.sites.push_back(Species::second);
    else if (tok == "3") c.sites.push_back(Species::third);
    else if (tok == "inf") c.sites.push_back(Species::hole);
    else throw std::invalid_argument("unknown species label '" + tok + "'");
  }
  return c;
}

ColoredConfig ColoredConfig::from_labels(const std::vector<int>& labels) {
  ColoredConfig c;
  for (int l : labels) {
    if (l < 1 || l > 4) throw std::invalid_argument("species label must be 1, 2, 3 or 4 (infinity)");
    c.sites.push_back(static_cast<Species>(l));
  }
  return c;
}

std::string ColoredConfig::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (i > 0) s += ',';
    s += sites[i] == Species::hole ? std::string("inf") : std::to_string(static_cast<int>(sites[i]));
  }
  return s;
}

int rightmost_empty(const Config& eta) {
  for (int x = eta.size(); x >= 1; --x) {
    if (eta(x) == 0) return x;
  }
  return 0;
}

bool in_A(const Config& eta, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("threshold m must be positive");
  return rightmost_empty(eta) >= m;
}

double default_threshold(int N) { return std::pow(std::log(static_cast<double>(N)), 1.0 / 16.0); }

int default_integer_threshold(int N) {
  if (N < 2) return 1;
  return std::max(1, static_cast<int>(std::ceil(default_threshold(N))));
}

bool partial_order_geq(const Config& zeta, const Config& eta) {
  const int top = std::max(zeta.size(), eta.size());
  int empties_zeta = 0;
  int empties_eta = 0;
  for (int x = top; x >= 1; --x) {
    if (x <= zeta.size() && zeta(x) == 0) ++empties_zeta;
    if (x <= eta.size() && eta(x) == 0) ++empties_eta;
    if (empties_zeta < empties_eta) return false;
  }
  return true;
}

int current_from_empty(const Config& eta) {
  int n = 0;
  for (auto v : eta.sites) n += v;
  return n;
}

Config project_multispecies(const ColoredConfig& zeta) {
  Config out;
  out.sites.reserve(zeta.sites.size());
  for (Species s : zeta.sites) {
    out.sites.push_back(s == Species::first || s == Species::second ? 1 : 0);
  }
  return out;
}

Distribution::Distribution(int M) : M_(M) {
  if (M < 1) throw std::invalid_argument("distribution needs M >= 1");
  if (dense()) dense_.assign(std::size_t{1} << M, 0.0);
}

Distribution Distribution::point_mass(const Config& eta) {
  Distribution d(eta.size());
  d.add(eta, 1.0);
  return d;
}

Distribution Distribution::from_dense(int M, std::vector<double> probabilities) {
  Distribution d(M);
  if (!d.dense() || probabilities.size() != d.dense_.size()) {
    throw std::invalid_argument("dense probability vector has the wrong length");
  }
  d.dense_ = std::move(probabilities);
  return d;
}

double Distribution::probability(const Config& eta) const {
  if (eta.size() != M_) throw std::invalid_argument("configuration length differs from distribution");
  if (dense()) return dense_[eta.code()];
  auto it = sparse_.find(eta);
  return it == sparse_.end() ? 0.0 : it->second;
}

void Distribution::add(const Config& eta, double p) {
  if (eta.size() != M_) throw std::invalid_argument("configuration length differs from distribution");
  if (dense()) {
    dense_[eta.code()] += p;
  } else {
    sparse_[eta] += p;
  }
}

double Distribution::total() const {
  double s = 0.0;
  for_each([&](const Config&, double p) { s += p; });
  return s;
}

const std::vector<double>& Distribution::values() const {
  if (!dense()) throw std::logic_error("distribution is stored sparsely");
  return dense_;
}

TvResult tv_distance(const Distribution& p, const Distribution& p_prime) {
  if (p.sites() != p_prime.sites()) throw std::invalid_argument("distributions live on different state spaces");
  TvResult result;
  double positive = 0.0;
  double negative = 0.0;
  auto visit = [&](const Config& eta, double a, double b) {
    const double diff = a - b;
    if (diff > 0.0) {
      positive += diff;
      result.maximizing_event.push_back(eta);
    } else {
      negative -= diff;
    }
  };
  if (p.dense()) {
    const auto& a = p.values();
    const auto& b = p_prime.values();
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (a[c] != 0.0 || b[c] != 0.0) visit(Config::from_code(c, p.sites()), a[c], b[c]);
    }
  } else {
    p.for_each([&](const Config& eta, double a) { visit(eta, a, p_prime.probability(eta)); });
    p_prime.for_each([&](const Config& eta, double b) {
      if (p.probability(eta) == 0.0) visit(eta, 0.0, b);
    });
    std::sort(result.maximizing_event.begin(), result.maximizing_event.end());
  }
  result.distance = 0.5 * (positive + negative);
  return result;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& p_prime) {
  if (p.size() != p_prime.size()) throw std::invalid_argument("probability vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - p_prime[i]);
  return 0.5 * s;
}

}  // namespace asep
