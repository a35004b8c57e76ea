#include "qbc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbc/error.hpp"
#include "qbc/quasidef.hpp"

namespace qbc {
namespace {

void check_real_gamma(double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0) throw ArgumentError("gamma must lie in (0, 1]");
}

void check_edges(std::int64_t m) {
  if (m < 0) throw ArgumentError("edge count must be nonnegative");
}

std::int64_t degree_floor(const BipartiteGraph& g, Side side, std::int64_t take, const Rational& gamma) {
  std::vector<std::int64_t> deg;
  for (std::size_t x = 0; x < g.side_count(side); ++x) deg.push_back(static_cast<std::int64_t>(degree(g, side, x)));
  std::sort(deg.begin(), deg.end());
  std::int64_t sum = 0;
  for (std::int64_t k = 0; k < take && k < static_cast<std::int64_t>(deg.size()); ++k) sum += deg[k];
  return ceil_product(gamma, sum);
}

}  // namespace

SizeBounds SizeBounds::unconstrained(const BipartiteGraph& g) {
  return {1, static_cast<std::int64_t>(g.u_count()), 1, static_cast<std::int64_t>(g.v_count())};
}

SizeBounds SizeBounds::parse(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<std::int64_t> vals;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stoll(item, &used));
      if (used != item.size()) throw ArgumentError("");
    } catch (const std::exception&) {
      throw ArgumentError("size bounds must be 'min_u,max_u,min_v,max_v', got '" + text + "'");
    }
  }
  if (vals.size() != 4) throw ArgumentError("size bounds must be 'min_u,max_u,min_v,max_v', got '" + text + "'");
  return {vals[0], vals[1], vals[2], vals[3]};
}

void SizeBounds::validate(const BipartiteGraph& g) const {
  auto nu = static_cast<std::int64_t>(g.u_count());
  auto nv = static_cast<std::int64_t>(g.v_count());
  if (min_u < 1 || min_u > max_u || max_u > nu || min_v < 1 || min_v > max_v || max_v > nv) {
    throw ArgumentError("inconsistent size bounds " + to_string() + " for a " + std::to_string(nu) + "x" +
                        std::to_string(nv) + " graph");
  }
}

std::string SizeBounds::to_string() const {
  return "[" + std::to_string(min_u) + "," + std::to_string(max_u) + "]x[" + std::to_string(min_v) + "," +
         std::to_string(max_v) + "]";
}

double quasi_clique_upper_bound(std::int64_t m, double gamma) {
  check_edges(m);
  check_real_gamma(gamma);
  return (gamma + std::sqrt(gamma + 8.0 * gamma * static_cast<double>(m))) / (2.0 * gamma);
}

double balanced_biclique_upper_bound(std::int64_t m, double gamma) {
  check_edges(m);
  check_real_gamma(gamma);
  return std::sqrt(4.0 * static_cast<double>(m) / gamma);
}

double near_balanced_upper_bound(std::int64_t m, double gamma, double theta) {
  check_edges(m);
  check_real_gamma(gamma);
  if (!(theta >= 0.0) || theta >= 1.0) throw ArgumentError("theta must lie in [0, 1)");
  const double md = static_cast<double>(m);
  double first = (2.0 + theta) * std::sqrt(md / (gamma * (1.0 - theta)));
  double second = (1.0 + 1.0 / (1.0 - theta)) * std::sqrt(md * (1.0 + theta) / gamma);
  return std::min(first, second);
}

std::int64_t floor_bound(double value) { return static_cast<std::int64_t>(std::floor(value + 1e-9)); }

EdgeRange edge_count_bounds(const BipartiteGraph& g, const Rational& gamma, const SizeBounds& bounds,
                            bool use_degree_bounds) {
  check_gamma(gamma);
  bounds.validate(g);
  EdgeRange r;
  r.k_max = std::min(g.edge_count(), bounds.max_u * bounds.max_v);
  std::int64_t density_floor = ceil_product(gamma, bounds.min_u, bounds.min_v);
  r.k_min = std::max<std::int64_t>(1, density_floor <= g.edge_count() ? density_floor : 0);
  if (use_degree_bounds) {
    r.k_min = std::max(r.k_min, degree_floor(g, Side::U, bounds.min_u, gamma));
    r.k_min = std::max(r.k_min, degree_floor(g, Side::V, bounds.min_v, gamma));
  }
  return r;
}

}  // namespace qbc
