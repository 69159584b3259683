#include "dpaudit/patterns.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace dpaudit {

namespace {

AdjacentPair query_pair(std::string id, std::vector<std::int64_t> q,
                        std::vector<std::int64_t> qp) {
  AdjacentPair p;
  p.id = std::move(id);
  p.x.query = std::move(q);
  p.x_prime.query = std::move(qp);
  p.kind = AdjacencyKind::QueryVector;
  return p;
}

AdjacentPair stat_pair(std::string id, std::vector<double> s, std::vector<double> sp) {
  AdjacentPair p;
  p.id = std::move(id);
  p.x.stat = std::move(s);
  p.x_prime.stat = std::move(sp);
  p.kind = AdjacencyKind::StatisticPair;
  return p;
}

}  // namespace

bool is_query_adjacent(std::span<const std::int64_t> q, std::span<const std::int64_t> qp) {
  if (q.size() != qp.size())
    throw std::invalid_argument("is_query_adjacent: length mismatch");
  for (std::size_t i = 0; i < q.size(); ++i)
    if (std::llabs(q[i] - qp[i]) > 1) return false;
  return true;
}

PatternSet table1_pairs(int d) {
  if (d < 2) throw std::invalid_argument("table1_pairs: d must be at least 2");
  PatternSet set;
  set.d = d;
  const auto n = static_cast<std::size_t>(d);
  const std::vector<std::int64_t> ones(n, 1);

  auto vec = [&](std::int64_t head, std::int64_t tail, std::size_t split) {
    std::vector<std::int64_t> v(n, tail);
    for (std::size_t i = 0; i < split; ++i) v[i] = head;
    return v;
  };

  set.pairs.push_back(query_pair("one-above", ones, vec(2, 1, 1)));
  set.pairs.push_back(query_pair("one-below", ones, vec(0, 1, 1)));
  set.pairs.push_back(query_pair("one-above-rest-below", ones, vec(2, 0, 1)));
  set.pairs.push_back(query_pair("one-below-rest-above", ones, vec(0, 2, 1)));
  if (d % 2 == 0) {
    const auto half = n / 2;
    set.pairs.push_back(query_pair("half-half", ones, vec(0, 1, half)));
    set.pairs.push_back(query_pair("all-above-all-below", ones, vec(2, 2, 0)));
    set.pairs.push_back(query_pair("x-shape", vec(1, 0, half), vec(0, 1, half)));
  } else {
    set.pairs.push_back(query_pair("all-above-all-below", ones, vec(2, 2, 0)));
    set.warnings.push_back("half-half omitted: requires even d");
    set.warnings.push_back("x-shape omitted: requires even d");
  }
  return set;
}

std::vector<AdjacentPair> binary_neighborhood(int d) {
  if (d < 1 || d > 20)
    throw std::invalid_argument("binary_neighborhood: d must lie in [1, 20]");
  const auto n = static_cast<std::size_t>(d);
  const std::vector<std::int64_t> zero(n, 0);
  std::vector<AdjacentPair> pairs;
  pairs.reserve((std::size_t{1} << d) - 1);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<std::int64_t> qp(n, 0);
    for (std::size_t i = 0; i < n; ++i) qp[i] = (mask >> i) & 1u;
    pairs.push_back(query_pair("binary-" + std::to_string(mask), zero, std::move(qp)));
  }
  return pairs;
}

std::vector<AdjacentPair> cube_grid_neighborhood(int k) {
  if (k < 1 || k > 6)
    throw std::invalid_argument("cube_grid_neighborhood: k must lie in [1, 6]");
  const auto n = static_cast<std::size_t>(k);
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  const std::vector<double> center(n, 0.5);
  std::vector<AdjacentPair> pairs;
  pairs.reserve(total - 1);
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<double> sp(n);
    std::size_t c = code;
    bool is_center = true;
    for (std::size_t i = 0; i < n; ++i, c /= 3) {
      sp[i] = static_cast<double>(c % 3) / 2.0;
      if (c % 3 != 1) is_center = false;
    }
    if (is_center) continue;
    pairs.push_back(stat_pair("cube-" + std::to_string(code), center, std::move(sp)));
  }
  return pairs;
}

std::vector<AdjacentPair> statistic_pairs(const std::string& preset) {
  std::vector<AdjacentPair> pairs;
  for (int b = 1; b <= 10; ++b) {
    const double shift = static_cast<double>(b) / 10.0;
    const std::string id = preset + "-b" + std::to_string(b);
    if (preset == "laplace") {
      pairs.push_back(stat_pair(id, {0.0}, {shift}));
    } else if (preset == "noisy-max") {
      pairs.push_back(stat_pair(id, {0.0, 0.0, 0.0}, {shift, shift, shift}));
    } else if (preset == "exponential") {
      pairs.push_back(stat_pair(id, {1.0}, {1.0 + shift}));
    } else {
      throw std::invalid_argument("statistic_pairs: unknown preset '" + preset + "'");
    }
  }
  return pairs;
}

std::string pairs_to_json(const std::vector<AdjacentPair>& pairs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pairs) {
    nlohmann::json j;
    j["id"] = p.id;
    if (p.kind == AdjacencyKind::StatisticPair) {
      j["x"] = p.x.stat;
      j["x_prime"] = p.x_prime.stat;
      j["kind"] = "statistic";
    } else {
      j["x"] = p.x.query;
      j["x_prime"] = p.x_prime.query;
      j["kind"] = p.kind == AdjacencyKind::QueryVector ? "query" : "database";
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::vector<AdjacentPair> pairs_from_json(const std::string& text) {
  const nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("pairs_from_json: expected an array");
  std::vector<AdjacentPair> pairs;
  pairs.reserve(arr.size());
  for (const auto& j : arr) {
    AdjacentPair p;
    p.id = j.at("id").get<std::string>();
    const std::string kind = j.value("kind", "statistic");
    if (kind == "statistic") {
      p.kind = AdjacencyKind::StatisticPair;
      p.x.stat = j.at("x").get<std::vector<double>>();
      p.x_prime.stat = j.at("x_prime").get<std::vector<double>>();
    } else {
      p.kind = kind == "query" ? AdjacencyKind::QueryVector : AdjacencyKind::HammingDatabase;
      p.x.query = j.at("x").get<std::vector<std::int64_t>>();
      p.x_prime.query = j.at("x_prime").get<std::vector<std::int64_t>>();
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace dpaudit
