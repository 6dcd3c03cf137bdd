#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "orthotsp/localsearch.hpp"

namespace orthotsp {
namespace {

struct ThreeOptMove {
  int type = 0;
  int dir = 1;
  int a = 0, c = 0, e = 0;
  double gain = 0.0;
};

// Array tour with position index, symmetric candidate neighbourhoods and a
// don't-look queue.
class Improver {
 public:
  Improver(const DistanceMatrix& d, const Tour& t, const CandidateSets& c)
      : w_(d.matrix()), n_(d.size()), order_(t.order()), pos_(n_), nbr_(n_),
        cand_(static_cast<std::size_t>(n_) * n_, 0), active_(n_, 0) {
    if (t.size() != n_ || c.size() != n_)
      fail(ErrorCode::DimensionMismatch, "tour, candidates and D differ in size");
    for (int i = 0; i < n_; ++i) pos_[order_[i]] = i;
    for (int i = 0; i < n_; ++i)
      for (const auto& e : c.list(i)) {
        mark(i, e.city);
        nbr_[i].push_back(e.city);
      }
    // Reverse entries go after a city's own ranked list.
    for (int i = 0; i < n_; ++i)
      for (const auto& e : c.list(i))
        if (std::find(nbr_[e.city].begin(), nbr_[e.city].end(), i) == nbr_[e.city].end())
          nbr_[e.city].push_back(i);
    cost_ = 0.0;
    for (int i = 0; i < n_; ++i) cost_ += w_(order_[i], order_[(i + 1) % n_]);
  }

  void activate_all(const std::vector<int>& seq) {
    for (int v : seq) activate(v);
  }

  double cost() const { return cost_; }
  Tour tour() const { return Tour(order_); }

  // First improving 2-opt move over the don't-look queue.
  bool step2() {
    while (!queue_.empty()) {
      int a = queue_.front();
      queue_.pop_front();
      active_[a] = 0;
      if (try_2opt(a)) return true;
    }
    return false;
  }

  // Best improving 3-opt move over all anchors.
  bool step3() {
    ThreeOptMove best;
    for (int a = 0; a < n_; ++a)
      for (int dir : {1, -1}) scan_3opt(a, dir, best);
    if (best.type == 0) return false;
    apply_3opt(best);
    return true;
  }

 private:
  const Matrix& w_;
  int n_;
  std::vector<int> order_, pos_;
  std::vector<std::vector<int>> nbr_;
  std::vector<char> cand_;
  std::deque<int> queue_;
  std::vector<char> active_;
  double cost_;

  void mark(int i, int j) {
    cand_[static_cast<std::size_t>(i) * n_ + j] = 1;
    cand_[static_cast<std::size_t>(j) * n_ + i] = 1;
  }
  bool cand(int i, int j) const { return cand_[static_cast<std::size_t>(i) * n_ + j] != 0; }
  void activate(int v) {
    if (!active_[v]) {
      active_[v] = 1;
      queue_.push_back(v);
    }
  }
  int succ(int v, int dir) const { return order_[(pos_[v] + (dir > 0 ? 1 : n_ - 1)) % n_]; }
  int rel(int v, int a, int dir) const {
    return dir > 0 ? (pos_[v] - pos_[a] + n_) % n_ : (pos_[a] - pos_[v] + n_) % n_;
  }
  static bool improves(double gain, double removed) { return gain > 1e-10 * std::max(removed, 1e-300); }

  // Reverses the cyclic run of positions i..j, or its complement when shorter.
  void reverse(int i, int j) {
    int len = (j - i + n_) % n_ + 1;
    if (2 * len > n_) {
      std::swap(i, j);
      i = (i + 1) % n_;
      j = (j - 1 + n_) % n_;
      len = n_ - len;
    }
    for (int s = 0; s < len / 2; ++s) {
      int p = (i + s) % n_, q = (j - s + n_) % n_;
      std::swap(order_[p], order_[q]);
      pos_[order_[p]] = p;
      pos_[order_[q]] = q;
    }
  }

  bool try_2opt(int a) {
    for (int dir : {1, -1}) {
      const int b = succ(a, dir);
      for (int c : nbr_[a]) {
        const int rc = rel(c, a, dir);
        if (rc < 2 || rc > n_ - 2) continue;
        const int d = succ(c, dir);
        if (!cand(b, d)) continue;
        const double removed = w_(a, b) + w_(c, d);
        const double gain = removed - w_(a, c) - w_(b, d);
        if (!improves(gain, removed)) continue;
        if (dir > 0) reverse(pos_[b], pos_[c]);
        else reverse(pos_[c], pos_[b]);
        cost_ -= gain;
        for (int v : {a, b, c, d}) activate(v);
        assert(Tour(order_).size() == n_);
        return true;
      }
    }
    return false;
  }

  void consider(ThreeOptMove& best, int type, int dir, int a, int c, int e, double gain, double removed) {
    if (improves(gain, removed) && gain > best.gain) best = {type, dir, a, c, e, gain};
  }

  // Removed edges (a,b) (c,d) (e,f) in orientation dir with 0 < rel(c) < rel(e) ≤ n−1.
  void scan_3opt(int a, int dir, ThreeOptMove& best) {
    const int b = succ(a, dir);
    auto pred = [&](int v) { return succ(v, -dir); };
    for (int x : nbr_[a]) {
      const int rx = rel(x, a, dir);
      // x = d: types 1 and 2.
      if (rx >= 2) {
        const int d = x, c = pred(d);
        for (int type : {1, 2}) {
          const int from = type == 1 ? b : c;
          for (int e : nbr_[from]) {
            const int re = rel(e, a, dir);
            if (re < rx || re > n_ - 1) continue;
            const int f = succ(e, dir);
            const int last_from = type == 1 ? c : b;
            if (!cand(last_from, f)) continue;
            const double removed = w_(a, b) + w_(c, d) + w_(e, f);
            const double added = w_(a, d) + w_(e, from) + w_(last_from, f);
            consider(best, type, dir, a, c, e, removed - added, removed);
          }
        }
      }
      // x = e: type 3.
      if (rx >= 2 && rx <= n_ - 1) {
        const int e = x, f = succ(e, dir);
        for (int d : nbr_[b]) {
          const int rd = rel(d, a, dir);
          if (rd < 2 || rd > rx) continue;
          const int c = pred(d);
          if (!cand(c, f)) continue;
          const double removed = w_(a, b) + w_(c, d) + w_(e, f);
          const double added = w_(a, e) + w_(d, b) + w_(c, f);
          consider(best, 3, dir, a, c, e, removed - added, removed);
        }
      }
      // x = c: type 4.
      if (rx >= 1 && rx <= n_ - 2) {
        const int c = x, d = succ(c, dir);
        for (int e : nbr_[b]) {
          const int re = rel(e, a, dir);
          if (re < rx + 1 || re > n_ - 1) continue;
          const int f = succ(e, dir);
          if (!cand(d, f)) continue;
          const double removed = w_(a, b) + w_(c, d) + w_(e, f);
          const double added = w_(a, c) + w_(b, e) + w_(d, f);
          consider(best, 4, dir, a, c, e, removed - added, removed);
        }
      }
    }
  }

  void apply_3opt(const ThreeOptMove& mv) {
    const int dir = mv.dir, a = mv.a;
    const int rc = rel(mv.c, a, dir), re = rel(mv.e, a, dir);
    auto at = [&](int r) { return order_[((pos_[a] + dir * r) % n_ + n_) % n_]; };
    std::vector<int> s1, s2, s3;
    for (int r = 1; r <= rc; ++r) s1.push_back(at(r));
    for (int r = rc + 1; r <= re; ++r) s2.push_back(at(r));
    for (int r = re + 1; r < n_; ++r) s3.push_back(at(r));
    const int b = s1.front(), c = s1.back(), d = s2.front(), e = s2.back();
    const int f = s3.empty() ? a : s3.front();
    std::vector<int> seq{a};
    auto put = [&](const std::vector<int>& s, bool rev) {
      if (rev) seq.insert(seq.end(), s.rbegin(), s.rend());
      else seq.insert(seq.end(), s.begin(), s.end());
    };
    switch (mv.type) {
      case 1: put(s2, false); put(s1, false); break;
      case 2: put(s2, false); put(s1, true); break;
      case 3: put(s2, true); put(s1, false); break;
      default: put(s1, true); put(s2, true); break;
    }
    put(s3, false);
    order_ = std::move(seq);
    for (int i = 0; i < n_; ++i) pos_[order_[i]] = i;
    cost_ -= mv.gain;
    for (int v : {a, b, c, d, e, f}) activate(v);
    assert(Tour(order_).size() == n_);
  }
};

std::string cost_text(double c, bool integral) {
  std::ostringstream os;
  if (integral) os << std::llround(c);
  else os << std::setprecision(std::numeric_limits<double>::max_digits10) << c;
  return os.str();
}

}  // namespace

SearchConfig SearchConfig::standard(CandidateSets candidates, std::uint64_t seed) {
  const std::int64_t budget = 8LL * candidates.size();
  return SearchConfig{std::move(candidates), budget, 3, seed};
}

Tour initial_tour(const DistanceMatrix& d, const CandidateSets& c, std::uint64_t seed) {
  const int n = d.size();
  if (c.size() != n) fail(ErrorCode::DimensionMismatch, "candidates and D differ in size");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<char> seen(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int cur = pick(rng);
  for (;;) {
    order.push_back(cur);
    seen[cur] = 1;
    if (static_cast<int>(order.size()) == n) break;
    int next = -1;
    for (const auto& e : c.list(cur))
      if (!seen[e.city]) {
        next = e.city;
        break;
      }
    if (next < 0)
      for (int j = 0; j < n; ++j)
        if (!seen[j] && (next < 0 || d(cur, j) < d(cur, next))) next = j;
    cur = next;
  }
  return Tour(std::move(order));
}

std::optional<Tour> two_opt_step(const DistanceMatrix& d, const Tour& t, const CandidateSets& c) {
  Improver imp(d, t, c);
  std::vector<int> all(d.size());
  for (int i = 0; i < d.size(); ++i) all[i] = i;
  imp.activate_all(all);
  if (!imp.step2()) return std::nullopt;
  return imp.tour();
}

std::optional<Tour> three_opt_step(const DistanceMatrix& d, const Tour& t, const CandidateSets& c) {
  Improver imp(d, t, c);
  if (!imp.step3()) return std::nullopt;
  return imp.tour();
}

SearchStats k_opt_search(const DistanceMatrix& d, const Tour& t0, const SearchConfig& cfg) {
  if (cfg.move_budget && *cfg.move_budget < 0) fail(ErrorCode::InvalidParameter, "move budget must be >= 0");
  if (cfg.max_k != 2 && cfg.max_k != 3) fail(ErrorCode::InvalidParameter, "max_k must be 2 or 3");
  Improver imp(d, t0, cfg.candidates);
  std::vector<int> first(d.size());
  for (int i = 0; i < d.size(); ++i) first[i] = i;
  std::shuffle(first.begin(), first.end(), std::mt19937_64(cfg.rng_seed));
  imp.activate_all(first);

  SearchStats s;
  s.initial_cost = imp.cost();
  auto budget_left = [&] { return !cfg.move_budget || s.attempted_moves < *cfg.move_budget; };
  auto accept = [&] {
    ++s.accepted_moves;
    s.cost_by_move.push_back({s.attempted_moves, imp.cost()});
  };
  while (budget_left()) {
    ++s.attempted_moves;
    if (imp.step2()) {
      accept();
      continue;
    }
    if (cfg.max_k < 3 || !budget_left()) break;
    ++s.attempted_moves;
    if (!imp.step3()) break;
    accept();
  }
  s.final_tour = imp.tour();
  s.final_cost = tour_cost(d, s.final_tour);
  s.final_tour.set_cached_cost(s.final_cost);
  return s;
}

CandidateSets complete_candidates(const DistanceMatrix& d) { return distance_candidates(d, d.size() - 1); }

std::string search_stats_json(const SearchStats& s, bool integral) {
  using nlohmann::json;
  json j;
  j["attempted_moves"] = s.attempted_moves;
  j["accepted_moves"] = s.accepted_moves;
  auto num = [&](double c) { return integral ? json(std::llround(c)) : json(c); };
  j["initial_cost"] = num(s.initial_cost);
  j["final_cost"] = num(s.final_cost);
  json tour = json::array();
  for (int c : s.final_tour.order()) tour.push_back(c + 1);
  j["tour"] = tour;
  json trace = json::array();
  for (const auto& m : s.cost_by_move) trace.push_back({m.move, num(m.cost)});
  j["cost_by_move"] = trace;
  return j.dump(2);
}

std::string search_stats_csv(const SearchStats& s, bool integral) {
  std::string out = "move_index,cost\n";
  for (const auto& m : s.cost_by_move) out += std::to_string(m.move) + ',' + cost_text(m.cost, integral) + '\n';
  return out;
}

}  // namespace orthotsp
