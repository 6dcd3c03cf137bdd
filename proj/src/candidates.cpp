#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "orthotsp/candidates.hpp"

namespace orthotsp {

std::string to_string(CandidateSource s) {
  switch (s) {
    case CandidateSource::PNearness: return "p-nearness";
    case CandidateSource::AlphaNearness: return "alpha-nearness";
    case CandidateSource::Distance: return "distance";
  }
  return "?";
}

CandidateSource candidate_source_from_string(std::string_view s) {
  if (s == "p-nearness") return CandidateSource::PNearness;
  if (s == "alpha-nearness") return CandidateSource::AlphaNearness;
  if (s == "distance") return CandidateSource::Distance;
  fail(ErrorCode::MalformedInput, "unknown candidate source '" + std::string(s) + "'");
}

CandidateSets::CandidateSets(CandidateSource source, std::vector<std::vector<Candidate>> lists,
                             std::optional<double> lambda)
    : source_(source), lists_(std::move(lists)), lambda_(lambda) {
  const int n = size();
  if (n < 3) fail(ErrorCode::TooSmall, "candidate sets need at least 3 cities");
  m_ = static_cast<int>(lists_[0].size());
  if (m_ < 1 || m_ > n - 1) fail(ErrorCode::InvalidParameter, "candidate list size out of range");
  for (int i = 0; i < n; ++i) {
    const auto& l = lists_[i];
    if (static_cast<int>(l.size()) != m_)
      fail(ErrorCode::MalformedInput, "candidate lists differ in length");
    std::vector<char> seen(n, 0);
    for (std::size_t r = 0; r < l.size(); ++r) {
      const int j = l[r].city;
      if (j < 0 || j >= n || j == i || seen[j])
        fail(ErrorCode::MalformedInput, "candidate list of city " + std::to_string(i + 1) +
                                            " has an invalid or repeated entry");
      seen[j] = 1;
      if (!std::isfinite(l[r].score)) fail(ErrorCode::MalformedInput, "candidate score not finite");
      if (r > 0 && l[r].score > l[r - 1].score)
        fail(ErrorCode::MalformedInput, "candidate scores must be non-increasing");
    }
  }
}

bool CandidateSets::lists(int from, int to) const {
  for (const auto& c : lists_.at(from))
    if (c.city == to) return true;
  return false;
}

Matrix CandidateSets::adjacency() const {
  const int n = size();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (const auto& c : lists_[i]) a(i, c.city) = a(c.city, i) = 1.0;
  return a;
}

std::vector<std::vector<Candidate>> rank_by_score(const Matrix& score, int m, const Matrix* tie_key) {
  const int n = static_cast<int>(score.rows());
  if (score.cols() != n) fail(ErrorCode::DimensionMismatch, "score matrix must be square");
  if (m < 1 || m > n - 1) fail(ErrorCode::InvalidParameter, "m must lie in [1, n-1]");
  std::vector<std::vector<Candidate>> out(n);
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    idx.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) idx.push_back(j);
    auto better = [&](int a, int b) {
      if (score(i, a) != score(i, b)) return score(i, a) > score(i, b);
      if (tie_key && (*tie_key)(i, a) != (*tie_key)(i, b)) return (*tie_key)(i, a) < (*tie_key)(i, b);
      return a < b;
    };
    std::partial_sort(idx.begin(), idx.begin() + m, idx.end(), better);
    for (int r = 0; r < m; ++r) out[i].push_back({idx[r], score(i, idx[r])});
  }
  return out;
}

CandidateSets distance_candidates(const DistanceMatrix& d, int m) {
  Matrix neg = -d.matrix();
  return CandidateSets(CandidateSource::Distance, rank_by_score(neg, m));
}

std::string candidates_to_text(const CandidateSets& c) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "# source: " << to_string(c.source()) << '\n';
  os << "# n: " << c.size() << '\n';
  os << "# m: " << c.m() << '\n';
  if (c.lambda()) os << "# lambda: " << *c.lambda() << '\n';
  for (int i = 0; i < c.size(); ++i) {
    os << i + 1 << ':';
    for (const auto& e : c.list(i)) os << ' ' << e.city + 1 << '(' << e.score << ')';
    os << '\n';
  }
  return os.str();
}

CandidateSets parse_candidates_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  CandidateSource source = CandidateSource::Distance;
  std::optional<double> lambda;
  std::vector<std::pair<int, std::vector<Candidate>>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
      value.erase(std::remove_if(value.begin(), value.end(), ::isspace), value.end());
      if (key == "source") source = candidate_source_from_string(value);
      else if (key == "lambda") lambda = std::stod(value);
      continue;
    }
    std::istringstream ls(line);
    int city = 0;
    char colon = 0;
    if (!(ls >> city >> colon) || colon != ':')
      fail(ErrorCode::MalformedInput, "bad candidate line: " + line);
    std::vector<Candidate> list;
    std::string tok;
    while (ls >> tok) {
      auto open = tok.find('(');
      if (open == std::string::npos || tok.back() != ')')
        fail(ErrorCode::MalformedInput, "bad candidate entry: " + tok);
      try {
        int j = std::stoi(tok.substr(0, open));
        double s = std::stod(tok.substr(open + 1, tok.size() - open - 2));
        list.push_back({j - 1, s});
      } catch (const std::logic_error&) {
        fail(ErrorCode::MalformedInput, "bad candidate entry: " + tok);
      }
    }
    rows.emplace_back(city - 1, std::move(list));
  }
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<Candidate>> lists(n);
  std::vector<char> filled(n, 0);
  for (auto& [city, list] : rows) {
    if (city < 0 || city >= n || filled[city])
      fail(ErrorCode::MalformedInput, "candidate lines must number cities 1..n once each");
    filled[city] = 1;
    lists[city] = std::move(list);
  }
  return CandidateSets(source, std::move(lists), lambda);
}

}  // namespace orthotsp
