#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orthotsp/instance.hpp"

namespace orthotsp {

enum class CandidateSource { PNearness, AlphaNearness, Distance };

std::string to_string(CandidateSource s);
CandidateSource candidate_source_from_string(std::string_view s);

struct Candidate {
  int city = 0;
  double score = 0.0;
};

// Per-city ranked neighbour lists. Higher score means more promising; α and
// distance lists therefore store the negated α value or distance.
class CandidateSets {
 public:
  CandidateSets(CandidateSource source, std::vector<std::vector<Candidate>> lists,
                std::optional<double> lambda = std::nullopt);

  int size() const { return static_cast<int>(lists_.size()); }
  int m() const { return m_; }
  CandidateSource source() const { return source_; }
  std::optional<double> lambda() const { return lambda_; }
  const std::vector<Candidate>& list(int city) const { return lists_.at(city); }
  const std::vector<std::vector<Candidate>>& lists() const { return lists_; }

  bool lists(int from, int to) const;
  // Edge (i, j) is present when either endpoint lists the other.
  Matrix adjacency() const;

 private:
  CandidateSource source_;
  std::vector<std::vector<Candidate>> lists_;
  std::optional<double> lambda_;
  int m_ = 0;
};

/// For each city the m other cities with the largest score. Ties go to the
/// smaller `tie_key` entry (when given), then to the smaller index.
std::vector<std::vector<Candidate>> rank_by_score(const Matrix& score, int m,
                                                  const Matrix* tie_key = nullptr);

/// The m nearest neighbours of every city.
CandidateSets distance_candidates(const DistanceMatrix& d, int m);

/// Line-oriented text: optional "# key: value" header lines, then one line per
/// city "i: j1(s1) j2(s2) ..." with 1-based city numbers.
std::string candidates_to_text(const CandidateSets& c);
CandidateSets parse_candidates_text(std::string_view text);

}  // namespace orthotsp
