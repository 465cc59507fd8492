#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace dadim {

// A Cantor-type Z-system: an odometer with an eventually periodic base
// sequence, or a subshift given by a substitution or by forbidden words.
//
// Words and cells are stored as std::string whose chars are symbol codes
// (subshifts) or digit values (odometers), not printable text.
class SymbolicSystem {
 public:
  enum class Kind { kOdometer, kSubshift };
  enum class SubshiftSource { kNone, kSubstitution, kForbidden };

  static constexpr int kDefaultDepthLimit = 64;

  // base_pattern is repeated forever: k_1, k_2, ... = p_0, p_1, ..., p_0, ...
  static std::shared_ptr<const SymbolicSystem> odometer(std::vector<int> base_pattern,
                                                        int depth_limit = kDefaultDepthLimit);
  // Each alphabet entry must be a single character; rules map symbol -> image.
  static std::shared_ptr<const SymbolicSystem> substitution(
      std::vector<std::string> alphabet, const std::map<std::string, std::string>& rules,
      int depth_limit = kDefaultDepthLimit);
  static std::shared_ptr<const SymbolicSystem> forbidden_words(
      std::vector<std::string> alphabet, const std::vector<std::string>& forbidden,
      int depth_limit = kDefaultDepthLimit);

  Kind kind() const { return kind_; }
  SubshiftSource source() const { return source_; }
  int depth_limit() const { return depth_limit_; }
  bool minimal() const { return minimal_; }

  // Odometer: k_{level+1} (level counts from 0).
  int base_at(int level) const;
  const std::vector<int>& base_pattern() const { return base_; }
  // Product k_1 ... k_depth; DepthExceeded if it does not fit in 62 bits.
  std::uint64_t period(int depth) const;

  // Subshift.
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& images() const { return images_; }
  const std::vector<std::string>& forbidden() const { return forbidden_; }
  bool primitive() const { return primitive_; }
  // Legal words of length n, sorted. Materialized on first use; n above the
  // depth limit is reported as DepthExceeded.
  const std::vector<std::string>& language(int n) const;
  bool is_legal(const std::string& word) const;
  // Applies the substitution once.
  std::string substitute(const std::string& word) const;
  // True when the subshift is periodic as far as the depth limit can tell
  // (complexity p(n) <= n for some n <= depth limit).
  bool looks_periodic() const;

  // Printable form of a cell/word and its inverse.
  std::string format_word(const std::string& codes) const;
  std::string parse_word(const std::string& text) const;

 private:
  SymbolicSystem() = default;
  std::vector<std::string> compute_language(int n) const;
  std::vector<std::string> substitution_language(int n) const;
  std::vector<std::string> forbidden_language(int n) const;
  void prepare_forbidden();

  Kind kind_ = Kind::kOdometer;
  SubshiftSource source_ = SubshiftSource::kNone;
  int depth_limit_ = kDefaultDepthLimit;
  bool minimal_ = false;
  bool primitive_ = false;

  std::vector<int> base_;

  std::vector<std::string> alphabet_;
  std::vector<std::string> images_;  // per symbol code
  std::vector<std::string> forbidden_;
  int block_ = 1;                             // forbidden: node word length
  std::vector<std::string> essential_nodes_;  // forbidden: bi-extendable blocks

  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::vector<std::string>> language_cache_;
};

using SystemPtr = std::shared_ptr<const SymbolicSystem>;

// Exact clopen subset. A point x belongs to the set when the window
// x[offset, offset+length) is one of the cells. For odometers the window is
// the first `length` digits (offset is always 0).
class ClopenSet {
 public:
  ClopenSet() = default;
  static ClopenSet whole(SystemPtr system);
  static ClopenSet empty(SystemPtr system);
  static ClopenSet cylinder(SystemPtr system, const std::string& word, long offset = 0);
  static ClopenSet from_cells(SystemPtr system, long offset, int length,
                              std::vector<std::string> cells);

  const SystemPtr& system() const { return system_; }
  long offset() const { return offset_; }
  int length() const { return length_; }
  const std::vector<std::string>& cells() const { return cells_; }
  bool is_empty() const { return cells_.empty(); }
  bool is_whole() const;

  // Same set expressed over a window containing the current one.
  ClopenSet refined(long offset, int length) const;

  ClopenSet unite(const ClopenSet& other) const;
  ClopenSet intersect(const ClopenSet& other) const;
  ClopenSet minus(const ClopenSet& other) const;
  ClopenSet complement() const;
  bool subset_of(const ClopenSet& other) const;
  bool intersects(const ClopenSet& other) const;

  // Semantic equality (refines both sides to a common window).
  bool operator==(const ClopenSet& other) const;

  // Canonical representative: odometers drop trailing digits that carry no
  // information; subshifts shrink the window greedily from the left, then the
  // right.
  ClopenSet canonical() const;

 private:
  SystemPtr system_;
  long offset_ = 0;
  int length_ = 0;
  std::vector<std::string> cells_;
};

// n.s with (n.x) = x + n on odometers and (n.x)_i = x_{i+n} on subshifts.
ClopenSet translate(const ClopenSet& s, long n);

// True iff n.s and s are disjoint for every 0 < |n| <= radius.
bool disjoint_translates_radius(const ClopenSet& s, long radius);

struct ReturnTimeReport {
  ClopenSet set;
  long min_forward_return = 0;
  std::optional<long> max_gap;  // empty: unknown beyond the search bound
};

// For odometers everything is exact; for subshifts max_gap is found by
// enumerating legal words up to search_bound and BoundExceeded is thrown when
// it is larger.
ReturnTimeReport return_time_report(const ClopenSet& s, long search_bound);

// Odometer helpers: the residues mod k_1...k_depth making up s (depth must be
// at least s.length()) and the inverse map.
std::vector<std::uint64_t> odometer_residues(const ClopenSet& s, int depth);
ClopenSet odometer_from_residues(SystemPtr system, int depth,
                                 const std::vector<std::uint64_t>& residues);

}  // namespace dadim
