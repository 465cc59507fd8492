#include "dadim/symbolic.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dadim/errors.hpp"

namespace dadim {

namespace {

constexpr std::size_t kMaxLanguageSize = 2'000'000;

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool contains_sorted(const std::vector<std::string>& v, const std::string& w) {
  return std::binary_search(v.begin(), v.end(), w);
}

std::vector<std::string> all_factors(const std::string& w, int n) {
  std::vector<std::string> out;
  if (static_cast<int>(w.size()) < n) return out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= w.size(); ++i) {
    out.push_back(w.substr(i, static_cast<std::size_t>(n)));
  }
  return out;
}

char digit_char(int d) { return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10); }

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

void check_depth(const SymbolicSystem& sys, long length) {
  if (length > sys.depth_limit()) {
    fail(ErrorCode::kDepthExceeded, "window length " + std::to_string(length) +
                                        " exceeds depth limit " +
                                        std::to_string(sys.depth_limit()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SymbolicSystem

std::shared_ptr<const SymbolicSystem> SymbolicSystem::odometer(std::vector<int> base_pattern,
                                                               int depth_limit) {
  if (base_pattern.empty()) fail(ErrorCode::kParse, "odometer base pattern is empty");
  for (int k : base_pattern) {
    if (k < 2 || k > 36) fail(ErrorCode::kParse, "odometer base entries must lie in [2,36]");
  }
  if (depth_limit <= 0) fail(ErrorCode::kParse, "depth_limit must be positive");
  std::shared_ptr<SymbolicSystem> sys(new SymbolicSystem());
  sys->kind_ = Kind::kOdometer;
  sys->base_ = std::move(base_pattern);
  sys->depth_limit_ = depth_limit;
  sys->minimal_ = true;
  return sys;
}

std::shared_ptr<const SymbolicSystem> SymbolicSystem::substitution(
    std::vector<std::string> alphabet, const std::map<std::string, std::string>& rules,
    int depth_limit) {
  if (alphabet.empty()) fail(ErrorCode::kParse, "empty alphabet");
  if (alphabet.size() > 127) fail(ErrorCode::kParse, "alphabet too large");
  if (depth_limit <= 0) fail(ErrorCode::kParse, "depth_limit must be positive");
  std::shared_ptr<SymbolicSystem> sys(new SymbolicSystem());
  sys->kind_ = Kind::kSubshift;
  sys->source_ = SubshiftSource::kSubstitution;
  sys->depth_limit_ = depth_limit;
  for (const auto& a : alphabet) {
    if (a.size() != 1) fail(ErrorCode::kParse, "alphabet symbols must be single characters");
  }
  sys->alphabet_ = std::move(alphabet);
  {
    auto sorted = sys->alphabet_;
    sort_unique(sorted);
    if (sorted.size() != sys->alphabet_.size()) fail(ErrorCode::kParse, "repeated alphabet symbol");
  }
  const std::size_t k = sys->alphabet_.size();
  sys->images_.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    auto it = rules.find(sys->alphabet_[a]);
    if (it == rules.end()) fail(ErrorCode::kParse, "no substitution rule for " + sys->alphabet_[a]);
    if (it->second.empty()) fail(ErrorCode::kParse, "substitution images must be nonempty");
    sys->images_[a] = sys->parse_word(it->second);
  }
  if (rules.size() != k) fail(ErrorCode::kParse, "substitution rule for unknown symbol");

  // Primitive iff some power of the incidence matrix is positive; by
  // Wielandt's bound the power (k-1)^2+1 suffices.
  std::vector<std::vector<bool>> inc(k, std::vector<bool>(k, false));
  for (std::size_t a = 0; a < k; ++a) {
    for (char c : sys->images_[a]) inc[a][static_cast<std::size_t>(c)] = true;
  }
  auto power = inc;
  const std::size_t steps = (k - 1) * (k - 1);
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<std::vector<bool>> next(k, std::vector<bool>(k, false));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (power[a][b])
          for (std::size_t c = 0; c < k; ++c)
            if (inc[b][c]) next[a][c] = true;
    power = std::move(next);
  }
  bool positive = true;
  for (const auto& row : power)
    for (bool v : row) positive = positive && v;
  // A primitive substitution whose images all have length one is a
  // permutation of a single letter; it does not generate a Cantor space.
  bool grows = false;
  for (const auto& img : sys->images_) grows = grows || img.size() > 1;
  sys->primitive_ = positive && grows;
  sys->minimal_ = sys->primitive_;
  return sys;
}

std::shared_ptr<const SymbolicSystem> SymbolicSystem::forbidden_words(
    std::vector<std::string> alphabet, const std::vector<std::string>& forbidden, int depth_limit) {
  if (alphabet.empty()) fail(ErrorCode::kParse, "empty alphabet");
  if (alphabet.size() > 127) fail(ErrorCode::kParse, "alphabet too large");
  if (depth_limit <= 0) fail(ErrorCode::kParse, "depth_limit must be positive");
  std::shared_ptr<SymbolicSystem> sys(new SymbolicSystem());
  sys->kind_ = Kind::kSubshift;
  sys->source_ = SubshiftSource::kForbidden;
  sys->depth_limit_ = depth_limit;
  for (const auto& a : alphabet) {
    if (a.size() != 1) fail(ErrorCode::kParse, "alphabet symbols must be single characters");
  }
  sys->alphabet_ = std::move(alphabet);
  for (const auto& w : forbidden) {
    if (w.empty()) fail(ErrorCode::kParse, "forbidden word must be nonempty");
    sys->forbidden_.push_back(sys->parse_word(w));
  }
  sort_unique(sys->forbidden_);
  sys->prepare_forbidden();
  return sys;
}

void SymbolicSystem::prepare_forbidden() {
  std::size_t width = 2;
  for (const auto& w : forbidden_) width = std::max(width, w.size());
  block_ = static_cast<int>(width) - 1;
  const std::size_t k = alphabet_.size();

  auto avoids = [this](const std::string& w) {
    for (const auto& f : forbidden_) {
      if (w.find(f) != std::string::npos) return false;
    }
    return true;
  };

  // Enumerate blocks of length block_ avoiding the forbidden words.
  std::vector<std::string> layer{""};
  for (int len = 0; len < block_; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (std::size_t c = 0; c < k; ++c) {
        std::string e = w + static_cast<char>(c);
        if (avoids(e)) next.push_back(std::move(e));
      }
    }
    if (next.size() > kMaxLanguageSize) fail(ErrorCode::kTooLarge, "forbidden-word graph too large");
    layer = std::move(next);
  }
  std::set<std::string> alive(layer.begin(), layer.end());

  // Keep only blocks lying on a bi-infinite path.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::string> drop;
    for (const auto& u : alive) {
      bool has_out = false;
      bool has_in = false;
      for (std::size_t c = 0; c < k && !has_out; ++c) {
        std::string ext = u + static_cast<char>(c);
        if (avoids(ext) && alive.count(ext.substr(1))) has_out = true;
      }
      for (std::size_t c = 0; c < k && !has_in; ++c) {
        std::string ext = static_cast<char>(c) + u;
        if (avoids(ext) && alive.count(ext.substr(0, ext.size() - 1))) has_in = true;
      }
      if (!has_out || !has_in) drop.push_back(u);
    }
    for (const auto& u : drop) alive.erase(u);
    changed = !drop.empty();
  }
  if (alive.empty()) fail(ErrorCode::kParse, "forbidden words leave an empty subshift");
  essential_nodes_.assign(alive.begin(), alive.end());
}

int SymbolicSystem::base_at(int level) const {
  return base_[static_cast<std::size_t>(level) % base_.size()];
}

std::uint64_t SymbolicSystem::period(int depth) const {
  std::uint64_t p = 1;
  for (int i = 0; i < depth; ++i) {
    auto k = static_cast<std::uint64_t>(base_at(i));
    if (p > (std::uint64_t{1} << 62) / k) {
      fail(ErrorCode::kDepthExceeded, "odometer period at depth " + std::to_string(depth) +
                                          " does not fit in 62 bits");
    }
    p *= k;
  }
  return p;
}

const std::vector<std::string>& SymbolicSystem::language(int n) const {
  if (kind_ != Kind::kSubshift) fail(ErrorCode::kUsage, "language() is defined for subshifts only");
  if (n < 0) fail(ErrorCode::kUsage, "negative word length");
  check_depth(*this, n);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = language_cache_.find(n);
  if (it != language_cache_.end()) return it->second;
  return language_cache_.emplace(n, compute_language(n)).first->second;
}

std::vector<std::string> SymbolicSystem::compute_language(int n) const {
  if (n == 0) return {""};
  if (source_ == SubshiftSource::kSubstitution) return substitution_language(n);
  return forbidden_language(n);
}

std::string SymbolicSystem::substitute(const std::string& word) const {
  std::string out;
  for (char c : word) out += images_[static_cast<std::size_t>(c)];
  return out;
}

std::vector<std::string> SymbolicSystem::substitution_language(int n) const {
  // Seed with n-factors of sigma^k(b) for the first k reaching length n, then
  // close under u -> n-factors of sigma(u).
  std::set<std::string> found;
  std::deque<std::string> queue;
  auto add = [&](const std::string& w) {
    if (found.insert(w).second) {
      if (found.size() > kMaxLanguageSize) fail(ErrorCode::kTooLarge, "language too large");
      queue.push_back(w);
    }
  };
  for (std::size_t b = 0; b < alphabet_.size(); ++b) {
    std::string w(1, static_cast<char>(b));
    while (static_cast<int>(w.size()) < n) {
      std::string next = substitute(w);
      if (next.size() == w.size()) break;
      w = std::move(next);
    }
    for (auto& f : all_factors(w, n)) add(f);
  }
  while (!queue.empty()) {
    std::string u = std::move(queue.front());
    queue.pop_front();
    for (auto& f : all_factors(substitute(u), n)) add(f);
  }
  return {found.begin(), found.end()};
}

std::vector<std::string> SymbolicSystem::forbidden_language(int n) const {
  const std::size_t k = alphabet_.size();
  if (n <= block_) {
    std::vector<std::string> out;
    for (const auto& node : essential_nodes_) out.push_back(node.substr(0, static_cast<std::size_t>(n)));
    sort_unique(out);
    return out;
  }
  auto ok_step = [&](const std::string& w, char c) {
    std::string tail = w.substr(w.size() - static_cast<std::size_t>(block_)) + c;
    for (const auto& f : forbidden_) {
      if (tail.size() >= f.size() && tail.compare(tail.size() - f.size(), f.size(), f) == 0) return false;
    }
    return std::binary_search(essential_nodes_.begin(), essential_nodes_.end(), tail.substr(1));
  };
  std::vector<std::string> layer = essential_nodes_;
  for (int len = block_; len < n; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (std::size_t c = 0; c < k; ++c) {
        if (ok_step(w, static_cast<char>(c))) next.push_back(w + static_cast<char>(c));
      }
    }
    if (next.size() > kMaxLanguageSize) fail(ErrorCode::kTooLarge, "language too large");
    layer = std::move(next);
  }
  sort_unique(layer);
  return layer;
}

bool SymbolicSystem::is_legal(const std::string& word) const {
  return contains_sorted(language(static_cast<int>(word.size())), word);
}

bool SymbolicSystem::looks_periodic() const {
  if (kind_ == Kind::kOdometer) return false;
  for (int n = 1; n <= depth_limit_; ++n) {
    if (static_cast<int>(language(n).size()) <= n) return true;
  }
  return false;
}

std::string SymbolicSystem::format_word(const std::string& codes) const {
  std::string out;
  if (kind_ == Kind::kOdometer) {
    for (char c : codes) out += digit_char(c);
    return out;
  }
  for (char c : codes) out += alphabet_.at(static_cast<std::size_t>(c));
  return out;
}

std::string SymbolicSystem::parse_word(const std::string& text) const {
  std::string out;
  if (kind_ == Kind::kOdometer) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      int d = digit_value(text[i]);
      if (d < 0 || d >= base_at(static_cast<int>(i))) {
        fail(ErrorCode::kParse, "bad odometer digit in '" + text + "'");
      }
      out += static_cast<char>(d);
    }
    return out;
  }
  for (char c : text) {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), std::string(1, c));
    if (it == alphabet_.end()) fail(ErrorCode::kParse, "symbol not in alphabet in '" + text + "'");
    out += static_cast<char>(it - alphabet_.begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// ClopenSet

ClopenSet ClopenSet::whole(SystemPtr system) {
  ClopenSet s;
  s.system_ = std::move(system);
  s.cells_ = {""};
  return s;
}

ClopenSet ClopenSet::empty(SystemPtr system) {
  ClopenSet s;
  s.system_ = std::move(system);
  return s;
}

ClopenSet ClopenSet::cylinder(SystemPtr system, const std::string& word, long offset) {
  return from_cells(std::move(system), offset, static_cast<int>(word.size()), {word});
}

ClopenSet ClopenSet::from_cells(SystemPtr system, long offset, int length,
                                std::vector<std::string> cells) {
  if (!system) fail(ErrorCode::kUsage, "clopen set without a system");
  check_depth(*system, length);
  if (length < 0) fail(ErrorCode::kUsage, "negative window length");
  ClopenSet s;
  s.system_ = std::move(system);
  const bool odo = s.system_->kind() == SymbolicSystem::Kind::kOdometer;
  if (odo && offset != 0) fail(ErrorCode::kUsage, "odometer cells start at digit 0");
  s.offset_ = odo ? 0 : offset;
  s.length_ = length;
  sort_unique(cells);
  for (const auto& c : cells) {
    if (static_cast<int>(c.size()) != length) fail(ErrorCode::kUsage, "cell length mismatch");
    if (odo) {
      for (int i = 0; i < length; ++i) {
        int d = c[static_cast<std::size_t>(i)];
        if (d < 0 || d >= s.system_->base_at(i)) fail(ErrorCode::kUsage, "odometer digit out of range");
      }
      s.cells_.push_back(c);
    } else if (s.system_->is_legal(c)) {
      s.cells_.push_back(c);  // illegal words are empty cylinders
    }
  }
  if (s.cells_.empty()) {
    s.offset_ = 0;
    s.length_ = 0;
  }
  return s;
}

bool ClopenSet::is_whole() const {
  if (cells_.empty()) return false;
  if (system_->kind() == SymbolicSystem::Kind::kOdometer) {
    return cells_.size() == system_->period(length_);
  }
  return cells_.size() == system_->language(length_).size();
}

ClopenSet ClopenSet::refined(long offset, int length) const {
  if (cells_.empty()) {
    ClopenSet s = *this;
    return s;
  }
  if (length_ > 0 && (offset > offset_ || offset + length < offset_ + length_)) {
    fail(ErrorCode::kUsage, "refinement window must contain the current window");
  }
  check_depth(*system_, length);
  ClopenSet out;
  out.system_ = system_;
  out.offset_ = offset;
  out.length_ = length;
  if (system_->kind() == SymbolicSystem::Kind::kOdometer) {
    if (offset != 0) fail(ErrorCode::kUsage, "odometer cells start at digit 0");
    std::vector<std::string> layer = cells_;
    for (int level = length_; level < length; ++level) {
      std::vector<std::string> next;
      next.reserve(layer.size() * static_cast<std::size_t>(system_->base_at(level)));
      for (const auto& c : layer) {
        for (int d = 0; d < system_->base_at(level); ++d) next.push_back(c + static_cast<char>(d));
      }
      layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    out.cells_ = std::move(layer);
    return out;
  }
  const auto& words = system_->language(length);
  if (length_ == 0) {
    out.cells_ = words;
    return out;
  }
  const auto shift = static_cast<std::size_t>(offset_ - offset);
  for (const auto& w : words) {
    if (contains_sorted(cells_, w.substr(shift, static_cast<std::size_t>(length_)))) out.cells_.push_back(w);
  }
  return out;
}

namespace {

struct Window {
  long offset;
  int length;
};

Window hull(const ClopenSet& a, const ClopenSet& b) {
  const bool a_free = a.is_empty() || a.length() == 0;
  const bool b_free = b.is_empty() || b.length() == 0;
  if (a_free && b_free) return {0, 0};
  if (a_free) return {b.offset(), b.length()};
  if (b_free) return {a.offset(), a.length()};
  long lo = std::min(a.offset(), b.offset());
  long hi = std::max(a.offset() + a.length(), b.offset() + b.length());
  return {lo, static_cast<int>(hi - lo)};
}

void same_system(const ClopenSet& a, const ClopenSet& b) {
  if (a.system() != b.system()) fail(ErrorCode::kUsage, "clopen sets belong to different systems");
}

enum class SetOp { kUnion, kIntersection, kDifference };

bool trivially_whole(const ClopenSet& s) { return s.length() == 0 && !s.is_empty(); }

ClopenSet combine(const ClopenSet& a, const ClopenSet& b, SetOp op) {
  same_system(a, b);
  if (op == SetOp::kIntersection) {
    if (trivially_whole(a)) return b.canonical();
    if (trivially_whole(b)) return a.canonical();
  }
  if (op == SetOp::kUnion) {
    if (trivially_whole(a) || b.is_empty()) return a.canonical();
    if (trivially_whole(b) || a.is_empty()) return b.canonical();
  }
  Window w = hull(a, b);
  if (w.length > a.system()->depth_limit()) {
    fail(ErrorCode::kDepthExceeded, "combined window length " + std::to_string(w.length) +
                                        " exceeds depth limit");
  }
  ClopenSet ra = a.refined(w.offset, w.length);
  ClopenSet rb = b.refined(w.offset, w.length);
  std::vector<std::string> out;
  const auto& ca = ra.cells();
  const auto& cb = rb.cells();
  switch (op) {
    case SetOp::kUnion:
      std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(out));
      break;
    case SetOp::kIntersection:
      std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(out));
      break;
    case SetOp::kDifference:
      std::set_difference(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(out));
      break;
  }
  return ClopenSet::from_cells(a.system(), w.offset, w.length, std::move(out)).canonical();
}

}  // namespace

ClopenSet ClopenSet::unite(const ClopenSet& other) const { return combine(*this, other, SetOp::kUnion); }

ClopenSet ClopenSet::intersect(const ClopenSet& other) const {
  return combine(*this, other, SetOp::kIntersection);
}

ClopenSet ClopenSet::minus(const ClopenSet& other) const {
  return combine(*this, other, SetOp::kDifference);
}

ClopenSet ClopenSet::complement() const { return whole(system_).minus(*this); }

bool ClopenSet::subset_of(const ClopenSet& other) const {
  same_system(*this, other);
  if (cells_.empty() || trivially_whole(other)) return true;
  Window w = hull(*this, other);
  check_depth(*system_, w.length);
  ClopenSet ra = refined(w.offset, w.length);
  ClopenSet rb = other.refined(w.offset, w.length);
  return std::includes(rb.cells_.begin(), rb.cells_.end(), ra.cells_.begin(), ra.cells_.end());
}

bool ClopenSet::intersects(const ClopenSet& other) const {
  same_system(*this, other);
  if (cells_.empty() || other.cells_.empty()) return false;
  Window w = hull(*this, other);
  check_depth(*system_, w.length);
  ClopenSet ra = refined(w.offset, w.length);
  ClopenSet rb = other.refined(w.offset, w.length);
  auto ia = ra.cells_.begin();
  auto ib = rb.cells_.begin();
  while (ia != ra.cells_.end() && ib != rb.cells_.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

bool ClopenSet::operator==(const ClopenSet& other) const {
  if (system_ != other.system_) return false;
  if (cells_.empty() || other.cells_.empty()) return cells_.empty() == other.cells_.empty();
  return subset_of(other) && other.subset_of(*this);
}

ClopenSet ClopenSet::canonical() const {
  ClopenSet cur = *this;
  if (cur.cells_.empty()) {
    cur.offset_ = 0;
    cur.length_ = 0;
    return cur;
  }
  if (system_->kind() == SymbolicSystem::Kind::kOdometer) {
    while (cur.length_ > 0) {
      const auto base = static_cast<std::size_t>(system_->base_at(cur.length_ - 1));
      if (cur.cells_.size() % base != 0) break;
      bool full = true;
      for (std::size_t i = 0; i < cur.cells_.size() && full; i += base) {
        const std::string prefix = cur.cells_[i].substr(0, static_cast<std::size_t>(cur.length_ - 1));
        for (std::size_t d = 0; d < base; ++d) {
          const std::string& c = cur.cells_[i + d];
          if (c.compare(0, prefix.size(), prefix) != 0 || c.back() != static_cast<char>(d)) {
            full = false;
            break;
          }
        }
      }
      if (!full) break;
      std::vector<std::string> shorter;
      shorter.reserve(cur.cells_.size() / base);
      for (std::size_t i = 0; i < cur.cells_.size(); i += base) {
        shorter.push_back(cur.cells_[i].substr(0, static_cast<std::size_t>(cur.length_ - 1)));
      }
      cur.cells_ = std::move(shorter);
      --cur.length_;
    }
    return cur;
  }

  auto try_shrink = [&](bool from_left) {
    if (cur.length_ == 0) return false;
    std::vector<std::string> cand;
    cand.reserve(cur.cells_.size());
    for (const auto& c : cur.cells_) {
      cand.push_back(from_left ? c.substr(1) : c.substr(0, c.size() - 1));
    }
    sort_unique(cand);
    ClopenSet smaller;
    smaller.system_ = system_;
    smaller.offset_ = from_left ? cur.offset_ + 1 : cur.offset_;
    smaller.length_ = cur.length_ - 1;
    smaller.cells_ = std::move(cand);
    ClopenSet back = smaller.refined(cur.offset_, cur.length_);
    if (back.cells_ != cur.cells_) return false;
    cur = std::move(smaller);
    return true;
  };
  while (try_shrink(true)) {
  }
  while (try_shrink(false)) {
  }
  if (cur.length_ == 0) cur.offset_ = 0;
  return cur;
}

// ---------------------------------------------------------------------------
// Action and return times

ClopenSet translate(const ClopenSet& s, long n) {
  if (n == 0 || s.is_empty() || s.length() == 0) return s;
  const auto& sys = *s.system();
  if (sys.kind() == SymbolicSystem::Kind::kSubshift) {
    return ClopenSet::from_cells(s.system(), s.offset() - n, s.length(), s.cells());
  }
  std::vector<std::string> out;
  out.reserve(s.cells().size());
  for (const auto& cell : s.cells()) {
    std::string moved = cell;
    long carry = n;
    for (std::size_t i = 0; i < moved.size() && carry != 0; ++i) {
      const long k = sys.base_at(static_cast<int>(i));
      const long t = moved[i] + carry;
      const long q = floor_div(t, k);
      moved[i] = static_cast<char>(t - q * k);
      carry = q;
    }
    out.push_back(std::move(moved));
  }
  return ClopenSet::from_cells(s.system(), 0, s.length(), std::move(out));
}

bool disjoint_translates_radius(const ClopenSet& s, long radius) {
  // n.s meets s iff (-n).s meets s, so positive n suffice.
  for (long n = 1; n <= radius; ++n) {
    if (translate(s, n).intersects(s)) return false;
  }
  return true;
}

std::vector<std::uint64_t> odometer_residues(const ClopenSet& s, int depth) {
  const auto& sys = *s.system();
  if (sys.kind() != SymbolicSystem::Kind::kOdometer) fail(ErrorCode::kUsage, "not an odometer set");
  if (s.is_empty()) return {};
  if (depth < s.length()) fail(ErrorCode::kUsage, "residue depth below the set's depth");
  const std::uint64_t period = sys.period(depth);
  const std::uint64_t cell_period = sys.period(s.length());
  std::vector<std::uint64_t> base_res;
  for (const auto& cell : s.cells()) {
    std::uint64_t v = 0;
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      v += place * static_cast<std::uint64_t>(cell[i]);
      place *= static_cast<std::uint64_t>(sys.base_at(static_cast<int>(i)));
    }
    base_res.push_back(v);
  }
  std::vector<std::uint64_t> out;
  out.reserve(base_res.size() * (period / cell_period));
  for (std::uint64_t hi = 0; hi < period; hi += cell_period) {
    for (auto v : base_res) out.push_back(hi + v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClopenSet odometer_from_residues(SystemPtr system, int depth, const std::vector<std::uint64_t>& residues) {
  const std::uint64_t period = system->period(depth);
  std::vector<std::string> cells;
  for (auto r : residues) {
    if (r >= period) fail(ErrorCode::kUsage, "residue out of range");
    std::string cell;
    for (int i = 0; i < depth; ++i) {
      const auto k = static_cast<std::uint64_t>(system->base_at(i));
      cell += static_cast<char>(r % k);
      r /= k;
    }
    cells.push_back(std::move(cell));
  }
  return ClopenSet::from_cells(std::move(system), 0, depth, std::move(cells)).canonical();
}

ReturnTimeReport return_time_report(const ClopenSet& set, long search_bound) {
  if (set.is_empty()) fail(ErrorCode::kEmptySet, "return times of the empty set");
  ClopenSet s = set.canonical();
  ReturnTimeReport rep;
  rep.set = s;
  const auto& sys = *s.system();

  if (sys.kind() == SymbolicSystem::Kind::kOdometer) {
    const auto res = odometer_residues(s, s.length());
    const auto period = static_cast<long>(sys.period(s.length()));
    long min_gap = period;
    long max_gap = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
      const long next = i + 1 < res.size() ? static_cast<long>(res[i + 1])
                                           : static_cast<long>(res[0]) + period;
      const long gap = next - static_cast<long>(res[i]);
      min_gap = std::min(min_gap, gap);
      max_gap = std::max(max_gap, gap);
    }
    rep.min_forward_return = min_gap;
    rep.max_gap = max_gap;
    return rep;
  }

  const int len = s.length();
  // Every point hits s within (0, M] iff every legal word of length M+len-1
  // contains a cell at one of its first M positions; the backward condition
  // is the same word condition.
  for (long m = 1; m <= search_bound; ++m) {
    const long width = m + len - 1;
    if (width > sys.depth_limit()) {
      fail(ErrorCode::kDepthExceeded, "gap search needs words of length " + std::to_string(width));
    }
    bool all_hit = true;
    for (const auto& w : sys.language(static_cast<int>(width))) {
      bool hit = false;
      for (long j = 0; j < m && !hit; ++j) {
        hit = contains_sorted(s.cells(), w.substr(static_cast<std::size_t>(j), static_cast<std::size_t>(len)));
      }
      if (!hit) {
        all_hit = false;
        break;
      }
    }
    if (all_hit) {
      rep.max_gap = m;
      break;
    }
  }
  if (!rep.max_gap) {
    fail(ErrorCode::kBoundExceeded, "max gap exceeds search bound " + std::to_string(search_bound));
  }
  for (long n = 1; n <= *rep.max_gap; ++n) {
    if (translate(s, n).intersects(s)) {
      rep.min_forward_return = n;
      break;
    }
  }
  return rep;
}

}  // namespace dadim
