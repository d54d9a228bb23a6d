#include "symdyn/group.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <functional>

#include "symdyn/error.hpp"

namespace symdyn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMixedGroup: return "MixedGroup";
    case ErrorCode::kMalformedSubgroup: return "MalformedSubgroup";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kNotDerivable: return "NotDerivable";
    case ErrorCode::kEmptyResult: return "EmptyResult";
    case ErrorCode::kThicknessSearchFailed: return "ThicknessSearchFailed";
    case ErrorCode::kDepthTooLarge: return "DepthTooLarge";
    case ErrorCode::kGrowthInvalid: return "GrowthInvalid";
    case ErrorCode::kInternalAxiomViolation: return "InternalAxiomViolation";
    case ErrorCode::kCertificateMissing: return "CertificateMissing";
    case ErrorCode::kSubsetViolation: return "SubsetViolation";
    case ErrorCode::kWindowTooSmall: return "WindowTooSmall";
    case ErrorCode::kCosetCollision: return "CosetCollision";
    case ErrorCode::kUnsupportedGroup: return "UnsupportedGroup";
  }
  return "Error";
}

namespace {

constexpr std::int64_t kCoordLimit = std::int64_t{1} << 28;
constexpr std::int64_t kWordLimit = std::int64_t{1} << 24;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > UINT64_MAX / b ? UINT64_MAX : a * b;
}

std::uint32_t fnv1a32(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::kParse, msg); }

}  // namespace

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec GroupSpec::free_abelian(int d) {
  GroupSpec s;
  s.kind = Kind::kFreeAbelian;
  s.rank = d;
  return s;
}

GroupSpec GroupSpec::free(int k) {
  GroupSpec s;
  s.kind = Kind::kFree;
  s.rank = k;
  return s;
}

GroupSpec GroupSpec::finite(std::vector<std::vector<int>> table) {
  GroupSpec s;
  s.kind = Kind::kFinite;
  s.rank = 0;
  s.table = std::move(table);
  return s;
}

GroupSpec GroupSpec::cyclic(int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "cyclic order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return finite(std::move(t));
}

GroupSpec GroupSpec::product(std::vector<GroupSpec> factors) {
  GroupSpec s;
  s.kind = Kind::kProduct;
  s.rank = 0;
  s.factors = std::move(factors);
  return s;
}

bool GroupSpec::is_infinite() const {
  switch (kind) {
    case Kind::kFreeAbelian:
    case Kind::kFree: return true;
    case Kind::kFinite: return false;
    case Kind::kProduct:
      return std::any_of(factors.begin(), factors.end(),
                         [](const GroupSpec& f) { return f.is_infinite(); });
  }
  return false;
}

void to_json(json& j, const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::kFreeAbelian:
      j = json{{"kind", "free_abelian"}, {"rank", spec.rank}};
      break;
    case GroupSpec::Kind::kFree:
      j = json{{"kind", "free"}, {"rank", spec.rank}};
      break;
    case GroupSpec::Kind::kFinite:
      j = json{{"kind", "finite"}, {"table", spec.table}};
      break;
    case GroupSpec::Kind::kProduct: {
      json fs = json::array();
      for (const auto& f : spec.factors) fs.push_back(f);
      j = json{{"kind", "product"}, {"factors", fs}};
      break;
    }
  }
}

void from_json(const json& j, GroupSpec& spec) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    parse_error("group spec must be an object with a string \"kind\"");
  const std::string kind = j["kind"];
  auto get_int = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
      parse_error(std::string("group spec \"") + kind + "\" needs integer \"" + key + "\"");
    return j[key].get<int>();
  };
  if (kind == "free_abelian") {
    int d = get_int("rank");
    if (d < 1 || d > 8) parse_error("free_abelian rank must be in [1, 8]");
    spec = GroupSpec::free_abelian(d);
  } else if (kind == "free") {
    int k = get_int("rank");
    if (k < 1 || k > 26) parse_error("free rank must be in [1, 26]");
    spec = GroupSpec::free(k);
  } else if (kind == "cyclic") {
    int n = get_int("order");
    if (n < 1 || n > 256) parse_error("cyclic order must be in [1, 256]");
    spec = GroupSpec::cyclic(n);
  } else if (kind == "finite") {
    if (!j.contains("table") || !j["table"].is_array()) parse_error("finite group needs \"table\"");
    std::vector<std::vector<int>> t;
    try {
      t = j["table"].get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
      parse_error(std::string("finite table: ") + e.what());
    }
    spec = GroupSpec::finite(std::move(t));
  } else if (kind == "product") {
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
      parse_error("product needs a nonempty \"factors\" array");
    std::vector<GroupSpec> fs;
    for (const auto& f : j["factors"]) fs.push_back(f.get<GroupSpec>());
    spec = GroupSpec::product(std::move(fs));
  } else {
    parse_error("unknown group kind \"" + kind + "\"");
  }
}

// ---------------------------------------------------------------------------
// Implementations per group kind

namespace detail {

using Storage = GroupElement::Storage;
using Span = std::span<const std::int32_t>;

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;
  virtual void identity(Storage& out) const = 0;
  virtual void multiply(Span a, Span b, Storage& out) const = 0;
  virtual void inverse(Span a, Storage& out) const = 0;
  virtual int length(Span a) const = 0;
  virtual int compare_same_length(Span a, Span b) const = 0;
  virtual void sphere(int r, std::vector<Storage>& out) const = 0;
  virtual std::uint64_t sphere_size(int r) const = 0;
  virtual int max_radius() const = 0;
  virtual std::uint64_t order() const = 0;
  virtual int infinite_generators() const = 0;
  virtual void generator_power(int i, std::int64_t e, Storage& out) const = 0;
  virtual bool pow2_member(Span a) const = 0;
  virtual json to_json(Span a) const = 0;
  virtual void from_json(const json& j, Storage& out) const = 0;
  virtual std::string format(Span a) const = 0;
  virtual std::optional<std::uint64_t> closed_rank(Span) const { return std::nullopt; }

  int compare(Span a, Span b) const {
    int la = length(a), lb = length(b);
    if (la != lb) return la < lb ? -1 : 1;
    return compare_same_length(a, b);
  }

  void sort_sphere(std::vector<Storage>& v) const {
    std::sort(v.begin(), v.end(), [this](const Storage& x, const Storage& y) {
      return compare_same_length(Span(x.data(), x.size()), Span(y.data(), y.size())) < 0;
    });
  }
};

namespace {

bool is_pow2(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

class FreeAbelianImpl final : public GroupImpl {
 public:
  explicit FreeAbelianImpl(int d) : d_(d) {}

  void identity(Storage& out) const override { out.assign(d_, 0); }

  void multiply(Span a, Span b, Storage& out) const override {
    out.resize(d_);
    for (int i = 0; i < d_; ++i) {
      std::int64_t s = std::int64_t{a[i]} + b[i];
      if (s >= kCoordLimit || s <= -kCoordLimit)
        throw Error(ErrorCode::kInvalidArgument, "coordinate overflow");
      out[i] = static_cast<std::int32_t>(s);
    }
  }

  void inverse(Span a, Storage& out) const override {
    out.resize(d_);
    for (int i = 0; i < d_; ++i) out[i] = -a[i];
  }

  int length(Span a) const override {
    int s = 0;
    for (auto x : a) s += std::abs(x);
    return s;
  }

  // Normal-form word a1^x1 ... ad^xd over letters a1 < ... < ad < A1 < ... < Ad.
  int compare_same_length(Span a, Span b) const override {
    struct Runs {
      Span v;
      int d;
      int i = 0;
      std::int64_t rem = 0;
      int code = -1;
      bool next() {
        while (i < d && v[i] == 0) ++i;
        if (i == d) return false;
        code = v[i] > 0 ? i : d + i;
        rem = std::abs(std::int64_t{v[i]});
        ++i;
        return true;
      }
    };
    Runs ra{a, d_}, rb{b, d_};
    bool ha = ra.next(), hb = rb.next();
    while (ha && hb) {
      if (ra.code != rb.code) return ra.code < rb.code ? -1 : 1;
      std::int64_t step = std::min(ra.rem, rb.rem);
      ra.rem -= step;
      rb.rem -= step;
      if (ra.rem == 0) ha = ra.next();
      if (rb.rem == 0) hb = rb.next();
    }
    if (ha == hb) return 0;
    return ha ? 1 : -1;
  }

  void sphere(int r, std::vector<Storage>& out) const override {
    out.clear();
    Storage cur(d_, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == d_ - 1) {
        cur[i] = left;
        out.push_back(cur);
        if (left != 0) {
          cur[i] = -left;
          out.push_back(cur);
        }
        cur[i] = 0;
        return;
      }
      for (int v = -left; v <= left; ++v) {
        cur[i] = v;
        rec(i + 1, left - std::abs(v));
      }
      cur[i] = 0;
    };
    rec(0, r);
    sort_sphere(out);
  }

  std::uint64_t sphere_size(int r) const override {
    if (r == 0) return 1;
    // sum_i 2^i C(d,i) C(r-1,i-1)
    std::uint64_t total = 0;
    for (int i = 1; i <= d_ && i <= r; ++i) {
      std::uint64_t c1 = binom(d_, i), c2 = binom(r - 1, i - 1);
      total = sat_add(total, sat_mul(sat_mul(std::uint64_t{1} << i, c1), c2));
    }
    return total;
  }

  int max_radius() const override { return INT32_MAX; }
  std::uint64_t order() const override { return 0; }
  int infinite_generators() const override { return d_; }

  void generator_power(int i, std::int64_t e, Storage& out) const override {
    if (e >= kCoordLimit || e <= -kCoordLimit)
      throw Error(ErrorCode::kInvalidArgument, "generator power too large");
    out.assign(d_, 0);
    out[i] = static_cast<std::int32_t>(e);
  }

  bool pow2_member(Span a) const override {
    int nonzero = 0;
    std::int64_t v = 0;
    for (auto x : a)
      if (x != 0) {
        ++nonzero;
        v = std::abs(std::int64_t{x});
      }
    return nonzero == 1 && is_pow2(v);
  }

  json to_json(Span a) const override { return json(std::vector<int>(a.begin(), a.end())); }

  void from_json(const json& j, Storage& out) const override {
    if (d_ == 1 && j.is_number_integer()) {
      std::int64_t v = j.get<std::int64_t>();
      if (v >= kCoordLimit || v <= -kCoordLimit) parse_error("coordinate out of range");
      out.assign(1, static_cast<std::int32_t>(v));
      return;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != d_)
      parse_error("free abelian element must be an integer array of length " + std::to_string(d_));
    out.resize(d_);
    for (int i = 0; i < d_; ++i) {
      if (!j[i].is_number_integer()) parse_error("free abelian coordinate must be an integer");
      std::int64_t v = j[i].get<std::int64_t>();
      if (v >= kCoordLimit || v <= -kCoordLimit) parse_error("coordinate out of range");
      out[i] = static_cast<std::int32_t>(v);
    }
  }

  std::string format(Span a) const override {
    if (d_ == 1) return std::to_string(a[0]);
    std::string s = "(";
    for (int i = 0; i < d_; ++i) {
      if (i) s += ",";
      s += std::to_string(a[i]);
    }
    return s + ")";
  }

  std::optional<std::uint64_t> closed_rank(Span a) const override {
    if (d_ != 1) return std::nullopt;
    std::int64_t x = a[0];
    if (x == 0) return 0;
    return x > 0 ? static_cast<std::uint64_t>(2 * x - 1) : static_cast<std::uint64_t>(-2 * x);
  }

 private:
  static std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
      // exact at every step: r * (n-k+i) / i is an integer
      unsigned __int128 t = static_cast<unsigned __int128>(r) * static_cast<unsigned>(n - k + i) / i;
      r = t > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(t);
    }
    return r;
  }

  int d_;
};

class FreeImpl final : public GroupImpl {
 public:
  explicit FreeImpl(int k) : k_(k) {}

  int inv(int c) const { return c < k_ ? c + k_ : c - k_; }

  void identity(Storage& out) const override { out.clear(); }

  void multiply(Span a, Span b, Storage& out) const override {
    std::size_t j = 0;
    const std::size_t na = a.size(), nb = b.size();
    while (j < na && j < nb && a[na - 1 - j] == inv(b[j])) ++j;
    if (na + nb - 2 * j > static_cast<std::size_t>(kWordLimit))
      throw Error(ErrorCode::kInvalidArgument, "word too long");
    Storage r;
    r.reserve(na + nb - 2 * j);
    r.insert(r.end(), a.begin(), a.end() - j);
    r.insert(r.end(), b.begin() + j, b.end());
    out = std::move(r);
  }

  void inverse(Span a, Storage& out) const override {
    Storage r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = inv(a[a.size() - 1 - i]);
    out = std::move(r);
  }

  int length(Span a) const override { return static_cast<int>(a.size()); }

  int compare_same_length(Span a, Span b) const override {
    auto c = std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }

  void sphere(int r, std::vector<Storage>& out) const override {
    out.clear();
    Storage cur;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(cur.size()) == r) {
        out.push_back(cur);
        return;
      }
      for (int c = 0; c < 2 * k_; ++c) {
        if (!cur.empty() && cur.back() == inv(c)) continue;
        cur.push_back(c);
        rec();
        cur.pop_back();
      }
    };
    rec();
  }

  std::uint64_t sphere_size(int r) const override {
    if (r == 0) return 1;
    std::uint64_t s = 2 * static_cast<std::uint64_t>(k_);
    for (int i = 1; i < r; ++i) s = sat_mul(s, 2 * static_cast<std::uint64_t>(k_) - 1);
    return s;
  }

  int max_radius() const override { return INT32_MAX; }
  std::uint64_t order() const override { return 0; }
  int infinite_generators() const override { return k_; }

  void generator_power(int i, std::int64_t e, Storage& out) const override {
    if (e >= kWordLimit || e <= -kWordLimit)
      throw Error(ErrorCode::kInvalidArgument, "generator power too large");
    out.assign(static_cast<std::size_t>(std::abs(e)), e > 0 ? i : i + k_);
  }

  bool pow2_member(Span a) const override {
    if (a.empty()) return false;
    for (auto c : a)
      if (c != a[0]) return false;
    return is_pow2(static_cast<std::int64_t>(a.size()));
  }

  json to_json(Span a) const override {
    std::string s;
    for (auto c : a) s += c < k_ ? static_cast<char>('a' + c) : static_cast<char>('A' + (c - k_));
    return s;
  }

  void from_json(const json& j, Storage& out) const override {
    if (!j.is_string()) parse_error("free group element must be a string");
    const std::string s = j.get<std::string>();
    Storage word;
    std::size_t i = 0;
    auto push = [&](int c) {
      if (!word.empty() && word.back() == inv(c))
        word.pop_back();
      else
        word.push_back(c);
    };
    if (s == "\xCE\xB5") {  // epsilon
      out.clear();
      return;
    }
    while (i < s.size()) {
      char ch = s[i];
      int c;
      if (ch >= 'a' && ch < 'a' + k_) {
        c = ch - 'a';
      } else if (ch >= 'A' && ch < 'A' + k_) {
        c = ch - 'A' + k_;
      } else {
        parse_error("bad letter '" + std::string(1, ch) + "' at position " + std::to_string(i) +
                    " in word \"" + s + "\"");
      }
      ++i;
      // optional inverse marker: ^-1 or the superscript form
      if (s.compare(i, 3, "^-1") == 0) {
        c = inv(c);
        i += 3;
      } else if (s.compare(i, 5, "\xE2\x81\xBB\xC2\xB9") == 0) {
        c = inv(c);
        i += 5;
      }
      push(c);
    }
    out = std::move(word);
  }

  std::string format(Span a) const override {
    if (a.empty()) return "e";
    return to_json(a).get<std::string>();
  }

  std::optional<std::uint64_t> closed_rank(Span a) const override {
    const int r = static_cast<int>(a.size());
    std::uint64_t base = 0;
    for (int i = 0; i < r; ++i) base = sat_add(base, sphere_size(i));
    std::uint64_t pos = 0;
    const std::uint64_t branch = 2 * static_cast<std::uint64_t>(k_) - 1;
    for (int i = 0; i < r; ++i) {
      std::uint64_t less = static_cast<std::uint64_t>(a[i]);
      if (i > 0 && inv(a[i - 1]) < a[i]) --less;
      std::uint64_t weight = 1;
      for (int t = i + 1; t < r; ++t) weight = sat_mul(weight, branch);
      pos = sat_add(pos, sat_mul(less, weight));
    }
    return sat_add(base, pos);
  }

 private:
  int k_;
};

class FiniteImpl final : public GroupImpl {
 public:
  explicit FiniteImpl(const std::vector<std::vector<int>>& t) : t_(t), n_(static_cast<int>(t.size())) {
    if (n_ < 1 || n_ > 256) parse_error("finite group order must be in [1, 256]");
    for (const auto& row : t_) {
      if (static_cast<int>(row.size()) != n_) parse_error("finite table must be square");
      for (int v : row)
        if (v < 0 || v >= n_) parse_error("finite table entry out of range");
    }
    id_ = -1;
    for (int e = 0; e < n_ && id_ < 0; ++e) {
      bool ok = true;
      for (int x = 0; x < n_ && ok; ++x) ok = t_[e][x] == x && t_[x][e] == x;
      if (ok) id_ = e;
    }
    if (id_ < 0) parse_error("finite table has no identity");
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (t_[t_[a][b]][c] != t_[a][t_[b][c]]) parse_error("finite table is not associative");
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b)
        if (t_[a][b] == id_ && t_[b][a] == id_) inv_[a] = b;
      if (inv_[a] < 0) parse_error("finite table element without inverse");
    }
  }

  void identity(Storage& out) const override { out.assign(1, id_); }
  void multiply(Span a, Span b, Storage& out) const override { out.assign(1, t_[a[0]][b[0]]); }
  void inverse(Span a, Storage& out) const override { out.assign(1, inv_[a[0]]); }
  int length(Span a) const override { return a[0] == id_ ? 0 : 1; }
  int compare_same_length(Span a, Span b) const override {
    return a[0] == b[0] ? 0 : (a[0] < b[0] ? -1 : 1);
  }

  void sphere(int r, std::vector<Storage>& out) const override {
    out.clear();
    if (r == 0) {
      out.push_back(Storage{id_});
    } else if (r == 1) {
      for (int i = 0; i < n_; ++i)
        if (i != id_) out.push_back(Storage{i});
    }
  }

  std::uint64_t sphere_size(int r) const override {
    return r == 0 ? 1 : (r == 1 ? static_cast<std::uint64_t>(n_ - 1) : 0);
  }
  int max_radius() const override { return n_ > 1 ? 1 : 0; }
  std::uint64_t order() const override { return static_cast<std::uint64_t>(n_); }
  int infinite_generators() const override { return 0; }
  void generator_power(int, std::int64_t, Storage&) const override {
    throw Error(ErrorCode::kInvalidArgument, "finite group has no infinite-order generators");
  }
  bool pow2_member(Span) const override { return false; }
  json to_json(Span a) const override { return a[0]; }
  void from_json(const json& j, Storage& out) const override {
    if (!j.is_number_integer()) parse_error("finite group element must be a table index");
    int v = j.get<int>();
    if (v < 0 || v >= n_) parse_error("finite group element index out of range");
    out.assign(1, v);
  }
  std::string format(Span a) const override {
    return a[0] == id_ ? "e" : "#" + std::to_string(a[0]);
  }
  std::optional<std::uint64_t> closed_rank(Span a) const override {
    if (a[0] == id_) return 0;
    return static_cast<std::uint64_t>(a[0] < id_ ? a[0] + 1 : a[0]);
  }

 private:
  std::vector<std::vector<int>> t_;
  int n_;
  int id_;
  std::vector<int> inv_;
};

std::unique_ptr<GroupImpl> make_impl(const GroupSpec& spec);

// Product elements are stored as [len_1, data_1..., len_2, data_2..., ...].
class ProductImpl final : public GroupImpl {
 public:
  explicit ProductImpl(const GroupSpec& spec) {
    if (spec.factors.empty()) parse_error("product needs at least one factor");
    for (const auto& f : spec.factors) factors_.push_back(make_impl(f));
  }

  std::size_t m() const { return factors_.size(); }

  absl::InlinedVector<Span, 4> split(Span a) const {
    absl::InlinedVector<Span, 4> parts;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < m(); ++i) {
      if (pos >= a.size()) throw Error(ErrorCode::kInvalidArgument, "malformed product element");
      auto len = static_cast<std::size_t>(a[pos]);
      if (pos + 1 + len > a.size()) throw Error(ErrorCode::kInvalidArgument, "malformed product element");
      parts.push_back(a.subspan(pos + 1, len));
      pos += 1 + len;
    }
    return parts;
  }

  static void append(Storage& out, const Storage& part) {
    out.push_back(static_cast<std::int32_t>(part.size()));
    out.insert(out.end(), part.begin(), part.end());
  }

  void identity(Storage& out) const override {
    out.clear();
    for (const auto& f : factors_) {
      Storage s;
      f->identity(s);
      append(out, s);
    }
  }

  void multiply(Span a, Span b, Storage& out) const override {
    auto pa = split(a), pb = split(b);
    Storage r;
    for (std::size_t i = 0; i < m(); ++i) {
      Storage s;
      factors_[i]->multiply(pa[i], pb[i], s);
      append(r, s);
    }
    out = std::move(r);
  }

  void inverse(Span a, Storage& out) const override {
    auto pa = split(a);
    Storage r;
    for (std::size_t i = 0; i < m(); ++i) {
      Storage s;
      factors_[i]->inverse(pa[i], s);
      append(r, s);
    }
    out = std::move(r);
  }

  int length(Span a) const override {
    auto pa = split(a);
    int s = 0;
    for (std::size_t i = 0; i < m(); ++i) s += factors_[i]->length(pa[i]);
    return s;
  }

  int compare_same_length(Span a, Span b) const override {
    auto pa = split(a), pb = split(b);
    for (std::size_t i = 0; i < m(); ++i) {
      int c = factors_[i]->compare(pa[i], pb[i]);
      if (c != 0) return c;
    }
    return 0;
  }

  void sphere(int r, std::vector<Storage>& out) const override {
    out.clear();
    std::vector<std::vector<std::vector<Storage>>> cache(m());
    auto factor_sphere = [&](std::size_t i, int ri) -> const std::vector<Storage>& {
      auto& c = cache[i];
      if (static_cast<int>(c.size()) <= ri) c.resize(ri + 1);
      if (c[ri].empty()) factors_[i]->sphere(ri, c[ri]);
      return c[ri];
    };
    std::vector<const Storage*> pick(m());
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i == m() - 1) {
        if (left > factors_[i]->max_radius()) return;
        for (const auto& s : factor_sphere(i, left)) {
          pick[i] = &s;
          Storage e;
          for (std::size_t t = 0; t < m(); ++t) append(e, *pick[t]);
          out.push_back(std::move(e));
        }
        return;
      }
      int top = std::min(left, factors_[i]->max_radius());
      for (int ri = 0; ri <= top; ++ri) {
        for (const auto& s : factor_sphere(i, ri)) {
          pick[i] = &s;
          rec(i + 1, left - ri);
        }
      }
    };
    rec(0, r);
    sort_sphere(out);
  }

  std::uint64_t sphere_size(int r) const override {
    std::vector<std::uint64_t> acc(r + 1, 0);
    acc[0] = 1;
    for (const auto& f : factors_) {
      std::vector<std::uint64_t> next(r + 1, 0);
      for (int s = 0; s <= r; ++s) {
        if (acc[s] == 0) continue;
        for (int t = 0; s + t <= r; ++t) {
          if (t > f->max_radius()) break;
          next[s + t] = sat_add(next[s + t], sat_mul(acc[s], f->sphere_size(t)));
        }
      }
      acc = std::move(next);
    }
    return acc[r];
  }

  int max_radius() const override {
    std::int64_t s = 0;
    for (const auto& f : factors_) s += f->max_radius();
    return static_cast<int>(std::min<std::int64_t>(s, INT32_MAX));
  }

  std::uint64_t order() const override {
    std::uint64_t o = 1;
    for (const auto& f : factors_) {
      if (f->order() == 0) return 0;
      o = sat_mul(o, f->order());
    }
    return o;
  }

  int infinite_generators() const override {
    int s = 0;
    for (const auto& f : factors_) s += f->infinite_generators();
    return s;
  }

  void generator_power(int i, std::int64_t e, Storage& out) const override {
    out.clear();
    for (const auto& f : factors_) {
      Storage s;
      int cnt = f->infinite_generators();
      if (i >= 0 && i < cnt)
        f->generator_power(i, e, s);
      else
        f->identity(s);
      i -= cnt;
      append(out, s);
    }
  }

  bool pow2_member(Span a) const override {
    auto pa = split(a);
    int nontrivial = -1;
    for (std::size_t i = 0; i < m(); ++i) {
      if (factors_[i]->length(pa[i]) != 0) {
        if (nontrivial >= 0) return false;
        nontrivial = static_cast<int>(i);
      }
    }
    return nontrivial >= 0 && factors_[nontrivial]->pow2_member(pa[nontrivial]);
  }

  json to_json(Span a) const override {
    auto pa = split(a);
    json j = json::array();
    for (std::size_t i = 0; i < m(); ++i) j.push_back(factors_[i]->to_json(pa[i]));
    return j;
  }

  void from_json(const json& j, Storage& out) const override {
    if (!j.is_array() || j.size() != m())
      parse_error("product element must be an array with one entry per factor");
    Storage r;
    for (std::size_t i = 0; i < m(); ++i) {
      Storage s;
      factors_[i]->from_json(j[i], s);
      append(r, s);
    }
    out = std::move(r);
  }

  std::string format(Span a) const override {
    auto pa = split(a);
    std::string s = "(";
    for (std::size_t i = 0; i < m(); ++i) {
      if (i) s += ",";
      s += factors_[i]->format(pa[i]);
    }
    return s + ")";
  }

 private:
  std::vector<std::unique_ptr<GroupImpl>> factors_;
};

std::unique_ptr<GroupImpl> make_impl(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::kFreeAbelian:
      if (spec.rank < 1 || spec.rank > 8) parse_error("free_abelian rank must be in [1, 8]");
      return std::make_unique<FreeAbelianImpl>(spec.rank);
    case GroupSpec::Kind::kFree:
      if (spec.rank < 1 || spec.rank > 26) parse_error("free rank must be in [1, 26]");
      return std::make_unique<FreeImpl>(spec.rank);
    case GroupSpec::Kind::kFinite: return std::make_unique<FiniteImpl>(spec.table);
    case GroupSpec::Kind::kProduct: return std::make_unique<ProductImpl>(spec);
  }
  parse_error("unknown group kind");
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// Group

struct Group::State {
  GroupSpec spec;
  std::uint32_t tag = 0;
  std::unique_ptr<detail::GroupImpl> impl;
  std::vector<GroupElement> generators;
  GroupElement identity;
};

Group::Group(const GroupSpec& spec) {
  auto st = std::make_shared<State>();
  st->spec = spec;
  st->impl = detail::make_impl(spec);
  st->tag = fnv1a32(json(spec).dump());
  GroupElement::Storage id;
  st->impl->identity(id);
  st->identity = GroupElement(st->tag, id);
  std::vector<GroupElement::Storage> gens;
  if (st->impl->max_radius() >= 1) st->impl->sphere(1, gens);
  for (auto& g : gens) st->generators.emplace_back(st->tag, std::move(g));
  state_ = std::move(st);
}

const GroupSpec& Group::spec() const { return state_->spec; }
std::uint32_t Group::tag() const { return state_->tag; }
bool Group::is_finite() const { return state_->impl->order() != 0; }
std::uint64_t Group::order() const { return state_->impl->order(); }
GroupElement Group::identity() const { return state_->identity; }

void Group::check(const GroupElement& a) const {
  if (a.tag() != state_->tag)
    throw Error(ErrorCode::kMixedGroup, "element does not belong to this group");
}

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  check(a);
  check(b);
  GroupElement::Storage out;
  state_->impl->multiply(a.data(), b.data(), out);
  return GroupElement(state_->tag, std::move(out));
}

GroupElement Group::inverse(const GroupElement& a) const {
  check(a);
  GroupElement::Storage out;
  state_->impl->inverse(a.data(), out);
  return GroupElement(state_->tag, std::move(out));
}

bool Group::is_identity(const GroupElement& a) const { return a == state_->identity; }

int Group::length(const GroupElement& a) const {
  check(a);
  return state_->impl->length(a.data());
}

void Group::sort_unique(std::vector<GroupElement>& v) const {
  const auto& impl = *state_->impl;
  std::vector<std::pair<int, std::uint32_t>> keys(v.size());
  for (std::uint32_t i = 0; i < v.size(); ++i) {
    check(v[i]);
    keys[i] = {impl.length(v[i].data()), i};
  }
  std::sort(keys.begin(), keys.end(), [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return impl.compare_same_length(v[x.second].data(), v[y.second].data()) < 0;
  });
  std::vector<GroupElement> out;
  out.reserve(v.size());
  for (const auto& k : keys)
    if (out.empty() || !(out.back() == v[k.second])) out.push_back(std::move(v[k.second]));
  v.swap(out);
}

int Group::compare(const GroupElement& a, const GroupElement& b) const {
  check(a);
  check(b);
  return state_->impl->compare(a.data(), b.data());
}

const std::vector<GroupElement>& Group::generators() const { return state_->generators; }

std::vector<GroupElement> Group::sphere(int r) const {
  std::vector<GroupElement> out;
  if (r < 0 || r > state_->impl->max_radius()) return out;
  std::vector<GroupElement::Storage> raw;
  state_->impl->sphere(r, raw);
  out.reserve(raw.size());
  for (auto& s : raw) out.emplace_back(state_->tag, std::move(s));
  return out;
}

std::uint64_t Group::sphere_size(int r) const {
  if (r < 0 || r > state_->impl->max_radius()) return 0;
  return state_->impl->sphere_size(r);
}

std::uint64_t Group::ball_size(int r) const {
  std::uint64_t s = 0;
  for (int i = 0; i <= r && i <= state_->impl->max_radius(); ++i) s = sat_add(s, sphere_size(i));
  return s;
}

int Group::max_radius() const { return state_->impl->max_radius(); }

int Group::infinite_generator_count() const { return state_->impl->infinite_generators(); }

GroupElement Group::generator_power(int i, std::int64_t exponent) const {
  if (i < 0 || i >= infinite_generator_count())
    throw Error(ErrorCode::kInvalidArgument, "generator index out of range");
  GroupElement::Storage out;
  state_->impl->generator_power(i, exponent, out);
  return GroupElement(state_->tag, std::move(out));
}

bool Group::is_generator_power_of_two(const GroupElement& a) const {
  check(a);
  return state_->impl->pow2_member(a.data());
}

std::uint64_t Group::rank(const GroupElement& a, std::uint64_t cap) const {
  check(a);
  if (auto r = state_->impl->closed_rank(a.data())) return *r;
  const int len = length(a);
  std::uint64_t base = ball_size(len - 1);
  if (sat_add(base, sphere_size(len)) > cap)
    throw Error(ErrorCode::kBudgetExceeded,
                "rank of " + format(a) + " needs enumeration past the cap of " + std::to_string(cap));
  auto sph = sphere(len);
  auto it = std::lower_bound(sph.begin(), sph.end(), a, ordering());
  return base + static_cast<std::uint64_t>(it - sph.begin());
}

json Group::to_json(const GroupElement& a) const {
  check(a);
  return state_->impl->to_json(a.data());
}

GroupElement Group::from_json(const json& j) const {
  GroupElement::Storage out;
  state_->impl->from_json(j, out);
  return GroupElement(state_->tag, std::move(out));
}

std::string Group::format(const GroupElement& a) const {
  check(a);
  return state_->impl->format(a.data());
}

// ---------------------------------------------------------------------------

EnumerationCursor::EnumerationCursor(Group group) : group_(std::move(group)) {}

std::optional<GroupElement> EnumerationCursor::next() {
  while (pos_ >= sphere_.size()) {
    if (radius_ >= group_.max_radius()) return std::nullopt;
    ++radius_;
    sphere_ = group_.sphere(radius_);
    pos_ = 0;
  }
  ++index_;
  return sphere_[pos_++];
}

}  // namespace symdyn
