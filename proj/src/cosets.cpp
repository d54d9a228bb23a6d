#include "symdyn/cosets.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr std::uint64_t kMaxIndex = 1'000'000;

[[noreturn]] void malformed(const std::string& msg) { throw Error(ErrorCode::kMalformedSubgroup, msg); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Row echelon form over Z: row i has its pivot in column i.
std::vector<std::vector<std::int64_t>> triangular_basis(std::vector<std::vector<std::int64_t>> rows, int d) {
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != d) malformed("lattice rows must have length " + std::to_string(d));
  std::size_t top = 0;
  for (int col = 0; col < d; ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
          best = i;
      if (best == rows.size()) malformed("lattice does not have full rank (infinite index)");
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        std::int64_t q = rows[i][col] / rows[top][col];
        for (int c = 0; c < d; ++c) {
          rows[i][c] -= q * rows[top][c];
          if (std::llabs(rows[i][c]) > (std::int64_t{1} << 40)) malformed("lattice entries overflow");
        }
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] < 0)
      for (auto& v : rows[top]) v = -v;
    ++top;
  }
  rows.resize(static_cast<std::size_t>(d));
  return rows;
}

}  // namespace

FiniteIndexData FiniteIndexData::lattice(const Group& G, std::vector<std::vector<std::int64_t>> rows) {
  if (G.spec().kind != GroupSpec::Kind::kFreeAbelian)
    malformed("lattice subgroup data requires a free abelian group");
  const int d = G.spec().rank;
  if (rows.empty()) malformed("lattice needs at least one row");
  FiniteIndexData H(G);
  H.kind_ = Kind::kLattice;
  H.input_rows_ = rows;
  H.basis_ = triangular_basis(std::move(rows), d);
  std::uint64_t idx = 1;
  for (int i = 0; i < d; ++i) {
    idx *= static_cast<std::uint64_t>(H.basis_[i][i]);
    if (idx > kMaxIndex) malformed("subgroup index too large");
  }
  H.index_ = idx;
  std::vector<GroupElement> reps;
  GroupElement::Storage cur(d, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == d) {
      reps.emplace_back(G.tag(), cur);
      return;
    }
    for (std::int64_t v = 0; v < H.basis_[i][i]; ++v) {
      cur[i] = static_cast<std::int32_t>(v);
      rec(i + 1);
    }
    cur[i] = 0;
  };
  rec(0);
  std::sort(reps.begin(), reps.end(), G.ordering());
  H.reps_ = std::move(reps);
  return H;
}

FiniteIndexData FiniteIndexData::homomorphism(const Group& G, const GroupSpec& target, std::vector<int> images) {
  if (target.kind != GroupSpec::Kind::kFinite) malformed("homomorphism target must be a finite group");
  FiniteIndexData H(G);
  H.kind_ = Kind::kHomomorphism;
  H.target_.emplace(target);
  const auto& tt = target.table;
  const int n = static_cast<int>(tt.size());
  for (int v : images)
    if (v < 0 || v >= n) malformed("homomorphism image index out of range");
  const auto& spec = G.spec();
  switch (spec.kind) {
    case GroupSpec::Kind::kFreeAbelian:
      if (static_cast<int>(images.size()) != spec.rank) malformed("need one image per generator");
      for (int a : images)
        for (int b : images)
          if (tt[a][b] != tt[b][a]) malformed("images of free abelian generators must commute");
      break;
    case GroupSpec::Kind::kFree:
      if (static_cast<int>(images.size()) != spec.rank) malformed("need one image per generator");
      break;
    case GroupSpec::Kind::kFinite: {
      const int m = static_cast<int>(spec.table.size());
      if (static_cast<int>(images.size()) != m) malformed("need one image per group element");
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          if (images[spec.table[a][b]] != tt[images[a]][images[b]]) malformed("map is not a homomorphism");
      break;
    }
    case GroupSpec::Kind::kProduct: malformed("homomorphisms from product groups are not supported");
  }
  H.images_ = std::move(images);

  // The index is the size of the image; the representative of a coset is the
  // first element of the enumeration with that image.
  std::vector<char> in_image(n, 0);
  const GroupElement tid = H.target_->identity();
  std::vector<int> frontier{tid.data()[0]};
  in_image[frontier[0]] = 1;
  while (!frontier.empty()) {
    int x = frontier.back();
    frontier.pop_back();
    for (int g : H.images_) {
      int y = tt[x][g];
      if (!in_image[y]) {
        in_image[y] = 1;
        frontier.push_back(y);
      }
    }
  }
  const auto image_size = static_cast<std::uint64_t>(std::count(in_image.begin(), in_image.end(), 1));
  H.index_ = image_size;
  H.image_to_rep_.assign(n, -1);
  EnumerationCursor cur(G);
  std::uint64_t found = 0;
  while (found < image_size) {
    auto g = cur.next();
    if (!g) malformed("enumeration ended before all cosets were found");
    int im = H.image(*g);
    if (H.image_to_rep_[im] < 0) {
      H.image_to_rep_[im] = static_cast<int>(H.reps_.size());
      H.reps_.push_back(*g);
      ++found;
    }
  }
  return H;
}

int FiniteIndexData::image(const GroupElement& g) const {
  group_.check(g);
  const auto& tt = target_->spec().table;
  const int tid = target_->identity().data()[0];
  const auto& spec = group_.spec();
  auto data = g.data();
  switch (spec.kind) {
    case GroupSpec::Kind::kFreeAbelian: {
      int acc = tid;
      for (int i = 0; i < spec.rank; ++i) {
        int base = images_[i];
        // order of the image element
        int ord = 1;
        for (int y = base; y != tid; y = tt[y][base]) ++ord;
        std::int64_t e = ((std::int64_t{data[i]} % ord) + ord) % ord;
        for (std::int64_t t = 0; t < e; ++t) acc = tt[acc][base];
      }
      return acc;
    }
    case GroupSpec::Kind::kFree: {
      const int k = spec.rank;
      int acc = tid;
      for (auto c : data) {
        int base = images_[c < k ? c : c - k];
        if (c >= k) {
          int inv = tid;
          for (int y = 0; y < static_cast<int>(tt.size()); ++y)
            if (tt[base][y] == tid) inv = y;
          base = inv;
        }
        acc = tt[acc][base];
      }
      return acc;
    }
    case GroupSpec::Kind::kFinite: return images_[data[0]];
    case GroupSpec::Kind::kProduct: break;
  }
  malformed("unsupported group for homomorphism");
}

GroupElement FiniteIndexData::representative(const GroupElement& g) const {
  group_.check(g);
  if (kind_ == Kind::kLattice) {
    const int d = static_cast<int>(basis_.size());
    std::vector<std::int64_t> x(g.data().begin(), g.data().end());
    for (int i = 0; i < d; ++i) {
      std::int64_t q = floor_div(x[i], basis_[i][i]);
      if (q != 0)
        for (int c = 0; c < d; ++c) x[c] -= q * basis_[i][c];
    }
    GroupElement::Storage s(x.begin(), x.end());
    return GroupElement(group_.tag(), std::move(s));
  }
  return reps_[image_to_rep_[image(g)]];
}

bool FiniteIndexData::same_coset(const GroupElement& a, const GroupElement& b) const {
  return representative(a) == representative(b);
}

int FiniteIndexData::max_representative_length() const {
  int r = 0;
  for (const auto& g : reps_) r = std::max(r, group_.length(g));
  return r;
}

json FiniteIndexData::to_json() const {
  if (kind_ == Kind::kLattice) return json{{"kind", "lattice"}, {"basis", input_rows_}};
  return json{{"kind", "homomorphism"}, {"target", target_->spec()}, {"images", images_}};
}

FiniteIndexData FiniteIndexData::from_json(const Group& G, const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorCode::kParse, "subgroup data needs \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "lattice") return lattice(G, j.at("basis").get<std::vector<std::vector<std::int64_t>>>());
    if (kind == "homomorphism")
      return homomorphism(G, j.at("target").get<GroupSpec>(), j.at("images").get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("subgroup data: ") + e.what());
  }
  throw Error(ErrorCode::kParse, "unknown subgroup kind \"" + kind + "\"");
}

GroupElement coset_representative(const FiniteIndexData& H, const GroupElement& g) {
  return H.representative(g);
}

}  // namespace symdyn
