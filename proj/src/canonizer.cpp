#include "canonizer.hpp"

#include <algorithm>
#include <numeric>

namespace rgcost::detail {
namespace {

constexpr int kNoJump = -1;

void put_u32(std::string& s, std::uint32_t x) {
  // Big-endian so that byte order agrees with numeric order.
  s.push_back(static_cast<char>((x >> 24) & 0xff));
  s.push_back(static_cast<char>((x >> 16) & 0xff));
  s.push_back(static_cast<char>((x >> 8) & 0xff));
  s.push_back(static_cast<char>(x & 0xff));
}

class Canonizer {
 public:
  explicit Canonizer(const DecoratedGraph& g) : g_(g), n_(g.keys.size()) {
    offsets_.assign(n_ + 1, 0);
    for (const auto& a : g.arcs) ++offsets_[a.from + 1];
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    out_.resize(g.arcs.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& a : g.arcs) out_[fill[a.from]++] = a;
    sig_.resize(n_);
    order_.resize(n_);
  }

  Canonization run() {
    std::vector<std::uint32_t> cell(n_);
    std::vector<std::size_t> idx(n_);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return g_.keys[a] < g_.keys[b]; });
    std::uint32_t id = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i > 0 && g_.keys[idx[i]] != g_.keys[idx[i - 1]]) ++id;
      cell[idx[i]] = id;
    }
    refine(cell);
    std::vector<std::uint32_t> path;
    explore(cell, path);
    if (n_ == 0) best_code_ = encode({});
    return {best_code_, best_lab_};
  }

 private:
  // Stable refinement: new cell ids are ranks of (old cell, neighbor multiset).
  void refine(std::vector<std::uint32_t>& cell) {
    std::size_t cells = count_cells(cell);
    while (true) {
      for (std::size_t v = 0; v < n_; ++v) {
        auto& s = sig_[v];
        s.clear();
        s.push_back(cell[v]);
        for (std::size_t j = offsets_[v]; j < offsets_[v + 1]; ++j) {
          s.push_back((static_cast<std::uint64_t>(out_[j].kind) << 32) | cell[out_[j].to]);
        }
        std::sort(s.begin() + 1, s.end());
      }
      std::iota(order_.begin(), order_.end(), 0);
      std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return sig_[a] < sig_[b]; });
      std::uint32_t id = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0 && sig_[order_[i]] != sig_[order_[i - 1]]) ++id;
        cell[order_[i]] = id;
      }
      std::size_t now = n_ == 0 ? 0 : id + 1;
      if (now == cells) return;
      cells = now;
    }
  }

  static std::size_t count_cells(const std::vector<std::uint32_t>& cell) {
    if (cell.empty()) return 0;
    return *std::max_element(cell.begin(), cell.end()) + 1;
  }

  std::string encode(const std::vector<std::uint32_t>& lab) const {
    std::string s;
    s.reserve(16 + n_ * 8 + g_.arcs.size() * 12);
    for (auto h : g_.header) put_u32(s, h);
    put_u32(s, static_cast<std::uint32_t>(n_));
    std::vector<std::size_t> inv(n_);
    for (std::size_t v = 0; v < n_; ++v) inv[lab[v]] = v;
    for (std::size_t p = 0; p < n_; ++p) {
      put_u32(s, g_.keys[inv[p]][0]);
      put_u32(s, g_.keys[inv[p]][1]);
    }
    std::vector<std::array<std::uint32_t, 3>> arcs;
    arcs.reserve(g_.arcs.size());
    for (const auto& a : g_.arcs) arcs.push_back({lab[a.from], lab[a.to], a.kind});
    std::sort(arcs.begin(), arcs.end());
    put_u32(s, static_cast<std::uint32_t>(arcs.size()));
    for (const auto& a : arcs) {
      put_u32(s, a[0]);
      put_u32(s, a[1]);
      put_u32(s, a[2]);
    }
    return s;
  }

  // Orbits of the subgroup generated by known automorphisms fixing `path`.
  std::vector<std::size_t> stabilizer_orbits(const std::vector<std::uint32_t>& path) const {
    std::vector<std::size_t> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& gamma : automorphisms_) {
      bool fixes = std::all_of(path.begin(), path.end(), [&](std::uint32_t v) { return gamma[v] == v; });
      if (!fixes) continue;
      for (std::size_t v = 0; v < n_; ++v) {
        auto a = find(v), b = find(gamma[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    for (std::size_t v = 0; v < n_; ++v) parent[v] = find(v);
    return parent;
  }

  void record_automorphism(const std::vector<std::uint32_t>& ref, const std::vector<std::uint32_t>& lab) {
    std::vector<std::uint32_t> inv(n_);
    for (std::size_t v = 0; v < n_; ++v) inv[ref[v]] = static_cast<std::uint32_t>(v);
    std::vector<std::uint32_t> gamma(n_);
    for (std::size_t v = 0; v < n_; ++v) gamma[v] = inv[lab[v]];
    automorphisms_.push_back(std::move(gamma));
  }

  int explore(const std::vector<std::uint32_t>& cell, std::vector<std::uint32_t>& path) {
    const int depth = static_cast<int>(path.size());
    std::vector<std::size_t> size(n_ + 1, 0);
    for (auto c : cell) ++size[c];
    std::uint32_t target = 0;
    while (target < n_ && size[target] <= 1) ++target;

    if (target >= n_) {
      std::string code = encode(cell);
      if (!have_first_) {
        have_first_ = true;
        first_code_ = best_code_ = code;
        first_lab_ = best_lab_ = cell;
        first_path_ = path;
        return kNoJump;
      }
      if (code == first_code_) {
        record_automorphism(first_lab_, cell);
        int common = 0;
        while (common < depth && path[common] == first_path_[common]) ++common;
        return common;
      }
      if (code < best_code_) {
        best_code_ = std::move(code);
        best_lab_ = cell;
      } else if (code == best_code_) {
        record_automorphism(best_lab_, cell);
      }
      return kNoJump;
    }

    std::vector<std::uint32_t> members;
    for (std::size_t v = 0; v < n_; ++v) {
      if (cell[v] == target) members.push_back(static_cast<std::uint32_t>(v));
    }
    std::vector<std::uint32_t> explored;
    for (std::uint32_t v : members) {
      if (!explored.empty()) {
        auto orbit = stabilizer_orbits(path);
        bool redundant = std::any_of(explored.begin(), explored.end(),
                                     [&](std::uint32_t w) { return orbit[w] == orbit[v]; });
        if (redundant) continue;
      }
      explored.push_back(v);

      std::vector<std::uint32_t> child(n_);
      for (std::size_t x = 0; x < n_; ++x) {
        std::uint32_t c = cell[x];
        if (c < target) child[x] = c;
        else if (c == target) child[x] = (x == v) ? target : target + 1;
        else child[x] = c + 1;
      }
      refine(child);
      path.push_back(v);
      int jump = explore(child, path);
      path.pop_back();
      if (jump != kNoJump && jump < depth) return jump;
    }
    return kNoJump;
  }

  const DecoratedGraph& g_;
  std::size_t n_;
  std::vector<std::size_t> offsets_;
  std::vector<DecoratedArc> out_;
  std::vector<std::vector<std::uint64_t>> sig_;
  std::vector<std::size_t> order_;

  bool have_first_ = false;
  std::string first_code_, best_code_;
  std::vector<std::uint32_t> first_lab_, best_lab_, first_path_;
  std::vector<std::vector<std::uint32_t>> automorphisms_;
};

}  // namespace

Canonization canonize(const DecoratedGraph& g) { return Canonizer(g).run(); }

}  // namespace rgcost::detail
