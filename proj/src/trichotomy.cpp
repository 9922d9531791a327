#include "rgcost/trichotomy.hpp"

#include <algorithm>
#include <cmath>

#include "rgcost/error.hpp"

namespace rgcost {

int choose_k(std::size_t s_size, double c) {
  if (!(c > 0) || !std::isfinite(c)) throw InputError("c must be a positive number");
  // (3|S|/2 + 1)/k <= c/2  <=>  3|S| + 2 <= c k.
  const double need = 3.0 * static_cast<double>(s_size) + 2.0;
  auto ok = [&](double k) { return need <= c * k * (1 + 1e-12); };
  double k = std::max(1.0, std::ceil(need / c));
  while (k > 1 && ok(k - 1)) k -= 1;
  while (!ok(k)) k += 1;
  if (k > 1e9) throw InputError("c is too small for a usable block count");
  return static_cast<int>(k);
}

namespace {

Rational whole(long long v) { return Rational::make(v, 1); }

// c to nine decimals, for the hypotheses that compare against it.
Rational approx(double c) { return Rational::make(std::llround(c * 1e9), 1000000000LL); }

BoundCheck check(std::string name, Rational lhs, Rational rhs, bool strict = false) {
  BoundCheck b{std::move(name), lhs, rhs, strict, strict ? lhs < rhs : lhs <= rhs};
  return b;
}

nlohmann::json check_json(const BoundCheck& b) {
  return {{"name", b.name},
          {"lhs", b.lhs.str()},
          {"rhs", b.rhs.str()},
          {"lhs_value", b.lhs.value()},
          {"rhs_value", b.rhs.value()},
          {"relation", b.strict ? "<" : "<="},
          {"holds", b.holds}};
}

}  // namespace

std::vector<std::size_t> AmalgamCertificate::block_generators(std::size_t block) const {
  std::vector<std::size_t> out = y;
  out.insert(out.end(), x.at(block).begin(), x.at(block).end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool AmalgamCertificate::verified() const {
  if (!covers || !boundary_in_y || !amalgam_structure) return false;
  return std::all_of(chain.begin(), chain.end(), [](const BoundCheck& b) { return b.holds; });
}

nlohmann::json AmalgamCertificate::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : boundary) edges.push_back({e.coset, e.gen});
  nlohmann::json chain_json = nlohmann::json::array(), hyp_json = nlohmann::json::array();
  for (const auto& b : chain) chain_json.push_back(check_json(b));
  for (const auto& b : hypotheses) hyp_json.push_back(check_json(b));
  nlohmann::json h = nlohmann::json::array();
  for (std::size_t i = 0; i < x.size(); ++i) h.push_back(block_generators(i));
  return {{"k", k},
          {"index", index},
          {"s_size", s_size},
          {"M", relator_mass},
          {"boundary", edges},
          {"boundary_count", boundary.size()},
          {"Y", y},
          {"Y_count", y.size()},
          {"L_amal_generators", y},
          {"X", x},
          {"H_generators", h},
          {"block_sizes", block_sizes},
          {"heavy_block", heavy_block},
          {"X_heavy_count", x.empty() ? 0 : x[heavy_block].size()},
          {"d_bound", d_bound},
          {"quotient_bound", quotient_bound.str()},
          {"quotient_bound_value", quotient_bound.value()},
          {"covers", covers},
          {"boundary_in_y", boundary_in_y},
          {"amalgam_structure", amalgam_structure},
          {"verified", verified()},
          {"bound_chain", chain_json},
          {"hypotheses", hyp_json}};
}

AmalgamCertificate amalgam_certificate(const SchreierGraph& sch, const SchreierPresentation& sp, const Partition& part,
                                       std::optional<double> c) {
  const std::size_t n = sch.coset_count(), s = sch.generator_count();
  if (sp.index != n || sp.base_generators != s || part.block_of.size() != n ||
      sp.generator_of.size() != n * s || sp.generator_target.size() != sp.generators.size()) {
    throw InputError("presentation, partition and Schreier graph disagree on size");
  }
  if (part.k < 1) throw InputError("partition has no blocks");
  for (std::size_t g = 0; g < sp.generators.size(); ++g) {
    const auto& e = sp.generators[g];
    if (e.coset >= n || e.gen < 0 || static_cast<std::size_t>(e.gen) >= s ||
        sch.act(e.coset, 2 * e.gen) != sp.generator_target[g]) {
      throw InputError("presentation was built from a different Schreier graph");
    }
  }
  for (int b : part.block_of) {
    if (b < 0 || b >= part.k) throw InputError("partition block index out of range");
  }

  AmalgamCertificate cert;
  cert.k = part.k;
  cert.index = n;
  cert.s_size = s;
  cert.relator_mass = sp.relator_mass;
  const auto& block = part.block_of;
  auto crosses = [&](const SchreierEdge& e) { return block[e.coset] != block[sch.act(e.coset, 2 * e.gen)]; };

  const std::size_t gens = sp.generator_count();
  std::vector<char> in_y(gens, 0);
  for (Vertex x = 0; x < n; ++x) {
    for (std::size_t g = 0; g < s; ++g) {
      SchreierEdge e{x, static_cast<int>(g)};
      if (!crosses(e)) continue;
      cert.boundary.push_back(e);
      int id = sp.generator_of[x * s + g];
      if (id >= 0) in_y[id] = 1;
    }
  }
  std::vector<char> touches(sp.relators.size(), 0);
  for (std::size_t t = 0; t < sp.relators.size(); ++t) {
    const auto& trace = sp.edge_trace[t];
    touches[t] = std::any_of(trace.begin(), trace.end(), crosses);
    if (touches[t]) {
      for (int l : sp.relators[t]) in_y[l >> 1] = 1;
    }
  }

  cert.x.assign(part.k, {});
  cert.block_sizes.assign(part.k, 0);
  for (int b : block) ++cert.block_sizes[b];
  for (std::size_t g = 0; g < gens; ++g) {
    if (in_y[g]) cert.y.push_back(g);
    const auto& e = sp.generators[g];
    int b = block[e.coset];
    if (b == block[sp.generator_target[g]]) cert.x[b].push_back(g);
  }

  cert.covers = true;
  for (std::size_t g = 0; g < gens; ++g) {
    bool in_x = block[sp.generators[g].coset] == block[sp.generator_target[g]];
    cert.covers = cert.covers && (in_y[g] || in_x);
  }
  cert.boundary_in_y = true;
  for (const auto& e : cert.boundary) {
    int id = sp.generator_of[e.coset * s + e.gen];
    if (id >= 0) cert.boundary_in_y = cert.boundary_in_y && in_y[id];
  }

  // Each lift either touches the boundary, and then only uses Y, or stays
  // inside one block and only uses that block's X.
  cert.amalgam_structure = true;
  for (std::size_t t = 0; t < sp.relators.size() && cert.amalgam_structure; ++t) {
    const auto& word = sp.relators[t];
    if (touches[t]) {
      cert.amalgam_structure = std::all_of(word.begin(), word.end(), [&](int l) { return in_y[l >> 1] != 0; });
      continue;
    }
    const auto& trace = sp.edge_trace[t];
    if (trace.empty()) continue;
    const int b = block[trace.front().coset];
    for (const auto& e : trace) {
      if (block[e.coset] != b || block[sch.act(e.coset, 2 * e.gen)] != b) cert.amalgam_structure = false;
    }
    for (int l : word) {
      const std::size_t g = l >> 1;
      if (block[sp.generators[g].coset] != b || block[sp.generator_target[g]] != b) cert.amalgam_structure = false;
    }
  }

  for (int b = 1; b < part.k; ++b) {
    if (cert.x[b].size() > cert.x[cert.heavy_block].size()) cert.heavy_block = b;
  }
  const long long nn = static_cast<long long>(n), kk = part.k, ss = static_cast<long long>(s);
  const long long mm = static_cast<long long>(sp.relator_mass);
  const long long dcount = static_cast<long long>(cert.boundary.size());
  const long long ycount = static_cast<long long>(cert.y.size());
  const long long xheavy = static_cast<long long>(cert.x[cert.heavy_block].size());
  const long long aheavy = static_cast<long long>(cert.block_sizes[cert.heavy_block]);
  const long long ybound = dcount * (1 + mm * mm);
  cert.d_bound = static_cast<std::size_t>(xheavy + ycount + kk - 1);
  cert.quotient_bound = Rational::make(static_cast<long long>(cert.d_bound) - 1, nn);

  cert.chain.push_back(check("|Y| <= |boundary| (1 + M^2)", whole(ycount), whole(ybound)));
  cert.chain.push_back(check("|X_heavy| <= |S| |A_heavy|", whole(xheavy), whole(ss * aheavy)));
  cert.chain.push_back(check("d_bound = |X_heavy| + |Y| + k - 1 <= |S| |A_heavy| + |boundary| (1 + M^2) + k - 1",
                             whole(xheavy + ycount + kk - 1), whole(ss * aheavy + ybound + kk - 1)));
  cert.chain.push_back(check("(d_bound - 1) / index <= (|S| |A_heavy| + |boundary| (1 + M^2) + k - 2) / index",
                             cert.quotient_bound, Rational::make(ss * aheavy + ybound + kk - 2, nn)));

  std::size_t lo = *std::min_element(cert.block_sizes.begin(), cert.block_sizes.end());
  std::size_t hi = *std::max_element(cert.block_sizes.begin(), cert.block_sizes.end());
  cert.hypotheses.push_back(check("index / (2k) < min |A_i|", Rational::make(nn, 2 * kk), whole(lo), true));
  cert.hypotheses.push_back(check("max |A_i| < 3 index / (2k)", whole(hi), Rational::make(3 * nn, 2 * kk), true));
  cert.hypotheses.push_back(
      check("|boundary| (1 + M^2) < index / k", whole(ybound), Rational::make(nn, kk), true));
  if (c) {
    Rational half_c = approx(*c / 2);
    cert.hypotheses.push_back(check("(3|S|/2 + 1) / k <= c / 2", Rational::make(3 * ss + 2, 2 * kk), half_c));
    cert.hypotheses.push_back(check("(k - 1) / index <= c / 2", Rational::make(kk - 1, nn), half_c));
    cert.hypotheses.push_back(check("(d_bound - 1) / index <= c", cert.quotient_bound, approx(*c)));
  }
  return cert;
}

nlohmann::json TrichotomyRow::to_json() const {
  nlohmann::json j = {{"index", index},
                      {"rank",
                       {{"d_lower", rank.d_lower},
                        {"d_upper", rank.d_upper},
                        {"r_lower", rank.r_lower.str()},
                        {"r_upper", rank.r_upper.str()},
                        {"method", rank.method}}},
                      {"spectral", rgcost::to_json(spectral)},
                      {"k", k},
                      {"epsilon", epsilon},
                      {"sizes_ok", sizes_ok},
                      {"boundary_ok", boundary_ok},
                      {"index_ok", index_ok},
                      {"branch", branch},
                      {"inference", inference}};
  j["partition"] = partition ? rgcost::to_json(*partition) : nlohmann::json(nullptr);
  j["certificate"] = certificate ? certificate->to_json() : nlohmann::json(nullptr);
  return j;
}

std::vector<TrichotomyRow> trichotomy_report(const Presentation& p, const std::vector<SchreierGraph>& graphs,
                                             const std::vector<std::vector<Word>>& candidates, double c,
                                             const TrichotomyOptions& opts) {
  const int k = choose_k(p.generator_count(), c);
  const long long mm = static_cast<long long>(p.total_relator_length());
  std::vector<TrichotomyRow> rows(graphs.size());
  parallel_for(graphs.size(), opts.threads, [&](std::size_t i) {
    const SchreierGraph& sch = graphs[i];
    std::vector<std::vector<Word>> cand;
    if (i < candidates.size()) cand.push_back(candidates[i]);
    TrichotomyRow row;
    row.rank = rank_gradient_table(p, {sch}, cand, opts.tietze_budget).front();
    row.index = sch.coset_count();
    row.spectral = spectral_gap(sch.to_graph());
    row.k = k;
    row.epsilon = 0.5 / k;
    const long long n = static_cast<long long>(row.index);

    if (static_cast<std::size_t>(k) <= row.index) {
      row.partition = balanced_partition(sch.to_steps(), k, row.epsilon, opts.partition);
      const Partition& part = row.partition->partition;
      row.sizes_ok = std::all_of(part.blocks.begin(), part.blocks.end(), [&](const auto& b) {
        const long long a = static_cast<long long>(b.size());
        return n < 2LL * k * a && 2LL * k * a < 3 * n;
      });
      long long cut = 0;
      for (Vertex x = 0; x < row.index; ++x) {
        for (std::size_t g = 0; g < sch.generator_count(); ++g) cut += part.block_of[x] != part.block_of[sch.act(x, 2 * g)];
      }
      row.boundary_ok = cut * (1 + mm * mm) * k < n;
    }
    row.index_ok = static_cast<double>(k - 1) <= c * static_cast<double>(n) / 2;

    const double lower = row.rank.r_lower.value(), upper = row.rank.r_upper.value();
    if (upper <= c) {
      row.branch = "2";
      row.inference = "rank quotient at most c on this graph; consistent with vanishing rank gradient";
    } else if (lower > c && row.sizes_ok && row.boundary_ok && row.index_ok) {
      row.certificate = amalgam_certificate(sch, reidemeister_schreier(sch, p), row.partition->partition, c);
      row.branch = "3";
      row.inference =
          "partition conditions hold and the rank quotient exceeds c; if L_amal had index at most 3 in all but one "
          "H_i, H would need at most d_bound generators and the quotient would be at most " +
          row.certificate->quotient_bound.str() +
          ", so L_amal has index at least 3 in two blocks and H splits as an amalgam of the H_i over L_amal "
          "(index nontriviality not computed)";
    } else if (lower > c) {
      row.branch = "1";
      row.inference = "rank quotient exceeds c and the best partition fails the conditions (" +
                      std::string(row.partition ? row.partition->verdict.status : "index below k") +
                      ", spectral gap " + std::to_string(row.spectral.gap) + "); evidence of a non-dispersive sequence";
    } else {
      row.branch = "undetermined";
      row.inference = "rank quotient bounds straddle c";
    }
    rows[i] = std::move(row);
  });
  return rows;
}

}  // namespace rgcost
