#include "analyses.hpp"

#include <algorithm>
#include <filesystem>

#include "io.hpp"
#include "rgcost/error.hpp"
#include "rgcost/local_stats.hpp"
#include "rgcost/partition.hpp"
#include "rgcost/rewiring.hpp"
#include "rgcost/trichotomy.hpp"

namespace rgcost::cli {

void Inputs::add_schreier(const SchreierGraph& s, const std::string& name) {
  schreier.push_back(s);
  graphs.push_back(s.to_graph());
  names.push_back(name);
}

namespace {

bool is_schreier_file(const std::string& path) {
  return path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

// Adds the file name to input errors raised while reading it.
template <class F>
auto in_file(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.message(), e.line());
  }
}

std::string family_label(const std::string& family, const std::vector<long long>& params, std::size_t slot) {
  const std::size_t offset = family == "Fk-random" || family == "cyclic" ? 1 : 0;
  const std::size_t at = slot + offset;
  return family + ":" + (at < params.size() ? std::to_string(params[at]) : std::to_string(slot));
}

}  // namespace

std::vector<std::string> InputSpec::files() const {
  std::vector<std::string> out;
  for (const auto& g : graphs) {
    if (std::filesystem::exists(g)) out.push_back(g);
  }
  if (!presentation.empty()) out.push_back(presentation);
  out.insert(out.end(), subgroups.begin(), subgroups.end());
  return out;
}

Inputs load_inputs(const InputSpec& spec) {
  Inputs in;
  if (!spec.family.empty()) {
    auto f = builtin_family(spec.family, spec.family_params, spec.seed);
    in.presentation = f.presentation;
    in.candidates = f.candidates;
    in.cayley = f.cayley;
    for (std::size_t i = 0; i < f.graphs.size(); ++i) in.add_schreier(f.graphs[i], family_label(spec.family, spec.family_params, i));
  }
  if (!spec.presentation.empty()) {
    if (in.presentation) throw InputError("give either a family or a presentation, not both");
    in.presentation = in_file(spec.presentation, [&] { return read_presentation_file(spec.presentation); });
  }
  for (const auto& g : spec.graphs) {
    if (is_schreier_file(g)) {
      in.add_schreier(in_file(g, [&] { return load_schreier(g); }), g);
    } else {
      if (!in.schreier.empty()) throw InputError("cannot mix Schreier graphs and plain graphs");
      in.graphs.push_back(load_graph(g));
      in.names.push_back(g);
    }
  }
  if (!in.schreier.empty() && in.graphs.size() != in.schreier.size()) {
    throw InputError("cannot mix Schreier graphs and plain graphs");
  }
  if (!spec.subgroups.empty()) {
    if (!in.presentation) throw InputError("subgroup files need a presentation");
    in.candidates.clear();
    for (const auto& s : spec.subgroups) {
      in.candidates.push_back(in_file(s, [&] { return parse_subgroup(read_file(s), in.presentation->generators); }));
    }
  }
  if (in.presentation) {
    for (const auto& sch : in.schreier) {
      if (sch.generators() != in.presentation->generators) {
        throw InputError("Schreier graph generators differ from the presentation's");
      }
    }
  }
  return in;
}

nlohmann::json Params::to_json() const {
  nlohmann::json j = {{"r", r},         {"k", k},         {"L", L},
                      {"eps", eps},     {"c", c},         {"max_cosets", max_cosets},
                      {"tietze_budget", tietze_budget}, {"seed", seed}, {"words", words}};
  j["budget"] = budget ? nlohmann::json(*budget) : nlohmann::json(nullptr);
  j["radius"] = radius ? nlohmann::json(*radius) : nlohmann::json(nullptr);
  return j;
}

std::string Table::csv() const {
  std::string out = csv_join(columns);
  for (const auto& r : rows) out += csv_join(r);
  return out;
}

const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> names{"stats",    "bsdist",   "lgdist",    "rewire",
                                              "ccost",    "transfer", "enumerate", "rankgrad",
                                              "farber",   "partition", "trichotomy", "spectral"};
  return names;
}

namespace {

std::string yes(bool b) { return b ? "true" : "false"; }
std::string str(std::size_t v) { return std::to_string(v); }

void need_graphs(const Inputs& in, std::size_t count, const std::string& what) {
  if (in.graphs.size() < count) {
    throw InputError(what + " needs at least " + std::to_string(count) + " graph" + (count > 1 ? "s" : ""));
  }
}

const Presentation& need_presentation(const Inputs& in, const std::string& what) {
  if (!in.presentation) throw InputError(what + " needs a presentation");
  if (in.schreier.empty()) throw InputError(what + " needs Schreier graphs");
  return *in.presentation;
}

StepStructure steps_of(const Inputs& in, std::size_t i) {
  return i < in.schreier.size() ? in.schreier[i].to_steps() : StepStructure::from_graph(in.graphs[i]);
}

AnnealOptions anneal(const Params& p, std::size_t slot) {
  AnnealOptions o;
  if (p.budget) o.budget = *p.budget;
  o.seed = derive_seed(p.seed, slot);
  return o;
}

Table stats(const Inputs& in, const Params& p) {
  need_graphs(in, 1, "stats");
  Table t{{"graph", "n", "r", "types", "max_p"}, {}, nlohmann::json::array()};
  for (std::size_t i = 0; i < in.graphs.size(); ++i) {
    auto d = neighborhood_distribution(in.graphs[i], p.r);
    double top = 0;
    for (const auto& [code, w] : d.weights) top = std::max(top, w);
    t.rows.push_back({in.names[i], str(in.graphs[i].vertex_count()), std::to_string(p.r), str(d.weights.size()), num(top)});
    auto j = to_json(d);
    j["graph"] = in.names[i];
    t.json.push_back(j);
  }
  return t;
}

Table bsdist(const Inputs& in, const Params& p) {
  need_graphs(in, 2, "bsdist");
  Table t{{"first", "second", "r", "tv"}, {}, nlohmann::json::array()};
  for (std::size_t i = 0; i + 1 < in.graphs.size(); ++i) {
    nlohmann::json per = nlohmann::json::array();
    for (int r = 0; r <= p.r; ++r) {
      double tv = tv_distance(neighborhood_distribution(in.graphs[i], r), neighborhood_distribution(in.graphs[i + 1], r));
      t.rows.push_back({in.names[i], in.names[i + 1], std::to_string(r), num(tv)});
      per.push_back(tv);
    }
    t.json.push_back({{"first", in.names[i]},
                      {"second", in.names[i + 1]},
                      {"tv_by_radius", per},
                      {"bs_distance", bs_distance(in.graphs[i], in.graphs[i + 1], p.r)}});
  }
  return t;
}

Table lgdist(const Inputs& in, const Params& p) {
  need_graphs(in, 2, "lgdist");
  Table t{{"first", "second", "r", "k", "certified_lower", "heuristic_lower", "upper"}, {}, nlohmann::json::array()};
  ModelOptions mo;
  if (p.budget) mo.budget = *p.budget;
  mo.threads = p.threads;
  for (std::size_t i = 0; i + 1 < in.graphs.size(); ++i) {
    mo.seed = derive_seed(p.seed, i);
    auto pa = standard_probes(in.graphs[i], p.r, p.k, {}, derive_seed(p.seed, 2 * i + 1));
    auto pb = standard_probes(in.graphs[i + 1], p.r, p.k, {}, derive_seed(p.seed, 2 * i + 2));
    auto est = lg_distance_estimate(in.graphs[i], in.graphs[i + 1], p.r, p.k, pa, pb, mo);
    t.rows.push_back({in.names[i], in.names[i + 1], std::to_string(p.r), std::to_string(p.k), num(est.certified_lower),
                      num(est.heuristic_lower), num(est.upper)});
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& pr : est.probes) {
      probes.push_back({{"family", pr.family}, {"from_first", pr.from_first}, {"residual", pr.residual}});
    }
    t.json.push_back({{"first", in.names[i]},
                      {"second", in.names[i + 1]},
                      {"r", p.r},
                      {"k", p.k},
                      {"certified_lower", est.certified_lower},
                      {"heuristic_lower", est.heuristic_lower},
                      {"upper", est.upper},
                      {"probes", probes}});
  }
  return t;
}

std::vector<RewiringResult> rewire_all(const Inputs& in, const Params& p) {
  std::vector<RewiringResult> out(in.graphs.size());
  parallel_for(in.graphs.size(), p.threads, [&](std::size_t i) { out[i] = optimize_rewiring(in.graphs[i], p.L, anneal(p, i)); });
  return out;
}

Table rewire(const Inputs& in, const Params& p) {
  need_graphs(in, 1, "rewire");
  auto res = rewire_all(in, p);
  Table t{{"graph", "n", "edges", "rewired_edges", "density", "valid", "proposals"}, {}, nlohmann::json::array()};
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    t.rows.push_back({in.names[i], str(in.graphs[i].vertex_count()), str(in.graphs[i].edge_count()), str(r.h.edge_count()),
                      num(edge_density(r.h)), yes(r.cert.valid), str(r.proposals)});
    t.json.push_back({{"graph", in.names[i]},
                      {"L", p.L},
                      {"density", edge_density(r.h)},
                      {"certificate", r.cert.to_json()},
                      {"proposals", r.proposals},
                      {"rewiring", format_graph(r.h)}});
  }
  return t;
}

Table ccost(const Inputs& in, const Params& p) {
  need_graphs(in, 1, "ccost");
  auto res = rewire_all(in, p);
  std::vector<Graph> hs;
  for (auto& r : res) {
    if (!r.cert.valid) throw AnalysisError("optimizer returned an invalid rewiring");
    hs.push_back(r.h);
  }
  auto rep = density_report(std::span<const Graph>(hs));
  Table t{{"graph", "n", "density", "running_min"}, {}, nullptr};
  for (std::size_t i = 0; i < hs.size(); ++i) {
    t.rows.push_back({in.names[i], str(in.graphs[i].vertex_count()), num(rep.densities[i]), num(rep.running_min[i])});
  }
  t.json = {{"L", p.L},
            {"graphs", in.names},
            {"densities", rep.densities},
            {"running_min", rep.running_min},
            {"liminf_proxy", rep.liminf_proxy}};
  return t;
}

Table transfer(const Inputs& in, const Params& p) {
  need_graphs(in, 2, "transfer");
  auto h1 = optimize_rewiring(in.graphs[0], p.L, anneal(p, 0)).h;
  Table t{{"source", "target", "valid", "density_source", "density_result", "model_tv", "problematic_fraction",
           "patched_fraction"},
          {},
          nlohmann::json::array()};
  for (std::size_t j = 1; j < in.graphs.size(); ++j) {
    TransferOptions o;
    if (p.budget) o.model.budget = *p.budget;
    o.model.seed = derive_seed(p.seed, j);
    o.model.threads = p.threads;
    auto res = transfer_rewiring(in.graphs[0], h1, in.graphs[j], p.L, o);
    const auto& r = res.report;
    t.rows.push_back({in.names[0], in.names[j], yes(res.cert.valid), num(r.density_source), num(r.density_result),
                      num(r.model_tv), num(r.problematic_fraction), num(r.patched_fraction)});
    t.json.push_back({{"source", in.names[0]},
                      {"target", in.names[j]},
                      {"L", p.L},
                      {"certificate", res.cert.to_json()},
                      {"report", r.to_json()},
                      {"rewiring", format_graph(res.h2)}});
  }
  return t;
}

Table enumerate(const Inputs& in, const Params& p) {
  if (!in.presentation) throw InputError("enumerate needs a presentation");
  const auto& pres = *in.presentation;
  const std::size_t count = std::max<std::size_t>(1, std::max(in.schreier.size(), in.candidates.size()));
  Table t{{"graph", "subgroup", "index", "matches_input"}, {}, nlohmann::json::array()};
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Word> sub = i < in.candidates.size() ? in.candidates[i] : std::vector<Word>{};
    auto sch = todd_coxeter(pres, sub, p.max_cosets);
    std::string subtext;
    for (const auto& w : sub) subtext += (subtext.empty() ? "" : ",") + format_word(w, pres.generators);
    std::string name = i < in.names.size() ? in.names[i] : "subgroup" + std::to_string(i);
    std::string same = i < in.schreier.size() ? yes(sch == in.schreier[i]) : "";
    t.rows.push_back({name, subtext, str(sch.coset_count()), same});
    t.json.push_back({{"graph", name}, {"subgroup", subtext}, {"index", sch.coset_count()}, {"schreier", sch.to_json()}});
  }
  return t;
}

Table rankgrad(const Inputs& in, const Params& p) {
  const auto& pres = need_presentation(in, "rankgrad");
  auto rows = rank_gradient_table(pres, in.schreier, in.candidates, p.tietze_budget);
  Table t{{"index", "d_lower", "d_upper", "r_lower", "r_upper", "method"}, {}, nlohmann::json::array()};
  for (const auto& r : rows) {
    t.rows.push_back({str(r.index), str(r.d_lower), str(r.d_upper), r.r_lower.str(), r.r_upper.str(), r.method});
    t.json.push_back({{"index", r.index},
                      {"d_lower", r.d_lower},
                      {"d_upper", r.d_upper},
                      {"r_lower", r.r_lower.str()},
                      {"r_upper", r.r_upper.str()},
                      {"method", r.method}});
  }
  return t;
}

Table farber(const Inputs& in, const Params& p) {
  if (in.schreier.empty()) throw InputError("farber needs Schreier graphs");
  const auto& names = in.schreier.front().generators();
  std::vector<Word> words;
  if (p.words.empty()) {
    for (std::size_t g = 0; g < names.size(); ++g) words.push_back(Word{static_cast<int>(2 * g)});
  } else {
    for (const auto& w : p.words) words.push_back(parse_word(w, names));
  }
  Table t{{"graph", "index", "word", "fixed_fraction", "ball_match_fraction"}, {}, nlohmann::json::array()};
  for (std::size_t i = 0; i < in.schreier.size(); ++i) {
    auto rep = farber_statistic(in.schreier[i], words, p.radius ? in.cayley : CayleyKind::none, p.radius);
    nlohmann::json wj = nlohmann::json::array();
    for (const auto& w : rep.words) {
      t.rows.push_back({in.names[i], str(in.schreier[i].coset_count()), w.word, num(w.fixed_fraction),
                        rep.ball_match_fraction ? num(*rep.ball_match_fraction) : ""});
      wj.push_back({{"word", w.word}, {"fixed_fraction", w.fixed_fraction}});
    }
    nlohmann::json j = {{"graph", in.names[i]}, {"index", in.schreier[i].coset_count()}, {"words", wj}};
    j["radius"] = rep.radius ? nlohmann::json(*rep.radius) : nlohmann::json(nullptr);
    j["ball_match_fraction"] = rep.ball_match_fraction ? nlohmann::json(*rep.ball_match_fraction) : nlohmann::json(nullptr);
    t.json.push_back(j);
  }
  return t;
}

Table partition(const Inputs& in, const Params& p) {
  need_graphs(in, 1, "partition");
  std::vector<PartitionResult> res(in.graphs.size());
  parallel_for(in.graphs.size(), p.threads, [&](std::size_t i) {
    PartitionOptions o;
    if (p.budget) o.budget = *p.budget;
    o.seed = derive_seed(p.seed, i);
    res[i] = balanced_partition(steps_of(in, i), p.k, p.eps, o);
  });
  Table t{{"graph", "n", "k", "eps", "boundary_vertex_sum", "boundary_fraction", "sizes_ok", "boundary_ok", "status"},
          {},
          nlohmann::json::array()};
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    const double n = static_cast<double>(in.graphs[i].vertex_count());
    t.rows.push_back({in.names[i], str(in.graphs[i].vertex_count()), std::to_string(p.k), num(p.eps),
                      str(r.partition.boundary_vertex_sum), num(r.partition.boundary_vertex_sum / n),
                      yes(r.verdict.sizes_ok), yes(r.verdict.boundary_ok), r.verdict.status});
    auto j = to_json(r);
    j["graph"] = in.names[i];
    t.json.push_back(j);
  }
  return t;
}

Table trichotomy(const Inputs& in, const Params& p) {
  const auto& pres = need_presentation(in, "trichotomy");
  TrichotomyOptions o;
  if (p.budget) o.partition.budget = *p.budget;
  o.partition.seed = p.seed;
  o.tietze_budget = p.tietze_budget;
  o.threads = p.threads;
  auto rows = trichotomy_report(pres, in.schreier, in.candidates, p.c, o);
  Table t{{"graph", "index", "k", "r_lower", "r_upper", "gap", "sizes_ok", "boundary_ok", "index_ok", "branch"},
          {},
          nlohmann::json::array()};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    t.rows.push_back({in.names[i], str(r.index), std::to_string(r.k), r.rank.r_lower.str(), r.rank.r_upper.str(),
                      num(r.spectral.gap), yes(r.sizes_ok), yes(r.boundary_ok), yes(r.index_ok), r.branch});
    auto j = r.to_json();
    j["graph"] = in.names[i];
    j["c"] = p.c;
    t.json.push_back(j);
  }
  return t;
}

Table spectral(const Inputs& in, const Params&) {
  need_graphs(in, 1, "spectral");
  Table t{{"graph", "n", "lambda1", "lambda2", "gap", "connected", "method"}, {}, nlohmann::json::array()};
  for (std::size_t i = 0; i < in.graphs.size(); ++i) {
    auto r = spectral_gap(in.graphs[i]);
    t.rows.push_back({in.names[i], str(in.graphs[i].vertex_count()), num(r.lambda1), num(r.lambda2), num(r.gap),
                      yes(r.connected), r.method});
    auto j = to_json(r);
    j["graph"] = in.names[i];
    t.json.push_back(j);
  }
  return t;
}

}  // namespace

Table run_analysis(const std::string& name, const Inputs& in, const Params& p) {
  if (name == "stats") return stats(in, p);
  if (name == "bsdist") return bsdist(in, p);
  if (name == "lgdist") return lgdist(in, p);
  if (name == "rewire") return rewire(in, p);
  if (name == "ccost") return ccost(in, p);
  if (name == "transfer") return transfer(in, p);
  if (name == "enumerate") return enumerate(in, p);
  if (name == "rankgrad") return rankgrad(in, p);
  if (name == "farber") return farber(in, p);
  if (name == "partition") return partition(in, p);
  if (name == "trichotomy") return trichotomy(in, p);
  if (name == "spectral") return spectral(in, p);
  throw InputError("unknown analysis \"" + name + "\"");
}

}  // namespace rgcost::cli
