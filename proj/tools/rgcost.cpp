#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "analyses.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "rgcost/error.hpp"
#include "rgcost/rewiring.hpp"
#include "rgcost/schreier.hpp"
#include "rgcost/util.hpp"

using namespace rgcost;
using namespace rgcost::cli;

namespace {

struct Common {
  InputSpec in;
  Params params;
  std::string budget_text;
  std::string format;
  std::string out;
  std::string plot;
  std::string words;
};

void add_inputs(CLI::App* cmd, Common& c, bool schreier_only = false) {
  cmd->add_option("--graphs,--graph", c.in.graphs,
                  schreier_only ? "Schreier graph JSON files"
                                : "graph files, generator specs (cycle:N, torus:RxC, ...) or Schreier JSON files");
  cmd->add_option("--presentation", c.in.presentation, "presentation file");
  cmd->add_option("--subgroups", c.in.subgroups, "subgroup files (sub: lines), one per Schreier graph");
  cmd->add_option("--family", c.in.family, "built-in family: Z-cycle, Z2-torus, F2-random, Fk-random, cyclic");
  cmd->add_option("--params", c.in.family_params, "family parameters")->delimiter(',');
}

void add_output(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", c.out, "output path (stdout when omitted)");
  cmd->add_option("--plot", c.plot, "also write a gnuplot data file here");
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.params.seed, "random seed")->capture_default_str();
  cmd->add_option("--budget", c.params.budget, "search budget (analysis-specific default when omitted)");
}

void finish(const Table& t, const Common& c) {
  emit(c.out, c.format == "csv" ? t.csv() : t.json.dump(2) + "\n");
  if (!c.plot.empty()) write_atomic(c.plot, plot_data(t.columns, t.rows));
}

int analysis_command(const std::string& name, Common& c) {
  c.in.seed = c.params.seed;
  c.params.threads = thread_cap();
  if (!c.words.empty()) {
    std::stringstream ss(c.words);
    std::string w;
    while (std::getline(ss, w, ',')) {
      if (!w.empty()) c.params.words.push_back(w);
    }
  }
  finish(run_analysis(name, load_inputs(c.in), c.params), c);
  return 0;
}

void print_error(const std::string& kind, const std::string& message, int line) {
  nlohmann::json e = {{"kind", kind}, {"message", message}};
  if (line > 0) e["line"] = line;
  std::cerr << nlohmann::json{{"error", e}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial cost, local statistics and rank gradients of graph and Schreier graph sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::function<int()> action;
  Common c;

  auto analysis = [&](const std::string& name, const std::string& help, const std::string& format) {
    auto* cmd = app.add_subcommand(name, help);
    add_inputs(cmd, c);
    add_output(cmd, c, format);
    cmd->callback([&, name] { action = [&, name] { return analysis_command(name, c); }; });
    return cmd;
  };

  auto* stats = analysis("stats", "r-ball type distribution of each graph", "json");
  stats->add_option("--r", c.params.r, "radius")->capture_default_str();

  auto* bsdist = analysis("bsdist", "total variation between consecutive graphs per radius", "csv");
  bsdist->add_option("--r", c.params.r, "largest radius")->capture_default_str();

  auto* lgdist = analysis("lgdist", "local-global distance bounds between consecutive graphs", "json");
  lgdist->add_option("--r", c.params.r, "radius")->capture_default_str();
  lgdist->add_option("--k", c.params.k, "colors")->capture_default_str();
  add_seed(lgdist, c);

  auto* ccost = analysis("ccost", "densities of optimized L-rewirings across a sequence", "csv");
  ccost->add_option("--L", c.params.L, "stretch bound")->capture_default_str();
  add_seed(ccost, c);

  auto* rankgrad = analysis("rankgrad", "rank bounds and rank quotients of subgroups", "csv");
  rankgrad->add_option("--tietze-budget", c.params.tietze_budget)->capture_default_str();
  add_seed(rankgrad, c);

  auto* farber = analysis("farber", "fixed-point fractions of words and ball matching", "csv");
  farber->add_option("--words", c.words, "comma-separated words (default: the generators)");
  farber->add_option("--radius", c.params.radius, "ball radius for matching against the Cayley graph");
  add_seed(farber, c);

  auto* part = analysis("partition", "balanced k-way partition with small boundary", "json");
  part->add_option("--k", c.params.k, "blocks")->capture_default_str();
  part->add_option("--eps", c.params.eps, "tolerance")->capture_default_str();
  add_seed(part, c);

  auto* tri = analysis("trichotomy", "rank, spectral and partition evidence with amalgam certificates", "json");
  tri->add_option("--c", c.params.c, "rank quotient threshold")->capture_default_str();
  tri->add_option("--tietze-budget", c.params.tietze_budget)->capture_default_str();
  add_seed(tri, c);

  analysis("spectral", "adjacency spectrum extremes and Laplacian gap", "csv");

  // rewire: one graph in, one rewiring out.
  std::string rewire_graph, rewire_out, rewire_report;
  bool exact = false;
  auto* rewire = app.add_subcommand("rewire", "sparse L-rewiring of a graph");
  rewire->add_option("--graph", rewire_graph, "graph file or generator spec")->required();
  rewire->add_option("--L", c.params.L, "stretch bound")->capture_default_str();
  rewire->add_flag("--exact", exact, "exact minimum (small graphs only)");
  add_seed(rewire, c);
  rewire->add_option("--out", rewire_out, "rewired graph file (stdout when omitted)");
  rewire->add_option("--report", rewire_report, "JSON report path");
  rewire->callback([&] {
    action = [&] {
      Graph g = load_graph(rewire_graph);
      Graph h;
      nlohmann::json rep = {{"graph", rewire_graph}, {"L", c.params.L}, {"density_input", edge_density(g)}};
      if (exact) {
        h = exact_rewiring(g, c.params.L);
        rep["method"] = "exact";
      } else {
        AnnealOptions o;
        if (c.params.budget) o.budget = *c.params.budget;
        o.seed = c.params.seed;
        auto res = optimize_rewiring(g, c.params.L, o);
        h = res.h;
        rep["method"] = "anneal";
        rep["proposals"] = res.proposals;
        rep["seed"] = c.params.seed;
      }
      auto cert = is_rewiring(g, h, c.params.L);
      rep["density"] = edge_density(h);
      rep["certificate"] = cert.to_json();
      emit(rewire_out, format_graph(h));
      if (!rewire_report.empty()) write_atomic(rewire_report, rep.dump(2) + "\n");
      return cert.valid ? 0 : 1;
    };
  });

  // transfer: (g1, h1) -> g2.
  std::string from, to, transfer_out, transfer_report;
  auto* transfer = app.add_subcommand("transfer", "carry an L-rewiring of one graph over to another");
  transfer->add_option("--from", from, "g1,h1: source graph and its rewiring")->required();
  transfer->add_option("--to", to, "target graph")->required();
  transfer->add_option("--L", c.params.L, "stretch bound")->capture_default_str();
  add_seed(transfer, c);
  transfer->add_option("--out", transfer_out, "rewired target graph file (stdout when omitted)");
  transfer->add_option("--report", transfer_report, "JSON report path");
  transfer->callback([&] {
    action = [&] {
      auto comma = from.find(',');
      if (comma == std::string::npos) throw InputError("--from needs g1,h1");
      Graph g1 = load_graph(from.substr(0, comma)), h1 = load_graph(from.substr(comma + 1)), g2 = load_graph(to);
      TransferOptions o;
      if (c.params.budget) o.model.budget = *c.params.budget;
      o.model.seed = c.params.seed;
      o.model.threads = thread_cap();
      auto res = transfer_rewiring(g1, h1, g2, c.params.L, o);
      emit(transfer_out, format_graph(res.h2));
      nlohmann::json rep = {{"L", c.params.L}, {"certificate", res.cert.to_json()}, {"report", res.report.to_json()}};
      if (!transfer_report.empty()) write_atomic(transfer_report, rep.dump(2) + "\n");
      return res.cert.valid ? 0 : 1;
    };
  });

  // enumerate: presentation + subgroup -> Schreier graph JSON.
  std::string subgroup_file;
  auto* enumerate = app.add_subcommand("enumerate", "coset enumeration of a subgroup");
  enumerate->add_option("--presentation", c.in.presentation, "presentation file")->required();
  enumerate->add_option("--subgroup", subgroup_file, "subgroup file (trivial subgroup when omitted)");
  enumerate->add_option("--max-cosets", c.params.max_cosets)->capture_default_str();
  enumerate->add_option("--out", c.out, "Schreier graph JSON (stdout when omitted)");
  enumerate->callback([&] {
    action = [&] {
      auto p = read_presentation_file(c.in.presentation);
      std::vector<Word> sub;
      if (!subgroup_file.empty()) sub = parse_subgroup(read_file(subgroup_file), p.generators);
      for (const auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
      emit(c.out, todd_coxeter(p, sub, c.params.max_cosets).to_json().dump(2) + "\n");
      return 0;
    };
  });

  // rs-presentation: subgroup presentation from a Schreier graph.
  std::string schreier_file;
  bool simplify = false;
  auto* rs = app.add_subcommand("rs-presentation", "subgroup presentation read off a Schreier graph");
  rs->add_option("--presentation", c.in.presentation, "presentation file")->required();
  rs->add_option("--schreier", schreier_file, "Schreier graph JSON")->required();
  rs->add_flag("--simplify", simplify, "also report the simplified presentation");
  rs->add_option("--tietze-budget", c.params.tietze_budget)->capture_default_str();
  rs->add_option("--out", c.out, "JSON output (stdout when omitted)");
  rs->callback([&] {
    action = [&] {
      auto p = read_presentation_file(c.in.presentation);
      auto sch = load_schreier(schreier_file);
      auto sp = reidemeister_schreier(sch, p);
      auto j = sp.to_json(p.generators);
      j["abelianized_rank"] = abelianized_rank(sp);
      if (simplify) {
        auto t = tietze_simplify(sp, c.params.tietze_budget);
        nlohmann::json rels = nlohmann::json::array();
        for (const auto& r : t.relators) {
          nlohmann::json letters = nlohmann::json::array();
          for (int l : r) letters.push_back((l & 1) ? -((l >> 1) + 1) : (l >> 1) + 1);
          rels.push_back(letters);
        }
        j["simplified"] = {{"generator_count", t.generator_count},
                           {"relators", rels},
                           {"d_upper", t.d_upper},
                           {"steps", t.steps},
                           {"budget_exhausted", t.budget_exhausted}};
      }
      emit(c.out, j.dump(2) + "\n");
      return 0;
    };
  });

  // family: write a built-in family to disk.
  std::string out_dir = ".";
  auto* family = app.add_subcommand("family", "write a built-in family as presentation and Schreier graph files");
  family->add_option("--name", c.in.family, "Z-cycle, Z2-torus, F2-random, Fk-random or cyclic")->required();
  family->add_option("--params", c.in.family_params, "parameters")->delimiter(',')->required();
  family->add_option("--seed", c.params.seed)->capture_default_str();
  family->add_option("--out-dir", out_dir)->capture_default_str();
  family->callback([&] {
    action = [&] {
      auto f = builtin_family(c.in.family, c.in.family_params, c.params.seed);
      namespace fs = std::filesystem;
      write_atomic((fs::path(out_dir) / "presentation.pres").string(), format_presentation(f.presentation));
      nlohmann::json summary = {{"family", f.name}, {"graphs", nlohmann::json::array()}};
      for (std::size_t i = 0; i < f.graphs.size(); ++i) {
        const std::string base = "graph_" + std::to_string(i);
        write_atomic((fs::path(out_dir) / (base + ".json")).string(), f.graphs[i].to_json().dump() + "\n");
        nlohmann::json entry = {{"file", base + ".json"}, {"index", f.graphs[i].coset_count()}};
        if (i < f.candidates.size() && !f.candidates[i].empty()) {
          std::string sub;
          for (const auto& w : f.candidates[i]) sub += "sub: " + format_word(w, f.presentation.generators) + "\n";
          write_atomic((fs::path(out_dir) / (base + ".sub")).string(), sub);
          entry["subgroup"] = base + ".sub";
        }
        summary["graphs"].push_back(entry);
      }
      emit("", summary.dump(2) + "\n");
      return 0;
    };
  });

  // run: experiment spec.
  std::string spec_path, run_out;
  auto* run = app.add_subcommand("run", "run an experiment spec and write outputs with a manifest");
  run->add_option("--spec", spec_path, "experiment spec JSON")->required();
  run->add_option("--out-dir", run_out, "override the spec's output directory");
  run->callback([&] { action = [&] { return run_experiment(spec_path, run_out); }; });

  std::string manifest_path;
  auto* check = app.add_subcommand("check-manifest", "recompute the digests recorded in a manifest");
  check->add_option("--manifest", manifest_path)->required();
  check->callback([&] { action = [&] { return check_manifest(manifest_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const InputError& e) {
    print_error("input", e.message(), e.line());
    return 2;
  } catch (const AnalysisError& e) {
    print_error("analysis", e.what(), 0);
    return 1;
  } catch (const std::exception& e) {
    print_error("analysis", e.what(), 0);
    return 1;
  }
}
