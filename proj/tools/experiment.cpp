#include "experiment.hpp"

#include <filesystem>
#include <set>

#include "analyses.hpp"
#include "io.hpp"
#include "rgcost/error.hpp"
#include "rgcost/util.hpp"

namespace rgcost::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kRandomized{"lgdist", "rewire", "ccost", "transfer", "partition", "trichotomy"};

nlohmann::json error_entry(const std::string& kind, const std::string& message, int line = 0) {
  nlohmann::json e = {{"kind", kind}, {"message", message}};
  if (line > 0) e["line"] = line;
  return e;
}

struct Spec {
  InputSpec inputs;
  std::vector<std::string> analyses;
  Params params;
  bool has_seed = false;
  std::string out_dir = "results";
  std::string format = "both";
  bool plot = false;
  bool deterministic = true;
};

template <class T>
T field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("spec field \"") + key + "\" has the wrong type");
  }
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  fs::path joined = base / p;
  // Generator specs such as cycle:10 are not files.
  if (!fs::exists(joined) && p.find(':') != std::string::npos) return p;
  if (!fs::exists(joined) && p == "petersen") return p;
  return joined.lexically_normal().string();
}

Spec parse_spec(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  if (!j.is_object()) throw InputError(path + ": spec must be a JSON object");
  const fs::path base = fs::path(path).parent_path();
  Spec s;
  s.has_seed = j.contains("seed");
  s.params.seed = field<std::uint64_t>(j, "seed", 1);
  s.inputs.seed = s.params.seed;

  const nlohmann::json in = j.value("inputs", nlohmann::json::object());
  if (in.contains("family")) {
    s.inputs.family = field<std::string>(in["family"], "name", "");
    s.inputs.family_params = field<std::vector<long long>>(in["family"], "params", {});
    if (s.inputs.family.empty()) throw InputError("family needs a name");
  }
  for (const auto& g : field<std::vector<std::string>>(in, "graphs", {})) s.inputs.graphs.push_back(resolve(base, g));
  s.inputs.presentation = resolve(base, field<std::string>(in, "presentation", ""));
  for (const auto& g : field<std::vector<std::string>>(in, "subgroups", {})) s.inputs.subgroups.push_back(resolve(base, g));

  s.analyses = field<std::vector<std::string>>(j, "analyses", {});
  if (s.analyses.empty()) throw InputError("spec lists no analyses");
  const auto& known = analysis_names();
  for (const auto& a : s.analyses) {
    if (std::find(known.begin(), known.end(), a) == known.end()) throw InputError("unknown analysis \"" + a + "\"");
    if (kRandomized.count(a) && !s.has_seed) throw InputError("analysis \"" + a + "\" needs a seed");
  }
  if (s.inputs.family.find("random") != std::string::npos && !s.has_seed) {
    throw InputError("random families need a seed");
  }

  const nlohmann::json pj = j.value("params", nlohmann::json::object());
  Params& p = s.params;
  p.r = field(pj, "r", p.r);
  p.k = field(pj, "k", p.k);
  p.L = field(pj, "L", p.L);
  p.eps = field(pj, "eps", p.eps);
  p.c = field(pj, "c", p.c);
  if (pj.contains("budget")) p.budget = field<std::size_t>(pj, "budget", 0);
  p.max_cosets = field(pj, "max_cosets", p.max_cosets);
  p.tietze_budget = field(pj, "tietze_budget", p.tietze_budget);
  p.words = field(pj, "words", p.words);
  if (pj.contains("radius")) p.radius = field<int>(pj, "radius", 0);
  if (p.r < 0 || p.k < 1 || p.L < 1 || !(p.eps > 0) || !(p.c > 0)) throw InputError("spec params out of range");

  const nlohmann::json out = j.value("output", nlohmann::json::object());
  s.out_dir = field(out, "dir", s.out_dir);
  s.format = field(out, "format", s.format);
  if (s.format != "csv" && s.format != "json" && s.format != "both") throw InputError("format must be csv, json or both");
  s.plot = field(out, "plot", false);
  s.deterministic = field(j, "deterministic", true);

  for (const auto& f : s.inputs.files()) {
    if (!fs::exists(f)) throw InputError("input not found: " + f);
  }
  for (const auto& g : s.inputs.graphs) {
    if (g.find(':') == std::string::npos && g != "petersen" && !fs::exists(g)) throw InputError("input not found: " + g);
  }
  return s;
}

struct Outcome {
  Table table;
  int code = 0;
  nlohmann::json error;
};

}  // namespace

int run_experiment(const std::string& spec_path, const std::string& out_override) {
  Spec spec = parse_spec(spec_path);
  const std::string out_dir = out_override.empty() ? spec.out_dir : out_override;
  const int threads = spec.deterministic ? 1 : thread_cap();
  spec.params.threads = threads;
  Inputs inputs;
  try {
    inputs = load_inputs(spec.inputs);
  } catch (const InputError& e) {
    nlohmann::json manifest = {{"tool", kVersion},
                               {"spec", {{"path", spec_path}, {"sha256", sha256_file(spec_path)}}},
                               {"error", error_entry("input", e.message(), e.line())},
                               {"analyses", nlohmann::json::array()},
                               {"exit_code", 2}};
    write_atomic((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    throw;
  }

  std::vector<Outcome> results(spec.analyses.size());
  parallel_for(spec.analyses.size(), threads, [&](std::size_t i) {
    try {
      results[i].table = run_analysis(spec.analyses[i], inputs, spec.params);
    } catch (const InputError& e) {
      results[i].code = 2;
      results[i].error = error_entry("input", e.message(), e.line());
    } catch (const AnalysisError& e) {
      results[i].code = 1;
      results[i].error = error_entry("analysis", e.what());
    } catch (const std::exception& e) {
      results[i].code = 1;
      results[i].error = error_entry("analysis", e.what());
    }
  });

  nlohmann::json manifest;
  manifest["tool"] = kVersion;
  manifest["spec"] = {{"path", spec_path}, {"sha256", sha256_file(spec_path)}};
  manifest["seed"] = spec.params.seed;
  manifest["params"] = spec.params.to_json();
  manifest["deterministic"] = spec.deterministic;
  manifest["inputs"] = nlohmann::json::array();
  for (const auto& f : spec.inputs.files()) manifest["inputs"].push_back({{"path", f}, {"sha256", sha256_file(f)}});
  if (!spec.inputs.family.empty()) {
    manifest["family"] = {{"name", spec.inputs.family}, {"params", spec.inputs.family_params}};
  }
  manifest["analyses"] = nlohmann::json::array();

  int status = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::string& name = spec.analyses[i];
    nlohmann::json entry = {{"name", name}, {"outputs", nlohmann::json::array()}};
    auto write = [&](const std::string& file, const std::string& content) {
      write_atomic((fs::path(out_dir) / file).string(), content);
      entry["outputs"].push_back({{"path", file}, {"sha256", sha256_hex(content)}});
    };
    if (results[i].code == 0) {
      const Table& t = results[i].table;
      if (spec.format != "json") write(name + ".csv", t.csv());
      if (spec.format != "csv") write(name + ".json", t.json.dump(2) + "\n");
      if (spec.plot) write(name + ".dat", plot_data(t.columns, t.rows));
      entry["status"] = "ok";
    } else {
      entry["status"] = "error";
      entry["error"] = results[i].error;
      status = std::max(status, results[i].code);
    }
    manifest["analyses"].push_back(entry);
  }
  manifest["exit_code"] = status;
  write_atomic((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  return status;
}

int check_manifest(const std::string& manifest_path) {
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(manifest_path + ": " + e.what());
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  nlohmann::json report = {{"mismatches", nlohmann::json::array()}, {"checked", 0}};
  auto verify = [&](const std::string& path, const std::string& digest) {
    report["checked"] = report["checked"].get<int>() + 1;
    std::string actual = fs::exists(path) ? sha256_file(path) : "missing";
    if (actual != digest) report["mismatches"].push_back({{"path", path}, {"expected", digest}, {"actual", actual}});
  };
  try {
    if (m.contains("spec")) verify(m["spec"]["path"], m["spec"]["sha256"]);
    for (const auto& in : m.value("inputs", nlohmann::json::array())) verify(in["path"], in["sha256"]);
    for (const auto& a : m.value("analyses", nlohmann::json::array())) {
      for (const auto& o : a.value("outputs", nlohmann::json::array())) {
        verify((dir / o["path"].get<std::string>()).string(), o["sha256"]);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(manifest_path + ": malformed manifest: " + e.what());
  }
  emit("", report.dump(2) + "\n");
  return report["mismatches"].empty() ? 0 : 1;
}

}  // namespace rgcost::cli
