#include "rgcost/schreier.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace rgcost {

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = inverse_letter(l);
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  for (int l : w) {
    if (!out.empty() && out.back() == inverse_letter(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t a = 0, b = r.size();
  while (b - a >= 2 && r[a] == inverse_letter(r[b - 1])) {
    ++a;
    --b;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(a), r.begin() + static_cast<std::ptrdiff_t>(b));
}

std::size_t Presentation::total_relator_length() const {
  std::size_t m = 0;
  for (const auto& r : relators) m += r.size();
  return m;
}

Word parse_word(const std::string& text, const std::vector<char>& generators) {
  Word w;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '1') continue;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(generators.begin(), generators.end(), lower);
    if (it == generators.end()) throw InputError(std::string("unknown letter '") + c + "' in word \"" + text + "\"");
    int letter = 2 * static_cast<int>(it - generators.begin());
    w.push_back(std::isupper(static_cast<unsigned char>(c)) ? letter + 1 : letter);
  }
  return w;
}

std::string format_word(const Word& w, const std::vector<char>& generators) {
  if (w.empty()) return "1";
  std::string s;
  for (int l : w) {
    char c = generators.at(static_cast<std::size_t>(l >> 1));
    s.push_back(l & 1 ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
  }
  return s;
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Splits "key: rest"; returns false for blank or comment lines.
bool keyed_line(const std::string& raw, std::string& key, std::string& rest) {
  std::string line = trim(raw.substr(0, raw.find('#')));
  if (line.empty()) return false;
  auto colon = line.find(':');
  if (colon == std::string::npos) throw InputError("expected `key: value`, got \"" + line + "\"");
  key = trim(line.substr(0, colon));
  rest = trim(line.substr(colon + 1));
  return true;
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
  Presentation p;
  std::istringstream in(text);
  std::string raw, key, rest;
  int line_no = 0;
  bool have_gens = false;
  while (std::getline(in, raw)) {
    ++line_no;
    try {
      if (!keyed_line(raw, key, rest)) continue;
      if (key == "gens") {
        if (have_gens) throw InputError("generators declared twice");
        have_gens = true;
        std::istringstream names(rest);
        std::string tok;
        while (names >> tok) {
          if (tok.size() != 1 || !std::islower(static_cast<unsigned char>(tok[0]))) {
            throw InputError("generator names are single lowercase letters, got \"" + tok + "\"");
          }
          if (std::find(p.generators.begin(), p.generators.end(), tok[0]) != p.generators.end()) {
            throw InputError(std::string("generator '") + tok[0] + "' repeated");
          }
          p.generators.push_back(tok[0]);
        }
        if (p.generators.empty()) throw InputError("no generators");
      } else if (key == "rel") {
        if (!have_gens) throw InputError("relator before `gens:`");
        Word w = parse_word(rest, p.generators);
        Word r = cyclic_reduce(w);
        if (r.empty()) {
          p.warnings.push_back("line " + std::to_string(line_no) + ": relator \"" + rest + "\" is trivial, dropped");
          continue;
        }
        if (r != w) {
          p.warnings.push_back("line " + std::to_string(line_no) + ": relator \"" + rest + "\" reduced to " +
                               format_word(r, p.generators));
        }
        p.relators.push_back(std::move(r));
      } else {
        throw InputError("unknown key \"" + key + "\"");
      }
    } catch (const InputError& e) {
      throw InputError(e.message(), line_no);
    }
  }
  if (!have_gens) throw InputError("missing `gens:` line");
  return p;
}

Presentation read_presentation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

std::string format_presentation(const Presentation& p) {
  std::string out = "gens:";
  for (char c : p.generators) out += std::string(" ") + c;
  out += "\n";
  for (const auto& r : p.relators) out += "rel: " + format_word(r, p.generators) + "\n";
  return out;
}

std::vector<Word> parse_subgroup(const std::string& text, const std::vector<char>& generators) {
  std::vector<Word> out;
  std::istringstream in(text);
  std::string raw, key, rest;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    try {
      if (!keyed_line(raw, key, rest)) continue;
      if (key != "sub") throw InputError("unknown key \"" + key + "\"");
      out.push_back(free_reduce(parse_word(rest, generators)));
    } catch (const InputError& e) {
      throw InputError(e.message(), line_no);
    }
  }
  return out;
}

// ---------------------------------------------------------------- Schreier graphs

SchreierGraph::SchreierGraph(std::vector<char> generators, std::vector<std::vector<Vertex>> perms)
    : names_(std::move(generators)), perm_(std::move(perms)) {
  if (names_.size() != perm_.size()) throw InputError("one permutation per generator required");
  if (perm_.empty()) throw InputError("no generators");
  n_ = perm_[0].size();
  if (n_ == 0) throw InputError("empty coset set");
  inv_.assign(perm_.size(), std::vector<Vertex>(n_));
  for (std::size_t s = 0; s < perm_.size(); ++s) {
    if (perm_[s].size() != n_) throw InputError("permutations act on different domains");
    std::vector<char> hit(n_, 0);
    for (Vertex x = 0; x < n_; ++x) {
      Vertex y = perm_[s][x];
      if (y >= n_ || hit[y]) {
        throw InputError(std::string("action of '") + names_[s] + "' is not a permutation of 0.." + std::to_string(n_ - 1));
      }
      hit[y] = 1;
      inv_[s][y] = x;
    }
  }
  std::vector<Vertex> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& p : perm_) {
    for (Vertex x = 0; x < n_; ++x) parent[find(x)] = find(p[x]);
  }
  std::map<Vertex, std::vector<Vertex>> orbits;
  for (Vertex x = 0; x < n_; ++x) orbits[find(x)].push_back(x);
  if (orbits.size() > 1) {
    std::string msg = "action is not transitive: " + std::to_string(orbits.size()) + " orbits";
    int shown = 0;
    for (const auto& [root, members] : orbits) {
      if (shown++ == 5) {
        msg += " ...";
        break;
      }
      msg += " {";
      for (std::size_t i = 0; i < members.size() && i < 8; ++i) msg += (i ? "," : "") + std::to_string(members[i]);
      if (members.size() > 8) msg += ",...";
      msg += "}";
    }
    throw InputError(msg);
  }
}

Vertex SchreierGraph::apply(Vertex x, const Word& w) const {
  for (int l : w) x = act(x, l);
  return x;
}

namespace {

struct LabeledArc {
  Vertex from;
  Vertex to;
  int gen;
};

std::pair<Graph, std::vector<EdgeLabel>> labeled_graph(std::size_t n, const std::vector<LabeledArc>& arcs, int D) {
  std::vector<std::pair<Edge, EdgeLabel>> items;
  items.reserve(arcs.size());
  for (const auto& a : arcs) items.emplace_back(Edge(a.from, a.to), EdgeLabel{a.gen, a.from > a.to});
  std::sort(items.begin(), items.end());
  std::vector<Edge> edges;
  std::vector<EdgeLabel> labels;
  for (auto& [e, l] : items) {
    edges.push_back(e);
    labels.push_back(l);
  }
  return {Graph(n, std::move(edges), std::max(D, 1)), std::move(labels)};
}

std::vector<LabeledArc> arcs_of(const SchreierGraph& s) {
  std::vector<LabeledArc> arcs;
  for (std::size_t g = 0; g < s.generator_count(); ++g) {
    for (Vertex x = 0; x < s.coset_count(); ++x) arcs.push_back({x, s.perm(g)[x], static_cast<int>(g)});
  }
  return arcs;
}

}  // namespace

Graph SchreierGraph::to_graph() const {
  return labeled_graph(n_, arcs_of(*this), 2 * static_cast<int>(names_.size())).first;
}

std::vector<EdgeLabel> SchreierGraph::edge_labels() const {
  return labeled_graph(n_, arcs_of(*this), 2 * static_cast<int>(names_.size())).second;
}

StepStructure SchreierGraph::to_steps() const {
  StepStructure s;
  s.graph = to_graph();
  s.steps.assign(n_, {});
  for (Vertex x = 0; x < n_; ++x) {
    for (const auto& p : perm_) s.steps[x].push_back(p[x]);
  }
  s.step_count = static_cast<int>(perm_.size());
  s.symmetric = false;
  return s;
}

nlohmann::json SchreierGraph::to_json() const {
  nlohmann::json perm = nlohmann::json::object();
  std::vector<std::string> gens;
  for (std::size_t s = 0; s < names_.size(); ++s) {
    gens.emplace_back(1, names_[s]);
    perm[gens.back()] = perm_[s];
  }
  return {{"generators", gens}, {"n", n_}, {"root", 0}, {"perm", perm}};
}

SchreierGraph SchreierGraph::from_json(const nlohmann::json& j) {
  try {
    std::vector<char> names;
    std::vector<std::vector<Vertex>> perms;
    for (const auto& g : j.at("generators")) {
      std::string s = g.get<std::string>();
      if (s.size() != 1 || !std::islower(static_cast<unsigned char>(s[0]))) throw InputError("bad generator name \"" + s + "\"");
      names.push_back(s[0]);
      perms.push_back(j.at("perm").at(s).get<std::vector<Vertex>>());
    }
    if (j.contains("root") && j.at("root").get<long long>() != 0) throw InputError("root coset must be 0");
    SchreierGraph sg(names, perms);
    if (j.contains("n") && j.at("n").get<std::size_t>() != sg.coset_count()) throw InputError("n disagrees with permutation length");
    return sg;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed Schreier JSON: ") + e.what());
  }
}

SchreierGraph schreier_from_permutations(const std::vector<std::vector<Vertex>>& perms, const std::vector<char>& generators) {
  return SchreierGraph(generators, perms);
}

// ---------------------------------------------------------------- coset enumeration

namespace {

class CosetTable {
 public:
  CosetTable(const Presentation& p, const std::vector<Word>& sub, std::size_t cap)
      : p_(p), sub_(sub), cols_(static_cast<int>(2 * p.generator_count())), cap_(std::max<std::size_t>(cap, 1)) {
    new_row();
  }

  SchreierGraph run() {
    for (const Word& w : sub_) scan(0, w, true);
    for (std::size_t c = 0; c < rows(); ++c) {
      if (!alive(c)) continue;
      for (const Word& r : p_.relators) {
        if (!alive(c)) break;
        scan(static_cast<int>(c), r, true);
      }
      for (int x = 0; x < cols_ && alive(c); ++x) {
        if (at(static_cast<int>(c), x) >= 0) continue;
        if (!room()) {
          --x;  // the lookahead may have filled or killed this row; look again
          continue;
        }
        define(static_cast<int>(c), x);
      }
    }
    return standardize();
  }

 private:
  std::size_t rows() const { return parent_.size(); }
  bool alive(std::size_t c) const { return parent_[c] == static_cast<int>(c); }
  int& at(int c, int x) { return table_[static_cast<std::size_t>(c) * cols_ + x]; }

  int new_row() {
    int c = static_cast<int>(rows());
    parent_.push_back(c);
    table_.insert(table_.end(), static_cast<std::size_t>(cols_), -1);
    ++live_;
    return c;
  }

  void define(int c, int x) {
    int d = new_row();
    at(c, x) = d;
    at(d, x ^ 1) = c;
  }

  // True if a definition may proceed; false after a lookahead freed room
  // (callers re-examine their state). Throws when no room can be found.
  bool room() {
    if (live_ < cap_ && rows() < 8 * cap_) return true;
    lookahead();
    if (live_ >= cap_ || rows() >= 8 * cap_) {
      throw AnalysisError("coset enumeration exceeded " + std::to_string(cap_) +
                          " cosets (the index may be infinite or the cap too small)");
    }
    return false;
  }

  void lookahead() {
    for (const Word& w : sub_) scan(0, w, false);
    for (std::size_t d = 0; d < rows(); ++d) {
      for (const Word& r : p_.relators) {
        if (!alive(d)) break;
        scan(static_cast<int>(d), r, false);
      }
    }
  }

  int rep(int c) {
    int r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      int next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(int a, int b, std::vector<int>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --live_;
    queue.push_back(b);
  }

  void coincidence(int a, int b) {
    std::vector<int> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int g = queue[i];
      for (int x = 0; x < cols_; ++x) {
        int d = at(g, x);
        if (d < 0) continue;
        at(d, x ^ 1) = -1;
        int mu = rep(g), nu = rep(d);
        if (at(mu, x) >= 0) {
          merge(nu, at(mu, x), queue);
        } else if (at(nu, x ^ 1) >= 0) {
          merge(mu, at(nu, x ^ 1), queue);
        } else {
          at(mu, x) = nu;
          at(nu, x ^ 1) = mu;
        }
      }
    }
  }

  void scan(int alpha, const Word& w, bool fill) {
    if (w.empty()) return;
    for (;;) {
      int f = alpha, b = alpha;
      int i = 0, j = static_cast<int>(w.size()) - 1;
      while (i <= j && at(f, w[i]) >= 0) f = at(f, w[i++]);
      if (i > j) {
        if (f != alpha) coincidence(f, alpha);
        return;
      }
      while (j >= i && at(b, w[j] ^ 1) >= 0) b = at(b, w[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        at(f, w[i]) = b;
        at(b, w[i] ^ 1) = f;
        return;
      }
      if (!fill) return;
      if (!room()) {
        if (!alive(static_cast<std::size_t>(alpha))) return;
        continue;
      }
      define(f, w[i]);
    }
  }

  SchreierGraph standardize() {
    std::vector<int> id(rows(), -1);
    std::vector<int> order{0};
    id[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (int x = 0; x < cols_; ++x) {
        int d = rep(at(order[i], x));
        if (id[d] < 0) {
          id[d] = static_cast<int>(order.size());
          order.push_back(d);
        }
      }
    }
    std::vector<std::vector<Vertex>> perms(p_.generator_count(), std::vector<Vertex>(order.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t s = 0; s < p_.generator_count(); ++s) {
        perms[s][i] = static_cast<Vertex>(id[rep(at(order[i], static_cast<int>(2 * s)))]);
      }
    }
    return SchreierGraph(p_.generators, std::move(perms));
  }

  const Presentation& p_;
  const std::vector<Word>& sub_;
  int cols_;
  std::size_t cap_;
  std::vector<int> table_;
  std::vector<int> parent_;
  std::size_t live_ = 0;
};

}  // namespace

SchreierGraph todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup, std::size_t max_cosets) {
  if (p.generators.empty()) throw InputError("presentation has no generators");
  std::vector<Word> sub;
  for (const Word& w : subgroup) {
    for (int l : w) {
      if (l < 0 || static_cast<std::size_t>(l >> 1) >= p.generator_count()) throw InputError("subgroup word uses an unknown letter");
    }
    sub.push_back(free_reduce(w));
  }
  CosetTable t(p, sub, max_cosets);
  return t.run();
}

RelatorCheck check_relators(const SchreierGraph& sch, const Presentation& p) {
  if (sch.generators() != p.generators) throw InputError("Schreier graph and presentation use different generators");
  RelatorCheck out;
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    for (Vertex x = 0; x < sch.coset_count(); ++x) {
      if (sch.apply(x, p.relators[r]) != x) {
        out.ok = false;
        out.relator = r;
        out.coset = x;
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- Reidemeister-Schreier

Word SchreierPresentation::generator_word(std::size_t g) const {
  const SchreierEdge e = generators.at(g);
  Word w = transversal[e.coset];
  w.push_back(2 * e.gen);
  const Word& back = transversal[generator_target.at(g)];
  Word inv = inverse_word(back);
  w.insert(w.end(), inv.begin(), inv.end());
  return free_reduce(w);
}

nlohmann::json SchreierPresentation::to_json(const std::vector<char>& names) const {
  nlohmann::json j;
  j["index"] = index;
  j["base_generators"] = base_generators;
  j["relator_mass"] = relator_mass;
  auto edge_json = [&](const SchreierEdge& e) { return nlohmann::json{{"coset", e.coset}, {"gen", std::string(1, names.at(e.gen))}}; };
  j["tree"] = nlohmann::json::array();
  for (const auto& e : tree) j["tree"].push_back(edge_json(e));
  j["transversal"] = nlohmann::json::array();
  for (const auto& t : transversal) j["transversal"].push_back(format_word(t, names));
  j["generators"] = nlohmann::json::array();
  for (std::size_t g = 0; g < generators.size(); ++g) {
    auto e = edge_json(generators[g]);
    e["word"] = format_word(generator_word(g), names);
    j["generators"].push_back(e);
  }
  j["relators"] = nlohmann::json::array();
  for (std::size_t r = 0; r < relators.size(); ++r) {
    nlohmann::json letters = nlohmann::json::array();
    for (int l : relators[r]) letters.push_back((l & 1) ? -((l >> 1) + 1) : (l >> 1) + 1);
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : edge_trace[r]) trace.push_back(edge_json(e));
    j["relators"].push_back({{"relator", relator_source[r].first},
                             {"coset", relator_source[r].second},
                             {"letters", letters},
                             {"edge_trace", trace}});
  }
  return j;
}

SchreierPresentation reidemeister_schreier(const SchreierGraph& sch, const Presentation& p) {
  auto check = check_relators(sch, p);
  if (!check.ok) {
    throw InputError("relator " + format_word(p.relators[check.relator], p.generators) + " moves coset " +
                     std::to_string(check.coset));
  }
  const std::size_t n = sch.coset_count();
  const std::size_t S = sch.generator_count();
  SchreierPresentation sp;
  sp.index = n;
  sp.base_generators = S;
  sp.relator_mass = p.total_relator_length();
  sp.transversal.assign(n, {});
  sp.generator_of.assign(n * S, -1);

  std::vector<char> seen(n, 0), tree_edge(n * S, 0);
  std::vector<Vertex> queue{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Vertex x = queue[i];
    for (int l = 0; l < static_cast<int>(2 * S); ++l) {
      Vertex y = sch.act(x, l);
      if (seen[y]) continue;
      seen[y] = 1;
      queue.push_back(y);
      sp.transversal[y] = sp.transversal[x];
      sp.transversal[y].push_back(l);
      // The undirected edge is stored at its tail for the positive letter.
      SchreierEdge e = (l & 1) ? SchreierEdge{y, l >> 1} : SchreierEdge{x, l >> 1};
      tree_edge[e.coset * S + static_cast<std::size_t>(e.gen)] = 1;
      sp.tree.push_back(e);
    }
  }
  std::sort(sp.tree.begin(), sp.tree.end());
  for (Vertex x = 0; x < n; ++x) {
    for (std::size_t s = 0; s < S; ++s) {
      if (tree_edge[x * S + s]) continue;
      sp.generator_of[x * S + s] = static_cast<int>(sp.generators.size());
      sp.generators.push_back({x, static_cast<int>(s)});
      sp.generator_target.push_back(sch.perm(s)[x]);
    }
  }
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    for (Vertex t = 0; t < n; ++t) {
      Word lifted;
      std::vector<SchreierEdge> trace;
      Vertex y = t;
      for (int l : p.relators[r]) {
        Vertex z = sch.act(y, l);
        SchreierEdge e = (l & 1) ? SchreierEdge{z, l >> 1} : SchreierEdge{y, l >> 1};
        trace.push_back(e);
        int g = sp.generator_of[e.coset * S + static_cast<std::size_t>(e.gen)];
        if (g >= 0) lifted.push_back(2 * g + (l & 1));
        y = z;
      }
      sp.relators.push_back(std::move(lifted));
      sp.edge_trace.push_back(std::move(trace));
      sp.relator_source.emplace_back(r, t);
    }
  }
  return sp;
}

// ---------------------------------------------------------------- Tietze moves

namespace {

struct TietzeState {
  std::vector<Word> rels;
  std::vector<char> alive;
  std::size_t steps = 0;
  std::size_t budget = 0;
  std::size_t length_cap = 0;

  bool spend() { return ++steps <= budget; }

  std::size_t total_length() const {
    std::size_t t = 0;
    for (const auto& r : rels) t += r.size();
    return t;
  }

  void tidy() {
    std::vector<Word> kept;
    for (auto& r : rels) {
      Word c = cyclic_reduce(r);
      if (!c.empty()) kept.push_back(std::move(c));
    }
    std::sort(kept.begin(), kept.end(), [](const Word& a, const Word& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    rels = std::move(kept);
  }

  // Eliminates one generator that occurs exactly once in some relator.
  bool eliminate() {
    for (std::size_t i = 0; i < rels.size(); ++i) {
      if (!spend()) return false;
      const Word& r = rels[i];
      std::map<int, int> count;
      for (int l : r) ++count[l >> 1];
      for (std::size_t pos = 0; pos < r.size(); ++pos) {
        int g = r[pos] >> 1;
        if (count[g] != 1) continue;
        // r rotated to g^e w gives g = w^-1 (e = +1) or g = w (e = -1).
        Word w(r.begin() + static_cast<std::ptrdiff_t>(pos) + 1, r.end());
        w.insert(w.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos));
        Word value = (r[pos] & 1) ? w : inverse_word(w);
        Word value_inv = inverse_word(value);
        std::size_t grown = 0;
        for (std::size_t j = 0; j < rels.size(); ++j) {
          if (j == i) continue;
          for (int l : rels[j]) grown += (l >> 1) == g ? value.size() : 1;
        }
        if (grown > length_cap) continue;
        std::vector<Word> next;
        for (std::size_t j = 0; j < rels.size(); ++j) {
          if (j == i) continue;
          Word out;
          for (int l : rels[j]) {
            if ((l >> 1) != g) {
              out.push_back(l);
            } else {
              const Word& v = (l & 1) ? value_inv : value;
              out.insert(out.end(), v.begin(), v.end());
            }
          }
          next.push_back(std::move(out));
        }
        rels = std::move(next);
        alive[static_cast<std::size_t>(g)] = 0;
        tidy();
        return true;
      }
    }
    return false;
  }

  // Replaces more than half of some relator inside another by the rest.
  bool substitute() {
    for (std::size_t i = 0; i < rels.size(); ++i) {
      const std::size_t li = rels[i].size();
      const std::size_t k = li / 2 + 1;
      for (int side = 0; side < 2; ++side) {
        Word base = side ? inverse_word(rels[i]) : rels[i];
        for (std::size_t rot = 0; rot < li; ++rot) {
          Word rho(base.begin() + static_cast<std::ptrdiff_t>(rot), base.end());
          rho.insert(rho.end(), base.begin(), base.begin() + static_cast<std::ptrdiff_t>(rot));
          Word piece(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(k));
          Word repl = inverse_word(Word(rho.begin() + static_cast<std::ptrdiff_t>(k), rho.end()));
          for (std::size_t j = 0; j < rels.size(); ++j) {
            if (j == i || rels[j].size() < k) continue;
            if (!spend()) return false;
            const Word& r = rels[j];
            const std::size_t lj = r.size();
            for (std::size_t start = 0; start < lj; ++start) {
              bool match = true;
              for (std::size_t t = 0; t < k && match; ++t) match = r[(start + t) % lj] == piece[t];
              if (!match) continue;
              Word out = repl;
              for (std::size_t t = k; t < lj; ++t) out.push_back(r[(start + t) % lj]);
              out = cyclic_reduce(out);
              if (out.size() < lj) {
                rels[j] = std::move(out);
                tidy();
                return true;
              }
            }
          }
        }
      }
    }
    return false;
  }
};

}  // namespace

TietzeResult tietze_simplify(std::size_t generator_count, const std::vector<Word>& relators, std::size_t budget) {
  TietzeState st;
  st.rels = relators;
  st.alive.assign(generator_count, 1);
  st.budget = budget;
  st.tidy();
  st.length_cap = std::max<std::size_t>(4 * st.total_length(), 1000);
  while (st.steps < st.budget) {
    if (st.eliminate()) continue;
    if (st.steps >= st.budget || !st.substitute()) break;
  }
  TietzeResult out;
  std::vector<int> renumber(generator_count, -1);
  for (std::size_t g = 0; g < generator_count; ++g) {
    if (st.alive[g]) renumber[g] = static_cast<int>(out.generator_count++);
  }
  for (const Word& r : st.rels) {
    Word w;
    for (int l : r) w.push_back(2 * renumber[static_cast<std::size_t>(l >> 1)] + (l & 1));
    out.relators.push_back(std::move(w));
  }
  out.d_upper = out.generator_count;
  out.steps = std::min(st.steps, st.budget);
  out.budget_exhausted = st.steps >= st.budget;
  return out;
}

TietzeResult tietze_simplify(const SchreierPresentation& sp, std::size_t budget) {
  return tietze_simplify(sp.generator_count(), sp.relators, budget);
}

std::size_t abelianized_rank(std::size_t generator_count, const std::vector<Word>& relators) {
  using boost::multiprecision::cpp_int;
  std::vector<std::vector<cpp_int>> rows;
  for (const Word& r : relators) {
    std::vector<cpp_int> row(generator_count, 0);
    bool any = false;
    for (int l : r) row[static_cast<std::size_t>(l >> 1)] += (l & 1) ? -1 : 1;
    for (const auto& v : row) any = any || v != 0;
    if (any) rows.push_back(std::move(row));
  }
  // Fraction-free elimination; each row is divided by its content to keep
  // entries small.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < generator_count && rank < rows.size(); ++col) {
    std::size_t pivot = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i) {
      if (rows[i][col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const auto& pr = rows[rank];
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      cpp_int a = pr[col], b = rows[i][col];
      cpp_int content = 0;
      for (std::size_t c = col; c < generator_count; ++c) {
        rows[i][c] = rows[i][c] * a - pr[c] * b;
        content = boost::multiprecision::gcd(content, rows[i][c]);
      }
      if (content > 1) {
        for (std::size_t c = col; c < generator_count; ++c) rows[i][c] /= content;
      }
    }
    ++rank;
  }
  return generator_count - rank;
}

std::size_t abelianized_rank(const SchreierPresentation& sp) { return abelianized_rank(sp.generator_count(), sp.relators); }

std::size_t abelianized_rank(const Presentation& p) { return abelianized_rank(p.generator_count(), p.relators); }

Rational rank_quotient(std::size_t d, std::size_t index) {
  if (index == 0) throw InputError("index must be positive");
  return Rational::make(static_cast<long long>(d) - 1, static_cast<long long>(index));
}

VerifyResult verify_generators(const Presentation& p, const SchreierGraph& sch, const std::vector<Word>& candidates,
                               std::size_t max_cosets) {
  for (const Word& w : candidates) {
    if (sch.apply(0, w) != 0) throw InputError("candidate " + format_word(w, p.generators) + " moves the root coset");
  }
  VerifyResult v;
  v.expected_index = sch.coset_count();
  v.found_index = todd_coxeter(p, candidates, max_cosets).coset_count();
  v.pass = v.found_index == v.expected_index;
  return v;
}

std::vector<RankRow> rank_gradient_table(const Presentation& p, const std::vector<SchreierGraph>& graphs,
                                         const std::vector<std::vector<Word>>& candidates, std::size_t tietze_budget) {
  std::vector<RankRow> rows;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& sch = graphs[i];
    auto sp = reidemeister_schreier(sch, p);
    RankRow row;
    row.index = sch.coset_count();
    if (p.relators.empty()) {
      row.d_lower = row.d_upper = sp.generator_count();
      row.method = "free";
    } else {
      row.d_lower = abelianized_rank(sp);
      row.d_upper = tietze_simplify(sp, tietze_budget).d_upper;
      row.method = "tietze";
      if (i < candidates.size() && !candidates[i].empty() && candidates[i].size() < row.d_upper) {
        if (verify_generators(p, sch, candidates[i]).pass) {
          row.d_upper = candidates[i].size();
          row.method = "verified";
        }
      }
    }
    row.r_lower = rank_quotient(row.d_lower, row.index);
    row.r_upper = rank_quotient(row.d_upper, row.index);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------- Farber statistics

namespace {

// Labeled ball of the Cayley graph around its identity vertex 0.
std::pair<Graph, std::vector<EdgeLabel>> cayley_ball(CayleyKind kind, std::size_t gens, int r) {
  std::vector<LabeledArc> arcs;
  std::size_t n = 0;
  if (kind == CayleyKind::free) {
    // Reduced words up to length r; each vertex remembers its last letter.
    std::vector<int> last{-1};
    std::vector<int> depth{0};
    for (std::size_t i = 0; i < last.size(); ++i) {
      if (depth[i] == r) continue;
      for (int l = 0; l < static_cast<int>(2 * gens); ++l) {
        if (last[i] >= 0 && l == inverse_letter(last[i])) continue;
        Vertex child = static_cast<Vertex>(last.size());
        last.push_back(l);
        depth.push_back(depth[i] + 1);
        if (l & 1) {
          arcs.push_back({child, static_cast<Vertex>(i), l >> 1});
        } else {
          arcs.push_back({static_cast<Vertex>(i), child, l >> 1});
        }
      }
    }
    n = last.size();
  } else {
    if (gens != 2) throw InputError("free abelian ball matching supports two generators");
    const int side = 2 * r + 3;
    auto id = [&](int i, int j) { return static_cast<Vertex>((i + r + 1) * side + (j + r + 1)); };
    for (int i = -r - 1; i <= r + 1; ++i) {
      for (int j = -r - 1; j <= r + 1; ++j) {
        if (i <= r) arcs.push_back({id(i, j), id(i + 1, j), 0});
        if (j <= r) arcs.push_back({id(i, j), id(i, j + 1), 1});
      }
    }
    n = static_cast<std::size_t>(side * side);
    // Move the origin to vertex 0 by swapping ids.
    const Vertex o = id(0, 0);
    for (auto& a : arcs) {
      for (Vertex* v : {&a.from, &a.to}) {
        if (*v == o) {
          *v = 0;
        } else if (*v == 0) {
          *v = o;
        }
      }
    }
  }
  return labeled_graph(n, arcs, 2 * static_cast<int>(gens));
}

}  // namespace

FarberReport farber_statistic(const SchreierGraph& sch, const std::vector<Word>& words, CayleyKind kind, std::optional<int> radius) {
  FarberReport rep;
  for (const Word& w : words) {
    std::size_t fixed = 0;
    for (Vertex x = 0; x < sch.coset_count(); ++x) fixed += sch.apply(x, w) == x;
    rep.words.push_back({format_word(w, sch.generators()), static_cast<double>(fixed) / static_cast<double>(sch.coset_count())});
  }
  if (radius) {
    if (*radius < 0) throw InputError("radius must be nonnegative");
    if (kind == CayleyKind::none) throw InputError("ball matching needs a free or free abelian family");
    rep.radius = radius;
    auto [cg, cl] = cayley_ball(kind, sch.generator_count(), *radius);
    BallDecorations cdeco;
    cdeco.labels = cl;
    const auto target = canonical_code(ball(cg, 0, *radius, cdeco));
    Graph g = sch.to_graph();
    auto labels = sch.edge_labels();
    BallDecorations deco;
    deco.labels = labels;
    std::size_t match = 0;
    for (Vertex x = 0; x < sch.coset_count(); ++x) match += canonical_code(ball(g, x, *radius, deco)) == target;
    rep.ball_match_fraction = static_cast<double>(match) / static_cast<double>(sch.coset_count());
  }
  return rep;
}

// ---------------------------------------------------------------- families

namespace {

std::vector<Vertex> random_permutation(std::size_t n, Rng& rng) {
  std::vector<Vertex> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_below(rng, i)]);
  return p;
}

std::vector<char> letters(std::size_t k) {
  if (k < 1 || k > 26) throw InputError("generator count must lie in 1..26");
  std::vector<char> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(static_cast<char>('a' + i));
  return out;
}

std::size_t positive(long long v, const char* what) {
  if (v < 1) throw InputError(std::string(what) + " must be positive");
  return static_cast<std::size_t>(v);
}

Word power(int letter, std::size_t m) { return Word(m, letter); }

}  // namespace

Family builtin_family(const std::string& name, const std::vector<long long>& params, std::uint64_t seed) {
  Family f;
  f.name = name;
  if (name == "Z-cycle") {
    f.presentation.generators = letters(1);
    f.cayley = CayleyKind::free;
    for (long long v : params) {
      std::size_t n = positive(v, "cycle length");
      std::vector<Vertex> a(n);
      for (std::size_t x = 0; x < n; ++x) a[x] = static_cast<Vertex>((x + 1) % n);
      f.graphs.emplace_back(f.presentation.generators, std::vector<std::vector<Vertex>>{a});
      f.candidates.push_back({power(0, n)});
    }
  } else if (name == "Z2-torus") {
    f.presentation = parse_presentation("gens: a b\nrel: abAB\n");
    f.cayley = CayleyKind::free_abelian;
    for (long long v : params) {
      std::size_t m = positive(v, "torus side");
      std::vector<Vertex> a(m * m), b(m * m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          a[i * m + j] = static_cast<Vertex>(((i + 1) % m) * m + j);
          b[i * m + j] = static_cast<Vertex>(i * m + (j + 1) % m);
        }
      }
      f.graphs.emplace_back(f.presentation.generators, std::vector<std::vector<Vertex>>{a, b});
      f.candidates.push_back({power(0, m), power(2, m)});
    }
  } else if (name == "F2-random" || name == "Fk-random") {
    std::size_t k = 2;
    auto first = params.begin();
    if (name == "Fk-random") {
      if (params.empty()) throw InputError("Fk-random needs k followed by sizes");
      k = positive(params[0], "k");
      ++first;
    }
    f.presentation.generators = letters(k);
    f.cayley = CayleyKind::free;
    std::size_t slot = 0;
    for (auto it = first; it != params.end(); ++it, ++slot) {
      std::size_t n = positive(*it, "size");
      const std::uint64_t base = derive_seed(seed, slot);
      bool done = false;
      for (std::uint64_t attempt = 0; attempt < 1000 && !done; ++attempt) {
        Rng rng(derive_seed(base, attempt));
        std::vector<std::vector<Vertex>> perms;
        for (std::size_t s = 0; s < k; ++s) perms.push_back(random_permutation(n, rng));
        try {
          f.graphs.emplace_back(f.presentation.generators, std::move(perms));
          done = true;
        } catch (const InputError&) {
        }
      }
      if (!done) throw AnalysisError("no transitive sample on " + std::to_string(n) + " points after 1000 draws");
      f.candidates.emplace_back();
    }
  } else if (name == "cyclic") {
    if (params.empty()) throw InputError("cyclic needs the group order N followed by subgroup indices");
    std::size_t N = positive(params[0], "group order");
    f.presentation.generators = letters(1);
    f.presentation.relators.push_back(power(0, N));
    for (auto it = params.begin() + 1; it != params.end(); ++it) {
      std::size_t d = positive(*it, "index");
      if (N % d != 0) throw InputError("index " + std::to_string(d) + " does not divide " + std::to_string(N));
      std::vector<Vertex> a(d);
      for (std::size_t x = 0; x < d; ++x) a[x] = static_cast<Vertex>((x + 1) % d);
      f.graphs.emplace_back(f.presentation.generators, std::vector<std::vector<Vertex>>{a});
      f.candidates.push_back({power(0, d)});
    }
  } else {
    throw InputError("unknown family \"" + name + "\" (known: Z-cycle, Z2-torus, F2-random, Fk-random, cyclic)");
  }
  return f;
}

}  // namespace rgcost
