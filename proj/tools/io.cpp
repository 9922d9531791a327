#include "io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rgcost/error.hpp"

namespace rgcost::cli {

namespace fs = std::filesystem;

void write_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move output into place at " + path + ": " + ec.message());
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_atomic(path, content);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw AnalysisError("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

namespace {

std::size_t size_arg(const std::string& text, const std::string& what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v == 0) {
    throw InputError("bad " + what + " \"" + text + "\"");
  }
  return v;
}

}  // namespace

Graph load_graph(const std::string& spec) {
  auto colon = spec.find(':');
  if (spec == "petersen") return petersen_graph();
  if (colon != std::string::npos && !fs::exists(spec)) {
    const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "cycle") return cycle_graph(size_arg(arg, "cycle length"));
    if (kind == "path") return path_graph(size_arg(arg, "path length"));
    if (kind == "complete") return complete_graph(size_arg(arg, "clique size"));
    if (kind == "star") return star_graph(size_arg(arg, "leaf count"));
    if (kind == "torus") {
      auto x = arg.find('x');
      if (x == std::string::npos) throw InputError("torus needs RxC");
      return torus_graph(size_arg(arg.substr(0, x), "torus rows"), size_arg(arg.substr(x + 1), "torus columns"));
    }
    throw InputError("unknown graph generator \"" + kind + "\"");
  }
  return read_graph_file(spec);
}

SchreierGraph load_schreier(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(e.what());
  }
  return SchreierGraph::from_json(j);
}

std::vector<Word> parse_word_list(const std::string& text, const std::vector<char>& generators) {
  std::vector<Word> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_word(item, generators));
  }
  return out;
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += c;
    }
  }
  return out + "\n";
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string plot_data(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
  std::string out = "#";
  for (const auto& c : columns) out += " " + c;
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? " " : "") + r[i];
    out += "\n";
  }
  return out;
}

}  // namespace rgcost::cli
