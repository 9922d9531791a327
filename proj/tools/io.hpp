#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "rgcost/graph.hpp"
#include "rgcost/schreier.hpp"

namespace rgcost::cli {

inline constexpr const char* kVersion = "rgcost 1.0.0";

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);
/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// A graph file, or a generated graph: cycle:N, path:N, complete:N, star:N,
/// torus:RxC, petersen.
Graph load_graph(const std::string& spec);
SchreierGraph load_schreier(const std::string& path);

/// Comma-separated words over the presentation alphabet.
std::vector<Word> parse_word_list(const std::string& text, const std::vector<char>& generators);

std::string csv_join(const std::vector<std::string>& cells);
std::string num(double v);

/// Gnuplot data: a comment header naming the columns, then whitespace rows.
std::string plot_data(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows);

}  // namespace rgcost::cli
