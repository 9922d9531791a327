#pragma once

#include <vector>

namespace rgcost {

/// Vertex coloring with colors 1..color_count.
struct Coloring {
  std::vector<int> colors;
  int color_count = 0;

  std::size_t size() const { return colors.size(); }
  int operator[](std::size_t v) const { return colors[v]; }

  /// Throws InputError if a color is outside 1..color_count or the size is
  /// not `vertex_count`.
  void validate(std::size_t vertex_count) const;

  static Coloring constant(std::size_t n, int color_count = 1) {
    return {std::vector<int>(n, 1), color_count};
  }

  bool operator==(const Coloring&) const = default;
};

}  // namespace rgcost
