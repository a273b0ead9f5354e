#pragma once

#include "image.hpp"

#include <string>
#include <vector>

namespace c2f {

// OTB-layout sequence: <dir>/img/*.{jpg,png} and <dir>/groundtruth_rect.txt.
// An optional <dir>/attributes.txt lists challenge tags (BC, OCC, ...).
struct Sequence {
  std::string name;
  std::vector<std::string> frames;
  std::vector<BoundingBox> ground_truth;  // 0-based
  std::vector<std::string> attributes;

  std::size_t size() const { return frames.size(); }
};

// Parses one ground-truth row "x,y,w,h" (comma, tab or space separated),
// converting OTB's 1-based corner to 0-based. Throws a format error.
BoundingBox parse_ground_truth_row(const std::string& row, std::size_t line_number);

Sequence load_sequence(const std::string& dir);

// Every subdirectory of `dir` holding a ground-truth file, sorted by name.
std::vector<std::string> list_sequences(const std::string& dir);

// Writes boxes in OTB convention (1-based, comma separated).
void write_ground_truth(const std::string& path, const std::vector<BoundingBox>& boxes);

}  // namespace c2f
