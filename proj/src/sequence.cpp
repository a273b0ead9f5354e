#include "sequence.hpp"

#include "error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace c2f {

namespace fs = std::filesystem;

namespace {

constexpr const char* kGroundTruth = "groundtruth_rect.txt";

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png" || ext == ".bmp";
}

}  // namespace

BoundingBox parse_ground_truth_row(const std::string& row, std::size_t line_number) {
  std::string normalized = row;
  std::replace_if(normalized.begin(), normalized.end(), [](char ch) { return ch == ',' || ch == '\t'; }, ' ');
  std::istringstream in(normalized);
  double v[4];
  std::string extra;
  if (!(in >> v[0] >> v[1] >> v[2] >> v[3]) || (in >> extra))
    fail(ErrorCode::Format, "ground truth line " + std::to_string(line_number) + ": expected x,y,w,h but got '" +
                                row + "'");
  BoundingBox box{v[0] - 1.0, v[1] - 1.0, v[2], v[3]};
  if (!box.valid())
    fail(ErrorCode::Format, "ground truth line " + std::to_string(line_number) + ": box must have positive size");
  return box;
}

Sequence load_sequence(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) fail(ErrorCode::Io, "sequence directory not found: " + dir);
  const fs::path img_dir = root / "img";
  const fs::path gt_path = root / kGroundTruth;
  if (!fs::is_directory(img_dir)) fail(ErrorCode::Format, "sequence " + dir + " has no img/ directory");
  if (!fs::is_regular_file(gt_path)) fail(ErrorCode::Format, "sequence " + dir + " has no " + kGroundTruth);

  Sequence seq;
  seq.name = root.filename().string();
  if (seq.name.empty()) seq.name = root.parent_path().filename().string();
  for (const auto& entry : fs::directory_iterator(img_dir))
    if (entry.is_regular_file() && is_image(entry.path())) seq.frames.push_back(entry.path().string());
  std::sort(seq.frames.begin(), seq.frames.end());

  std::ifstream gt(gt_path);
  if (!gt) fail(ErrorCode::Io, "cannot read " + gt_path.string());
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(gt, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    seq.ground_truth.push_back(parse_ground_truth_row(line, line_number));
  }

  if (seq.frames.size() != seq.ground_truth.size())
    fail(ErrorCode::Format, "sequence " + seq.name + ": " + std::to_string(seq.frames.size()) + " frames but " +
                                std::to_string(seq.ground_truth.size()) + " ground-truth rows");
  if (seq.frames.size() < 2) fail(ErrorCode::Format, "sequence " + seq.name + ": needs at least 2 frames");

  const fs::path attr_path = root / "attributes.txt";
  if (fs::is_regular_file(attr_path)) {
    std::ifstream attrs(attr_path);
    std::string token;
    while (attrs >> token) {
      std::replace(token.begin(), token.end(), ',', ' ');
      std::istringstream parts(token);
      std::string tag;
      while (parts >> tag) seq.attributes.push_back(tag);
    }
  }
  return seq;
}

std::vector<std::string> list_sequences(const std::string& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::Io, "dataset directory not found: " + dir);
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::is_regular_file(entry.path() / kGroundTruth)) out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

void write_ground_truth(const std::string& path, const std::vector<BoundingBox>& boxes) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  char buf[128];
  for (const auto& b : boxes) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f,%.2f\n", b.x + 1.0, b.y + 1.0, b.width, b.height);
    out << buf;
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace c2f
