#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "orthotsp/instance.hpp"

namespace orthotsp {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

bool starts_like_keyword(const std::string& line) {
  return !line.empty() && std::isalpha(static_cast<unsigned char>(line[0]));
}

double parse_number(const std::string& tok) {
  // from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail(ErrorCode::MalformedInput, "not a number: '" + tok + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

enum class Section { Header, Coords, Weights, Skip };

Matrix assemble_explicit(const std::vector<double>& v, int n, const std::string& fmt) {
  Matrix m = Matrix::Zero(n, n);
  std::size_t k = 0;
  auto need = [&](std::size_t count) {
    if (v.size() != count)
      fail(ErrorCode::MalformedInput,
           "EDGE_WEIGHT_SECTION has " + std::to_string(v.size()) + " values, expected " +
               std::to_string(count) + " for " + fmt);
  };
  const auto nn = static_cast<std::size_t>(n);
  if (fmt == "FULL_MATRIX") {
    need(nn * nn);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = v[k++];
  } else if (fmt == "UPPER_ROW") {
    need(nn * (nn - 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = v[k++];
  } else if (fmt == "LOWER_ROW") {
    need(nn * (nn - 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) m(i, j) = m(j, i) = v[k++];
  } else if (fmt == "UPPER_DIAG_ROW") {
    need(nn * (nn + 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = v[k++];
  } else if (fmt == "LOWER_DIAG_ROW") {
    need(nn * (nn + 1) / 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = v[k++];
  } else {
    fail(ErrorCode::UnsupportedFormat, "EDGE_WEIGHT_FORMAT " + fmt);
  }
  return m;
}

}  // namespace

Instance parse_tsplib(std::string_view text) {
  Instance inst;
  std::string type = "TSP";
  std::string weight_type;
  std::string weight_format;
  int dimension = -1;

  std::vector<Point2> coords;
  std::vector<char> seen;
  int node_lines = 0;
  std::vector<double> weights;
  bool have_coords = false;
  bool have_weights = false;

  Section section = Section::Header;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (starts_like_keyword(line)) {
      std::string key;
      std::string value;
      if (auto colon = line.find(':'); colon != std::string::npos) {
        key = upper(trim(line.substr(0, colon)));
        value = trim(line.substr(colon + 1));
      } else {
        auto toks = split_ws(line);
        key = upper(toks.front());
        if (toks.size() > 1) value = trim(line.substr(line.find(toks[1])));
      }

      if (key == "EOF") break;
      section = Section::Header;
      if (key == "NAME") {
        inst.name = value;
      } else if (key == "TYPE") {
        type = upper(value);
      } else if (key == "DIMENSION") {
        dimension = static_cast<int>(parse_number(value));
      } else if (key == "EDGE_WEIGHT_TYPE") {
        weight_type = upper(value);
      } else if (key == "EDGE_WEIGHT_FORMAT") {
        weight_format = upper(value);
      } else if (key == "NODE_COORD_SECTION") {
        if (dimension <= 0) fail(ErrorCode::MalformedInput, "NODE_COORD_SECTION before DIMENSION");
        coords.assign(dimension, Point2{});
        seen.assign(dimension, 0);
        have_coords = true;
        section = Section::Coords;
      } else if (key == "EDGE_WEIGHT_SECTION") {
        have_weights = true;
        section = Section::Weights;
      } else if (key == "DISPLAY_DATA_SECTION" || key == "FIXED_EDGES_SECTION" ||
                 key == "TOUR_SECTION") {
        section = Section::Skip;
      }
      // COMMENT, CAPACITY, NODE_COORD_TYPE, DISPLAY_DATA_TYPE: ignored.
      continue;
    }

    switch (section) {
      case Section::Coords: {
        auto toks = split_ws(line);
        if (toks.size() < 3) fail(ErrorCode::MalformedInput, "bad node line: " + line);
        int id = static_cast<int>(parse_number(toks[0]));
        if (id < 1 || id > dimension || seen[id - 1])
          fail(ErrorCode::MalformedInput, "bad or duplicate node id in: " + line);
        seen[id - 1] = 1;
        coords[id - 1] = {parse_number(toks[1]), parse_number(toks[2])};
        ++node_lines;
        break;
      }
      case Section::Weights:
        for (const auto& tok : split_ws(line)) weights.push_back(parse_number(tok));
        break;
      case Section::Skip:
        break;
      case Section::Header:
        fail(ErrorCode::MalformedInput, "unexpected data line: " + line);
    }
  }

  if (type != "TSP") fail(ErrorCode::UnsupportedFormat, "TYPE " + type);
  if (dimension < 0) fail(ErrorCode::MalformedInput, "missing DIMENSION");
  inst.n = dimension;
  if (inst.name.empty()) inst.name = "unnamed";

  if (weight_type == "EUC_2D" || weight_type == "CEIL_2D") {
    if (!have_coords) fail(ErrorCode::MalformedInput, "missing NODE_COORD_SECTION");
    if (node_lines != dimension)
      fail(ErrorCode::MalformedInput, "DIMENSION " + std::to_string(dimension) + " but " +
                                          std::to_string(node_lines) + " node lines");
    inst.weight_type = weight_type == "EUC_2D" ? EdgeWeightType::Euc2D : EdgeWeightType::Ceil2D;
    inst.coords = std::move(coords);
  } else if (weight_type == "EXPLICIT") {
    if (!have_weights) fail(ErrorCode::MalformedInput, "missing EDGE_WEIGHT_SECTION");
    if (weight_format.empty()) fail(ErrorCode::MalformedInput, "missing EDGE_WEIGHT_FORMAT");
    inst.weight_type = EdgeWeightType::Explicit;
    inst.explicit_matrix = assemble_explicit(weights, dimension, weight_format);
  } else {
    fail(ErrorCode::UnsupportedFormat,
         "EDGE_WEIGHT_TYPE " + (weight_type.empty() ? std::string("<missing>") : weight_type));
  }

  inst.validate();
  return inst;
}

Instance load_tsplib(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_tsplib(buf.str());
}

Instance random_uniform_instance(int n, std::uint64_t seed) {
  if (n < 3) fail(ErrorCode::TooSmall, "random instance needs n >= 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Instance inst;
  inst.name = "rand" + std::to_string(n) + "-s" + std::to_string(seed);
  inst.n = n;
  inst.weight_type = EdgeWeightType::Euclidean;
  std::vector<Point2> pts(n);
  for (auto& p : pts) {
    p.x = unit(rng);
    p.y = unit(rng);
  }
  inst.coords = std::move(pts);
  return inst;
}

}  // namespace orthotsp
