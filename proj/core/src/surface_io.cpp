#include "fourier_ocp/surface_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

namespace {

constexpr const char* kHeader = "fourier-surface v1";

std::string next_line(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return line;
  }
  throw DataError("unexpected end of surface file after line " + std::to_string(line_no));
}

std::istringstream expect_keyword(const std::string& line, const char* keyword, int line_no) {
  std::istringstream ss(line);
  std::string word;
  ss >> word;
  if (word != keyword) {
    throw DataError(fmt::format("line {}: expected '{}', got '{}'", line_no, keyword, word));
  }
  return ss;
}

FourierSurface read_block(std::istream& in, int& line_no, bool header_consumed) {
  if (!header_consumed) {
    const std::string header = next_line(in, line_no);
    if (header != kHeader) throw DataError(fmt::format("line {}: expected '{}'", line_no, kHeader));
  }
  std::size_t dims = 0;
  {
    auto ss = expect_keyword(next_line(in, line_no), "dims", line_no);
    if (!(ss >> dims) || dims < 1) throw DataError(fmt::format("line {}: bad dims", line_no));
  }
  std::vector<int> orders(dims);
  {
    auto ss = expect_keyword(next_line(in, line_no), "orders", line_no);
    for (auto& o : orders) {
      if (!(ss >> o) || o < 0) throw DataError(fmt::format("line {}: bad orders", line_no));
    }
  }
  double horizon = 0.0;
  std::vector<double> lo(dims - 1), hi(dims - 1);
  {
    auto ss = expect_keyword(next_line(in, line_no), "domain", line_no);
    if (!(ss >> horizon)) throw DataError(fmt::format("line {}: bad domain", line_no));
    for (std::size_t a = 0; a + 1 < dims; ++a) {
      if (!(ss >> lo[a] >> hi[a])) throw DataError(fmt::format("line {}: bad domain", line_no));
    }
  }
  SurfaceLayout layout(DomainBox(horizon, lo, hi), orders[0], std::vector<int>(orders.begin() + 1, orders.end()));
  FourierSurface surface(layout);
  std::vector<char> seen(layout.size(), 0);
  std::vector<int> n(dims - 1);
  for (std::size_t k = 0; k < layout.size(); ++k) {
    std::istringstream ss(next_line(in, line_no));
    std::size_t b = 0;
    int m = 0;
    ss >> b >> m;
    for (auto& v : n) ss >> v;
    std::string value_text;
    ss >> value_text;
    if (!ss && value_text.empty()) throw DataError(fmt::format("line {}: malformed coefficient line", line_no));
    std::size_t flat = 0;
    try {
      flat = layout.flat_index(b, m, n);
    } catch (const ArgumentError&) {
      throw DataError(fmt::format("line {}: coefficient index out of range", line_no));
    }
    if (seen[flat]) throw DataError(fmt::format("line {}: duplicate coefficient", line_no));
    seen[flat] = 1;
    try {
      std::size_t used = 0;
      surface.coeffs()[flat] = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(fmt::format("line {}: bad coefficient value '{}'", line_no, value_text));
    }
  }
  return surface;
}

}  // namespace

void write_surface(std::ostream& out, const FourierSurface& surface) {
  const auto& layout = surface.layout();
  const auto& domain = layout.domain();
  const auto orders = layout.orders();
  out << kHeader << '\n';
  out << "dims " << layout.input_dims() << '\n';
  out << "orders";
  for (int o : orders) out << ' ' << o;
  out << '\n';
  out << "domain " << fmt::format("{:.17g}", domain.horizon());
  for (std::size_t a = 0; a < domain.ic_axes(); ++a) {
    out << fmt::format(" {:.17g} {:.17g}", domain.ic_lo()[a], domain.ic_hi()[a]);
  }
  out << '\n';
  std::vector<int> n(domain.ic_axes());
  for (std::size_t flat = 0; flat < layout.size(); ++flat) {
    std::size_t b = 0;
    int m = 0;
    layout.unflatten(flat, b, m, n);
    out << b << ' ' << m;
    for (int v : n) out << ' ' << v;
    out << fmt::format(" {:.17g}\n", surface.coeffs()[flat]);
  }
}

FourierSurface read_surface(std::istream& in) {
  int line_no = 0;
  return read_block(in, line_no, false);
}

void save_surfaces(const std::filesystem::path& path, const std::vector<FourierSurface>& surfaces) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RunError("cannot write " + path.string());
  for (const auto& s : surfaces) write_surface(out, s);
  if (!out) throw RunError("write failed for " + path.string());
}

std::vector<FourierSurface> load_surfaces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<FourierSurface> surfaces;
  int line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line != kHeader) throw DataError(fmt::format("line {}: expected '{}'", line_no, kHeader));
    surfaces.push_back(read_block(in, line_no, true));
  }
  if (surfaces.empty()) throw DataError(path.string() + " holds no surfaces");
  return surfaces;
}

}  // namespace fourier_ocp
