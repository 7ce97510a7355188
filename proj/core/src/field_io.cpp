#include "gaf/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace gaf {

namespace {

using nlohmann::json;

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(u);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

FieldWeight weight_from_pq(double p, double q, const std::filesystem::path& path) {
  if (p == 0.0 && q == 0.0) return FieldWeight::Scalar;
  if (p == 0.5 && q == 0.0) return FieldWeight::Spinor;
  if (p == 0.5 && q == 0.5) return FieldWeight::Density;
  io_fail(path, "sidecar weight [" + std::to_string(p) + "," + std::to_string(q) +
                    "] is not one of [0,0], [0.5,0], [0.5,0.5]");
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

} // namespace

void write_field_csv(const std::filesystem::path& path, const ComplexField& f) {
  std::ofstream out(path);
  if (!out) io_fail(path, "cannot open for writing");
  out << "x,y,re,im\n";
  const GridDomain& g = f.domain;
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j) {
      const Complex v = f.at(j, k);
      out << fmt17(g.x(j)) << ',' << fmt17(g.y(k)) << ',' << fmt17(v.real()) << ','
          << fmt17(v.imag()) << '\n';
    }
  if (!out) io_fail(path, "write failed");
}

ComplexField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) io_fail(path, "empty file");
  // Tolerate surrounding whitespace and a trailing CR but not a different schema.
  std::string header;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) header += c;
  if (header != "x,y,re,im") io_fail(path, "expected header 'x,y,re,im', got '" + line + "'");

  std::vector<double> xs, ys, re, im;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    double v[4];
    std::istringstream row(line);
    std::string cell;
    int got = 0;
    while (got < 4 && std::getline(row, cell, ',')) {
      try {
        v[got] = std::stod(cell);
      } catch (const std::exception&) {
        io_fail(path, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      ++got;
    }
    if (got != 4) io_fail(path, "line " + std::to_string(lineno) + ": expected 4 columns");
    xs.push_back(v[0]);
    ys.push_back(v[1]);
    re.push_back(v[2]);
    im.push_back(v[3]);
  }
  if (xs.empty()) io_fail(path, "no data rows");

  // Row-major with y outer: the first block of constant y spans one grid row.
  std::size_t nx = 1;
  while (nx < xs.size() && ys[nx] == ys[0]) ++nx;
  if (xs.size() % nx != 0)
    io_fail(path, "row count " + std::to_string(xs.size()) + " is not a multiple of nx=" +
                      std::to_string(nx));
  const std::size_t ny = xs.size() / nx;

  GridDomain g = make_grid(xs[0], xs[nx - 1], ys[0], ys[(ny - 1) * nx],
                           static_cast<int>(nx), static_cast<int>(ny));
  const double tol_x = 1e-9 * (std::abs(g.x_min) + std::abs(g.x_max) + g.hx());
  const double tol_y = 1e-9 * (std::abs(g.y_min) + std::abs(g.y_max) + g.hy());
  ComplexField f{g, std::vector<Complex>(g.size()), FieldWeight::Scalar, {}};
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j) {
      const std::size_t r = static_cast<std::size_t>(k) * nx + static_cast<std::size_t>(j);
      if (std::abs(xs[r] - g.x(j)) > tol_x || std::abs(ys[r] - g.y(k)) > tol_y)
        io_fail(path, "line " + std::to_string(r + 2) + ": node (" + fmt17(xs[r]) + "," +
                          fmt17(ys[r]) + ") breaks the uniform row-major lattice");
      f.values[g.index(j, k)] = Complex(re[r], im[r]);
    }
  return f;
}

void write_field_binary(const std::filesystem::path& path, const ComplexField& f,
                        const FieldSidecar& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out.write("GAF1", 4);
  const GridDomain& g = f.domain;
  put_u32(out, static_cast<std::uint32_t>(g.nx));
  put_u32(out, static_cast<std::uint32_t>(g.ny));
  put_f64(out, g.x_min);
  put_f64(out, g.x_max);
  put_f64(out, g.y_min);
  put_f64(out, g.y_max);
  for (const Complex& v : f.values) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  if (!out) io_fail(path, "write failed");

  json side;
  side["weight"] = {weight_p(meta.weight), weight_q(meta.weight)};
  if (meta.anchor) side["anchor"] = {meta.anchor->j, meta.anchor->k};
  if (meta.kappa) side["kappa"] = *meta.kappa;
  std::ofstream sc(sidecar_path(path));
  if (!sc) io_fail(sidecar_path(path), "cannot open for writing");
  sc << side.dump(2) << '\n';
  if (!sc) io_fail(sidecar_path(path), "write failed");
}

std::pair<ComplexField, FieldSidecar> read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "GAF1") io_fail(path, "bad magic, expected GAF1");
  const std::uint32_t nx = get_u32(in);
  const std::uint32_t ny = get_u32(in);
  const double x_min = get_f64(in);
  const double x_max = get_f64(in);
  const double y_min = get_f64(in);
  const double y_max = get_f64(in);
  if (!in) io_fail(path, "truncated header");
  if (nx > (1u << 20) || ny > (1u << 20)) io_fail(path, "implausible grid size");
  GridDomain g = make_grid(x_min, x_max, y_min, y_max, static_cast<int>(nx),
                           static_cast<int>(ny));
  ComplexField f{g, std::vector<Complex>(g.size()), FieldWeight::Scalar, {}};
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    f.values[i] = Complex(re, im);
  }
  if (!in) io_fail(path, "truncated data section");

  FieldSidecar meta;
  const auto sp = sidecar_path(path);
  std::ifstream sc(sp);
  if (sc) {
    json side;
    try {
      sc >> side;
    } catch (const json::exception& e) {
      io_fail(sp, std::string("bad sidecar JSON: ") + e.what());
    }
    if (side.contains("weight")) {
      const auto& w = side["weight"];
      if (!w.is_array() || w.size() != 2) io_fail(sp, "weight must be [p,q]");
      meta.weight = weight_from_pq(w[0].get<double>(), w[1].get<double>(), sp);
    }
    if (side.contains("anchor")) {
      const auto& a = side["anchor"];
      if (!a.is_array() || a.size() != 2) io_fail(sp, "anchor must be [j,k]");
      meta.anchor = NodeIndex{a[0].get<int>(), a[1].get<int>()};
      if (!g.contains_index(meta.anchor->j, meta.anchor->k))
        io_fail(sp, "anchor node outside the grid");
    }
    if (side.contains("kappa")) meta.kappa = side["kappa"].get<double>();
  }
  f.weight = meta.weight;
  return {std::move(f), meta};
}

} // namespace gaf
