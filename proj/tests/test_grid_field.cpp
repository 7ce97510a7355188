#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "gaf/field.hpp"
#include "gaf/field_io.hpp"
#include "gaf/grid.hpp"

using namespace gaf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  static int counter = 0;
  return fs::temp_directory_path() /
         (std::string("gaf_gridfield_") + std::to_string(++counter) + "_" + name);
}

ComplexField random_field(const GridDomain& g, unsigned seed) {
  ComplexField f = make_constant_field(g, {0, 0}, FieldWeight::Spinor);
  // xorshift keeps the fixture independent of library RNG choices
  std::uint64_t s = 0x9e3779b97f4a7c15ull + seed;
  auto next = [&s] {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s % 20001) / 10000.0 - 1.0;
  };
  for (auto& v : f.values) v = Complex(next(), next());
  return f;
}

} // namespace

TEST_CASE("grid geometry and indexing") {
  GridDomain g = make_grid(-1.0, 1.0, 0.0, 0.5, 5, 3);
  CHECK(g.hx() == doctest::Approx(0.5));
  CHECK(g.hy() == doctest::Approx(0.25));
  CHECK(g.size() == 15);
  CHECK(g.index(0, 0) == 0);
  CHECK(g.index(4, 0) == 4);
  CHECK(g.index(0, 1) == 5); // row-major, y outer
  CHECK(g.node(2, 1) == Complex(0.0, 0.25));
  CHECK(g.contains_index(4, 2));
  CHECK_FALSE(g.contains_index(5, 0));
  CHECK_FALSE(g.contains_index(0, -1));
  CHECK(g == make_grid(-1.0, 1.0, 0.0, 0.5, 5, 3));
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(make_grid(0, 1, 0, 1, 1, 4), DegenerateGrid);
  CHECK_THROWS_AS(make_grid(0, 1, 0, 1, 4, 0), DegenerateGrid);
  CHECK_THROWS_AS(make_grid(1, 1, 0, 1, 4, 4), DegenerateGrid);
  CHECK_THROWS_AS(make_grid(0, -1, 0, 1, 4, 4), DegenerateGrid);
}

TEST_CASE("mismatched grids are rejected by binary ops") {
  GridDomain a = make_grid(0, 1, 0, 1, 8, 8);
  GridDomain b = make_grid(0, 1, 0, 1, 8, 9);
  ComplexField fa = make_constant_field(a, {1, 0});
  ComplexField fb = make_constant_field(b, {1, 0});
  CHECK_THROWS_AS((void)add(fa, fb), GridMismatch);
  CHECK_THROWS_AS(require_same_grid(a, b, "test"), GridMismatch);
}

TEST_CASE("pointwise algebra") {
  GridDomain g = make_grid(0, 1, 0, 1, 6, 5);
  ComplexField x = sample_function(g, [](Complex z) { return z; });
  ComplexField c = make_constant_field(g, {2, -1});

  ComplexField s = add(x, c);
  CHECK(s.at(3, 2) == x.at(3, 2) + Complex(2, -1));
  CHECK(sub(s, c).at(3, 2) == x.at(3, 2));
  CHECK(mul(x, c).at(1, 4) == x.at(1, 4) * Complex(2, -1));
  CHECK(std::abs(div(mul(x, c), c).at(1, 4) - x.at(1, 4)) <= 1e-15);
  CHECK(scale(x, {0, 1}).at(2, 2) == x.at(2, 2) * Complex(0, 1));
  CHECK(conj_field(x).at(2, 3) == std::conj(x.at(2, 3)));
  CHECK(shift(x, {0.5, 0}).at(0, 0) == x.at(0, 0) + 0.5);
}

TEST_CASE("norms: trapezoid weights make a unit constant exactly 1 on the unit square") {
  GridDomain g = make_grid(0, 1, 0, 1, 17, 9);
  ComplexField one = make_constant_field(g, {0, 1});
  FieldNorms n = field_norms(one);
  CHECK(n.l2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n.sup == 1.0);
  CHECK(n.max_real_part == 0.0);
}

TEST_CASE("interior norms drop the boundary layers") {
  GridDomain g = make_grid(0, 1, 0, 1, 16, 16);
  ComplexField f = make_constant_field(g, {0, 0});
  // contaminate the outermost three layers only
  for (int k = 0; k < 16; ++k)
    for (int j = 0; j < 16; ++j)
      if (j < 3 || j >= 13 || k < 3 || k >= 13) f.at(j, k) = {100.0, 0};
  CHECK(interior_norms(f, 3).sup == 0.0);
  CHECK(interior_norms(f, 2).sup == 100.0);
  CHECK(field_norms(f).sup == 100.0);
}

TEST_CASE("sup_difference") {
  GridDomain g = make_grid(0, 1, 0, 1, 4, 4);
  ComplexField a = make_constant_field(g, {1, 1});
  ComplexField b = make_constant_field(g, {1, 1});
  CHECK(sup_difference(a, b) == 0.0);
  b.at(2, 1) += Complex(0, 0.25);
  CHECK(sup_difference(a, b) == doctest::Approx(0.25));
}

TEST_CASE("csv round-trip is bitwise") {
  GridDomain g = make_grid(-0.5, 1.5, 0.25, 0.75, 9, 7);
  ComplexField f = random_field(g, 7);
  fs::path p = temp_file("roundtrip.csv");
  write_field_csv(p, f);
  ComplexField r = read_field_csv(p);
  CHECK(r.domain == g);
  CHECK(sup_difference(r, f) == 0.0);
  fs::remove(p);
}

TEST_CASE("csv header and lattice are validated") {
  fs::path p = temp_file("bad.csv");
  {
    std::ofstream out(p);
    out << "a,b,re,im\n0,0,1,0\n";
  }
  CHECK_THROWS_AS((void)read_field_csv(p), IoError);
  {
    std::ofstream out(p);
    // second x step deviates from the first: not an even lattice
    out << "x,y,re,im\n0,0,1,0\n1,0,1,0\n2.5,0,1,0\n"
        << "0,1,1,0\n1,1,1,0\n2.5,1,1,0\n";
  }
  CHECK_THROWS_AS((void)read_field_csv(p), IoError);
  fs::remove(p);
}

TEST_CASE("binary round-trip preserves values and sidecar") {
  GridDomain g = make_grid(-1, 1, -2, 2, 6, 11);
  ComplexField f = random_field(g, 11);
  f.weight = FieldWeight::Density;
  FieldSidecar meta;
  meta.weight = FieldWeight::Density;
  meta.anchor = NodeIndex{2, 3};
  meta.kappa = -0.75;
  fs::path p = temp_file("roundtrip.gaf");
  write_field_binary(p, f, meta);
  auto [r, back] = read_field_binary(p);
  CHECK(r.domain == g);
  CHECK(sup_difference(r, f) == 0.0);
  CHECK(r.weight == FieldWeight::Density);
  CHECK(back.anchor.has_value());
  CHECK(back.anchor->j == 2);
  CHECK(back.anchor->k == 3);
  CHECK(back.kappa == doctest::Approx(-0.75));
  fs::remove(p);
  fs::remove(p.string() + ".json");
}

TEST_CASE("binary layout is pinned: magic, little-endian sizes, bounds, row-major data") {
  GridDomain g = make_grid(0.0, 1.0, 0.0, 1.0, 2, 2);
  ComplexField f = make_constant_field(g, {0, 0});
  f.at(0, 0) = {1.0, 2.0};
  f.at(1, 0) = {3.0, 4.0};
  f.at(0, 1) = {5.0, 6.0};
  f.at(1, 1) = {7.0, 8.0};
  fs::path p = temp_file("layout.gaf");
  write_field_binary(p, f, {});

  std::ifstream in(p, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 4 + 2 * 4 + 4 * 8 + 4 * 16);
  CHECK(std::string(bytes.data(), 4) == "GAF1");

  auto u32_at = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
    return v;
  };
  auto f64_at = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + i]);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  };
  CHECK(u32_at(4) == 2);
  CHECK(u32_at(8) == 2);
  CHECK(f64_at(12) == 0.0);
  CHECK(f64_at(20) == 1.0);
  CHECK(f64_at(28) == 0.0);
  CHECK(f64_at(36) == 1.0);
  // row-major (y outer): (0,0) (1,0) (0,1) (1,1), re then im
  for (int i = 0; i < 8; ++i) CHECK(f64_at(44 + 8 * i) == 1.0 + i);
  fs::remove(p);
  fs::remove(p.string() + ".json");
}

TEST_CASE("binary reader rejects corrupt headers") {
  fs::path p = temp_file("corrupt.gaf");
  {
    std::ofstream out(p, std::ios::binary);
    out << "NOPE";
  }
  CHECK_THROWS_AS((void)read_field_binary(p), IoError);
  {
    std::ofstream out(p, std::ios::binary);
    out << "GAF1";
    // sizes present but data truncated
    const std::uint32_t n[2] = {4, 4};
    out.write(reinterpret_cast<const char*>(n), 8);
    const double bounds[4] = {0, 1, 0, 1};
    out.write(reinterpret_cast<const char*>(bounds), 32);
  }
  CHECK_THROWS_AS((void)read_field_binary(p), IoError);
  fs::remove(p);
  fs::remove(p.string() + ".json");
}

TEST_CASE("expression-backed fields keep their handle") {
  GridDomain g = make_grid(0, 1, 0, 1, 4, 4);
  ExprHandle h{parse("z*z"), {}};
  ComplexField f = sample_expression(g, h, FieldWeight::Scalar);
  CHECK(static_cast<bool>(f.expr));
  CHECK(f.at(2, 1) == f.expr(g.node(2, 1)));
  // algebra drops the handle: results are no longer closed-form
  CHECK_FALSE(static_cast<bool>(add(f, f).expr));
}
