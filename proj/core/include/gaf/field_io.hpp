#pragma once

#include <filesystem>
#include <optional>
#include <utility>

#include "gaf/field.hpp"

namespace gaf {

/// Metadata stored next to binary fields. anchor/kappa are present for
/// potentials produced by path integration, absent otherwise.
struct FieldSidecar {
  FieldWeight weight = FieldWeight::Scalar;
  std::optional<NodeIndex> anchor;
  std::optional<double> kappa;
};

/// CSV layout: header "x,y,re,im", one node per row, row-major (y outer,
/// x inner), %.17g so values survive a round trip exactly.
void write_field_csv(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_field_csv(const std::filesystem::path& path);

/// Binary layout: magic "GAF1", u32 nx, u32 ny, f64 x_min, x_max, y_min,
/// y_max, then nx*ny (re, im) f64 pairs row-major. Everything little endian.
/// A JSON sidecar at "<path>.json" carries weight and optional anchor/kappa.
void write_field_binary(const std::filesystem::path& path, const ComplexField& f,
                        const FieldSidecar& meta);
std::pair<ComplexField, FieldSidecar> read_field_binary(const std::filesystem::path& path);

} // namespace gaf
