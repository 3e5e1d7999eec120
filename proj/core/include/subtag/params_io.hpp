#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subtag/elliptic.hpp"
#include "subtag/scheme.hpp"

namespace subtag {

/// The evaluation data behind an AG code, kept for analysis.
struct CurveBlock {
  Elem a;
  Elem b;
  unsigned degree = 0;
  std::vector<ec::Point> points;
};

struct ParamsBundle {
  PublicParams pp;
  /// RS evaluation points when the code is Reed-Solomon.
  std::optional<std::vector<Elem>> rs_points;
  std::optional<CurveBlock> curve;

  /// Curve data as an AG code spec over the extension field. Valid while
  /// this bundle is alive.
  std::optional<ec::AgCodeSpec> ag_spec() const;
};

/// Text format, one directive per line ('#' comments):
///   subtag-params 1
///   base <p> <m> <modulus coefficients, little-endian>
///   extension <l> <modulus coefficients over F_q, little-endian>
///   scheme <n> <M>
///   code <V> <kdim>
///   row <V entries>                 (kdim lines; entries "c0,c1,..")
///   rs <V points>                   (optional)
///   curve <a> <b> <deg>             (optional)
///   point <x> <y>                   (V lines after curve)
std::string write_params(const ParamsBundle& bundle);
/// Raises ParseError for malformed text and the usual validation errors.
ParamsBundle read_params(std::string_view text);

ParamsBundle load_params_file(const std::string& path);
void save_params_file(const std::string& path, const ParamsBundle& bundle);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace subtag
