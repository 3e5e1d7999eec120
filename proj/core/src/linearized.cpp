#include "subtag/linearized.hpp"

#include "subtag/error.hpp"

namespace subtag {

Elem linearized_eval(const Field& ext, std::span<const Elem> coeffs, Elem tracker, Elem s) {
  if (coeffs.empty()) raise(Errc::LengthMismatch, "linearized_eval needs at least the affine coefficient");
  Elem acc = ext.embed(tracker) * coeffs[0];
  Elem power = s;
  for (std::size_t t = 1; t < coeffs.size(); ++t) {
    if (t > 1) power = ext.frobenius(power, 1);
    acc += coeffs[t] * power;
  }
  return acc;
}

std::vector<Elem> moore_row(const Field& ext, Elem s, std::size_t M) {
  std::vector<Elem> row;
  row.reserve(M + 1);
  row.push_back(ext.one());
  Elem power = s;
  for (std::size_t t = 0; t < M; ++t) {
    if (t > 0) power = ext.frobenius(power, 1);
    row.push_back(power);
  }
  return row;
}

Matrix moore_matrix(const Field& ext, std::span<const Elem> elements, std::size_t M) {
  std::vector<std::vector<Elem>> rows;
  rows.reserve(elements.size());
  for (auto s : elements) {
    if (!ext.owns(s)) raise(Errc::FieldMismatch, "moore_matrix element from another field");
    rows.push_back(moore_row(ext, s, M));
  }
  return Matrix::from_rows(ext, M + 1, rows);
}

}  // namespace subtag
