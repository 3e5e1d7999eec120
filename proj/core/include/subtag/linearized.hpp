#pragma once

#include <span>
#include <vector>

#include "subtag/field.hpp"
#include "subtag/matrix.hpp"

namespace subtag {

/// Coordinate map F_q^l -> F_{q^l} in the polynomial basis 1, y, ..., y^{l-1}.
/// The unit vector e_1 maps to 1.
inline Elem iso_vec(const Field& ext, std::span<const Elem> coords) { return ext.from_coordinates(coords); }
inline std::vector<Elem> iso_vec_inverse(const Field& ext, Elem x) { return ext.coordinates(x); }

/// tracker * a_0 + sum_{t=1..M} a_t * s^{q^{t-1}} with q = |subfield of ext|.
/// `tracker` lives in the subfield; coeffs = a_0..a_M in ext.
Elem linearized_eval(const Field& ext, std::span<const Elem> coeffs, Elem tracker, Elem s);

/// The row (1, s, s^q, ..., s^{q^{M-1}}) of length M+1.
std::vector<Elem> moore_row(const Field& ext, Elem s, std::size_t M);

/// r x (M+1) matrix with rows moore_row(s_i, M).
Matrix moore_matrix(const Field& ext, std::span<const Elem> elements, std::size_t M);

}  // namespace subtag
