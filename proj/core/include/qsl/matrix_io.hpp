#pragma once

#include <string>
#include <vector>

#include "qsl/linalg.hpp"

namespace qsl {

/// Parse one complex literal of the form "a+bi", "a-bi", "a", "bi", "+i",
/// "-i" (decimal or scientific mantissas).  Throws Error on anything else.
Complex parse_complex(const std::string& token);

/// Render with 17 significant digits as "a+bi".
std::string format_complex(Complex z);

/// Shortest exact decimal form with up to 17 significant digits; infinities
/// render as "inf"/"-inf", NaN as "nan".
std::string format_real(double x);

/// Matrix file: first line "dim n", then n rows of n whitespace-separated
/// complex entries.
ComplexMatrix read_matrix_text(const std::string& text, const std::string& origin);
ComplexMatrix read_matrix_file(const std::string& path);
std::string write_matrix_text(const ComplexMatrix& m);

/// Basis file: first line "vectors k", then k rows, one spanning vector
/// per row; all rows must have equal length.
std::vector<CVector> read_basis_text(const std::string& text, const std::string& origin);
std::vector<CVector> read_basis_file(const std::string& path);
std::string write_basis_text(const std::vector<CVector>& vectors);

/// Whole-file helpers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}
