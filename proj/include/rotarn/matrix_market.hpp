#pragma once

#include <iosfwd>
#include <string>

#include "rotarn/linalg.hpp"

namespace rotarn {

enum class MmFormat { Coordinate, Array };

/// Reads a Matrix Market file into a dense complex matrix. Handles
/// coordinate and array formats, real/integer/complex fields, and
/// general/symmetric/skew-symmetric/hermitian storage. Rejects
/// non-finite entries.
ComplexMatrix read_matrix_market(const std::string& path);
ComplexMatrix read_matrix_market(std::istream& in, const std::string& name);

/// Writes with header "%%MatrixMarket matrix <format> complex general".
/// Coordinate form keeps entries with |a_ij| > 0 only.
void write_matrix_market(const std::string& path, const ComplexMatrix& a,
                         MmFormat format = MmFormat::Coordinate);
void write_matrix_market(std::ostream& out, const ComplexMatrix& a,
                         MmFormat format = MmFormat::Coordinate);

}  // namespace rotarn
