#pragma once

#include <filesystem>
#include <iosfwd>

#include "spectra/csr_matrix.hpp"

namespace spectra {

/// Reads `%%MatrixMarket matrix coordinate real {symmetric|general}` data.
/// Symmetric files store one triangle, which is mirrored; duplicate entries
/// are summed. Throws ParseError (with the offending line) on malformed
/// input, non-square shapes, or non-real fields.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes the lower triangle under a `symmetric` header when the matrix is
/// symmetric, otherwise every entry under `general`.
void write_matrix_market(std::ostream& out, const CsrMatrix& a);

}  // namespace spectra
