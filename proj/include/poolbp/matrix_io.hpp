#pragma once

#include <filesystem>
#include <iosfwd>

#include "poolbp/incidence_matrix.hpp"
#include "poolbp/pooling.hpp"

namespace poolbp {

// Text format: a header line "n_rows n_cols" followed by one line per row of
// space-separated 0/1 tokens. A design file holds three such blocks, each
// preceded by a line "#A", "#B" or "#AB" in that order.
//
// Parse failures throw IoError.

IncidenceMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const IncidenceMatrix& m);

IncidenceMatrix import_matrix(const std::filesystem::path& path);
void export_matrix(const std::filesystem::path& path, const IncidenceMatrix& m);

/// Imported designs carry no plane provenance.
PoolingDesign read_design(std::istream& in);
void write_design(std::ostream& out, const PoolingDesign& design);

PoolingDesign import_design(const std::filesystem::path& path);
void export_design(const std::filesystem::path& path, const PoolingDesign& design);

}  // namespace poolbp
