#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "steinauth/design.hpp"
#include "steinauth/ordering.hpp"

namespace steinauth {

// Design file: optional leading '#' comment lines, then "t v k lambda b",
// then b lines of k strictly increasing points. Writers emit blocks in
// lexicographic order; readers accept any order but reject repeats.
Design read_design(std::istream& in);
void write_design(std::ostream& out, const Design& design);

// Matrix file: optional leading '#' comment lines, then "v k b", then b
// lines of k messages (row = encoding rule, in column order).
EncodingMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const EncodingMatrix& matrix);

Design read_design_file(const std::string& path);
EncodingMatrix read_matrix_file(const std::string& path);
void write_design_file(const std::string& path, const Design& design);
void write_matrix_file(const std::string& path, const EncodingMatrix& matrix);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace steinauth
