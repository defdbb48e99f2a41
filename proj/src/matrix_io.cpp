#include "poolbp/matrix_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "poolbp/errors.hpp"

namespace poolbp {

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw IoError("line " + std::to_string(line_no) + ": " + what);
}

IncidenceMatrix read_block(std::istream& in, std::size_t& line_no) {
  std::string line;
  if (!next_content_line(in, line, line_no)) fail(line_no, "missing matrix header");
  std::istringstream header(line);
  long long n_rows = -1;
  long long n_cols = -1;
  std::string extra;
  if (!(header >> n_rows >> n_cols) || (header >> extra) || n_rows < 0 || n_cols < 0) {
    fail(line_no, "expected header 'n_rows n_cols'");
  }
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(n_rows));
  for (auto& row : rows) {
    if (!next_content_line(in, line, line_no)) fail(line_no, "file ends before all rows were read");
    std::istringstream tokens(line);
    std::string tok;
    long long j = 0;
    while (tokens >> tok) {
      if (tok == "1") {
        if (j < n_cols) row.push_back(static_cast<Index>(j));
      } else if (tok != "0") {
        fail(line_no, "non-binary token '" + tok + "'");
      }
      ++j;
    }
    if (j != n_cols) {
      fail(line_no, "row has " + std::to_string(j) + " entries, header says " + std::to_string(n_cols));
    }
  }
  return IncidenceMatrix(static_cast<std::size_t>(n_rows), static_cast<std::size_t>(n_cols), std::move(rows));
}

void expect_tag(std::istream& in, std::size_t& line_no, const std::string& tag) {
  std::string line;
  if (!next_content_line(in, line, line_no)) fail(line_no, "missing block tag " + tag);
  std::istringstream s(line);
  std::string got;
  s >> got;
  if (got != tag) fail(line_no, "expected block tag " + tag + ", found '" + got + "'");
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

IncidenceMatrix read_matrix(std::istream& in) {
  std::size_t line_no = 0;
  return read_block(in, line_no);
}

void write_matrix(std::ostream& out, const IncidenceMatrix& m) {
  out << m.n_rows() << ' ' << m.n_cols() << '\n';
  std::string line;
  for (std::size_t i = 0; i < m.n_rows(); ++i) {
    line.assign(m.n_cols() == 0 ? 0 : 2 * m.n_cols() - 1, ' ');
    for (std::size_t j = 0; j < m.n_cols(); ++j) line[2 * j] = '0';
    for (Index j : m.row(i)) line[2 * j] = '1';
    out << line << '\n';
  }
}

IncidenceMatrix import_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

void export_matrix(const std::filesystem::path& path, const IncidenceMatrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
  if (!out) throw IoError("failed writing " + path.string());
}

PoolingDesign read_design(std::istream& in) {
  std::size_t line_no = 0;
  expect_tag(in, line_no, "#A");
  auto m_a = read_block(in, line_no);
  expect_tag(in, line_no, "#B");
  auto m_b = read_block(in, line_no);
  expect_tag(in, line_no, "#AB");
  auto m_ab = read_block(in, line_no);
  PoolingDesign design{std::move(m_a), std::move(m_b), std::move(m_ab), std::nullopt};
  if (design.m_b.n_cols() != design.m_a.n_cols() || design.m_ab.n_cols() != design.m_a.n_cols()) {
    throw IoError("design blocks disagree on the number of items");
  }
  return design;
}

void write_design(std::ostream& out, const PoolingDesign& design) {
  out << "#A\n";
  write_matrix(out, design.m_a);
  out << "#B\n";
  write_matrix(out, design.m_b);
  out << "#AB\n";
  write_matrix(out, design.m_ab);
}

PoolingDesign import_design(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_design(in);
}

void export_design(const std::filesystem::path& path, const PoolingDesign& design) {
  auto out = open_out(path);
  write_design(out, design);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace poolbp
