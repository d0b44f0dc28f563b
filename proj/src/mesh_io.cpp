// SPDX-License-Identifier: Apache-2.0
#include "vfvm/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vfvm/errors.hpp"

namespace vfvm {

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::istream& is) {
  std::vector<Token> toks;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    while (ls >> word) toks.push_back({word, lineno});
  }
  return toks;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  int next_int(const char* what) {
    const Token& t = take(what);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t.text, &used);
    } catch (...) {
      fail(t, what);
    }
    if (used != t.text.size()) fail(t, what);
    return v;
  }

  double next_real(const char* what) {
    const Token& t = take(what);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t.text, &used);
    } catch (...) {
      fail(t, what);
    }
    if (used != t.text.size()) fail(t, what);
    return v;
  }

  bool done() const { return pos_ == toks_.size(); }
  int last_line() const { return toks_.empty() ? 0 : toks_.back().line; }

 private:
  const Token& take(const char* what) {
    if (pos_ >= toks_.size())
      throw ParseError("line " + std::to_string(last_line()) + ": unexpected end of file, expected " +
                       what);
    return toks_[pos_++];
  }
  [[noreturn]] void fail(const Token& t, const char* what) {
    throw ParseError("line " + std::to_string(t.line) + ": expected " + what + ", got '" + t.text +
                     "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void expect_index(Cursor& cur, int want, const char* section) {
  const int got = cur.next_int("entry index");
  if (got != want)
    throw ParseError(std::string(section) + " entry " + std::to_string(want) +
                     " has index " + std::to_string(got));
}

}  // namespace

Mesh read_mesh(std::istream& is) {
  Cursor cur(tokenize(is));
  Mesh m;
  const int nv = cur.next_int("vertex count");
  m.dim = cur.next_int("dimension");
  if (m.dim < 1 || m.dim > 3) throw ParseError("dimension must be 1, 2 or 3");
  if (nv <= 0) throw ParseError("vertex count must be positive");
  m.vertices.resize(nv, Vec3{0.0, 0.0, 0.0});
  for (int i = 0; i < nv; ++i) {
    expect_index(cur, i, "vertex");
    for (int k = 0; k < m.dim; ++k) m.vertices[i][k] = cur.next_real("coordinate");
  }
  const int nc = cur.next_int("cell count");
  if (nc <= 0) throw ParseError("cell count must be positive");
  m.cells.resize(nc);
  for (int c = 0; c < nc; ++c) {
    expect_index(cur, c, "cell");
    for (int k = 0; k <= m.dim; ++k) m.cells[c].v[k] = cur.next_int("vertex index");
    m.cells[c].region = cur.next_int("region tag");
  }
  const int nf = cur.next_int("facet count");
  if (nf < 0) throw ParseError("facet count must be nonnegative");
  m.facets.resize(nf);
  for (int f = 0; f < nf; ++f) {
    expect_index(cur, f, "facet");
    for (int k = 0; k < m.dim; ++k) m.facets[f].v[k] = cur.next_int("vertex index");
    m.facets[f].tag = cur.next_int("boundary tag");
  }
  if (!cur.done()) throw ParseError("trailing tokens after the facet section");
  validate_mesh(m);
  return m;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const Mesh& m, std::ostream& os) {
  char buf[64];
  os << m.vertices.size() << ' ' << m.dim << '\n';
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    os << i;
    for (int k = 0; k < m.dim; ++k) {
      std::snprintf(buf, sizeof buf, " %.17g", m.vertices[i][k]);
      os << buf;
    }
    os << '\n';
  }
  os << m.cells.size() << '\n';
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    os << c;
    for (int k = 0; k <= m.dim; ++k) os << ' ' << m.cells[c].v[k];
    os << ' ' << m.cells[c].region << '\n';
  }
  os << m.facets.size() << '\n';
  for (std::size_t f = 0; f < m.facets.size(); ++f) {
    os << f;
    for (int k = 0; k < m.dim; ++k) os << ' ' << m.facets[f].v[k];
    os << ' ' << m.facets[f].tag << '\n';
  }
}

void write_mesh_file(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_mesh(m, out);
  if (!out.flush()) throw Error("write to '" + path + "' failed");
}

}  // namespace vfvm
