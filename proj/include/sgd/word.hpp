#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgd/linalg.hpp"

namespace sgd {

// Finite address of a cell: a sequence of symbols from {1, ..., N+1}.
// The word itself is dimension-agnostic; operations that need N validate
// symbols at their boundary.
struct Word {
  std::vector<int> syms;

  Word() = default;
  explicit Word(std::vector<int> s) : syms(std::move(s)) {}

  std::size_t size() const { return syms.size(); }
  bool empty() const { return syms.empty(); }
  int at(std::size_t k) const { return syms.at(k); }

  Word& push(int symbol) {
    syms.push_back(symbol);
    return *this;
  }

  auto operator<=>(const Word&) const = default;

  // Comma-free digit string for alphabets up to 9 symbols (N <= 8); the
  // empty word prints as "".
  std::string str() const;
  // Accepts the digit encoding and a comma-separated fallback.
  static Word parse(const std::string& text);
};

Word concat(const Word& a, const Word& b);
Word repeated(int symbol, std::size_t count);

// Validates every symbol lies in {1, ..., N+1}.
void check_word(const Word& w, int N);
void check_symbol(int symbol, int N);

// One-sided infinite symbol sequence: explicit head, then either a
// repeating symbol or a generator callback.
class SymbolStream {
 public:
  static SymbolStream eventually(Word head, int repeating);
  static SymbolStream from_generator(std::function<int(std::size_t)> gen);

  int at(std::size_t n) const;
  Word prefix(std::size_t n) const;
  // The repeating symbol when the stream is declared eventually constant.
  std::optional<int> eventually_constant() const;
  // Explicit head of an eventually-constant stream (empty for generators).
  const Word& head() const { return head_; }

 private:
  Word head_;
  int repeat_ = 0;
  std::function<int(std::size_t)> gen_;
};

// The closed edge of cell K_prefix between corners i and j (i != j).
struct EdgeAddress {
  Word prefix;
  int i = 1;
  int j = 2;

  EdgeAddress() = default;
  EdgeAddress(Word w, int ci, int cj);

  auto operator<=>(const EdgeAddress&) const = default;

  std::string str() const;              // "w:i:j", empty w allowed
  static EdgeAddress parse(const std::string& text);
};

// Dyadic parameter num/2^exp in [0,1] on an edge, kept in lowest terms
// (num odd, or num in {0,1} with exp = 0).
struct DyadicPoint {
  std::uint64_t num = 0;
  unsigned exp = 0;
  EdgeAddress edge;

  DyadicPoint() = default;
  DyadicPoint(std::uint64_t m, unsigned n, EdgeAddress e);

  double value() const;
  Rat value_exact() const;
};

// Vertex named at word level: the point psi_{word}(p_corner).
struct VertexRef {
  Word word;
  int corner = 1;

  auto operator<=>(const VertexRef&) const = default;
  std::string str() const;
};

// Both level-|w|+1 representations of the edge midpoint of (w, i, j):
// psi_{w i}(p_j) = psi_{w j}(p_i), canonical (lexicographically smaller
// word) first.
std::vector<VertexRef> vertex_representations(const Word& w, int i, int j);

// Canonical name of psi_w(p_c): trailing copies of c are stripped (they
// fix p_c), then the midpoint pair is ordered canonically.
VertexRef canonical_vertex(const Word& w, int corner);

// Walks the binary expansion of p down the edge: [0,1/2] of edge
// (w, i, j) is edge (w i, i, j), [1/2, 1] is (w j, i, j). Interior
// dyadics land on the canonical midpoint representation, so the result
// satisfies: point = psi_{edge.prefix + subword}(p_corner).
VertexRef dyadic_to_path(const DyadicPoint& p);

// Vertices e_1, ..., e_{N+1} of the standard simplex in R^{N+1}.
std::vector<VecQ> standard_simplex(int N);

// Exact coordinates of psi_w(p_corner) for the given simplex vertices
// (rejected unless affinely independent).
VecQ embed_point(const Word& w, int corner, const std::vector<VecQ>& simplex);

}  // namespace sgd
