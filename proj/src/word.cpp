#include "sgd/word.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sgd {

std::string Word::str() const {
  bool digits = std::all_of(syms.begin(), syms.end(),
                            [](int s) { return s >= 1 && s <= 9; });
  std::ostringstream out;
  if (digits) {
    for (int s : syms) out << s;
  } else {
    for (std::size_t k = 0; k < syms.size(); ++k) {
      if (k) out << ',';
      out << syms[k];
    }
  }
  return out.str();
}

Word Word::parse(const std::string& text) {
  Word w;
  if (text.empty()) return w;
  if (text.find(',') != std::string::npos) {
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) throw std::invalid_argument("empty word symbol");
      w.push(std::stoi(tok));
    }
    return w;
  }
  for (char c : text) {
    if (c < '1' || c > '9')
      throw std::invalid_argument("bad word digit in: " + text);
    w.push(c - '0');
  }
  return w;
}

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.syms.insert(w.syms.end(), b.syms.begin(), b.syms.end());
  return w;
}

Word repeated(int symbol, std::size_t count) {
  return Word(std::vector<int>(count, symbol));
}

void check_symbol(int symbol, int N) {
  if (symbol < 1 || symbol > N + 1)
    throw std::invalid_argument("symbol " + std::to_string(symbol) +
                                " outside alphabet of dimension " +
                                std::to_string(N));
}

void check_word(const Word& w, int N) {
  for (int s : w.syms) check_symbol(s, N);
}

SymbolStream SymbolStream::eventually(Word head, int repeating) {
  SymbolStream s;
  s.head_ = std::move(head);
  s.repeat_ = repeating;
  return s;
}

SymbolStream SymbolStream::from_generator(std::function<int(std::size_t)> gen) {
  SymbolStream s;
  s.gen_ = std::move(gen);
  return s;
}

int SymbolStream::at(std::size_t n) const {
  if (n < head_.size()) return head_.syms[n];
  if (repeat_ > 0) return repeat_;
  if (gen_) return gen_(n);
  throw std::logic_error("symbol stream without tail");
}

Word SymbolStream::prefix(std::size_t n) const {
  Word w;
  w.syms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) w.push(at(k));
  return w;
}

std::optional<int> SymbolStream::eventually_constant() const {
  if (repeat_ > 0) return repeat_;
  return std::nullopt;
}

EdgeAddress::EdgeAddress(Word w, int ci, int cj)
    : prefix(std::move(w)), i(ci), j(cj) {
  if (i == j) throw std::invalid_argument("edge needs distinct corners");
  if (i < 1 || j < 1) throw std::invalid_argument("edge corner out of range");
}

std::string EdgeAddress::str() const {
  return prefix.str() + ":" + std::to_string(i) + ":" + std::to_string(j);
}

EdgeAddress EdgeAddress::parse(const std::string& text) {
  std::size_t c2 = text.rfind(':');
  if (c2 == std::string::npos) throw std::invalid_argument("bad edge: " + text);
  std::size_t c1 = text.rfind(':', c2 - 1);
  if (c1 == std::string::npos) throw std::invalid_argument("bad edge: " + text);
  Word w = Word::parse(text.substr(0, c1));
  int i = std::stoi(text.substr(c1 + 1, c2 - c1 - 1));
  int j = std::stoi(text.substr(c2 + 1));
  return EdgeAddress(std::move(w), i, j);
}

DyadicPoint::DyadicPoint(std::uint64_t m, unsigned n, EdgeAddress e)
    : num(m), exp(n), edge(std::move(e)) {
  if (exp > 63) throw std::invalid_argument("dyadic exponent too large");
  if (num > (std::uint64_t{1} << exp))
    throw std::invalid_argument("dyadic parameter outside [0,1]");
  while (exp > 0 && num % 2 == 0) {
    num /= 2;
    --exp;
  }
}

double DyadicPoint::value() const {
  return static_cast<double>(num) / static_cast<double>(std::uint64_t{1} << exp);
}

Rat DyadicPoint::value_exact() const {
  Rat v(static_cast<unsigned long>(num),
        static_cast<unsigned long>(std::uint64_t{1} << exp));
  v.canonicalize();
  return v;
}

std::string VertexRef::str() const {
  return word.str() + ":" + std::to_string(corner);
}

std::vector<VertexRef> vertex_representations(const Word& w, int i, int j) {
  if (i == j) throw std::invalid_argument("midpoint needs distinct corners");
  VertexRef a{concat(w, Word({i})), j};
  VertexRef b{concat(w, Word({j})), i};
  if (b < a) std::swap(a, b);
  return {a, b};
}

VertexRef canonical_vertex(const Word& w, int corner) {
  Word base = w;
  while (!base.empty() && base.syms.back() == corner) base.syms.pop_back();
  if (base.empty()) return VertexRef{Word{}, corner};
  int last = base.syms.back();
  base.syms.pop_back();
  return vertex_representations(base, last, corner).front();
}

VertexRef dyadic_to_path(const DyadicPoint& p) {
  const EdgeAddress& e = p.edge;
  if (p.num == 0) return canonical_vertex(e.prefix, e.i);
  if (p.exp == 0) return canonical_vertex(e.prefix, e.j);  // num == 1: t = 1
  // Interior m/2^n in lowest terms: descend n-1 halvings, then the point
  // is the midpoint of the remaining subedge.
  Word w = e.prefix;
  std::uint64_t m = p.num;
  unsigned n = p.exp;
  while (n > 1) {
    std::uint64_t half = std::uint64_t{1} << (n - 1);
    if (m < half) {
      w.push(e.i);
    } else {
      w.push(e.j);
      m -= half;
    }
    --n;
  }
  return vertex_representations(w, e.i, e.j).front();
}

std::vector<VecQ> standard_simplex(int N) {
  if (N < 1) throw std::invalid_argument("dimension must be at least 1");
  std::vector<VecQ> pts(N + 1, VecQ(N + 1, Rat(0)));
  for (int k = 0; k <= N; ++k) pts[k][k] = Rat(1);
  return pts;
}

VecQ embed_point(const Word& w, int corner, const std::vector<VecQ>& simplex) {
  if (simplex.size() < 2) throw std::invalid_argument("simplex too small");
  int N = static_cast<int>(simplex.size()) - 1;
  check_word(w, N);
  check_symbol(corner, N);
  std::size_t dim = simplex[0].size();
  for (const auto& p : simplex)
    if (p.size() != dim) throw std::invalid_argument("ragged simplex");
  // Affine independence: the difference vectors must have full rank N.
  MatQ diff(N, dim);
  for (int r = 0; r < N; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      diff(r, c) = simplex[r][c] - simplex[N][c];
  if (mat_rank(diff) != static_cast<std::size_t>(N))
    throw std::invalid_argument("degenerate simplex");
  // psi_w = psi_{w_1} o ... o psi_{w_m}: apply maps inside out.
  VecQ x = simplex[corner - 1];
  for (std::size_t k = w.size(); k-- > 0;) {
    const VecQ& p = simplex[w.syms[k] - 1];
    for (std::size_t c = 0; c < dim; ++c) x[c] = (x[c] + p[c]) / 2;
  }
  return x;
}

}  // namespace sgd
