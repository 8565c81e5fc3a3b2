#include "sgd/harmonic.hpp"

#include <sstream>
#include <stdexcept>

namespace sgd {

HarmonicContext build_context(int N) {
  if (N < 1) throw std::invalid_argument("dimension must be at least 1");
  if (N > 8) throw std::invalid_argument("dimension above 8 unsupported");
  HarmonicContext ctx;
  ctx.N = N;
  std::size_t n = ctx.size();

  ctx.D = MatQ(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      ctx.D(i, j) = (i == j) ? Rat(-N) : Rat(1);

  Rat den(N + 3);
  ctx.A.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    MatQ a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == k) {
          a(i, j) = (j == k) ? Rat(1) : Rat(0);
        } else if (j == k || i == j) {
          a(i, j) = Rat(2) / den;
        } else {
          a(i, j) = Rat(1) / den;
        }
      }
    }
    ctx.A.push_back(std::move(a));
  }

  ctx.d.reserve(n);
  ctx.v.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ctx.d.push_back(ctx.D.col(k));
    VecQ vk(n, Rat(1) / Rat(N));
    vk[k] = Rat(0);
    ctx.v.push_back(std::move(vk));
  }

  ctx.scale = Rat(N + 3) / Rat(N + 1);

  ctx.Df = to_float(ctx.D);
  for (const auto& a : ctx.A) ctx.Af.push_back(to_float(a));
  for (const auto& dk : ctx.d) ctx.df.push_back(to_float(dk));
  for (const auto& vk : ctx.v) ctx.vf.push_back(to_float(vk));
  ctx.scalef = to_double(ctx.scale);
  return ctx;
}

MatQ word_matrix(const HarmonicContext& ctx, const Word& w) {
  check_word(w, ctx.N);
  MatQ m = MatQ::identity(ctx.size());
  for (int s : w.syms) m = mat_mul(ctx.A[s - 1], m);
  // Denominator sanity: every entry's denominator divides (N+3)^|w|.
  mpz_class cap;
  mpz_ui_pow_ui(cap.get_mpz_t(), static_cast<unsigned long>(ctx.N + 3),
                static_cast<unsigned long>(w.size()));
  for (const Rat& x : m.data()) {
    if (!mpz_divisible_p(cap.get_mpz_t(), x.get_den_mpz_t()))
      throw std::logic_error("word matrix denominator exceeds (N+3)^|w|");
  }
  return m;
}

MatF word_matrix_float(const HarmonicContext& ctx, const Word& w) {
  check_word(w, ctx.N);
  MatF m = MatF::identity(ctx.size());
  for (int s : w.syms) m = mat_mul(ctx.Af[s - 1], m);
  return m;
}

Rat q0(const HarmonicContext& ctx, const VecQ& u, const VecQ& v) {
  VecQ dv = mat_vec(ctx.D, v);
  Rat s(0);
  for (std::size_t i = 0; i < u.size(); ++i) s -= u[i] * dv[i];
  return s;
}

Rat q0(const HarmonicContext& ctx, const VecQ& u) { return q0(ctx, u, u); }

double q0f(const HarmonicContext& ctx, const VecF& u, const VecF& v) {
  // Paired-difference form of -u^t D v; algebraically identical but
  // avoids the cancellation of the large diagonal terms when u is
  // nearly constant.
  (void)ctx;
  double s = 0;
  for (std::size_t p = 0; p < u.size(); ++p)
    for (std::size_t q = p + 1; q < u.size(); ++q)
      s += (u[p] - u[q]) * (v[p] - v[q]);
  return s;
}

double q0f(const HarmonicContext& ctx, const VecF& u) { return q0f(ctx, u, u); }

VecQ project_P(const VecQ& u) {
  Rat mean(0);
  for (const Rat& x : u) mean += x;
  mean /= Rat(static_cast<long>(u.size()));
  VecQ out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - mean;
  return out;
}

VecF project_P(const VecF& u) {
  double mean = 0;
  for (double x : u) mean += x;
  mean /= static_cast<double>(u.size());
  VecF out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - mean;
  return out;
}

VecQ basis_e(const HarmonicContext& ctx, int k) {
  check_symbol(k, ctx.N);
  VecQ e(ctx.size(), Rat(0));
  e[k - 1] = Rat(1);
  return e;
}

std::string CheckLine::format() const {
  std::ostringstream out;
  out << name << ": " << (pass ? "PASS" : "FAIL") << " (N=" << N;
  if (k > 0) out << ", k=" << k;
  out << ")";
  if (!detail.empty()) out << " " << detail;
  return out.str();
}

bool CheckReport::all_pass() const {
  for (const auto& l : lines)
    if (!l.pass) return false;
  return true;
}

std::string CheckReport::format() const {
  std::ostringstream out;
  for (const auto& l : lines) out << l.format() << "\n";
  return out.str();
}

namespace {

bool vec_equal(const VecQ& a, const VecQ& b) { return a == b; }

// Spanning set of E_k = {u : (u, e_k) = 0, (u, 1) = 0}: consecutive
// differences of the other basis vectors.
std::vector<VecQ> ek_space_basis(const HarmonicContext& ctx, int k) {
  std::vector<int> others;
  for (int s = 1; s <= ctx.N + 1; ++s)
    if (s != k) others.push_back(s);
  std::vector<VecQ> basis;
  for (std::size_t t = 0; t + 1 < others.size(); ++t) {
    VecQ u(ctx.size(), Rat(0));
    u[others[t] - 1] = Rat(1);
    u[others[t + 1] - 1] = Rat(-1);
    basis.push_back(std::move(u));
  }
  return basis;
}

}  // namespace

CheckReport eigen_check(const HarmonicContext& ctx) {
  CheckReport rep;
  int N = ctx.N;
  Rat lam2 = Rat(N + 1) / Rat(N + 3);
  Rat lam3 = Rat(1) / Rat(N + 3);
  VecQ ones(ctx.size(), Rat(1));

  for (int k = 1; k <= N + 1; ++k) {
    const MatQ& Ak = ctx.A[k - 1];
    MatQ tAk = transpose(Ak);

    bool rows_ok = true;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      Rat s(0);
      for (std::size_t j = 0; j < ctx.size(); ++j) s += Ak(i, j);
      if (s != 1) rows_ok = false;
    }
    rep.lines.push_back({"row-sums-one", rows_ok, N, k, ""});

    rep.lines.push_back(
        {"A-fixes-constants", vec_equal(mat_vec(Ak, ones), ones), N, k, ""});

    VecQ one_minus_ek = ones;
    one_minus_ek[k - 1] = Rat(0);
    rep.lines.push_back({"A-second-eigenvector",
                         vec_equal(mat_vec(Ak, one_minus_ek),
                                   vec_scale(lam2, one_minus_ek)),
                         N, k, "(1 - e_k) at (N+1)/(N+3)"});

    bool third_ok = true;
    for (const VecQ& u : ek_space_basis(ctx, k))
      if (!vec_equal(mat_vec(Ak, u), vec_scale(lam3, u))) third_ok = false;
    rep.lines.push_back(
        {"A-third-eigenspace", third_ok, N, k, "E_k at 1/(N+3)"});

    VecQ ek = basis_e(ctx, k);
    rep.lines.push_back(
        {"tA-fixes-e_k", vec_equal(mat_vec(tAk, ek), ek), N, k, ""});

    rep.lines.push_back({"tA-second-eigenvector",
                         vec_equal(mat_vec(tAk, ctx.d[k - 1]),
                                   vec_scale(lam2, ctx.d[k - 1])),
                         N, k, "d_k at (N+1)/(N+3)"});

    bool dual_third_ok = true;
    for (const VecQ& u : ek_space_basis(ctx, k))
      if (!vec_equal(mat_vec(tAk, u), vec_scale(lam3, u))) dual_third_ok = false;
    rep.lines.push_back(
        {"tA-third-eigenspace", dual_third_ok, N, k, "E_k at 1/(N+3)"});

    // tA_k d_l = (d_l - d_k)/(N+3) for l != k.
    bool transition_ok = true;
    for (int l = 1; l <= N + 1; ++l) {
      if (l == k) continue;
      VecQ expect = vec_scale(lam3, vec_sub(ctx.d[l - 1], ctx.d[k - 1]));
      if (!vec_equal(mat_vec(tAk, ctx.d[l - 1]), expect)) transition_ok = false;
    }
    rep.lines.push_back({"tA-d-transition", transition_ok, N, k,
                         "tA_k d_l = (d_l - d_k)/(N+3)"});
  }

  // Antisymmetry across pairs: tA_i d_j = -tA_j d_i.
  bool anti_ok = true;
  for (int i = 1; i <= N + 1; ++i)
    for (int j = i + 1; j <= N + 1; ++j) {
      VecQ lhs = mat_vec(transpose(ctx.A[i - 1]), ctx.d[j - 1]);
      VecQ rhs = vec_scale(Rat(-1), mat_vec(transpose(ctx.A[j - 1]), ctx.d[i - 1]));
      if (!vec_equal(lhs, rhs)) anti_ok = false;
    }
  rep.lines.push_back(
      {"tA-d-antisymmetry", anti_ok, N, 0, "tA_i d_j = -tA_j d_i"});

  // Pairings fixed by the normalization: (d_k, v_k) = 1, q0(v_k) = 1/N.
  bool pairing_ok = true;
  for (int k = 1; k <= N + 1; ++k) {
    if (inner(ctx.d[k - 1], ctx.v[k - 1]) != 1) pairing_ok = false;
    if (q0(ctx, ctx.v[k - 1]) != Rat(1, N)) pairing_ok = false;
  }
  rep.lines.push_back(
      {"d-v-normalization", pairing_ok, N, 0, "(d_k, v_k) = 1, q0(v_k) = 1/N"});

  return rep;
}

std::map<VertexRef, Rat> harmonic_values(const HarmonicContext& ctx,
                                         const VecQ& u, int m) {
  if (m < 0) throw std::invalid_argument("negative level");
  if (u.size() != ctx.size()) throw std::invalid_argument("boundary size");
  std::map<VertexRef, Rat> values;
  // DFS over W_m accumulating A_w u.
  struct Frame {
    Word w;
    VecQ b;
  };
  std::vector<Frame> stack{{Word{}, u}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(f.w.size()) == m) {
      for (int c = 1; c <= ctx.N + 1; ++c) {
        VertexRef key = canonical_vertex(f.w, c);
        auto [it, inserted] = values.emplace(key, f.b[c - 1]);
        if (!inserted && it->second != f.b[c - 1])
          throw std::logic_error("harmonic values fail to glue at " +
                                 key.str());
      }
      continue;
    }
    for (int s = 1; s <= ctx.N + 1; ++s)
      stack.push_back({concat(f.w, Word({s})), mat_vec(ctx.A[s - 1], f.b)});
  }
  return values;
}

Rat level_energy(const HarmonicContext& ctx, const VecQ& u, int m) {
  if (m < 0) throw std::invalid_argument("negative level");
  Rat total(0);
  struct Frame {
    int depth;
    VecQ b;
  };
  std::vector<Frame> stack{{0, u}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.depth == m) {
      total += q0(ctx, f.b);
      continue;
    }
    for (int s = 1; s <= ctx.N + 1; ++s)
      stack.push_back({f.depth + 1, mat_vec(ctx.A[s - 1], f.b)});
  }
  return total;
}

}  // namespace sgd
