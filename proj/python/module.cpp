// Python bindings for the core library. Exact rationals cross the
// boundary as "p/q" strings; callers can lift them into
// fractions.Fraction without loss.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include <sgd/cli.hpp>
#include <sgd/cone.hpp>
#include <sgd/derham.hpp>
#include <sgd/edge_density.hpp>
#include <sgd/energy.hpp>
#include <sgd/harmonic.hpp>
#include <sgd/word.hpp>

namespace py = pybind11;
using namespace sgd;

namespace {

VecQ parse_vec(int N, const py::sequence& seq) {
  VecQ u;
  for (const auto& item : seq)
    u.push_back(parse_rational(py::str(item).cast<std::string>()));
  if (u.size() != static_cast<std::size_t>(N + 1))
    throw std::invalid_argument("boundary vector needs N+1 entries");
  return u;
}

Word parse_word(const std::string& text) {
  if (text.empty()) return Word{};
  return Word::parse(text);
}

py::list mat_to_py(const MatQ& m) {
  py::list rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    py::list row;
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.append(rat_to_string(m(r, c)));
    rows.append(row);
  }
  return rows;
}

const char* shape_name(EdgeShapeKind k) {
  switch (k) {
    case EdgeShapeKind::constant: return "constant";
    case EdgeShapeKind::strictly_increasing: return "strictly_increasing";
    case EdgeShapeKind::strictly_decreasing: return "strictly_decreasing";
    case EdgeShapeKind::interior_max: return "interior_max";
    case EdgeShapeKind::interior_min: return "interior_min";
  }
  return "unknown";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Energy densities of harmonic functions on N-corner gasket networks: "
      "exact extension algebra, measure ratios, edge profiles, extremal "
      "codings, and projective density limits.";

  m.def(
      "eigen_lines",
      [](int N) {
        HarmonicContext ctx = build_context(N);
        std::vector<std::string> lines;
        for (const auto& line : eigen_check(ctx).lines)
          lines.push_back(line.format());
        return lines;
      },
      py::arg("N"), "Identity-check report lines, one per relation.");

  m.def(
      "verify_ok",
      [](int N) {
        HarmonicContext ctx = build_context(N);
        if (!eigen_check(ctx).all_pass()) return false;
        for (int k = 1; k <= N + 1; ++k)
          if (!psd_floor_check(ctx, k).all_pass()) return false;
        return true;
      },
      py::arg("N"), "True when every exact structural identity holds.");

  m.def(
      "extension_matrix",
      [](int N, const std::string& word) {
        HarmonicContext ctx = build_context(N);
        return mat_to_py(word_matrix(ctx, parse_word(word)));
      },
      py::arg("N"), py::arg("word") = "",
      "Boundary-to-cell extension matrix A_w as exact 'p/q' strings.");

  m.def(
      "harmonic_extension",
      [](int N, const py::sequence& u, const std::string& word) {
        HarmonicContext ctx = build_context(N);
        VecQ x = mat_vec(word_matrix(ctx, parse_word(word)), parse_vec(N, u));
        std::vector<std::string> out;
        for (const Rat& v : x) out.push_back(rat_to_string(v));
        return out;
      },
      py::arg("N"), py::arg("u"), py::arg("word") = "",
      "Boundary values of the harmonic extension on cell `word`.");

  m.def(
      "cell_energy",
      [](int N, const py::sequence& u, const std::string& word) {
        HarmonicContext ctx = build_context(N);
        return rat_to_string(cell_energy(ctx, parse_vec(N, u), parse_word(word)));
      },
      py::arg("N"), py::arg("u"), py::arg("word") = "",
      "Exact energy-measure mass of the cell.");

  m.def(
      "kusuoka_mass",
      [](int N, const std::string& word) {
        HarmonicContext ctx = build_context(N);
        return rat_to_string(kusuoka_cell(ctx, parse_word(word)));
      },
      py::arg("N"), py::arg("word") = "",
      "Exact reference-measure mass of the cell.");

  m.def(
      "cell_ratio",
      [](int N, const py::sequence& u, const std::string& word) {
        HarmonicContext ctx = build_context(N);
        return rat_to_string(cell_ratio(ctx, parse_vec(N, u), parse_word(word)));
      },
      py::arg("N"), py::arg("u"), py::arg("word") = "",
      "Exact density ratio (energy mass over reference mass) on the cell.");

  m.def(
      "corner_limit",
      [](int N, const py::sequence& u, const std::string& word, int corner) {
        HarmonicContext ctx = build_context(N);
        RatioLimit lim = corner_limit(ctx, parse_vec(N, u), parse_word(word), corner);
        py::dict d;
        d["value"] = rat_to_string(lim.value);
        d["value_float"] = lim.value_f;
        d["pairing"] = rat_to_string(lim.numerator_pairing);
        d["dual_norm_sq"] = rat_to_string(lim.dual_norm_sq);
        return d;
      },
      py::arg("N"), py::arg("u"), py::arg("word"), py::arg("corner"),
      "Exact limit of density ratios along word·corner^n.");

  m.def(
      "vanishing_cell",
      [](int N, const py::sequence& u, double eps) {
        HarmonicContext ctx = build_context(N);
        VanishResult res = find_vanishing_cell(ctx, parse_vec(N, u), Word{}, eps);
        py::dict d;
        d["witness"] = res.witness.str();
        d["ratio"] = rat_to_string(res.ratio);
        d["ratio_float"] = res.ratio_f;
        d["case"] = res.case_used;
        d["ok"] = res.ok;
        return d;
      },
      py::arg("N"), py::arg("u"), py::arg("eps") = 1e-3,
      "A cell word where the density ratio drops below eps.");

  m.def(
      "vertex_density",
      [](int N, const py::sequence& u, const std::string& word, int corner) {
        HarmonicContext ctx = build_context(N);
        return rat_to_string(
            vertex_density(ctx, parse_vec(N, u), VertexRef{parse_word(word), corner}));
      },
      py::arg("N"), py::arg("u"), py::arg("word"), py::arg("corner"),
      "Exact edge-density value at a junction vertex.");

  m.def(
      "edge_profile",
      [](int N, const py::sequence& u, const std::string& edge, int depth,
         bool exact) {
        HarmonicContext ctx = build_context(N);
        auto rows = edge_profile(ctx, parse_vec(N, u), EdgeAddress::parse(edge),
                                 depth,
                                 exact ? NumericPolicy::exact()
                                       : NumericPolicy::float64());
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["t_num"] = r.t_num;
          d["t_den"] = r.t_den;
          d["t"] = r.t;
          d["density"] = r.density;
          if (exact) d["density_exact"] = r.density_exact;
          out.append(d);
        }
        return out;
      },
      py::arg("N"), py::arg("u"), py::arg("edge") = ":1:2",
      py::arg("depth") = 8, py::arg("exact") = false,
      "Density profile along an edge at dyadic resolution 2^-depth.");

  m.def("holder_exponent", &holder_exponent, py::arg("N"),
        "Critical smoothness exponent log2(1 + 1/N).");

  m.def(
      "holder_sup",
      [](int N, const py::sequence& u, const std::string& edge, int depth,
         double theta) {
        HarmonicContext ctx = build_context(N);
        auto prof = edge_profile(ctx, parse_vec(N, u), EdgeAddress::parse(edge),
                                 depth, NumericPolicy::float64());
        return empirical_holder(prof, theta).sup_quotient;
      },
      py::arg("N"), py::arg("u"), py::arg("edge") = ":1:2",
      py::arg("depth") = 10, py::arg("theta") = 1.0,
      "Empirical sup of |f(s)-f(t)| / |s-t|^theta over profile pairs.");

  m.def(
      "L",
      [](int N, double t, int n_iter) { return L_eval(N, t, n_iter); },
      py::arg("N"), py::arg("t"), py::arg("n_iter") = 40,
      "Edge-maximum value function on [0, 1].");

  m.def(
      "M",
      [](int N, double s, int n_iter) { return M_eval(N, s, n_iter); },
      py::arg("N"), py::arg("s"), py::arg("n_iter") = 40,
      "Peak height of the edge extension as a function of the cell mean.");

  m.def(
      "M_general",
      [](int N, double s, double ai, double aj) {
        return M_general(N, s, ai, aj);
      },
      py::arg("N"), py::arg("s"), py::arg("ai"), py::arg("aj"),
      "Edge maximum for arbitrary endpoint values and cell mean.");

  m.def("M_inverse", [](int N, double target) { return M_inverse(N, target); },
        py::arg("N"), py::arg("target"),
        "Inverse of M on its decreasing branch.");

  m.def(
      "brute_max",
      [](int N, double ai, double aj, double s, int depth) {
        GridMax g = brute_max_location(N, ai, aj, s, depth);
        return py::make_tuple(g.t, g.value);
      },
      py::arg("N"), py::arg("ai"), py::arg("aj"), py::arg("s"),
      py::arg("depth") = 12,
      "(argmax, max) of the edge extension on the depth-d dyadic grid.");

  m.def(
      "classify_edge",
      [](int N, const std::string& ai, const std::string& aj,
         const std::string& s) {
        EdgeShape shape = classify_edge(N, parse_rational(ai),
                                        parse_rational(aj), parse_rational(s));
        py::dict d;
        d["kind"] = shape_name(shape.kind);
        d["extremum_t"] = shape.extremum_t;
        d["extremum_at_half"] = shape.extremum_at_half;
        return d;
      },
      py::arg("N"), py::arg("ai"), py::arg("aj"), py::arg("s"),
      "Monotonicity type of the edge restriction.");

  m.def(
      "itinerary",
      [](int N, const std::string& t) {
        Itinerary it = itinerary_eval(N, parse_rational(t));
        py::dict d;
        d["symbols"] = it.symbols;
        d["value"] = it.value;
        d["exact"] = it.value_exact
                         ? py::object(py::str(rat_to_string(*it.value_exact)))
                         : py::object(py::none());
        return d;
      },
      py::arg("N"), py::arg("t"),
      "Branch coding of t and the coded value of the maximum function.");

  m.def(
      "cone_tables",
      [](int N) {
        HarmonicContext ctx = build_context(N);
        ConeFrame frame = canonical_cone(ctx, 1, 2);
        py::dict d;
        d["Ci"] = mat_to_py(frame.Ci);
        d["Cj"] = mat_to_py(frame.Cj);
        return d;
      },
      py::arg("N"),
      "Exact coefficient tables of the two cone self-maps (N = 2 or 3).");

  m.def(
      "cone_density",
      [](int N, const py::sequence& u, const std::string& edge,
         const std::string& head, int tail) {
        HarmonicContext ctx = build_context(N);
        ConeFrame frame = canonical_cone(ctx, 1, 2);
        EdgeDensityLimit lim =
            density_along(ctx, frame, EdgeAddress::parse(edge), parse_vec(N, u),
                          SymbolStream::eventually(parse_word(head), tail));
        py::dict d;
        d["value"] = lim.value;
        d["alpha"] = lim.alpha;
        d["lam"] = lim.lambda;
        d["iters"] = lim.rho.iters;
        d["final_bound"] = lim.rho.final_bound;
        return d;
      },
      py::arg("N"), py::arg("u"), py::arg("edge") = ":1:2",
      py::arg("head") = "", py::arg("tail") = 1,
      "Density limit along an eventually-constant address stream.");

  m.def(
      "contraction",
      [](int N) {
        HarmonicContext ctx = build_context(N);
        ConeFrame frame = canonical_cone(ctx, 1, 2);
        ContractionEstimate est = contraction_estimate(frame);
        py::dict d;
        d["tau_joint"] = est.tau_joint;
        d["tau_dual_joint"] = est.tau_dual_joint;
        d["delta_dual_diameter"] = est.delta_dual_diameter;
        d["empirical_ok"] = est.empirical_ok;
        return d;
      },
      py::arg("N"),
      "Projective-metric contraction certificate for the cone maps.");
}
