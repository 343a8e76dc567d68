#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ale/basis.hpp"
#include "ale/decay_bootstrap.hpp"
#include "ale/errors.hpp"
#include "ale/expsum.hpp"
#include "ale/flat_kernel.hpp"
#include "ale/indicial.hpp"
#include "ale/mode_ode.hpp"
#include "ale/polytensor.hpp"
#include "ale/seeds.hpp"
#include "ale/suites.hpp"
#include "ale/symbol.hpp"
#include "ale/turan_table.hpp"
#include "json.hpp"

namespace ale::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kPass = 0, kPropertyFailure = 1, kUsage = 2, kNumeric = 3;

struct Global {
  std::uint64_t seed = 20240611;
  int jobs = 0;
  std::string out;
  std::string format = "json";
  double tolerance = 1e-12;
};

struct Output {
  json body;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int status = kPass;
  json meta = json::object();  // run-dependent data (timings) kept out of the body
  std::string summary;         // human-readable table, verify-all only
};

std::string num(double x) {
  if (x == 0) x = 0;  // no "-0"
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string str(const Q& q) { return q.get_str(); }

json cjson(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

void check_range(int n, int k) { require_theorem_range(n, k); }

// ------------------------------------------------------------------ commands

struct ExceptionalOpts {
  int n = 4, k = 1, j_max = 10;
  long window = 12;
};

Output cmd_exceptional(const Global&, const ExceptionalOpts& o) {
  check_range(o.n, o.k);
  Output out;
  const ExceptionalSet box = box_exceptional(o.n, o.j_max);
  const ExceptionalSet lap = laplacian_power_exceptional(o.n, o.k, o.window);
  json jb;
  jb["j_max"] = box.j_max;
  jb["values"] = box.values;
  jb["all_integers"] = box.all_integers;
  jb["contains_one"] = std::find(box.values.begin(), box.values.end(), 1L) != box.values.end();
  json prov = json::object();
  for (const auto& [v, tags] : box.provenance) prov[std::to_string(v)] = tags;
  jb["sources"] = prov;
  json jl;
  jl["rule"] = o.n == 2 * (o.k + 1) ? "Z" : "Z minus {-1, ..., 2(k+1)-(n-1)}";
  jl["window"] = lap.window;
  jl["values"] = lap.values;
  jl["excluded"] = lap.excluded;
  jl["all_integers"] = lap.all_integers;
  out.body = {{"n", o.n}, {"k", o.k}, {"box", jb}, {"laplacian_power", jl}};
  out.header = {"operator", "value", "source"};
  for (const auto& [v, tags] : box.provenance)
    for (const auto& t : tags) out.rows.push_back({"box", std::to_string(v), t});
  for (long v : lap.values) out.rows.push_back({"laplacian_power", std::to_string(v), jl["rule"]});
  if (!box.all_integers) out.status = kPropertyFailure;
  return out;
}

struct RatesOpts {
  int n = 4, j = 1;
  std::string t = "0", family = "typeI";
};

Output cmd_rates(const Global&, const RatesOpts& o) {
  Output out;
  const Family fam = family_from_string(o.family);
  const Q t = q_parse(o.t);
  const auto roots = boxt_rates(o.n, t, fam, o.j);
  json jr = json::array();
  out.header = {"re", "im", "equation", "vacuous"};
  for (const auto& r : roots) {
    jr.push_back({{"re", r.value.real()}, {"im", r.value.imag()}, {"equation", r.equation}, {"vacuous", r.vacuous}});
    out.rows.push_back({num(r.value.real()), num(r.value.imag()), r.equation, r.vacuous ? "1" : "0"});
  }
  out.body = {{"n", o.n}, {"t", str(t)}, {"family", to_string(fam)}, {"j", o.j},
              {"characteristic", to_string(boxt_characteristic(o.n, t, fam, o.j))}, {"roots", jr}};
  if (t == 0 && !(fam == Family::typeI && o.j == 0)) {
    const RatePair r = box_rates(o.n, fam, o.j);
    out.body["box"] = {{"eigen", str(r.eigen)}, {"center", str(r.center)}, {"radius", str(r.radius)},
                       {"plus", str(r.plus)}, {"minus", str(r.minus)}};
  }
  return out;
}

struct GapOpts {
  int n = 4, j_max = 6;
  double t = 0.1;
};

Output cmd_gap(const Global&, const GapOpts& o) {
  Output out;
  const GapReport g = essential_linear_gap(o.n, o.t, o.j_max);
  json w = json::array();
  out.header = {"family", "j", "root_re", "root_im", "growth", "distance"};
  for (const auto& x : g.witnesses) {
    w.push_back({{"family", to_string(x.family)}, {"j", x.j}, {"root", cjson(x.root)}, {"growth", x.growth},
                 {"distance", x.distance}});
    out.rows.push_back({to_string(x.family), std::to_string(x.j), num(x.root.real()), num(x.root.imag()),
                        num(x.growth), num(x.distance)});
  }
  out.body = {{"n", g.n}, {"t", g.t}, {"j_max", g.j_max}, {"gamma0", g.gamma0}, {"witnesses", w}};
  return out;
}

struct KernelOpts {
  std::string what = "divfree", mode = "all", radii = "0.1,0.03,0.01,0.003,0.001";
  int n = 4, k = 1, fields = 5;
  bool basis = false;
};

Output cmd_kernel(const Global& g, const KernelOpts& o) {
  Output out;
  if (o.what == "divfree") {
    check_range(o.n, o.k);
    std::vector<DivfreeMode> modes =
        o.mode == "all" ? divfree_modes(o.n, o.k) : std::vector<DivfreeMode>{divfree_mode_from_string(o.mode)};
    json arr = json::array();
    out.header = {"mode", "unknowns", "equations", "rank", "dimension", "field_dimension", "identities_implied"};
    for (DivfreeMode m : modes) {
      const DivfreeResult r = divfree_nullspace(o.n, o.k, m);
      const bool fields_ok = o.n <= kMaxDim;
      const std::size_t fd = fields_ok ? divfree_nullspace_dimension_by_fields(o.n, o.k, m) : 0;
      json e{{"mode", to_string(m)}, {"unknowns", r.unknowns}, {"equations", r.equations}, {"rank", r.rank},
             {"dimension", r.dimension}, {"identities_implied", r.identities_implied}};
      e["field_dimension"] = fields_ok ? json(fd) : json(nullptr);
      if (o.basis) {
        json b = json::array();
        for (const auto& v : r.basis) {
          json col = json::array();
          for (const auto& q : v) col.push_back(str(q));
          b.push_back(col);
        }
        e["basis"] = b;
      }
      arr.push_back(e);
      out.rows.push_back({to_string(m), std::to_string(r.unknowns), std::to_string(r.equations),
                          std::to_string(r.rank), std::to_string(r.dimension), fields_ok ? std::to_string(fd) : "",
                          r.identities_implied ? "1" : "0"});
      if (r.dimension != 0 || (fields_ok && fd != 0) || !r.identities_implied) out.status = kPropertyFailure;
    }
    out.body = {{"what", "divfree"}, {"n", o.n}, {"k", o.k}, {"modes", arr}};
  } else if (o.what == "lie") {
    const LieIsomorphismReport r = quadratic_lie_isomorphism(o.n);
    out.body = {{"what", "lie"},
                {"n", r.n},
                {"rows", r.rows},
                {"cols", r.cols},
                {"rank", r.rank},
                {"dimension", r.dimension},
                {"printed_dimension", r.printed_dimension},
                {"killing_dimension", r.killing_dimension},
                {"invertible", r.invertible}};
    out.header = {"n", "rows", "cols", "rank", "invertible"};
    out.rows.push_back({std::to_string(r.n), std::to_string(r.rows), std::to_string(r.cols), std::to_string(r.rank),
                        r.invertible ? "1" : "0"});
    if (!r.invertible) out.status = kPropertyFailure;
  } else if (o.what == "flow") {
    const std::vector<double> radii = parse_list(o.radii);
    std::mt19937_64 rng(derive_seed(g.seed, 10));
    json arr = json::array();
    out.header = {"field", "C_X", "radius", "error", "slope"};
    for (int f = 0; f < o.fields; ++f) {
      const QuadraticField X = random_quadratic_field(o.n, rng);
      const FlowErrorReport r = quadratic_flow_error(X, radii, 24, derive_seed(g.seed, f));
      arr.push_back({{"field", f}, {"C_X", r.C_X}, {"radii", r.radii}, {"errors", r.errors}, {"slope", r.slope}});
      for (std::size_t i = 0; i < r.radii.size(); ++i)
        out.rows.push_back({std::to_string(f), num(r.C_X), num(r.radii[i]), num(r.errors[i]), num(r.slope)});
      if (!(r.slope >= 1.9 && r.slope <= 2.1)) out.status = kPropertyFailure;
    }
    out.body = {{"what", "flow"}, {"n", o.n}, {"fields", arr}};
  } else {
    throw PreconditionError("kernel --what must be divfree, lie or flow");
  }
  return out;
}

struct SymbolOpts {
  int n = 4, k = 1;
  std::string xi, h;
  bool sweep = false;
  long trials = 1000;
};

Eigen::MatrixXcd parse_matrix(const std::string& s, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  std::stringstream rows(s);
  std::string row;
  int i = 0;
  while (std::getline(rows, row, ';')) {
    const auto v = parse_list(row);
    require(i < n && static_cast<int>(v.size()) == n, "--h: expected n rows of n comma-separated entries");
    for (int j = 0; j < n; ++j) m(i, j) = v[j];
    ++i;
  }
  require(i == n, "--h: expected n rows separated by ';'");
  return m;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(cjson(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

Output cmd_symbol(const Global& g, const SymbolOpts& o) {
  Output out;
  if (o.sweep) {
    const SymbolSweepReport r = symbol_sweep(o.trials, g.seed, g.jobs);
    out.body = {{"trials", r.trials},
                {"lie_residual", r.lie_residual},
                {"scalar_lie_residual", r.scalar_lie_residual},
                {"reduction_residual", r.reduction_residual},
                {"homogeneity_residual", r.homogeneity_residual},
                {"tolerance", g.tolerance}};
    out.header = {"trials", "lie_residual", "scalar_lie_residual", "reduction_residual", "homogeneity_residual"};
    out.rows.push_back({std::to_string(r.trials), num(r.lie_residual), num(r.scalar_lie_residual),
                        num(r.reduction_residual), num(r.homogeneity_residual)});
    const double worst =
        std::max({r.lie_residual, r.scalar_lie_residual, r.reduction_residual, r.homogeneity_residual});
    if (!(worst < g.tolerance)) out.status = kPropertyFailure;
    return out;
  }
  require(!o.xi.empty() && !o.h.empty(), "symbol: give --xi and --h, or --sweep");
  SymbolInput in;
  in.n = o.n;
  in.k = o.k;
  const auto xi = parse_list(o.xi);
  require(static_cast<int>(xi.size()) == o.n, "--xi: expected n entries");
  in.xi = Eigen::Map<const Eigen::VectorXd>(xi.data(), o.n);
  in.hhat = parse_matrix(o.h, o.n);
  const Eigen::MatrixXcd S = linearized_obstruction_symbol(in);
  const cplx s = linearized_scalar_symbol(in);
  out.body = {{"n", o.n}, {"k", o.k}, {"obstruction_symbol", matrix_json(S)}, {"scalar_symbol", cjson(s)}};
  out.header = {"i", "j", "re", "im"};
  for (int i = 0; i < o.n; ++i)
    for (int j = 0; j < o.n; ++j) out.rows.push_back({std::to_string(i), std::to_string(j), num(S(i, j).real()),
                                                       num(S(i, j).imag())});
  return out;
}

struct ApplyOpts {
  std::string op, field, t = "0";
  int k = 1, index = 0;
};

Output cmd_apply(const Global&, const ApplyOpts& o) {
  Output out;
  std::string text = o.field;
  if (!text.empty() && text.front() != '{') {
    std::ifstream f(text);
    require(f.good(), "apply: cannot read field file '" + text + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  const QTensor field = tensor_from_json(text);
  OpParams p;
  p.t = q_parse(o.t);
  p.k = o.k;
  p.index = o.index;
  const Opcode op = opcode_from_string(o.op);
  const QTensor img = apply_operator(op, field, p);
  out.body = {{"op", to_string(op)},
              {"order", op_order(op, p)},
              {"in_rank", field.rank()},
              {"out_rank", img.rank()},
              {"zero", img.is_zero()},
              {"result", json::parse(to_json(img))}};
  out.header = {"index", "coeff", "alpha", "gamma"};
  for (const auto& c : out.body["result"]["components"])
    for (const auto& t : c["terms"]) out.rows.push_back({c["index"].dump(), t["coeff"], t["alpha"].dump(), t["gamma"]});
  return out;
}

struct ModesOpts {
  int n = 4, k = 1, j_max = 3;
  std::string t = "0", op = "P_t_k";
};

std::vector<AngularBasis> mode_bases(const ModesOpts& o, const OpParams& p, int j) {
  if (o.op == "P_t_k") return two_tensor_modes(o.n, j, p);
  if (o.op == "box" || o.op == "box_t") {
    std::vector<AngularBasis> b;
    if (j >= 1) b.push_back(typeI_basis(o.n, j));
    b.push_back(typeII_basis(o.n, j));
    return b;
  }
  if (o.op == "lap_power")
    return {make_basis({scalar_field(angular_harmonic(o.n, j))}, "scalar s=" + std::to_string(j))};
  throw PreconditionError("modes --op must be P_t_k, box, box_t or lap_power");
}

Output cmd_modes(const Global&, const ModesOpts& o) {
  if (o.op == "P_t_k" || o.op == "lap_power") check_range(o.n, o.k);
  Output out;
  OpParams p;
  p.k = o.k;
  p.t = q_parse(o.t);
  const Opcode op = opcode_from_string(o.op);
  json arr = json::array();
  out.header = {"mode", "root_re", "root_im", "multiplicity", "class", "residual"};
  for (int j = 0; j <= o.j_max; ++j)
    for (const auto& b : mode_bases(o, p, j)) {
      const EulerOperator E = probe_euler(op, p, b);
      const IndicialSpectrum s = indicial_spectrum(E);
      json roots = json::array();
      for (std::size_t a = 0; a < s.roots.size(); ++a) {
        const auto& r = s.roots[a];
        const char* cls = std::find(s.A_plus.begin(), s.A_plus.end(), a) != s.A_plus.end()    ? "A+"
                          : std::find(s.A_minus.begin(), s.A_minus.end(), a) != s.A_minus.end() ? "A-"
                                                                                                : "A0";
        roots.push_back({{"re", r.value.real()},
                         {"im", r.value.imag()},
                         {"multiplicity", r.multiplicity},
                         {"class", cls},
                         {"residual", r.residual}});
        out.rows.push_back({s.tag, num(r.value.real()), num(r.value.imag()), std::to_string(r.multiplicity), cls,
                            num(r.residual)});
      }
      json P = json::array();
      for (const auto& row : E.P) {
        json pr = json::array();
        for (const auto& q : row) pr.push_back(to_string(q));
        P.push_back(pr);
      }
      arr.push_back({{"tag", s.tag},
                     {"j", j},
                     {"m_ang", s.m_ang},
                     {"order", s.order},
                     {"weight", str(E.weight)},
                     {"P", P},
                     {"det", to_string(s.det)},
                     {"total_multiplicity", s.total_multiplicity},
                     {"beta", std::isfinite(s.beta) ? json(s.beta) : json(nullptr)},
                     {"low_confidence", s.low_confidence},
                     {"roots", roots}});
      if (s.total_multiplicity != s.m_ang * s.order) out.status = kPropertyFailure;
    }
  out.body = {{"n", o.n}, {"k", o.k}, {"t", str(p.t)}, {"op", o.op}, {"modes", arr}};
  return out;
}

struct AnnulusOpts {
  int n = 4, k = 1, j_max = 5;
  std::string t = "0";
  long trials = 1000;
  double beta_ratio = 0.45, L_max = 30, a = 1;
  bool no_scalar_power = false, combined_only = false;
};

json annulus_json(const ThreeAnnulusReport& r) {
  json grid = json::array();
  for (const auto& c : r.grid)
    grid.push_back({{"L", c.L},
                    {"trials", c.trials},
                    {"growth_implication_failures", c.growth_implication_failures},
                    {"decay_implication_failures", c.decay_implication_failures},
                    {"dichotomy_failures", c.dichotomy_failures},
                    {"plus_failures", c.plus_failures},
                    {"minus_failures", c.minus_failures},
                    {"turan_failures", c.turan_failures},
                    {"pass", c.pass()}});
  return {{"beta", r.beta},
          {"beta_prime", r.beta_prime},
          {"L0", r.L0 ? json(*r.L0) : json(nullptr)},
          {"grid", grid}};
}

Output cmd_three_annulus(const Global& g, const AnnulusOpts& o) {
  Output out;
  require(o.beta_ratio > 0 && o.beta_ratio < 0.5, "--beta-ratio must lie in (0, 1/2)");
  const auto modes = annulus_mode_spectra(o.n, o.k, q_parse(o.t), o.j_max, !o.no_scalar_power);
  require(!modes.empty(), "three-annulus: no nondegenerate modes in range");
  out.header = {"run", "L", "trials", "growth_implication_failures", "decay_implication_failures",
                "dichotomy_failures", "plus_failures", "minus_failures", "turan_failures"};
  json runs = json::array();
  double reported = 0, beta_min = INFINITY;
  bool all = true;
  auto record = [&](const std::string& tag, const std::vector<IndicialSpectrum>& ms, double beta) {
    const ThreeAnnulusReport r = three_annulus_verify(ms, o.beta_ratio * beta, o.L_max, o.a, o.trials, g.seed, g.jobs);
    json j{{"run", tag}};
    j.update(annulus_json(r));
    runs.push_back(j);
    for (const auto& c : r.grid) {
      out.rows.push_back({tag, num(c.L), std::to_string(c.trials), std::to_string(c.growth_implication_failures),
                          std::to_string(c.decay_implication_failures), std::to_string(c.dichotomy_failures),
                          std::to_string(c.plus_failures), std::to_string(c.minus_failures),
                          std::to_string(c.turan_failures)});
      if (c.turan_failures) all = false;
    }
    if (r.L0)
      reported = std::max(reported, *r.L0);
    else
      all = false;
  };
  for (const auto& m : modes) beta_min = std::min(beta_min, m.beta);
  if (!o.combined_only)
    for (const auto& m : modes) record(m.tag, {m}, m.beta);
  record("combined", modes, beta_min);
  out.body = {{"n", o.n}, {"k", o.k}, {"t", o.t}, {"trials", o.trials}, {"beta_ratio", o.beta_ratio},
              {"L_max", o.L_max}, {"a", o.a}, {"reported_L0", all ? json(reported) : json(nullptr)}, {"runs", runs}};
  if (!all) out.status = kPropertyFailure;
  return out;
}

struct DegenerateOpts {
  int n = 4, k = 1, j_max = 6;
  std::string t_values = "-0.1,-0.05,0,0.05,0.1";
};

Output cmd_degenerate(const Global& g, const DegenerateOpts& o) {
  Output out;
  const DegenerateReport r = degenerate_scan(o.n, o.k, parse_list(o.t_values), o.j_max, g.jobs);
  json arr = json::array();
  out.header = {"t", "mode", "zero_roots", "delta_free", "constant_witness"};
  for (const auto& e : r.entries) {
    arr.push_back({{"t", e.t},
                   {"mode", e.mode},
                   {"zero_roots", e.zero_roots},
                   {"delta_free", e.delta_free},
                   {"constant_witness", e.constant_witness}});
    out.rows.push_back({num(e.t), e.mode, std::to_string(e.zero_roots), std::to_string(e.delta_free),
                        e.constant_witness ? "1" : "0"});
  }
  const bool has_zero_t = std::find(parse_list(o.t_values).begin(), parse_list(o.t_values).end(), 0.0) !=
                          parse_list(o.t_values).end();
  out.body = {{"n", r.n},
              {"k", r.k},
              {"j_max", r.j_max},
              {"delta_free_nonzero_t", r.delta_free_nonzero_t},
              {"constant_witness", r.constant_witness},
              {"entries", arr}};
  if (r.delta_free_nonzero_t != 0 || (has_zero_t && !r.constant_witness)) out.status = kPropertyFailure;
  return out;
}

struct TuranOpts {
  long discrete = 10000, integral = 1000, interval = 1000;
  bool regenerate = false;
  int m_max = 10;
  long trials = 200000;
  double safety = 4.0;
};

Output cmd_turan(const Global& g, const TuranOpts& o) {
  Output out;
  if (o.regenerate) {
    const TuranTable t = TuranTable::regenerate(o.m_max, o.trials, g.seed, o.safety);
    out.body = json::parse(t.to_json());
    out.header = {"d", "discrete", "integral", "corollary"};
    for (int d = 1; d <= TuranTable::kMaxD; ++d)
      out.rows.push_back({std::to_string(d), num(t.discrete_at(d)), num(t.integral_at(d)), num(t.corollary_at(d))});
    return out;
  }
  const TuranSweepReport r = turan_sweep(o.discrete, o.integral, o.interval, g.seed, TuranTable::shipped(), g.jobs);
  out.body = {{"discrete", {{"trials", r.discrete_trials}, {"violations", r.discrete_violations},
                            {"worst_ratio", r.discrete_worst}}},
              {"integral", {{"trials", r.integral_trials}, {"violations", r.integral_violations},
                            {"corollary_violations", r.corollary_violations}, {"worst_ratio", r.integral_worst}}},
              {"interval", {{"trials", r.interval_trials}, {"growth_violations", r.growth_violations},
                            {"decay_violations", r.decay_violations}, {"worst_ratio", r.interval_worst}}}};
  out.header = {"family", "trials", "violations", "worst_ratio"};
  out.rows = {{"discrete", std::to_string(r.discrete_trials), std::to_string(r.discrete_violations),
               num(r.discrete_worst)},
              {"integral", std::to_string(r.integral_trials),
               std::to_string(r.integral_violations + r.corollary_violations), num(r.integral_worst)},
              {"interval", std::to_string(r.interval_trials), std::to_string(r.growth_violations + r.decay_violations),
               num(r.interval_worst)}};
  if (r.discrete_violations + r.integral_violations + r.corollary_violations + r.growth_violations +
      r.decay_violations)
    out.status = kPropertyFailure;
  return out;
}

struct BootstrapOpts {
  std::string regime = "infinity", beta0, sigma0;
  int n = 4, k = 1;
  bool ladder = false;
  std::optional<double> epsilon;
};

Output cmd_bootstrap(const Global&, const BootstrapOpts& o) {
  check_range(o.n, o.k);
  Output out;
  const Regime reg = regime_from_string(o.regime);
  DecayState s;
  if (reg == Regime::infinity) {
    require(!o.beta0.empty(), "bootstrap --regime infinity needs --beta0");
    s = bootstrap_infinity(o.n, o.k, q_parse(o.beta0));
  } else {
    require(!o.sigma0.empty(), "bootstrap --regime origin needs --sigma0");
    s = bootstrap_origin(o.n, o.k, q_parse(o.sigma0));
  }
  json hist = json::array();
  out.header = {"step", "order", "open", "mechanism", "verified"};
  for (const auto& h : s.history) {
    json e{{"step", h.step}, {"order", str(h.order)}, {"open", h.open}, {"mechanism", h.mechanism}};
    e["verified"] = h.verified ? json(*h.verified) : json(nullptr);
    hist.push_back(e);
    out.rows.push_back({std::to_string(h.step), str(h.order), h.open ? "1" : "0", h.mechanism,
                        h.verified ? (*h.verified ? "1" : "0") : ""});
  }
  json path = json::array();
  for (const auto& q : s.path()) path.push_back(str(q));
  out.body = {{"regime", to_string(reg)}, {"n", s.n},         {"k", s.k},
              {"initial", str(s.initial)}, {"order", str(s.order)}, {"target", str(s.target)},
              {"open", s.open},            {"terminal", s.terminal()}, {"barriers", s.barriers},
              {"path", path},              {"history", hist}};
  if (o.ladder) {
    const RegularityLadder l = regularity_ladder(o.n, o.k, o.epsilon);
    json steps = json::array();
    for (const auto& st : l.steps) steps.push_back({{"claim", st.claim}, {"mechanism", st.mechanism}});
    out.body["ladder"] = {{"p", l.p_infinite ? json("inf") : json(l.p)},
                          {"epsilon", l.epsilon},
                          {"gap", l.gap},
                          {"gap_ok", l.gap_ok},
                          {"steps", steps}};
  }
  bool verified = true;
  for (const auto& h : s.history) verified = verified && h.verified.value_or(true);
  if (!s.terminal() || !verified) out.status = kPropertyFailure;
  return out;
}

struct VerifyOpts {
  std::vector<std::string> suites;
  bool acceptance_only = false, list = false;
};

Output cmd_verify_all(const Global& g, const VerifyOpts& o) {
  Output out;
  out.header = {"id", "module", "name", "acceptance", "pass", "detail"};
  if (o.list) {
    json arr = json::array();
    for (const auto& s : suite_catalog()) {
      arr.push_back({{"id", s.id}, {"module", s.module}, {"name", s.name}, {"acceptance", s.acceptance},
                     {"budget_seconds", s.budget}});
      out.rows.push_back({s.id, s.module, s.name, s.acceptance ? "1" : "0", "", ""});
    }
    out.body = {{"suites", arr}};
    return out;
  }
  SuiteOptions so;
  so.seed = g.seed;
  so.jobs = g.jobs;
  so.tolerance = g.tolerance;
  std::vector<SuiteResult> results;
  if (!o.suites.empty())
    for (const auto& id : o.suites) results.push_back(run_suite(id, so));
  else if (o.acceptance_only)
    results = run_acceptance_suites(so);
  else
    results = run_all_suites(so);
  json arr = json::array();
  json timing = json::object();
  std::ostringstream table;
  int failed = 0;
  bool numeric = false;
  table << std::left << std::setw(24) << "suite" << std::setw(6) << "pass" << std::setw(10) << "seconds"
        << "detail\n";
  for (const auto& r : results) {
    arr.push_back({{"id", r.id}, {"module", r.module}, {"name", r.name}, {"acceptance", r.acceptance},
                   {"pass", r.pass}, {"error", r.error}, {"detail", r.detail}});
    timing[r.id] = r.seconds;
    out.rows.push_back({r.id, r.module, r.name, r.acceptance ? "1" : "0", r.pass ? "1" : "0", r.detail});
    table << std::left << std::setw(24) << r.id << std::setw(6) << (r.pass ? "ok" : "FAIL") << std::setw(10)
          << std::fixed << std::setprecision(2) << r.seconds << r.detail << "\n";
    failed += r.pass ? 0 : 1;
    numeric = numeric || r.error;
  }
  table << results.size() - failed << "/" << results.size() << " suites passed\n";
  out.body = {{"seed", g.seed}, {"tolerance", g.tolerance}, {"passed", static_cast<long>(results.size()) - failed},
              {"failed", failed}, {"suites", arr}};
  out.meta["suite_seconds"] = timing;
  out.summary = table.str();
  if (failed) out.status = numeric ? kNumeric : kPropertyFailure;
  return out;
}

// ------------------------------------------------------------------ plumbing

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render(const Global& g, const Output& o) {
  if (g.format == "json") return o.body.dump(2) + "\n";
  std::ostringstream s;
  for (std::size_t i = 0; i < o.header.size(); ++i) s << (i ? "," : "") << csv_field(o.header[i]);
  s << "\n";
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << csv_field(row[i]);
    s << "\n";
  }
  return s.str();
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct WriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Global& g, const Output& o, const std::string& command, const std::vector<std::string>& args,
          const std::string& started) {
  const std::string text = render(g, o);
  if (g.out.empty()) {
    std::cout << text;
    if (!o.summary.empty()) std::cerr << o.summary;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw WriteError("cannot write output file '" + g.out + "'");
  f << text;
  if (!f) throw WriteError("cannot write output file '" + g.out + "'");
  json meta{{"command", command}, {"args", args},     {"seed", g.seed},   {"jobs", g.jobs},
            {"started", started}, {"finished", utc_now()}, {"status", o.status}};
  for (const auto& [k, v] : o.meta.items()) meta[k] = v;
  std::ofstream m(g.out + ".meta.json");
  if (!m) throw WriteError("cannot write metadata file '" + g.out + ".meta.json'");
  m << meta.dump(2) << "\n";
  if (!o.summary.empty()) std::cout << o.summary;
}

// Flat key=value config: every key not already given as a flag is appended
// as --key value, so flags override the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      continue;
    }
    out.push_back(args[i]);
  }
  if (path.empty()) return out;
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot read config file '" + path + "'");
  std::set<std::string> given;
  for (const auto& a : out)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                                          : a.find('=') - 2));
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw PreconditionError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (given.count(key)) continue;
    if (value == "true") {
      out.push_back("--" + key);
    } else if (value != "false") {
      out.push_back("--" + key);
      out.push_back(value);
    }
  }
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  const auto started = utc_now();
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    args = expand_config(args);
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Indicial roots, flat kernels, symbols, Turan sweeps and the decay bootstrap.", "ale"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads, 0 = OpenMP default")->capture_default_str();
  app.add_option("--out", g.out, "output file; metadata goes to <out>.meta.json");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "residual tolerance")->capture_default_str();
  app.add_option("--config", "flat key=value file; flags override");  // consumed by expand_config

  std::map<CLI::App*, std::function<Output()>> actions;

  ExceptionalOpts ex;
  auto* s_ex = app.add_subcommand("exceptional", "exceptional sets of box and of Delta^{k+1}");
  s_ex->add_option("--n", ex.n)->required();
  s_ex->add_option("--k", ex.k)->required();
  s_ex->add_option("--j-max", ex.j_max)->capture_default_str();
  s_ex->add_option("--window", ex.window)->capture_default_str();
  actions[s_ex] = [&] { return cmd_exceptional(g, ex); };

  RatesOpts ra;
  auto* s_ra = app.add_subcommand("rates", "growth rates of box_t on one mode");
  s_ra->add_option("--n", ra.n)->required();
  s_ra->add_option("--t", ra.t, "rational, e.g. 0.1 or 1/10")->capture_default_str();
  s_ra->add_option("--family", ra.family)->check(CLI::IsMember({"typeI", "typeII"}))->capture_default_str();
  s_ra->add_option("--j", ra.j)->required();
  actions[s_ra] = [&] { return cmd_rates(g, ra); };

  GapOpts ga;
  auto* s_ga = app.add_subcommand("gap", "essential linear gap of box_t");
  s_ga->add_option("--n", ga.n)->required();
  s_ga->add_option("--t", ga.t)->capture_default_str();
  s_ga->add_option("--j-max", ga.j_max)->capture_default_str();
  actions[s_ga] = [&] { return cmd_gap(g, ga); };

  KernelOpts ke;
  auto* s_ke = app.add_subcommand("kernel", "divergence-free kernels, quadratic Lie map, flow defect");
  s_ke->add_option("--what", ke.what)->check(CLI::IsMember({"divfree", "lie", "flow"}))->capture_default_str();
  s_ke->add_option("--n", ke.n)->required();
  s_ke->add_option("--k", ke.k)->capture_default_str();
  s_ke->add_option("--mode", ke.mode, "degree0|degree1|log|n3_degree1|all")->capture_default_str();
  s_ke->add_flag("--basis", ke.basis, "include nullspace basis vectors");
  s_ke->add_option("--fields", ke.fields, "random fields for --what flow")->capture_default_str();
  s_ke->add_option("--radii", ke.radii, "comma-separated radii for --what flow")->capture_default_str();
  actions[s_ke] = [&] { return cmd_kernel(g, ke); };

  SymbolOpts sy;
  auto* s_sy = app.add_subcommand("symbol", "principal symbol of the linearized obstruction operator");
  s_sy->set_help_flag("--help", "print this help message and exit");
  s_sy->add_option("--n", sy.n)->capture_default_str();
  s_sy->add_option("--k", sy.k)->capture_default_str();
  s_sy->add_option("--xi", sy.xi, "comma-separated covector");
  s_sy->add_option("--h", sy.h, "symmetric matrix, rows separated by ';'");
  s_sy->add_flag("--sweep", sy.sweep, "random gauge/reduction/homogeneity sweep");
  s_sy->add_option("--trials", sy.trials)->capture_default_str();
  actions[s_sy] = [&] { return cmd_symbol(g, sy); };

  ApplyOpts ap;
  auto* s_ap = app.add_subcommand("apply", "apply a tensor operator to a polynomial field");
  s_ap->add_option("--op", ap.op, "partial_i, laplacian, div, lie, box, box_t, P_t_k, lin_bach, ...")->required();
  s_ap->add_option("--field", ap.field, "tensor JSON, inline or a file path")->required();
  s_ap->add_option("--t", ap.t)->capture_default_str();
  s_ap->add_option("--k", ap.k)->capture_default_str();
  s_ap->add_option("--index", ap.index)->capture_default_str();
  actions[s_ap] = [&] { return cmd_apply(g, ap); };

  ModesOpts mo;
  auto* s_mo = app.add_subcommand("modes", "probed Euler systems and indicial spectra per mode");
  s_mo->add_option("--n", mo.n)->required();
  s_mo->add_option("--k", mo.k)->capture_default_str();
  s_mo->add_option("--t", mo.t)->capture_default_str();
  s_mo->add_option("--j-max", mo.j_max)->capture_default_str();
  s_mo->add_option("--op", mo.op)->check(CLI::IsMember({"P_t_k", "box", "box_t", "lap_power"}))->capture_default_str();
  actions[s_mo] = [&] { return cmd_modes(g, mo); };

  AnnulusOpts an;
  auto* s_an = app.add_subcommand("three-annulus", "three annulus sweep and empirical L0");
  s_an->add_option("--n", an.n)->capture_default_str();
  s_an->add_option("--k", an.k)->capture_default_str();
  s_an->add_option("--t", an.t)->capture_default_str();
  s_an->add_option("--j-max", an.j_max)->capture_default_str();
  s_an->add_option("--trials", an.trials)->capture_default_str();
  s_an->add_option("--beta-ratio", an.beta_ratio, "beta' / beta")->capture_default_str();
  s_an->add_option("--L-max", an.L_max)->capture_default_str();
  s_an->add_option("--a", an.a, "inner radius")->capture_default_str();
  s_an->add_flag("--no-scalar-power", an.no_scalar_power, "skip Delta^{k+1} scalar modes");
  s_an->add_flag("--combined-only", an.combined_only, "skip the per-mode runs");
  actions[s_an] = [&] { return cmd_three_annulus(g, an); };

  DegenerateOpts de;
  auto* s_de = app.add_subcommand("degenerate-scan", "degenerate solutions and the delta_t intersection");
  s_de->add_option("--n", de.n)->capture_default_str();
  s_de->add_option("--k", de.k)->capture_default_str();
  s_de->add_option("--t-values", de.t_values)->capture_default_str();
  s_de->add_option("--j-max", de.j_max)->capture_default_str();
  actions[s_de] = [&] { return cmd_degenerate(g, de); };

  TuranOpts tu;
  auto* s_tu = app.add_subcommand("turan", "Turan lemma sweeps or constant-table regeneration");
  s_tu->add_option("--discrete", tu.discrete)->capture_default_str();
  s_tu->add_option("--integral", tu.integral)->capture_default_str();
  s_tu->add_option("--interval", tu.interval)->capture_default_str();
  s_tu->add_flag("--regenerate-table", tu.regenerate, "estimate A(d) and print the table");
  s_tu->add_option("--m-max", tu.m_max)->capture_default_str();
  s_tu->add_option("--trials", tu.trials, "draws per d for --regenerate-table")->capture_default_str();
  s_tu->add_option("--safety", tu.safety)->capture_default_str();
  actions[s_tu] = [&] { return cmd_turan(g, tu); };

  BootstrapOpts bo;
  double eps = 0;
  auto* s_bo = app.add_subcommand("bootstrap", "decay bootstrap at infinity or at the origin");
  s_bo->add_option("--regime", bo.regime)->check(CLI::IsMember({"infinity", "origin"}))->capture_default_str();
  s_bo->add_option("--n", bo.n)->required();
  s_bo->add_option("--k", bo.k)->required();
  s_bo->add_option("--beta0", bo.beta0, "initial decay order at infinity");
  s_bo->add_option("--sigma0", bo.sigma0, "initial order at the origin");
  s_bo->add_flag("--ladder", bo.ladder, "append the regularity ladder");
  auto* eps_opt = s_bo->add_option("--epsilon", eps, "ladder epsilon");
  actions[s_bo] = [&] {
    if (eps_opt->count()) bo.epsilon = eps;
    return cmd_bootstrap(g, bo);
  };

  VerifyOpts ve;
  auto* s_ve = app.add_subcommand("verify-all", "run the acceptance and invariant suites");
  s_ve->add_option("--suite", ve.suites, "run only these suite ids (repeatable)");
  s_ve->add_flag("--acceptance-only", ve.acceptance_only);
  s_ve->add_flag("--list", ve.list, "list suites without running them");
  actions[s_ve] = [&] { return cmd_verify_all(g, ve); };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const Output o = actions.at(chosen)();
    emit(g, o, chosen->get_name(), args, started);
    return o.status;
  } catch (const PreconditionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const WriteError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace ale::cli
