#include "srcurv/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srcurv/carre.hpp"
#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"
#include "srcurv/geodesics.hpp"
#include "srcurv/solovev.hpp"
#include "srcurv/wagner.hpp"

namespace srcurv {

using json = nlohmann::json;

std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Options {
  std::string input;
  std::string builtin;
  std::string plane = "1,2";
  double tol = kDefaultTol;
  double step = 1e-2;
  double time = 1.0;
  std::string xi;
  std::string u;
  int direction = 1;
  std::string format = "json";
  unsigned seed = 0;
  int jobs = 1;
  std::string trajectory;
  bool unnormalized = false;
  std::string alternation = "1";
  std::string field = "g12";
  std::string at;
  double rho1 = 0.0, rho2 = 1.0, kappa = 0.0, nu = 1.0, r = 0.0;  // r = 0 means infinity
  std::string export_path;
};

// Scalars -----------------------------------------------------------------

json sj(const Rational& x) { return format_scalar(x); }
json sj(double x) { return x; }

template <class T>
json vec_json(const Vector<T>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(sj(v(i)));
  return out;
}

template <class T>
json mat_json(const Matrix<T>& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vec_json<T>(Vector<T>(m.row(r).transpose())));
  return out;
}

template <class T>
json columns_json(const Matrix<T>& m) {
  return mat_json<T>(Matrix<T>(m.transpose()));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    out.push_back(tok);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError(std::string("--") + what + ": expected integers, got '" + s + "'");
    }
  }
  return out;
}

VectorXd parse_doubles(const std::string& s, int n, const char* what) {
  auto toks = split(s, ',');
  if (static_cast<int>(toks.size()) != n)
    throw InputError(std::string("--") + what + ": expected " + std::to_string(n) + " comma-separated values");
  VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    try {
      v(i) = ScalarOps<double>::parse(toks[i]);
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw InputError(std::string("--") + what + ": cannot parse '" + toks[i] + "'");
    }
  }
  return v;
}

// Entry handling ---------------------------------------------------------

CatalogEntry load_entry(const Options& o) {
  if (!o.input.empty() && !o.builtin.empty()) throw InputError("use either --input or --builtin, not both");
  if (!o.input.empty()) return load(o.input);
  if (!o.builtin.empty()) return builtin(o.builtin);
  throw InputError("an input is required: --input PATH or --builtin ID");
}

template <class T>
CatalogData<T> with_tol(const CatalogData<T>& e, double tol) {
  const auto& a = e.algebra();
  LieAlgebra<T> b(a.name(), a.structure(), a.labels(), tol);
  const auto& s = e.structure;
  return CatalogData<T>{e.id, SubRiemannianStructure<T>(b, s.distribution(), s.rigging(), s.metric()),
                        e.matrix_model, e.expected};
}

CatalogData<double> to_float(const CatalogData<Rational>& e, double tol) {
  CatalogData<double> out{e.id, convert_structure<double>(e.structure), std::nullopt, e.expected};
  if (e.matrix_model) {
    ModelData<double> m{e.matrix_model->rep_dim, {}};
    for (const auto& b : e.matrix_model->basis) m.basis.push_back(convert<double>(b));
    out.matrix_model = m;
  }
  return with_tol(out, tol);
}

// Commands ----------------------------------------------------------------

template <class T>
json structure_constants_json(const AdaptedStructure<T>& s) {
  json out = json::array();
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j)
      for (int k = 0; k < s.n; ++k)
        if (!is_zero(s.c(i, j, k), s.tol)) out.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"value", sj(s.c(i, j, k))}});
  return out;
}

std::string pair_key(int a, int b) { return std::to_string(a + 1) + "," + std::to_string(b + 1); }

template <class T>
json cmd_validate(const CatalogData<T>& e, const Options&) {
  const auto& s = e.structure;
  const auto& a = s.algebra();
  json checks;
  T jac = jacobi_defect(a);
  checks["antisymmetry"] = true;  // enforced on construction
  checks["jacobi"] = is_zero(jac, a.tol());
  checks["metric_spd"] = is_spd<T>(s.metric(), a.tol());
  checks["d_perp_orthogonal"] =
      matrix_is_zero<T>(Matrix<T>(s.distribution().transpose() * s.metric() * s.rigging()), a.tol());
  Flag<T> flag = derived_flag(a, s.distribution());
  checks["bracket_generating"] = flag.bracket_generating;
  if (e.matrix_model) checks["matrix_model"] = is_zero(model_defect(a, *e.matrix_model), a.tol());
  bool frame_ok = true;
  try {
    OrthonormalFrame<T> f = adapted_frame(s);
    Matrix<T> gram = f.vectors.transpose() * s.metric() * f.vectors;
    frame_ok = matrix_is_zero<T>(Matrix<T>(gram - identity<T>(s.dim())), a.tol());
  } catch (const InexactError&) {
    throw;
  }
  checks["adapted_frame_orthonormal"] = frame_ok;
  bool all = true;
  for (auto& [k, v] : checks.items()) all = all && v.template get<bool>();
  json r;
  r["checks"] = checks;
  r["all_passed"] = all;
  r["dimension"] = s.dim();
  r["rank"] = s.rank();
  r["growth_vector"] = flag.growth_vector;
  r["nonholonomy_order"] = flag.nonholonomy_order;
  r["jacobi_defect"] = sj(jac);
  r["lower_central_series"] = lower_central_series(a);
  return r;
}

template <class T>
json cmd_curvature(const CatalogData<T>& e, const Options& o) {
  AdaptedStructure<T> s = adapt(e.structure);
  CurvatureReport<T> rep = curvature_report(s);
  auto plane = parse_ints(o.plane, "plane");
  if (plane.size() != 2 || plane[0] == plane[1] || plane[0] < 1 || plane[1] < 1 || plane[0] > s.m || plane[1] > s.m)
    throw InputError("--plane: need two distinct frame indices in 1.." + std::to_string(s.m));
  const int a = plane[0] - 1, b = plane[1] - 1;
  json r;
  r["plane"] = plane;
  r["sectional"] = sj(sectional_frame(rep.tensor, a, b));
  r["sectional_torsion"] =
      sj(sectional_torsion(s, s.from_frame(s.unit(a)), s.from_frame(s.unit(b))));
  json ric = json::array();
  for (const auto& x : rep.ricci) ric.push_back(sj(x));
  r["ricci"] = ric;
  r["scalar"] = sj(rep.scalar);
  json all = json::object(), tors = json::object(), mil = json::object();
  for (const auto& [k, v] : rep.sectional) all[pair_key(k.first, k.second)] = sj(v);
  for (const auto& [k, v] : rep.sectional_torsion) tors[pair_key(k.first, k.second)] = sj(v);
  auto closed = milnor_closed_form(s);
  bool closed_ok = true;
  for (const auto& [k, v] : closed) {
    if (k.first < k.second) mil[pair_key(k.first, k.second)] = sj(v);
    closed_ok = closed_ok && is_zero(T(v - sectional_frame(rep.tensor, k.first, k.second)), s.tol);
  }
  r["sectional_all"] = all;
  r["sectional_torsion_all"] = tors;
  r["closed_form"] = mil;
  r["closed_form_agrees"] = closed_ok;
  r["routes_agree"] = true;  // curvature_tensor throws otherwise
  json tensor = json::array();
  for (int i = 0; i < s.m; ++i) {
    json l1 = json::array();
    for (int j = 0; j < s.m; ++j) {
      json l2 = json::array();
      for (int k = 0; k < s.m; ++k) {
        json l3 = json::array();
        for (int l = 0; l < s.m; ++l) l3.push_back(sj(rep.tensor.values(i, j, k, l)));
        l2.push_back(l3);
      }
      l1.push_back(l2);
    }
    tensor.push_back(l1);
  }
  r["tensor"] = tensor;
  r["flat"] = report_is_zero(rep, s.tol);
  r["frame"] = columns_json<T>(s.frame.vectors);
  r["structure_constants"] = structure_constants_json(s);
  json bi;
  bi["applicable"] = metric_is_biinvariant(s);
  if (metric_is_biinvariant(s)) {
    auto kb = biinvariant_tensor(s);
    bool same = true;
    for (std::size_t i = 0; i < kb.values.data().size(); ++i)
      same = same && is_zero(T(kb.values.data()[i] - rep.tensor.values.data()[i]), s.tol);
    bi["matches"] = same;
  }
  r["biinvariant"] = bi;
  auto sub = submersion_base_curvature(s, s.from_frame(s.unit(a)), s.from_frame(s.unit(b)));
  json sb;
  sb["preconditions_ok"] = sub.preconditions_ok;
  sb["diagnosis"] = sub.diagnosis;
  if (sub.preconditions_ok) {
    sb["ambient_sectional"] = sj(sub.ambient);
    sb["vertical_term"] = sj(sub.vertical_term);
    sb["base_sectional"] = sj(sub.base);
    sb["equal"] = sub.equal;
  }
  r["submersion"] = sb;
  return r;
}

template <class T>
json stage_json(const WagnerStage<T>& st, double tol) {
  json entries = json::array();
  const auto& t = st.tensor;
  for (int a = 0; a < t.dim(0); ++a)
    for (int b = a + 1; b < t.dim(1); ++b)
      for (int z = 0; z < t.dim(2); ++z) {
        bool nz = false;
        json val = json::array();
        for (int k = 0; k < t.dim(3); ++k) {
          nz = nz || !is_zero(t(a, b, z, k), tol);
          val.push_back(sj(t(a, b, z, k)));
        }
        if (nz) entries.push_back({{"x", a + 1}, {"y", b + 1}, {"z", z + 1}, {"value", val}});
      }
  json j;
  j["stage"] = st.stage;
  j["label"] = st.stage == 0 ? "schouten" : "K" + std::to_string(st.stage);
  j["shape"] = {t.dim(0), t.dim(1), t.dim(2), t.dim(3)};
  j["nonzero"] = entries;
  j["domain_violations"] = st.domain_violations;
  return j;
}

template <class T>
json cmd_wagner(const CatalogData<T>& e, const Options& o) {
  if (!is_rational_literal(o.alternation) && o.alternation.find('.') == std::string::npos)
    throw InputError("--alternation: expected a number such as 1 or 1/2");
  WagnerOptions<T> opts;
  opts.alternation = ScalarOps<T>::parse(o.alternation);
  WagnerResult<T> w = wagner_iterate(e.structure, opts);
  const auto& f = w.flag;
  json r;
  r["layers"] = f.layers;
  r["growth_vector"] = f.flag.growth_vector;
  r["nonholonomy_order"] = f.r();
  r["basis"] = columns_json<T>(f.basis);
  json vg = json::array();
  bool spd = true;
  for (const auto& g : f.vertical_gram) {
    vg.push_back(mat_json<T>(g));
    spd = spd && is_spd<T>(g, f.tol);
  }
  r["vertical_gram"] = vg;
  r["vertical_gram_spd"] = spd;
  r["canonical_metric"] = mat_json<T>(canonical_metric_algebra(f));
  json stages = json::array();
  for (const auto& st : w.stages) stages.push_back(stage_json(st, f.tol));
  r["stages"] = stages;
  r["alternation"] = sj(opts.alternation);
  r["absolute_parallelism"] = absolute_parallelism(w);
  return r;
}

template <class T>
json cmd_rigging(const CatalogData<T>& e, const Options&) {
  RiggingReport<T> rep = rigging_conditions(e.structure);
  json r;
  r["cond1"] = rep.cond1;
  r["cond2"] = rep.cond2;
  r["cond3"] = rep.cond3;
  r["dperp_is_ideal"] = rep.dperp_is_ideal;
  r["dperp_is_subalgebra"] = rep.dperp_is_subalgebra;
  r["cond2_literal_vs_ideal_differ"] = rep.cond2 != rep.dperp_is_ideal;
  json wit = json::array();
  for (const auto& w : rep.witnesses)
    wit.push_back({{"condition", w.condition}, {"w", vec_json<T>(w.w)}, {"x", vec_json<T>(w.x)},
                   {"form_index", w.form_index + 1}, {"value", sj(w.value)}});
  r["witnesses"] = wit;
  return r;
}

template <class T>
json cmd_contact(const CatalogData<T>& e, const Options&) {
  ContactReport<T> rep = contact_check(e.structure);
  json r;
  r["is_contact"] = rep.is_contact;
  r["omega"] = vec_json<T>(rep.omega);
  r["reeb"] = rep.reeb ? vec_json<T>(*rep.reeb) : json(nullptr);
  r["domega_on_d"] = mat_json<T>(rep.domega_on_d);
  r["domega"] = mat_json<T>(rep.domega);
  return r;
}

template <class T>
json cmd_classify3d(const CatalogData<T>& e, const Options&) {
  Classification3d<T> c = classify_3d(e.algebra());
  json r;
  r["class"] = to_string(c.kind);
  r["reason"] = c.reason;
  r["witness"] = c.witness ? columns_json<T>(*c.witness) : json(nullptr);
  if (c.witness) {
    SubRiemannianStructure<T> s(e.algebra(), *c.witness);
    ContactReport<T> rep = contact_check(s);
    r["witness_is_contact"] = rep.is_contact;
    r["witness_reeb"] = rep.reeb ? vec_json<T>(*rep.reeb) : json(nullptr);
  }
  return r;
}

json cmd_geodesic(const CatalogData<double>& e, const Options& o) {
  GeodesicProblem p = make_problem(e.structure, model_from_entry(e), !o.unnormalized);
  if (o.xi.empty()) throw InputError("geodesic: --xi is required");
  VectorXd xi = parse_doubles(o.xi, p.algebra.dim(), "xi");
  Trajectory tr = integrate(p, xi, o.time, o.step);
  if (!o.trajectory.empty()) {
    std::ofstream out(o.trajectory);
    if (!out) throw InputError("geodesic: cannot write '" + o.trajectory + "'");
    out << trajectory_jsonl(p, tr);
  }
  json r;
  r["H0"] = hamiltonian(p, xi);
  r["steps"] = static_cast<int>(tr.samples.size()) - 1;
  r["step"] = tr.step;
  r["time"] = o.time;
  r["unit_speed"] = p.unit_speed;
  r["max_h_drift"] = tr.max_h_drift;
  r["coadjoint_residual"] = tr.max_coadjoint_residual;
  const auto& last = tr.samples.back();
  r["final"] = {{"t", last.t}, {"g", mat_json<double>(last.g)}, {"xi", vec_json<double>(last.xi)}};
  if (!o.trajectory.empty()) r["trajectory_file"] = o.trajectory;
  return r;
}

json cmd_abnormal(const CatalogData<double>& e, const Options& o) {
  GeodesicProblem p = make_problem(e.structure, model_from_entry(e));
  VectorXd u;
  if (!o.u.empty()) {
    u = parse_doubles(o.u, p.algebra.dim(), "u");
  } else {
    const auto& d = e.structure.distribution();
    if (o.direction < 1 || o.direction > d.cols())
      throw InputError("--direction: index out of range 1.." + std::to_string(d.cols()));
    u = d.col(o.direction - 1);
  }
  AbnormalSearch a = abnormal_covector_search(p, u);
  json r;
  r["direction"] = vec_json<double>(u);
  r["t_samples"] = a.t_samples;
  r["singular_values"] = vec_json<double>(a.singular_values);
  r["family_dim"] = static_cast<int>(a.covectors.cols());
  r["covectors"] = columns_json<double>(a.covectors);
  r["certificate"] = a.covectors.cols() > 0 ? "candidate abnormal covectors (necessary condition only)" : "none";
  return r;
}

// Fields for the gamma command: sums of monomials in matrix entries, e.g. "g13 + 0.5*g12^2 - 2*g11*g23".
ScalarField parse_field(const std::string& text, int rep_dim) {
  struct Factor {
    int r, c, p;
  };
  struct Term {
    double coef;
    std::vector<Factor> factors;
  };
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InputError("--field: empty expression");
  // Turn binary minus into "+-" so terms split on '+'.
  std::string t;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '-' && i > 0 && s[i - 1] != '+' && s[i - 1] != '*' && s[i - 1] != '^' && s[i - 1] != 'e') t += '+';
    t += s[i];
  }
  std::vector<Term> terms;
  for (const auto& term_text : split(t, '+')) {
    if (term_text.empty()) throw InputError("--field: malformed expression '" + text + "'");
    Term term{1.0, {}};
    std::string body = term_text;
    if (body[0] == '-' && body.size() > 1 && body[1] == 'g') {
      term.coef = -1.0;
      body = body.substr(1);
    }
    for (const auto& f : split(body, '*')) {
      if (!f.empty() && f[0] == 'g') {
        if (f.size() < 3) throw InputError("--field: bad entry '" + f + "'");
        int r = f[1] - '0', c = f[2] - '0', p = 1;
        if (f.size() > 3) {
          if (f[3] != '^') throw InputError("--field: bad entry '" + f + "'");
          p = std::stoi(f.substr(4));
        }
        if (r < 1 || c < 1 || r > rep_dim || c > rep_dim || p < 0)
          throw InputError("--field: entry '" + f + "' out of range for " + std::to_string(rep_dim) + "x" +
                           std::to_string(rep_dim) + " matrices");
        term.factors.push_back({r - 1, c - 1, p});
      } else {
        try {
          term.coef *= ScalarOps<double>::parse(f);
        } catch (const std::exception&) {
          throw InputError("--field: cannot parse factor '" + f + "'");
        }
      }
    }
    terms.push_back(term);
  }
  return [terms](const MatrixXd& g) {
    double sum = 0.0;
    for (const auto& term : terms) {
      double v = term.coef;
      for (const auto& f : term.factors) v *= std::pow(g(f.r, f.c), f.p);
      sum += v;
    }
    return sum;
  };
}

json cmd_gamma(const CatalogData<double>& e, const Options& o) {
  MatrixModel model = model_from_entry(e);
  CarreSetup c = make_carre(e.structure, model, FDScheme{o.step < 1e-2 ? o.step : 1e-3, 1e-2});
  ScalarField f = parse_field(o.field, model.rep_dim());
  MatrixXd g0 = MatrixXd::Identity(model.rep_dim(), model.rep_dim());
  if (!o.at.empty()) g0 = model.exp(parse_doubles(o.at, model.dim(), "at"));
  GammaValue g = gamma(c, f, f, g0);
  Gamma2Value g2 = gamma2(c, f, g0);
  json r;
  r["field"] = o.field;
  r["point"] = mat_json<double>(g0);
  r["L"] = operator_L(c, f, g0, c.scheme.h1);
  r["gamma"] = {{"bakry_emery", g.bakry_emery}, {"sum_of_squares", g.sum_of_squares}, {"discrepancy", g.discrepancy()}};
  r["gammaZ"] = gammaZ(c, f, f, g0);
  r["gamma2"] = {{"value", g2.value}, {"half_step", g2.value_half_step}, {"roundoff_suspect", g2.roundoff_suspect}};
  if (c.vertical.cols() > 0) {
    Gamma2Value z2 = gammaZ2(c, f, g0);
    r["gammaZ2"] = {{"value", z2.value}, {"half_step", z2.value_half_step}, {"roundoff_suspect", z2.roundoff_suspect}};
    r["hypothesis2_residual"] = hypothesis2_check(c, f, g0);
  }
  CDParams p{o.rho1, o.rho2, o.kappa, o.r > 0 ? o.r : std::numeric_limits<double>::infinity(), o.nu};
  r["cd_residual"] = cd_probe(c, f, g0, p);
  r["steps"] = {{"h1", c.scheme.h1}, {"outer", c.scheme.outer}};
  return r;
}

json catalog_summary(const std::string& id) {
  CatalogData<Rational> e = builtin_exact(id);
  const auto& s = e.structure;
  Flag<Rational> flag = derived_flag(s.algebra(), s.distribution());
  json j;
  j["id"] = id;
  j["dimension"] = s.dim();
  j["rank"] = s.rank();
  j["growth_vector"] = flag.growth_vector;
  j["bracket_generating"] = flag.bracket_generating;
  j["matrix_model"] = e.matrix_model.has_value();
  j["expected"] = e.expected;
  try {
    AdaptedStructure<Rational> a = adapt(s);
    j["scalar_curvature"] = sj(curvature_report(a).scalar);
  } catch (const InexactError&) {
    j["scalar_curvature"] = nullptr;
  }
  return j;
}

json cmd_catalog(const Options& o) {
  json r;
  if (!o.builtin.empty() || !o.input.empty()) {
    CatalogEntry e = load_entry(o);
    if (!o.export_path.empty()) {
      save(e, o.export_path);
      r["exported"] = o.export_path;
    }
    r["entry"] = json::parse(to_json_string(e));
    return r;
  }
  std::vector<std::string> ids = builtin_ids();
  std::vector<json> rows(ids.size());
  const int jobs = std::max(1, o.jobs);
  for (std::size_t start = 0; start < ids.size(); start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<json>> batch;
    for (std::size_t i = start; i < std::min(ids.size(), start + static_cast<std::size_t>(jobs)); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, catalog_summary, ids[i]));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
  }
  r["entries"] = rows;
  return r;
}

// Text output: one "path: value" line per leaf.
void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

template <class T>
json dispatch_typed(const std::string& cmd, const CatalogData<T>& e, const Options& o) {
  if (cmd == "validate") return cmd_validate(e, o);
  if (cmd == "curvature") return cmd_curvature(e, o);
  if (cmd == "wagner") return cmd_wagner(e, o);
  if (cmd == "rigging") return cmd_rigging(e, o);
  if (cmd == "contact") return cmd_contact(e, o);
  if (cmd == "classify3d") return cmd_classify3d(e, o);
  throw InputError("unknown command '" + cmd + "'");
}

bool float_only(const std::string& cmd) { return cmd == "geodesic" || cmd == "abnormal" || cmd == "gamma"; }

json run_command(const std::string& cmd, const Options& o, json& diag, std::string& digest) {
  if (cmd == "catalog") {
    diag["numeric_mode"] = "exact";
    digest = fnv1a64_hex(o.builtin + "|" + o.input);
    return cmd_catalog(o);
  }
  CatalogEntry entry = load_entry(o);
  digest = fnv1a64_hex(to_json_string(entry));
  diag["entry"] = entry_id(entry);
  if (std::holds_alternative<CatalogData<double>>(entry)) {
    CatalogData<double> e = with_tol(std::get<CatalogData<double>>(entry), o.tol);
    diag["numeric_mode"] = "float";
    if (float_only(cmd)) {
      if (cmd == "geodesic") return cmd_geodesic(e, o);
      if (cmd == "abnormal") return cmd_abnormal(e, o);
      return cmd_gamma(e, o);
    }
    return dispatch_typed(cmd, e, o);
  }
  const CatalogData<Rational>& exact = std::get<CatalogData<Rational>>(entry);
  if (float_only(cmd)) {
    diag["numeric_mode"] = "float";
    diag["numeric_mode_reason"] = "numerical integration and finite differences run in float";
    CatalogData<double> e = to_float(exact, o.tol);
    if (cmd == "geodesic") return cmd_geodesic(e, o);
    if (cmd == "abnormal") return cmd_abnormal(e, o);
    return cmd_gamma(e, o);
  }
  try {
    diag["numeric_mode"] = "exact";
    return dispatch_typed(cmd, exact, o);
  } catch (const InexactError& err) {
    diag["numeric_mode"] = "float";
    diag["numeric_mode_reason"] = std::string("exact mode impossible: ") + err.what();
    return dispatch_typed(cmd, to_float(exact, o.tol), o);
  }
}

void add_common(CLI::App* sub, Options& o) {
  auto in = sub->add_option("--input", o.input, "Structure JSON file");
  sub->add_option("--builtin", o.builtin, "Builtin catalog id")->excludes(in);
  sub->add_option("--tol", o.tol, "Float-mode tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--seed", o.seed, "Random seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature invariants of left-invariant sub-Riemannian structures", "srcurv"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
  };
  const Cmd cmds[] = {{"validate", "Check an algebra and structure"},
                      {"curvature", "Curvature report"},
                      {"wagner", "Schouten and Wagner tensors"},
                      {"rigging", "Rigging conditions"},
                      {"contact", "Contact form and Reeb field"},
                      {"classify3d", "Three-dimensional classification"},
                      {"geodesic", "Normal geodesic flow"},
                      {"abnormal", "Abnormal covector search along exp(tu)"},
                      {"gamma", "Carre du champ probes"},
                      {"catalog", "List or export catalog entries"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    subs[c.name] = sub;
  }
  subs["curvature"]->add_option("--plane", o.plane, "Frame indices a,b of the D-plane (1-based)");
  subs["wagner"]->add_option("--alternation", o.alternation, "Factor on the alternation (1 or 1/2)");
  for (const char* name : {"geodesic", "gamma"}) subs[name]->add_option("--step", o.step, "Step size")->check(CLI::PositiveNumber);
  subs["geodesic"]->add_option("--time", o.time, "Final time")->check(CLI::NonNegativeNumber);
  subs["geodesic"]->add_option("--xi", o.xi, "Initial covector, comma-separated");
  subs["geodesic"]->add_option("--trajectory", o.trajectory, "Write samples as JSON lines");
  subs["geodesic"]->add_flag("--unnormalized", o.unnormalized, "Use u = xi|_D without unit-speed normalization");
  subs["abnormal"]->add_option("--u", o.u, "Direction in algebra coordinates");
  subs["abnormal"]->add_option("--direction", o.direction, "Index of a distribution basis vector (1-based)");
  subs["gamma"]->add_option("--field", o.field, "Polynomial in matrix entries, e.g. g13+0.5*g12^2");
  subs["gamma"]->add_option("--at", o.at, "Base point exp(sum t_i e_i), comma-separated t_i");
  subs["gamma"]->add_option("--rho1", o.rho1);
  subs["gamma"]->add_option("--rho2", o.rho2);
  subs["gamma"]->add_option("--kappa", o.kappa);
  subs["gamma"]->add_option("--nu", o.nu);
  subs["gamma"]->add_option("--r", o.r, "Dimension parameter (0 = infinity)");
  subs["catalog"]->add_option("--jobs", o.jobs, "Parallel jobs for the listing")->check(CLI::PositiveNumber);
  subs["catalog"]->add_option("--export", o.export_path, "Write the selected entry as JSON");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInput;
  }

  std::string cmd;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cmd = name;

  json diag;
  diag["tol"] = o.tol;
  diag["seed"] = o.seed;
  std::string digest;
  json results;
  try {
    results = run_command(cmd, o, diag, digest);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  json report;
  report["schema_version"] = kSchemaVersion;
  report["tool_version"] = kToolVersion;
  report["input_digest"] = digest;
  report["command"] = cmd;
  report["results"] = results;
  report["diagnostics"] = diag;
  if (o.format == "text")
    flatten(report, "", out);
  else
    out << report.dump(2) << "\n";
  return kExitOk;
}

}  // namespace srcurv
