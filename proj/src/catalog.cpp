#include "srcurv/catalog.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "srcurv/errors.hpp"

namespace srcurv {

using json = nlohmann::json;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

Matrix<Rational> cols(int n, const std::vector<std::vector<Rational>>& vs) {
  Matrix<Rational> m(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c)
    for (int r = 0; r < n; ++r) m(r, static_cast<Eigen::Index>(c)) = vs[c][r];
  return m;
}

Matrix<Rational> unit_cols(int n, std::initializer_list<int> idx) {
  Matrix<Rational> m = Matrix<Rational>::Zero(n, static_cast<Eigen::Index>(idx.size()));
  int c = 0;
  for (int i : idx) m(i, c++) = 1;
  return m;
}

// E_{ij} with 1-based indices, as in the usual matrix-unit notation.
Matrix<Rational> E(int dim, int i, int j) {
  Matrix<Rational> m = Matrix<Rational>::Zero(dim, dim);
  m(i - 1, j - 1) = 1;
  return m;
}

// Standard so(3) generators (L_i)_{jk} = -eps_{ijk}, embedded at `offset` in a dim x dim matrix.
Matrix<Rational> so3_generator(int i, int dim = 3, int offset = 0) {
  Matrix<Rational> m = Matrix<Rational>::Zero(dim, dim);
  int j = (i + 1) % 3, k = (i + 2) % 3;
  m(offset + j, offset + k) = -1;
  m(offset + k, offset + j) = 1;
  return m;
}

using Terms = std::vector<BracketTerm<Rational>>;

// [e_i, e_j] = l3 e_k for cyclic (i, j, k), 0-based.
Terms cyclic_terms(const Rational& l1, const Rational& l2, const Rational& l3) {
  Terms t;
  if (l1 != 0) t.push_back({1, 2, 0, l1});
  if (l2 != 0) t.push_back({2, 0, 1, l2});
  if (l3 != 0) t.push_back({0, 1, 2, l3});
  return t;
}

CatalogData<Rational> make(std::string id, LieAlgebra<Rational> a, Matrix<Rational> d,
                           std::optional<Matrix<Rational>> rigging = std::nullopt,
                           std::optional<Matrix<Rational>> metric = std::nullopt) {
  return CatalogData<Rational>{std::move(id),
                               SubRiemannianStructure<Rational>(std::move(a), std::move(d), std::move(rigging),
                                                                std::move(metric)),
                               std::nullopt,
                               {}};
}

ModelData<Rational> model(std::vector<Matrix<Rational>> basis) {
  return ModelData<Rational>{static_cast<int>(basis.front().rows()), std::move(basis)};
}

CatalogData<Rational> abelian(int n) {
  if (n < kMinDim || n > kMaxDim) throw InputError("builtin: abelian dimension out of range");
  auto a = LieAlgebra<Rational>::from_terms("abelian_" + std::to_string(n), n, {});
  auto e = make(a.name(), a, identity<Rational>(n));
  std::vector<Matrix<Rational>> basis;
  for (int i = 1; i <= n; ++i) basis.push_back(E(n, i, i));
  e.matrix_model = model(basis);
  e.expected["sectional"] = "0";
  return e;
}

CatalogData<Rational> heis3() {
  auto a = LieAlgebra<Rational>::from_terms("heis3", 3, {{0, 1, 2, R(1)}});
  auto e = make("heis3", a, unit_cols(3, {0, 1}));
  e.matrix_model = model({E(3, 1, 2), E(3, 2, 3), E(3, 1, 3)});
  e.expected["sectional"] = "0";
  return e;
}

CatalogData<Rational> engel() {
  auto a = LieAlgebra<Rational>::from_terms("engel", 4, {{0, 1, 2, R(1)}, {0, 2, 3, R(1)}});
  auto e = make("engel", a, unit_cols(4, {0, 1}));
  e.matrix_model = model({Matrix<Rational>(E(4, 1, 2) + E(4, 2, 3)), E(4, 3, 4), E(4, 2, 4), E(4, 1, 4)});
  e.expected["sectional"] = "0";
  return e;
}

CatalogData<Rational> so3() {
  auto a = LieAlgebra<Rational>::from_terms("so3", 3, cyclic_terms(R(1), R(1), R(1)));
  auto e = make("so3", a, unit_cols(3, {0, 1}));
  e.matrix_model = model({so3_generator(0), so3_generator(1), so3_generator(2)});
  return e;
}

CatalogData<Rational> su2(const std::string& id) {
  auto a = LieAlgebra<Rational>::from_terms(id, 3, cyclic_terms(R(2), R(2), R(2)));
  auto e = make(id, a, unit_cols(3, {0, 1}));
  // 2 L_i realizes [e_i, e_j] = 2 e_k (adjoint form; locally isomorphic group).
  e.matrix_model = model({Matrix<Rational>(R(2) * so3_generator(0)), Matrix<Rational>(R(2) * so3_generator(1)),
                          Matrix<Rational>(R(2) * so3_generator(2))});
  if (id == "hopf_su2") {
    e.expected["ambient_sectional"] = "1";
    e.expected["base_sectional"] = "4";
    e.expected["sectional"] = "4";
  }
  return e;
}

CatalogData<Rational> sl2(bool elliptic) {
  // Milnor basis: [e2,e3] = e1, [e3,e1] = e2, [e1,e2] = -e3.
  std::string id = elliptic ? "sl2_elliptic" : "sl2_hyperbolic";
  auto a = LieAlgebra<Rational>::from_terms(id, 3, cyclic_terms(R(1), R(1), R(-1)));
  auto e = make(id, a, elliptic ? unit_cols(3, {0, 1}) : unit_cols(3, {1, 2}));
  Matrix<Rational> e1(2, 2), e2(2, 2), e3(2, 2);
  e1 << 0, R(1, 2), R(1, 2), 0;
  e2 << R(1, 2), 0, 0, R(-1, 2);
  e3 << 0, R(1, 2), R(-1, 2), 0;
  e.matrix_model = model({e1, e2, e3});
  e.expected["reeb"] = elliptic ? "0,0,1" : "1,0,0";
  return e;
}

CatalogData<Rational> hyperbolic_plane() {
  auto a = LieAlgebra<Rational>::from_terms("hyperbolic_plane_algebra", 3, {{0, 1, 1, R(1)}, {0, 2, 2, R(1)}});
  // No rank-2 bracket-generating distribution exists; the entry carries the Riemannian structure D = g.
  auto e = make("hyperbolic_plane_algebra", a, identity<Rational>(3));
  e.matrix_model = model({E(3, 1, 1), E(3, 1, 2), E(3, 1, 3)});
  return e;
}

CatalogData<Rational> liu_sussman(bool rigging_a) {
  // Basis (k1, k2, k3, z) of so(3) + R.
  std::string id = rigging_a ? "liu_sussman_A" : "liu_sussman_B";
  auto a = LieAlgebra<Rational>::from_terms(id, 4, cyclic_terms(R(1), R(1), R(1)), {"k1", "k2", "k3", "z"});
  std::vector<Rational> f{1, 0, 0, 1}, g{1, 1, 0, 2}, k3{0, 0, 1, 0}, z{0, 0, 0, 1}, mk2{0, -1, 0, 0};
  std::vector<Rational> fourth = rigging_a ? z : mk2;
  // The metric making (f, g, k3, fourth) orthonormal.
  Matrix<Rational> p = cols(4, {f, g, k3, fourth});
  Matrix<Rational> pinv = inverse<Rational>(p);
  Matrix<Rational> metric = pinv.transpose() * pinv;
  auto e = make(id, a, cols(4, {f, g}), cols(4, {k3, fourth}), metric);
  Matrix<Rational> zblock = E(5, 4, 5);
  e.matrix_model = model({so3_generator(0, 5), so3_generator(1, 5), so3_generator(2, 5), zblock});
  if (rigging_a) {
    e.expected["sectional"] = "3/2";
    e.expected["ricci"] = "3/2,3/2";
    e.expected["scalar"] = "3";
  } else {
    e.expected["sectional"] = "1";
  }
  return e;
}

CatalogData<Rational> milnor(const std::string& id, const std::string& args) {
  std::vector<Rational> l;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    if (!is_rational_literal(tok)) throw InputError("builtin: Milnor parameters must be rational: '" + tok + "'");
    l.push_back(ScalarOps<Rational>::parse(tok));
  }
  if (l.size() != 3) throw InputError("builtin: milnor_unimodular needs three parameters");
  if (l[2] == 0) throw InputError("builtin: milnor_unimodular needs l3 != 0 for span(e1, e2) to be bracket-generating");
  auto a = LieAlgebra<Rational>::from_terms(id, 3, cyclic_terms(l[0], l[1], l[2]));
  auto e = make(id, a, unit_cols(3, {0, 1}));
  // The adjoint representation, when it is faithful.
  Matrix<Rational> ads(9, 3);
  std::vector<Matrix<Rational>> basis;
  for (int i = 0; i < 3; ++i) {
    basis.push_back(ad_matrix(a, a.basis_vector(i)));
    ads.col(i) = Eigen::Map<const Vector<Rational>>(basis.back().data(), 9);
  }
  if (rank<Rational>(ads) == 3) e.matrix_model = model(basis);
  return e;
}

}  // namespace

std::vector<std::string> builtin_ids() {
  return {"abelian_3",     "heis3",          "engel",
          "so3",           "su2_scaled",     "sl2_elliptic",
          "sl2_hyperbolic", "hyperbolic_plane_algebra", "liu_sussman_A",
          "liu_sussman_B", "hopf_su2",       "milnor_unimodular(1,1,1)"};
}

CatalogData<Rational> builtin_exact(const std::string& id) {
  CatalogData<Rational> e = [&]() -> CatalogData<Rational> {
    if (id.rfind("abelian_", 0) == 0) {
      std::string digits = id.substr(8);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 2)
        throw InputError("builtin: bad abelian id '" + id + "'");
      return abelian(std::stoi(digits));
    }
    if (id == "heis3") return heis3();
    if (id == "engel") return engel();
    if (id == "so3") return so3();
    if (id == "su2_scaled" || id == "hopf_su2") return su2(id);
    if (id == "sl2_elliptic") return sl2(true);
    if (id == "sl2_hyperbolic") return sl2(false);
    if (id == "hyperbolic_plane_algebra") return hyperbolic_plane();
    if (id == "liu_sussman_A") return liu_sussman(true);
    if (id == "liu_sussman_B") return liu_sussman(false);
    const std::string prefix = "milnor_unimodular(";
    if (id.rfind(prefix, 0) == 0 && id.back() == ')')
      return milnor(id, id.substr(prefix.size(), id.size() - prefix.size() - 1));
    throw InputError("builtin: unknown id '" + id + "'");
  }();
  validate_entry(e);
  return e;
}

CatalogEntry builtin(const std::string& id) { return builtin_exact(id); }

template <class T>
T model_defect(const LieAlgebra<T>& a, const ModelData<T>& model) {
  const int n = a.dim();
  T worst(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix<T> d = model.basis[i] * model.basis[j] - model.basis[j] * model.basis[i];
      for (int k = 0; k < n; ++k) d -= a.c(i, j, k) * model.basis[k];
      for (Eigen::Index p = 0; p < d.size(); ++p) {
        T v = d.data()[p] < 0 ? T(-d.data()[p]) : d.data()[p];
        if (v > worst) worst = v;
      }
    }
  return worst;
}

template <class T>
void validate_entry(const CatalogData<T>& e) {
  const auto& a = e.algebra();
  if (!is_zero(jacobi_defect(a), a.tol()))
    throw InputError("catalog entry '" + e.id + "': Jacobi identity fails");
  if (e.matrix_model) {
    const auto& m = *e.matrix_model;
    if (static_cast<int>(m.basis.size()) != a.dim())
      throw InputError("catalog entry '" + e.id + "': matrix model needs one matrix per basis vector");
    for (const auto& b : m.basis)
      if (b.rows() != m.rep_dim || b.cols() != m.rep_dim)
        throw InputError("catalog entry '" + e.id + "': matrix model has a matrix of the wrong size");
    if (!is_zero(model_defect(a, m), a.tol()))
      throw InputError("catalog entry '" + e.id + "': matrix model commutators do not match the brackets");
  }
}

// JSON -------------------------------------------------------------------

namespace {

std::string scalar_token(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    std::string s = os.str();
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  throw InputError(where + ": expected a number or a \"p/q\" string");
}

// Collects every scalar literal so the numeric mode can be chosen up front.
void collect(const json& v, std::vector<std::string>& out, const std::string& where) {
  if (v.is_array()) {
    for (const auto& x : v) collect(x, out, where);
  } else {
    out.push_back(scalar_token(v, where));
  }
}

template <class T>
T scalar_at(const json& v, const std::string& where) {
  std::string tok = scalar_token(v, where);
  try {
    return ScalarOps<T>::parse(tok);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError(where + ": cannot parse '" + tok + "'");
  }
}

template <class T>
Matrix<T> vector_list(const json& v, int n, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected a list of vectors");
  Matrix<T> m(n, static_cast<Eigen::Index>(v.size()));
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (!v[c].is_array() || static_cast<int>(v[c].size()) != n)
      throw InputError(where + ": vector " + std::to_string(c + 1) + " must have " + std::to_string(n) + " entries");
    for (int r = 0; r < n; ++r) m(r, static_cast<Eigen::Index>(c)) = scalar_at<T>(v[c][r], where);
  }
  return m;
}

template <class T>
Matrix<T> square(const json& v, int n, const std::string& where) {
  Matrix<T> m(n, n);
  if (v.is_array() && static_cast<int>(v.size()) == n * n && !v[0].is_array()) {
    for (int p = 0; p < n * n; ++p) m(p / n, p % n) = scalar_at<T>(v[p], where);
    return m;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    throw InputError(where + ": expected " + std::to_string(n) + " rows");
  for (int r = 0; r < n; ++r) {
    if (!v[r].is_array() || static_cast<int>(v[r].size()) != n)
      throw InputError(where + ": row " + std::to_string(r + 1) + " must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) m(r, c) = scalar_at<T>(v[r][c], where);
  }
  return m;
}

template <class T>
CatalogData<T> parse_entry(const json& j, const std::string& name) {
  const std::string where = "catalog entry '" + name + "'";
  int n = j.at("dimension").get<int>();
  if (n < kMinDim || n > kMaxDim) throw InputError(where + ": dimension out of range");
  std::vector<BracketTerm<T>> terms;
  for (const auto& b : j.at("brackets")) {
    int i = b.at("i").get<int>(), jj = b.at("j").get<int>();
    if (i < 1 || jj < 1 || i > n || jj > n || i >= jj)
      throw InputError(where + ": bracket indices must satisfy 1 <= i < j <= " + std::to_string(n));
    for (const auto& t : b.at("terms")) {
      int k = t.at("k").get<int>();
      if (k < 1 || k > n) throw InputError(where + ": bracket term index k=" + std::to_string(k) + " out of range");
      terms.push_back({i - 1, jj - 1, k - 1, scalar_at<T>(t.at("coeff"), where + " coeff")});
    }
  }
  // from_terms sums repeated terms; reject them instead so the entry stays unambiguous.
  for (std::size_t p = 0; p < terms.size(); ++p)
    for (std::size_t q = p + 1; q < terms.size(); ++q)
      if (terms[p].i == terms[q].i && terms[p].j == terms[q].j && terms[p].k == terms[q].k)
        throw InputError(where + ": repeated bracket term");
  auto a = LieAlgebra<T>::from_terms(name, n, terms);
  std::optional<Matrix<T>> metric;
  const json& mj = j.at("metric");
  if (mj.is_string()) {
    if (mj.get<std::string>() != "identity") throw InputError(where + ": metric must be \"identity\" or a matrix");
  } else {
    metric = square<T>(mj, n, where + " metric");
  }
  Matrix<T> d = vector_list<T>(j.at("distribution"), n, where + " distribution");
  std::optional<Matrix<T>> rigging;
  if (j.contains("rigging")) rigging = vector_list<T>(j.at("rigging"), n, where + " rigging");
  CatalogData<T> e{name, SubRiemannianStructure<T>(a, d, rigging, metric), std::nullopt, {}};
  if (j.contains("matrix_model")) {
    const json& mm = j.at("matrix_model");
    ModelData<T> model;
    model.rep_dim = mm.at("rep_dim").get<int>();
    if (model.rep_dim < 1 || model.rep_dim > 64) throw InputError(where + ": rep_dim out of range");
    for (const auto& b : mm.at("basis")) model.basis.push_back(square<T>(b, model.rep_dim, where + " matrix_model"));
    e.matrix_model = model;
  }
  validate_entry(e);
  return e;
}

template <class T>
json scalar_json(const T& x) {
  std::string s = format_scalar(x);
  if constexpr (std::is_same_v<T, double>) {
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  }
  return s;
}

template <class T>
json rows_json(const Matrix<T>& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

template <class T>
json columns_json(const Matrix<T>& m) {
  return rows_json<T>(Matrix<T>(m.transpose()));
}

template <class T>
json entry_json(const CatalogData<T>& e) {
  const auto& a = e.algebra();
  const int n = a.dim();
  json j;
  j["name"] = e.id;
  j["dimension"] = n;
  json brackets = json::array();
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      json terms = json::array();
      for (int t = 0; t < n; ++t)
        if (a.c(i, k, t) != T(0)) terms.push_back({{"k", t + 1}, {"coeff", scalar_json(a.c(i, k, t))}});
      if (!terms.empty()) brackets.push_back({{"i", i + 1}, {"j", k + 1}, {"terms", terms}});
    }
  j["brackets"] = brackets;
  const auto& s = e.structure;
  if (s.metric() == identity<T>(n))
    j["metric"] = "identity";
  else
    j["metric"] = rows_json(s.metric());
  j["distribution"] = columns_json(s.distribution());
  if (s.rigging().cols() > 0) j["rigging"] = columns_json(s.rigging());
  if (e.matrix_model) {
    json basis = json::array();
    for (const auto& b : e.matrix_model->basis) basis.push_back(rows_json(b));
    j["matrix_model"] = {{"rep_dim", e.matrix_model->rep_dim}, {"basis", basis}};
  }
  return j;
}

template <class T>
bool same_data(const CatalogData<T>& a, const CatalogData<T>& b) {
  const auto& sa = a.structure;
  const auto& sb = b.structure;
  if (a.id != b.id || !(sa.algebra().structure() == sb.algebra().structure())) return false;
  if (sa.distribution() != sb.distribution() || sa.metric() != sb.metric()) return false;
  if (sa.rigging().cols() != sb.rigging().cols() || sa.rigging() != sb.rigging()) return false;
  if (a.matrix_model.has_value() != b.matrix_model.has_value()) return false;
  if (a.matrix_model) {
    if (a.matrix_model->rep_dim != b.matrix_model->rep_dim) return false;
    if (a.matrix_model->basis.size() != b.matrix_model->basis.size()) return false;
    for (std::size_t i = 0; i < a.matrix_model->basis.size(); ++i)
      if (a.matrix_model->basis[i] != b.matrix_model->basis[i]) return false;
  }
  return true;
}

}  // namespace

std::string to_json_string(const CatalogEntry& e) {
  return std::visit([](const auto& d) { return entry_json(d).dump(2); }, e);
}

CatalogEntry from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw InputError(std::string("catalog: invalid JSON: ") + err.what());
  }
  std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "<unnamed>";
  try {
    for (const char* key : {"name", "dimension", "brackets", "metric", "distribution"})
      if (!j.contains(key)) throw InputError("catalog entry '" + name + "': missing field '" + key + "'");
    std::vector<std::string> tokens;
    for (const auto& b : j.at("brackets"))
      for (const auto& t : b.at("terms")) collect(t.at("coeff"), tokens, "coeff");
    if (!j.at("metric").is_string()) collect(j.at("metric"), tokens, "metric");
    collect(j.at("distribution"), tokens, "distribution");
    if (j.contains("rigging")) collect(j.at("rigging"), tokens, "rigging");
    if (j.contains("matrix_model")) collect(j.at("matrix_model").at("basis"), tokens, "matrix_model");
    bool exact = true;
    for (const auto& t : tokens) exact = exact && is_rational_literal(t);
    if (exact) return parse_entry<Rational>(j, name);
    return parse_entry<double>(j, name);
  } catch (const json::exception& err) {
    throw InputError("catalog entry '" + name + "': schema violation: " + err.what());
  }
}

CatalogEntry load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("catalog: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

void save(const CatalogEntry& e, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("catalog: cannot write '" + path + "'");
  out << to_json_string(e) << "\n";
}

bool same_entry(const CatalogEntry& a, const CatalogEntry& b) {
  if (a.index() != b.index()) return false;
  if (a.index() == 0) return same_data(std::get<0>(a), std::get<0>(b));
  return same_data(std::get<1>(a), std::get<1>(b));
}

const std::string& entry_id(const CatalogEntry& e) {
  return std::visit([](const auto& d) -> const std::string& { return d.id; }, e);
}

template Rational model_defect<Rational>(const LieAlgebra<Rational>&, const ModelData<Rational>&);
template double model_defect<double>(const LieAlgebra<double>&, const ModelData<double>&);
template void validate_entry<Rational>(const CatalogData<Rational>&);
template void validate_entry<double>(const CatalogData<double>&);

}  // namespace srcurv
