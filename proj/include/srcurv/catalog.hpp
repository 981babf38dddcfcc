#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "srcurv/structure.hpp"

namespace srcurv {

/// Faithful matrix representation e_i -> basis[i] of the algebra.
template <class T>
struct ModelData {
  int rep_dim = 0;
  std::vector<Matrix<T>> basis;
};

template <class T>
struct CatalogData {
  std::string id;
  SubRiemannianStructure<T> structure;
  std::optional<ModelData<T>> matrix_model;
  std::map<std::string, std::string> expected;  // acceptance values, e.g. "sectional" -> "3/2"

  const LieAlgebra<T>& algebra() const { return structure.algebra(); }
};

using CatalogEntry = std::variant<CatalogData<Rational>, CatalogData<double>>;

/// Ids of the fixed builtins (parametrized families listed with one instance).
std::vector<std::string> builtin_ids();

/// Builtin by id. Accepts abelian_<n> and milnor_unimodular(l1,l2,l3) besides the fixed ids.
CatalogEntry builtin(const std::string& id);

/// Exact builtin; every builtin is rational.
CatalogData<Rational> builtin_exact(const std::string& id);

/// max |[B_i, B_j] - sum_k c_ijk B_k| over the model; zero for a consistent model.
template <class T>
T model_defect(const LieAlgebra<T>& a, const ModelData<T>& model);

/// Throws InputError unless the entry passes the algebra, structure and model checks.
template <class T>
void validate_entry(const CatalogData<T>& e);

std::string to_json_string(const CatalogEntry& e);
CatalogEntry from_json_string(const std::string& text);
CatalogEntry load(const std::string& path);
void save(const CatalogEntry& e, const std::string& path);

/// Field-by-field equality (exact values, or bitwise doubles).
bool same_entry(const CatalogEntry& a, const CatalogEntry& b);

const std::string& entry_id(const CatalogEntry& e);

}  // namespace srcurv
