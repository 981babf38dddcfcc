#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "srcurv/catalog.hpp"
#include "srcurv/errors.hpp"

using namespace srcurv;
using json = nlohmann::json;

namespace {

json heis_json() {
  return json::parse(R"({
    "name": "my_heis",
    "dimension": 3,
    "metric": "identity",
    "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "coeff": "1"}]}],
    "distribution": [["1", "0", "0"], ["0", "1", "0"]]
  })");
}

}  // namespace

TEST(Catalog, EveryBuiltinValidates) {
  for (const auto& id : builtin_ids()) {
    auto e = builtin_exact(id);
    EXPECT_NO_THROW(validate_entry(e)) << id;
    EXPECT_EQ(e.id, id);
    if (e.matrix_model) EXPECT_EQ(model_defect(e.algebra(), *e.matrix_model), Rational(0)) << id;
  }
}

TEST(Catalog, UnknownIdIsInputError) { EXPECT_THROW(builtin("nope"), InputError); }

TEST(Catalog, MilnorFamily) {
  auto e = builtin_exact("milnor_unimodular(2,1,-1)");
  EXPECT_EQ(e.algebra().dim(), 3);
  EXPECT_THROW(builtin("milnor_unimodular(1,1,0)"), InputError);
  EXPECT_THROW(builtin("milnor_unimodular(1,x,1)"), InputError);
}

TEST(Catalog, JsonRoundTripIsExactAndStable) {
  for (const auto& id : builtin_ids()) {
    CatalogEntry e = builtin(id);
    std::string text = to_json_string(e);
    CatalogEntry back = from_json_string(text);
    EXPECT_TRUE(same_entry(e, back)) << id;
    EXPECT_EQ(to_json_string(back), text) << id;
  }
}

TEST(Catalog, SaveAndLoad) {
  auto path = std::filesystem::temp_directory_path() / "srcurv_catalog_roundtrip.json";
  CatalogEntry e = builtin("liu_sussman_B");
  save(e, path.string());
  CatalogEntry back = load(path.string());
  EXPECT_TRUE(same_entry(e, back));
  std::filesystem::remove(path);
  EXPECT_THROW(load(path.string()), InputError);
}

TEST(Catalog, RationalInputStaysExact) {
  CatalogEntry e = from_json_string(heis_json().dump());
  ASSERT_TRUE(std::holds_alternative<CatalogData<Rational>>(e));
  EXPECT_EQ(entry_id(e), "my_heis");
}

TEST(Catalog, DecimalLiteralSwitchesToFloat) {
  json j = heis_json();
  j["brackets"][0]["terms"][0]["coeff"] = "0.5";
  CatalogEntry e = from_json_string(j.dump());
  ASSERT_TRUE(std::holds_alternative<CatalogData<double>>(e));
  EXPECT_DOUBLE_EQ(std::get<CatalogData<double>>(e).algebra().c(0, 1, 2), 0.5);
}

TEST(Catalog, FlatMatrixLayoutIsAccepted) {
  json j = heis_json();
  j["metric"] = {"2", "0", "0", "0", "1", "0", "0", "0", "1"};
  CatalogEntry e = from_json_string(j.dump());
  EXPECT_EQ(std::get<CatalogData<Rational>>(e).structure.metric()(0, 0), Rational(2));
}

TEST(Catalog, MalformedEntriesAreRejected) {
  EXPECT_THROW(from_json_string("{not json"), InputError);
  json j = heis_json();
  j["brackets"][0]["i"] = 2;  // i must be < j
  EXPECT_THROW(from_json_string(j.dump()), InputError);
  j = heis_json();
  j["brackets"][0]["terms"][0]["k"] = 4;
  EXPECT_THROW(from_json_string(j.dump()), InputError);
  j = heis_json();
  j["brackets"].push_back(j["brackets"][0]);
  EXPECT_THROW(from_json_string(j.dump()), InputError);
  j = heis_json();
  j["dimension"] = 1;
  EXPECT_THROW(from_json_string(j.dump()), InputError);
  j = heis_json();
  j.erase("distribution");
  EXPECT_THROW(from_json_string(j.dump()), InputError);
}

TEST(Catalog, ErrorsNameTheEntry) {
  json j = heis_json();
  j["brackets"][0]["terms"][0]["k"] = 9;
  try {
    from_json_string(j.dump());
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("my_heis"), std::string::npos) << e.what();
  }
}

TEST(Catalog, JacobiViolationIsRejected) {
  json j = heis_json();
  j["brackets"] = json::parse(R"([
    {"i": 1, "j": 2, "terms": [{"k": 3, "coeff": "1"}]},
    {"i": 2, "j": 3, "terms": [{"k": 1, "coeff": "1"}]},
    {"i": 1, "j": 3, "terms": [{"k": 1, "coeff": "1"}]}
  ])");
  EXPECT_THROW(from_json_string(j.dump()), InputError);
}

TEST(Catalog, BadMatrixModelIsRejected) {
  json j = heis_json();
  j["matrix_model"] = {{"rep_dim", 2},
                       {"basis", {{{"0", "1"}, {"0", "0"}}, {{"0", "0"}, {"1", "0"}}, {{"1", "0"}, {"0", "1"}}}}};
  EXPECT_THROW(from_json_string(j.dump()), InputError);
}
