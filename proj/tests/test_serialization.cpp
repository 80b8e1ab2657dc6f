#include <doctest.h>

#include <numbers>
#include <random>
#include <string>

#include "helpers.hpp"
#include "nnc/action_set.hpp"
#include "nnc/controller.hpp"
#include "nnc/errors.hpp"
#include "nnc/serialization.hpp"

using namespace nnc;
using nnc_test::vec2;

TEST_CASE("action sets round-trip bit-exactly through JSON") {
  ActionSet s = planar_trine(std::numbers::pi / 7, 0.3);
  std::string text = action_set_to_string(s);
  ActionSet back = action_set_from_string(text);
  REQUIRE(back.count() == s.count());
  CHECK(back.base_index == s.base_index);
  for (int i = 0; i < s.count(); ++i) {
    CHECK((back.actions[i] - s.actions[i]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  // Field order is part of the format.
  CHECK(text.find("\"dim\"") < text.find("\"base_index\""));
  CHECK(text.find("\"base_index\"") < text.find("\"actions\""));
}

TEST_CASE("malformed action-set documents are rejected") {
  CHECK_THROWS_AS(action_set_from_string(
                      R"({"dim":2,"base_index":0,)"
                      R"("actions":[[0,0],[1,0],[0,1],[-1,-1]],"extra":1})"),
                  Error);
  CHECK_THROWS_AS(action_set_from_string(R"({"dim":3,"base_index":0,"actions":[[0,0]]})"),
                  Error);
  CHECK_THROWS_AS(action_set_from_string(R"({"dim":2,"base_index":9,"actions":[[0,0],[1,0]]})"),
                  Error);
  CHECK_THROWS_AS(action_set_from_string(R"({"base_index":0,"actions":[[0,0]]})"), Error);
  CHECK_THROWS_AS(action_set_from_string("not json"), Error);
}

TEST_CASE("feedback laws round-trip with sector and setpoints") {
  FeedbackLaw law;
  law.variant = LawVariant::IncrementalSector;
  law.law.set = planar_trine(0.0, 0.1);
  for (Vector& a : law.law.set.actions) a += vec2(1, 0);
  law.sector = identity_gain(2.5);
  law.u_star = vec2(1, 0);
  law.y_star = vec2(0, -1);
  law.law.hysteresis = 0.01;
  std::string text = feedback_law_to_string(law);
  FeedbackLaw back = feedback_law_from_string(text);
  CHECK(back.variant == law.variant);
  REQUIRE(back.sector.has_value());
  CHECK(back.sector->k1 == doctest::Approx(2.5));
  CHECK(back.sector->k3 == doctest::Approx(2.5));
  CHECK((*back.u_star - *law.u_star).norm() == 0.0);
  CHECK((*back.y_star - *law.y_star).norm() == 0.0);
  CHECK(back.law.hysteresis == doctest::Approx(0.01));
  // Behavior matches on samples, not just fields.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    Vector y = nnc_test::random_vector(2, rng, 1.0);
    FeedbackLaw a = law;
    FeedbackLaw b = back;
    CHECK((a.apply(y) - b.apply(y)).norm() == 0.0);
  }
}

TEST_CASE("plain unity laws serialize without optional blocks") {
  FeedbackLaw law;
  law.variant = LawVariant::Unity;
  law.law.set = planar_trine(0.2, 1.0);
  std::string text = feedback_law_to_string(law);
  CHECK(text.find("\"sector\"") == std::string::npos);
  CHECK(text.find("\"u_star\"") == std::string::npos);
  FeedbackLaw back = feedback_law_from_string(text);
  CHECK(back.variant == LawVariant::Unity);
  CHECK_FALSE(back.sector.has_value());
  CHECK_FALSE(back.u_star.has_value());
}

TEST_CASE("laws with missing or inapplicable fields are rejected") {
  ActionSet s = planar_trine(0.0, 0.1);
  OrderedJson needs_sector;
  needs_sector["variant"] = "sector";
  needs_sector["set"] = action_set_json(s);
  CHECK_THROWS_AS(feedback_law_from_json(needs_sector), MissingSector);

  OrderedJson stray_setpoint;
  stray_setpoint["variant"] = "unity";
  stray_setpoint["set"] = action_set_json(s);
  stray_setpoint["u_star"] = OrderedJson::array({1.0, 0.0});
  CHECK_THROWS_AS(feedback_law_from_json(stray_setpoint), Error);

  OrderedJson needs_setpoints;
  needs_setpoints["variant"] = "incremental_unity";
  needs_setpoints["set"] = action_set_json(s);
  CHECK_THROWS_AS(feedback_law_from_json(needs_setpoints), MissingSetpoint);

  OrderedJson bad_variant;
  bad_variant["variant"] = "mystery";
  bad_variant["set"] = action_set_json(s);
  CHECK_THROWS_AS(feedback_law_from_json(bad_variant), Error);

  OrderedJson unknown_field;
  unknown_field["variant"] = "unity";
  unknown_field["set"] = action_set_json(s);
  unknown_field["bogus"] = 1;
  CHECK_THROWS_AS(feedback_law_from_json(unknown_field), Error);
}

TEST_CASE("sector k-fields must agree with the registry entry") {
  FeedbackLaw law;
  law.variant = LawVariant::Sector;
  law.law.set = planar_trine(0.0, 0.1);
  law.sector = identity_gain(2.0);
  OrderedJson doc = feedback_law_json(law);
  doc["k1"] = 3.0;  // contradicts identity_gain:2
  CHECK_THROWS_AS(feedback_law_from_json(doc), Error);
}
