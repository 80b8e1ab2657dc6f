#include "nnc/serialization.hpp"

#include <cmath>
#include <set>

#include "nnc/errors.hpp"

namespace nnc {
namespace {

OrderedJson vector_json(const Vector& v) {
  OrderedJson arr = OrderedJson::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from(const OrderedJson& j, const std::string& what) {
  if (!j.is_array()) throw Error(what + " must be an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(what + " must contain only numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

void reject_unknown_fields(const OrderedJson& doc,
                           const std::set<std::string>& allowed,
                           const std::string& what) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw Error(what + ": unknown field '" + it.key() + "'");
    }
  }
}

OrderedJson parse_text(const std::string& text, const std::string& what) {
  try {
    return OrderedJson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(what + ": malformed JSON: " + e.what());
  }
}

void check_gain_field(const OrderedJson& doc, const char* key, double expected) {
  if (!doc.contains(key)) return;
  const double given = doc.at(key).get<double>();
  if (std::abs(given - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
    throw Error(std::string("feedback law: field '") + key +
                "' contradicts the sector registry entry");
  }
}

}  // namespace

OrderedJson action_set_json(const ActionSet& set) {
  OrderedJson doc;
  doc["dim"] = set.dim();
  doc["base_index"] = set.base_index;
  OrderedJson actions = OrderedJson::array();
  for (const Vector& a : set.actions) actions.push_back(vector_json(a));
  doc["actions"] = std::move(actions);
  return doc;
}

ActionSet action_set_from_json(const OrderedJson& doc) {
  if (!doc.is_object()) throw Error("action set: document must be an object");
  reject_unknown_fields(doc, {"dim", "base_index", "actions"}, "action set");
  for (const char* key : {"dim", "base_index", "actions"}) {
    if (!doc.contains(key)) {
      throw Error(std::string("action set: missing field '") + key + "'");
    }
  }
  const Index dim = doc.at("dim").get<Index>();
  if (dim < 1) throw Error("action set: dim must be positive");

  ActionSet set;
  set.base_index = doc.at("base_index").get<int>();
  const OrderedJson& actions = doc.at("actions");
  if (!actions.is_array() || actions.empty()) {
    throw Error("action set: actions must be a nonempty array");
  }
  set.actions.reserve(actions.size());
  for (const auto& row : actions) {
    Vector a = vector_from(row, "action set: each action");
    if (a.size() != dim) throw Error("action set: action length differs from dim");
    set.actions.push_back(std::move(a));
  }
  if (set.base_index < 0 || set.base_index >= set.count()) {
    throw Error("action set: base_index out of range");
  }
  return set;
}

std::string action_set_to_string(const ActionSet& set) {
  return action_set_json(set).dump(2) + "\n";
}

ActionSet action_set_from_string(const std::string& text) {
  return action_set_from_json(parse_text(text, "action set"));
}

std::string law_variant_name(LawVariant variant) {
  switch (variant) {
    case LawVariant::Unity: return "unity";
    case LawVariant::Sector: return "sector";
    case LawVariant::IncrementalUnity: return "incremental_unity";
    case LawVariant::IncrementalSector: return "incremental_sector";
  }
  throw Error("feedback law: unrepresentable variant");
}

LawVariant law_variant_from_name(const std::string& name) {
  if (name == "unity") return LawVariant::Unity;
  if (name == "sector") return LawVariant::Sector;
  if (name == "incremental_unity") return LawVariant::IncrementalUnity;
  if (name == "incremental_sector") return LawVariant::IncrementalSector;
  throw Error("feedback law: unknown variant '" + name + "'");
}

OrderedJson feedback_law_json(const FeedbackLaw& law) {
  OrderedJson doc;
  doc["variant"] = law_variant_name(law.variant);
  doc["set"] = action_set_json(law.law.set);
  if (law.sector) {
    doc["sector"] = law.sector->name;
    doc["k1"] = law.sector->k1;
    doc["k2"] = law.sector->k2;
    doc["k3"] = law.sector->k3;
  }
  if (law.u_star) doc["u_star"] = vector_json(*law.u_star);
  if (law.y_star) doc["y_star"] = vector_json(*law.y_star);
  doc["hysteresis"] = law.law.hysteresis;
  doc["tie_tol"] = law.law.tie_tol;
  return doc;
}

FeedbackLaw feedback_law_from_json(const OrderedJson& doc) {
  if (!doc.is_object()) throw Error("feedback law: document must be an object");
  reject_unknown_fields(doc,
                        {"variant", "set", "sector", "k1", "k2", "k3",
                         "u_star", "y_star", "hysteresis", "tie_tol"},
                        "feedback law");
  if (!doc.contains("variant") || !doc.contains("set")) {
    throw Error("feedback law: 'variant' and 'set' are required");
  }

  FeedbackLaw law;
  law.variant = law_variant_from_name(doc.at("variant").get<std::string>());
  law.law.set = action_set_from_json(doc.at("set"));
  if (doc.contains("hysteresis")) {
    law.law.hysteresis = doc.at("hysteresis").get<double>();
    if (law.law.hysteresis < 0) throw Error("feedback law: hysteresis must be nonnegative");
  }
  if (doc.contains("tie_tol")) {
    law.law.tie_tol = doc.at("tie_tol").get<double>();
    if (law.law.tie_tol < 0) throw Error("feedback law: tie_tol must be nonnegative");
  }

  const bool wants_sector = law.variant == LawVariant::Sector ||
                            law.variant == LawVariant::IncrementalSector;
  const bool wants_setpoint = law.variant == LawVariant::IncrementalUnity ||
                              law.variant == LawVariant::IncrementalSector;

  if (wants_sector) {
    if (!doc.contains("sector")) {
      throw MissingSector("feedback law: sector variant requires a 'sector' registry name");
    }
    law.sector = sector_from_name(doc.at("sector").get<std::string>());
    check_gain_field(doc, "k1", law.sector->k1);
    check_gain_field(doc, "k2", law.sector->k2);
    check_gain_field(doc, "k3", law.sector->k3);
  } else {
    for (const char* key : {"sector", "k1", "k2", "k3"}) {
      if (doc.contains(key)) {
        throw Error(std::string("feedback law: field '") + key +
                    "' does not apply to variant '" + law_variant_name(law.variant) + "'");
      }
    }
  }

  if (wants_setpoint) {
    if (!doc.contains("u_star") || !doc.contains("y_star")) {
      throw MissingSetpoint("feedback law: incremental variant requires u_star and y_star");
    }
    law.u_star = vector_from(doc.at("u_star"), "feedback law: u_star");
    law.y_star = vector_from(doc.at("y_star"), "feedback law: y_star");
    if (law.u_star->size() != law.law.set.dim() ||
        law.y_star->size() != law.law.set.dim()) {
      throw Error("feedback law: setpoint dimensions must match the action set");
    }
  } else {
    for (const char* key : {"u_star", "y_star"}) {
      if (doc.contains(key)) {
        throw Error(std::string("feedback law: field '") + key +
                    "' does not apply to variant '" + law_variant_name(law.variant) + "'");
      }
    }
  }
  return law;
}

std::string feedback_law_to_string(const FeedbackLaw& law) {
  return feedback_law_json(law).dump(2) + "\n";
}

FeedbackLaw feedback_law_from_string(const std::string& text) {
  return feedback_law_from_json(parse_text(text, "feedback law"));
}

OrderedJson validation_report_json(const ValidationReport& report) {
  OrderedJson doc;
  doc["assumption_ok"] = report.assumption_ok;
  if (report.delta) doc["delta"] = *report.delta;
  if (report.mu_min1) doc["mu_min1"] = *report.mu_min1;
  if (!report.witness.empty()) doc["witness"] = report.witness;
  doc["minimal_cardinality"] = report.minimal_cardinality;
  return doc;
}

OrderedJson design_verdict_json(const DesignVerdict& verdict) {
  OrderedJson doc;
  doc["pass"] = verdict.pass;
  doc["delta"] = verdict.delta;
  doc["epsilon"] = verdict.epsilon;
  doc["k1"] = verdict.k1;
  doc["gamma_value"] = verdict.gamma_value;
  if (verdict.gain_ok) doc["gain_ok"] = *verdict.gain_ok;
  if (verdict.alignment_ok) doc["alignment_ok"] = *verdict.alignment_ok;
  if (verdict.mu_estimate) doc["mu_estimate"] = *verdict.mu_estimate;
  if (verdict.alignment_lhs) doc["alignment_lhs"] = *verdict.alignment_lhs;
  return doc;
}

OrderedJson convergence_report_json(const ConvergenceReport& report) {
  OrderedJson doc;
  doc["epsilon"] = report.epsilon;
  doc["center"] = vector_json(report.center);
  if (report.entry_time) doc["entry_time"] = *report.entry_time;
  if (report.post_entry_sup) doc["post_entry_sup"] = *report.post_entry_sup;
  if (report.tail_action_constant) {
    doc["tail_action_constant"] = *report.tail_action_constant;
  }
  doc["h_max_increase"] = report.h_max_increase;
  doc["last_switch_time"] = report.last_switch_time;
  if (report.final_action.size() > 0) {
    doc["final_action"] = vector_json(report.final_action);
  }
  doc["tail_settled"] = report.tail_settled;
  if (report.error) doc["error"] = *report.error;
  return doc;
}

}  // namespace nnc
