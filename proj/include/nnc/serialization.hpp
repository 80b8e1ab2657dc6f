#pragma once

#include <string>

#include <json.hpp>

#include "nnc/action_set.hpp"
#include "nnc/controller.hpp"
#include "nnc/simulator.hpp"

namespace nnc {

// Field order in emitted documents is fixed (insertion order), and numbers
// round-trip bit-exactly (shortest decimal that re-reads to the same
// double). Parsers are strict: unknown fields, missing fields, or fields
// that do not apply to the declared variant raise Error.
using OrderedJson = nlohmann::ordered_json;

// {"dim": m, "base_index": i, "actions": [[...], ...]}
OrderedJson action_set_json(const ActionSet& set);
ActionSet action_set_from_json(const OrderedJson& doc);
std::string action_set_to_string(const ActionSet& set);
ActionSet action_set_from_string(const std::string& text);

// {"variant": "...", "set": {...}, "sector": "identity_gain:k", "k1": ...,
//  "k2": ..., "k3": ..., "u_star": [...], "y_star": [...],
//  "hysteresis": ..., "tie_tol": ...} — sector/setpoint fields present only
// for the variants that use them.
OrderedJson feedback_law_json(const FeedbackLaw& law);
FeedbackLaw feedback_law_from_json(const OrderedJson& doc);
std::string feedback_law_to_string(const FeedbackLaw& law);
FeedbackLaw feedback_law_from_string(const std::string& text);

OrderedJson validation_report_json(const ValidationReport& report);
OrderedJson design_verdict_json(const DesignVerdict& verdict);
OrderedJson convergence_report_json(const ConvergenceReport& report);

std::string law_variant_name(LawVariant variant);
LawVariant law_variant_from_name(const std::string& name);

}  // namespace nnc
