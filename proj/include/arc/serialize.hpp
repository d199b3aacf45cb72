#ifndef ARC_SERIALIZE_HPP
#define ARC_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "arc/bounds.hpp"
#include "arc/network.hpp"
#include "arc/rademacher.hpp"
#include "arc/train.hpp"

namespace arc {

using Json = nlohmann::json;

// Model document: {dims, activation, weights, seed_provenance}; f64 values
// round-trip bit-exactly (17 significant digits).
Json mlp_to_json(const MLP& net, const std::string& seed_provenance = "");
MLP mlp_from_json(const Json& doc);
void write_mlp_json(const MLP& net, const std::string& path,
                    const std::string& seed_provenance = "");
MLP read_mlp_json(const std::string& path);

Json activation_to_json(const ActivationSpec& act);
ActivationSpec activation_from_json(const Json& doc);

Json class_spec_to_json(const FunctionClassSpec& cls);
FunctionClassSpec class_spec_from_json(const Json& doc);

Json attack_spec_to_json(const AttackSpec& spec);
AttackSpec attack_spec_from_json(const Json& doc);

// Flat object, one key per bound.
Json bound_report_to_json(const BoundReport& report);

Json rad_estimate_to_json(const RadEstimate& est);

Json gap_table_to_json(const GapTable& table);

void write_json_file(const Json& doc, const std::string& path);
Json read_json_file(const std::string& path);

// Strict schema helper: throws InvalidInput when `doc` holds a key outside
// `allowed`.
void reject_unknown_keys(const Json& doc, const std::vector<std::string>& allowed,
                         const std::string& context);

}  // namespace arc

#endif
