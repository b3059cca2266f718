#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "qvalued/extension.hpp"
#include "qvalued/mvf.hpp"
#include "qvalued/nagata.hpp"
#include "qvalued/qspace.hpp"
#include "qvalued/spaces.hpp"

// JSON forms of the library types. Readers throw InputError on malformed
// documents.
namespace qvalued {

using json = nlohmann::json;

void to_json(json& j, const Space& space);
void from_json(const json& j, Space& space);

// {"Q": n, "points": [[...], ...]}, plus "space" when it is not the
// Euclidean space of the points' dimension.
json qpoint_to_json(const QPoint& x);
QPoint qpoint_from_json(const json& j,
                        std::optional<Space> space = std::nullopt);

// {"sigma": [...], "value": v}
json matching_to_json(const Matching& m);

json mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const json& j);

// {"domain": mesh, "values": [QPoint, ...]} with optional "name", "target".
json mvf_table_to_json(const Mesh& domain, const SampledMVF& f);
SampledMVF mvf_table_from_json(const json& j);

json decomposition_to_json(const ClusterDecomposition& d);
json chain_report_to_json(const ChainReport& r);
json extension_report_to_json(const ExtensionReport& r);
json weak_convexity_to_json(const WeakConvexityReport& r);

// {"c": .., "s": .., "space": .., "members": [...]} with members
// {"interval": [lo, hi]}, {"box": {"lo": [..], "hi": [..]}},
// {"ball": {"center": [..], "radius": r}} or {"indices": [..]}.
json cover_to_json(const Cover& cover);
Cover cover_from_json(const json& j);

json nagata_report_to_json(const NagataReport& r);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

}  // namespace qvalued
