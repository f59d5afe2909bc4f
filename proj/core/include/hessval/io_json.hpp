#pragma once

#include "hessval/convex_function.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace hessval {

// JSON schema: the "type" field selects the variant; grids carry "box",
// "shape" and a row-major "values" array with +inf encoded as the string
// "inf".  See the README for the full schema.
nlohmann::json convex_function_to_json(const ConvexFunction& f);
ConvexFunction convex_function_from_json(const nlohmann::json& j);

nlohmann::json polytope_to_json(const Polytope& p);
Polytope polytope_from_json(const nlohmann::json& j);

ConvexFunction load_convex_function(const std::string& path);
void save_convex_function(const ConvexFunction& f, const std::string& path);

}  // namespace hessval
