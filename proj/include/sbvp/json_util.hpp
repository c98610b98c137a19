#pragma once

#include <string>

#include <json.hpp>

#include "sbvp/common.hpp"

namespace sbvp {

using Json = nlohmann::ordered_json;

// Like Json::dump, but floating-point values always carry 17 significant digits.
std::string dump17(const Json& j, int indent = 2);

Json complex_json(Complex z);

}  // namespace sbvp
