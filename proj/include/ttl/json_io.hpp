#pragma once

#include <json.hpp>

#include "ttl/exactnum.hpp"
#include "ttl/quadspace.hpp"
#include "ttl/schwartz.hpp"
#include "ttl/weil.hpp"

namespace ttl {

using Json = nlohmann::json;

// Parse failures throw Error(ConfigError).
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json cycnum_to_json(const CycNum& x);
CycNum cycnum_from_json(const Json& j);

Json schwartz_to_json(const SchwartzFn& f);
SchwartzFn schwartz_from_json(const Json& j, long p);

Json quadspace_to_json(const QuadSpace& Q);
QuadSpace quadspace_from_json(const Json& j);

Json sl2_to_json(const SL2Elt& g);
SL2Elt sl2_from_json(const Json& j);

}  // namespace ttl
