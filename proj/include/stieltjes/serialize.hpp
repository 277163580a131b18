#pragma once

#include <string>

#include <json.hpp>

#include "stieltjes/errors.hpp"
#include "stieltjes/measure.hpp"
#include "stieltjes/monotone.hpp"
#include "stieltjes/piecewise.hpp"
#include "stieltjes/substitution.hpp"

namespace stieltjes {

/// Malformed or ill-typed input document.  Messages name the offending
/// field by its JSON path ("breakpoints[3].left").
class ParseError : public Error {
  using Error::Error;
};

nlohmann::json to_json(const MonotoneFn& fn);
nlohmann::json to_json(const PiecewiseFn& fn);
nlohmann::json to_json(const LSMeasure& mu);
nlohmann::json to_json(const FlatLevels& flats);
nlohmann::json to_json(const JumpSplit& split);
nlohmann::json to_json(const Decomposition& dec);
nlohmann::json to_json(const VerificationReport& report);

MonotoneFn monotone_from_json(const nlohmann::json& j);
PiecewiseFn piecewise_from_json(const nlohmann::json& j);

/// Parse a file; wraps stream and syntax errors in ParseError.
MonotoneFn load_monotone(const std::string& path);
PiecewiseFn load_piecewise(const std::string& path);

}  // namespace stieltjes
