#ifndef YBE_REPORT_HPP
#define YBE_REPORT_HPP

#include <json.hpp>
#include <string>

#include "ybe/baxterize.hpp"
#include "ybe/bethe.hpp"
#include "ybe/reconstruct.hpp"
#include "ybe/rmatrices.hpp"
#include "ybe/verify.hpp"

namespace ybe {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ybe-forge/1";
inline constexpr const char* kVersion = "1.0.0";

// Complex numbers serialize as [re, im] pairs throughout.
json to_json(const cplx& z);
json to_json(const Mat& m);
json to_json(const CurvePoint& p);
json to_json(const TwistSpec& t);
json to_json(const CheckResult& c);
json to_json(const VerificationReport& r);
json to_json(const ObstructionReport& r);
json to_json(const UniReconstruction& r);
json to_json(const AlgebraFit& f);
json to_json(const SetCompareReport& r);
json to_json(const CompletenessReport& r);

cplx complex_from_json(const json& j);

// Standard envelope: schema, version, command, config echo, seed.
json report_envelope(const std::string& command, const json& config, uint64_t seed);

}  // namespace ybe

#endif
