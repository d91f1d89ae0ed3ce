#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "klein/constants.hpp"
#include "klein/extremal.hpp"
#include "klein/geometry.hpp"
#include "klein/measure.hpp"
#include "klein/solvers.hpp"
#include "klein/systole.hpp"
#include "klein/verification.hpp"

namespace klein {

using Json = nlohmann::json;
using AnyMetric = std::variant<ProfileMetric, GridMetric>;

// Metric interchange:
//   {"type":"profile","kind":"flat-spherical","omega":w,"b":b,"surface":"klein"}
//   {"type":"profile","kind":"spherical-cap"|"flat-spherical-pi3","b":b}
//   {"type":"profile","kind":"constant","c":c,"half_height":V}
//   {"type":"profile","kind":"tabulated","samples":[...],"half_height":V}
//   {"type":"grid","beta":B,"n_u":N,"n_v":M,"factors":[...]}   factors[j * n_u + i]
// Reals are written as JSON numbers in shortest round-trip form; readers also accept
// decimal strings.
Json to_json(const ProfileMetric& m);
Json to_json(const GridMetric& m);
AnyMetric metric_from_json(const Json& j);

Json to_json(const ExtremalSpec& s);
ExtremalSpec extremal_spec_from_json(const Json& j);

Json to_json(const RootResult& r);
Json to_json(const ConstantResult& r);
Json to_json(const SystoleReport& r);
Json to_json(const CurveFamilyMeasure& f);
Json to_json(const BoundCertificate& c);
Json to_json(const SweepResult& r);
Json to_json(const AsymptoticsReport& r);

// Number or decimal string to double, bit-exact for shortest round-trip text.
double read_real(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace klein
