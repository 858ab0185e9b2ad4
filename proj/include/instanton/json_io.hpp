#pragma once

#include <string>

#include <json.hpp>

#include "instanton/adhm.hpp"
#include "instanton/equivariant.hpp"
#include "instanton/gauge.hpp"
#include "instanton/invariants.hpp"
#include "instanton/submanifold.hpp"
#include "instanton/vanishing.hpp"

namespace instanton::io {

using nlohmann::json;

// On-disk schemas.  Real-form quaternion entries are [w, x, y, z]; complex-form
// entries are 8-vectors [w, x, y, z, w', x', y', z'] (quaternionic part then
// complexification part).  Doubles survive a round trip bit-exactly (shortest
// round-trip printing).
//
//   datum:        {"k": n, "form": "real"|"complex", "T": [[entry,..],..], "P": [entry,..]}
//   submanifold:  {"kind": "point"|"circle"|"sphere2"|"sphere3"|"torus2",
//                  "radius": r, ("radius2": r2,)
//                  "frame": {"rotation": [[..]x4], "offset": [w,x,y,z]}, "order": n}
//
// Decoders throw ConfigInvalid with a path-qualified message on any shape or
// value problem; encoders never fail.

json to_json(const Quaternion& q);
json to_json(const CQuaternion& q);
Quaternion quaternion_from_json(const json& j, const std::string& where = "quaternion");
CQuaternion cquaternion_from_json(const json& j, const std::string& where = "entry");

json to_json(const AdhmData& d);
AdhmData adhm_from_json(const json& j);

json to_json(const SubmanifoldSpec& s);
SubmanifoldSpec submanifold_from_json(const json& j);

// Result payloads (no envelope; the CLI wraps these in its document format).
json to_json(const IntegralResult& r);
json to_json(const LinkingResult& r);
json to_json(const Don1Result& r);
json to_json(const GaugeSample& s);
json to_json(const EulerClass& e);
json to_json(const ReducibleCheck& r);
json to_json(const VanishingReport& r);

// Canonical serialization: 2-space indent, sorted keys off (insertion order kept by
// nlohmann::ordered_json is not used; plain json sorts keys, which is what the
// golden files pin), trailing newline.
std::string dump_doc(const json& j);

json load_json(const std::string& path);                 // ConfigInvalid on parse failure
void save_json(const std::string& path, const json& j);  // dump_doc format

}  // namespace instanton::io
