#pragma once

#include <string>

#include "json.hpp"

#include "ecdkit/channel.hpp"
#include "ecdkit/distance.hpp"
#include "ecdkit/energy.hpp"

namespace ecdkit {

using json = nlohmann::json;

// Complex entries are always serialized as [re, im]; matrices row-major.

json to_json(const CMat& m);
CMat cmat_from_json(const json& j);

json to_json(const EnergyObservable& g);
EnergyObservable observable_from_json(const json& j);

json to_json(const KrausMap& k);
KrausMap kraus_from_json(const json& j);

json to_json(const Dilation& d);
Dilation dilation_from_json(const json& j);

json to_json(const DistanceReport& r);

json load_json_file(const std::string& path);

/// FNV-1a hash of the file bytes, hex-encoded; embedded in outputs so runs
/// can be traced back to their exact inputs.
std::string file_digest(const std::string& path);

}  // namespace ecdkit
