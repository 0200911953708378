#include "ecdkit/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace ecdkit {

namespace {

json complex_entries(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const cplx& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

std::vector<cplx> complex_entries_from(const json& arr, size_t expected) {
    if (!arr.is_array() || arr.size() != expected)
        throw std::invalid_argument("json: entry count mismatch");
    std::vector<cplx> v;
    v.reserve(expected);
    for (const json& e : arr) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("json: complex entries must be [re, im]");
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

}  // namespace

json to_json(const CMat& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", complex_entries(m.data())}};
}

CMat cmat_from_json(const json& j) {
    const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    if (rows < 1 || cols < 1) throw std::invalid_argument("json: nonpositive matrix dimension");
    return CMat(rows, cols, complex_entries_from(j.at("entries"), size_t(rows) * cols));
}

json to_json(const EnergyObservable& g) {
    return {{"levels", g.levels}, {"grounded", g.grounded}};
}

EnergyObservable observable_from_json(const json& j) {
    return EnergyObservable(j.at("levels").get<std::vector<double>>(),
                            j.at("grounded").get<bool>());
}

namespace {
const char* kind_name(MapKind k) {
    switch (k) {
        case MapKind::Channel: return "channel";
        case MapKind::Operation: return "operation";
        default: return "general";
    }
}

MapKind kind_from(const std::string& s) {
    if (s == "channel") return MapKind::Channel;
    if (s == "operation") return MapKind::Operation;
    if (s == "general") return MapKind::General;
    throw std::invalid_argument("json: unknown map kind '" + s + "'");
}
}  // namespace

json to_json(const KrausMap& k) {
    json ops = json::array();
    for (const CMat& v : k.ops) ops.push_back(to_json(v));
    return {{"kind", kind_name(k.kind)},
            {"dim_in", k.dim_in()},
            {"dim_out", k.dim_out()},
            {"ops", ops}};
}

KrausMap kraus_from_json(const json& j) {
    std::vector<CMat> ops;
    for (const json& o : j.at("ops")) ops.push_back(cmat_from_json(o));
    KrausMap k(std::move(ops), kind_from(j.at("kind").get<std::string>()));
    if (j.contains("dim_in") && j.at("dim_in").get<int>() != k.dim_in())
        throw std::invalid_argument("json: dim_in disagrees with operator shapes");
    if (j.contains("dim_out") && j.at("dim_out").get<int>() != k.dim_out())
        throw std::invalid_argument("json: dim_out disagrees with operator shapes");
    return k;
}

json to_json(const Dilation& d) {
    return {{"env_dim", d.env_dim},
            {"dim_in", d.dim_in()},
            {"dim_out", d.dim_out()},
            {"isometry", d.is_isometry()},
            {"v", to_json(d.v)}};
}

Dilation dilation_from_json(const json& j) {
    Dilation d(cmat_from_json(j.at("v")), j.at("env_dim").get<int>());
    if (j.contains("isometry") && j.at("isometry").get<bool>() && !d.is_isometry())
        throw std::invalid_argument("json: isometry flag set but V*V != I");
    return d;
}

json to_json(const DistanceReport& r) {
    return {{"estimate", r.estimate},
            {"lower", r.lower},
            {"upper", r.upper},
            {"upper_provenance", r.upper_provenance},
            {"witness", complex_entries(r.witness)},
            {"restarts", r.restarts},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return j;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= std::uint8_t(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ecdkit
