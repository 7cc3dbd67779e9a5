#include "polylab/io.hpp"

#include <fstream>
#include <sstream>

namespace polylab {

using nlohmann::json;

json field_to_json(const Field& f)
{
    json j;
    j["schema"] = kSchema;
    j["kind"] = "field";
    json geo;
    geo["type"] = f.geom == Geom::box ? "box" : "torus";
    geo["d"] = f.d;
    if (f.geom == Geom::box)
        geo["radius"] = f.extent;
    else
        geo["period"] = f.extent;
    j["geometry"] = geo;
    j["values"] = f.v; // row-major
    return j;
}

Field field_from_json(const json& j)
{
    const auto& geo = j.at("geometry");
    const int d = geo.at("d").get<int>();
    Field f = geo.at("type").get<std::string>() == "box"
                  ? Field::box(d, geo.at("radius").get<int>())
                  : Field::torus(d, geo.at("period").get<int>());
    const auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != f.v.size()) throw PreconditionError("field_from_json: value count mismatch");
    f.v = vals;
    return f;
}

json series_to_json(const IntSeries& s)
{
    json j;
    j["schema"] = kSchema;
    j["kind"] = "series";
    j["meaning"] = "(p/Omega)^n";
    j["Omega"] = s.Omega;
    std::vector<std::string> coeffs;
    coeffs.reserve(s.c.size());
    for (const auto& c : s.c) coeffs.push_back(c.get_str());
    j["coeffs"] = coeffs;
    return j;
}

json series_to_json(const RealSeries& s)
{
    json j;
    j["schema"] = kSchema;
    j["kind"] = "series";
    j["meaning"] = "(p/Omega)^n";
    j["Omega"] = s.Omega;
    j["coeffs"] = s.c;
    return j;
}

std::string axis_slice_csv(const Field& f, int limit)
{
    std::ostringstream os;
    os.precision(17);
    os << "n,value\n";
    for (int n = 0; n <= limit; ++n) {
        Point p{};
        p[0] = n;
        os << n << "," << f.at(p) << "\n";
    }
    return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_hex(const std::string& bytes)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string("fnv64:") + buf;
}

json RunManifest::to_json() const
{
    json j;
    j["schema"] = kSchema;
    j["kind"] = "manifest";
    j["subcommand"] = subcommand;
    j["params"] = params;
    j["version"] = version;
    j["threads"] = threads;
    j["wall_ms"] = wall_ms;
    j["outputs"] = output_digests;
    return j;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os << content;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for read: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace polylab
