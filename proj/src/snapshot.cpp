#include "gpvw/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "gpvw/errors.hpp"

namespace gpvw {

namespace {

constexpr const char* magic = "GPFIELD1";

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t r = 0;
        for (int k = 0; k < 8; ++k) r |= ((v >> (8 * k)) & 0xffu) << (8 * (7 - k));
        return r;
    }
}

void put_double(std::string& buf, double x) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(x));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    buf.append(bytes, 8);
}

double get_double(const char* p) {
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    return std::bit_cast<double>(to_little(bits));
}

}  // namespace

void write_gpfield(std::ostream& out, const Field2D& u, const SnapshotMeta& meta) {
    const auto& g = u.grid();
    nlohmann::ordered_json header;
    header["magic"] = magic;
    header["L"] = g.half_width;
    header["nx"] = g.nx;
    header["ny"] = g.ny;
    if (meta.speed) header["c"] = *meta.speed;
    if (meta.momentum) header["p"] = *meta.momentum;
    if (!u.far_field().is_unit())
        header["farfield"] = {{"dipole", u.far_field().dipole}, {"speed", u.far_field().speed}};
    std::string buf = header.dump() + "\n";
    buf.reserve(buf.size() + 16 * g.size());
    for (const auto& z : u.values()) {
        put_double(buf, z.real());
        put_double(buf, z.imag());
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write_gpfield: stream write failed");
}

void write_gpfield(const std::filesystem::path& path, const Field2D& u, const SnapshotMeta& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_gpfield: cannot open " + path.string());
    write_gpfield(out, u, meta);
}

Snapshot read_gpfield(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("gpfield: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("gpfield: malformed header: ") + e.what());
    }
    GridSpec g;
    SnapshotMeta meta;
    FarField far;
    try {
        if (!header.is_object() || header.value("magic", std::string()) != magic)
            throw FormatError("gpfield: bad magic");
        g.half_width = header.at("L").get<double>();
        g.nx = header.at("nx").get<int>();
        g.ny = header.at("ny").get<int>();
        if (header.contains("c") && !header["c"].is_null()) meta.speed = header["c"].get<double>();
        if (header.contains("p") && !header["p"].is_null()) meta.momentum = header["p"].get<double>();
        if (header.contains("farfield")) {
            far.dipole = header["farfield"].at("dipole").get<double>();
            far.speed = header["farfield"].at("speed").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("gpfield: invalid header field: ") + e.what());
    }
    try {
        g.validate();
    } catch (const InputError& e) {
        throw FormatError(std::string("gpfield: invalid grid: ") + e.what());
    }

    const std::size_t bytes = 16 * g.size();
    std::string payload(bytes, '\0');
    in.read(payload.data(), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) throw FormatError("gpfield: truncated payload");
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("gpfield: trailing bytes after payload");

    Field2D u(g, cplx(0.0, 0.0), far);
    auto& v = u.values();
    for (std::size_t k = 0; k < g.size(); ++k)
        v[k] = cplx(get_double(payload.data() + 16 * k), get_double(payload.data() + 16 * k + 8));
    if (!u.all_finite()) throw FormatError("gpfield: non-finite values");
    return {std::move(u), meta};
}

Snapshot read_gpfield(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("gpfield: cannot open " + path.string());
    return read_gpfield(in);
}

}  // namespace gpvw
