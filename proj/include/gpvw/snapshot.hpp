#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "gpvw/field.hpp"

namespace gpvw {

/// Optional metadata carried in a .gpfield header.
struct SnapshotMeta {
    std::optional<double> speed;     ///< "c"
    std::optional<double> momentum;  ///< "p"
};

struct Snapshot {
    Field2D field;
    SnapshotMeta meta;
};

// .gpfield layout: one line of JSON
//   {"magic":"GPFIELD1","L":..,"nx":..,"ny":..,"c":..,"p":..,"farfield":{"dipole":..,"speed":..}}
// ("c", "p", "farfield" optional) terminated by '\n', followed by nx*ny*2
// little-endian binary64 values (Re, Im) with x fastest.

void write_gpfield(std::ostream& out, const Field2D& u, const SnapshotMeta& meta = {});
void write_gpfield(const std::filesystem::path& path, const Field2D& u, const SnapshotMeta& meta = {});

/// Throws FormatError on a bad magic, malformed header, invalid grid or truncated payload.
Snapshot read_gpfield(std::istream& in);
Snapshot read_gpfield(const std::filesystem::path& path);

}  // namespace gpvw
