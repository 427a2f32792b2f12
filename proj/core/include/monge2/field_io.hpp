#pragma once

#include "monge2/grid.hpp"

#include <filesystem>
#include <vector>

namespace monge2 {

/// Flat field as stored on disk: 8-byte magic, extents (3 x int64), spacing and
/// origin (3 x f64 each), then one little-endian f64 per node in x-fastest order.
struct FieldData {
    Index3 extents{};
    Vec3 spacing{};
    Vec3 origin{};
    std::vector<double> values;
};

void write_field(const std::filesystem::path& path, const GridField& field);
void write_field(const std::filesystem::path& path, const FieldData& data);

/// Throws InputError on a missing file, bad magic or truncated payload.
FieldData read_field(const std::filesystem::path& path);

FieldData to_field_data(const GridField& field);

} // namespace monge2
