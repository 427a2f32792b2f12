#include "monge2/field_io.hpp"

#include "monge2/errors.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace monge2 {

namespace {

constexpr std::array<char, 8> kMagic = {'M', '2', 'F', 'I', 'E', 'L', 'D', '\x01'};

template <class T>
void put(std::ofstream& os, T value) {
    static_assert(sizeof(T) == 8);
    auto bits = std::bit_cast<std::uint64_t>(value);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    std::array<char, 8> buf;
    std::memcpy(buf.data(), &bits, 8);
    os.write(buf.data(), 8);
}

template <class T>
T get(std::ifstream& is) {
    std::array<char, 8> buf;
    if (!is.read(buf.data(), 8)) throw InputError("field file is truncated");
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf.data(), 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    return std::bit_cast<T>(bits);
}

} // namespace

FieldData to_field_data(const GridField& field) {
    FieldData d;
    d.extents = field.extents();
    d.spacing = field.spacing();
    d.origin = field.origin();
    d.values.assign(field.values().begin(), field.values().end());
    return d;
}

void write_field(const std::filesystem::path& path, const FieldData& d) {
    std::int64_t count = 1;
    for (auto e : d.extents) {
        if (e <= 0) throw InputError("field extents must be positive");
        count *= e;
    }
    if (static_cast<std::size_t>(count) != d.values.size())
        throw InputError("field value count does not match its extents");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot open " + path.string() + " for writing");
    os.write(kMagic.data(), kMagic.size());
    for (auto e : d.extents) put<std::int64_t>(os, e);
    for (double h : d.spacing) put<double>(os, h);
    for (double o : d.origin) put<double>(os, o);
    for (double v : d.values) put<double>(os, v);
    if (!os) throw InputError("failed writing " + path.string());
}

void write_field(const std::filesystem::path& path, const GridField& field) {
    write_field(path, to_field_data(field));
}

FieldData read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open " + path.string());
    std::array<char, 8> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw InputError(path.string() + " is not a field file");
    FieldData d;
    std::int64_t count = 1;
    for (auto& e : d.extents) {
        e = get<std::int64_t>(is);
        if (e <= 0 || e > (std::int64_t{1} << 20)) throw InputError("field extents out of range");
        count *= e;
    }
    for (double& h : d.spacing) h = get<double>(is);
    for (double& o : d.origin) o = get<double>(is);
    d.values.resize(static_cast<std::size_t>(count));
    for (double& v : d.values) v = get<double>(is);
    if (is.peek() != std::ifstream::traits_type::eof()) throw InputError("trailing bytes after field payload");
    return d;
}

} // namespace monge2
