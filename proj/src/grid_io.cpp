#include "mig/grid_io.hpp"

#include <array>
#include <bit>
#include <cerrno>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mig {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'I', 'G', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

class Cursor {
public:
    Cursor(const std::string& data, const std::filesystem::path& path)
        : data_(data), path_(path) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }

    [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t n) {
        if (data_.size() - pos_ < n) {
            raise(Errc::IoError, "truncated grid file: " + path_.string());
        }
    }

    const std::string& data_;
    const std::filesystem::path& path_;
    std::size_t pos_{0};
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(Errc::IoError, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) {
        raise(Errc::IoError, "read failure on " + path.string());
    }
    return std::move(buf).str();
}

// Write-temp-then-rename so partially written grids are never visible
// under the destination name.
void atomic_write(const std::filesystem::path& path, const std::string& data) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            raise(Errc::IoError, "cannot create " + tmp.string());
        }
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out.good()) {
            raise(Errc::IoError, "write failure on " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        raise(Errc::IoError, "cannot rename " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double_strict(const std::string& text, const std::filesystem::path& path) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        raise(Errc::IoError, "malformed number '" + text + "' in " + path.string());
    }
    return v;
}

ScalarField2D read_grid_binary(const std::string& data, const std::filesystem::path& path) {
    Cursor cur(data, path);
    for (char expected : kMagic) {
        if (cur.u8() != static_cast<std::uint8_t>(expected)) {
            raise(Errc::IoError, "bad magic in " + path.string());
        }
    }
    ScalarField2D f;
    f.nx = cur.u32();
    f.ny = cur.u32();
    f.dx = cur.f64();
    f.dy = cur.f64();
    f.z = cur.f64();
    const std::uint8_t tag = cur.u8();
    if (tag > 3) {
        raise(Errc::IoError, "unknown component tag byte in " + path.string());
    }
    f.tag = static_cast<ComponentTag>(tag);
    if (f.nx == 0 || f.ny == 0) {
        raise(Errc::IoError, "zero-sized grid in " + path.string());
    }
    const std::size_t count = static_cast<std::size_t>(f.nx) * f.ny;
    if (cur.remaining() != count * 8) {
        std::ostringstream msg;
        msg << path.string() << ": expected " << count * 8 << " payload bytes, found "
            << cur.remaining();
        raise(Errc::IoError, msg.str());
    }
    f.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        f.values[i] = cur.f64();
    }
    return f;
}

ScalarField2D read_grid_csv(const std::string& data, const std::filesystem::path& path) {
    std::istringstream in(data);
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#') {
        raise(Errc::IoError, "missing CSV grid header in " + path.string());
    }

    ScalarField2D f;
    bool have_nx = false, have_ny = false, have_dx = false, have_dy = false, have_z = false,
         have_tag = false;
    std::istringstream hs(header.substr(1));
    std::string token;
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            raise(Errc::IoError, "malformed CSV header token '" + token + "' in " + path.string());
        }
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "nx") {
            f.nx = static_cast<std::size_t>(parse_double_strict(value, path));
            have_nx = true;
        } else if (key == "ny") {
            f.ny = static_cast<std::size_t>(parse_double_strict(value, path));
            have_ny = true;
        } else if (key == "dx_m") {
            f.dx = parse_double_strict(value, path);
            have_dx = true;
        } else if (key == "dy_m") {
            f.dy = parse_double_strict(value, path);
            have_dy = true;
        } else if (key == "z_m") {
            f.z = parse_double_strict(value, path);
            have_z = true;
        } else if (key == "tag") {
            f.tag = component_tag_from_string(value);
            have_tag = true;
        } else {
            raise(Errc::IoError, "unknown CSV header key '" + key + "' in " + path.string());
        }
    }
    if (!(have_nx && have_ny && have_dx && have_dy && have_z && have_tag)) {
        raise(Errc::IoError, "incomplete CSV grid header in " + path.string());
    }
    if (f.nx == 0 || f.ny == 0) {
        raise(Errc::IoError, "zero-sized grid in " + path.string());
    }

    f.values.reserve(f.nx * f.ny);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.values.push_back(parse_double_strict(cell, path));
        }
    }
    if (f.values.size() != f.nx * f.ny) {
        std::ostringstream msg;
        msg << path.string() << ": expected " << f.nx * f.ny << " values, found "
            << f.values.size();
        raise(Errc::IoError, msg.str());
    }
    return f;
}

}  // namespace

const char* grid_file_extension(GridFileFormat format) {
    return format == GridFileFormat::Binary ? ".grid" : ".csv";
}

void write_grid(const std::filesystem::path& path, const ScalarField2D& f, GridFileFormat format) {
    f.ensure_consistent("write_grid");
    std::string data;
    if (format == GridFileFormat::Binary) {
        data.reserve(33 + f.values.size() * 8);
        data.append(kMagic.data(), kMagic.size());
        put_u32(data, static_cast<std::uint32_t>(f.nx));
        put_u32(data, static_cast<std::uint32_t>(f.ny));
        put_f64(data, f.dx);
        put_f64(data, f.dy);
        put_f64(data, f.z);
        data.push_back(static_cast<char>(f.tag));
        for (double v : f.values) {
            put_f64(data, v);
        }
    } else {
        std::ostringstream out;
        out << "# nx=" << f.nx << " ny=" << f.ny << " dx_m=" << format_g17(f.dx)
            << " dy_m=" << format_g17(f.dy) << " z_m=" << format_g17(f.z)
            << " tag=" << to_string(f.tag) << "\n";
        for (std::size_t iy = 0; iy < f.ny; ++iy) {
            for (std::size_t ix = 0; ix < f.nx; ++ix) {
                if (ix != 0) {
                    out << ',';
                }
                out << format_g17(f.at(ix, iy));
            }
            out << '\n';
        }
        data = std::move(out).str();
    }
    atomic_write(path, data);
}

ScalarField2D read_grid(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    const bool is_binary =
        data.size() >= kMagic.size() && std::memcmp(data.data(), kMagic.data(), kMagic.size()) == 0;
    ScalarField2D f = is_binary ? read_grid_binary(data, path) : read_grid_csv(data, path);
    f.ensure_consistent(path.string().c_str());
    return f;
}

}  // namespace mig
