#include "mig/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mig/inverse.hpp"

namespace mig {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Entry {
    std::string key;
    std::string value;
    int line{0};
    bool used{false};
};

struct Section {
    std::string name;
    int line{0};
    std::vector<Entry> entries;
};

std::vector<Section> parse_sections(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::IoError, "cannot open config " + path.string());
    }
    std::vector<Section> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                std::ostringstream msg;
                msg << path.string() << ":" << lineno << ": malformed section header '" << line
                    << "'";
                raise(Errc::ConfigError, msg.str());
            }
            sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || sections.empty()) {
            std::ostringstream msg;
            msg << path.string() << ":" << lineno << ": expected 'key = value' inside a section";
            raise(Errc::ConfigError, msg.str());
        }
        sections.back().entries.push_back(
            {trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno, false});
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(Section& section, const std::filesystem::path& path)
        : section_(section), path_(path) {}

    std::optional<std::string> take(const std::string& key) {
        std::optional<std::string> found;
        for (Entry& e : section_.entries) {
            if (e.key != key) {
                continue;
            }
            if (e.used || found) {
                fail(e.line, "duplicate key '" + key + "'");
            }
            e.used = true;
            found = e.value;
        }
        return found;
    }

    double number(const std::string& key, double fallback) {
        const auto v = take(key);
        return v ? to_number(key, *v) : fallback;
    }

    std::optional<double> required_number_pair_m(const std::string& base) {
        // Accepts '<base>_mm' (millimeters) or '<base>_m' (meters, used by
        // manifests for lossless round trips), but not both.
        const auto mm = take(base + "_mm");
        const auto m = take(base + "_m");
        if (mm && m) {
            fail(section_.line, "give either " + base + "_mm or " + base + "_m, not both");
        }
        if (mm) {
            return to_number(base + "_mm", *mm) / 1000.0;
        }
        if (m) {
            return to_number(base + "_m", *m);
        }
        return std::nullopt;
    }

    double length_m(const std::string& base, double fallback) {
        const auto v = required_number_pair_m(base);
        return v ? *v : fallback;
    }

    double required_length_m(const std::string& base) {
        const auto v = required_number_pair_m(base);
        if (!v) {
            fail(section_.line, "missing required key " + base + "_mm");
        }
        return *v;
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        const auto v = take(key);
        if (!v) {
            return fallback;
        }
        const double n = to_number(key, *v);
        if (n < 0 || n != std::floor(n)) {
            fail(section_.line, key + " must be a non-negative integer");
        }
        return static_cast<std::size_t>(n);
    }

    std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
        const auto v = take(key);
        if (!v) {
            return fallback;
        }
        errno = 0;
        char* end = nullptr;
        const unsigned long long n = std::strtoull(v->c_str(), &end, 10);
        if (end == v->c_str() || *end != '\0' || errno == ERANGE) {
            fail(section_.line, "malformed integer for " + key + ": '" + *v + "'");
        }
        return n;
    }

    bool boolean(const std::string& key, bool fallback) {
        const auto v = take(key);
        if (!v) {
            return fallback;
        }
        if (*v == "true") return true;
        if (*v == "false") return false;
        fail(section_.line, key + " must be 'true' or 'false'");
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const auto v = take(key);
        return v ? *v : fallback;
    }

    /// Call after all keys were consumed; leftover keys are fatal.
    void finish() {
        for (const Entry& e : section_.entries) {
            if (!e.used) {
                fail(e.line, "unknown key '" + e.key + "' in section [" + section_.name + "]");
            }
        }
    }

    [[noreturn]] void fail(int line, const std::string& what) const {
        std::ostringstream msg;
        msg << path_.string() << ":" << line << ": " << what;
        raise(Errc::ConfigError, msg.str());
    }

    double to_number(const std::string& key, const std::string& value) {
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
            fail(section_.line, "malformed number for " + key + ": '" + value + "'");
        }
        return v;
    }

private:
    Section& section_;
    const std::filesystem::path& path_;
};

WindowKind parse_window(SectionReader& r, const std::string& value) {
    if (value == "none") return WindowKind::None;
    if (value == "hann") return WindowKind::Hann;
    if (value == "blackman-harris") return WindowKind::BlackmanHarris4Term;
    r.fail(0, "window must be one of none|hann|blackman-harris, got '" + value + "'");
}

const char* window_name(WindowKind k) {
    switch (k) {
        case WindowKind::None: return "none";
        case WindowKind::Hann: return "hann";
        case WindowKind::BlackmanHarris4Term: return "blackman-harris";
    }
    return "?";
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* tool_version() { return "mig 0.1.0"; }

RunConfig load_config(const std::filesystem::path& path) {
    std::vector<Section> sections = parse_sections(path);
    RunConfig cfg;
    bool have_geometry = false;

    for (Section& section : sections) {
        SectionReader r(section, path);
        if (section.name == "geometry") {
            if (have_geometry) {
                r.fail(section.line, "duplicate [geometry] section");
            }
            have_geometry = true;
            cfg.geometry.z_s1 = r.required_length_m("z_s1");
            cfg.geometry.z_s2 = r.required_length_m("z_s2");
            cfg.geometry.z_m1 = r.required_length_m("z_m1");
            cfg.geometry.z_m2 = r.required_length_m("z_m2");
            cfg.geometry.delta1 = r.required_length_m("delta1");
            cfg.geometry.delta2 = r.required_length_m("delta2");
        } else if (section.name == "grid") {
            cfg.grid.nx = r.count("nx", cfg.grid.nx);
            cfg.grid.ny = r.count("ny", cfg.grid.ny);
            cfg.grid.extent_x = r.length_m("extent_x", cfg.grid.extent_x);
            cfg.grid.extent_y = r.length_m("extent_y", cfg.grid.extent_y);
        } else if (section.name == "strip") {
            StripSpec s;
            const std::string layer = r.text("layer", "");
            if (layer == "s1") {
                s.layer = LayerIndex::S1;
            } else if (layer == "s2") {
                s.layer = LayerIndex::S2;
            } else {
                r.fail(section.line, "strip layer must be 's1' or 's2'");
            }
            const auto current = r.take("current_a");
            if (!current) {
                r.fail(section.line, "missing required key current_a");
            }
            s.total_current = r.to_number("current_a", *current);
            s.width_x = r.required_length_m("width_x");
            s.length_y = r.length_m("length_y", -1.0);  // resolved against the grid below
            s.center_x = r.length_m("center_x", 0.0);
            s.center_y = r.length_m("center_y", 0.0);
            s.edge_smoothing = r.length_m("edge_smoothing", 0.005);
            cfg.strips.push_back(s);
        } else if (section.name == "reconstruction") {
            const std::string window = r.text("window", window_name(cfg.recon.window.kind));
            cfg.recon.window.kind = parse_window(r, window);
            cfg.recon.pad_factor = r.count("pad_factor", cfg.recon.pad_factor);
            const std::string k_cut = r.text("k_cut", "auto");
            if (k_cut == "auto") {
                cfg.recon.k_cut.reset();
            } else {
                cfg.recon.k_cut = r.to_number("k_cut", k_cut);
            }
            cfg.recon.rolloff = r.number("rolloff", cfg.recon.rolloff);
            cfg.recon.max_gain = r.number("max_gain", cfg.recon.max_gain);
            const std::string dc = r.text("dc_policy", cfg.recon.dc_policy == DcPolicy::Zero
                                                           ? "zero"
                                                           : "minimum-norm");
            if (dc == "minimum-norm") {
                cfg.recon.dc_policy = DcPolicy::MinimumNorm;
            } else if (dc == "zero") {
                cfg.recon.dc_policy = DcPolicy::Zero;
            } else {
                r.fail(section.line, "dc_policy must be 'minimum-norm' or 'zero'");
            }
        } else if (section.name == "noise") {
            cfg.noise.sigma = r.number("sigma_t", cfg.noise.sigma);
            cfg.noise.seed = r.u64("seed", cfg.noise.seed);
        } else if (section.name == "output") {
            cfg.output.dir = r.text("dir", cfg.output.dir.string());
            const std::string format = r.text("format", "binary");
            if (format == "binary") {
                cfg.output.format = GridFileFormat::Binary;
            } else if (format == "csv") {
                cfg.output.format = GridFileFormat::Csv;
            } else {
                r.fail(section.line, "format must be 'binary' or 'csv'");
            }
            cfg.output.write_truth = r.boolean("write_truth", cfg.output.write_truth);
        } else if (section.name == "run") {
            cfg.tool_version = r.text("tool_version", "");
            cfg.rng_name = r.text("rng", "");
        } else {
            r.fail(section.line, "unknown section [" + section.name + "]");
        }
        r.finish();
    }

    if (!have_geometry) {
        raise(Errc::ConfigError, path.string() + ": missing required [geometry] section");
    }
    cfg.grid.validate();
    for (StripSpec& s : cfg.strips) {
        if (s.length_y < 0.0) {
            s.length_y = 0.6 * cfg.grid.extent_y;
        }
    }
    return cfg;
}

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg) {
    std::ostringstream out;
    out << "# resolved run manifest; loadable as a config file\n";
    out << "[run]\n";
    out << "tool_version = " << tool_version() << "\n";
    out << "rng = " << kNoiseRngName << "\n";
    out << "\n[geometry]\n";
    out << "z_s1_m = " << g17(cfg.geometry.z_s1) << "\n";
    out << "z_s2_m = " << g17(cfg.geometry.z_s2) << "\n";
    out << "z_m1_m = " << g17(cfg.geometry.z_m1) << "\n";
    out << "z_m2_m = " << g17(cfg.geometry.z_m2) << "\n";
    out << "delta1_m = " << g17(cfg.geometry.delta1) << "\n";
    out << "delta2_m = " << g17(cfg.geometry.delta2) << "\n";
    out << "\n[grid]\n";
    out << "nx = " << cfg.grid.nx << "\n";
    out << "ny = " << cfg.grid.ny << "\n";
    out << "extent_x_m = " << g17(cfg.grid.extent_x) << "\n";
    out << "extent_y_m = " << g17(cfg.grid.extent_y) << "\n";
    for (const StripSpec& s : cfg.strips) {
        out << "\n[strip]\n";
        out << "layer = " << (s.layer == LayerIndex::S1 ? "s1" : "s2") << "\n";
        out << "current_a = " << g17(s.total_current) << "\n";
        out << "width_x_m = " << g17(s.width_x) << "\n";
        out << "length_y_m = " << g17(s.length_y) << "\n";
        out << "center_x_m = " << g17(s.center_x) << "\n";
        out << "center_y_m = " << g17(s.center_y) << "\n";
        out << "edge_smoothing_m = " << g17(s.edge_smoothing) << "\n";
    }
    out << "\n[reconstruction]\n";
    out << "window = " << window_name(cfg.recon.window.kind) << "\n";
    out << "pad_factor = " << cfg.recon.pad_factor << "\n";
    double k_cut_value = 0.0;
    bool have_k_cut = false;
    if (cfg.recon.k_cut) {
        k_cut_value = *cfg.recon.k_cut;
        have_k_cut = true;
    } else {
        // Resolve auto to its numeric value when the geometry permits, so
        // the manifest pins every number that influenced the run.
        try {
            k_cut_value = auto_k_cut(validate_geometry(cfg.geometry), cfg.recon.max_gain);
            have_k_cut = true;
        } catch (const Error&) {
            have_k_cut = false;
        }
    }
    out << "k_cut = " << (have_k_cut ? g17(k_cut_value) : std::string("auto")) << "\n";
    out << "rolloff = " << g17(cfg.recon.rolloff) << "\n";
    out << "max_gain = " << g17(cfg.recon.max_gain) << "\n";
    out << "dc_policy = " << (cfg.recon.dc_policy == DcPolicy::Zero ? "zero" : "minimum-norm")
        << "\n";
    out << "\n[noise]\n";
    out << "sigma_t = " << g17(cfg.noise.sigma) << "\n";
    out << "seed = " << cfg.noise.seed << "\n";
    out << "\n[output]\n";
    out << "dir = " << cfg.output.dir.string() << "\n";
    out << "format = " << (cfg.output.format == GridFileFormat::Binary ? "binary" : "csv") << "\n";
    out << "write_truth = " << (cfg.output.write_truth ? "true" : "false") << "\n";

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) {
            raise(Errc::IoError, "cannot create " + tmp.string());
        }
        f << out.str();
        if (!f.good()) {
            raise(Errc::IoError, "write failure on " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        raise(Errc::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
    }
}

}  // namespace mig
