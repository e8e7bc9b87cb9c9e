// mig - reconstruct planar current densities in a two-layer stack from
// magnetic field maps taken above and below it, plus the matching forward
// simulators and diagnostics.

#include <CLI11.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mig/config.hpp"
#include "mig/forward.hpp"
#include "mig/grid_io.hpp"
#include "mig/inverse.hpp"
#include "mig/metrics.hpp"
#include "mig/scenarios.hpp"
#include "mig/spectral.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRankDeficient = 3;
constexpr int kExitIo = 4;

int exit_code_for(const mig::Error& e) {
    switch (e.code()) {
        case mig::Errc::SameSidePlanes:
            return kExitRankDeficient;
        case mig::Errc::IoError:
            return kExitIo;
        default:
            return kExitValidation;
    }
}

struct SimulatedData {
    mig::CurrentLayer s1;
    mig::CurrentLayer s2;
    mig::FieldMap m1;
    mig::FieldMap m2;
};

SimulatedData simulate_fields(const mig::RunConfig& cfg) {
    const mig::StackGeometry g = mig::validate_geometry(cfg.geometry);
    SimulatedData data;
    data.s1 = mig::rasterize_layer(cfg.strips, mig::LayerIndex::S1, cfg.grid, g);
    data.s2 = mig::rasterize_layer(cfg.strips, mig::LayerIndex::S2, cfg.grid, g);
    if (cfg.strips.empty()) {
        std::cerr << "warning: scenario list is empty; simulated fields are identically zero\n";
    }

    for (mig::PlaneIndex plane : {mig::PlaneIndex::M1, mig::PlaneIndex::M2}) {
        const std::array<mig::FieldMap, 2> parts = {
            mig::forward_spectral(data.s1, g, plane, cfg.recon),
            mig::forward_spectral(data.s2, g, plane, cfg.recon),
        };
        mig::FieldMap total = mig::superpose(parts);
        if (cfg.noise.sigma > 0.0) {
            const std::uint64_t plane_seed =
                cfg.noise.seed + (plane == mig::PlaneIndex::M1 ? 0 : 1);
            total = mig::add_field_noise(total, cfg.noise.sigma, plane_seed);
        }
        (plane == mig::PlaneIndex::M1 ? data.m1 : data.m2) = total;
    }
    return data;
}

fs::path grid_path(const mig::RunConfig& cfg, const std::string& stem) {
    return cfg.output.dir / (stem + mig::grid_file_extension(cfg.output.format));
}

void write_field_maps(const mig::RunConfig& cfg, const SimulatedData& data) {
    mig::write_grid(grid_path(cfg, "m1_bx"), data.m1.bx, cfg.output.format);
    mig::write_grid(grid_path(cfg, "m1_by"), data.m1.by, cfg.output.format);
    mig::write_grid(grid_path(cfg, "m2_bx"), data.m2.bx, cfg.output.format);
    mig::write_grid(grid_path(cfg, "m2_by"), data.m2.by, cfg.output.format);
    if (cfg.output.write_truth) {
        mig::write_grid(grid_path(cfg, "truth_s1_jx"), data.s1.jx, cfg.output.format);
        mig::write_grid(grid_path(cfg, "truth_s1_jy"), data.s1.jy, cfg.output.format);
        mig::write_grid(grid_path(cfg, "truth_s2_jx"), data.s2.jx, cfg.output.format);
        mig::write_grid(grid_path(cfg, "truth_s2_jy"), data.s2.jy, cfg.output.format);
    }
}

double interior_relative_rms(const mig::ScalarField2D& test, const mig::ScalarField2D& ref) {
    return mig::relative_rms_central(test, ref, 0.5);
}

void run_oracle_comparison(const mig::RunConfig& cfg, const SimulatedData& data, int subdiv) {
    const mig::StackGeometry g = mig::validate_geometry(cfg.geometry);
    for (mig::PlaneIndex plane : {mig::PlaneIndex::M1, mig::PlaneIndex::M2}) {
        const std::array<mig::FieldMap, 2> parts = {
            mig::forward_direct(data.s1, g, plane, subdiv),
            mig::forward_direct(data.s2, g, plane, subdiv),
        };
        const mig::FieldMap oracle = mig::superpose(parts);
        const std::string stem = plane == mig::PlaneIndex::M1 ? "m1" : "m2";
        mig::write_grid(grid_path(cfg, "oracle_" + stem + "_bx"), oracle.bx, cfg.output.format);
        mig::write_grid(grid_path(cfg, "oracle_" + stem + "_by"), oracle.by, cfg.output.format);
        const mig::FieldMap& spectral = plane == mig::PlaneIndex::M1 ? data.m1 : data.m2;
        std::cout << "oracle." << stem << ".bx_rel_rms_interior="
                  << interior_relative_rms(spectral.bx, oracle.bx) << "\n";
    }
}

int cmd_simulate(const mig::RunConfig& cfg, bool oracle, int subdiv) {
    fs::create_directories(cfg.output.dir);
    const SimulatedData data = simulate_fields(cfg);
    write_field_maps(cfg, data);
    if (oracle) {
        run_oracle_comparison(cfg, data, subdiv);
    }
    mig::write_manifest(cfg.output.dir / "manifest.cfg", cfg);
    std::cout << "simulated field maps written to " << cfg.output.dir.string() << "\n";
    return kExitOk;
}

struct ReconstructInputs {
    mig::FieldMap m1;
    mig::FieldMap m2;
};

ReconstructInputs load_maps(const mig::RunConfig& cfg, const fs::path& m1x, const fs::path& m1y,
                            const fs::path& m2x, const fs::path& m2y) {
    ReconstructInputs in;
    in.m1.plane = mig::PlaneIndex::M1;
    in.m1.bx = mig::read_grid(m1x);
    in.m1.by = mig::read_grid(m1y);
    in.m2.plane = mig::PlaneIndex::M2;
    in.m2.bx = mig::read_grid(m2x);
    in.m2.by = mig::read_grid(m2y);
    in.m1.ensure_consistent("reconstruct inputs");
    in.m2.ensure_consistent("reconstruct inputs");
    if (!in.m1.bx.same_grid(in.m2.bx)) {
        mig::raise(mig::Errc::GridMismatch, "plane maps do not share a common grid");
    }
    if (in.m1.bx.tag != mig::ComponentTag::Bx || in.m1.by.tag != mig::ComponentTag::By ||
        in.m2.bx.tag != mig::ComponentTag::Bx || in.m2.by.tag != mig::ComponentTag::By) {
        mig::raise(mig::Errc::GridMismatch, "component tags do not match the expected Bx/By roles");
    }
    (void)cfg;
    return in;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        mig::raise(mig::Errc::IoError, "cannot create " + path.string());
    }
    out << content;
    if (!out.good()) {
        mig::raise(mig::Errc::IoError, "write failure on " + path.string());
    }
}

int reconstruct_and_report(const mig::RunConfig& cfg, const ReconstructInputs& in,
                           const mig::ScalarField2D* truth_s1, const mig::ScalarField2D* truth_s2) {
    const mig::StackGeometry g = mig::validate_geometry(cfg.geometry);
    const mig::TwoLayerReconstruction rec =
        mig::reconstruct_two_layer(in.m1, in.m2, g, cfg.recon);

    fs::create_directories(cfg.output.dir);
    mig::write_grid(grid_path(cfg, "rec_s1_jx"), rec.s1.jx, cfg.output.format);
    mig::write_grid(grid_path(cfg, "rec_s1_jy"), rec.s1.jy, cfg.output.format);
    mig::write_grid(grid_path(cfg, "rec_s2_jx"), rec.s2.jx, cfg.output.format);
    mig::write_grid(grid_path(cfg, "rec_s2_jy"), rec.s2.jy, cfg.output.format);
    std::cout << "reconstruction.k_cut_rad_per_m=" << rec.applied_k_cut << "\n";

    if (truth_s1 == nullptr || truth_s2 == nullptr) {
        return kExitOk;
    }

    std::vector<mig::LayerReport> reports;
    const std::array<std::tuple<const char*, const mig::ScalarField2D*, const mig::ScalarField2D*,
                                mig::LayerIndex>,
                     2>
        jobs = {{{"s1_jy", &rec.s1.jy, truth_s1, mig::LayerIndex::S1},
                 {"s2_jy", &rec.s2.jy, truth_s2, mig::LayerIndex::S2}}};
    for (const auto& [label, test, truth, layer] : jobs) {
        mig::LayerReport r;
        r.label = label;
        r.rel_rms_central = mig::relative_rms_central(*test, *truth, 0.6);
        r.peak_abs_err = mig::peak_abs_error(*test, *truth);
        // Plateau estimates need the strip description; take the first
        // configured strip of this layer, if any.
        for (const mig::StripSpec& s : cfg.strips) {
            if (s.layer != layer) {
                continue;
            }
            r.plateau_current =
                mig::plateau_current_estimate(*test, s, g.layer_thickness(layer));
            r.plateau_target = s.total_current;
            break;
        }
        reports.push_back(std::move(r));
    }

    const std::string text = mig::format_report_text(reports);
    const std::string kv = mig::format_report_kv(reports);
    write_text_file(cfg.output.dir / "metrics.txt", text);
    write_text_file(cfg.output.dir / "metrics.kv", kv);
    std::cout << text << kv;
    return kExitOk;
}

int cmd_reconstruct(const mig::RunConfig& cfg, const fs::path& m1x, const fs::path& m1y,
                    const fs::path& m2x, const fs::path& m2y,
                    const std::optional<fs::path>& truth_s1,
                    const std::optional<fs::path>& truth_s2) {
    const ReconstructInputs in = load_maps(cfg, m1x, m1y, m2x, m2y);
    mig::ScalarField2D t1, t2;
    const bool have_truth = truth_s1 && truth_s2;
    if (have_truth) {
        t1 = mig::read_grid(*truth_s1);
        t2 = mig::read_grid(*truth_s2);
    }
    return reconstruct_and_report(cfg, in, have_truth ? &t1 : nullptr,
                                  have_truth ? &t2 : nullptr);
}

int cmd_roundtrip(const mig::RunConfig& cfg) {
    fs::create_directories(cfg.output.dir);
    const SimulatedData data = simulate_fields(cfg);
    write_field_maps(cfg, data);
    mig::write_manifest(cfg.output.dir / "manifest.cfg", cfg);

    // Read the maps back from disk so the round trip covers the I/O path.
    const ReconstructInputs in =
        load_maps(cfg, grid_path(cfg, "m1_bx"), grid_path(cfg, "m1_by"), grid_path(cfg, "m2_bx"),
                  grid_path(cfg, "m2_by"));
    return reconstruct_and_report(cfg, in, &data.s1.jy, &data.s2.jy);
}

int cmd_diagnose(const mig::RunConfig& cfg) {
    // Deliberately no geometry validation: diagnosing degenerate
    // placements is the point of this command.
    const mig::GridSpec& grid = cfg.grid;
    std::vector<double> ks;
    const double dk = 2.0 * std::numbers::pi / grid.extent_x;
    const double k_nyq = std::numbers::pi / grid.dx();
    for (double k = dk; k <= k_nyq * 1.0000001; k *= 1.5) {
        ks.push_back(k);
    }
    const mig::ConditioningReport report = mig::detect_rank_deficiency(cfg.geometry, ks);

    std::ostringstream out;
    out << "placement verdict: " << mig::to_string(report.verdict) << "\n";
    out << "DC note: the k=0 bin is always degenerate (matrix rows coincide); it is handled by "
           "the configured dc_policy, not by inversion\n";
    out << "k [rad/m]        condition        det [m^2]\n";
    for (const mig::ConditioningSample& s : report.samples) {
        out << "  " << s.k << "  " << s.condition << "  " << s.det << "\n";
    }
    std::cout << out.str();

    std::cout << "diagnose.verdict=" << mig::to_string(report.verdict) << "\n";
    if (report.verdict == mig::PlacementVerdict::Invertible) {
        try {
            const double k_cut = mig::auto_k_cut(mig::validate_geometry(cfg.geometry),
                                                 cfg.recon.max_gain);
            std::cout << "diagnose.auto_k_cut_rad_per_m=" << k_cut << "\n";
            std::cout << "diagnose.max_gain=" << cfg.recon.max_gain << "\n";
        } catch (const mig::Error&) {
            // geometry fails full validation; conditioning table above still stands
        }
    }
    for (const mig::ConditioningSample& s : report.samples) {
        std::cout << "diagnose.condition." << s.k << "=" << s.condition << "\n";
    }
    return report.verdict == mig::PlacementVerdict::Invertible ? kExitOk : kExitRankDeficient;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-layer magnetic current imaging toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    bool oracle = false;
    int subdiv = 3;
    std::string m1x, m1y, m2x, m2y, truth_s1, truth_s2;

    CLI::App* simulate = app.add_subcommand("simulate", "rasterize scenario and write field maps");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--out", out_override, "override output directory");
    simulate->add_flag("--oracle", oracle, "also run the direct quadrature oracle");
    simulate->add_option("--oracle-subdiv", subdiv, "quadrature subdivision for --oracle");

    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "invert measured field maps to layer currents");
    reconstruct->add_option("--config", config_path, "config file")->required();
    reconstruct->add_option("--out", out_override, "override output directory");
    reconstruct->add_option("--m1x", m1x, "Bx map at the lower plane")->required();
    reconstruct->add_option("--m1y", m1y, "By map at the lower plane")->required();
    reconstruct->add_option("--m2x", m2x, "Bx map at the upper plane")->required();
    reconstruct->add_option("--m2y", m2y, "By map at the upper plane")->required();
    reconstruct->add_option("--truth-s1", truth_s1, "ground-truth Jy grid for layer S1");
    reconstruct->add_option("--truth-s2", truth_s2, "ground-truth Jy grid for layer S2");

    CLI::App* roundtrip =
        app.add_subcommand("roundtrip", "simulate, reconstruct and report error metrics");
    roundtrip->add_option("--config", config_path, "config file")->required();
    roundtrip->add_option("--out", out_override, "override output directory");

    CLI::App* diagnose =
        app.add_subcommand("diagnose", "report continuation-matrix conditioning for a geometry");
    diagnose->add_option("--config", config_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        mig::RunConfig cfg = mig::load_config(config_path);
        if (!out_override.empty()) {
            cfg.output.dir = out_override;
        }
        if (simulate->parsed()) {
            return cmd_simulate(cfg, oracle, subdiv);
        }
        if (reconstruct->parsed()) {
            return cmd_reconstruct(
                cfg, m1x, m1y, m2x, m2y,
                truth_s1.empty() ? std::nullopt : std::optional<fs::path>(truth_s1),
                truth_s2.empty() ? std::nullopt : std::optional<fs::path>(truth_s2));
        }
        if (roundtrip->parsed()) {
            return cmd_roundtrip(cfg);
        }
        return cmd_diagnose(cfg);
    } catch (const mig::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
