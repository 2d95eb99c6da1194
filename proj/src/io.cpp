#include "shg/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "raw grid files are little-endian; big-endian hosts are not supported");

namespace shg::io {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json grid_json(const Grid2D& g) {
    return json{{"nx", g.nx}, {"ny", g.ny}, {"origin", {g.x0, g.y0}}, {"spacing", g.h}};
}

Grid2D grid_from_json(const json& j) {
    Grid2D g;
    g.nx = j.at("nx").get<int>();
    g.ny = j.at("ny").get<int>();
    g.x0 = j.at("origin").at(0).get<double>();
    g.y0 = j.at("origin").at(1).get<double>();
    g.h = j.at("spacing").get<double>();
    return g;
}

void write_bytes(const std::filesystem::path& path, const void* data, std::size_t bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(static_cast<const char*>(data), std::streamsize(bytes));
    if (!f) throw IoError("short write to " + path.string());
}

std::vector<char> read_bytes(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) throw IoError("cannot open " + path.string());
    const auto size = f.tellg();
    f.seekg(0);
    std::vector<char> buf(std::size_t(size));
    f.read(buf.data(), size);
    if (!f) throw IoError("short read from " + path.string());
    return buf;
}

json geometry_json(const AcquisitionGeometry& g) {
    json sensors = json::array();
    for (const auto& s : g.sensors) sensors.push_back({s.x, s.y});
    return json{{"sensors", sensors},
                {"angles", g.angles},
                {"cone_axis", {g.cone_axis.x, g.cone_axis.y}},
                {"wavelength", g.wavelength},
                {"aperture", g.aperture}};
}

AcquisitionGeometry geometry_from_json(const json& j) {
    AcquisitionGeometry g;
    for (const auto& s : j.at("sensors")) g.sensors.push_back({s.at(0), s.at(1)});
    g.angles = j.at("angles").get<std::vector<double>>();
    g.cone_axis = {j.at("cone_axis").at(0), j.at("cone_axis").at(1)};
    g.wavelength = j.at("wavelength").get<double>();
    g.aperture = j.at("aperture").get<double>();
    return g;
}

}  // namespace

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw IoError("short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_field_csv(const std::filesystem::path& path, const Grid2D& grid,
                     std::span<const double> values) {
    std::string out;
    out += "# nx " + std::to_string(grid.nx) + " ny " + std::to_string(grid.ny) + "\n";
    out += "# origin " + fmt_double(grid.x0) + " " + fmt_double(grid.y0) + " spacing " +
           fmt_double(grid.h) + "\n";
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i) out += ',';
            out += fmt_double(values[grid.idx(i, j)]);
        }
        out += '\n';
    }
    write_text(path, out);
}

void write_field_raw(const std::filesystem::path& path, const Grid2D& grid,
                     std::span<const double> values, const std::string& extra_json) {
    write_bytes(path, values.data(), values.size() * sizeof(double));
    json meta = grid_json(grid);
    meta["dtype"] = "float64-le";
    meta["layout"] = "row-major";
    meta["extra"] = json::parse(extra_json);
    write_text(path.string() + ".json", meta.dump(2) + "\n");
}

void write_field_raw(const std::filesystem::path& path, const Grid2D& grid,
                     std::span<const cplx> values, const std::string& extra_json) {
    write_bytes(path, values.data(), values.size() * sizeof(cplx));
    json meta = grid_json(grid);
    meta["dtype"] = "complex128-le";
    meta["layout"] = "row-major, interleaved re/im";
    meta["extra"] = json::parse(extra_json);
    write_text(path.string() + ".json", meta.dump(2) + "\n");
}

void write_pgm16(const std::filesystem::path& path, const Grid2D& grid,
                 std::span<const double> values) {
    double mx = 0.0;
    for (double v : values) mx = std::max(mx, v);
    std::string header = "P5\n" + std::to_string(grid.nx) + " " + std::to_string(grid.ny) +
                         "\n65535\n";
    std::vector<unsigned char> pix;
    pix.reserve(values.size() * 2);
    for (int j = grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < grid.nx; ++i) {
            double v = values[grid.idx(i, j)];
            if (v < 0.0) v = 0.0;
            const std::uint16_t u =
                mx > 0.0 ? std::uint16_t(std::lround(65535.0 * v / mx)) : 0;
            pix.push_back(static_cast<unsigned char>(u >> 8));  // PGM is big-endian
            pix.push_back(static_cast<unsigned char>(u & 0xff));
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << header;
    f.write(reinterpret_cast<const char*>(pix.data()), std::streamsize(pix.size()));
    if (!f) throw IoError("short write to " + path.string());
}

void write_array_data(const std::filesystem::path& dir, const ArrayData& data) {
    ensure_dir(dir);
    json meta;
    meta["geometry"] = geometry_json(data.geometry);
    meta["seed"] = data.seed;
    meta["n_sensors"] = data.d1.rows();
    meta["n_angles"] = data.d1.cols();
    meta["layout"] = "column-major complex128-le, sensors fastest";
    write_text(dir / "arraydata.json", meta.dump(2) + "\n");
    write_bytes(dir / "d1.bin", data.d1.data(), sizeof(cplx) * std::size_t(data.d1.size()));
    write_bytes(dir / "d2.bin", data.d2.data(), sizeof(cplx) * std::size_t(data.d2.size()));

    if (data.d1.size() <= 4096) {
        for (auto [name, m] : {std::pair{"d1.csv", &data.d1}, std::pair{"d2.csv", &data.d2}}) {
            std::string out = "# rows: sensors, cols: angles, cells: re+imi\n";
            for (long r = 0; r < m->rows(); ++r) {
                for (long c = 0; c < m->cols(); ++c) {
                    if (c) out += ',';
                    out += fmt_double((*m)(r, c).real()) + "+" + fmt_double((*m)(r, c).imag()) + "i";
                }
                out += '\n';
            }
            write_text(dir / name, out);
        }
    }
}

ArrayData read_array_data(const std::filesystem::path& dir) {
    const json meta = json::parse(read_text(dir / "arraydata.json"));
    ArrayData data;
    data.geometry = geometry_from_json(meta.at("geometry"));
    data.seed = meta.at("seed").get<std::uint64_t>();
    const long rows = meta.at("n_sensors").get<long>();
    const long cols = meta.at("n_angles").get<long>();
    data.d1.resize(rows, cols);
    data.d2.resize(rows, cols);
    for (auto [name, m] : {std::pair{"d1.bin", &data.d1}, std::pair{"d2.bin", &data.d2}}) {
        const auto bytes = read_bytes(dir / name);
        if (bytes.size() != sizeof(cplx) * std::size_t(rows * cols))
            throw IoError(std::string("unexpected size of ") + name);
        std::memcpy(m->data(), bytes.data(), bytes.size());
    }
    return data;
}

namespace {

json provenance_json(const ImageProvenance& p) {
    json j{{"method", p.method},
           {"harmonic", p.harmonic},
           {"raw_max", p.raw_max},
           {"wavelength", p.wavelength},
           {"seed", p.seed}};
    if (p.method == "cint") {
        j["X"] = p.cint_X;
        j["Theta"] = p.cint_Theta;
        j["cutoff"] = p.cint_cutoff;
        j["window"] = p.cint_window;
        j["imag_ratio"] = p.cint_imag_ratio;
    }
    return j;
}

}  // namespace

void write_image(const std::filesystem::path& prefix, const ImageGrid& image) {
    write_field_csv(prefix.string() + ".csv", image.grid, image.values);
    write_pgm16(prefix.string() + ".pgm", image.grid, image.values);
    json meta;
    meta["grid"] = grid_json(image.grid);
    meta["provenance"] = provenance_json(image.prov);
    write_text(prefix.string() + ".json", meta.dump(2) + "\n");
    write_bytes(prefix.string() + ".bin", image.values.data(),
                image.values.size() * sizeof(double));
}

ImageGrid read_image(const std::filesystem::path& prefix) {
    const json meta = json::parse(read_text(prefix.string() + ".json"));
    ImageGrid img;
    img.grid = grid_from_json(meta.at("grid"));
    const json& p = meta.at("provenance");
    img.prov.method = p.at("method").get<std::string>();
    img.prov.harmonic = p.at("harmonic").get<int>();
    img.prov.raw_max = p.at("raw_max").get<double>();
    img.prov.wavelength = p.at("wavelength").get<double>();
    img.prov.seed = p.at("seed").get<std::uint64_t>();
    const auto bytes = read_bytes(prefix.string() + ".bin");
    img.values.resize(img.grid.size());
    if (bytes.size() != img.values.size() * sizeof(double))
        throw IoError("unexpected size of " + prefix.string() + ".bin");
    std::memcpy(img.values.data(), bytes.data(), bytes.size());
    return img;
}

std::string theory_to_json(const TheoryPrediction& t) {
    json j;
    j["scattering_length_j1"] = t.ell_s1;
    j["scattering_length_j2"] = t.ell_s2;
    j["scattering_length_ratio"] = t.ell_s2 / t.ell_s1;
    j["decoherence_length_j1"] = t.X_d1;
    j["decoherence_length_j2"] = t.X_d2;
    j["decoherence_length_ratio"] = t.X_d2 / t.X_d1;
    j["decoherence_angle"] = t.Theta_d;
    j["propagation_distance"] = t.L;
    j["wavenumber"] = t.k;
    json diag = json::array();
    for (const auto& r : t.regime)
        diag.push_back({{"ratio", r.name}, {"value", r.value}, {"flagged", r.flagged}});
    j["regime_diagnostics"] = diag;
    return j.dump(2) + "\n";
}

void write_theory(const std::filesystem::path& path, const TheoryPrediction& t) {
    write_text(path, theory_to_json(t));
}

void write_stability_report(const std::filesystem::path& dir, const StabilityReport& rep) {
    ensure_dir(dir);
    json j;
    j["seeds"] = rep.seeds;
    j["grid"] = grid_json(rep.search_grid);
    json methods = json::array();
    for (const auto& m : rep.methods) {
        methods.push_back({{"method", m.method},
                           {"harmonic", m.harmonic},
                           {"snr_at_truth", m.snr_at_truth},
                           {"snr_bootstrap_err", m.snr_bootstrap_err},
                           {"mean_pairwise_correlation", m.mean_pairwise_correlation},
                           {"truth_values", m.truth_values}});
    }
    j["methods"] = methods;
    write_text(dir / "report.json", j.dump(2) + "\n");

    for (const auto& m : rep.methods) {
        const std::string tag = m.method + "_j" + std::to_string(m.harmonic);
        write_field_csv(dir / ("mean_" + tag + ".csv"), rep.search_grid, m.mean_image);
        write_field_csv(dir / ("std_" + tag + ".csv"), rep.search_grid, m.std_image);
        write_pgm16(dir / ("mean_" + tag + ".pgm"), rep.search_grid, m.mean_image);
    }
}

void write_moment_report(const std::filesystem::path& dir, const MomentReport& rep) {
    ensure_dir(dir);
    json j;
    j["var_nu_mc"] = rep.var_nu_mc;
    j["var_nu_theory"] = rep.var_nu_theory;
    j["ell_s1_fit"] = rep.ell_s1_fit;
    j["X_d1_fit"] = rep.X_d1_fit;
    j["X_d2_fit"] = rep.X_d2_fit;
    j["Theta_d_fit"] = rep.Theta_d_fit;
    j["theory"] = json::parse(theory_to_json(rep.theory));
    write_text(dir / "moments.json", j.dump(2) + "\n");

    auto curve = [&](const std::filesystem::path& p, const std::vector<double>& x,
                     std::initializer_list<const std::vector<double>*> ys) {
        std::string out;
        for (std::size_t i = 0; i < x.size(); ++i) {
            out += fmt_double(x[i]);
            for (const auto* y : ys) out += "," + fmt_double((*y)[i]);
            out += '\n';
        }
        write_text(p, out);
    };
    curve(dir / "green_decay.csv", rep.decay_r, {&rep.decay_mc});
    curve(dir / "sensor_coherence.csv", rep.offsets, {&rep.coh_j1, &rep.coh_j2});
    curve(dir / "direction_coherence.csv", rep.dir_offsets, {&rep.dir_coh});
}

}  // namespace shg::io
