#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "uscg/cli.hpp"
#include "uscg/io.hpp"

using namespace uscg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("uscg_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"uscg"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    return cli(static_cast<int>(argv.size()), argv.data());
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("field files round trip bit-exactly") {
    TempDir dir;
    const GridSpec spec = GridSpec::cube_3d(8);
    Field field = Field::constant(spec, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> value(0, 2);
    for (double& v : field.values)
        v = value(rng);

    Sidecar side;
    side.set("provenance", "test");
    const std::string path = dir.file("a.fld");
    write_field(path, field, side);

    auto [back, back_side] = read_field(path);
    CHECK(back.spec.n == 8);
    CHECK(back.spec.mode == GridMode::Volume3D);
    CHECK(back_side.get("provenance") == "test");

    // write what was read: the float32 payload must be identical
    const std::string path2 = dir.file("b.fld");
    write_field(path2, back, back_side);
    CHECK(read_bytes(path) == read_bytes(path2));
    CHECK(!fs::exists(path + ".tmp"));
}

TEST_CASE("projection files round trip bit-exactly") {
    TempDir dir;
    ProjectionSet proj;
    proj.geometry.source = {-8, 0, 0};
    proj.geometry.detector_center = {8, 0, 0};
    proj.geometry.det_u = 5;
    proj.geometry.det_v = 3;
    proj.geometry.spacing_u = 0.1;
    proj.geometry.spacing_v = 0.2;
    proj.geometry.views = 4;
    proj.data.assign(60, 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> value(0, 9);
    for (double& v : proj.data)
        v = value(rng);

    const std::string path = dir.file("p.prj");
    write_projections(path, proj, {});
    auto [back, side] = read_projections(path);
    CHECK(back.geometry.det_u == 5);
    CHECK(back.geometry.det_v == 3);
    CHECK(back.geometry.views == 4);
    CHECK(back.geometry.source.x == -8);

    const std::string path2 = dir.file("q.prj");
    write_projections(path2, back, side);
    CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("malformed binary inputs fail with byte offsets") {
    TempDir dir;
    const GridSpec spec = GridSpec::square_2d(4);
    write_field(dir.file("a.fld"), Field::constant(spec, 1.0), {});

    SUBCASE("magic mismatch") {
        std::string bytes = read_bytes(dir.file("a.fld"));
        bytes[0] = 'X';
        std::ofstream(dir.file("bad.fld"), std::ios::binary) << bytes;
        fs::copy_file(dir.file("a.fld.meta"), dir.file("bad.fld.meta"));
        CHECK_THROWS_WITH_AS(read_field(dir.file("bad.fld")),
                             doctest::Contains("magic mismatch at byte 0"), IoError);
    }
    SUBCASE("truncated payload") {
        std::string bytes = read_bytes(dir.file("a.fld"));
        bytes.resize(bytes.size() - 10);
        std::ofstream(dir.file("short.fld"), std::ios::binary) << bytes;
        fs::copy_file(dir.file("a.fld.meta"), dir.file("short.fld.meta"));
        CHECK_THROWS_WITH_AS(read_field(dir.file("short.fld")),
                             doctest::Contains("truncated at byte"), IoError);
    }
    SUBCASE("missing sidecar") {
        fs::remove(dir.file("a.fld.meta"));
        CHECK_THROWS_AS(read_field(dir.file("a.fld")), IoError);
    }
}

TEST_CASE("raster export and import") {
    TempDir dir;
    Image img{5, 7, std::vector<double>(35)};
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 7; ++c)
            img.at(r, c) = r * 0.5 + c * 0.125;

    const std::string path = dir.file("img.pgm");
    write_pgm16(path, img, 0.0, 4.0, {});

    auto [back, side] = read_pgm16(path);
    CHECK(back.rows == 5);
    CHECK(back.cols == 7);
    CHECK(side.get_double("window_max") == 4.0);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 7; ++c)
            CHECK(back.at(r, c) == doctest::Approx(img.at(r, c)).epsilon(1e-4));

    // header sanity: binary PGM, 16-bit, big-endian samples after the header
    const std::string bytes = read_bytes(path);
    CHECK(bytes.rfind("P5\n7 5\n65535\n", 0) == 0);
}

TEST_CASE("phantom table files round trip") {
    TempDir dir;
    const std::string path = dir.file("t.params");
    write_phantom_table(path, GridMode::Volume3D, shepp_logan_3d_table());
    auto [mode, table] = read_phantom_table(path);
    CHECK(mode == GridMode::Volume3D);
    REQUIRE(table.size() == shepp_logan_3d_table().size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(table[i].intensity == shepp_logan_3d_table()[i].intensity);
        CHECK(table[i].az == shepp_logan_3d_table()[i].az);
        CHECK(table[i].cz == shepp_logan_3d_table()[i].cz);
    }
}

TEST_CASE("cli pipeline: phantom, project, reconstruct, map, metrics") {
    TempDir dir;

    // strictly positive random volume so the solve converges deeply
    const int n = 16;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<float> value(0.2f, 3.0f);
    {
        std::ofstream raw(dir.file("raw.bin"), std::ios::binary);
        for (int i = 0; i < n * n; ++i) {
            const float f = value(rng);
            raw.write(reinterpret_cast<const char*>(&f), 4);
        }
    }

    CHECK(run_cli({"phantom", "--kind", "raw-volume", "--raw", dir.file("raw.bin"),
                   "--raw-mode", "2d", "--n", "16", "--out", dir.file("truth.fld")})
          == 0);
    CHECK(fs::exists(dir.file("truth.fld")));
    CHECK(fs::exists(dir.file("truth.cg.pgm")));

    CHECK(run_cli({"project", "--field", dir.file("truth.fld"), "--views", "20", "--det-u", "21",
                   "--spacing-u", "0.2", "--source", "-8,0", "--center", "8,0", "--out",
                   dir.file("data.prj")})
          == 0);

    CHECK(run_cli({"reconstruct", "--proj", dir.file("data.prj"), "--n", "16", "--beta", "1.0",
                   "--tol", "1e-9", "--sweeps", "20000", "--out", dir.file("recon.fld"),
                   "--report", dir.file("recon.report.txt")})
          == 0);
    CHECK(fs::exists(dir.file("recon.report.txt")));

    // reconstruct echoes its configuration
    const Sidecar recon_side = Sidecar::load(dir.file("recon.fld"));
    CHECK(recon_side.get("config.beta") == "1");
    CHECK(recon_side.get("converged") == "true");

    // map + metrics identity: the mapped phantom equals its own companion
    CHECK(run_cli({"map", "--field", dir.file("truth.fld"), "--out", dir.file("mapped.pgm")}) == 0);
    CHECK(read_bytes(dir.file("mapped.pgm")) == read_bytes(dir.file("truth.cg.pgm")));
    CHECK(run_cli({"metrics", "--ref", dir.file("truth.cg.pgm"), "--test", dir.file("mapped.pgm"),
                   "--out", dir.file("id.txt")})
          == 0);
    // the report is key = value text; parse it directly
    std::ifstream rep(dir.file("id.txt"));
    std::string line;
    double ssim_value = -1, rmse_value = -1;
    while (std::getline(rep, line)) {
        if (line.rfind("ssim = ", 0) == 0)
            ssim_value = std::stod(line.substr(7));
        if (line.rfind("rmse = ", 0) == 0)
            rmse_value = std::stod(line.substr(7));
    }
    CHECK(ssim_value == 1.0);
    CHECK(rmse_value == 0.0);

    // closure: re-project the reconstruction and compare measurements
    CHECK(run_cli({"project", "--field", dir.file("recon.fld"), "--views", "20", "--det-u", "21",
                   "--spacing-u", "0.2", "--source", "-8,0", "--center", "8,0", "--out",
                   dir.file("redata.prj")})
          == 0);
    auto [proj, proj_side] = read_projections(dir.file("data.prj"));
    auto [re, re_side] = read_projections(dir.file("redata.prj"));
    for (std::size_t i = 0; i < proj.data.size(); ++i) {
        if (proj.data[i] == 0)
            continue;
        CHECK(std::abs(re.data[i] / proj.data[i] - 1.0) <= 1e-5);
    }
}

TEST_CASE("cli error paths") {
    TempDir dir;
    CHECK(run_cli({"no-such-command"}) == 1);
    CHECK(run_cli({"phantom", "--n", "16"}) == 1);  // missing --out
    CHECK(run_cli({"reconstruct", "--proj", dir.file("absent.prj"), "--n", "8", "--out",
                   dir.file("x.fld")})
          == 1);
    CHECK(run_cli({"phantom", "--kind", "nonsense", "--n", "16", "--out", dir.file("x.fld")}) == 1);
    CHECK(run_cli({"phantom", "--kind", "shepp-logan-2d", "--n", "15", "--out", dir.file("x.fld")})
          == 1);  // odd size
}
