#include "uscg/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "file readers/writers assume a little-endian host");

namespace uscg {

namespace {

constexpr char kFieldMagic[8] = {'U', 'S', 'C', 'G', 'F', 'L', 'D', '\0'};
constexpr char kProjMagic[8] = {'U', 'S', 'C', 'G', 'P', 'R', 'J', '\0'};
constexpr std::uint32_t kVersion = 1;

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

class ByteWriter {
public:
    void raw(const void* data, std::size_t size) {
        bytes_.append(static_cast<const char*>(data), size);
    }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void f32(float v) { raw(&v, sizeof v); }
    std::string take() { return std::move(bytes_); }

private:
    std::string bytes_;
};

class ByteReader {
public:
    ByteReader(const std::string& bytes, std::string name)
        : bytes_(bytes), name_(std::move(name)) {}

    void raw(void* data, std::size_t size) {
        if (pos_ + size > bytes_.size())
            throw IoError(name_ + " truncated at byte " + std::to_string(pos_) + ": need "
                          + std::to_string(size) + " more bytes");
        std::memcpy(data, bytes_.data() + pos_, size);
        pos_ += size;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, sizeof v);
        return v;
    }
    float f32() {
        float v;
        raw(&v, sizeof v);
        return v;
    }
    std::size_t pos() const { return pos_; }
    const std::string& name() const { return name_; }

private:
    const std::string& bytes_;
    std::string name_;
    std::size_t pos_ = 0;
};

void check_header(ByteReader& in, const char (&magic)[8]) {
    char got[8];
    in.raw(got, 8);
    if (std::memcmp(got, magic, 8) != 0)
        throw IoError(in.name() + ": magic mismatch at byte 0");
    const std::uint32_t version = in.u32();
    if (version != kVersion)
        throw IoError(in.name() + ": unsupported version " + std::to_string(version)
                      + " at byte 8");
    in.u32();  // reserved
}

GridMode mode_from_string(const std::string& s) {
    if (s == "2d")
        return GridMode::Slice2D;
    if (s == "3d")
        return GridMode::Volume3D;
    throw IoError("unknown grid mode '" + s + "'");
}

std::string mode_to_string(GridMode mode) {
    return mode == GridMode::Volume3D ? "3d" : "2d";
}

}  // namespace

void Sidecar::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void Sidecar::set(const std::string& key, double value) {
    std::ostringstream s;
    s.precision(17);
    s << value;
    set(key, s.str());
}

void Sidecar::set(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }

const std::string* Sidecar::find(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key)
            return &v;
    return nullptr;
}

std::string Sidecar::get(const std::string& key) const {
    if (const std::string* v = find(key))
        return *v;
    throw IoError("sidecar is missing key '" + key + "'");
}

double Sidecar::get_double(const std::string& key) const { return std::stod(get(key)); }

std::int64_t Sidecar::get_int(const std::string& key) const { return std::stoll(get(key)); }

std::filesystem::path Sidecar::path_for(const std::filesystem::path& artifact) {
    return artifact.string() + ".meta";
}

void Sidecar::save(const std::filesystem::path& artifact_path) const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_)
        out << k << " = " << v << "\n";
    atomic_write(path_for(artifact_path), out.str());
}

Sidecar Sidecar::load(const std::filesystem::path& artifact_path) {
    const std::filesystem::path path = path_for(artifact_path);
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open sidecar " + path.string());
    Sidecar side;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("malformed sidecar line in " + path.string() + ": " + line);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ')
            key.pop_back();
        while (!value.empty() && value.front() == ' ')
            value.erase(value.begin());
        side.set(key, value);
    }
    return side;
}

void write_field(const std::filesystem::path& path, const Field& field, Sidecar sidecar) {
    field.spec.validate();
    if (field.values.size() != field.spec.cell_count())
        throw std::invalid_argument("field length does not match its grid");

    ByteWriter out;
    out.raw(kFieldMagic, 8);
    out.u32(kVersion);
    out.u32(0);
    out.u64(static_cast<std::uint64_t>(field.spec.slices()));
    out.u64(static_cast<std::uint64_t>(field.spec.n));
    for (double v : field.values)
        out.f32(static_cast<float>(v));
    atomic_write(path, out.take());

    sidecar.set("type", "field");
    sidecar.set("mode", mode_to_string(field.spec.mode));
    sidecar.set("n", static_cast<std::int64_t>(field.spec.n));
    sidecar.set("ring_spacing", field.spec.ring_spacing);
    sidecar.set("slice_height", field.spec.slice_height);
    sidecar.save(path);
}

std::pair<Field, Sidecar> read_field(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    ByteReader in(bytes, path.string());
    check_header(in, kFieldMagic);
    const std::uint64_t slices = in.u64();
    const std::uint64_t n = in.u64();

    Sidecar side = Sidecar::load(path);
    Field field;
    field.spec.n = static_cast<int>(n);
    field.spec.mode = mode_from_string(side.get("mode"));
    field.spec.ring_spacing = side.get_double("ring_spacing");
    field.spec.slice_height = side.get_double("slice_height");
    field.spec.validate();
    if (slices != static_cast<std::uint64_t>(field.spec.slices()))
        throw IoError(path.string() + ": slice count " + std::to_string(slices)
                      + " does not match mode " + side.get("mode"));

    const std::size_t count = static_cast<std::size_t>(slices) * n * n;
    field.values.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        field.values[i] = in.f32();
    return {std::move(field), std::move(side)};
}

void write_projections(const std::filesystem::path& path, const ProjectionSet& proj, Sidecar sidecar) {
    proj.validate();
    ByteWriter out;
    out.raw(kProjMagic, 8);
    out.u32(kVersion);
    out.u32(0);
    out.u64(static_cast<std::uint64_t>(proj.geometry.views));
    out.u64(static_cast<std::uint64_t>(proj.geometry.det_u));
    out.u64(static_cast<std::uint64_t>(proj.geometry.det_v));
    for (double v : proj.data)
        out.f32(static_cast<float>(v));
    atomic_write(path, out.take());

    const ScanGeometry& g = proj.geometry;
    sidecar.set("type", "projections");
    sidecar.set("views", static_cast<std::int64_t>(g.views));
    sidecar.set("det_u", static_cast<std::int64_t>(g.det_u));
    sidecar.set("det_v", static_cast<std::int64_t>(g.det_v));
    sidecar.set("spacing_u", g.spacing_u);
    sidecar.set("spacing_v", g.spacing_v);
    sidecar.set("source_x", g.source.x);
    sidecar.set("source_y", g.source.y);
    sidecar.set("source_z", g.source.z);
    sidecar.set("center_x", g.detector_center.x);
    sidecar.set("center_y", g.detector_center.y);
    sidecar.set("center_z", g.detector_center.z);
    sidecar.save(path);
}

std::pair<ProjectionSet, Sidecar> read_projections(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    ByteReader in(bytes, path.string());
    check_header(in, kProjMagic);
    const std::uint64_t views = in.u64();
    const std::uint64_t det_u = in.u64();
    const std::uint64_t det_v = in.u64();

    Sidecar side = Sidecar::load(path);
    ProjectionSet proj;
    proj.geometry.views = static_cast<int>(views);
    proj.geometry.det_u = static_cast<int>(det_u);
    proj.geometry.det_v = static_cast<int>(det_v);
    proj.geometry.spacing_u = side.get_double("spacing_u");
    proj.geometry.spacing_v = side.get_double("spacing_v");
    proj.geometry.source = {side.get_double("source_x"), side.get_double("source_y"),
                            side.get_double("source_z")};
    proj.geometry.detector_center = {side.get_double("center_x"), side.get_double("center_y"),
                                     side.get_double("center_z")};

    const std::size_t count = static_cast<std::size_t>(views) * det_u * det_v;
    proj.data.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        proj.data[i] = in.f32();
    proj.validate();
    return {std::move(proj), std::move(side)};
}

void write_pgm16(const std::filesystem::path& path, const Image& image, double window_min,
                 double window_max, Sidecar sidecar) {
    if (image.rows < 1 || image.cols < 1)
        throw std::invalid_argument("empty image");
    if (!(window_max > window_min))
        throw std::invalid_argument("window must have positive width");

    std::string bytes = "P5\n" + std::to_string(image.cols) + " " + std::to_string(image.rows)
                        + "\n65535\n";
    bytes.reserve(bytes.size() + std::size_t(image.rows) * image.cols * 2);
    const double scale = 65535.0 / (window_max - window_min);
    for (int row = image.rows - 1; row >= 0; --row) {  // top row first
        for (int col = 0; col < image.cols; ++col) {
            double q = (image.at(row, col) - window_min) * scale;
            q = q < 0 ? 0 : (q > 65535 ? 65535 : q);
            const std::uint16_t u = static_cast<std::uint16_t>(q + 0.5);
            bytes.push_back(static_cast<char>(u >> 8));  // most significant byte first
            bytes.push_back(static_cast<char>(u & 0xff));
        }
    }
    atomic_write(path, bytes);

    sidecar.set("type", "raster");
    sidecar.set("rows", static_cast<std::int64_t>(image.rows));
    sidecar.set("cols", static_cast<std::int64_t>(image.cols));
    sidecar.set("window_min", window_min);
    sidecar.set("window_max", window_max);
    sidecar.save(path);
}

std::pair<Image, Sidecar> read_pgm16(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    std::istringstream head(bytes);
    std::string magic;
    int cols = 0, rows = 0, maxval = 0;
    head >> magic >> cols >> rows >> maxval;
    if (magic != "P5")
        throw IoError(path.string() + ": not a binary PGM (magic mismatch at byte 0)");
    if (maxval != 65535)
        throw IoError(path.string() + ": expected 16-bit maxval 65535, got "
                      + std::to_string(maxval));
    head.get();  // single whitespace after maxval
    const std::size_t start = static_cast<std::size_t>(head.tellg());
    const std::size_t need = std::size_t(rows) * cols * 2;
    if (bytes.size() < start + need)
        throw IoError(path.string() + " truncated at byte " + std::to_string(bytes.size())
                      + ": expected " + std::to_string(start + need) + " bytes");

    Image image{rows, cols, std::vector<double>(std::size_t(rows) * cols)};
    std::size_t pos = start;
    for (int row = rows - 1; row >= 0; --row) {
        for (int col = 0; col < cols; ++col) {
            const std::uint16_t hi = static_cast<std::uint8_t>(bytes[pos]);
            const std::uint16_t lo = static_cast<std::uint8_t>(bytes[pos + 1]);
            image.at(row, col) = static_cast<double>((hi << 8) | lo);
            pos += 2;
        }
    }

    Sidecar side;
    bool have_side = std::filesystem::exists(Sidecar::path_for(path));
    if (have_side) {
        side = Sidecar::load(path);
        if (side.find("window_min") && side.find("window_max")) {
            const double lo = side.get_double("window_min");
            const double hi = side.get_double("window_max");
            for (double& v : image.v)
                v = lo + v / 65535.0 * (hi - lo);
        }
    }
    return {std::move(image), std::move(side)};
}

std::vector<double> read_raw_f32(const std::filesystem::path& path, std::size_t expected) {
    const std::string bytes = read_all(path);
    if (bytes.size() != expected * 4)
        throw IoError(path.string() + ": expected " + std::to_string(expected * 4)
                      + " bytes of float32 data, got " + std::to_string(bytes.size()));
    std::vector<double> out(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        float f;
        std::memcpy(&f, bytes.data() + i * 4, 4);
        out[i] = f;
    }
    return out;
}

void write_phantom_table(const std::filesystem::path& path, GridMode mode,
                         const std::vector<EllipsoidParam>& table) {
    std::ostringstream out;
    out << "uscg-phantom-table v1\n";
    out << "mode = " << mode_to_string(mode) << "\n";
    out << "# intensity ax ay az cx cy cz angle_deg\n";
    out.precision(17);
    for (const EllipsoidParam& e : table)
        out << e.intensity << " " << e.ax << " " << e.ay << " " << e.az << " " << e.cx << " "
            << e.cy << " " << e.cz << " " << e.angle_deg << "\n";
    atomic_write(path, out.str());
}

std::pair<GridMode, std::vector<EllipsoidParam>> read_phantom_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "uscg-phantom-table v1")
        throw IoError(path.string() + ": missing 'uscg-phantom-table v1' header line");

    GridMode mode = GridMode::Slice2D;
    bool have_mode = false;
    std::vector<EllipsoidParam> table;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (line.rfind("mode", 0) == 0) {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw IoError(path.string() + ": malformed mode line");
            std::string value = line.substr(eq + 1);
            std::erase(value, ' ');
            mode = mode_from_string(value);
            have_mode = true;
            continue;
        }
        std::istringstream row(line);
        EllipsoidParam e;
        if (!(row >> e.intensity >> e.ax >> e.ay >> e.az >> e.cx >> e.cy >> e.cz >> e.angle_deg))
            throw IoError(path.string() + ": malformed table row: " + line);
        table.push_back(e);
    }
    if (!have_mode)
        throw IoError(path.string() + ": missing mode line");
    return {mode, std::move(table)};
}

void write_report(const std::filesystem::path& path, const Sidecar& report) {
    std::ostringstream out;
    for (const auto& [k, v] : report.entries())
        out << k << " = " << v << "\n";
    atomic_write(path, out.str());
}

}  // namespace uscg
