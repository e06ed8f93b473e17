#include "camforge/media_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace camforge {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void format_fail(const char* what, const std::string& detail,
                              std::size_t offset) {
    throw std::runtime_error(std::string(what) + ": " + detail + " at byte " +
                             std::to_string(offset));
}

// Header token scanner for PPM/PFM: skips whitespace and '#' comments,
// tracks the byte offset for error reporting.
class HeaderScanner {
public:
    HeaderScanner(const std::string& bytes, const char* format)
        : bytes_(bytes), format_(format) {}

    std::string token() {
        skip_separators();
        if (pos_ >= bytes_.size()) format_fail(format_, "truncated header", pos_);
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            ++pos_;
        }
        return bytes_.substr(start, pos_ - start);
    }

    int int_token(const char* name) {
        const std::size_t at = pos_;
        const std::string t = token();
        try {
            std::size_t used = 0;
            const int v = std::stoi(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            format_fail(format_, std::string("invalid ") + name + " '" + t + "'", at);
        }
    }

    double double_token(const char* name) {
        const std::size_t at = pos_;
        const std::string t = token();
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            format_fail(format_, std::string("invalid ") + name + " '" + t + "'", at);
        }
    }

    // Consumes exactly one whitespace byte separating header and payload.
    std::size_t payload_offset() {
        if (pos_ >= bytes_.size() ||
            !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            format_fail(format_, "missing payload separator", pos_);
        }
        return ++pos_;
    }

private:
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& bytes_;
    const char* format_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return bytes;
}

void append_f32_le(std::string& out, float v) {
    static_assert(sizeof(float) == 4);
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    const char buf[4] = {
        static_cast<char>(u & 0xffu), static_cast<char>((u >> 8) & 0xffu),
        static_cast<char>((u >> 16) & 0xffu), static_cast<char>((u >> 24) & 0xffu)};
    out.append(buf, 4);
}

float read_f32_le(const char* p) {
    const auto* b = reinterpret_cast<const unsigned char*>(p);
    const std::uint32_t u = static_cast<std::uint32_t>(b[0]) |
                            (static_cast<std::uint32_t>(b[1]) << 8) |
                            (static_cast<std::uint32_t>(b[2]) << 16) |
                            (static_cast<std::uint32_t>(b[3]) << 24);
    float v;
    std::memcpy(&v, &u, 4);
    return v;
}

// Stacked-plane encoding used for maps with channels outside {1,3}: a
// single "Pf" image of height channels*H, plane-major top-down in memory.
std::string encode_stacked(const ProxyMap& map) {
    ProxyMap planes(map.width, map.height * map.channels, 1);
    for (int c = 0; c < map.channels; ++c) {
        for (int y = 0; y < map.height; ++y) {
            for (int x = 0; x < map.width; ++x) {
                planes.at(c * map.height + y, x, 0) = map.at(y, x, c);
            }
        }
    }
    return write_pfm(planes);
}

ProxyMap decode_stacked(const ProxyMap& planes, int width, int height, int channels) {
    if (planes.channels != 1 || planes.width != width ||
        planes.height != height * channels) {
        throw std::runtime_error(
            "pfm sidecar: payload dimensions do not match sidecar");
    }
    ProxyMap map(width, height, channels);
    for (int c = 0; c < channels; ++c) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                map.at(y, x, c) = planes.at(c * height + y, x, 0);
            }
        }
    }
    return map;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p += ".json";
    return p;
}

}  // namespace

Frame read_ppm(const std::string& bytes) {
    HeaderScanner scan(bytes, "ppm");
    const std::string magic = scan.token();
    if (magic != "P6") {
        format_fail("ppm", "bad magic '" + magic + "' (expected 'P6')", 0);
    }
    const int w = scan.int_token("width");
    const int h = scan.int_token("height");
    const int maxval = scan.int_token("maxval");
    if (w <= 0 || h <= 0) format_fail("ppm", "non-positive dimensions", 0);
    if (maxval != 255) format_fail("ppm", "unsupported maxval (expected 255)", 0);
    const std::size_t offset = scan.payload_offset();
    const std::size_t need = static_cast<std::size_t>(w) * h * 3;
    if (bytes.size() - offset < need) {
        format_fail("ppm", "truncated payload", bytes.size());
    }
    Frame frame(w, h);
    const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
    for (std::size_t i = 0; i < need; ++i) {
        frame.pixels[i] = static_cast<float>(p[i]) / 255.0f;
    }
    return frame;
}

std::string write_ppm(const Frame& frame) {
    std::string out = "P6\n" + std::to_string(frame.width) + " " +
                      std::to_string(frame.height) + "\n255\n";
    out.reserve(out.size() + frame.pixels.size());
    for (float v : frame.pixels) {
        const double scaled = std::clamp(static_cast<double>(v), 0.0, 1.0) * 255.0;
        // round half away from zero
        out.push_back(static_cast<char>(static_cast<unsigned char>(
            std::floor(scaled + 0.5))));
    }
    return out;
}

Frame load_ppm(const std::filesystem::path& path) {
    return read_ppm(read_file(path));
}

void save_ppm(const std::filesystem::path& path, const Frame& frame) {
    atomic_write(path, write_ppm(frame));
}

ProxyMap read_pfm(const std::string& bytes) {
    HeaderScanner scan(bytes, "pfm");
    const std::string magic = scan.token();
    int channels;
    if (magic == "Pf") {
        channels = 1;
    } else if (magic == "PF") {
        channels = 3;
    } else {
        format_fail("pfm", "bad magic '" + magic + "' (expected 'Pf' or 'PF')", 0);
    }
    const int w = scan.int_token("width");
    const int h = scan.int_token("height");
    const double scale = scan.double_token("scale");
    if (w <= 0 || h <= 0) format_fail("pfm", "non-positive dimensions", 0);
    if (scale >= 0.0) {
        format_fail("pfm", "big-endian scale not supported (expected negative)", 0);
    }
    const std::size_t offset = scan.payload_offset();
    const std::size_t count = static_cast<std::size_t>(w) * h * channels;
    if (bytes.size() - offset < count * 4) {
        format_fail("pfm", "truncated payload", bytes.size());
    }
    ProxyMap map(w, h, channels);
    const char* p = bytes.data() + offset;
    // PFM rows are bottom-up on disk; memory layout is top-down.
    for (int y = 0; y < h; ++y) {
        const int file_row = h - 1 - y;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) {
                const std::size_t fi =
                    (static_cast<std::size_t>(file_row) * w + x) * channels + c;
                const float v = read_f32_le(p + fi * 4);
                if (!std::isfinite(v)) {
                    format_fail("pfm", "non-finite value in payload", offset + fi * 4);
                }
                map.at(y, x, c) = v;
            }
        }
    }
    return map;
}

std::string write_pfm(const ProxyMap& map) {
    if (map.channels != 1 && map.channels != 3) {
        throw std::invalid_argument(
            "write_pfm: only 1- or 3-channel maps (use save_map for others)");
    }
    std::string out = (map.channels == 1 ? std::string("Pf\n") : std::string("PF\n")) +
                      std::to_string(map.width) + " " + std::to_string(map.height) +
                      "\n-1.0\n";
    out.reserve(out.size() + map.data.size() * 4);
    for (int y = map.height - 1; y >= 0; --y) {
        for (int x = 0; x < map.width; ++x) {
            for (int c = 0; c < map.channels; ++c) {
                append_f32_le(out, map.at(y, x, c));
            }
        }
    }
    return out;
}

ProxyMap load_map(const std::filesystem::path& path) {
    const std::filesystem::path side = sidecar_path(path);
    const ProxyMap raw = read_pfm(read_file(path));
    if (!std::filesystem::exists(side)) return raw;

    json j;
    try {
        j = json::parse(read_file(side));
    } catch (const json::exception& e) {
        throw std::runtime_error("pfm sidecar: invalid JSON: " + std::string(e.what()));
    }
    for (const char* key : {"channels", "width", "height"}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw std::runtime_error(std::string("pfm sidecar: missing field '") + key + "'");
        }
    }
    return decode_stacked(raw, j["width"].get<int>(), j["height"].get<int>(),
                          j["channels"].get<int>());
}

void save_map(const std::filesystem::path& path, const ProxyMap& map) {
    if (map.channels == 1 || map.channels == 3) {
        atomic_write(path, write_pfm(map));
        return;
    }
    atomic_write(path, encode_stacked(map));
    json j;
    j["channels"] = map.channels;
    j["width"] = map.width;
    j["height"] = map.height;
    atomic_write(sidecar_path(path), j.dump(2) + "\n");
}

EmbeddingSequence load_embeddings(const std::filesystem::path& path) {
    const std::filesystem::path side = sidecar_path(path);
    if (!std::filesystem::exists(side)) {
        throw std::runtime_error("embeddings: missing sidecar " + side.string());
    }
    json j;
    try {
        j = json::parse(read_file(side));
    } catch (const json::exception& e) {
        throw std::runtime_error("embeddings sidecar: invalid JSON: " +
                                 std::string(e.what()));
    }
    for (const char* key : {"frames", "dim"}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw std::runtime_error(
                std::string("embeddings sidecar: missing field '") + key + "'");
        }
    }
    const int frames = j["frames"].get<int>();
    const int dim = j["dim"].get<int>();
    if (frames < 1 || dim < 1) {
        throw std::runtime_error("embeddings sidecar: frames and dim must be >= 1");
    }
    const ProxyMap planes = read_pfm(read_file(path));
    if (planes.channels != 1 || planes.width != dim || planes.height != frames) {
        throw std::runtime_error(
            "embeddings: payload size does not match sidecar (expected " +
            std::to_string(frames) + "x" + std::to_string(dim) + ", got " +
            std::to_string(planes.height) + "x" + std::to_string(planes.width) + ")");
    }
    EmbeddingSequence seq(frames, dim);
    seq.data = planes.data;
    return seq;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingSequence& seq) {
    ProxyMap planes(seq.dim, seq.frames, 1);
    planes.data = seq.data;
    atomic_write(path, write_pfm(planes));
    json j;
    j["frames"] = seq.frames;
    j["dim"] = seq.dim;
    atomic_write(sidecar_path(path), j.dump(2) + "\n");
}

ExifRecord read_exif_sidecar(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error("exif sidecar: invalid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) {
        throw std::runtime_error("exif sidecar: top level must be a JSON object");
    }
    ExifRecord rec;
    for (const auto& [key, value] : j.items()) {
        std::string k = key;
        std::transform(k.begin(), k.end(), k.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        double num = 0.0;
        bool numeric = false;
        if (value.is_number()) {
            num = value.get<double>();
            numeric = true;
        } else if (value.is_string()) {
            try {
                std::size_t used = 0;
                num = std::stod(value.get<std::string>(), &used);
                numeric = used == value.get<std::string>().size();
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (k == "aperture" && numeric) {
            rec.aperture = num;
        } else if (k == "focallength" && numeric) {
            rec.focal_length = num;
        } else if (k == "iso" && numeric) {
            rec.iso = num;
        } else {
            rec.extra[key] = value.dump();
        }
    }
    return rec;
}

double exif_normalize(double value, FieldRange range) {
    if (!(range.min > 0.0) || !(range.max > range.min)) {
        throw std::invalid_argument("exif_normalize: range must satisfy 0 < min < max");
    }
    if (!(value > 0.0)) {
        throw std::invalid_argument("exif_normalize: value must be positive");
    }
    if (value < range.min || value > range.max) {
        throw std::out_of_range("exif_normalize: value outside [min, max]");
    }
    return std::log(value / range.min) / std::log(range.max / range.min);
}

FieldRange default_exif_range(const std::string& field) {
    std::string f = field;
    std::transform(f.begin(), f.end(), f.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (f == "aperture") return {1.4, 22.0};
    if (f == "focallength" || f == "focal_length") return {18.0, 200.0};
    if (f == "iso") return {100.0, 12800.0};
    throw std::invalid_argument("unknown EXIF field: " + field);
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

}  // namespace camforge
