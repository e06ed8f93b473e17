#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "camforge/frame.hpp"

namespace camforge {

// ---- PPM (P6, maxval 255) --------------------------------------------

/// Decodes a binary P6 PPM; 8-bit channels map to [0,1] via v/255.
/// Malformed input raises std::runtime_error naming the byte offset.
Frame read_ppm(const std::string& bytes);

/// Encodes a frame as binary P6, rounding half away from zero. Writing
/// then reading an 8-bit-quantized frame is bit-identical.
std::string write_ppm(const Frame& frame);

Frame load_ppm(const std::filesystem::path& path);
void save_ppm(const std::filesystem::path& path, const Frame& frame);

// ---- PFM (scale -1.0, little-endian, bottom-up) ----------------------

/// Decodes "Pf" (1 channel) or "PF" (3 channels). Rows are converted to
/// top-down in memory. Non-finite payloads are a data error.
ProxyMap read_pfm(const std::string& bytes);

/// Encodes a 1- or 3-channel map; other channel counts must go through
/// save_map (stacked planes + sidecar).
std::string write_pfm(const ProxyMap& map);

/// Path-level map IO. Maps with channels outside {1,3} are stored as
/// channel-stacked "Pf" planes plus a JSON sidecar at "<path>.json" with
/// {"channels": n, "width": w, "height": h}.
ProxyMap load_map(const std::filesystem::path& path);
void save_map(const std::filesystem::path& path, const ProxyMap& map);

// ---- Embedding sequences ---------------------------------------------

/// T x d float rows as a stacked-plane PFM plus a JSON sidecar
/// {"frames": T, "dim": d}. Sidecar/payload size mismatch is a format
/// error.
EmbeddingSequence load_embeddings(const std::filesystem::path& path);
void save_embeddings(const std::filesystem::path& path, const EmbeddingSequence& seq);

// ---- EXIF sidecars -----------------------------------------------------

/// Sparse absolute camera metadata; missing numeric fields stay 0.
/// Unrecognized fields are preserved as opaque JSON text.
struct ExifRecord {
    double aperture = 0.0;
    double focal_length = 0.0;
    double iso = 0.0;
    std::map<std::string, std::string> extra;
};

/// Parses a UTF-8 JSON object; "Aperture", "FocalLength" and "ISO" are
/// matched case-insensitively, numeric strings are cast.
ExifRecord read_exif_sidecar(const std::string& text);

struct FieldRange {
    double min = 0.0;
    double max = 0.0;
};

/// Log-space normalization log(m/min)/log(max/min): exact 0 at min, exact
/// 1 at max, equal steps per f-stop. Values outside the range raise
/// std::out_of_range; nonpositive values std::invalid_argument.
double exif_normalize(double value, FieldRange range);

/// Default field ranges (configurable by callers): aperture [1.4,22],
/// focallength [18,200] mm, iso [100,12800].
FieldRange default_exif_range(const std::string& field);

// ---- Filesystem helpers ------------------------------------------------

/// Writes bytes to a temp file in the target directory, then renames into
/// place, so failed runs leave no partial outputs.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

}  // namespace camforge
