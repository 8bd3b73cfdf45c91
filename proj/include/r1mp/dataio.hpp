#ifndef R1MP_DATAIO_HPP
#define R1MP_DATAIO_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "r1mp/types.hpp"

namespace r1mp {

// Whitespace-separated "row col value" text file; extra trailing fields
// per line (e.g. timestamps) are ignored.
struct TripletFile {
  std::string path;
  int index_base = 1;  // 0 or 1
};

// Parses the file into an ObservedMatrix. Indices are rebased to 0.
// Pass n_rows/n_cols = 0 to infer dimensions as max index + 1.
// Throws data_error on malformed lines (with line number), duplicate
// cells, or indices below the declared base / outside declared dims.
ObservedMatrix load_triplets(const TripletFile& file, int n_rows = 0,
                             int n_cols = 0);

// Disjoint partition by seeded uniform shuffle; |train| =
// round(fraction * n_observed). Both sides keep the full matrix dims and
// row-major entry order. Throws data_error if a side would be empty.
std::pair<ObservedMatrix, ObservedMatrix> split_train_test(
    const ObservedMatrix& obs, double fraction, std::uint64_t seed);

struct GrayImage {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<int> pixels;  // row-major, 0..max_value
};

// Uniform sample without replacement of round(keep_fraction*width*height)
// pixels as observations (rows = image rows).
ObservedMatrix sample_mask(const GrayImage& image, double keep_fraction,
                           std::uint64_t seed);

// P2 (ASCII) and P5 (binary) PGM, max value <= 255.
GrayImage load_pgm(const std::string& path);
// Canonical output: "P5\n<w> <h>\n255\n" + payload (binary=false -> P2).
void save_pgm(const GrayImage& image, const std::string& path,
              bool binary = true);

// Write-back rule for reconstructed intensities: round half away from
// zero, then clamp to [0, 255].
int clamp_pixel(double value);

// Dense reconstruction of the model as an image (height = n_rows).
GrayImage render_image(const FactorModel& model);

}  // namespace r1mp

#endif  // R1MP_DATAIO_HPP
