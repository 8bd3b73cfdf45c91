#include "r1mp/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "r1mp/detail/rng.hpp"

namespace r1mp {

namespace {

// Partial Fisher-Yates: the first `count` slots of a fresh 0..n-1 index
// array, shuffled with hand-rolled uniform draws so seeded runs are
// reproducible across platforms.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count,
                                        std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < count && i + 1 < n; ++i) {
    const std::size_t j = i + detail::uniform_index(gen, n - i);
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

ObservedMatrix subset(const ObservedMatrix& obs,
                      const std::vector<std::size_t>& picks) {
  std::vector<Triplet> entries;
  entries.reserve(picks.size());
  for (std::size_t t : picks)
    entries.push_back({obs.rows()[t], obs.cols()[t], obs.values()[t]});
  return ObservedMatrix(obs.n_rows(), obs.n_cols(), std::move(entries));
}

}  // namespace

ObservedMatrix load_triplets(const TripletFile& file, int n_rows, int n_cols) {
  if (file.index_base != 0 && file.index_base != 1)
    throw std::invalid_argument("load_triplets: index_base must be 0 or 1");
  std::ifstream in(file.path);
  if (!in) throw data_error("cannot open triplet file: " + file.path);

  std::vector<Triplet> entries;
  std::string line;
  long line_no = 0;
  int max_row = -1, max_col = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ss(line);
    long row = 0, col = 0;
    double value = 0.0;
    // Extra trailing fields (e.g. timestamps) are ignored.
    if (!(ss >> row >> col >> value))
      throw data_error(file.path + ":" + std::to_string(line_no) +
                       ": expected 'row col value'");
    row -= file.index_base;
    col -= file.index_base;
    if (row < 0 || col < 0)
      throw data_error(file.path + ":" + std::to_string(line_no) +
                       ": index below base " + std::to_string(file.index_base));
    max_row = std::max(max_row, static_cast<int>(row));
    max_col = std::max(max_col, static_cast<int>(col));
    entries.push_back({static_cast<int>(row), static_cast<int>(col), value});
  }
  if (entries.empty()) throw data_error("no observations in " + file.path);
  if (n_rows == 0) n_rows = max_row + 1;
  if (n_cols == 0) n_cols = max_col + 1;
  return ObservedMatrix(n_rows, n_cols, std::move(entries));
}

std::pair<ObservedMatrix, ObservedMatrix> split_train_test(
    const ObservedMatrix& obs, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split_train_test: fraction must be in (0, 1)");
  const std::size_t n = obs.n_observed();
  const std::size_t n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw data_error("split_train_test: a side would be empty");

  const std::vector<std::size_t> idx = sample_indices(n, n_train, seed);
  std::vector<std::size_t> train(idx.begin(), idx.begin() + n_train);
  std::vector<std::size_t> test(idx.begin() + n_train, idx.end());
  return {subset(obs, train), subset(obs, test)};
}

ObservedMatrix sample_mask(const GrayImage& image, double keep_fraction,
                           std::uint64_t seed) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
    throw std::invalid_argument("sample_mask: keep_fraction must be in (0, 1]");
  const std::size_t n =
      static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
  if (n == 0 || image.pixels.size() != n)
    throw data_error("sample_mask: inconsistent image");
  const std::size_t count = static_cast<std::size_t>(
      std::llround(keep_fraction * static_cast<double>(n)));
  if (count == 0) throw data_error("sample_mask: empty sample");

  const std::vector<std::size_t> idx = sample_indices(n, count, seed);
  std::vector<Triplet> entries;
  entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t p = idx[i];
    const int row = static_cast<int>(p / image.width);
    const int col = static_cast<int>(p % image.width);
    entries.push_back({row, col, static_cast<double>(image.pixels[p])});
  }
  return ObservedMatrix(image.height, image.width, std::move(entries));
}

namespace {

int next_pgm_token(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments.
  while (true) {
    const int c = in.peek();
    if (c == EOF) throw data_error("truncated PGM header: " + path);
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw data_error("bad PGM header token: " + path);
  return value;
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open image: " + path);
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (!in || (magic != "P2" && magic != "P5"))
    throw data_error("unsupported PGM magic in " + path);

  GrayImage img;
  img.width = next_pgm_token(in, path);
  img.height = next_pgm_token(in, path);
  img.max_value = next_pgm_token(in, path);
  if (img.width < 1 || img.height < 1 || img.max_value < 1 ||
      img.max_value > 255)
    throw data_error("unsupported PGM geometry or depth in " + path);

  const std::size_t n =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.resize(n);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<long>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
      throw data_error("truncated PGM payload: " + path);
    for (std::size_t i = 0; i < n; ++i) img.pixels[i] = raw[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      int value = 0;
      if (!(in >> value)) throw data_error("truncated PGM payload: " + path);
      img.pixels[i] = value;
    }
  }
  for (int p : img.pixels)
    if (p < 0 || p > img.max_value)
      throw data_error("PGM pixel out of range in " + path);
  return img;
}

void save_pgm(const GrayImage& image, const std::string& path, bool binary) {
  const std::size_t n =
      static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
  if (image.pixels.size() != n) throw data_error("save_pgm: inconsistent image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write image: " + path);
  out << (binary ? "P5" : "P2") << "\n"
      << image.width << " " << image.height << "\n255\n";
  if (binary) {
    std::vector<unsigned char> raw(n);
    for (std::size_t i = 0; i < n; ++i)
      raw[i] = static_cast<unsigned char>(std::clamp(image.pixels[i], 0, 255));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<long>(n));
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out << std::clamp(image.pixels[i], 0, 255)
          << ((i + 1) % static_cast<std::size_t>(image.width) == 0 ? "\n" : " ");
  }
  if (!out) throw data_error("write failed: " + path);
}

int clamp_pixel(double value) {
  const long rounded = std::llround(value);  // rounds half away from zero
  return static_cast<int>(std::clamp(rounded, 0L, 255L));
}

GrayImage render_image(const FactorModel& model) {
  GrayImage img;
  img.height = model.n_rows();
  img.width = model.n_cols();
  img.pixels.assign(
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height),
      0);
  const auto& factors = model.factors();
  const auto weights = model.weights();
  for (int i = 0; i < img.height; ++i) {
    for (int j = 0; j < img.width; ++j) {
      double s = 0.0;
      for (std::size_t f = 0; f < factors.size(); ++f)
        s += weights[f] * factors[f].u[i] * factors[f].v[j];
      img.pixels[static_cast<std::size_t>(i) * img.width + j] = clamp_pixel(s);
    }
  }
  return img;
}

}  // namespace r1mp
