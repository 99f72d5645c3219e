#include "fpm/io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fpm {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in, const std::filesystem::path& path) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw DataError("truncated header in '" + path.string() + "'");
  return tok;
}

std::size_t header_size(std::istream& in, const std::filesystem::path& path, const char* what) {
  const std::string tok = header_token(in, path);
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size() || v <= 0) throw std::invalid_argument(tok);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw DataError("invalid " + std::string(what) + " '" + tok + "' in '" + path.string() + "'");
  }
}

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

}  // namespace

void write_pfm(const std::filesystem::path& path, const RealImage& img) {
  if (img.empty()) throw DataError("refusing to write an empty image to '" + path.string() + "'");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << "Pf\n" << img.cols() << ' ' << img.rows() << "\n-1.0\n";
  std::vector<float> line(img.cols());
  for (std::size_t r = img.rows(); r-- > 0;) {
    for (std::size_t c = 0; c < img.cols(); ++c) line[c] = static_cast<float>(img(r, c));
    if constexpr (std::endian::native == std::endian::big) {
      for (float& f : line) f = std::bit_cast<float>(byteswap32(std::bit_cast<std::uint32_t>(f)));
    }
    out.write(reinterpret_cast<const char*>(line.data()),
              static_cast<std::streamsize>(line.size() * sizeof(float)));
  }
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

RealImage read_pfm(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string magic = header_token(in, path);
  if (magic == "PF") throw DataError("'" + path.string() + "' is a colour PFM; expected grayscale Pf");
  if (magic != "Pf") throw DataError("'" + path.string() + "' is not a PFM file");
  const std::size_t cols = header_size(in, path, "width");
  const std::size_t rows = header_size(in, path, "height");
  const std::string scale_tok = header_token(in, path);
  double scale = 0.0;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception&) {
    throw DataError("invalid PFM scale '" + scale_tok + "' in '" + path.string() + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) {
    throw DataError("invalid PFM scale '" + scale_tok + "' in '" + path.string() + "'");
  }
  const bool file_little = scale < 0.0;
  const bool swap = file_little != (std::endian::native == std::endian::little);

  RealImage img(rows, cols);
  std::vector<float> line(cols);
  for (std::size_t r = rows; r-- > 0;) {
    in.read(reinterpret_cast<char*>(line.data()), static_cast<std::streamsize>(cols * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(cols * sizeof(float))) {
      throw DataError("'" + path.string() + "' is truncated");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      float f = line[c];
      if (swap) f = std::bit_cast<float>(byteswap32(std::bit_cast<std::uint32_t>(f)));
      if (!std::isfinite(f)) throw DataError("'" + path.string() + "' contains non-finite samples");
      img(r, c) = f;
    }
  }
  return img;
}

RealImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  if (header_token(in, path) != "P5") throw DataError("'" + path.string() + "' is not a binary PGM (P5)");
  const std::size_t cols = header_size(in, path, "width");
  const std::size_t rows = header_size(in, path, "height");
  const std::size_t maxval = header_size(in, path, "maxval");
  if (maxval > 65535) throw DataError("PGM maxval above 65535 in '" + path.string() + "'");
  const std::size_t bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(rows * cols * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw DataError("'" + path.string() + "' is truncated");
  }
  RealImage img(rows, cols);
  const double inv = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const unsigned v = bytes == 1 ? raw[i] : (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
    img[i] = static_cast<double>(v) * inv;
  }
  return img;
}

RealImage read_image(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
  if (magic[0] == 'P' && (magic[1] == 'f' || magic[1] == 'F')) return read_pfm(path);
  throw DataError("'" + path.string() + "' is neither a PFM nor a binary PGM image");
}

}  // namespace fpm
