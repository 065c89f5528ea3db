#include "texseg/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace texseg {

Image::Image(std::size_t width, std::size_t height, double fill)
  : width_(width), height_(height), data_(width * height, fill)
{
}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data)
  : width_(width), height_(height), data_(std::move(data))
{
  if (data_.size() != width_ * height_)
    throw std::invalid_argument("Image: data size does not match dimensions");
}

double Image::sum() const
{
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

double Image::mean() const
{
  return data_.empty() ? 0.0 : sum() / static_cast<double>(data_.size());
}

double Image::norm() const
{
  double acc = 0.0;
  for (double v : data_)
    acc += v * v;
  return std::sqrt(acc);
}

bool Image::all_finite() const
{
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_pipeline_image(const Image& img, const char* what)
{
  if (!img.is_square())
    throw std::invalid_argument(std::string(what) + ": image must be square");
  if (img.width() < 8)
    throw std::invalid_argument(std::string(what) + ": image side must be at least 8");
  if (!img.all_finite())
    throw std::invalid_argument(std::string(what) + ": image contains non-finite values");
}

Image circular_shift(const Image& img, long dx, long dy)
{
  const long w = static_cast<long>(img.width());
  const long h = static_cast<long>(img.height());
  Image out(img.width(), img.height());
  for (long y = 0; y < h; ++y) {
    const long sy = ((y + dy) % h + h) % h;
    for (long x = 0; x < w; ++x) {
      const long sx = ((x + dx) % w + w) % w;
      out(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy)) =
        img(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    }
  }
  return out;
}

namespace {

struct RawPgm {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
  std::vector<unsigned> samples;
};

void skip_ws_and_comments(std::istream& in)
{
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_number(std::istream& in, const std::filesystem::path& path)
{
  skip_ws_and_comments(in);
  long long value = -1;
  in >> value;
  if (!in || value < 0)
    throw std::runtime_error("malformed PGM header in " + path.string());
  return static_cast<std::size_t>(value);
}

RawPgm read_pgm(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P')
    throw std::runtime_error("not a PNM file: " + path.string());
  if (magic[1] == '3' || magic[1] == '6')
    throw std::runtime_error("color PPM is not supported (grayscale only): " + path.string());
  if (magic[1] != '2' && magic[1] != '5')
    throw std::runtime_error("unsupported PNM variant in " + path.string());
  const bool binary = magic[1] == '5';

  RawPgm raw;
  raw.width = read_header_number(in, path);
  raw.height = read_header_number(in, path);
  const std::size_t maxval = read_header_number(in, path);
  if (raw.width == 0 || raw.height == 0)
    throw std::runtime_error("zero-sized image: " + path.string());
  if (maxval == 0 || maxval > 65535)
    throw std::runtime_error("invalid PGM maxval in " + path.string());
  raw.maxval = static_cast<unsigned>(maxval);

  const std::size_t n = raw.width * raw.height;
  raw.samples.resize(n);
  if (binary) {
    in.get();  // single whitespace after maxval
    const std::size_t bytes_per_sample = raw.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(n * bytes_per_sample);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
      throw std::runtime_error("truncated PGM data in " + path.string());
    for (std::size_t i = 0; i < n; ++i) {
      raw.samples[i] = bytes_per_sample == 2
        ? (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1]
        : buf[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      raw.samples[i] = static_cast<unsigned>(read_header_number(in, path));
    }
  }
  for (unsigned s : raw.samples)
    if (s > raw.maxval)
      throw std::runtime_error("PGM sample exceeds maxval in " + path.string());
  return raw;
}

Image read_png(const std::filesystem::path& path)
{
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str()))
    throw std::runtime_error("cannot read PNG " + path.string() + ": " + png.message);
  if (png.format & PNG_FORMAT_FLAG_COLOR) {
    png_image_free(&png);
    throw std::runtime_error("color PNG is not supported (grayscale only): " + path.string());
  }
  if (png.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&png);
    throw std::runtime_error("16-bit PNG is not supported (8-bit only): " + path.string());
  }
  if (png.width == 0 || png.height == 0) {
    png_image_free(&png);
    throw std::runtime_error("zero-sized image: " + path.string());
  }
  png.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr))
    throw std::runtime_error("cannot decode PNG " + path.string() + ": " + png.message);

  Image img(png.width, png.height);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = static_cast<double>(buf[i]) / 255.0;
  return img;
}

std::string lower_extension(const std::filesystem::path& path)
{
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

std::vector<unsigned char> to_bytes(const Image& img)
{
  std::vector<unsigned char> bytes(img.size());
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double v = std::clamp(px[i], 0.0, 1.0);
    bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  return bytes;
}

}  // namespace

Image load_image(const std::filesystem::path& path)
{
  const std::string ext = lower_extension(path);
  if (ext == ".png")
    return read_png(path);

  RawPgm raw = read_pgm(path);
  if (raw.maxval != 255)
    throw std::runtime_error("expected 8-bit PGM (maxval 255) in " + path.string());
  Image img(raw.width, raw.height);
  auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); ++i)
    px[i] = static_cast<double>(raw.samples[i]) / 255.0;
  return img;
}

void save_pgm(const Image& img, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto bytes = to_bytes(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void save_png(const Image& img, const std::filesystem::path& path)
{
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = PNG_FORMAT_GRAY;
  const auto bytes = to_bytes(img);
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(), 0, nullptr))
    throw std::runtime_error("cannot write PNG " + path.string() + ": " + png.message);
}

void save_image(const Image& img, const std::filesystem::path& path)
{
  if (lower_extension(path) == ".png")
    save_png(img, path);
  else
    save_pgm(img, path);
}

DisplayMap display_map(const Image& img)
{
  if (img.empty())
    return {};
  const auto [lo, hi] = std::minmax_element(img.data().begin(), img.data().end());
  DisplayMap map;
  map.offset = *lo;
  map.scale = *hi > *lo ? 1.0 / (*hi - *lo) : 0.0;
  return map;
}

Image apply_display_map(const Image& img, const DisplayMap& map)
{
  Image out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = (src[i] - map.offset) * map.scale;
  return out;
}

Image quantize_8bit(const Image& img)
{
  Image out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = std::round(std::clamp(src[i], 0.0, 1.0) * 255.0) / 255.0;
  return out;
}

LabelImage load_label_pgm(const std::filesystem::path& path)
{
  RawPgm raw = read_pgm(path);
  LabelImage out;
  out.width = raw.width;
  out.height = raw.height;
  out.labels.assign(raw.samples.begin(), raw.samples.end());
  return out;
}

void save_label_pgm(const LabelImage& labels, const std::filesystem::path& path)
{
  if (labels.labels.size() != labels.width * labels.height)
    throw std::invalid_argument("save_label_pgm: label count does not match dimensions");
  for (int l : labels.labels) {
    if (l < 0 || l > 65535)
      throw std::invalid_argument("save_label_pgm: labels must lie in [0, 65535]");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  // Always 16-bit so label maps are uniform regardless of class count.
  out << "P5\n" << labels.width << ' ' << labels.height << "\n65535\n";
  std::vector<unsigned char> buf(labels.labels.size() * 2);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const auto v = static_cast<unsigned>(labels.labels[i]);
    buf[2 * i] = static_cast<unsigned char>(v >> 8);
    buf[2 * i + 1] = static_cast<unsigned char>(v & 0xff);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

}  // namespace texseg
